export { MODELS, UnknownModelError, convertCorpus, parseCorpus, recommendedFragmentConfig } from "./convert";
export { sentenceBlock } from "./conllu";
export { parseSentence } from "./parser";
export { tagTokens } from "./tagger";
export { isQuestionText, segmentSentences, tokenize } from "./tokenize";
export * from "./types";
