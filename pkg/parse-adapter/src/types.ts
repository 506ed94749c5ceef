export type RawSpeaker = {
  speaker_id: string;
  party?: string | null;
  first_office_date?: string | null;
  is_minister?: boolean | null;
  is_shadow?: boolean | null;
};

export type RawRecord = {
  pair_id: string;
  date: string;
  asker: RawSpeaker;
  answerer: RawSpeaker;
  department?: string | null;
  question_text: string;
  answer_text: string;
};

export type TaggedWord = {
  surface: string;
  lemma: string;
  upos: string;
  xpos: string;
};

// 1-based index; head 0 marks the sentence root.
export type DepToken = TaggedWord & {
  index: number;
  head: number;
  deprel: string;
};

export type ParsedSentence = {
  sentId: string;
  text: string;
  tokens: DepToken[];
  isQuestion: boolean;
};

export type SkippedRecord = {
  where: string;
  reason: string;
};

export type TagScheme = {
  pos: string;
  deps: string;
  labels: string[];
};

export type FragmentConfigHint = {
  np_dep_labels: string[];
  pronoun_pos_tags: string[];
  wdt_pos_tags: string[];
  recursion_dep_labels: string[];
  punct_dep_labels: string[];
  punct_pos_tags: string[];
  use_lemma: boolean;
};

export type ConversionReport = {
  model: string;
  model_version: number;
  tag_scheme: TagScheme;
  records_read: number;
  converted: number;
  skipped: SkippedRecord[];
  sentences: { question: number; answer: number };
  tokens: number;
  parse_fallbacks: number;
  question_sentences: Record<string, boolean>;
  recommended_fragment_config: FragmentConfigHint;
};

export type ConversionResult = {
  metadataJsonl: string;
  conllu: string;
  report: ConversionReport;
};
