import { describe, expect, it } from "vitest";

import { isQuestionText, segmentSentences, tokenize } from "../src/tokenize";

describe("segmentSentences", () => {
  it("splits on terminators and keeps them", () => {
    const out = segmentSentences("The scheme failed. When will it change? We shall see.");
    expect(out).toEqual(["The scheme failed.", "When will it change?", "We shall see."]);
  });

  it("does not split after known abbreviations", () => {
    const out = segmentSentences("Mr. Harwood spoke. The house listened.");
    expect(out).toEqual(["Mr. Harwood spoke.", "The house listened."]);
  });

  it("does not split inside decimal numbers", () => {
    expect(segmentSentences("It cost 3.5 million pounds.")).toEqual(["It cost 3.5 million pounds."]);
  });

  it("absorbs runs of terminators into one sentence", () => {
    expect(segmentSentences("Really?! Yes.")).toEqual(["Really?!", "Yes."]);
  });

  it("keeps a trailing fragment without a terminator", () => {
    expect(segmentSentences("First point. and then some")).toEqual(["First point.", "and then some"]);
  });

  it("returns nothing for blank input", () => {
    expect(segmentSentences("   ")).toEqual([]);
  });
});

describe("tokenize", () => {
  it("separates punctuation from words", () => {
    expect(tokenize("Will the minister act?")).toEqual(["Will", "the", "minister", "act", "?"]);
  });

  it("keeps internal apostrophes and hyphens inside one token", () => {
    expect(tokenize("the member's long-term plan")).toEqual(["the", "member's", "long-term", "plan"]);
  });

  it("keeps grouped digits together", () => {
    expect(tokenize("over 1,200 cases")).toEqual(["over", "1,200", "cases"]);
  });
});

describe("isQuestionText", () => {
  it("is true only when the trimmed text ends with a question mark", () => {
    expect(isQuestionText("Will the minister act?")).toBe(true);
    expect(isQuestionText("Will the minister act?  ")).toBe(true);
    expect(isQuestionText("The minister will act.")).toBe(false);
    expect(isQuestionText("Why? Because it matters.")).toBe(false);
  });
});
