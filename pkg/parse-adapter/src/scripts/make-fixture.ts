/**
 * Regenerates the committed fixture corpora under fixtures/.
 *
 * raw.100.jsonl   hundred-record synthetic question period, shuffled line
 *                 order so conversion has to sort by pair_id
 * raw.small.jsonl three handcrafted records for quick unit tests
 * raw.edge.jsonl  malformed records exercising every skip reason
 *
 * Deterministic: a fixed-seed PRNG drives all choices.
 */

import * as fs from "node:fs";
import * as path from "node:path";

function mulberry32(seed: number): () => number {
  let a = seed >>> 0;
  return () => {
    a = (a + 0x6d2b79f5) >>> 0;
    let t = a;
    t = Math.imul(t ^ (t >>> 15), t | 1);
    t ^= t + Math.imul(t ^ (t >>> 7), t | 61);
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}

class Rng {
  private next: () => number;
  constructor(seed: number) {
    this.next = mulberry32(seed);
  }
  pick<T>(items: readonly T[]): T {
    return items[Math.floor(this.next() * items.length)];
  }
  int(lo: number, hi: number): number {
    return lo + Math.floor(this.next() * (hi - lo + 1));
  }
  chance(p: number): boolean {
    return this.next() < p;
  }
  shuffle<T>(items: T[]): T[] {
    for (let i = items.length - 1; i > 0; i--) {
      const j = Math.floor(this.next() * (i + 1));
      [items[i], items[j]] = [items[j], items[i]];
    }
    return items;
  }
}

interface Speaker {
  speaker_id: string;
  party: string | null;
  first_office_date: string | null;
  is_minister: boolean | null;
  is_shadow: boolean | null;
}

const GOVERNMENT = "Civic Alliance";
const OPPOSITION = "National Futures";
const MINOR = "Borders Group";

const MINISTERS: Speaker[] = [
  { speaker_id: "min-harwood", party: GOVERNMENT, first_office_date: "1994-07-18", is_minister: true, is_shadow: false },
  { speaker_id: "min-okafor", party: GOVERNMENT, first_office_date: "1996-05-02", is_minister: true, is_shadow: false },
  { speaker_id: "min-bellamy", party: GOVERNMENT, first_office_date: "1997-06-11", is_minister: true, is_shadow: false },
  { speaker_id: "min-sorensen", party: GOVERNMENT, first_office_date: "1998-01-26", is_minister: true, is_shadow: false },
  { speaker_id: "min-tran", party: GOVERNMENT, first_office_date: "1999-11-09", is_minister: true, is_shadow: false },
];

const ASKERS: Speaker[] = [
  { speaker_id: "mp-alderton", party: OPPOSITION, first_office_date: null, is_minister: false, is_shadow: true },
  { speaker_id: "mp-bhatt", party: OPPOSITION, first_office_date: null, is_minister: false, is_shadow: true },
  { speaker_id: "mp-carver", party: OPPOSITION, first_office_date: null, is_minister: false, is_shadow: false },
  { speaker_id: "mp-dunmore", party: OPPOSITION, first_office_date: null, is_minister: false, is_shadow: false },
  { speaker_id: "mp-eccles", party: OPPOSITION, first_office_date: null, is_minister: false, is_shadow: false },
  { speaker_id: "mp-farah", party: OPPOSITION, first_office_date: null, is_minister: false, is_shadow: false },
  { speaker_id: "mp-gillan", party: GOVERNMENT, first_office_date: "1992-04-10", is_minister: false, is_shadow: false },
  { speaker_id: "mp-hollis", party: GOVERNMENT, first_office_date: null, is_minister: false, is_shadow: false },
  { speaker_id: "mp-ibarra", party: GOVERNMENT, first_office_date: null, is_minister: false, is_shadow: false },
  { speaker_id: "mp-jessop", party: GOVERNMENT, first_office_date: null, is_minister: false, is_shadow: false },
  { speaker_id: "mp-kaur", party: GOVERNMENT, first_office_date: null, is_minister: false, is_shadow: false },
  { speaker_id: "mp-lindqvist", party: MINOR, first_office_date: null, is_minister: false, is_shadow: false },
  { speaker_id: "mp-moyo", party: MINOR, first_office_date: null, is_minister: false, is_shadow: false },
  { speaker_id: "mp-naylor", party: null, first_office_date: null, is_minister: null, is_shadow: null },
  { speaker_id: "mp-osei", party: OPPOSITION, first_office_date: null, is_minister: false, is_shadow: false },
];

const DEPARTMENTS: (string | null)[] = [
  "Department of Health",
  "Department for Transport",
  "Home Office",
  "Department for Education",
  "Treasury",
  null,
];

/* Noun slots are always used after "the" so that words doubling as verb
   bases still read as nouns. */
const NOUNS = [
  "policy", "programme", "scheme", "backlog", "shortage", "crisis",
  "delay", "closure", "review", "budget", "service", "fund",
  "housing crisis", "funding gap", "transport plan", "health budget",
];

const BARE_NOUNS = ["assistance", "clarity", "compensation", "action"];

const PLURALS = [
  "families", "patients", "residents", "businesses", "teachers",
  "nurses", "passengers", "communities", "schools", "hospitals",
];

const ROLES = ["minister", "secretary", "chancellor", "prime minister"];

const ADJS = [
  "unacceptable", "urgent", "serious", "inadequate", "accurate",
  "affordable", "essential", "necessary",
];

const VERBS = ["improve", "protect", "extend", "restore", "expand", "repair"];

const AMOUNTS = ["40", "120", "250", "400", "600"];

function questionSentence(rng: Rng): string {
  const role = rng.pick(ROLES);
  const noun = rng.pick(NOUNS);
  const templates = [
    `What is the ${role} going to do about the ${noun}?`,
    `Will the ${role} confirm that the ${noun} is ${rng.pick(ADJS)}?`,
    `When will the department publish the ${noun}?`,
    `Why has the ${role} not acted on the ${noun}?`,
    `Does the ${role} agree that the ${noun} needs urgent review?`,
    `Can the ${role} explain the delay in the ${noun}?`,
    `Is the ${role} aware that ${rng.pick(PLURALS)} are waiting for ${rng.pick(BARE_NOUNS)}?`,
    `How many ${rng.pick(PLURALS)} were affected by the ${noun}?`,
    `Will the ${role} meet me to discuss the ${noun}?`,
    `Which measures will the department take to ${rng.pick(VERBS)} the ${noun}?`,
    `Is the ${role} prepared to ${rng.pick(VERBS)} the ${noun}?`,
  ];
  return rng.pick(templates);
}

function preambleSentence(rng: Rng): string {
  const templates = [
    `The ${rng.pick(NOUNS)} in my constituency is ${rng.pick(ADJS)}.`,
    `The government has ignored the ${rng.pick(NOUNS)} for years.`,
    `Local ${rng.pick(PLURALS)} are struggling.`,
    `This is a matter of real urgency.`,
  ];
  return rng.pick(templates);
}

function answerText(rng: Rng): string {
  const noun = rng.pick(NOUNS);
  const templates = [
    `The government has invested ${rng.pick(AMOUNTS)} million pounds in the ${noun}.`,
    `We are reviewing the ${noun} and will report shortly.`,
    `My department takes this matter very seriously.`,
    `I refer the honourable member to my previous answer.`,
    `We will publish a full review before the end of the year.`,
    `The ${noun} is delivering real results for ${rng.pick(PLURALS)} across the country.`,
    `That is simply not the case.`,
    `We have made significant progress on this issue.`,
    `No decision has been taken.`,
    `The honourable member will know that the ${noun} remains a priority.`,
    `Mr Speaker, we are taking urgent action on this issue.`,
  ];
  const sentences = [rng.pick(templates)];
  if (rng.chance(0.4)) {
    let second = rng.pick(templates);
    while (second === sentences[0]) second = rng.pick(templates);
    sentences.push(second);
  }
  return sentences.join(" ");
}

function buildHundred(rng: Rng): string[] {
  const lines: string[] = [];
  for (let i = 0; i < 100; i++) {
    const pairId = `pmq-${String(i).padStart(4, "0")}`;
    let question: string;
    if (i === 0) {
      question = "What is the minister going to do about the policy?";
    } else {
      const parts: string[] = [];
      if (rng.chance(0.3)) parts.push(preambleSentence(rng));
      parts.push(questionSentence(rng));
      if (rng.chance(0.1)) {
        parts.push(`When will the ${rng.pick(NOUNS)} be published?`);
      }
      question = parts.join(" ");
    }
    let answer: string;
    if (i === 42) {
      answer =
        "Does the honourable member really believe that the programme has failed? " +
        "We have made significant progress on this issue.";
    } else {
      answer = answerText(rng);
    }
    lines.push(JSON.stringify({
      pair_id: pairId,
      date: `${rng.int(1996, 2003)}-${String(rng.int(1, 12)).padStart(2, "0")}-${String(rng.int(1, 28)).padStart(2, "0")}`,
      asker: rng.pick(ASKERS),
      answerer: rng.pick(MINISTERS),
      department: rng.pick(DEPARTMENTS),
      question_text: question,
      answer_text: answer,
    }));
  }
  return rng.shuffle(lines);
}

function buildSmall(): string[] {
  const records = [
    {
      pair_id: "demo-000",
      date: "1997-03-12",
      asker: ASKERS[0],
      answerer: MINISTERS[0],
      department: "Department of Health",
      question_text: "What is the minister going to do about the policy?",
      answer_text: "We are reviewing the policy and will report shortly.",
    },
    {
      pair_id: "demo-001",
      date: "1997-03-12",
      asker: ASKERS[6],
      answerer: MINISTERS[0],
      department: "Department of Health",
      question_text: "The backlog in my constituency is unacceptable. When will the department publish the review?",
      answer_text: "We will publish a full review before the end of the year.",
    },
    {
      pair_id: "demo-002",
      date: "1997-04-02",
      asker: ASKERS[2],
      answerer: MINISTERS[1],
      department: null,
      question_text: "Is the minister aware that families are waiting for assistance?",
      answer_text: "Mr Speaker, we are taking urgent action on this issue. No decision has been taken.",
    },
  ];
  return records.map((r) => JSON.stringify(r));
}

function buildEdge(): string[] {
  const ok = {
    pair_id: "edge-ok",
    date: "2001-06-20",
    asker: ASKERS[1],
    answerer: MINISTERS[2],
    department: "Treasury",
    question_text: "Will the minister act?",
    answer_text: "We will act.",
  };
  return [
    JSON.stringify(ok),
    `{"pair_id": "edge-`,
    JSON.stringify({ ...ok, pair_id: undefined }),
    JSON.stringify({ ...ok, pair_id: "  " }),
    JSON.stringify(ok),
    JSON.stringify({ ...ok, pair_id: "edge-date", date: "2001-13-40" }),
    JSON.stringify({ ...ok, pair_id: "edge-noq-text", question_text: "" }),
    JSON.stringify({ ...ok, pair_id: "edge-noa-text", answer_text: "   " }),
    JSON.stringify({ ...ok, pair_id: "edge-anon", asker: { party: OPPOSITION } }),
    JSON.stringify({
      ...ok,
      pair_id: "edge-noq",
      question_text: "I thank the minister for the recent statement.",
    }),
    JSON.stringify({ ...ok, pair_id: "edge-dept", department: 7 }),
  ];
}

function main(): void {
  const root = path.resolve(__dirname, "..", "..");
  const outDir = path.join(root, "fixtures");
  fs.mkdirSync(outDir, { recursive: true });
  const rng = new Rng(20010905);
  const files: [string, string[]][] = [
    ["raw.100.jsonl", buildHundred(rng)],
    ["raw.small.jsonl", buildSmall()],
    ["raw.edge.jsonl", buildEdge()],
  ];
  for (const [name, lines] of files) {
    fs.writeFileSync(path.join(outDir, name), lines.map((l) => l + "\n").join(""));
    process.stdout.write(`wrote fixtures/${name} (${lines.length} lines)\n`);
  }
}

if (require.main === module) {
  main();
}
