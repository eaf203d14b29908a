"""
Deterministic clinical-style demo data

Sentences are drawn from templates whose slots are filled with entity phrases of
six labels. Three things keep the baseline taggers imperfect:

* some surfaces occur under more than one label or outside any entity;
* test and raw sentences draw a share of their phrases from a pool the training
  split never uses, so those words are unseen at tagging time;
* two ward shorthands ("ms", "pe") take their label from the pair they form with
  the next word, and the two flip the mapping. No weighting of single-word
  features fits all four pairs, while a word+next-word rule does.

Every sentence has its own random stream keyed by (seed, split, index).
"""

from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Sequence, Tuple, Union

from .augment import RandomStream
from .core import BaseComponent
from .corpus import OUTSIDE, Corpus, Scheme, Sentence, save_conll, write_raw

LABELS = ("problem", "test", "treatment", "occurrence", "evidential", "clinical_dept")

PHRASES: Dict[str, Tuple[str, ...]] = {
    "problem": (
        "pain", "chest pain", "abdominal pain", "fever", "shortness of breath", "hypertension",
        "nausea", "cough", "pneumonia", "anemia", "edema", "headache", "diabetes", "infection",
        "atrial fibrillation", "renal failure", "rash", "vomiting", "weakness", "dizziness", "sepsis",
        "blood loss", "bleeding", "swelling", "fatigue", "confusion", "hypotension", "chills",
        "back pain", "acute kidney injury", "heart failure", "seizure", "stroke", "fracture",
    ),
    "test": (
        "ct scan", "chest x-ray", "blood cultures", "ecg", "echocardiogram", "mri", "cbc",
        "urinalysis", "biopsy", "troponin", "potassium level", "blood pressure", "creatinine",
        "ultrasound", "white count", "hemoglobin", "lactate", "head ct", "physical exam", "stress test",
    ),
    "treatment": (
        "aspirin", "heparin", "lasix", "insulin", "antibiotics", "vancomycin", "metoprolol", "surgery",
        "intubation", "oxygen", "morphine", "dialysis", "tylenol", "coumadin", "iv fluids",
        "blood transfusion", "lisinopril", "prednisone", "physical therapy", "pain medication",
    ),
    "occurrence": (
        "admitted", "discharged", "transferred", "presented", "followed up", "seen", "readmitted",
        "evaluated", "consulted", "returned",
    ),
    "evidential": (
        "revealed", "showed", "complained of", "reported", "demonstrated", "noted", "denied",
        "was found to have", "endorsed",
    ),
    "clinical_dept": (
        "icu", "emergency department", "cardiology", "surgery service", "oncology clinic", "floor",
        "rehabilitation unit", "medicine service", "neurology", "operating room",
    ),
}

# drawn only in the test and raw splits
HELD_OUT_PHRASES: Dict[str, Tuple[str, ...]] = {
    "problem": (
        "cellulitis", "pancreatitis", "delirium", "gout flare", "urinary retention", "hyponatremia",
        "syncope", "melena",
    ),
    "test": ("lipase", "ferritin", "colonoscopy", "eeg", "tsh", "arterial blood gas"),
    "treatment": (
        "ceftriaxone", "amiodarone", "warfarin reversal", "nitroglycerin", "albuterol", "thoracentesis",
    ),
    "occurrence": ("reassessed", "observed", "boarded"),
    "evidential": ("confirmed", "suggested", "indicated"),
    "clinical_dept": ("pulmonary clinic", "burn unit", "dermatology", "gastroenterology"),
}

# percent of slots filled from HELD_OUT_PHRASES outside the training split
HELD_OUT_RATE = 20

# (shorthand, next word) -> label of the shorthand; the next word is an O token
SHORTHAND: Dict[Tuple[str, str], str] = {
    ("ms", "today"): "problem",
    ("ms", "overnight"): "treatment",
    ("pe", "today"): "treatment",
    ("pe", "overnight"): "problem",
}
_SHORTHAND_PAIRS = tuple(sorted(SHORTHAND))

# {label} marks a slot, {shorthand} a SHORTHAND pair; everything else is an O token
TEMPLATES: Tuple[str, ...] = (
    "the patient was {occurrence} to the {clinical_dept} with {problem} .",
    "{test} {evidential} {problem} .",
    "he was started on {treatment} for {problem} .",
    "she {evidential} {problem} and {problem} .",
    "a {test} was performed which {evidential} no {problem} .",
    "the patient was {occurrence} on {treatment} .",
    "{treatment} was given and the {problem} improved .",
    "{test} was within normal limits .",
    "she was {occurrence} from the {clinical_dept} in stable condition .",
    "he {evidential} {problem} for two days prior to admission .",
    "the patient received {treatment} and {treatment} overnight .",
    "{clinical_dept} was {occurrence} for {problem} .",
    "repeat {test} {evidential} worsening {problem} .",
    "the {problem} resolved after {treatment} .",
    "he was {occurrence} in the {clinical_dept} after a {test} .",
    "the patient tolerated the procedure well .",
    "family was updated at the bedside .",
    "she will follow up with her primary care doctor next week .",
    "vital signs were stable throughout the day .",
    "no acute events overnight .",
    "pain was controlled with {treatment} .",
    "the patient has a history of {problem} and {problem} .",
    "{treatment} was held because of {problem} .",
    "blood was drawn for {test} and {test} .",
    "he denies any pain at this time .",
    "{shorthand} per the night team .",
    "the {shorthand} was discussed with the family .",
    "we reviewed {shorthand} with cardiology .",
    "pain service was consulted and she was seen .",
)

SPLITS = {"train": 1, "test": 2, "raw": 3}

BUNDLED_LEXICON = Path(__file__).parent / "data" / "demo_lexicon.tsv"


def _fill(template_text: str, rng: RandomStream, held_out: bool = False) -> Tuple[List[str], List[str]]:
    surfaces: List[str] = []
    tags: List[str] = []
    for word in template_text.split():
        if word == "{shorthand}":
            code, cue = _SHORTHAND_PAIRS[rng.integer(len(_SHORTHAND_PAIRS))]
            surfaces.extend((code, cue))
            tags.extend((f"B-{SHORTHAND[code, cue]}", OUTSIDE))
        elif word.startswith("{") and word.endswith("}"):
            label = word[1:-1]
            pool = PHRASES[label]
            if held_out and rng.integer(100) < HELD_OUT_RATE:
                pool = HELD_OUT_PHRASES[label]
            phrase = pool[rng.integer(len(pool))].split()
            surfaces.extend(phrase)
            tags.extend([f"B-{label}"] + [f"I-{label}"] * (len(phrase) - 1))
        else:
            surfaces.append(word)
            tags.append(OUTSIDE)
    return surfaces, tags


def generate_sentence(seed: int, split: str, index: int) -> Tuple[List[str], List[str]]:
    """(surfaces, BIO tags) of one sentence; depends only on its arguments"""
    rng = RandomStream(seed, SPLITS[split], index)
    return _fill(TEMPLATES[rng.integer(len(TEMPLATES))], rng, held_out=split != "train")


def generate_corpus(count: int, seed: int = 12, split: str = "train") -> Corpus:
    sentences = [Sentence.from_pairs(*generate_sentence(seed, split, i)) for i in range(count)]
    return Corpus(tuple(sentences), Scheme.BIO, frozenset(LABELS))


def generate_raw(count: int, seed: int = 12) -> List[List[str]]:
    return [generate_sentence(seed, "raw", i)[0] for i in range(count)]


def demo_config_text(lexicon: str = "lexicon.tsv", seed: int = 12) -> str:
    return (
        "# demo pipeline over generated data; paths are relative to this file\n"
        "train = train.conll\n"
        "test = test.conll\n"
        "raw = raw.txt\n"
        f"lexicon = {lexicon}\n"
        "scheme = BIOES\n"
        "model = perceptron\n"
        "epochs = 5\n"
        "augment_techniques = lwtr,sr,sis\n"
        "augment_p = 0.3\n"
        "augment_copies = 1\n"
        "consensus_sources = families\n"
        "repair = CONLL\n"
        "brill_min_acc = 0.99\n"
        "brill_scores = 2,3,4,5\n"
        f"seed = {seed}\n"
        "out = pipeline_out\n"
    )


@dataclass(frozen=True)
class DemoFiles:
    train: Path
    test: Path
    raw: Path
    lexicon: Path
    config: Path


class DemoGenerator(BaseComponent):
    """Writes train/test/raw files, the bundled lexicon and a pipeline config"""

    def __init__(self, train_sentences: int = 2000, test_sentences: int = 500, raw_sentences: int = 1000,
                 seed: int = 12, logger=None, silent: bool = False):
        super().__init__(logger, "DemoGenerator", silent)
        self.counts = (train_sentences, test_sentences, raw_sentences)
        self.seed = seed

    def write(self, out_dir: Union[str, Path]) -> DemoFiles:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        train_n, test_n, raw_n = self.counts
        files = DemoFiles(
            out / "train.conll", out / "test.conll", out / "raw.txt", out / "lexicon.tsv", out / "pipeline.conf"
        )

        train = generate_corpus(train_n, self.seed, "train")
        test = generate_corpus(test_n, self.seed, "test")
        save_conll(train, files.train)
        save_conll(test, files.test)
        files.raw.write_bytes(write_raw(generate_raw(raw_n, self.seed)))
        files.lexicon.write_bytes(BUNDLED_LEXICON.read_bytes())
        files.config.write_text(demo_config_text(files.lexicon.name, self.seed), encoding="utf-8")

        self.log_info(
            f"wrote demo data to {out}: {len(train)} train ({train.token_count} tokens), "
            f"{len(test)} test, {raw_n} raw sentences"
        )
        return files


def generate_demo(out_dir: Union[str, Path], train_sentences: int = 2000, test_sentences: int = 500,
                  raw_sentences: int = 1000, seed: int = 12, logger=None) -> DemoFiles:
    return DemoGenerator(train_sentences, test_sentences, raw_sentences, seed, logger=logger).write(out_dir)


def vocabulary(templates: Sequence[str] = TEMPLATES) -> List[str]:
    """Every surface the generator can emit, sorted"""
    words = {w for t in templates for w in t.split() if not w.startswith("{")}
    for pools in (PHRASES, HELD_OUT_PHRASES):
        words.update(w for pool in pools.values() for phrase in pool for w in phrase.split())
    words.update(w for pair in SHORTHAND for w in pair)
    return sorted(words)
