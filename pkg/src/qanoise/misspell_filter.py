"""Classify (word, misspelling) pairs by error type and keep the typing errors.

A pair survives the filter when (a) its error type is one a keyboard can
produce and (b) the misspelling does not sound like the word, i.e. the
normalized weighted phoneme distance is at least ``pron_threshold``.
"""

import logging
from dataclasses import dataclass, field

from .noisegen.misspell import MisspellingLexicon
from .textcore import DELETE, INSERT, QWERTY, SUBSTITUTE, TRANSPOSE, edit_distance, phonetic_encode

log = logging.getLogger(__name__)

APOSTROPHE = "Apostrophe"
WHITESPACE = "Whitespace"
DELETION = "Deletion"
SUBSTITUTION = "Substitution"
ADJSWAP = "AdjSwap"
INSERTION = "Insertion"
KEYSWAP = "KeySwap"
MULTIPLE = "Multiple"
CATEGORIES = (APOSTROPHE, WHITESPACE, DELETION, SUBSTITUTION, ADJSWAP, INSERTION, KEYSWAP, MULTIPLE)

INTERFACE = "interface"
NON_INTERFACE = "non-interface"

_APOSTROPHES = "'’`"


def _without(chars, s):
    return "".join(c for c in s if c not in chars)


def classify_pair(correct, typed, layout=QWERTY, row_only=False):
    """Error category of ``typed`` as a misspelling of ``correct``.

    Apostrophe-only and whitespace-only differences are checked first. Any
    other pair is aligned with adjacent transpositions enabled: one deletion,
    insertion or transposition names the category; one substitution is a
    KeySwap when the two keys touch on ``layout`` (any direction unless
    ``row_only``), else a Substitution; anything longer is Multiple.
    """
    if correct == typed:
        raise ValueError(f"not a misspelling: {correct!r} == {typed!r}")
    if _without(_APOSTROPHES, correct) == _without(_APOSTROPHES, typed):
        return APOSTROPHE
    if "".join(correct.split()) == "".join(typed.split()):
        return WHITESPACE
    align = edit_distance(correct, typed, allow_transpose=True)
    if align.cost != 1:
        return MULTIPLE
    (op,) = align.edits()
    if op.kind == DELETE:
        return DELETION
    if op.kind == INSERT:
        return INSERTION
    if op.kind == TRANSPOSE:
        return ADJSWAP
    assert op.kind == SUBSTITUTE
    if layout.adjacent(correct[op.src], typed[op.tgt], row_only=row_only):
        return KEYSWAP
    return SUBSTITUTION


@dataclass
class FilterConfig:
    retained_categories: frozenset = frozenset({DELETION, INSERTION, ADJSWAP, KEYSWAP})
    phoneme_weights: dict = field(default_factory=dict)
    pron_threshold: float = 0.25
    row_only: bool = False

    def __post_init__(self):
        if not 0.0 <= self.pron_threshold <= 1.0:
            raise ValueError(f"pron_threshold must be in [0, 1], got {self.pron_threshold}")
        unknown = set(self.retained_categories) - set(CATEGORIES)
        if unknown:
            raise ValueError(f"unknown categories {sorted(unknown)}")
        self.retained_categories = frozenset(self.retained_categories)


def load_phoneme_weights(path):
    """TSV ``ph1<TAB>ph2<TAB>cost`` substitution costs (symmetric)."""
    weights = {}
    with open(path, encoding="utf-8") as f:
        for lineno, line in enumerate(f, 1):
            line = line.rstrip("\n")
            if not line.strip() or line.startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 3:
                raise ValueError(f"{path}:{lineno}: expected ph1<TAB>ph2<TAB>cost")
            a, b, cost = parts
            cost = float(cost)
            if cost < 0:
                raise ValueError(f"{path}:{lineno}: negative cost")
            weights[(a, b)] = weights[(b, a)] = cost
    return weights


def weighted_distance(a, b, weights=None):
    """Edit distance with per-pair substitution costs; insert/delete cost 1."""
    weights = weights or {}
    n, m = len(a), len(b)
    prev = [float(j) for j in range(m + 1)]
    for i in range(1, n + 1):
        cur = [float(i)] + [0.0] * m
        for j in range(1, m + 1):
            if a[i - 1] == b[j - 1]:
                sub = 0.0
            else:
                sub = weights.get((a[i - 1], b[j - 1]), 1.0)
            cur[j] = min(prev[j - 1] + sub, prev[j] + 1.0, cur[j - 1] + 1.0)
        prev = cur
    return prev[m]


def pronunciation_distance(word, misspelling, weights=None, g2p=None):
    """Weighted phoneme distance divided by the longer sequence, capped at 1."""
    pa = phonetic_encode(word, g2p).phonemes
    pb = phonetic_encode(misspelling, g2p).phonemes
    longest = max(len(pa), len(pb))
    if longest == 0:
        return 0.0
    return min(1.0, weighted_distance(pa, pb, weights) / longest)


@dataclass(frozen=True)
class PairVerdict:
    word: str
    misspelling: str
    category: str
    pron_distance: float
    retained: bool

    @property
    def verdict(self):
        return "retain" if self.retained else "discard"


def judge_pair(word, misspelling, cfg=None, g2p=None, layout=QWERTY):
    cfg = cfg or FilterConfig()
    category = classify_pair(word, misspelling, layout, cfg.row_only)
    if any(c.isalpha() for c in word) and any(c.isalpha() for c in misspelling):
        dist = pronunciation_distance(word, misspelling, cfg.phoneme_weights, g2p)
    else:
        dist = 0.0
    keep = category in cfg.retained_categories and dist >= cfg.pron_threshold
    return PairVerdict(word, misspelling, category, dist, keep)


def category_step(verdicts, cfg):
    return [v for v in verdicts if v.category in cfg.retained_categories]


def pronunciation_step(verdicts, cfg):
    return [v for v in verdicts if v.pron_distance >= cfg.pron_threshold]


def filter_lexicon(raw, cfg=None, g2p=None, layout=QWERTY):
    """Two-step filter over ``(word, misspelling)`` pairs.

    Returns ``(lexicon, audit)`` where ``audit`` has one :class:`PairVerdict`
    per distinct input pair, in input order.
    """
    cfg = cfg or FilterConfig()
    audit, seen = [], set()
    for word, miss in raw:
        key = (word, miss)
        if key in seen or word == miss:
            continue
        seen.add(key)
        audit.append(judge_pair(word, miss, cfg, g2p, layout))
    kept = [(v.word, v.misspelling) for v in audit if v.retained]
    return MisspellingLexicon.from_pairs(kept), audit


def write_audit(audit, path):
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write("word\tmisspelling\tcategory\tpron_distance\tverdict\n")
        for v in audit:
            f.write(f"{v.word}\t{v.misspelling}\t{v.category}\t{v.pron_distance:.4f}\t{v.verdict}\n")


def parse_wikipedia_list(lines):
    """Pairs ``(correct, misspelling)`` from ``misspelling->correct1, correct2`` lines."""
    pairs = []
    for line in lines:
        line = line.strip()
        if not line or line.startswith("#") or "->" not in line:
            continue
        miss, _, corrects = line.partition("->")
        miss = miss.strip()
        for correct in corrects.split(","):
            correct = correct.strip()
            if correct and miss and correct != miss:
                pairs.append((correct, miss))
    return pairs


def load_raw_pairs(path):
    """Read misspelling pairs in either the Wikipedia ``a->b`` format or ``word<TAB>misspelling`` TSV."""
    with open(path, encoding="utf-8") as f:
        lines = f.read().splitlines()
    if any("->" in line for line in lines):
        return parse_wikipedia_list(lines)
    pairs = []
    for line in lines:
        if not line.strip() or line.startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) >= 2 and parts[0].strip() != parts[1].strip():
            pairs.append((parts[0].strip(), parts[1].strip()))
    return pairs


def load_labeled_sample(path):
    """TSV ``word<TAB>misspelling<TAB>label`` with label interface / non-interface."""
    sample = []
    with open(path, encoding="utf-8") as f:
        for lineno, line in enumerate(f, 1):
            line = line.rstrip("\n")
            if not line.strip() or line.startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 3 or parts[2] not in (INTERFACE, NON_INTERFACE):
                raise ValueError(f"{path}:{lineno}: expected word<TAB>misspelling<TAB>interface|non-interface")
            sample.append(((parts[0], parts[1]), parts[2]))
    return sample


def agreement(verdicts, labeled):
    """Percentage of labeled pairs where the filter verdict matches the label.

    ``verdicts`` maps ``(word, misspelling)`` to True (retained, i.e.
    interface error) or False.
    """
    if not labeled:
        raise ValueError("agreement needs a non-empty labeled sample")
    hits = 0
    for pair, label in labeled:
        if label not in (INTERFACE, NON_INTERFACE):
            raise ValueError(f"bad label {label!r}")
        if pair not in verdicts:
            raise KeyError(f"no verdict for pair {pair}")
        hits += verdicts[pair] == (label == INTERFACE)
    return 100.0 * hits / len(labeled)


def calibrate(labeled, cfg=None, g2p=None, layout=QWERTY, thresholds=None):
    """Sweep ``pron_threshold`` and report agreement with the labeled sample.

    Returns ``(best_threshold, best_agreement, table)`` where ``table`` is a
    list of ``(threshold, agreement)``; the lowest threshold wins ties.
    """
    cfg = cfg or FilterConfig()
    judged = [judge_pair(w, m, cfg, g2p, layout) for (w, m), _ in labeled]
    if thresholds is None:
        grid = {round(0.05 * i, 2) for i in range(21)}
        grid.update(round(v.pron_distance, 6) for v in judged)
        thresholds = sorted(grid)
    table = []
    for t in thresholds:
        verdicts = {(v.word, v.misspelling): v.category in cfg.retained_categories and v.pron_distance >= t
                    for v in judged}
        table.append((t, agreement(verdicts, labeled)))
    best_t, best_a = max(table, key=lambda row: (row[1], -row[0]))
    return best_t, best_a, table
