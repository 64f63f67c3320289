"""Challenge-set statistics, stratified scores and degradation tables."""

from dataclasses import dataclass, field
from typing import NamedTuple

from . import kernels
from .metrics import NoiseScore, aggregate, noise_score, qa_scores
from .metrics.errorrate import wer_words
from .textcore import DELETE, NUMBER, SUBSTITUTE, edit_distance, tokenize


class QuestionStats(NamedTuple):
    qid: str
    words: int
    corrupted: int
    char_diff: int


@dataclass(frozen=True)
class NoiseStats:
    n: int
    word_corruption: float
    diff_ge1: float
    diff_ge2: float
    score: NoiseScore
    rows: tuple = ()


def corrupted_words(clean, noisy):
    """``(clean word count, clean words not matched in a word alignment)``.

    Words are split as for WER (casefolded, punctuation dropped).
    """
    c, n = wer_words(clean), wer_words(noisy)
    align = edit_distance(c, n)
    return len(c), sum(op.kind in (SUBSTITUTE, DELETE) for op in align.ops)


def noise_stats(challenge, casefold_diff=False):
    """Word corruption rate, share of questions ≥1 / ≥2 characters off, and CER/WER/BLEU.

    Character differences are counted on the raw strings unless
    ``casefold_diff``. Percentages throughout.
    """
    if not len(challenge):
        raise ValueError("challenge set is empty")
    rows = []
    for qid, (clean, noisy) in challenge.pairs.items():
        words, bad = corrupted_words(clean, noisy)
        a, b = (clean.casefold(), noisy.casefold()) if casefold_diff else (clean, noisy)
        rows.append(QuestionStats(qid, words, bad, kernels.levenshtein(a, b)))
    total_words = sum(r.words for r in rows)
    n = len(rows)
    return NoiseStats(
        n=n,
        word_corruption=100.0 * sum(r.corrupted for r in rows) / total_words if total_words else 0.0,
        diff_ge1=100.0 * sum(r.char_diff >= 1 for r in rows) / n,
        diff_ge2=100.0 * sum(r.char_diff >= 2 for r in rows) / n,
        score=noise_score(challenge.noisy(), challenge.clean()),
        rows=tuple(rows),
    )


def write_noise_stats(stats, path, header=()):
    """Summary block then per-question rows, so every figure can be recomputed from the file."""
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        for line in header:
            f.write(f"# {line}\n")
        f.write(f"# n\t{stats.n}\n")
        f.write(f"# word_corruption\t{stats.word_corruption:.4f}\n")
        f.write(f"# diff_ge1\t{stats.diff_ge1:.4f}\n")
        f.write(f"# diff_ge2\t{stats.diff_ge2:.4f}\n")
        f.write(f"# cer\t{stats.score.cer:.4f}\n")
        f.write(f"# wer\t{stats.score.wer:.4f}\n")
        f.write(f"# bleu\t{stats.score.bleu:.4f}\n")
        f.write("qid\twords\tcorrupted\tchar_diff\n")
        for r in stats.rows:
            f.write(f"{r.qid}\t{r.words}\t{r.corrupted}\t{r.char_diff}\n")


# stratification ---------------------------------------------------------

@dataclass(frozen=True)
class Predicate:
    name: str
    test: object  # (qid, text) -> bool

    def __call__(self, qid, text):
        return bool(self.test(qid, text))


def contains_token(token):
    key = token.casefold()
    return Predicate(f"contains_token({token})",
                     lambda qid, text: any(t.surface.casefold() == key for t in tokenize(text)))


def contains_numeral():
    return Predicate("contains_numeral", lambda qid, text: any(t.kind == NUMBER for t in tokenize(text)))


def flagged(qids, name="flagged"):
    qids = frozenset(qids)
    return Predicate(name, lambda qid, text: qid in qids)


def load_flags(path):
    """qids listed one per line (first TSV column); blank and ``#`` lines skipped."""
    with open(path, encoding="utf-8") as f:
        return [line.split("\t")[0].strip() for line in f if line.strip() and not line.startswith("#")]


@dataclass(frozen=True)
class StratumReport:
    predicate: str
    n: int
    qa: object = None
    noise: object = None


def stratify(gold, predictions, predicate, noisy=None):
    """Split the questions by ``predicate`` and score each side.

    The predicate sees the noisy question when ``noisy`` (qid -> text) is
    given, else the gold question. Returns the true stratum then its
    complement; an empty stratum has ``n=0`` and no scores.
    """
    sides = {True: [], False: []}
    for q in gold.questions:
        text = noisy.get(q.qid, q.question) if noisy is not None else q.question
        sides[predicate(q.qid, text)].append(q)
    reports = []
    for truth, name in ((True, predicate.name), (False, f"not {predicate.name}")):
        qs = sides[truth]
        if not qs:
            reports.append(StratumReport(name, 0))
            continue
        qa = aggregate(qa_scores(predictions, qs))
        ns = None
        if noisy is not None:
            pairs = [(q.question, noisy[q.qid]) for q in qs if q.qid in noisy]
            if pairs:
                ns = noise_score([p[1] for p in pairs], [p[0] for p in pairs])
        reports.append(StratumReport(name, len(qs), qa, ns))
    return reports


def _fmt(x):
    return "" if x is None else f"{x:.2f}"


def stratum_tsv(reports):
    lines = ["stratum\tn\tem\tf1\tcer\twer\tbleu"]
    for r in reports:
        qa, ns = r.qa, r.noise
        lines.append("\t".join([
            r.predicate, str(r.n),
            _fmt(qa and qa.em), _fmt(qa and qa.f1),
            _fmt(ns and ns.cer), _fmt(ns and ns.wer), _fmt(ns and ns.bleu),
        ]))
    return "\n".join(lines) + "\n"


# degradation table ------------------------------------------------------

class Cell(NamedTuple):
    system: str
    interface: str
    em: object
    f1: object
    d_em: object
    d_f1: object


BASE = "base"


@dataclass
class DegradationReport:
    systems: list
    interfaces: list
    cells: list
    ranks: dict
    consistent: bool
    missing: list = field(default_factory=list)

    def to_tsv(self):
        lines = ["system\tinterface\tem\tf1\tdelta_em\tdelta_f1"]
        for c in self.cells:
            lines.append("\t".join([c.system, c.interface, _fmt(c.em), _fmt(c.f1), _fmt(c.d_em), _fmt(c.d_f1)]))
        lines.append("")
        lines.append("interface\tranking")
        for iface, order in self.ranks.items():
            lines.append(f"{iface}\t{' > '.join(order)}")
        lines.append(f"consistent\t{str(self.consistent).lower()}")
        for system, iface in self.missing:
            lines.append(f"missing\t{system}\t{iface}")
        return "\n".join(lines) + "\n"

    def to_text(self):
        header = ["system"] + [f"{i} EM/F1" for i in self.interfaces]
        body = []
        by_key = {(c.system, c.interface): c for c in self.cells}
        for s in self.systems:
            row = [s]
            for i in self.interfaces:
                c = by_key.get((s, i))
                if c is None or c.em is None:
                    row.append("")
                elif i == BASE or c.d_em is None:
                    row.append(f"{c.em:.2f}/{c.f1:.2f}")
                else:
                    row.append(f"{c.em:.2f}/{c.f1:.2f} ({c.d_em:+.2f}/{c.d_f1:+.2f})")
            body.append(row)
        widths = [max(len(r[k]) for r in [header] + body) for k in range(len(header))]
        out = ["  ".join(cell.ljust(w) for cell, w in zip(r, widths)).rstrip() for r in [header] + body]
        out.append(f"ranking consistent across interfaces: {'yes' if self.consistent else 'no'}")
        if self.missing:
            out.append("missing cells: " + ", ".join(f"{s}/{i}" for s, i in self.missing))
        return "\n".join(out) + "\n"


def _ranking(scores):
    present = [(s, q) for s, q in scores.items() if q is not None]
    return [s for s, q in sorted(present, key=lambda sq: (-sq[1].f1, -sq[1].em, sq[0]))]


def degradation_table(base, noisy):
    """EM/F1 per (system, interface) with deltas from each system's clean score.

    ``base`` maps system -> QAScore; ``noisy`` maps interface -> system ->
    QAScore. Systems are ranked by F1 (then EM, then name) per interface;
    ``consistent`` says whether every interface agrees with the clean ranking
    over the systems it covers.
    """
    systems = list(base)
    for scores in noisy.values():
        for s in scores:
            if s not in systems:
                systems.append(s)
    interfaces = [BASE] + list(noisy)
    cells, missing = [], []
    for s in systems:
        b = base.get(s)
        if b is None:
            missing.append((s, BASE))
            cells.append(Cell(s, BASE, None, None, None, None))
        else:
            cells.append(Cell(s, BASE, b.em, b.f1, 0.0, 0.0))
        for iface, scores in noisy.items():
            q = scores.get(s)
            if q is None:
                missing.append((s, iface))
                cells.append(Cell(s, iface, None, None, None, None))
            elif b is None:
                cells.append(Cell(s, iface, q.em, q.f1, None, None))
            else:
                cells.append(Cell(s, iface, q.em, q.f1, q.em - b.em, q.f1 - b.f1))
    ranks = {BASE: _ranking(base)}
    for iface, scores in noisy.items():
        ranks[iface] = _ranking(scores)
    reference = ranks[BASE]
    consistent = True
    for iface, order in ranks.items():
        common = [s for s in reference if s in order]
        if [s for s in order if s in common] != common:
            consistent = False
    return DegradationReport(systems, interfaces, cells, ranks, consistent, missing)
