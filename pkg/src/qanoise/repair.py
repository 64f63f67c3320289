"""Post-hoc question repair.

Out-of-context question words are swapped for their nearest same-class word
in the context paragraph, provided the normalized character distance stays
within a threshold. Also: putting back a dropped final question mark, and a
spellchecker hook.
"""

import logging
from typing import NamedTuple

from . import kernels
from .adapters import AdapterError
from .adapters.pipeline import spellcheck
from .batch import map_ordered
from .noisegen.perturb import _replace_tokens
from .noisegen.tagger import CONTENT, HeuristicTagger
from .textcore import WORD, apply_case_pattern, tokenize

log = logging.getLogger(__name__)

CONTENT_WORD = "content_word"
NAMED_ENTITY = "named_entity"
MODES = (CONTENT_WORD, NAMED_ENTITY)
NORMALIZATIONS = ("max", "reference")


class RepairEdit(NamedTuple):
    qid: str
    index: int
    original: str
    replacement: str
    distance: float
    mode: str


def normalized_distance(original, candidate, normalize="max"):
    """Casefolded edit distance over the longer length ("max") or over ``original``'s ("reference")."""
    a, b = original.casefold(), candidate.casefold()
    denom = max(len(a), len(b)) if normalize == "max" else len(a)
    if denom == 0:
        return 0.0
    return kernels.levenshtein(a, b) / denom


def _selected(tokens, tagger, mode):
    """Indices of word tokens in the class ``mode`` picks out."""
    if mode == CONTENT_WORD:
        classes = tagger.word_classes(tokens)
        return [i for i, c in enumerate(classes) if c == CONTENT]
    picked = set()
    for start, end, _ in tagger.entity_spans(tokens):
        picked.update(range(start, end))
    return [i for i in sorted(picked) if tokens[i].kind == WORD]


def context_repair(question, context, mode=CONTENT_WORD, threshold=0.5, tagger=None,
                   context_tagger=None, qid="", normalize="max"):
    """Repair ``question`` against ``context``; returns ``(text, edits)``.

    Every word of the selected class that does not occur (casefolded) among
    the context words is compared with each context word of the same class.
    The closest one replaces it, re-cased like the original, when its
    distance is at most ``threshold``. Ties go to the longer candidate, then
    to the one seen first. One pass over the original tokens, so a repair
    never enables another.
    """
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
    if normalize not in NORMALIZATIONS:
        raise ValueError(f"normalize must be one of {NORMALIZATIONS}, got {normalize!r}")
    if not context.strip():
        raise ValueError("context is empty")
    tagger = tagger or HeuristicTagger()
    context_tagger = context_tagger or tagger

    ctx_tokens = tokenize(context)
    vocab = {t.surface.casefold() for t in ctx_tokens if t.kind == WORD}
    candidates, seen = [], set()
    for i in _selected(ctx_tokens, context_tagger, mode):
        key = ctx_tokens[i].surface.casefold()
        if key not in seen:
            seen.add(key)
            candidates.append(ctx_tokens[i].surface)

    tokens = tokenize(question)
    replacements, edits = {}, []
    for i in _selected(tokens, tagger, mode):
        surface = tokens[i].surface
        if surface.casefold() in vocab or not candidates:
            continue
        best = None
        for pos, cand in enumerate(candidates):
            rank = (normalized_distance(surface, cand, normalize), -len(cand), pos)
            if best is None or rank < best[0]:
                best = (rank, cand)
        (dist, _, _), cand = best
        if dist > threshold:
            continue
        fixed = apply_case_pattern(surface, cand)
        replacements[i] = fixed
        edits.append(RepairEdit(qid, i, surface, fixed, dist, mode))
    if not replacements:
        return question, []
    return _replace_tokens(question, tokens, replacements), edits


def restore_final_qmark(question):
    """Append "?" unless the trimmed question already ends with one."""
    trimmed = question.rstrip()
    if trimmed.endswith("?"):
        return question
    if not trimmed:
        log.warning("empty question; restored to a bare '?'")
    return trimmed + "?"


def spellcheck_repair(question, checker, qid=None, audit=None, retries=3):
    """The checker's correction of ``question``; on adapter failure the input comes back unchanged."""
    try:
        return spellcheck(question, checker, qid, audit, retries)
    except AdapterError as exc:
        log.warning("spellcheck failed for %s (%s: %s); keeping original", qid, exc.kind, exc)
        return question


def repair_challenge(base, noisy, mode=CONTENT_WORD, threshold=0.5, taggers=None,
                     normalize="max", jobs=1):
    """Context-repair every noisy question of a challenge set.

    ``noisy`` maps qid to noisy text; ``taggers`` is a
    :class:`~qanoise.noisegen.TaggerProvider` (question annotations keyed by
    qid, context annotations by context id). Returns ``(repaired, edits)``
    with edits in question order.
    """
    from .noisegen.tagger import TaggerProvider

    taggers = taggers or TaggerProvider()
    order = [q for q in base.questions if q.qid in noisy]

    def work(q):
        ctx = base.contexts[q.context_id]
        return context_repair(noisy[q.qid], ctx.text, mode, threshold,
                              taggers.for_key(q.qid), taggers.for_key(q.context_id),
                              q.qid, normalize)

    repaired, edits = {}, []
    for q, (text, found) in zip(order, map_ordered(work, order, jobs)):
        repaired[q.qid] = text
        edits.extend(found)
    return repaired, edits


EDIT_FIELDS = ("qid", "index", "original", "replacement", "distance", "mode")


def write_edits(edits, path, header=()):
    """Edits log as TSV; ``header`` lines are written first as ``# `` comments."""
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        for line in header:
            f.write(f"# {line}\n")
        f.write("\t".join(EDIT_FIELDS) + "\n")
        for e in edits:
            f.write(f"{e.qid}\t{e.index}\t{e.original}\t{e.replacement}\t{e.distance:.4f}\t{e.mode}\n")
