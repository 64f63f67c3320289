"""Corpus BLEU with mteval-13a tokenization, single reference.

Lowercased by default, 4-gram, "exp" smoothing of zero n-gram matches and
the usual brevity penalty.
"""

import math
import re
from collections import Counter
from typing import NamedTuple

MAX_ORDER = 4

_13A_RULES = (
    (re.compile(r"([\{-\~\[-\` -\&\(-\+\:-\@\/])"), r" \1 "),
    (re.compile(r"([^0-9])([\.,])"), r"\1 \2 "),
    (re.compile(r"([\.,])([^0-9])"), r" \1 \2"),
    (re.compile(r"([0-9])(-)"), r"\1 \2 "),
)


def tokenize_13a(line):
    """Split punctuation off words; hyphens and apostrophes inside words stay."""
    line = line.replace("<skipped>", "").replace("-\n", "").replace("\n", " ")
    if "&" in line:
        line = (line.replace("&quot;", '"').replace("&amp;", "&")
                .replace("&lt;", "<").replace("&gt;", ">"))
    line = f" {line} "
    for pattern, repl in _13A_RULES:
        line = pattern.sub(repl, line)
    return line.split()


def _ngrams(tokens, order):
    counts = Counter()
    for n in range(1, order + 1):
        for i in range(len(tokens) - n + 1):
            counts[tuple(tokens[i:i + n])] += 1
    return counts


class BLEU(NamedTuple):
    score: float
    precisions: tuple
    bp: float
    hyp_len: int
    ref_len: int
    correct: tuple
    total: tuple


def bleu_stats(hyps, refs, lowercase=True, order=MAX_ORDER):
    """Sufficient statistics: matched and total n-grams per order, lengths."""
    if len(hyps) != len(refs):
        raise ValueError(f"{len(hyps)} hypotheses but {len(refs)} references")
    if not hyps:
        raise ValueError("BLEU needs at least one segment")
    correct = [0] * order
    total = [0] * order
    hyp_len = ref_len = 0
    for hyp, ref in zip(hyps, refs):
        if lowercase:
            hyp, ref = hyp.lower(), ref.lower()
        ht, rt = tokenize_13a(hyp), tokenize_13a(ref)
        hyp_len += len(ht)
        ref_len += len(rt)
        hc, rc = _ngrams(ht, order), _ngrams(rt, order)
        for gram, count in hc.items():
            n = len(gram) - 1
            total[n] += count
            correct[n] += min(count, rc.get(gram, 0))
    return correct, total, hyp_len, ref_len


def bleu_from_stats(correct, total, hyp_len, ref_len):
    order = len(correct)
    bp = 1.0
    if hyp_len < ref_len:
        bp = math.exp(1 - ref_len / hyp_len) if hyp_len > 0 else 0.0
    precisions = [0.0] * order
    if not any(correct):
        return BLEU(0.0, tuple(precisions), bp, hyp_len, ref_len, tuple(correct), tuple(total))
    halving = 1.0
    for n in range(order):
        if total[n] == 0:
            break
        if correct[n] == 0:
            halving *= 2
            precisions[n] = 100.0 / (halving * total[n])
        else:
            precisions[n] = 100.0 * correct[n] / total[n]
    if min(precisions) == 0.0:
        score = 0.0
    else:
        # exp(mean(log 100)) can land a hair above 100 in floating point
        score = min(100.0, bp * math.exp(sum(math.log(p) for p in precisions) / order))
    return BLEU(score, tuple(precisions), bp, hyp_len, ref_len, tuple(correct), tuple(total))


def corpus_bleu_details(hyps, refs, lowercase=True):
    return bleu_from_stats(*bleu_stats(hyps, refs, lowercase))


def corpus_bleu(hyps, refs, lowercase=True):
    """Corpus BLEU in [0, 100] of ``hyps`` against one reference each."""
    return corpus_bleu_details(hyps, refs, lowercase).score
