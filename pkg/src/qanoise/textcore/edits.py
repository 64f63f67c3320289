"""Minimal edit scripts between two sequences.

Costs are unit: substitution, insertion, deletion and (optionally) swapping
two adjacent elements each cost 1. With transpositions enabled the distance
is the optimal-string-alignment distance: no element takes part in more
than one edit, which is what a single-typo classifier needs.
"""

from dataclasses import dataclass
from typing import NamedTuple

from .. import kernels

MATCH = "match"
SUBSTITUTE = "substitute"
DELETE = "delete"
INSERT = "insert"
TRANSPOSE = "transpose"


class EditOp(NamedTuple):
    """One step of an alignment.

    ``src`` indexes the source sequence and ``tgt`` the target. An insert
    has ``src`` equal to the source position it lands before; a transpose
    covers ``src, src+1`` and ``tgt, tgt+1``.
    """

    kind: str
    src: int
    tgt: int


@dataclass(frozen=True)
class EditAlignment:
    ops: tuple
    cost: int

    def edits(self):
        return [op for op in self.ops if op.kind != MATCH]

    def apply(self, source, target):
        return apply_ops(source, target, self.ops)


def apply_ops(source, target, ops):
    """Replay ``ops`` on ``source``; returns a list equal to ``target``.

    Values for substitutions and insertions are read from ``target`` at the
    op's target index, so the script is checked end to end rather than
    trusted.
    """
    out = []
    pos = 0
    for op in ops:
        if op.kind == INSERT:
            if op.src != pos:
                raise ValueError(f"insert at {op.src} out of order (at {pos})")
            out.append(target[op.tgt])
            continue
        if op.src != pos:
            raise ValueError(f"{op.kind} at {op.src} out of order (at {pos})")
        if op.kind == MATCH:
            out.append(source[pos])
            pos += 1
        elif op.kind == SUBSTITUTE:
            out.append(target[op.tgt])
            pos += 1
        elif op.kind == DELETE:
            pos += 1
        elif op.kind == TRANSPOSE:
            out.extend((source[pos + 1], source[pos]))
            pos += 2
        else:
            raise ValueError(f"unknown op {op.kind!r}")
    if pos != len(source):
        raise ValueError("ops do not consume the whole source")
    return out


def distance(a, b, allow_transpose=False):
    """Edit distance only; uses the compiled kernel when available."""
    if allow_transpose:
        return kernels.osa_distance(a, b)
    return kernels.levenshtein(a, b)


def _matrix(a, b, allow_transpose):
    n, m = len(a), len(b)
    d = [[0] * (m + 1) for _ in range(n + 1)]
    for i in range(n + 1):
        d[i][0] = i
    for j in range(m + 1):
        d[0][j] = j
    for i in range(1, n + 1):
        row, up = d[i], d[i - 1]
        ai = a[i - 1]
        for j in range(1, m + 1):
            v = min(up[j - 1] + (ai != b[j - 1]), up[j] + 1, row[j - 1] + 1)
            if (allow_transpose and i > 1 and j > 1
                    and ai == b[j - 2] and a[i - 2] == b[j - 1]):
                v = min(v, d[i - 2][j - 2] + 1)
            row[j] = v
    return d


def edit_distance(a, b, allow_transpose=False):
    """Minimal-cost alignment of sequence ``a`` onto ``b``.

    Works on strings or any sequences of hashable items (e.g. word lists).
    The backtrace runs from the end; at equal cost it prefers match, then
    substitute, delete, insert, transpose. Callers decide on casefolding.
    """
    d = _matrix(a, b, allow_transpose)
    i, j = len(a), len(b)
    ops = []
    while i > 0 or j > 0:
        here = d[i][j]
        if i > 0 and j > 0 and a[i - 1] == b[j - 1] and d[i - 1][j - 1] == here:
            ops.append(EditOp(MATCH, i - 1, j - 1))
            i, j = i - 1, j - 1
        elif i > 0 and j > 0 and d[i - 1][j - 1] + 1 == here:
            ops.append(EditOp(SUBSTITUTE, i - 1, j - 1))
            i, j = i - 1, j - 1
        elif i > 0 and d[i - 1][j] + 1 == here:
            ops.append(EditOp(DELETE, i - 1, j))
            i -= 1
        elif j > 0 and d[i][j - 1] + 1 == here:
            ops.append(EditOp(INSERT, i, j - 1))
            j -= 1
        else:
            # only a transposition can explain this cell
            ops.append(EditOp(TRANSPOSE, i - 2, j - 2))
            i, j = i - 2, j - 2
    ops.reverse()
    return EditAlignment(tuple(ops), d[len(a)][len(b)])
