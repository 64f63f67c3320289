import logging
from collections import Counter
from dataclasses import dataclass
from typing import NamedTuple

from ..textcore import normalize_answer

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class QAScore:
    """Aggregate EM and F1 as percentages over ``n`` questions."""

    em: float
    f1: float
    n: int
    missing: int = 0


class QuestionScore(NamedTuple):
    qid: str
    em: float
    f1: float
    answered: bool


def exact_match(prediction, gold):
    return float(normalize_answer(prediction) == normalize_answer(gold))


def token_f1(prediction, gold):
    pred = normalize_answer(prediction)
    ref = normalize_answer(gold)
    if not pred and not ref:
        return 1.0
    common = Counter(pred) & Counter(ref)
    same = sum(common.values())
    if same == 0:
        return 0.0
    precision = same / len(pred)
    recall = same / len(ref)
    return 2 * precision * recall / (precision + recall)


def score_question(prediction, golds):
    """Max EM and max F1 over the gold answers."""
    return (max(exact_match(prediction, g) for g in golds),
            max(token_f1(prediction, g) for g in golds))


def _gold_items(gold):
    questions = getattr(gold, "questions", gold)
    if isinstance(questions, dict):
        return list(questions.items())
    return [(q.qid, q.answer_texts()) for q in questions]


def qa_scores(predictions, gold):
    """Per-question scores; unanswered questions score 0 and are marked."""
    rows = []
    for qid, golds in _gold_items(gold):
        if qid not in predictions:
            rows.append(QuestionScore(qid, 0.0, 0.0, False))
            continue
        em, f1 = score_question(predictions[qid], golds)
        rows.append(QuestionScore(qid, em, f1, True))
    return rows


def aggregate(rows):
    if not rows:
        raise ValueError("cannot aggregate an empty set of questions")
    n = len(rows)
    return QAScore(100.0 * sum(r.em for r in rows) / n, 100.0 * sum(r.f1 for r in rows) / n, n,
                   sum(not r.answered for r in rows))


def qa_eval(predictions, gold):
    """SQuAD v1.1 EM/F1 of ``predictions`` (qid -> answer) against ``gold``.

    ``gold`` is a :class:`~qanoise.dataset.Dataset`, a list of question
    records, or a qid -> list-of-answer-strings mapping.
    """
    rows = qa_scores(predictions, gold)
    if not rows:
        raise ValueError("gold set is empty")
    score = aggregate(rows)
    if score.missing:
        log.warning("%d of %d questions have no prediction and score 0", score.missing, score.n)
    return score
