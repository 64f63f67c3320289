"""Ordered fan-out of per-record work across a thread pool."""

import logging
from concurrent.futures import ThreadPoolExecutor

from .adapters import AdapterError

log = logging.getLogger(__name__)


def map_ordered(fn, items, jobs=1):
    """``[fn(x) for x in items]``, optionally on ``jobs`` threads; order is preserved."""
    items = list(items)
    if jobs <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items))


def noise_dataset(base, policies, ctx, jobs=1):
    """Apply the composed ``policies`` to every question of ``base``.

    Returns ``(noisy, flagged, failures)``: qid -> noisy text for records
    that succeeded, qids whose perturbation was flagged, and qid -> error
    message for records skipped after an adapter failure.
    """
    from .noisegen import apply_policies

    def work(q):
        try:
            return q.qid, apply_policies(policies, q.question, q.qid, ctx), None
        except AdapterError as exc:
            return q.qid, None, f"{exc.kind}: {exc}"

    noisy, flagged, failures = {}, [], {}
    for qid, result, error in map_ordered(work, base.questions, jobs):
        if error is not None:
            log.warning("skipping %s: %s", qid, error)
            failures[qid] = error
            continue
        text, flag = result
        noisy[qid] = text
        if flag:
            flagged.append(qid)
    return noisy, flagged, failures
