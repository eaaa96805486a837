"""Compatibility: rank-biased overlap between a run and its closest ideal ranking."""

from __future__ import annotations

from typing import Sequence

from .ranking import Ranking
from .trec import QueryJudgments

DEFAULT_P = 0.95
DEFAULT_DEPTH = 1000


def greedy_ideal(judgments: QueryJudgments, ranking: Ranking | Sequence[str]) -> list[str]:
    """Order the positively graded documents by grade, settling ties in the run's favour.

    Within a grade, documents the run retrieved come first in run order, then
    the rest by doc id. This choice maximises overlap with the run at every
    depth, so it is the ideal ranking closest to the run.
    """
    doc_ids = ranking.doc_ids if isinstance(ranking, Ranking) else tuple(ranking)
    position = {doc: i for i, doc in enumerate(doc_ids)}
    missing = len(doc_ids)
    positive = [(doc, g) for doc, g in judgments.grades.items() if g > 0]
    positive.sort(key=lambda dg: (-dg[1], position.get(dg[0], missing), dg[0]))
    return [doc for doc, _ in positive]


def rbo_truncated(a: Sequence[str], b: Sequence[str], p: float, depth: int) -> float:
    """``(1 - p) * sum_{d<=depth} p**(d-1) * |a[:d] & b[:d]| / d``."""
    seen_a: set[str] = set()
    seen_b: set[str] = set()
    overlap = 0
    total = 0.0
    weight = 1.0
    for d in range(1, depth + 1):
        if d > len(a) and d > len(b):
            # Overlap is frozen from here on; finish with the remaining weights.
            total += overlap * sum(p ** (e - 1) / e for e in range(d, depth + 1))
            break
        x = a[d - 1] if d <= len(a) else None
        y = b[d - 1] if d <= len(b) else None
        if x is not None and x == y:
            overlap += 1
        else:
            if x is not None:
                overlap += x in seen_b
                seen_a.add(x)
            if y is not None:
                overlap += y in seen_a
                seen_b.add(y)
        total += weight * overlap / d
        weight *= p
    return (1.0 - p) * total


def compat(
    ranking: Ranking, judgments: QueryJudgments, p: float = DEFAULT_P, depth: int = DEFAULT_DEPTH
) -> float:
    ideal = greedy_ideal(judgments, ranking)
    if not ideal:
        return 0.0
    run = ranking.doc_ids
    # Normalising by the ideal against itself lets short qrels reach 1.0.
    return rbo_truncated(run, ideal, p, depth) / rbo_truncated(ideal, ideal, p, depth)
