"""Ranking measures in the trec_eval / gdeval / MS MARCO family.

Every function takes an induced :class:`~irmeasures.ranking.Ranking`, the
query's :class:`~irmeasures.trec.QueryJudgments` and the measure parameters,
and returns a float. Conventions shared by all of them:

* unjudged documents are non-relevant (Judged, Bpref and infAP are the
  measures that look at judgment presence);
* negative grades are judged and non-relevant at every threshold;
* rankings shorter than a cutoff are padded with non-relevant documents;
* measures normalised by R return 0 when the query has no relevant documents.
"""

from __future__ import annotations

import math

from .ranking import Ranking
from .trec import QueryJudgments

INFAP_EPSILON = 1e-5


def precision_at_k(ranking: Ranking, judgments: QueryJudgments, rel: int, k: int) -> float:
    return sum(ranking.relevant(rel)[:k]) / k


def recall_at_k(ranking: Ranking, judgments: QueryJudgments, rel: int, k: int) -> float:
    num_rel = judgments.num_rel(rel)
    if num_rel == 0:
        return 0.0
    return sum(ranking.relevant(rel)[:k]) / num_rel


def average_precision(
    ranking: Ranking, judgments: QueryJudgments, rel: int, cutoff: int | None = None
) -> float:
    num_rel = judgments.num_rel(rel)
    if num_rel == 0:
        return 0.0
    hits = ranking.relevant(rel)[:cutoff]
    total = 0.0
    found = 0
    for i, hit in enumerate(hits, start=1):
        if hit:
            found += 1
            total += found / i
    return total / num_rel


def r_precision(ranking: Ranking, judgments: QueryJudgments, rel: int) -> float:
    num_rel = judgments.num_rel(rel)
    if num_rel == 0:
        return 0.0
    return precision_at_k(ranking, judgments, rel, num_rel)


def reciprocal_rank(
    ranking: Ranking, judgments: QueryJudgments, rel: int, cutoff: int | None = None
) -> float:
    # Absent, empty or fully unjudged rankings score 0 rather than failing.
    for i, hit in enumerate(ranking.relevant(rel)[:cutoff], start=1):
        if hit:
            return 1.0 / i
    return 0.0


def _dcg(gains: list[float]) -> float:
    return sum(g / math.log2(i + 1) for i, g in enumerate(gains, start=1))


def ndcg(
    ranking: Ranking, judgments: QueryJudgments, gain: str = "linear", cutoff: int | None = None
) -> float:
    """nDCG with linear gain ``max(g, 0)`` or exponential gain ``2**max(g, 0) - 1``.

    The exponential form is gdeval's, which puts more weight on highly relevant
    documents. The ideal DCG is computed from all judged documents, cut at the
    same depth.
    """
    if gain == "linear":
        to_gain = lambda g: float(max(g, 0))  # noqa: E731
    elif gain == "exp":
        to_gain = lambda g: 2.0 ** max(g, 0) - 1.0  # noqa: E731
    else:
        raise ValueError(f"unknown gain {gain!r}")
    gains = [0.0 if g is None else to_gain(g) for g in ranking.grades[:cutoff]]
    ideal = sorted((to_gain(g) for g in judgments.grades.values()), reverse=True)[:cutoff]
    idcg = _dcg(ideal)
    if idcg == 0.0:
        return 0.0
    return _dcg(gains) / idcg


def err_at_k(ranking: Ranking, judgments: QueryJudgments, k: int) -> float:
    """Expected reciprocal rank with stop probability ``(2**g - 1) / 2**g_max``.

    ``g_max`` is ``judgments.gain_scale``, the maximum grade of the whole qrels
    table when the judgments come from a :class:`~irmeasures.trec.QrelsTable`.
    """
    g_max = judgments.gain_scale
    if g_max <= 0:
        return 0.0
    denom = 2.0**g_max
    total = 0.0
    not_stopped = 1.0
    for i, g in enumerate(ranking.grades[:k], start=1):
        if g is None:
            continue
        stop = (2.0 ** max(g, 0) - 1.0) / denom
        total += not_stopped * stop / i
        not_stopped *= 1.0 - stop
    return total


def bpref(ranking: Ranking, judgments: QueryJudgments, rel: int) -> float:
    num_rel = judgments.num_rel(rel)
    if num_rel == 0:
        return 0.0
    bound = min(num_rel, judgments.num_nonrel(rel))
    total = 0.0
    nonrel_above = 0
    for g in ranking.grades:
        if g is None:
            continue
        if g >= rel:
            total += 1.0 if bound == 0 else 1.0 - min(nonrel_above, bound) / bound
        else:
            nonrel_above += 1
    return total / num_rel


def inf_ap(ranking: Ranking, judgments: QueryJudgments, rel: int) -> float:
    """Inferred AP: unjudged documents above a relevant one are estimated from
    the relevant fraction of the judged documents above it (smoothed by a
    small epsilon)."""
    num_rel = judgments.num_rel(rel)
    if num_rel == 0:
        return 0.0
    eps = INFAP_EPSILON
    total = 0.0
    judged_above = rel_above = nonrel_above = 0
    for k, g in enumerate(ranking.grades, start=1):
        if g is not None and g >= rel:
            if k == 1:
                total += 1.0
            else:
                total += 1.0 / k + ((k - 1) / k) * (judged_above / (k - 1)) * (
                    (rel_above + eps) / (rel_above + nonrel_above + 2 * eps)
                )
        if g is not None:
            judged_above += 1
            if g >= rel:
                rel_above += 1
            else:
                nonrel_above += 1
    return total / num_rel


def iprec_at_recall(
    ranking: Ranking, judgments: QueryJudgments, rel: int, recall_point: float
) -> float:
    """Highest precision at any rank whose recall reaches ``recall_point``."""
    num_rel = judgments.num_rel(rel)
    if num_rel == 0:
        return 0.0
    best = 0.0
    found = 0
    for i, hit in enumerate(ranking.relevant(rel), start=1):
        found += hit
        if found / num_rel >= recall_point:
            best = max(best, found / i)
    return best


def success_at_k(ranking: Ranking, judgments: QueryJudgments, rel: int, k: int) -> float:
    return 1.0 if any(ranking.relevant(rel)[:k]) else 0.0


def judged_at_k(ranking: Ranking, judgments: QueryJudgments, k: int) -> float:
    return sum(g is not None for g in ranking.grades[:k]) / k


def set_measures(
    ranking: Ranking, judgments: QueryJudgments, rel: int, beta: float = 1.0
) -> dict[str, float]:
    retrieved = len(ranking)
    num_rel = judgments.num_rel(rel)
    rel_ret = sum(ranking.relevant(rel))
    set_p = rel_ret / retrieved if retrieved else 0.0
    set_r = rel_ret / num_rel if num_rel else 0.0
    b2 = beta * beta
    denom = b2 * set_p + set_r
    set_f = (1 + b2) * set_p * set_r / denom if denom else 0.0
    return {"SetP": set_p, "SetR": set_r, "SetF": set_f, "SetAP": set_p * set_r}


def count_measures(ranking: Ranking, judgments: QueryJudgments, rel: int) -> dict[str, float]:
    return {
        "NumRet": float(len(ranking)),
        "NumRel": float(judgments.num_rel(rel)),
        "NumRelRet": float(sum(ranking.relevant(rel))),
    }
