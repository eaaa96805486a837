"""C/W/L user-model measures.

A measure in the C/W/L framework is defined by its continuation probability
``C(i)``: the chance that a user who has just examined rank ``i`` goes on to
rank ``i + 1``. The chance of reaching rank ``i`` is ``V(i) = prod_{j<i} C(j)``
and the weight of rank ``i`` is ``W(i) = V(i) / sum_k V(k)``. The reported
value is the expected utility per examined document, ``sum_i W(i) * g_i``.

Continuations receive ``(i, cumulative_gain)`` where the cumulative gain
includes rank ``i`` itself. Ranks past the end of the ranking carry zero gain;
the weight mass they absorb is computed in closed form where one exists
(geometric and inverse-square tails) and numerically otherwise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

from .errors import EvaluationError
from .ranking import Ranking
from .trec import QueryJudgments

MAX_RANKS = 10_000
TAIL_TOL = 1e-12


def trigamma(x: float) -> float:
    """psi_1(x) = sum_{n>=0} 1 / (x + n)**2 for x > 0."""
    if x <= 0:
        raise ValueError("trigamma is only implemented for x > 0")
    acc = 0.0
    while x < 20.0:
        acc += 1.0 / (x * x)
        x += 1.0
    inv = 1.0 / x
    inv2 = inv * inv
    # Asymptotic series with Bernoulli-number coefficients.
    series = inv + inv2 / 2 + inv * inv2 * (
        1 / 6 - inv2 * (1 / 30 - inv2 * (1 / 42 - inv2 * (1 / 30 - inv2 * 5 / 66)))
    )
    return acc + series


@dataclass(frozen=True)
class ContinuationModel:
    """A browsing model.

    ``tail(depth, v_next, cum_gain)`` optionally returns ``sum_{i>depth} V(i)``
    given ``v_next = V(depth + 1)`` and the cumulative gain at ``depth``.
    """

    name: str
    continuation: Callable[[int, float], float]
    tail: Callable[[int, float, float], float] | None = None

    def __call__(self, i: int, cum_gain: float = 0.0) -> float:
        return self.continuation(i, cum_gain)


def constant_model(p: float) -> ContinuationModel:
    def tail(depth, v_next, cum):
        if p >= 1.0:
            raise EvaluationError("divergent expected depth")
        return v_next / (1.0 - p)

    return ContinuationModel(f"constant(p={p})", lambda i, cum: p, tail)


def truncation_model(k: int) -> ContinuationModel:
    """Reads exactly the top ``k`` ranks; reproduces P@k with binary gains."""
    return ContinuationModel(f"truncation(k={k})", lambda i, cum: 1.0 if i < k else 0.0)


def sdcg_model(k: int) -> ContinuationModel:
    def c(i, cum):
        return math.log(i + 1) / math.log(i + 2) if i < k else 0.0

    return ContinuationModel(f"sdcg(k={k})", c)


def reciprocal_rank_model(stop_at: int) -> ContinuationModel:
    """Continue until the first gain is found, or until rank ``stop_at``."""
    return ContinuationModel(
        f"rr(stop_at={stop_at})", lambda i, cum: 1.0 if cum <= 0.0 and i < stop_at else 0.0
    )


def _inverse_square_tail(offset: Callable[[float], float]):
    # With C(i) = ((i + a - 1) / (i + a))**2 past the ranking, the product
    # telescopes to V(i) = V(d+1) * ((d + a) / (i + a - 1))**2.
    def tail(depth, v_next, cum):
        a = offset(cum)
        return v_next * (depth + a) ** 2 * trigamma(depth + a)

    return tail


def inst_model(T: float) -> ContinuationModel:
    def c(i, cum):
        x = i + T + cum
        return ((x - 1.0) / x) ** 2

    return ContinuationModel(f"INST(T={T})", c, _inverse_square_tail(lambda cum: T + cum))


def insq_model(T: float) -> ContinuationModel:
    def c(i, cum):
        x = i + 2.0 * T
        return ((x - 1.0) / x) ** 2

    return ContinuationModel(f"INSQ(T={T})", c, _inverse_square_tail(lambda cum: 2.0 * T))


@dataclass(frozen=True)
class Weights:
    """Normalised rank weights: ``head`` covers ranks 1..depth, ``tail`` is the
    total weight of every later rank."""

    head: tuple[float, ...]
    tail: float

    def total(self) -> float:
        return math.fsum(self.head) + self.tail


def _numeric_tail(model, depth, v_next, cum, tail_tol):
    terms = []
    v = v_next
    i = depth + 1
    limit = max(MAX_RANKS, depth + 1)
    while v > 0.0 and i <= limit:
        terms.append(v)
        if v < tail_tol:
            break
        v *= model(i, cum)
        i += 1
    else:
        # Exhausted the rank budget: harmonic-or-slower decay does not converge.
        if v > 0.0 and v * i >= 1.0:
            raise EvaluationError("divergent expected depth")
    return math.fsum(terms)


def weights_from_continuation(
    model: ContinuationModel, gains: Sequence[float], depth: int, tail_tol: float = TAIL_TOL
) -> Weights:
    if tail_tol <= 0:
        raise ValueError("tail_tol must be positive")
    head = []
    v = 1.0
    cum = 0.0
    for i in range(1, depth + 1):
        head.append(v)
        if v == 0.0:
            continue
        cum += gains[i - 1] if i <= len(gains) else 0.0
        v *= model(i, cum)
    if v == 0.0:
        tail = 0.0
    elif model.tail is not None:
        tail = model.tail(depth, v, cum)
    else:
        tail = _numeric_tail(model, depth, v, cum, tail_tol)
    z = math.fsum(head) + tail
    if not math.isfinite(z):
        raise EvaluationError("divergent expected depth")
    return Weights(tuple(x / z for x in head), tail / z)


def expected_utility(weights: Weights | Sequence[float], gains: Sequence[float]) -> float:
    head = weights.head if isinstance(weights, Weights) else weights
    return math.fsum(w * g for w, g in zip(head, gains))


def map_gains(ranking: Ranking, judgments: QueryJudgments) -> list[float]:
    """Linear gain ``max(grade, 0) / g_max``, with ``g_max`` the table's top grade."""
    g_max = judgments.gain_scale
    if g_max <= 0:
        return [0.0] * len(ranking)
    return [0.0 if g is None else min(max(g, 0) / g_max, 1.0) for g in ranking.grades]


def binary_gains(ranking: Ranking, rel: int = 1) -> list[float]:
    return [1.0 if hit else 0.0 for hit in ranking.relevant(rel)]


def evaluate_model(model: ContinuationModel, gains: Sequence[float]) -> float:
    if not gains:
        # Nothing to examine still has a well-defined (zero) utility.
        return 0.0
    return expected_utility(weights_from_continuation(model, gains, len(gains)), gains)


def rbp(ranking: Ranking, judgments: QueryJudgments, p: float, graded: bool = False) -> float:
    gains = map_gains(ranking, judgments) if graded else binary_gains(ranking, 1)
    return evaluate_model(constant_model(p), gains)


def sdcg(ranking: Ranking, judgments: QueryJudgments, k: int) -> float:
    return evaluate_model(sdcg_model(k), map_gains(ranking, judgments))


def inst(ranking: Ranking, judgments: QueryJudgments, T: float = 1.0) -> float:
    return evaluate_model(inst_model(T), map_gains(ranking, judgments))


def insq(ranking: Ranking, judgments: QueryJudgments, T: float = 1.0) -> float:
    return evaluate_model(insq_model(T), map_gains(ranking, judgments))


def precision(ranking: Ranking, judgments: QueryJudgments, rel: int, k: int) -> float:
    return evaluate_model(truncation_model(k), binary_gains(ranking, rel))


def reciprocal_rank(
    ranking: Ranking, judgments: QueryJudgments, rel: int, cutoff: int | None = None
) -> float:
    stop_at = cutoff if cutoff is not None else len(ranking)
    return evaluate_model(reciprocal_rank_model(stop_at), binary_gains(ranking, rel))
