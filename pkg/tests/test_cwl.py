import math
import random

import mpmath
import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from irmeasures import EvaluationError, QueryJudgments, Ranking
from irmeasures import cwl
from irmeasures import rank_measures as rm


def direct_eu(continuation, gains, n=200_000):
    """Expected utility by summing V(i) directly, Richardson-extrapolating the
    normaliser in the number of summed ranks."""

    def partial(limit):
        v, cum, z, num = 1.0, 0.0, math.fsum([]), 0.0
        terms = []
        for i in range(1, limit + 1):
            g = gains[i - 1] if i <= len(gains) else 0.0
            terms.append(v)
            num += v * g
            cum += g
            v *= continuation(i, cum)
        return math.fsum(terms), num

    s1, num = partial(n)
    s2, _ = partial(2 * n)
    s4, _ = partial(4 * n)
    # S(N) = Z - a/N - b/N^2 ...: two Richardson steps.
    r1 = 2 * s2 - s1
    r2 = 2 * s4 - s2
    z = (4 * r2 - r1) / 3
    return num / z


def inst_c(T):
    return lambda i, cum: ((i + T + cum - 1) / (i + T + cum)) ** 2


def insq_c(T):
    return lambda i, cum: ((i + 2 * T - 1) / (i + 2 * T)) ** 2


def test_map_gains(ranking_a, judgments_a):
    assert cwl.map_gains(ranking_a, judgments_a) == [1.0, 0.0, 0.5]
    binary = QueryJudgments({"a": 1, "b": 0})
    assert cwl.map_gains(Ranking(("a", "b", "c"), (1, 0, None)), binary) == [1.0, 0.0, 0.0]
    zeros = QueryJudgments({"a": 0, "b": -1})
    assert cwl.map_gains(Ranking(("a", "b"), (0, -1)), zeros) == [0.0, 0.0]


def test_geometric_weights():
    w = cwl.weights_from_continuation(cwl.constant_model(0.5), [0, 0, 0, 0], 4)
    assert w.head == pytest.approx([0.5, 0.25, 0.125, 0.0625])
    assert w.tail == pytest.approx(0.0625)


def test_truncation_weights():
    w = cwl.weights_from_continuation(cwl.truncation_model(3), [1, 0, 0.5], 3)
    assert w.head == pytest.approx([1 / 3] * 3)
    assert w.tail == 0.0
    assert cwl.expected_utility(w, [1, 0, 0.5]) == pytest.approx(0.5)


def test_truncation_beyond_ranking_length():
    w = cwl.weights_from_continuation(cwl.truncation_model(10), [1, 1], 2)
    assert w.head == pytest.approx([0.1, 0.1])
    assert w.tail == pytest.approx(0.8)


def test_expected_utility_trivia():
    assert cwl.expected_utility([1 / 3] * 3, [0, 0, 0]) == 0.0
    assert cwl.expected_utility([1.0, 0.0], [0.7, 1.0]) == 0.7


def test_divergent_model():
    always = cwl.ContinuationModel("always", lambda i, cum: 1.0)
    with pytest.raises(EvaluationError, match="divergent expected depth"):
        cwl.weights_from_continuation(always, [1.0], 1)
    with pytest.raises(EvaluationError, match="divergent"):
        cwl.weights_from_continuation(cwl.constant_model(1.0), [1.0], 1)


def test_numeric_tail_matches_closed_form():
    model = cwl.constant_model(0.7)
    numeric = cwl.ContinuationModel("p07", model.continuation)
    gains = [1.0, 0.0, 0.5]
    a = cwl.weights_from_continuation(model, gains, 3)
    b = cwl.weights_from_continuation(numeric, gains, 3)
    assert a.head == pytest.approx(b.head, abs=1e-11)


def test_rbp_instance_a(ranking_a, judgments_a):
    assert cwl.rbp(ranking_a, judgments_a, 0.5) == pytest.approx(0.625, abs=1e-12)
    assert cwl.rbp(ranking_a, judgments_a, 0.5, graded=True) == pytest.approx(0.5625, abs=1e-12)


@pytest.mark.parametrize("n,p", [(1, 0.5), (3, 0.8), (7, 0.95)])
def test_rbp_all_relevant(n, p):
    j = QueryJudgments({f"d{i}": 1 for i in range(1, n + 1)})
    r = Ranking.from_grades([1] * n)
    assert cwl.rbp(r, j, p) == pytest.approx(1 - p**n, abs=1e-12)


def test_sdcg_instance_a(ranking_a, judgments_a):
    assert cwl.sdcg(ranking_a, judgments_a, 3) == pytest.approx(0.58660, abs=1e-5)
    ideal = QueryJudgments({f"d{i}": 2 for i in range(1, 6)})
    assert cwl.sdcg(Ranking.from_grades([2] * 5), ideal, 5) == pytest.approx(1.0)
    assert cwl.sdcg(Ranking.from_grades([0, 0]), ideal, 5) == 0.0


def test_inst_insq_instance_a_against_direct_sum(ranking_a, judgments_a):
    gains = [1.0, 0.0, 0.5]
    assert cwl.inst(ranking_a, judgments_a, 1.0) == pytest.approx(direct_eu(inst_c(1.0), gains), abs=1e-9)
    assert cwl.insq(ranking_a, judgments_a, 1.0) == pytest.approx(direct_eu(insq_c(1.0), gains), abs=1e-9)


def test_inst_and_insq_differ_on_zero_gains():
    # With no gain INST's continuation uses T where INSQ uses 2T; the two
    # models still differ and both normalise.
    gains = [0.0, 0.0, 0.0]
    wi = cwl.weights_from_continuation(cwl.inst_model(1.0), gains, 3)
    wq = cwl.weights_from_continuation(cwl.insq_model(1.0), gains, 3)
    assert wi.head != pytest.approx(wq.head)
    assert wi.total() == pytest.approx(1.0, abs=1e-9)
    assert wq.total() == pytest.approx(1.0, abs=1e-9)


def test_inst_weights_against_direct_sum():
    rng = random.Random(3)
    for _ in range(5):
        gains = [rng.choice([0.0, 0.5, 1.0]) for _ in range(rng.randint(1, 6))]
        T = rng.choice([0.5, 1.0, 3.0])
        j = QueryJudgments({f"d{i}": int(g * 2) for i, g in enumerate(gains, start=1)} | {"top": 2})
        r = Ranking.from_grades([int(g * 2) for g in gains])
        assert cwl.inst(r, j, T) == pytest.approx(direct_eu(inst_c(T), gains, n=50_000), abs=1e-9)


@pytest.mark.parametrize("x", [0.01, 0.5, 1.0, 2.5, 7.0, 19.9, 20.0, 123.4, 1e6])
def test_trigamma(x):
    assert cwl.trigamma(x) == pytest.approx(float(mpmath.psi(1, x)), rel=1e-13)


def test_cwl_precision_and_rr_match_rank_measures(ranking_a, judgments_a):
    for k in range(1, 6):
        assert cwl.precision(ranking_a, judgments_a, 1, k) == pytest.approx(
            rm.precision_at_k(ranking_a, judgments_a, 1, k), abs=1e-12
        )
    for cutoff in (None, 1, 2, 5):
        assert cwl.reciprocal_rank(ranking_a, judgments_a, 2, cutoff) == pytest.approx(
            rm.reciprocal_rank(ranking_a, judgments_a, 2, cutoff), abs=1e-12
        )
    assert cwl.reciprocal_rank(Ranking(), judgments_a, 1) == 0.0


gain_lists = st.lists(st.sampled_from([0.0, 0.25, 0.5, 1.0]), min_size=1, max_size=10)
models = st.one_of(
    st.floats(0.01, 0.99).map(cwl.constant_model),
    st.integers(1, 12).map(cwl.truncation_model),
    st.integers(1, 12).map(cwl.sdcg_model),
    st.floats(0.1, 5.0).map(cwl.inst_model),
    st.floats(0.1, 5.0).map(cwl.insq_model),
    st.integers(1, 12).map(cwl.reciprocal_rank_model),
)


@given(models, gain_lists)
def test_weights_are_a_distribution(model, gains):
    w = cwl.weights_from_continuation(model, gains, len(gains))
    assert abs(w.total() - 1.0) <= 1e-9
    assert all(x >= 0 for x in w.head)


@given(gain_lists, st.floats(0.01, 0.99))
def test_constant_model_is_rbp_closed_form(gains, p):
    got = cwl.evaluate_model(cwl.constant_model(p), gains)
    assert got == pytest.approx(oracles.rbp_closed_form(gains, p), abs=1e-9)


@given(gain_lists)
def test_rbp_limit_small_p(gains):
    assert cwl.evaluate_model(cwl.constant_model(1e-9), gains) == pytest.approx(gains[0], abs=1e-6)


@given(gain_lists, st.integers(0, 9), st.floats(0.1, 0.9))
def test_more_gain_never_hurts_fixed_weight_models(gains, idx, bump):
    idx = idx % len(gains)
    better = list(gains)
    better[idx] = min(1.0, better[idx] + bump)
    for model in (cwl.constant_model(0.8), cwl.sdcg_model(5), cwl.insq_model(1.0)):
        assert cwl.evaluate_model(model, better) >= cwl.evaluate_model(model, gains) - 1e-15
