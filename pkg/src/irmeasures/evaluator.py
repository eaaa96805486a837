"""Routing measures to backends and evaluating runs against qrels.

Requested measures are grouped by the backend that computes them; each group
is one backend pass over the queries. Per-query evaluation is pure, so it may
run in a thread pool (``jobs > 1``); results are always emitted in query-id
order, making output independent of scheduling.
"""

from __future__ import annotations

import itertools
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Iterable, Iterator, Mapping, NamedTuple, Sequence

from . import cwl, rank_measures
from .compat import compat
from .errors import EvaluationError, MeasureError
from .measure import Measure, MeasureLike, as_measure
from .ranking import Ranking, induce_ranking
from .registry import BACKENDS, COMPAT, COMPAT_DEFAULT_DEPTH, CWL, RANK
from .trec import QrelsTable, QueryJudgments, RunTable, parse_qrels, parse_run, read_trec_qrels, read_trec_run


class QueryResult(NamedTuple):
    measure: Measure
    query_id: str
    value: float


class AggregateResult(NamedTuple):
    measure: Measure
    value: float
    n_queries: int


MeasureFn = Callable[[Ranking, QueryJudgments, Measure], float]


class Backend:
    """A family of measure implementations sharing one pass over a ranking."""

    name: str = ""
    functions: Mapping[str, MeasureFn] = {}

    def supports(self, m: Measure) -> bool:
        return m.name in self.functions

    def compute(
        self, measures: Sequence[Measure], ranking: Ranking, judgments: QueryJudgments
    ) -> list[float]:
        return [self.functions[m.name](ranking, judgments, m) for m in measures]


def _rel(m: Measure) -> int:
    return m.kw.get("rel", 1)


class RankBackend(Backend):
    name = RANK
    functions = {
        "P": lambda r, j, m: rank_measures.precision_at_k(r, j, _rel(m), m.cutoff),
        "R": lambda r, j, m: rank_measures.recall_at_k(r, j, _rel(m), m.cutoff),
        "AP": lambda r, j, m: rank_measures.average_precision(r, j, _rel(m), m.cutoff),
        "RR": lambda r, j, m: rank_measures.reciprocal_rank(r, j, _rel(m), m.cutoff),
        "nDCG": lambda r, j, m: rank_measures.ndcg(r, j, m.param("gain"), m.cutoff),
        "ERR": lambda r, j, m: rank_measures.err_at_k(r, j, m.cutoff),
        "Bpref": lambda r, j, m: rank_measures.bpref(r, j, _rel(m)),
        "infAP": lambda r, j, m: rank_measures.inf_ap(r, j, _rel(m)),
        "IPrec": lambda r, j, m: rank_measures.iprec_at_recall(r, j, _rel(m), m.cutoff),
        "Rprec": lambda r, j, m: rank_measures.r_precision(r, j, _rel(m)),
        "Success": lambda r, j, m: rank_measures.success_at_k(r, j, _rel(m), m.cutoff),
        "Judged": lambda r, j, m: rank_measures.judged_at_k(r, j, m.cutoff),
        "SetP": lambda r, j, m: rank_measures.set_measures(r, j, _rel(m))["SetP"],
        "SetR": lambda r, j, m: rank_measures.set_measures(r, j, _rel(m))["SetR"],
        "SetF": lambda r, j, m: rank_measures.set_measures(r, j, _rel(m), m.param("beta"))["SetF"],
        "SetAP": lambda r, j, m: rank_measures.set_measures(r, j, _rel(m))["SetAP"],
        "NumQ": lambda r, j, m: 1.0,
        "NumRel": lambda r, j, m: rank_measures.count_measures(r, j, _rel(m))["NumRel"],
        "NumRet": lambda r, j, m: float(len(r)),
        "NumRelRet": lambda r, j, m: rank_measures.count_measures(r, j, _rel(m))["NumRelRet"],
    }


class CwlBackend(Backend):
    name = CWL
    functions = {
        "RBP": lambda r, j, m: cwl.rbp(r, j, m.param("p"), graded=m.param("gain") == "graded"),
        "SDCG": lambda r, j, m: cwl.sdcg(r, j, m.cutoff),
        "INST": lambda r, j, m: cwl.inst(r, j, m.param("T")),
        "INSQ": lambda r, j, m: cwl.insq(r, j, m.param("T")),
        "P": lambda r, j, m: cwl.precision(r, j, _rel(m), m.cutoff),
        "RR": lambda r, j, m: cwl.reciprocal_rank(r, j, _rel(m), m.cutoff),
    }


class CompatBackend(Backend):
    name = COMPAT
    functions = {
        "Compat": lambda r, j, m: compat(
            r, j, m.param("p"), m.cutoff if m.cutoff is not None else COMPAT_DEFAULT_DEPTH
        ),
    }


BACKEND_IMPLS: Mapping[str, Backend] = {
    b.name: b for b in (RankBackend(), CwlBackend(), CompatBackend())
}
assert set(BACKEND_IMPLS) == set(BACKENDS)


@dataclass(frozen=True)
class Plan:
    """Measures grouped by backend; ``passes`` is the number of backend passes."""

    measures: tuple[Measure, ...]
    groups: tuple[tuple[str, tuple[Measure, ...]], ...]

    @property
    def passes(self) -> int:
        return len(self.groups)

    def as_dict(self) -> dict[str, list[Measure]]:
        return {backend: list(ms) for backend, ms in self.groups}


def plan(measures: Iterable[MeasureLike], backend: str | None = None) -> Plan:
    """Group measures by backend, in order of first appearance.

    ``backend`` forces every measure onto one backend; a measure that backend
    cannot compute is an error rather than a silent fallback.
    """
    if backend is not None and backend not in BACKEND_IMPLS:
        raise MeasureError(f"unknown backend: {backend} (choose from {', '.join(BACKENDS)})")
    ordered = list(dict.fromkeys(as_measure(m) for m in measures))
    groups: dict[str, list[Measure]] = {}
    for m in ordered:
        target = backend or m.schema.backend
        if not BACKEND_IMPLS[target].supports(m):
            raise MeasureError(f"backend {target} cannot compute {m}")
        groups.setdefault(target, []).append(m)
    return Plan(tuple(ordered), tuple((b, tuple(ms)) for b, ms in groups.items()))


def as_qrels(qrels) -> QrelsTable:
    """Accept a QrelsTable, a path, a ``{qid: {doc: grade}}`` mapping, or an
    iterable of lines or entries."""
    if isinstance(qrels, QrelsTable):
        return qrels
    if isinstance(qrels, (str, os.PathLike)):
        return read_trec_qrels(qrels)
    if isinstance(qrels, Mapping):
        return QrelsTable(qrels)
    first, items = _peek(qrels)
    if isinstance(first, str):
        return parse_qrels(items)
    return QrelsTable.from_entries(items)


def as_run(run) -> RunTable:
    """Accept a RunTable, a path, a ``{qid: {doc: score}}`` mapping, or an
    iterable of lines or entries."""
    if isinstance(run, RunTable):
        return run
    if isinstance(run, (str, os.PathLike)):
        return read_trec_run(run)
    if isinstance(run, Mapping):
        return RunTable(run)
    first, items = _peek(run)
    if isinstance(first, str):
        return parse_run(items)
    return RunTable.from_entries(items)


def _peek(items):
    it = iter(items)
    try:
        first = next(it)
    except StopIteration:
        return None, iter(())
    return first, itertools.chain([first], it)


class Evaluator:
    """Frozen qrels plus a measure plan, reusable across runs."""

    def __init__(
        self,
        measures: Iterable[MeasureLike],
        qrels,
        backend: str | None = None,
        intersect: bool = False,
        jobs: int = 1,
    ):
        self.plan = plan(measures, backend)
        self.qrels = as_qrels(qrels)
        self.intersect = intersect
        self.jobs = max(1, int(jobs))
        self._query_ids = tuple(sorted(self.qrels))

    @property
    def measures(self) -> tuple[Measure, ...]:
        return self.plan.measures

    def query_ids(self, run: RunTable) -> tuple[str, ...]:
        if self.intersect:
            return tuple(q for q in self._query_ids if q in run)
        return self._query_ids

    def _evaluate_query(self, qid: str, run: RunTable) -> list[QueryResult]:
        judgments = self.qrels[qid]
        ranking = induce_ranking(run.get(qid, ()), judgments)
        values: dict[Measure, float] = {}
        for backend, measures in self.plan.groups:
            values.update(zip(measures, BACKEND_IMPLS[backend].compute(measures, ranking, judgments)))
        return [QueryResult(m, qid, values[m]) for m in self.plan.measures]

    def iter_calc(self, run) -> Iterator[QueryResult]:
        """Per-query results ordered by query id, then by measure request order."""
        run = as_run(run)
        qids = self.query_ids(run)
        if self.jobs > 1 and len(qids) > 1:
            with ThreadPoolExecutor(max_workers=self.jobs) as pool:
                per_query = list(pool.map(lambda q: self._evaluate_query(q, run), qids))
        else:
            per_query = (self._evaluate_query(q, run) for q in qids)
        for results in per_query:
            yield from results

    def aggregate(self, results: Iterable[QueryResult]) -> list[AggregateResult]:
        by_measure: dict[Measure, list[float]] = {m: [] for m in self.plan.measures}
        for r in results:
            by_measure[r.measure].append(r.value)
        n = len(next(iter(by_measure.values()), []))
        if n == 0:
            raise EvaluationError("no overlapping queries")
        out = []
        for m, values in by_measure.items():
            total = math.fsum(values)
            value = total if m.schema.aggregator == "sum" else total / n
            out.append(AggregateResult(m, value, n))
        return out

    def calc_aggregate(self, run) -> dict[Measure, float]:
        return {a.measure: a.value for a in self.aggregate(self.iter_calc(run))}


def evaluator(measures: Iterable[MeasureLike], qrels, **kwargs) -> Evaluator:
    return Evaluator(measures, qrels, **kwargs)


def iter_calc(measures: Iterable[MeasureLike], qrels, run, **kwargs) -> Iterator[QueryResult]:
    return Evaluator(measures, qrels, **kwargs).iter_calc(run)


def calc_aggregate(measures: Iterable[MeasureLike], qrels, run, **kwargs) -> dict[Measure, float]:
    return Evaluator(measures, qrels, **kwargs).calc_aggregate(run)
