"""Information-retrieval evaluation from measure expressions.

    >>> import irmeasures
    >>> from irmeasures.names import *
    >>> qrels = irmeasures.read_trec_qrels("path/to/qrels")
    >>> run = irmeasures.read_trec_run("path/to/run")
    >>> irmeasures.calc_aggregate([nDCG@10, P(rel=2)@5, Judged@10], qrels, run)
"""

from .errors import EvaluationError, IrMeasuresError, MeasureError, TrecFormatError
from .evaluator import (
    AggregateResult,
    Evaluator,
    Plan,
    QueryResult,
    calc_aggregate,
    evaluator,
    iter_calc,
    plan,
)
from .measure import Measure, MeasureFactory, parse_measure, parse_measure_list, render_measure
from .ranking import Ranking, induce_ranking
from .registry import SCHEMAS, MeasureSchema, registry_lookup
from .trec import (
    QrelsEntry,
    QrelsTable,
    QueryJudgments,
    RunEntry,
    RunTable,
    parse_qrels,
    parse_run,
    read_trec_qrels,
    read_trec_run,
    write_qrels,
    write_run,
)

__version__ = "0.1.0"
