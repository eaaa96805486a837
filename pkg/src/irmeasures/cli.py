"""Command line interface.

    ir_measures path/to/qrels path/to/run 'nDCG@10 P(rel=2)@5 Judged@10'

Exit codes: 0 success, 1 usage error, 2 unreadable or malformed input file,
3 unknown or invalid measure.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Iterable, Sequence, TextIO

from . import __version__
from .errors import EvaluationError, MeasureError, TrecFormatError
from .evaluator import AggregateResult, Evaluator, QueryResult, plan
from .measure import Measure, parse_measure_list, render_measure
from .registry import BACKENDS
from .trec import read_trec_qrels, read_trec_run

EXIT_USAGE = 1
EXIT_INPUT = 2
EXIT_MEASURE = 3


class UsageError(Exception):
    pass


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _ArgumentParser(
        prog="ir_measures",
        description="Evaluate a TREC run against qrels with the requested measures.",
    )
    parser.add_argument("qrels", help="TREC qrels file: qid iter docid grade")
    parser.add_argument("run", help="TREC run file: qid Q0 docid rank score tag")
    parser.add_argument(
        "measures", nargs="+", help="measure expressions, e.g. 'nDCG@10 P(rel=2)@5 Judged@10'"
    )
    parser.add_argument("--by-query", action="store_true", help="also print per-query values")
    parser.add_argument(
        "--intersect",
        action="store_true",
        help="only evaluate queries present in both qrels and run",
    )
    parser.add_argument("--places", type=int, default=4, help="decimal places (1-10, default 4)")
    parser.add_argument("--format", choices=("tsv", "json"), default="tsv", dest="output_format")
    parser.add_argument("--backend", choices=BACKENDS, help="compute every measure with this backend")
    parser.add_argument("--jobs", type=int, default=1, help="evaluate queries in N threads")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    return parser


def is_count(m: Measure) -> bool:
    return m.schema.aggregator == "sum"


def format_value(value: float, places: int, integer: bool = False) -> str:
    """Fixed-point text with exactly ``places`` decimals; ``integer`` drops them."""
    if integer:
        return str(int(round(value)))
    # Formatting the exact binary value rounds half to even.
    return f"{value:.{places}f}"


def emit_tsv(
    aggregates: Sequence[AggregateResult],
    by_query: Sequence[QueryResult] | None,
    places: int,
) -> Iterable[str]:
    if by_query is not None:
        order = {a.measure: i for i, a in enumerate(aggregates)}
        for r in sorted(by_query, key=lambda r: (order[r.measure], r.query_id)):
            yield f"{r.measure}\t{r.query_id}\t{format_value(r.value, places, is_count(r.measure))}\n"
    for a in aggregates:
        yield f"{a.measure}\t{format_value(a.value, places, is_count(a.measure))}\n"


def _json_value(m: Measure, value: float):
    return int(round(value)) if is_count(m) else value


def emit_json(
    aggregates: Sequence[AggregateResult], by_query: Sequence[QueryResult] | None = None
) -> str:
    doc: dict = {
        "aggregates": {render_measure(a.measure): _json_value(a.measure, a.value) for a in aggregates}
    }
    if by_query is not None:
        order = {a.measure: i for i, a in enumerate(aggregates)}
        doc["by_query"] = [
            {"measure": render_measure(r.measure), "qid": r.query_id,
             "value": _json_value(r.measure, r.value)}
            for r in sorted(by_query, key=lambda r: (order[r.measure], r.query_id))
        ]
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def _read(reader, path):
    try:
        return reader(path)
    except TrecFormatError as e:
        raise TrecFormatError(f"{path}: {e}") from None


def run(args: argparse.Namespace, out: TextIO) -> None:
    measures = parse_measure_list(args.measures)
    if not measures:
        raise UsageError("no measures given")
    # Plan before touching files so measure errors win.
    measure_plan = plan(measures, args.backend)
    qrels = _read(read_trec_qrels, args.qrels)
    run_table = _read(read_trec_run, args.run)
    evaluator = Evaluator(
        measure_plan.measures, qrels, backend=args.backend, intersect=args.intersect, jobs=args.jobs
    )
    results = list(evaluator.iter_calc(run_table))
    aggregates = evaluator.aggregate(results)
    by_query = results if args.by_query else None
    if args.output_format == "json":
        out.write(emit_json(aggregates, by_query))
    else:
        out.writelines(emit_tsv(aggregates, by_query, args.places))


def main(argv: Sequence[str] | None = None, out: TextIO | None = None, err: TextIO | None = None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if not 1 <= args.places <= 10:
            raise UsageError(f"--places must be between 1 and 10, got {args.places}")
        if args.jobs < 1:
            raise UsageError(f"--jobs must be at least 1, got {args.jobs}")
        run(args, out)
    except SystemExit as e:  # --help / --version
        return e.code or 0
    except UsageError as e:
        parser.print_usage(err)
        print(f"ir_measures: error: {e}", file=err)
        return EXIT_USAGE
    except MeasureError as e:
        print(f"ir_measures: {e}", file=err)
        return EXIT_MEASURE
    except (TrecFormatError, EvaluationError) as e:
        print(f"ir_measures: {e}", file=err)
        return EXIT_INPUT
    except OSError as e:
        print(f"ir_measures: cannot read {e.filename}: {e.strerror}", file=err)
        return EXIT_INPUT
    return 0


if __name__ == "__main__":
    sys.exit(main())
