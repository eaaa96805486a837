"""Reading and writing TREC qrels and run files.

Qrels lines are ``qid iter docid grade``; run lines are
``qid Q0 docid rank score tag``. Fields are separated by any run of spaces or
tabs. Grades must be integers and scores finite decimal numbers; the rank
column of a run is carried by the format but ignored, since rankings are
always induced from scores.
"""

from __future__ import annotations

import bisect
import math
import os
import re
from collections.abc import Mapping
from dataclasses import dataclass
from pathlib import Path
from types import MappingProxyType
from typing import Iterable, Iterator, Union

from .errors import TrecFormatError
from .ranking import order_by_score

_FIELD_SEP = re.compile(r"[ \t]+")
_INT = re.compile(r"[+-]?[0-9]+", re.ASCII)
_FLOAT = re.compile(r"[+-]?(?:[0-9]+(?:\.[0-9]*)?|\.[0-9]+)(?:[eE][+-]?[0-9]+)?", re.ASCII)
_NON_FINITE = re.compile(r"[+-]?(?:nan|inf|infinity)", re.IGNORECASE)

Source = Union[str, os.PathLike, Iterable[str]]


@dataclass(frozen=True)
class QrelsEntry:
    query_id: str
    doc_id: str
    grade: int
    iteration: str = "0"


@dataclass(frozen=True)
class RunEntry:
    query_id: str
    doc_id: str
    score: float
    rank: int = 0
    tag: str = "run"
    literal_q0: str = "Q0"


class QueryJudgments:
    """Relevance judgments for a single query.

    ``gain_scale`` is the maximum grade used to normalise graded gains (ERR and
    the C/W/L gain mapping). Inside a :class:`QrelsTable` it is the maximum grade
    of the whole table; standalone it defaults to this query's own maximum.
    """

    __slots__ = ("_grades", "_sorted", "gain_scale")

    def __init__(self, grades: Mapping[str, int], gain_scale: int | None = None):
        self._grades = MappingProxyType(dict(grades))
        self._sorted = sorted(self._grades.values())
        if gain_scale is None:
            gain_scale = self._sorted[-1] if self._sorted else 0
        self.gain_scale = gain_scale

    @property
    def grades(self) -> Mapping[str, int]:
        return self._grades

    @property
    def judged(self) -> frozenset[str]:
        return frozenset(self._grades)

    @property
    def num_judged(self) -> int:
        return len(self._sorted)

    @property
    def max_grade(self) -> int | None:
        return self._sorted[-1] if self._sorted else None

    def grade(self, doc_id: str) -> int | None:
        return self._grades.get(doc_id)

    def num_rel(self, threshold: int) -> int:
        """R(t): number of judged documents with grade >= ``threshold``."""
        return len(self._sorted) - bisect.bisect_left(self._sorted, threshold)

    def num_nonrel(self, threshold: int) -> int:
        """N(t): number of judged documents with grade < ``threshold``."""
        return bisect.bisect_left(self._sorted, threshold)

    def __eq__(self, other):
        if not isinstance(other, QueryJudgments):
            return NotImplemented
        return dict(self._grades) == dict(other._grades)

    def __repr__(self):
        return f"QueryJudgments({dict(self._grades)!r})"


class QrelsTable(Mapping):
    """Immutable mapping ``query_id -> QueryJudgments``."""

    def __init__(self, judgments: Mapping[str, Mapping[str, int]] | None = None):
        judgments = judgments or {}
        grades = [g for docs in judgments.values() for g in docs.values()]
        self.max_grade = max(grades) if grades else 0
        self._queries = {
            qid: QueryJudgments(docs, gain_scale=self.max_grade)
            for qid, docs in judgments.items()
            if docs
        }

    @classmethod
    def from_entries(cls, entries: Iterable[QrelsEntry | tuple]) -> "QrelsTable":
        table: dict[str, dict[str, int]] = {}
        for entry in entries:
            if not isinstance(entry, QrelsEntry):
                entry = QrelsEntry(*entry)
            _check_id(entry.query_id, "query id")
            _check_id(entry.doc_id, "doc id")
            if isinstance(entry.grade, bool) or not isinstance(entry.grade, int):
                raise TrecFormatError(f"grade must be an integer, got {entry.grade!r}")
            docs = table.setdefault(entry.query_id, {})
            if entry.doc_id in docs:
                raise TrecFormatError(
                    f"duplicate judgment for query {entry.query_id!r}, doc {entry.doc_id!r}"
                )
            docs[entry.doc_id] = entry.grade
        return cls(table)

    def __getitem__(self, qid: str) -> QueryJudgments:
        return self._queries[qid]

    def __iter__(self) -> Iterator[str]:
        return iter(self._queries)

    def __len__(self) -> int:
        return len(self._queries)

    def entries(self) -> Iterator[QrelsEntry]:
        for qid, judgments in self._queries.items():
            for doc, grade in judgments.grades.items():
                yield QrelsEntry(qid, doc, grade)

    def __repr__(self):
        return f"QrelsTable({len(self)} queries)"


class RunTable(Mapping):
    """Immutable mapping ``query_id -> ((doc_id, score), ...)`` in file order.

    Equality is semantic: two runs are equal when every query maps the same
    documents to the same scores, whatever the order they were read in.
    """

    def __init__(self, run: Mapping[str, Iterable[tuple[str, float]]] | None = None):
        self._queries: dict[str, tuple[tuple[str, float], ...]] = {}
        for qid, pairs in (run or {}).items():
            if isinstance(pairs, Mapping):
                pairs = pairs.items()
            pairs = tuple((doc, float(score)) for doc, score in pairs)
            if len({doc for doc, _ in pairs}) != len(pairs):
                raise TrecFormatError(f"duplicate document in run for query {qid!r}")
            for _, score in pairs:
                if not math.isfinite(score):
                    raise TrecFormatError(f"non-finite score in run for query {qid!r}")
            if pairs:
                self._queries[qid] = pairs

    @classmethod
    def from_entries(cls, entries: Iterable[RunEntry | tuple]) -> "RunTable":
        table: dict[str, list[tuple[str, float]]] = {}
        seen: set[tuple[str, str]] = set()
        for entry in entries:
            if not isinstance(entry, RunEntry):
                entry = RunEntry(*entry)
            _check_id(entry.query_id, "query id")
            _check_id(entry.doc_id, "doc id")
            key = (entry.query_id, entry.doc_id)
            if key in seen:
                raise TrecFormatError(
                    f"duplicate document {entry.doc_id!r} for query {entry.query_id!r}"
                )
            seen.add(key)
            table.setdefault(entry.query_id, []).append((entry.doc_id, entry.score))
        return cls(table)

    def __getitem__(self, qid: str) -> tuple[tuple[str, float], ...]:
        return self._queries[qid]

    def __iter__(self) -> Iterator[str]:
        return iter(self._queries)

    def __len__(self) -> int:
        return len(self._queries)

    def __eq__(self, other):
        if not isinstance(other, RunTable):
            return NotImplemented
        return {q: dict(p) for q, p in self._queries.items()} == {
            q: dict(p) for q, p in other._queries.items()
        }

    def __repr__(self):
        return f"RunTable({len(self)} queries)"


def _check_id(value, what: str) -> None:
    if not isinstance(value, str) or not value:
        raise TrecFormatError(f"{what} must be a non-empty string, got {value!r}")


def _split(line: str) -> list[str]:
    line = line.strip(" \t\r\n")
    if not line:
        return []
    return _FIELD_SEP.split(line)


def _parse_float(token: str, lineno: int) -> float:
    if _NON_FINITE.fullmatch(token):
        raise TrecFormatError(f"non-finite score {token!r}", lineno)
    if not _FLOAT.fullmatch(token):
        raise TrecFormatError(f"non-numeric score {token!r}", lineno)
    value = float(token)
    if not math.isfinite(value):
        raise TrecFormatError(f"non-finite score {token!r}", lineno)
    return value


def parse_qrels(lines: Iterable[str]) -> QrelsTable:
    table: dict[str, dict[str, int]] = {}
    for lineno, line in enumerate(lines, start=1):
        fields = _split(line)
        if not fields:
            continue
        if len(fields) < 4:
            raise TrecFormatError(
                f"expected 'qid iter docid grade', got {len(fields)} field(s)", lineno
            )
        qid, _iteration, doc, grade = fields[:4]
        if not _INT.fullmatch(grade):
            raise TrecFormatError(f"grade must be an integer, got {grade!r}", lineno)
        docs = table.setdefault(qid, {})
        if doc in docs:
            raise TrecFormatError(f"duplicate judgment for query {qid!r}, doc {doc!r}", lineno)
        docs[doc] = int(grade)
    return QrelsTable(table)


def parse_run(lines: Iterable[str]) -> RunTable:
    table: dict[str, list[tuple[str, float]]] = {}
    seen: set[tuple[str, str]] = set()
    for lineno, line in enumerate(lines, start=1):
        fields = _split(line)
        if not fields:
            continue
        if len(fields) != 6:
            raise TrecFormatError(
                f"expected 'qid Q0 docid rank score tag', got {len(fields)} field(s)", lineno
            )
        qid, _q0, doc, _rank, score, _tag = fields
        value = _parse_float(score, lineno)
        if (qid, doc) in seen:
            raise TrecFormatError(f"duplicate document {doc!r} for query {qid!r}", lineno)
        seen.add((qid, doc))
        table.setdefault(qid, []).append((doc, value))
    return RunTable(table)


def write_run(table: RunTable, tag: str = "run") -> Iterator[str]:
    """Yield run lines (without newlines), ranks renumbered in score order."""
    for qid in sorted(table):
        for rank, (doc, score) in enumerate(order_by_score(table[qid]), start=1):
            yield f"{qid} Q0 {doc} {rank} {score!r} {tag}"


def write_qrels(table: QrelsTable) -> Iterator[str]:
    for qid in sorted(table):
        for doc, grade in sorted(table[qid].grades.items()):
            yield f"{qid} 0 {doc} {grade}"


def _lines(source: Source) -> Iterator[str]:
    if isinstance(source, (str, os.PathLike)):
        with open(Path(source), encoding="utf-8") as f:
            yield from f
    else:
        yield from source


def read_trec_qrels(source: Source) -> QrelsTable:
    """Read qrels from a file path or an iterable of lines."""
    return parse_qrels(_lines(source))


def read_trec_run(source: Source) -> RunTable:
    """Read a run from a file path or an iterable of lines."""
    return parse_run(_lines(source))
