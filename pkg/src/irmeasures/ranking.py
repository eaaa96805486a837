"""Ranking induction: turn scored run entries into an ordered, annotated ranking."""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING, Iterable, Iterator

if TYPE_CHECKING:
    from .trec import QueryJudgments


def order_by_score(pairs: Iterable[tuple[str, float]]) -> list[tuple[str, float]]:
    """Sort ``(doc_id, score)`` pairs by score descending, ties by doc_id descending.

    This is the trec_eval convention; the rank column of a run file is never used.
    """
    return sorted(pairs, key=lambda pair: (pair[1], pair[0]), reverse=True)


@dataclass(frozen=True)
class Ranking:
    """One query's ranked documents with their grades (``None`` = unjudged)."""

    doc_ids: tuple[str, ...] = ()
    grades: tuple[int | None, ...] = ()

    def __post_init__(self):
        if len(self.doc_ids) != len(self.grades):
            raise ValueError("doc_ids and grades must have the same length")

    def __len__(self) -> int:
        return len(self.doc_ids)

    def __iter__(self) -> Iterator[tuple[str, int | None]]:
        return iter(zip(self.doc_ids, self.grades))

    def relevant(self, rel: int) -> list[bool]:
        """Per-rank indicator of ``grade >= rel``; unjudged is never relevant."""
        return [g is not None and g >= rel for g in self.grades]

    @classmethod
    def from_grades(cls, grades: Iterable[int | None]) -> "Ranking":
        """Build a ranking with synthetic doc ids ``d1, d2, ...``; handy in tests."""
        grades = tuple(grades)
        return cls(tuple(f"d{i}" for i in range(1, len(grades) + 1)), grades)


def induce_ranking(
    run_pairs: Iterable[tuple[str, float]], judgments: "QueryJudgments | None"
) -> Ranking:
    ordered = order_by_score(run_pairs)
    doc_ids = tuple(doc for doc, _ in ordered)
    if judgments is None:
        return Ranking(doc_ids, (None,) * len(doc_ids))
    return Ranking(doc_ids, tuple(judgments.grade(doc) for doc in doc_ids))
