"""Measure factories under their natural names: ``from irmeasures.names import *``."""

from .measure import MeasureFactory
from .registry import ALIASES, SCHEMAS

__all__ = sorted(set(SCHEMAS) | {a for a in ALIASES if a.isidentifier()})

globals().update({name: MeasureFactory(name) for name in __all__})
