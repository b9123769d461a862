"""Concise presentations of direct powers of perfect groups."""

from .errors import *  # noqa: F401,F403
from .presentations import (  # noqa: F401
    CommutatorWitnesses,
    CoordinateDictionary,
    Presentation,
    parse_presentation,
    to_text,
)
from .words import Word, commutator, free_reduce, substitute  # noqa: F401

__version__ = "0.1.0"
