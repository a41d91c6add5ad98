"""Curves on closed oriented surfaces and Heegaard diagram reduction.

Core modules:

- ``surface``: words over the surface group generators, homology classes,
  the symplectic intersection pairing
- ``basis``: change of basis between generator systems, unimodular
  transition matrices, gluing maps
- ``arrangement``: embedded two-family curve arrangements as combinatorial
  maps, bigon removal to minimal position, torus closed forms
- ``diagram``: Heegaard diagrams, fundamental group and homology
  presentations, cancellation certificates, destabilization
- ``morse``: symbolic critical point programs and index-0/3 elimination
- ``formats``: the .arr/.hd/.morse file formats
- ``service``: FastAPI wrapper; ``cli``: command-line client
"""

__version__ = "0.1.0"

from .errors import (
    DimensionMismatch,
    HeegaardError,
    MissingDataError,
    NotCertifiedError,
    PreconditionError,
    StructureError,
    ValidationError,
)
from .surface import (
    CyclicWord,
    HomologyClass,
    Letter,
    Surface,
    Word,
    cyclic_reduce,
    free_reduce,
    pairing,
    parse_word,
)

__all__ = [
    "CyclicWord",
    "DimensionMismatch",
    "HeegaardError",
    "HomologyClass",
    "Letter",
    "MissingDataError",
    "NotCertifiedError",
    "PreconditionError",
    "StructureError",
    "Surface",
    "ValidationError",
    "Word",
    "__version__",
    "cyclic_reduce",
    "free_reduce",
    "pairing",
    "parse_word",
]
