"""Shape avoidance for permutations under the RSK correspondence."""

from .core import (
    Partition,
    Permutation,
    RskPair,
    StandardTableau,
    SubsequenceWitness,
    conjugate,
    contains,
    dominates,
    pattern_of,
    rsk,
    rsk_inverse,
    shape_of,
)
from .errors import BudgetExceeded, PreconditionError, ShapeAvoidError, ValidationError

__version__ = "0.1.0"
