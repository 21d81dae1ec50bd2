"""Cup and cap products on Hochschild invariants of LG orbifolds (W, G)."""

from .orbifold import TwistedAlgebra
from .poly import parse_poly
from .symmetry import generate_group

__all__ = ["TwistedAlgebra", "parse_poly", "generate_group"]
__version__ = "0.1.0"
