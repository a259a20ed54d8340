"""Python front end to the qccilc C++ core."""

from fractions import Fraction

from ._qccilc import *  # noqa: F401,F403
from ._qccilc import (
    ContractError,
    DimensionError,
    Error,
    InfeasibleError,
    NumericalError,
    ParseError,
    _growth_avg,
    _growth_worst,
)

__version__ = "0.1.0"


def growth_worst(n: int) -> Fraction:
    """Worst-case term growth factor of an n-entangler ILC dressing."""
    return Fraction(*_growth_worst(n))


def growth_avg(n: int) -> Fraction:
    """Average term growth factor of an n-entangler ILC dressing."""
    return Fraction(*_growth_avg(n))


__all__ = [name for name in dir() if not name.startswith("_")]
