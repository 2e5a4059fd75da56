"""Bound-state records shared by all solution routes."""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum


class Parity(str, Enum):
    EVEN = "even"
    ODD = "odd"

    @classmethod
    def of_index(cls, index: int) -> "Parity":
        return cls.EVEN if index % 2 == 0 else cls.ODD

    @property
    def sign(self) -> int:
        return 1 if self is Parity.EVEN else -1


class Method(str, Enum):
    SHOOTING = "shooting"
    NYSTROM = "nystrom"
    ANALYTIC_WEAK = "analytic-weak"
    ANALYTIC_STRONG = "analytic-strong"
    WKB = "wkb"


@dataclass(frozen=True)
class EigenLevel:
    """One bound state of the dimensionless problem.

    ``index`` is the global level number (0 is the ground state); levels
    alternate parity, so even indices are even states.  ``nodes`` counts
    zeros of f on (0, 1) and is -1 when the route does not resolve it.
    """

    epsilon: float
    parity: Parity
    index: int
    nodes: int
    method: Method
    residual: float = 0.0
