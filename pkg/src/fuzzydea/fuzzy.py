"""Triangular fuzzy numbers and their credibility / cut-bound calculus."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError


@dataclass(frozen=True)
class TriangularFuzzyNumber:
    """Triangular fuzzy number ``(r, s, u)`` with support ``[r, u]`` and peak ``s``.

    Degenerate legs (``r == s`` or ``s == u``) are allowed; ``(v, v, v)`` is the
    crisp value ``v``.
    """

    r: float
    s: float
    u: float

    def __post_init__(self):
        for name in ("r", "s", "u"):
            value = float(getattr(self, name))
            if not math.isfinite(value):
                raise DomainError(f"fuzzy number component {name} must be finite")
            object.__setattr__(self, name, value)
        if not self.r <= self.s <= self.u:
            raise DomainError(f"need r <= s <= u, got ({self.r}, {self.s}, {self.u})")

    @classmethod
    def crisp(cls, value: float) -> "TriangularFuzzyNumber":
        return cls(value, value, value)

    @property
    def is_crisp(self) -> bool:
        return self.r == self.s == self.u

    def __iter__(self):
        return iter((self.r, self.s, self.u))

    def __str__(self):
        return f"({self.r:g},{self.s:g},{self.u:g})"


@dataclass(frozen=True)
class CutBounds:
    lower: float
    upper: float

    def __post_init__(self):
        if self.lower > self.upper:
            raise DomainError(f"cut bounds out of order: {self.lower} > {self.upper}")

    @property
    def width(self) -> float:
        return self.upper - self.lower


def as_fuzzy(value) -> TriangularFuzzyNumber:
    """Wrap a crisp scalar as a degenerate triangle; pass fuzzy numbers through."""
    if isinstance(value, TriangularFuzzyNumber):
        return value
    return TriangularFuzzyNumber.crisp(value)


def membership(f: TriangularFuzzyNumber, x: float) -> float:
    if x == f.s:
        return 1.0
    if f.r <= x < f.s:
        return (x - f.r) / (f.s - f.r)
    if f.s < x <= f.u:
        return (f.u - x) / (f.u - f.s)
    return 0.0


def credibility_leq(f: TriangularFuzzyNumber, b: float) -> float:
    """Credibility of the event ``f <= b``."""
    r, s, u = f
    if b >= u:
        return 1.0
    if b < r:
        return 0.0
    if b < s:
        return (b - r) / (2.0 * (s - r))
    return (b - 2.0 * s + u) / (2.0 * (u - s))


def credibility_geq(f: TriangularFuzzyNumber, b: float) -> float:
    """Credibility of the event ``f >= b``.

    At the jump of a degenerate leg (``b == r == s`` or ``b == s == u``) this
    returns the credibility of ``f > b``, which keeps
    ``credibility_leq + credibility_geq == 1`` for every ``b``.
    """
    r, s, u = f
    if b >= u:
        return 0.0
    if b < r:
        return 1.0
    if b < s:
        return (2.0 * s - r - b) / (2.0 * (s - r))
    return (u - b) / (2.0 * (u - s))


def cut_bounds(f: TriangularFuzzyNumber, beta: float) -> CutBounds:
    """Interval of values whose membership is at least ``beta``."""
    if not 0.0 <= beta <= 1.0:
        raise DomainError(f"cut level must lie in [0, 1], got {beta}")
    # written around the peak so that lower <= s <= upper survives rounding
    spread = 1.0 - beta
    return CutBounds(f.s - spread * (f.s - f.r), f.s + spread * (f.u - f.s))


def credibility_cut_level(alpha: float) -> float:
    """Cut level ``2(1 - alpha)`` at which ``Cr >= alpha`` constraints become crisp."""
    if not 0.5 <= alpha <= 1.0:
        raise DomainError(f"credibility level must lie in [0.5, 1], got {alpha}")
    return 2.0 * (1.0 - alpha)


def scale_cut(k: float, cb: CutBounds) -> CutBounds:
    if k >= 0:
        return CutBounds(k * cb.lower, k * cb.upper)
    return CutBounds(k * cb.upper, k * cb.lower)
