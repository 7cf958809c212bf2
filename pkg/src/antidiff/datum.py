"""Piecewise analytic initial data with closed-form antiderivatives.

A datum is a list of half-open pieces ``[lo, hi)`` carrying an expression
whose antiderivative is known exactly, so cell averages never need numeric
quadrature.  Periodic data partition one period; aperiodic data extend with
constant tails.  Trigonometric pieces force binary64 mode (their values are
irrational); rational mode accepts constant and affine pieces only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .scalars import BINARY64, RATIONAL, Scalar, as_scalar, check_mode, zero


@dataclass(frozen=True)
class Constant:
    value: Scalar

    exact = True

    def eval(self, x):
        return self.value

    def antiderivative(self, x):
        return self.value * x


@dataclass(frozen=True)
class Affine:
    intercept: Scalar
    slope: Scalar

    exact = True

    def eval(self, x):
        return self.intercept + self.slope * x

    def antiderivative(self, x):
        return self.intercept * x + self.slope * x * x / 2


@dataclass(frozen=True)
class Sinusoid:
    """``amplitude * sin(omega*x + shift)`` (or cos)."""

    amplitude: float
    omega: float
    shift: float
    kind: str = "sin"

    exact = False

    def eval(self, x):
        f = math.sin if self.kind == "sin" else math.cos
        return self.amplitude * f(self.omega * x + self.shift)

    def antiderivative(self, x):
        if self.kind == "sin":
            return -self.amplitude * math.cos(self.omega * x + self.shift) / self.omega
        return self.amplitude * math.sin(self.omega * x + self.shift) / self.omega


@dataclass(frozen=True)
class CosSinProduct:
    """``cos(a*x) * sin(b*x)`` with ``b != ±a``, via product-to-sum."""

    a: float
    b: float

    exact = False

    def eval(self, x):
        return math.cos(self.a * x) * math.sin(self.b * x)

    def antiderivative(self, x):
        s, d = self.b + self.a, self.b - self.a
        return -0.5 * (math.cos(s * x) / s + math.cos(d * x) / d)


@dataclass(frozen=True)
class Piece:
    lo: Scalar
    hi: Scalar
    expr: object

    def __post_init__(self):
        if not self.lo < self.hi:
            raise ValueError("piece needs lo < hi")


@dataclass(frozen=True)
class PiecewiseDatum:
    pieces: tuple
    mode: str
    period: Scalar = None          # None for aperiodic data
    left_value: Scalar = None      # constant tails, aperiodic only
    right_value: Scalar = None

    def __post_init__(self):
        check_mode(self.mode)
        ps = tuple(self.pieces)
        if not ps:
            raise ValueError("datum needs at least one piece")
        for a, b in zip(ps, ps[1:]):
            if a.hi != b.lo:
                raise ValueError("pieces must be contiguous")
        if self.mode == RATIONAL and not all(p.expr.exact for p in ps):
            raise ValueError("rational mode accepts only constant/affine pieces")
        object.__setattr__(self, "pieces", ps)
        if self.period is not None:
            if self.period != ps[-1].hi - ps[0].lo:
                raise ValueError("period must equal the covered span")
            if self.left_value is not None or self.right_value is not None:
                raise ValueError("periodic data carry no tails")

    @property
    def lo(self):
        return self.pieces[0].lo

    @property
    def hi(self):
        return self.pieces[-1].hi

    # ------------------------------------------------------------------

    def _reduce(self, x):
        """Translate ``x`` into the base interval by whole periods."""
        k = math.floor((x - self.lo) / self.period)
        return x - k * self.period, k

    def value_at(self, x):
        if self.period is not None:
            x, _ = self._reduce(x)
        elif x < self.lo:
            if self.left_value is None:
                raise ValueError(f"x={x} lies left of the datum")
            return self.left_value
        elif x >= self.hi:
            if self.right_value is None:
                raise ValueError(f"x={x} lies right of the datum")
            return self.right_value
        for p in self.pieces:
            if p.lo <= x < p.hi:
                return p.expr.eval(x)
        return self.pieces[-1].expr.eval(x)   # x == hi after float reduction

    def _base_integral(self, a, b):
        """Integral over ``[a, b]`` inside the covered span."""
        total = zero(self.mode)
        for p in self.pieces:
            lo = max(a, p.lo)
            hi = min(b, p.hi)
            if lo < hi:
                total += p.expr.antiderivative(hi) - p.expr.antiderivative(lo)
        return total

    def integrate(self, a, b):
        """Exact integral over ``[a, b]``, unwrapping periods as needed."""
        if b < a:
            raise ValueError("integrate needs a <= b")
        if a == b:
            return zero(self.mode)
        if self.period is None:
            total = zero(self.mode)
            if a < self.lo:
                if self.left_value is None:
                    raise ValueError("interval not covered by any piece")
                total += self.left_value * (min(b, self.lo) - a)
            if b > self.hi:
                if self.right_value is None:
                    raise ValueError("interval not covered by any piece")
                total += self.right_value * (b - max(a, self.hi))
            return total + self._base_integral(max(a, self.lo), min(b, self.hi))
        per_integral = self._base_integral(self.lo, self.hi)
        ra, ka = self._reduce(a)
        rb, kb = self._reduce(b)
        return ((kb - ka) * per_integral
                + self._base_integral(self.lo, rb)
                - self._base_integral(self.lo, ra))

    def cell_average(self, center, width):
        if not width > 0:
            raise ValueError("cell width must be positive")
        half = width / 2 if self.mode == BINARY64 else Fraction(width) / 2
        return self.integrate(center - half, center + half) / width


def cell_average(datum: PiecewiseDatum, center, width) -> Scalar:
    return datum.cell_average(center, width)


def constant_datum(value, mode, period=None, lo=0, hi=1) -> PiecewiseDatum:
    v = as_scalar(value, mode)
    lo = as_scalar(lo, mode)
    hi = as_scalar(hi, mode)
    return PiecewiseDatum((Piece(lo, hi, Constant(v)),), mode, period=period,
                          left_value=None if period is not None else v,
                          right_value=None if period is not None else v)


def step_datum(left, right, jump_at, mode) -> PiecewiseDatum:
    """Heaviside-type datum: ``left`` before ``jump_at``, ``right`` after."""
    l = as_scalar(left, mode)
    r = as_scalar(right, mode)
    x0 = as_scalar(jump_at, mode)
    one_w = as_scalar(1, mode)
    return PiecewiseDatum((Piece(x0 - one_w, x0, Constant(l)),
                           Piece(x0, x0 + one_w, Constant(r))),
                          mode, left_value=l, right_value=r)
