"""Closed-form 2D machinery: monomial circle products, the coefficient
extraction for squares of delta_inv-images, and the elimination cascade
showing such squares vanish only trivially.

Conventions on the 2D phase space: q is the X^1 direction, p is the X^2
direction, omega^{12} = +1 so {q, p} = +1.

A homogeneous two-form of degree z-1 with even hbar powers only,

    F = sum_{k,l} hbar^{2k} a_{2k,l}(q,p) (X^1)^l (X^2)^{z-1-4k-l} dq^dp,

is encoded by the rescaled table b_{2k,l} = a_{2k,l} / (z-4k+1); the
rescaling absorbs the 1/(fiber+form) weight of delta_inv, so

    delta_inv F = sum hbar^{2k} b_{2k,l} [ (X^1)^{l+1} (X^2)^{z-1-4k-l} dp
                                         - (X^1)^l (X^2)^{z-4k-l} dq ].

The square (delta_inv F) o (delta_inv F) collects into odd hbar powers,

    sum_{A,B} g_{2A+1,B} hbar^{2A+1} (X^1)^B (X^2)^{2z-2-4A-B} dq^dp,

and g_coeff evaluates g_{2A+1,B} directly from the table.  cascade_solve
treats the b's as indeterminates and eliminates them one square pivot at
a time, certifying that the square vanishes only when F does.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .calculus import delta_inv
from .poly import BasePolynomial
from .scalars import GaussianRational, I, ZERO, i_power
from .weyl import WeylAlgebra, WeylSeries, WeylTerm


class CascadeError(RuntimeError):
    """The elimination cascade could not complete."""


def _f_raw(r: int, j: int, s: int, k: int, t: int) -> Fraction:
    # finite-sum kernel; empty summation range means the contraction count
    # t is out of support and the coefficient is zero
    lo = max(t - r, t - k, 0)
    hi = min(j, s, t)
    if lo > hi:
        return Fraction(0)
    total = Fraction(0)
    for a in range(lo, hi + 1):
        d = (
            math.factorial(a)
            * math.factorial(t - a)
            * math.factorial(r - t + a)
            * math.factorial(j - a)
            * math.factorial(s - a)
            * math.factorial(k - t + a)
        )
        total += Fraction(-1 if a % 2 else 1, d)
    pre = Fraction(
        math.factorial(r) * math.factorial(j) * math.factorial(s) * math.factorial(k),
        2**t,
    )
    return pre * total


def f_coeff(r: int, j: int, s: int, k: int, t: int) -> Fraction:
    """Contraction coefficient of (i*hbar)^t in (X^1)^r(X^2)^j o (X^1)^s(X^2)^k.

    Satisfies f(r,j,s,k,0) = 1 and the swap rule
    f(s,k,r,j,t) = (-1)^t f(r,j,s,k,t).
    """
    for name, v in (("r", r), ("j", j), ("s", s), ("k", k)):
        if v < 0:
            raise ValueError(f"{name} must be >= 0, got {v}")
    if not 0 <= t <= min(r, k) + min(j, s):
        raise ValueError(
            f"t={t} out of range 0..{min(r, k) + min(j, s)} for ({r},{j},{s},{k})"
        )
    return _f_raw(r, j, s, k, t)


def monomial_circ(r: int, j: int, s: int, k: int) -> WeylSeries:
    """(X^1)^r (X^2)^j o (X^1)^s (X^2)^k in closed form, as a 2D series."""
    if min(r, j, s, k) < 0:
        raise ValueError("exponents must be >= 0")
    entries = []
    for t in range(min(r, k) + min(j, s) + 1):
        c = i_power(t) * _f_raw(r, j, s, k, t)
        entries.append((c, t, (r + s - t, j + k - t), ()))
    return WeylSeries.build(2, entries)


class CoefficientTable:
    """Rescaled coefficients b_{2k,l} of a homogeneous even-hbar two-form.

    Keys are (2k, l) with 0 <= k <= (z-1)//4 and 0 <= l <= z-1-4k.  Values
    are GaussianRational constants or dim-2 BasePolynomials; the cascade
    also feeds tables whose values are indeterminate polynomial variables.
    """

    __slots__ = ("z", "_entries")

    def __init__(self, z: int, entries=None):
        if z < 1:
            raise ValueError("homogeneity parameter z must be >= 1")
        self.z = z
        data = {}
        valid = set(self.indices(z))
        for key, value in dict(entries or {}).items():
            key = tuple(key)
            if key not in valid:
                raise ValueError(f"table index {key} out of range for z={z}")
            if not isinstance(value, BasePolynomial):
                value = GaussianRational.of(value)
            if value:
                data[key] = value
        self._entries = data

    @staticmethod
    def indices(z: int) -> list[tuple[int, int]]:
        return [
            (2 * k, l)
            for k in range((z - 1) // 4 + 1)
            for l in range(z - 4 * k)
        ]

    def get(self, two_k: int, l: int):
        """Stored value, or None when the slot is absent or zero."""
        return self._entries.get((two_k, l))

    def items(self):
        return sorted(self._entries.items())

    def is_zero(self) -> bool:
        return not self._entries

    @classmethod
    def from_form(cls, F: WeylSeries) -> "CoefficientTable":
        _require_square_input(F)
        z = F.degree() + 1
        entries = {}
        for t in F.terms():
            b = t.coeff.scale(Fraction(1, z - 2 * t.hbar + 1))
            # constant coefficients come back out as plain scalars
            entries[(t.hbar, t.fiber[0])] = b.constant_value() if b.is_constant() else b
        return cls(z, entries)

    def to_form(self) -> WeylSeries:
        """The two-form this table encodes (constant or dim-2 values only)."""
        entries = []
        for (two_k, l), b in self.items():
            w = Fraction(self.z - 2 * two_k + 1)
            if isinstance(b, BasePolynomial):
                if b.dim != 2:
                    raise ValueError("table values are not base polynomials on 2D")
                coeff = b.scale(w)
            else:
                coeff = b * w
            entries.append((coeff, two_k, (l, self.z - 1 - 2 * two_k - l), (1, 2)))
        return WeylSeries.build(2, entries)

    def __repr__(self):
        return f"<CoefficientTable z={self.z} entries={len(self._entries)}>"


def _require_square_input(F: WeylSeries):
    if F.dim != 2:
        raise ValueError("square input must live on the 2D phase space")
    if F.is_zero():
        return
    degs = set()
    for t in F.terms():
        if t.word != (1, 2):
            raise ValueError("square input must be a pure dq1^dq2 two-form")
        if t.hbar % 2:
            raise ValueError(f"square input carries odd hbar power {t.hbar}")
        degs.add(t.degree)
    if len(degs) > 1:
        raise ValueError(f"square input mixes degrees {sorted(degs)}")


def g_coeff(z: int, b: CoefficientTable, A: int, B: int):
    """Coefficient of hbar^{2A+1} (X^1)^B (X^2)^{2z-2-4A-B} dq^dp in the square.

    GaussianRational for constant tables; a polynomial when the table
    holds polynomial values.
    """
    if A < 0 or B < 0:
        raise ValueError("A and B must be >= 0")
    if 4 * A + B + 2 > 2 * z:
        raise ValueError(f"(A,B)=({A},{B}) outside the admissible region for z={z}")
    kmax = (z - 1) // 4
    acc = None
    for k in range(min(A, kmax) + 1):
        for w in range(min(A - k, kmax) + 1):
            u = 2 * A + 1 - 2 * k - 2 * w
            for l in range(z - 4 * k):
                m = 2 * A + B - 2 * k - 2 * w - l
                if m < 0 or m > z - 1 - 4 * w:
                    continue
                b1 = b.get(2 * k, l)
                b2 = b.get(2 * w, m)
                if b1 is None or b2 is None:
                    continue
                fv = _f_raw(l + 1, z - 1 - 4 * k - l, m, z - 4 * w - m, u)
                if not fv:
                    continue
                sgn = -2 if (A - k - w) % 2 else 2
                contrib = (b1 * b2) * (I * (sgn * fv))
                acc = contrib if acc is None else acc + contrib
    return ZERO if acc is None else acc


@dataclass(frozen=True)
class SquareCheckResult:
    is_zero: bool
    witness: WeylTerm | None
    square: WeylSeries


def square_check(F: WeylSeries) -> SquareCheckResult:
    """Square delta_inv(F) under o and report the first surviving term.

    F must be a homogeneous 2D two-form with even hbar powers only; for
    such F the square vanishes exactly when F itself does, and the
    witness term certifies the nonvanishing direction.
    """
    _require_square_input(F)
    d = delta_inv(F)
    square = WeylAlgebra(2).circ(d, d)
    if square.is_zero():
        return SquareCheckResult(True, None, square)
    return SquareCheckResult(False, square.terms()[0], square)


@dataclass(frozen=True)
class PivotStep:
    A: int
    B: int
    variable: tuple[int, int]
    factor: GaussianRational


@dataclass(frozen=True)
class CascadeResult:
    z: int
    steps: tuple[PivotStep, ...]
    sweeps: int

    def eliminated(self) -> list[tuple[int, int]]:
        return [s.variable for s in self.steps]

    def describe(self) -> str:
        lines = [f"cascade z={self.z}: {len(self.steps)} pivots"]
        for s in self.steps:
            two_k, l = s.variable
            lines.append(
                f"  (A={s.A}, B={s.B}): ({s.factor}) * b[{two_k},{l}]^2 = 0"
                f"  =>  b[{two_k},{l}] = 0"
            )
        lines.append("all b = 0")
        return "\n".join(lines)


def cascade_solve(z: int) -> CascadeResult:
    """Eliminate every b_{2k,l} through single-square pivot equations.

    The b's are treated as indeterminates.  Sweeping (A, B) in ascending
    order, an equation that reduces (after earlier eliminations) to
    factor * b^2 = 0 with a nonzero factor pins that b to zero; sweeps
    repeat until the table empties.  A sweep with no progress means some
    variable is not pinned by any square equation, which would break the
    nonvanishing argument, so it raises instead of passing silently.
    """
    if z < 1:
        raise ValueError("z must be >= 1")
    keys = CoefficientTable.indices(z)
    pos = {key: n + 1 for n, key in enumerate(keys)}
    entries = {key: BasePolynomial.variable(len(keys), pos[key]) for key in keys}
    steps = []
    sweeps = 0
    while any(not v.is_zero() for v in entries.values()):
        sweeps += 1
        progress = False
        for A in range((2 * z - 2) // 4 + 1):
            for B in range(2 * z - 2 - 4 * A + 1):
                g = g_coeff(z, CoefficientTable(z, entries), A, B)
                if not g:
                    continue
                items = g.items()
                if len(items) != 1:
                    continue  # not yet a single-square pivot; revisit next sweep
                exps, c = items[0]
                if sorted(exps)[-1] != 2 or sum(exps) != 2:
                    continue
                key = keys[exps.index(2)]
                steps.append(PivotStep(A, B, key, c))
                entries[key] = BasePolynomial.zero(len(keys))
                progress = True
        if not progress:
            left = sorted(k for k, v in entries.items() if not v.is_zero())
            raise CascadeError(
                f"cascade stalled at z={z}; no square pivot pins {left}"
            )
    return CascadeResult(z, tuple(steps), sweeps)


def random_table(z: int, rng) -> CoefficientTable:
    """Random nonzero constant table, deterministic under the given rng."""
    while True:
        entries = {}
        for key in CoefficientTable.indices(z):
            re = Fraction(rng.randint(-4, 4), rng.randint(1, 3))
            im = Fraction(rng.randint(-2, 2), 2) if rng.random() < 0.3 else Fraction(0)
            entries[key] = GaussianRational(re, im)
        table = CoefficientTable(z, entries)
        if not table.is_zero():
            return table
