"""Formal Weyl-bundle series and the fiberwise Moyal-type product.

An element is a finite sum of terms

    hbar^k * c(q) * X^{a_1}..X^{a_l} * dq^{j_1} ^ .. ^ dq^{j_m}

with c a BasePolynomial, the fiber part a commuting monomial in X^1..X^dim
and the form part a wedge word of strictly increasing 1-based indices.
The grading degree of a term is 2k + l (twice the hbar power plus the
fiber length); it is additive under the circle product.

A series carries ``known_through``: the degree bound through which its
graded components are asserted exact.  ``None`` means the stored terms are
the whole series.  Operations propagate this bound and refuse requests
that would read past it, so truncation can never silently corrupt a grade.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .poly import BasePolynomial
from .scalars import GaussianRational, i_power


class TruncationError(ValueError):
    """A requested grade lies beyond what the operands determine."""


class DivisibilityError(ValueError):
    """Division by i*hbar applied to a series with an hbar^0 term."""


def wedge_normalize(indices, dim: int):
    """Sort a wedge word into increasing order.

    Returns (word, sign) with sign in {+1, -1}, or ((), 0) when an index
    repeats.  Indices are 1-based and must lie in 1..dim.
    """
    word = list(indices)
    for j in word:
        if not 1 <= j <= dim:
            raise ValueError(f"wedge index {j} out of range 1..{dim}")
    if len(set(word)) != len(word):
        return (), 0
    # insertion sort; count transpositions for the sign
    sign = 1
    for a in range(1, len(word)):
        b = a
        while b > 0 and word[b - 1] > word[b]:
            word[b - 1], word[b] = word[b], word[b - 1]
            sign = -sign
            b -= 1
    return tuple(word), sign


@dataclass(frozen=True, slots=True)
class WeylTerm:
    hbar: int
    fiber: tuple[int, ...]
    word: tuple[int, ...]
    coeff: BasePolynomial

    @property
    def degree(self) -> int:
        return 2 * self.hbar + sum(self.fiber)

    @property
    def form_degree(self) -> int:
        return len(self.word)


def _min_known(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


class WeylSeries:
    """Sparse sum of WeylTerms with a truncation bound."""

    __slots__ = ("dim", "known_through", "_terms")

    def __init__(self, dim: int, terms=None, known_through=None):
        self.dim = dim
        self.known_through = known_through
        data: dict[tuple, BasePolynomial] = {}
        if terms:
            items = terms.items() if hasattr(terms, "items") else terms
            for (hbar, fiber, word), coeff in items:
                self._insert(data, hbar, tuple(fiber), tuple(word), coeff)
        self._terms = data

    def _insert(self, data, hbar, fiber, word, coeff):
        if hbar < 0:
            raise ValueError("negative hbar power")
        if len(fiber) != self.dim or any(e < 0 for e in fiber):
            raise ValueError(f"bad fiber exponents {fiber} for dim {self.dim}")
        if list(word) != sorted(set(word)):
            raise ValueError(f"wedge word {word} not strictly increasing")
        for j in word:
            if not 1 <= j <= self.dim:
                raise ValueError(f"wedge index {j} out of range 1..{self.dim}")
        if coeff.dim != self.dim:
            raise ValueError("coefficient dimension mismatch")
        if coeff.is_zero():
            return
        deg = 2 * hbar + sum(fiber)
        if self.known_through is not None and deg > self.known_through:
            return  # beyond the asserted range: not representable here
        key = (hbar, fiber, word)
        acc = data.get(key)
        coeff = coeff if acc is None else acc + coeff
        if coeff:
            data[key] = coeff
        elif key in data:
            del data[key]

    @classmethod
    def zero(cls, dim: int, known_through=None) -> "WeylSeries":
        return cls(dim, known_through=known_through)

    @classmethod
    def build(cls, dim: int, entries, known_through=None) -> "WeylSeries":
        """entries: iterable of (coeff, hbar, fiber, word); coeff may be scalar."""
        out = cls(dim, known_through=known_through)
        for coeff, hbar, fiber, word in entries:
            if not isinstance(coeff, BasePolynomial):
                coeff = BasePolynomial.constant(dim, coeff)
            out._insert(out._terms, hbar, tuple(fiber), tuple(word), coeff)
        return out

    @classmethod
    def from_poly(cls, p: BasePolynomial) -> "WeylSeries":
        z = (0,) * p.dim
        return cls(p.dim, {(0, z, ()): p})

    def terms(self) -> list[WeylTerm]:
        """Canonical order: hbar power, fiber exponents, wedge word."""
        return [
            WeylTerm(k, f, w, self._terms[(k, f, w)])
            for k, f, w in sorted(self._terms)
        ]

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self):
        return bool(self._terms)

    def degree(self):
        """Max degree among stored terms; None if no terms are stored.

        When ``known_through`` is finite the answer is only a lower bound:
        grades past the cut may hold more.
        """
        if not self._terms:
            return None
        return max(2 * k + sum(f) for k, f, _ in self._terms)

    def min_degree(self):
        if not self._terms:
            return None
        return min(2 * k + sum(f) for k, f, _ in self._terms)

    def _check(self, other):
        if self.dim != other.dim:
            raise ValueError(f"dimension mismatch {self.dim} != {other.dim}")

    def __add__(self, other):
        if isinstance(other, BasePolynomial):
            other = WeylSeries.from_poly(other)
        if not isinstance(other, WeylSeries):
            return NotImplemented
        self._check(other)
        out = WeylSeries(self.dim, known_through=_min_known(self.known_through, other.known_through))
        for src in (self._terms, other._terms):
            for (k, f, w), c in src.items():
                out._insert(out._terms, k, f, w, c)
        return out

    def __sub__(self, other):
        if isinstance(other, (WeylSeries, BasePolynomial)):
            return self + (-other if isinstance(other, WeylSeries) else WeylSeries.from_poly(-other))
        return NotImplemented

    def __neg__(self):
        out = WeylSeries(self.dim, known_through=self.known_through)
        out._terms = {key: -c for key, c in self._terms.items()}
        return out

    def scale(self, s) -> "WeylSeries":
        s = GaussianRational.of(s)
        out = WeylSeries(self.dim, known_through=self.known_through)
        if s:
            out._terms = {key: c * s for key, c in self._terms.items()}
        return out

    def mul_poly(self, p: BasePolynomial) -> "WeylSeries":
        out = WeylSeries(self.dim, known_through=self.known_through)
        for (k, f, w), c in self._terms.items():
            out._insert(out._terms, k, f, w, c * p)
        return out

    def truncate(self, cap: int) -> "WeylSeries":
        known = cap if self.known_through is None else min(self.known_through, cap)
        out = WeylSeries(self.dim, known_through=known)
        for (k, f, w), c in self._terms.items():
            out._insert(out._terms, k, f, w, c)
        return out

    def homogeneous_part(self, z: int) -> "WeylSeries":
        """All terms of degree z, as an exact standalone series."""
        if self.known_through is not None and z > self.known_through:
            raise TruncationError(
                f"degree {z} beyond known_through={self.known_through}"
            )
        out = WeylSeries(self.dim)
        for (k, f, w), c in self._terms.items():
            if 2 * k + sum(f) == z:
                out._terms[(k, f, w)] = c
        return out

    def form_part(self, m: int) -> "WeylSeries":
        out = WeylSeries(self.dim, known_through=self.known_through)
        for (k, f, w), c in self._terms.items():
            if len(w) == m:
                out._terms[(k, f, w)] = c
        return out

    def form_degrees(self) -> set[int]:
        return {len(w) for _, _, w in self._terms}

    def max_hbar(self) -> int:
        return max((k for k, _, _ in self._terms), default=0)

    def __eq__(self, other):
        if not isinstance(other, WeylSeries):
            return NotImplemented
        return self.dim == other.dim and self._terms == other._terms

    __hash__ = None

    def __str__(self):
        return format_series(self)

    def __repr__(self):
        n = len(self._terms)
        return f"<WeylSeries dim={self.dim} terms={n} known_through={self.known_through}>"


def format_series(a: WeylSeries) -> str:
    if a.is_zero():
        return "0"
    from .poly import format_poly
    from .scalars import format_scalar

    parts = []
    for t in a.terms():
        factors = []
        if t.hbar == 1:
            factors.append("h")
        elif t.hbar > 1:
            factors.append(f"h^{t.hbar}")
        for idx, e in enumerate(t.fiber, start=1):
            if e == 1:
                factors.append(f"X{idx}")
            elif e > 1:
                factors.append(f"X{idx}^{e}")
        if t.word:
            factors.append("^".join(f"dq{j}" for j in t.word))
        c = t.coeff
        if c.is_constant():
            v = c.constant_value()
            if not factors:
                parts.append(format_scalar(v))
            elif v == 1:
                parts.append("*".join(factors))
            elif v == -1:
                parts.append("-" + "*".join(factors))
            else:
                cs = format_scalar(v)
                cs = f"({cs})" if (v.re and v.im) else cs
                parts.append("*".join([cs] + factors))
        else:
            cs = format_poly(c)
            if " " in cs and factors:
                cs = f"({cs})"
            parts.append("*".join([cs] + factors) if factors else cs)
    return " + ".join(parts).replace(" + -", " - ")


# --- potential minimal degrees, used for truncation bookkeeping ----------

def _potential_min_degree(a: WeylSeries, fiber_only: bool = False):
    """Smallest degree at which `a` can be nonzero, None if it cannot.

    With fiber_only=True, X-free terms are ignored: they are central, so
    they cannot contaminate a commutator with unknown grades.
    """
    cands = []
    for (k, f, _w), _c in a._terms.items():
        if fiber_only and not any(f):
            continue
        cands.append(2 * k + sum(f))
    if a.known_through is not None:
        cands.append(a.known_through + 1)
    return min(cands) if cands else None


def _product_valid_through(a: WeylSeries, b: WeylSeries, fiber_only: bool = False):
    """Degree through which a term-pair product of a and b is fully determined."""
    bounds = []
    for x, y in ((a, b), (b, a)):
        if x.known_through is None:
            continue
        dmin = _potential_min_degree(y, fiber_only=fiber_only)
        if dmin is None:
            continue  # y is exactly zero: nothing to contaminate
        bounds.append(x.known_through + dmin)
    return min(bounds) if bounds else None


class WeylAlgebra:
    """The circle product on Weyl series for a fixed constant omega^{ij}.

    The default in dimension 2n pairs (X^{2a-1}, X^{2a}) with
    omega^{2a-1,2a} = +1, so that X^1 o X^2 - X^2 o X^1 = i*hbar.
    """

    __slots__ = ("dim", "omega_upper", "_pairs")

    def __init__(self, dim: int, omega_upper=None):
        if dim < 2 or dim % 2:
            raise ValueError("dim must be even and >= 2")
        self.dim = dim
        if omega_upper is None:
            rows = [[Fraction(0)] * dim for _ in range(dim)]
            for a in range(0, dim, 2):
                rows[a][a + 1] = Fraction(1)
                rows[a + 1][a] = Fraction(-1)
            omega_upper = rows
        self.omega_upper = tuple(tuple(Fraction(v) for v in row) for row in omega_upper)
        if len(self.omega_upper) != dim or any(len(r) != dim for r in self.omega_upper):
            raise ValueError("omega_upper must be dim x dim")
        # nonzero entries as (left fiber index, right fiber index, weight)
        self._pairs = tuple(
            (i, j, self.omega_upper[i][j])
            for i in range(dim)
            for j in range(dim)
            if self.omega_upper[i][j]
        )

    # -- product --------------------------------------------------------

    def circ(self, a: WeylSeries, b: WeylSeries, cap=None) -> WeylSeries:
        """a o b, the term-wise contraction product.

        For monomial fibers it expands as a finite sum over contraction
        multi-indices mu on the nonzero omega^{ij} slots:

            sum_mu  (i*hbar/2)^{|mu|} / mu!  *  prod omega^{ij}^{mu_ij}
                    * d^mu_left(X^alpha) * d^mu_right(X^beta)

        Degrees add: every product term has degree deg(a_term) + deg(b_term).
        Raises TruncationError when `cap` exceeds what the operands' own
        truncation bounds can determine.
        """
        eff = self._effective_cap(a, b, cap, fiber_only=False)
        return self._product(a, b, eff)

    def _effective_cap(self, a, b, cap, fiber_only):
        if a.dim != self.dim or b.dim != self.dim:
            raise ValueError("series dimension does not match algebra")
        bound = _product_valid_through(a, b, fiber_only=fiber_only)
        if cap is None:
            return bound
        if bound is not None and cap > bound:
            raise TruncationError(
                f"product requested through degree {cap} but operands only "
                f"determine it through {bound}"
            )
        return cap

    def _product(self, a: WeylSeries, b: WeylSeries, eff) -> WeylSeries:
        out = WeylSeries(self.dim, known_through=eff)
        for (k1, f1, w1), c1 in a._terms.items():
            d1 = 2 * k1 + sum(f1)
            for (k2, f2, w2), c2 in b._terms.items():
                if eff is not None and d1 + 2 * k2 + sum(f2) > eff:
                    continue
                word, sign = wedge_normalize(w1 + w2, self.dim)
                if sign == 0:
                    continue
                base = c1 * c2
                if sign < 0:
                    base = -base
                for t, scalar, left_loss, right_loss in self._contractions(f1, f2):
                    fiber = tuple(
                        f1[i] + f2[i] - left_loss[i] - right_loss[i]
                        for i in range(self.dim)
                    )
                    out._insert(out._terms, k1 + k2 + t, fiber, word, base.scale(scalar))
        return out

    def _contractions(self, alpha, beta):
        """Yield (t, scalar, left_derivative_counts, right_derivative_counts)."""
        pairs = self._pairs
        n = len(pairs)
        results = []

        def rec(idx, la, lb, mu):
            if idx == n:
                t = sum(mu)
                # (i/2)^t / prod(mu!)  *  prod weight^mu  *  falling factorials
                scalar = i_power(t) * Fraction(1, 2**t)
                for p, m in enumerate(mu):
                    if m:
                        w = pairs[p][2] ** m
                        fact = 1
                        for x in range(2, m + 1):
                            fact *= x
                        scalar = scalar * Fraction(w, fact)
                left = [0] * self.dim
                right = [0] * self.dim
                for p, m in enumerate(mu):
                    if m:
                        left[pairs[p][0]] += m
                        right[pairs[p][1]] += m
                ff = 1
                for i in range(self.dim):
                    for x in range(alpha[i] - left[i] + 1, alpha[i] + 1):
                        ff *= x
                    for x in range(beta[i] - right[i] + 1, beta[i] + 1):
                        ff *= x
                results.append((t, scalar * ff, tuple(left), tuple(right)))
                return
            i, j, _w = pairs[idx]
            mmax = min(la[i], lb[j])
            for m in range(mmax + 1):
                la[i] -= m
                lb[j] -= m
                mu.append(m)
                rec(idx + 1, la, lb, mu)
                mu.pop()
                la[i] += m
                lb[j] += m

        rec(0, list(alpha), list(beta), [])
        return results

    # -- graded commutator ---------------------------------------------

    def commutator(self, a: WeylSeries, b: WeylSeries, cap=None) -> WeylSeries:
        """[a, b] = a o b - (-1)^{m1*m2} b o a, split over form degrees.

        The degree-0 contraction block cancels identically, so the result
        is always divisible by i*hbar.  Forms free of X are central.
        """
        eff = self._effective_cap(a, b, cap, fiber_only=True)
        out = WeylSeries(a.dim, known_through=eff)
        a_parts = {m: a.form_part(m) for m in a.form_degrees()}
        b_parts = {m: b.form_part(m) for m in b.form_degrees()}
        for m1, ap in a_parts.items():
            for m2, bp in b_parts.items():
                left = self._product(ap, bp, eff)
                right = self._product(bp, ap, eff)
                if (m1 * m2) % 2:
                    piece = left + right
                else:
                    piece = left - right
                for (k, f, w), c in piece._terms.items():
                    out._insert(out._terms, k, f, w, c)
        return out


# --- grading helpers ----------------------------------------------------

def grade_part(a: WeylSeries, k: int, l: int) -> WeylSeries:
    """Terms with hbar power k and fiber length l (degree 2k + l)."""
    z = 2 * k + l
    if a.known_through is not None and z > a.known_through:
        raise TruncationError(f"grade (k={k}, l={l}) beyond known_through={a.known_through}")
    out = WeylSeries(a.dim)
    for (kk, f, w), c in a._terms.items():
        if kk == k and sum(f) == l:
            out._terms[(kk, f, w)] = c
    return out


def sigma(a: WeylSeries) -> dict[int, BasePolynomial]:
    """Projection X -> 0 of a form-degree-0 series, keyed by hbar power."""
    out: dict[int, BasePolynomial] = {}
    for (k, f, w), c in a._terms.items():
        if w:
            raise ValueError("sigma applies to form-degree-0 series only")
        if any(f):
            continue
        acc = out.get(k)
        acc = c if acc is None else acc + c
        if acc:
            out[k] = acc
        elif k in out:
            del out[k]
    return out


def div_ihbar(a: WeylSeries) -> WeylSeries:
    """Divide by i*hbar; every term must carry hbar^k with k >= 1."""
    known = a.known_through if a.known_through is None else a.known_through - 2
    out = WeylSeries(a.dim, known_through=known)
    minus_i = GaussianRational(Fraction(0), Fraction(-1))
    for (k, f, w), c in a._terms.items():
        if k == 0:
            raise DivisibilityError(f"term with hbar^0 not divisible: fiber={f} word={w}")
        out._insert(out._terms, k - 1, f, w, c * minus_i)
    return out
