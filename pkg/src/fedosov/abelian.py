"""Abelian connections on the Weyl bundle and the induced star product.

The correction one-form r solves

    delta r = R + covariant_d r + (1/i hbar) r o r,      delta_inv r = 0,

with R the curvature two-form of the symmetric connection.  Solving grade
by grade gives the unique normalized solution

    r[3] = delta_inv R
    r[z] = delta_inv( covariant_d r[z-1]
                      + (1/i hbar) sum_{j=3}^{z-2} r[j] o r[z+1-j] )

whose components are one-forms of degree z with fiber length >= 1 and
even hbar powers only.  Flat sections of the resulting Abelian connection
are lifted from their X-free parts by another graded fixed point, and the
star product of two observables is the projection of the circle product
of their lifts.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .calculus import covariant_d, delta, delta_inv
from .geometry import ConnectionSpec, ManifoldSpec, curvature_form, gamma_form
from .poly import BasePolynomial
from .weyl import TruncationError, WeylSeries, div_ihbar


class CommutingHypothesisError(ValueError):
    """A product r[j] o r[k] failed to vanish where the shortcut needs it."""


@dataclass
class AbelianCorrection:
    """Graded components of r, each an exact homogeneous one-form."""

    manifold: ManifoldSpec
    connection: ConnectionSpec
    parts: dict[int, WeylSeries]
    known_through: int

    def part(self, z: int) -> WeylSeries:
        if z < 3:
            raise ValueError("components start at degree 3")
        if z > self.known_through:
            raise TruncationError(f"r[{z}] not computed (known through {self.known_through})")
        return self.parts.get(z, WeylSeries.zero(self.manifold.dim))

    def series(self) -> WeylSeries:
        out = WeylSeries.zero(self.manifold.dim, known_through=self.known_through)
        for p in self.parts.values():
            out = out + p.truncate(self.known_through)
        return out

    def nonzero_grades(self) -> list[int]:
        return sorted(z for z, p in self.parts.items() if not p.is_zero())

    def degree(self):
        grades = self.nonzero_grades()
        return grades[-1] if grades else None


def abelian_r(m: ManifoldSpec, c: ConnectionSpec, N: int) -> AbelianCorrection:
    """Solve the normalized correction grade by grade through degree N."""
    if N < 3:
        raise ValueError("need N >= 3: the correction starts at degree 3")
    alg = m.algebra
    gamma = gamma_form(m, c)
    R = curvature_form(m, c)
    parts: dict[int, WeylSeries] = {3: delta_inv(R)}
    for z in range(4, N + 1):
        source = covariant_d(alg, gamma, parts[z - 1])
        prods = WeylSeries.zero(m.dim)
        for j in range(3, z - 1):
            prods = prods + alg.circ(parts[j], parts[z + 1 - j])
        if not prods.is_zero():
            source = source + div_ihbar(prods)
        parts[z] = delta_inv(source)
    return AbelianCorrection(m, c, parts, known_through=N)


def abelian_r_iterative(m: ManifoldSpec, c: ConnectionSpec, steps: int, N: int) -> AbelianCorrection:
    """Whole-series fixed point r <- delta_inv(R + covariant_d r + (1/i hbar) r o r).

    After `steps` >= N sweeps the grades through N have stabilized and
    agree with the graded solver.
    """
    if N < 3:
        raise ValueError("need N >= 3")
    if steps < N:
        raise ValueError(f"need steps >= N for grades through {N} to settle")
    alg = m.algebra
    gamma = gamma_form(m, c)
    R = curvature_form(m, c)
    r = WeylSeries.zero(m.dim, known_through=N)
    for _ in range(steps):
        source = R + covariant_d(alg, gamma, r)
        sq = alg.circ(r, r)
        if not sq.is_zero():
            source = source + div_ihbar(sq)
        r = delta_inv(source).truncate(N)
    parts = {z: r.homogeneous_part(z) for z in range(3, N + 1)}
    return AbelianCorrection(m, c, parts, known_through=N)


@dataclass
class CheckReport:
    ok: bool
    checked_through: int
    first_bad_grade: int | None = None
    residual: WeylSeries | None = None
    normalization_ok: bool = True
    even_hbar_ok: bool = True
    fiber_ok: bool = True
    base_ok: bool = True
    messages: list[str] = field(default_factory=list)


def check_abelian(r: AbelianCorrection, N: int | None = None) -> CheckReport:
    """Verify the defining equation residual vanishes through grade N-1,
    plus the normalization delta_inv r = 0, even hbar powers, fiber
    length >= 1, and the base component r[3] = delta_inv R.
    """
    m, c = r.manifold, r.connection
    if N is None:
        N = r.known_through
    if N > r.known_through:
        raise TruncationError(f"cannot check through {N}: r known through {r.known_through}")
    alg = m.algebra
    gamma = gamma_form(m, c)
    R = curvature_form(m, c)

    residual = -R
    prods = WeylSeries.zero(m.dim)
    for z in range(3, N + 1):
        pz = r.part(z)
        residual = residual + delta(pz) - covariant_d(alg, gamma, pz)
        for w in range(3, N + 1):
            prods = prods + alg.circ(pz, r.part(w))
    if not prods.is_zero():
        residual = residual - div_ihbar(prods)
    # grades >= N receive contributions from parts beyond the computed range
    residual = residual.truncate(N - 1)

    report = CheckReport(ok=True, checked_through=N - 1)
    for g in range(0, N):
        part = residual.homogeneous_part(g)
        if not part.is_zero():
            report.ok = False
            report.first_bad_grade = g
            report.residual = part
            report.messages.append(f"equation residual nonzero at grade {g}")
            break

    for z in range(3, N + 1):
        pz = r.part(z)
        if not delta_inv(pz).is_zero():
            report.normalization_ok = False
            report.messages.append(f"delta_inv r[{z}] != 0")
        for t in pz.terms():
            if t.hbar % 2:
                report.even_hbar_ok = False
                report.messages.append(f"odd hbar power {t.hbar} in r[{z}]")
            if not any(t.fiber):
                report.fiber_ok = False
                report.messages.append(f"X-free term in r[{z}]")
    if r.part(3) != delta_inv(R):
        report.base_ok = False
        report.messages.append("r[3] != delta_inv R")
    report.ok = report.ok and report.normalization_ok and report.even_hbar_ok \
        and report.fiber_ok and report.base_ok
    return report


@dataclass
class FinitenessResult:
    """Outcome of the closure system for 'r stops below degree m'."""

    m: int
    violations: tuple[int, ...]  # would-be source grades z with nonzero residual
    first_residual: WeylSeries | None = None

    @property
    def consistent(self) -> bool:
        return not self.violations

    @property
    def first_violated(self):
        return self.violations[0] if self.violations else None

    @property
    def square_violated(self) -> bool:
        return (2 * self.m - 3) in self.violations


def finiteness_test(r: AbelianCorrection, m_param: int) -> FinitenessResult:
    """Evaluate the closure system equivalent to r[z] = 0 for all z >= m_param.

    Equation at z = m:      covariant_d r[m-1]
                            + (1/i hbar) sum_{j=3}^{m-2} r[j] o r[m+1-j] = 0
    and for m < z <= 2m-3:  sum_j r[j] o r[z+1-j] = 0 over the j with both
    factors below degree m; the last is r[m-1] o r[m-1] = 0.
    """
    if m_param < 4:
        raise ValueError("need m >= 4")
    if r.known_through < m_param - 1:
        raise TruncationError(
            f"need r through degree {m_param - 1}, known through {r.known_through}"
        )
    mm = m_param
    alg = r.manifold.algebra
    gamma = gamma_form(r.manifold, r.connection)

    violations = []
    first_residual = None

    eq = covariant_d(alg, gamma, r.part(mm - 1))
    prods = WeylSeries.zero(r.manifold.dim)
    for j in range(3, mm - 1):
        prods = prods + alg.circ(r.part(j), r.part(mm + 1 - j))
    if not prods.is_zero():
        eq = eq + div_ihbar(prods)
    if not eq.is_zero():
        violations.append(mm)
        first_residual = eq

    for z in range(mm + 1, 2 * mm - 2):
        acc = WeylSeries.zero(r.manifold.dim)
        for j in range(max(3, z + 2 - mm), min(mm - 1, z - 2) + 1):
            acc = acc + alg.circ(r.part(j), r.part(z + 1 - j))
        if not acc.is_zero():
            violations.append(z)
            if first_residual is None:
                first_residual = acc
    return FinitenessResult(mm, tuple(violations), first_residual)


@dataclass
class CommutingCaseResult:
    kind: str  # "zero-curvature" | "finite" | "not-finite-within"
    z: int | None = None
    r_degree: int | None = None


def commuting_case_degree(m: ManifoldSpec, c: ConnectionSpec, z_max: int) -> CommutingCaseResult:
    """Degree detection when all r[j] o r[k] vanish.

    Under that hypothesis r[z] = (delta_inv covariant_d)^{z-3} delta_inv R,
    and r is finite iff some iterate (covariant_d delta_inv)^{z-3} R with
    z >= 4 vanishes; the smallest such z is returned (the degree of r is
    then z - 1).  The hypothesis is verified on every computed component,
    not assumed.
    """
    if z_max < 4:
        raise ValueError("need z_max >= 4")
    alg = m.algebra
    gamma = gamma_form(m, c)
    R = curvature_form(m, c)
    if R.is_zero():
        return CommutingCaseResult(kind="zero-curvature", r_degree=None)

    parts = {3: delta_inv(R)}
    source = R
    found = None
    for z in range(4, z_max + 1):
        source = covariant_d(alg, gamma, delta_inv(source))
        if source.is_zero():
            found = z
            break
        parts[z] = delta_inv(source)

    for j in sorted(parts):
        for k in sorted(parts):
            if k < j:
                continue
            if not alg.circ(parts[j], parts[k]).is_zero():
                raise CommutingHypothesisError(
                    f"r[{j}] o r[{k}] != 0: commuting shortcut does not apply"
                )
    if found is None:
        return CommutingCaseResult(kind="not-finite-within", z=None, r_degree=None)
    return CommutingCaseResult(kind="finite", z=found, r_degree=found - 1)


@dataclass
class FlatSection:
    a0: BasePolynomial
    series: WeylSeries
    known_through: int


def flat_section(r: AbelianCorrection, a0: BasePolynomial, N: int | None = None) -> FlatSection:
    """Lift a0(q) to the section flat for the Abelian connection:

        a = a0 + delta_inv( covariant_d a + (1/i hbar)[r, a] )

    solved through grade N by N sweeps of the fixed point (grade z of the
    right side only reads grades below z, so sweep s settles grade s).
    """
    m, c = r.manifold, r.connection
    if N is None:
        N = r.known_through
    if N > r.known_through:
        raise TruncationError(f"need r through {N}, known through {r.known_through}")
    if a0.dim != m.dim:
        raise ValueError("observable dimension mismatch")
    alg = m.algebra
    gamma = gamma_form(m, c)
    rs = r.series()
    base = WeylSeries.from_poly(a0)
    a = base
    for _ in range(N):
        rhs = covariant_d(alg, gamma, a) + div_ihbar(alg.commutator(rs, a))
        a = (base + delta_inv(rhs)).truncate(N)
    a = a.truncate(N)
    if a.known_through is not None and a.known_through < N:
        raise TruncationError(f"section settled only through {a.known_through}, need {N}")
    return FlatSection(a0=a0, series=a, known_through=N)


def flatness_residual(r: AbelianCorrection, section: FlatSection) -> WeylSeries:
    """-delta a + covariant_d a + (1/i hbar)[r, a]; zero through grade N-1."""
    m, c = r.manifold, r.connection
    alg = m.algebra
    gamma = gamma_form(m, c)
    a = section.series
    return -delta(a) + covariant_d(alg, gamma, a) + div_ihbar(alg.commutator(r.series(), a))


def star(m: ManifoldSpec, c: ConnectionSpec, a0: BasePolynomial, b0: BasePolynomial,
         K: int, r: AbelianCorrection | None = None) -> dict[int, BasePolynomial]:
    """Star product through hbar^K: lift both observables to flat sections
    through grade 2K, multiply, project with sigma."""
    from .weyl import sigma

    if K < 0:
        raise ValueError("need K >= 0")
    if r is None:
        r = abelian_r(m, c, max(3, 2 * K))
    elif r.known_through < 2 * K:
        raise TruncationError(f"need r through {2 * K}, known through {r.known_through}")
    sa = flat_section(r, a0, 2 * K)
    sb = flat_section(r, b0, 2 * K)
    prod = m.algebra.circ(sa.series, sb.series, cap=2 * K)
    return {k: p for k, p in sigma(prod).items() if k <= K}


def star_hbar(m: ManifoldSpec, c: ConnectionSpec, a: dict[int, BasePolynomial],
              b: dict[int, BasePolynomial], K: int,
              r: AbelianCorrection | None = None) -> dict[int, BasePolynomial]:
    """Star product of hbar-expanded observables, bilinear over hbar powers."""
    if r is None:
        r = abelian_r(m, c, max(3, 2 * K))
    out: dict[int, BasePolynomial] = {}
    for ja, pa in a.items():
        for jb, pb in b.items():
            if ja + jb > K:
                continue
            piece = star(m, c, pa, pb, K - ja - jb, r=r)
            for k, p in piece.items():
                acc = out.get(ja + jb + k)
                p = p if acc is None else acc + p
                if p.is_zero():
                    out.pop(ja + jb + k, None)
                else:
                    out[ja + jb + k] = p
    return out
