"""Eigenvalue analysis of incidence matrices over exact arithmetic.

Characteristic polynomials are computed division-free; dominant roots come
with certified rational enclosures; comparisons (same spectrum up to zero and
roots of unity, multiplicative dependence of dominant roots) are decided by
exact polynomial identities plus Sturm root counts, never by floating point.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from .errors import CancelledSearch, InternalInconsistencyError
from .intpoly import (
    IntPolynomial,
    NumericRoot,
    SturmCounter,
    cyclotomic,
    euler_phi,
    isolate_largest_real_root,
    numeric_roots,
    poly_gcd,
    rational_roots,
)
from .substitution import IncidenceMatrix, is_primitive

DEFAULT_PRECISION = Fraction(1, 10**9)


@dataclass(frozen=True)
class RootEnclosure:
    """Rational interval (lo, hi] certified to contain exactly one target root."""

    lo: Fraction
    hi: Fraction
    exact: bool

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    def contains(self, value: Fraction) -> bool:
        if self.exact:
            return value == self.hi
        return self.lo < value <= self.hi

    def powered(self, m: int) -> RootEnclosure:
        """Interval enclosing the m-th power; requires a non-negative interval."""
        if self.lo < 0:
            raise ValueError("powering is implemented for non-negative enclosures only")
        return RootEnclosure(self.lo**m, self.hi**m, self.exact)

    def intersect(self, other: RootEnclosure) -> RootEnclosure | None:
        lo = max(self.lo, other.lo)
        hi = min(self.hi, other.hi)
        if hi < lo:
            return None
        return RootEnclosure(lo, hi, self.exact and other.exact and lo == hi)

    def as_float(self) -> float:
        return float((self.lo + self.hi) / 2)


def char_poly(matrix: IncidenceMatrix) -> IntPolynomial:
    """det(xI - M) with exact integer coefficients.

    Division-free: expand minors over column subsets with memoization, with
    the matrix entries read as degree-<=1 integer polynomials.
    """
    if not matrix.is_square:
        raise ValueError("characteristic polynomial requires a square matrix")
    n = matrix.nrows
    if n == 0:
        return IntPolynomial.one()
    x = IntPolynomial.x()
    entries = [
        [x - IntPolynomial((matrix.entry(i, j),)) if i == j else IntPolynomial((-matrix.entry(i, j),)) for j in range(n)]
        for i in range(n)
    ]
    memo: dict[tuple[int, ...], IntPolynomial] = {(): IntPolynomial.one()}

    def minor(cols: tuple[int, ...]) -> IntPolynomial:
        if cols in memo:
            return memo[cols]
        row = n - len(cols)
        acc = IntPolynomial.zero()
        for pos, j in enumerate(cols):
            e = entries[row][j]
            if e.is_zero:
                continue
            sub = minor(cols[:pos] + cols[pos + 1 :])
            term = e * sub
            acc = acc + term if pos % 2 == 0 else acc - term
        memo[cols] = acc
        return acc

    return minor(tuple(range(n)))


def dominant_eigenvalue(
    matrix: IncidenceMatrix, precision: Fraction = DEFAULT_PRECISION
) -> RootEnclosure:
    """Certified enclosure of the dominant (largest real) eigenvalue.

    For a non-negative matrix this is the spectral radius; for a primitive
    matrix the enclosure isolates a simple root.
    """
    if not matrix.is_square:
        raise ValueError("dominant eigenvalue requires a square matrix")
    if not matrix.is_nonnegative:
        raise ValueError("dominant eigenvalue is defined for non-negative matrices")
    p = char_poly(matrix)
    lo, hi, exact = isolate_largest_real_root(p, precision)
    return RootEnclosure(lo, hi, exact)


@dataclass(frozen=True)
class Spectrum:
    """Exact eigenvalue data of a matrix (or of a bare characteristic polynomial).

    ``exact_roots`` lists the rational eigenvalues with multiplicities (zero
    included); ``residual_factor`` is what remains of the characteristic
    polynomial after dividing those out, so the product of the linear factors
    and the residual reconstructs ``char_poly`` exactly.  ``numeric_roots``
    approximates the residual's roots and is advisory only.
    """

    char_poly: IntPolynomial
    dominant: RootEnclosure | None
    exact_roots: tuple[tuple[Fraction, int], ...]
    residual_factor: IntPolynomial
    numeric_roots: tuple[NumericRoot, ...]

    def eigenvalue_summary(self) -> list[str]:
        out = [f"{r}" if r.denominator != 1 else f"{r.numerator}" for r, m in self.exact_roots for _ in range(m)]
        out.extend(f"~{z.value.real:+.6f}{z.value.imag:+.6f}j" for z in self.numeric_roots)
        return out


def spectrum_of_poly(p: IntPolynomial, precision: Fraction = DEFAULT_PRECISION) -> Spectrum:
    if p.is_zero:
        raise ValueError("zero polynomial has no spectrum")
    roots = rational_roots(p) if p.degree >= 1 else []
    residual = p
    for r, mult in roots:
        factor = IntPolynomial((-r.numerator, r.denominator))
        for _ in range(mult):
            q = residual.try_exact_div(factor)
            if q is None:
                raise InternalInconsistencyError("rational root does not divide")
            residual = q
    check = IntPolynomial.one()
    for r, mult in roots:
        for _ in range(mult):
            check = check * IntPolynomial((-r.numerator, r.denominator))
    if check * residual != p:
        raise InternalInconsistencyError("spectrum factorization does not reconstruct")
    dominant = None
    if p.degree >= 1:
        lo, hi, exact = isolate_largest_real_root(p, precision)
        dominant = RootEnclosure(lo, hi, exact)
    return Spectrum(
        char_poly=p,
        dominant=dominant,
        exact_roots=tuple(roots),
        residual_factor=residual,
        numeric_roots=numeric_roots(residual),
    )


def spectrum(matrix: IncidenceMatrix, precision: Fraction = DEFAULT_PRECISION) -> Spectrum:
    return spectrum_of_poly(char_poly(matrix), precision)


def strip_trivial_poly(p: IntPolynomial) -> IntPolynomial:
    """Remove every zero root and every root-of-unity root from p.

    Any root of unity among the roots has a cyclotomic minimal polynomial
    whose index d satisfies phi(d) <= deg p, hence d <= 2 deg(p)^2; that
    finite range is searched exhaustively and each dividing cyclotomic factor
    is divided out to full multiplicity.
    """
    if p.is_zero:
        raise ValueError("zero polynomial")
    work = p.shift_divide(p.zero_root_multiplicity())
    deg = work.degree
    for d in range(1, 2 * deg * deg + 1):
        if euler_phi(d) > deg:
            continue
        phi_d = cyclotomic(d)
        while True:
            quotient, rem = work.divmod_monic(phi_d)
            if rem.is_zero and not quotient.is_zero:
                work = quotient
            else:
                break
    return work


def strip_trivial(s: Spectrum, precision: Fraction = DEFAULT_PRECISION) -> Spectrum:
    """Spectrum with zero eigenvalues and root-of-unity eigenvalues removed."""
    return spectrum_of_poly(strip_trivial_poly(s.char_poly), precision)


def spectra_equal_mod_trivial(m1: IncidenceMatrix, m2: IncidenceMatrix) -> bool:
    """Same eigenvalue sets after discarding zeros and roots of unity.

    Set comparison, not multiset: the stripped characteristic polynomials are
    compared through their squarefree parts (normalized primitive, positive
    leading coefficient).
    """
    p1 = strip_trivial_poly(char_poly(m1)).squarefree_part()
    p2 = strip_trivial_poly(char_poly(m2)).squarefree_part()
    return p1 == p2


def same_nonzero_root_sets(p1: IntPolynomial, p2: IntPolynomial) -> bool:
    """Equal root sets once zero roots are removed (roots of unity retained)."""
    a = p1.shift_divide(p1.zero_root_multiplicity()).squarefree_part()
    b = p2.shift_divide(p2.zero_root_multiplicity()).squarefree_part()
    return a == b


@dataclass(frozen=True)
class DependenceWitness:
    """Certified pair of exponents with equal dominant-eigenvalue powers."""

    m: int
    n: int
    certified: bool
    common_factor: IntPolynomial
    enclosure: RootEnclosure
    exact_value: Fraction | None

    def describe(self) -> str:
        val = f" = {self.exact_value}" if self.exact_value is not None else ""
        return f"alpha^{self.m} = beta^{self.n}{val}"


def certify_equal_dominant(
    m1: IncidenceMatrix,
    m2: IncidenceMatrix,
    precision: Fraction = DEFAULT_PRECISION,
    max_refinements: int = 60,
) -> tuple[IntPolynomial, RootEnclosure] | None:
    """Decide exactly whether two matrices share their dominant eigenvalue.

    Returns ``(common_factor, enclosure)`` on equality, ``None`` otherwise.
    Equality is certified by a non-constant gcd of the characteristic
    polynomials together with a Sturm count of one inside the intersection of
    the two dominant enclosures; inequality by eventually disjoint enclosures.
    """
    p1, p2 = char_poly(m1), char_poly(m2)
    e1 = dominant_eigenvalue(m1, precision)
    e2 = dominant_eigenvalue(m2, precision)
    if e1.exact and e2.exact:
        if e1.hi != e2.hi:
            return None
        g = poly_gcd(p1, p2)
        if g.degree < 1 or g(e1.hi) != 0:
            raise InternalInconsistencyError("equal exact dominants must share a factor")
        return g, RootEnclosure(e1.hi, e1.hi, True)
    if e1.exact or e2.exact:
        # one dominant is a known rational: equality holds iff it is also the
        # (unique) root of the other polynomial inside that enclosure
        value = e1.hi if e1.exact else e2.hi
        other_poly, other_enc = (p2, e2) if e1.exact else (p1, e1)
        if other_poly(value) == 0 and other_enc.contains(value):
            g = poly_gcd(p1, p2)
            return g, RootEnclosure(value, value, True)
        return None
    g = poly_gcd(p1, p2)
    counter = SturmCounter(g) if g.degree >= 1 else None
    width = precision
    for _ in range(max_refinements):
        meet = e1.intersect(e2)
        if meet is None:
            return None
        if counter is not None:
            inside = counter.count(meet.lo, meet.hi)
            if inside == 1:
                one1 = SturmCounter(p1).count(meet.lo, meet.hi)
                one2 = SturmCounter(p2).count(meet.lo, meet.hi)
                if one1 == 1 and one2 == 1:
                    return g, meet
        else:
            # no common factor at all: the dominants are distinct algebraics,
            # so refinement must eventually separate the enclosures
            pass
        width = width / 2**8
        e1 = dominant_eigenvalue(m1, width)
        e2 = dominant_eigenvalue(m2, width)
    raise InternalInconsistencyError("dominant comparison did not converge")


def mult_dependent(
    m1: IncidenceMatrix,
    m2: IncidenceMatrix,
    bound: int = 12,
    precision: Fraction = DEFAULT_PRECISION,
    cancel: Callable[[], bool] | None = None,
) -> DependenceWitness | None:
    """Search exponents 1 <= m, n <= bound with dominant(m1)^m = dominant(m2)^n.

    Candidate pairs are screened with exact rational interval arithmetic on
    the dominant enclosures, then certified through the gcd of the
    characteristic polynomials of the powered matrices.  Returns the least
    pair in (m+n, m) order, or None; absence means only "no witness up to the
    bound", never multiplicative independence.
    """
    prim1, _ = is_primitive(m1)
    prim2, _ = is_primitive(m2)
    if not (prim1 and prim2):
        raise ValueError("multiplicative dependence check needs primitive matrices")
    alpha = dominant_eigenvalue(m1, precision)
    beta = dominant_eigenvalue(m2, precision)
    pairs = sorted(
        ((m, n) for m in range(1, bound + 1) for n in range(1, bound + 1)),
        key=lambda mn: (mn[0] + mn[1], mn[0]),
    )
    for m, n in pairs:
        if cancel is not None and cancel():
            raise CancelledSearch(f"dependence search cancelled at pair ({m}, {n})")
        if alpha.exact and beta.exact:
            if alpha.hi**m != beta.hi**n:
                continue
            value = alpha.hi**m
            g = poly_gcd(char_poly(m1**m), char_poly(m2**n))
            return DependenceWitness(
                m, n, True, g, RootEnclosure(value, value, True), value
            )
        # quick exclusion before touching matrix powers
        if alpha.powered(m).intersect(beta.powered(n)) is None:
            continue
        cert = certify_equal_dominant(m1**m, m2**n, precision)
        if cert is not None:
            g, meet = cert
            exact = meet.lo if meet.exact else None
            return DependenceWitness(m, n, True, g, meet, exact)
    return None
