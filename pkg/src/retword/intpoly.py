"""Exact integer polynomial arithmetic: gcds, Sturm counts, cyclotomics, root isolation.

Coefficients are arbitrary-precision integers stored in ascending degree
order.  Everything that certifies a claim (root counting, isolation,
divisibility) runs over exact integers or ``Fraction``s; floating point
appears only in the advisory complex root approximations at the bottom of the
module.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable

from .errors import InternalInconsistencyError


class IntPolynomial:
    """Dense integer polynomial; ``coeffs[i]`` multiplies x**i."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[int]):
        cs = list(coeffs)
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs: tuple[int, ...] = tuple(cs)

    @classmethod
    def zero(cls) -> IntPolynomial:
        return cls(())

    @classmethod
    def one(cls) -> IntPolynomial:
        return cls((1,))

    @classmethod
    def x(cls) -> IntPolynomial:
        return cls((0, 1))

    @property
    def degree(self) -> int:
        """Degree of the leading term; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def leading(self) -> int:
        if self.is_zero:
            raise ValueError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def __call__(self, value):
        result = 0
        for c in reversed(self.coeffs):
            result = result * value + c
        return result

    def __add__(self, other: IntPolynomial) -> IntPolynomial:
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return IntPolynomial(out)

    def __sub__(self, other: IntPolynomial) -> IntPolynomial:
        return self + (-other)

    def __neg__(self) -> IntPolynomial:
        return IntPolynomial(tuple(-c for c in self.coeffs))

    def __mul__(self, other) -> IntPolynomial:
        if isinstance(other, int):
            return IntPolynomial(tuple(c * other for c in self.coeffs))
        if self.is_zero or other.is_zero:
            return IntPolynomial.zero()
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return IntPolynomial(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> IntPolynomial:
        if n < 0:
            raise ValueError("polynomial power must be >= 0")
        result = IntPolynomial.one()
        for _ in range(n):
            result = result * self
        return result

    def __eq__(self, other) -> bool:
        return isinstance(other, IntPolynomial) and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def derivative(self) -> IntPolynomial:
        return IntPolynomial(tuple(i * c for i, c in enumerate(self.coeffs) if i >= 1))

    def shift_divide(self, k: int) -> IntPolynomial:
        """Exact division by x**k; requires the low k coefficients to vanish."""
        if any(c != 0 for c in self.coeffs[:k]):
            raise ValueError("not divisible by the requested power of x")
        return IntPolynomial(self.coeffs[k:])

    def zero_root_multiplicity(self) -> int:
        if self.is_zero:
            raise ValueError("zero polynomial")
        k = 0
        while self.coeffs[k] == 0:
            k += 1
        return k

    def divmod_monic(self, divisor: IntPolynomial) -> tuple[IntPolynomial, IntPolynomial]:
        """Synthetic division by a monic divisor; exact over the integers."""
        if divisor.is_zero or divisor.leading != 1:
            raise ValueError("divisor must be monic")
        rem = list(self.coeffs)
        d = divisor.degree
        quot = [0] * max(0, len(rem) - d)
        for i in range(len(rem) - d - 1, -1, -1):
            q = rem[i + d]
            if q == 0:
                continue
            quot[i] = q
            for j, c in enumerate(divisor.coeffs):
                rem[i + j] -= q * c
        return IntPolynomial(quot), IntPolynomial(rem[:d])

    def try_exact_div(self, divisor: IntPolynomial) -> IntPolynomial | None:
        """Quotient if the division is exact with integer coefficients, else None."""
        if divisor.is_zero:
            raise ZeroDivisionError("polynomial division by zero")
        if self.is_zero:
            return IntPolynomial.zero()
        if self.degree < divisor.degree:
            return None
        rem = [Fraction(c) for c in self.coeffs]
        lead = Fraction(divisor.leading)
        d = divisor.degree
        quot = [Fraction(0)] * (len(rem) - d)
        for i in range(len(rem) - d - 1, -1, -1):
            q = rem[i + d] / lead
            quot[i] = q
            if q:
                for j, c in enumerate(divisor.coeffs):
                    rem[i + j] -= q * c
        if any(rem[:d]):
            return None
        if any(q.denominator != 1 for q in quot):
            return None
        return IntPolynomial(tuple(int(q) for q in quot))

    def content(self) -> int:
        from math import gcd

        g = 0
        for c in self.coeffs:
            g = gcd(g, abs(c))
        return g

    def primitive(self) -> IntPolynomial:
        """Divide out the content and normalize the leading coefficient positive."""
        if self.is_zero:
            return self
        g = self.content()
        cs = tuple(c // g for c in self.coeffs)
        if cs[-1] < 0:
            cs = tuple(-c for c in cs)
        return IntPolynomial(cs)

    def squarefree_part(self) -> IntPolynomial:
        """The product of the distinct irreducible factors, primitive and positive."""
        if self.degree <= 0:
            return IntPolynomial.one() if not self.is_zero else self
        g = poly_gcd(self, self.derivative())
        if g.degree == 0:
            return self.primitive()
        q = self.try_exact_div(g)
        if q is None:
            # the primitive gcd can differ from the monic one by a content unit
            q = (self * g.leading).try_exact_div(g)
        if q is None:
            raise InternalInconsistencyError("squarefree division failed")
        return q.primitive()

    def pretty(self, var: str = "x") -> str:
        if self.is_zero:
            return "0"
        terms = []
        for i in range(self.degree, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            if i == 0:
                body = str(abs(c))
            else:
                mag = "" if abs(c) == 1 else str(abs(c)) + "*"
                body = f"{mag}{var}" + (f"^{i}" if i > 1 else "")
            terms.append(("- " if c < 0 else "+ ") + body)
        head = terms[0][2:] if terms[0].startswith("+ ") else "-" + terms[0][2:]
        return " ".join([head] + terms[1:])

    def __repr__(self) -> str:
        return f"IntPolynomial({self.pretty()!r})"


def poly_gcd(p: IntPolynomial, q: IntPolynomial) -> IntPolynomial:
    """Greatest common divisor, returned primitive with positive leading coefficient."""
    a = [Fraction(c) for c in p.coeffs]
    b = [Fraction(c) for c in q.coeffs]

    def trim(v):
        while v and v[-1] == 0:
            v.pop()
        return v

    a, b = trim(a), trim(b)
    while b:
        # remainder of a by b over the rationals
        d = len(b) - 1
        lead = b[-1]
        while len(a) - 1 >= d and a:
            k = len(a) - 1 - d
            f = a[-1] / lead
            for j in range(len(b)):
                a[k + j] -= f * b[j]
            trim(a)
            if not a:
                break
        a, b = b, a
    if not a:
        return IntPolynomial.zero()
    from math import lcm

    denom = lcm(*[c.denominator for c in a]) if a else 1
    ints = [int(c * denom) for c in a]
    return IntPolynomial(ints).primitive()


def _fraction_chain(p: IntPolynomial) -> list[tuple[Fraction, ...]]:
    """Sturm chain of p as tuples of Fractions (ascending coefficients)."""

    def trim(v: list[Fraction]) -> tuple[Fraction, ...]:
        while v and v[-1] == 0:
            v.pop()
        return tuple(v)

    def rem(a: tuple[Fraction, ...], b: tuple[Fraction, ...]) -> tuple[Fraction, ...]:
        r = list(a)
        d = len(b) - 1
        lead = b[-1]
        while len(r) - 1 >= d and r:
            k = len(r) - 1 - d
            f = r[-1] / lead
            for j in range(len(b)):
                r[k + j] -= f * b[j]
            while r and r[-1] == 0:
                r.pop()
        return tuple(r)

    chain = [trim([Fraction(c) for c in p.coeffs])]
    dp = trim([Fraction(c) for c in p.derivative().coeffs])
    if dp:
        chain.append(dp)
        while True:
            r = rem(chain[-2], chain[-1])
            if not r:
                break
            chain.append(tuple(-c for c in r))
    return chain


def _eval_tuple(coeffs: tuple[Fraction, ...], value: Fraction) -> Fraction:
    result = Fraction(0)
    for c in reversed(coeffs):
        result = result * value + c
    return result


def _sign_changes(values: list[Fraction]) -> int:
    signs = [1 if v > 0 else -1 for v in values if v != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


class SturmCounter:
    """Counts distinct real roots of a fixed polynomial over half-open intervals.

    Sign sequences are evaluated with zeros skipped, which makes the count at
    a point equal to the count just to its right; the difference of counts at
    a and b therefore gives the number of distinct roots in (a, b].
    """

    def __init__(self, p: IntPolynomial):
        if p.is_zero:
            raise ValueError("cannot count roots of the zero polynomial")
        self.poly = p
        # multiplicities never matter here, and squarefree input keeps the
        # zero-skipping variation count honest at chain-internal roots
        self.chain = _fraction_chain(p.squarefree_part())

    def variations(self, at: Fraction) -> int:
        return _sign_changes([_eval_tuple(c, at) for c in self.chain])

    def count(self, lo: Fraction, hi: Fraction) -> int:
        """Distinct real roots in the half-open interval (lo, hi]."""
        if hi < lo:
            raise ValueError("empty interval")
        return self.variations(lo) - self.variations(hi)


def root_magnitude_bound(p: IntPolynomial) -> Fraction:
    """A rational B with every complex root of p strictly inside |z| < B."""
    if p.degree < 1:
        return Fraction(1)
    lead = abs(p.leading)
    biggest = max(abs(c) for c in p.coeffs[:-1]) if p.degree >= 1 else 0
    return Fraction(biggest, lead) + 2


def _divisors(n: int, cap: int = 10**12) -> list[int]:
    n = abs(n)
    if n == 0 or n > cap:
        return []
    out = []
    d = 1
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            if d != n // d:
                out.append(n // d)
        d += 1
    return sorted(out)


def rational_roots(p: IntPolynomial) -> list[tuple[Fraction, int]]:
    """All rational roots with multiplicities, zero included, ascending order.

    Candidate enumeration follows the rational root test; constant terms with
    more than ~1e12 in magnitude are skipped (nothing at desk scale gets
    there), in which case only the zero root is reported.
    """
    if p.is_zero:
        raise ValueError("zero polynomial has every root")
    roots: list[tuple[Fraction, int]] = []
    k = p.zero_root_multiplicity()
    work = p.shift_divide(k)
    if k:
        roots.append((Fraction(0), k))
    if work.degree >= 1:
        for num in _divisors(work.coeffs[0]):
            for den in _divisors(work.leading):
                for cand in (Fraction(num, den), Fraction(-num, den)):
                    if work(cand) != 0:
                        continue
                    mult = 0
                    factor = IntPolynomial((-cand.numerator, cand.denominator))
                    while True:
                        q = work.try_exact_div(factor)
                        if q is None:
                            break
                        work = q
                        mult += 1
                    if mult:
                        roots.append((cand, mult))
    return sorted(roots)


def isolate_largest_real_root(
    p: IntPolynomial, width: Fraction = Fraction(1, 10**9)
) -> tuple[Fraction, Fraction, bool]:
    """Certified enclosure (lo, hi] of the largest real root of p.

    Returns ``(lo, hi, exact)``; when ``exact`` the two endpoints coincide
    with the root.  The interval always contains exactly one distinct root of
    p and no root of p lies above it.
    """
    sf = p.squarefree_part()
    if sf.degree < 1:
        raise ValueError("polynomial has no roots")
    counter = SturmCounter(sf)
    bound = root_magnitude_bound(sf)
    lo, hi = -bound, bound
    total = counter.count(lo, hi)
    if total < 1:
        raise ValueError("polynomial has no real root")
    while counter.count(lo, hi) > 1 or hi - lo > width:
        mid = (lo + hi) / 2
        if sf(mid) == 0 and counter.count(mid, hi) == 0:
            return mid, mid, True
        if counter.count(mid, hi) >= 1:
            lo = mid
        else:
            hi = mid
    if sf(hi) == 0:
        return hi, hi, True
    for cand, _ in rational_roots(sf):
        if lo < cand <= hi:
            return cand, cand, True
    return lo, hi, False


@lru_cache(maxsize=None)
def euler_phi(n: int) -> int:
    result = n
    m = n
    d = 2
    while d * d <= m:
        if m % d == 0:
            while m % d == 0:
                m //= d
            result -= result // d
        d += 1
    if m > 1:
        result -= result // m
    return result


@lru_cache(maxsize=None)
def cyclotomic(d: int) -> IntPolynomial:
    """The d-th cyclotomic polynomial, via exact division of x^d - 1."""
    if d < 1:
        raise ValueError("cyclotomic index must be >= 1")
    num = IntPolynomial((-1,) + (0,) * (d - 1) + (1,))
    for e in range(1, d):
        if d % e == 0:
            num, rem = num.divmod_monic(cyclotomic(e))
            if not rem.is_zero:
                raise InternalInconsistencyError("cyclotomic division left a remainder")
    return num


@dataclass(frozen=True)
class NumericRoot:
    """Advisory complex approximation with an a-posteriori distance bound."""

    value: complex
    error_bound: float


def numeric_roots(p: IntPolynomial, iterations: int = 400) -> tuple[NumericRoot, ...]:
    """Simultaneous-iteration approximations of all complex roots.

    Advisory only: the returned bound (|p(z)| / |lead|) ** (1/deg) dominates
    the distance from z to the nearest true root; nothing downstream certifies
    with these numbers.
    """
    d = p.degree
    if d < 1:
        return ()
    lead = p.coeffs[-1]
    monic = [c / lead for c in p.coeffs]

    def peval(z: complex) -> complex:
        acc = 0j
        for c in reversed(monic):
            acc = acc * z + c
        return acc

    radius = float(root_magnitude_bound(p))
    zs = [complex(0.4, 0.9) ** k * radius / 2 + 0.1 for k in range(1, d + 1)]
    for _ in range(iterations):
        shift = 0.0
        new = list(zs)
        for i in range(d):
            denom = 1.0 + 0j
            for j in range(d):
                if j != i:
                    denom *= zs[i] - zs[j]
            if denom == 0:
                denom = 1e-30
            delta = peval(zs[i]) / denom
            new[i] = zs[i] - delta
            shift = max(shift, abs(delta))
        zs = new
        if shift < 1e-14 * max(1.0, radius):
            break
    out = []
    for z in sorted(zs, key=lambda w: (round(w.real, 9), round(w.imag, 9))):
        residue = abs(p(complex(z)) / lead)
        out.append(NumericRoot(z, residue ** (1.0 / d) if residue else 0.0))
    return tuple(out)
