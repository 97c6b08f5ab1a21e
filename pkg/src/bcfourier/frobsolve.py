"""Twisted Laurent polynomials over truncated perfect series and the
equation (F - 1) b = a.

The coefficient ring is a truncation of F_q[t^{1/p^inf}]: finite sums
c * t^e with c in F_q (integer codes, see :class:`bcfourier.arith.FiniteField`)
and e a rational with p-power denominator. Terms with e >= emax are dropped
after every operation; exponents below emin or denominators beyond p^depth
raise :class:`PrecisionLoss`. The q-Frobenius phi sends t^e to t^{qe} and
fixes F_q.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .arith import finite_field, is_prime
from .errors import NotSolvable, PrecisionLoss, PrecisionMismatch


@dataclass(frozen=True)
class PerfectSeriesRing:
    p: int
    f: int = 1
    emax: Fraction = Fraction(16)
    emin: Fraction = Fraction(0)
    depth: int = 16

    def __post_init__(self):
        if not is_prime(self.p) or self.f < 1:
            raise ValueError("need a prime p and f >= 1")
        object.__setattr__(self, "emax", Fraction(self.emax))
        object.__setattr__(self, "emin", Fraction(self.emin))
        if self.emin >= self.emax:
            raise ValueError("emin must be below emax")
        if self.depth < 0:
            raise ValueError("depth must be non-negative")

    @property
    def q(self) -> int:
        return self.p**self.f

    @property
    def field(self):
        return finite_field(self.p, self.f)

    def series(self, terms=None) -> "TruncatedPerfectSeries":
        return TruncatedPerfectSeries(self, terms or {})

    def zero(self):
        return self.series()

    def one(self):
        return self.series({Fraction(0): 1})

    def monomial(self, e, c=1):
        return self.series({Fraction(e): c})

    def check_exponent(self, e: Fraction):
        den = e.denominator
        while den % self.p == 0:
            den //= self.p
        if den != 1:
            raise ValueError(f"exponent {e} does not have a p-power denominator")
        if self.p**self.depth % e.denominator:
            raise PrecisionLoss(f"exponent {e} needs a denominator beyond {self.p}^{self.depth}")
        if e < self.emin:
            raise PrecisionLoss(f"exponent {e} falls below emin = {self.emin}")


class TruncatedPerfectSeries:
    """Immutable finite sum of c * t^e, c a nonzero F_q code."""

    __slots__ = ("parent", "terms")

    def __init__(self, parent: PerfectSeriesRing, terms):
        q = parent.q
        clean = {}
        for e, c in dict(terms).items():
            e = Fraction(e)
            c = int(c)
            if not 0 <= c < q:
                raise ValueError(f"coefficient code {c} outside [0, {q})")
            if c == 0 or e >= parent.emax:
                continue
            parent.check_exponent(e)
            clean[e] = c
        self.parent = parent
        self.terms = dict(sorted(clean.items()))

    def _same(self, other):
        if not isinstance(other, TruncatedPerfectSeries):
            return NotImplemented
        if other.parent != self.parent:
            raise PrecisionMismatch("series use different precision parameters")
        return other

    def __eq__(self, other):
        if not isinstance(other, TruncatedPerfectSeries):
            return NotImplemented
        return self.parent == other.parent and self.terms == other.terms

    def __hash__(self):
        return hash((self.parent, tuple(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other):
        other = self._same(other)
        if other is NotImplemented:
            return other
        ff = self.parent.field
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = ff.add(out.get(e, 0), c)
        return TruncatedPerfectSeries(self.parent, out)

    def __neg__(self):
        ff = self.parent.field
        return TruncatedPerfectSeries(self.parent, {e: ff.neg(c) for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._same(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __mul__(self, other):
        other = self._same(other)
        if other is NotImplemented:
            return other
        ff = self.parent.field
        emax = self.parent.emax
        out = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = e1 + e2
                if e < emax:
                    out[e] = ff.add(out.get(e, 0), ff.mul(c1, c2))
        return TruncatedPerfectSeries(self.parent, out)

    def scale(self, c: int):
        ff = self.parent.field
        return TruncatedPerfectSeries(self.parent, {e: ff.mul(c, v) for e, v in self.terms.items()})

    def phi(self, k: int = 1) -> "TruncatedPerfectSeries":
        """phi^k: exponents multiplied by q^k (k may be negative)."""
        factor = Fraction(self.parent.q) ** k
        return TruncatedPerfectSeries(self.parent, {e * factor: c for e, c in self.terms.items()})

    def nonpositive_part(self):
        return TruncatedPerfectSeries(self.parent, {e: c for e, c in self.terms.items() if e <= 0})

    def positive_part(self):
        return TruncatedPerfectSeries(self.parent, {e: c for e, c in self.terms.items() if e > 0})

    def in_topologically_nilpotent(self) -> bool:
        """True when every exponent is > 0."""
        return all(e > 0 for e in self.terms)

    def min_exponent(self):
        return next(iter(self.terms), None)

    def to_list(self):
        """[[numerator, denominator, code], ...] in increasing exponent order."""
        return [[e.numerator, e.denominator, c] for e, c in self.terms.items()]

    @classmethod
    def from_list(cls, parent, items):
        terms = {}
        for num, den, c in items:
            e = Fraction(int(num), int(den))
            if e in terms:
                raise ValueError(f"repeated exponent {e}")
            terms[e] = int(c)
        return cls(parent, terms)

    def __str__(self):
        parts = []
        for e, c in self.terms.items():
            if e == 0:
                parts.append(str(c))
                continue
            if e.denominator == 1:
                mono = "t" if e == 1 else f"t^{e.numerator}"
            else:
                mono = f"t^({e})"
            parts.append(mono if c == 1 else f"{c}*{mono}")
        return " + ".join(parts) or "0"

    __repr__ = __str__


class TwistedLaurent:
    """Finite sum of a_i F^i with F a = phi(a) F."""

    __slots__ = ("parent", "coeffs")

    def __init__(self, parent: PerfectSeriesRing, coeffs=None):
        clean = {}
        for i, a in dict(coeffs or {}).items():
            if not isinstance(a, TruncatedPerfectSeries):
                a = TruncatedPerfectSeries(parent, a)
            if a.parent != parent:
                raise PrecisionMismatch("coefficient uses different precision parameters")
            if a:
                clean[int(i)] = a
        self.parent = parent
        self.coeffs = dict(sorted(clean.items()))

    # constructors ---------------------------------------------------------
    @classmethod
    def constant(cls, a: TruncatedPerfectSeries):
        return cls(a.parent, {0: a})

    @classmethod
    def F(cls, parent, power: int = 1):
        return cls(parent, {power: parent.one()})

    @classmethod
    def F_minus_one(cls, parent):
        return cls(parent, {1: parent.one(), 0: -parent.one()})

    # ring structure -------------------------------------------------------
    def _same(self, other):
        if isinstance(other, TruncatedPerfectSeries):
            other = TwistedLaurent.constant(other)
        if not isinstance(other, TwistedLaurent):
            return NotImplemented
        if other.parent != self.parent:
            raise PrecisionMismatch("operands use different precision parameters")
        return other

    def __eq__(self, other):
        if not isinstance(other, TwistedLaurent):
            return NotImplemented
        return self.parent == other.parent and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.parent, tuple(self.coeffs.items())))

    def is_zero(self) -> bool:
        return not self.coeffs

    def __add__(self, other):
        other = self._same(other)
        if other is NotImplemented:
            return other
        out = dict(self.coeffs)
        for i, a in other.coeffs.items():
            out[i] = out[i] + a if i in out else a
        return TwistedLaurent(self.parent, out)

    def __neg__(self):
        return TwistedLaurent(self.parent, {i: -a for i, a in self.coeffs.items()})

    def __sub__(self, other):
        other = self._same(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __mul__(self, other):
        """(a F^i)(b F^j) = a phi^i(b) F^{i+j}."""
        other = self._same(other)
        if other is NotImplemented:
            return other
        out = {}
        for i, a in self.coeffs.items():
            for j, b in other.coeffs.items():
                term = a * b.phi(i)
                out[i + j] = out[i + j] + term if i + j in out else term
        return TwistedLaurent(self.parent, out)

    def __rmul__(self, other):
        other = self._same(other)
        if other is NotImplemented:
            return other
        return other * self

    def to_dict(self):
        return {"terms": [[i, a.to_list()] for i, a in self.coeffs.items()]}

    @classmethod
    def from_terms(cls, parent, items):
        coeffs = {}
        for i, series in items:
            if int(i) in coeffs:
                raise ValueError(f"repeated power F^{i}")
            coeffs[int(i)] = TruncatedPerfectSeries.from_list(parent, series)
        return cls(parent, coeffs)

    def __str__(self):
        parts = []
        for i, a in self.coeffs.items():
            s = str(a)
            if i == 0:
                parts.append(s)
            else:
                mono = "F" if i == 1 else f"F^{i}"
                parts.append(f"({s})*{mono}")
        return " + ".join(parts) or "0"

    __repr__ = __str__


def twisted_mul(x: TwistedLaurent, y: TwistedLaurent) -> TwistedLaurent:
    return x * y


def fold(a: TwistedLaurent) -> TruncatedPerfectSeries:
    """sum_i phi^{-i}(a_i): the image of a in R under F^i -> 1 modulo (F - 1)."""
    total = a.parent.zero()
    for i, c in a.coeffs.items():
        total = total + c.phi(-i)
    return total


def coker_class(a: TwistedLaurent) -> TruncatedPerfectSeries:
    """Class of a modulo the image of F - 1, read off from exponents <= 0.

    Positive exponents stay positive under every phi^k and never contribute,
    so only the non-positive parts are folded.
    """
    total = a.parent.zero()
    for i, c in a.coeffs.items():
        total = total + c.nonpositive_part().phi(-i)
    return total.nonpositive_part()


def solve_F_minus_one(a: TwistedLaurent) -> TwistedLaurent:
    """b with (F - 1) b = a modulo truncation.

    b_i = phi(b_{i-1}) - a_i starting below the lowest power of a and
    continued past the highest until phi pushes every exponent beyond emax.
    """
    cls = coker_class(a)
    if cls:
        raise NotSolvable(str(cls))
    if a.is_zero():
        return TwistedLaurent(a.parent)
    lo, hi = min(a.coeffs), max(a.coeffs)
    b = {}
    prev = a.parent.zero()
    i = lo
    while i <= hi or prev:
        cur = prev.phi(1) - a.coeffs.get(i, a.parent.zero())
        if cur:
            b[i] = cur
        prev = cur
        i += 1
    return TwistedLaurent(a.parent, b)


def apply_F_minus_one(b: TwistedLaurent) -> TwistedLaurent:
    return TwistedLaurent.F_minus_one(b.parent) * b
