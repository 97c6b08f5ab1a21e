"""Local fields, truncated residue rings, cyclotomic coefficient rings and
the standard additive character.

Two families of local fields E are supported: the unramified extension of
Q_p of degree f (uniformizer p) and F_q((t)). Finite windows
pi^{-m} O / pi^k O are modelled exactly:

* in characteristic zero by an element A of the Galois ring
  GR(p^{m+k}, f) together with the shift m, standing for p^{-m} A;
* in characteristic p by the list of F_q digits at exponents -m .. k-1.

Points of a window are numbered by their digit expansion: the F_q digit at
exponent -m + j (encoded as an integer in [0, q), see :class:`FiniteField`)
contributes ``digit * q**j`` to the index.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache

import numpy as np

from . import kernels
from ._conway import conway_polynomial
from .errors import (
    FieldMismatch,
    InsufficientPrecision,
    InsufficientRoots,
    NotInvertible,
    WindowMismatch,
)

ZERO_UNRAMIFIED = "zero-unramified"
POSITIVE = "positive"

_CHARACTERISTICS = {
    "zero-unramified": ZERO_UNRAMIFIED,
    "zero": ZERO_UNRAMIFIED,
    "0": ZERO_UNRAMIFIED,
    "unramified": ZERO_UNRAMIFIED,
    "positive": POSITIVE,
    "p": POSITIVE,
}


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


def _vp(n: int, p: int) -> int:
    if n == 0:
        raise ValueError("valuation of zero")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


# ---------------------------------------------------------------------------
# Galois rings and finite fields
# ---------------------------------------------------------------------------

def _polymulmod(a, b, poly, mod):
    """Product of two coefficient lists modulo the monic ``poly`` and ``mod``."""
    f = len(poly) - 1
    prod = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                prod[i + j] += x * y
    return _polyreduce(prod, poly, mod)


def _polyreduce(c, poly, mod):
    f = len(poly) - 1
    c = [x % mod for x in c]
    for top in range(len(c) - 1, f - 1, -1):
        lead = c[top]
        if lead:
            base = top - f
            for i in range(f):
                c[base + i] = (c[base + i] - lead * poly[i]) % mod
        c[top] = 0
    c = c[:f] + [0] * (f - len(c))
    return tuple(c)


class GaloisRing:
    """GR(p^N, f) = (Z/p^N)[x]/(G).

    ``G`` is the minimal polynomial of the Teichmüller lift of a root of the
    Conway polynomial, so the Frobenius automorphism is x -> x^p. Elements
    are tuples of f residues, coefficients of 1, theta, ..., theta^{f-1}.
    """

    def __init__(self, p: int, f: int, N: int, poly=None):
        if N < 0:
            raise ValueError("N must be non-negative")
        self.p, self.f, self.N = p, f, N
        self.modulus = p**N
        self.poly = tuple(poly) if poly is not None else _teichmuller_poly(p, f, N)

    def __repr__(self):
        return f"GaloisRing(p={self.p}, f={self.f}, N={self.N})"

    def zero(self):
        return (0,) * self.f

    def one(self):
        return self.from_int(1)

    def from_int(self, c: int):
        return ((c % self.modulus) if self.modulus > 1 else 0,) + (0,) * (self.f - 1)

    def theta(self):
        if self.f == 1:
            return self.from_int(-self.poly[0])
        return (0, 1) + (0,) * (self.f - 2)

    def reduce(self, coeffs):
        if self.modulus == 1:
            return self.zero()
        return _polyreduce(list(coeffs), self.poly, self.modulus)

    def add(self, x, y):
        m = self.modulus
        return tuple((a + b) % m for a, b in zip(x, y))

    def sub(self, x, y):
        m = self.modulus
        return tuple((a - b) % m for a, b in zip(x, y))

    def neg(self, x):
        m = self.modulus
        return tuple((-a) % m for a in x)

    def mul(self, x, y):
        if self.modulus == 1:
            return self.zero()
        return _polymulmod(x, y, self.poly, self.modulus)

    def scale(self, c: int, x):
        m = self.modulus
        return tuple((c * a) % m for a in x)

    def pow(self, x, e: int):
        result = self.one()
        base = x
        while e:
            if e & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            e >>= 1
        return result

    def frobenius(self, x, times: int = 1):
        """sigma^times(x), sigma substituting theta -> theta^p."""
        for _ in range(times % self.f if self.f > 1 else 0):
            acc = [0] * (self.p * (self.f - 1) + 1)
            for j, c in enumerate(x):
                acc[self.p * j] += c
            x = self.reduce(acc)
        return tuple(x)

    def trace(self, x) -> int:
        total = self.zero()
        y = tuple(x)
        for _ in range(self.f):
            total = self.add(total, y)
            y = self.frobenius(y)
        if any(total[1:]):
            raise ArithmeticError("trace left the prime subring")
        return total[0]

    def valuation(self, x) -> int:
        """p-adic valuation, N for the zero element."""
        v = self.N
        for c in x:
            if c:
                v = min(v, _vp(c, self.p))
        return v

    def is_unit(self, x) -> bool:
        return self.N > 0 and self.valuation(x) == 0

    def inverse(self, x):
        if not self.is_unit(x):
            raise NotInvertible(f"{x} is not a unit of {self}")
        q = self.p**self.f
        # inverse modulo p, then Newton steps y <- y (2 - x y)
        y = tuple(c % self.p for c in x)
        residue = GaloisRing(self.p, self.f, 1, tuple(c % self.p for c in self.poly))
        y = residue.pow(y, q - 2)
        two = self.from_int(2)
        prec = 1
        while prec < self.N:
            y = self.mul(y, self.sub(two, self.mul(x, y)))
            prec *= 2
        return y

    def trace_form(self):
        """Matrix Tr(theta^i theta^j) with entries in Z/p^N."""
        f = self.f
        powers = [self.one()]
        for _ in range(2 * f - 2):
            powers.append(self.mul(powers[-1], self.theta()))
        traces = [self.trace(t) for t in powers]
        return np.array([[traces[i + j] for j in range(f)] for i in range(f)], dtype=np.int64)


@lru_cache(maxsize=None)
def _teichmuller_poly(p: int, f: int, N: int):
    conway = conway_polynomial(p, f)
    if N == 0:
        return tuple(conway)
    base = GaloisRing(p, f, N, poly=conway)
    q = p**f
    if f == 1:
        root = (-conway[0]) % p
        omega = pow(root, p ** (N - 1), p**N)
        return ((-omega) % p**N, 1)
    x = (0, 1) + (0,) * (f - 2)
    omega = base.pow(x, q ** (N - 1))
    # G(X) = prod_i (X - omega^{p^i}), coefficients taken in the base ring
    coeffs = [base.one()]
    root = omega
    for _ in range(f):
        shifted = [base.zero()] + coeffs
        for i, c in enumerate(coeffs):
            shifted[i] = base.sub(shifted[i], base.mul(root, c))
        coeffs = shifted
        root = base.pow(root, p)
    out = []
    for c in coeffs:
        if any(c[1:]):
            raise ArithmeticError("Teichmüller polynomial not defined over Z/p^N")
        out.append(c[0])
    return tuple(out)


@lru_cache(maxsize=None)
def galois_ring(p: int, f: int, N: int) -> GaloisRing:
    return GaloisRing(p, f, N)


class FiniteField:
    """F_q with elements encoded as integers in [0, q).

    The code of sum_i c_i theta^i (0 <= c_i < p) is sum_i c_i p^i. Dense
    operation tables are precomputed, so keep q small.
    """

    def __init__(self, p: int, f: int):
        self.p, self.f = p, f
        self.q = p**f
        self.gr = galois_ring(p, f, 1)
        q = self.q
        coords = [self.coords(c) for c in range(q)]
        add = np.empty((q, q), dtype=np.int64)
        mul = np.empty((q, q), dtype=np.int64)
        for a in range(q):
            for b in range(q):
                add[a, b] = self.encode(self.gr.add(coords[a], coords[b]))
                mul[a, b] = self.encode(self.gr.mul(coords[a], coords[b]))
        self.add_table = add
        self.mul_table = mul
        self.neg_table = np.array([self.encode(self.gr.neg(c)) for c in coords], dtype=np.int64)
        self.sub_table = add[:, self.neg_table]
        self.trace_table = np.array([self.gr.trace(c) for c in coords], dtype=np.int64)
        self.trace_mul_table = self.trace_table[mul]
        inv = np.zeros(q, dtype=np.int64)
        for a in range(1, q):
            inv[a] = int(np.nonzero(mul[a] == 1)[0][0])
        self.inv_table = inv

    def __repr__(self):
        return f"FiniteField({self.q})"

    def coords(self, code: int):
        return tuple((code // self.p**i) % self.p for i in range(self.f))

    def encode(self, coords) -> int:
        return sum(int(c) * self.p**i for i, c in enumerate(coords))

    def add(self, a, b):
        return int(self.add_table[a, b])

    def sub(self, a, b):
        return int(self.sub_table[a, b])

    def neg(self, a):
        return int(self.neg_table[a])

    def mul(self, a, b):
        return int(self.mul_table[a, b])

    def inv(self, a):
        if a == 0:
            raise NotInvertible("zero in F_q")
        return int(self.inv_table[a])

    def trace(self, a) -> int:
        return int(self.trace_table[a])

    def from_int(self, c: int) -> int:
        return c % self.p


@lru_cache(maxsize=None)
def finite_field(p: int, f: int) -> FiniteField:
    return FiniteField(p, f)


def frobenius_trace(ring: GaloisRing, x) -> int:
    """Tr(x) = sum_{i<f} sigma^i(x) in Z/p^N."""
    return ring.trace(x)


# ---------------------------------------------------------------------------
# Field and coefficient specifications
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LocalFieldSpec:
    p: int
    f: int = 1
    characteristic: str = ZERO_UNRAMIFIED

    def __post_init__(self):
        char = _CHARACTERISTICS.get(str(self.characteristic).lower())
        if char is None:
            raise ValueError(f"unknown characteristic {self.characteristic!r}")
        object.__setattr__(self, "characteristic", char)
        if not is_prime(self.p):
            raise ValueError(f"p = {self.p} is not prime")
        if self.f < 1:
            raise ValueError("residue degree f must be >= 1")

    @property
    def q(self) -> int:
        return self.p**self.f

    @property
    def char_zero(self) -> bool:
        return self.characteristic == ZERO_UNRAMIFIED

    @property
    def name(self) -> str:
        if self.char_zero:
            return f"Q_{self.p}" if self.f == 1 else f"Q_{self.p}^ur({self.f})"
        return f"F_{self.q}((t))"

    def galois_ring(self, N: int) -> GaloisRing:
        return galois_ring(self.p, self.f, N)

    @property
    def residue_field(self) -> FiniteField:
        return finite_field(self.p, self.f)

    def to_dict(self):
        return {"p": self.p, "f": self.f, "characteristic": self.characteristic}


@dataclass(frozen=True)
class CoefficientSpec:
    ell: int
    n: int = 1
    M: int = 0

    def __post_init__(self):
        if not is_prime(self.ell):
            raise ValueError(f"ell = {self.ell} is not prime")
        if self.n < 1 or self.M < 0:
            raise ValueError("need n >= 1 and M >= 0")

    def ring(self, p: int) -> "LambdaRing":
        return LambdaRing(self.ell, self.n, self.M, p)

    def to_dict(self):
        return {"ell": self.ell, "n": self.n, "M": self.M}


# ---------------------------------------------------------------------------
# Coefficient ring Lambda = (Z/ell^n)[zeta_{p^M}]
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LambdaRing:
    ell: int
    n: int
    M: int
    p: int

    def __post_init__(self):
        if self.ell == self.p:
            raise ValueError("ell must differ from p")
        if not is_prime(self.ell) or not is_prime(self.p):
            raise ValueError("ell and p must be prime")
        if self.modulus >= 2**31:
            raise ValueError("ell^n must stay below 2^31 for exact int64 kernels")

    @property
    def spec(self) -> CoefficientSpec:
        return CoefficientSpec(self.ell, self.n, self.M)

    @property
    def modulus(self) -> int:
        return self.ell**self.n

    @property
    def order(self) -> int:
        """P = p^M, the order of the distinguished root of unity."""
        return self.p**self.M

    @property
    def phi(self) -> int:
        P = self.order
        return P - P // self.p if self.M else 1

    def element(self, coeffs) -> "LambdaElement":
        """Reduce an arbitrary coefficient list modulo (ell^n, Phi_{p^M})."""
        c = [int(x) for x in coeffs] or [0]
        P = self.order
        if len(c) == self.phi:
            return LambdaElement(self, tuple(x % self.modulus for x in c))
        acc = [0] * P
        for i, x in enumerate(c):
            acc[i % P] += x
        return LambdaElement(self, tuple(_fold_list(acc, P, self.p, self.modulus)))

    def zero(self) -> "LambdaElement":
        return LambdaElement(self, (0,) * self.phi)

    def one(self) -> "LambdaElement":
        return self.from_int(1)

    def from_int(self, c: int) -> "LambdaElement":
        return LambdaElement(self, (c % self.modulus,) + (0,) * (self.phi - 1))

    def zeta(self, e: int = 1) -> "LambdaElement":
        """zeta_{p^M}^e."""
        P = self.order
        acc = [0] * P
        acc[e % P] = 1
        return LambdaElement(self, tuple(_fold_list(acc, P, self.p, self.modulus)))

    def inv_int(self, c: int) -> int:
        try:
            return pow(c, -1, self.modulus)
        except ValueError:
            raise NotInvertible(f"{c} is not invertible modulo {self.ell}^{self.n}") from None

    def power_int(self, base: int, e: int) -> int:
        """base^e mod ell^n, negative e allowed for units."""
        if e < 0:
            return pow(self.inv_int(base), -e, self.modulus)
        return pow(base, e, self.modulus)

    def q_power(self, base: int, e: int) -> "LambdaElement":
        return self.from_int(self.power_int(base, e))

    # vectorised helpers on (..., phi) int64 arrays
    def mul_arrays(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        shape = np.broadcast_shapes(a.shape, b.shape)
        a = np.broadcast_to(a, shape).reshape(-1, self.phi)
        b = np.broadcast_to(b, shape).reshape(-1, self.phi)
        out = kernels.lambda_mul(a, b, self.order, self.p, self.modulus)
        return np.asarray(out).reshape(shape)


def _fold_list(acc, P, p, mod):
    if P == 1:
        return [acc[0] % mod]
    s = P // p
    phi = P - s
    acc = list(acc)
    for t in range(phi, P):
        v = acc[t]
        if v:
            r = t - phi
            for i in range(p - 1):
                acc[r + i * s] -= v
    return [x % mod for x in acc[:phi]]


@dataclass(frozen=True)
class LambdaElement:
    ring: LambdaRing
    coeffs: tuple

    def _coerce(self, other):
        if isinstance(other, LambdaElement):
            if other.ring != self.ring:
                raise FieldMismatch("coefficient rings differ")
            return other
        if isinstance(other, int):
            return self.ring.from_int(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        m = self.ring.modulus
        return LambdaElement(self.ring, tuple((a + b) % m for a, b in zip(self.coeffs, other.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        m = self.ring.modulus
        return LambdaElement(self.ring, tuple((-a) % m for a in self.coeffs))

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        ring = self.ring
        P = ring.order
        acc = [0] * P
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    if b:
                        acc[(i + j) % P] += a * b
        return LambdaElement(ring, tuple(_fold_list(acc, P, ring.p, ring.modulus)))

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative powers are not supported")
        result = self.ring.one()
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def to_list(self):
        return list(self.coeffs)

    def __str__(self):
        terms = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if i == 0:
                terms.append(str(c))
            else:
                mono = "z" if i == 1 else f"z^{i}"
                terms.append(mono if c == 1 else f"{c}*{mono}")
        return " + ".join(terms) or "0"


# ---------------------------------------------------------------------------
# Window elements
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class WindowElement:
    """A coset in pi^{-m} O / pi^k O.

    ``payload`` holds the Galois-ring coordinates of p^m x in characteristic
    zero and the N = m + k F_q digit codes (exponent -m first) in
    characteristic p.
    """

    field: LocalFieldSpec
    m: int
    k: int
    payload: tuple

    def __post_init__(self):
        if self.m < 0 or self.k < 0:
            raise ValueError("window exponents must be non-negative")

    @property
    def size(self) -> int:
        return self.m + self.k

    # construction ---------------------------------------------------------
    @classmethod
    def zero(cls, field, m, k):
        if field.char_zero:
            return cls(field, m, k, (0,) * field.f)
        return cls(field, m, k, (0,) * (m + k))

    @classmethod
    def from_digits(cls, field, m, k, digits):
        digits = [int(d) for d in digits]
        N = m + k
        if len(digits) != N or any(not 0 <= d < field.q for d in digits):
            raise ValueError("digits must be N codes in [0, q)")
        if not field.char_zero:
            return cls(field, m, k, tuple(digits))
        p, f = field.p, field.f
        coords = [0] * f
        for j, D in enumerate(digits):
            for i in range(f):
                coords[i] += ((D // p**i) % p) * p**j
        return cls(field, m, k, tuple(coords))

    @classmethod
    def from_index(cls, field, m, k, index: int):
        q = field.q
        N = m + k
        if not 0 <= index < q**N:
            raise ValueError("index out of range")
        return cls.from_digits(field, m, k, [(index // q**j) % q for j in range(N)])

    @classmethod
    def from_fraction(cls, field, m, k, x):
        """Embed a rational number (characteristic zero only)."""
        if not field.char_zero:
            raise FieldMismatch("rational numbers only embed in characteristic zero")
        x = Fraction(x)
        p = field.p
        N = m + k
        num, den = x.numerator, x.denominator
        e = _vp(den, p) if den % p == 0 else 0
        unit = den // p**e
        if e > m:
            raise WindowMismatch(f"{x} is not in p^-{m} O")
        mod = p**N
        A = (num * p ** (m - e) * pow(unit, -1, mod)) % mod if mod > 1 else 0
        return cls(field, m, k, (A,) + (0,) * (field.f - 1))

    @classmethod
    def from_laurent(cls, field, m, k, terms):
        """sum_e c_e pi^e for a mapping exponent -> coefficient.

        Coefficients are F_q codes in characteristic p and integers in
        characteristic zero (scaled by p^e); exponents >= k are dropped.
        """
        x = cls.zero(field, m, k)
        for e, c in dict(terms).items():
            if e >= k:
                continue
            if e < -m:
                raise WindowMismatch(f"exponent {e} below -{m}")
            if field.char_zero:
                term = cls.from_fraction(field, m, k, Fraction(int(c)) * Fraction(field.p) ** e)
            else:
                digits = [0] * (m + k)
                digits[e + m] = int(c) % field.q
                term = cls(field, m, k, tuple(digits))
            x = x + term
        return x

    # encoding -------------------------------------------------------------
    def digits(self):
        if not self.field.char_zero:
            return list(self.payload)
        p, f = self.field.p, self.field.f
        return [sum(((c // p**j) % p) * p**i for i, c in enumerate(self.payload)) for j in range(self.size)]

    def index(self) -> int:
        q = self.field.q
        return sum(d * q**j for j, d in enumerate(self.digits()))

    # arithmetic -----------------------------------------------------------
    def _check_same(self, other):
        if not isinstance(other, WindowElement):
            return NotImplemented
        if other.field != self.field:
            raise FieldMismatch("different local fields")
        if (other.m, other.k) != (self.m, self.k):
            raise WindowMismatch(f"windows ({self.m},{self.k}) and ({other.m},{other.k}) differ")
        return other

    def __add__(self, other):
        other = self._check_same(other)
        if other is NotImplemented:
            return other
        if self.field.char_zero:
            gr = self.field.galois_ring(self.size)
            return WindowElement(self.field, self.m, self.k, gr.add(self.payload, other.payload))
        ff = self.field.residue_field
        return WindowElement(
            self.field, self.m, self.k, tuple(ff.add(a, b) for a, b in zip(self.payload, other.payload))
        )

    def __neg__(self):
        if self.field.char_zero:
            gr = self.field.galois_ring(self.size)
            return WindowElement(self.field, self.m, self.k, gr.neg(self.payload))
        ff = self.field.residue_field
        return WindowElement(self.field, self.m, self.k, tuple(ff.neg(a) for a in self.payload))

    def __sub__(self, other):
        other = self._check_same(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __mul__(self, other):
        """Product of cosets.

        x in pi^{-m1}O/pi^{k1}O times y in pi^{-m2}O/pi^{k2}O is well defined
        in pi^{-(m1+m2)}O / pi^{min(k1-m2, k2-m1)}O.
        """
        if not isinstance(other, WindowElement):
            return NotImplemented
        if other.field != self.field:
            raise FieldMismatch("different local fields")
        m1, k1, m2, k2 = self.m, self.k, other.m, other.k
        mr = m1 + m2
        kr = min(k1 - m2, k2 - m1)
        if kr < 0:
            raise InsufficientPrecision(
                f"product of windows ({m1},{k1}) and ({m2},{k2}) is not defined modulo O"
            )
        Nr = mr + kr
        field = self.field
        if field.char_zero:
            gr = field.galois_ring(Nr)
            a = tuple(c % gr.modulus for c in self.payload)
            b = tuple(c % gr.modulus for c in other.payload)
            return WindowElement(field, mr, kr, gr.mul(a, b))
        ff = field.residue_field
        out = [0] * Nr
        for i, x in enumerate(self.payload):
            if not x:
                continue
            ei = i - m1
            for j, y in enumerate(other.payload):
                e = ei + j - m2
                if y and e < kr:
                    pos = e + mr
                    out[pos] = ff.add(out[pos], ff.mul(x, y))
        return WindowElement(field, mr, kr, tuple(out))

    def shift(self, j: int) -> "WindowElement":
        """Multiply by pi^j."""
        field = self.field
        m, k = self.m - j, self.k + j
        if k < 0:
            raise InsufficientPrecision("shift leaves no known digits")
        if field.char_zero:
            if m >= 0:
                return WindowElement(field, m, k, self.payload)
            mod = field.p**k
            return WindowElement(field, 0, k, tuple((c * field.p ** (-m)) % mod for c in self.payload))
        if m >= 0:
            return WindowElement(field, m, k, self.payload)
        digits = ((0,) * (-m) + self.payload)[: k]
        return WindowElement(field, 0, k, digits)

    def valuation(self):
        """Lowest exponent carrying a nonzero digit; None when x = 0 mod pi^k."""
        for j, d in enumerate(self.digits()):
            if d:
                return j - self.m
        return None

    def is_zero(self) -> bool:
        return self.valuation() is None

    def rewindow(self, m: int, k: int) -> "WindowElement":
        """Same coset read in pi^{-m}O/pi^kO; needs k <= self.k and x in pi^{-m}O."""
        if k > self.k:
            raise InsufficientPrecision(f"level {self.k} cannot be raised to {k}")
        digits = self.digits()
        lo = self.m - m
        if lo > 0 and any(digits[:lo]):
            raise WindowMismatch(f"element is not in pi^-{m} O")
        padded = [0] * max(0, -lo) + digits[max(0, lo):]
        return WindowElement.from_digits(self.field, m, k, padded[: m + k] + [0] * max(0, m + k - len(padded)))

    def in_ball(self, m: int) -> bool:
        """True when x lies in pi^{-m} O."""
        v = self.valuation()
        return v is None or v >= -m

    def __str__(self):
        field = self.field
        terms = []
        for j, d in enumerate(self.digits()):
            if d:
                e = j - self.m
                base = "p" if field.char_zero else "t"
                mono = "" if e == 0 else (base if e == 1 else f"{base}^{e}")
                if not mono:
                    terms.append(str(d))
                else:
                    terms.append(mono if d == 1 else f"{d}*{mono}")
        level = "p" if field.char_zero else "t"
        return (" + ".join(terms) or "0") + f" mod {level}^{self.k}"


def pair(vcheck: WindowElement, v: WindowElement) -> WindowElement:
    """<vcheck, v> in pi^{-(m+k)} O / O for dual windows (k, m) and (m, k)."""
    if vcheck.field != v.field:
        raise WindowMismatch("elements live over different fields")
    if (vcheck.m, vcheck.k) != (v.k, v.m):
        raise WindowMismatch(
            f"windows ({vcheck.m},{vcheck.k}) and ({v.m},{v.k}) are not dual"
        )
    return vcheck * v


def char_exponent(x: WindowElement, ring: LambdaRing) -> int:
    """e in [0, p^M) with psi(x) = zeta_{p^M}^e.

    psi is the standard additive character of conductor 0: trivial on O and
    nontrivial on pi^{-1}O.
    """
    field = x.field
    if ring.p != field.p:
        raise FieldMismatch("coefficient ring was built for a different p")
    m = x.m
    if m == 0:
        return 0
    if field.char_zero:
        if ring.M < m:
            raise InsufficientRoots(f"need zeta_(p^{m}) but Lambda only has p^{ring.M}-th roots")
        gr = field.galois_ring(m)
        a = tuple(c % gr.modulus for c in x.payload)
        return (gr.trace(a) * field.p ** (ring.M - m)) % ring.order
    if ring.M < 1:
        raise InsufficientRoots("characteristic p needs at least zeta_p")
    t = field.residue_field.trace(x.payload[m - 1])
    return (t * field.p ** (ring.M - 1)) % ring.order


def char_eval(x: WindowElement, ring: LambdaRing) -> LambdaElement:
    """psi(x) as an element of Lambda."""
    return ring.zeta(char_exponent(x, ring))


# ---------------------------------------------------------------------------
# Vectorised window tables
# ---------------------------------------------------------------------------

class WindowCodec:
    """All points of pi^{-m}O/pi^kO as numpy arrays, in index order."""

    def __init__(self, field: LocalFieldSpec, m: int, k: int):
        self.field, self.m, self.k = field, m, k
        self.N = N = m + k
        q = field.q
        self.size = q**N
        idx = np.arange(self.size, dtype=np.int64)
        self.digits = np.stack([(idx // q**j) % q for j in range(N)], axis=1) if N else np.zeros((1, 0), np.int64)
        self.weights = q ** np.arange(N, dtype=np.int64)
        if field.char_zero:
            p, f = field.p, field.f
            coords = np.zeros((self.size, f), dtype=np.int64)
            for j in range(N):
                for i in range(f):
                    coords[:, i] += ((self.digits[:, j] // p**i) % p) * p**j
            self.coords = coords

    def encode_digits(self, digits):
        return np.asarray(digits, dtype=np.int64) @ self.weights if self.N else np.zeros(len(digits), np.int64)

    def encode_coords(self, coords):
        p, f = self.field.p, self.field.f
        coords = np.asarray(coords, dtype=np.int64) % (p**self.N)
        idx = np.zeros(coords.shape[0], dtype=np.int64)
        for j in range(self.N):
            D = np.zeros(coords.shape[0], dtype=np.int64)
            for i in range(f):
                D += ((coords[:, i] // p**j) % p) * p**i
            idx += D * self.weights[j]
        return idx

    @cached_property
    def neg_index(self):
        if self.field.char_zero:
            return self.encode_coords(-self.coords)
        ff = self.field.residue_field
        return self.encode_digits(ff.neg_table[self.digits])

    @cached_property
    def sub_table(self):
        """sub_table[u, v] = index of (u - v)."""
        n = self.size
        if self.field.char_zero:
            diff = self.coords[:, None, :] - self.coords[None, :, :]
            return self.encode_coords(diff.reshape(n * n, -1)).reshape(n, n)
        ff = self.field.residue_field
        diff = ff.sub_table[self.digits[:, None, :], self.digits[None, :, :]]
        return self.encode_digits(diff.reshape(n * n, -1)).reshape(n, n)

    def point(self, index: int) -> WindowElement:
        return WindowElement.from_index(self.field, self.m, self.k, index)


@lru_cache(maxsize=256)
def window_codec(field: LocalFieldSpec, m: int, k: int) -> WindowCodec:
    return WindowCodec(field, m, k)


@lru_cache(maxsize=128)
def character_exponents(field: LocalFieldSpec, m: int, k: int, ring: LambdaRing):
    """E[b, a] with psi(x_a * y_b) = zeta_{p^M}^E[b, a].

    x_a runs over pi^{-m}O/pi^kO and y_b over pi^{-k}O/pi^mO, both in index
    order. The array is read-only and cached.
    """
    N = m + k
    p = field.p
    if N == 0:
        out = np.zeros((1, 1), dtype=np.int64)
        out.flags.writeable = False
        return out
    src = window_codec(field, m, k)
    dst = window_codec(field, k, m)
    if field.char_zero:
        if ring.M < N:
            raise InsufficientRoots(f"window of size {N} needs p^{N}-th roots of unity, Lambda has M = {ring.M}")
        gr = field.galois_ring(N)
        mod = gr.modulus
        T = gr.trace_form() % mod
        BT = (dst.coords @ T) % mod
        E = (BT @ src.coords.T) % mod
        E = E * p ** (ring.M - N)
    else:
        if ring.M < 1:
            raise InsufficientRoots("characteristic p needs at least zeta_p")
        ff = field.residue_field
        E = np.zeros((dst.size, src.size), dtype=np.int64)
        for j in range(N):
            E += ff.trace_mul_table[dst.digits[:, N - 1 - j][:, None], src.digits[:, j][None, :]]
        E = (E % p) * p ** (ring.M - 1)
    E = np.ascontiguousarray(E % ring.order, dtype=np.int64)
    E.flags.writeable = False
    return E
