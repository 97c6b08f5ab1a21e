"""Bruhat-Schwartz functions on E^d with values in Lambda.

A :class:`SchwartzFunction` is stored as a dense table over the window
group (pi^{-m}O/pi^kO)^d: axis i of the table is the i-th coordinate,
numbered as in :mod:`bcfourier.arith`, and the last axis holds the phi
coefficients of the value. Haar measure is normalized by vol(O^d) = 1.
"""
from __future__ import annotations

from itertools import permutations, product

import numpy as np

from . import kernels
from .arith import (
    LambdaElement,
    LambdaRing,
    LocalFieldSpec,
    WindowElement,
    char_exponent,
    character_exponents,
    window_codec,
)
from .errors import FieldMismatch, InsufficientPrecision, SingularMatrix, WindowMismatch


def _axis_map(q, m, k, m2, k2):
    """Index map from window (m2, k2) onto (m, k) with m <= m2, k <= k2."""
    Q2 = q ** (m2 + k2)
    idx = np.arange(Q2, dtype=np.int64)
    step = q ** (m2 - m)
    valid = idx % step == 0
    narrow = (idx // step) % q ** (m + k)
    return narrow, valid


def _rotate(values, expo, P, p, mod):
    """Multiply each row of ``values`` (n, phi) by zeta^expo[row]."""
    n, phi = values.shape
    acc = np.zeros((n, P), dtype=np.int64)
    cols = (np.arange(phi, dtype=np.int64)[None, :] + np.asarray(expo, dtype=np.int64)[:, None]) % P
    np.put_along_axis(acc, cols, values, axis=1)
    return kernels.fold(acc, P, p, mod)


class SchwartzFunction:
    """A locally constant compactly supported function E^d -> Lambda."""

    __slots__ = ("field", "ring", "d", "m", "k", "table")

    def __init__(self, field: LocalFieldSpec, ring: LambdaRing, d: int, m: int, k: int, table):
        if ring.p != field.p:
            raise FieldMismatch("coefficient ring and field use different primes")
        if d < 1 or m < 0 or k < 0:
            raise ValueError("need d >= 1 and m, k >= 0")
        Q = field.q ** (m + k)
        table = np.array(table, dtype=np.int64) % ring.modulus
        shape = (Q,) * d + (ring.phi,)
        if table.shape != shape:
            raise ValueError(f"table has shape {table.shape}, expected {shape}")
        table.flags.writeable = False
        self.field, self.ring, self.d, self.m, self.k = field, ring, d, m, k
        self.table = table

    # construction ---------------------------------------------------------
    @classmethod
    def zero(cls, field, ring, d, m=0, k=0):
        Q = field.q ** (m + k)
        return cls(field, ring, d, m, k, np.zeros((Q,) * d + (ring.phi,), dtype=np.int64))

    @classmethod
    def indicator_ball(cls, field, ring, d, j=0, value=1):
        """value * 1_{(pi^j O)^d}."""
        coeffs = _as_coeffs(ring, value)
        if j >= 0:
            f = cls.zero(field, ring, d, 0, j)
            table = np.array(f.table)
            table[(0,) * d] = coeffs
            return cls(field, ring, d, 0, j, table)
        Q = field.q ** (-j)
        table = np.broadcast_to(coeffs, (Q,) * d + (ring.phi,))
        return cls(field, ring, d, -j, 0, table)

    @classmethod
    def indicator_coset(cls, field, ring, point, level, value=1):
        """value * 1_{point + (pi^level O)^d}, point a sequence of WindowElements."""
        if level < 0:
            raise ValueError("use indicator_ball for cosets of pi^level O with level < 0")
        d = len(point)
        m = max(_support_exponent(x) for x in point)
        table = np.zeros((field.q ** (m + level),) * d + (ring.phi,), dtype=np.int64)
        idx = tuple(x.rewindow(m, level).index() for x in point)
        table[idx] = _as_coeffs(ring, value)
        return cls(field, ring, d, m, level, table)

    @classmethod
    def from_callable(cls, field, ring, d, m, k, fn):
        """Tabulate ``fn(point)`` where point is a tuple of WindowElements."""
        Q = field.q ** (m + k)
        codec = window_codec(field, m, k)
        pts = [codec.point(i) for i in range(Q)]
        table = np.zeros((Q,) * d + (ring.phi,), dtype=np.int64)
        for idx in product(range(Q), repeat=d):
            table[idx] = _as_coeffs(ring, fn(tuple(pts[i] for i in idx)))
        return cls(field, ring, d, m, k, table)

    @classmethod
    def random(cls, rng, field, ring, d, m, k, density=1.0):
        Q = field.q ** (m + k)
        table = rng.integers(0, ring.modulus, size=(Q,) * d + (ring.phi,), dtype=np.int64)
        if density < 1.0:
            mask = rng.random((Q,) * d) < density
            table = table * mask[..., None]
        return cls(field, ring, d, m, k, table)

    # basic accessors ------------------------------------------------------
    @property
    def window(self):
        return (self.m, self.k)

    @property
    def points_per_axis(self):
        return self.field.q ** (self.m + self.k)

    def value_at(self, point) -> LambdaElement:
        """f(x) for a tuple of WindowElements (any windows with level >= k)."""
        if len(point) != self.d:
            raise ValueError("point has the wrong dimension")
        idx = []
        for x in point:
            if not x.in_ball(self.m):
                return self.ring.zero()
            idx.append(x.rewindow(self.m, self.k).index())
        return LambdaElement(self.ring, tuple(int(c) for c in self.table[tuple(idx)]))

    def _check(self, other):
        if not isinstance(other, SchwartzFunction):
            raise TypeError("expected a SchwartzFunction")
        if other.field != self.field or other.ring != self.ring:
            raise FieldMismatch("functions live over different fields or coefficient rings")
        if other.d != self.d:
            raise FieldMismatch(f"dimensions {self.d} and {other.d} differ")

    def widen(self, m2: int, k2: int) -> "SchwartzFunction":
        """Same function tabulated on the larger window (m2, k2)."""
        if m2 < self.m or k2 < self.k:
            raise WindowMismatch(f"cannot shrink window ({self.m},{self.k}) to ({m2},{k2}) by widening")
        if (m2, k2) == (self.m, self.k):
            return self
        narrow, valid = _axis_map(self.field.q, self.m, self.k, m2, k2)
        d = self.d
        out = self.table[np.ix_(*([narrow] * d))]
        mask = valid
        for _ in range(d - 1):
            mask = np.multiply.outer(mask, valid)
        out = out * mask[..., None]
        return SchwartzFunction(self.field, self.ring, d, m2, k2, out)

    def canonicalize(self) -> "SchwartzFunction":
        """Smallest window carrying the same function."""
        t = np.asarray(self.table)
        m, k, q, d = self.m, self.k, self.field.q, self.d
        changed = True
        while changed:
            changed = False
            if m > 0:
                Q = q ** (m + k)
                off = np.arange(Q) % q != 0
                if _zero_off_axes(t, off, d):
                    t = t[(slice(None, None, q),) * d]
                    m -= 1
                    changed = True
            if k > 0:
                Q = q ** (m + k)
                if _top_digit_invariant(t, Q, q, d):
                    t = t[(slice(0, Q // q),) * d]
                    k -= 1
                    changed = True
        if (m, k) == (self.m, self.k):
            return self
        return SchwartzFunction(self.field, self.ring, d, m, k, t)

    def is_zero(self) -> bool:
        return not self.table.any()

    def __eq__(self, other):
        if not isinstance(other, SchwartzFunction):
            return NotImplemented
        if other.field != self.field or other.ring != self.ring or other.d != self.d:
            return False
        a, b = self.canonicalize(), other.canonicalize()
        return a.window == b.window and np.array_equal(a.table, b.table)

    def __hash__(self):
        c = self.canonicalize()
        return hash((c.field, c.ring, c.d, c.m, c.k, c.table.tobytes()))

    def __repr__(self):
        return (
            f"SchwartzFunction({self.field.name}, d={self.d}, window=({self.m},{self.k}), "
            f"Lambda=Z/{self.ring.ell}^{self.ring.n}[zeta_{self.ring.order}])"
        )

    # linear structure -----------------------------------------------------
    def _common(self, other):
        self._check(other)
        m, k = max(self.m, other.m), max(self.k, other.k)
        return self.widen(m, k), other.widen(m, k)

    def __add__(self, other):
        a, b = self._common(other)
        return SchwartzFunction(a.field, a.ring, a.d, a.m, a.k, a.table + b.table).canonicalize()

    def __sub__(self, other):
        a, b = self._common(other)
        return SchwartzFunction(a.field, a.ring, a.d, a.m, a.k, a.table - b.table).canonicalize()

    def __neg__(self):
        return SchwartzFunction(self.field, self.ring, self.d, self.m, self.k, -self.table)

    def scale(self, c) -> "SchwartzFunction":
        """Multiply by a constant (int or LambdaElement)."""
        ring = self.ring
        if isinstance(c, LambdaElement) and c.ring == ring and not any(c.coeffs[1:]):
            c = c.coeffs[0]
        if isinstance(c, int):
            t = (self.table * (c % ring.modulus)) % ring.modulus
        else:
            if c.ring != ring:
                raise FieldMismatch("scalar lives in a different coefficient ring")
            t = ring.mul_arrays(self.table, np.array(c.coeffs, dtype=np.int64))
        return SchwartzFunction(self.field, ring, self.d, self.m, self.k, t).canonicalize()

    def __mul__(self, other):
        """Pointwise product."""
        if isinstance(other, (int, LambdaElement)):
            return self.scale(other)
        a, b = self._common(other)
        t = a.ring.mul_arrays(a.table, b.table)
        return SchwartzFunction(a.field, a.ring, a.d, a.m, a.k, t).canonicalize()

    __rmul__ = __mul__

    # analysis -------------------------------------------------------------
    def integrate(self) -> LambdaElement:
        ring = self.ring
        total = self.table.reshape(-1, ring.phi).sum(axis=0) % ring.modulus
        vol = ring.power_int(self.field.q, -self.k * self.d)
        return LambdaElement(ring, tuple(int(c) * vol % ring.modulus for c in total))

    def fourier(self, inverse: bool = False) -> "SchwartzFunction":
        return fourier(self, inverse)

    def negate_argument(self) -> "SchwartzFunction":
        """x -> f(-x)."""
        neg = window_codec(self.field, self.m, self.k).neg_index
        t = self.table[np.ix_(*([neg] * self.d))]
        return SchwartzFunction(self.field, self.ring, self.d, self.m, self.k, t)


def _as_coeffs(ring, value):
    if isinstance(value, LambdaElement):
        if value.ring != ring:
            raise FieldMismatch("value lives in a different coefficient ring")
        return np.array(value.coeffs, dtype=np.int64)
    if isinstance(value, int) or isinstance(value, np.integer):
        return np.array(ring.from_int(int(value)).coeffs, dtype=np.int64)
    return np.array(ring.element(value).coeffs, dtype=np.int64)


def _zero_off_axes(t, off, d):
    for ax in range(d):
        sl = [slice(None)] * d
        sl[ax] = off
        if t[tuple(sl)].any():
            return False
    return True


def _top_digit_invariant(t, Q, q, d):
    block = Q // q
    for ax in range(d):
        shape = t.shape[:ax] + (q, block) + t.shape[ax + 1:]
        r = t.reshape(shape)
        first = np.take(r, [0], axis=ax)
        if not (r == first).all():
            return False
    return True


# ---------------------------------------------------------------------------
# Transforms
# ---------------------------------------------------------------------------

def _apply_axis(table, ax, kernel):
    """Apply ``kernel`` (batch, n, phi) -> (batch, n_out, phi) along axis ax."""
    moved = np.moveaxis(table, ax, -2)
    lead = moved.shape[:-2]
    n, phi = moved.shape[-2:]
    res = kernel(np.ascontiguousarray(moved).reshape(-1, n, phi))
    res = res.reshape(lead + res.shape[-2:])
    return np.moveaxis(res, -2, ax)


def fourier(f: SchwartzFunction, inverse: bool = False) -> SchwartzFunction:
    """f^(y) = int f(x) psi(+-<x, y>) dx.

    The result lives on window (k, m); the inverse flag replaces psi by
    psi^{-1}.
    """
    field, ring = f.field, f.ring
    E = character_exponents(field, f.m, f.k, ring)
    P = ring.order
    if inverse:
        E = (-E) % P
    t = f.table
    for ax in range(f.d):
        t = _apply_axis(t, ax, lambda src: kernels.dft_axis(src, E, P, ring.p, ring.modulus))
    vol = ring.power_int(field.q, -f.k * f.d)
    t = (t * vol) % ring.modulus
    return SchwartzFunction(field, ring, f.d, f.k, f.m, t)


def inverse_fourier(f: SchwartzFunction) -> SchwartzFunction:
    return fourier(f, inverse=True)


def convolve(f: SchwartzFunction, g: SchwartzFunction) -> SchwartzFunction:
    """(f * g)(x) = int f(y) g(x - y) dy."""
    a, b = f._common(g)
    field, ring, d = a.field, a.ring, a.d
    codec = window_codec(field, a.m, a.k)
    phi = ring.phi
    flat = kernels.group_convolve(
        a.table.reshape(-1, phi), b.table.reshape(-1, phi), codec.sub_table, d, ring.order, ring.p, ring.modulus
    )
    vol = ring.power_int(field.q, -a.k * d)
    t = (np.asarray(flat).reshape(a.table.shape) * vol) % ring.modulus
    return SchwartzFunction(field, ring, d, a.m, a.k, t).canonicalize()


def _vector(field, t, d):
    if t is None:
        return None
    t = list(t)
    if len(t) != d:
        raise ValueError("vector has the wrong dimension")
    for x in t:
        if x.field != field:
            raise FieldMismatch("vector lives over a different field")
    return t


def _support_exponent(x: WindowElement) -> int:
    v = x.valuation()
    return 0 if v is None else max(0, -v)


def translate(f: SchwartzFunction, t) -> SchwartzFunction:
    """x -> f(x - t); each t_i must be known modulo pi^k."""
    t = _vector(f.field, t, f.d)
    for x in t:
        if x.k < f.k:
            raise InsufficientPrecision(f"translation known mod pi^{x.k}, need pi^{f.k}")
    m = max([f.m] + [_support_exponent(x) for x in t])
    g = f.widen(m, f.k)
    codec = window_codec(f.field, m, f.k)
    sub = codec.sub_table
    idx = [sub[:, x.rewindow(m, f.k).index()] for x in t]
    table = g.table[np.ix_(*idx)]
    return SchwartzFunction(f.field, f.ring, f.d, m, f.k, table).canonicalize()


def modulate(f: SchwartzFunction, t) -> SchwartzFunction:
    """x -> psi(<x, t>) f(x); each t_i must be known modulo pi^m."""
    t = _vector(f.field, t, f.d)
    for x in t:
        if x.k < f.m:
            raise InsufficientPrecision(f"modulation vector known mod pi^{x.k}, need pi^{f.m}")
    k = max([f.k] + [_support_exponent(x) for x in t])
    g = f.widen(f.m, k)
    codec = window_codec(f.field, f.m, k)
    ring = f.ring
    total = np.zeros((codec.size,) * f.d, dtype=np.int64)
    for ax, x in enumerate(t):
        x = x.rewindow(_support_exponent(x), x.k)
        e = np.array([char_exponent(codec.point(i) * x, ring) for i in range(codec.size)], dtype=np.int64)
        shape = [1] * f.d
        shape[ax] = codec.size
        total = total + e.reshape(shape)
    total %= ring.order
    flat = _rotate(g.table.reshape(-1, ring.phi), total.ravel(), ring.order, ring.p, ring.modulus)
    return SchwartzFunction(f.field, ring, f.d, f.m, k, flat.reshape(g.table.shape)).canonicalize()


# ---------------------------------------------------------------------------
# Matrices over E and the affine action
# ---------------------------------------------------------------------------

class LocalMatrix:
    """g = pi^scale * A with A a d x d matrix over O known modulo pi^precision.

    Entries of ``A`` are WindowElements on window (0, precision).
    """

    def __init__(self, field: LocalFieldSpec, scale: int, entries, precision: int):
        self.field = field
        self.scale = int(scale)
        self.precision = int(precision)
        rows = [list(r) for r in entries]
        d = len(rows)
        if d == 0 or any(len(r) != d for r in rows):
            raise ValueError("matrix must be square and non-empty")
        self.d = d
        self.entries = tuple(tuple(_integral(field, x, precision) for x in r) for r in rows)

    @classmethod
    def from_ints(cls, field, rows, precision, scale=0):
        """Integer (characteristic zero) or F_q-code polynomial entries.

        In characteristic p an entry may be an int (constant F_q code) or a
        dict {exponent: code}.
        """
        out = []
        for r in rows:
            row = []
            for x in r:
                if field.char_zero:
                    row.append(WindowElement.from_fraction(field, 0, precision, int(x)))
                elif isinstance(x, dict):
                    row.append(WindowElement.from_laurent(field, 0, precision, x))
                else:
                    row.append(WindowElement.from_laurent(field, 0, precision, {0: int(x)}))
            out.append(row)
        return cls(field, scale, out, precision)

    @classmethod
    def identity(cls, field, d, precision=1, scale=0):
        return cls.from_ints(field, [[int(i == j) for j in range(d)] for i in range(d)], precision, scale)

    @classmethod
    def negative_identity(cls, field, d, precision=1):
        one = WindowElement.from_laurent(field, 0, precision, {0: 1})
        zero = WindowElement.zero(field, 0, precision)
        rows = [[-one if i == j else zero for j in range(d)] for i in range(d)]
        return cls(field, 0, rows, precision)

    @classmethod
    def from_entries(cls, field, entries, precision):
        """Entries given as (valuation, unit) pairs, unit a WindowElement on (0, *).

        A zero entry may be given as None.
        """
        vals = [v for r in entries for (v, _u) in (e for e in r if e is not None)]
        scale = min(vals) if vals else 0
        rows = []
        for r in entries:
            row = []
            for e in r:
                if e is None:
                    row.append(WindowElement.zero(field, 0, precision))
                    continue
                v, u = e
                x = u.rewindow(0, min(u.k, precision)).shift(v - scale)
                if x.k < precision:
                    raise InsufficientPrecision("entry known to less than the requested precision")
                row.append(x.rewindow(0, precision))
            rows.append(row)
        return cls(field, scale, rows, precision)

    def __repr__(self):
        return f"LocalMatrix(d={self.d}, scale={self.scale}, precision={self.precision})"

    def determinant(self) -> WindowElement:
        return _det(self.field, self.entries, self.precision)

    def det_valuation(self) -> int:
        """Valuation of det g (not only of det A)."""
        v = self.determinant().valuation()
        if v is None:
            raise SingularMatrix("determinant vanishes at the given precision")
        return self.d * self.scale + v

    def transpose(self) -> "LocalMatrix":
        d = self.d
        return LocalMatrix(self.field, self.scale, [[self.entries[j][i] for j in range(d)] for i in range(d)], self.precision)

    def inverse(self) -> "LocalMatrix":
        """g^{-1} = pi^{-(scale + delta)} u^{-1} adj(A), det A = pi^delta u."""
        field, d, P = self.field, self.d, self.precision
        det = self.determinant()
        delta = det.valuation()
        if delta is None:
            raise SingularMatrix("determinant vanishes at the given precision")
        if delta >= P:
            raise SingularMatrix("determinant vanishes at the given precision")
        unit = det.shift(-delta).rewindow(0, P - delta)
        uinv = unit_inverse(unit)
        adj = _adjugate(field, self.entries, P)
        rows = [[(uinv * adj[i][j]).rewindow(0, P - delta) for j in range(d)] for i in range(d)]
        return LocalMatrix(field, -(self.scale + delta), rows, P - delta)

    def apply(self, vec):
        """g.x for a vector of WindowElements on a common window."""
        out = []
        for row in self.entries:
            acc = None
            for a, x in zip(row, vec):
                term = a * x
                acc = term if acc is None else acc + term
            out.append(acc.shift(self.scale))
        return out


def _integral(field, x, precision):
    if not isinstance(x, WindowElement) or x.field != field:
        raise FieldMismatch("matrix entries must be WindowElements over the matrix field")
    if not x.in_ball(0):
        raise WindowMismatch("matrix entries must be integral")
    if x.k < precision:
        raise InsufficientPrecision("entry known to less than the matrix precision")
    return x.rewindow(0, precision)


def _det(field, rows, P):
    d = len(rows)
    total = WindowElement.zero(field, 0, P)
    for perm in permutations(range(d)):
        term = WindowElement.from_laurent(field, 0, P, {0: 1})
        for i, j in enumerate(perm):
            term = term * rows[i][j]
        inv = sum(1 for a in range(d) for b in range(a + 1, d) if perm[a] > perm[b])
        total = total - term if inv % 2 else total + term
    return total


def _adjugate(field, rows, P):
    d = len(rows)
    if d == 1:
        return [[WindowElement.from_laurent(field, 0, P, {0: 1})]]
    adj = [[None] * d for _ in range(d)]
    for i in range(d):
        for j in range(d):
            minor = [[rows[r][c] for c in range(d) if c != j] for r in range(d) if r != i]
            c = _det(field, minor, P)
            adj[j][i] = -c if (i + j) % 2 else c
    return adj


def unit_inverse(u: WindowElement) -> WindowElement:
    """Inverse of a unit of O/pi^k (window (0, k))."""
    field, k = u.field, u.k
    if u.m != 0:
        raise WindowMismatch("unit_inverse expects window (0, k)")
    if k == 0:
        return u
    if u.valuation() != 0:
        raise SingularMatrix("element is not a unit")
    if field.char_zero:
        gr = field.galois_ring(k)
        return WindowElement(field, 0, k, gr.inverse(u.payload))
    ff = field.residue_field
    a = u.payload
    inv0 = ff.inv(a[0])
    b = [inv0]
    for n in range(1, k):
        s = 0
        for i in range(1, n + 1):
            s = ff.add(s, ff.mul(a[i], b[n - i]))
        b.append(ff.neg(ff.mul(inv0, s)))
    return WindowElement(field, 0, k, tuple(b))


def affine_act(f: SchwartzFunction, g: LocalMatrix, t=None) -> SchwartzFunction:
    """x -> f(g^{-1}(x - t)).

    With g = pi^e A and det A of valuation delta the output window is
    (max(0, m - e), max(0, k + e + delta)); A must be known modulo
    pi^P with P >= k + e + 2 delta + m_out.
    """
    if g.field != f.field:
        raise FieldMismatch("matrix lives over a different field")
    if g.d != f.d:
        raise ValueError("matrix size does not match the dimension")
    h = _linear_act(f, g)
    if t is not None:
        h = translate(h, t)
    return h


def _linear_act(f, g):
    field, d = f.field, f.d
    ginv = g.inverse()
    e, delta = g.scale, ginv.scale * -1 - g.scale
    m_out = max(0, f.m - e)
    k_out = max(0, f.k + e + delta)
    if ginv.precision < f.k + e + delta + m_out:
        raise InsufficientPrecision(
            f"matrix known mod pi^{g.precision}, window ({f.m},{f.k}) needs "
            f"pi^{f.k + e + 2 * delta + m_out}"
        )
    codec = window_codec(field, m_out, k_out)
    pts = [codec.point(i) for i in range(codec.size)]
    Q = codec.size
    # g^{-1} x is linear in x: precompute images of each axis point times
    # each column, then add coordinates.
    shift = ginv.scale
    cols = []
    for j in range(d):
        col = []
        for i in range(d):
            col.append([(ginv.entries[i][j] * x) for x in pts])
        cols.append(col)
    table = np.zeros((Q,) * d + (f.ring.phi,), dtype=np.int64)
    for idx in product(range(Q), repeat=d):
        src_idx = []
        for i in range(d):
            acc = cols[0][i][idx[0]]
            for j in range(1, d):
                acc = acc + cols[j][i][idx[j]]
            y = acc.shift(shift)
            if not y.in_ball(f.m):
                src_idx = None
                break
            src_idx.append(y.rewindow(f.m, f.k).index())
        if src_idx is not None:
            table[idx] = f.table[tuple(src_idx)]
    return SchwartzFunction(field, f.ring, d, m_out, k_out, table).canonicalize()


def abs_det(g: LocalMatrix, ring: LambdaRing) -> LambdaElement:
    """|det g| = q^{-val det g} in Lambda."""
    return ring.q_power(g.field.q, -g.det_valuation())


def mirabolic_act(f: SchwartzFunction, g: LocalMatrix, vcheck) -> SchwartzFunction:
    """v -> psi(vcheck(g^{-1} v)) f(g^{-1} v)."""
    return affine_act(modulate(f, vcheck), g)
