"""Slopes in the value group, Swan conductors, Herbrand transfer through the
Lubin-Tate tower, discriminant functions and rank formulas.

A value-group element near a boundary of the punctured disk is a monomial
r^a * gamma^b, possibly multiplied by exp(-c) r^{-d} for unknown constants
c, d > 0. It is stored as a logarithm of its divisible part (a linear form
in log r, c and d * log r) and the exponent of gamma. Comparisons are made
in the limit regime r -> 0 or r -> 1 (from below) and raise
:class:`Indeterminate` when the sign of the logarithm is not forced.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import floor, inf

from .errors import (
    EqualSlopes,
    HypothesisViolated,
    Indeterminate,
    NotConvexifiable,
    UnsupportedCombination,
)

R_TO_ZERO = "r->0"
R_TO_ONE = "r->1"
REGIMES = (R_TO_ZERO, R_TO_ONE)


def _sign(x) -> int:
    return (x > 0) - (x < 0)


@dataclass(frozen=True)
class FlatLog:
    """const + log_r * log r + c * C + d_log_r * D log r, with C, D > 0 unknown."""

    const: Fraction = Fraction(0)
    log_r: Fraction = Fraction(0)
    c: Fraction = Fraction(0)
    d_log_r: Fraction = Fraction(0)

    def __post_init__(self):
        for name in ("const", "log_r", "c", "d_log_r"):
            object.__setattr__(self, name, Fraction(getattr(self, name)))

    def __add__(self, other):
        return FlatLog(self.const + other.const, self.log_r + other.log_r, self.c + other.c,
                       self.d_log_r + other.d_log_r)

    def __neg__(self):
        return FlatLog(-self.const, -self.log_r, -self.c, -self.d_log_r)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, k):
        k = Fraction(k)
        return FlatLog(self.const * k, self.log_r * k, self.c * k, self.d_log_r * k)

    def is_zero(self) -> bool:
        return not (self.const or self.log_r or self.c or self.d_log_r)

    @property
    def symbolic(self) -> bool:
        return bool(self.log_r or self.c or self.d_log_r)

    def sign(self, regime=None) -> int:
        """Eventual sign in the given limit regime."""
        if not self.symbolic:
            return _sign(self.const)
        if regime not in REGIMES:
            raise Indeterminate(f"sign of {self} needs a regime (r->0 or r->1)")
        if regime == R_TO_ZERO:
            # log r -> -inf dominates every bounded term
            lead = _forced_sign(self.log_r, self.d_log_r)
            if lead is not None and lead != 0:
                return -lead
            if lead is None:
                raise Indeterminate(f"sign of {self} as r->0 depends on the constant d")
            tail = _forced_sign(self.const, self.c)
            if tail is None:
                raise Indeterminate(f"sign of {self} as r->0 depends on the constant c")
            return tail
        # r -> 1 from below: log r -> 0^-
        limit = _forced_sign(self.const, self.c)
        if limit is None:
            raise Indeterminate(f"sign of {self} as r->1 depends on the constant c")
        if limit != 0:
            return limit
        lead = _forced_sign(self.log_r, self.d_log_r)
        if lead is None:
            raise Indeterminate(f"sign of {self} as r->1 depends on the constant d")
        return -lead

    def __str__(self):
        parts = []
        if self.const:
            parts.append(str(self.const))
        if self.c:
            parts.append(f"{self.c}*c")
        if self.log_r:
            parts.append(f"{self.log_r}*log(r)")
        if self.d_log_r:
            parts.append(f"{self.d_log_r}*d*log(r)")
        return " + ".join(parts) or "0"


def _forced_sign(fixed, positive_coeff):
    """Sign of fixed + positive_coeff * X for an unknown X > 0, or None."""
    a, b = _sign(fixed), _sign(positive_coeff)
    if b == 0:
        return a
    if a == 0 or a == b:
        return b
    return None


@dataclass(frozen=True)
class ValueGroupElement:
    """gamma = (divisible part) * gamma_K^sharp."""

    flat_log: FlatLog = field(default_factory=FlatLog)
    sharp: Fraction = Fraction(0)
    regime: str = None

    def __post_init__(self):
        if not isinstance(self.flat_log, FlatLog):
            object.__setattr__(self, "flat_log", FlatLog(self.flat_log))
        object.__setattr__(self, "sharp", Fraction(self.sharp))
        if self.regime is not None and self.regime not in REGIMES:
            raise ValueError(f"unknown regime {self.regime!r}")

    @classmethod
    def one(cls, regime=None):
        return cls(FlatLog(), 0, regime)

    def is_one(self) -> bool:
        return self.flat_log.is_zero() and self.sharp == 0

    def _regime(self, other):
        regs = {x for x in (self.regime, other.regime) if x is not None}
        if len(regs) > 1:
            raise Indeterminate("elements were built for different regimes")
        return regs.pop() if regs else None

    def compare(self, other) -> int:
        """-1, 0 or 1 as self <, =, > other."""
        diff = self.flat_log - other.flat_log
        if diff.is_zero():
            # gamma_K < 1 exceeds every divisible element < 1: more sharp is smaller
            return _sign(other.sharp - self.sharp)
        return diff.sign(self._regime(other))

    def __lt__(self, other):
        return self.compare(other) < 0

    def __le__(self, other):
        return self.compare(other) <= 0

    def __gt__(self, other):
        return self.compare(other) > 0

    def __ge__(self, other):
        return self.compare(other) >= 0

    def same(self, other) -> bool:
        """Identical as symbolic expressions."""
        return self.flat_log == other.flat_log and self.sharp == other.sharp

    def to_dict(self):
        fl = self.flat_log
        return {"flat_log": {"const": str(fl.const), "log_r": str(fl.log_r), "c": str(fl.c),
                             "d_log_r": str(fl.d_log_r)},
                "sharp": str(self.sharp), "regime": self.regime}

    def __str__(self):
        return f"exp({self.flat_log}) * gamma^{self.sharp}"


@dataclass(frozen=True)
class SlopeDecomposition:
    """Distinct slopes with their lengths."""

    entries: tuple = ()

    def __post_init__(self):
        merged = []
        for g, n in self.entries:
            if int(n) < 1:
                raise ValueError("lengths must be positive")
            if any(g.same(h) for h, _ in merged):
                raise ValueError("slopes must be pairwise distinct")
            merged.append((g, int(n)))
        object.__setattr__(self, "entries", tuple(merged))

    @classmethod
    def trivial(cls, length=1, regime=None):
        return cls(((ValueGroupElement.one(regime), length),))

    @classmethod
    def merge(cls, items):
        out = []
        for g, n in items:
            for i, (h, m) in enumerate(out):
                if g.same(h):
                    out[i] = (h, m + n)
                    break
            else:
                out.append((g, n))
        return cls(tuple(out))

    def __add__(self, other):
        """Direct sum."""
        return SlopeDecomposition.merge(self.entries + other.entries)

    @property
    def length(self) -> int:
        return sum(n for _, n in self.entries)


def swan(dec: SlopeDecomposition) -> Fraction:
    return sum((g.sharp * n for g, n in dec.entries), Fraction(0))


def tensor_slopes(A: SlopeDecomposition, B: SlopeDecomposition) -> SlopeDecomposition:
    """Slopes of a tensor product: the smaller (more ramified) slope wins.

    An unramified factor (gamma = 1) is allowed against anything; equal
    nontrivial slopes are refused.
    """
    out = []
    for ga, la in A.entries:
        for gb, lb in B.entries:
            if ga.is_one():
                g = gb
            elif gb.is_one():
                g = ga
            elif ga.same(gb) or ga.compare(gb) == 0:
                raise EqualSlopes(f"cannot tensor two copies of the slope {ga}")
            else:
                g = ga if ga < gb else gb
            out.append((g, la * lb))
    return SlopeDecomposition.merge(out)


# ---------------------------------------------------------------------------
# Herbrand functions and the rank formulas
# ---------------------------------------------------------------------------

def herbrand(q: int, x, level=None) -> Fraction:
    """psi_{E_m/E}(x) for the m-th Lubin-Tate layer; level None or inf for E_inf."""
    if q < 2:
        raise ValueError("q must be at least 2")
    x = Fraction(x)
    if x <= 0:
        return x
    if level is not None and level != inf:
        m = int(level)
        if m < 1:
            raise ValueError("level must be a positive integer or infinity")
        if x >= m - 1:
            return Fraction(q) ** (m - 1) * (q - 1) * (x - (m - 1)) + Fraction(q) ** (m - 1) - 1
    n = floor(x)
    return Fraction(q) ** n * (q - 1) * (x - n) + Fraction(q) ** n - 1


@dataclass(frozen=True)
class Transfer:
    sl_V: Fraction
    sw_V: Fraction
    ft_rank: Fraction


def _check_hypotheses(n, sl_sigma):
    if n < 1:
        raise HypothesisViolated("dimension must be positive")
    if sl_sigma < 0:
        raise HypothesisViolated("slope must be non-negative")
    if n == 1 and sl_sigma > 0:
        raise HypothesisViolated("a character of positive slope can be untwisted; the transfer needs n > 1")


def transfer(n: int, sl_sigma, q: int) -> Transfer:
    sl_sigma = Fraction(sl_sigma)
    _check_hypotheses(n, sl_sigma)
    sl_V = herbrand(q, sl_sigma)
    sw_V = n * sl_V
    return Transfer(sl_V, sw_V, n + sw_V)


def carayol_dim(q: int, sw_sigma: int) -> int:
    if sw_sigma < 1:
        raise ValueError("Swan conductor must be at least 1")
    if sw_sigma % 2 == 0:
        return 2 * q ** (sw_sigma // 2)
    return (q + 1) * q ** ((sw_sigma - 1) // 2)


def gos_chi(alpha, beta) -> Fraction:
    """Compactly supported Euler characteristic on the punctured disk."""
    return -Fraction(alpha) - Fraction(beta)


LTILDE = "Ltilde"
LPSI = "Lpsi"
INNER = "inner"
OUTER = "outer"


def boundary_slopes(kind: str, side: str, regime: str, sl_V=0) -> ValueGroupElement:
    """Slope of the sheaf on one boundary annulus of the punctured disk."""
    if regime not in REGIMES:
        raise ValueError(f"unknown regime {regime!r}")
    if side not in (INNER, OUTER):
        raise ValueError(f"unknown side {side!r}")
    sl = Fraction(sl_V)
    if kind == LPSI:
        if regime == R_TO_ZERO:
            return ValueGroupElement.one(regime)
        if side == OUTER:
            return ValueGroupElement(FlatLog(c=-1, d_log_r=-1), 1, regime)
        raise UnsupportedCombination("no slope is available for Lpsi on the inner side near r = 1")
    if kind == LTILDE:
        if sl < 0:
            raise ValueError("slope must be non-negative")
        sharp = sl if side == INNER else -sl
        return ValueGroupElement(FlatLog(log_r=sl), sharp, regime)
    raise ValueError(f"unknown sheaf kind {kind!r}")


@dataclass(frozen=True)
class PipelineResult:
    alpha: Fraction
    beta: Fraction
    rank: Fraction


def ft_stalk_rank_pipeline(n: int, sl_sigma, q: int) -> PipelineResult:
    """Rank of the stalk via the two boundary Swan conductors of Ltilde (x) Lpsi."""
    sl_sigma = Fraction(sl_sigma)
    _check_hypotheses(n, sl_sigma)
    sl_V = herbrand(q, sl_sigma)
    near0 = tensor_slopes(
        SlopeDecomposition(((boundary_slopes(LTILDE, INNER, R_TO_ZERO, sl_V), n),)),
        SlopeDecomposition(((boundary_slopes(LPSI, INNER, R_TO_ZERO), 1),)),
    )
    near1 = tensor_slopes(
        SlopeDecomposition(((boundary_slopes(LTILDE, OUTER, R_TO_ONE, sl_V), n),)),
        SlopeDecomposition(((boundary_slopes(LPSI, OUTER, R_TO_ONE), 1),)),
    )
    alpha, beta = swan(near0), swan(near1)
    return PipelineResult(alpha, beta, alpha + beta)


# ---------------------------------------------------------------------------
# Piecewise-linear functions of s = -log r
# ---------------------------------------------------------------------------

def _frac_or_inf(x):
    if x in (inf, -inf):
        return x
    return Fraction(x)


@dataclass(frozen=True)
class StepProfile:
    """Right-continuous step function on (lo, hi): values[i] on [breaks[i-1], breaks[i])."""

    breaks: tuple
    values: tuple
    lo: object = Fraction(0)
    hi: object = inf

    def __post_init__(self):
        b = tuple(Fraction(x) for x in self.breaks)
        v = tuple(Fraction(x) for x in self.values)
        lo, hi = _frac_or_inf(self.lo), _frac_or_inf(self.hi)
        if len(v) != len(b) + 1:
            raise ValueError("need one more value than breaks")
        if any(x >= y for x, y in zip(b, b[1:])) or any(not lo < x < hi for x in b):
            raise ValueError("breaks must increase strictly inside the domain")
        object.__setattr__(self, "breaks", b)
        object.__setattr__(self, "values", v)
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    def __call__(self, s):
        s = Fraction(s)
        i = sum(1 for x in self.breaks if x <= s)
        return self.values[i]


@dataclass(frozen=True)
class PLFunction:
    """Continuous piecewise-linear function on the open interval (lo, hi)."""

    lo: object
    hi: object
    breaks: tuple
    slopes: tuple
    ref: Fraction
    ref_value: Fraction

    def __post_init__(self):
        object.__setattr__(self, "lo", _frac_or_inf(self.lo))
        object.__setattr__(self, "hi", _frac_or_inf(self.hi))
        object.__setattr__(self, "breaks", tuple(Fraction(x) for x in self.breaks))
        object.__setattr__(self, "slopes", tuple(Fraction(x) for x in self.slopes))
        object.__setattr__(self, "ref", Fraction(self.ref))
        object.__setattr__(self, "ref_value", Fraction(self.ref_value))
        if len(self.slopes) != len(self.breaks) + 1:
            raise ValueError("need one more slope than breaks")
        if not self.lo <= self.ref <= self.hi:
            raise ValueError("reference point outside the closed domain")

    def _piece(self, s):
        return sum(1 for x in self.breaks if x <= s)

    def _integral(self, a, b):
        """int_a^b of the slope function, a <= b."""
        total = Fraction(0)
        pts = [a] + [x for x in self.breaks if a < x < b] + [b]
        for u, v in zip(pts, pts[1:]):
            total += self.slopes[self._piece(u)] * (v - u)
        return total

    def __call__(self, s) -> Fraction:
        s = Fraction(s)
        if not self.lo <= s <= self.hi:
            raise ValueError(f"{s} outside the domain")
        if s >= self.ref:
            return self.ref_value + self._integral(self.ref, s)
        return self.ref_value - self._integral(s, self.ref)

    def is_convex(self) -> bool:
        return all(a <= b for a, b in zip(self.slopes, self.slopes[1:]))

    def derivatives(self, s):
        """(left, right) derivatives at s."""
        s = Fraction(s)
        if not self.lo < s < self.hi:
            raise ValueError(f"{s} is not an interior point")
        right = self.slopes[self._piece(s)]
        left = self.slopes[sum(1 for x in self.breaks if x < s)]
        return left, right

    def reflect(self) -> "PLFunction":
        """s -> f(-s)."""
        return PLFunction(
            -self.hi, -self.lo,
            tuple(-x for x in reversed(self.breaks)),
            tuple(-x for x in reversed(self.slopes)),
            -self.ref, self.ref_value,
        )

    def to_rows(self):
        """(start, end, slope, value at start) per segment."""
        edges = [self.lo] + list(self.breaks) + [self.hi]
        rows = []
        for i, slope in enumerate(self.slopes):
            a = edges[i]
            start_val = self(a) if a not in (inf, -inf) else None
            rows.append((a, edges[i + 1], slope, start_val))
        return rows


def pl_discriminant(profile: StepProfile, anchor=None) -> PLFunction:
    """Convex delta with right derivative equal to ``profile``.

    ``anchor`` is (s0, value). Without one: delta = 0 where the last
    segment has slope 0 (at the last break, or on the whole domain if there
    is none), else at a finite right endpoint, else at the left endpoint.
    """
    v = profile.values
    if any(a > b for a, b in zip(v, v[1:])):
        raise NotConvexifiable("profile must be non-decreasing in -log r")
    if anchor is not None:
        ref, val = Fraction(anchor[0]), Fraction(anchor[1])
    elif v[-1] == 0:
        ref = profile.breaks[-1] if profile.breaks else (profile.lo if profile.lo != -inf else Fraction(0))
        val = Fraction(0)
    elif profile.hi != inf:
        ref, val = profile.hi, Fraction(0)
    elif profile.lo != -inf:
        ref, val = profile.lo, Fraction(0)
    else:
        ref, val = Fraction(0), Fraction(0)
    return PLFunction(profile.lo, profile.hi, profile.breaks, v, ref, val)


def pl_derivatives(delta: PLFunction, s):
    return delta.derivatives(s)


def sw_below(delta: PLFunction, s):
    """sw_< at radius exp(-s): the right derivative of delta."""
    return delta.derivatives(s)[1]


def sw_above(delta: PLFunction, s):
    """sw_> at radius exp(-s): minus the left derivative of delta."""
    return -delta.derivatives(s)[0]


def constant_profile(sw) -> StepProfile:
    return StepProfile((), (Fraction(sw),))


def lpsi_profile(break_at) -> StepProfile:
    """Profile of Lpsi: slope -1 before the break, 0 after it."""
    return StepProfile((Fraction(break_at),), (Fraction(-1), Fraction(0)))
