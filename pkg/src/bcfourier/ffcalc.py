"""Slope bookkeeping for coherent sheaves on the Fargues-Fontaine curve over
a geometric point.

Over a geometric point every flat coherent sheaf splits as a sum of stable
bundles O(d/h) and torsion, so a sheaf is recorded by its stable summands
(with multiplicities) and the lengths of its torsion pieces.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil, gcd, inf

from .errors import NegativeSlope, NonPositiveSlope, TorsionNotDualizable

INF = inf


@dataclass(frozen=True, order=True)
class StableDatum:
    """O(d/h)^{mult} with d/h in lowest terms."""

    d: int
    h: int
    mult: int = 1

    def __post_init__(self):
        if self.h < 1 or self.mult < 1:
            raise ValueError("rank and multiplicity must be positive")
        if gcd(abs(self.d), self.h) != 1:
            raise ValueError(f"slope {self.d}/{self.h} is not in lowest terms")

    @property
    def slope(self) -> Fraction:
        return Fraction(self.d, self.h)

    @property
    def rank(self) -> int:
        return self.h * self.mult

    @property
    def degree(self) -> int:
        return self.d * self.mult


def stable(slope, mult: int = 1) -> StableDatum:
    """O(slope)^{mult} from a rational slope."""
    s = Fraction(slope)
    return StableDatum(s.numerator, s.denominator, mult)


class CoherentDatum:
    """Normal form of a coherent sheaf: stable summands plus torsion lengths."""

    __slots__ = ("bundles", "torsion")

    def __init__(self, bundles=(), torsion=()):
        counts = Counter()
        for b in bundles:
            if not isinstance(b, StableDatum):
                b = StableDatum(*b)
            counts[(b.d, b.h)] += b.mult
        merged = [StableDatum(d, h, c) for (d, h), c in counts.items()]
        merged.sort(key=lambda b: (-b.slope, b.h))
        lengths = [int(t) for t in torsion]
        if any(t < 1 for t in lengths):
            raise ValueError("torsion lengths must be positive")
        self.bundles = tuple(merged)
        self.torsion = tuple(sorted(lengths, reverse=True))

    @classmethod
    def from_dict(cls, data):
        return cls([tuple(b) for b in data.get("bundles", [])], data.get("torsion", []))

    def to_dict(self):
        return {"bundles": [[b.d, b.h, b.mult] for b in self.bundles], "torsion": list(self.torsion)}

    def __eq__(self, other):
        if not isinstance(other, CoherentDatum):
            return NotImplemented
        return self.bundles == other.bundles and self.torsion == other.torsion

    def __hash__(self):
        return hash((self.bundles, self.torsion))

    def __add__(self, other):
        return CoherentDatum(self.bundles + other.bundles, self.torsion + other.torsion)

    def __repr__(self):
        parts = []
        for b in self.bundles:
            s = f"O({b.slope})"
            parts.append(s if b.mult == 1 else f"{s}^{b.mult}")
        parts += [f"T({t})" for t in self.torsion]
        return " + ".join(parts) or "0"

    @property
    def rank(self) -> int:
        return sum(b.rank for b in self.bundles)

    @property
    def degree(self) -> int:
        return sum(b.degree for b in self.bundles) + sum(self.torsion)

    def slopes(self):
        """Distinct slopes in decreasing order, +inf first when torsion is present."""
        out = [INF] if self.torsion else []
        for b in self.bundles:
            if b.slope not in out:
                out.append(b.slope)
        return out

    def min_finite_slope(self):
        return min((b.slope for b in self.bundles), default=None)

    def is_semistable(self) -> bool:
        return not self.torsion and len({b.slope for b in self.bundles}) <= 1

    def bundle_part(self):
        return CoherentDatum(self.bundles)


def rank_degree(F: CoherentDatum):
    return F.rank, F.degree


@dataclass(frozen=True)
class HNPolygon:
    segments: tuple  # (slope, rank, degree), slope INF for torsion
    vertices: tuple  # cumulative (rank, degree) from (0, 0)

    def to_rows(self):
        return [list(v) for v in self.vertices]


def hn_polygon(F: CoherentDatum) -> HNPolygon:
    segs = []
    tors = sum(F.torsion)
    if tors:
        segs.append((INF, 0, tors))
    by_slope = {}
    for b in F.bundles:
        r, d = by_slope.get(b.slope, (0, 0))
        by_slope[b.slope] = (r + b.rank, d + b.degree)
    for s in sorted(by_slope, reverse=True):
        r, d = by_slope[s]
        segs.append((s, r, d))
    verts = [(0, 0)]
    for _s, r, d in segs:
        pr, pd = verts[-1]
        verts.append((pr + r, pd + d))
    if len(verts) == 1:
        verts = []
    return HNPolygon(tuple(segs), tuple(verts))


def dual(F: CoherentDatum) -> CoherentDatum:
    if F.torsion:
        raise TorsionNotDualizable("torsion sheaves have no bundle dual")
    return CoherentDatum([StableDatum(-b.d, b.h, b.mult) for b in F.bundles])


def twist(F: CoherentDatum, n: int) -> CoherentDatum:
    """F(n): slopes shift by n, torsion unchanged."""
    return CoherentDatum([StableDatum(b.d + n * b.h, b.h, b.mult) for b in F.bundles], F.torsion)


def change_field(F: CoherentDatum, r: int, direction: str) -> CoherentDatum:
    """Pullback or pushforward along the degree-r unramified cover of the curve."""
    if r < 1:
        raise ValueError("r must be positive")
    out = []
    if direction == "pullback":
        for b in F.bundles:
            g = gcd(r * b.d, b.h)
            out.append(StableDatum(r * b.d // g, b.h // g, b.mult * g))
        return CoherentDatum(out, [r * t for t in F.torsion])
    if direction == "pushforward":
        for b in F.bundles:
            g = gcd(b.d, r * b.h)
            out.append(StableDatum(b.d // g, r * b.h // g, b.mult * g))
        return CoherentDatum(out, F.torsion)
    raise ValueError("direction must be 'pullback' or 'pushforward'")


def pullback(F, r):
    return change_field(F, r, "pullback")


def pushforward(F, r):
    return change_field(F, r, "pushforward")


@dataclass(frozen=True)
class NonnegPresentation:
    """0 -> O(-1)^left -> O^middle -> F -> 0."""

    left: int
    middle: int
    rank: int
    degree: int

    @property
    def left_datum(self):
        return CoherentDatum([StableDatum(-1, 1, self.left)] if self.left else [])

    @property
    def middle_datum(self):
        return CoherentDatum([StableDatum(0, 1, self.middle)] if self.middle else [])

    def verify(self) -> bool:
        lr, ld = rank_degree(self.left_datum)
        mr, md = rank_degree(self.middle_datum)
        return mr - lr == self.rank and md - ld == self.degree

    def to_dict(self):
        return {"left": self.left, "middle": self.middle, "rank": self.rank, "degree": self.degree,
                "verified": self.verify()}


def presentation_nonneg(F: CoherentDatum) -> NonnegPresentation:
    s = F.min_finite_slope()
    if s is not None and s < 0:
        raise NegativeSlope(f"slope {s} < 0")
    i, d = rank_degree(F)
    return NonnegPresentation(left=d, middle=i + d, rank=i, degree=d)


@dataclass(frozen=True)
class PositivePresentation:
    """0 -> O^{d'} -> ambient -> pi_{r*} pi_r^* F -> 0, ambient = O(1/r)^{r deg F}."""

    r: int
    d_prime: int
    ambient: CoherentDatum
    target: CoherentDatum
    kernel: CoherentDatum = field(default_factory=CoherentDatum)

    def verify(self) -> bool:
        ar, ad = rank_degree(self.ambient)
        kr, kd = rank_degree(self.kernel)
        tr, td = rank_degree(self.target)
        semistable = self.ambient.is_semistable()
        positive = all(b.slope > 0 for b in self.ambient.bundles)
        return kr == self.d_prime and kd == 0 and ar - kr == tr and ad - kd == td and semistable and positive

    def to_dict(self):
        return {
            "r": self.r,
            "d_prime": self.d_prime,
            "ambient": self.ambient.to_dict(),
            "target": self.target.to_dict(),
            "verified": self.verify(),
        }


def presentation_positive(F: CoherentDatum) -> PositivePresentation:
    """Pull back along pi_r, twist by -1, present, twist back, push forward."""
    s = F.min_finite_slope()
    if s is not None and s <= 0:
        raise NonPositiveSlope(f"slope {s} <= 0")
    r = F.rank if F.rank > 0 else 1
    G = twist(pullback(F, r), -1)
    pres = presentation_nonneg(G)
    # twisting the presentation back by 1: O^left -> O(1)^middle -> G(1)
    kernel = twist(pres.left_datum, 1)
    middle = twist(pres.middle_datum, 1)
    kernel, ambient = pushforward(kernel, r), pushforward(middle, r)
    return PositivePresentation(
        r=r,
        d_prime=kernel.rank,
        ambient=ambient,
        target=pushforward(pullback(F, r), r),
        kernel=kernel,
    )


def ample_twist_bound(F: CoherentDatum) -> int:
    """n0 with every slope of F(n) positive for n >= n0 (an over-approximation)."""
    s = F.min_finite_slope()
    if s is None:
        return 0
    return max(0, ceil(-s) + 1)


def bc_dimension(F: CoherentDatum):
    """(dimension, shift) = (deg F, -2 deg F) for F with positive slopes."""
    s = F.min_finite_slope()
    if s is not None and s <= 0:
        raise NonPositiveSlope(f"slope {s} <= 0")
    return F.degree, -2 * F.degree


# ---------------------------------------------------------------------------
# Banach-Colmez data and duality
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BCDatum:
    """Graded pieces of a stack in E-vector spaces.

    degree0: BC of a sheaf with slopes > 0 (torsion allowed), in degree 0;
    locsys_rank: rank of the pro-etale local system part;
    classifying_rank: rank of the [S/L] part;
    degree1: bundle with slopes < 0, in degree 1;
    dual_torsion: lengths of torsion pieces that arrived through duality.
    """

    degree0: CoherentDatum = field(default_factory=CoherentDatum)
    locsys_rank: int = 0
    classifying_rank: int = 0
    degree1: CoherentDatum = field(default_factory=CoherentDatum)
    dual_torsion: tuple = ()

    def __post_init__(self):
        if any(b.slope <= 0 for b in self.degree0.bundles):
            raise ValueError("degree-0 part must have slopes > 0")
        if self.degree1.torsion or any(b.slope >= 0 for b in self.degree1.bundles):
            raise ValueError("degree-1 part must be a bundle with slopes < 0")
        if self.locsys_rank < 0 or self.classifying_rank < 0:
            raise ValueError("ranks must be non-negative")
        object.__setattr__(self, "dual_torsion", tuple(sorted((int(t) for t in self.dual_torsion), reverse=True)))

    def rank_profile(self):
        """(BC degree 0, local system, classifying, BC degree 1) dimensions."""
        return (
            self.degree0.degree,
            self.locsys_rank,
            self.classifying_rank,
            -self.degree1.degree + sum(self.dual_torsion),
        )

    def to_dict(self):
        return {
            "degree0": self.degree0.to_dict(),
            "locsys_rank": self.locsys_rank,
            "classifying_rank": self.classifying_rank,
            "degree1": self.degree1.to_dict(),
            "dual_torsion": list(self.dual_torsion),
        }

    @classmethod
    def from_dict(cls, data):
        return cls(
            degree0=CoherentDatum.from_dict(data.get("degree0", {})),
            locsys_rank=int(data.get("locsys_rank", 0)),
            classifying_rank=int(data.get("classifying_rank", 0)),
            degree1=CoherentDatum.from_dict(data.get("degree1", {})),
            dual_torsion=tuple(data.get("dual_torsion", ())),
        )


def bc_dualize(B: BCDatum) -> BCDatum:
    return BCDatum(
        degree0=CoherentDatum(dual(B.degree1).bundles, B.dual_torsion),
        locsys_rank=B.classifying_rank,
        classifying_rank=B.locsys_rank,
        degree1=dual(B.degree0.bundle_part()),
        dual_torsion=B.degree0.torsion,
    )


# ---------------------------------------------------------------------------
# Ext groups between the unit and the skyscraper
# ---------------------------------------------------------------------------

UNIT = "unit-E"
SKYSCRAPER = "skyscraper-O#"
_ALIASES = {"e": UNIT, "unit": UNIT, "unit-e": UNIT, "o#": SKYSCRAPER, "o♯": SKYSCRAPER,
            "skyscraper": SKYSCRAPER, "skyscraper-o#": SKYSCRAPER, "skyscraper-o♯": SKYSCRAPER}


@dataclass(frozen=True)
class ExtTerm:
    generator: str
    twist: int
    shift: int

    def __str__(self):
        g = "E" if self.generator == UNIT else "O#"
        tw = f"({self.twist})" if self.twist else ""
        return f"{g}{tw}[{self.shift}]"


@dataclass(frozen=True)
class ExtEntry:
    terms: tuple

    def twisted(self, twist: int, shift: int) -> "ExtEntry":
        return ExtEntry(tuple(ExtTerm(t.generator, t.twist + twist, t.shift + shift) for t in self.terms))

    def degrees(self):
        return sorted(-t.shift for t in self.terms)

    def __str__(self):
        return " + ".join(str(t) for t in self.terms)

    def to_list(self):
        return [[t.generator, t.twist, t.shift] for t in self.terms]


_EXT = {
    (UNIT, UNIT): ExtEntry((ExtTerm(UNIT, 0, 0),)),
    (UNIT, SKYSCRAPER): ExtEntry((ExtTerm(SKYSCRAPER, 0, 0),)),
    (SKYSCRAPER, SKYSCRAPER): ExtEntry((ExtTerm(SKYSCRAPER, 0, 0), ExtTerm(SKYSCRAPER, 0, -1))),
    (SKYSCRAPER, UNIT): ExtEntry((ExtTerm(SKYSCRAPER, -1, -1),)),
}

# Serre duality exchanges the mixed rows at the cost of (-1)[-1].
SERRE_TWIST, SERRE_SHIFT = -1, -1


def generator(name: str) -> str:
    key = str(name).strip().lower()
    if key in _ALIASES:
        return _ALIASES[key]
    raise ValueError(f"unknown generator {name!r}")


def ext_table(X: str, Y: str) -> ExtEntry:
    """RHom(X, Y) for X, Y in {unit-E, skyscraper-O#}."""
    return _EXT[generator(X), generator(Y)]


def serre_consistent(X: str, Y: str) -> bool:
    """Check one entry of the table against relative Serre duality.

    Mixed entries: RHom(O#, E) = RHom(E, O#)(-1)[-1] and conversely.
    Diagonal entries: RHom(E, E) is the unit; RHom(O#, O#) is concentrated
    in degrees {0, 1}, a set closed under i -> 1 - i.
    """
    X, Y = generator(X), generator(Y)
    entry = ext_table(X, Y)
    if X != Y:
        sign = 1 if (X, Y) == (UNIT, SKYSCRAPER) else -1
        return ext_table(Y, X) == entry.twisted(sign * SERRE_TWIST, sign * SERRE_SHIFT)
    if X == UNIT:
        return entry == ExtEntry((ExtTerm(UNIT, 0, 0),))
    degs = entry.degrees()
    return degs == sorted(1 - i for i in degs)
