"""JSON and CSV formats shared by the CLI; see docs/schema.md."""
from __future__ import annotations

import csv
import io
import json
from fractions import Fraction

import numpy as np

from .arith import CoefficientSpec, LocalFieldSpec
from .errors import InsufficientRoots
from .ffcalc import BCDatum, CoherentDatum
from .frobsolve import PerfectSeriesRing, TwistedLaurent
from .schwartz import SchwartzFunction

SCHEMA = "bcfourier/1"


def dumps(obj) -> str:
    data = {"schema": SCHEMA}
    data.update(obj)
    return json.dumps(data, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def csv_text(header, rows) -> str:
    buf = io.StringIO()
    buf.write(f"# schema: {SCHEMA}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([fmt(x) for x in r])
    return buf.getvalue()


def fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, Fraction):
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    return str(x)


def parse_rational(x) -> Fraction:
    if isinstance(x, bool):
        raise ValueError("booleans are not numbers")
    if isinstance(x, (int, str)):
        return Fraction(x)
    if isinstance(x, float) and x.is_integer():
        return Fraction(int(x))
    raise ValueError(f"expected an integer or a rational string, got {x!r}")


# ---------------------------------------------------------------------------
# field / coefficient configuration
# ---------------------------------------------------------------------------

def field_from_dict(data) -> LocalFieldSpec:
    return LocalFieldSpec(int(data["p"]), int(data.get("f", 1)), data.get("characteristic", "zero-unramified"))


def coefficients_from_dict(data) -> CoefficientSpec:
    return CoefficientSpec(int(data["ell"]), int(data.get("n", 1)), int(data.get("M", 0)))


def load_config(data):
    """(LocalFieldSpec, CoefficientSpec) from a flat dict {p, f, characteristic, ell, n, M}."""
    field = field_from_dict(data)
    coeffs = coefficients_from_dict(data)
    coeffs.ring(field.p)  # validates ell != p and the modulus bound
    return field, coeffs


def check_roots(field: LocalFieldSpec, coeffs: CoefficientSpec, m: int, k: int):
    need = (m + k) if field.char_zero else (1 if m + k else 0)
    if coeffs.M < need:
        raise InsufficientRoots(f"window ({m},{k}) over {field.name} needs M >= {need}, got M = {coeffs.M}")


# ---------------------------------------------------------------------------
# Schwartz functions
# ---------------------------------------------------------------------------

def schwartz_to_dict(f: SchwartzFunction) -> dict:
    c = f.canonicalize()
    return {
        "type": "schwartz",
        "field": c.field.to_dict(),
        "coefficients": c.ring.spec.to_dict(),
        "d": c.d,
        "m": c.m,
        "k": c.k,
        "values": c.table.reshape(-1, c.ring.phi).tolist(),
    }


def schwartz_from_dict(data, config=None) -> SchwartzFunction:
    if "field" in data:
        field = field_from_dict(data["field"])
    elif config is not None:
        field = config[0]
    else:
        raise KeyError("field")
    if "coefficients" in data:
        coeffs = coefficients_from_dict(data["coefficients"])
    elif config is not None:
        coeffs = config[1]
    else:
        raise KeyError("coefficients")
    ring = coeffs.ring(field.p)
    d, m, k = int(data["d"]), int(data["m"]), int(data["k"])
    values = data["values"]
    Q = field.q ** (m + k)
    if len(values) != Q**d:
        raise ValueError(f"expected {Q ** d} values, got {len(values)}")
    rows = []
    for v in values:
        if isinstance(v, int):
            v = [v]
        rows.append(list(ring.element([int(x) for x in v]).coeffs))
    table = np.array(rows, dtype=np.int64).reshape((Q,) * d + (ring.phi,))
    return SchwartzFunction(field, ring, d, m, k, table)


# ---------------------------------------------------------------------------
# Twisted Laurent polynomials and coherent data
# ---------------------------------------------------------------------------

def perfect_ring_from_dict(data) -> PerfectSeriesRing:
    return PerfectSeriesRing(
        int(data["p"]),
        int(data.get("f", 1)),
        parse_rational(data.get("emax", 16)),
        parse_rational(data.get("emin", 0)),
        int(data.get("depth", 16)),
    )


def perfect_ring_to_dict(R: PerfectSeriesRing) -> dict:
    return {"p": R.p, "f": R.f, "emax": fmt(R.emax), "emin": fmt(R.emin), "depth": R.depth}


def twisted_to_dict(x: TwistedLaurent) -> dict:
    out = {"type": "twisted-laurent", "ring": perfect_ring_to_dict(x.parent)}
    out.update(x.to_dict())
    return out


def twisted_from_dict(data) -> TwistedLaurent:
    R = perfect_ring_from_dict(data["ring"])
    return TwistedLaurent.from_terms(R, data.get("terms", []))


def coherent_to_dict(F: CoherentDatum) -> dict:
    out = {"type": "coherent"}
    out.update(F.to_dict())
    return out


def coherent_from_dict(data) -> CoherentDatum:
    return CoherentDatum.from_dict(data)


def bc_to_dict(B: BCDatum) -> dict:
    out = {"type": "bc"}
    out.update(B.to_dict())
    return out


def bc_from_dict(data) -> BCDatum:
    return BCDatum.from_dict(data)
