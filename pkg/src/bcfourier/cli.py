"""Command-line front end.

Exit status: 0 on success, 2 when an operation contract is violated (the
diagnostic payload is still written), 1 on malformed input.
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import ffcalc, ramify
from .errors import ContractViolation
from .frobsolve import apply_F_minus_one, coker_class, solve_F_minus_one
from .schwartz import convolve, fourier
from .serialize import (
    bc_from_dict,
    bc_to_dict,
    check_roots,
    coherent_from_dict,
    coherent_to_dict,
    csv_text,
    dumps,
    fmt,
    load_config,
    parse_rational,
    schwartz_from_dict,
    schwartz_to_dict,
    twisted_from_dict,
    twisted_to_dict,
)

EXIT_OK, EXIT_MALFORMED, EXIT_CONTRACT = 0, 1, 2


class Malformed(Exception):
    pass


class ContractResult(Exception):
    """Carries a payload to write before exiting with status 2."""

    def __init__(self, payload):
        super().__init__(payload.get("error", "contract violation"))
        self.payload = payload


def _read_json(path):
    try:
        with open(path, encoding="utf-8") if path != "-" else _stdin() as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise Malformed(f"cannot read {path}: {exc}") from None


def _stdin():
    class _Wrap:
        def __enter__(self):
            return sys.stdin

        def __exit__(self, *a):
            return False

    return _Wrap()


def _write(path, text):
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _config(args):
    if getattr(args, "config", None) is None:
        return None
    return load_config(_read_json(args.config))


def _load_function(path, config):
    f = schwartz_from_dict(_read_json(path), config)
    if config is not None and (f.field, f.ring.spec) != (config[0], config[1]):
        raise Malformed("input function disagrees with the configuration file")
    return f


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_fourier(args):
    config = _config(args)
    f = _load_function(args.input, config)
    check_roots(f.field, f.ring.spec, f.m, f.k)
    return dumps(schwartz_to_dict(fourier(f, inverse=args.inverse)))


def cmd_involution_check(args):
    config = _config(args)
    f = _load_function(args.input, config)
    check_roots(f.field, f.ring.spec, f.m, f.k)
    F = fourier(f)
    back = fourier(F, inverse=True)
    twice = fourier(F)
    report = {
        "type": "involution-check",
        "involutive": back == f,
        "double_transform_is_negation": twice == f.negate_argument(),
        "window": [f.canonicalize().m, f.canonicalize().k],
        "transform_window": [F.canonicalize().m, F.canonicalize().k],
    }
    if not (report["involutive"] and report["double_transform_is_negation"]):
        report["error"] = "NotInvolutive"
        raise ContractResult(report)
    return dumps(report)


def cmd_convolve(args):
    config = _config(args)
    f = _load_function(args.input, config)
    g = _load_function(args.input2, config)
    return dumps(schwartz_to_dict(convolve(f, g)))


SWAN_HEADER = ["q", "n", "sl_sigma", "sl_V", "sw_V", "rank", "carayol"]


def _swan_row(q, n, sl):
    t = ramify.transfer(n, sl, q)
    sw_sigma = n * sl
    carayol = None
    if n == 2 and sw_sigma.denominator == 1 and sw_sigma >= 1:
        carayol = ramify.carayol_dim(q, int(sw_sigma))
    return [q, n, sl, t.sl_V, t.sw_V, t.ft_rank, carayol]


def _grid(args):
    if args.grid:
        data = _read_json(args.grid)
        qs = [int(x) for x in data["q"]]
        ns = [int(x) for x in data["n"]]
        if "sl" in data:
            return [(q, n, parse_rational(s)) for q in qs for n in ns for s in data["sl"]]
        per_n = int(data["sl_grid"]["per_n"])
        return [(q, n, Fraction(j, n)) for q in qs for n in ns for j in range(1, per_n * n + 1)]
    if args.q is None or args.n is None or args.sl is None:
        raise Malformed("swan needs --grid or all of --q, --n, --sl")
    return [(args.q, args.n, parse_rational(args.sl))]


def cmd_swan(args):
    rows = [_swan_row(q, n, sl) for q, n, sl in _grid(args)]
    return csv_text(SWAN_HEADER, rows)


def cmd_gos(args):
    if args.profile:
        sw = parse_rational(args.sw if args.sw is not None else 0)
        alpha, beta = {"lpsi": (0, 1), "ltilde": (sw, -sw)}[args.profile]
    else:
        if args.alpha is None or args.beta is None:
            raise Malformed("gos needs --alpha and --beta, or --profile")
        alpha, beta = parse_rational(args.alpha), parse_rational(args.beta)
    chi = ramify.gos_chi(alpha, beta)
    return dumps({"type": "gos", "alpha": fmt(Fraction(alpha)), "beta": fmt(Fraction(beta)), "chi": fmt(chi)})


def cmd_present(args):
    F = coherent_from_dict(_read_json(args.input))
    out = {"type": "presentations", "datum": F.to_dict()}
    failed = False
    for key, fn in (("nonneg", ffcalc.presentation_nonneg), ("positive", ffcalc.presentation_positive)):
        try:
            out[key] = fn(F).to_dict()
        except ContractViolation as exc:
            out[key] = exc.payload()
            failed = True
    if failed:
        out["error"] = "PresentationUnavailable"
        raise ContractResult(out)
    return dumps(out)


def cmd_solve_frob(args):
    a = twisted_from_dict(_read_json(args.input))
    cls = coker_class(a)
    if cls:
        raise ContractResult({"error": "NotSolvable", "coker_class": str(cls), "coker_terms": cls.to_list()})
    b = solve_F_minus_one(a)
    out = twisted_to_dict(b)
    out["verified"] = apply_F_minus_one(b) == a
    return dumps(out)


def cmd_dualize(args):
    B = bc_from_dict(_read_json(args.input))
    D = ffcalc.bc_dualize(B)
    out = bc_to_dict(D)
    out["rank_profile"] = list(D.rank_profile())
    return dumps(out)


def cmd_exttable(args):
    gens = [ffcalc.UNIT, ffcalc.SKYSCRAPER]
    if args.x or args.y:
        if not (args.x and args.y):
            raise Malformed("give both --x and --y")
        pairs = [(ffcalc.generator(args.x), ffcalc.generator(args.y))]
    else:
        pairs = [(x, y) for x in gens for y in gens]
    entries = []
    for x, y in pairs:
        e = ffcalc.ext_table(x, y)
        entries.append({"source": x, "target": y, "terms": e.to_list(), "text": str(e),
                        "serre_consistent": ffcalc.serre_consistent(x, y)})
    return dumps({"type": "ext-table", "entries": entries})


def cmd_polygon(args):
    F = coherent_from_dict(_read_json(args.input))
    poly = ffcalc.hn_polygon(F)
    return csv_text(["rank", "degree"], poly.to_rows())


# ---------------------------------------------------------------------------

def build_parser():
    ap = argparse.ArgumentParser(prog="bcfourier", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    def io(p, second=False):
        p.add_argument("--input", "-i", required=True, help="input JSON file ('-' for stdin)")
        if second:
            p.add_argument("--input2", required=True, help="second input JSON file")
        p.add_argument("--output", "-o", help="output path (default stdout)")
        p.add_argument("--config", help="JSON with keys p, f, characteristic, ell, n, M")

    p = sub.add_parser("fourier", help="Fourier transform of a Schwartz function")
    io(p)
    p.add_argument("--inverse", action="store_true", help="use psi^-1")
    p.set_defaults(fn=cmd_fourier)

    p = sub.add_parser("involution-check", help="check F^-1 F f = f and F F f = f(-x)")
    io(p)
    p.set_defaults(fn=cmd_involution_check)

    p = sub.add_parser("convolve", help="convolution of two Schwartz functions")
    io(p, second=True)
    p.set_defaults(fn=cmd_convolve)

    p = sub.add_parser("swan", help="Herbrand transfer / rank / Carayol table (CSV)")
    p.add_argument("--q", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--sl", help="slope of sigma, integer or p/q")
    p.add_argument("--grid", help="JSON grid {q: [...], n: [...], sl: [...] | sl_grid: {per_n}}")
    p.add_argument("--output", "-o")
    p.set_defaults(fn=cmd_swan)

    p = sub.add_parser("gos", help="Euler characteristic -alpha - beta")
    p.add_argument("--alpha")
    p.add_argument("--beta")
    p.add_argument("--profile", choices=["lpsi", "ltilde"])
    p.add_argument("--sw", help="Swan conductor for the ltilde profile")
    p.add_argument("--output", "-o")
    p.set_defaults(fn=cmd_gos)

    p = sub.add_parser("present", help="presentations of a coherent datum")
    p.add_argument("--input", "-i", required=True)
    p.add_argument("--output", "-o")
    p.set_defaults(fn=cmd_present)

    p = sub.add_parser("solve-frob", help="solve (F - 1) b = a")
    p.add_argument("--input", "-i", required=True)
    p.add_argument("--output", "-o")
    p.set_defaults(fn=cmd_solve_frob)

    p = sub.add_parser("dualize", help="Banach-Colmez duality on a BC datum")
    p.add_argument("--input", "-i", required=True)
    p.add_argument("--output", "-o")
    p.set_defaults(fn=cmd_dualize)

    p = sub.add_parser("exttable", help="Ext groups between E and O#")
    p.add_argument("--x")
    p.add_argument("--y")
    p.add_argument("--output", "-o")
    p.set_defaults(fn=cmd_exttable)

    p = sub.add_parser("polygon", help="HN polygon vertices (CSV)")
    p.add_argument("--input", "-i", required=True)
    p.add_argument("--output", "-o")
    p.set_defaults(fn=cmd_polygon)
    return ap


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_MALFORMED
    out_path = getattr(args, "output", None)
    try:
        text = args.fn(args)
    except ContractResult as res:
        _write(out_path, dumps(res.payload))
        return EXIT_CONTRACT
    except ContractViolation as exc:
        _write(out_path, dumps(exc.payload()))
        return EXIT_CONTRACT
    except (Malformed, KeyError, ValueError, TypeError, IndexError) as exc:
        msg = f"missing key {exc}" if isinstance(exc, KeyError) else str(exc)
        print(f"bcfourier: malformed input: {msg}", file=sys.stderr)
        return EXIT_MALFORMED
    _write(out_path, text)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
