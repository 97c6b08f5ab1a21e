"""Slow point-by-point evaluators used as an independent check.

Nothing here touches the vectorised kernels or the precomputed character
tables: every value is a plain double loop over WindowElement points using
:func:`pair`, :func:`char_eval` and LambdaElement arithmetic.
"""
from itertools import product

from .arith import LambdaElement, WindowElement, char_eval, pair
from .schwartz import SchwartzFunction


def _points(field, m, k):
    q = field.q
    return [WindowElement.from_index(field, m, k, i) for i in range(q ** (m + k))]


def _value(f, idx):
    return LambdaElement(f.ring, tuple(int(c) for c in f.table[idx]))


def naive_fourier(f: SchwartzFunction, inverse: bool = False) -> SchwartzFunction:
    field, ring, d = f.field, f.ring, f.d
    xs = _points(field, f.m, f.k)
    ys = _points(field, f.k, f.m)
    n = len(xs)
    vol = ring.q_power(field.q, -f.k * d)
    values = {idx: _value(f, idx) for idx in product(range(n), repeat=d)}
    chars = {}
    for b in range(n):
        for a in range(n):
            z = char_eval(pair(ys[b], xs[a]), ring)
            if inverse:
                z = char_eval(-pair(ys[b], xs[a]), ring)
            chars[b, a] = z
    out = {}
    for yi in product(range(n), repeat=d):
        total = ring.zero()
        for xi, v in values.items():
            if v.is_zero():
                continue
            w = v
            for b, a in zip(yi, xi):
                w = w * chars[b, a]
            total = total + w
        out[yi] = total * vol

    def lookup(point):
        return out[tuple(p.index() for p in point)]

    return SchwartzFunction.from_callable(field, ring, d, f.k, f.m, lookup)


def naive_convolve(f: SchwartzFunction, g: SchwartzFunction) -> SchwartzFunction:
    m, k = max(f.m, g.m), max(f.k, g.k)
    field, ring, d = f.field, f.ring, f.d
    pts = _points(field, m, k)
    vol = ring.q_power(field.q, -k * d)

    def value(point):
        total = ring.zero()
        for y in product(pts, repeat=d):
            fy = f.value_at(y)
            if fy.is_zero():
                continue
            total = total + fy * g.value_at(tuple(a - b for a, b in zip(point, y)))
        return total * vol

    return SchwartzFunction.from_callable(field, ring, d, m, k, value).canonicalize()


def naive_integrate(f: SchwartzFunction) -> LambdaElement:
    total = f.ring.zero()
    n = f.points_per_axis
    for idx in product(range(n), repeat=f.d):
        total = total + _value(f, idx)
    return total * f.ring.q_power(f.field.q, -f.k * f.d)
