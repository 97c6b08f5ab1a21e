"""Pure numpy implementations of the hot kernels.

All kernels work on coefficient arrays whose last axis holds the
``phi`` coefficients of an element of (Z/mod)[x]/(Phi_P(x)), where
``P = p**M`` and ``phi = phi(P)``. Intermediate sums are formed in the
group ring (Z/mod)[x]/(x**P - 1) and folded back with :func:`fold`.
"""
import numpy as np

# bincount accumulates in float64; integers below 2**53 are exact.
_FLOAT_EXACT = 2**53
_CHUNK = 1 << 22


def fold(acc, P, p, mod):
    """Reduce ``acc[..., :P]`` (group-ring coefficients) modulo Phi_P."""
    acc = np.array(acc, dtype=np.int64, copy=True)
    if P == 1:
        return np.mod(acc[..., :1], mod)
    s = P // p
    phi = P - s
    top = np.mod(acc[..., phi:P], mod)
    for i in range(p - 1):
        acc[..., i * s:(i + 1) * s] -= top
    return np.mod(acc[..., :phi], mod)


def wrap(acc, P):
    """Fold a polynomial of any length into length P using x**P = 1."""
    L = acc.shape[-1]
    if L <= P:
        pad = np.zeros(acc.shape[:-1] + (P - L,), dtype=np.int64)
        return np.concatenate([acc, pad], axis=-1)
    out = np.zeros(acc.shape[:-1] + (P,), dtype=np.int64)
    for start in range(0, L, P):
        block = acc[..., start:start + P]
        out[..., :block.shape[-1]] += block
    return out


def dft_axis(src, expo, P, p, mod):
    """out[b, o] = sum_a zeta**expo[o, a] * src[b, a].

    ``src`` has shape (batch, n_in, phi), ``expo`` shape (n_out, n_in) with
    entries in [0, P).
    """
    src = np.ascontiguousarray(src, dtype=np.int64)
    expo = np.ascontiguousarray(expo, dtype=np.int64)
    batch, n_in, phi = src.shape
    n_out = expo.shape[0]
    if n_in * mod >= _FLOAT_EXACT:
        raise OverflowError("accumulator would exceed exact float range")
    out = np.empty((batch, n_out, phi), dtype=np.int64)
    j = np.arange(phi, dtype=np.int64)
    per_row = n_in * phi
    rows = max(1, _CHUNK // max(1, per_row * batch))
    for o0 in range(0, n_out, rows):
        o1 = min(n_out, o0 + rows)
        nrow = o1 - o0
        # target slot of src[b, a, j] inside the (nrow, P) accumulator
        slot = (expo[o0:o1, :, None] + j[None, None, :]) % P
        slot += (np.arange(nrow, dtype=np.int64) * P)[:, None, None]
        slot = slot.ravel()
        for b in range(batch):
            w = np.broadcast_to(src[b][None, :, :], (nrow, n_in, phi)).ravel()
            acc = np.bincount(slot, weights=w, minlength=nrow * P)
            acc = acc.astype(np.int64).reshape(nrow, P)
            out[b, o0:o1] = fold(acc, P, p, mod)
    return out


def lambda_mul(a, b, P, p, mod):
    """Row-wise product of two (n, phi) coefficient arrays."""
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    n, phi = a.shape
    acc = np.zeros((n, 2 * phi - 1), dtype=np.int64)
    for i in range(phi):
        acc[:, i:i + phi] += (a[:, i:i + 1] * b) % mod
        acc[:, i:i + phi] %= mod
    return fold(wrap(acc, P), P, p, mod)


def group_convolve(f, g, axis_sub, d, P, p, mod):
    """out[x] = sum_y f[y] * g[x - y] over a product of d cyclic windows.

    ``f`` and ``g`` are flattened (Q**d, phi) tables in C order and
    ``axis_sub[u, v]`` is the index of u - v in one window of size Q.
    """
    f = np.asarray(f, dtype=np.int64)
    g = np.asarray(g, dtype=np.int64)
    axis_sub = np.asarray(axis_sub, dtype=np.int64)
    Q = axis_sub.shape[0]
    n, phi = f.shape
    multi = np.indices((Q,) * d).reshape(d, -1)
    strides = Q ** np.arange(d - 1, -1, -1, dtype=np.int64)
    # y-chunk size keeping sum of chunk products of residues below 2**63
    ychunk = max(1, (2**62) // max(1, mod * mod))
    out_acc = np.zeros((n, 2 * phi - 1), dtype=np.int64)
    xrows = max(1, _CHUNK // max(1, n * phi))
    for x0 in range(0, n, xrows):
        x1 = min(n, x0 + xrows)
        diff = np.zeros((x1 - x0, n), dtype=np.int64)
        for ax in range(d):
            diff += axis_sub[multi[ax, x0:x1][:, None], multi[ax][None, :]] * strides[ax]
        G = g[diff]  # (rows, n, phi)
        for i in range(phi):
            fi = f[:, i]
            nz = np.nonzero(fi)[0]
            if nz.size == 0:
                continue
            part = np.zeros((x1 - x0, phi), dtype=np.int64)
            for y0 in range(0, nz.size, ychunk):
                sel = nz[y0:y0 + ychunk]
                part += np.einsum("y,xyj->xj", fi[sel], G[:, sel, :]) % mod
                part %= mod
            out_acc[x0:x1, i:i + phi] += part
            out_acc[x0:x1, i:i + phi] %= mod
    return fold(wrap(out_acc, P), P, p, mod)
