# Conway polynomials, coefficients listed from the constant term up.
# Pairs (p, f) missing from the table fall back to the lexicographically
# first monic irreducible polynomial of degree f over F_p.
from functools import lru_cache
from itertools import product

CONWAY = {
    (2, 1): (1, 1),
    (2, 2): (1, 1, 1),
    (2, 3): (1, 1, 0, 1),
    (2, 4): (1, 1, 0, 0, 1),
    (2, 5): (1, 0, 1, 0, 0, 1),
    (2, 6): (1, 1, 0, 1, 1, 0, 1),
    (3, 1): (1, 1),
    (3, 2): (2, 2, 1),
    (3, 3): (1, 2, 0, 1),
    (3, 4): (2, 0, 0, 2, 1),
    (3, 5): (1, 2, 0, 0, 0, 1),
    (5, 1): (3, 1),
    (5, 2): (2, 4, 1),
    (5, 3): (3, 3, 0, 1),
    (5, 4): (2, 4, 4, 0, 1),
    (7, 1): (4, 1),
    (7, 2): (3, 6, 1),
    (7, 3): (4, 0, 6, 1),
    (11, 1): (9, 1),
    (11, 2): (2, 7, 1),
    (13, 1): (11, 1),
    (13, 2): (2, 12, 1),
}


def _irreducible(poly, p):
    """True when ``poly`` (monic, low to high) is irreducible over F_p."""
    f = len(poly) - 1
    if f == 1:
        return True
    # Trial division by every monic polynomial of degree <= f // 2.
    for deg in range(1, f // 2 + 1):
        for tail in product(range(p), repeat=deg):
            divisor = list(tail) + [1]
            rem = list(poly)
            for shift in range(len(rem) - len(divisor), -1, -1):
                c = rem[shift + deg] % p
                if c:
                    for i, dc in enumerate(divisor):
                        rem[shift + i] = (rem[shift + i] - c * dc) % p
            if not any(x % p for x in rem[:deg]):
                return False
    return True


def is_irreducible_mod_p(poly, p):
    return _irreducible(tuple(poly), p)


@lru_cache(maxsize=None)
def conway_polynomial(p, f):
    if (p, f) in CONWAY:
        return CONWAY[(p, f)]
    for tail in product(range(p), repeat=f):
        poly = tuple(reversed(tail)) + (1,)
        if poly[0] % p and is_irreducible_mod_p(poly, p):
            return poly
    raise ValueError(f"no irreducible polynomial of degree {f} over F_{p}")
