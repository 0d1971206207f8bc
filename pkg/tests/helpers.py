"""Shared randomized constructors for tests."""

from drinfeld.building import standard_simplex
from drinfeld.intlinalg import det_int


def random_gl_integer(size, rng, p=None, bound=4):
    """Random integer matrix with nonzero determinant; if p is given the
    determinant is additionally prime to p."""
    while True:
        g = [[rng.randint(-bound, bound) for _ in range(size)] for _ in range(size)]
        det = det_int(g)
        if det and (p is None or det % p):
            return g


def random_unimodular_integer(size, rng, steps=10):
    """Product of elementary integer matrices (determinant +-1)."""
    m = [[1 if i == j else 0 for j in range(size)] for i in range(size)]
    for _ in range(steps if size > 1 else 0):
        i, j = rng.sample(range(size), 2)
        c = rng.randint(-2, 2)
        for k in range(size):
            m[i][k] += c * m[j][k]
        if rng.random() < 0.25:
            m[i], m[j] = m[j], m[i]
            for k in range(size):
                m[i][k] = -m[i][k]
    return m


def random_composition(total, rng):
    """Random ordered composition of `total` into positive parts."""
    if total == 1:
        return (1,)
    cuts = sorted(rng.sample(range(1, total), rng.randint(0, total - 1)))
    parts = []
    prev = 0
    for c in cuts + [total]:
        parts.append(c - prev)
        prev = c
    return tuple(parts)


def random_pointed_simplex(p, d, rng, type_vector=None, bound=None):
    """Random pointed simplex: a standard chain moved by a random integer
    frame (saturation handles any nonzero determinant)."""
    if type_vector is None:
        type_vector = random_composition(d + 1, rng)
    if bound is None:
        bound = p * p
    std = standard_simplex(p, type_vector)
    while True:
        f = [
            [rng.randint(-bound, bound) for _ in range(d + 1)] for _ in range(d + 1)
        ]
        if det_int(f):
            return std.right_multiplied(f)
