"""Projective points over Z/p^n: the index sets for hyperplane sections.

A point of P^d(Z/p^n) is a unimodular row vector (some coordinate a unit)
up to scaling by units.  The canonical representative scales the first
unit coordinate to 1; coordinates before it are then divisible by p and
coordinates are reduced into [0, p^n).  Reduction modulo a smaller power
preserves canonical form, so level maps act coordinatewise.
"""

from __future__ import annotations

from dataclasses import dataclass

from .intlinalg import matinv_mod, matmul, vecmat


def is_unimodular(p, vec):
    return any(c % p for c in vec)


def canonicalize(p, n, vec):
    """Canonical representative of a unimodular vector mod p^n."""
    mod = p**n
    v = [c % mod for c in vec]
    for i, c in enumerate(v):
        if c % p:
            inv = pow(c, -1, mod)
            return tuple((inv * x) % mod for x in v)
    raise ValueError("vector is not unimodular")


def canonicalize_last(p, n, vec):
    """Variant normal form: the last unit coordinate is scaled to 1."""
    mod = p**n
    v = [c % mod for c in vec]
    for i in range(len(v) - 1, -1, -1):
        if v[i] % p:
            inv = pow(v[i], -1, mod)
            return tuple((inv * x) % mod for x in v)
    raise ValueError("vector is not unimodular")


@dataclass(frozen=True)
class ProjPoint:
    """Canonical point of P^d(Z/p^level)."""

    p: int
    level: int
    rep: tuple

    @staticmethod
    def make(p, level, vec):
        return ProjPoint(p, level, canonicalize(p, level, vec))

    @property
    def dim(self):
        return len(self.rep) - 1

    @property
    def pivot(self):
        for i, c in enumerate(self.rep):
            if c % self.p:
                return i
        raise AssertionError("canonical point with no unit coordinate")

    def reduce(self, m):
        """Image under P^d(Z/p^level) -> P^d(Z/p^m) for m <= level."""
        if not 1 <= m <= self.level:
            raise ValueError(f"cannot reduce level {self.level} to {m}")
        mod = self.p**m
        return ProjPoint(self.p, m, tuple(c % mod for c in self.rep))

    def lift_vector(self, system="lex"):
        """Integer lift in Z^{d+1} according to a representative system.

        "lex": the canonical representative with entries in [0, p^n).
        "revlex": last unit coordinate scaled to 1, entries lifted to the
        centered residues in (-p^n/2, p^n/2].
        """
        mod = self.p**self.level
        if system == "lex":
            return tuple(self.rep)
        if system == "revlex":
            raw = canonicalize_last(self.p, self.level, self.rep)
            return tuple(c - mod if 2 * c > mod else c for c in raw)
        raise ValueError(f"unknown representative system {system!r}")

    def to_json(self):
        return {"level": self.level, "rep": list(self.rep)}

    @staticmethod
    def from_json(p, obj):
        return ProjPoint.make(p, obj["level"], obj["rep"])


def point_count(p, n, d):
    """|P^d(Z/p^n)| in closed form."""
    return p ** ((n - 1) * d) * (p ** (d + 1) - 1) // (p - 1)


def enumerate_points(p, n, d):
    """All canonical points, ordered by pivot position then odometer on the
    free coordinates."""
    mod = p**n
    out = []
    for pivot in range(d + 1):
        prefix_choices = p ** (n - 1)  # multiples of p mod p^n
        suffix_choices = mod
        total = prefix_choices**pivot * suffix_choices ** (d - pivot)
        for idx in range(total):
            rep = [0] * (d + 1)
            t = idx
            for j in range(d, pivot, -1):
                rep[j] = t % suffix_choices
                t //= suffix_choices
            for j in range(pivot - 1, -1, -1):
                rep[j] = p * (t % prefix_choices)
                t //= prefix_choices
            rep[pivot] = 1
            out.append(ProjPoint(p, n, tuple(rep)))
    return out


def fiber(pt, n):
    """All level-n canonical points reducing to pt (n >= pt.level)."""
    if n < pt.level:
        raise ValueError("fiber level must be >= point level")
    p, m = pt.p, pt.level
    step = p**m
    count = p ** (n - m)
    pivot = pt.pivot
    d = pt.dim
    out = []
    free = [j for j in range(d + 1) if j != pivot]
    for idx in range(count ** len(free)):
        rep = list(pt.rep)
        t = idx
        for j in free:
            rep[j] = rep[j] + step * (t % count)
            t //= count
        out.append(ProjPoint(p, n, tuple(rep)))
    return out


def act(g, pt):
    """Left action moving hyperplane indices: a |-> canonical(a g^{-1}).

    With points z transported to g z, this pairing convention keeps the
    linear section attached to a stable: <act(g,a), g z> = <a, z>.
    """
    n = pt.level
    ginv = matinv_mod(g, pt.p, n)
    return ProjPoint.make(pt.p, n, vecmat(pt.rep, ginv))


def compose(g, h):
    return matmul(g, h)


def standard_basis_points(p, n, d):
    return [
        ProjPoint(p, n, tuple(1 if j == i else 0 for j in range(d + 1)))
        for i in range(d + 1)
    ]
