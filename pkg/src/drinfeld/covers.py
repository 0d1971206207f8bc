"""Points of the p-adic symmetric space, their reduction to the building,
membership in the level covers, and tube coordinates.

A point is a unimodular homogeneous coordinate column over the working
field, normalized so the minimum coordinate valuation is 0 and the first
coordinate attaining it is exactly 1.  The reduction map sends a point to
a pointed simplex with barycentric weights: for each radius c in [0,1) the
covectors a with v(<a,z>) >= c span a lattice, the distinct lattices form
the chain, and the weight of a chain vertex is the length of the radius
interval on which it is constant.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .building import Lattice, PointedSimplex
from .intlinalg import inv_scaled, in_span_modp, rref_modp, matmul, pval
from .padic import FieldElem, PrecisionError, linear_form, normalize_unimodular
from .projpoints import ProjPoint, enumerate_points

MAX_CERTIFY_LEVEL = 6


class SymmetricSpacePoint:
    """Homogeneous coordinates avoiding all Q_p-rational hyperplanes."""

    def __init__(self, coords):
        coords = tuple(coords)
        if not coords:
            raise ValueError("empty coordinates")
        self.desc = coords[0].desc
        self.coords = normalize_unimodular(coords)

    @property
    def dim(self):
        return len(self.coords) - 1

    def section_valuation(self, a):
        """v(<a, z>) for an integer covector or projective point a."""
        if isinstance(a, ProjPoint):
            a = a.lift_vector()
        value = linear_form(a, self.coords)
        if value.exact_zero:
            raise ValueError("point lies on a rational hyperplane")
        return value.valuation()

    def section(self, a):
        if isinstance(a, ProjPoint):
            a = a.lift_vector()
        return linear_form(a, self.coords)

    def apply_matrix(self, g):
        """Move the point by an integer matrix acting on columns."""
        new = [linear_form(row, self.coords) for row in g]
        return SymmetricSpacePoint(new)

    def to_json(self):
        return {
            "field": self.desc.to_json(),
            "coords": [c.to_json() for c in self.coords],
        }


@dataclass(frozen=True)
class BuildingPoint:
    """Reduction of a point: pointed simplex, barycentric weights aligned
    with the chain, and the level whose sections certified it."""

    simplex: PointedSimplex
    weights: tuple
    certified_level: int

    def distinguished_vertex(self):
        return self.simplex.lattices[0]

    def to_json(self):
        return {
            "simplex": self.simplex.to_json(),
            "weights": [str(w) for w in self.weights],
            "certified_level": self.certified_level,
        }


def t_profile(z, level):
    """Section valuations over all canonical level points."""
    p = z.desc.p
    return {
        a: z.section_valuation(a) for a in enumerate_points(p, level, z.dim)
    }


def member_open_cover(z, n, profile=None):
    """Whether every level-n section valuation spread stays below n."""
    profile = profile if profile is not None else t_profile(z, n)
    vals = profile.values()
    return max(vals) - min(vals) < n


def member_closed_cover(z, n):
    """Closed variant: spread at most n, certified by level n+1 sections."""
    profile = t_profile(z, n + 1)
    vals = profile.values()
    return max(vals) - min(vals) <= n


def reduce_to_building(z, level=None, self_check=True):
    """The reduction map at a certified level.

    With level=None the smallest certifying level up to MAX_CERTIFY_LEVEL
    is chosen.  Raises ValueError when the requested level cannot certify
    the point (valuation spread too large)."""
    if level is not None:
        levels = [level]
    else:
        levels = range(1, MAX_CERTIFY_LEVEL + 1)
    profile = None
    used = None
    for n in levels:
        profile = t_profile(z, n)
        if max(profile.values()) < n:  # min is 0 after normalization
            used = n
            break
    if used is None:
        raise ValueError(
            "level cannot certify the reduction; the point sits too deep"
        )
    p = z.desc.p
    candidates = sorted({v - v.__floor__() for v in profile.values()})
    lattices = []
    for c in candidates:
        rows = []
        exps = []
        for a, t in profile.items():
            m = (c - t).__ceil__()
            exps.append((a, m))
        shift = -min(m for _, m in exps)
        if shift < 0:
            shift = 0
        for a, m in exps:
            scale = p ** (m + shift)
            rows.append([scale * x for x in a.lift_vector()])
        lattices.append(Lattice.from_rows(p, rows, scale=-shift))
    # normalize the pointing so the radius-0 lattice sits at scale 0
    base_shift = lattices[0].scale
    chain = tuple(lat.scaled(-base_shift) for lat in lattices)
    simplex = PointedSimplex(chain)
    bounds = list(candidates) + [Fraction(1)]
    weights = tuple(bounds[i + 1] - bounds[i] for i in range(len(candidates)))
    result = BuildingPoint(simplex, weights, used)
    if self_check and not member_tube(z, simplex, open_tube=True):
        raise AssertionError("reduction output fails its own tube test")
    return result


def _chain_with_wrap(sigma):
    lats = list(sigma.lattices)
    lats.append(sigma.lattices[0].scaled(1))
    return lats


def tube_test_covectors(sigma):
    """For each chain index i, integer lifts of the classes of M_i/pM_i
    lying outside the image of M_{i+1}, one per projective class."""
    p = sigma.p
    chain = _chain_with_wrap(sigma)
    out = []
    for i in range(len(sigma.lattices)):
        mi, mnext = chain[i], chain[i + 1]
        n_adj, k_i = mi.adj_data()
        num = matmul(mnext.rows, n_adj)
        exp = k_i + mi.scale - mnext.scale
        if exp >= 0:
            den = p**exp
            coords = [[c // den for c in row] for row in num]
        else:
            mul = p**-exp
            coords = [[c * mul for c in row] for row in num]
        sub, piv = rref_modp(coords, p)
        size = mi.dim
        lifts = []
        seen = set()
        for idx in range(1, p**size):
            vec = []
            t = idx
            for _ in range(size):
                vec.append(t % p)
                t //= p
            # projective normalization: first nonzero entry scaled to 1
            lead = next(c for c in vec if c)
            inv = pow(lead, -1, p)
            canon = tuple((inv * c) % p for c in vec)
            if canon in seen:
                continue
            seen.add(canon)
            if in_span_modp(sub, piv, list(canon), p):
                continue
            row = [0] * size
            for j, c in enumerate(canon):
                if c:
                    for jj in range(size):
                        row[jj] += c * mi.rows[j][jj]
            scale = p**mi.scale
            lifts.append(tuple(scale * c for c in row))
        out.append(lifts)
    return out


def member_tube(z, sigma, open_tube=True):
    """Tube membership: within each chain layer all test classes share one
    section valuation, and the layer valuations step up through a single
    unit of the point's scale."""
    values = []
    for lifts in tube_test_covectors(sigma):
        vals = {z.section_valuation(a) for a in lifts}
        if len(vals) != 1:
            return False
        values.append(vals.pop())
    for lo, hi in zip(values, values[1:]):
        if not (lo < hi if open_tube else lo <= hi):
            return False
    top, bottom = values[-1], values[0] + 1
    return top < bottom if open_tube else top <= bottom


def tube_coordinates(z, sigma):
    """Coordinates (X_0, ..., X_d) of a point on the tube of sigma.

    In an adapted frame f with section values w_j = <f_j, z>: inside a
    block each coordinate is the ratio to the block leader, each block
    leader is the ratio to the previous leader, and X_0 = p w_{lead 0} /
    w_{lead k}, so the leader coordinates multiply exactly to p."""
    basis = sigma.adapted_basis()
    ds = list(sigma.boundary_indices())
    w = [z.section(f) for f in basis]
    k = sigma.k
    coords = [None] * len(basis)
    p_elem = FieldElem.from_int(z.desc, sigma.p)
    coords[0] = p_elem * w[ds[0]] / w[ds[k]]
    for i in range(1, k + 1):
        coords[ds[i]] = w[ds[i]] / w[ds[i - 1]]
    bounds = ds + [len(basis)]
    for i in range(k + 1):
        for j in range(bounds[i] + 1, bounds[i + 1]):
            coords[j] = w[j] / w[ds[i]]
    return tuple(coords)


def point_in_tube(desc, sigma, rng, spread=False):
    """Random point in the open tube of sigma, built from the inverse of
    the tube parametrization.

    Block leaders get valuations 1/e (consecutive radii); residues inside a
    block walk through powers of omega, so the field needs e > k and
    f >= max block size.  With spread=True the leader gaps are randomized."""
    k = sigma.k
    ds = list(sigma.boundary_indices()) + [sigma.dim + 1]
    blocks = [ds[i + 1] - ds[i] for i in range(k + 1)]
    if desc.e < k + 1:
        raise ValueError(f"need ramification > {k} for a length-{k} chain")
    if desc.f < max(blocks):
        raise ValueError(f"need residue degree >= {max(blocks)}")
    pi = FieldElem.pi(desc)
    gaps = [1] * k
    if spread and k:
        budget = desc.e - 1 - k
        for _ in range(budget):
            gaps[rng.randrange(k)] += 1

    def random_integral():
        return FieldElem.from_coeffs(
            desc, [rng.randrange(desc.coeff_modulus) for _ in range(desc.e * desc.f)]
        )

    def random_one_unit():
        return FieldElem.one(desc) + pi * random_integral()

    w = [None] * (sigma.dim + 1)
    leader = FieldElem.one(desc)
    for i in range(k + 1):
        if i:
            step = FieldElem.pi_power(desc, gaps[i - 1]) * random_one_unit()
            leader = leader * step
        w[ds[i]] = leader
        for off, j in enumerate(range(ds[i] + 1, ds[i + 1])):
            x = FieldElem.omega_power(desc, off + 1) * random_one_unit()
            w[j] = leader * x
    basis = sigma.adapted_basis()
    n, det = inv_scaled([list(f) for f in basis])
    det_elem = FieldElem.from_int(desc, det)
    coords = []
    for i in range(sigma.dim + 1):
        acc = FieldElem.zero(desc)
        for j in range(sigma.dim + 1):
            if n[i][j]:
                acc = acc + n[i][j] * w[j]
        coords.append(acc / det_elem)
    # Keep the pointing: scale by a root-of-p power so the minimum coordinate
    # valuation is an integer; normalization then shifts all section
    # valuations by an integer and the radius-0 layer stays at M_0.
    vmin = min(c.valuation() for c in coords)
    frac = (-vmin * desc.e) % desc.e
    if frac:
        adjust = FieldElem.pi_power(desc, int(frac))
        coords = [c * adjust for c in coords]
    return SymmetricSpacePoint(coords)
