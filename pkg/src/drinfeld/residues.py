"""Residue slopes along edges of the building, their pairing with mass-zero
vectors, and an independent valuation-sampling oracle.

For a pointed edge (a chain M_0 > M_1 > pM_0) the valuation of a linear form
l_a along the open edge tube is affine in the edge parameter with integer
slope 0 or 1.  The combinatorial rule computes that slope from the class of
the normalized covector in M_0/pM_0; the oracle measures it by evaluating
section valuations at two interior points over a ramified cubic extension
and never consults the combinatorial rule.
"""

from __future__ import annotations

import random

from .building import PointedSimplex
from .covers import member_tube, SymmetricSpacePoint
from .distributions import MassZeroVector
from .intlinalg import in_span_modp, inv_scaled
from .padic import FieldDesc, FieldElem, PrecisionError, linear_form
from .projpoints import ProjPoint

# Calibrated once on the ramified edge at p=2, d=1 and frozen: the residue of
# dlog of an exponent product equals +1 times the slope pairing of the
# underlying mass-zero vector.
GLOBAL_SIGN = 1


def _require_edge(sigma):
    if sigma.k != 1:
        raise ValueError("residue slopes are defined for edges (chains of 2)")


def _lift(x):
    if isinstance(x, ProjPoint):
        return x.lift_vector()
    return tuple(int(c) for c in x)


def slope(a, sigma):
    """Growth rate in {0,1} of v(<a,z>) along the pointed edge parameter.

    Combinatorial rule: normalize the covector to M_0 \\ pM_0 and return 1
    exactly when its class mod p lies in the image of M_1."""
    _require_edge(sigma)
    prim, _ = sigma.covector_coordinates(_lift(a))
    rref, piv = sigma.chain_mod_p()[1]
    p = sigma.p
    return 1 if in_span_modp(rref, piv, [c % p for c in prim], p) else 0


def lambda_edge(sigma, a, b):
    """Residue of dlog(l_b/l_a) along the pointed edge: slope(b) - slope(a)."""
    return slope(b, sigma) - slope(a, sigma)


def required_level(sigma):
    """Smallest level whose classes determine slopes on this edge.

    A covector lift with a unit coordinate keeps its normalized class mod p
    under perturbations of order det-exponent + 1."""
    return sigma.lattices[0].det_exponent + 1


def _oracle_desc(p, sigma, e_oracle):
    k0 = sigma.lattices[0].det_exponent
    f = max(sigma.type_vector())
    return FieldDesc(p=p, e=e_oracle, f=f, N=e_oracle * (8 + 3 * k0))


def _oracle_points(sigma, desc, rng):
    """Two interior tube samples at edge parameters 1/e and 2/e, built from
    the adapted frame with generic unramified-unit entries.

    Returns (raw coordinate list, projective point) per sample: absolute
    section valuations are only meaningful on the raw affine solve, because
    projective normalization shifts them by a parameter-dependent constant."""
    d1 = sigma.boundary_indices()[1]
    size = sigma.dim + 1
    pi = FieldElem.pi(desc)

    def unit(j):
        bump = FieldElem.from_coeffs(
            desc, [rng.randrange(desc.coeff_modulus) for _ in range(desc.e * desc.f)]
        )
        return FieldElem.omega_power(desc, j) * (FieldElem.one(desc) + pi * bump)

    frame = [list(f) for f in sigma.adapted_basis()]
    inv, det = inv_scaled(frame)
    det_elem = FieldElem.from_int(desc, det)
    samples = []
    for step in (1, 2):
        w = [unit(j) if j < d1 else FieldElem.pi_power(desc, step) * unit(j)
             for j in range(size)]
        coords = []
        for i in range(size):
            acc = FieldElem.zero(desc)
            for j in range(size):
                if inv[i][j]:
                    acc = acc + inv[i][j] * w[j]
            coords.append(acc / det_elem)
        samples.append((coords, SymmetricSpacePoint(coords)))
    return samples


def oracle_slope_table(sigma, covectors, e_oracle=3, rng=None,
                       check_membership=True):
    """Map covector -> integer slope, measured from section valuations at two
    sampled points; independent of the combinatorial rule."""
    _require_edge(sigma)
    if e_oracle < 3:
        raise ValueError("need at least two interior parameters: e_oracle >= 3")
    rng = rng if rng is not None else random.Random(2718)
    desc = _oracle_desc(sigma.p, sigma, e_oracle)
    (raw1, z1), (raw2, z2) = _oracle_points(sigma, desc, rng)
    if check_membership:
        for z in (z1, z2):
            if not member_tube(z, sigma, open_tube=True):
                raise PrecisionError("oracle sample point failed the tube test")
    out = {}
    for a in covectors:
        lift = _lift(a)
        dv = (
            linear_form(lift, raw2).valuation()
            - linear_form(lift, raw1).valuation()
        )
        scaled = dv * e_oracle
        if scaled.denominator != 1 or int(scaled) not in (0, 1):
            raise PrecisionError(
                f"sampled slope {scaled} is not a 0/1 integer; increase N"
            )
        out[a] = int(scaled)
    return out


def lambda_oracle(sigma, a, b, e_oracle=3, rng=None):
    """Ground-truth edge residue from valuation sampling: slope(b)-slope(a)."""
    table = oracle_slope_table(sigma, [a, b], e_oracle=e_oracle, rng=rng)
    return table[b] - table[a]


def pair_distribution(mu, sigma, require_local=True):
    """Pairing of a mass-zero vector with the edge: sum mu(x) slope(x).

    Well defined on hyperplane classes only when the level resolves the
    chain; with require_local the call refuses levels below required_level
    (callers pairing exact representatives may opt out)."""
    _require_edge(sigma)
    if not isinstance(mu, MassZeroVector):
        raise TypeError("expected a mass-zero vector")
    if require_local and mu.level < required_level(sigma):
        raise ValueError(
            f"level {mu.level} cannot resolve this edge; "
            f"need at least {required_level(sigma)}"
        )
    total = 0
    for point, coeff in mu.items():
        total += coeff * slope(point, sigma)
    return total


def edges_at_vertex(lattice):
    """The pointed edges leaving a vertex, one per neighbor class.

    Neighbor classes come back as primitive homothety representatives, so
    each is rescaled into the unique strict window between the vertex and
    its p-multiple before forming the chain."""
    base = lattice.homothety_rep()
    edges = []
    for nb in base.neighbors():
        mid = nb
        while not base.contains(mid):
            mid = mid.scaled(1)
        edges.append(PointedSimplex((base, mid)))
    return tuple(edges)


def check_kirchhoff(lattice, a, b):
    """Flow conservation at a tree vertex: the edge residues of (a, b) over
    all edges leaving the vertex sum to zero."""
    if lattice.dim != 2:
        raise ValueError("the flow condition is a tree (two-coordinate) check")
    return sum(lambda_edge(edge, a, b) for edge in edges_at_vertex(lattice)) == 0


class CochainTable:
    """Edge-residue values over a finite window of pointed edges and ordered
    class pairs; values are always in {-1, 0, 1} and antisymmetric."""

    def __init__(self, entries):
        self.entries = list(entries)
        for edge, pair, value in self.entries:
            if value not in (-1, 0, 1):
                raise ValueError("edge residue outside {-1,0,1}")

    @classmethod
    def build(cls, edges, classes):
        entries = []
        for edge in edges:
            slopes = {x: slope(x, edge) for x in classes}
            for a in classes:
                for b in classes:
                    if a == b:
                        continue
                    entries.append((edge, (a, b), slopes[b] - slopes[a]))
        return cls(entries)

    def value(self, edge, a, b):
        for e, pair, v in self.entries:
            if e == edge and pair == (a, b):
                return v
        raise KeyError("pair not tabulated")

    def records(self):
        for edge, (a, b), value in self.entries:
            yield {
                "edge": edge.to_json(),
                "pair": [list(a.rep), list(b.rep)],
                "value": value,
            }


def pairing_matrix(edges, level, p, d, basepoint=None):
    """Integer matrix of slope pairings: rows = pointed edges, columns = the
    dirac-pair basis of the mass-zero module at the level."""
    from .distributions import basis_mass_zero

    basis = basis_mass_zero(p, level, d, basepoint=basepoint)
    rows = []
    for edge in edges:
        rows.append([
            pair_distribution(mu, edge, require_local=False) for mu in basis
        ])
    return rows
