"""The simplicial building of homothety classes of Z_p-lattices.

Vertices are homothety classes of full-rank Z_p-lattices of covector rows
in Q_p^{d+1}.  A lattice is stored as a primitive integer Hermite basis
with a p-power determinant plus a scale exponent; saturation at
construction removes prime-to-p content, which makes the Hermite rows a
complete invariant of the Z_p-row-span.  Pointed simplices are literal
chains M_0 > M_1 > ... > M_k > p M_0 with M_0 primitive at scale 0.
"""

from __future__ import annotations

from dataclasses import dataclass

from .intlinalg import (
    complete_basis_modp,
    det_int,
    hnf_rows,
    identity,
    in_span_modp,
    inv_scaled,
    matmul,
    pval,
    rank_modp,
    rref_modp,
    subspaces_modp,
    vecmat,
)


@dataclass(frozen=True)
class Lattice:
    """p^scale times the Z_p-row-span of a primitive Hermite basis whose
    determinant is a power of p.  Build through from_rows."""

    p: int
    rows: tuple
    scale: int = 0

    @staticmethod
    def from_rows(p, rows, scale=0):
        h = hnf_rows(rows)
        n = len(rows[0])
        if len(h) != n:
            raise ValueError("rows do not span a full-rank lattice")
        det = det_int(h)
        k = pval(det, p) if det % p == 0 else 0
        if det != p**k:
            # saturate away prime-to-p index: the Z_p-span also contains p^k Z^n
            stacked = list(h) + [
                [p**k if i == j else 0 for j in range(n)] for i in range(n)
            ]
            h = hnf_rows(stacked)
        # primitive representative: factor the common p-power into the scale
        shift = min(pval(c, p) for row in h for c in row if c)
        if shift:
            h = tuple(tuple(c // p**shift for c in row) for row in h)
        return Lattice(p, tuple(tuple(row) for row in h), scale + shift)

    @staticmethod
    def standard(p, d):
        return Lattice(p, identity(d + 1))

    @property
    def dim(self):
        return len(self.rows)

    @property
    def det_exponent(self):
        return pval(det_int(self.rows), self.p)

    def scaled(self, k):
        return Lattice(self.p, self.rows, self.scale + k)

    def homothety_rep(self):
        return Lattice(self.p, self.rows, 0)

    def adj_data(self):
        """(adjugate-like N, det exponent k) with rows^{-1} = N / p^k."""
        n, det = inv_scaled(self.rows)
        k = pval(det, self.p)
        assert det == self.p**k
        return n, k

    def contains(self, other, strict=False):
        """Z_p-inclusion other <= self (with scales)."""
        if self.p != other.p:
            raise ValueError("mixed primes")
        n, k = self.adj_data()
        shift = other.scale - self.scale - k
        for row in matmul(other.rows, n):
            for c in row:
                if c and pval(c, self.p) + shift < 0:
                    return False
        if strict and self.index_exponent(other) == 0:
            return False
        return True

    def index_exponent(self, other):
        """log_p of the lattice index [self : other] for other <= self."""
        return (other.scale - self.scale) * self.dim + (
            other.det_exponent - self.det_exponent
        )

    def right_multiplied(self, m):
        """Row span transported by an integer matrix on the right."""
        return Lattice.from_rows(self.p, matmul(self.rows, m), self.scale)

    def transport(self, g):
        """Image under the group element g acting on covectors by a |-> a g^{-1}."""
        n, det = inv_scaled(g)
        if det % self.p == 0:
            raise ValueError("transport requires a determinant prime to p")
        return self.right_multiplied(n)

    def reduction_basis(self):
        """Rows reduced mod p: a spanning set of L/pL in ambient coordinates."""
        return tuple(tuple(c % self.p for c in row) for row in self.rows)

    def neighbors(self):
        """Homothety classes adjacent to this one: preimages of the proper
        nonzero subspaces of L/pL."""
        base = self.homothety_rep()
        p, n = self.p, self.dim
        out = []
        scaled = [[p * c for c in row] for row in base.rows]
        for k in range(1, n):
            for w_basis in subspaces_modp(n, k, p):
                lifted = [vecmat(w, base.rows) for w in w_basis]
                out.append(
                    Lattice.from_rows(p, scaled + lifted).homothety_rep()
                )
        return out

    def to_json(self):
        return {"hnf": [list(r) for r in self.rows], "scale": self.scale}


def lattice_from_covectors(p, covectors):
    """Smallest lattice containing the given integer covector rows
    (rows may be redundant; full rank required)."""
    return Lattice.from_rows(p, [list(c) for c in covectors])


@dataclass(frozen=True)
class PointedSimplex:
    """Pointed chain M_0 > M_1 > ... > M_k > p M_0, M_0 primitive at scale 0."""

    lattices: tuple

    def __post_init__(self):
        lats = self.lattices
        if not lats:
            raise ValueError("empty chain")
        m0 = lats[0]
        if m0.scale != 0:
            raise ValueError("chain must be pointed at a scale-0 lattice")
        prev = m0
        for lat in lats[1:]:
            if not prev.contains(lat, strict=True):
                raise ValueError("chain inclusions must be strict")
            prev = lat
        if not lats[-1].contains(m0.scaled(1), strict=True):
            raise ValueError("chain must stay strictly above p M_0")

    @property
    def p(self):
        return self.lattices[0].p

    @property
    def k(self):
        return len(self.lattices) - 1

    @property
    def dim(self):
        return self.lattices[0].dim - 1

    @staticmethod
    def vertex(lat):
        return PointedSimplex((lat.homothety_rep(),))

    @staticmethod
    def from_homothety_chain(classes):
        """Scale each class into the unique pointed position, if the classes
        do form a simplex."""
        base = classes[0].homothety_rep()
        chain = [base]
        bound = sum(c.det_exponent for c in classes) + 2
        prev = base
        for cls in classes[1:]:
            rep = cls.homothety_rep()
            fits = [
                rep.scaled(j)
                for j in range(-bound, bound + 1)
                if prev.contains(rep.scaled(j), strict=True)
                and rep.scaled(j).contains(base.scaled(1), strict=True)
            ]
            if len(fits) != 1:
                raise ValueError("classes do not form a pointed simplex")
            chain.append(fits[0])
            prev = chain[-1]
        return PointedSimplex(tuple(chain))

    def chain_mod_p(self):
        """Images of the chain in M_0/pM_0, as reduced-echelon bases in
        M_0-coordinates (the basis of M_0 gives the coordinates)."""
        m0 = self.lattices[0]
        n, k0 = m0.adj_data()
        p = self.p
        out = []
        for lat in self.lattices:
            num = matmul(lat.rows, n)
            exp = k0 - lat.scale
            assert exp >= 0
            denom = p**exp
            coords = [[c // denom for c in row] for row in num]
            rref, piv = rref_modp(coords, p)
            out.append((rref, piv))
        return out

    def type_vector(self):
        """(e_0, ..., e_k) with e_i the jumps of the mod-p flag dimensions."""
        n = self.dim + 1
        dims = [len(rref) for rref, _ in self.chain_mod_p()]  # descending
        ds = [n - dim for dim in dims] + [n]
        return tuple(ds[i + 1] - ds[i] for i in range(len(self.lattices)))

    def boundary_indices(self):
        """(d_0, ..., d_k): cumulative type offsets; block i of an adapted
        basis occupies indices [d_i, d_{i+1})."""
        t = self.type_vector()
        ds = [0]
        for e in t[:-1]:
            ds.append(ds[-1] + e)
        return tuple(ds)

    def adapted_basis(self):
        """Integer row vectors f_0..f_d forming a basis of M_0 such that
        {f_j : j >= d_i} spans the image of M_i in M_0/pM_0."""
        p = self.p
        n = self.dim + 1
        chain = self.chain_mod_p()
        blocks = []
        current = []
        for i in range(self.k, -1, -1):
            rref, _ = chain[i]
            added = complete_basis_modp(
                [list(r) for r in current], [list(r) for r in rref], p
            )
            blocks.append(added)
            current = [list(r) for r in current] + [list(r) for r in added]
        blocks.reverse()  # block i first
        m0 = self.lattices[0]
        out = []
        for block in blocks:
            for w in block:
                out.append(vecmat(w, m0.rows))
        return tuple(out)

    def covector_coordinates(self, a):
        """Express an integer covector in M_0: returns (x, m) with x the
        p-primitive coordinate vector and a in p^m M_0 \\ p^{m+1} M_0."""
        m0 = self.lattices[0]
        n, k0 = m0.adj_data()
        x = vecmat(a, n)
        if not any(x):
            raise ValueError("zero covector")
        v = min(pval(c, self.p) for c in x if c)
        prim = tuple(c // self.p**v for c in x)
        return prim, v - k0

    def rotate(self):
        """Move the point one step along the chain: [M_1, ..., M_k, p M_0]."""
        lats = list(self.lattices[1:]) + [self.lattices[0].scaled(1)]
        shift = lats[0].scale
        return PointedSimplex(tuple(lat.scaled(-shift) for lat in lats))

    def rotations(self):
        """All k+1 pointings of the same underlying simplex, starting here."""
        out = [self]
        cur = self
        for _ in range(self.k):
            cur = cur.rotate()
            out.append(cur)
        return tuple(out)

    def same_tube(self, other):
        """Whether two pointed chains present the same underlying simplex."""
        return other in self.rotations()

    def transport(self, g):
        lats = [lat.transport(g) for lat in self.lattices]
        shift = lats[0].scale
        return PointedSimplex(tuple(lat.scaled(-shift) for lat in lats))

    def right_multiplied(self, m):
        lats = [lat.right_multiplied(m) for lat in self.lattices]
        shift = lats[0].scale
        return PointedSimplex(tuple(lat.scaled(-shift) for lat in lats))

    def to_json(self):
        return {"chain": [lat.to_json() for lat in self.lattices]}


def standard_simplex(p, type_vector):
    """The pointed simplex whose chain is diagonal in the standard basis:
    M_i = <p e_0, ..., p e_{d_i - 1}, e_{d_i}, ..., e_d>."""
    n = sum(type_vector)
    ds = [0]
    for e in type_vector[:-1]:
        ds.append(ds[-1] + e)
    lats = []
    for d_i in ds:
        rows = [
            [(p if j < d_i else 1) if i == j else 0 for j in range(n)]
            for i in range(n)
        ]
        lats.append(Lattice(p, tuple(tuple(r) for r in rows)))
    return PointedSimplex(tuple(lats))


def conjugacy_witness(sigma):
    """Integer matrix F with standard_simplex(type).right_multiplied(F) == sigma:
    the adapted basis realizes the type-preserving change of frame."""
    return [list(f) for f in sigma.adapted_basis()]


class Ball:
    """Vertices within a graph radius of a center, with adjacency."""

    def __init__(self, center, radius):
        self.center = center.homothety_rep()
        self.radius = radius
        dist = {self.center: 0}
        order = [self.center]
        frontier = [self.center]
        for r in range(1, radius + 1):
            nxt = []
            for lat in frontier:
                for nb in lat.neighbors():
                    if nb not in dist:
                        dist[nb] = r
                        order.append(nb)
                        nxt.append(nb)
            frontier = nxt
        self.distance = dist
        self.vertices = order
        self.adjacency = {}
        vset = set(order)
        for lat in order:
            self.adjacency[lat] = [nb for nb in lat.neighbors() if nb in vset]

    def edges(self):
        """Unordered adjacent pairs inside the ball, deterministic order."""
        seen = set()
        out = []
        for lat in self.vertices:
            for nb in self.adjacency[lat]:
                key = frozenset((lat, nb))
                if key not in seen:
                    seen.add(key)
                    out.append((lat, nb))
        return out

    def pointed_edges(self):
        """Both orientations of every edge, as pointed simplices."""
        out = []
        for a, b in self.edges():
            out.append(PointedSimplex.from_homothety_chain([a, b]))
            out.append(PointedSimplex.from_homothety_chain([b, a]))
        return out

    def to_json(self):
        return [
            {
                "vertex_hnf": [list(r) for r in lat.rows],
                "distance": self.distance[lat],
                "neighbors": [
                    [list(r) for r in nb.rows] for nb in self.adjacency[lat]
                ],
            }
            for lat in self.vertices
        ]


def tree_ball_size(p, radius):
    """Vertex count of a radius-r ball in the (p+1)-regular tree."""
    if radius == 0:
        return 1
    return 1 + (p + 1) * (p**radius - 1) // (p - 1)
