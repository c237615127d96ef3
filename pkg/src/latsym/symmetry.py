"""Graph automorphism groups, vertex orbits and Burnside counting.

Groups are held fully enumerated: at the scales of interest (orders up to
a few hundred) an explicit element list makes orbit machinery, Burnside
sums and minimal-image searches trivial.  The search itself is a
backtracking scan over a BFS vertex order with bitmask pruning; it visits
every adjacency-preserving permutation, so completeness of the returned
group is certified by exhaustion.
"""

from __future__ import annotations

from dataclasses import dataclass

from .lattice import Lattice, LatticeError

__all__ = [
    "Perm",
    "PermGroup",
    "GroupCapExceeded",
    "automorphisms",
    "vertex_orbits",
    "is_transitive",
    "burnside_count",
    "square_group_order",
    "translation_group",
]

DEFAULT_GROUP_CAP = 10_000_000


class GroupCapExceeded(RuntimeError):
    """Automorphism group larger than the configured enumeration cap."""


@dataclass(frozen=True, order=True)
class Perm:
    """Permutation of 0..n-1 given by its image tuple."""

    images: tuple[int, ...]

    def __post_init__(self):
        if sorted(self.images) != list(range(len(self.images))):
            raise ValueError("images is not a bijection on 0..n-1")

    @staticmethod
    def identity(n: int) -> "Perm":
        return Perm(tuple(range(n)))

    @property
    def degree(self) -> int:
        return len(self.images)

    def __call__(self, v: int) -> int:
        return self.images[v]

    def __mul__(self, other: "Perm") -> "Perm":
        """(self * other)(x) = self(other(x))."""
        o = other.images
        s = self.images
        return Perm(tuple(s[o[x]] for x in range(len(s))))

    def inverse(self) -> "Perm":
        inv = [0] * len(self.images)
        for i, j in enumerate(self.images):
            inv[j] = i
        return Perm(tuple(inv))

    def is_identity(self) -> bool:
        return all(i == j for i, j in enumerate(self.images))

    def cycles(self, include_fixed: bool = False) -> list[tuple[int, ...]]:
        seen = [False] * len(self.images)
        out = []
        for i in range(len(self.images)):
            if seen[i]:
                continue
            cyc = [i]
            seen[i] = True
            j = self.images[i]
            while j != i:
                seen[j] = True
                cyc.append(j)
                j = self.images[j]
            if len(cyc) > 1 or include_fixed:
                out.append(tuple(cyc))
        return out

    def n_cycles(self) -> int:
        """Number of cycles including fixed points."""
        return len(self.cycles(include_fixed=True))

    def cycle_string(self) -> str:
        cycs = self.cycles()
        if not cycs:
            return "()"
        return "".join("(" + " ".join(map(str, c)) + ")" for c in cycs)


class PermGroup:
    """Fully enumerated permutation group on 0..n-1.

    `elements` is sorted lexicographically by image tuple, which makes every
    downstream result (orbit numbering, canonical forms, shift elements)
    reproducible.
    """

    def __init__(self, degree: int, elements, generators=None):
        self.degree = degree
        self.elements = tuple(sorted(set(elements)))
        if not self.elements:
            raise ValueError("a group needs at least the identity")
        if generators is None:
            generators = _extract_generators(self.elements, degree)
        self.generators = tuple(generators)

    @property
    def order(self) -> int:
        return len(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, p: Perm) -> bool:
        return p in set(self.elements)

    def __eq__(self, other) -> bool:
        return (isinstance(other, PermGroup)
                and self.degree == other.degree
                and self.elements == other.elements)

    def __hash__(self):
        return hash((self.degree, self.elements))

    def __repr__(self):
        return f"PermGroup(degree={self.degree}, order={self.order})"

    @staticmethod
    def trivial(n: int) -> "PermGroup":
        e = Perm.identity(n)
        return PermGroup(n, (e,), generators=())

    @staticmethod
    def from_generators(n: int, generators, cap: int = DEFAULT_GROUP_CAP) -> "PermGroup":
        gens = [g if isinstance(g, Perm) else Perm(tuple(g)) for g in generators]
        elements = _close(gens, n, cap)
        return PermGroup(n, elements, generators=tuple(gens))

    def verify_closure(self) -> None:
        """Assert group axioms on the element list (test/debug aid)."""
        els = set(self.elements)
        assert Perm.identity(self.degree) in els
        for g in self.elements:
            assert g.inverse() in els, f"missing inverse of {g}"
        for g in self.elements:
            for h in self.elements:
                assert g * h in els, f"not closed under {g} * {h}"


def _close(gens, n, cap):
    """Product closure of a generator list (plus identity)."""
    els = {Perm.identity(n)}
    frontier = [g for g in gens if g not in els]
    els.update(frontier)
    while frontier:
        new = []
        for g in gens:
            for h in frontier:
                p = g * h
                if p not in els:
                    els.add(p)
                    new.append(p)
                    if len(els) > cap:
                        raise GroupCapExceeded(
                            f"group closure exceeds cap {cap}")
        frontier = new
    return els


def _extract_generators(elements, n):
    """Greedy small generating set; size never exceeds log2(order)."""
    known = {Perm.identity(n)}
    gens = []
    for e in elements:
        if e not in known:
            gens.append(e)
            known = _close(gens, n, cap=len(elements))
            if len(known) == len(elements):
                break
    return tuple(gens)


# ---------------------------------------------------------------------------
# automorphism search


def automorphisms(lat: Lattice, cap: int = DEFAULT_GROUP_CAP) -> PermGroup:
    """All adjacency-preserving permutations of a lattice.

    Backtracking over a BFS vertex order: a candidate image w for the next
    vertex is feasible iff its adjacency bits against the already-used
    images equal the images of the already-mapped neighbors.  For a simple
    k-regular graph this single mask equation enforces both edge and
    non-edge preservation.
    """
    n = lat.n
    bits = lat.neighbor_masks()

    # BFS forest order; for connected lattices a single tree
    order = []
    seen = [False] * n
    for root in range(n):
        if seen[root]:
            continue
        seen[root] = True
        queue = [root]
        qi = 0
        while qi < len(queue):
            v = queue[qi]
            qi += 1
            for w in lat.adjacency[v]:
                if not seen[w]:
                    seen[w] = True
                    queue.append(w)
        order.extend(queue)

    pos_of = {v: d for d, v in enumerate(order)}
    earlier = []
    parent = []
    for d, v in enumerate(order):
        e = [pos_of[w] for w in lat.adjacency[v] if pos_of[w] < d]
        earlier.append(e)
        parent.append(e[0] if e else -1)

    adjacency = lat.adjacency
    found: list[tuple[int, ...]] = []
    img = [0] * n

    def descend(d, used):
        if d == n:
            perm = [0] * n
            for dd in range(n):
                perm[order[dd]] = img[dd]
            found.append(tuple(perm))
            if len(found) > cap:
                raise GroupCapExceeded(
                    f"automorphism group of {lat.name} exceeds cap {cap}")
            return
        req = 0
        for e in earlier[d]:
            req |= 1 << img[e]
        candidates = adjacency[img[parent[d]]] if parent[d] >= 0 else range(n)
        for w in candidates:
            b = 1 << w
            if used & b:
                continue
            if bits[w] & used == req:
                img[d] = w
                descend(d + 1, used | b)

    descend(0, 0)
    return PermGroup(n, (Perm(p) for p in found))


# ---------------------------------------------------------------------------
# orbits and counting


def vertex_orbits(group: PermGroup) -> list[tuple[int, ...]]:
    """Partition of 0..n-1 into group orbits, sorted by smallest member."""
    n = group.degree
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for g in group.generators or group.elements:
        for i in range(n):
            a, b = find(i), find(g.images[i])
            if a != b:
                parent[a] = b
    buckets: dict[int, list[int]] = {}
    for i in range(n):
        buckets.setdefault(find(i), []).append(i)
    return sorted((tuple(sorted(v)) for v in buckets.values()), key=lambda t: t[0])


def is_transitive(group: PermGroup) -> bool:
    return len(vertex_orbits(group)) == 1


def burnside_count(group: PermGroup, q: int) -> int:
    """Exact number of orbits of q-colorings: average of q^cycles(g)."""
    if q < 1:
        raise ValueError("q must be >= 1")
    total = sum(q ** g.n_cycles() for g in group.elements)
    assert total % group.order == 0
    return total // group.order


def square_group_order(N: int) -> int:
    """Expected |Aut| of the N x N torus: 8 N^2, except 384 at N = 4."""
    if N < 3:
        raise ValueError("N must be >= 3")
    return 384 if N == 4 else 8 * N * N


def translation_group(lat: Lattice) -> PermGroup:
    """Pure translation subgroup of a square torus lattice."""
    if lat.family is None or lat.family[0] != "square":
        raise LatticeError("translation_group needs a square-family lattice")
    _, N, _, closure = lat.family
    if closure != "torus":
        raise LatticeError("translations need the torus closure")

    def shift(a, b):
        return Perm(tuple(((y + b) % N) * N + (x + a) % N
                          for y in range(N) for x in range(N)))

    elements = [shift(a, b) for a in range(N) for b in range(N)]
    return PermGroup(lat.n, elements, generators=(shift(1, 0), shift(0, 1)))


def permutation_dump(group: PermGroup, style: str = "cycles") -> str:
    """One permutation per line, cycle notation or image-list CSV."""
    if style == "cycles":
        return "\n".join(g.cycle_string() for g in group.elements) + "\n"
    if style == "images":
        return "\n".join(",".join(map(str, g.images)) for g in group.elements) + "\n"
    raise ValueError(f"unknown dump style {style!r}")
