"""k-regular lattice graphs: named families, validation and text IO.

A lattice here is a plain undirected k-regular graph on vertices 0..n-1,
no loops, no multiple edges.  Embeddings (sphere, torus, Klein bottle)
are construction conventions only; all downstream machinery sees nothing
but the adjacency lists.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

__all__ = [
    "Lattice",
    "LatticeError",
    "ParseError",
    "make_named",
    "from_spec",
    "parse",
    "serialize",
    "NAMED_FAMILIES",
]


class LatticeError(ValueError):
    """Invalid lattice structure or construction parameters."""


class ParseError(LatticeError):
    """Malformed adjacency document; carries a 1-based line number."""

    def __init__(self, lineno, message):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


@dataclass(frozen=True)
class Lattice:
    """Immutable k-regular graph with optional naming metadata.

    `family` records the constructor call that produced the lattice (used
    e.g. to build translation subgroups for square tori); it does not take
    part in equality.
    """

    n: int
    k: int
    adjacency: tuple[tuple[int, ...], ...]
    name: str = "custom"
    embedding: str | None = None
    family: tuple | None = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if self.n <= 0:
            raise LatticeError("vertex count must be positive")
        if self.k <= 0:
            raise LatticeError("valency must be positive")
        if len(self.adjacency) != self.n:
            raise LatticeError(
                f"adjacency has {len(self.adjacency)} rows for n={self.n}")
        for i, nbrs in enumerate(self.adjacency):
            if len(nbrs) != self.k:
                raise LatticeError(
                    f"vertex {i} has {len(nbrs)} neighbors, expected k={self.k}")
            if len(set(nbrs)) != len(nbrs):
                raise LatticeError(f"vertex {i} has repeated neighbors")
            for j in nbrs:
                if not 0 <= j < self.n:
                    raise LatticeError(f"vertex {i}: neighbor {j} out of range")
                if j == i:
                    raise LatticeError(f"vertex {i} has a loop")
                if i not in self.adjacency[j]:
                    raise LatticeError(
                        f"asymmetric adjacency: {i} lists {j} but not vice versa")

    @property
    def n_edges(self) -> int:
        return self.n * self.k // 2

    def edges(self) -> list[tuple[int, int]]:
        """Undirected edge list, each pair once with i < j."""
        return [(i, j) for i, nbrs in enumerate(self.adjacency)
                for j in nbrs if i < j]

    def neighbor_masks(self) -> list[int]:
        """Adjacency as one bitmask per vertex."""
        masks = []
        for nbrs in self.adjacency:
            m = 0
            for j in nbrs:
                m |= 1 << j
            masks.append(m)
        return masks


# ---------------------------------------------------------------------------
# named families


def _freeze(adjsets, name, embedding, k, family=None):
    adjacency = tuple(tuple(sorted(s)) for s in adjsets)
    return Lattice(n=len(adjacency), k=k, adjacency=adjacency, name=name,
                   embedding=embedding, family=family)


def _add(adjsets, a, b):
    adjsets[a].add(b)
    adjsets[b].add(a)


def tetrahedron() -> Lattice:
    adj = [set(range(4)) - {i} for i in range(4)]
    return _freeze(adj, "tetrahedron", "sphere", 3)


def hexahedron() -> Lattice:
    # Cube drawn as the Hamiltonian cycle 0..7 plus the chords i--i+3 for
    # even i.  This particular numbering fixes the orbit-id tie-breaks used
    # in all reported phase portraits; do not change it.
    adj = [set() for _ in range(8)]
    for i in range(8):
        _add(adj, i, (i + 1) % 8)
    for i in range(0, 8, 2):
        _add(adj, i, (i + 3) % 8)
    return _freeze(adj, "hexahedron", "sphere", 3)


def icosahedron() -> Lattice:
    # two poles capping a pentagonal antiprism
    adj = [set() for _ in range(12)]
    for i in range(5):
        u, un = 1 + i, 1 + (i + 1) % 5
        l, ln = 6 + i, 6 + (i + 1) % 5
        _add(adj, 0, u)
        _add(adj, 11, l)
        _add(adj, u, un)
        _add(adj, l, ln)
        _add(adj, u, l)
        _add(adj, u, ln)
    return _freeze(adj, "icosahedron", "sphere", 5)


def dodecahedron() -> Lattice:
    # generalized Petersen graph GP(10, 2)
    adj = [set() for _ in range(20)]
    for i in range(10):
        _add(adj, i, (i + 1) % 10)
        _add(adj, i, 10 + i)
        _add(adj, 10 + i, 10 + (i + 2) % 10)
    return _freeze(adj, "dodecahedron", "sphere", 3)


def buckyball() -> Lattice:
    """Truncated icosahedron: one vertex per (vertex, incident edge) flag.

    The pentagon around each icosahedron vertex follows the cyclic order of
    its neighbors in the standard golden-ratio embedding; flag (v, j) gets
    id 5*v + j.
    """
    import itertools
    import math

    phi = (1 + 5 ** 0.5) / 2
    coords = []
    for a, b in itertools.product((1.0, -1.0), repeat=2):
        coords.append((0.0, a, b * phi))
        coords.append((a, b * phi, 0.0))
        coords.append((a * phi, 0.0, b))

    def d2(p, q):
        return sum((x - y) ** 2 for x, y in zip(p, q))

    nbrs = [[j for j in range(12) if j != i and abs(d2(coords[i], coords[j]) - 4.0) < 1e-9]
            for i in range(12)]

    def cyclic(i):
        v = coords[i]
        nv = math.sqrt(sum(c * c for c in v))
        v = tuple(c / nv for c in v)
        ref = (1.0, 0.0, 0.0) if abs(v[0]) < 0.9 else (0.0, 1.0, 0.0)
        dot = sum(r * c for r, c in zip(ref, v))
        e1 = tuple(ref[a] - v[a] * dot for a in range(3))
        n1 = math.sqrt(sum(c * c for c in e1))
        e1 = tuple(c / n1 for c in e1)
        e2 = (v[1] * e1[2] - v[2] * e1[1],
              v[2] * e1[0] - v[0] * e1[2],
              v[0] * e1[1] - v[1] * e1[0])

        def angle(j):
            w = coords[j]
            return math.atan2(sum(a * b for a, b in zip(w, e2)),
                              sum(a * b for a, b in zip(w, e1)))

        return sorted(nbrs[i], key=angle)

    order = [cyclic(i) for i in range(12)]
    fid = {(v, w): 5 * v + j for v in range(12) for j, w in enumerate(order[v])}
    adj = [set() for _ in range(60)]
    for v in range(12):
        for j, w in enumerate(order[v]):
            _add(adj, fid[(v, w)], fid[(v, order[v][(j + 1) % 5])])
            _add(adj, fid[(v, w)], fid[(w, v)])
    return _freeze(adj, "buckyball", "sphere", 3)


def circle(n: int) -> Lattice:
    if n < 3:
        raise LatticeError(f"circle needs n >= 3, got {n}")
    adj = [{(i - 1) % n, (i + 1) % n} for i in range(n)]
    return _freeze(adj, f"circle({n})", "circle", 2, family=("circle", n))


def square(N: int, neighborhood: str = "vonneumann", closure: str = "torus") -> Lattice:
    """N x N grid closed into a torus or Klein bottle; vertex id = y*N + x."""
    if N < 3:
        raise LatticeError(f"square needs N >= 3, got {N}")
    if neighborhood not in ("vonneumann", "moore"):
        raise LatticeError(f"unknown neighborhood {neighborhood!r}")
    if closure not in ("torus", "klein"):
        raise LatticeError(f"unknown closure {closure!r}")
    offsets = [(1, 0), (-1, 0), (0, 1), (0, -1)]
    if neighborhood == "moore":
        offsets += [(1, 1), (1, -1), (-1, 1), (-1, -1)]

    def vid(x, y):
        return (y % N) * N + (x % N)

    adj = [set() for _ in range(N * N)]
    for y in range(N):
        for x in range(N):
            for dx, dy in offsets:
                nx, ny = x + dx, y + dy
                if closure == "klein" and not 0 <= ny < N:
                    nx = -nx  # orientation-reversing identification in y
                adj[vid(x, y)].add(vid(nx, ny))
    k = 8 if neighborhood == "moore" else 4
    name = f"square({N},{neighborhood},{closure})"
    try:
        return _freeze(adj, name, closure, k,
                       family=("square", N, neighborhood, closure))
    except LatticeError as exc:
        raise LatticeError(f"{name}: incompatible parameters ({exc})") from exc


def graphene(w: int, h: int, closure: str = "torus") -> Lattice:
    """Hexagonal lattice in brick-wall coordinates, w columns x h rows.

    Rows are cycles; vertex (x, y) carries a vertical edge to (x, y+1) iff
    x+y is even.  Klein closure re-identifies the vertical wrap with the
    flip x -> -x (the convention that keeps the lattice 3-regular).
    """
    if w < 4 or h < 2 or w % 2 or h % 2:
        raise LatticeError(f"graphene needs even w >= 4, even h >= 2, got {w}x{h}")
    if closure not in ("torus", "klein"):
        raise LatticeError(f"unknown closure {closure!r}")

    def vid(x, y):
        return (y % h) * w + (x % w)

    adj = [set() for _ in range(w * h)]
    for y in range(h):
        for x in range(w):
            _add(adj, vid(x, y), vid(x + 1, y))
            if (x + y) % 2 == 0:
                nx = x
                ny = y + 1
                if closure == "klein" and ny >= h:
                    nx = -x
                _add(adj, vid(x, y), vid(nx, ny))
    name = f"graphene({w},{h},{closure})"
    try:
        return _freeze(adj, name, closure, 3, family=("graphene", w, h, closure))
    except LatticeError as exc:
        raise LatticeError(f"{name}: incompatible parameters ({exc})") from exc


def triangular(w: int, h: int, closure: str = "torus") -> Lattice:
    """6-valent triangular lattice on a skew torus, w columns x h rows.

    Neighbor offsets are (+-1, 0), (0, +-1), (1, 1), (-1, -1); wrapping in y
    shifts x by one column per wrap.  The skew identification is what keeps
    the full 96-element symmetry of the 4x6 lattice (a straight closure
    only admits 48 automorphisms).
    """
    if w < 2 or h < 3:
        raise LatticeError(f"triangular needs w >= 2, h >= 3, got {w}x{h}")
    if closure != "torus":
        raise LatticeError("triangular lattice supports closure 'torus' only")

    def vid(x, y):
        x = x + (y // h)  # one-column shift per vertical wrap
        return (y % h) * w + (x % w)

    adj = [set() for _ in range(w * h)]
    for y in range(h):
        for x in range(w):
            me = vid(x, y)
            for dx, dy in [(1, 0), (-1, 0), (0, 1), (0, -1), (1, 1), (-1, -1)]:
                j = vid(x + dx, y + dy)
                if j == me:
                    raise LatticeError(
                        f"triangular({w},{h}): degenerate wrap produces a loop")
                adj[me].add(j)
    name = f"triangular({w},{h})"
    try:
        return _freeze(adj, name, "torus", 6, family=("triangular", w, h))
    except LatticeError as exc:
        raise LatticeError(f"{name}: incompatible parameters ({exc})") from exc


NAMED_FAMILIES = {
    "tetrahedron": tetrahedron,
    "hexahedron": hexahedron,
    "icosahedron": icosahedron,
    "dodecahedron": dodecahedron,
    "buckyball": buckyball,
    "circle": circle,
    "square": square,
    "graphene": graphene,
    "triangular": triangular,
}


def make_named(name: str, *params) -> Lattice:
    """Construct a lattice by family name, e.g. make_named('circle', 24)."""
    try:
        builder = NAMED_FAMILIES[name]
    except KeyError:
        raise LatticeError(
            f"unknown lattice {name!r}; known: {', '.join(sorted(NAMED_FAMILIES))}")
    try:
        return builder(*params)
    except TypeError as exc:
        raise LatticeError(f"bad parameters for {name}: {exc}") from exc


_SPEC_RE = re.compile(r"^\s*([a-z]+)\s*(?:\(\s*([^()]*)\s*\))?\s*$")


def from_spec(spec: str) -> Lattice:
    """Parse a textual lattice spec like 'dodecahedron' or 'square(5,moore)'."""
    m = _SPEC_RE.match(spec)
    if not m:
        raise LatticeError(f"cannot parse lattice spec {spec!r}")
    name, argtext = m.group(1), m.group(2)
    args = []
    if argtext:
        for tok in argtext.split(","):
            tok = tok.strip()
            args.append(int(tok) if tok.isdigit() else tok)
    return make_named(name, *args)


# ---------------------------------------------------------------------------
# text IO
#
# line 1: `n k`; lines 2..n+1: `i: j1 j2 ... jk`; `#` starts a comment.
# Serialization prepends `# name:` / `# embedding:` headers so that
# parse(serialize(lat)) == lat field for field.


def serialize(lat: Lattice) -> str:
    lines = [f"# name: {lat.name}"]
    if lat.embedding is not None:
        lines.append(f"# embedding: {lat.embedding}")
    lines.append(f"{lat.n} {lat.k}")
    for i, nbrs in enumerate(lat.adjacency):
        lines.append(f"{i}: " + " ".join(str(j) for j in nbrs))
    return "\n".join(lines) + "\n"


def parse(text: str) -> Lattice:
    name = "custom"
    embedding = None
    header = None
    rows: dict[int, tuple[int, ...]] = {}
    row_lines: dict[int, int] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if line.startswith("#"):
            body = line[1:].strip()
            if body.startswith("name:"):
                name = body[5:].strip()
            elif body.startswith("embedding:"):
                embedding = body[10:].strip() or None
            continue
        if not line:
            continue
        if header is None:
            parts = line.split()
            if len(parts) != 2:
                raise ParseError(lineno, f"expected 'n k' header, got {line!r}")
            try:
                header = (int(parts[0]), int(parts[1]))
            except ValueError:
                raise ParseError(lineno, f"non-integer header {line!r}")
            continue
        if ":" not in line:
            raise ParseError(lineno, f"expected 'i: j1 ... jk', got {line!r}")
        left, right = line.split(":", 1)
        try:
            i = int(left)
            nbrs = tuple(int(t) for t in right.split())
        except ValueError:
            raise ParseError(lineno, f"non-integer vertex id in {line!r}")
        if i in rows:
            raise ParseError(lineno, f"duplicate row for vertex {i}")
        rows[i] = nbrs
        row_lines[i] = lineno
    if header is None:
        raise ParseError(1, "empty document")
    n, k = header
    if n <= 0 or k <= 0:
        raise ParseError(1, f"invalid header n={n} k={k}")
    if set(rows) != set(range(n)):
        missing = sorted(set(range(n)) - set(rows))
        extra = sorted(set(rows) - set(range(n)))
        raise ParseError(1, f"vertex rows mismatch: missing {missing}, extra {extra}")

    adjacency = []
    for i in range(n):
        nbrs = rows[i]
        lineno = row_lines[i]
        if len(nbrs) != k:
            raise ParseError(lineno, f"vertex {i} has {len(nbrs)} neighbors, expected {k}")
        if len(set(nbrs)) != len(nbrs):
            raise ParseError(lineno, f"vertex {i} has repeated neighbors")
        for j in nbrs:
            if not 0 <= j < n:
                raise ParseError(lineno, f"vertex {i}: neighbor {j} out of range")
            if j == i:
                raise ParseError(lineno, f"vertex {i} has a loop")
        adjacency.append(tuple(sorted(nbrs)))
    for i in range(n):
        for j in adjacency[i]:
            if i not in adjacency[j]:
                raise ParseError(row_lines[i],
                                 f"asymmetric adjacency: {i} lists {j} but not vice versa")
    return Lattice(n=n, k=k, adjacency=tuple(adjacency), name=name,
                   embedding=embedding)
