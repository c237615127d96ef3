"""States, group action on states, and exact orbit enumeration.

A state assigns one of q values to every vertex; it is packed into a single
integer code with vertex 0 as the most significant digit, so lexicographic
order on digit strings coincides with numeric order on codes.  Orbits are
numbered by decreasing size, ties broken by increasing code of the minimal
representative.

Enumeration computes, for every code, the minimum of its images under all
group elements.  For q = 2 a group element acts on codes as a bit
permutation, which is applied to whole chunks of the state space at once
through four 256-entry byte lookup tables; this is what makes the 2^24-2^25
state spaces tractable in minutes on one core.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .lattice import Lattice
from .symmetry import Perm, PermGroup

__all__ = [
    "State",
    "OrbitTable",
    "StateCapExceeded",
    "act",
    "act_code",
    "canonical",
    "enumerate_orbits",
]

DEFAULT_STATE_CAP = 1 << 28   # largest enumerable state space
INDEX_CAP = 1 << 25           # largest state space kept as a full state->orbit array
_CHUNK = 1 << 22


class StateCapExceeded(RuntimeError):
    """State space larger than the configured enumeration cap."""


@dataclass(frozen=True)
class State:
    """A q-valued assignment on n vertices packed into an integer code."""

    code: int
    q: int
    n: int

    def __post_init__(self):
        if not 0 <= self.code < self.q ** self.n:
            raise ValueError(f"code {self.code} out of range for q={self.q} n={self.n}")

    @staticmethod
    def from_digits(digits, q: int = 2) -> "State":
        digits = tuple(digits)
        code = 0
        for d in digits:
            if not 0 <= d < q:
                raise ValueError(f"digit {d} out of range for q={q}")
            code = code * q + d
        return State(code=code, q=q, n=len(digits))

    def digits(self) -> tuple[int, ...]:
        out = []
        c = self.code
        for _ in range(self.n):
            out.append(c % self.q)
            c //= self.q
        return tuple(reversed(out))

    def digit(self, v: int) -> int:
        return (self.code // self.q ** (self.n - 1 - v)) % self.q

    def __str__(self):
        return "".join(str(d) for d in self.digits())


def act_code(images: tuple[int, ...], code: int, q: int, n: int) -> int:
    """Group action on a raw code: new digit at x is the old digit at g^-1(x).

    Equivalently the value at vertex v moves to vertex g(v).
    """
    if q == 2:
        out = 0
        for v, gv in enumerate(images):
            out |= ((code >> (n - 1 - v)) & 1) << (n - 1 - gv)
        return out
    out = 0
    for v, gv in enumerate(images):
        d = (code // q ** (n - 1 - v)) % q
        out += d * q ** (n - 1 - gv)
    return out


def act(g: Perm, s: State) -> State:
    if g.degree != s.n:
        raise ValueError(f"permutation degree {g.degree} != state size {s.n}")
    return State(code=act_code(g.images, s.code, s.q, s.n), q=s.q, n=s.n)


def canonical(s: State, group: PermGroup) -> tuple[State, Perm]:
    """Minimal-code state in the orbit of s and the first element reaching it.

    Elements are scanned in the group's sorted order, so the witnessing
    permutation is deterministic.
    """
    best = s.code
    best_g = Perm.identity(s.n)
    for g in group.elements:
        c = act_code(g.images, s.code, s.q, s.n)
        if c < best:
            best = c
            best_g = g
    return State(code=best, q=s.q, n=s.n), best_g


# ---------------------------------------------------------------------------
# vectorized action on the whole state space


def _bit_perm_tables(images, n):
    """Byte-wise lookup tables realizing one permutation on q=2 codes."""
    inv = [0] * n
    for i, p in enumerate(images):
        inv[p] = i
    dst_of_src = [0] * n
    for x in range(n):
        dst_of_src[n - 1 - inv[x]] = n - 1 - x
    nbytes = (n + 7) // 8
    tables = []
    for b in range(nbytes):
        t = np.zeros(256, dtype=np.uint32)
        single = [0] * 8
        for j in range(8):
            src = 8 * b + j
            if src < n:
                single[j] = 1 << dst_of_src[src]
        for v in range(1, 256):
            lsb = v & -v
            t[v] = t[v ^ lsb] | single[lsb.bit_length() - 1]
        tables.append(t)
    return tables


def _min_images_q2(group: PermGroup, n: int) -> np.ndarray:
    """Minimal orbit representative for every q=2 code, as one array."""
    if n > 32:
        raise StateCapExceeded(f"q=2 enumeration supports n <= 32, got {n}")
    size = 1 << n
    nbytes = (n + 7) // 8
    ident = tuple(range(n))
    all_tables = [_bit_perm_tables(g.images, n)
                  for g in group.elements if g.images != ident]
    minima = np.empty(size, dtype=np.uint32)
    for lo in range(0, size, _CHUNK):
        hi = min(lo + _CHUNK, size)
        codes = np.arange(lo, hi, dtype=np.uint32)
        byte_idx = [((codes >> (8 * b)) & 0xFF).astype(np.intp)
                    for b in range(nbytes)]
        m = codes
        acc = np.empty(hi - lo, dtype=np.uint32)
        tmp = np.empty(hi - lo, dtype=np.uint32)
        for tables in all_tables:
            np.take(tables[0], byte_idx[0], out=acc)
            for b in range(1, nbytes):
                np.take(tables[b], byte_idx[b], out=tmp)
                np.bitwise_or(acc, tmp, out=acc)
            np.minimum(m, acc, out=m)
        minima[lo:hi] = m
    return minima


def _min_images_general(group: PermGroup, q: int, n: int) -> np.ndarray:
    """Mixed-radix fallback for q > 2."""
    size = q ** n
    weights = [q ** (n - 1 - v) for v in range(n)]
    minima = np.empty(size, dtype=np.int64)
    perms = [g.images for g in group.elements if not g.is_identity()]
    for lo in range(0, size, _CHUNK):
        hi = min(lo + _CHUNK, size)
        codes = np.arange(lo, hi, dtype=np.int64)
        digits = [(codes // weights[v]) % q for v in range(n)]
        m = codes.copy()
        for images in perms:
            img = np.zeros(hi - lo, dtype=np.int64)
            for v in range(n):
                img += digits[v] * weights[images[v]]
            np.minimum(m, img, out=m)
        minima[lo:hi] = m
    return minima


class OrbitTable:
    """All orbits of the q^n state space under a lattice's symmetry group.

    reps[i] and sizes[i] describe orbit id i, ids in decreasing-size order.
    `index` maps every state code to its orbit id when the state space is
    small enough; otherwise lookups recompute the canonical form on the fly.
    """

    def __init__(self, lattice: Lattice, group: PermGroup, q: int,
                 reps: np.ndarray, sizes: np.ndarray,
                 index: np.ndarray | None):
        self.lattice = lattice
        self.group = group
        self.q = q
        self.reps = reps
        self.sizes = sizes
        self.index = index
        self.total_states = q ** lattice.n
        # code-sorted view for the no-index lookup path
        self._code_order = np.argsort(reps, kind="stable")
        self._reps_by_code = reps[self._code_order]
        self._check()

    def _check(self):
        assert int(self.sizes.sum()) == self.total_states
        assert all(self.group.order % int(s) == 0 for s in self.sizes)
        diffs = np.diff(self.sizes)
        assert (diffs <= 0).all(), "orbit sizes must be non-increasing in id"
        ties = diffs == 0
        if ties.any():
            same = np.flatnonzero(ties)
            assert (self.reps[same + 1] > self.reps[same]).all(), \
                "equal-size orbits must be ordered by representative code"

    @property
    def n_orbits(self) -> int:
        return len(self.reps)

    def representative(self, orbit_id: int) -> State:
        return State(code=int(self.reps[orbit_id]), q=self.q, n=self.lattice.n)

    def size(self, orbit_id: int) -> int:
        return int(self.sizes[orbit_id])

    def orbit_of(self, s: State) -> int:
        if not (s.q == self.q and s.n == self.lattice.n):
            raise ValueError("state does not belong to this table's space")
        return self.orbit_of_code(s.code)

    def orbit_of_code(self, code: int) -> int:
        if self.index is not None:
            return int(self.index[code])
        rep, _ = canonical(State(code=code, q=self.q, n=self.lattice.n), self.group)
        pos = int(np.searchsorted(self._reps_by_code, rep.code))
        return int(self._code_order[pos])

    def records(self):
        """(orbit_id, representative_code, size) triples in id order."""
        for i in range(self.n_orbits):
            yield i, int(self.reps[i]), int(self.sizes[i])

    def to_csv(self) -> str:
        lines = ["orbit_id,representative_code,size"]
        lines += [f"{i},{r},{s}" for i, r, s in self.records()]
        return "\n".join(lines) + "\n"


def enumerate_orbits(lat: Lattice, group: PermGroup, q: int = 2,
                     state_cap: int = DEFAULT_STATE_CAP,
                     index_cap: int = INDEX_CAP) -> OrbitTable:
    """Enumerate all orbits of Q^V with exact counts."""
    if group.degree != lat.n:
        raise ValueError("group degree does not match lattice size")
    if q < 1:
        raise ValueError("q must be >= 1")
    size = q ** lat.n
    if size > state_cap:
        raise StateCapExceeded(
            f"state space {q}^{lat.n} = {size} exceeds cap {state_cap}; "
            "use burnside_count for the orbit count")

    if q == 2:
        minima = _min_images_q2(group, lat.n)
    else:
        minima = _min_images_general(group, q, lat.n)

    reps, counts = np.unique(minima, return_counts=True)
    order = np.lexsort((reps, -counts))
    reps = reps[order].astype(np.int64)
    sizes = counts[order].astype(np.int64)

    index = None
    if size <= index_cap:
        code_order = np.argsort(reps, kind="stable")
        pos = np.searchsorted(reps[code_order], minima)
        index = code_order.astype(np.int32)[pos]
    return OrbitTable(lat, group, q, reps, sizes, index)
