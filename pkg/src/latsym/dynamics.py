"""Cellular-automaton evolution and phase portraits modulo lattice symmetry.

The portrait is the functional graph induced on orbit ids.  Its cycles are
equivalence classes of periodic trajectories: every state inside a cycle
orbit is periodic (the return map is realized by a group element), so a
class with total cycle-orbit population P and exact state period T consists
of P / T individual periodic trajectories.  Cycle counts are conventionally
quoted as those raw trajectory counts; both views are exposed.

A cycle is a spaceship when the exact state period exceeds the orbit
period: the configuration recurs only up to a nontrivial symmetry, i.e. it
moves.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .lattice import Lattice
from .rules import Rule
from .statespace import OrbitTable, State, act_code, canonical
from .symmetry import Perm, PermGroup

__all__ = [
    "step",
    "Portrait",
    "CycleRecord",
    "TrajectoryResult",
    "TrajectoryBudgetExceeded",
    "build_portrait",
    "is_reversible",
    "gardens_of_eden",
    "scan_rules",
    "trajectory_analysis",
    "SCAN_PROPERTIES",
]


class TrajectoryBudgetExceeded(RuntimeError):
    """No orbit recurrence within the configured step budget."""


def step(lat: Lattice, rule: Rule, s: State) -> State:
    """Simultaneous update: each vertex applies the rule to its neighbor sum."""
    if rule.k != lat.k:
        raise ValueError(f"rule valency {rule.k} != lattice valency {lat.k}")
    if s.q != rule.q or s.n != lat.n:
        raise ValueError("state does not match lattice/rule")
    return State(code=_step_code(lat, rule, s.code), q=s.q, n=s.n)


def _step_code(lat: Lattice, rule: Rule, code: int) -> int:
    n = lat.n
    out = 0
    for v in range(n):
        ssum = 0
        for u in lat.adjacency[v]:
            ssum += (code >> (n - 1 - u)) & 1
        c = (code >> (n - 1 - v)) & 1
        out |= rule.value(ssum, c) << (n - 1 - v)
    return out


def _successor_ids(table: OrbitTable, rule: Rule) -> np.ndarray:
    """Orbit id of step(representative) for every orbit, vectorized."""
    if table.q != 2:
        raise ValueError("dynamics needs a q = 2 orbit table")
    lat = table.lattice
    n = lat.n
    reps = table.reps
    new_codes = np.zeros(len(reps), dtype=np.int64)
    rule_arr = np.array(rule.flat_table(), dtype=np.int64)
    for v in range(n):
        ssum = np.zeros(len(reps), dtype=np.int64)
        for u in lat.adjacency[v]:
            ssum += (reps >> (n - 1 - u)) & 1
        c = (reps >> (n - 1 - v)) & 1
        new_codes |= rule_arr[2 * ssum + c] << (n - 1 - v)
    if table.index is not None:
        return table.index[new_codes].astype(np.int64)
    return np.array([table.orbit_of_code(int(c)) for c in new_codes], dtype=np.int64)


@dataclass(frozen=True)
class CycleRecord:
    """One equivalence class of periodic trajectories.

    orbits: the distinct orbit ids in successor order, starting from the
    smallest id.  orbit_period == len(orbits); state_period is the exact
    recurrence time of a representative state.  traversal lists the orbit
    ids over one full state period (each orbit appears state_period /
    orbit_period times).  n_trajectories is the number of individual
    periodic state cycles the class contains.
    """

    orbits: tuple[int, ...]
    orbit_period: int
    state_period: int
    is_isolated: bool
    is_spaceship: bool
    shift: Perm
    n_trajectories: int
    basin_size: int
    weight: Fraction

    @property
    def traversal(self) -> tuple[int, ...]:
        return self.orbits * (self.state_period // self.orbit_period)


@dataclass(frozen=True)
class TrajectoryResult:
    transient: int
    orbit_period: int
    state_period: int
    shift: Perm
    is_spaceship: bool
    steps_used: int


class Portrait:
    """Phase portrait of a rule on an enumerated orbit table."""

    def __init__(self, table: OrbitTable, rule: Rule, successor: np.ndarray,
                 cycles: tuple[CycleRecord, ...], cycle_of: np.ndarray,
                 eden: tuple[int, ...]):
        self.table = table
        self.rule = rule
        self.successor = successor
        self.cycles = cycles
        self.cycle_of = cycle_of
        self.eden = eden

    @property
    def n_cycle_classes(self) -> int:
        return len(self.cycles)

    @property
    def n_cycles(self) -> int:
        """Total periodic trajectories (the conventional cycle count)."""
        return sum(c.n_trajectories for c in self.cycles)

    @property
    def n_spaceship_classes(self) -> int:
        return sum(1 for c in self.cycles if c.is_spaceship)

    @property
    def n_spaceships(self) -> int:
        return sum(c.n_trajectories for c in self.cycles if c.is_spaceship)

    def max_weight(self) -> Fraction:
        return max(c.weight for c in self.cycles)

    def summary(self) -> str:
        return (f"rule {self.rule.code}: {self.n_cycles} cycles "
                f"({self.n_cycle_classes} classes), {self.n_spaceships} spaceships "
                f"({self.n_spaceship_classes} classes), {len(self.eden)} eden orbits, "
                f"max basin weight {self.max_weight()}")

    def to_csv(self) -> str:
        on_cycle = {}
        for cid, c in enumerate(self.cycles):
            for i in c.orbits:
                on_cycle[i] = cid
        lines = ["orbit_id,successor_id,size,cycle_id,is_spaceship,basin_of"]
        for i in range(self.table.n_orbits):
            drain = int(self.cycle_of[i])
            cid = on_cycle.get(i, "")
            ss = int(self.cycles[drain].is_spaceship) if i in on_cycle else ""
            lines.append(f"{i},{int(self.successor[i])},{self.table.size(i)},"
                         f"{cid},{ss},{drain}")
        return "\n".join(lines) + "\n"

    def to_dot(self) -> str:
        on_cycle = set()
        for c in self.cycles:
            on_cycle.update(c.orbits)
        lines = [f'digraph "rule{self.rule.code}" {{',
                 "  node [shape=circle];"]
        for i in range(self.table.n_orbits):
            attrs = [f'label="{i}\\n{self.table.size(i)}"']
            if i in on_cycle:
                c = self.cycles[int(self.cycle_of[i])]
                attrs.append('style=bold')
                if c.is_spaceship:
                    attrs.append('color=blue')
            if i in self.eden:
                attrs.append('shape=doublecircle')
            lines.append(f"  {i} [{', '.join(attrs)}];")
        for i in range(self.table.n_orbits):
            lines.append(f"  {i} -> {int(self.successor[i])};")
        lines.append("}")
        return "\n".join(lines) + "\n"


def _find_cycles(successor: np.ndarray):
    """Cycles of a functional graph plus the cycle id every node drains to."""
    n = len(successor)
    cycle_nodes: list[list[int]] = []
    cycle_of = np.full(n, -1, dtype=np.int64)
    color = np.zeros(n, dtype=np.int8)  # 0 new, 1 on current path, 2 resolved
    for start in range(n):
        if color[start]:
            continue
        path = []
        v = start
        while color[v] == 0:
            color[v] = 1
            path.append(v)
            v = int(successor[v])
        if color[v] == 1:  # new cycle; v is its entry point
            cyc = [v]
            u = int(successor[v])
            while u != v:
                cyc.append(u)
                u = int(successor[u])
            cid = len(cycle_nodes)
            cycle_nodes.append(cyc)
            for u in cyc:
                cycle_of[u] = cid
        target = int(cycle_of[v])
        for u in path:
            color[u] = 2
            if cycle_of[u] < 0:
                cycle_of[u] = target
    return cycle_nodes, cycle_of


def _state_period(table: OrbitTable, rule: Rule, start_orbit: int,
                  orbit_period: int) -> tuple[int, Perm]:
    """Exact recurrence time of the representative state, and the shift.

    After one orbit period the representative u returns to its orbit, so
    step^L(u) = g.u for a group element g; then step^(rL)(u) = g^r.u and the
    state period is L times the order of g acting on u.
    """
    lat = table.lattice
    u = int(table.reps[start_orbit])
    v = u
    for _ in range(orbit_period):
        v = _step_code(lat, rule, v)
    q, n = table.q, lat.n
    shift = None
    for g in table.group.elements:  # sorted: first hit is the lex-least witness
        if act_code(g.images, u, q, n) == v:
            shift = g
            break
    assert shift is not None, "successor state left the orbit: action is broken"
    r = 1
    w = v
    while w != u:
        w = act_code(shift.images, w, q, n)
        r += 1
    return r * orbit_period, shift


def build_portrait(table: OrbitTable, rule: Rule) -> Portrait:
    """Successor map, cycles, basins, spaceship/eden classification."""
    if rule.k != table.lattice.k:
        raise ValueError(f"rule valency {rule.k} != lattice valency {table.lattice.k}")
    successor = _successor_ids(table, rule)
    sizes = table.sizes

    # universal restriction: a state's stabilizer only grows under an
    # equivariant map, so orbit sizes never increase along trajectories
    assert (sizes[successor] <= sizes).all(), \
        "orbit size increased along a trajectory"

    cycle_nodes, cycle_of = _find_cycles(successor)

    indeg = np.bincount(successor, minlength=table.n_orbits)
    eden = tuple(int(i) for i in np.flatnonzero(indeg == 0))

    basin = np.zeros(len(cycle_nodes), dtype=object)
    for i in range(table.n_orbits):
        basin[cycle_of[i]] += int(sizes[i])

    records = []
    for cid, nodes in enumerate(cycle_nodes):
        csize = {int(sizes[i]) for i in nodes}
        assert len(csize) == 1, "cycle visits orbits of different sizes"
        start = min(nodes)
        i0 = nodes.index(start)
        nodes = nodes[i0:] + nodes[:i0]
        L = len(nodes)
        state_period, shift = _state_period(table, rule, start, L)
        population = int(sizes[start]) * L
        assert population % state_period == 0
        isolated = all(int(indeg[i]) == 1 for i in nodes)
        records.append(CycleRecord(
            orbits=tuple(nodes),
            orbit_period=L,
            state_period=state_period,
            is_isolated=isolated,
            is_spaceship=state_period > L,
            shift=shift,
            n_trajectories=population // state_period,
            basin_size=int(basin[cid]),
            weight=Fraction(int(basin[cid]), table.total_states),
        ))

    assert sum(c.weight for c in records) == 1
    return Portrait(table, rule, successor, tuple(records), cycle_of, eden)


def is_reversible(table: OrbitTable, rule: Rule) -> bool:
    """Whether the global map is a bijection, decided on orbit ids.

    The image of an orbit is always the entire successor orbit, so the rule
    is bijective iff the induced orbit map is a bijection that preserves
    orbit sizes.
    """
    adapted = rule.with_valency(table.lattice.k)
    successor = _successor_ids(table, adapted)
    seen = np.zeros(table.n_orbits, dtype=bool)
    seen[successor] = True
    if not seen.all():
        return False
    return bool((table.sizes[successor] == table.sizes).all())


def gardens_of_eden(portrait: Portrait) -> tuple[int, ...]:
    """Orbit ids with no predecessor under the rule."""
    return portrait.eden


# ---------------------------------------------------------------------------
# rule scans


def _conserves(table: OrbitTable, rule: Rule, func) -> bool:
    """Whether an orbit-constant function is constant along trajectories."""
    lat = table.lattice
    for i in range(table.n_orbits):
        u = int(table.reps[i])
        if func(u) != func(_step_code(lat, rule, u)):
            return False
    return True


def _magnetization(lat: Lattice):
    def f(code):
        return bin(code).count("1")
    return f


def _ising(lat: Lattice):
    from .mesoscopic import ising_energy_code
    def f(code):
        return ising_energy_code(lat, code)
    return f


SCAN_PROPERTIES = ("reversible", "has_spaceship", "has_eden",
                   "has_isolated_cycle", "conserves_magnetization",
                   "conserves_energy")


def scan_rules(table: OrbitTable, rules, properties,
               cycle_length: int | None = None) -> list[dict]:
    """Evaluate the requested properties for each rule.

    Rules whose valency differs from the lattice's are reinterpreted with
    saturating neighbor sums (Rule.with_valency).  Rows come back in rule
    code order.  `cycle_length` filters has_isolated_cycle by exact state
    period when given.
    """
    for p in properties:
        if p not in SCAN_PROPERTIES:
            raise ValueError(f"unknown property {p!r}; known: {SCAN_PROPERTIES}")
    rows = []
    for rule in sorted(rules, key=lambda r: r.code):
        adapted = rule.with_valency(table.lattice.k)
        row = {"rule": rule.code}
        portrait = None
        for p in properties:
            if p == "reversible":
                row[p] = is_reversible(table, adapted)
                continue
            if p == "conserves_magnetization":
                row[p] = _conserves(table, adapted, _magnetization(table.lattice))
                continue
            if p == "conserves_energy":
                row[p] = _conserves(table, adapted, _ising(table.lattice))
                continue
            if portrait is None:
                portrait = build_portrait(table, adapted)
            if p == "has_spaceship":
                row[p] = portrait.n_spaceships > 0
            elif p == "has_eden":
                row[p] = len(portrait.eden) > 0
            elif p == "has_isolated_cycle":
                row[p] = any(c.is_isolated
                             and (cycle_length is None
                                  or c.state_period == cycle_length)
                             for c in portrait.cycles)
        rows.append(row)
    return rows


# ---------------------------------------------------------------------------
# single-trajectory analysis (lattices too large to enumerate)


def trajectory_analysis(lat: Lattice, group: PermGroup, rule: Rule,
                        s0: State, max_steps: int = 10_000) -> TrajectoryResult:
    """Iterate from s0 until the trajectory re-enters a previous state's orbit.

    Visited states are stored by minimal image, so recurrence is detected
    modulo the group; the exact state period is then derived from the shift
    element without stepping further.
    """
    if max_steps < 1:
        raise ValueError("max_steps must be >= 1")
    if rule.k != lat.k:
        raise ValueError(f"rule valency {rule.k} != lattice valency {lat.k}")
    if s0.q != 2 or s0.n != lat.n:
        raise ValueError("initial state must be binary on this lattice")
    q, n = s0.q, lat.n
    seen: dict[int, tuple[int, int]] = {}  # canonical code -> (time, raw code)
    code = s0.code
    canon, _ = canonical(s0, group)
    seen[canon.code] = (0, code)
    for t in range(1, max_steps + 1):
        code = _step_code(lat, rule, code)
        c, _ = canonical(State(code=code, q=q, n=n), group)
        if c.code in seen:
            t0, u = seen[c.code]
            orbit_period = t - t0
            v = code  # = step^orbit_period(u), the recurrence witness
            shift = None
            for g in group.elements:
                if act_code(g.images, u, q, n) == v:
                    shift = g
                    break
            assert shift is not None
            r = 1
            w = v
            while w != u:
                w = act_code(shift.images, w, q, n)
                r += 1
            return TrajectoryResult(
                transient=t0,
                orbit_period=orbit_period,
                state_period=r * orbit_period,
                shift=shift,
                is_spaceship=r > 1,
                steps_used=t,
            )
        seen[c.code] = (t, code)
    raise TrajectoryBudgetExceeded(
        f"no orbit recurrence within {max_steps} steps")
