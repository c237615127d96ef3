"""Exact microcanonical statistics for the Ising model on enumerable lattices.

Counts per energy level come from summing orbit sizes of an enumerated
orbit table, so every number is an exact integer.  Convex intruders (the
first-order phase transition signature) are decided with exact big-integer
exponentiation; the subtle ones have floating-point entropy differences
near machine precision, where log-based tests misjudge.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from math import gcd

import numpy as np

from .lattice import Lattice
from .statespace import OrbitTable, State

__all__ = [
    "Level",
    "Spectrum",
    "Intruder",
    "IntruderReport",
    "ising_energy",
    "ising_energy_code",
    "density_of_states",
    "entropy_curve",
    "convex_intruders",
]


def ising_energy_code(lat: Lattice, code: int, J: int = 1, B: int = 0) -> int:
    """H = -J sum_edges s_i s_j - B sum_i s_i with spins 0 -> -1, 1 -> +1."""
    n = lat.n
    disagree = 0
    for i, j in lat.edges():
        disagree += ((code >> (n - 1 - i)) ^ (code >> (n - 1 - j))) & 1
    ones = code.bit_count()
    magnetization = 2 * ones - n
    return -J * (lat.n_edges - 2 * disagree) - B * magnetization


def ising_energy(lat: Lattice, s: State, J: int = 1, B: int = 0) -> int:
    if s.q != 2:
        raise ValueError("Ising energy needs q = 2 states")
    if s.n != lat.n:
        raise ValueError("state size does not match lattice")
    return ising_energy_code(lat, s.code, J, B)


@dataclass(frozen=True)
class Level:
    """One energy level: exact count and magnetization statistics."""

    E: int
    count: int
    min_m: int
    max_m: int
    mean_abs_m: Fraction


@dataclass(frozen=True)
class Spectrum:
    lattice: Lattice
    J: int
    B: int
    levels: tuple[Level, ...]
    total: int

    @property
    def energies(self) -> tuple[int, ...]:
        return tuple(lv.E for lv in self.levels)

    def count_at(self, E: int) -> int:
        for lv in self.levels:
            if lv.E == E:
                return lv.count
        return 0

    def to_csv(self) -> str:
        n = self.lattice.n
        lines = ["E,e,N_E,s,min_M,max_M,mean_abs_M"]
        for lv in self.levels:
            e = lv.E / n
            s = math.log(lv.count) / n
            lines.append(f"{lv.E},{e:.10g},{lv.count},{s:.10g},"
                         f"{lv.min_m},{lv.max_m},"
                         f"{lv.mean_abs_m.numerator}/{lv.mean_abs_m.denominator}")
        return "\n".join(lines) + "\n"


def density_of_states(table: OrbitTable, J: int = 1, B: int = 0) -> Spectrum:
    """Exact energy histogram via orbit-size summation.

    Energy and magnetization are constant on group orbits, so evaluating
    them on the minimal representatives and weighting by orbit size gives
    the exact full-space counts.
    """
    if table.q != 2:
        raise ValueError("Ising spectrum needs q = 2")
    lat = table.lattice
    n = lat.n
    reps = table.reps
    sizes = table.sizes

    disagree = np.zeros(len(reps), dtype=np.int64)
    for i, j in lat.edges():
        disagree += ((reps >> (n - 1 - i)) ^ (reps >> (n - 1 - j))) & 1
    magnet = 2 * np.bitwise_count(reps).astype(np.int64) - n
    energy = -J * (lat.n_edges - 2 * disagree) - B * magnet

    uniq, inverse = np.unique(energy, return_inverse=True)
    counts = np.zeros(len(uniq), dtype=np.int64)
    np.add.at(counts, inverse, sizes)
    weighted_abs = np.zeros(len(uniq), dtype=np.int64)
    np.add.at(weighted_abs, inverse, sizes * np.abs(magnet))
    min_m = np.full(len(uniq), np.iinfo(np.int64).max, dtype=np.int64)
    np.minimum.at(min_m, inverse, magnet)
    max_m = np.full(len(uniq), np.iinfo(np.int64).min, dtype=np.int64)
    np.maximum.at(max_m, inverse, magnet)

    levels = tuple(
        Level(E=int(uniq[i]), count=int(counts[i]), min_m=int(min_m[i]),
              max_m=int(max_m[i]),
              mean_abs_m=Fraction(int(weighted_abs[i]), int(counts[i])))
        for i in range(len(uniq)))

    total = table.total_states
    assert sum(lv.count for lv in levels) == total
    if J == 1 and B == 0:
        assert levels[0].E == -lat.n_edges and levels[0].count >= 2
    return Spectrum(lattice=lat, J=J, B=B, levels=levels, total=total)


def entropy_curve(spec: Spectrum) -> list[tuple[float, float]]:
    """Specific (energy, entropy) pairs: e = E/n, s = ln(N_E)/n, k_B = 1."""
    n = spec.lattice.n
    return [(lv.E / n, math.log(lv.count) / n) for lv in spec.levels]


@dataclass(frozen=True)
class Intruder:
    """Maximal run of consecutive convexity violations, E_start..E_end."""

    E_start: int
    E_end: int
    witnesses: tuple[tuple[int, int, int, int, int], ...]
    # each witness: (E_left, E_mid, E_right, p, q) with
    # N_mid^(p+q) < N_left^p * N_right^q


@dataclass(frozen=True)
class IntruderReport:
    spectrum: Spectrum
    intruders: tuple[Intruder, ...]

    def __len__(self):
        return len(self.intruders)

    def intervals(self) -> list[tuple[int, int]]:
        return [(iv.E_start, iv.E_end) for iv in self.intruders]

    def specific_intervals(self) -> list[tuple[float, float]]:
        n = self.spectrum.lattice.n
        return [(iv.E_start / n, iv.E_end / n) for iv in self.intruders]

    def to_csv(self) -> str:
        n = self.spectrum.lattice.n
        lines = ["E_start,E_end,e_start,e_end,witness_count"]
        for iv in self.intruders:
            lines.append(f"{iv.E_start},{iv.E_end},{iv.E_start / n:.10g},"
                         f"{iv.E_end / n:.10g},{len(iv.witnesses)}")
        return "\n".join(lines) + "\n"


def convexity_witness(spec: Spectrum, i: int) -> tuple[int, int, int, int, int] | None:
    """Exact convexity test at interior level i; witness tuple if it holds.

    With gaps d1 = E_i - E_(i-1) and d2 = E_(i+1) - E_i reduced by their gcd
    to q and p, entropy is convex at level i iff
    N_i^(p+q) < N_(i-1)^p * N_(i+1)^q (strict, exact integers).
    """
    lv = spec.levels
    d1 = lv[i].E - lv[i - 1].E
    d2 = lv[i + 1].E - lv[i].E
    g = gcd(d1, d2)
    p, q = d2 // g, d1 // g
    if lv[i].count ** (p + q) < lv[i - 1].count ** p * lv[i + 1].count ** q:
        return (lv[i - 1].E, lv[i].E, lv[i + 1].E, p, q)
    return None


def convex_intruders(spec: Spectrum) -> IntruderReport:
    """All convex intruders: maximal runs of consecutive violating triples.

    A run over middle levels i..j is reported as the interval
    E_(i-1)..E_(j+1).
    """
    if len(spec.levels) < 3:
        raise ValueError("need at least 3 energy levels")
    hits = []
    for i in range(1, len(spec.levels) - 1):
        w = convexity_witness(spec, i)
        if w is not None:
            hits.append((i, w))

    intruders = []
    run: list[tuple[int, tuple]] = []

    def flush():
        if run:
            first, last = run[0][0], run[-1][0]
            intruders.append(Intruder(
                E_start=spec.levels[first - 1].E,
                E_end=spec.levels[last + 1].E,
                witnesses=tuple(w for _, w in run)))

    for i, w in hits:
        if run and i == run[-1][0] + 1:
            run.append((i, w))
        else:
            flush()
            run = [(i, w)]
    flush()
    return IntruderReport(spectrum=spec, intruders=tuple(intruders))
