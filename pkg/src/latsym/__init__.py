"""Exact symmetry analysis of discrete dynamics and Ising statistics on lattices."""

from .lattice import Lattice, LatticeError, ParseError, make_named, from_spec, parse, serialize
from .symmetry import (Perm, PermGroup, GroupCapExceeded, automorphisms,
                       vertex_orbits, is_transitive, burnside_count,
                       square_group_order, translation_group)
from .statespace import (State, OrbitTable, StateCapExceeded, act, canonical,
                         enumerate_orbits)
from .rules import Rule, Gf2Polynomial, count_rules, count_classes, class_representatives
from .dynamics import (step, Portrait, CycleRecord, TrajectoryResult,
                       TrajectoryBudgetExceeded, build_portrait, is_reversible,
                       gardens_of_eden, scan_rules, trajectory_analysis)
from .mesoscopic import (Level, Spectrum, Intruder, IntruderReport, ising_energy,
                         density_of_states, entropy_curve, convex_intruders)

__version__ = "0.1.0"
