from fractions import Fraction
from math import comb

import pytest

import latsym as ls
from latsym.mesoscopic import Spectrum, Level, convex_intruders, convexity_witness
from latsym.statespace import State

from oracles import brute_energy, brute_histogram


def spectrum_of(store, spec, **kw):
    return ls.density_of_states(store.table(spec), **kw)


# ---- Hamiltonian ---------------------------------------------------------------

def test_uniform_states_ground(store):
    lat = store.lattice("dodecahedron")
    ones = State(code=2 ** 20 - 1, q=2, n=20)
    zeros = State(code=0, q=2, n=20)
    assert ls.ising_energy(lat, ones) == -30
    assert ls.ising_energy(lat, zeros) == -30


def test_alternating_circle():
    lat = ls.make_named("circle", 24)
    alternating = State.from_digits([i % 2 for i in range(24)])
    assert ls.ising_energy(lat, alternating) == 24


def test_single_flip_from_ground():
    lat = ls.make_named("circle", 24)
    one_flip = State(code=1, q=2, n=24)  # a single +1 among -1 spins
    assert ls.ising_energy(lat, one_flip) == -20  # two broken bonds: -24 + 4
    assert brute_energy(lat, 1) == -20


def test_energy_matches_definition_with_fields():
    lat = ls.make_named("tetrahedron")
    for code in range(16):
        for J, B in ((1, 0), (2, 0), (1, 3), (-1, 1)):
            s = State(code=code, q=2, n=4)
            assert ls.ising_energy(lat, s, J=J, B=B) == brute_energy(lat, code, J, B)


def test_energy_rejects_non_binary():
    lat = ls.make_named("circle", 3)
    with pytest.raises(ValueError):
        ls.ising_energy(lat, State(code=0, q=3, n=3))


# ---- density of states vs raw enumeration ----------------------------------------

@pytest.mark.parametrize("spec", ["tetrahedron", "hexahedron", "icosahedron"])
def test_spectrum_equals_raw_histogram(store, spec):
    spectrum = spectrum_of(store, spec)
    expected = brute_histogram(store.lattice(spec))
    assert {lv.E: lv.count for lv in spectrum.levels} == expected


def test_spectrum_with_field_matches_raw(store):
    spectrum = ls.density_of_states(store.table("tetrahedron"), J=2, B=1)
    assert {lv.E: lv.count for lv in spectrum.levels} == \
        brute_histogram(store.lattice("tetrahedron"), J=2, B=1)


def test_dodecahedron_spectrum(store):
    spectrum = spectrum_of(store, "dodecahedron")
    assert spectrum.total == 2 ** 20
    assert sum(lv.count for lv in spectrum.levels) == 2 ** 20
    assert spectrum.count_at(-30) == 2
    # computed extremes: ground at -edges, top at +18 (max cut 24 of 30)
    assert spectrum.levels[0].E == -30
    assert spectrum.levels[-1].E == 18


def test_circle24_levels_match_binomial_formula(store):
    # b broken bonds (b even) give E = -24 + 2b and 2*C(24, b) states
    spectrum = spectrum_of(store, "circle(24)")
    expected = {-24 + 2 * b: 2 * comb(24, b) for b in range(0, 25, 2)}
    assert {lv.E: lv.count for lv in spectrum.levels} == expected
    assert spectrum.energies == tuple(range(-24, 25, 4))


def test_flip_symmetry_of_magnetization(store):
    for spec in ("hexahedron", "dodecahedron"):
        for lv in spectrum_of(store, spec).levels:
            assert lv.min_m == -lv.max_m
            assert lv.mean_abs_m >= 0


def test_bipartite_spectrum_symmetry(store):
    # hexahedron is bipartite: flipping one part negates the energy
    spectrum = spectrum_of(store, "hexahedron")
    counts = {lv.E: lv.count for lv in spectrum.levels}
    assert counts == {-e: c for e, c in counts.items()}


def test_magnetization_statistics_tetrahedron(store):
    spectrum = spectrum_of(store, "tetrahedron")
    by_E = {lv.E: lv for lv in spectrum.levels}
    hist = brute_histogram(store.lattice("tetrahedron"))
    assert {e: lv.count for e, lv in by_E.items()} == hist
    # ground level of K4 = the two uniform states, |M| = 4
    assert by_E[-6].count == 2
    assert by_E[-6].mean_abs_m == Fraction(4)
    assert by_E[-6].min_m == -4 and by_E[-6].max_m == 4


# ---- entropy curve -----------------------------------------------------------------

def test_entropy_curve_values(store):
    import math
    spectrum = spectrum_of(store, "dodecahedron")
    curve = ls.entropy_curve(spectrum)
    assert len(curve) == len(spectrum.levels)
    e0, s0 = curve[0]
    assert e0 == -1.5
    assert s0 == pytest.approx(math.log(2) / 20)
    # top of the computed range: e = 18/20
    assert curve[-1][0] == pytest.approx(0.9)
    assert all(s >= 0 for _, s in curve)


def test_entropy_zero_for_unique_level():
    lat = ls.make_named("circle", 3)
    spec = Spectrum(lattice=lat, J=1, B=0, total=8, levels=(
        Level(E=-3, count=1, min_m=3, max_m=3, mean_abs_m=Fraction(3)),
        Level(E=1, count=7, min_m=-3, max_m=1, mean_abs_m=Fraction(1)),
    ))
    curve = ls.entropy_curve(spec)
    assert curve[0][1] == 0.0


# ---- convex intruders -----------------------------------------------------------------

def test_dodecahedron_intruders(store):
    report = convex_intruders(spectrum_of(store, "dodecahedron"))
    assert report.intervals() == [(-24, -18), (-16, -12)]
    assert report.specific_intervals() == [(-1.2, -0.9), (-0.8, -0.6)]
    # the first interval merges two consecutive violating triples
    assert len(report.intruders[0].witnesses) == 2
    assert len(report.intruders[1].witnesses) == 1


def test_circle24_fully_concave(store):
    spectrum = spectrum_of(store, "circle(24)")
    report = convex_intruders(spectrum)
    assert report.intervals() == []
    # every interior triple satisfies the concave (non-intruder) direction
    for i in range(1, len(spectrum.levels) - 1):
        assert convexity_witness(spectrum, i) is None


def test_equal_spacing_reduces_to_geometric_mean(store):
    # on equally spaced levels the exact test is N^2 < left * right
    spectrum = spectrum_of(store, "circle(6)")
    levels = spectrum.levels
    for i in range(1, len(levels) - 1):
        if levels[i + 1].E - levels[i].E == levels[i].E - levels[i - 1].E:
            expected = levels[i].count ** 2 < levels[i - 1].count * levels[i + 1].count
            assert (convexity_witness(spectrum, i) is not None) == expected


def test_witnesses_satisfy_inequality(store):
    report = convex_intruders(spectrum_of(store, "dodecahedron"))
    counts = {lv.E: lv.count for lv in report.spectrum.levels}
    for intruder in report.intruders:
        assert intruder.E_start in counts and intruder.E_end in counts
        for (el, em, er, p, q) in intruder.witnesses:
            assert counts[em] ** (p + q) < counts[el] ** p * counts[er] ** q


def test_exactness_beats_floats():
    # counts engineered so the strict integer comparison is decisive while
    # float logs of lhs and rhs agree to machine precision
    lat = ls.make_named("circle", 3)
    big = 10 ** 200
    levels = (
        Level(E=-1, count=big, min_m=0, max_m=0, mean_abs_m=Fraction(0)),
        Level(E=0, count=big, min_m=0, max_m=0, mean_abs_m=Fraction(0)),
        Level(E=1, count=big + 1, min_m=0, max_m=0, mean_abs_m=Fraction(0)),
    )
    spec = Spectrum(lattice=lat, J=1, B=0, total=3 * big + 1, levels=levels)
    report = convex_intruders(spec)
    assert report.intervals() == [(-1, 1)]  # big^2 < big * (big+1), strictly
    # equality case is NOT an intruder under the strict inequality
    levels_eq = (levels[0], levels[1],
                 Level(E=1, count=big, min_m=0, max_m=0, mean_abs_m=Fraction(0)))
    spec_eq = Spectrum(lattice=lat, J=1, B=0, total=3 * big, levels=levels_eq)
    assert convex_intruders(spec_eq).intervals() == []


def test_unequal_spacing_uses_reduced_ratio(store):
    # dodecahedron bottom triple (-30, -24, -22): gaps 6 and 2 reduce to
    # p = 1, q = 3; it must not be reported as an intruder
    spectrum = spectrum_of(store, "dodecahedron")
    assert spectrum.levels[0].E == -30 and spectrum.levels[1].E == -24
    w = convexity_witness(spectrum, 1)
    counts = {lv.E: lv.count for lv in spectrum.levels}
    lhs = counts[-24] ** 4
    rhs = counts[-30] ** 1 * counts[-22] ** 3
    assert (w is not None) == (lhs < rhs)


def test_intruders_need_three_levels():
    lat = ls.make_named("circle", 3)
    spec = Spectrum(lattice=lat, J=1, B=0, total=8, levels=(
        Level(E=-3, count=2, min_m=-3, max_m=3, mean_abs_m=Fraction(3)),
        Level(E=1, count=6, min_m=-1, max_m=1, mean_abs_m=Fraction(1)),
    ))
    with pytest.raises(ValueError):
        convex_intruders(spec)


# ---- CSV ------------------------------------------------------------------------------

def test_spectrum_csv(store):
    csv = spectrum_of(store, "tetrahedron").to_csv().splitlines()
    assert csv[0] == "E,e,N_E,s,min_M,max_M,mean_abs_M"
    assert csv[1].startswith("-6,-1.5,2,")
    assert csv[1].endswith(",-4,4,4/1")


def test_intruder_csv(store):
    csv = convex_intruders(spectrum_of(store, "dodecahedron")).to_csv().splitlines()
    assert csv[0] == "E_start,E_end,e_start,e_end,witness_count"
    assert csv[1] == "-24,-18,-1.2,-0.9,2"
    assert csv[2] == "-16,-12,-0.8,-0.6,1"
