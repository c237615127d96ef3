import random

import pytest

import latsym as ls
from latsym.symmetry import GroupCapExceeded, Perm, PermGroup, permutation_dump

from oracles import brute_automorphisms

random.seed(20260808)


# ---- Perm basics ----------------------------------------------------------

def test_perm_compose_inverse():
    g = Perm((1, 2, 0, 3))
    h = Perm((0, 1, 3, 2))
    assert (g * h).images == tuple(g.images[h.images[x]] for x in range(4))
    assert (g * g.inverse()).is_identity()
    assert g.inverse().inverse() == g


def test_perm_rejects_non_bijection():
    with pytest.raises(ValueError):
        Perm((0, 0, 1))


def test_perm_cycles():
    g = Perm((1, 0, 2, 4, 3))
    assert g.cycles() == [(0, 1), (3, 4)]
    assert g.n_cycles() == 3  # two transpositions plus the fixed point
    assert g.cycle_string() == "(0 1)(3 4)"
    assert Perm.identity(3).cycle_string() == "()"


# ---- automorphism groups vs brute force (n <= 8) --------------------------

@pytest.mark.parametrize("spec", [
    "tetrahedron", "hexahedron", "circle(3)", "circle(4)",
    "circle(5)", "circle(6)", "circle(8)",
])
def test_automorphisms_match_brute_force(spec):
    lat = ls.from_spec(spec)
    group = ls.automorphisms(lat)
    expected = sorted(brute_automorphisms(lat))
    assert [g.images for g in group.elements] == expected


# ---- group orders of the named lattice families ----------------------------

GROUP_ORDERS = [
    ("tetrahedron", 24),
    ("hexahedron", 48),
    ("icosahedron", 120),
    ("dodecahedron", 120),
    ("buckyball", 120),
    ("circle(6)", 12),
    ("circle(24)", 48),
    ("graphene(6,4,torus)", 48),
    ("graphene(6,4,klein)", 16),
    ("triangular(4,6)", 96),
    ("square(5,vonneumann,torus)", 200),
]


@pytest.mark.parametrize("spec,order", GROUP_ORDERS)
def test_group_orders(spec, order):
    lat = ls.from_spec(spec)
    group = ls.automorphisms(lat)
    assert group.order == order
    assert len(group.generators) <= lat.n - 1


def test_every_element_preserves_adjacency():
    for spec in ("dodecahedron", "graphene(6,4,klein)", "buckyball"):
        lat = ls.from_spec(spec)
        edges = {frozenset(e) for e in lat.edges()}
        for g in ls.automorphisms(lat).elements:
            assert all(frozenset((g(a), g(b))) in edges for a, b in lat.edges())


def test_group_axioms_on_medium_groups():
    for spec in ("hexahedron", "circle(6)"):
        ls.automorphisms(ls.from_spec(spec)).verify_closure()


def test_elements_sorted_deterministically():
    group = ls.automorphisms(ls.make_named("icosahedron"))
    images = [g.images for g in group.elements]
    assert images == sorted(images)
    assert group.elements[0].is_identity()  # identity is lex-least


def test_generators_regenerate_group():
    group = ls.automorphisms(ls.make_named("dodecahedron"))
    regen = PermGroup.from_generators(group.degree, group.generators)
    assert regen == group


def test_group_cap():
    # Moore 3x3 is the complete graph K9: |Aut| = 9! far above a tiny cap
    lat = ls.make_named("square", 3, "moore", "torus")
    with pytest.raises(GroupCapExceeded):
        ls.automorphisms(lat, cap=1000)


# ---- vertex orbits and transitivity ---------------------------------------

def test_klein_graphene_vertex_orbits():
    group = ls.automorphisms(ls.make_named("graphene", 6, 4, "klein"))
    sizes = sorted(len(o) for o in ls.vertex_orbits(group))
    assert sizes == [8, 16]
    assert not ls.is_transitive(group)


def test_dodecahedron_transitive():
    group = ls.automorphisms(ls.make_named("dodecahedron"))
    orbits = ls.vertex_orbits(group)
    assert len(orbits) == 1 and len(orbits[0]) == 20
    assert ls.is_transitive(group)


def test_torus_graphene_transitive():
    assert ls.is_transitive(ls.automorphisms(ls.make_named("graphene", 6, 4, "torus")))


def test_trivial_group_orbits():
    group = PermGroup.trivial(5)
    assert ls.vertex_orbits(group) == [(0,), (1,), (2,), (3,), (4,)]
    assert not ls.is_transitive(group)
    assert ls.is_transitive(PermGroup.trivial(1))


# ---- Burnside --------------------------------------------------------------

def test_burnside_table_values(store):
    assert ls.burnside_count(store.group("dodecahedron"), 2) == 9436
    assert ls.burnside_count(store.group("buckyball"), 2) == 9607679885269312


def test_burnside_trivial_group():
    assert ls.burnside_count(PermGroup.trivial(3), 2) == 8


def test_burnside_circle6():
    # frozen from the brute-force orbit partition of 64 states under D6
    group = ls.automorphisms(ls.make_named("circle", 6))
    assert ls.burnside_count(group, 2) == 13


def test_burnside_q_values():
    group = ls.automorphisms(ls.make_named("tetrahedron"))
    # S4 acting on q^4 colorings: multiset count C(q+3, 4)... checked small
    assert ls.burnside_count(group, 1) == 1
    assert ls.burnside_count(group, 3) == 15


# ---- square lattice group formula ------------------------------------------

def test_square_group_order_formula():
    assert ls.square_group_order(5) == 200
    assert ls.square_group_order(4) == 384
    assert ls.square_group_order(3) == 72
    with pytest.raises(ValueError):
        ls.square_group_order(2)


@pytest.mark.parametrize("N", [3, 4, 5, 6])
def test_vonneumann_matches_formula(N):
    lat = ls.make_named("square", N, "vonneumann", "torus")
    assert ls.automorphisms(lat).order == ls.square_group_order(N)


@pytest.mark.parametrize("N", [5, 6])
def test_moore_same_group_as_vonneumann(N):
    # holds for generic N; at N=3 Moore degenerates to K9 and at N=4 the
    # von Neumann graph is the 4-cube with extra symmetry the Moore graph
    # does not share
    vn = ls.automorphisms(ls.make_named("square", N, "vonneumann", "torus"))
    mo = ls.automorphisms(ls.make_named("square", N, "moore", "torus"))
    assert vn == mo


def test_moore_4x4_follows_generic_formula():
    lat = ls.make_named("square", 4, "moore", "torus")
    assert ls.automorphisms(lat).order == 8 * 16  # no 384 anomaly here


# ---- translations subgroup ---------------------------------------------------

def test_translation_group():
    lat = ls.make_named("square", 5, "moore", "torus")
    trans = ls.translation_group(lat)
    assert trans.order == 25
    full = set(ls.automorphisms(lat).elements)
    assert all(t in full for t in trans.elements)
    with pytest.raises(ls.LatticeError):
        ls.translation_group(ls.make_named("dodecahedron"))


# ---- dumps -------------------------------------------------------------------

def test_permutation_dump_styles():
    group = ls.automorphisms(ls.make_named("circle", 3))
    cyc = permutation_dump(group, "cycles").splitlines()
    img = permutation_dump(group, "images").splitlines()
    assert len(cyc) == len(img) == 6
    assert cyc[0] == "()"
    assert img[0] == "0,1,2"
    with pytest.raises(ValueError):
        permutation_dump(group, "matrix")
