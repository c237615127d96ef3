"""Independent brute-force reference implementations used by the tests.

Nothing here touches the package's enumeration or portrait machinery: the
point is to check the fast paths against slow, obviously-correct code.
"""

from itertools import permutations


def brute_automorphisms(lat):
    """All adjacency-preserving permutations by filtering S_n (n <= 8).

    Mapping every edge to an edge suffices: the edge count is finite and
    the permutation is injective, so non-edges map to non-edges too.
    """
    edges = {frozenset(e) for e in lat.edges()}
    out = []
    for perm in permutations(range(lat.n)):
        if all(frozenset((perm[a], perm[b])) in edges for a, b in lat.edges()):
            out.append(perm)
    return out


def digits_of(code, q, n):
    out = []
    for _ in range(n):
        out.append(code % q)
        code //= q
    return tuple(reversed(out))


def code_of(digits, q):
    code = 0
    for d in digits:
        code = code * q + d
    return code


def apply_perm(images, code, q, n):
    """Definition-level action: new value at x is the old value at g^-1(x)."""
    inv = [0] * n
    for i, im in enumerate(images):
        inv[im] = i
    digits = digits_of(code, q, n)
    return code_of([digits[inv[x]] for x in range(n)], q)


def brute_orbits(group, q, n):
    """Orbit partition of all q^n states by direct group application."""
    seen = [False] * q ** n
    orbits = []
    for code in range(q ** n):
        if seen[code]:
            continue
        orbit = {apply_perm(g.images, code, q, n) for g in group.elements}
        for c in orbit:
            seen[c] = True
        orbits.append(orbit)
    return orbits


def brute_step(lat, rule, code):
    """Definition-level CA update on digit lists."""
    n = lat.n
    digits = digits_of(code, 2, n)
    new = []
    for v in range(n):
        s = sum(digits[u] for u in lat.adjacency[v])
        new.append(rule.value(s, digits[v]))
    return code_of(new, 2)


def brute_is_bijection(lat, rule):
    images = {brute_step(lat, rule, c) for c in range(2 ** lat.n)}
    return len(images) == 2 ** lat.n


def brute_energy(lat, code, J=1, B=0):
    """Hamiltonian from the definition: -J sum s_i s_j - B sum s_i."""
    spins = [2 * d - 1 for d in digits_of(code, 2, lat.n)]
    pair = sum(spins[i] * spins[j] for i, j in lat.edges())
    return -J * pair - B * sum(spins)


def brute_histogram(lat, J=1, B=0):
    hist = {}
    for code in range(2 ** lat.n):
        e = brute_energy(lat, code, J, B)
        hist[e] = hist.get(e, 0) + 1
    return hist
