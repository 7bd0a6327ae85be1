import json

import pytest
from hypothesis import given, settings, strategies as st

from sharpbs.permgroup import (
    CapExceededError,
    CombinatorialBlowupError,
    DegreeMismatchError,
    GroupError,
    PermGroup,
    Permutation,
    PrimeSet,
    alternating_group,
    beta_oracle,
    brute_force_cmc,
    brute_force_cube,
    bs_width_check,
    bs_width_for,
    conjugacy_classes,
    cyclic_group,
    dihedral_group,
    generate_elements,
    group_fixture_names,
    load_group,
    load_group_fixture,
    normal_closure,
    normal_subgroups,
    pi_radical,
    resolve_group,
    subgroup_closure,
    symmetric_group,
)

SMALL = ["S4", "A4", "SL2_3", "D8", "D10", "D12", "F20", "F21", "S3xS3", "A5", "S5", "A6", "PSL2_7"]
PIS = ["2", "3", "5", "7", "2,3", "2,5", "3,5", "not:2", "not:3", "not:5"]


def transposition(n, i, j):
    return Permutation.from_cycles(n, (i, j))


def test_permutation_basics():
    p = Permutation.from_cycles(4, (0, 1, 2))
    q = transposition(4, 0, 1)
    assert (p * q)[0] == q[p[0]]
    assert p * p.inverse() == Permutation.identity(4)
    assert p.order() == 3 and q.order() == 2
    assert p.conjugate(q) == q.inverse() * p * q
    assert repr(p) == "(0,1,2)"
    with pytest.raises(GroupError):
        Permutation([0, 0, 1])
    with pytest.raises(DegreeMismatchError):
        p * Permutation.identity(5)


def test_generate_a5():
    gens = [Permutation.from_cycles(5, (0, 1, 2)), Permutation.from_cycles(5, (0, 1), (2, 3)),
            Permutation.from_cycles(5, (0, 1, 2, 3, 4))]
    assert len(generate_elements(gens)) == 60
    assert len(generate_elements(gens[:1] + gens[2:])) == 60


def test_generate_edge_cases():
    assert generate_elements([], degree=4) == frozenset({Permutation.identity(4)})
    with pytest.raises(CapExceededError):
        generate_elements(symmetric_group(7).generators, cap=1000)
    with pytest.raises(DegreeMismatchError):
        generate_elements([Permutation.identity(3), Permutation.identity(4)])


def test_standard_orders():
    assert symmetric_group(5).order == 120
    assert alternating_group(6).order == 360
    assert cyclic_group(7).order == 7
    assert dihedral_group(6).order == 12


@pytest.mark.parametrize("name,order", [("A5", 60), ("S5", 120), ("A6", 360), ("PSL2_7", 168),
                                        ("M11", 7920), ("S4", 24), ("SL2_3", 24), ("F21", 21)])
def test_fixture_orders(name, order):
    assert load_group_fixture(name).order == order


def test_fixture_files_resolve(tmp_path):
    assert len(group_fixture_names()) == 14
    assert resolve_group("groups/PSL(2,7)").order == 168
    p = tmp_path / "c3.json"
    p.write_text(json.dumps({"name": "C3", "degree": 3, "generators": [[1, 2, 0]]}))
    assert load_group(p).order == 3
    p.write_text(json.dumps({"name": "bad", "degree": 3, "generators": [[1, 0]]}))
    with pytest.raises(DegreeMismatchError):
        load_group(p)
    p.write_text(json.dumps({"name": "bad", "generators": []}))
    with pytest.raises(GroupError):
        load_group(p)


def test_class_structure():
    a5 = load_group_fixture("A5")
    assert [c.size for c in a5.conjugacy_classes] == [1, 15, 20, 12, 12]
    assert [c.name for c in a5.conjugacy_classes] == ["1a", "2a", "3a", "5a", "5b"]
    assert len(load_group_fixture("S5").conjugacy_classes) == 7
    assert len(PermGroup([], degree=3).conjugacy_classes) == 1
    reps = conjugacy_classes(a5)
    assert sum(len(s) for _, s in reps) == 60


def test_normal_closures():
    s4 = load_group_fixture("S4")
    dt = next(c.representative for c in s4.conjugacy_classes if c.element_order == 2 and c.size == 3)
    assert len(normal_closure(s4, dt)) == 4
    assert normal_closure(s4, s4.identity) == frozenset({s4.identity})
    a5 = load_group_fixture("A5")
    assert len(normal_closure(a5, a5.class_ref("3a").representative)) == 60
    with pytest.raises(GroupError):
        normal_closure(a5, transposition(5, 0, 1))


def test_radical_examples():
    assert len(pi_radical(load_group_fixture("S4"), PrimeSet.of(2))) == 4
    assert len(pi_radical(load_group_fixture("A5"), PrimeSet.of(2, 3))) == 1
    s4 = load_group_fixture("S4")
    assert pi_radical(s4, PrimeSet.of(2, 3)) == s4.elements
    assert pi_radical(s4, PrimeSet.all_except(5)) == s4.elements


@pytest.mark.parametrize("name", SMALL)
def test_radical_matches_enumeration(name):
    G = load_group_fixture(name)
    normals = normal_subgroups(G)
    assert normals[0] == frozenset({G.identity}) and normals[-1] == G.elements
    for N in normals:
        assert G.is_normal(N)
    for text in PIS:
        pi = PrimeSet.parse(text)
        R = pi_radical(G, pi)
        assert G.is_normal(R) and pi.is_pi_number(len(R))
        pi_normals = [N for N in normals if pi.is_pi_number(len(N))]
        assert all(N <= R for N in pi_normals)
        assert R in pi_normals


def test_prime_sets():
    pi = PrimeSet.parse("not:5,7")
    assert 2 in pi and 5 not in pi and 11 in pi
    assert str(pi) == "not:5,7"
    assert PrimeSet.parse("2, 3").smallest_prime_outside() == 5
    assert bs_width_for(PrimeSet.of(2)) == 3
    assert bs_width_for(PrimeSet.of(3)) == 2
    assert bs_width_for(PrimeSet.of(2, 3, 5)) == 6
    with pytest.raises(ValueError):
        PrimeSet.parse("4")
    with pytest.raises(ValueError):
        PrimeSet(frozenset())


def test_brute_force_cmc_examples():
    a5 = load_group_fixture("A5")
    assert brute_force_cmc(a5, "1a", "1a", a5.identity) == 1
    s5 = symmetric_group(5)
    trans = s5.class_of(transposition(5, 0, 1))
    three = Permutation.from_cycles(5, (0, 2, 1))
    assert brute_force_cmc(s5, trans, trans, three) > 0


@pytest.mark.parametrize("name", ["A4", "S4", "D10", "A5"])
def test_cube_matches_direct_count_and_counting_identity(name):
    G = load_group_fixture(name)
    cube = brute_force_cube(G)
    classes = G.conjugacy_classes
    for a, A in enumerate(classes):
        for b, B in enumerate(classes):
            assert sum(cube[a][b][c] * C.size for c, C in enumerate(classes)) == A.size * B.size
            for c, C in enumerate(classes):
                assert cube[a][b][c] == brute_force_cmc(G, a, b, C.representative)


def _a5_inside_s5():
    s5 = symmetric_group(5)
    return s5, frozenset(g for g in s5.elements if sum(len(c) - 1 for c in g.cycles()) % 2 == 0)


def test_beta_oracle_examples():
    s5, a5 = _a5_inside_s5()
    t = transposition(5, 0, 1)
    assert beta_oracle(s5, a5, t, 3) == 2
    g = alternating_group(5)
    assert beta_oracle(g, g, Permutation.from_cycles(5, (0, 1, 2)), 3) == 1
    assert beta_oracle(g, g, Permutation.from_cycles(5, (0, 1), (2, 3)), 5) == 2
    with pytest.raises(GroupError):
        beta_oracle(g, g, Permutation.from_cycles(5, (0, 1, 2)), 7)


def test_beta_oracle_transposition_is_r_minus_one():
    s5, a5 = _a5_inside_s5()
    t = transposition(5, 0, 1)
    assert beta_oracle(s5, a5, t, 5, k_max=5) == 4


def test_beta_oracle_monotone_in_k_max():
    s5, a5 = _a5_inside_s5()
    t = transposition(5, 0, 1)
    results = [beta_oracle(s5, a5, t, 5, k_max=k) for k in range(1, 6)]
    assert results == [None, None, None, 4, 4]


def test_beta_oracle_sampling_is_seeded():
    s6 = symmetric_group(6)
    a6 = alternating_group(6).elements
    t = transposition(6, 0, 1)
    a = beta_oracle(s6, a6, t, 5, k_max=4, max_tuples=10, samples=500, seed=3)
    b = beta_oracle(s6, a6, t, 5, k_max=4, max_tuples=10, samples=500, seed=3)
    assert a == b == 4


def test_bs_check_examples():
    s4 = load_group_fixture("S4")
    assert bs_width_check(s4, PrimeSet.of(2, 3), 1).status == "PASS"
    rep = bs_width_check(s4, PrimeSet.of(2), 2)
    assert rep.status == "PASS" and rep.radical_order == 4
    inside = [c.name for c in rep.classes if c.inside_radical]
    assert inside == ["1a", "2a"]
    assert bs_width_check(load_group_fixture("A5"), PrimeSet.of(2, 3), 2).passed


def test_bs_check_too_small_width_fails():
    # the product of two reflections in D10 is a rotation of order 5, but a
    # single reflection only generates a 2-group
    d10 = load_group_fixture("D10")
    assert bs_width_check(d10, PrimeSet.of(2), 1).status == "FAIL"
    assert bs_width_check(d10, PrimeSet.of(2), 2).status == "PASS"


def test_bs_check_blowup_and_sampling():
    a6 = load_group_fixture("A6")
    with pytest.raises(CombinatorialBlowupError):
        bs_width_check(a6, PrimeSet.of(2, 3), 5, max_tuples=10**6)
    rep = bs_width_check(a6, PrimeSet.of(2, 3), 3, mode="sampled", samples=0)
    assert rep.status == "INCONCLUSIVE"
    one = bs_width_check(a6, PrimeSet.of(2, 3), 3, mode="sampled", seed=11, samples=50)
    two = bs_width_check(a6, PrimeSet.of(2, 3), 3, mode="sampled", seed=11, samples=50)
    assert one.to_dict() == two.to_dict()
    with pytest.raises(GroupError):
        bs_width_check(a6, PrimeSet.of(2), 0)


perms6 = st.permutations(list(range(6))).map(Permutation)


@settings(max_examples=40, deadline=None)
@given(st.lists(perms6, min_size=1, max_size=3))
def test_group_axioms_on_random_subgroups(gens):
    G = PermGroup(gens)
    E = G.elements
    assert 720 % len(E) == 0
    for g in E:
        assert g.inverse() in E
    for g in gens:
        assert g in E
    sizes = [c.size for c in G.conjugacy_classes]
    assert sum(sizes) == len(E)
    assert all(len(E) % s == 0 for s in sizes)
    x = max(gens)
    N = normal_closure(G, x)
    assert G.is_normal(N) and x in N
    assert subgroup_closure(list(N), degree=6) == N
