import numpy as np
import pytest

from ffsets import (AvoidanceInstance, PointSet, build_witness,
                    difference_matrix, enumerate_image, field_from_q,
                    greedy_avoiding, hoeffding_bound, kth_power_map,
                    max_avoiding_exhaustive, rank_gf, verify_avoiding)
from ffsets.errors import ResourceGuardError


def test_enumerate_image_examples():
    f = field_from_q(2)
    # cubes of constants only (m = 1)
    assert list(enumerate_image(kth_power_map(f, 3, 3))) == [0, 1]
    # cubes of linear polynomials: 0, 1, T^3, 1+T+T^2+T^3
    assert list(enumerate_image(kth_power_map(f, 4, 3))) == [0, 1, 8, 15]


def test_enumerate_image_identity():
    from ffsets.polyring import Poly
    from ffsets.witness import PolynomialMap
    f = field_from_q(3)
    phi = PolynomialMap(f, 2, 2, [Poly.variable(f, 2, i) for i in range(2)])
    assert list(enumerate_image(phi)) == list(range(9))


def test_instance_from_map_records_symmetry():
    f3 = field_from_q(3)
    inst = AvoidanceInstance.from_map(kth_power_map(f3, 3, 2))
    assert inst.image_size == len(enumerate_image(kth_power_map(f3, 3, 2)))
    assert 0 not in inst.forbidden
    # closed under negation by construction
    from ffsets.field import point_neg
    negs = np.sort(point_neg(f3, 3, inst.forbidden))
    assert np.array_equal(np.sort(inst.forbidden), negs)
    # char 2 images are automatically symmetric
    f2 = field_from_q(2)
    inst2 = AvoidanceInstance.from_map(kth_power_map(f2, 4, 3))
    assert inst2.image_is_symmetric


def test_verify_avoiding_examples():
    f = field_from_q(2)
    inst = AvoidanceInstance.from_forbidden(f, 3, [1])
    assert verify_avoiding(PointSet(f, 3, [0]), inst)
    # {0, T, T^2, T+T^2} pairwise differs by multiples of T
    assert verify_avoiding(PointSet(f, 3, [0, 2, 4, 6]), inst)
    assert not verify_avoiding(PointSet(f, 3, [0, 1]), inst)
    assert not verify_avoiding(PointSet(f, 3, range(8)), inst)


def test_exhaustive_no_forbidden():
    f = field_from_q(3)
    inst = AvoidanceInstance.from_forbidden(f, 2, [])
    r = max_avoiding_exhaustive(inst)
    assert r.best_size == 9 and r.optimal
    assert verify_avoiding(r.best_set, inst)


def test_exhaustive_cube_example():
    f = field_from_q(2)
    inst = AvoidanceInstance.from_map(kth_power_map(f, 3, 3))
    r = max_avoiding_exhaustive(inst)
    assert r.best_size == 4 and r.optimal
    assert r.best_set.indices == (0, 2, 4, 6)  # lexicographically least


def test_exhaustive_lex_least_deterministic():
    f = field_from_q(2)
    inst = AvoidanceInstance.from_map(kth_power_map(f, 4, 3))
    r1 = max_avoiding_exhaustive(inst)
    r2 = max_avoiding_exhaustive(inst)
    assert r1.best_set == r2.best_set and r1.best_size == r2.best_size == 8
    assert r1.optimal
    # no avoiding set of the same size is lexicographically smaller
    assert r1.best_set.indices[0] == 0


def test_exhaustive_matches_brute_force_tiny():
    import itertools
    f = field_from_q(3)
    inst = AvoidanceInstance.from_map(kth_power_map(f, 2, 2))
    r = max_avoiding_exhaustive(inst)
    space = 9
    bad = set(int(x) for x in inst.forbidden)
    best = 0
    best_set = None
    for size in range(space, 0, -1):
        for combo in itertools.combinations(range(space), size):
            ok = all((a - b) % 3 + 3 * ((a // 3 - b // 3) % 3) not in bad
                     for a in combo for b in combo if a != b)
            if ok:
                best, best_set = size, combo
                break
        if best:
            break
    assert r.best_size == best
    assert r.best_set.indices == best_set  # both are lex least


def test_budget_exhaustion_returns_valid_set():
    f = field_from_q(3)
    inst = AvoidanceInstance.from_map(kth_power_map(f, 5, 2))
    r = max_avoiding_exhaustive(inst, budget=500)
    assert not r.optimal
    assert r.best_size >= 1
    assert verify_avoiding(r.best_set, inst)
    assert r.nodes_explored <= 500 + 2


def test_greedy_basics():
    f = field_from_q(2)
    inst = AvoidanceInstance.from_forbidden(f, 3, [])
    assert greedy_avoiding(inst).best_size == 8
    inst2 = AvoidanceInstance.from_map(kth_power_map(f, 4, 3))
    g = greedy_avoiding(inst2)
    assert not g.optimal
    assert verify_avoiding(g.best_set, inst2)
    e = max_avoiding_exhaustive(inst2)
    assert g.best_size <= e.best_size


def test_greedy_seeded_still_avoiding():
    f = field_from_q(3)
    inst = AvoidanceInstance.from_map(kth_power_map(f, 4, 2))
    for seed in (None, 0, 1):
        g = greedy_avoiding(inst, seed=seed)
        assert verify_avoiding(g.best_set, inst)
        # deterministic per seed
        assert g.best_set == greedy_avoiding(inst, seed=seed).best_set


def test_rank_identity_on_found_sets():
    for q, n, k in [(2, 5, 3), (3, 4, 2), (5, 3, 2)]:
        f = field_from_q(q)
        phi = kth_power_map(f, n, k)
        inst = AvoidanceInstance.from_map(phi)
        r = max_avoiding_exhaustive(inst, budget=200_000)
        rep = build_witness(phi)
        m = difference_matrix(rep.polynomial(), r.best_set)
        assert rank_gf(m.entries, f) == r.best_size


def test_k_equals_q_pigeonhole():
    # image is a subgroup: cosets are cliques, optimum is one per coset
    for q, n in [(2, 6), (3, 4), (5, 3)]:
        f = field_from_q(q)
        phi = kth_power_map(f, n, q)
        inst = AvoidanceInstance.from_map(phi)
        r = max_avoiding_exhaustive(inst)
        assert r.optimal
        assert r.best_size == q ** (n - phi.m)
        assert r.best_size <= q * q ** ((1 - 1 / q) * n) + 1e-9


def test_theorem3_bound_on_found_sets():
    for q, n, k in [(2, 6, 3), (2, 8, 5), (3, 4, 2)]:
        f = field_from_q(q)
        phi = kth_power_map(f, n, k)
        inst = AvoidanceInstance.from_map(phi)
        r = max_avoiding_exhaustive(inst, budget=200_000)
        bound = hoeffding_bound(q, n, phi.m, phi.degree)
        vacuous = bound >= q ** n
        if not vacuous:
            assert r.best_size <= bound
        assert verify_avoiding(r.best_set, inst)


def test_exhaustive_guard():
    f = field_from_q(2)
    inst = AvoidanceInstance.from_forbidden(f, 15, [1])
    with pytest.raises(ResourceGuardError):
        max_avoiding_exhaustive(inst)


def test_set_file_roundtrip():
    f = field_from_q(2)
    inst = AvoidanceInstance.from_map(kth_power_map(f, 4, 3))
    r = max_avoiding_exhaustive(inst)
    text = r.best_set.to_text()
    assert PointSet.from_text(f, text) == r.best_set
