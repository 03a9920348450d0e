import pytest
from hypothesis import given, settings, strategies as st

from cartanhunt.builtins import builtin_group, builtin_subgroup
from cartanhunt.cartan import det_exact, identity_decomposition
from cartanhunt.chartab import character_table
from cartanhunt.hunt import (bounded_nonnegative_solutions, conjugacy_orbit,
                             enumerate_pair_subgroups, find_conjugate, kernel_vectors,
                             make_pool, search_bruteforce, search_kernel_guided,
                             verify_counterexample)
from conftest import PARTITION_ORDER


@pytest.fixture(scope="module")
def trio_pool(s3_table, s3_trio):
    return make_pool(s3_table, s3_trio)


class TestEnumeration:
    def test_trivial_group(self):
        pool = enumerate_pair_subgroups(builtin_group("trivial"))
        assert len(pool.candidates) == 1 and pool.candidates[0].subgroup.order == 1

    def test_c2(self):
        # C2 x C2 is abelian: five subgroups, all self-conjugate
        pool = enumerate_pair_subgroups(builtin_group("C2"))
        assert sorted(c.subgroup.order for c in pool.candidates) == [1, 2, 2, 2, 4]

    def test_s3_contains_s3_trio(self, S3, s3_table):
        pool = enumerate_pair_subgroups(S3, table=s3_table)
        for name in ("diag", "Lb", "Lc"):
            assert find_conjugate(pool, builtin_subgroup(S3, name)) is not None
        assert len(pool.candidates) == 21

    def test_no_two_candidates_conjugate(self, S3):
        pool = enumerate_pair_subgroups(S3)
        keys = [tuple(sorted(c.subgroup.flat)) for c in pool.candidates]
        for i, k in enumerate(keys):
            orbit = conjugacy_orbit(S3, k)
            assert not any(other in orbit for other in keys[i + 1:])

    def test_order_cap_and_limit(self, S3):
        capped = enumerate_pair_subgroups(S3, order_cap=6)
        assert max(c.subgroup.order for c in capped.candidates) <= 6
        limited = enumerate_pair_subgroups(S3, limit=3)
        assert limited.truncated and len(limited.candidates) == 3

    def test_deterministic(self, S3):
        a = enumerate_pair_subgroups(S3)
        b = enumerate_pair_subgroups(S3)
        assert [c.subgroup.flat for c in a.candidates] == [c.subgroup.flat for c in b.candidates]


class TestBoxSearch:
    def test_finds_small_counterexample(self, trio_pool, D3, s3_table):
        res = search_bruteforce(trio_pool, D3, 10)
        hit = res.found
        assert hit is not None and tuple(hit.z) == (0, 1, 6)
        assert hit.complex.reindexed(PARTITION_ORDER).tolist() == [[8, 1, 6], [2, 3, 0], [1, 1, 1]]
        assert hit.det_complex == 16
        assert hit.modular.tolist() == [[14, 10], [7, 5]]
        assert hit.det_modular == 0

    def test_thread_count_does_not_change_result(self, trio_pool, D3):
        one = search_bruteforce(trio_pool, D3, 10, all_hits=True)
        four = search_bruteforce(trio_pool, D3, 10, all_hits=True, threads=4)
        assert [h.z for h in one.hits] == [h.z for h in four.hits]
        assert search_bruteforce(trio_pool, D3, 10, threads=4).found.z == (0, 1, 6)

    def test_identity_decomposition_exhausts(self, trio_pool, s3_table):
        D = identity_decomposition(s3_table.labels, 5, 6)
        res = search_bruteforce(trio_pool, D, 10)
        assert res.exhausted and res.scanned == 11 ** 3

    def test_empty_pool(self, s3_table, D3):
        pool = make_pool(s3_table, [])
        res = search_bruteforce(pool, D3, 10)
        assert res.exhausted
        assert det_exact(D3.gram()) == 3

    def test_every_hit_verifies(self, S3, s3_table, trio_pool, s3_trio, D3):
        res = search_bruteforce(trio_pool, D3, 6, all_hits=True)
        assert res.hits
        for hit in res.hits[:5]:
            rep = verify_counterexample(S3, s3_trio, hit.z, D3, s3_table, oracle=False)
            assert rep.passed


class TestKernelSearch:
    def test_kernel_vectors(self):
        vs = list(kernel_vectors(2, 2))
        assert vs[:4] == [(0, 1), (1, -1), (1, 0), (1, 1)]
        assert (0, 0) not in vs and (2, 2) not in vs and (-1, 0) not in vs
        assert (16, -17) in set(kernel_vectors(2, 17))

    def test_bounded_solutions(self):
        # x + y = 3 with 0 <= x, y <= 2
        assert sorted(bounded_nonnegative_solutions([[1, 1]], [3], 2)) == [(1, 2), (2, 1)]
        assert list(bounded_nonnegative_solutions([[1, 1]], [-1], 5)) == []
        assert list(bounded_nonnegative_solutions([[2, 0]], [3], 5)) == []
        assert list(bounded_nonnegative_solutions([[1, 0], [1, 0]], [1, 2], 5)) == []

    def test_first_hit(self, trio_pool, D3):
        res = search_kernel_guided(trio_pool, D3, 32, 500)
        assert not res.exhausted
        assert res.found.det_modular == 0 and res.found.det_complex != 0

    def test_reaches_reference_configuration(self, trio_pool, D3):
        res = search_kernel_guided(trio_pool, D3, 32, 500, all_hits=True)
        zs = {tuple(h.z) for h in res.hits}
        assert (4, 2, 165) in zs
        ref = next(h for h in res.hits if tuple(h.z) == (4, 2, 165))
        assert ref.kernel == [16, -17]

    def test_identity_decomposition_exhausts(self, trio_pool, s3_table):
        D = identity_decomposition(s3_table.labels, 5, 6)
        assert search_kernel_guided(trio_pool, D, 8, 100).exhausted

    def test_routes_agree_inside_box(self, trio_pool, D3):
        box = {tuple(h.z) for h in search_bruteforce(trio_pool, D3, 10, all_hits=True).hits}
        kern = {tuple(h.z) for h in search_kernel_guided(trio_pool, D3, 32, 10,
                                                         all_hits=True).hits}
        assert kern <= box
        assert (0, 1, 6) in kern


class TestVerify:
    def test_reference_configuration(self, S3, s3_table, s3_trio, D3):
        rep = verify_counterexample(S3, s3_trio, [4, 2, 165], D3, s3_table,
                                    full_oracle=True)
        assert rep.passed
        assert rep.det_complex == 6050 and rep.det_modular == 0
        assert rep.modular.tolist() == [[187, 176], [17, 16]]
        assert rep.oracle_points == 390

    def test_small_configuration(self, S3, s3_table, s3_trio, D3):
        assert verify_counterexample(S3, s3_trio, [0, 1, 6], D3, s3_table).passed

    def test_zero_configuration_fails(self, S3, s3_table, s3_trio, D3):
        rep = verify_counterexample(S3, s3_trio, [0, 0, 0], D3, s3_table)
        assert not rep.passed
        assert rep.det_modular == 3

    def test_repeated_subgroup_names(self, S3, s3_table, D3):
        Lb = builtin_subgroup(S3, "Lb")
        rep = verify_counterexample(S3, [Lb, Lb], [1, 0], D3, s3_table, oracle=False)
        assert len(rep.deltas) == 2


@settings(max_examples=15)
@given(st.lists(st.integers(0, 12), min_size=3, max_size=3))
def test_invertible_d_never_yields_counterexample(z):
    # det(D^T C D) = det(D)^2 det(C) for square D
    G = builtin_group("S3")
    t = character_table(G)
    subs = [builtin_subgroup(G, n) for n in ("diag", "Lb", "Lc")]
    D = identity_decomposition(t.labels, 7, 6)
    rep = verify_counterexample(G, subs, z, D, t, oracle=False)
    assert not rep.passed
    assert (rep.det_modular == 0) == (rep.det_complex == 0)


def test_s4_enumeration_is_tractable():
    G = builtin_group("S4")
    pool = enumerate_pair_subgroups(G, order_cap=4, max_generators=1)
    assert pool.candidates and all(c.subgroup.order <= 4 for c in pool.candidates)


def test_interval_filter_keeps_every_solution(trio_pool, D3):
    from cartanhunt.hunt import _Problem
    problem = _Problem(trio_pool, D3, None)
    m = problem.m
    expected = set()
    for v in kernel_vectors(m, 6):
        A = [[sum(P[i][j] * v[j] for j in range(m)) for P in problem.projected]
             for i in range(m)]
        rhs = [-sum(problem.gram[i][j] * v[j] for j in range(m)) for i in range(m)]
        expected.update(bounded_nonnegative_solutions(A, rhs, 40))
    expected = {z for z in expected if problem.complex_det(z) != 0}
    res = search_kernel_guided(trio_pool, D3, 6, 40, all_hits=True)
    assert {tuple(h.z) for h in res.hits} == expected


def test_oversized_searches_refused():
    from cartanhunt.hunt import SearchTooLarge
    G = builtin_group("D4")
    pool = enumerate_pair_subgroups(G, table=character_table(G))
    D = identity_decomposition(pool.candidates[0].delta.labels, 3, 8)
    with pytest.raises(SearchTooLarge):
        search_bruteforce(pool, D, 2)
    with pytest.raises(SearchTooLarge):
        search_kernel_guided(pool, D, 2, 2)
    assert search_bruteforce(pool, D, 1, active=[1, 2, 3]).exhausted
