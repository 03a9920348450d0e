"""End-to-end acceptance criteria, one test per criterion.

Each test records a PASS/FAIL line with its runtime; the lines are printed in
the terminal summary (see conftest.py) and when this file is run directly.
"""

import time
from contextlib import contextmanager
from fractions import Fraction

from hypothesis import given, settings, strategies as st

from cartanhunt.builtins import builtin_group, builtin_subgroup, s3_decomposition_p3
from cartanhunt.cartan import (complex_cartan, delta_matrix, dimension_sum, identity_decomposition,
                               modular_cartan)
from cartanhunt.chartab import (character_table, inner_product, product_subgroup_average,
                                subgroup_average)
from cartanhunt.cli import main
from cartanhunt.cyclotomic import Cyclotomic
from cartanhunt.hunt import make_pool, search_bruteforce, search_kernel_guided
from cartanhunt.monoid import build_biset, build_monoid, green_j_report, oracle_matrix, orbits
from cartanhunt.perm import product_subgroup
from conftest import PARTITION_ORDER, PROPERTY_GROUPS, small_pool, table_of

RESULTS: dict[int, str] = {}


@contextmanager
def criterion(number: int, title: str, limit: float):
    start = time.perf_counter()
    ok = False
    try:
        yield
        ok = True
    finally:
        took = time.perf_counter() - start
        within = took < limit
        status = "PASS" if ok and within else "FAIL"
        note = "" if within else f" (over the {limit:g}s limit)"
        RESULTS[number] = f"criterion {number} [{title}]: {status} in {took:.2f}s{note}"
    assert within, RESULTS[number]


def s3_setup():
    G = builtin_group("S3")
    table = character_table(G)
    subs = [builtin_subgroup(G, n) for n in ("diag", "Lb", "Lc")]
    return G, table, subs


def test_1_character_table(capsys):
    with criterion(1, "S3 character table", 1.0):
        G = builtin_group("S3")
        t = character_table(G)
        rows = {lab: [int(v.to_rational()) for v in t.row(lab)] for lab in PARTITION_ORDER}
        # class order: identity, transpositions, 3-cycles
        assert rows == {"chi_(3)": [1, 1, 1], "chi_(2,1)": [2, 0, -1],
                        "chi_(1^3)": [1, -1, 1]}
        assert t.labels == ("chi_(1^3)", "chi_(3)", "chi_(2,1)")
        assert main(["chartab", "--group", "S3"]) == 0
        out = capsys.readouterr().out
        assert "labels (canonical order): chi_(1^3), chi_(3), chi_(2,1)" in out


def test_2_delta_matrices():
    with criterion(2, "Delta matrices", 1.0):
        G, t, (diag, Lb, Lc) = s3_setup()
        assert delta_matrix(t, diag).reindexed(PARTITION_ORDER).tolist() == \
            [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
        assert delta_matrix(t, Lb).reindexed(PARTITION_ORDER).tolist() == \
            [[1, 1, 0], [2, 2, 0], [1, 1, 0]]
        assert delta_matrix(t, Lc).reindexed(PARTITION_ORDER).tolist() == \
            [[1, 0, 1], [0, 0, 0], [0, 0, 0]]


def test_3_reference_configuration():
    with criterion(3, "reference Cartan matrices", 1.0):
        G, t, subs = s3_setup()
        C = complex_cartan([delta_matrix(t, L) for L in subs], [4, 2, 165])
        assert C.reindexed(PARTITION_ORDER).tolist() == [[172, 2, 165], [4, 9, 0], [2, 2, 5]]
        assert C.det() == 6050
        M = modular_cartan(C, s3_decomposition_p3())
        assert M.tolist() == [[187, 176], [17, 16]]
        assert M.det() == 0 and M.rank() == 1


def test_4_oracle_equivalence():
    with criterion(4, "oracle equivalence", 30.0):
        G, t, subs = s3_setup()
        for L in subs:
            assert oracle_matrix(build_biset(G, [L]), t) == delta_matrix(t, L).tolist()
        z = [4, 2, 165]
        X = build_biset(G, subs, z)
        assert X.size == 390  # 4*6 + 2*18 + 165*2
        C = complex_cartan([delta_matrix(t, L) for L in subs], z).tolist()
        assert oracle_matrix(X, t) == [[c - (i == j) for j, c in enumerate(r)]
                                       for i, r in enumerate(C)]
        assert main(["verify", "--builtin", "paper-s3", "--oracle"]) == 0


def test_5_monoid_structure():
    with criterion(5, "monoid structural suite", 5.0):
        G = builtin_group("S3")
        X = build_biset(G, [builtin_subgroup(G, "Lb")])
        M = build_monoid(G, X)
        assert M.size == 25
        rep = M.check_associativity()
        assert rep.mode == "exhaustive" and rep.passed
        assert M.zero_is_absorbing() and M.x_squares_to_zero()
        non_regular = green_j_report(M).non_regular()
        assert non_regular == [tuple(x + G.order for x in o) for o in orbits(X)]
        assert len(non_regular) == 1


def test_6_search_reproduction():
    with criterion(6, "search reproduction", 60.0):
        G, t, subs = s3_setup()
        pool = make_pool(t, subs)
        D = s3_decomposition_p3()
        box = search_bruteforce(pool, D, 10)
        assert box.found is not None and tuple(box.found.z) == (0, 1, 6)
        kern = search_kernel_guided(pool, D, 32, 500, all_hits=True)
        assert kern.found is not None and kern.found.det_complex != 0
        assert (4, 2, 165) in {tuple(h.z) for h in kern.hits}


def test_7_negative_regime():
    with criterion(7, "p = 5 exhausts", 10.0):
        G, t, subs = s3_setup()
        pool = make_pool(t, subs)
        D = identity_decomposition(t.labels, 5, G.order)
        assert search_bruteforce(pool, D, 10).exhausted
        assert search_kernel_guided(pool, D, 32, 10).exhausted
        assert main(["search", "--group", "S3", "--decomp", "identity:5"]) == 3


@settings(max_examples=25, deadline=None, derandomize=True)
@given(data=st.data())
def _property_round(name, data):
    G = builtin_group(name)
    t = table_of(name)
    cand = data.draw(st.sampled_from(small_pool(name).candidates))
    L, d = cand.subgroup, cand.delta
    assert all(x >= 0 for row in d.entries for x in row)
    assert dimension_sum(d, t) == G.order ** 2 // L.order
    g, h = data.draw(st.integers(0, G.order - 1)), data.draw(st.integers(0, G.order - 1))
    assert delta_matrix(t, L.conjugate(g, h)).entries == d.entries
    a, b = (data.draw(st.integers(0, len(t) - 1)) for _ in range(2))
    H1 = G.subgroup([G.elements[data.draw(st.integers(0, G.order - 1))]])
    H2 = data.draw(st.sampled_from([G, G.subgroup([])]))
    prod = product_subgroup(G, G.indices_of(H1.generators), G.indices_of(H2.generators))
    assert product_subgroup_average(t, a, b, H1, H2) == subgroup_average(t, a, b, prod)


def test_8_property_suites():
    with criterion(8, "property suites", 120.0):
        for name in PROPERTY_GROUPS:
            G = builtin_group(name)
            t = table_of(name)
            assert sum(d * d for d in t.degrees) == G.order
            r = len(t)
            for i in range(r):
                for j in range(r):
                    assert inner_product(t, i, j) == (i == j)
                    col = sum((t.rows[k][i] * t.rows[k][j].conj() for k in range(r)),
                              Cyclotomic.rational(0, t.conductor))
                    assert col == (Fraction(G.order, t.class_sizes[i]) if i == j else 0)
            _property_round(name)


if __name__ == "__main__":
    # a fresh interpreter so pytest can rewrite asserts in hypothesis' plugin
    import subprocess
    import sys
    sys.exit(subprocess.call([sys.executable, "-m", "pytest", __file__, "-q"]))
