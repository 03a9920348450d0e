import copy
import json
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from cartanhunt.builtins import builtin_group, builtin_subgroup
from cartanhunt.chartab import (CharacterTableError, character_table, class_pair_counts,
                                dixon_primes, inner_product, load_character_table,
                                product_subgroup_average, subgroup_average, table_from_dict,
                                table_to_dict)
from cartanhunt.cyclotomic import Cyclotomic
from cartanhunt.perm import Permutation, product_subgroup
from conftest import PARTITION_ORDER, PROPERTY_GROUPS, small_pool, table_of


def values(table, label):
    return [v for v in table.row(label)]


class TestS3Table:
    def test_degrees_and_classes(self, s3_table):
        assert sorted(s3_table.degrees) == [1, 1, 2]
        assert s3_table.class_sizes == (1, 3, 2)
        reps = [c.representative.cycle_string() for c in s3_table.classes]
        assert reps == ["()", "(2,3)", "(1,2,3)"]

    def test_rows_under_partition_labels(self, s3_table):
        # classes: identity, transpositions, 3-cycles
        assert values(s3_table, "chi_(3)") == [1, 1, 1]
        assert values(s3_table, "chi_(2,1)") == [2, 0, -1]
        assert values(s3_table, "chi_(1^3)") == [1, -1, 1]

    def test_canonical_row_order(self, s3_table):
        assert s3_table.labels == ("chi_(1^3)", "chi_(3)", "chi_(2,1)")
        assert set(s3_table.labels) == set(PARTITION_ORDER)

    def test_orthogonality_of_trivial_and_sign(self, s3_table):
        assert inner_product(s3_table, "chi_(3)", "chi_(1^3)") == 0
        for lab in s3_table.labels:
            assert inner_product(s3_table, lab, lab) == 1

    def test_natural_permutation_character(self, S3, s3_table):
        pi = [sum(1 for i in range(3) if c.representative.images[i] == i)
              for c in s3_table.classes]
        assert pi == [3, 1, 0]
        assert inner_product(s3_table, pi, "chi_(2,1)") == 1
        assert inner_product(s3_table, pi, "chi_(3)") == 1
        assert inner_product(s3_table, pi, "chi_(1^3)") == 0


def test_trivial_group_table():
    t = character_table(builtin_group("trivial"))
    assert [list(r) for r in t.rows] == [[1]]


def test_c3_table():
    t = character_table(builtin_group("C3"))
    z, z2 = Cyclotomic.zeta(3, 1), Cyclotomic.zeta(3, 2)
    rows = {tuple(r) for r in t.rows}
    one = Cyclotomic.rational(1, 3)
    assert rows == {(one, one, one), (one, z, z2), (one, z2, z)}


def test_s4_degrees():
    t = character_table(builtin_group("S4"))
    assert sorted(t.degrees) == [1, 1, 2, 3, 3]


def test_q8_and_d4_share_degrees_but_differ():
    q, d = character_table(builtin_group("Q8")), character_table(builtin_group("D4"))
    assert sorted(q.degrees) == sorted(d.degrees) == [1, 1, 1, 1, 2]


def test_a4_has_irrational_values():
    t = character_table(builtin_group("A4"))
    assert any(not v.is_rational() for row in t.rows for v in row)


def test_dixon_prime_choice():
    p = next(iter(dixon_primes(6, 6)))
    assert p % 6 == 1 and p * p > 4 * 6
    assert p == 7


class TestLoading:
    def test_round_trip(self, s3_table, tmp_path):
        path = tmp_path / "s3.json"
        path.write_text(json.dumps(table_to_dict(s3_table)))
        loaded = load_character_table(path)
        assert loaded.labels == s3_table.labels
        assert [list(r) for r in loaded.rows] == [list(r) for r in s3_table.rows]

    def test_shipped_table_accepted(self, data_dir, S3):
        t = load_character_table(data_dir / "S3_table.json", S3)
        assert values(t, "chi_(2,1)") == [2, 0, -1]

    def test_partition_order_file_accepted(self, S3):
        data = {"group_order": 6, "class_reps": ["()", "(1,2)", "(1,2,3)"],
                "class_sizes": [1, 3, 2], "conductor": 6,
                "rows": [{"label": "chi_(3)", "values": [1, 1, 1]},
                         {"label": "chi_(2,1)", "values": [2, 0, -1]},
                         {"label": "chi_(1^3)", "values": [1, -1, 1]}]}
        t = table_from_dict(data, S3)
        assert t.labels == PARTITION_ORDER

    def _s3_data(self, s3_table):
        return copy.deepcopy(table_to_dict(s3_table))

    def test_sign_flip_rejected_with_witness(self, s3_table):
        data = self._s3_data(s3_table)
        data["rows"][2]["values"][1] = 1 if data["rows"][2]["values"][1] != 1 else -1
        data["rows"][1]["values"][1] = -data["rows"][1]["values"][1]
        with pytest.raises(CharacterTableError) as err:
            table_from_dict(data)
        assert err.value.witness is not None

    def test_wrong_group_order_rejected(self, s3_table):
        data = self._s3_data(s3_table)
        data["rows"][2]["values"][0] = 3
        with pytest.raises(CharacterTableError):
            table_from_dict(data)

    def test_class_size_mismatch(self, s3_table):
        data = self._s3_data(s3_table)
        data["class_sizes"] = [1, 2, 3]
        with pytest.raises(CharacterTableError):
            table_from_dict(data)

    def test_rational_and_coefficient_values(self):
        C3 = builtin_group("C3")
        t = character_table(C3)
        data = table_to_dict(t)
        for row in data["rows"]:
            row["values"] = ["1/1" if v == 1 else v for v in row["values"]]
        again = table_from_dict(data, C3)
        assert [list(r) for r in again.rows] == [list(r) for r in t.rows]


class TestSubgroupAverages:
    def test_diagonal_is_kronecker(self, S3, s3_table):
        L = builtin_subgroup(S3, "diag")
        for a in s3_table.labels:
            for b in s3_table.labels:
                assert subgroup_average(s3_table, a, b, L) == int(a == b)

    def test_lb_entry(self, S3, s3_table):
        L = builtin_subgroup(S3, "Lb")
        assert subgroup_average(s3_table, "chi_(2,1)", "chi_(3)", L) == 2

    def test_trivial_subgroup_gives_degree_products(self, S3, s3_table):
        L = builtin_subgroup(S3, "trivial")
        for a, da in zip(s3_table.labels, s3_table.degrees):
            for b, db in zip(s3_table.labels, s3_table.degrees):
                assert subgroup_average(s3_table, a, b, L) == da * db

    def test_product_formula_examples(self, S3, s3_table):
        t12 = [Permutation.parse("(1,2)", 3)]
        c3 = [Permutation.parse("(1,2,3)", 3)]
        one = S3.subgroup([])
        assert product_subgroup_average(s3_table, "chi_(1^3)", "chi_(3)", one,
                                        S3.subgroup(t12)) == 1
        assert product_subgroup_average(s3_table, "chi_(3)", "chi_(3)", S3,
                                        S3.subgroup(c3)) == 1
        assert product_subgroup_average(s3_table, "chi_(2,1)", "chi_(2,1)", S3, S3) == 0


def _random_subgroup(name, data):
    return data.draw(st.sampled_from(small_pool(name).candidates)).subgroup


@pytest.mark.parametrize("name", PROPERTY_GROUPS)
def test_orthogonality_and_degrees(name):
    G = builtin_group(name)
    t = character_table(G)
    assert sum(d * d for d in t.degrees) == G.order
    r = len(t)
    for i in range(r):
        for j in range(r):
            assert inner_product(t, i, j) == int(i == j)
    # column orthogonality: sum over characters of chi(g) conj(chi(h)) = |C(g)| delta
    for a in range(r):
        for b in range(r):
            s = sum((t.rows[k][a] * t.rows[k][b].conj() for k in range(r)),
                    Cyclotomic.rational(0, t.conductor))
            expected = Fraction(G.order, t.class_sizes[a]) if a == b else 0
            assert s == expected


@pytest.mark.parametrize("name", PROPERTY_GROUPS)
@given(data=st.data())
def test_product_average_matches_general(name, data):
    G = builtin_group(name)
    t = table_of(name)
    subs = [G.subgroup([]), G] + [G.subgroup([g]) for g in G.elements[1:]]
    H1 = data.draw(st.sampled_from(subs))
    H2 = data.draw(st.sampled_from(subs))
    L = product_subgroup(G, G.indices_of(H1.generators), G.indices_of(H2.generators),
                         generated=True)
    counts = class_pair_counts(t, L)
    for a in range(len(t)):
        for b in range(len(t)):
            assert product_subgroup_average(t, a, b, H1, H2) == \
                subgroup_average(t, a, b, L, counts)


@pytest.mark.parametrize("name", PROPERTY_GROUPS)
@given(data=st.data())
def test_average_is_nonnegative_integer(name, data):
    t = table_of(name)
    L = _random_subgroup(name, data)
    for a in range(len(t)):
        for b in range(len(t)):
            v = subgroup_average(t, a, b, L)
            assert isinstance(v, int) and v >= 0
