"""Character tables: Dixon-Schneider computation, validated loading, averages.

Rows are ordered by degree, then lexicographically on their value vectors
(canonical cyclotomic coefficient tuples, classes in canonical order).
"""

from __future__ import annotations

import json
import logging
import math
from collections import Counter
from fractions import Fraction
from pathlib import Path
from typing import Sequence

import numpy as np

from .cyclotomic import Cyclotomic
from .perm import GroupError, PairSubgroup, Permutation, PermGroup

log = logging.getLogger(__name__)

MAX_PRIME_RETRIES = 25


class CharacterTableError(ValueError):
    """Invalid or inconsistent table; ``witness`` names the offending rows/classes."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class IntegralityError(ArithmeticError):
    """An average that must be a non-negative integer was not."""


class CharacterTable:
    def __init__(self, group: PermGroup, rows: Sequence[Sequence[Cyclotomic]],
                 labels: Sequence[str], conductor: int | None = None):
        self.group = group
        self.classes = group.conjugacy_classes
        self.conductor = conductor or group.exponent
        self.rows = tuple(tuple(v.embed(self.conductor) for v in row) for row in rows)
        self.labels = tuple(labels)
        if len(set(self.labels)) != len(self.labels):
            raise CharacterTableError("duplicate row labels")

    def __len__(self):
        return len(self.rows)

    def __repr__(self):
        return f"CharacterTable({self.group!r}, labels={list(self.labels)})"

    @property
    def class_sizes(self) -> tuple[int, ...]:
        return tuple(c.size for c in self.classes)

    @property
    def degrees(self) -> tuple[int, ...]:
        return tuple(int(row[0].to_rational()) for row in self.rows)

    def index(self, which) -> int:
        if isinstance(which, str):
            try:
                return self.labels.index(which)
            except ValueError:
                raise KeyError(f"no character labelled {which!r}") from None
        return int(which)

    def row(self, which) -> tuple[Cyclotomic, ...]:
        if isinstance(which, (str, int, np.integer)):
            return self.rows[self.index(which)]
        return _as_class_function(which, self.conductor)

    def relabel(self, mapping: dict[str, str]) -> CharacterTable:
        labels = [mapping.get(lab, lab) for lab in self.labels]
        return CharacterTable(self.group, self.rows, labels, self.conductor)

    def check(self) -> None:
        """Raise CharacterTableError unless both orthogonality relations hold exactly."""
        validate_table(self.group, self.rows, self.labels)


def _as_class_function(values, conductor):
    out = []
    for v in values:
        if isinstance(v, Cyclotomic):
            out.append(v.embed(math.lcm(v.n, conductor)))
        else:
            out.append(Cyclotomic.rational(v, conductor))
    return tuple(out)


def validate_table(G: PermGroup, rows, labels) -> None:
    classes = G.conjugacy_classes
    sizes = [c.size for c in classes]
    r = len(classes)
    if any(len(row) != r for row in rows):
        raise CharacterTableError(f"every row needs {r} class values")
    for lab, row in zip(labels, rows):
        d = row[0]
        if not d.is_integer() or d.to_rational() <= 0:
            raise CharacterTableError(f"degree of {lab} is not a positive integer", witness=lab)
    degrees = [int(row[0].to_rational()) for row in rows]
    if sum(d * d for d in degrees) != G.order:
        raise CharacterTableError(
            f"sum of squared degrees is {sum(d * d for d in degrees)}, group order is {G.order}",
            witness="degrees")
    for lab, d in zip(labels, degrees):
        if G.order % d:
            raise CharacterTableError(f"degree {d} of {lab} does not divide |G|", witness=lab)
    if len(rows) != r:
        raise CharacterTableError(f"{len(rows)} rows for {r} classes")
    conj_rows = [[v.conj() for v in row] for row in rows]
    for a in range(len(rows)):
        for b in range(a, len(rows)):
            s = sum((sz * x * y for sz, x, y in zip(sizes, rows[a], conj_rows[b])),
                    Cyclotomic.rational(0))
            if s != (G.order if a == b else 0):
                raise CharacterTableError(
                    f"rows {labels[a]} and {labels[b]} violate row orthogonality "
                    f"(sum {s}, expected {G.order if a == b else 0})",
                    witness=(labels[a], labels[b]))
    for i in range(r):
        for j in range(i, r):
            s = sum((rows[t][i] * conj_rows[t][j] for t in range(len(rows))),
                    Cyclotomic.rational(0))
            expected = G.order // sizes[i] if i == j else 0
            if s != expected:
                raise CharacterTableError(
                    f"classes {i} and {j} violate column orthogonality (sum {s}, expected {expected})",
                    witness=(i, j))


# ---------------------------------------------------------------- Dixon-Schneider

def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    return all(p % q for q in range(2, math.isqrt(p) + 1))


def dixon_primes(order: int, exponent: int):
    """Primes e = 1 (mod exponent) with e > 2*sqrt(order), ascending."""
    e = 1
    while True:
        e += exponent
        if e * e > 4 * order and _is_prime(e):
            yield e


def _primitive_root(p: int) -> int:
    factors = [q for q in range(2, p) if (p - 1) % q == 0 and _is_prime(q)]
    for g in range(2, p):
        if all(pow(g, (p - 1) // q, p) != 1 for q in factors):
            return g
    return 1  # p == 2


def class_coefficients(G: PermGroup) -> np.ndarray:
    """``a[j, i, k]`` = #{(x, y) in K_i x K_j : x*y = rep(K_k)}."""
    classes = G.conjugacy_classes
    r = len(classes)
    cls = G.class_of
    mul, inv = G.mul, G.inv
    a = np.zeros((r, r, r), dtype=np.int64)
    for k, c in enumerate(classes):
        gk = c.members[0]
        ys = mul[inv, gk]
        np.add.at(a, (cls[ys], cls, k), 1)
    return a


def _rref(rows: list[list[int]], p: int) -> tuple[list[list[int]], list[int]]:
    m = [list(r) for r in rows]
    pivots = []
    rank = 0
    ncols = len(m[0]) if m else 0
    for col in range(ncols):
        piv = next((i for i in range(rank, len(m)) if m[i][col] % p), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        f = pow(m[rank][col], -1, p)
        m[rank] = [(x * f) % p for x in m[rank]]
        for i in range(len(m)):
            if i != rank and m[i][col] % p:
                c = m[i][col]
                m[i] = [(x - c * y) % p for x, y in zip(m[i], m[rank])]
        pivots.append(col)
        rank += 1
    return m[:rank], pivots


def _nullspace(mat: list[list[int]], p: int) -> list[list[int]]:
    ncols = len(mat[0])
    red, pivots = _rref(mat, p)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [0] * ncols
        v[f] = 1
        for row, pc in zip(red, pivots):
            v[pc] = (-row[f]) % p
        basis.append(v)
    return basis


def _charpoly(mat: list[list[int]], p: int) -> list[int]:
    """Characteristic polynomial mod p via Hessenberg reduction, lowest degree first."""
    n = len(mat)
    h = [list(r) for r in mat]
    for m in range(1, n - 1):
        piv = next((i for i in range(m, n) if h[i][m - 1] % p), None)
        if piv is None:
            continue
        if piv != m:
            h[m], h[piv] = h[piv], h[m]
            for row in h:
                row[m], row[piv] = row[piv], row[m]
        inv = pow(h[m][m - 1], -1, p)
        for i in range(m + 1, n):
            u = (h[i][m - 1] * inv) % p
            if u:
                h[i] = [(x - u * y) % p for x, y in zip(h[i], h[m])]
                for row in h:
                    row[m] = (row[m] + u * row[i]) % p
    # recurrence on leading principal submatrices of the Hessenberg form
    polys = [[1]]
    for k in range(1, n + 1):
        prev = polys[k - 1]
        nxt = [0] + prev  # x * p_{k-1}
        d = h[k - 1][k - 1]
        for i, c in enumerate(prev):
            nxt[i] = (nxt[i] - d * c) % p
        t = 1
        for i in range(1, k):
            t = (t * h[k - i][k - i - 1]) % p
            c = (t * h[k - i - 1][k - 1]) % p
            for j, q in enumerate(polys[k - i - 1]):
                nxt[j] = (nxt[j] - c * q) % p
        polys.append(nxt)
    return polys[n]


def _roots(poly: list[int], p: int) -> list[int]:
    out = []
    for x in range(p):
        acc = 0
        for c in reversed(poly):
            acc = (acc * x + c) % p
        if acc == 0:
            out.append(x)
    return out


class _SplitFailure(Exception):
    pass


def _split_modular(coeffs: np.ndarray, p: int) -> list[list[int]]:
    """Common eigenvectors (mod p) of the class matrices, one per irreducible."""
    r = coeffs.shape[0]
    mats = [[[int(x) % p for x in row] for row in coeffs[j]] for j in range(r)]
    spaces = [_rref([[int(i == j) for j in range(r)] for i in range(r)], p)]
    # larger classes first: they tend to separate characters fastest
    for j in sorted(range(1, r), key=lambda j: -int(coeffs[j].sum())):
        if all(len(b) == 1 for b, _ in spaces):
            break
        A = mats[j]
        new_spaces = []
        for basis, pivots in spaces:
            d = len(basis)
            if d == 1:
                new_spaces.append((basis, pivots))
                continue
            images = [[sum(A[i][k] * b[k] for k in range(r)) % p for i in range(r)]
                      for b in basis]
            restricted = [[images[t][pc] for t in range(d)] for pc in pivots]
            found = 0
            for lam in _roots(_charpoly(restricted, p), p):
                shifted = [[(restricted[i][k] - (lam if i == k else 0)) % p for k in range(d)]
                           for i in range(d)]
                coords = _nullspace(shifted, p)
                if coords:
                    vecs = [[sum(c[t] * basis[t][k] for t in range(d)) % p for k in range(r)]
                            for c in coords]
                    new_spaces.append(_rref(vecs, p))
                    found += len(coords)
            if found != d:
                raise _SplitFailure(f"class matrix {j} not diagonalisable mod {p}")
        spaces = new_spaces
    if not all(len(b) == 1 for b, _ in spaces) or len(spaces) != r:
        raise _SplitFailure(f"eigenspaces did not split into lines mod {p}")
    return [b[0] for b, _ in spaces]


def _table_mod_p(G: PermGroup, p: int):
    classes = G.conjugacy_classes
    r = len(classes)
    sizes = [c.size for c in classes]
    inv_class = [int(G.class_of[G.inv[c.members[0]]]) for c in classes]
    out = []
    for w in _split_modular(class_coefficients(G), p):
        if w[0] == 0:
            raise _SplitFailure("eigenvector vanishes on the identity class")
        s = pow(w[0], -1, p)
        omega = [(x * s) % p for x in w]
        t = sum(omega[i] * omega[inv_class[i]] * pow(sizes[i], -1, p) for i in range(r)) % p
        if t == 0:
            raise _SplitFailure("degenerate degree equation")
        dsq = (G.order * pow(t, -1, p)) % p
        deg = next((d for d in range(1, math.isqrt(G.order) + 1) if (d * d) % p == dsq), None)
        if deg is None:
            raise _SplitFailure(f"no degree solves d^2 = {dsq} mod {p}")
        out.append((deg, [(deg * omega[i] * pow(sizes[i], -1, p)) % p for i in range(r)]))
    return out


def _lift(G: PermGroup, modrows, p: int) -> list[tuple[Cyclotomic, ...]]:
    n = G.exponent
    z = pow(_primitive_root(p), (p - 1) // n, p)
    classes = G.conjugacy_classes
    cls = G.class_of
    powers = []
    for c in classes:
        rep = c.members[0]
        o = G.element_orders[rep]
        seq, cur = [], 0
        for _ in range(o):
            seq.append(int(cls[cur]))
            cur = int(G.mul[cur, rep])
        powers.append((o, seq))
    rows = []
    for deg, vals in modrows:
        row = []
        for o, seq in powers:
            step = n // o
            o_inv = pow(o, -1, p)
            counts = {}
            for l in range(o):
                root = pow(z, (-step * l) % n, p)
                m = o_inv * sum(vals[seq[k]] * pow(root, k, p) for k in range(o)) % p
                if m > deg:
                    raise _SplitFailure(f"eigenvalue multiplicity {m} exceeds degree {deg}")
                if m:
                    counts[step * l] = m
            if sum(counts.values()) != deg:
                raise _SplitFailure("eigenvalue multiplicities do not sum to the degree")
            row.append(Cyclotomic.from_exponent_counts(n, counts))
        rows.append(tuple(row))
    return rows


def _row_key(row):
    return (row[0].to_rational(), tuple(v.key() for v in row))


def character_table(G: PermGroup, max_retries: int = MAX_PRIME_RETRIES) -> CharacterTable:
    """Irreducible complex characters of G, exact and verified."""
    if G.order == 1:
        rows = [(Cyclotomic.rational(1),)]
    else:
        failures = []
        for attempt, p in enumerate(dixon_primes(G.order, G.exponent)):
            if attempt >= max_retries:
                raise CharacterTableError(
                    f"eigenspace splitting failed for {max_retries} primes: {failures}")
            try:
                rows = _lift(G, _table_mod_p(G, p), p)
                break
            except _SplitFailure as exc:
                log.warning("Dixon splitting failed mod %d: %s", p, exc)
                failures.append((p, str(exc)))
    rows.sort(key=_row_key)
    labels = [f"X{i + 1}" for i in range(len(rows))]
    table = CharacterTable(G, rows, labels)
    table.check()
    from .builtins import match_labels
    mapping = match_labels(table)
    return table.relabel(mapping) if mapping else table


# ---------------------------------------------------------------- loading

def _parse_value(v, conductor: int) -> Cyclotomic:
    if isinstance(v, bool):
        raise CharacterTableError(f"bad character value {v!r}")
    if isinstance(v, int):
        return Cyclotomic.rational(v, conductor)
    if isinstance(v, str):
        try:
            return Cyclotomic.rational(Fraction(v), conductor)
        except ValueError:
            raise CharacterTableError(f"bad character value {v!r}") from None
    if isinstance(v, list):
        if len(v) > conductor:
            raise CharacterTableError(f"coefficient list longer than conductor {conductor}")
        return Cyclotomic(conductor, [Fraction(c) for c in v])
    raise CharacterTableError(f"bad character value {v!r}")


def table_from_dict(data: dict, G: PermGroup | None = None) -> CharacterTable:
    try:
        order = int(data["group_order"])
        reps_text = list(data["class_reps"])
        sizes = [int(s) for s in data["class_sizes"]]
        conductor = int(data.get("conductor", 1))
        raw_rows = data["rows"]
    except (KeyError, TypeError, ValueError) as exc:
        raise CharacterTableError(f"malformed character table: {exc}") from None
    if G is None:
        degree = int(data.get("degree") or max(
            [int(x) for t in reps_text for x in t.replace("(", ",").replace(")", ",").split(",")
             if x.strip()] or [1]))
        reps = [Permutation.parse(t, degree) for t in reps_text]
        # conjugates of the subgroup generated by class representatives cover G
        G = PermGroup(reps, degree)
    else:
        reps = [Permutation.parse(t, G.degree) for t in reps_text]
    if G.order != order:
        raise CharacterTableError(f"declared group order {order}, actual {G.order}")
    classes = G.conjugacy_classes
    if len(reps) != len(classes) or len(sizes) != len(reps):
        raise CharacterTableError(
            f"{len(reps)} class representatives for {len(classes)} classes")
    try:
        file_classes = [int(G.class_of[G.index(p)]) for p in reps]
    except GroupError as exc:
        raise CharacterTableError(f"class mismatch: {exc}") from None
    if sorted(file_classes) != list(range(len(classes))):
        raise CharacterTableError("class representatives do not hit every class exactly once")
    for p, c, s in zip(reps_text, file_classes, sizes):
        if classes[c].size != s:
            raise CharacterTableError(
                f"class of {p} has size {classes[c].size}, file says {s}", witness=p)
    n = math.lcm(conductor, G.exponent)
    labels, rows = [], []
    for entry in raw_rows:
        vals = [_parse_value(v, conductor).embed(n) for v in entry["values"]]
        if len(vals) != len(reps):
            raise CharacterTableError(f"row {entry.get('label')} has {len(vals)} values")
        row = [None] * len(vals)
        for c, v in zip(file_classes, vals):
            row[c] = v
        labels.append(str(entry["label"]))
        rows.append(tuple(row))
    validate_table(G, rows, labels)
    return CharacterTable(G, rows, labels, n)


def load_character_table(path, G: PermGroup | None = None) -> CharacterTable:
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise CharacterTableError(f"cannot parse {path}: {exc}") from None
    return table_from_dict(data, G)


def table_to_dict(table: CharacterTable) -> dict:
    def value(v: Cyclotomic):
        if v.is_integer():
            return int(v.to_rational())
        if v.is_rational():
            return str(v.to_rational())
        coeffs = list(v.coeffs)
        while coeffs and not coeffs[-1]:
            coeffs.pop()
        return [int(c) if c.denominator == 1 else str(c) for c in coeffs]
    return {
        "group_order": table.group.order,
        "degree": table.group.degree,
        "class_reps": [c.representative.cycle_string() for c in table.classes],
        "class_sizes": list(table.class_sizes),
        "conductor": table.conductor,
        "rows": [{"label": lab, "values": [value(v) for v in row]}
                 for lab, row in zip(table.labels, table.rows)],
    }


# ---------------------------------------------------------------- averages

def inner_product(table: CharacterTable, chi, eta) -> Fraction:
    """(1/|G|) sum_g chi(g) conj(eta(g)), exact."""
    x, y = table.row(chi), table.row(eta)
    s = sum((sz * a * b.conj() for sz, a, b in zip(table.class_sizes, x, y)),
            Cyclotomic.rational(0))
    s = s / table.group.order
    if not s.is_rational():
        raise IntegralityError(f"inner product {s} is not rational")
    return s.to_rational()


def _check_count(value: Cyclotomic, what: str) -> int:
    if not value.is_integer() or value.to_rational() < 0:
        raise IntegralityError(f"{what} = {value} is not a non-negative integer")
    return int(value.to_rational())


def class_pair_counts(table: CharacterTable, L: PairSubgroup) -> np.ndarray:
    """``counts[i, j]`` = #{(a, b) in L : a in K_i, b in K_j}."""
    if L.parent is not table.group and L.parent.elements != table.group.elements:
        raise CharacterTableError("subgroup lives in a different group than the table")
    r = len(table.classes)
    cls = table.group.class_of
    counts = np.zeros((r, r), dtype=np.int64)
    arr = np.array(L.elements, dtype=np.int64).reshape(-1, 2)
    np.add.at(counts, (cls[arr[:, 0]], cls[arr[:, 1]]), 1)
    return counts


def subgroup_average(table: CharacterTable, chi, eta, L: PairSubgroup,
                     counts: np.ndarray | None = None) -> int:
    """(1/|L|) sum over (a, b) in L of chi(a) conj(eta(b)); a non-negative integer."""
    x, y = table.row(chi), table.row(eta)
    if counts is None:
        counts = class_pair_counts(table, L)
    ybar = [v.conj() for v in y]
    total = Cyclotomic.rational(0, table.conductor)
    for i, j in zip(*np.nonzero(counts)):
        total = total + int(counts[i, j]) * x[i] * ybar[j]
    return _check_count(total / L.order, "subgroup average")


def subgroup_character_average(table: CharacterTable, chi, H: Sequence[int]) -> Cyclotomic:
    """chi(H^) = (1/|H|) sum_{h in H} chi(h) for H given by element indices."""
    x = table.row(chi)
    cls = table.group.class_of
    counts = Counter(int(cls[h]) for h in H)
    total = sum((c * x[i] for i, c in counts.items()), Cyclotomic.rational(0))
    return total / len(H)


def product_subgroup_average(table: CharacterTable, chi, eta,
                             H1: Sequence[int] | PermGroup,
                             H2: Sequence[int] | PermGroup) -> int:
    """(chi x conj eta) averaged over H1 x H2, as chi(H1^) * conj(eta)(H2^)."""
    G = table.group
    if isinstance(H1, PermGroup):
        H1 = G.indices_of(H1.elements)
    if isinstance(H2, PermGroup):
        H2 = G.indices_of(H2.elements)
    a = subgroup_character_average(table, chi, H1)
    b = subgroup_character_average(table, eta, H2).conj()
    _check_count(a, "chi(H1^)")
    _check_count(b, "conj(eta)(H2^)")
    return _check_count(a * b, "product subgroup average")
