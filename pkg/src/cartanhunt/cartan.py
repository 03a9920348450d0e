"""Delta matrices, complex and modular Cartan matrices, exact integer linear algebra.

Every matrix carries its label list; combining matrices always matches rows
and columns by label.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, lcm
from typing import Mapping, Sequence

from .chartab import (CharacterTable, class_pair_counts, product_subgroup_average,
                      subgroup_average)
from .perm import PairSubgroup

APEX_LABEL = "z"


class LabelMismatch(ValueError):
    pass


def _square(M) -> list[list[int]]:
    rows = [list(r) for r in M]
    if any(len(r) != len(rows) for r in rows):
        raise ValueError("matrix is not square")
    return rows


def det_exact(M: Sequence[Sequence[int]]) -> int:
    """Determinant by fraction-free (Bareiss) elimination."""
    a = _square(M)
    n = len(a)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        akk = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            row_i, row_k = a[i], a[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * akk - aik * row_k[j]) // prev
        prev = akk
    return sign * a[n - 1][n - 1]


def det_mod(M: Sequence[Sequence[int]], p: int) -> int:
    return det_exact(M) % p


def rank_rational(M: Sequence[Sequence[int]]) -> int:
    """Rank over Q by fraction-free elimination."""
    a = [list(r) for r in M]
    if not a or not a[0]:
        return 0
    nrows, ncols = len(a), len(a[0])
    rank = 0
    for col in range(ncols):
        piv = next((i for i in range(rank, nrows) if a[i][col] != 0), None)
        if piv is None:
            continue
        a[rank], a[piv] = a[piv], a[rank]
        p = a[rank][col]
        for i in range(rank + 1, nrows):
            f = a[i][col]
            if f:
                a[i] = [x * p - f * y for x, y in zip(a[i], a[rank])]
        rank += 1
        if rank == nrows:
            break
    return rank


def matmul(A, B) -> list[list[int]]:
    Bt = list(zip(*B))
    return [[sum(x * y for x, y in zip(row, col)) for col in Bt] for row in A]


def transpose(A) -> list[list[int]]:
    return [list(c) for c in zip(*A)]


def _permutation_to(labels: Sequence[str], target: Sequence[str]) -> list[int]:
    missing = [lab for lab in target if lab not in labels]
    if missing or len(labels) != len(target):
        extra = [lab for lab in labels if lab not in target]
        raise LabelMismatch(f"unmatched labels: {missing or extra}")
    return [list(labels).index(lab) for lab in target]


@dataclass(frozen=True)
class DeltaMatrix:
    labels: tuple[str, ...]
    entries: tuple[tuple[int, ...], ...]
    subgroup: PairSubgroup | None = field(default=None, compare=False, repr=False)

    def reindexed(self, labels: Sequence[str]) -> DeltaMatrix:
        idx = _permutation_to(self.labels, labels)
        rows = tuple(tuple(self.entries[i][j] for j in idx) for i in idx)
        return DeltaMatrix(tuple(labels), rows, self.subgroup)

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self.entries]

    def is_identity(self) -> bool:
        n = len(self.labels)
        return all(self.entries[i][j] == int(i == j) for i in range(n) for j in range(n))


@dataclass(frozen=True)
class CartanMatrix:
    labels: tuple[str, ...]
    entries: tuple[tuple[int, ...], ...]
    prime: int | None = None  # None for the complex Cartan matrix

    @property
    def field_tag(self) -> str:
        return "complex" if self.prime is None else f"mod-{self.prime}"

    def det(self) -> int:
        return det_exact(self.entries)

    def rank(self) -> int:
        return rank_rational(self.entries)

    def is_singular(self) -> bool:
        return self.det() == 0

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self.entries]

    def reindexed(self, labels: Sequence[str]) -> CartanMatrix:
        idx = _permutation_to(self.labels, labels)
        rows = tuple(tuple(self.entries[i][j] for j in idx) for i in idx)
        return CartanMatrix(tuple(labels), rows, self.prime)

    def to_dict(self) -> dict:
        return {"labels": list(self.labels), "rows": self.tolist(), "field": self.field_tag}

    @classmethod
    def from_dict(cls, data: Mapping) -> CartanMatrix:
        tag = data.get("field", "complex")
        prime = None if tag == "complex" else int(tag.split("-", 1)[1])
        return cls(tuple(data["labels"]), tuple(tuple(int(x) for x in r) for r in data["rows"]),
                   prime)


@dataclass(frozen=True)
class DecompositionMatrix:
    prime: int
    ordinary_labels: tuple[str, ...]
    modular_labels: tuple[str, ...]
    entries: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        rows = self.entries
        if len(rows) != len(self.ordinary_labels) or any(
                len(r) != len(self.modular_labels) for r in rows):
            raise ValueError("decomposition matrix shape does not match its labels")
        if any(x < 0 for r in rows for x in r):
            raise ValueError("decomposition numbers must be non-negative")
        if rank_rational(rows) != len(self.modular_labels):
            raise ValueError("decomposition matrix must have full column rank")

    def validate_for(self, group_order: int) -> None:
        """Structural check: for p not dividing |G| the matrix is a permutation of I."""
        if group_order % self.prime:
            square = len(self.ordinary_labels) == len(self.modular_labels)
            perm = square and all(sorted(r) == [0] * (len(r) - 1) + [1] for r in self.entries) \
                and all(sum(c) == 1 for c in zip(*self.entries))
            if not perm:
                raise ValueError(f"p = {self.prime} does not divide |G| = {group_order}, "
                                 "so D must be a permutation matrix")

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self.entries]

    def reindexed(self, ordinary_labels: Sequence[str]) -> DecompositionMatrix:
        idx = _permutation_to(self.ordinary_labels, ordinary_labels)
        return DecompositionMatrix(self.prime, tuple(ordinary_labels), self.modular_labels,
                                   tuple(self.entries[i] for i in idx))

    def gram(self) -> list[list[int]]:
        return matmul(transpose(self.entries), self.entries)

    def to_dict(self) -> dict:
        return {"prime": self.prime, "ordinary_labels": list(self.ordinary_labels),
                "modular_labels": list(self.modular_labels), "matrix": self.tolist()}

    @classmethod
    def from_dict(cls, data: Mapping) -> DecompositionMatrix:
        return cls(int(data["prime"]), tuple(data["ordinary_labels"]),
                   tuple(data["modular_labels"]),
                   tuple(tuple(int(x) for x in r) for r in data["matrix"]))


def identity_decomposition(labels: Sequence[str], prime: int,
                           group_order: int | None = None) -> DecompositionMatrix:
    if group_order is not None and group_order % prime == 0:
        raise ValueError(f"p = {prime} divides |G| = {group_order}; "
                         "the identity is not its decomposition matrix")
    n = len(labels)
    rows = tuple(tuple(int(i == j) for j in range(n)) for i in range(n))
    return DecompositionMatrix(prime, tuple(labels), tuple(labels), rows)


def delta_matrix(table: CharacterTable, L: PairSubgroup) -> DeltaMatrix:
    """Entry (chi, eta) is the average of chi x conj(eta) over L."""
    r = len(table)
    if L.factors is not None:
        h1, h2 = L.factors
        rows = [[product_subgroup_average(table, i, j, h1, h2) for j in range(r)]
                for i in range(r)]
    else:
        counts = class_pair_counts(table, L)
        rows = [[subgroup_average(table, i, j, L, counts) for j in range(r)]
                for i in range(r)]
    return DeltaMatrix(table.labels, tuple(tuple(r) for r in rows), L)


def dimension_sum(delta: DeltaMatrix, table: CharacterTable) -> int:
    """sum chi(1) eta(1) Delta[chi, eta]; equals |G|^2 / |L|."""
    deg = dict(zip(table.labels, table.degrees))
    return sum(deg[a] * deg[b] * delta.entries[i][j]
               for i, a in enumerate(delta.labels) for j, b in enumerate(delta.labels))


def complex_cartan(deltas: Sequence[DeltaMatrix], z: Sequence[int]) -> CartanMatrix:
    """identity + sum_L z_L * Delta(L)."""
    if len(deltas) != len(z):
        raise ValueError(f"{len(z)} multiplicities for {len(deltas)} subgroups")
    if any(int(m) < 0 for m in z):
        raise ValueError(f"multiplicities must be non-negative: {list(z)}")
    if not deltas:
        raise ValueError("at least one delta matrix is needed to fix the label list")
    labels = deltas[0].labels
    n = len(labels)
    acc = [[int(i == j) for j in range(n)] for i in range(n)]
    for d, m in zip(deltas, z):
        d = d.reindexed(labels) if d.labels != labels else d
        for i in range(n):
            for j in range(n):
                acc[i][j] += int(m) * d.entries[i][j]
    return CartanMatrix(labels, tuple(tuple(r) for r in acc))


def modular_cartan(C: CartanMatrix, D: DecompositionMatrix) -> CartanMatrix:
    """D^T C D, with D's rows matched to C's labels."""
    if C.prime is not None:
        raise ValueError("modular_cartan expects the complex Cartan matrix")
    D = D.reindexed(C.labels)
    out = matmul(matmul(transpose(D.entries), C.entries), D.entries)
    return CartanMatrix(D.modular_labels, tuple(tuple(r) for r in out), D.prime)


def uncontracted(C: CartanMatrix) -> CartanMatrix:
    """Append the 1x1 block of the simple module with apex z."""
    n = len(C.labels)
    rows = [list(r) + [0] for r in C.entries] + [[0] * n + [1]]
    return CartanMatrix(C.labels + (APEX_LABEL,), tuple(tuple(r) for r in rows), C.prime)


def kernel_vector(M: Sequence[Sequence[int]]) -> list[int] | None:
    """A primitive integer vector v != 0 with M v = 0, or None for full column rank."""
    a = [[Fraction(x) for x in r] for r in M]
    if not a:
        return None
    ncols = len(a[0])
    pivots = []
    row = 0
    for col in range(ncols):
        piv = next((i for i in range(row, len(a)) if a[i][col] != 0), None)
        if piv is None:
            continue
        a[row], a[piv] = a[piv], a[row]
        pv = a[row][col]
        a[row] = [x / pv for x in a[row]]
        for i in range(len(a)):
            if i != row and a[i][col] != 0:
                f = a[i][col]
                a[i] = [x - f * y for x, y in zip(a[i], a[row])]
        pivots.append(col)
        row += 1
    free = [c for c in range(ncols) if c not in pivots]
    if not free:
        return None
    f = free[0]
    v = [Fraction(0)] * ncols
    v[f] = Fraction(1)
    for r_, pc in enumerate(pivots):
        v[pc] = -a[r_][f]
    den = lcm(*(x.denominator for x in v))
    ints = [int(x * den) for x in v]
    g = 0
    for x in ints:
        g = gcd(g, x)
    ints = [x // g for x in ints]
    first = next(x for x in ints if x)
    return [-x for x in ints] if first < 0 else ints


def render_matrix(row_labels: Sequence[str], col_labels: Sequence[str], rows) -> str:
    """Aligned text with label headers and right-aligned entries."""
    cells = [[str(x) for x in r] for r in rows]
    lw = max([len(s) for s in row_labels] + [0])
    widths = [max([len(col_labels[j])] + [len(r[j]) for r in cells]) for j in range(len(col_labels))]
    head = " " * lw + " | " + "  ".join(c.rjust(w) for c, w in zip(col_labels, widths))
    lines = [head, "-" * len(head)]
    for lab, r in zip(row_labels, cells):
        lines.append(lab.ljust(lw) + " | " + "  ".join(c.rjust(w) for c, w in zip(r, widths)))
    return "\n".join(lines)
