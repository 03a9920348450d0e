"""Bisets X, the monoids M(G, X) = G + X + {z}, Green's J-classes, and the
permutation-character oracle for Delta entries.

A biset is stored as a G x G-set through (g, h).x = g x h^-1. Each block is
the coset space (G x G)/L; a coset is named by its smallest element in the
canonical G x G order (pairs of element indices, lexicographic).
"""

from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

import numpy as np

from . import _accel
from .chartab import CharacterTable, IntegralityError
from .cyclotomic import Cyclotomic
from .perm import PairSubgroup, PermGroup

DEFAULT_POINT_CAP = 50000
DEFAULT_TABLE_CAP = 4000  # |M| at most this many elements
EXHAUSTIVE_LIMIT = 400
ASSOCIATIVITY_SAMPLES = 10 ** 6


class CapExceeded(ValueError):
    pass


@dataclass(frozen=True)
class CosetSpace:
    subgroup: PairSubgroup
    reps: np.ndarray     # flat G x G index of each coset's smallest element
    left: np.ndarray     # left[g, c]  = coset of (g, 1) . c
    right: np.ndarray    # right[h, c] = coset of c . h = (1, h^-1) . c

    @property
    def size(self) -> int:
        return len(self.reps)


def coset_space(G: PermGroup, L: PairSubgroup) -> CosetSpace:
    N = G.order
    mul, inv = G.mul, G.inv
    la = np.array([a for a, _ in L.elements], dtype=np.int64)
    lb = np.array([b for _, b in L.elements], dtype=np.int64)
    coset_of = np.full(N * N, -1, dtype=np.int64)
    reps = []
    for s in range(N * N):
        if coset_of[s] >= 0:
            continue
        sa, sb = divmod(s, N)
        coset_of[mul[sa, la].astype(np.int64) * N + mul[sb, lb]] = len(reps)
        reps.append(s)
    reps = np.array(reps, dtype=np.int64)
    ra, rb = reps // N, reps % N
    left = coset_of[mul[:, ra].astype(np.int64) * N + rb[None, :]]
    right = coset_of[ra[None, :] * N + mul[inv[:, None], rb[None, :]]]
    return CosetSpace(L, reps, left.astype(np.int32), right.astype(np.int32))


class Biset:
    """Disjoint union of coset spaces (G x G)/L_i, one block per listed subgroup."""

    def __init__(self, parent: PermGroup, blocks: Sequence[CosetSpace]):
        self.parent = parent
        self.blocks = tuple(blocks)
        offsets, total = [], 0
        for b in self.blocks:
            offsets.append(total)
            total += b.size
        self.offsets = tuple(offsets)
        self.size = total

    def __len__(self):
        return self.size

    @cached_property
    def points(self) -> list[tuple[int, int]]:
        """(block index, coset representative) for every point."""
        return [(i, int(r)) for i, b in enumerate(self.blocks) for r in b.reps]

    @cached_property
    def left_action(self) -> np.ndarray:
        N = self.parent.order
        if not self.blocks:
            return np.zeros((N, 0), dtype=np.int32)
        return np.hstack([b.left + off for b, off in zip(self.blocks, self.offsets)])

    @cached_property
    def right_action(self) -> np.ndarray:
        N = self.parent.order
        if not self.blocks:
            return np.zeros((N, 0), dtype=np.int32)
        return np.hstack([b.right + off for b, off in zip(self.blocks, self.offsets)])

    @property
    def orbit_decomposition(self) -> list[str]:
        return [b.subgroup.name or f"L{i}" for i, b in enumerate(self.blocks)]

    def act(self, g: int, h: int) -> np.ndarray:
        """The permutation x -> g x h^-1 of the points."""
        hinv = self.parent.inv[h]
        return self.right_action[hinv][self.left_action[g]]

    def fixed_points(self, g: int, h: int) -> int:
        return int(np.count_nonzero(self.act(g, h) == np.arange(self.size)))


def build_biset(G: PermGroup, subgroups: Sequence[PairSubgroup],
                multiplicities: Sequence[int] | None = None,
                cap: int = DEFAULT_POINT_CAP) -> Biset:
    """X = disjoint union over i of (G x G)/L_i, with L_i repeated per multiplicity."""
    if multiplicities is None:
        multiplicities = [1] * len(subgroups)
    if len(multiplicities) != len(subgroups):
        raise ValueError("one multiplicity per subgroup")
    N = G.order
    total = sum(m * (N * N // L.order) for L, m in zip(subgroups, multiplicities))
    if total > cap:
        raise CapExceeded(f"biset would have {total} points, cap is {cap}")
    spaces = {}
    blocks = []
    for L, m in zip(subgroups, multiplicities):
        if L.parent is not G and L.parent.elements != G.elements:
            raise ValueError(f"{L} is not a subgroup of G x G for this G")
        if m < 0:
            raise ValueError("multiplicities must be non-negative")
        if m and L not in spaces:
            spaces[L] = coset_space(G, L)
        blocks.extend([spaces[L]] * m)
    return Biset(G, blocks)


@dataclass
class AssociativityReport:
    mode: str            # "exhaustive" or "sampled"
    checked: int
    failure: tuple[int, int, int] | None

    @property
    def passed(self) -> bool:
        return self.failure is None


class Monoid:
    """M(G, X) as an explicit multiplication table.

    Element order: the group block (identity first), then the points of X,
    then the zero z last.
    """

    def __init__(self, group: PermGroup, biset: Biset, table: np.ndarray):
        self.group = group
        self.biset = biset
        self.table = table
        self.size = table.shape[0]
        self.identity = 0
        self.zero = self.size - 1

    def __len__(self):
        return self.size

    @property
    def group_block(self) -> range:
        return range(self.group.order)

    @property
    def x_block(self) -> range:
        N = self.group.order
        return range(N, N + self.biset.size)

    def block_of(self, i: int) -> str:
        if i == self.zero:
            return "z"
        return "G" if i < self.group.order else "X"

    def element_label(self, i: int) -> str:
        G = self.group
        if i == self.zero:
            return "z"
        if i < G.order:
            return G.elements[i].cycle_string()
        block, rep = self.biset.points[i - G.order]
        a, b = divmod(rep, G.order)
        return f"x{block}[{G.elements[a].cycle_string()},{G.elements[b].cycle_string()}]"

    def check_associativity(self, samples: int = ASSOCIATIVITY_SAMPLES, seed: int = 0,
                            exhaustive_limit: int = EXHAUSTIVE_LIMIT) -> AssociativityReport:
        if self.size <= exhaustive_limit:
            return AssociativityReport("exhaustive", self.size ** 3,
                                       _accel.check_associativity(self.table))
        rng = np.random.default_rng(seed)
        a, b, c = (rng.integers(0, self.size, samples) for _ in range(3))
        return AssociativityReport("sampled", samples,
                                   _accel.check_associativity_sampled(self.table, a, b, c))

    def zero_is_absorbing(self) -> bool:
        t, z = self.table, self.zero
        return bool(np.all(t[z, :] == z) and np.all(t[:, z] == z))

    def x_squares_to_zero(self) -> bool:
        xs = np.array(self.x_block)
        return bool(np.all(self.table[np.ix_(xs, xs)] == self.zero))

    def group_block_is_group(self) -> bool:
        N = self.group.order
        return bool(np.array_equal(self.table[:N, :N], self.group.mul))

    def _metadata(self, i: int) -> dict:
        out = {"index": i, "block": self.block_of(i), "label": self.element_label(i)}
        if out["block"] == "X":
            orbit, rep = self.biset.points[i - self.group.order]
            out["orbit"] = orbit
            out["coset_rep"] = list(divmod(rep, self.group.order))
        return out

    def to_text(self) -> str:
        return "\n".join(" ".join(str(int(x)) for x in row) for row in self.table)

    def to_json(self) -> str:
        return json.dumps({
            "size": self.size,
            "identity": self.identity,
            "zero": self.zero,
            "elements": [self._metadata(i) for i in range(self.size)],
            "table": self.table.tolist(),
        })


def build_monoid(G: PermGroup, X: Biset, cap: int = DEFAULT_TABLE_CAP) -> Monoid:
    N, nx = G.order, X.size
    n = N + nx + 1
    if n > cap:
        raise CapExceeded(f"monoid has {n} elements, table cap is {cap}")
    z = n - 1
    table = np.full((n, n), z, dtype=np.int32)
    table[:N, :N] = G.mul
    if nx:
        table[:N, N:N + nx] = X.left_action + N
        table[N:N + nx, :N] = (X.right_action + N).T
    return Monoid(G, X, table)


@dataclass
class JClassReport:
    classes: list[tuple[int, ...]]
    regular: list[bool]

    def non_regular(self) -> list[tuple[int, ...]]:
        return [c for c, r in zip(self.classes, self.regular) if not r]


def green_j_report(M: Monoid) -> JClassReport:
    comp = _accel.j_components(M.table)
    flags = _accel.regular_flags(M.table)
    groups: dict[int, list[int]] = {}
    for i, c in enumerate(comp.tolist()):
        groups.setdefault(c, []).append(i)
    classes = sorted(tuple(v) for v in groups.values())
    return JClassReport(classes, [bool(flags[list(c)].any()) for c in classes])


def orbits(X: Biset) -> list[tuple[int, ...]]:
    """G x G-orbits on X, computed from the generators' actions."""
    G = X.parent
    parent = list(range(X.size))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    gens = [G.index(g) for g in G.generators]
    for g in gens:
        for arr in (X.left_action[g], X.right_action[g]):
            for x, y in enumerate(arr.tolist()):
                ra, rb = find(x), find(y)
                if ra != rb:
                    parent[max(ra, rb)] = min(ra, rb)
    out: dict[int, list[int]] = {}
    for x in range(X.size):
        out.setdefault(find(x), []).append(x)
    return sorted(tuple(v) for v in out.values())


def fixed_point_matrix(X: Biset, table: CharacterTable, threads: int = 1) -> np.ndarray:
    """fix[i, j] = number of points fixed by (g_i, g_j) for class representatives."""
    reps = [c.members[0] for c in table.classes]
    cells = [(i, j) for i in range(len(reps)) for j in range(len(reps))]

    def count(cell):
        i, j = cell
        return X.fixed_points(reps[i], reps[j]) if X.size else 0

    if threads > 1:
        with ThreadPoolExecutor(threads) as pool:
            values = list(pool.map(count, cells))
    else:
        values = [count(c) for c in cells]
    return np.array(values, dtype=np.int64).reshape(len(reps), len(reps))


def perm_char_multiplicity(X: Biset, table: CharacterTable, chi, eta,
                           fix: np.ndarray | None = None) -> int:
    """(1/|G|^2) sum over (g, h) of fix_X(g, h) conj(chi(g)) eta(h), summed classwise."""
    if fix is None:
        fix = fixed_point_matrix(X, table)
    x, y = table.row(chi), table.row(eta)
    sizes = table.class_sizes
    total = Cyclotomic.rational(0, table.conductor)
    for i, j in zip(*np.nonzero(fix)):
        weight = sizes[i] * sizes[j] * int(fix[i, j])
        total = total + weight * x[i].conj() * y[j]
    total = total / table.group.order ** 2
    if not total.is_integer() or total.to_rational() < 0:
        raise IntegralityError(f"permutation character multiplicity {total} is not a "
                               "non-negative integer")
    return int(total.to_rational())


def oracle_matrix(X: Biset, table: CharacterTable, threads: int = 1) -> list[list[int]]:
    """All permutation-character multiplicities, rows and columns in table label order."""
    fix = fixed_point_matrix(X, table, threads)
    r = len(table)
    return [[perm_char_multiplicity(X, table, i, j, fix) for j in range(r)] for i in range(r)]
