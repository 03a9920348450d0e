"""Permutation groups by full enumeration.

Points are 0-based. Products compose like functions: ``(p * q)[i] == p[q[i]]``,
so ``q`` acts first. Every group keeps its elements in lexicographic order of
their image arrays; the identity is therefore always element 0 and all
downstream matrix orders inherit this ordering.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from functools import cached_property, reduce
from typing import Iterable, Sequence

import numpy as np

from . import _accel

DEFAULT_ELEMENT_CAP = 20000


class GroupError(ValueError):
    """Malformed group input (degree mismatch, element outside a group, ...)."""


class GroupTooLarge(GroupError):
    """Enumeration exceeded the configured element cap."""


class NotClosedError(GroupError):
    """An explicit element list is not closed under multiplication."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class Permutation:
    __slots__ = ("images", "_hash")

    def __init__(self, images: Iterable[int]):
        images = tuple(int(i) for i in images)
        if sorted(images) != list(range(len(images))):
            raise GroupError(f"not a bijection on 0..{len(images) - 1}: {images}")
        self.images = images
        self._hash = hash(images)

    @classmethod
    def identity(cls, degree: int) -> Permutation:
        return cls(range(degree))

    @classmethod
    def from_cycles(cls, cycles: Sequence[Sequence[int]], degree: int,
                    one_based: bool = True) -> Permutation:
        images = list(range(degree))
        seen = set()
        for cycle in cycles:
            pts = [p - 1 if one_based else p for p in cycle]
            for p in pts:
                if not 0 <= p < degree:
                    raise GroupError(f"point {p + one_based} outside degree {degree}")
                if p in seen:
                    raise GroupError(f"point {p + one_based} repeated in cycles {cycles}")
                seen.add(p)
            for a, b in zip(pts, pts[1:] + pts[:1]):
                images[a] = b
        return cls(images)

    @classmethod
    def parse(cls, text: str, degree: int) -> Permutation:
        """Parse 1-based cycle notation such as ``"(1,2)(3,4,5)"`` or ``"()"``."""
        text = text.replace(" ", "")
        if not re.fullmatch(r"(\((\d+(,\d+)*)?\))*", text):
            raise GroupError(f"cannot parse cycle notation {text!r}")
        cycles = [[int(p) for p in body.split(",")]
                  for body in re.findall(r"\(([^()]*)\)", text) if body]
        return cls.from_cycles(cycles, degree)

    @property
    def degree(self) -> int:
        return len(self.images)

    def __mul__(self, other: Permutation) -> Permutation:
        if other.degree != self.degree:
            raise GroupError("degree mismatch in product")
        im = self.images
        return Permutation(im[j] for j in other.images)

    def inverse(self) -> Permutation:
        inv = [0] * self.degree
        for i, j in enumerate(self.images):
            inv[j] = i
        return Permutation(inv)

    def __call__(self, point: int) -> int:
        return self.images[point]

    def cycles(self) -> list[tuple[int, ...]]:
        """Non-trivial cycles, 0-based, each starting at its smallest point."""
        seen = set()
        out = []
        for start in range(self.degree):
            if start in seen:
                continue
            cyc = [start]
            seen.add(start)
            nxt = self.images[start]
            while nxt != start:
                cyc.append(nxt)
                seen.add(nxt)
                nxt = self.images[nxt]
            if len(cyc) > 1:
                out.append(tuple(cyc))
        return out

    def order(self) -> int:
        return reduce(math.lcm, (len(c) for c in self.cycles()), 1)

    def is_identity(self) -> bool:
        return all(i == j for i, j in enumerate(self.images))

    def cycle_string(self) -> str:
        cyc = self.cycles()
        if not cyc:
            return "()"
        return "".join("(" + ",".join(str(p + 1) for p in c) + ")" for c in cyc)

    def __eq__(self, other):
        return isinstance(other, Permutation) and self.images == other.images

    def __lt__(self, other: Permutation) -> bool:
        return self.images < other.images

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"Permutation({self.cycle_string()}, degree={self.degree})"


def closure(generators: Sequence[Permutation], degree: int | None = None,
            cap: int = DEFAULT_ELEMENT_CAP) -> list[Permutation]:
    """Enumerate the group generated by ``generators`` in canonical order."""
    gens = list(generators)
    if degree is None:
        if not gens:
            raise GroupError("degree required for an empty generating set")
        degree = gens[0].degree
    for g in gens:
        if g.degree != degree:
            raise GroupError(f"generator {g} has degree {g.degree}, expected {degree}")
    identity = Permutation.identity(degree)
    seen = {identity}
    frontier = [identity]
    while frontier:
        new = []
        for x in frontier:
            for s in gens:
                y = x * s
                if y not in seen:
                    seen.add(y)
                    new.append(y)
                    if len(seen) > cap:
                        raise GroupTooLarge(f"closure exceeds element cap {cap}")
        frontier = new
    return sorted(seen)


@dataclass(frozen=True)
class ConjugacyClass:
    representative: Permutation
    members: tuple[int, ...]

    @property
    def size(self) -> int:
        return len(self.members)


class PermGroup:
    """A finite permutation group with its full, canonically ordered element list."""

    def __init__(self, generators: Sequence[Permutation], degree: int | None = None,
                 name: str | None = None, cap: int = DEFAULT_ELEMENT_CAP):
        gens = list(generators)
        if degree is None:
            if not gens:
                raise GroupError("degree required for an empty generating set")
            degree = gens[0].degree
        self.degree = degree
        self.generators = tuple(gens)
        self.name = name
        self.cap = cap
        for g in gens:
            if g.degree != degree:
                raise GroupError(f"generator {g} has degree {g.degree}, expected {degree}")

    def __repr__(self):
        label = self.name or f"<{len(self.generators)} generators>"
        return f"PermGroup({label}, degree={self.degree})"

    @cached_property
    def elements(self) -> tuple[Permutation, ...]:
        return tuple(closure(self.generators, self.degree, self.cap))

    @property
    def order(self) -> int:
        return len(self.elements)

    def __len__(self):
        return self.order

    @cached_property
    def _index(self) -> dict[Permutation, int]:
        return {p: i for i, p in enumerate(self.elements)}

    def index(self, p: Permutation) -> int:
        try:
            return self._index[p]
        except KeyError:
            raise GroupError(f"{p} is not an element of {self}") from None

    def __contains__(self, p) -> bool:
        return p in self._index

    @cached_property
    def mul(self) -> np.ndarray:
        """``mul[i, j]`` is the index of ``elements[i] * elements[j]``."""
        n, d = self.order, self.degree
        images = np.array([p.images for p in self.elements], dtype=np.int64).reshape(n, d)
        table = np.empty((n, n), dtype=np.int32)
        if d == 0 or d ** d < 2 ** 62:
            # base-d keys preserve lexicographic order, so searchsorted recovers indices
            weights = d ** np.arange(d - 1, -1, -1, dtype=np.int64)
            keys = images @ weights
            for i in range(n):
                table[i] = np.searchsorted(keys, images[i][images] @ weights)
        else:
            index = self._index
            for i, p in enumerate(self.elements):
                table[i] = [index[p * q] for q in self.elements]
        return table

    @cached_property
    def inv(self) -> np.ndarray:
        inv = np.empty(self.order, dtype=np.int32)
        rows, cols = np.nonzero(self.mul == 0)
        inv[rows] = cols
        return inv

    @cached_property
    def element_orders(self) -> tuple[int, ...]:
        return tuple(p.order() for p in self.elements)

    @cached_property
    def conjugacy_classes(self) -> tuple[ConjugacyClass, ...]:
        return tuple(conjugacy_classes(self))

    @cached_property
    def class_of(self) -> np.ndarray:
        """Class index of every element."""
        out = np.empty(self.order, dtype=np.int32)
        for c, cls in enumerate(self.conjugacy_classes):
            out[list(cls.members)] = c
        return out

    @cached_property
    def exponent(self) -> int:
        return group_exponent(self)

    def power_index(self, i: int, k: int) -> int:
        """Index of ``elements[i] ** k`` for k >= 0."""
        result = 0
        mul = self.mul
        for _ in range(k):
            result = int(mul[result, i])
        return result

    def subgroup(self, generators: Sequence[Permutation]) -> PermGroup:
        for g in generators:
            self.index(g)
        return PermGroup(generators, self.degree, cap=self.cap)

    def indices_of(self, perms: Iterable[Permutation]) -> list[int]:
        return [self.index(p) for p in perms]


def conjugacy_classes(G: PermGroup) -> list[ConjugacyClass]:
    """Classes ordered by element order, then size, then smallest member."""
    mul, inv = G.mul, G.inv
    n = G.order
    assigned = np.full(n, -1, dtype=np.int64)
    groups = []
    for x in range(n):
        if assigned[x] >= 0:
            continue
        # g x g^-1 for every g at once
        orbit = np.unique(mul[mul[:, x], inv])
        assigned[orbit] = len(groups)
        groups.append(tuple(int(i) for i in orbit))
    orders = G.element_orders
    groups.sort(key=lambda m: (orders[m[0]], len(m), m[0]))
    return [ConjugacyClass(G.elements[m[0]], m) for m in groups]


def group_exponent(G: PermGroup) -> int:
    return reduce(math.lcm, G.element_orders, 1)


class PairSubgroup:
    """A subgroup of G x G stored as sorted ``(left, right)`` element-index pairs.

    ``factors`` is set when the subgroup is known to be a direct product
    H1 x H2; it then holds the two sorted index tuples.
    """

    def __init__(self, parent: PermGroup, elements: Iterable[tuple[int, int]],
                 generators: Sequence[tuple[int, int]] = (),
                 factors: tuple[tuple[int, ...], tuple[int, ...]] | None = None,
                 name: str | None = None):
        self.parent = parent
        self.elements = tuple(sorted((int(a), int(b)) for a, b in elements))
        self.generators = tuple(generators)
        self.factors = factors
        self.name = name

    @property
    def order(self) -> int:
        return len(self.elements)

    def __len__(self):
        return self.order

    @cached_property
    def flat(self) -> frozenset[int]:
        n = self.parent.order
        return frozenset(a * n + b for a, b in self.elements)

    def __contains__(self, pair) -> bool:
        a, b = pair
        return a * self.parent.order + b in self.flat

    def __eq__(self, other):
        return (isinstance(other, PairSubgroup) and other.parent is self.parent
                and other.elements == self.elements)

    def __hash__(self):
        return hash(self.elements)

    def __repr__(self):
        label = self.name or "L"
        return f"PairSubgroup({label}, order={self.order})"

    def pairs(self) -> list[tuple[Permutation, Permutation]]:
        E = self.parent.elements
        return [(E[a], E[b]) for a, b in self.elements]

    def conjugate(self, g: int, h: int) -> PairSubgroup:
        """The subgroup (g,h) L (g,h)^-1."""
        mul, inv = self.parent.mul, self.parent.inv
        gi, hi = inv[g], inv[h]
        elems = [(mul[mul[g, a], gi], mul[mul[h, b], hi]) for a, b in self.elements]
        factors = None
        if self.factors is not None:
            f1, f2 = self.factors
            factors = (tuple(sorted(int(mul[mul[g, a], gi]) for a in f1)),
                       tuple(sorted(int(mul[mul[h, b], hi]) for b in f2)))
        return PairSubgroup(self.parent, elems, factors=factors)


def _pair_index(G: PermGroup, pair) -> tuple[int, int]:
    left, right = pair
    if isinstance(left, Permutation):
        left = G.index(left)
    if isinstance(right, Permutation):
        right = G.index(right)
    n = G.order
    if not (0 <= left < n and 0 <= right < n):
        raise GroupError(f"pair {pair} outside G x G")
    return int(left), int(right)


def pair_subgroup(G: PermGroup, gens: Sequence, name: str | None = None,
                  cap: int = DEFAULT_ELEMENT_CAP) -> PairSubgroup:
    """Close a list of pairs (permutations or element indices) inside G x G."""
    gens = [_pair_index(G, p) for p in gens]
    n = G.order
    flat = _accel.closure_pairs(G.mul, [a * n + b for a, b in gens], cap)
    if flat is None:
        raise GroupTooLarge(f"pair subgroup exceeds element cap {cap}")
    return PairSubgroup(G, (divmod(f, n) for f in flat), generators=gens, name=name)


def pair_subgroup_from_elements(G: PermGroup, elements: Sequence,
                                name: str | None = None) -> PairSubgroup:
    """Accept an explicit element set only if it is already a subgroup.

    Raises NotClosedError carrying a witness ``(x, y)`` whose product falls
    outside the set.
    """
    pairs = sorted({_pair_index(G, p) for p in elements})
    if not pairs:
        raise NotClosedError("empty element set is not a subgroup")
    members = set(pairs)
    mul = G.mul
    if (0, 0) not in members:
        raise NotClosedError("element set does not contain the identity pair",
                             witness=None)
    for x in pairs:
        for y in pairs:
            prod = (int(mul[x[0], y[0]]), int(mul[x[1], y[1]]))
            if prod not in members:
                E = G.elements
                raise NotClosedError(
                    "element set not closed: ({}, {}) * ({}, {}) = ({}, {})".format(
                        E[x[0]].cycle_string(), E[x[1]].cycle_string(),
                        E[y[0]].cycle_string(), E[y[1]].cycle_string(),
                        E[prod[0]].cycle_string(), E[prod[1]].cycle_string()),
                    witness=(x, y))
    return PairSubgroup(G, pairs, name=name)


def subgroup_indices(G: PermGroup, generators: Sequence[Permutation]) -> tuple[int, ...]:
    """Sorted element indices of the subgroup of G generated by ``generators``."""
    gens = [G.index(g) for g in generators]
    flat = _accel.closure_pairs(G.mul, [g * G.order for g in gens], G.cap)
    return tuple(sorted(f // G.order for f in flat))


def product_subgroup(G: PermGroup, left: Sequence[Permutation] | Sequence[int],
                     right: Sequence[Permutation] | Sequence[int],
                     name: str | None = None, generated: bool = True) -> PairSubgroup:
    """H1 x H2 from generators of each factor (or full element lists if ``generated`` is False)."""
    def _factor(items):
        idx = [G.index(p) if isinstance(p, Permutation) else int(p) for p in items]
        if not generated:
            return tuple(sorted(set(idx)))
        flat = _accel.closure_pairs(G.mul, [i * G.order for i in idx], G.cap)
        return tuple(sorted(f // G.order for f in flat))
    h1, h2 = _factor(left), _factor(right)
    elems = [(a, b) for a in h1 for b in h2]
    return PairSubgroup(G, elems, factors=(h1, h2), name=name)


def diagonal(G: PermGroup, name: str | None = "diag") -> PairSubgroup:
    return PairSubgroup(G, ((i, i) for i in range(G.order)),
                        generators=[(G.index(g), G.index(g)) for g in G.generators],
                        name=name)
