"""Built-in groups, subgroups, labelled tables and decomposition matrices.

For S3 the registry holds the subgroups ``Lb = {1} x <(1,2)>`` and
``Lc = S3 x <(1,2,3)>``, the p = 3 decomposition matrix, and the
configuration ``paper-s3`` with multiplicities (4, 2, 165) on diag, Lb, Lc.

``La`` is an alias of the diagonal {(g, g)}. The set {(g, g^-1)} is not
closed under (g, h)(g', h') = (gg', hh') for non-abelian G, while the
diagonal is the stabiliser of 1 in the regular biset and has the identity
as its Delta matrix, which is the property La is meant to have.
"""

from __future__ import annotations

from dataclasses import dataclass

from .cartan import DecompositionMatrix
from .perm import PairSubgroup, Permutation, PermGroup, diagonal, product_subgroup


def _quaternion_generators() -> list[Permutation]:
    # points 0..7 = 1, -1, i, -i, j, -j, k, -k
    basis = ["1", "i", "j", "k"]
    prod = {("1", x): (1, x) for x in basis} | {(x, "1"): (1, x) for x in basis}
    prod |= {("i", "i"): (-1, "1"), ("j", "j"): (-1, "1"), ("k", "k"): (-1, "1"),
             ("i", "j"): (1, "k"), ("j", "k"): (1, "i"), ("k", "i"): (1, "j"),
             ("j", "i"): (-1, "k"), ("k", "j"): (-1, "i"), ("i", "k"): (-1, "j")}

    def point(sign, b):
        return 2 * basis.index(b) + (0 if sign == 1 else 1)

    gens = []
    for left in ("i", "j"):
        images = [0] * 8
        for b in basis:
            for sign in (1, -1):
                s, c = prod[(left, b)]
                images[point(sign, b)] = point(s * sign, c)
        gens.append(Permutation(images))
    return gens


_GROUPS = {
    "trivial": (1, []),
    "C2": (2, ["(1,2)"]),
    "C3": (3, ["(1,2,3)"]),
    "C4": (4, ["(1,2,3,4)"]),
    "C6": (6, ["(1,2,3,4,5,6)"]),
    "S3": (3, ["(1,2)", "(1,2,3)"]),
    "S4": (4, ["(1,2)", "(1,2,3,4)"]),
    "A4": (4, ["(1,2,3)", "(1,2)(3,4)"]),
    "D4": (4, ["(1,2,3,4)", "(1,3)"]),
}

_CACHE: dict[str, PermGroup] = {}


def group_names() -> list[str]:
    return sorted(list(_GROUPS) + ["Q8"])


def builtin_group(name: str) -> PermGroup:
    """Built-in groups are shared instances so that subgroups and tables line up."""
    if name not in _CACHE:
        if name == "Q8":
            _CACHE[name] = PermGroup(_quaternion_generators(), 8, name="Q8")
        elif name in _GROUPS:
            degree, gens = _GROUPS[name]
            _CACHE[name] = PermGroup([Permutation.parse(g, degree) for g in gens], degree,
                                     name=name)
        else:
            raise KeyError(f"unknown built-in group {name!r}; known: {group_names()}")
    return _CACHE[name]


# labels of the S3 characters by partition, values at (), (1,2), (1,2,3)
S3_LABELS = ("chi_(3)", "chi_(2,1)", "chi_(1^3)")
S3_MODULAR_LABELS = ("psi_(3)", "psi_(2,1)")


@dataclass(frozen=True)
class LabelledTable:
    degree: int
    class_reps: tuple[str, ...]
    rows: dict


LABELLED_TABLES = [
    LabelledTable(3, ("()", "(1,2)", "(1,2,3)"), {
        "chi_(3)": (1, 1, 1),
        "chi_(2,1)": (2, 0, -1),
        "chi_(1^3)": (1, -1, 1),
    }),
]


def match_labels(table) -> dict[str, str] | None:
    """Map auto labels to built-in labels when a labelled table matches exactly."""
    G = table.group
    for known in LABELLED_TABLES:
        if known.degree != G.degree or len(known.rows) != len(table):
            continue
        reps = [Permutation.parse(t, G.degree) for t in known.class_reps]
        if any(r not in G for r in reps):
            continue
        cols = [int(G.class_of[G.index(r)]) for r in reps]
        if sorted(cols) != list(range(len(table.classes))):
            continue
        by_values = {vals: lab for lab, vals in known.rows.items()}
        mapping = {}
        for lab, row in zip(table.labels, table.rows):
            key = tuple(row[c] for c in cols)
            match = next((name for vals, name in by_values.items()
                          if all(v == x for v, x in zip(key, vals))), None)
            if match is None:
                break
            mapping[lab] = match
        else:
            if len(set(mapping.values())) == len(table):
                return mapping
    return None


def builtin_subgroup(G: PermGroup, name: str) -> PairSubgroup:
    """Named subgroups of G x G: ``trivial``, ``full``, ``diag``; for S3 also La, Lb, Lc."""
    deg = G.degree
    if name in ("diag", "La"):
        return diagonal(G, name=name)
    if name == "trivial":
        return product_subgroup(G, [], [], name=name)
    if name == "full":
        return product_subgroup(G, G.generators, G.generators, name=name)
    if name in ("Lb", "Lc"):
        if G.order != 6 or deg != 3:
            raise KeyError(f"subgroup {name} is defined for S3 only")
        if name == "Lb":
            return product_subgroup(G, [], [Permutation.parse("(1,2)", 3)], name="Lb")
        return product_subgroup(G, G.generators, [Permutation.parse("(1,2,3)", 3)], name="Lc")
    raise KeyError(f"unknown built-in subgroup {name!r}")


def s3_decomposition_p3() -> DecompositionMatrix:
    return DecompositionMatrix(3, S3_LABELS, S3_MODULAR_LABELS,
                               ((1, 0), (1, 1), (0, 1)))


BUILTIN_DECOMPOSITIONS = {"S3-p3": s3_decomposition_p3}


@dataclass(frozen=True)
class Configuration:
    group: str
    subgroups: tuple[str, ...]
    z: tuple[int, ...]
    decomposition: str


CONFIGURATIONS = {
    "paper-s3": Configuration("S3", ("diag", "Lb", "Lc"), (4, 2, 165), "S3-p3"),
}
