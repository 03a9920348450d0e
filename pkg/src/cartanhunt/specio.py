"""Group, subgroup and decomposition-matrix specifications (JSON or TOML).

Permutations in files are written in 1-based cycle notation, either as a
string ``"(1,2)(3,4)"`` or as a list of cycles ``[[1, 2], [3, 4]]``. A file
with ``notation = "images"`` gives 0-based image arrays instead.
"""

from __future__ import annotations

import json
from pathlib import Path

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from .builtins import (BUILTIN_DECOMPOSITIONS, builtin_group, builtin_subgroup)
from .cartan import DecompositionMatrix, identity_decomposition
from .perm import (GroupError, Permutation, PermGroup, pair_subgroup,
                   pair_subgroup_from_elements, product_subgroup)


class SpecError(ValueError):
    pass


def load_spec(path) -> dict:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise SpecError(f"cannot read {path}: {exc}") from None
    try:
        if path.suffix == ".toml":
            return tomllib.loads(text)
        return json.loads(text)
    except (json.JSONDecodeError, tomllib.TOMLDecodeError) as exc:
        raise SpecError(f"cannot parse {path}: {exc}") from None


def parse_permutation(value, degree: int, images: bool = False) -> Permutation:
    if isinstance(value, dict):
        if "images" in value:
            return Permutation(value["images"])
        value = value["cycles"]
    if isinstance(value, str):
        return Permutation.parse(value, degree)
    if images:
        perm = Permutation(value)
        if perm.degree != degree:
            raise GroupError(f"image array {value} has wrong degree")
        return perm
    if isinstance(value, list) and all(isinstance(c, list) for c in value):
        return Permutation.from_cycles(value, degree)
    raise GroupError(f"cannot read permutation {value!r}")


def _uses_images(data: dict) -> bool:
    return data.get("notation") == "images" or bool(data.get("images", False))


def group_from_spec(data: dict) -> PermGroup:
    try:
        degree = int(data["degree"])
        images = _uses_images(data)
        gens = [parse_permutation(g, degree, images) for g in data.get("generators", [])]
    except (KeyError, TypeError, ValueError) as exc:
        raise SpecError(f"bad group spec: {exc}") from None
    return PermGroup(gens, degree, name=data.get("name"))


def resolve_group(ref: str) -> PermGroup:
    """A built-in group name or a path to a group spec file."""
    if Path(ref).suffix in (".json", ".toml") or Path(ref).exists():
        return group_from_spec(load_spec(ref))
    try:
        return builtin_group(ref)
    except KeyError as exc:
        raise SpecError(str(exc.args[0])) from None


def subgroup_from_spec(G: PermGroup, data, default_name: str | None = None):
    if isinstance(data, list):  # bare list of [left, right] generator pairs
        data = {"generators": data}
    name = data.get("name", default_name)
    images = _uses_images(data)
    deg = G.degree

    def perms(items):
        return [parse_permutation(p, deg, images) for p in items]

    try:
        if "product" in data:
            left = perms(data["product"].get("left", []))
            right = perms(data["product"].get("right", []))
            return product_subgroup(G, left, right, name=name)
        if "elements" in data:
            pairs = [tuple(perms(pair)) for pair in data["elements"]]
            if data.get("closed", False):
                return pair_subgroup_from_elements(G, pairs, name=name)
            return pair_subgroup(G, pairs, name=name)
        pairs = [tuple(perms(pair)) for pair in data["generators"]]
        return pair_subgroup(G, pairs, name=name)
    except (TypeError, ValueError) as exc:
        if isinstance(exc, GroupError):
            raise
        raise SpecError(f"bad subgroup spec: {exc}") from None
    except KeyError as exc:
        raise SpecError(f"subgroup spec needs 'generators', 'product' or 'elements': {exc}") \
            from None


def resolve_subgroup(G: PermGroup, ref: str):
    if Path(ref).suffix in (".json", ".toml") or Path(ref).exists():
        return subgroup_from_spec(G, load_spec(ref), default_name=Path(ref).stem)
    try:
        return builtin_subgroup(G, ref)
    except KeyError as exc:
        raise SpecError(str(exc.args[0])) from None


def resolve_decomposition(ref: str, labels, group_order: int) -> DecompositionMatrix:
    """``S3-p3``, ``identity:p`` or a JSON file with prime/labels/matrix."""
    if ref.startswith("identity:"):
        try:
            p = int(ref.split(":", 1)[1])
        except ValueError:
            raise SpecError(f"bad prime in {ref!r}") from None
        try:
            return identity_decomposition(labels, p, group_order)
        except ValueError as exc:
            raise SpecError(str(exc)) from None
    if ref in BUILTIN_DECOMPOSITIONS:
        D = BUILTIN_DECOMPOSITIONS[ref]()
    else:
        try:
            D = DecompositionMatrix.from_dict(load_spec(ref))
        except (KeyError, TypeError) as exc:
            raise SpecError(f"bad decomposition matrix file {ref}: {exc}") from None
    try:
        D.validate_for(group_order)
    except ValueError as exc:
        raise SpecError(str(exc)) from None
    return D
