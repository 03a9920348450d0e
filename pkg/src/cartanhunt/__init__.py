"""Cartan matrices of the monoids M(G, X) and a search for bisets X whose
complex Cartan matrix is non-singular while a modular one is singular."""

from ._accel import BACKEND
from .cartan import (CartanMatrix, DecompositionMatrix, DeltaMatrix, complex_cartan,
                     delta_matrix, det_exact, modular_cartan, rank_rational)
from .chartab import (CharacterTable, character_table, inner_product, load_character_table,
                      product_subgroup_average, subgroup_average)
from .cyclotomic import Cyclotomic
from .perm import (PairSubgroup, Permutation, PermGroup, closure, conjugacy_classes,
                   group_exponent, pair_subgroup)

__all__ = [
    "BACKEND", "CartanMatrix", "CharacterTable", "Cyclotomic", "DecompositionMatrix",
    "DeltaMatrix", "PairSubgroup", "PermGroup", "Permutation", "character_table", "closure",
    "complex_cartan", "conjugacy_classes", "delta_matrix", "det_exact", "group_exponent",
    "inner_product", "load_character_table", "modular_cartan", "pair_subgroup",
    "product_subgroup_average", "rank_rational", "subgroup_average",
]
