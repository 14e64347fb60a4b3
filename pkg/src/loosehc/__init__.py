"""Loose Hamilton cycles in 3-uniform hypergraphs: constructions, exact search,
absorbing-method pipeline, M-tilings and exact fractional tilings."""

from .constructions import (
    GeneratorSpec, L29Instance, generate, make_complete, make_H3, make_Hk, make_L29, make_loose_cycle,
    make_loose_path, make_M, make_tight_path, random_binomial, random_min_degree, tripartite_random,
)
from .exact import SearchTimeout, exact_loose_hc
from .fractional import (
    FractionalTiling, Pattern, canonical_M_weights, figure_template, forb_injection,
    search_L29_fractional, validate_fractional_tiling,
)
from .hypergraph import (
    Hypergraph3, LooseCycle, LoosePath, TightPath, load, save, validate_loose_cycle,
    validate_loose_path, validate_tight_path,
)
from .pipeline import (
    absorb, assemble_hamilton_cycle, build_absorbing_path, build_reservoir, count_absorbing_tuples,
    find_connecting_triples, is_absorbing_tuple,
)
from .regularity import Partition, check_regular_triple, cluster_hypergraph, density
from .tiling import (
    MTiling, find_augmenting_structure, find_M_copy_in_triple, greedy_tight_path, loose_path_tile_triple,
    m_tile_regular_triple, max_M_tiling, path_tile, round_fractional_to_integral,
)

__version__ = "0.1.0"

__all__ = [
    "absorb",
    "assemble_hamilton_cycle",
    "build_absorbing_path",
    "build_reservoir",
    "canonical_M_weights",
    "check_regular_triple",
    "cluster_hypergraph",
    "count_absorbing_tuples",
    "density",
    "exact_loose_hc",
    "figure_template",
    "find_augmenting_structure",
    "find_connecting_triples",
    "find_M_copy_in_triple",
    "forb_injection",
    "FractionalTiling",
    "generate",
    "GeneratorSpec",
    "greedy_tight_path",
    "Hypergraph3",
    "is_absorbing_tuple",
    "L29Instance",
    "load",
    "loose_path_tile_triple",
    "LooseCycle",
    "LoosePath",
    "m_tile_regular_triple",
    "make_complete",
    "make_H3",
    "make_Hk",
    "make_L29",
    "make_loose_cycle",
    "make_loose_path",
    "make_M",
    "make_tight_path",
    "max_M_tiling",
    "MTiling",
    "Partition",
    "path_tile",
    "Pattern",
    "random_binomial",
    "random_min_degree",
    "round_fractional_to_integral",
    "save",
    "search_L29_fractional",
    "SearchTimeout",
    "TightPath",
    "tripartite_random",
    "validate_fractional_tiling",
    "validate_loose_cycle",
    "validate_loose_path",
    "validate_tight_path",
]
