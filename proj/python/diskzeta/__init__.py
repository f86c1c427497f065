"""Ruelle resonances and invariant Ruelle distributions of the symmetric
three-disk billiard, computed from periodic-orbit cycle expansions.

The heavy lifting lives in the compiled extension ``diskzeta._core``; this
package re-exports its public surface.
"""

from ._core import (
    ComparisonReport,
    CycleExpansion,
    DiskZetaError,
    HyperbolicityStats,
    MatchedPair,
    OrbitRecord,
    QuantumRecord,
    ResidueMap,
    Resonance,
    SectionPoint,
    band0_validity,
    default_sigma,
    enumerate_words,
    find_resonances,
    hyperbolicity_stats,
    k_to_lambda,
    lambda_to_k,
    load_quantum_csv,
    make_resonance,
    match_spectra,
    partial_sum_zeta,
    probe_weight,
    residue,
    residue_map,
    solve_orbits,
)

__version__ = "0.1.0"

__all__ = [
    "ComparisonReport",
    "CycleExpansion",
    "DiskZetaError",
    "HyperbolicityStats",
    "MatchedPair",
    "OrbitRecord",
    "QuantumRecord",
    "ResidueMap",
    "Resonance",
    "SectionPoint",
    "band0_validity",
    "default_sigma",
    "enumerate_words",
    "find_resonances",
    "hyperbolicity_stats",
    "k_to_lambda",
    "lambda_to_k",
    "load_quantum_csv",
    "make_resonance",
    "match_spectra",
    "partial_sum_zeta",
    "probe_weight",
    "residue",
    "residue_map",
    "solve_orbits",
    "__version__",
]
