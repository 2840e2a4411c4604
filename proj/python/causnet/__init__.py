"""Causality measures and network reconstruction benchmarks."""

from ._causnet import (
    CausnetError,
    binarize_density,
    binarize_magnitude,
    binarize_pmime,
    binarize_significance,
    causality_matrix,
    evaluate,
    henon,
    indices,
    mackey_glass,
    measure_id,
    neural_mass,
    p_values,
    randomization_p_value,
    rank_measures,
    run_bench,
    sparse_var,
)

__all__ = [
    "CausnetError",
    "binarize_density",
    "binarize_magnitude",
    "binarize_pmime",
    "binarize_significance",
    "causality_matrix",
    "evaluate",
    "henon",
    "indices",
    "mackey_glass",
    "measure_id",
    "neural_mass",
    "p_values",
    "randomization_p_value",
    "rank_measures",
    "run_bench",
    "sparse_var",
]
