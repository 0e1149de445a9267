"""Nonnegative Tucker decomposition of third-order tensors under the
beta-divergence, with barwise spectrogram tensorization and boundary
evaluation."""

from .divergence import beta_div, gamma_exponent, objective
from .errors import NumericalDomainError, ParseError
from .segmentation import (
    BoundarySet,
    EvalReport,
    bar_autosimilarity,
    bars_to_seconds,
    evaluate_boundaries,
    segment_bars,
)
from .solver import FactorSet, LossTrace, SolverConfig, init_factors, iterate, solve
from .tensor_ops import (
    clamp_min,
    contracted_unfolding,
    ew_power,
    fold,
    matricize,
    mode_product,
    multiway_product,
    read_tensor,
    write_tensor,
)
from .tfb import (
    BarGrid,
    MelBank,
    Spectrogram,
    apply_mel,
    build_tfb,
    mel_filterbank,
    nnlms,
)

__all__ = [
    "BarGrid",
    "BoundarySet",
    "EvalReport",
    "FactorSet",
    "LossTrace",
    "MelBank",
    "NumericalDomainError",
    "ParseError",
    "SolverConfig",
    "Spectrogram",
    "apply_mel",
    "bar_autosimilarity",
    "bars_to_seconds",
    "beta_div",
    "build_tfb",
    "clamp_min",
    "contracted_unfolding",
    "evaluate_boundaries",
    "ew_power",
    "fold",
    "gamma_exponent",
    "init_factors",
    "iterate",
    "matricize",
    "mel_filterbank",
    "mode_product",
    "multiway_product",
    "nnlms",
    "objective",
    "read_tensor",
    "segment_bars",
    "solve",
    "write_tensor",
]
