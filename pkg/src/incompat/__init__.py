"""Joint measurability of finite POVM sets, incompatibility layers under
classical input/output operations, and operational witnesses."""

from .classical_ops import (
    CoarseGrainPlan,
    DisjointMixPlan,
    OutcomePartition,
    coarse_grain,
    coarse_grain_assemblage,
    compose_io,
    enumerate_partitions,
    mix_inputs,
)
from .classify import (
    DcmScanOptions,
    LayerEntry,
    LayerReport,
    busch_incompatible,
    classify_cg,
    classify_dcm,
    dcm_condition_qubit,
    full_incompatible_cg,
    full_incompatible_dcm,
    noisy_pauli_dcm_criterion,
    planarity_check,
    projective_full_cg_criterion,
    rank1_overlap_criterion,
)
from .families import (
    make_cglmp,
    make_experiment_scenario,
    make_noisy_mub,
    make_noisy_pauli,
    make_trine_xyz,
)
from .jm import JmVerdict, StrategySet, enumerate_strategies, solve_jm
from .linalg import commutator, eigvalsh, embed_real, is_psd, opnorm_maxeig, tensor
from .povm import Assemblage, BlochMeasurement, Povm, pad_assemblage, validate_povm
from .rac import (
    RacResult,
    chsh_max_qubit,
    p_cb,
    rac_success_k,
    rac_success_pair,
    trine_dcm_scan,
    witness_full_cg_rac,
    witness_full_dcm_rac,
)
from .robustness import NoiseFamily, ThresholdResult, bisect_threshold

__all__ = [name for name in dir() if not name.startswith("_")]
