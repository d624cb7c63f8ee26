"""Ruin probabilities for a two-level bonus (no-claim discount) risk process."""

from ._core import (
    BonusRuinError,
    ModelParams,
    adjustment_eigenvector,
    classical_ruin,
    cramer_upper_constant,
    crude_mc_ruin,
    exponential_model,
    heavy_tail_asymptotic,
    heavy_tail_constant,
    macro_is_ruin,
    map_is_ruin,
    mc_mgf_x1,
    mc_tail_ratio,
    mean_cycle_increment,
    mgf_x1,
    npc_margin,
    pareto_model,
    run_cli,
    solve_integral_equations,
    solve_kappa,
    steady_state,
)

__version__ = "0.1.0"
