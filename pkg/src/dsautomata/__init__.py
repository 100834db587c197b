"""Exact and approximate determinization of discounted-sum automata."""

from .algebra import (
    CLOSURE_TABLE,
    ClosureError,
    compose,
    op_add,
    op_max_integral,
    op_min,
    op_neg,
    op_scale,
    op_sub,
)
from .analysis import (
    Decision,
    Lasso,
    Valuation,
    approx_compare_geq,
    approx_equiv,
    approx_universal,
    gaps_distinguishable,
    inf_value,
    lasso_value,
    lasso_value_deterministic,
    shift_constant,
    sup_value,
)
from .approx import (
    DyadicDiscount,
    Precision,
    approx_determinize_rounding,
    min_unfold_depth,
    min_unfold_depth_generic,
    round_to_grid,
    rounding_state_bound,
    unfold,
    unfold_error_bound,
)
from .core import (
    INF,
    Automaton,
    DiscountFactor,
    DSAError,
    Run,
    ValidationReport,
    ValueReport,
    brute_force_table,
    brute_force_value,
    cost_vector,
    gap,
    half_life_bounds,
    run_value,
    tail_bounds,
    validate,
    word_value,
)
from .determinize import (
    CapExceeded,
    DeterminizationResult,
    GapVector,
    determinize_exact,
    gap_successor,
    theoretical_state_bound,
)
from .families import FamilySpec, family_properties, generate

__version__ = "0.1.0"
