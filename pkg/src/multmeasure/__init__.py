"""Exact multiplicative measure on the positive reals."""

from __future__ import annotations

from .errors import (
    DomainError,
    EpsilonOutOfRange,
    FactorBelowOne,
    InfiniteMeasure,
    InvalidPermutation,
    MeasureError,
    NonRepresentableBound,
    NotACover,
    NotDisjoint,
    NotSeparated,
    ParameterOrder,
    ToleranceNotMet,
)
from .families import (
    GeneratorFamily,
    Kind,
    LogCantor,
    cantor_gap,
    cantor_gaps,
    cantor_stage,
    cantor_stages,
    gap_depth_product,
    geometric_family,
    telescoping_family,
)
from .intervals import (
    INF,
    IntervalSet,
    LogPoint,
    PosInterval,
    RealInterval,
    RealIntervalSet,
    complement,
    difference,
    dilate,
    exp_transform,
    intersect,
    length,
    log_transform,
    normalize,
    union,
)
from .measure import (
    Cover,
    MeasureReport,
    Method,
    caratheodory_test,
    cover_value,
    greedy_cover,
    lambda_quadrature,
    mu,
    mu_countable,
    null_equivalence_check,
    outer_measure,
    separated_multiplicativity_check,
)
from .mvalue import (
    INFINITY,
    ONE,
    DoubleFactorFamily,
    ExactExpLog,
    ExactRational,
    FactorFamily,
    LogFloat,
    MValue,
    Order,
    ProductResult,
    Status,
    finite_product,
    infinite_product,
    iterated_double_product,
    mv_compare,
    rearrange_double_to_single,
    rearranged_product,
    telescoping_closed_form,
    telescoping_epsilon_product,
    unordered_double_product,
)

__version__ = "0.1.0"
