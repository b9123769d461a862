"""Presentations of direct powers of perfect groups."""

from .core import (
    binary_generating_words,
    commutator_form,
    diagonal_power_generating_words,
    evaluate_form,
    propagate_witnesses,
    short_commutator_form,
    square_presentation,
    uce_presentation,
)
from .fixtures import (
    Fixture,
    a5,
    bp_presentation,
    bp_reduced,
    bp_schedule,
    builtin_examples,
    hall_schedule,
    sl25,
    synthetic_perfect,
)
from .pipeline import PowerPipelineResult, kill_words, power_of_two_presentation, power_presentation
from .reducers import (
    ExpressionReducer,
    PatternReducer,
    PermutationReducer,
    PlaceholderReducer,
    ReductionPlan,
    StageContext,
)
from .schedules import (
    GeneratorBoundSchedule,
    bp_counts,
    naive_counts,
    predicted_counts,
    sigma,
    simulate_counts,
    tau,
)
