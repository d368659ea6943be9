"""Solvers for knapsack, subset sum, and exponent equations over graph groups.

Graph groups are given by independence alphabets (finite simple graphs whose
edges mark commuting generators).  The library classifies alphabets, decides
the word problem two independent ways, solves exponent equations with
bound-certified outcomes where the alphabet permits, and generates the
hardness instances used to cross-check the solvers.
"""

from .alphabet import (
    COMPLETE,
    GENERAL,
    TRANSITIVE_FOREST_NOT_COMPLETE,
    DirectZ,
    FreeProduct,
    GraphClass,
    IndependenceAlphabet,
    Trivial,
    classify,
    decompose,
    validate_alphabet,
)
from .automata import (
    AcyclicityEvidence,
    WordAutomaton,
    check_acyclic,
    check_acyclic_loop,
    membership_one,
    membership_one_brute,
    unroll_loops,
)
from .cancellation import (
    BlockSequence,
    MixedPeriod,
    block_factorize,
    compatible_periods,
    find_cancellation,
    grow,
    local_semilinear_cover,
    mixed_periods,
    shrink,
    verify_cancellation,
)
from .errors import (
    AutomatonError,
    BoundError,
    CancellationError,
    EquationError,
    GraphKnapError,
    InvalidAlphabetError,
    JsonFormatError,
    NotTransitiveForestError,
    ResourceExhaustedError,
    WordError,
)
from .gadgets import (
    CnfFormula,
    GadgetInstance,
    acyclic_automaton_to_knapsack_f2,
    first_primes,
    intersection_to_group_membership,
    loop_automaton_to_knapsack_p4,
    parse_dimacs,
    sat_to_p4_automata,
    sat_to_p4_knapsack,
    to_dimacs,
)
from .group import (
    FreeProductSplit,
    cyclically_reduce,
    invert_word,
    is_identity,
    is_identity_stacked,
    reduce_word,
    syllables,
    word_from_strs,
    word_to_strs,
)
from .knapsack import (
    ExponentEquation,
    SolveOutcome,
    SolverLimits,
    TamenessBound,
    brute_force_solutions,
    knapsack_to_automaton,
    preprocess,
    solution_set,
    solve,
    solve_integer_valued,
    solve_subset_sum,
    solve_within_bounds,
    substitute,
    tameness_bound,
    tameness_bound_value,
    verify_solution,
)
from .semilinear import (
    LinearSet,
    SemilinearSet,
    decompose_hyperplane_solutions,
    decompose_onedim_bounded,
    intersect_linear_with_hyperplane,
    magnitude,
    members_up_to,
    minimal_solutions_homogeneous,
    minimal_solutions_inhom,
    semilinear_member,
)
from .trace import TraceNormalForm, foata_normal_form, project, traces_equal

__version__ = "0.1.0"
