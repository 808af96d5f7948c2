"""Zeta functions of sofic-Dyck shifts.

Three independent computations of the same series: counting periodic
patterns directly, an alternating product of exterior-power determinants
of language matrices, and substitution of pattern series into the zeta
function of a finite pattern graph.

>>> from soficdyck import builtin, zeta_det_route
>>> print(zeta_det_route(builtin("golden-mean"), cap=5))
1 + z + 2*z^2 + 3*z^3 + 5*z^4 + 8*z^5
"""

from .words import (
    HKind,
    PushdownAlphabet,
    balance,
    conjugates,
    is_dyck,
    is_matched_call,
    is_matched_return,
    is_prime_dyck,
    prime_factors,
    rotate_to_dyck,
    word,
)
from .automaton import (
    AutomatonError,
    DyckAutomaton,
    admissible_runs,
    builtin,
    check_h_codeterminism,
    check_h_determinism,
    check_stack_equivalence,
    is_periodic_pattern,
    load,
    validate,
)
from .series import (
    MultiSeries,
    SeriesError,
    SeriesMatrix,
    TruncatedSeries,
    det,
    matrix_star,
    substitute,
    theta,
)
from .languages import (
    circularity_check,
    dyck_and_prime_matrices,
    h_matrix,
    membership,
    pattern_counts,
    pattern_series,
)
from .zeta import (
    PeriodicCountTable,
    PreconditionError,
    ZetaIntegrityError,
    counts_from_zeta,
    decomposition_check,
    entropy_estimate,
    exterior_power,
    pattern_graph,
    pn_bruteforce,
    sofic_zeta,
    zeta_bruteforce,
    zeta_det_route,
    zeta_subst_route,
)

__version__ = "0.1.0"
