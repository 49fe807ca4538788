"""Opacity verification toolkit for nondeterministic finite transition systems.

Decides initial-state, current-state, K-step, and infinite-step opacity
via a two-way observer, checks opacity-preserving (bi)simulation
relations, builds quotient abstractions, and reproduces a piecewise-linear
infinite-state example exactly.
"""

from .system import (
    PHI,
    ResourceCapError,
    Run,
    TransitionSystem,
    augment,
    enumerate_runs,
    is_total,
    reachable,
    validate,
)
from .relations import (
    RelationDiagnosis,
    StatePairRelation,
    Violation,
    check_bisimulation,
    check_infsop_bisimulation,
    check_initsop_bisimulation,
    check_initsop_simulation,
    check_simulation,
    invert,
)
from .quotient import (
    Partition,
    build_quotient,
    check_eq1_condition,
    check_infsop_self,
    coarsest_infsop_partition,
    is_secret_compatible,
    quotient_relation,
    validate_partition,
)
from .observer import (
    CSO,
    INFSO,
    INITSO,
    KSO,
    NOTIONS,
    Observer,
    ObserverState,
    Verdict,
    Witness,
    backward_observer,
    build_two_way_observer,
    forward_observer,
    post_set,
    replay_witness,
    succ_set,
    verify,
    verify_cso,
    verify_infso,
    verify_initso,
    verify_kso,
)
from .oracle import (
    BoundedResult,
    CounterRng,
    ImplicationReport,
    bounded_check,
    bounded_check_all,
    implication_suite,
    naive_backward_beliefs,
    naive_cso_opaque,
    naive_forward_beliefs,
    naive_initso_opaque,
    random_system,
)
from .textio import (
    ParseError,
    export_dot,
    parse_nts,
    parse_partition,
    parse_relation,
    serialize_nts,
    serialize_partition,
    serialize_relation,
)
from .fixtures import (
    fixture_partition,
    fixture_relation,
    fixture_system,
    list_fixtures,
)

__version__ = "0.1.0"
