"""ordkit: a workbench for finite sectionally pseudocomplemented posets.

Core objects are immutable and hashable; all operations are pure functions,
safe to call concurrently.
"""

__version__ = "0.1.0"

from .completion import (
    DMResult,
    completion_sidecar,
    cut_closure,
    dm_completion,
    dm_cuts,
    dm_cuts_bruteforce,
    dm_preserves_secpc,
)
from .congruence import (
    Partition,
    QuotientStructure,
    all_congruences,
    all_congruences_bruteforce,
    congruence_join,
    is_congruence,
    is_convex,
    is_strong,
    iter_partitions,
    partition_from_json,
    partition_to_json,
    principal_congruence,
    quotient,
    verify_congruence_structure,
)
from .errors import (
    AxiomViolation,
    ClassWithoutGreatest,
    CycleError,
    HypothesisViolated,
    InvalidFamily,
    NotCongruence,
    NotConvex,
    NotStronglySecPc,
    OrdkitError,
    ParseError,
    PreconditionError,
    SizeCapExceeded,
    UnknownLabel,
    UnknownPredicate,
    YokedConditionFailed,
)
from .ordinal_sum import (
    SumFamily,
    SumPoset,
    YokedFamily,
    build_sum,
    check_sum_hypothesis,
    check_yoked_family,
    dm_related_family,
    dm_yoked_family,
    load_sum_family,
    parse_sum_family_text,
    sum_sec_pc,
    verify_sum_completion,
    verify_sum_secpc,
)
from .poset import (
    FinitePoset,
    build_poset,
    format_poset_text,
    is_isomorphic,
    load_poset,
    parse_poset_text,
    to_dot,
)
from .reports import CheckResult, PropertyReport, format_report
from .search import (
    Census,
    CensusEntry,
    PREDICATES,
    canonical_key,
    census_entry,
    enumerate_posets,
    enumerate_posets_bruteforce,
    find_counterexample,
    poset_from_key,
    run_census,
)
from .secpc import (
    ClassificationReport,
    SectionTable,
    classification_to_json,
    classify,
    format_classification,
    format_table_grid,
    is_completely_l_semidistributive,
    recover_from_groupoid,
    rel_pc,
    sec_pc,
    sec_table,
    table_from_json,
    table_to_json,
    verify_lattice_identities,
    verify_maltsev_weak_regularity,
    verify_star_properties,
)
