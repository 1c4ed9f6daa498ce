"""
Experiments

Table reproduction, theorem verification suites and their reports.
"""

from subshift_escape.experiments.enumeration import (
    canonical_form,
    enumerate_canonical_collections,
    orbit_size,
    random_collection,
)
from subshift_escape.experiments.executor import (
    SUITES,
    SuiteExecutor,
    SuiteRequest,
    execute_many,
    load_suite_config,
)
from subshift_escape.experiments.reports import FailureRecord, Status, TableRow, VerificationReport
from subshift_escape.experiments.suites import (
    replay_failure,
    run_counterexamples,
    verify_extremal_words,
    verify_gen_period,
    verify_gen_r_order,
    verify_lemma1_uniqueness,
    verify_lemma2_bracket,
    verify_min_period,
    verify_oracles,
    verify_p2_theorem,
    verify_r_order,
    verify_subshift_r_order,
)
from subshift_escape.experiments.tables import TableReproducer, reproduce_table

__all__ = [
    "SUITES",
    "FailureRecord",
    "Status",
    "SuiteExecutor",
    "SuiteRequest",
    "TableReproducer",
    "TableRow",
    "VerificationReport",
    "canonical_form",
    "enumerate_canonical_collections",
    "execute_many",
    "load_suite_config",
    "orbit_size",
    "random_collection",
    "replay_failure",
    "reproduce_table",
    "run_counterexamples",
    "verify_extremal_words",
    "verify_gen_period",
    "verify_gen_r_order",
    "verify_lemma1_uniqueness",
    "verify_lemma2_bracket",
    "verify_min_period",
    "verify_oracles",
    "verify_p2_theorem",
    "verify_r_order",
    "verify_subshift_r_order",
]
