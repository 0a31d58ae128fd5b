"""fimkit: frequent-itemset mining, FI sampling, and a simulated cluster
runtime for parallel mining experiments."""

__version__ = "0.1.0"

from .core import (
    FiRecord,
    ParameterError,
    Pbec,
    Transaction,
    TransactionDB,
    canon,
    diffset,
    diffset_from_parent,
    minsup_from_relative,
    pbec_contains,
    support,
    tidlist,
)
from .miners import (
    EclatOpts,
    MinerStats,
    RuleRecord,
    apriori,
    eclat,
    format_fi,
    fpgrowth,
    generate_rules,
    mfi_mine,
    mine,
)
from .datagen import (
    FimiFormatError,
    GenParams,
    generate_db,
    partition_db,
    read_config,
    read_fimi,
    write_fimi,
)
from .sampling import (
    FiSample,
    SampleParams,
    coverage_sample,
    coverage_sample_size,
    db_sample_size,
    kl,
    multinomial,
    multivariate_hypergeom,
    pbec_size_bounds,
    reservoir,
    reservoir_sample_size,
    write_sample,
)
from .scheduler import (
    PbecPlan,
    db_repl_min,
    lpt_schedule,
    partition_pbec,
    plan_from_json,
    plan_phase2,
    plan_to_json,
    replication_factor,
    share_matrix,
)
from .cluster import (
    ExchangeSchedule,
    RunMetrics,
    RunResult,
    SimCluster,
    TidlistCache,
    WorkerPanic,
    exchange_schedule,
    exec_eclat,
    metrics_csv,
    parallel_mfi,
    phase3_exchange,
    run_manifest,
    run_parallel_fimi,
)
from .stats import (
    Histogram2D,
    MfiGraph,
    ci_extension_stats,
    fi_characteristic,
    mfi_characteristic,
    mfi_graph,
    mfi_intersection_hist,
    pagerank,
    sample_mfis_for_graph,
    support_bin,
)

__all__ = [
    "FiRecord", "ParameterError", "Pbec", "Transaction", "TransactionDB",
    "canon", "diffset", "diffset_from_parent", "minsup_from_relative",
    "pbec_contains", "support", "tidlist",
    "EclatOpts", "MinerStats", "RuleRecord", "apriori", "eclat", "format_fi",
    "fpgrowth", "generate_rules", "mfi_mine", "mine",
    "FimiFormatError", "GenParams", "generate_db", "partition_db",
    "read_config", "read_fimi", "write_fimi",
    "FiSample", "SampleParams", "coverage_sample", "coverage_sample_size",
    "db_sample_size", "kl", "multinomial", "multivariate_hypergeom",
    "pbec_size_bounds", "reservoir", "reservoir_sample_size", "write_sample",
    "PbecPlan", "db_repl_min", "lpt_schedule", "partition_pbec",
    "plan_from_json", "plan_phase2", "plan_to_json", "replication_factor",
    "share_matrix",
    "ExchangeSchedule", "RunMetrics", "RunResult", "SimCluster",
    "TidlistCache", "WorkerPanic", "exchange_schedule", "exec_eclat",
    "metrics_csv", "parallel_mfi", "phase3_exchange", "run_manifest",
    "run_parallel_fimi",
    "Histogram2D", "MfiGraph", "ci_extension_stats", "fi_characteristic",
    "mfi_characteristic", "mfi_graph", "mfi_intersection_hist", "pagerank",
    "sample_mfis_for_graph", "support_bin",
    "__version__",
]
