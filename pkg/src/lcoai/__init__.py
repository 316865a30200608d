"""Levelized cost of AI (LCOAI) modeling toolkit.

Computes the lifecycle cost per inference of AI deployment scenarios with
exact micro-dollar arithmetic, runs volume/OPEX/CAPEX sensitivity sweeps,
solves break-even volumes between alternatives, and counts valid inferences
from telemetry logs.
"""

from .cost_core import (
    HORIZON_LIFE,
    MICRO_PER_USD,
    NO_DISCOUNT,
    CapexItem,
    CostScenario,
    DiscountPolicy,
    Horizon,
    LcoaiResult,
    Money,
    OpexModel,
    PerInferenceRate,
    VolumeProjection,
    amortize_capex,
    compute_lcoai,
    discount_factor,
    round_half_away,
    usd_to_micro,
)
from .decision import (
    BaselineComparison,
    ComparisonRow,
    FineTuneDecision,
    baseline_savings,
    compare,
    fine_tune_threshold,
)
from .errors import (
    IncompatibleScenariosError,
    InvalidHorizonError,
    LcoaiError,
    LogParseError,
    ScenarioFileError,
    UndefinedMetricError,
)
from .ingest import (
    InferenceRecord,
    ParseResult,
    RecordKind,
    RecordStatus,
    VolumeCount,
    count_valid,
    parse_log,
    parse_rfc3339,
)
from .sensitivity import (
    BreakEvenResult,
    SweepResult,
    SweepSpec,
    TornadoEntry,
    break_even,
    sweep,
    tornado,
    with_capex_scaled,
    with_opex_rate,
    with_total_volume,
)
from .cli_report import (
    ReportTable,
    build_comparison_table,
    format_rate,
    format_usd,
    load_scenarios,
    save_scenarios,
    scenarios_from_dict,
    scenarios_to_dict,
    sweep_series_csv,
)

__version__ = "0.1.0"

__all__ = [
    "BaselineComparison",
    "BreakEvenResult",
    "CapexItem",
    "ComparisonRow",
    "CostScenario",
    "DiscountPolicy",
    "FineTuneDecision",
    "HORIZON_LIFE",
    "Horizon",
    "IncompatibleScenariosError",
    "InferenceRecord",
    "InvalidHorizonError",
    "LcoaiError",
    "LcoaiResult",
    "LogParseError",
    "MICRO_PER_USD",
    "Money",
    "NO_DISCOUNT",
    "OpexModel",
    "ParseResult",
    "PerInferenceRate",
    "RecordKind",
    "RecordStatus",
    "ReportTable",
    "ScenarioFileError",
    "SweepResult",
    "SweepSpec",
    "TornadoEntry",
    "UndefinedMetricError",
    "VolumeCount",
    "VolumeProjection",
    "amortize_capex",
    "baseline_savings",
    "break_even",
    "build_comparison_table",
    "compare",
    "compute_lcoai",
    "count_valid",
    "discount_factor",
    "fine_tune_threshold",
    "format_rate",
    "format_usd",
    "load_scenarios",
    "parse_log",
    "parse_rfc3339",
    "round_half_away",
    "save_scenarios",
    "scenarios_from_dict",
    "scenarios_to_dict",
    "sweep",
    "sweep_series_csv",
    "tornado",
    "usd_to_micro",
    "with_capex_scaled",
    "with_opex_rate",
    "with_total_volume",
]
