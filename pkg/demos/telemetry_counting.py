"""Walkthrough: count valid inferences from a telemetry log.

The denominator of the levelized cost only admits productive, traceable
outputs: health checks and other system calls are excluded, and so are
errored inference attempts. This script parses a small JSONL log, shows the
classification tallies, and plugs the per-period counts into a scenario.

Run from the repository root:  python demos/telemetry_counting.py
"""

from pathlib import Path

from lcoai import (
    CapexItem,
    CostScenario,
    Horizon,
    Money,
    OpexModel,
    PerInferenceRate,
    VolumeProjection,
    compute_lcoai,
    count_valid,
    format_usd,
    parse_log,
)

FIXTURES = Path(__file__).resolve().parents[1] / "fixtures"


def main():
    log_path = FIXTURES / "telemetry_sample.jsonl"
    with open(log_path, "rb") as fh:
        parsed = parse_log(fh)
    print(f"parsed {len(parsed.records)} records from {log_path.name}")

    horizon = Horizon(periods=1, period_length_months=12)
    start = parsed.records[0].timestamp
    counts = count_valid(parsed.records, horizon, start)
    print(f"valid inferences        : {counts.valid}")
    print(f"non-productive excluded : {counts.excluded_nonproductive}")
    print(f"failed excluded         : {counts.excluded_failed}")
    print(f"outside horizon         : {counts.out_of_range}")
    print(f"per-period buckets      : {counts.period_buckets}")
    print()

    # measured counts become the volume projection of a costed scenario
    per_period = tuple(counts.period_buckets.get(i, 0)
                       for i in range(horizon.periods))
    measured = CostScenario(
        name="measured deployment",
        capex=(CapexItem("integration", Money.from_usd("500")),),
        opex=OpexModel(PerInferenceRate.from_usd("0.0048")),
        volume=VolumeProjection(per_period),
        horizon=horizon,
    )
    result = compute_lcoai(measured)
    print(f"levelized cost at the measured volume: "
          f"{format_usd(result.per_thousand)} per 1,000")
    print("(tiny volumes make the capital share dominate, as expected)")


if __name__ == "__main__":
    main()
