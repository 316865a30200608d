"""Walkthrough: compute levelized costs and rank deployment alternatives.

Builds three deployment scenarios — two managed-API options and one
self-hosted cluster — computes each one's cost per 1,000 inferences, renders
the comparison table, and quantifies the savings against a human-labor
baseline of $300 per 1,000 interactions.

Run from the repository root:  python demos/compare_deployments.py
"""

from pathlib import Path

from lcoai import (
    Money,
    baseline_savings,
    build_comparison_table,
    compute_lcoai,
    format_usd,
    load_scenarios,
)

FIXTURES = Path(__file__).resolve().parents[1] / "fixtures"


def main():
    scenarios = load_scenarios(FIXTURES / "table1.json")

    print("Per-scenario decomposition")
    print("--------------------------")
    for scenario in scenarios:
        result = compute_lcoai(scenario)
        print(f"{scenario.name}:")
        print(f"  capex charged : {format_usd(result.total_capex_charged)}")
        print(f"  total opex    : {format_usd(result.total_opex)}")
        print(f"  inferences    : {result.total_inferences:,}")
        print(f"  per 1,000     : {format_usd(result.per_thousand)}")
    print()

    print("Ranked comparison (cheapest first)")
    print("----------------------------------")
    print(build_comparison_table(scenarios).render())

    print("Against a $300-per-1,000 human-labor baseline")
    print("---------------------------------------------")
    baseline = Money.from_usd("300")
    for scenario in scenarios:
        comparison = baseline_savings(compute_lcoai(scenario), baseline)
        ratio = comparison.savings_ratio
        print(f"{scenario.name}: saves {format_usd(comparison.savings_per_thousand)} "
              f"per 1,000 ({float(ratio):.1%} of the baseline)")


if __name__ == "__main__":
    main()
