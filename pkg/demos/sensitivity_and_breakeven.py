"""Walkthrough: sensitivity sweeps, break-even volumes, and tornado ranking.

The self-hosted scenario carries 4x the upfront capital of the API options,
so its cost curve starts far higher but falls faster as volume spreads the
capital out. This script shows where the curves cross, how sensitive each
deployment is to its inputs, and when paying for fine-tuning pays off.

Run from the repository root:  python demos/sensitivity_and_breakeven.py
"""

from fractions import Fraction
from pathlib import Path

from lcoai import (
    Money,
    PerInferenceRate,
    SweepSpec,
    break_even,
    fine_tune_threshold,
    format_usd,
    load_scenarios,
    sweep,
    sweep_series_csv,
    tornado,
)

FIXTURES = Path(__file__).resolve().parents[1] / "fixtures"


def main():
    scenarios = load_scenarios(FIXTURES / "table1.json")
    llama = next(s for s in scenarios if "LLaMA" in s.name)
    gpt = next(s for s in scenarios if "GPT" in s.name)

    print("Volume sensitivity, 1M to 50M annual inferences")
    print("-----------------------------------------------")
    points = tuple(range(1_000_000, 50_000_001, 7_000_000))
    for scenario in (llama, gpt):
        series = sweep(scenario, SweepSpec("volume", points)).series
        cells = ", ".join(f"{v // 1_000_000}M: {format_usd(m)}" for v, m in series)
        print(f"{scenario.name}: {cells}")
    print()

    print("Break-even between self-hosting and the API")
    print("-------------------------------------------")
    crossing = break_even(llama, gpt)
    print(f"{crossing.cheaper_below} is cheaper below "
          f"{crossing.crossover_volume:,} inferences per year; "
          f"{crossing.cheaper_above} wins at or above it.")
    print()

    print("Tornado: which input moves the result most at a ±30% swing?")
    print("-----------------------------------------------------------")
    for entry in tornado(llama, Fraction(3, 10)):
        print(f"  {entry.parameter:<10} low {format_usd(entry.low)}  "
              f"high {format_usd(entry.high)}  (spread {format_usd(entry.spread)})")
    print()

    print("Fine-tuning viability")
    print("---------------------")
    decision = fine_tune_threshold(
        PerInferenceRate.from_usd("0.010"),
        PerInferenceRate.from_usd("0.005"),
        Money.from_usd("50000"),
    )
    print(f"Halving the rate for a $50,000 investment pays off strictly "
          f"above {decision.threshold_volume - 1:,} inferences "
          f"(threshold {decision.threshold_volume:,}).")
    print()

    print("Plot-ready CSV (first rows of the volume sweep)")
    print("-----------------------------------------------")
    csv_text = sweep_series_csv(sweep(llama, SweepSpec("volume", points)))
    print("\n".join(csv_text.splitlines()[:4]))


if __name__ == "__main__":
    main()
