from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

from lcoai import (
    CapexItem,
    CostScenario,
    Horizon,
    Money,
    NO_DISCOUNT,
    OpexModel,
    PerInferenceRate,
    VolumeProjection,
)

REPO_ROOT = Path(__file__).resolve().parent.parent
FIXTURES = REPO_ROOT / "fixtures"
GOLDEN = Path(__file__).resolve().parent / "golden"

settings.register_profile(
    "suite", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("suite")


def simple_scenario(name, capex_usd, rate_usd, volume, *,
                    horizon=None, discount=NO_DISCOUNT, fixed_usd="0"):
    """Single-pot scenario builder used across the suite."""
    capex = ()
    if Money.from_usd(capex_usd).amount:
        capex = (CapexItem("upfront", Money.from_usd(capex_usd)),)
    return CostScenario(
        name=name,
        capex=capex,
        opex=OpexModel(PerInferenceRate.from_usd(rate_usd),
                       Money.from_usd(fixed_usd)),
        volume=VolumeProjection((volume,) if isinstance(volume, int) else tuple(volume)),
        horizon=horizon or Horizon(1, 12),
        discount=discount,
    )


@pytest.fixture
def gpt41():
    return simple_scenario("GPT-4.1 API", "50000", "0.01", 10_000_000)


@pytest.fixture
def claude():
    return simple_scenario("Claude Haiku API", "50000", "0.0048", 10_000_000)


@pytest.fixture
def llama():
    return simple_scenario("LLaMA-2-13B self-hosted", "200000", "0.0048", 10_000_000)


@pytest.fixture
def fixtures_dir():
    return FIXTURES


@pytest.fixture
def golden_dir():
    return GOLDEN
