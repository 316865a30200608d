"""Domain types and the levelized cost-per-inference computation.

Every monetary quantity is an integer count of micro-dollars (1 USD =
1,000,000 micro-dollars), so arithmetic is exact; the single rounding rule
anywhere is round-half-away-from-zero at micro-dollar granularity. Discount
factors are ``fractions.Fraction``. All types are immutable values and all
operations are pure functions, so everything here is safe for unrestricted
concurrent use.
"""

from __future__ import annotations

import decimal
from dataclasses import dataclass
from decimal import Decimal
from fractions import Fraction
from typing import Iterable, Literal, Union

from .errors import InvalidHorizonError, UndefinedMetricError

MICRO_PER_USD = 10**6

# CapexItem.asset_life_months sentinel: amortize over the analysis horizon.
HORIZON_LIFE = "horizon"

Rational = Union[int, Fraction]


def round_half_away(value: Rational) -> int:
    """Round an exact rational to the nearest integer, ties away from zero."""
    frac = Fraction(value)
    n, d = frac.numerator, frac.denominator
    q, r = divmod(abs(n), d)
    if 2 * r >= d:
        q += 1
    return q if n >= 0 else -q


def usd_to_micro(usd: Union[str, int, Decimal]) -> int:
    """Convert an exact decimal USD quantity to integer micro-dollars.

    Floats are refused (their binary representation would defeat exactness),
    as is anything finer than micro-dollar resolution (6 decimal places).
    """
    if isinstance(usd, bool):
        raise TypeError("bool is not a USD amount")
    if isinstance(usd, int):
        return usd * MICRO_PER_USD
    if isinstance(usd, float):
        raise TypeError("float USD values are not exact; pass a str, int, or Decimal")
    if isinstance(usd, str):
        try:
            usd = Decimal(usd)
        except decimal.InvalidOperation as exc:
            raise ValueError(f"not a decimal amount: {usd!r}") from exc
    if not isinstance(usd, Decimal):
        raise TypeError(f"cannot convert {type(usd).__name__} to micro-dollars")
    if not usd.is_finite():
        raise ValueError("USD amount must be finite")
    with decimal.localcontext() as ctx:
        ctx.prec = 60
        scaled = usd.scaleb(6)
    micro = int(scaled)
    if scaled != micro:
        raise ValueError(f"{usd} exceeds micro-dollar resolution (6 decimal places)")
    return micro


def micro_to_usd_string(micro: int) -> str:
    """Minimal decimal USD string for a micro-dollar count ("0.0048", "50000")."""
    sign = "-" if micro < 0 else ""
    whole, frac = divmod(abs(micro), MICRO_PER_USD)
    if frac == 0:
        return f"{sign}{whole}"
    return f"{sign}{whole}.{frac:06d}".rstrip("0")


@dataclass(frozen=True, slots=True, order=True)
class Money:
    """An exact currency amount: an integer count of micro-dollars."""

    amount: int

    def __post_init__(self):
        if isinstance(self.amount, bool) or not isinstance(self.amount, int):
            raise TypeError("Money holds an int count of micro-dollars")

    @classmethod
    def from_usd(cls, usd: Union[str, int, Decimal]) -> "Money":
        return cls(usd_to_micro(usd))

    def __add__(self, other: "Money") -> "Money":
        return Money(self.amount + other.amount)

    def __sub__(self, other: "Money") -> "Money":
        return Money(self.amount - other.amount)

    def __mul__(self, k: int) -> "Money":
        if isinstance(k, bool) or not isinstance(k, int):
            raise TypeError("Money multiplies exactly by int only; use scaled() for rationals")
        return Money(self.amount * k)

    __rmul__ = __mul__

    def __neg__(self) -> "Money":
        return Money(-self.amount)

    def __abs__(self) -> "Money":
        return Money(abs(self.amount))

    def scaled(self, k: Rational) -> "Money":
        """Scale by an exact non-binary rational, rounding half away from zero."""
        return Money(round_half_away(Fraction(self.amount) * Fraction(k)))

    def per_inference(self, count: int) -> "PerInferenceRate":
        """Divide by an inference count under the declared rounding rule."""
        if count <= 0:
            raise ValueError("inference count must be positive")
        return PerInferenceRate(round_half_away(Fraction(self.amount, count)))

    def as_usd(self) -> Decimal:
        """Exact USD value as a Decimal."""
        return Decimal(self.amount).scaleb(-6)

    def usd_string(self) -> str:
        return micro_to_usd_string(self.amount)

    def __str__(self) -> str:
        return f"${self.usd_string()}"


ZERO = Money(0)


@dataclass(frozen=True, slots=True, order=True)
class PerInferenceRate:
    """Micro-dollars per single inference. Non-negative."""

    rate: int

    def __post_init__(self):
        if isinstance(self.rate, bool) or not isinstance(self.rate, int):
            raise TypeError("PerInferenceRate holds an int count of micro-dollars")
        if self.rate < 0:
            raise ValueError("per-inference rate must be non-negative")

    @classmethod
    def from_usd(cls, usd: Union[str, int, Decimal]) -> "PerInferenceRate":
        return cls(usd_to_micro(usd))

    def per_thousand(self) -> Money:
        """The reporting unit: exact cost per 1,000 inferences."""
        return Money(self.rate * 1000)

    def total_for(self, inferences: int) -> Money:
        """Exact cost of the given inference count at this rate."""
        if inferences < 0:
            raise ValueError("inference count must be non-negative")
        return Money(self.rate * inferences)

    def scaled(self, k: Rational) -> "PerInferenceRate":
        return PerInferenceRate(round_half_away(Fraction(self.rate) * Fraction(k)))

    def as_usd(self) -> Decimal:
        return Decimal(self.rate).scaleb(-6)

    def usd_string(self) -> str:
        return micro_to_usd_string(self.rate)


@dataclass(frozen=True, slots=True)
class CapexItem:
    """One upfront investment (hardware, fine-tuning, integration, licensing).

    ``asset_life_months`` is either a positive month count for straight-line
    amortization over the asset's useful life, or :data:`HORIZON_LIFE` to
    allocate the full amount over the analysis horizon.
    """

    label: str
    amount: Money
    asset_life_months: Union[int, str] = HORIZON_LIFE

    def __post_init__(self):
        if self.amount.amount < 0:
            raise ValueError("CAPEX amount must be non-negative")
        if self.asset_life_months != HORIZON_LIFE:
            life = self.asset_life_months
            if isinstance(life, bool) or not isinstance(life, int) or life <= 0:
                raise ValueError("asset_life_months must be a positive integer or 'horizon'")


@dataclass(frozen=True, slots=True)
class OpexModel:
    """Recurring costs: a per-inference rate plus an optional fixed charge per period."""

    per_inference: PerInferenceRate
    fixed_per_period: Money = ZERO

    def __post_init__(self):
        if self.fixed_per_period.amount < 0:
            raise ValueError("fixed_per_period must be non-negative")

    def period_total(self, inferences: int) -> Money:
        """Exact OPEX for one period with the given inference count."""
        return self.fixed_per_period + self.per_inference.total_for(inferences)


@dataclass(frozen=True, slots=True)
class VolumeProjection:
    """Projected valid-inference counts, one entry per horizon period."""

    per_period: tuple

    def __post_init__(self):
        entries = tuple(self.per_period)
        object.__setattr__(self, "per_period", entries)
        if not entries:
            raise ValueError("projection needs at least one period")
        for v in entries:
            if isinstance(v, bool) or not isinstance(v, int) or v < 0:
                raise ValueError("period volumes must be non-negative integers")

    @property
    def total(self) -> int:
        return sum(self.per_period)


@dataclass(frozen=True, slots=True)
class Horizon:
    """The analysis span: a count of uniform periods, each a whole number of months."""

    periods: int
    period_length_months: int = 12

    def __post_init__(self):
        if isinstance(self.periods, bool) or not isinstance(self.periods, int) or self.periods <= 0:
            raise InvalidHorizonError("horizon needs a positive period count")
        plm = self.period_length_months
        if isinstance(plm, bool) or not isinstance(plm, int) or plm <= 0:
            raise InvalidHorizonError("period length must be a positive month count")

    @property
    def months(self) -> int:
        return self.periods * self.period_length_months


@dataclass(frozen=True, slots=True)
class DiscountPolicy:
    """Whether and how future cash flows are discounted.

    ``wacc`` mode applies 1/(1+annual_rate)^years to each period's cash
    flows; capital charges are commissioning-time (period 0) lumps and are
    never discounted. ``discount_denominator`` extends the discounting to the
    inference denominator (the levelized-output convention) and is off by
    default.
    """

    mode: Literal["none", "wacc"] = "none"
    annual_rate: Union[Fraction, None] = None
    discount_denominator: bool = False

    def __post_init__(self):
        if self.mode not in ("none", "wacc"):
            raise ValueError(f"unknown discount mode {self.mode!r}")
        if self.mode == "wacc":
            if self.annual_rate is None:
                raise ValueError("wacc mode requires an annual_rate")
            rate = Fraction(self.annual_rate)
            object.__setattr__(self, "annual_rate", rate)
            if rate < 0:
                raise ValueError("annual_rate must be non-negative")
            if rate >= 1:
                raise ValueError("an annual rate of 100% or more is rejected")

    @property
    def is_discounting(self) -> bool:
        """True when the policy changes any cash flow (wacc with a positive rate)."""
        return self.mode == "wacc" and bool(self.annual_rate)


NO_DISCOUNT = DiscountPolicy()


@dataclass(frozen=True, slots=True)
class CostScenario:
    """A named deployment alternative.

    Combines CAPEX items, an OPEX model, a per-period volume projection, the
    analysis horizon, and a discount policy. A scenario whose projection
    totals zero is constructible (sweeps may start at zero volume) but its
    levelized cost is undefined and rejected at computation time.
    """

    name: str
    capex: tuple
    opex: OpexModel
    volume: VolumeProjection
    horizon: Horizon
    discount: DiscountPolicy = NO_DISCOUNT

    def __post_init__(self):
        if not self.name:
            raise ValueError("scenario name must be non-empty")
        object.__setattr__(self, "capex", tuple(self.capex))
        if len(self.volume.per_period) != self.horizon.periods:
            raise ValueError(
                f"projection covers {len(self.volume.per_period)} periods "
                f"but the horizon has {self.horizon.periods}"
            )

    @property
    def capex_total(self) -> Money:
        """Raw (unamortized) sum of all CAPEX items."""
        return Money(sum(item.amount.amount for item in self.capex))


@dataclass(frozen=True, slots=True)
class LcoaiResult:
    """The levelized cost together with its full decomposition.

    ``per_inference`` equals (total_capex_charged + total_opex) divided by
    the denominator under the round-half-away rule; the denominator is
    ``total_inferences`` unless the policy discounts it. ``per_thousand`` is
    exactly ``per_inference`` times 1,000 and keeps micro-dollar resolution;
    rounding to cents happens only in the reporting layer.
    ``exact_per_inference`` is the unrounded value, kept for property checks
    and exact curve comparisons. ``short_horizon_discounted`` flags
    discounting applied to a horizon of 24 months or less (normally omitted
    at that span).
    """

    scenario_name: str
    total_capex_charged: Money
    total_opex: Money
    total_inferences: int
    per_inference: PerInferenceRate
    per_thousand: Money
    discounted: bool
    exact_per_inference: Fraction
    short_horizon_discounted: bool = False


def _uniform_stream(total_micro: int, periods: int) -> list:
    # residual micro-dollars from uneven division land in the final period
    base = total_micro // periods
    stream = [base] * periods
    stream[-1] = total_micro - base * (periods - 1)
    return stream


def amortize_capex(items: Iterable[CapexItem], horizon: Horizon) -> list:
    """Per-period capital charge stream (list of Money) over the horizon.

    ``HORIZON_LIFE`` items spread their full amount uniformly across the
    horizon. A numeric asset life at least as long as the horizon charges
    the straight-line share amount * horizon_months / asset_life_months,
    spread uniformly. A shorter life charges the full amount within the life
    span, month by month (cumulative rounding keeps the stream total exact).
    The stream total never exceeds the item total.
    """
    periods = horizon.periods
    plm = horizon.period_length_months
    total_months = horizon.months
    charges = [0] * periods
    for item in items:
        micro = item.amount.amount
        life = item.asset_life_months
        if life == HORIZON_LIFE or life >= total_months:
            if life == HORIZON_LIFE:
                charged = micro
            else:
                charged = round_half_away(Fraction(micro * total_months, life))
            for i, c in enumerate(_uniform_stream(charged, periods)):
                charges[i] += c
        else:
            prev = 0
            for p in range(1, periods + 1):
                covered = min(p * plm, life)
                cum = round_half_away(Fraction(micro * covered, life))
                charges[p - 1] += cum - prev
                prev = cum
    return [Money(c) for c in charges]


def discount_factor(policy: DiscountPolicy, period_index: int,
                    period_length_months: int = 12) -> Fraction:
    """Present-value factor for one period's cash flows.

    Periods are indexed from 1; the factor is 1/(1+annual_rate)^y with
    y = period_index * period_length_months / 12. Period 0 is commissioning
    time and always carries factor 1 (capital is charged there). Non-integral
    exponents (period grids that miss year boundaries) are evaluated to 50
    significant digits and returned as the exact Fraction of that decimal, so
    results stay deterministic.
    """
    if period_index < 0:
        raise ValueError("period_index starts at 0 (commissioning)")
    if not policy.is_discounting or period_index == 0:
        return Fraction(1)
    years = Fraction(period_index * period_length_months, 12)
    base = 1 + policy.annual_rate
    if years.denominator == 1:
        return Fraction(1) / base ** years.numerator
    with decimal.localcontext() as ctx:
        ctx.prec = 50
        b = Decimal(base.numerator) / Decimal(base.denominator)
        y = Decimal(years.numerator) / Decimal(years.denominator)
        return Fraction(1) / Fraction(b**y)


def compute_lcoai(scenario: CostScenario) -> LcoaiResult:
    """Levelized cost of the scenario, with full decomposition.

    The numerator is the capital charged within the horizon (an undiscounted
    commissioning-time lump) plus every period's OPEX, discounted per policy.
    The denominator is the total projected inference count, discounted only
    when ``discount_denominator`` is set. Raises
    :class:`~lcoai.errors.UndefinedMetricError` when the projection totals
    zero.
    """
    total_inferences = scenario.volume.total
    if total_inferences <= 0:
        raise UndefinedMetricError(
            f"scenario {scenario.name!r} projects zero valid inferences")

    capex_stream = amortize_capex(scenario.capex, scenario.horizon)
    total_capex_charged = Money(sum(c.amount for c in capex_stream))

    policy = scenario.discount
    plm = scenario.horizon.period_length_months
    opex_exact = Fraction(0)
    for t, vol in enumerate(scenario.volume.per_period, start=1):
        period_opex = scenario.opex.period_total(vol)
        opex_exact += discount_factor(policy, t, plm) * period_opex.amount
    total_opex = Money(round_half_away(opex_exact))

    if policy.is_discounting and policy.discount_denominator:
        denominator = sum(
            discount_factor(policy, t, plm) * vol
            for t, vol in enumerate(scenario.volume.per_period, start=1)
        )
    else:
        denominator = Fraction(total_inferences)

    numerator = total_capex_charged + total_opex
    per_inference = PerInferenceRate(
        round_half_away(Fraction(numerator.amount) / denominator))
    exact = (total_capex_charged.amount + opex_exact) / denominator

    return LcoaiResult(
        scenario_name=scenario.name,
        total_capex_charged=total_capex_charged,
        total_opex=total_opex,
        total_inferences=total_inferences,
        per_inference=per_inference,
        per_thousand=per_inference.per_thousand(),
        discounted=policy.is_discounting,
        exact_per_inference=exact,
        short_horizon_discounted=policy.is_discounting and scenario.horizon.months <= 24,
    )
