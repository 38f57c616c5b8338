"""
Continuous zero-sum lending model.

Transaction outcomes x (a fraction of the capital risked, confined to
[-1, 1]) follow a Gaussian with mean mu and standard deviation sigma. The
investor absorbs every loss in full but collects at most the simple interest
I on a win. The expected win/loss ratio is

    (int_0^I x phi dx + I * int_I^1 phi dx) / |int_-1^0 x phi dx| - 1

evaluated here by adaptive quadrature. Negative values mean the investor
class loses on average.
"""

import warnings
from collections.abc import Callable
from dataclasses import dataclass

import numpy as np
from scipy.integrate import IntegrationWarning, quad

from src.utils import (
    DEFAULT_INTEREST, DEFAULT_MU, DEFAULT_SIGMA,
    DegenerateRegimeError, DomainError, NumericalError, setup_logging,
)

logger = setup_logging(__name__)

WIN_FORMS = ("capped", "as_printed")
# Multiples of sigma either side of the mean where quadrature panels break
SIGMA_BREAKS = (1.0, 3.0, 6.0)


@dataclass(frozen=True)
class GaussianParams:
    """Mean and standard deviation of the transaction-outcome distribution."""

    mu: float = DEFAULT_MU
    sigma: float = DEFAULT_SIGMA

    def __post_init__(self):
        if not np.isfinite(self.sigma) or self.sigma <= 0:
            raise DomainError(f"sigma must be > 0, got {self.sigma}")
        if not np.isfinite(self.mu) or abs(self.mu) >= 1:
            raise DomainError(f"|mu| must be < 1, got {self.mu}")


@dataclass(frozen=True)
class PayoffSpec:
    """
    Simple interest plus outcome bounds.

    Attributes:
        interest: Simple-interest fraction of principal, 0 <= I <= upper_bound.
        lower_bound: Worst outcome (total loss of capital).
        upper_bound: Best outcome (gain equal to capital).
        renormalize: Divide integrals by the Gaussian mass inside the bounds.
        win_form: "capped" weights wins above I by I; "as_printed" weights them
            by 1, dropping the cap factor.
    """

    interest: float = DEFAULT_INTEREST
    lower_bound: float = -1.0
    upper_bound: float = 1.0
    renormalize: bool = False
    win_form: str = "capped"

    def __post_init__(self):
        if not self.lower_bound < 0 < self.upper_bound:
            raise DomainError(
                f"bounds must satisfy lower < 0 < upper, got "
                f"[{self.lower_bound}, {self.upper_bound}]"
            )
        if not np.isfinite(self.interest) or not 0 <= self.interest <= self.upper_bound:
            raise DomainError(
                f"interest must lie in [0, {self.upper_bound}], got {self.interest}"
            )
        if self.win_form not in WIN_FORMS:
            raise DomainError(f"win_form must be one of {WIN_FORMS}, got {self.win_form!r}")

    @classmethod
    def for_interest(cls, interest: float, **kwargs) -> "PayoffSpec":
        """
        Build a spec for a nominal rate that may exceed the upper bound.

        A win can never exceed upper_bound, so any rate above it collects the
        same as upper_bound itself.
        """
        upper = kwargs.get("upper_bound", 1.0)
        if interest < 0:
            raise DomainError(f"interest must be >= 0, got {interest}")
        return cls(interest=min(float(interest), upper), **kwargs)


@dataclass(frozen=True)
class QuadratureConfig:
    abs_tol: float = 1e-10
    max_subdivisions: int = 60

    def __post_init__(self):
        if not self.abs_tol > 0:
            raise DomainError(f"abs_tol must be > 0, got {self.abs_tol}")
        if self.max_subdivisions < 1:
            raise DomainError(f"max_subdivisions must be >= 1, got {self.max_subdivisions}")


DEFAULT_QUADRATURE = QuadratureConfig()


def gaussian_pdf(x, params: GaussianParams):
    """Gaussian density of the outcome; accepts scalars or arrays."""
    z = (x - params.mu) / params.sigma
    return np.exp(-0.5 * z * z) / (params.sigma * np.sqrt(2.0 * np.pi))


def investor_payoff_fraction(x, spec: PayoffSpec):
    """Investor return per unit lent: min(clamp(x), I)."""
    clamped = np.clip(x, spec.lower_bound, spec.upper_bound)
    return np.minimum(clamped, spec.interest)


def integrate(f: Callable[[float], float], a: float, b: float,
              q: QuadratureConfig = DEFAULT_QUADRATURE,
              points: list[float] | None = None) -> float:
    """
    Adaptive Gauss-Kronrod integral of f over [a, b] to q.abs_tol.

    Args:
        f: Integrand, finite on [a, b].
        a: Lower limit.
        b: Upper limit, b >= a.
        q: Tolerance and subdivision budget.
        points: Kinks of f inside (a, b) where panels should break.

    Raises:
        DomainError: If a > b.
        NumericalError: If the budget runs out before the tolerance is met;
            the best estimate and its error bound are attached.
    """
    if a > b:
        raise DomainError(f"integration limits reversed: a={a} > b={b}")
    if a == b:
        return 0.0

    breaks = sorted({p for p in (points or []) if a < p < b})
    kwargs = {"points": breaks} if breaks else {}

    with warnings.catch_warnings():
        warnings.simplefilter("ignore", IntegrationWarning)
        result = quad(f, a, b, epsabs=q.abs_tol, epsrel=0.0,
                      limit=q.max_subdivisions, full_output=1, **kwargs)

    value, abserr = float(result[0]), float(result[1])
    # quad appends a message only when it could not meet the tolerance
    if len(result) > 3:
        raise NumericalError(
            f"quadrature on [{a}, {b}] stopped at error {abserr:.3g} "
            f"(tolerance {q.abs_tol:.3g}): {result[3]}",
            estimate=value, error_bound=abserr,
        )
    return value


def density_breaks(params: GaussianParams, *extra: float) -> list[float]:
    """
    Panel breaks at mu and mu +/- k*sigma, plus any extra kinks.

    A peak much narrower than a panel can fall between the Gauss-Kronrod
    nodes and read as zero. Points outside the range are dropped by
    integrate().
    """
    offsets = [k * params.sigma for k in SIGMA_BREAKS]
    return [params.mu, *(params.mu + d for d in offsets),
            *(params.mu - d for d in offsets), *extra]


def truncated_mass(params: GaussianParams, a: float = -1.0, b: float = 1.0,
                   q: QuadratureConfig = DEFAULT_QUADRATURE) -> float:
    """Gaussian probability mass on [a, b]."""
    return integrate(lambda x: gaussian_pdf(x, params), a, b, q,
                     points=density_breaks(params))


def _normalizer(spec: PayoffSpec, params: GaussianParams, q: QuadratureConfig) -> float:
    if not spec.renormalize:
        return 1.0
    return truncated_mass(params, spec.lower_bound, spec.upper_bound, q)


def expected_win(spec: PayoffSpec, params: GaussianParams,
                 q: QuadratureConfig = DEFAULT_QUADRATURE) -> float:
    """Expected interest collected: partial on (0, I), capped at I above."""
    interest = spec.interest
    if interest == 0 and spec.win_form == "capped":
        return 0.0

    breaks = density_breaks(params)
    partial = integrate(lambda x: x * gaussian_pdf(x, params), 0.0, interest, q, breaks)
    tail = integrate(lambda x: gaussian_pdf(x, params), interest, spec.upper_bound, q, breaks)
    weight = interest if spec.win_form == "capped" else 1.0

    return (partial + weight * tail) / _normalizer(spec, params, q)


def expected_loss(params: GaussianParams, q: QuadratureConfig = DEFAULT_QUADRATURE,
                  spec: PayoffSpec | None = None) -> float:
    """Expected principal lost, as a positive fraction of capital."""
    spec = spec or PayoffSpec()
    moment = integrate(lambda x: x * gaussian_pdf(x, params), spec.lower_bound, 0.0, q,
                       points=density_breaks(params))
    return abs(moment) / _normalizer(spec, params, q)


def expected_return_ratio(spec: PayoffSpec, params: GaussianParams,
                          q: QuadratureConfig = DEFAULT_QUADRATURE) -> float:
    """
    Expected win over expected loss, minus one.

    Raises:
        DegenerateRegimeError: If the expected loss is below the quadrature
            tolerance, so the ratio would be noise.
    """
    loss = expected_loss(params, q, spec)
    if loss <= q.abs_tol:
        raise DegenerateRegimeError(
            f"expected loss {loss:.3g} vanishes for mu={params.mu}, sigma={params.sigma}",
            estimate=loss, error_bound=q.abs_tol,
        )
    return expected_win(spec, params, q) / loss - 1.0


def expected_net_payoff(spec: PayoffSpec, params: GaussianParams,
                        q: QuadratureConfig = DEFAULT_QUADRATURE) -> float:
    """Direct expectation of the capped payoff over the outcome range."""
    value = integrate(
        lambda x: investor_payoff_fraction(x, spec) * gaussian_pdf(x, params),
        spec.lower_bound, spec.upper_bound, q,
        points=density_breaks(params, 0.0, spec.interest),
    )
    return value / _normalizer(spec, params, q)
