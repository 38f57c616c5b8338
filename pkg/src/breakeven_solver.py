"""
Break-even interest rates and parameter sweeps over the Gaussian model.

The return ratio is -1 at I = 0 and increases continuously with I up to the
outcome bound, beyond which it is flat. The break-even rate is its unique
root, found with Brent's bracketed bisection/secant method.
"""

from dataclasses import dataclass, field
from multiprocessing import Pool

import numpy as np
import pandas as pd
from scipy.optimize import brentq

from src.gaussian_model import (
    DEFAULT_QUADRATURE, GaussianParams, PayoffSpec, QuadratureConfig,
    expected_return_ratio, gaussian_pdf, investor_payoff_fraction,
)
from src.utils import (
    DEFAULT_SIGMA, DomainError, NoBreakEvenError, NumericalError, setup_logging,
)

logger = setup_logging(__name__)

# |ratio| below this counts as exactly break-even (quadrature noise)
RATIO_ZERO_TOL = 1e-9

# Rates for the interest-family curves
RATE_FAMILY = [0.01, 0.10, 0.20, 0.50]
# Means for the mu-family curves
MU_FAMILY = [0.0, 0.01, 0.05, 0.10]


@dataclass(frozen=True)
class BreakevenRequest:
    params: GaussianParams = field(default_factory=GaussianParams)
    i_max: float = 2.0
    tol: float = 1e-6
    quadrature: QuadratureConfig = DEFAULT_QUADRATURE
    renormalize: bool = False

    def __post_init__(self):
        if not self.i_max > 0:
            raise DomainError(f"i_max must be > 0, got {self.i_max}")
        if not self.tol > 0:
            raise DomainError(f"tol must be > 0, got {self.tol}")


@dataclass
class SweepGrid:
    """Return ratio over a (mu, I) grid; row = mu, column = I."""

    mu_values: list[float]
    i_values: list[float]
    sigma: float
    cells: np.ndarray

    def to_frame(self) -> pd.DataFrame:
        """Long-form records: mu, interest, sigma, expected_return."""
        mu_grid, i_grid = np.meshgrid(self.mu_values, self.i_values, indexing="ij")
        return pd.DataFrame({
            "mu": mu_grid.ravel(),
            "interest": i_grid.ravel(),
            "sigma": self.sigma,
            "expected_return": self.cells.ravel(),
        })

    def is_monotone(self) -> bool:
        """Rows nondecreasing in I and columns nondecreasing in mu."""
        rows_ok = bool(np.all(np.diff(self.cells, axis=1) >= -RATIO_ZERO_TOL))
        cols_ok = bool(np.all(np.diff(self.cells, axis=0) >= -RATIO_ZERO_TOL))
        return rows_ok and cols_ok

    def cell(self, mu: float, interest: float) -> float:
        r = int(np.argmin(np.abs(np.asarray(self.mu_values) - mu)))
        c = int(np.argmin(np.abs(np.asarray(self.i_values) - interest)))
        return float(self.cells[r, c])


@dataclass
class CurveSeries:
    """One plottable series sampled on a uniform x grid."""

    series: str
    mu: float
    sigma: float
    interest: float
    x: np.ndarray
    values: np.ndarray


def return_ratio_at(interest: float, params: GaussianParams,
                    q: QuadratureConfig = DEFAULT_QUADRATURE,
                    renormalize: bool = False) -> float:
    spec = PayoffSpec.for_interest(interest, renormalize=renormalize)
    return expected_return_ratio(spec, params, q)


def solve_breakeven(req: BreakevenRequest) -> float:
    """
    Smallest simple interest at which expected wins equal expected losses.

    Raises:
        NoBreakEvenError: If the ratio is still negative at i_max.
    """
    params = req.params

    def ratio(i: float) -> float:
        return return_ratio_at(i, params, req.quadrature, req.renormalize)

    # Past the outcome bound the ratio stops changing
    upper = min(req.i_max, PayoffSpec().upper_bound)
    f_upper = ratio(upper)

    if abs(f_upper) <= RATIO_ZERO_TOL:
        logger.debug(f"mu={params.mu}: ratio vanishes at the bracket end I={upper}")
        return upper
    if f_upper < 0:
        raise NoBreakEvenError(
            f"no break-even on (0, {req.i_max}] for mu={params.mu}, "
            f"sigma={params.sigma}: ratio at I={upper} is {f_upper:.6g}"
        )

    # xtol/2 keeps the true root within tol of the returned rate
    root, info = brentq(ratio, 0.0, upper, xtol=req.tol / 2, maxiter=200,
                        full_output=True, disp=False)
    if not info.converged:
        raise NumericalError(
            f"break-even search did not converge for mu={params.mu}: {info.flag}",
            estimate=root, error_bound=req.tol,
        )

    logger.debug(f"mu={params.mu}, sigma={params.sigma}: break-even I={root:.8f} "
                 f"after {info.function_calls} evaluations")
    return float(root)


def _check_axis(name: str, values: list[float]):
    if len(values) == 0:
        raise DomainError(f"{name} must not be empty")
    if np.any(np.diff(values) <= 0):
        raise DomainError(f"{name} must be strictly ascending")


def _sweep_row(task: tuple) -> list[float]:
    """Evaluate one mu row of the grid; top-level so worker processes can run it."""
    row, mu, i_values, sigma, q, renormalize = task
    params = GaussianParams(mu=mu, sigma=sigma)
    values = []
    for col, interest in enumerate(i_values):
        try:
            values.append(return_ratio_at(interest, params, q, renormalize))
        except NumericalError as e:
            raise NumericalError(
                f"sweep cell (mu={mu}, I={interest}) failed: {e}",
                estimate=e.estimate, error_bound=e.error_bound, cell=(row, col),
            ) from e
    return values


def sweep(mu_values: list[float], i_values: list[float], sigma: float = DEFAULT_SIGMA,
          q: QuadratureConfig = DEFAULT_QUADRATURE, workers: int = 1,
          renormalize: bool = False) -> SweepGrid:
    """
    Evaluate the return ratio on every (mu, I) pair.

    Rows are computed independently, so any worker count gives the same grid.
    """
    mu_values = [float(m) for m in mu_values]
    i_values = [float(i) for i in i_values]
    _check_axis("mu_values", mu_values)
    _check_axis("i_values", i_values)
    if i_values[0] < 0:
        raise DomainError(f"interest values must be >= 0, got {i_values[0]}")
    # Validates sigma and every mu up front
    for mu in mu_values:
        GaussianParams(mu=mu, sigma=sigma)

    tasks = [(r, mu, i_values, sigma, q, renormalize) for r, mu in enumerate(mu_values)]
    logger.info(f"Sweeping {len(mu_values)} x {len(i_values)} cells (sigma={sigma}, "
                f"workers={workers})")

    if workers > 1 and len(tasks) > 1:
        with Pool(processes=min(workers, len(tasks))) as pool:
            rows = pool.map(_sweep_row, tasks)
    else:
        rows = [_sweep_row(t) for t in tasks]

    return SweepGrid(mu_values=mu_values, i_values=i_values, sigma=sigma,
                     cells=np.array(rows, dtype=float))


def payoff_curve_samples(i_list: list[float], params: GaussianParams, n_points: int = 401,
                         include_payoff_lines: bool = False) -> list[CurveSeries]:
    """
    Sample the density and the payoff-weighted density curves on [-1, 1].

    Always returns the bare density and the uncapped x * phi(x) line, then
    one capped min(x, I) * phi(x) series per rate. With include_payoff_lines
    the unweighted payoff lines x and min(x, I) are added as well.
    """
    if n_points < 2:
        raise DomainError(f"n_points must be >= 2, got {n_points}")

    x = np.linspace(-1.0, 1.0, n_points)
    density = gaussian_pdf(x, params)
    nan = float("nan")

    series = [
        CurveSeries("density", params.mu, params.sigma, nan, x, density),
        CurveSeries("uncapped", params.mu, params.sigma, nan, x, x * density),
    ]
    if include_payoff_lines:
        series.append(CurveSeries("payoff_uncapped", params.mu, params.sigma, nan, x, x.copy()))

    for interest in i_list:
        spec = PayoffSpec.for_interest(interest)
        payoff = investor_payoff_fraction(x, spec)
        series.append(CurveSeries("capped", params.mu, params.sigma, float(interest),
                                  x, payoff * density))
        if include_payoff_lines:
            series.append(CurveSeries("payoff_capped", params.mu, params.sigma,
                                      float(interest), x, payoff))

    return series


def curves_frame(series: list[CurveSeries]) -> pd.DataFrame:
    """Stack curve series into long form: series, mu, sigma, interest, x, value."""
    frames = [
        pd.DataFrame({
            "series": s.series,
            "mu": s.mu,
            "sigma": s.sigma,
            "interest": s.interest,
            "x": s.x,
            "value": s.values,
        })
        for s in series
    ]
    return pd.concat(frames, ignore_index=True)


def breakeven_curve(mu_values: list[float], sigma: float = DEFAULT_SIGMA,
                    i_max: float = 2.0, tol: float = 1e-6,
                    q: QuadratureConfig = DEFAULT_QUADRATURE) -> pd.DataFrame:
    """Break-even rate for each mu; rows without one carry status no_breakeven."""
    records = []
    for mu in mu_values:
        req = BreakevenRequest(params=GaussianParams(mu=mu, sigma=sigma),
                               i_max=i_max, tol=tol, quadrature=q)
        try:
            rate, status = solve_breakeven(req), "ok"
        except NoBreakEvenError:
            rate, status = None, "no_breakeven"
        records.append({"mu": mu, "sigma": sigma, "breakeven_interest": rate,
                        "status": status})

    return pd.DataFrame(records, columns=["mu", "sigma", "breakeven_interest", "status"])
