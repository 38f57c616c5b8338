"""
Regenerate every numeric artifact behind the coin tables and figures.

Writes table1.csv, table2.csv, fig2_curves.csv, fig3a_curves.csv,
fig3b_curves.csv, fig4_surface.csv, breakeven_curve.csv and claims.json
into one directory, then a manifest.json recording what was written.
"""

import numpy as np
import pandas as pd
from pathlib import Path

# Add parent to path for imports
import sys
sys.path.insert(0, str(Path(__file__).parent.parent))

from src.breakeven_solver import (
    RATE_FAMILY, MU_FAMILY, BreakevenRequest, SweepGrid,
    breakeven_curve, curves_frame, payoff_curve_samples, solve_breakeven, sweep,
)
from src.discrete_game import (
    DiscreteGameConfig, discrete_breakeven, enumerate_outcomes, summary_frame,
)
from src.gaussian_model import (
    GaussianParams, PayoffSpec, expected_loss, expected_return_ratio, expected_win,
)
from src.monte_carlo import discrete_expectation, simulate_discrete, validate_against_quadrature
from src.reporting import RunManifest, write_csv, write_json
from src.truncated_normal import closed_form_expected_loss, closed_form_expected_win
from src.utils import (
    DEFAULT_INTEREST_RANGE, DEFAULT_MU_RANGE, DEFAULT_SEED, DEFAULT_SIGMA,
    EXIT_OK, EXIT_PARTIAL, OUTPUT_ARTIFACTS, ensure_dirs, parse_range, setup_logging,
)

logger = setup_logging(__name__)

FULL_ROUNDS = 1_000_000
QUICK_ROUNDS = 100_000

# (interest, mu) pairs checked against the quadrature value
MC_PAIRS = [(i, mu) for i in (0.15, 0.2, 1.0) for mu in (0.0, 0.01, 0.05, 0.1)]


def reference_params(mu: float = 0.0) -> GaussianParams:
    return GaussianParams(mu=mu, sigma=DEFAULT_SIGMA)


def build_coin_table(interest_coins: int) -> pd.DataFrame:
    config = DiscreteGameConfig(loan_coins=5, competitor_coins=5, interest_coins=interest_coins)
    return summary_frame(enumerate_outcomes(config))


def build_capped_curves() -> pd.DataFrame:
    """Density, uncapped and 20%-capped lines at mu = 0."""
    return curves_frame(payoff_curve_samples([0.2], reference_params(), include_payoff_lines=True))


def build_rate_family_curves() -> pd.DataFrame:
    return curves_frame(payoff_curve_samples(RATE_FAMILY, reference_params()))


def build_mu_family_curves() -> pd.DataFrame:
    frames = [curves_frame(payoff_curve_samples([0.2], reference_params(mu))) for mu in MU_FAMILY]
    return pd.concat(frames, ignore_index=True)


def build_surface(workers: int = 1) -> SweepGrid:
    return sweep(parse_range(DEFAULT_MU_RANGE), parse_range(DEFAULT_INTEREST_RANGE),
                 DEFAULT_SIGMA, workers=workers)


def quadrature_oracle_gap(n_points: int = 100, seed: int = DEFAULT_SEED) -> float:
    """Largest |quadrature - closed form| over random (I, mu, sigma) draws."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(n_points):
        interest = float(rng.uniform(0.0, 1.0))
        mu = float(rng.uniform(-0.1, 0.1))
        sigma = float(rng.uniform(0.15, 0.4))
        params = GaussianParams(mu=mu, sigma=sigma)
        spec = PayoffSpec(interest=interest)
        worst = max(
            worst,
            abs(expected_win(spec, params) - closed_form_expected_win(interest, mu, sigma)),
            abs(expected_loss(params) - closed_form_expected_loss(mu, sigma)),
        )
    return worst


def claim(claim_id: str, description: str, value, expected: str, passed: bool) -> dict:
    if not passed:
        logger.warning(f"Claim {claim_id} FAILED: value={value}, expected {expected}")
    return {"id": claim_id, "description": description, "value": value,
            "expected": expected, "passed": bool(passed)}


def check_claims(grid: SweepGrid | None, n_rounds: int, seed: int, workers: int = 1) -> list[dict]:
    """Evaluate every headline quantitative claim."""
    claims = []

    t1 = enumerate_outcomes(DiscreteGameConfig(5, 5, 1))
    claims.append(claim(
        "table1_totals", "1 coin interest on 5 coins: B net 10, A wins 5, A loses 15",
        [t1.total_b_net, t1.total_win, t1.total_loss], "[10, 5, 15]",
        (t1.total_b_net, t1.total_win, t1.total_loss) == (10, 5, 15),
    ))

    t2 = enumerate_outcomes(DiscreteGameConfig(5, 5, 5))
    claims.append(claim(
        "table2_totals", "100% interest on 5 coins: B net 0, A wins 15, A loses 15",
        [t2.total_b_net, t2.total_win, t2.total_loss], "[0, 15, 15]",
        (t2.total_b_net, t2.total_win, t2.total_loss) == (0, 15, 15),
    ))

    rates = [discrete_breakeven(n, n) for n in range(1, 21)]
    claims.append(claim(
        "discrete_breakeven_symmetric", "coin game with L = C breaks even at 100% interest",
        rates, "k = L for L in 1..20", rates == list(range(1, 21)),
    ))

    i_fair = solve_breakeven(BreakevenRequest(params=reference_params(0.0)))
    claims.append(claim(
        "breakeven_mu0", "fair Gaussian game needs 100% interest to break even",
        i_fair, "1.0 +/- 0.01", abs(i_fair - 1.0) <= 0.01,
    ))

    ratio_rigged = expected_return_ratio(PayoffSpec(interest=0.15), reference_params(0.05))
    claims.append(claim(
        "ratio_I15_mu5_negative", "5% advantage does not break even at 15% interest",
        ratio_rigged, "< 0", ratio_rigged < 0,
    ))

    i_rigged = solve_breakeven(BreakevenRequest(params=reference_params(0.05)))
    claims.append(claim(
        "breakeven_mu5_above_15pct", "break-even rate with a 5% advantage exceeds 15%",
        i_rigged, "> 0.15", i_rigged > 0.15,
    ))

    gap = quadrature_oracle_gap(seed=seed)
    claims.append(claim(
        "quadrature_matches_closed_form", "return-ratio integrals agree with erf-based moments",
        gap, "<= 1e-8", gap <= 1e-8,
    ))

    if grid is not None:
        centre, low = grid.cell(0.0, 1.0), grid.cell(0.0, 0.01)
        passed = grid.is_monotone() and abs(centre) <= 5e-3 and low <= -0.9
        claims.append(claim(
            "surface_monotone", "surface monotone in I and mu, 0 at (0, 100%), <= -0.9 at (0, 1%)",
            {"monotone": grid.is_monotone(), "mu0_i100": centre, "mu0_i1": low},
            "monotone, |cell| <= 5e-3, cell <= -0.9", passed,
        ))

    mc = validate_against_quadrature(MC_PAIRS, n_rounds, seed=seed, workers=workers)
    worst_z = float(mc["z_score"].abs().max())
    claims.append(claim(
        "monte_carlo_matches_quadrature",
        f"simulated mean payoff within 4 SE of quadrature for {len(MC_PAIRS)} (I, mu) pairs",
        worst_z, "max |z| <= 4", worst_z <= 4,
    ))

    table1 = DiscreteGameConfig(5, 5, 1)
    sim = simulate_discrete(table1, n_rounds, seed=seed, workers=workers)
    z = (sim.mean_payoff - discrete_expectation(table1)) / sim.std_error
    claims.append(claim(
        "monte_carlo_matches_enumeration", "simulated coin game mean within 4 SE of -10/11",
        sim.mean_payoff, "-0.9090909 +/- 4 SE", abs(z) <= 4,
    ))

    return claims


def run_reproduce(out_dir: Path = OUTPUT_ARTIFACTS, quick: bool = False,
                  seed: int = DEFAULT_SEED, workers: int = 1) -> int:
    """
    Write every artifact plus claims.json and manifest.json.

    Returns:
        EXIT_OK when every artifact was written and every claim passed,
        EXIT_PARTIAL otherwise.
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    n_rounds = QUICK_ROUNDS if quick else FULL_ROUNDS

    manifest = RunManifest(
        command="reproduce",
        parameters={"out_dir": str(out_dir), "quick": quick, "n_rounds": n_rounds,
                    "sigma": DEFAULT_SIGMA, "mu_range": DEFAULT_MU_RANGE,
                    "interest_range": DEFAULT_INTEREST_RANGE, "workers": workers},
        seeds=[seed],
    )

    grid = None

    def surface():
        nonlocal grid
        grid = build_surface(workers)
        return grid.to_frame()

    csv_artifacts = [
        ("table1.csv", lambda: build_coin_table(1)),
        ("table2.csv", lambda: build_coin_table(5)),
        ("fig2_curves.csv", build_capped_curves),
        ("fig3a_curves.csv", build_rate_family_curves),
        ("fig3b_curves.csv", build_mu_family_curves),
        ("fig4_surface.csv", surface),
        ("breakeven_curve.csv", lambda: breakeven_curve(parse_range(DEFAULT_MU_RANGE))),
    ]

    for name, build in csv_artifacts:
        path = out_dir / name
        try:
            write_csv(build(), path)
            manifest.add_output(path)
        except Exception as e:
            logger.error(f"Failed to build {name}: {e}")
            manifest.add_output(path, status="failed", error=str(e))

    claims = []
    claims_path = out_dir / "claims.json"
    try:
        claims = check_claims(grid, n_rounds, seed, workers)
        write_json({"n_rounds": n_rounds, "seed": seed, "claims": claims}, claims_path)
        manifest.add_output(claims_path)
    except Exception as e:
        logger.error(f"Failed to check claims: {e}")
        manifest.add_output(claims_path, status="failed", error=str(e))

    manifest.finish()
    write_json(manifest.to_dict(), out_dir / "manifest.json")

    all_passed = bool(claims) and all(c["passed"] for c in claims)
    logger.info(f"Reproduced {sum(o['status'] == 'ok' for o in manifest.outputs)} "
                f"artifacts in {manifest.duration_seconds:.1f}s; "
                f"{sum(c['passed'] for c in claims)}/{len(claims)} claims passed")

    return EXIT_OK if manifest.succeeded and all_passed else EXIT_PARTIAL


def main():
    """Main entry point for artifact reproduction."""
    ensure_dirs()
    code = run_reproduce()

    print("\n" + "=" * 60)
    print("ARTIFACTS WRITTEN TO " + str(OUTPUT_ARTIFACTS))
    print("=" * 60)
    return code == EXIT_OK


if __name__ == "__main__":
    success = main()
    exit(0 if success else 1)
