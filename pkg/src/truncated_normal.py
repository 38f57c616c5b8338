"""
Closed-form truncated-normal moments built on the error function.

Independent of the quadrature path in gaussian_model; used as the oracle for
the return-ratio integrals and for the sampler's acceptance probability.
"""

import numpy as np
from scipy.special import erf

SQRT2 = np.sqrt(2.0)
SQRT2PI = np.sqrt(2.0 * np.pi)


def std_normal_cdf(z):
    return 0.5 * (1.0 + erf(z / SQRT2))


def std_normal_pdf(z):
    return np.exp(-0.5 * z * z) / SQRT2PI


def gaussian_mass(a: float, b: float, mu: float, sigma: float) -> float:
    """Probability that N(mu, sigma) lands in [a, b]."""
    alpha = (a - mu) / sigma
    beta = (b - mu) / sigma
    return float(std_normal_cdf(beta) - std_normal_cdf(alpha))


def first_moment(a: float, b: float, mu: float, sigma: float) -> float:
    """Integral of x * phi(x) over [a, b] for phi = N(mu, sigma) density."""
    alpha = (a - mu) / sigma
    beta = (b - mu) / sigma
    mass = std_normal_cdf(beta) - std_normal_cdf(alpha)
    return float(mu * mass + sigma * (std_normal_pdf(alpha) - std_normal_pdf(beta)))


def closed_form_expected_win(interest: float, mu: float, sigma: float,
                             upper: float = 1.0, capped: bool = True,
                             renormalize: bool = False, lower: float = -1.0) -> float:
    """Ratio numerator: partial collection on (0, I), capped at I above."""
    interest = min(interest, upper)
    weight = interest if capped else 1.0
    win = (first_moment(0.0, interest, mu, sigma)
           + weight * gaussian_mass(interest, upper, mu, sigma))
    if renormalize:
        win /= gaussian_mass(lower, upper, mu, sigma)
    return win


def closed_form_expected_loss(mu: float, sigma: float, lower: float = -1.0,
                              renormalize: bool = False, upper: float = 1.0) -> float:
    """Ratio denominator: magnitude of the first moment over [lower, 0]."""
    loss = abs(first_moment(lower, 0.0, mu, sigma))
    if renormalize:
        loss /= gaussian_mass(lower, upper, mu, sigma)
    return loss


def closed_form_return_ratio(interest: float, mu: float, sigma: float, **kwargs) -> float:
    capped = kwargs.pop("capped", True)
    win = closed_form_expected_win(interest, mu, sigma, capped=capped, **kwargs)
    loss = closed_form_expected_loss(mu, sigma, **kwargs)
    return win / loss - 1.0
