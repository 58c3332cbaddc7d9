"""Independent high-precision oracles for the special-function tests.

Built first, and by different routes than the implementation under test:
the incomplete beta oracle integrates the trigonometric form of the beta
density with high-order Gauss-Legendre quadrature; the incomplete gamma
oracle sums the power series by brute force with exact accumulation.
Both target absolute error well below 1e-12 on the tested grids.
"""

from __future__ import annotations

import math

import numpy as np

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(400)


def beta_oracle(a: float, b: float, x: float) -> float:
    """Regularized incomplete beta via quadrature of the t = sin^2(theta) form.

    I_x(a,b) = int_0^phi 2 sin(t)^(2a-1) cos(t)^(2b-1) dt / B(a,b)
    with phi = asin(sqrt(x)).  Smooth for a, b >= 0.5.
    """
    if x <= 0.0:
        return 0.0
    if x >= 1.0:
        return 1.0
    phi = math.asin(math.sqrt(x))
    theta = 0.5 * phi * (_GL_NODES + 1.0)
    weights = 0.5 * phi * _GL_WEIGHTS
    integrand = 2.0 * np.sin(theta) ** (2.0 * a - 1.0) * np.cos(theta) ** (2.0 * b - 1.0)
    ln_beta = math.lgamma(a) + math.lgamma(b) - math.lgamma(a + b)
    return float(np.sum(weights * integrand) * math.exp(-ln_beta))


def gamma_lower_oracle(s: float, x: float) -> float:
    """Regularized lower incomplete gamma via brute-force series summation.

    P(s,x) = x^s e^-x / Gamma(s) * sum_n x^n / (s (s+1) ... (s+n)),
    summed with exact accumulation until terms fall below 1e-20 of the
    partial sum.
    """
    if x <= 0.0:
        return 0.0
    terms = []
    term = 1.0 / s
    denominator = s
    for n in range(1, 10000):
        terms.append(term)
        denominator += 1.0
        term *= x / denominator
        if term < 1e-20 * math.fsum(terms) and n > x:
            break
    total = math.fsum(terms)
    return total * math.exp(s * math.log(x) - x - math.lgamma(s))


def t_two_tailed_oracle(t: float, df: float) -> float:
    """Two-tailed t-test p-value through the beta quadrature oracle."""
    return beta_oracle(df / 2.0, 0.5, df / (df + t * t))


def beta_grid() -> list[tuple[float, float, float]]:
    """Deterministic 250-point (a, b, x) grid with a, b >= 0.5."""
    a_values = [0.5, 1.0, 2.5, 6.0, 17.0]
    b_values = [0.5, 1.5, 3.0, 11.5, 40.0]
    x_values = [0.01, 0.1, 0.25, 0.4, 0.5, 0.6, 0.75, 0.9, 0.99, 0.694]
    return [(a, b, x) for a in a_values for b in b_values for x in x_values]


def gamma_grid() -> list[tuple[float, float]]:
    """Deterministic 250-point (s, x) grid."""
    s_values = [0.5, 1.0, 2.0, 3.5, 6.0, 9.0, 14.0, 21.0, 30.0, 45.0]
    x_values = [0.05, 0.5, 1.0, 1.7, 3.0, 5.0, 8.0, 13.0, 21.0, 34.0,
                55.0, 89.0, 6.0, 0.85, 2.5, 4.5, 7.5, 12.5, 20.5, 33.5,
                54.5, 88.5, 0.25, 1.25, 2.75]
    return [(s, x) for s in s_values for x in x_values]
