"""Entropy functions and window entropy from correlation eigenvalues.

The two scalar building blocks are

    ell(x) = -x log x           on (0, 1), zero elsewhere,
    eta(x) = ell((1+x)/2) + ell((1-x)/2)   on (-1, 1), zero for |x| >= 1,

both with their continuous zero extensions, in natural-log units.  A window
of length ``nu`` with paired correlation eigenvalues ``{±lambda_i}`` has von
Neumann entropy ``S = sum_i eta(lambda_i)``, which lies in ``[0, nu log 2]``.

``spectrum_product`` expands the same data into the full ``2^nu`` density
matrix spectrum ``prod_i (1 + (-1)^{s_i} lambda_i)/2``; the identity

    sum over sign words of ell(product)  ==  sum_i eta(lambda_i)

is exposed as :func:`functional_equation_residual` for direct testing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import xlogy

from .errors import OutOfRange, TooLarge

LOG2 = math.log(2.0)

#: Eigenvalues may stick out of [0, 1] by at most this before clamping.
CLAMP_TOL = 1e-8


def shannon_ell(x):
    """-x log x on (0,1), zero elsewhere (continuous zero extension).

    Accepts scalars or arrays.
    """
    x_arr = np.asarray(x, dtype=float)
    inside = (x_arr > 0.0) & (x_arr < 1.0)
    vals = np.where(inside, -xlogy(x_arr, np.where(inside, x_arr, 0.5)), 0.0)
    if np.isscalar(x) or x_arr.ndim == 0:
        return float(vals)
    return vals


def binary_eta(x):
    """Binary entropy eta(x) = ell((1+x)/2) + ell((1-x)/2), zero for |x| >= 1.

    Even in x; eta(0) = log 2 exactly in this toolchain.
    """
    x_arr = np.asarray(x, dtype=float)
    vals = shannon_ell((1.0 + x_arr) / 2.0) + shannon_ell((1.0 - x_arr) / 2.0)
    if np.isscalar(x) or x_arr.ndim == 0:
        return float(vals)
    return vals


@dataclass(frozen=True)
class EntropyValue:
    """Window entropy in natural-log units."""

    nu: int
    S: float

    @property
    def bits(self) -> float:
        return self.S / LOG2

    @property
    def per_site(self) -> float:
        return self.S / self.nu


def entropy_from_lambdas(lambdas, nu: int | None = None) -> EntropyValue:
    """Window entropy S = sum_i eta~(lambda_i) from the paired eigenvalue list.

    Each ``lambda_i`` must lie in [0, 1] after clamping at tolerance 1e-8;
    values further out raise :class:`OutOfRange`.  The sum uses exact
    (correctly rounded) summation so that the maximally mixed case gives
    ``nu * log(2)`` bit-exactly.
    """
    lams = np.atleast_1d(np.asarray(lambdas, dtype=float))
    if lams.size and (np.min(lams) < -CLAMP_TOL or np.max(lams) > 1.0 + CLAMP_TOL):
        bad = lams[(lams < -CLAMP_TOL) | (lams > 1.0 + CLAMP_TOL)]
        raise OutOfRange(f"correlation eigenvalues outside [0,1] beyond 1e-8: {bad}")
    lams = np.clip(lams, 0.0, 1.0)
    n = int(nu) if nu is not None else lams.size
    s = math.fsum(binary_eta(lams)) if lams.size else 0.0
    return EntropyValue(nu=n, S=s)


def spectrum_product(lambdas) -> np.ndarray:
    """All 2^nu products prod_i (1 + (-1)^{s_i} lambda_i)/2 over sign words.

    This is the reduced-density-matrix spectrum generated by the paired
    eigenvalues.  Guarded at nu <= 20.
    """
    lams = np.atleast_1d(np.asarray(lambdas, dtype=float))
    if lams.size > 20:
        raise TooLarge(f"spectrum_product limited to 20 eigenvalues, got {lams.size}")
    probs = np.ones(1)
    for lam in lams:
        up = probs * ((1.0 + lam) / 2.0)
        down = probs * ((1.0 - lam) / 2.0)
        probs = np.concatenate([up, down])
    return probs


def functional_equation_residual(lambdas) -> float:
    """| sum_words ell(prod) - sum_i eta(lambda_i) | for |lambda_i| < 1."""
    lams = np.atleast_1d(np.asarray(lambdas, dtype=float))
    if lams.size and np.max(np.abs(lams)) >= 1.0:
        raise OutOfRange("functional equation requires |lambda_i| < 1")
    lhs = math.fsum(shannon_ell(spectrum_product(lams)))
    rhs = math.fsum(binary_eta(lams))
    return abs(lhs - rhs)
