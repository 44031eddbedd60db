"""Momentum partition, the asymptotic entropy density s_inf, and its zero test.

The circle splits at the roots of Q = u0'^2 |u|^2 - (u.u')^2 (plus the zero
set of |u|; for the scalar case 3 at the roots of u0') into arcs on which
the group velocity E' keeps one sign: left movers (E' < 0) carry beta_L,
right movers beta_R.  The entropy density is

    s_inf = sum_a ∫_{Pi_a} dk/2pi  eta( 2 Od(rho)(beta_a E(k)) ),

with eta the zero-extended binary entropy and E the upper dispersion branch
(u0 itself in case 3).  The energy range Sigma is the union over arcs and
both signs of the closed intervals swept by ± beta_a E; the density
vanishes exactly when rho is an indicator on Sigma, which is checked by
dense sampling.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np

from .entropy import binary_eta
from .errors import AxiomViolation, NotSymmetric, OnZeroSet, QuadratureFailure, WrongFermi
from .rlmover import (
    CASE_TOL,
    CaseTag,
    ChainModel,
    FermiDirac,
    dispersion,
    dispersion_derivative,
    energy_level_angles,
    velocity_sign_breakpoints,
)

#: Absolute quadrature tolerance per partition arc.
QUAD_TOL = 1e-10

#: Adaptive Simpson recursion depth limit.
MAX_DEPTH = 40

#: Operational threshold for "the density vanishes".
VANISHING_THRESHOLD = 1e-9

#: Number of sample points distributed over Sigma by the vanishing check.
SIGMA_SAMPLES = 4096

#: How close a sampled occupation must be to {0, 1} to count as an indicator.
RHO_BINARY_TOL = 1e-12

#: |E'| below this at a boundary angle files the angle under Pi_0.
_STILL_TOL = 1e-10

_TWO_PI = 2.0 * math.pi


# ----------------------------------------------------------------------
# partition
# ----------------------------------------------------------------------
@dataclass(frozen=True)
class MomentumPartition:
    """Open arcs of left/right movers, stationary angles, and |u| zeros."""

    pi_L: tuple[tuple[float, float], ...]
    pi_R: tuple[tuple[float, float], ...]
    pi_0: tuple[float, ...]
    excluded: tuple[float, ...]

    def sided_arcs(self):
        """All arcs with their mover side, sorted by left endpoint."""
        arcs = [(lo, hi, "L") for lo, hi in self.pi_L]
        arcs += [(lo, hi, "R") for lo, hi in self.pi_R]
        return sorted(arcs)

    def length(self, side: str) -> float:
        arcs = self.pi_L if side == "L" else self.pi_R
        return math.fsum(hi - lo for lo, hi in arcs)


class VanishingVerdict(NamedTuple):
    """Outcome of the indicator test of rho on Sigma."""

    vanishing: bool
    samples: int
    witnesses: tuple[tuple[float, float], ...]

    def __bool__(self) -> bool:  # truthiness = the verdict itself
        return self.vanishing


class TanhFormResult(NamedTuple):
    """Closed-form FermiDirac density with its strict positivity bound."""

    value: float
    lower_bound: float
    a_L: float
    a_R: float


@dataclass(frozen=True)
class DensityReport:
    """s_inf with its two-term mover split, partition, Sigma, and zero test."""

    s_infinity: float
    split: tuple[float, float]  # (Pi_L contribution, Pi_R contribution)
    partition: MomentumPartition
    sigma: tuple[tuple[float, float], ...]
    vanishing: VanishingVerdict


def _upper_energy(model: ChainModel) -> Callable[[float], float]:
    h = model.hamiltonian
    if model.case is CaseTag.Case3:
        return h.u(0).eval
    return lambda k: dispersion(h, k)[0]


def partition_momentum(model: ChainModel) -> MomentumPartition:
    """Split (-pi, pi] into maximal arcs of constant group-velocity sign.

    Boundary angles are the roots of Q (roots of u0' in case 3) together
    with the zero set of |u|; each arc is classified by the sign of E' at
    its midpoint.  Raises WrongCase outside cases 2-5.
    """
    case = model.require_symbol_case()
    h = model.hamiltonian
    zeros = [] if case is CaseTag.Case3 else h.zero_set_angles()
    stationary = velocity_sign_breakpoints(h, case)
    bounds = _dedupe_sorted(sorted(list(stationary) + list(zeros)))

    if bounds:
        lifted = list(zip(bounds, bounds[1:])) + [(bounds[-1], bounds[0] + _TWO_PI)]
    else:  # velocity of one sign on the whole circle (not reachable in 2-5)
        lifted = [(-math.pi, math.pi)]

    left: list[tuple[float, float]] = []
    right: list[tuple[float, float]] = []
    for lo, hi in lifted:
        sgn = 0.0
        for frac in (0.5, 0.25, 0.75):
            k = lo + frac * (hi - lo)
            try:
                v = dispersion_derivative(h, _wrap(k))
            except OnZeroSet:
                continue
            if abs(v) > 0.0:
                sgn = math.copysign(1.0, v)
                break
        if sgn == 0.0:
            raise QuadratureFailure(
                f"group velocity vanishes on the whole arc ({lo:.6f}, {hi:.6f})"
            )
        (right if sgn > 0 else left).extend(_normalize_arc(lo, hi))

    pi_0 = []
    for theta in bounds:
        if any(abs(theta - z) <= 1e-9 for z in zeros):
            continue
        try:
            if abs(dispersion_derivative(h, theta)) < _STILL_TOL:
                pi_0.append(theta)
        except OnZeroSet:
            continue
    return MomentumPartition(
        tuple(sorted(left)), tuple(sorted(right)), tuple(pi_0), tuple(sorted(zeros))
    )


def _wrap(k: float) -> float:
    while k > math.pi:
        k -= _TWO_PI
    while k <= -math.pi:
        k += _TWO_PI
    return k


def _normalize_arc(lo: float, hi: float) -> list[tuple[float, float]]:
    """Map a lifted arc into (-pi, pi], splitting if it straddles pi."""
    if hi <= math.pi:
        return [(lo, hi)]
    if lo >= math.pi:
        return [(lo - _TWO_PI, hi - _TWO_PI)]
    return [(lo, math.pi), (-math.pi, hi - _TWO_PI)]


def _dedupe_sorted(angles: list[float], tol: float = 1e-9) -> list[float]:
    out: list[float] = []
    for a in angles:
        if not out or a - out[-1] > tol:
            out.append(a)
    if len(out) > 1 and (out[0] + _TWO_PI) - out[-1] <= tol:
        out.pop()
    return out


# ----------------------------------------------------------------------
# quadrature
# ----------------------------------------------------------------------
def _adaptive_simpson(f, a, fa, b, fb, m, fm, whole, tol, depth):
    lm = 0.5 * (a + m)
    rm = 0.5 * (m + b)
    flm, frm = f(lm), f(rm)
    left = (m - a) / 6.0 * (fa + 4.0 * flm + fm)
    right = (b - m) / 6.0 * (fm + 4.0 * frm + fb)
    err = left + right - whole
    if depth <= 0 or abs(err) < 15.0 * tol:
        return left + right + err / 15.0
    half = 0.5 * tol
    return _adaptive_simpson(
        f, a, fa, m, fm, lm, flm, left, half, depth - 1
    ) + _adaptive_simpson(f, m, fm, b, fb, rm, frm, right, half, depth - 1)


def _integrate_arc(f, lo: float, hi: float, tol: float) -> float:
    """Adaptive Simpson over [lo, hi]; endpoint values taken one-sidedly."""
    nudge = min(1e-9, 0.25 * (hi - lo))
    fa, fb = f(lo + nudge), f(hi - nudge)
    m = 0.5 * (lo + hi)
    fm = f(m)
    if not all(map(math.isfinite, (fa, fb, fm))):
        raise QuadratureFailure(f"integrand not finite on arc ({lo:.6f}, {hi:.6f})")
    whole = (hi - lo) / 6.0 * (fa + 4.0 * fm + fb)
    return _adaptive_simpson(f, lo, fa, hi, fb, m, fm, whole, tol, MAX_DEPTH)


def _interior_splits(model: ChainModel, lo: float, hi: float, beta_eff: float) -> list[float]:
    """Occupation-jump preimages strictly inside (lo, hi), sorted."""
    jumps = model.fermi.jump_points()
    if not jumps:
        return []
    case = model.case
    h = model.hamiltonian
    pts = set()
    for s in jumps:
        for theta in energy_level_angles(h, case, s / beta_eff):
            for shift in (-_TWO_PI, 0.0, _TWO_PI):
                k = theta + shift
                if lo + 1e-9 < k < hi - 1e-9:
                    pts.add(k)
    return sorted(pts)


def _arc_integral(model: ChainModel, f, lo: float, hi: float, beta_eff: float) -> float:
    cuts = [lo, *_interior_splits(model, lo, hi, beta_eff), hi]
    tol = QUAD_TOL / (len(cuts) - 1)
    return math.fsum(_integrate_arc(f, a, b, tol) for a, b in zip(cuts, cuts[1:]))


def _eta_integrand(model: ChainModel, beta_eff: float) -> Callable[[float], float]:
    energy = _upper_energy(model)
    odd = model.fermi.odd_part_doubled
    return lambda k: float(binary_eta(odd(beta_eff * energy(k)))) / _TWO_PI


def _beta_for(model: ChainModel, side: str) -> float:
    return model.temps.beta_R if side == "R" else model.temps.beta_L


# ----------------------------------------------------------------------
# the density and its variants
# ----------------------------------------------------------------------
def s_infinity(model: ChainModel) -> DensityReport:
    """Asymptotic entropy density with partition, Sigma, and zero verdict.

    Integrates eta(2 Od(rho)(beta_a E)) arc by arc (adaptive Simpson,
    absolute tolerance 1e-10 per arc, extra splits at occupation-jump
    preimages) and reports the per-side split alongside the total.
    """
    part = partition_momentum(model)
    terms = {"L": [], "R": []}
    for lo, hi, side in part.sided_arcs():
        beta_eff = _beta_for(model, side)
        f = _eta_integrand(model, beta_eff)
        terms[side].append(_arc_integral(model, f, lo, hi, beta_eff))
    s_L = math.fsum(terms["L"])
    s_R = math.fsum(terms["R"])
    s = math.fsum(terms["L"] + terms["R"])
    sigma = _sigma_from_partition(model, part)
    verdict = _vanishing_on_sigma(model, sigma, s)
    return DensityReport(s, (s_L, s_R), part, sigma, verdict)


def s_infinity_symmetric(model: ChainModel) -> float:
    """Two full-circle integrals at beta_L and beta_R, halved (u0 = 0 only).

    Valid because u0 = 0 makes E even while E' is odd, so each reservoir's
    arcs mirror the other's.  Raises NotSymmetric when u0 != 0.
    """
    if not model.hamiltonian.u(0).is_zero(CASE_TOL):
        raise NotSymmetric("the symmetric two-integral form needs u0 = 0")
    part = partition_momentum(model)
    vals = []
    for side in ("L", "R"):
        beta_eff = _beta_for(model, side)
        f = _eta_integrand(model, beta_eff)
        for lo, hi, _ in part.sided_arcs():
            vals.append(_arc_integral(model, f, lo, hi, beta_eff))
    return 0.5 * math.fsum(vals)


def tanh_form(model: ChainModel) -> TanhFormResult:
    """FermiDirac closed form eta(tanh(beta_a E / 2)), with its lower bound.

    The bound is sum_a eta(a_a) |Pi_a| / 2pi with a_a = tanh(beta_a K / 2),
    K = sum_b sup|u_b|; it is strictly positive and certifies s_inf > 0.
    Raises WrongFermi for occupation functions other than FermiDirac.
    """
    if not isinstance(model.fermi, FermiDirac):
        raise WrongFermi("the tanh form is the FermiDirac specialization")
    part = partition_momentum(model)
    energy = _upper_energy(model)
    vals = []
    for lo, hi, side in part.sided_arcs():
        beta_eff = _beta_for(model, side)
        f = lambda k, b=beta_eff: float(binary_eta(math.tanh(0.5 * b * energy(k)))) / _TWO_PI
        vals.append(_arc_integral(model, f, lo, hi, beta_eff))
    value = math.fsum(vals)
    scale = 0.5 * model.hamiltonian.sup_norm_sum()
    a_L = math.tanh(model.temps.beta_L * scale)
    a_R = math.tanh(model.temps.beta_R * scale)
    lower = (
        float(binary_eta(a_L)) * part.length("L") + float(binary_eta(a_R)) * part.length("R")
    ) / _TWO_PI
    return TanhFormResult(value, lower, a_L, a_R)


# ----------------------------------------------------------------------
# Sigma and the vanishing criterion
# ----------------------------------------------------------------------
def _sigma_from_partition(model: ChainModel, part: MomentumPartition):
    energy = _upper_energy(model)
    raw: list[tuple[float, float]] = []
    for lo, hi, side in part.sided_arcs():
        beta_eff = _beta_for(model, side)
        e1, e2 = beta_eff * energy(lo), beta_eff * energy(hi)
        lo_v, hi_v = min(e1, e2), max(e1, e2)
        raw.append((lo_v, hi_v))
        raw.append((-hi_v, -lo_v))
    raw.sort()
    merged: list[list[float]] = []
    for lo_v, hi_v in raw:
        if merged and lo_v <= merged[-1][1] + 1e-12:
            merged[-1][1] = max(merged[-1][1], hi_v)
        else:
            merged.append([lo_v, hi_v])
    return tuple((a, b) for a, b in merged)


def sigma_set(model: ChainModel) -> tuple[tuple[float, float], ...]:
    """The energy range Sigma as merged closed intervals.

    Each partition arc is monotone for E, so its image under ± beta_a E is
    the closed interval between the endpoint values; Sigma is the union.
    """
    return _sigma_from_partition(model, partition_momentum(model))


def _vanishing_on_sigma(model: ChainModel, sigma, s_value: float) -> VanishingVerdict:
    lengths = [hi - lo for lo, hi in sigma]
    total = math.fsum(lengths)
    counts = []
    remaining = SIGMA_SAMPLES - len(sigma)
    for length in lengths:
        share = int(remaining * length / total) if total > 0 else 0
        counts.append(1 + share)
    short = SIGMA_SAMPLES - sum(counts)
    for i in range(max(short, 0)):
        counts[i % len(counts)] += 1
    xs = np.concatenate(
        [
            lo + (np.arange(n) + 0.5) * ((hi - lo) / n)
            for (lo, hi), n in zip(sigma, counts)
        ]
    )
    rho = np.asarray(model.fermi.rho(xs), dtype=float)
    off = np.minimum(np.abs(rho), np.abs(rho - 1.0)) > RHO_BINARY_TOL
    witnesses = tuple((float(x), float(r)) for x, r in zip(xs[off][:8], rho[off][:8]))
    verdict = not bool(np.any(off))
    if verdict != (s_value < VANISHING_THRESHOLD):
        raise AxiomViolation(
            f"indicator test ({verdict}) contradicts s_inf = {s_value:.3e}: "
            "the density must vanish exactly when rho is an indicator on Sigma"
        )
    return VanishingVerdict(verdict, int(xs.size), witnesses)


def vanishing_check(model: ChainModel) -> VanishingVerdict:
    """Sample rho on Sigma and decide whether the density vanishes."""
    return s_infinity(model).vanishing
