"""Chain model and the right/left-mover momentum-space 2-point symbol.

A translation-invariant quadratic chain is described in momentum space by
four real trigonometric polynomials: one scalar ``u0`` and a 3-vector
``u = (u1, u2, u3)``,

    u_a(k) = -2 sum_{n=1..mu} c_{a,n} sin(n k)        (a = 0, 1, 2),
    u_3(k) = c_{3,0} + 2 sum_{n=1..mu} c_{3,n} cos(n k),

with dispersion branches ``E_± = u0 ± |u|`` and group velocities
``E_±' = u0' ± u~ . u'`` where ``u~ = u/|u|``.

Six mutually exclusive spectral cases are decided by exact coefficient
tests; the mover symbol exists in cases 2-5::

    case 1:  u0 = 0, u != 0, u.u' = 0        (no symbol: pure point part)
    case 2:  u0 = 0 and u.u' != 0
    case 3:  u0 != 0 and u = 0
    case 4:  u0 != 0, u != 0, u.u' = 0
    case 5:  u0 != 0, u.u' != 0, u0^2 != u^2
    case 6:  u0 != 0 and u0^2 = u^2          (no symbol: pure point part)

In cases 2-5 the 2-point symbol is, with beta = (beta_R+beta_L)/2 and
delta = (beta_R-beta_L)/2,

    rho_± = rho( (beta + delta sign(E_±')) E_± ),
    r0 = (rho_+ + rho_-)/2,     r = ((rho_+ - rho_-)/2) u~,

and in case 3 simply ``r0 = rho((beta + delta sign(u0')) u0)``, ``r = 0``.
The reservoir of origin of each momentum is selected by the sign of the
group velocity: right movers carry ``beta_R``, left movers ``beta_L``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Callable, Mapping, Sequence

import numpy as np
from scipy.special import expit

from .errors import OnZeroSet, WrongCase, WrongFermi
from .trigpoly import TrigPoly

#: Coefficient tolerance for the exact case tests.
CASE_TOL = 1e-12

#: |u| below this counts as "on the zero set of |u|".
ZERO_SET_TOL = 1e-13

#: Number of points of the symmetric validation grid for occupation functions.
_FERMI_GRID_N = 1024

#: Half-width of the validation grid (covers the energy scales of interest).
_FERMI_GRID_X = 24.0


# ----------------------------------------------------------------------
# Hamiltonian coefficients
# ----------------------------------------------------------------------
class HamiltonianCoeffs:
    """Finite-range coefficient table c_{a,n} defining u0 and u.

    Parameters
    ----------
    mu : int
        Interaction range (>= 1).
    c : mapping
        Sparse table ``{(a, n): value}`` with a in {0,1,2}, n in 1..mu
        (sine rows) and a = 3, n in 0..mu (cosine row).  Omitted entries
        are zero.  At least one entry must be nonzero.
    """

    def __init__(self, mu: int, c: Mapping[tuple[int, int], float]):
        if int(mu) < 1:
            raise ValueError("range mu must be >= 1")
        self.mu = int(mu)
        table = np.zeros((4, self.mu + 1))
        for (alpha, n), val in c.items():
            alpha, n = int(alpha), int(n)
            if alpha not in (0, 1, 2, 3):
                raise ValueError(f"coefficient row must be 0..3, got {alpha}")
            lo = 0 if alpha == 3 else 1
            if not (lo <= n <= self.mu):
                raise ValueError(f"coefficient index n={n} outside {lo}..{self.mu} for row {alpha}")
            table[alpha, n] = float(val)
        if not np.any(table):
            raise ValueError("all coefficients vanish: the chain has no Hamiltonian")
        self.c = table
        self.c.setflags(write=False)

        # derived polynomials, built once
        self._u = [self._build_u(alpha) for alpha in range(4)]
        self._u_sq = self.u(1) * self.u(1) + self.u(2) * self.u(2) + self.u(3) * self.u(3)
        self._uup = (
            self.u(1) * self.u(1).derivative()
            + self.u(2) * self.u(2).derivative()
            + self.u(3) * self.u(3).derivative()
        )
        u0p = self.u(0).derivative()
        self._q_poly = u0p * u0p * self._u_sq - self._uup * self._uup
        if self.u(0).is_zero(CASE_TOL) and self._u_is_zero():
            raise ValueError("u0 = 0 and u = 0: the Hamiltonian vanishes identically")

    def _build_u(self, alpha: int) -> TrigPoly:
        if alpha == 3:
            a = self.c[3].copy()
            a[1:] *= 2.0
            return TrigPoly(a)
        return TrigPoly([0.0], -2.0 * self.c[alpha, 1:])

    def u(self, alpha: int) -> TrigPoly:
        """The coefficient polynomial u_alpha, alpha in {0,1,2,3}."""
        return self._u[alpha]

    @property
    def u_sq(self) -> TrigPoly:
        """|u|^2 = u1^2 + u2^2 + u3^2 as an exact polynomial."""
        return self._u_sq

    @property
    def uup(self) -> TrigPoly:
        """u . u' as an exact polynomial."""
        return self._uup

    @property
    def q_poly(self) -> TrigPoly:
        """Q = u0'^2 |u|^2 - (u.u')^2; its zeros bound the velocity arcs."""
        return self._q_poly

    def _u_is_zero(self) -> bool:
        return all(self.u(a).is_zero(CASE_TOL) for a in (1, 2, 3))

    def abs_u(self, k):
        """|u|(k) = sqrt of the exact polynomial u^2, clamped at 0 from below."""
        v = self._u_sq.eval(k)
        return np.sqrt(np.maximum(v, 0.0)) if isinstance(v, np.ndarray) else math.sqrt(max(v, 0.0))

    def zero_set_angles(self) -> list[float]:
        """Angles where |u| vanishes (empty when u^2 has no zeros or u = 0)."""
        if self._u_is_zero() or self._u_sq.is_zero(CASE_TOL):
            return []
        from .errors import ZeroPolynomial

        try:
            return [r.angle for r in self._u_sq.roots()]
        except ZeroPolynomial:  # pragma: no cover - guarded above
            return []

    def sup_norm_sum(self) -> float:
        """sum_a ||u_a||_inf, the energy-scale constant of the tanh bound."""
        return float(sum(self.u(a).sup_norm() if not self.u(a).is_zero() else 0.0 for a in range(4)))


class CaseTag(enum.Enum):
    Case1 = 1
    Case2 = 2
    Case3 = 3
    Case4 = 4
    Case5 = 5
    Case6 = 6

    @property
    def has_symbol(self) -> bool:
        return self in (CaseTag.Case2, CaseTag.Case3, CaseTag.Case4, CaseTag.Case5)


def classify(h: HamiltonianCoeffs) -> CaseTag:
    """Decide the spectral case by exact coefficient tests (tolerance 1e-12)."""
    u0_zero = h.u(0).is_zero(CASE_TOL)
    u_zero = h._u_is_zero()
    uup_zero = h.uup.is_zero(CASE_TOL)
    if u0_zero:
        # u != 0 here (the all-zero Hamiltonian is rejected at construction)
        return CaseTag.Case1 if uup_zero else CaseTag.Case2
    if u_zero:
        return CaseTag.Case3
    if (h.u(0) * h.u(0) - h.u_sq).is_zero(CASE_TOL):
        return CaseTag.Case6
    if uup_zero:
        return CaseTag.Case4
    return CaseTag.Case5


# ----------------------------------------------------------------------
# dispersion
# ----------------------------------------------------------------------
def dispersion(h: HamiltonianCoeffs, k):
    """Both dispersion branches (E_plus, E_minus) = u0 ± |u| at angle(s) k."""
    u0 = h.u(0).eval(k)
    au = h.abs_u(k)
    return u0 + au, u0 - au


def _velocities(h: HamiltonianCoeffs, k, case: CaseTag):
    """(E_plus', E_minus') at angle(s) k; case 3 returns (u0', u0')."""
    u0p = h.u(0).derivative().eval(k)
    if case is CaseTag.Case3:
        return u0p, u0p
    au = h.abs_u(k)
    if np.any(np.asarray(au) < ZERO_SET_TOL):
        raise OnZeroSet("group velocity undefined where |u| vanishes")
    proj = h.uup.eval(k) / au  # u~ . u'
    return u0p + proj, u0p - proj


def dispersion_derivative(h: HamiltonianCoeffs, k):
    """Group velocity E' = u0' + u~.u' of the upper branch (u0' in case 3).

    Raises
    ------
    OnZeroSet
        If |u|(k) < 1e-13 in cases 2, 4, 5.
    """
    return _velocities(h, k, classify(h))[0]


# ----------------------------------------------------------------------
# temperatures
# ----------------------------------------------------------------------
@dataclass(frozen=True)
class Temperatures:
    """Reservoir inverse temperatures, 0 < beta_L <= beta_R."""

    beta_L: float
    beta_R: float

    def __post_init__(self):
        if not (0.0 < self.beta_L <= self.beta_R):
            raise ValueError(f"need 0 < beta_L <= beta_R, got ({self.beta_L}, {self.beta_R})")

    @property
    def beta(self) -> float:
        return 0.5 * (self.beta_R + self.beta_L)

    @property
    def delta(self) -> float:
        return 0.5 * (self.beta_R - self.beta_L)


# ----------------------------------------------------------------------
# occupation (Fermi) functions
# ----------------------------------------------------------------------
class FermiFunction:
    """Occupation function rho >= 0 with even part identically 1/2.

    Subclasses implement :meth:`rho` (vectorized) and :meth:`jump_points`
    (finite list of discontinuity abscissae, used to split quadrature and
    to locate symbol discontinuities).  ``validate`` checks the defining
    constraints on a 1024-point symmetric grid.
    """

    name = "abstract"

    def rho(self, x):  # pragma: no cover - abstract
        raise NotImplementedError

    def jump_points(self) -> list[float]:
        return []

    def odd_part_doubled(self, x):
        """2 Od(rho)(x) = rho(x) - rho(-x), the quantity entering the entropy."""
        return self.rho(x) - self.rho(-x)

    def validate(self) -> None:
        """Check rho >= 0, Ev(rho) = 1/2, |2 Od(rho)| <= 1 on the sample grid.

        The grid is symmetric about 0 and half-offset so that no sample hits
        a jump point of the step-type variants.

        Raises
        ------
        WrongFermi
            If any constraint fails beyond 1e-12.
        """
        half = (np.arange(_FERMI_GRID_N // 2) + 0.5) * (2.0 * _FERMI_GRID_X / _FERMI_GRID_N)
        xs = np.concatenate([-half[::-1], half])
        vals = np.asarray(self.rho(xs), dtype=float)
        if np.min(vals) < -1e-12:
            raise WrongFermi(f"{self.name}: occupation function takes negative values")
        ev = 0.5 * (vals + vals[::-1])  # grid is symmetric: reversal is x -> -x
        if np.max(np.abs(ev - 0.5)) > 1e-12:
            raise WrongFermi(f"{self.name}: even part differs from 1/2 on the sample grid")
        if np.max(np.abs(vals - vals[::-1])) > 1.0 + 1e-12:
            raise WrongFermi(f"{self.name}: odd part exceeds 1/2 in magnitude")


class FermiDirac(FermiFunction):
    """rho(x) = 1 / (1 + e^{-x}); doubled odd part tanh(x/2)."""

    name = "fermi_dirac"

    def rho(self, x):
        return expit(np.asarray(x, dtype=float))


class GroundStep(FermiFunction):
    """Indicator of (0, infinity): the zero-temperature occupation."""

    name = "ground"

    def rho(self, x):
        return (np.asarray(x, dtype=float) > 0.0).astype(float)

    def jump_points(self) -> list[float]:
        return [0.0]


class HalfConstant(FermiFunction):
    """rho = 1/2 everywhere: the maximally mixed occupation."""

    name = "half"

    def rho(self, x):
        return np.full_like(np.asarray(x, dtype=float), 0.5)


class StepSet(FermiFunction):
    """Indicator occupation 1_M for a finite union of open intervals M.

    The set must satisfy ``M ∩ (-M) = ∅``; the occupation is completed off
    ``M ∪ (-M)`` by the ground-state rule ``1_{x>0}`` so that the even part
    is 1/2 everywhere (up to the finitely many endpoints).
    """

    name = "step_set"

    def __init__(self, intervals: Sequence[tuple[float, float]]):
        ivs = []
        for a, b in intervals:
            a, b = float(a), float(b)
            if not a < b:
                raise ValueError(f"empty or reversed interval ({a}, {b})")
            ivs.append((a, b))
        ivs.sort()
        for (a1, b1), (a2, b2) in zip(ivs, ivs[1:]):
            if a2 < b1:
                raise ValueError("intervals must be disjoint")
        for a1, b1 in ivs:
            for a2, b2 in ivs:
                lo, hi = max(a1, -b2), min(b1, -a2)
                if lo < hi:
                    raise ValueError("M and -M overlap; no consistent occupation exists")
        self.intervals = tuple(ivs)

    def _in_m(self, x):
        x = np.asarray(x, dtype=float)
        out = np.zeros(x.shape, dtype=bool)
        for a, b in self.intervals:
            out |= (x > a) & (x < b)
        return out

    def rho(self, x):
        x = np.asarray(x, dtype=float)
        in_m = self._in_m(x)
        in_neg_m = self._in_m(-x)
        return np.where(in_m, 1.0, np.where(in_neg_m, 0.0, (x > 0.0).astype(float)))

    def jump_points(self) -> list[float]:
        pts = {0.0}
        for a, b in self.intervals:
            pts.update((a, b, -a, -b))
        return sorted(pts)


class CustomOdd(FermiFunction):
    """rho = (1 + vrho)/2 for a user-supplied bounded odd function vrho.

    Restricted to piecewise-continuous callables; any jump abscissae must be
    declared so quadrature can split there.
    """

    name = "custom_odd"

    def __init__(self, vrho: Callable, jumps: Sequence[float] = ()):
        self._vrho = vrho
        self._jumps = sorted(float(j) for j in jumps)

    def rho(self, x):
        x = np.asarray(x, dtype=float)
        return 0.5 * (1.0 + np.asarray(self._vrho(x), dtype=float))

    def jump_points(self) -> list[float]:
        return list(self._jumps)


FERMI_BY_NAME = {
    "fermi_dirac": FermiDirac,
    "ground": GroundStep,
    "half": HalfConstant,
    "step_set": StepSet,
}


# ----------------------------------------------------------------------
# family phase
# ----------------------------------------------------------------------
@dataclass(frozen=True)
class FermiFamilyPhase:
    """Unit phase and index selecting the generator family, default (1, 2)."""

    lam: complex = 1.0 + 0.0j
    gamma: int = 2

    def __post_init__(self):
        if abs(abs(complex(self.lam)) - 1.0) > 1e-12:
            raise ValueError(f"family phase must have unit modulus, got |{self.lam}|")
        if self.gamma not in (1, 2):
            raise ValueError("gamma must be 1 or 2")

    def lam_pow(self, n: int) -> complex:
        """lambda_n := lambda^{(-1)^n}."""
        lam = complex(self.lam)
        return lam if n % 2 == 0 else lam.conjugate()

    @property
    def lam_next_sq(self) -> complex:
        """lambda_{gamma+1}^2, the phase constant entering the block symbol."""
        return self.lam_pow(self.gamma + 1) ** 2


# ----------------------------------------------------------------------
# the chain model
# ----------------------------------------------------------------------
@dataclass(frozen=True)
class ChainModel:
    """Immutable problem statement: Hamiltonian, temperatures, occupation, phase."""

    hamiltonian: HamiltonianCoeffs
    temps: Temperatures
    fermi: FermiFunction
    phase: FermiFamilyPhase = field(default_factory=FermiFamilyPhase)

    def __post_init__(self):
        self.fermi.validate()

    @property
    def case(self) -> CaseTag:
        return classify(self.hamiltonian)

    def require_symbol_case(self) -> CaseTag:
        case = self.case
        if not case.has_symbol:
            raise WrongCase(
                f"{case.name}: the mover 2-point symbol exists only in cases 2-5"
            )
        return case


def _rho_pm(model: ChainModel, k, case: CaseTag):
    """(rho_+, rho_-) at angle(s) k for cases 2-5."""
    h = model.hamiltonian
    beta, delta = model.temps.beta, model.temps.delta
    if case is CaseTag.Case3:
        e = h.u(0).eval(k)
        ep = h.u(0).derivative().eval(k)
        val = model.fermi.rho((beta + delta * np.sign(ep)) * e)
        return val, val
    e_plus, e_minus = dispersion(h, k)
    v_plus, v_minus = _velocities(h, k, case)
    rho_p = model.fermi.rho((beta + delta * np.sign(v_plus)) * e_plus)
    rho_m = model.fermi.rho((beta + delta * np.sign(v_minus)) * e_minus)
    return rho_p, rho_m


def _poly_angles(poly) -> list[float]:
    """Root angles of a trig polynomial, [] when it is identically zero."""
    if poly.is_zero(CASE_TOL):
        return []
    return poly.root_angles()


def velocity_sign_breakpoints(h: HamiltonianCoeffs, case: CaseTag) -> list[float]:
    """Angles where a group velocity can change sign.

    Cases 2/4/5: roots of Q = u0'^2 |u|^2 - (u.u')^2 (E_+' E_-' = Q/|u|^2);
    case 3: roots of u0'.  A superset is returned - angles where the velocity
    merely touches zero are harmless extra split points.
    """
    if case is CaseTag.Case3:
        return _poly_angles(h.u(0).derivative())
    return _poly_angles(h.q_poly)


def energy_level_angles(h: HamiltonianCoeffs, case: CaseTag, level: float) -> list[float]:
    """Angles where a dispersion branch can cross the energy ``level``.

    Solved through the polynomial |u|^2 - (level - u0)^2 (both branches at
    once, possibly with spurious extras - again harmless as split points);
    in case 3 through u0 - level.
    """
    if case is CaseTag.Case3:
        return _poly_angles(h.u(0) - TrigPoly([level]))
    diff = TrigPoly([level]) - h.u(0)
    return _poly_angles(h.u_sq - diff * diff)


def symbol_breakpoints(model: ChainModel) -> tuple[float, ...]:
    """Angles where the mover symbol may be discontinuous, sorted in (-pi, pi].

    Union of: the zero set of |u| (the direction u/|u| flips there), the
    velocity sign-change angles when beta_R > beta_L, and the preimages of
    the occupation function's jump abscissae under beta_eff * E.  An empty
    result certifies a symbol smooth on the whole circle.
    """
    case = model.case
    h = model.hamiltonian
    pts: list[float] = []
    if case is not CaseTag.Case3:
        pts.extend(h.zero_set_angles())
    delta = model.temps.delta
    if delta > 0.0:
        pts.extend(velocity_sign_breakpoints(h, case))
    jumps = model.fermi.jump_points()
    if jumps:
        for beta_eff in {model.temps.beta + delta, model.temps.beta - delta}:
            for s in jumps:
                pts.extend(energy_level_angles(h, case, s / beta_eff))
    pts.sort()
    out: list[float] = []
    for p in pts:
        if not out or p - out[-1] > 1e-9:
            out.append(p)
    if len(out) > 1 and (out[0] + 2.0 * math.pi) - out[-1] <= 1e-9:
        out.pop()
    return tuple(out)


def rl_symbol_pauli(model: ChainModel, k):
    """Mover symbol in Pauli form: scalar r0 and 3-vector r at angle(s) k.

    Returns
    -------
    (r0, r) : r0 scalar (or array matching k), r of shape (3,) (or (3,) + k.shape).

    Raises
    ------
    WrongCase
        For cases 1 and 6.
    OnZeroSet
        At angles where |u| vanishes (cases 2, 4, 5).
    """
    case = model.require_symbol_case()
    h = model.hamiltonian
    rho_p, rho_m = _rho_pm(model, k, case)
    r0 = 0.5 * (rho_p + rho_m)
    if case is CaseTag.Case3:
        return r0, np.zeros((3,) + np.shape(r0))
    au = h.abs_u(k)
    u_tilde = np.stack([h.u(a).eval(k) / au for a in (1, 2, 3)])
    return r0, 0.5 * (rho_p - rho_m) * u_tilde


def rl_symbol_matrix(model: ChainModel, k):
    """Mover symbol as a Hermitian 2x2 matrix (eigenvalues r0 ± |r| in [0,1]).

    For array-valued ``k`` the result has shape ``k.shape + (2, 2)``.
    """
    r0, r = rl_symbol_pauli(model, k)
    r1, r2, r3 = r[0], r[1], r[2]
    out = np.empty(np.shape(r0) + (2, 2), dtype=complex)
    out[..., 0, 0] = r0 + r3
    out[..., 0, 1] = r1 - 1j * r2
    out[..., 1, 0] = r1 + 1j * r2
    out[..., 1, 1] = r0 - r3
    return out
