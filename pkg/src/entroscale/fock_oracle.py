"""Exact Fock-space validation of the Toeplitz entropy pipeline at small sizes.

Everything here is brute force on 2**nu-dimensional matrices: Jordan-Wigner
generator matrices, selfdual field operators B(F), a Majorana family built
with the same phase convention as the momentum-space route, Pfaffian
quasifree moments, and the reduced density matrix assembled moment by
moment.  The module exists so the production path (Fourier coefficients ->
Toeplitz section -> paired spectrum -> eta sum) can be cross-checked against
an independent construction that shares only the Fourier layer.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import reduce

import numpy as np
from scipy.special import xlogy

from .entropy import entropy_from_lambdas, shannon_ell, spectrum_product
from .errors import AxiomViolation, NotAntisymmetric, PairingFailure, TooLarge
from .rlmover import ChainModel, FermiFamilyPhase
from .toeplitz import fourier_coeffs, mover_symbol, window_spectrum

#: Largest window for which generator matrices are built (64x64).
MAX_FOCK_NU = 6

#: Largest window for the subset-sum reduced density matrix (4**5 moments).
MAX_RDM_NU = 5

#: Largest window for the exhaustive matrix-unit relation check.
MAX_UNITS_NU = 4

#: Largest half-size 2n x 2n accepted by the recursive Pfaffian (16x16).
MAX_PFAFFIAN_HALF = 8

#: Largest half-size for the enumerative pairing sum (945 pairings at n=5).
MAX_PAIRING_HALF = 5

ANTISYM_TOL = 1e-10
OMEGA_TOL = 1e-10
UNIT_TOL = 1e-12
_PAIR_TOL = 1e-6


# ----------------------------------------------------------------------
# Pfaffian, two ways
# ----------------------------------------------------------------------
def _check_antisymmetric(x, max_half: int, what: str) -> np.ndarray:
    arr = np.asarray(x, dtype=complex)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] % 2:
        raise NotAntisymmetric(f"{what} needs an even-dimensional square matrix")
    if arr.shape[0] > 2 * max_half:
        raise TooLarge(f"{what} limited to {2 * max_half}x{2 * max_half}")
    if arr.size and np.abs(arr + arr.T).max() >= ANTISYM_TOL:
        raise NotAntisymmetric(
            f"{what}: antisymmetry defect {np.abs(arr + arr.T).max():.3e}"
        )
    return arr


def pfaffian(x) -> complex:
    """Pfaffian of an antisymmetric 2n x 2n matrix by first-row expansion.

    Sub-Pfaffians are memoized on index subsets, so sizes up to 16x16 stay
    cheap.  Raises NotAntisymmetric when the input fails the 1e-10
    antisymmetry check and TooLarge beyond n = 8.
    """
    arr = _check_antisymmetric(x, MAX_PFAFFIAN_HALF, "pfaffian")
    memo: dict[tuple[int, ...], complex] = {(): 1.0 + 0.0j}

    def sub(idx: tuple[int, ...]) -> complex:
        if idx in memo:
            return memo[idx]
        lead, rest = idx[0], idx[1:]
        total = 0.0 + 0.0j
        for pos, j in enumerate(rest):
            entry = arr[lead, j]
            if entry != 0.0:
                term = entry * sub(rest[:pos] + rest[pos + 1 :])
                total += -term if pos % 2 else term
        memo[idx] = total
        return total

    return sub(tuple(range(arr.shape[0])))


def _pairings(items: tuple[int, ...]):
    if not items:
        yield ()
        return
    first = items[0]
    for t in range(1, len(items)):
        rest = items[1:t] + items[t + 1 :]
        for tail in _pairings(rest):
            yield ((first, items[t]),) + tail


def _crossings(pairing) -> int:
    count = 0
    for (a, b), (c, d) in itertools.combinations(pairing, 2):
        if a < c < b < d or c < a < d < b:
            count += 1
    return count


def pfaffian_pairing_sum(x) -> complex:
    """Pfaffian as the explicit sum over perfect pairings with crossing signs.

    Each pairing of {1..2n} contributes (-1)**crossings times the product of
    its entries, where crossings counts interleaved chord pairs.  This is the
    enumerative route kept deliberately separate from :func:`pfaffian`.
    """
    arr = _check_antisymmetric(x, MAX_PAIRING_HALF, "pairing sum")
    total = 0.0 + 0.0j
    for pairing in _pairings(tuple(range(arr.shape[0]))):
        term = 1.0 + 0.0j
        for a, b in pairing:
            term *= arr[a, b]
        total += term if _crossings(pairing) % 2 == 0 else -term
    return total


# ----------------------------------------------------------------------
# Fock representation
# ----------------------------------------------------------------------
def _majorana_weights(phase: FermiFamilyPhase) -> np.ndarray:
    """Component weights (creation, annihilation) of the two site Majoranas."""
    lam_g = phase.lam_pow(phase.gamma)
    lam_g1 = phase.lam_pow(phase.gamma + 1)
    sign = 1.0 if phase.gamma % 2 == 0 else -1.0
    return np.array(
        [[lam_g, lam_g1], [sign * 1j * lam_g, -sign * 1j * lam_g1]], dtype=complex
    )


@dataclass(frozen=True)
class FockRep:
    """Jordan-Wigner matrices for a window, plus its Majorana family."""

    nu: int
    phase: FermiFamilyPhase
    cs: tuple[np.ndarray, ...]
    gammas: tuple[np.ndarray, ...]

    @property
    def dim(self) -> int:
        return 2**self.nu

    def identity(self) -> np.ndarray:
        return np.eye(self.dim, dtype=complex)


def fock_rep(nu: int, phase: FermiFamilyPhase = FermiFamilyPhase()) -> FockRep:
    """Build the 2**nu-dimensional generator and Majorana matrices.

    The window generators are Jordan-Wigner ordered; the Majorana pair at
    each site uses the same family phase as the momentum-space symbol, so
    correlation matrices from both routes refer to one operator family.
    """
    if nu < 1:
        raise ValueError(f"window length must be positive, got {nu}")
    if nu > MAX_FOCK_NU:
        raise TooLarge(f"generator matrices limited to nu <= {MAX_FOCK_NU}")
    lower = np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex)
    string = np.diag([1.0, -1.0]).astype(complex)
    eye2 = np.eye(2, dtype=complex)
    cs = []
    for j in range(nu):
        factors = [string] * j + [lower] + [eye2] * (nu - 1 - j)
        cs.append(reduce(np.kron, factors))
    weights = _majorana_weights(phase)
    gammas = []
    for j in range(nu):
        cr, an = cs[j].conj().T, cs[j]
        for parity in (0, 1):
            gammas.append(weights[parity, 0] * cr + weights[parity, 1] * an)
    identity = np.eye(2**nu)
    for a, g in enumerate(gammas):
        if np.abs(g - g.conj().T).max() > UNIT_TOL:
            raise AxiomViolation(f"Majorana {a} is not selfadjoint")
        if np.abs(g @ g - identity).max() > UNIT_TOL:
            raise AxiomViolation(f"Majorana {a} does not square to the identity")
    for arr in cs + gammas:
        arr.setflags(write=False)
    return FockRep(nu, phase, tuple(cs), tuple(gammas))


def b_operator(rep: FockRep, f1, f2) -> np.ndarray:
    """Selfdual field B(f1 (+) f2) = sum f1[x] c_x^dag + f2[x] c_x."""
    f1 = np.asarray(f1, dtype=complex)
    f2 = np.asarray(f2, dtype=complex)
    out = np.zeros((rep.dim, rep.dim), dtype=complex)
    for j in range(rep.nu):
        out += f1[j] * rep.cs[j].conj().T + f2[j] * rep.cs[j]
    return out


def j_conjugate(f1, f2) -> tuple[np.ndarray, np.ndarray]:
    """The antiunitary involution (f1, f2) -> (conj f2, conj f1)."""
    return np.conj(np.asarray(f2, dtype=complex)), np.conj(
        np.asarray(f1, dtype=complex)
    )


def field_norm(f1, f2) -> float:
    """Closed-form operator norm of B(f1 (+) f2).

    ||B(F)|| = sqrt((n + sqrt(n^2 - |(F, JF)|^2)) / 2) with n = ||F||^2; the
    matrix 2-norm of :func:`b_operator` must reproduce it.
    """
    f1 = np.asarray(f1, dtype=complex)
    f2 = np.asarray(f2, dtype=complex)
    n2 = float(np.vdot(f1, f1).real + np.vdot(f2, f2).real)
    pairing = 2.0 * np.sum(np.conj(f1) * np.conj(f2))
    inner = max(n2 * n2 - abs(pairing) ** 2, 0.0)
    return math.sqrt(0.5 * (n2 + math.sqrt(inner)))


def fermi_vector(rep: FockRep, i: int) -> tuple[np.ndarray, np.ndarray]:
    """Component vectors of the i-th (zero-based) phased family element."""
    f1 = np.zeros(rep.nu, dtype=complex)
    f1[i] = rep.phase.lam_pow(rep.phase.gamma)
    return f1, np.zeros(rep.nu, dtype=complex)


def majorana_vector(rep: FockRep, a: int) -> tuple[np.ndarray, np.ndarray]:
    """Component vectors of the a-th (zero-based) Majorana; J-invariant."""
    site, parity = divmod(a, 2)
    w = _majorana_weights(rep.phase)[parity]
    f1 = np.zeros(rep.nu, dtype=complex)
    f2 = np.zeros(rep.nu, dtype=complex)
    f1[site], f2[site] = w[0], w[1]
    return f1, f2


# ----------------------------------------------------------------------
# correlation data and quasifree moments
# ----------------------------------------------------------------------
@dataclass(frozen=True)
class CorrelationData:
    """Majorana two-point moments (M_i, R M_j) for one window."""

    nu: int
    omega_matrix: np.ndarray  # entries (M_i, R M_j), i.e. twice the usual Omega

    @property
    def xi(self) -> np.ndarray:
        """Imaginary part of Omega: the real skew matrix driving the spectrum."""
        return np.ascontiguousarray((self.omega_matrix / 2.0).imag)


def correlation_data(model: ChainModel, nu: int, fft_size: int | None = None) -> CorrelationData:
    """Assemble the 2nu x 2nu Majorana moment matrix from Fourier lags.

    The lags come from the same Fourier layer as the Toeplitz route; only
    the packaging into Majorana components differs.  Validates hermiticity
    and the transpose identity (M_i, R M_j) + (M_j, R M_i) = 2 delta_ij.
    """
    sym = mover_symbol(model)
    table = fourier_coeffs(sym, nu - 1, fft_size)
    weights = _majorana_weights(model.phase)
    omega = np.empty((2 * nu, 2 * nu), dtype=complex)
    for a in range(2 * nu):
        sa, pa = divmod(a, 2)
        wa = np.conj(weights[pa])
        for b in range(2 * nu):
            sb, pb = divmod(b, 2)
            omega[a, b] = wa @ table.lag(sa - sb) @ weights[pb]
    herm = np.abs(omega - omega.conj().T).max()
    if herm > OMEGA_TOL:
        raise AxiomViolation(f"moment matrix hermiticity defect {herm:.3e}")
    pair = np.abs(omega + omega.T - 2.0 * np.eye(2 * nu)).max()
    if pair > OMEGA_TOL:
        raise AxiomViolation(f"moment matrix transpose identity defect {pair:.3e}")
    omega.setflags(write=False)
    return CorrelationData(nu, omega)


def omega_monomial(data: CorrelationData, subset) -> complex:
    """Quasifree moment of the ordered Majorana monomial over ``subset``.

    Zero for odd-length subsets; otherwise the Pfaffian of the antisymmetric
    off-diagonal part of the moment matrix restricted to the subset, whose
    upper triangle holds the ordered pair moments.  Indices are zero-based
    and must be strictly increasing.
    """
    idx = tuple(subset)
    if len(idx) % 2:
        return 0.0 + 0.0j
    if not idx:
        return 1.0 + 0.0j
    block = data.omega_matrix[np.ix_(idx, idx)] - np.eye(len(idx))
    return pfaffian(block)


# ----------------------------------------------------------------------
# reduced density matrix and its spectrum
# ----------------------------------------------------------------------
@dataclass(frozen=True)
class ReducedDensity:
    """Window density matrix with its spectrum (ascending) and entropy."""

    nu: int
    matrix: np.ndarray
    spectrum: np.ndarray
    entropy: float


def reduced_density_matrix(rep: FockRep, data: CorrelationData) -> ReducedDensity:
    """Assemble R = 2**(-nu) sum_S omega_S (prod_{i in S} gamma_i)^dag.

    The sum runs over all 4**nu ordered index subsets, so nu <= 5; the
    result is verified selfadjoint, unit-trace, and positive semidefinite
    to 1e-10 before its spectrum and entropy are extracted.
    """
    if rep.nu != data.nu:
        raise ValueError(f"representation ({rep.nu}) and data ({data.nu}) disagree")
    nu = rep.nu
    if nu > MAX_RDM_NU:
        raise TooLarge(f"subset-sum density matrix limited to nu <= {MAX_RDM_NU}")
    acc = np.zeros((rep.dim, rep.dim), dtype=complex)
    for mask in range(4**nu):
        idx = tuple(i for i in range(2 * nu) if mask >> i & 1)
        if len(idx) % 2:
            continue
        moment = omega_monomial(data, idx)
        if moment == 0.0:
            continue
        prod = rep.identity()
        for i in idx:
            prod = prod @ rep.gammas[i]
        acc += moment * prod.conj().T
    rho = acc / 2**nu
    herm = np.abs(rho - rho.conj().T).max()
    if herm > OMEGA_TOL:
        raise AxiomViolation(f"density matrix hermiticity defect {herm:.3e}")
    trace = complex(np.trace(rho))
    if abs(trace - 1.0) > OMEGA_TOL:
        raise AxiomViolation(f"density matrix trace {trace:.12f} != 1")
    spectrum = np.linalg.eigvalsh(rho)
    if spectrum.min() < -OMEGA_TOL:
        raise AxiomViolation(f"density matrix has eigenvalue {spectrum.min():.3e} < 0")
    probs = np.clip(spectrum, 0.0, None)
    entropy = -math.fsum(xlogy(probs, probs))
    spectrum.setflags(write=False)
    rho.setflags(write=False)
    return ReducedDensity(nu, rho, spectrum, entropy)


def skew_canonical_lambdas(data: CorrelationData) -> np.ndarray:
    """Pair the spectrum of i Xi into +-xi_i and return 2|xi_i| descending.

    These are the same paired correlation eigenvalues the Toeplitz route
    extracts from its finite section.  Raises PairingFailure when Xi fails
    to be real skew or the spectrum does not pair.
    """
    xi = data.xi
    skew = np.abs(xi + xi.T).max()
    if skew > OMEGA_TOL:
        raise PairingFailure(f"imaginary part is not skew: defect {skew:.3e}")
    w = np.linalg.eigvalsh(1j * xi)
    nu = data.nu
    resid = np.abs(w[:nu] + w[::-1][:nu]).max()
    if resid > _PAIR_TOL:
        raise PairingFailure(f"spectrum of i Xi does not pair: defect {resid:.3e}")
    lams = w[::-1][:nu] - w[:nu]
    lams.setflags(write=False)
    return lams


# ----------------------------------------------------------------------
# matrix units
# ----------------------------------------------------------------------
@dataclass(frozen=True)
class MatrixUnitReport:
    """Outcome of the exhaustive matrix-unit relation check."""

    nu: int
    checks: int
    max_residual: float


class _ResidualLog:
    def __init__(self) -> None:
        self.checks = 0
        self.worst = 0.0

    def expect(self, got: np.ndarray, want: np.ndarray, what: str) -> None:
        resid = float(np.abs(got - want).max())
        self.checks += 1
        self.worst = max(self.worst, resid)
        if resid > UNIT_TOL:
            raise AxiomViolation(f"{what}: residual {resid:.3e}")


def _site_units(rep: FockRep) -> list[dict[tuple[int, int], np.ndarray]]:
    """The four unit matrices per site, off-diagonals dressed by the string."""
    units = []
    string = rep.identity()
    for i in range(rep.nu):
        b = b_operator(rep, *fermi_vector(rep, i))
        bd = b.conj().T
        e12 = b @ string
        units.append({(1, 1): b @ bd, (1, 2): e12, (2, 1): e12.conj().T, (2, 2): bd @ b})
        string = string @ (2.0 * (bd @ b) - rep.identity())
    return units


def _multi_units(site_units) -> np.ndarray:
    """Products over sites: U[a, b] for multi-indices a, b in {1,2}**nu."""
    nu = len(site_units)
    dim = site_units[0][(1, 1)].shape[0]
    n_idx = 2**nu
    out = np.empty((n_idx, n_idx, dim, dim), dtype=complex)
    for a in range(n_idx):
        abits = [(a >> k & 1) + 1 for k in range(nu)]
        for b in range(n_idx):
            bbits = [(b >> k & 1) + 1 for k in range(nu)]
            prod = np.eye(dim, dtype=complex)
            for i in range(nu):
                prod = prod @ site_units[i][(abits[i], bbits[i])]
            out[a, b] = prod
    return out


def matrix_units(rep: FockRep) -> MatrixUnitReport:
    """Verify the full matrix-unit algebra generated by the phased family.

    Checks, all to 1e-12: the sixteen single-site product relations, unit
    adjoints and completeness, commutation of units on different sites, the
    product/adjoint/completeness relations of the multi-index units, and
    the partial traces tr(e_ab) = 2**(nu-n) delta_ab over the first n
    sites.  Raises AxiomViolation naming the first failing relation.
    """
    if rep.nu > MAX_UNITS_NU:
        raise TooLarge(f"matrix-unit check limited to nu <= {MAX_UNITS_NU}")
    log = _ResidualLog()
    units = _site_units(rep)
    eye = rep.identity()
    idx = (1, 2)
    for i, site in enumerate(units):
        for (al, be), (ga, de) in itertools.product(
            itertools.product(idx, idx), repeat=2
        ):
            want = site[(al, de)] if be == ga else np.zeros_like(eye)
            log.expect(
                site[(al, be)] @ site[(ga, de)], want, f"site {i} unit product"
            )
        for al, be in itertools.product(idx, idx):
            log.expect(site[(al, be)].conj().T, site[(be, al)], f"site {i} adjoint")
        log.expect(site[(1, 1)] + site[(2, 2)], eye, f"site {i} completeness")
    for i, j in itertools.combinations(range(rep.nu), 2):
        for ab, cd in itertools.product(itertools.product(idx, idx), repeat=2):
            x, y = units[i][ab], units[j][cd]
            log.expect(x @ y, y @ x, f"sites {i},{j} commutation")
    multi = _multi_units(units)
    n_idx = multi.shape[0]
    zero = np.zeros_like(eye)
    for b in range(n_idx):
        for c in range(n_idx):
            prods = np.einsum("aij,djk->adik", multi[:, b], multi[c], optimize=True)
            for a in range(n_idx):
                for d in range(n_idx):
                    want = multi[a, d] if b == c else zero
                    log.expect(prods[a, d], want, "multi-index product")
    for a in range(n_idx):
        for b in range(n_idx):
            log.expect(multi[a, b].conj().T, multi[b, a], "multi-index adjoint")
    log.expect(
        np.einsum("aaij->ij", multi), eye, "multi-index completeness"
    )
    for n in range(1, rep.nu + 1):
        partial = _multi_units(units[:n])
        traces = np.trace(partial, axis1=2, axis2=3)
        want = (2.0 ** (rep.nu - n)) * np.eye(2**n)
        log.expect(traces, want, f"trace over {n}-site units")
    return MatrixUnitReport(rep.nu, log.checks, log.worst)


# ----------------------------------------------------------------------
# factorization and the grand equivalence
# ----------------------------------------------------------------------
@dataclass(frozen=True)
class FactorizationReport:
    """Residual of the product structure of unit moments, with the factors."""

    nu: int
    residual: float
    site_factors: tuple[tuple[float, float], ...]


def factorization_check(rep: FockRep, data: CorrelationData) -> FactorizationReport:
    """Measure how far unit moments are from factorizing over sites.

    Computes max over multi-indices a, b of |omega(e_ab) - delta_ab
    prod_i omega(e^(i)_{a_i a_i})| with omega(X) = tr(R X).  The residual
    is guaranteed small only for diagonal correlation configurations
    (HalfConstant); elsewhere it is informational.
    """
    rho = reduced_density_matrix(rep, data).matrix
    units = _site_units(rep)
    factors = tuple(
        (
            float(np.trace(rho @ site[(1, 1)]).real),
            float(np.trace(rho @ site[(2, 2)]).real),
        )
        for site in units
    )
    multi = _multi_units(units)
    n_idx = multi.shape[0]
    residual = 0.0
    for a in range(n_idx):
        expected = 1.0
        for k in range(rep.nu):
            expected *= factors[k][a >> k & 1]
        for b in range(n_idx):
            moment = complex(np.trace(rho @ multi[a, b]))
            want = expected if a == b else 0.0
            residual = max(residual, abs(moment - want))
    return FactorizationReport(rep.nu, residual, factors)


@dataclass(frozen=True)
class EquivalenceReport:
    """Side-by-side spectra and entropies from the oracle and Toeplitz routes."""

    nu: int
    lambdas: np.ndarray  # oracle pairing eigenvalues, descending
    lambda_gap: float  # vs the Toeplitz paired spectrum
    spectrum_gap: float  # direct RDM spectrum vs product formula
    entropy_direct: float  # -tr R log R
    entropy_shannon: float  # Shannon sum over the product spectrum
    entropy_eta: float  # eta sum over the oracle lambdas
    entropy_toeplitz: float  # eta sum over the Toeplitz lambdas

    @property
    def entropy_spread(self) -> float:
        routes = (self.entropy_direct, self.entropy_shannon, self.entropy_eta)
        return max(routes) - min(routes)

    @property
    def worst_defect(self) -> float:
        return max(
            self.lambda_gap,
            self.spectrum_gap,
            self.entropy_spread,
            abs(self.entropy_eta - self.entropy_toeplitz),
        )


def grand_equivalence(model: ChainModel, nu: int, fft_size: int | None = None) -> EquivalenceReport:
    """Run both pipelines on one model and window and report every gap.

    Oracle side: moment matrix -> subset-sum density matrix -> spectrum and
    direct entropy, plus pairing eigenvalues from the skew canonical form.
    Production side: Toeplitz section -> paired spectrum -> eta sum.  All
    gaps in the report should be at the 1e-8 level or below.
    """
    rep = fock_rep(nu, model.phase)
    data = correlation_data(model, nu, fft_size)
    dens = reduced_density_matrix(rep, data)
    lams = skew_canonical_lambdas(data)
    probs = np.sort(spectrum_product(lams))
    spectrum_gap = float(np.abs(np.sort(dens.spectrum) - probs).max())
    entropy_shannon = math.fsum(shannon_ell(probs))
    entropy_eta = entropy_from_lambdas(lams).S
    value, section = window_spectrum(model, nu, fft_size)
    lambda_gap = float(np.abs(lams - section.lambdas).max())
    return EquivalenceReport(
        nu=nu,
        lambdas=lams,
        lambda_gap=lambda_gap,
        spectrum_gap=spectrum_gap,
        entropy_direct=dens.entropy,
        entropy_shannon=entropy_shannon,
        entropy_eta=entropy_eta,
        entropy_toeplitz=value.S,
    )
