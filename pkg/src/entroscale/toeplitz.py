"""Block symbols, their Fourier coefficients, finite sections, paired spectra.

The window entropy pipeline runs through this module: from the mover symbol
r build the 2x2 symbol ã (and b = 2iã), extract Fourier coefficients

    ǎ(x) = ∫ dk/2pi  a(e^{ik}) e^{-ikx},

assemble the block Toeplitz section of order N with block (n, m) = ǎ(n-m),
and diagonalize.  The section of b is Hermitian with spectrum symmetric
about 0; the paired nonnegative halves λ_i feed the entropy sum.

Fourier coefficients come from one of two routes:

* smooth symbols (no breakpoints): half-offset trapezoid grid evaluated by
  FFT, with a mandatory size-doubling certificate;
* piecewise-smooth symbols: the circle is split at the detected
  discontinuity angles and each arc is integrated by composite Simpson
  rules whose panel count doubles until every coefficient is stable to
  1e-11.  The oscillatory phase factors are generated by a running
  recurrence and contracted against the weighted symbol samples in blocks,
  so the cost is one complex multiply-add per (node, lag) pair.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass

import numpy as np

from .entropy import EntropyValue, entropy_from_lambdas
from .errors import MissingLags, NoConvergence, NotSymmetric, OutOfRange, PairingFailure
from .rlmover import ChainModel, rl_symbol_matrix, symbol_breakpoints

#: Default FFT grid size; actual size is max(this, 16*max_lag as a power of 2).
DEFAULT_FFT_SIZE = 1 << 14

#: FFT doubling certificate: no coefficient may move more than this.
FFT_CERT_TOL = 1e-9

#: Arc-route absolute tolerance per Fourier coefficient.
ARC_TOL = 1e-11

#: Hermiticity tolerance of sections entering paired_spectrum.
HERM_TOL = 1e-10

#: Pairing residual beyond which the ± symmetry is declared broken.
PAIRING_TOL = 1e-6

#: lambdas within this of 1 are clamped onto [0, 1] ...
CLAMP_SOFT = 1e-8
#: ... and beyond this of 1 they abort the computation.
CLAMP_HARD = 1e-6

_LAG_BLOCK = 128          # lags per phase-recurrence block
_NODE_CHUNK = 1 << 15     # quadrature nodes per matmul chunk
_MAX_PANELS = 1 << 22     # per-arc Simpson panel budget
_EDGE_NUDGE = 1e-8        # one-sided evaluation offset at arc endpoints


def _next_pow2(n: int) -> int:
    return 1 << max(int(n) - 1, 0).bit_length() if n > 1 else 1


# ----------------------------------------------------------------------
# symbols
# ----------------------------------------------------------------------
class BlockSymbol:
    """A 2x2-matrix-valued function on the circle with a Fourier cache.

    ``breakpoints`` lists the angles (sorted, in (-pi, pi]) where the symbol
    may jump; an empty tuple certifies smoothness and selects the FFT route.
    ``scaled(c)`` returns a view representing ``c * symbol`` that shares the
    cache of its base, so ã and b = 2iã are transformed once.
    """

    def __init__(self, evaluator, breakpoints=(), *, _base=None, _scale=1.0 + 0.0j):
        self._evaluator = evaluator
        self.breakpoints = tuple(breakpoints)
        self._scale = complex(_scale)
        if _base is None:
            self._base = self
            self._lock = threading.Lock()
            self._cache: _CoeffCache | None = None
            self.fft_size = DEFAULT_FFT_SIZE
        else:
            self._base = _base

    def __call__(self, k):
        """Evaluate at angle(s) k; result has shape k.shape + (2, 2)."""
        return self._evaluator(np.asarray(k, dtype=float))

    def scaled(self, factor) -> "BlockSymbol":
        f = complex(factor)
        return BlockSymbol(
            lambda k, _e=self._evaluator: f * _e(np.asarray(k, dtype=float)),
            self.breakpoints,
            _base=self._base,
            _scale=self._scale * f,
        )

    @property
    def max_cached_lag(self) -> int:
        cache = self._base._cache
        return -1 if cache is None else cache.max_lag


@dataclass(frozen=True)
class _CoeffCache:
    max_lag: int
    array: np.ndarray          # (2*max_lag+1, 2, 2), index x + max_lag
    doubling_delta: float
    fft_size: int              # 0 for the arc route


@dataclass(frozen=True)
class CoeffTable:
    """Fourier coefficients ǎ(x) for |x| <= max_lag, plus the certificate."""

    max_lag: int
    array: np.ndarray
    doubling_delta: float

    def lag(self, x: int) -> np.ndarray:
        if abs(int(x)) > self.max_lag:
            raise MissingLags(f"lag {x} not cached (max_lag = {self.max_lag})")
        return self.array[int(x) + self.max_lag]


@dataclass(frozen=True)
class ToeplitzSection:
    """Dense finite section of block order N: block (n, m) = ǎ(n-m)."""

    order: int
    matrix: np.ndarray  # (2N, 2N) complex


@dataclass(frozen=True)
class SpectrumReport:
    """Paired spectrum of a Hermitian section with ± symmetry.

    ``lambdas`` holds the ν nonnegative half-spectrum values in descending
    order (clamped onto [0, 1] when within 1e-8); ``raw`` the full ascending
    eigenvalue list; ``residuals`` the pairing defects |w_i + w_{2ν-1-i}|.
    """

    nu: int
    lambdas: np.ndarray
    residuals: np.ndarray
    raw: np.ndarray


# ----------------------------------------------------------------------
# symbol builders
# ----------------------------------------------------------------------
def build_a_tilde(model: ChainModel) -> BlockSymbol:
    """The shifted-and-rotated symbol ã of the window correlation operator.

    With t = λ_{γ+1}² r_{12} and the sign s = (-1)^γ:

        ã11 = (i/2)(1 - (Re r11 + Re r22 + 2 Re t))
        ã12 = ( s/2)((Re r11 - Re r22) - 2i Im t)
        ã21 = (-s/2)((Re r11 - Re r22) + 2i Im t)
        ã22 = (i/2)(1 - (Re r11 + Re r22 - 2 Re t))

    Pointwise 2iã(k) is Hermitian.  Raises WrongCase outside cases 2-5.
    """
    model.require_symbol_case()
    lam_sq = model.phase.lam_next_sq
    sgn = -1.0 if model.phase.gamma % 2 else 1.0

    def evaluator(k):
        m = rl_symbol_matrix(model, k)
        re11 = m[..., 0, 0].real
        re22 = m[..., 1, 1].real
        t = lam_sq * m[..., 0, 1]
        tr, dr = re11 + re22, re11 - re22
        out = np.empty(m.shape, dtype=complex)
        out[..., 0, 0] = 0.5j * (1.0 - (tr + 2.0 * t.real))
        out[..., 0, 1] = (0.5 * sgn) * (dr - 2.0j * t.imag)
        out[..., 1, 0] = (-0.5 * sgn) * (dr + 2.0j * t.imag)
        out[..., 1, 1] = 0.5j * (1.0 - (tr - 2.0 * t.real))
        return out

    return BlockSymbol(evaluator, symbol_breakpoints(model))


def build_a_full(model: ChainModel) -> BlockSymbol:
    """The untransformed correlation symbol a; satisfies a = 1/2 + iã.

    With p = λ_{γ+1}², q = λ_γ², s = (-1)^γ:

        a11 = (r11 + r22 + p r12 + q r21)/2
        a12 = (is/2)(r11 - r22 - p r12 + q r21)
        a21 = (-is/2)(r11 - r22 + p r12 - q r21)
        a22 = (r11 + r22 - p r12 - q r21)/2
    """
    model.require_symbol_case()
    p = model.phase.lam_next_sq
    q = model.phase.lam_pow(model.phase.gamma) ** 2
    sgn = -1.0 if model.phase.gamma % 2 else 1.0

    def evaluator(k):
        m = rl_symbol_matrix(model, k)
        r11, r12 = m[..., 0, 0], m[..., 0, 1]
        r21, r22 = m[..., 1, 0], m[..., 1, 1]
        out = np.empty(m.shape, dtype=complex)
        out[..., 0, 0] = 0.5 * (r11 + r22 + p * r12 + q * r21)
        out[..., 0, 1] = (0.5j * sgn) * (r11 - r22 - p * r12 + q * r21)
        out[..., 1, 0] = (-0.5j * sgn) * (r11 - r22 + p * r12 - q * r21)
        out[..., 1, 1] = 0.5 * (r11 + r22 - p * r12 - q * r21)
        return out

    return BlockSymbol(evaluator, symbol_breakpoints(model))


def mover_symbol(model: ChainModel) -> BlockSymbol:
    """The raw mover symbol r as a BlockSymbol (shared Fourier machinery)."""
    model.require_symbol_case()
    return BlockSymbol(lambda k: rl_symbol_matrix(model, k), symbol_breakpoints(model))


# ----------------------------------------------------------------------
# Fourier routes
# ----------------------------------------------------------------------
def _fft_pass(evaluator, max_lag: int, size: int) -> np.ndarray:
    ks = -math.pi + 2.0 * math.pi * (np.arange(size) + 0.5) / size
    vals = np.asarray(evaluator(ks), dtype=complex).reshape(size, 2, 2)
    spectrum = np.fft.fft(vals, axis=0)
    xs = np.arange(-max_lag, max_lag + 1)
    phase = (-1.0) ** xs * np.exp(-1j * math.pi * xs / size) / size
    return phase[:, None, None] * spectrum[xs % size]

def _fft_coeffs(evaluator, max_lag: int, start_size: int):
    size = start_size
    prev = _fft_pass(evaluator, max_lag, size)
    delta = math.inf
    for _ in range(2):
        size *= 2
        cur = _fft_pass(evaluator, max_lag, size)
        delta = float(np.max(np.abs(cur - prev)))
        if delta <= FFT_CERT_TOL:
            return cur, delta, size
        prev = cur
    raise NoConvergence(
        f"FFT coefficients still moving by {delta:.3e} > {FFT_CERT_TOL} "
        f"after two grid doublings (size {size}); undeclared discontinuity?"
    )


def _simpson_level(evaluator, lo: float, hi: float, panels: int, lags: np.ndarray):
    """Composite Simpson value of ∫ f(k) e^{-ikx} dk/2pi over one arc.

    Endpoint values are taken a hair inside the arc so that one-sided limits
    are used at discontinuity angles; the phase factors stay exact.
    """
    h = (hi - lo) / panels
    k = lo + h * np.arange(panels + 1)
    k_eval = k.copy()
    nudge = min(_EDGE_NUDGE, 0.125 * h)
    k_eval[0] += nudge
    k_eval[-1] -= nudge
    vals = np.asarray(evaluator(k_eval), dtype=complex).reshape(panels + 1, 4)
    w = np.full(panels + 1, 2.0)
    w[1::2] = 4.0
    w[0] = w[-1] = 1.0
    w *= h / (3.0 * 2.0 * math.pi)
    weighted = np.ascontiguousarray((vals * w[:, None]).T)  # (4, nodes)

    out = np.zeros((lags.size, 4), dtype=complex)
    for s in range(0, panels + 1, _NODE_CHUNK):
        e = min(panels + 1, s + _NODE_CHUNK)
        step = np.exp(-1j * k[s:e])
        col = np.exp(-1j * lags[0] * k[s:e])
        chunk = weighted[:, s:e]
        for b in range(0, lags.size, _LAG_BLOCK):
            width = min(_LAG_BLOCK, lags.size - b)
            phases = np.empty((e - s, width), dtype=complex)
            for j in range(width):
                phases[:, j] = col
                col *= step
            out[b : b + width] += (chunk @ phases).T
    return out.reshape(lags.size, 2, 2)


def _arc_coeffs(evaluator, breakpoints, max_lag: int):
    lags = np.arange(-max_lag, max_lag + 1)
    arcs = list(zip(breakpoints, breakpoints[1:]))
    arcs.append((breakpoints[-1], breakpoints[0] + 2.0 * math.pi))
    total = np.zeros((lags.size, 2, 2), dtype=complex)
    total_delta = 0.0
    for lo, hi in arcs:
        span = hi - lo
        panels = max(64, _next_pow2(int(span * (max_lag + 1) / math.pi) + 16))
        prev = _simpson_level(evaluator, lo, hi, panels, lags)
        while True:
            panels *= 2
            if panels > _MAX_PANELS:
                raise NoConvergence(
                    f"arc [{lo:.6f}, {hi:.6f}] not converged to {ARC_TOL} "
                    f"within {_MAX_PANELS} Simpson panels; undeclared discontinuity?"
                )
            cur = _simpson_level(evaluator, lo, hi, panels, lags)
            delta = float(np.max(np.abs(cur - prev)))
            if delta <= ARC_TOL:
                break
            prev = cur
        total += cur
        total_delta += delta
    return total, total_delta


def fourier_coeffs(s: BlockSymbol, max_lag: int, fft_size: int | None = None) -> CoeffTable:
    """Fourier coefficients ǎ(x) for |x| <= max_lag, with a stability certificate.

    Smooth symbols (no breakpoints) use an FFT over a half-offset grid of
    size >= max(2^14, 16*max_lag rounded up to a power of two), accepted only
    when one grid doubling moves no coefficient by more than 1e-9 (a second
    doubling is attempted once, then NoConvergence).  Symbols with declared
    breakpoints are integrated arc by arc with doubling composite Simpson
    rules to 1e-11 per coefficient.  Results are cached on the symbol's base
    and shared by its scaled views.
    """
    if max_lag < 0:
        raise ValueError("max_lag must be >= 0")
    base = s._base
    floor_size = max(DEFAULT_FFT_SIZE, _next_pow2(16 * max(max_lag, 1)))
    want_size = max(floor_size, _next_pow2(fft_size)) if fft_size else floor_size
    with base._lock:
        cache = base._cache
        stale = (
            cache is None
            or cache.max_lag < max_lag
            or (not base.breakpoints and cache.fft_size < want_size)
        )
        if stale:
            if base.breakpoints:
                arr, delta = _arc_coeffs(base._evaluator, base.breakpoints, max_lag)
                cache = _CoeffCache(max_lag, arr, delta, 0)
            else:
                arr, delta, used = _fft_coeffs(base._evaluator, max_lag, want_size)
                cache = _CoeffCache(max_lag, arr, delta, used)
                base.fft_size = used
            arr.setflags(write=False)
            base._cache = cache
    lo = cache.max_lag - max_lag
    hi = cache.max_lag + max_lag + 1
    window = cache.array[lo:hi]
    if s._scale != 1.0:
        window = s._scale * window
    return CoeffTable(max_lag, window, cache.doubling_delta)


# ----------------------------------------------------------------------
# sections and spectra
# ----------------------------------------------------------------------
def build_section(s: BlockSymbol, order: int) -> ToeplitzSection:
    """Assemble the 2N x 2N finite section with block (n, m) = ǎ(n-m).

    Requires coefficients cached up to lag N-1 (run fourier_coeffs first);
    raises MissingLags otherwise.
    """
    if order < 1:
        raise ValueError("block order must be >= 1")
    cache = s._base._cache
    if cache is None or cache.max_lag < order - 1:
        have = -1 if cache is None else cache.max_lag
        raise MissingLags(f"section of order {order} needs lags up to {order - 1}, have {have}")
    idx = np.subtract.outer(np.arange(order), np.arange(order)) + cache.max_lag
    blocks = cache.array[idx]  # (N, N, 2, 2)
    matrix = blocks.transpose(0, 2, 1, 3).reshape(2 * order, 2 * order)
    if s._scale != 1.0:
        matrix = s._scale * matrix
    return ToeplitzSection(order, matrix)


def paired_spectrum(t: ToeplitzSection) -> SpectrumReport:
    """Eigenvalues of a Hermitian section, paired across the ± symmetry.

    The matrix is symmetrized (after checking Hermiticity to 1e-10), solved
    by a dense Hermitian eigensolver, and the sorted spectrum is paired
    largest-with-most-negative.  λ_i is half the spread of pair i.

    Raises
    ------
    NotSymmetric, PairingFailure, OutOfRange
        On Hermiticity defect > 1e-10, pairing residual > 1e-6, or a λ
        beyond 1 + 1e-6.
    """
    a = t.matrix
    defect = float(np.max(np.abs(a - a.conj().T))) if a.size else 0.0
    if defect > HERM_TOL:
        raise NotSymmetric(f"section deviates from Hermitian by {defect:.3e} > {HERM_TOL}")
    w = np.linalg.eigvalsh(0.5 * (a + a.conj().T))
    nu = t.order
    residuals = np.abs(w[:nu] + w[::-1][:nu])       # |w_i + w_{2nu-1-i}|
    lambdas = 0.5 * (w[::-1][:nu] - w[:nu])         # >= 0 since w is sorted
    worst = float(np.max(residuals))
    if worst > PAIRING_TOL:
        raise PairingFailure(f"± pairing residual {worst:.3e} > {PAIRING_TOL}")
    over = float(np.max(lambdas)) - 1.0
    if over > CLAMP_HARD:
        raise OutOfRange(f"paired eigenvalue exceeds 1 by {over:.3e} > {CLAMP_HARD}")
    lambdas = np.where((lambdas > 1.0) & (lambdas <= 1.0 + CLAMP_SOFT), 1.0, lambdas)
    return SpectrumReport(nu, lambdas, residuals, w)


def window_spectrum(
    model: ChainModel, nu: int, fft_size: int | None = None
) -> tuple[EntropyValue, SpectrumReport]:
    """Entropy and paired spectrum of a ν-site window in one call."""
    b = build_a_tilde(model).scaled(2.0j)
    fourier_coeffs(b, nu - 1, fft_size)
    report = paired_spectrum(build_section(b, nu))
    return entropy_from_lambdas(report.lambdas, nu), report


def window_entropy(model: ChainModel, nu: int, fft_size: int | None = None) -> EntropyValue:
    """Von Neumann entropy of a ν-site window of the chain."""
    return window_spectrum(model, nu, fft_size)[0]
