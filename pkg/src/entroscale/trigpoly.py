"""Real trigonometric polynomials on the circle.

A polynomial of degree ``m`` is

    p(k) = a_0 + sum_{n=1}^{m} ( a_n cos(n k) + b_n sin(n k) ),

stored by its real coefficient arrays.  The class supports exact
coefficient-level ring arithmetic (addition, multiplication via
product-to-sum convolution), termwise differentiation, vectorized
evaluation, and root isolation on the fundamental domain (-pi, pi].

Roots come in two kinds: ordinary sign-change roots, and even-multiplicity
"touch" roots where the polynomial reaches zero without crossing.  Both are
found and the latter are flagged; see :func:`TrigPoly.roots`.
"""

from __future__ import annotations

from typing import Iterable, NamedTuple, Sequence

import numpy as np

from .errors import ZeroPolynomial

#: Coefficients whose magnitude falls below this are treated as exact zeros
#: when trimming the degree.  Double precision noise floor.
TRIM_TOL = 1e-14

#: Scan density per unit degree for root isolation.
_SCAN_FACTOR = 512

#: Absolute angle tolerance for bisection refinement.
_ROOT_ATOL = 1e-12

#: A located candidate counts as a touch root when p(k)^2 falls below this.
_TOUCH_P2_TOL = 1e-14


class Root(NamedTuple):
    """A root angle together with its kind."""

    angle: float
    touch: bool  # True for even-multiplicity (non-sign-changing) roots


def _canonical_angle(k: float) -> float:
    """Map an angle to the fundamental domain (-pi, pi]."""
    k = float((k + np.pi) % (2.0 * np.pi) - np.pi)
    if k <= -np.pi + 0.0:  # the wrap point itself belongs to +pi
        k = np.pi
    return k


class TrigPoly:
    """Immutable real trigonometric polynomial.

    Parameters
    ----------
    cos_coeffs : sequence of float
        ``a_0 .. a_m``.
    sin_coeffs : sequence of float, optional
        ``b_1 .. b_m`` (may be shorter than ``cos_coeffs``; missing entries
        are zero).

    Notes
    -----
    The stored degree is minimal: trailing coefficient pairs with both
    magnitudes below ``TRIM_TOL`` are removed at construction.
    """

    __slots__ = ("_a", "_b")

    def __init__(self, cos_coeffs: Sequence[float], sin_coeffs: Sequence[float] = ()):
        a = np.atleast_1d(np.asarray(cos_coeffs, dtype=float)).copy()
        bs = np.atleast_1d(np.asarray(sin_coeffs, dtype=float)) if len(sin_coeffs) else np.zeros(0)
        if a.ndim != 1 or bs.ndim != 1:
            raise ValueError("coefficient arrays must be one-dimensional")
        m = max(a.size - 1, bs.size)
        # internal layout: _a[n] for n=0..m, _b[n] for n=1..m with _b[0] == 0
        _a = np.zeros(m + 1)
        _b = np.zeros(m + 1)
        _a[: a.size] = a
        _b[1 : bs.size + 1] = bs
        # trim trailing (a_n, b_n) pairs below the noise floor
        deg = m
        while deg > 0 and abs(_a[deg]) < TRIM_TOL and abs(_b[deg]) < TRIM_TOL:
            deg -= 1
        self._a = _a[: deg + 1]
        self._b = _b[: deg + 1]
        self._a.setflags(write=False)
        self._b.setflags(write=False)

    # ------------------------------------------------------------------
    # basic structure
    # ------------------------------------------------------------------
    @property
    def degree(self) -> int:
        return self._a.size - 1

    @property
    def cos_coeffs(self) -> np.ndarray:
        """Array ``a_0 .. a_m``."""
        return self._a

    @property
    def sin_coeffs(self) -> np.ndarray:
        """Array ``b_1 .. b_m`` (empty for degree 0)."""
        return self._b[1:]

    @classmethod
    def zero(cls) -> "TrigPoly":
        return cls([0.0])

    @classmethod
    def constant(cls, c: float) -> "TrigPoly":
        return cls([float(c)])

    def is_zero(self, tol: float = TRIM_TOL) -> bool:
        """True iff every coefficient magnitude is below ``tol``."""
        if tol <= 0:
            raise ValueError("tol must be positive")
        return bool(np.all(np.abs(self._a) < tol) and np.all(np.abs(self._b) < tol))

    def coeff_norm(self) -> float:
        """Max coefficient magnitude (scale of the polynomial)."""
        return float(max(np.max(np.abs(self._a)), np.max(np.abs(self._b))))

    # ------------------------------------------------------------------
    # evaluation
    # ------------------------------------------------------------------
    def eval(self, k):
        """Evaluate at angle(s) ``k`` (scalar or array), returning float(s)."""
        k_arr = np.asarray(k, dtype=float)
        n = np.arange(self._a.size)
        # shape (..., m+1) phase table; degrees are tiny so this is cheap
        nk = np.multiply.outer(k_arr, n)
        vals = np.cos(nk) @ self._a + np.sin(nk) @ self._b
        if np.isscalar(k) or k_arr.ndim == 0:
            return float(vals)
        return vals

    __call__ = eval

    # ------------------------------------------------------------------
    # ring arithmetic
    # ------------------------------------------------------------------
    def _complex_coeffs(self) -> np.ndarray:
        """Laurent coefficients c_{-m}..c_m with p = sum c_n e^{ink}."""
        m = self.degree
        c = np.zeros(2 * m + 1, dtype=complex)
        c[m] = self._a[0]
        for n in range(1, m + 1):
            c[m + n] = 0.5 * (self._a[n] - 1j * self._b[n])
            c[m - n] = 0.5 * (self._a[n] + 1j * self._b[n])
        return c

    @classmethod
    def _from_complex(cls, c: np.ndarray) -> "TrigPoly":
        m = (c.size - 1) // 2
        a = np.zeros(m + 1)
        b = np.zeros(m)
        a[0] = c[m].real
        for n in range(1, m + 1):
            a[n] = (c[m + n] + c[m - n]).real
            b[n - 1] = (c[m + n] - c[m - n]).imag * (-1.0)
        return cls(a, b)

    def mul(self, other: "TrigPoly") -> "TrigPoly":
        """Product polynomial (product-to-sum coefficient convolution)."""
        c = np.convolve(self._complex_coeffs(), other._complex_coeffs())
        return TrigPoly._from_complex(c)

    def add(self, other: "TrigPoly") -> "TrigPoly":
        m = max(self.degree, other.degree)
        a = np.zeros(m + 1)
        b = np.zeros(m)
        a[: self._a.size] += self._a
        a[: other._a.size] += other._a
        b[: self.degree] += self._b[1:]
        b[: other.degree] += other._b[1:]
        return TrigPoly(a, b)

    def scale(self, c: float) -> "TrigPoly":
        return TrigPoly(self._a * c, self._b[1:] * c)

    def __mul__(self, other):
        if isinstance(other, TrigPoly):
            return self.mul(other)
        return self.scale(float(other))

    __rmul__ = __mul__

    def __add__(self, other):
        if isinstance(other, TrigPoly):
            return self.add(other)
        return self.add(TrigPoly.constant(float(other)))

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, TrigPoly):
            return self.add(other.scale(-1.0))
        return self.add(TrigPoly.constant(-float(other)))

    def __neg__(self):
        return self.scale(-1.0)

    def derivative(self) -> "TrigPoly":
        """Termwise d/dk: cos(nk) -> -n sin(nk), sin(nk) -> n cos(nk)."""
        m = self.degree
        n = np.arange(m + 1, dtype=float)
        a = n * self._b  # new a_n = n * b_n ; a_0 = 0
        b = (-n * self._a)[1:]  # new b_n = -n * a_n
        return TrigPoly(a, b)

    def __repr__(self) -> str:
        return f"TrigPoly(deg={self.degree}, a={self._a.tolist()}, b={self._b[1:].tolist()})"

    # ------------------------------------------------------------------
    # root isolation
    # ------------------------------------------------------------------
    def roots(self) -> list[Root]:
        """All zeros on (-pi, pi], located to 1e-12, touch roots flagged.

        Sign-change roots are bisected on a uniform scan of
        ``512 * (2 m + 1)`` points.  Even-multiplicity touch points are
        found from low-|p| basins of the scan: the derivative polynomial is
        bisected inside the basin (the derivative changes sign at an interior
        minimum of p^2), and the candidate is accepted when p^2 < 1e-14.

        Raises
        ------
        ZeroPolynomial
            If the polynomial vanishes identically (to ``TRIM_TOL``).
        """
        if self.is_zero(TRIM_TOL):
            raise ZeroPolynomial("cannot isolate roots of the zero polynomial")

        m = max(self.degree, 1)
        n_scan = _SCAN_FACTOR * (2 * m + 1)
        grid = -np.pi + 2.0 * np.pi * np.arange(n_scan + 1) / n_scan  # closed [-pi, pi]
        vals = self.eval(grid)

        found: list[Root] = []

        def _near_existing(k: float) -> bool:
            return any(
                min(abs(k - r.angle), 2 * np.pi - abs(k - r.angle)) < 1e-9 for r in found
            )

        # --- exact grid hits -------------------------------------------------
        zero_hits = np.nonzero(vals == 0.0)[0]
        for i in zero_hits:
            if i == n_scan:  # same circle point as i == 0
                continue
            k = _canonical_angle(grid[i])
            lo = vals[i - 1] if i > 0 else vals[n_scan - 1]
            hi = vals[i + 1]
            if not _near_existing(k):
                found.append(Root(k, touch=bool(lo * hi > 0)))

        # --- sign changes ----------------------------------------------------
        for i in range(n_scan):
            v0, v1 = vals[i], vals[i + 1]
            if v0 == 0.0 or v1 == 0.0 or v0 * v1 > 0:
                continue
            k = self._bisect(grid[i], grid[i + 1], v0)
            k = _canonical_angle(k)
            if not _near_existing(k):
                found.append(Root(k, touch=False))

        # --- touch candidates: low-|p| local minima of the scan --------------
        scale = max(self.coeff_norm(), 1.0)
        absv = np.abs(vals[:n_scan])
        dp = self.derivative()
        for i in range(n_scan):
            im = (i - 1) % n_scan
            ip = (i + 1) % n_scan
            if not (absv[i] <= absv[im] and absv[i] <= absv[ip]):
                continue
            if absv[i] >= 1e-4 * scale:
                continue
            lo, hi = grid[i] - 2.0 * np.pi / n_scan, grid[i] + 2.0 * np.pi / n_scan
            d_lo, d_hi = dp.eval(lo), dp.eval(hi)
            if d_lo * d_hi < 0:
                k = dp._bisect(lo, hi, d_lo)
            else:
                k = self._parabolic_refine(lo, hi)
            pk = self.eval(k)
            if pk * pk < _TOUCH_P2_TOL:
                k = _canonical_angle(k)
                if not _near_existing(k):
                    found.append(Root(k, touch=True))

        found.sort(key=lambda r: r.angle)
        return found

    def _bisect(self, lo: float, hi: float, v_lo: float) -> float:
        """Standard bisection on [lo, hi]; assumes a sign change."""
        for _ in range(80):
            mid = 0.5 * (lo + hi)
            if hi - lo < _ROOT_ATOL:
                return mid
            v_mid = self.eval(mid)
            if v_mid == 0.0:
                return mid
            if v_lo * v_mid < 0:
                hi = mid
            else:
                lo, v_lo = mid, v_mid
        return 0.5 * (lo + hi)

    def _parabolic_refine(self, lo: float, hi: float) -> float:
        """Golden-section minimization of p^2 on [lo, hi] (flat-minimum fallback)."""
        phi = 0.5 * (np.sqrt(5.0) - 1.0)
        a, b = lo, hi
        c = b - phi * (b - a)
        d = a + phi * (b - a)
        fc, fd = self.eval(c) ** 2, self.eval(d) ** 2
        for _ in range(200):
            if b - a < 1e-13:
                break
            if fc < fd:
                b, d, fd = d, c, fc
                c = b - phi * (b - a)
                fc = self.eval(c) ** 2
            else:
                a, c, fc = c, d, fd
                d = a + phi * (b - a)
                fd = self.eval(d) ** 2
        return 0.5 * (a + b)

    def root_angles(self) -> list[float]:
        """Just the angles from :meth:`roots`."""
        return [r.angle for r in self.roots()]

    def sup_norm(self) -> float:
        """Supremum of |p| on the circle (dense grid + golden refinement)."""
        m = max(self.degree, 1)
        n_scan = 1024 * (2 * m + 1)
        grid = -np.pi + 2.0 * np.pi * np.arange(n_scan) / n_scan
        vals = np.abs(self.eval(grid))
        i = int(np.argmax(vals))
        lo = grid[i] - 2.0 * np.pi / n_scan
        hi = grid[i] + 2.0 * np.pi / n_scan
        # golden-section maximization of |p|
        phi = 0.5 * (np.sqrt(5.0) - 1.0)
        a, b = lo, hi
        c = b - phi * (b - a)
        d = a + phi * (b - a)
        fc, fd = -abs(self.eval(c)), -abs(self.eval(d))
        for _ in range(120):
            if b - a < 1e-14:
                break
            if fc < fd:
                b, d, fd = d, c, fc
                c = b - phi * (b - a)
                fc = -abs(self.eval(c))
            else:
                a, c, fc = c, d, fd
                d = a + phi * (b - a)
                fd = -abs(self.eval(d))
        k = 0.5 * (a + b)
        return float(max(vals[i], abs(self.eval(k))))


def eval_poly(p: TrigPoly, k):
    """Functional alias for :meth:`TrigPoly.eval`."""
    return p.eval(k)


def mul(p: TrigPoly, q: TrigPoly) -> TrigPoly:
    """Functional alias for :meth:`TrigPoly.mul`."""
    return p.mul(q)


def derivative(p: TrigPoly) -> TrigPoly:
    """Functional alias for :meth:`TrigPoly.derivative`."""
    return p.derivative()


def is_zero(p: TrigPoly, tol: float) -> bool:
    """Functional alias for :meth:`TrigPoly.is_zero`."""
    return p.is_zero(tol)


def roots(p: TrigPoly) -> list[Root]:
    """Functional alias for :meth:`TrigPoly.roots`."""
    return p.roots()
