"""Truncated Hardy space model.

An element of H^2 is represented by its first N Taylor coefficients in the
basis 1, z, ..., z^(N-1).  Vectors coming from an infinite series carry a
bound (or, where stated, an estimate) on the l2 norm of the dropped tail.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import toeplitz
from scipy.signal import lfilter

from .errors import InvalidOrder, OrderMismatch
from .moebius import disk_point

MIN_ORDER = 8
MAX_ORDER = 4096
FLAG_TOL = 1e-8


def check_order(order) -> int:
    if isinstance(order, bool) or int(order) != order:
        raise InvalidOrder(f"truncation order must be an integer, got {order!r}")
    order = int(order)
    if not MIN_ORDER <= order <= MAX_ORDER:
        raise InvalidOrder(f"truncation order {order} outside [{MIN_ORDER}, {MAX_ORDER}]")
    return order


@dataclass(frozen=True, eq=False)
class HardyVector:
    coeffs: np.ndarray
    tail: float = 0.0

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=complex).ravel()
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @property
    def order(self) -> int:
        return self.coeffs.size

    def norm(self) -> float:
        return float(np.linalg.norm(self.coeffs))

    def evaluate(self, z):
        """Value of the truncated polynomial at z."""
        return np.polyval(self.coeffs[::-1], z)

    def normalized(self) -> "HardyVector":
        n = self.norm()
        return HardyVector(self.coeffs / n, self.tail / n)

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.coeffs, dtype=dtype)


def _coeffs(f) -> np.ndarray:
    return f.coeffs if isinstance(f, HardyVector) else np.asarray(f, dtype=complex)


def inner(f, g) -> complex:
    """sum_k f_k conj(g_k)."""
    fc, gc = _coeffs(f), _coeffs(g)
    if fc.shape != gc.shape:
        raise OrderMismatch(f"orders differ: {fc.shape} vs {gc.shape}")
    return complex(np.vdot(gc, fc))


def szego(u, order) -> HardyVector:
    """Reproducing kernel k_u(z) = 1/(1 - conj(u) z); <f, k_u> = f(u)."""
    u = disk_point(u)
    n = check_order(order)
    coeffs = np.conj(u) ** np.arange(n)
    tail = abs(u) ** n / math.sqrt(1.0 - abs(u) ** 2)
    return HardyVector(coeffs, tail)


def moebius_series(b, length: int) -> np.ndarray:
    """Taylor coefficients of phi_b: b, then -(1-|b|^2) conj(b)^(n-1)."""
    b = disk_point(b)
    c = np.empty(length, dtype=complex)
    c[0] = b
    if length > 1:
        c[1:] = -(1.0 - abs(b) ** 2) * np.conj(b) ** np.arange(length - 1)
    return c


def spread_factor(b) -> float:
    """(1+|b|)/(1-|b|): the Taylor mass of phi_b^k sits at degrees in [k/s, k s]."""
    r = abs(complex(b))
    return (1.0 + r) / (1.0 - r)


def _extended_length(n: int, b, k: int) -> int:
    # well past the degree where the coefficients of phi_b^k stop oscillating
    return max(2 * n, int(1.5 * spread_factor(b) * k) + 64)


def taylor_moebius_power(b, k: int, order) -> HardyVector:
    """First N Taylor coefficients of phi_b(z)^k by repeated truncated convolution.

    The tail is estimated from the coefficients between N and an extended
    length beyond which they decay geometrically.
    """
    n = check_order(order)
    if k < 0:
        raise ValueError("k must be nonnegative")
    L = _extended_length(n, b, k)
    base = moebius_series(b, L)
    out = np.zeros(L, dtype=complex)
    out[0] = 1.0
    for _ in range(k):
        out = np.convolve(out, base)[:L]
    return HardyVector(out[:n], float(np.linalg.norm(out[n:])))


def multiply_by_phi(b, f: np.ndarray, axis: int = 0) -> np.ndarray:
    """Truncated series product phi_b * f, exact in every retained coefficient.

    phi_b = (b - z)/(1 - conj(b) z), so the product is a one-pole recursive
    filter applied to the coefficient sequence.
    """
    b = complex(b)
    return lfilter([b, -1.0], [1.0, -np.conj(b)], np.asarray(f, dtype=complex), axis=axis)


def multiply_by_kernel(u, f: np.ndarray, axis: int = 0) -> np.ndarray:
    """Truncated product k_u * f with k_u = 1/(1 - conj(u) z)."""
    return lfilter([1.0], [1.0, -np.conj(complex(u))], np.asarray(f, dtype=complex), axis=axis)


def moebius_powers(b, count: int, length: int) -> np.ndarray:
    """length x count matrix whose column k holds the coefficients of phi_b^k."""
    out = np.zeros((length, count), dtype=complex)
    col = np.zeros(length, dtype=complex)
    col[0] = 1.0
    for k in range(count):
        out[:, k] = col
        col = multiply_by_phi(b, col)
    return out


def shift_matrix(order) -> np.ndarray:
    n = check_order(order)
    return np.eye(n, k=-1, dtype=complex)


def coshift_matrix(order) -> np.ndarray:
    n = check_order(order)
    return np.eye(n, k=1, dtype=complex)


@dataclass(frozen=True, eq=False)
class SymbolFourier:
    """Two-sided Fourier coefficients c_k, |k| <= N-1, of a symbol on the circle."""

    coeffs: np.ndarray  # index k + N - 1 holds c_k

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=complex).ravel()
        if c.size % 2 == 0:
            raise ValueError("two-sided coefficient array must have odd length")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @property
    def order(self) -> int:
        return (self.coeffs.size + 1) // 2

    def c(self, k: int) -> complex:
        return complex(self.coeffs[k + self.order - 1])

    @property
    def nonnegative(self) -> np.ndarray:
        return self.coeffs[self.order - 1:]

    @property
    def nonpositive(self) -> np.ndarray:
        """c_0, c_-1, c_-2, ..."""
        return self.coeffs[self.order - 1::-1]

    def is_real(self, tol: float = 1e-14) -> bool:
        scale = max(1.0, float(np.max(np.abs(self.coeffs))))
        return bool(np.max(np.abs(self.nonpositive - np.conj(self.nonnegative))) <= tol * scale)

    def evaluate(self, theta):
        """Partial Fourier sum at the angles theta."""
        k = np.arange(-(self.order - 1), self.order)
        theta = np.asarray(theta, dtype=float)
        return np.exp(1j * np.multiply.outer(theta, k)) @ self.coeffs


def symbol_ka2(a, order) -> SymbolFourier:
    """Fourier data of |k_a|^2 = 1/|1 - conj(a) e^{i theta}|^2."""
    a = disk_point(a)
    n = check_order(order)
    pos = np.conj(a) ** np.arange(n) / (1.0 - abs(a) ** 2)
    return SymbolFourier(np.concatenate([np.conj(pos[:0:-1]), pos]))


def symbol_from_samples(func, order, points: int = 4096) -> SymbolFourier:
    """Fourier coefficients by the trapezoid rule on `points` circle nodes."""
    n = check_order(order)
    if points < 2 * n:
        raise ValueError("need at least 2N quadrature points")
    theta = 2 * np.pi * np.arange(points) / points
    vals = np.asarray(func(theta), dtype=complex)
    f = np.fft.fft(vals) / points  # f[k] ~ c_k, f[-k] ~ c_-k
    k = np.arange(-(n - 1), n)
    return SymbolFourier(f[k % points])


def toeplitz_matrix(sym: SymbolFourier, order=None) -> np.ndarray:
    """T[j, k] = c_{j-k}."""
    n = sym.order if order is None else check_order(order)
    if n > sym.order:
        raise OrderMismatch("symbol carries fewer coefficients than requested order")
    return toeplitz(sym.nonnegative[:n], sym.nonpositive[:n])


def analytic_toeplitz(coeffs) -> np.ndarray:
    """Compressed multiplication by an analytic function (lower-triangular Toeplitz)."""
    c = np.asarray(coeffs, dtype=complex)
    return toeplitz(c, np.zeros_like(c))


def mult_one_minus_abar_z(a, order) -> np.ndarray:
    a = disk_point(a)
    return np.eye(check_order(order), dtype=complex) - np.conj(a) * shift_matrix(order)


def spectral_norm(M) -> float:
    M = np.asarray(M)
    if M.size == 0:
        return 0.0
    return float(np.linalg.norm(M, 2))


def structure_flags(M, tol: float = FLAG_TOL) -> dict:
    """Which of hermitian / unitary / symmetry hold to tol in spectral norm."""
    M = np.asarray(M, dtype=complex)
    eye = np.eye(M.shape[0])
    herm = spectral_norm(M - M.conj().T) <= tol
    unit = spectral_norm(M.conj().T @ M - eye) <= tol
    return {"hermitian": herm, "unitary": unit, "symmetry": herm and unit}
