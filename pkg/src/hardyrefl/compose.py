"""Matrices of the composition operator C_a f = f o phi_a and its relatives.

All matrices are compressions (top-left N x N blocks) of operators on H^2.
Because phi_a^k is inner, column k of C_a has its Taylor mass at degrees
between k/s and k*s with s = (1+|a|)/(1-|a|).  A product of two compressions
is therefore only accurate on a leading block whose width shrinks like N/s;
`reliable_width` gives that width.
"""
from __future__ import annotations

import math

import numpy as np

from .errors import IdentityCheckFailure, KernelAtA
from .hardy import (
    analytic_toeplitz,
    check_order,
    coshift_matrix,
    moebius_powers,
    moebius_series,
    multiply_by_kernel,
    spectral_norm,
    spread_factor,
    symbol_ka2,
    toeplitz_matrix,
)
from .moebius import disk_point, evaluate, phi

# guard band (in units of sqrt(s) * N^(1/3)) between the spread edge and the cut;
# calibrated so products of compressions match to ~1e-10 for |a| <= 0.8
GUARD_SCALE = 4.0
# whole columns of a product also see rows past the block, which needs a wider band
VECTOR_GUARD_SCALE = 8.0


def _width(n, a, scale) -> int:
    s = spread_factor(a)
    guard = math.ceil(scale * math.sqrt(s) * n ** (1.0 / 3.0))
    return max(0, int((n - guard) / s))


def reliable_width(order, a) -> int:
    """Leading block width on which products of two compressions are trustworthy."""
    return _width(check_order(order), a, GUARD_SCALE)


def reliable_degree(order, a) -> int:
    """Number of leading monomials z^j whose full image under a product of two
    compressions (every row, not only the leading block) is trustworthy."""
    return _width(check_order(order), a, VECTOR_GUARD_SCALE)


def c_matrix(a, order) -> np.ndarray:
    """Compression of C_a; column k holds the Taylor coefficients of phi_a^k.

    Columns are built by the exact one-pole recursion for multiplying a
    truncated series by phi_a, which reproduces the iterated truncated
    convolution of `taylor_moebius_power` coefficient for coefficient.
    """
    a = disk_point(a)
    n = check_order(order)
    return moebius_powers(a, n, n)


def tall_c_matrix(a, order) -> tuple[np.ndarray, float]:
    """First N columns of C_a with enough rows to hold their Taylor mass.

    Returns the matrix and the largest l2 norm of a column's remaining tail,
    estimated from the last rows (beyond the spread edge the coefficients
    decay geometrically).
    """
    a = disk_point(a)
    n = check_order(order)
    rows = int(1.5 * spread_factor(a) * n) + 64
    C = moebius_powers(a, n, rows)
    tail = float(np.max(np.linalg.norm(C[rows - 32:], axis=0)))
    return C, tail


def gram_dense(a, order) -> np.ndarray:
    """Compression of C_a^* C_a from the tall product (independent of the closed form)."""
    C, _ = tall_c_matrix(a, order)
    return C.conj().T @ C


def _tall_pair(a, order, weighted: bool):
    # (rows x N) image of the first N monomials and the (N x rows) compression that reads it back
    a = disk_point(a)
    n = check_order(order)
    right, _ = tall_c_matrix(a, n)
    left = moebius_powers(a, right.shape[0], n)
    if weighted:
        c = math.sqrt(1.0 - abs(a) ** 2)
        right = c * multiply_by_kernel(a, right, axis=0)
        left = c * multiply_by_kernel(a, left, axis=0)
    return left, right


def operator_square(a, order, op: str = "c") -> np.ndarray:
    """P_N X^2 P_N for X = C_a ("c") or W_a ("w").

    Unlike the product of two N x N compressions, the intermediate image keeps
    its full Taylor mass, so only the reported tail of tall_c_matrix is lost.
    """
    if op not in ("c", "w"):
        raise ValueError("op must be 'c' or 'w'")
    left, right = _tall_pair(a, order, op == "w")
    return left @ right


def operator_w_shift_w(a, order) -> np.ndarray:
    """P_N W_a S W_a P_N through the tall intermediate."""
    left, right = _tall_pair(a, order, True)
    shifted = np.zeros_like(right)
    shifted[1:] = right[:-1]
    return left @ shifted


def gram_ccstar_dense(a, order) -> np.ndarray:
    """Compression of C_a C_a^* from the wide factor P_N C_a."""
    left, _ = _tall_pair(a, order, False)
    return left @ left.conj().T


def psi_coeffs(a, order) -> np.ndarray:
    """Taylor coefficients of psi_a = sqrt(1-|a|^2) k_a."""
    a = disk_point(a)
    return math.sqrt(1.0 - abs(a) ** 2) * np.conj(a) ** np.arange(check_order(order))


def w_matrix(a, order) -> np.ndarray:
    """W_a f = psi_a * (f o phi_a)."""
    a = disk_point(a)
    return math.sqrt(1.0 - abs(a) ** 2) * multiply_by_kernel(a, c_matrix(a, order), axis=0)


def mult_phi_matrix(a, order) -> np.ndarray:
    """Compressed multiplication by phi_a."""
    return analytic_toeplitz(moebius_series(a, check_order(order)))


def adjoint_cowen(a, order) -> np.ndarray:
    """M_{k_a} C_a - a M_{k_a} C_a S^*, assembled from its factors."""
    a = disk_point(a)
    K = analytic_toeplitz(np.conj(a) ** np.arange(check_order(order)))
    KC = K @ c_matrix(a, order)
    return KC - a * (KC @ coshift_matrix(order))


def gram_ccstar(a, order) -> np.ndarray:
    """C_a C_a^* = (1 - conj(a) S)(1 - a S^*)/(1 - |a|^2), exact in truncation."""
    a = disk_point(a)
    n = check_order(order)
    m = np.zeros((n, n), dtype=complex)
    idx = np.arange(n)
    m[idx, idx] = 1 + abs(a) ** 2
    m[0, 0] = 1.0
    m[idx[1:], idx[:-1]] = -np.conj(a)
    m[idx[:-1], idx[1:]] = -a
    return m / (1.0 - abs(a) ** 2)


def gram_cstarc(a, order) -> np.ndarray:
    """C_a^* C_a = (1 - |a|^2) T_{|k_a|^2}; entry (j, k) is a^(k-j) above the diagonal."""
    a = disk_point(a)
    return (1.0 - abs(a) ** 2) * toeplitz_matrix(symbol_ka2(a, order))


def operator_norm(a) -> float:
    """||C_a|| on H^2, read off the symbol range of C_a^* C_a."""
    r = abs(disk_point(a))
    return math.sqrt((1.0 + r) / (1.0 - r))


def berkson_gap(a, b, order) -> float:
    """Largest singular value of the compression of C_a - C_b.

    Compressions never exceed the operator norm, so this is a certified lower
    bound for ||C_a - C_b|| that increases with N.
    """
    return spectral_norm(c_matrix(a, order) - c_matrix(b, order))


def delta_definition(a, b, z):
    """(1-|a|^2)/(1 - conj(a) z) - (1-|b|^2)/(1 - conj(b) z)."""
    a, b = disk_point(a), disk_point(b)
    z = np.asarray(z, dtype=complex)
    return (1 - abs(a) ** 2) / (1 - np.conj(a) * z) - (1 - abs(b) ** 2) / (1 - np.conj(b) * z)


def delta_moebius(a, b, z):
    """conj(a) phi_a(z) - conj(b) phi_b(z); equals -delta_definition(a, b, z)."""
    a, b = disk_point(a), disk_point(b)
    return np.conj(a) * evaluate(phi(a), z) - np.conj(b) * evaluate(phi(b), z)


def delta_ab(a, b, grid: int = 1024) -> tuple[float, float]:
    """Sup of |delta_{a,b}| on a circle grid and the bound 4|a-b|/(1-|a|)."""
    if grid < 256:
        raise ValueError("grid must have at least 256 points")
    a, b = disk_point(a), disk_point(b)
    z = np.exp(2j * np.pi * np.arange(grid) / grid)
    sup = float(np.max(np.abs(delta_definition(a, b, z))))
    bound = 4 * abs(a - b) / (1 - abs(a))
    slack = 1e-12
    if sup > bound + slack:
        raise IdentityCheckFailure(f"delta sup {sup} exceeds bound {bound}")
    if not abs(abs(a) - abs(b)) - slack <= sup <= abs(a) + abs(b) + slack:
        raise IdentityCheckFailure(f"delta sup {sup} outside [||a|-|b||, |a|+|b|]")
    return sup, bound


def kernel_image(a, u) -> tuple[complex, complex, complex]:
    """C_a k_u = A k_w + B k_0 with w = phi_a(u).

    Returns (A, w, B).  A = conj(u)(1-|a|^2)/((conj(u)-conj(a))(1-conj(u) a)),
    B = conj(a)/(conj(a)-conj(u)); the extra factor 1/(1 - conj(u) a) in A is
    forced by evaluating both sides at interior points.
    """
    a, u = disk_point(a), disk_point(u)
    if abs(u - a) <= 1e-12:
        raise KernelAtA("kernel decomposition is singular at u = a")
    ub, ab = np.conj(u), np.conj(a)
    w = evaluate(phi(a), u)
    A = ub * (1 - abs(a) ** 2) / ((ub - ab) * (1 - ub * a))
    B = ab / (ab - ub)
    return complex(A), complex(w), complex(B)
