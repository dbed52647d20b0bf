"""Hermitian functional calculus, polar decomposition and the symmetries of C_a."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import binom

from .compose import c_matrix, gram_cstarc, gram_dense, operator_norm
from .errors import IdentityCheckFailure, IndefiniteInput, InputError, NotHermitian, SingularInput
from .hardy import SymbolFourier, coshift_matrix, shift_matrix, spectral_norm, toeplitz_matrix
from .moebius import disk_point

HERM_TOL = 1e-8
CLIP_TOL = 1e-10
SINGULAR_TOL = 1e-10
POLAR_GUARD = 0.8


def _check_hermitian(M) -> np.ndarray:
    M = np.asarray(M, dtype=complex)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise InputError("expected a square matrix")
    defect = spectral_norm(M - M.conj().T)
    if defect > HERM_TOL:
        raise NotHermitian(f"hermitian defect {defect:.3e} exceeds {HERM_TOL}")
    return 0.5 * (M + M.conj().T)


def herm_eig(M):
    """Eigendecomposition of a hermitian matrix, small negative eigenvalues clipped to 0."""
    M = _check_hermitian(M)
    lam, V = np.linalg.eigh(M)
    if lam.size and lam[0] < -CLIP_TOL:
        raise IndefiniteInput(f"eigenvalue {lam[0]:.3e} below -{CLIP_TOL}")
    return np.clip(lam, 0.0, None), V


def herm_func(M, f) -> np.ndarray:
    """f(M) for hermitian positive semidefinite M via its eigendecomposition."""
    lam, V = herm_eig(M)
    return (V * f(lam)) @ V.conj().T


def herm_sqrt(M) -> np.ndarray:
    return herm_func(M, np.sqrt)


def herm_power(M, p: float) -> np.ndarray:
    """M^p; negative powers require M positive definite."""
    lam, V = herm_eig(M)
    if p < 0 and lam[0] <= SINGULAR_TOL:
        raise SingularInput(f"smallest eigenvalue {lam[0]:.3e} too small for power {p}")
    return (V * lam ** p) @ V.conj().T


@dataclass(frozen=True, eq=False)
class PolarDecomposition:
    unitary_part: np.ndarray
    modulus: np.ndarray
    flags: dict = field(default_factory=dict)


def polar(M) -> PolarDecomposition:
    """M = U |M| with |M| = (M^H M)^(1/2)."""
    M = np.asarray(M, dtype=complex)
    smin = np.linalg.svd(M, compute_uv=False)[-1]
    if smin <= SINGULAR_TOL:
        raise SingularInput(f"smallest singular value {smin:.3e}")
    G = M.conj().T @ M
    mod = herm_sqrt(G)
    U = M @ herm_power(G, -0.5)
    return PolarDecomposition(U, mod, {"unitary": spectral_norm(U.conj().T @ U - np.eye(len(U))) <= HERM_TOL})


def _guard(a) -> complex:
    a = disk_point(a)
    if abs(a) > POLAR_GUARD:
        raise InputError(f"|a| = {abs(a):.3f} exceeds the polar conditioning guard {POLAR_GUARD}")
    return a


def rho_matrix(a, order, route: str = "toeplitz") -> np.ndarray:
    """Unitary part rho_a of C_a.

    route="toeplitz" takes the modulus from the closed form (1-|a|^2) T_{|k_a|^2};
    route="dense" takes it from the tall product of the first N columns of
    C_a.  The square compression C_N is numerically singular for a != 0, so
    C_N^H C_N cannot serve as the modulus route.
    """
    a = _guard(a)
    C = c_matrix(a, order)
    if a == 0:
        return C
    if route == "toeplitz":
        G = gram_cstarc(a, order)
    elif route == "dense":
        G = gram_dense(a, order)
    else:
        raise ValueError(f"unknown route {route!r}")
    return C @ herm_power(G, -0.5)


def modulus_matrix(a, order) -> np.ndarray:
    """|C_a| = sqrt(1-|a|^2) T_{|k_a|^2}^(1/2)."""
    return herm_sqrt(gram_cstarc(_guard(a), order))


def symbol_g(a, order) -> SymbolFourier:
    """Fourier data of g_a = 1 + (1-|a|^2)/|1 - conj(a) z|^2."""
    a = disk_point(a)
    n = order
    pos = np.conj(a) ** np.arange(n)
    pos[0] = 2.0
    return SymbolFourier(np.concatenate([np.conj(pos[:0:-1]), pos]))


def _symmetry(a, order, sign: int, route: str) -> np.ndarray:
    a = _guard(a)
    C = c_matrix(a, order)
    eye = np.eye(C.shape[0])
    if route == "toeplitz":
        G = toeplitz_matrix(symbol_g(a, C.shape[0]))
    elif route == "generic":
        G = gram_dense(a, order) + eye
    else:
        raise ValueError(f"unknown route {route!r}")
    # 2 (1 +/- T)(T^*T + 1)^(-1) is twice the projection; subtract 1 for the symmetry
    return 2 * np.linalg.solve(G.T, (eye + sign * C).T).T - eye


def range_symmetry(a, order, route: str = "toeplitz") -> np.ndarray:
    """Symmetry equal to the identity on N(C_a - 1) and to -1 on its complement."""
    return _symmetry(a, order, +1, route)


def null_symmetry(a, order, route: str = "toeplitz") -> np.ndarray:
    """Symmetry equal to the identity on N(C_a + 1) and to -1 on its complement."""
    return _symmetry(a, order, -1, route)


def series_coefficients(a, terms: int, variant: str = "binomial") -> np.ndarray:
    """Coefficients c_0..c_terms of |1 - conj(a) S|^(-1) as a series in T.

    With x = |a|/(1+|a|^2) the binomial series of (1 - 2xT)^(-1/2) has
    c_n = binom(2n, n) (x/2)^n = (2n-1)!!/n! x^n.  variant="double-factorial"
    drops the 1/n! and is kept only to show that it diverges.
    """
    a = disk_point(a)
    x = abs(a) / (1 + abs(a) ** 2)
    n = np.arange(terms + 1)
    if variant == "binomial":
        c = binom(2 * n, n) * (x / 2.0) ** n
    elif variant == "double-factorial":
        dfact = np.array([math.prod(range(2 * k - 1, 0, -2)) for k in n], dtype=float)
        c = dfact * x ** n
    else:
        raise ValueError(f"unknown variant {variant!r}")
    return c / math.sqrt(1 + abs(a) ** 2)


@dataclass(frozen=True, eq=False)
class SeriesResult:
    partial_sum: np.ndarray
    residual: float
    coefficients: np.ndarray


def inv_modulus_oracle(a, order) -> np.ndarray:
    """(compression of (1 - a S^*)(1 - conj(a) S))^(-1/2) by eigendecomposition."""
    a = disk_point(a)
    S, Sh = shift_matrix(order), coshift_matrix(order)
    M = (1 + abs(a) ** 2) * np.eye(order) - np.conj(a) * S - a * Sh
    return herm_power(M, -0.5)


def series_inv_modulus(a, order, terms: int, variant: str = "binomial") -> SeriesResult:
    """Partial sum of the power series for |1 - conj(a) S|^(-1) in T = (w S + conj(w) S^*)/2."""
    a = disk_point(a)
    if terms < 1:
        raise ValueError("terms must be >= 1")
    coef = series_coefficients(a, terms, variant)
    w = np.conj(a) / abs(a) if a != 0 else 1.0
    T = 0.5 * (w * shift_matrix(order) + np.conj(w) * coshift_matrix(order))
    acc = coef[0] * np.eye(order, dtype=complex)
    Tn = np.eye(order, dtype=complex)
    for c in coef[1:]:
        Tn = Tn @ T
        acc = acc + c * Tn
    res = spectral_norm(acc - inv_modulus_oracle(a, order))
    return SeriesResult(acc, res, coef)


@dataclass
class InjectivityRow:
    a: complex
    b: complex
    gram_difference: float
    rho_difference: float
    modulus_difference: float
    bound_with_symbol_norm: float
    bound_with_alt_constant: float


def modulus_injectivity_scan(pairs, order, zero_tol: float = 1e-12) -> list[InjectivityRow]:
    """Compare |C_a| and rho_a across pairs of points.

    The lower bound for ||rho_a - rho_b|| has the form (1/sqrt(2) - r)/||C_a||
    with r = || |C_a| - |C_b| ||; it is reported with both the symbol-range
    norm and the alternative constant sqrt(1-|a|^2)/(1+|a|).  Neither is asserted.
    """
    rows = []
    cache: dict = {}

    def get(p):
        if p not in cache:
            G = gram_cstarc(p, order)
            cache[p] = (G, herm_sqrt(G), rho_matrix(p, order))
        return cache[p]

    for a, b in pairs:
        a, b = _guard(a), _guard(b)
        Ga, Ma, Ra = get(a)
        Gb, Mb, Rb = get(b)
        gdiff = spectral_norm(Ga - Gb)
        if (gdiff <= zero_tol) != (a == b):
            raise IdentityCheckFailure(f"gram difference {gdiff:.3e} for a={a}, b={b}")
        r = spectral_norm(Ma - Mb)
        alt = math.sqrt(1 - abs(a) ** 2) / (1 + abs(a))
        rows.append(InjectivityRow(a, b, gdiff, spectral_norm(Ra - Rb), r,
                                   (1 / math.sqrt(2) - r) / operator_norm(a),
                                   (1 / math.sqrt(2) - r) / alt))
    return rows
