"""Spectral measure of the Toeplitz operator with symbol omega = |1 - conj(a) e^{it}|^-2.

For lam in the support [1/(1+|a|)^2, 1/(1-|a|)^2] the super-level set
{omega >= lam} is the arc |theta - arg a| <= gamma(lam), and the spectral
measure of the pair (k_u, k_v) is

    <E(L) k_u, k_v> = int_L Phi(conj u; lam) conj(Phi(conj v; lam)) dm(lam),
    dm = sin(gamma)/pi dlam,
    Phi(u; lam) = Psi(u; lam) (1 - u e^{i alpha})^-1/2 (1 - u e^{i beta})^-1/2,
    Psi(u; lam) = exp(-int log|omega - lam| P(u, theta) dtheta),

with P the Herglotz kernel (1/4pi)(1 + u e^{it})/(1 - u e^{it}).  Psi is
computed by quadrature; the logarithm has two integrable singularities where
omega crosses lam.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .compose import c_matrix, kernel_image
from .errors import InputError, QuadratureFailure, ZeroPoint
from .hardy import inner, symbol_ka2, szego, toeplitz_matrix
from .moebius import disk_point
from .polar import herm_eig, rho_matrix

ARC_VARIANTS = ("exact", "unsquared")
SPLITTINGS = ("sqrt", "none")


@dataclass(frozen=True)
class SpectralProfile:
    """Arc data of the symbol omega for a fixed a != 0.

    arc="exact" uses cos gamma = (1 + |a|^2 - 1/lam)/(2|a|), read off
    |1 - conj(a) e^{it}|^2 = 1 + |a|^2 - 2|a| cos(t - arg a).  arc="unsquared"
    uses cos gamma = (1 + (1 - 1/lam)/|a|)/2 (clipped to [-1, 1]); it does not
    reach -1 at the lower endpoint and exists to be rejected by the mass check.
    """

    a: complex
    arc: str = "exact"

    def __post_init__(self):
        a = disk_point(self.a)
        if a == 0:
            raise ZeroPoint("the spectral profile needs a != 0; C_0 is handled without integrals")
        if self.arc not in ARC_VARIANTS:
            raise InputError(f"arc must be one of {ARC_VARIANTS}")
        object.__setattr__(self, "a", a)

    @property
    def r(self) -> float:
        return abs(self.a)

    @property
    def theta_a(self) -> float:
        return math.atan2(self.a.imag, self.a.real)

    @property
    def lambda_min(self) -> float:
        return 1.0 / (1.0 + self.r) ** 2

    @property
    def lambda_max(self) -> float:
        return 1.0 / (1.0 - self.r) ** 2

    @property
    def midpoint(self) -> float:
        return 0.5 * (self.lambda_min + self.lambda_max)

    @property
    def half_length(self) -> float:
        return 0.5 * (self.lambda_max - self.lambda_min)

    def symbol(self, theta):
        return 1.0 / (1.0 + self.r ** 2 - 2 * self.r * np.cos(np.asarray(theta) - self.theta_a))

    def level_cos(self, lam):
        """cos of the half-width of {omega >= lam}, from the symbol itself."""
        r = self.r
        return np.clip((1.0 + r * r - 1.0 / np.asarray(lam, dtype=float)) / (2 * r), -1.0, 1.0)

    def arc_cos(self, lam):
        if self.arc == "exact":
            return self.level_cos(lam)
        lam = np.asarray(lam, dtype=float)
        return np.clip(0.5 * (1.0 + (1.0 - 1.0 / lam) / self.r), -1.0, 1.0)

    def half_width(self, lam):
        return np.arccos(self.arc_cos(lam))

    def alpha(self, lam):
        return self.theta_a - self.half_width(lam)

    def beta(self, lam):
        return self.theta_a + self.half_width(lam)

    def density(self, lam):
        """dm/dlam = sin(gamma)/pi inside the support, 0 outside."""
        lam = np.asarray(lam, dtype=float)
        inside = (lam >= self.lambda_min) & (lam <= self.lambda_max)
        return np.where(inside, np.sin(self.half_width(lam)) / np.pi, 0.0)


@dataclass(frozen=True)
class QuadratureBudget:
    theta_points: int = 2048
    lambda_points: int = 256
    splitting: str = "sqrt"
    tol: float = 1e-6

    def __post_init__(self):
        if self.theta_points < 128 or self.theta_points % 8:
            raise InputError("theta_points must be a multiple of 8 and at least 128")
        if self.lambda_points < 64:
            raise InputError("lambda_points must be at least 64")
        if self.splitting not in SPLITTINGS:
            raise InputError(f"splitting must be one of {SPLITTINGS}")
        if not self.tol > 0:
            raise InputError("tol must be positive")


@lru_cache(maxsize=64)
def _gauss01(n: int):
    x, w = np.polynomial.legendre.leggauss(n)
    return 0.5 * (x + 1.0), 0.5 * w


def _panel_nodes(gamma, theta_a, n, splitting):
    """Nodes, weights and signed distances d+ = phi + gamma, d- = phi - gamma.

    The circle is cut at the two crossings theta_a -/+ gamma and at the arc
    midpoints, giving four panels with one singular end each.  With
    splitting="sqrt" the substitution theta = end + h t^2 clusters nodes at
    the singular end.  Shapes: (len(gamma), 4n).
    """
    t, w = _gauss01(n)
    g = np.asarray(gamma, dtype=float)[:, None]
    if splitting == "sqrt":
        s, ds = t * t, 2 * t * w
    else:
        s, ds = t, w
    h1 = g * np.ones_like(s)          # panels touching the arc [-gamma, gamma]
    h2 = (np.pi - g) * np.ones_like(s)  # panels in the complementary arc
    x1, x2 = h1 * s, h2 * s
    # phi = theta - theta_a on each panel, written through the distance x to its singular end
    d_plus = np.concatenate([x1, 2 * g - x1, 2 * g + x2, 2 * np.pi - x2], axis=1)
    d_minus = np.concatenate([x1 - 2 * g, -x1, x2, 2 * np.pi - 2 * g - x2], axis=1)
    phi = d_plus - g
    wts = np.concatenate([h1 * ds, h1 * ds, h2 * ds, h2 * ds], axis=1)
    return phi + theta_a, phi, d_plus, d_minus, wts


def _log_integral(u, lam, prof: SpectralProfile, n: int, splitting: str):
    lam = np.atleast_1d(np.asarray(lam, dtype=float))
    gamma = np.arccos(prof.level_cos(lam))
    theta, phi, dp, dm, wts = _panel_nodes(gamma, prof.theta_a, n, splitting)
    r = prof.r
    with np.errstate(divide="ignore"):
        log_abs = (np.log(4 * r * lam)[:, None]
                   + np.log(np.abs(np.sin(0.5 * dp))) + np.log(np.abs(np.sin(0.5 * dm)))
                   - np.log(1 + r * r - 2 * r * np.cos(phi)))
    # a node landing exactly on a crossing carries zero weight under the substitution
    log_abs = np.where(np.isfinite(log_abs), log_abs, 0.0)
    e = np.exp(1j * theta)
    herglotz = (1 + u * e) / (1 - u * e) / (4 * np.pi)
    return np.sum(wts * log_abs * herglotz, axis=1)


def _in_support(lam, prof):
    lam = np.asarray(lam, dtype=float)
    eps = 1e-14 * prof.lambda_max
    if np.any(lam < prof.lambda_min - eps) or np.any(lam > prof.lambda_max + eps):
        raise InputError("lambda outside the spectral support")
    return np.clip(lam, prof.lambda_min, prof.lambda_max)


def psi_values(u, lam, prof: SpectralProfile, budget: QuadratureBudget):
    """Vectorized Psi(u; lam) and its two-level error estimate."""
    u = disk_point(u)
    lam = _in_support(lam, prof)
    n = budget.theta_points // 4
    fine = np.exp(-_log_integral(u, lam, prof, n, budget.splitting))
    coarse = np.exp(-_log_integral(u, lam, prof, n // 2, budget.splitting))
    err = np.abs(fine - coarse)
    if np.any(err > budget.tol * np.maximum(1.0, np.abs(fine))):
        raise QuadratureFailure(f"Psi refinement disagreement {np.max(err):.3e} > {budget.tol}")
    return fine, err


def psi(u, lam, prof: SpectralProfile, budget: QuadratureBudget | None = None):
    """Psi(u; lam) and an error estimate, for scalar lam."""
    budget = budget or QuadratureBudget()
    val, err = psi_values(u, [lam], prof, budget)
    return complex(val[0]), float(err[0])


def phi_values(u, lam, prof: SpectralProfile, budget: QuadratureBudget):
    """Vectorized Phi(u; lam).

    Re(1 - u e^{i alpha}) > 0 for |u| < 1, so the principal square root is
    continuous in lam and agrees with the principal branch at the midpoint.
    """
    u = disk_point(u)
    lam = _in_support(lam, prof)
    p, err = psi_values(u, lam, prof, budget)
    fac = 1.0 / (np.sqrt(1 - u * np.exp(1j * prof.alpha(lam))) * np.sqrt(1 - u * np.exp(1j * prof.beta(lam))))
    return p * fac, err * np.abs(fac)


def phi_fn(u, lam, prof: SpectralProfile, budget: QuadratureBudget | None = None):
    budget = budget or QuadratureBudget()
    val, err = phi_values(u, [lam], prof, budget)
    return complex(val[0]), float(err[0])


@lru_cache(maxsize=16)
def lambda_grid(prof: SpectralProfile, budget: QuadratureBudget):
    """Outer nodes lam = mid + hw cos t with weights for dm(lam)."""
    t, w = _gauss01(budget.lambda_points)
    t, w = np.pi * t, np.pi * w
    lam = prof.midpoint + prof.half_length * np.cos(t)
    dm = w * prof.half_length * np.sin(t) * prof.density(lam)
    return lam, dm


@lru_cache(maxsize=256)
def _phi_on_grid(u: complex, prof: SpectralProfile, budget: QuadratureBudget):
    lam, _ = lambda_grid(prof, budget)
    return phi_values(u, lam, prof, budget)


def spectral_form(f, u, v, prof: SpectralProfile, budget: QuadratureBudget | None = None) -> complex:
    """int f(lam) Phi(conj u; lam) conj(Phi(conj v; lam)) dm(lam)."""
    budget = budget or QuadratureBudget()
    u, v = disk_point(u), disk_point(v)
    lam, dm = lambda_grid(prof, budget)
    pu, _ = _phi_on_grid(u.conjugate(), prof, budget)
    pv, _ = _phi_on_grid(v.conjugate(), prof, budget)
    fl = np.broadcast_to(np.asarray(f(lam), dtype=complex), lam.shape)
    return complex(np.sum(fl * pu * np.conj(pv) * dm))


def rho_element(u, v, a, prof: SpectralProfile | None = None, budget: QuadratureBudget | None = None) -> complex:
    """<rho_a k_u, k_v> from the spectral integrals.

    rho_a = |C_a| C_a with |C_a| = sqrt(1-|a|^2) T_omega^(1/2), and
    C_a k_u = A k_w + B k_0 (see compose.kernel_image), so
    <rho_a k_u, k_v> = sqrt(1-|a|^2) (A <T^(1/2) k_w, k_v> + B <T^(1/2) k_0, k_v>).
    """
    a = disk_point(a)
    if a == 0:
        raise ZeroPoint("rho_0 = C_0 needs no spectral integral")
    prof = prof or SpectralProfile(a)
    if prof.a != a:
        raise InputError("profile was built for a different point")
    A, w, B = kernel_image(a, u)
    root = np.sqrt
    val = B * spectral_form(root, 0.0, v, prof, budget)
    if A != 0:
        val += A * spectral_form(root, w, v, prof, budget)
    return math.sqrt(1 - abs(a) ** 2) * val


# matrix routes used as oracles


def functional_calculus_element(f, u, v, a, order) -> complex:
    """<f(T_omega) k_u, k_v> from the eigendecomposition of the Toeplitz section."""
    T = toeplitz_matrix(symbol_ka2(a, order))
    lam, V = herm_eig(T)
    ku, kv = szego(u, order).coeffs, szego(v, order).coeffs
    return complex(np.vdot(V.conj().T @ kv, f(lam) * (V.conj().T @ ku)))


def rho_element_matrix(u, v, a, order) -> complex:
    """<rho_a k_u, k_v> with rho_a from the polar factor of the compression."""
    R = rho_matrix(a, order) if a != 0 else c_matrix(a, order)
    return inner(R @ szego(u, order).coeffs, szego(v, order))


def density_from_grid(prof: SpectralProfile, lam: float, points: int = 1 << 16) -> float:
    """sin(gamma)/pi with gamma measured as pi * fraction of {omega >= lam} on a grid."""
    theta = 2 * np.pi * np.arange(points) / points
    frac = np.count_nonzero(prof.symbol(theta) >= lam) / points
    return math.sin(math.pi * frac) / math.pi


def density_dump(prof: SpectralProfile, budget: QuadratureBudget | None = None, rows: int = 65):
    """Rows (lam, density, |Phi(0; lam)|^2) on an ascending grid including both endpoints."""
    budget = budget or QuadratureBudget()
    t = np.linspace(np.pi, 0.0, rows)
    lam = prof.midpoint + prof.half_length * np.cos(t)
    lam[0], lam[-1] = prof.lambda_min, prof.lambda_max
    dens = prof.density(lam)
    dens[0] = dens[-1] = 0.0
    p, _ = phi_values(0.0, lam, prof, budget)
    return np.column_stack([lam, dens, np.abs(p) ** 2])
