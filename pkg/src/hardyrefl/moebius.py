"""Disk automorphisms phi_a(z) = (a - z)/(1 - conj(a) z) and derived point maps.

Maps are stored projectively as 2x2 complex matrices, so composition is a
plain matrix product and nothing here depends on a truncation order.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import reduce

import numpy as np

from .errors import InvalidDiskPoint, PoleAtPoint, ZeroBase

TOL_POINT = 1e-12
TOL_MAP = 1e-10
# points this close to the unit circle are rejected
DISK_MARGIN = 1e-12
_POLE_TOL = 1e-14
_NONZERO = 1e-300


def disk_point(z) -> complex:
    """Validate and return z as a complex number strictly inside the disk."""
    try:
        w = complex(z)
    except (TypeError, ValueError) as exc:
        raise InvalidDiskPoint(f"not a complex number: {z!r}") from exc
    if not (math.isfinite(w.real) and math.isfinite(w.imag)):
        raise InvalidDiskPoint(f"non-finite point {z!r}")
    if abs(w) >= 1.0 - DISK_MARGIN:
        raise InvalidDiskPoint(f"|{w}| = {abs(w)} is not inside the unit disk")
    return w


def _normalize(m: np.ndarray) -> np.ndarray:
    m = np.asarray(m, dtype=complex).reshape(2, 2)
    nrm = np.linalg.norm(m)
    if not np.isfinite(nrm) or nrm == 0.0:
        raise ValueError("degenerate Moebius coefficient matrix")
    m = m / nrm
    idx = np.unravel_index(np.flatnonzero(np.abs(m.ravel()) > _NONZERO)[0], (2, 2))
    lead = m[idx]
    m = m * (abs(lead) / lead)
    m[idx] = abs(lead)  # exactly real, not just to rounding
    return m


@dataclass(frozen=True, eq=False)
class MoebiusMap:
    """z -> (alpha z + beta)/(gamma z + delta), up to a nonzero scalar.

    The stored matrix is normalized to unit Frobenius norm with its first
    nonzero entry (row-major) positive real.
    """

    coeffs: np.ndarray

    def __post_init__(self):
        m = _normalize(self.coeffs)
        if abs(np.linalg.det(m)) <= 1e-12:
            raise ValueError("Moebius matrix is singular after normalization")
        m.setflags(write=False)
        object.__setattr__(self, "coeffs", m)

    @classmethod
    def identity(cls) -> "MoebiusMap":
        return cls(np.eye(2))

    def __call__(self, z):
        return evaluate(self, z)

    def __matmul__(self, other: "MoebiusMap") -> "MoebiusMap":
        return compose(self, other)

    def __repr__(self):
        (al, be), (ga, de) = self.coeffs
        return f"MoebiusMap([[{al:.6g}, {be:.6g}], [{ga:.6g}, {de:.6g}]])"


def phi(a) -> MoebiusMap:
    """The involutive automorphism exchanging 0 and a."""
    a = disk_point(a)
    return MoebiusMap(np.array([[-1.0, a], [-np.conj(a), 1.0]], dtype=complex))


def evaluate(m: MoebiusMap, z):
    """Apply m to a scalar or array of points."""
    (al, be), (ga, de) = m.coeffs
    z = np.asarray(z, dtype=complex)
    den = ga * z + de
    scale = max(abs(ga), abs(de))
    if np.any(np.abs(den) <= _POLE_TOL * scale):
        raise PoleAtPoint("denominator vanishes at the evaluation point")
    out = (al * z + be) / den
    return complex(out) if out.ndim == 0 else out


def compose(*maps: MoebiusMap) -> MoebiusMap:
    """compose(m1, m2, ...) is m1 o m2 o ..."""
    if not maps:
        return MoebiusMap.identity()
    return MoebiusMap(reduce(np.matmul, [m.coeffs for m in maps]))


def projective_distance(m1: MoebiusMap, m2: MoebiusMap) -> float:
    """min over unimodular c of ||A - c B||_F for the normalized matrices."""
    A, B = m1.coeffs, m2.coeffs
    s = np.vdot(B, A)  # sum conj(B) * A
    c = s / abs(s) if abs(s) > 0 else 1.0
    return float(np.linalg.norm(A - c * B))


def equal_projective(m1: MoebiusMap, m2: MoebiusMap, tol: float = TOL_MAP) -> bool:
    if tol <= 0:
        raise ValueError("tol must be positive")
    return projective_distance(m1, m2) <= tol


def fixed_point(a) -> complex:
    """Interior fixed point omega_a of phi_a.

    Written as a/(1 + sqrt(1 - |a|^2)), which equals (1 - sqrt(1-|a|^2))/conj(a)
    but has no cancellation for small |a| and gives omega_0 = 0 directly.
    """
    a = disk_point(a)
    if a == 0:
        return 0j
    return a / (1.0 + math.sqrt(1.0 - abs(a) ** 2))


def bullet(d, b) -> complex:
    """d . b, the point with phi_d o phi_b o phi_d = phi_{d . b}."""
    d, b = disk_point(d), disk_point(b)
    num = 2 * d - b - b.conjugate() * d * d
    den = 1 + abs(d) ** 2 - b.conjugate() * d - b * d.conjugate()
    if abs(den) <= _POLE_TOL:
        raise PoleAtPoint("bullet denominator vanishes")
    return num / den


def a_seq(a, n: int) -> complex:
    """a_n, with (phi_a o phi_0)^n o phi_a = phi_{a_n}."""
    a = disk_point(a)
    if a == 0:
        raise ZeroBase("a_seq is undefined for a = 0")
    if n < 0:
        raise ValueError("n must be nonnegative")
    r = abs(a)
    q = ((1.0 - r) / (1.0 + r)) ** (n + 1)
    return (a / r) * ((1.0 - q) / (1.0 + q))


def omega_inverse(a) -> complex:
    """The point b with fixed_point(b) = a, namely 2a/(1 + |a|^2)."""
    a = disk_point(a)
    return 2 * a / (1 + abs(a) ** 2)


def a_seq_by_composition(a, n: int) -> MoebiusMap:
    """(phi_a o phi_0)^n o phi_a built from matrix products (oracle for a_seq)."""
    step = compose(phi(a), phi(0))
    return compose(*([step] * n), phi(a))


def point_from_map(m: MoebiusMap) -> complex:
    """Recover b from a map known to equal phi_b projectively (b = m(0))."""
    return evaluate(m, 0.0)


def polar_point(r: float, deg: float) -> complex:
    return disk_point(cmath.rect(r, math.radians(deg)))
