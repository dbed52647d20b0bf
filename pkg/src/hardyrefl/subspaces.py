"""Eigenspaces of C_a, principal angles, intersections and Grassmann geodesics.

N(C_a - 1) is spanned by the even powers of phi_w (w the fixed point of
phi_a) and N(C_a + 1) by the odd powers.  Their orthogonal complements in
H^2 are C_w^* applied to the odd / even functions; since C_w^* z^m equals
k_w (phi_w^m - w phi_w^(m-1)), those complements have explicit generators as
well.  Sections of all four families by k generators are the objects
compared here.

Within a finite space of matched dimensions dim(S & T^perp) always equals
dim(S^perp & T), so complements taken inside C^N cannot detect a failed
geodesic condition.  `perp` therefore uses the generator families above; the
in-truncation `complement` is kept for completeness.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import expm

from .compose import c_matrix
from .errors import GenericPositionViolated, InputError, IntersectionMismatch, OrderMismatch, RankLoss, ZeroPoint
from .hardy import HardyVector, _extended_length, check_order, moebius_powers, multiply_by_kernel, spectral_norm
from .moebius import disk_point, fixed_point

THRESHOLD = 1e-3
COMPLEMENT_THRESHOLD = 2e-3
GAP_FACTOR = 10.0
RANK_COND = 1e12
CORRELATION_MIN = 0.999
ORTHOGONAL_COS = 1e-8
KINDS = ("eigen", "perp", "complement", "span")


@dataclass(frozen=True, eq=False)
class SubspaceBasis:
    columns: np.ndarray
    a: complex | None = None
    parity: str | None = None
    kind: str = "eigen"
    tail_bound: float = 0.0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InputError(f"kind must be one of {KINDS}")
        c = np.array(self.columns, dtype=complex)
        c.setflags(write=False)
        object.__setattr__(self, "columns", c)

    @property
    def order(self) -> int:
        return self.columns.shape[0]

    @property
    def dim(self) -> int:
        return self.columns.shape[1]

    @property
    def complemented(self) -> bool:
        return self.kind in ("perp", "complement")

    def projector(self) -> np.ndarray:
        return self.columns @ self.columns.conj().T

    def label(self) -> str:
        sign = {"even": "-1", "odd": "+1"}.get(self.parity, "?")
        base = f"N(C_{self.a}{sign})" if self.a is not None else "span"
        return base + ("^perp" if self.complemented else "")


def orthonormalize(X) -> tuple[np.ndarray, np.ndarray]:
    """Classical Gram-Schmidt with one full reorthogonalization pass (CGS2).

    Returns Q and upper-triangular R with X = Q R.
    """
    X = np.asarray(X, dtype=complex)
    if X.shape[1] == 0:
        return X.copy(), np.zeros((0, 0), dtype=complex)
    s = np.linalg.svd(X, compute_uv=False)
    if s[-1] == 0 or (s[0] / s[-1]) ** 2 > RANK_COND:
        cond = math.inf if s[-1] == 0 else (s[0] / s[-1]) ** 2
        raise RankLoss(f"Gram matrix condition {cond:.3e} exceeds {RANK_COND:.0e}")
    n, k = X.shape
    Q = np.zeros((n, k), dtype=complex)
    R = np.zeros((k, k), dtype=complex)
    for j in range(k):
        v = X[:, j].copy()
        for _ in range(2):
            h = Q[:, :j].conj().T @ v
            v -= Q[:, :j] @ h
            R[:j, j] += h
        R[j, j] = np.linalg.norm(v)
        Q[:, j] = v / R[j, j]
    return Q, R


def _from_generators(G_ext, order, **tag) -> SubspaceBasis:
    """Orthonormalize the first `order` rows; tail bound from the remaining rows."""
    Q, R = orthonormalize(G_ext[:order])
    tail = spectral_norm(np.linalg.solve(R.T, G_ext[order:].T).T) if G_ext.shape[0] > order else 0.0
    return SubspaceBasis(Q, tail_bound=tail, **tag)


def _check_k(order, k):
    n = check_order(order)
    if not 1 <= k <= n // 4:
        raise InputError(f"k = {k} must lie in [1, N/4] = [1, {n // 4}]")
    return n


def _parity(parity):
    if parity not in ("even", "odd"):
        raise InputError("parity must be 'even' or 'odd'")
    return 0 if parity == "even" else 1


def eigenbasis(a, parity: str, order, k: int) -> SubspaceBasis:
    """Section of N(C_a - 1) (even) or N(C_a + 1) (odd) by k eigenfunctions phi_w^(2n+p)."""
    a = disk_point(a)
    n = _check_k(order, k)
    p = _parity(parity)
    w = fixed_point(a)
    L = _extended_length(n, w, 2 * k)
    G = moebius_powers(w, 2 * k, L)[:, p::2]
    return _from_generators(G, n, a=a, parity=parity, kind="eigen")


def perp_basis(a, parity: str, order, k: int) -> SubspaceBasis:
    """Section of the orthogonal complement of eigenbasis(a, parity) in H^2.

    N(C_a - 1)^perp = C_w^*(odd functions), N(C_a + 1)^perp = C_w^*(even
    functions); the generators are C_w^* z^m = k_w (phi_w^m - w phi_w^(m-1)).
    """
    a = disk_point(a)
    n = _check_k(order, k)
    p = _parity(parity)
    w = fixed_point(a)
    m = 2 * np.arange(k) + (1 - p)  # odd m for the even family, even m for the odd family
    L = _extended_length(n, w, 2 * k + 1)
    P = moebius_powers(w, 2 * k + 1, L)
    G = P[:, m].copy()
    G[:, m > 0] -= w * P[:, m[m > 0] - 1]
    G = multiply_by_kernel(w, G, axis=0)
    return _from_generators(G, n, a=a, parity=parity, kind="perp")


def complement(B: SubspaceBasis) -> SubspaceBasis:
    """Orthonormal basis of the complement of span(B) inside C^N."""
    Q, _ = np.linalg.qr(B.columns, mode="complete")
    return SubspaceBasis(Q[:, B.dim:], a=B.a, parity=B.parity, kind="complement", tail_bound=B.tail_bound)


def perp(B: SubspaceBasis) -> SubspaceBasis:
    """Section of the H^2 complement for eigen bases, the C^N complement otherwise."""
    if B.kind == "eigen" and B.a is not None:
        return perp_basis(B.a, B.parity, B.order, B.dim)
    if B.kind == "perp":
        return eigenbasis(B.a, B.parity, B.order, B.dim)
    return complement(B)


@dataclass(frozen=True, eq=False)
class PrincipalAngleReport:
    cosines: np.ndarray
    intersection_dim: int
    gap: float
    threshold: float
    separated: bool
    left_vectors: np.ndarray = field(repr=False)
    right_vectors: np.ndarray = field(repr=False)

    @property
    def angles(self) -> np.ndarray:
        return _stable_angles(self.left_vectors, self.right_vectors, self.cosines)

    @property
    def next_cosine(self) -> float:
        c = self.cosines
        return float(c[self.intersection_dim]) if self.intersection_dim < c.size else 0.0


def _stable_angles(X, Y, cosines) -> np.ndarray:
    """Principal angles; 2 arcsin(|y - x|/2) keeps full accuracy near 0 where arccos does not."""
    if X.shape[1] == 0:
        return np.zeros(0)
    chord = np.linalg.norm(Y - X, axis=0)
    small = 2.0 * np.arcsin(np.clip(chord / 2.0, 0.0, 1.0))
    return np.where(cosines > 0.5, small, np.arccos(np.clip(cosines, 0.0, 1.0)))


def principal_angles(B1: SubspaceBasis, B2: SubspaceBasis, threshold: float | None = None,
                     gap_factor: float = GAP_FACTOR) -> PrincipalAngleReport:
    """Cosines of the principal angles and the numerical intersection dimension.

    A cosine counts as an intersection direction iff it exceeds 1 - threshold;
    the classification is `separated` when the next cosine stays at least
    gap_factor * threshold away from 1.
    """
    if B1.order != B2.order:
        raise OrderMismatch("bases have different truncation orders")
    if threshold is None:
        threshold = COMPLEMENT_THRESHOLD if (B1.complemented or B2.complemented) else THRESHOLD
    U, s, Vh = np.linalg.svd(B1.columns.conj().T @ B2.columns, full_matrices=False)
    s = np.clip(s, 0.0, 1.0)
    dim = int(np.count_nonzero(s > 1.0 - threshold))
    nxt = float(s[dim]) if dim < s.size else 0.0
    return PrincipalAngleReport(
        cosines=s, intersection_dim=dim, gap=(1.0 - threshold) - nxt, threshold=threshold,
        separated=(1.0 - nxt) >= gap_factor * threshold,
        left_vectors=B1.columns @ U, right_vectors=B2.columns @ Vh.conj().T)


def correlation(x, y) -> float:
    x, y = np.asarray(x, dtype=complex), np.asarray(y, dtype=complex)
    return float(abs(np.vdot(x, y)) / (np.linalg.norm(x) * np.linalg.norm(y)))


def witness_function(a, order) -> HardyVector:
    """Normalized Taylor vector of 1/(w + conj(w) z^2), w the fixed point of phi_a.

    The coefficients (1/w)(-conj(w)/w)^m at z^(2m) have constant modulus, so
    the function is not in H^2 and the tail is reported as infinite.
    """
    a = disk_point(a)
    if a == 0:
        raise ZeroPoint("the witness needs a != 0")
    n = check_order(order)
    w = fixed_point(a)
    c = np.zeros(n, dtype=complex)
    m = np.arange((n + 1) // 2)
    c[2 * m] = (1 / w) * (-np.conj(w) / w) ** m
    return HardyVector(c / np.linalg.norm(c), math.inf)


def c_omega_frame(B: SubspaceBasis, a) -> np.ndarray:
    """Apply C_w (w the fixed point of phi_a) to the columns of B."""
    return c_matrix(fixed_point(a), B.order) @ B.columns


@dataclass
class PairCheck:
    name: str
    statement: str
    expected_dim: int
    report: PrincipalAngleReport
    correlation: float | None = None

    @property
    def dim_ok(self) -> bool:
        return self.report.intersection_dim == self.expected_dim

    @property
    def correlation_ok(self) -> bool:
        return self.correlation is None or self.correlation > CORRELATION_MIN

    @property
    def passed(self) -> bool:
        return self.dim_ok and self.report.separated and self.correlation_ok


@dataclass
class IntersectionSuite:
    a: complex
    b: complex
    order: int
    k: int
    rows: list[PairCheck]

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.rows)

    def failures(self) -> list[PairCheck]:
        return [r for r in self.rows if not r.passed]


def _top_vector(rep: PrincipalAngleReport) -> np.ndarray:
    return rep.left_vectors[:, 0]


def intersection_suite(a, order: int = 256, k: int = 32, b=None, check: bool = False) -> IntersectionSuite:
    """Intersection dimensions asserted by the eigenspace theorems.

    Pairs: N(C_a -/+ 1) against N(C_0 -/+ 1) and against N(C_b -/+ 1) for a
    generic b; the six b = 0 statements involving complements; and the
    witness pair N(C_a - 1) vs N(C_a + 1)^perp.  With check=True an
    IntersectionMismatch lists every failing pair.
    """
    a = disk_point(a)
    if a == 0:
        raise ZeroPoint("the suite needs a != 0")
    if abs(a) > 0.6 + 1e-12:
        raise InputError("the suite is calibrated for |a| <= 0.6")
    if b is None:
        b = 0.3 if abs(a - 0.3) > 0.05 else -0.4
    b = disk_point(b)
    Ea, Oa = eigenbasis(a, "even", order, k), eigenbasis(a, "odd", order, k)
    E0, O0 = eigenbasis(0, "even", order, k), eigenbasis(0, "odd", order, k)
    Eb, Ob = eigenbasis(b, "even", order, k), eigenbasis(b, "odd", order, k)
    one = np.zeros(Ea.order, dtype=complex)
    one[0] = 1.0

    rows = []

    def add(name, statement, S, T, expected, target=None, frame=None):
        rep = principal_angles(S, T)
        corr = None
        if target is not None:
            v = _top_vector(rep) if frame is None else frame(rep)
            corr = correlation(v, target)
        rows.append(PairCheck(name, statement, expected, rep, corr))

    add("E_a & E_0", "N(C_a-1) & N(C_0-1) = C1", Ea, E0, 1, one)
    add("O_a & O_0", "N(C_a+1) & N(C_0+1) = 0", Oa, O0, 0)
    add("E_a & E_b", "N(C_a-1) & N(C_b-1) = C1", Ea, Eb, 1, one)
    add("O_a & O_b", "N(C_a+1) & N(C_b+1) = 0", Oa, Ob, 0)
    add("E_0^perp & E_a", "N(C_0-1)^perp & N(C_a-1) = 0", perp(E0), Ea, 0)
    add("E_0 & E_a^perp", "N(C_0-1) & N(C_a-1)^perp = 0", E0, perp(Ea), 0)
    add("O_0^perp & O_a", "N(C_0+1)^perp & N(C_a+1) = 0", perp(O0), Oa, 0)
    add("O_0 & O_a^perp", "N(C_0+1) & N(C_a+1)^perp = 0", O0, perp(Oa), 0)
    add("E_0^perp & E_a^perp", "N(C_0-1)^perp & N(C_a-1)^perp = 0", perp(E0), perp(Ea), 0)
    add("O_0^perp & O_a^perp", "N(C_0+1)^perp & N(C_a+1)^perp = 0", perp(O0), perp(Oa), 0)
    # the witness lives in the frame where N(C_a - 1) becomes the even functions
    Cw = c_matrix(fixed_point(a), Ea.order)
    add("E_a & O_a^perp", "N(C_a-1) & N(C_a+1)^perp = <C_w 1/(w + conj(w) z^2)>", Ea, perp(Oa), 1,
        witness_function(a, order).coeffs, frame=lambda rep: Cw @ _top_vector(rep))
    suite = IntersectionSuite(a, b, Ea.order, k, rows)
    if check and not suite.passed:
        lines = [f"{r.name}: dim {r.report.intersection_dim} (expected {r.expected_dim}), "
                 f"separated={r.report.separated}, corr={r.correlation}, "
                 f"cosines={np.round(r.report.cosines[:4], 6).tolist()}" for r in suite.failures()]
        raise IntersectionMismatch("; ".join(lines))
    return suite


@dataclass
class GeodesicCondition:
    dim_s_tperp: int
    dim_sperp_t: int
    reports: tuple[PrincipalAngleReport, PrincipalAngleReport]

    @property
    def exists(self) -> bool:
        return self.dim_s_tperp == self.dim_sperp_t

    @property
    def unique(self) -> bool:
        return self.dim_s_tperp == 0 and self.dim_sperp_t == 0

    @property
    def dims(self) -> tuple[int, int]:
        return self.dim_s_tperp, self.dim_sperp_t

    def __bool__(self):
        return self.exists


def geodesic_condition(B1: SubspaceBasis, B2: SubspaceBasis, perp1: SubspaceBasis | None = None,
                       perp2: SubspaceBasis | None = None) -> GeodesicCondition:
    """dim(S & T^perp) versus dim(S^perp & T), using `perp` unless complements are supplied."""
    perp1 = perp(B1) if perp1 is None else perp1
    perp2 = perp(B2) if perp2 is None else perp2
    r1 = principal_angles(B1, perp2)
    r2 = principal_angles(perp1, B2)
    return GeodesicCondition(r1.intersection_dim, r2.intersection_dim, (r1, r2))


@dataclass(frozen=True, eq=False)
class GeodesicResult:
    Z: np.ndarray = field(repr=False)
    norm: float
    residual: float
    codiagonal_defects: tuple[float, float]
    angles: np.ndarray
    source: SubspaceBasis = field(repr=False)
    target: SubspaceBasis = field(repr=False)
    planes: tuple = field(repr=False, default=())

    def exp(self, t: float = 1.0) -> np.ndarray:
        """e^{tZ} from the plane rotations (no matrix exponential needed)."""
        X, W, th = self.planes
        n = self.Z.shape[0]
        c, s = np.cos(t * th) - 1.0, np.sin(t * th)
        return (np.eye(n) + (X * c) @ X.conj().T + (W * c) @ W.conj().T
                + (W * s) @ X.conj().T - (X * s) @ W.conj().T)

    def path(self, t: float) -> SubspaceBasis:
        Q, _ = np.linalg.qr(self.exp(t) @ self.source.columns)
        return SubspaceBasis(Q, kind="span")


def direct_rotation(B1: SubspaceBasis, B2: SubspaceBasis, condition: GeodesicCondition | None = None) -> GeodesicResult:
    """Minimal skew-hermitian Z with e^Z span(B1) = span(B2), by principal-vector plane rotations."""
    if B1.order != B2.order or B1.dim != B2.dim:
        raise OrderMismatch("bases must share order and dimension")
    if condition is not None and not condition.unique:
        raise GenericPositionViolated(f"geodesic uniqueness fails: dims {condition.dims}")
    U, s, Vh = np.linalg.svd(B1.columns.conj().T @ B2.columns)
    s = np.clip(s, 0.0, 1.0)
    # a vanishing cosine means span(B2) meets the complement of span(B1): no unique plane
    if s.size and s[-1] < ORTHOGONAL_COS:
        raise GenericPositionViolated(f"smallest principal cosine {s[-1]:.3e}: not in generic position")
    X = B1.columns @ U
    Y = B2.columns @ Vh.conj().T
    theta = _stable_angles(X[:, :s.size], Y[:, :s.size], s)
    sin = np.sin(theta)
    rot = sin > 1e-14
    W = np.zeros_like(X)
    W[:, rot] = (Y[:, rot] - X[:, rot] * s[rot]) / sin[rot]
    # orthonormality of the W columns holds in exact arithmetic; re-orthogonalize against X to rounding
    W[:, rot] -= X @ (X.conj().T @ W[:, rot])
    W[:, rot] /= np.linalg.norm(W[:, rot], axis=0)
    Z = (W * theta) @ X.conj().T - (X * theta) @ W.conj().T
    n = B1.order
    E = expm(Z)
    P2 = B2.projector()
    residual = spectral_norm((np.eye(n) - P2) @ E @ B1.columns)
    P1 = B1.projector()
    defects = (spectral_norm(P1 @ Z @ P1), spectral_norm(P2 @ Z @ P2))
    return GeodesicResult(Z, spectral_norm(Z), residual, defects, theta, B1, B2, (X, W, theta))


def midpoint_defect(g: GeodesicResult) -> float:
    """max |angles(mid, B1) - angles(mid, B2)| for the half-way subspace."""
    mid = g.path(0.5)
    a1 = principal_angles(mid, g.source).angles
    a2 = principal_angles(mid, g.target).angles
    return float(np.max(np.abs(np.sort(a1) - np.sort(a2)))) if a1.size else 0.0
