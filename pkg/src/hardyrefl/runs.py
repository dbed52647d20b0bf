"""Check suites behind the CLI subcommands.

Every function yields ResultRecord objects, one per assertion or dump, in a
deterministic order.
"""
from __future__ import annotations

import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from . import compose as co
from . import hardy as hd
from . import moebius as mb
from . import polar as po
from . import spectral as sp
from . import subspaces as ss
from .errors import IdentityCheckFailure, InputError, ZeroPoint

DEFAULT_TOLERANCES = {
    "point": 1e-12,
    "map": 1e-10,
    "operator": 1e-8,
    "toeplitz": 1e-7,
    "polar": 1e-7,
    "symmetry_fix": 1e-6,
    "series": 1e-6,
    "spectrum": 1e-9,
    "berkson_slack": 1e-9,
    "mass": 1e-3,
    "moment": 1e-3,
    "rho_element": 5e-3,
    "geodesic_residual": 1e-6,
    "codiagonal": 1e-8,
}
MIN_BLOCK = 4
# identities on polynomials are checked up to this degree
TEST_DEGREE = 64
SPECTRAL_POINTS = (0j, 0.2 + 0j, 0.4j)
CHECKPOINTS = (0.0, 0.25, 0.5, 0.75, 1.0)


@dataclass
class RunConfig:
    a: list = field(default_factory=lambda: [0.3, 0.5, 0.6, 0.4j, 0.3 - 0.2j])
    b: complex = 0.3
    order: int = 256
    k: int | None = None
    theta_points: int = 2048
    lambda_points: int = 256
    tol: dict = field(default_factory=dict)
    seed: int = 0
    grid_radii: list | None = None
    grid_phases: list | None = None
    workers: int = 1
    dump_rows: int = 65

    def __post_init__(self):
        self.a = [mb.disk_point(x) for x in (self.a if isinstance(self.a, (list, tuple)) else [self.a])]
        self.b = mb.disk_point(self.b)
        self.order = hd.check_order(self.order)
        for p in self.a + [self.b] + self.grid_points():
            if abs(p) > 0.8 + 1e-12:
                raise InputError(f"point {p} exceeds |a| <= 0.8")
        unknown = set(self.tol) - set(DEFAULT_TOLERANCES)
        if unknown:
            raise InputError(f"unknown tolerance names: {sorted(unknown)}")
        for name, val in self.tol.items():
            if not float(val) >= 100 * np.finfo(float).eps:
                raise InputError(f"tolerance {name}={val} below 100 x machine epsilon")
        if self.k is not None and not 1 <= self.k <= self.order // 4:
            raise InputError("k must lie in [1, order/4]")
        if self.workers < 1:
            raise InputError("workers must be >= 1")
        self.budget = sp.QuadratureBudget(self.theta_points, self.lambda_points)

    def tolerance(self, name: str) -> float:
        return float(self.tol.get(name, DEFAULT_TOLERANCES[name]))

    @property
    def basis_size(self) -> int:
        return self.k if self.k is not None else min(self.order // 8, 32)

    def grid_points(self) -> list:
        if not self.grid_radii:
            return []
        phases = self.grid_phases or [0.0]
        return [mb.polar_point(r, d) for r in self.grid_radii for d in phases]


@dataclass
class ResultRecord:
    command: str
    check: str
    inputs: dict
    outputs: dict
    passed: bool | None
    tolerance: float | None = None
    tail_bound: float | None = None
    note: str | None = None
    wall_time: float = 0.0

    def as_dict(self) -> dict:
        d = {"command": self.command, "check": self.check, "inputs": self.inputs,
             "outputs": self.outputs, "passed": self.passed, "wall_time": self.wall_time}
        for key in ("tolerance", "tail_bound", "note"):
            if getattr(self, key) is not None:
                d[key] = getattr(self, key)
        return d


def _record(command, check, inputs, outputs, value, tol, t0, **kw) -> ResultRecord:
    passed = bool(value <= tol) if value is not None else kw.pop("passed", None)
    outputs = dict(outputs)
    if value is not None:
        outputs.setdefault("value", value)
    return ResultRecord(command, check, inputs, outputs, passed, tol,
                        wall_time=time.perf_counter() - t0, **kw)


# -- caches shared across checks (arrays are read-only)

def _ro(x):
    x.setflags(write=False)
    return x


@lru_cache(maxsize=32)
def _c(a, n):
    return _ro(co.c_matrix(a, n))


@lru_cache(maxsize=32)
def _rho(a, n):
    return _ro(po.rho_matrix(a, n))


@lru_cache(maxsize=32)
def _gram(a, n):
    return _ro(co.gram_cstarc(a, n))


def _block_tail(a, n, width) -> float:
    """Largest norm of the Taylor mass beyond degree N among the first `width` columns of C_a."""
    if width == 0:
        return 0.0
    C, far = co.tall_c_matrix(a, n)
    return float(np.max(np.linalg.norm(C[n:, :width], axis=0))) + far


# -- verify

def _random_points(rng, count, rmax=0.95):
    r = rmax * np.sqrt(rng.uniform(0, 1, count))
    t = rng.uniform(0, 2 * np.pi, count)
    return [complex(x) for x in r * np.exp(1j * t)]


def moebius_checks(cfg: RunConfig, command="verify"):
    rng = np.random.default_rng(cfg.seed)
    tp, tm = cfg.tolerance("point"), cfg.tolerance("map")
    pts = _random_points(rng, 100)
    pairs = list(zip(pts, _random_points(rng, 100)))
    ident = mb.MoebiusMap.identity()

    t0 = time.perf_counter()
    val = max(mb.projective_distance(mb.compose(mb.phi(a), mb.phi(a)), ident) for a in pts)
    yield _record(command, "moebius.involution", {"samples": 100, "seed": cfg.seed}, {}, val, tm, t0)

    t0 = time.perf_counter()
    val = max(abs(mb.evaluate(mb.phi(a), mb.fixed_point(a)) - mb.fixed_point(a)) for a in pts)
    yield _record(command, "moebius.fixed_point", {"samples": 100}, {}, val, tp, t0)

    t0 = time.perf_counter()
    val = max(mb.projective_distance(mb.compose(mb.phi(mb.fixed_point(a)), mb.phi(a)),
                                     mb.compose(mb.MoebiusMap(np.diag([-1.0, 1.0])), mb.phi(mb.fixed_point(a))))
              for a in pts)
    yield _record(command, "moebius.fixed_point_composition", {"samples": 100}, {}, val, tm, t0)

    t0 = time.perf_counter()
    val = max(abs(mb.evaluate(mb.phi(mb.fixed_point(a)), a) + mb.fixed_point(a)) for a in pts)
    yield _record(command, "moebius.fixed_point_image", {"samples": 100}, {}, val, tp, t0)

    t0 = time.perf_counter()
    val = max(mb.projective_distance(mb.compose(mb.phi(d), mb.phi(b), mb.phi(d)), mb.phi(mb.bullet(d, b)))
              for d, b in pairs)
    yield _record(command, "moebius.conjugation_law", {"samples": 100}, {}, val, tm, t0)

    t0 = time.perf_counter()
    seq_pts = [p * 0.6 / 0.95 for p in pts[:20] if p != 0]
    val = max(mb.projective_distance(mb.a_seq_by_composition(a, n), mb.phi(mb.a_seq(a, n)))
              for a in seq_pts for n in range(13))
    yield _record(command, "moebius.a_sequence_law", {"samples": len(seq_pts), "n_max": 12}, {}, val, tm, t0)

    t0 = time.perf_counter()
    mono = all(abs(mb.a_seq(a, n)) < abs(mb.a_seq(a, n + 1)) < 1 for a in seq_pts for n in range(12))
    phase = max(abs(mb.a_seq(a, n) / abs(mb.a_seq(a, n)) - a / abs(a)) for a in seq_pts for n in range(13))
    yield _record(command, "moebius.a_sequence_monotone", {}, {"strictly_increasing": mono, "phase_drift": phase},
                  None, None, t0, passed=bool(mono and phase <= tp))

    t0 = time.perf_counter()
    val = 0.0
    for a in seq_pts:
        x = a
        for n in range(1, 5):
            x = mb.omega_inverse(x)
            val = max(val, abs(x - mb.a_seq(a, 2 ** n - 1)))
        val = max(val, abs(mb.fixed_point(mb.omega_inverse(a)) - a))
    yield _record(command, "moebius.omega_iteration", {"n_max": 4}, {}, val, tp, t0)


def operator_checks(cfg: RunConfig, a, command="verify"):
    n = cfg.order
    w = co.reliable_width(n, a)
    half = n // 2
    tol_op, tol_tp = cfg.tolerance("operator"), cfg.tolerance("toeplitz")
    tail = _block_tail(a, n, w)
    inp = {"a": a, "order": n, "block": w}
    C = _c(a, n)
    eye = np.eye(n)

    def block_check(name, fn, tol, width=w, itail=tail, columns=False):
        t0 = time.perf_counter()
        key = "degrees" if columns else "block"
        if width < MIN_BLOCK:
            return ResultRecord(command, name, dict(inp, **{key: width}), {}, False, tol,
                                _block_tail(a, n, MIN_BLOCK),
                                note=f"order too small: reliable width {width} < {MIN_BLOCK}",
                                wall_time=time.perf_counter() - t0)
        M = fn()
        val = hd.spectral_norm(M[:, :width] if columns else M[:width, :width])
        return _record(command, name, dict(inp, **{key: width}), {}, val, tol, t0, tail_bound=itail)

    deg = co.reliable_degree(n, a)
    deg_tail = _block_tail(a, n, deg)
    yield block_check("operator.reflection", lambda: C @ C - eye, tol_op, deg, deg_tail, True)
    W = co.w_matrix(a, n)
    yield block_check("operator.w_reflection", lambda: W @ W - eye, tol_op, deg, deg_tail, True)
    yield block_check("operator.w_shift_w", lambda: W @ hd.shift_matrix(n) @ W - co.mult_phi_matrix(a, n), tol_op)
    yield block_check("operator.cowen_adjoint", lambda: co.adjoint_cowen(a, n) - C.conj().T, tol_op,
                      width=half, itail=_block_tail(a, n, half))
    yield block_check("operator.toeplitz_identity", lambda: C.conj().T @ C - _gram(a, n), tol_tp)
    yield block_check("operator.ccstar_closed_form", lambda: C @ C.conj().T - co.gram_ccstar(a, n), tol_tp)

    # same identities through the compressed operators, on the full test domain
    _, tall_tail = co.tall_c_matrix(a, n)
    vt = co.operator_norm(a) * tall_tail
    low = min(n, TEST_DEGREE + 1)
    for name, fn, width, tol, cols in (
            ("operator.reflection_tall", lambda: co.operator_square(a, n) - eye, low, tol_op, True),
            ("operator.w_reflection_tall", lambda: co.operator_square(a, n, "w") - eye, low, tol_op, True),
            ("operator.w_shift_w_tall", lambda: co.operator_w_shift_w(a, n) - co.mult_phi_matrix(a, n), n,
             tol_op, False),
            ("operator.toeplitz_identity_tall", lambda: co.gram_dense(a, n) - _gram(a, n), half, tol_tp, False),
            ("operator.ccstar_closed_form_tall", lambda: co.gram_ccstar_dense(a, n) - co.gram_ccstar(a, n), half,
             tol_tp, False)):
        t0 = time.perf_counter()
        M = fn()
        val = hd.spectral_norm(M[:, :width] if cols else M[:width, :width])
        key = "degrees" if cols else "block"
        yield _record(command, name, dict(inp, **{key: width, "route": "tall"}), {}, val, tol, t0, tail_bound=vt)

    ka = hd.szego(a, n)
    e0 = np.zeros(n, dtype=complex)
    e0[0] = 1.0
    t0 = time.perf_counter()
    val = float(np.linalg.norm(co.gram_ccstar(a, n) @ ka.coeffs - e0))
    bound = math.sqrt(co.operator_norm(a)) * ka.tail
    yield _record(command, "operator.ccstar_kernel", inp, {}, val, tol_op + bound, t0, tail_bound=ka.tail)
    t0 = time.perf_counter()
    val = float(np.linalg.norm(co.adjoint_cowen(a, n) @ (C @ e0) - ka.coeffs))
    yield _record(command, "operator.cstarc_constant", inp, {}, val, tol_op + ka.tail, t0, tail_bound=ka.tail)

    t0 = time.perf_counter()
    lam = np.linalg.eigvalsh(_gram(a, n))
    r = abs(a)
    lo, hi = (1 - r) / (1 + r), (1 + r) / (1 - r)
    val = max(0.0, lo - lam[0], lam[-1] - hi)
    yield _record(command, "operator.gram_spectrum", inp, {"min": lam[0], "max": lam[-1], "range": [lo, hi]},
                  val, cfg.tolerance("spectrum"), t0)

    t0 = time.perf_counter()
    if a != cfg.b:
        g = co.berkson_gap(a, cfg.b, n)
        yield _record(command, "operator.berkson", dict(inp, b=cfg.b), {"gap": g},
                      max(0.0, 1 / math.sqrt(2) - g), cfg.tolerance("berkson_slack"), t0)


def polar_checks(cfg: RunConfig, a, command="verify"):
    n = cfg.order
    w = co.reliable_width(n, a)
    inp = {"a": a, "order": n, "block": w}
    tail = _block_tail(a, n, w)
    tol = cfg.tolerance("polar")
    eye = np.eye(n)
    R = _rho(a, n)
    C = _c(a, n)

    def block_check(name, fn, tol):
        t0 = time.perf_counter()
        if w < MIN_BLOCK:
            return ResultRecord(command, name, inp, {}, False, tol, _block_tail(a, n, MIN_BLOCK),
                                note=f"order too small: reliable width {w} < {MIN_BLOCK}",
                                wall_time=time.perf_counter() - t0)
        return _record(command, name, inp, {}, hd.spectral_norm(fn()[:w, :w]), tol, t0, tail_bound=tail)

    yield block_check("polar.rho_hermitian", lambda: R - R.conj().T, tol)
    yield block_check("polar.rho_unitary", lambda: R.conj().T @ R - eye, tol)
    yield block_check("polar.reconstruction", lambda: R @ po.herm_sqrt(_gram(a, n)) - C, tol)
    rs, ns = po.range_symmetry(a, n), po.null_symmetry(a, n)
    yield block_check("polar.range_symmetry_square", lambda: rs @ rs - eye, tol)
    yield block_check("polar.null_symmetry_square", lambda: ns @ ns - eye, tol)
    yield block_check("polar.range_symmetry_routes", lambda: rs - po.range_symmetry(a, n, "generic"), tol)
    yield block_check("polar.null_symmetry_routes", lambda: ns - po.null_symmetry(a, n, "generic"), tol)

    om = mb.fixed_point(a)
    vecs = [hd.taylor_moebius_power(om, j, n) for j in range(18)]
    for name, S, par in (("polar.range_symmetry_fixes_even", rs, 0), ("polar.null_symmetry_fixes_odd", ns, 1)):
        t0 = time.perf_counter()
        vs = vecs[par::2][:9]
        val = max(float(np.linalg.norm(S @ v.coeffs - v.coeffs)) for v in vs)
        vt = max(v.tail for v in vs)
        yield _record(command, name, dict(inp, powers=[2 * j + par for j in range(len(vs))]), {}, val,
                      cfg.tolerance("symmetry_fix"), t0, tail_bound=vt)


def series_check(cfg: RunConfig, command="verify"):
    t0 = time.perf_counter()
    n = min(cfg.order, 64)
    res = po.series_inv_modulus(0.3, n, 40)
    yield _record(command, "polar.series_inverse_modulus", {"a": 0.3, "order": n, "terms": 40},
                  {"coeff_2": float(res.coefficients[2])}, res.residual, cfg.tolerance("series"), t0)


def berkson_random(cfg: RunConfig, command="verify", count=20):
    rng = np.random.default_rng(cfg.seed + 1)
    pts = _random_points(rng, 2 * count, rmax=0.6)
    t0 = time.perf_counter()
    gaps = [co.berkson_gap(p, q, cfg.order) for p, q in zip(pts[::2], pts[1::2])]
    yield _record(command, "operator.berkson_random", {"pairs": count, "seed": cfg.seed, "order": cfg.order},
                  {"min_gap": min(gaps)}, max(0.0, 1 / math.sqrt(2) - min(gaps)),
                  cfg.tolerance("berkson_slack"), t0)


def cmd_verify(cfg: RunConfig):
    yield from moebius_checks(cfg)
    for a in cfg.a:
        yield from operator_checks(cfg, a)
    for a in cfg.a:
        yield from polar_checks(cfg, a)
    yield from series_check(cfg)
    yield from berkson_random(cfg)


# -- spectral

@lru_cache(maxsize=32)
def _fc_eig(a, n):
    lam, V = po.herm_eig(hd.toeplitz_matrix(hd.symbol_ka2(a, n)))
    return _ro(lam), _ro(V)


def _fc_element(f, u, v, a, n):
    lam, V = _fc_eig(a, n)
    ku, kv = hd.szego(u, n).coeffs, hd.szego(v, n).coeffs
    return complex(np.vdot(V.conj().T @ kv, f(lam) * (V.conj().T @ ku)))


def cmd_spectral(cfg: RunConfig):
    n, budget = cfg.order, cfg.budget
    for a in cfg.a:
        if a == 0:
            raise ZeroPoint("spectral command needs a != 0")
    for a in cfg.a:
        prof = sp.SpectralProfile(a)
        unsquared = sp.SpectralProfile(a, arc="unsquared")
        t0 = time.perf_counter()
        yield ResultRecord("spectral", "spectral.support", {"a": a},
                           {"lambda_min": prof.lambda_min, "lambda_max": prof.lambda_max,
                            "c_at_min": float(prof.arc_cos(prof.lambda_min)),
                            "c_at_max": float(prof.arc_cos(prof.lambda_max))},
                           bool(abs(prof.arc_cos(prof.lambda_min) + 1) <= 1e-12
                                and abs(prof.arc_cos(prof.lambda_max) - 1) <= 1e-12
                                and abs(prof.lambda_min * (1 + abs(a)) ** 2 - 1) <= 1e-12
                                and abs(prof.lambda_max * (1 - abs(a)) ** 2 - 1) <= 1e-12),
                           tolerance=1e-12, wall_time=time.perf_counter() - t0)
        funcs = (("mass", lambda l: np.ones_like(l), None),
                 ("moment", lambda l: l, lambda l: l),
                 ("sqrt_moment", np.sqrt, np.sqrt))
        for u in SPECTRAL_POINTS:
            for v in SPECTRAL_POINTS:
                inp = {"a": a, "u": u, "v": v, "theta_points": budget.theta_points,
                       "lambda_points": budget.lambda_points}
                for name, f, fm in funcs:
                    t0 = time.perf_counter()
                    val = sp.spectral_form(f, u, v, prof, budget)
                    ref = 1 / (1 - u.conjugate() * v) if fm is None else _fc_element(fm, u, v, a, n)
                    tol = cfg.tolerance("mass" if name == "mass" else "moment")
                    yield _record("spectral", f"spectral.{name}", inp, {"integral": val, "reference": ref},
                                  abs(val - ref), tol, t0)
                t0 = time.perf_counter()
                val = sp.spectral_form(lambda l: np.ones_like(l), u, v, unsquared, budget)
                err = abs(val - 1 / (1 - u.conjugate() * v))
                yield ResultRecord("spectral", "spectral.unsquared_arc_rejected", inp,
                                   {"integral": val, "mass_error": err}, bool(err > cfg.tolerance("mass")),
                                   cfg.tolerance("mass"), note="passes when the unsquared arc fails the mass check",
                                   wall_time=time.perf_counter() - t0)
                if abs(u - a) > 1e-12:
                    t0 = time.perf_counter()
                    val = sp.rho_element(u, v, a, prof, budget)
                    ref = complex(np.vdot(hd.szego(v, n).coeffs, _rho(a, n) @ hd.szego(u, n).coeffs))
                    yield _record("spectral", "spectral.rho_element", dict(inp, order=n),
                                  {"integral": val, "reference": ref}, abs(val - ref),
                                  cfg.tolerance("rho_element"), t0)
        t0 = time.perf_counter()
        rows = sp.density_dump(prof, budget, cfg.dump_rows)
        yield ResultRecord("spectral", "spectral.density_dump", {"a": a},
                           {"columns": ["lambda", "density", "abs_phi0_sq"], "rows": rows.tolist()},
                           bool(rows[0, 1] == 0 and rows[-1, 1] == 0 and np.all(rows[1:-1, 1] > 0)),
                           wall_time=time.perf_counter() - t0)


# -- subspaces and geodesics

def _subspace_points(cfg):
    for a in cfg.a:
        if a == 0:
            raise ZeroPoint("subspace commands need a != 0")
        if abs(a) > 0.6 + 1e-12:
            raise InputError("subspace commands are calibrated for |a| <= 0.6")
    return cfg.a


def _report_dict(rep: ss.PrincipalAngleReport) -> dict:
    return {"cosines": rep.cosines.tolist(), "intersection_dim": rep.intersection_dim, "gap": rep.gap,
            "threshold": rep.threshold, "separated": rep.separated}


def cmd_subspaces(cfg: RunConfig):
    for a in _subspace_points(cfg):
        t0 = time.perf_counter()
        b = cfg.b if cfg.b not in (0, a) else None
        suite = ss.intersection_suite(a, cfg.order, cfg.basis_size, b=b)
        for row in suite.rows:
            out = _report_dict(row.report)
            out.update(expected_dim=row.expected_dim, dim_ok=row.dim_ok, correlation=row.correlation)
            yield ResultRecord("subspaces", f"subspaces.{row.name}",
                               {"a": a, "b": suite.b, "order": cfg.order, "k": cfg.basis_size},
                               out, row.passed, note=row.statement, wall_time=time.perf_counter() - t0)
            t0 = time.perf_counter()


def geodesic_pairs(a, order, k):
    E0, O0 = ss.eigenbasis(0, "even", order, k), ss.eigenbasis(0, "odd", order, k)
    Ea, Oa = ss.eigenbasis(a, "even", order, k), ss.eigenbasis(a, "odd", order, k)
    existing = (("E_0 -> E_a", E0, Ea), ("O_0 -> O_a", O0, Oa), ("E_0 -> O_a", E0, Oa))
    missing = (("E_a -> O_a", Ea, Oa), ("O_0 -> E_a", O0, Ea))
    return existing, missing


def cmd_geodesic(cfg: RunConfig):
    k = cfg.basis_size
    for a in _subspace_points(cfg):
        existing, missing = geodesic_pairs(a, cfg.order, k)
        inp = {"a": a, "order": cfg.order, "k": k}
        for name, S, T in existing:
            t0 = time.perf_counter()
            cond = ss.geodesic_condition(S, T)
            out = {"dims": list(cond.dims), "exists": cond.exists, "unique": cond.unique}
            if not cond.unique:
                yield ResultRecord("geodesic", f"geodesic.{name}", inp, out, False,
                                   note=f"condition_failed dims {cond.dims[0]}!={cond.dims[1]}"
                                   if not cond.exists else "not unique", wall_time=time.perf_counter() - t0)
                continue
            g = ss.direct_rotation(S, T, cond)
            path = []
            for t in CHECKPOINTS:
                P = g.path(t)
                path.append({"t": t, "max_angle_to_source": float(np.max(ss.principal_angles(P, S).angles)),
                             "max_angle_to_target": float(np.max(ss.principal_angles(P, T).angles))})
            out.update(norm=g.norm, residual=g.residual, codiagonal_defects=list(g.codiagonal_defects),
                       midpoint_defect=ss.midpoint_defect(g), checkpoints=path)
            ok = (g.norm <= math.pi / 2 + 1e-9 and g.residual <= cfg.tolerance("geodesic_residual")
                  and max(g.codiagonal_defects) <= cfg.tolerance("codiagonal"))
            yield ResultRecord("geodesic", f"geodesic.{name}", inp, out, bool(ok),
                               wall_time=time.perf_counter() - t0)
        for name, S, T in missing:
            t0 = time.perf_counter()
            cond = ss.geodesic_condition(S, T)
            out = {"dims": list(cond.dims), "exists": cond.exists, "unique": cond.unique,
                   "cosines_s_tperp": cond.reports[0].cosines[:8].tolist(),
                   "cosines_sperp_t": cond.reports[1].cosines[:8].tolist()}
            note = (f"condition_failed dims {cond.dims[0]}!={cond.dims[1]}" if not cond.exists
                    else f"condition_holds dims {cond.dims[0]}={cond.dims[1]}")
            ok = (not cond.exists) and sorted(cond.dims, reverse=True) == [1, 0]
            yield ResultRecord("geodesic", f"geodesic.{name}", inp, out, bool(ok), note=note,
                               wall_time=time.perf_counter() - t0)


# -- scan

def _scan_pair(args):
    p, q, n = args
    t0 = time.perf_counter()
    if p == q:
        out = {"berkson_gap": 0.0, "delta_sup": 0.0, "delta_bound": 0.0, "rho_difference": 0.0,
               "gram_difference": 0.0}
        return p, q, out, True, time.perf_counter() - t0
    ok = True
    gap = hd.spectral_norm(_c(p, n) - _c(q, n))
    try:
        sup, bound = co.delta_ab(p, q)
    except IdentityCheckFailure:
        z = np.exp(2j * np.pi * np.arange(1024) / 1024)
        sup, bound = float(np.max(np.abs(co.delta_definition(p, q, z)))), 4 * abs(p - q) / (1 - abs(p))
        ok = False
    out = {"berkson_gap": gap, "delta_sup": sup, "delta_bound": bound,
           "rho_difference": hd.spectral_norm(_rho(p, n) - _rho(q, n)),
           "gram_difference": hd.spectral_norm(_gram(p, n) - _gram(q, n))}
    ok = ok and gap >= 1 / math.sqrt(2) - 1e-9
    return p, q, out, ok, time.perf_counter() - t0


def scan_points(cfg: RunConfig) -> list:
    pts = cfg.grid_points()
    if pts:
        return pts
    return [mb.polar_point(r, d) for r in (0.2, 0.5) for d in (0.0, 120.0, 240.0)]


def cmd_scan(cfg: RunConfig):
    pts = scan_points(cfg)
    jobs = [(p, q, cfg.order) for p in pts for q in pts]
    with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
        for p, q, out, ok, dt in pool.map(_scan_pair, jobs):
            yield ResultRecord("scan", "scan.pair", {"a": p, "b": q, "order": cfg.order}, out, bool(ok),
                               wall_time=dt)


COMMANDS = {
    "verify": cmd_verify,
    "spectral": cmd_spectral,
    "subspaces": cmd_subspaces,
    "geodesic": cmd_geodesic,
    "scan": cmd_scan,
}
