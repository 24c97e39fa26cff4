"""Batched predictor-corrector path tracking with a Cauchy endgame.

The predictor is fourth-order Runge-Kutta on the Davidenko equation
``J_x(x, t) x' = -dH/dt(x, t)``; the corrector is plain Newton at the
predicted time.  Paths run in lockstep over numpy batches with per-path
adaptive step sizes.

Every homotopy here is an affine pencil ``H(x, t) = a(t) G(x) + b(t) F(x)``
over one shared term support, so values and Jacobians at mixed per-path
times come from two batched evaluations combined with per-path scalars.
Near-singular endpoints are recovered by looping t around the target on
small circles and averaging the samples (Cauchy integral), which also
estimates the winding number.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .polysystem import PolySystem

DIVERGE_NORM = 1e10


@dataclass
class TrackOptions:
    predictor_order: int = 4
    initial_step: float = 0.05
    min_step: float = 1e-14
    max_step: float = 0.1
    corrector_tol: float = 1e-10
    max_corrector_iters: int = 3
    max_steps: int = 3000
    endgame: bool = True
    endgame_start: float = 0.9
    fail_policy: str = "flag"  # flagged failures are reported, never dropped

    def __post_init__(self):
        if not (0 < self.min_step <= self.initial_step <= self.max_step):
            raise ValueError("need 0 < min_step <= initial_step <= max_step")
        if self.corrector_tol <= 0:
            raise ValueError("corrector tolerance must be positive")


@dataclass(eq=False)
class Solution:
    """One endpoint of a tracked path."""

    point: np.ndarray
    residual: float
    contraction: float
    status: str  # certified-distinct | uncertified | singular-suspect | diverged | failed
    winding: int = 0
    multiplicity_flag: bool = False
    path_index: int = -1

    def is_finite(self) -> bool:
        return self.status in ("certified-distinct", "uncertified", "singular-suspect")


class Homotopy:
    """Affine pencil a(t) G + b(t) F over one compiled term support."""

    def __init__(self, system: PolySystem, coeffs_start, coeffs_target, gamma=None):
        self.system = system
        self.shape = system.compiled()
        self.cG = np.asarray(coeffs_start, dtype=complex)
        self.cF = np.asarray(coeffs_target, dtype=complex)
        self.gamma = 1.0 if gamma is None else gamma

    def ab(self, t):
        return self.gamma * (1.0 - t), t

    def dab(self):
        return -self.gamma, 1.0

    def pair_values(self, X):
        sh = self.shape
        return sh.eval_values(X, self.cG), sh.eval_values(X, self.cF)

    def pair_jacobian(self, X):
        sh = self.shape
        return sh.eval_jacobian(X, self.cG), sh.eval_jacobian(X, self.cF)

    def coeffs(self, t):
        a, b = self.ab(t)
        return a * self.cG + b * self.cF


def _combine(pair, t, dshape):
    """a(t)*G + b(t)*F with t scalar or per-path vector."""
    G, F = pair
    a, b = dshape.ab(t)
    if np.ndim(t):
        extra = (1,) * (G.ndim - 1)
        a = np.asarray(a).reshape((-1,) + extra)
        b = np.asarray(b).reshape((-1,) + extra)
    return a * G + b * F


def _combine_dt(pair, dshape):
    G, F = pair
    da, db = dshape.dab()
    return da * G + db * F


def param_homotopy(system: PolySystem, p_from, p_to) -> Homotopy:
    """Straight parameter segment; exact because coefficients are affine."""
    return Homotopy(system, system.coefficients(p_from), system.coefficients(p_to))


def _batch_solve(J, B):
    """Solve J[i] x[i] = B[i]; singular members come back as NaN."""
    try:
        return np.linalg.solve(J, B[..., None])[..., 0]
    except np.linalg.LinAlgError:
        out = np.empty_like(B)
        for i in range(J.shape[0]):
            try:
                out[i] = np.linalg.solve(J[i], B[i])
            except np.linalg.LinAlgError:
                out[i] = np.nan
        return out


def _tangent(hom, X, t):
    """Davidenko right-hand side dx/dt at per-path times t."""
    JP = hom.pair_jacobian(X)
    VP = hom.pair_values(X)
    J = _combine(JP, t, hom)
    dH = _combine_dt(VP, hom)
    return _batch_solve(J, -dH)


def _newton(hom, X, t, tol, iters):
    """Newton corrector at fixed per-path times t."""
    contraction = np.full(X.shape[0], np.inf)
    converged = np.zeros(X.shape[0], dtype=bool)
    prev = None
    for _ in range(iters):
        H = _combine(hom.pair_values(X), t, hom)
        J = _combine(hom.pair_jacobian(X), t, hom)
        dx = _batch_solve(J, -H)
        bad = ~np.isfinite(dx).all(axis=1)
        dx[bad] = 0.0
        X = X + dx
        size = np.linalg.norm(dx, axis=1) / (1.0 + np.linalg.norm(X, axis=1))
        if prev is not None:
            with np.errstate(divide="ignore", invalid="ignore"):
                c = np.where(prev > 0, size / prev, 0.0)
            contraction = np.minimum(contraction, np.where(np.isfinite(c), c, np.inf))
        converged |= (size < tol) & ~bad
        prev = size
    return X, converged & np.isfinite(X).all(axis=1), contraction


class _Batch:
    def __init__(self, starts, opts):
        n = starts.shape[0]
        self.X = starts.copy()
        self.tau = np.zeros(n)
        self.dt = np.full(n, opts.initial_step)
        self.streak = np.zeros(n, dtype=int)
        self.steps = np.zeros(n, dtype=int)
        self.status = np.zeros(n, dtype=int)  # 0 active 1 done 2 diverged 3 stuck
        self.ck_X = starts.copy()
        self.ck_tau = np.zeros(n)


def track(hom: Homotopy, starts, opts: TrackOptions | None = None,
          batch_size: int = 512, telemetry: dict | None = None) -> list[Solution]:
    """Track every start point from t=0 to t=1."""
    opts = opts or TrackOptions()
    starts = np.atleast_2d(np.asarray(starts, dtype=complex))
    sols: list[Solution] = []
    for lo in range(0, starts.shape[0], batch_size):
        hi = min(lo + batch_size, starts.shape[0])
        batch = _track_batch(hom, starts[lo:hi], opts)
        for k, sol in enumerate(batch):
            sol.path_index = lo + k
        sols.extend(batch)
    if telemetry is not None:
        telemetry["paths_attempted"] = telemetry.get("paths_attempted", 0) + len(sols)
        for s in sols:
            key = {"certified-distinct": "paths_succeeded",
                   "uncertified": "paths_succeeded",
                   "singular-suspect": "paths_singular",
                   "diverged": "paths_diverged"}.get(s.status, "paths_failed")
            telemetry[key] = telemetry.get(key, 0) + 1
    return sols


def _track_batch(hom, starts, opts) -> list[Solution]:
    st = _Batch(np.atleast_2d(np.asarray(starts, dtype=complex)), opts)
    rounds = 0
    while (st.status == 0).any() and rounds < opts.max_steps:
        rounds += 1
        act = np.nonzero(st.status == 0)[0]
        X = st.X[act]
        tau = st.tau[act]
        h = np.minimum(st.dt[act], 1.0 - tau)
        k1 = _tangent(hom, X, tau)
        k2 = _tangent(hom, X + (0.5 * h)[:, None] * k1, tau + 0.5 * h)
        k3 = _tangent(hom, X + (0.5 * h)[:, None] * k2, tau + 0.5 * h)
        k4 = _tangent(hom, X + h[:, None] * k3, tau + h)
        ok = np.ones(len(act), dtype=bool)
        for k in (k1, k2, k3, k4):
            ok &= np.isfinite(k).all(axis=1)
        Xp = X + (h / 6.0)[:, None] * (k1 + 2 * k2 + 2 * k3 + k4)
        Xp[~ok] = X[~ok]
        Xn, conv, _ = _newton(hom, Xp, tau + h, opts.corrector_tol,
                              opts.max_corrector_iters)
        success = ok & conv
        idx_s = act[success]
        st.X[idx_s] = Xn[success]
        st.tau[idx_s] += h[success]
        st.steps[idx_s] += 1
        st.streak[idx_s] += 1
        grow = idx_s[st.streak[idx_s] >= 4]
        st.dt[grow] = np.minimum(st.dt[grow] * 1.5, opts.max_step)
        st.streak[grow] = 0
        idx_f = act[~success]
        st.dt[idx_f] *= 0.5
        st.streak[idx_f] = 0
        ck = idx_s[(st.tau[idx_s] >= opts.endgame_start)
                   & (st.ck_tau[idx_s] < opts.endgame_start)]
        st.ck_X[ck] = st.X[ck]
        st.ck_tau[ck] = st.tau[ck]
        big = np.abs(st.X[act]).max(axis=1) > DIVERGE_NORM
        st.status[act[big]] = 2
        stuck = (st.status == 0) & (st.dt < opts.min_step)
        st.status[stuck] = 3
        done = (st.status == 0) & (st.tau >= 1.0 - 1e-12)
        st.status[done] = 1
    st.status[st.status == 0] = 3
    return _finalize(hom, st, opts)


def _finalize(hom, st, opts) -> list[Solution]:
    n = st.X.shape[0]
    X = st.X.copy()
    res = np.full(n, np.inf)
    contr = np.full(n, np.inf)
    done = st.status == 1
    if done.any():
        Xd, conv, c = _newton(hom, X[done], 1.0, 1e-12, 4)
        X[done] = Xd
        H = _combine(hom.pair_values(Xd), 1.0, hom)
        res[done] = np.abs(H).max(axis=1)
        contr[done] = c
    out = []
    for i in range(n):
        if st.status[i] == 2:
            out.append(Solution(X[i], np.inf, np.inf, "diverged"))
        elif st.status[i] == 3:
            if opts.endgame and st.ck_tau[i] >= opts.endgame_start:
                out.append(_cauchy_endgame(hom, st.ck_X[i], st.ck_tau[i], opts))
            else:
                out.append(Solution(X[i], np.inf, np.inf, "failed"))
        else:
            good = res[i] < np.sqrt(opts.corrector_tol)
            status = "uncertified" if good else "singular-suspect"
            out.append(Solution(X[i], float(res[i]), float(contr[i]), status))
    return out


def _cauchy_endgame(hom, x_ck, tau_ck, opts, segments: int = 12,
                    max_winding: int = 8) -> Solution:
    """Loop t around 1 on shrinking circles; average samples per cycle."""
    r = 1.0 - tau_ck
    x_cur = x_ck.copy()
    est_prev = None
    best = Solution(x_ck.copy(), np.inf, np.inf, "failed")
    for _ in range(3):
        got = _circle_cycle(hom, x_cur, r, segments, max_winding, opts)
        if got is None:
            break
        est, winding, x_back = got
        sol = Solution(est, 0.0, 0.0, "singular-suspect",
                       winding=winding, multiplicity_flag=winding > 1)
        best = sol
        if est_prev is not None:
            scale = 1.0 + np.linalg.norm(est)
            if np.linalg.norm(est - est_prev) / scale < 1e-6:
                return sol
        est_prev = est
        nxt = _track_time_segment(hom, x_back, 1.0 - r, 1.0 - r / 4.0, opts)
        if nxt is None:
            break
        x_cur = nxt
        r /= 4.0
    return best


def _circle_cycle(hom, x, r, segments, max_winding, opts):
    """Track around |1 - t| = r starting at t = 1 - r; average samples."""
    samples = []
    start = x.copy()
    cur = x.copy()
    t_prev = 1.0 - r
    winding = 0
    for loop in range(max_winding):
        for k in range(1, segments + 1):
            t_next = 1.0 - r * np.exp(2j * np.pi * k / segments)
            cur = _track_time_segment(hom, cur, t_prev, t_next, opts)
            if cur is None:
                return None
            samples.append(cur.copy())
            t_prev = t_next
        winding = loop + 1
        scale = 1.0 + np.linalg.norm(cur)
        if np.linalg.norm(cur - start) / scale < 1e-6:
            break
    est = np.mean(samples[-segments * winding:], axis=0)
    return est, winding, cur


def _track_time_segment(hom, x, t_from, t_to, opts):
    """Track one point along the straight segment t_from -> t_to."""
    sub = Homotopy(hom.system, hom.coeffs(t_from), hom.coeffs(t_to))
    seg_opts = replace(opts, endgame=False, max_steps=500)
    sols = _track_batch(sub, x[None, :], seg_opts)
    if sols[0].status in ("uncertified", "certified-distinct"):
        return sols[0].point
    return None


def newton_polish(system: PolySystem, pvals, X, iters=4, tol=1e-12):
    """Plain Newton refinement at fixed parameters (double precision)."""
    coeffs = system.coefficients(pvals)
    shape = system.compiled()
    X = np.atleast_2d(np.asarray(X, dtype=complex)).copy()
    for _ in range(iters):
        H = shape.eval_values(X, coeffs)
        J = shape.eval_jacobian(X, coeffs)
        dx = _batch_solve(J, -H)
        ok = np.isfinite(dx).all(axis=1)
        X[ok] += dx[ok]
    H = shape.eval_values(X, coeffs)
    return X, np.abs(H).max(axis=1)


def cluster_distinct(points, rel_tol: float = 1e-6):
    """Single-linkage clusters under ||p - q|| / max(1, ||p||, ||q||) < rel_tol.

    Returns (representatives, sizes, labels).
    """
    pts = np.atleast_2d(np.asarray(points, dtype=complex))
    n = pts.shape[0]
    if n == 0:
        return pts, [], np.array([], dtype=int)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    norms = np.maximum(1.0, np.linalg.norm(pts, axis=1))
    for i in range(n):
        d = np.linalg.norm(pts[i + 1:] - pts[i], axis=1)
        close = np.nonzero(d < rel_tol * np.maximum(norms[i], norms[i + 1:]))[0]
        for j in close:
            ri, rj = find(i), find(i + 1 + j)
            if ri != rj:
                parent[ri] = rj
    labels = np.array([find(i) for i in range(n)])
    reps, sizes = [], []
    remap = {}
    for i in range(n):
        r = labels[i]
        if r not in remap:
            remap[r] = len(reps)
            reps.append(pts[i])
            sizes.append(0)
        sizes[remap[r]] += 1
    labels = np.array([remap[r] for r in labels])
    return np.array(reps), sizes, labels


def refine(system: PolySystem, pvals, point, precision_bits: int = 256,
           max_iters: int = 40):
    """Newton iteration in mpmath arithmetic until residual < 2^-(bits/2).

    Returns (refined point as list of mpc, residual as float).  Leaves the
    point unchanged (flagged by the large residual) when Newton stalls.
    """
    import mpmath as mp
    shape = system.compiled()
    coeffs = system.coefficients(pvals)
    with mp.workprec(precision_bits):
        x = [mp.mpc(complex(z)) for z in np.asarray(point, dtype=complex)]
        target = mp.mpf(2) ** (-(precision_bits // 2))
        resid = None
        for _ in range(max_iters):
            vals = shape.eval_mp(x, coeffs, mp)
            resid = max(abs(v) for v in vals)
            if resid < target:
                break
            J = shape.eval_jacobian_mp(x, coeffs, mp)
            try:
                dx = mp.lu_solve(mp.matrix(J), mp.matrix([-v for v in vals]))
            except ZeroDivisionError:
                break
            x = [xi + dx[i] for i, xi in enumerate(x)]
        vals = shape.eval_mp(x, coeffs, mp)
        resid = max(abs(v) for v in vals)
    return x, float(resid)
