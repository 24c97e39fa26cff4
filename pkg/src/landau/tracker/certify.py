"""Krawczyk interval-Newton certification of approximate roots.

For each candidate x with approximate Jacobian inverse Y and box X around
x, the Krawczyk image K = x - Y f(x) + (I - Y Jf(X)) (X - x) is computed in
outward-rounded interval arithmetic.  K strictly inside X proves a unique
root in X; pairwise disjoint certified boxes prove distinct roots, so the
number of certified-distinct solutions is a lower bound on the root count.
"""

from __future__ import annotations

import numpy as np

from .intervals import CBox, box_matmat, box_matvec, _down, _up
from .polysystem import PolySystem
from .track import Solution, newton_polish

_EPS = np.finfo(float).eps


def _box_power_tables(shape, X: CBox):
    """X: (N, n_unknowns) boxes -> per core var CBox (maxdeg+1, N)."""
    N = X.shape[0]
    tables = []
    for v in range(shape.n_core):
        col = X[:, v]
        rows = [CBox.point(np.ones(N, dtype=complex)), col]
        for _ in range(2, shape.maxdeg + 1):
            rows.append(rows[-1] * col)
        tab = CBox.zeros((shape.maxdeg + 1, N))
        for k, r in enumerate(rows[:shape.maxdeg + 1]):
            tab[k] = r
        tables.append(tab)
    return tables


def _box_monomials(shape, tables, exps, X: CBox):
    T = exps.shape[0]
    N = X.shape[0]
    M = CBox.point(np.ones((T, N), dtype=complex))
    for v in range(shape.n_core):
        e = exps[:, v]
        nz = np.nonzero(e)[0]
        if nz.size:
            M[nz] = M[nz] * tables[v][e[nz]]
    return M


def _sum_rows(vals: CBox, starts, out: CBox, out_index):
    """Enclosure of segment sums along axis 0 of vals, written into out.

    The floating reduction error is bounded by m*eps*sum(|bounds|) per
    segment and added outward.
    """
    m_abs = np.maximum(np.maximum(np.abs(vals.rl), np.abs(vals.rh)),
                       np.maximum(np.abs(vals.il), np.abs(vals.ih)))
    count = np.diff(np.append(starts, vals.shape[0]))[:, None]
    slack = count * _EPS * np.add.reduceat(m_abs, starts, axis=0)
    rl = np.add.reduceat(vals.rl, starts, axis=0) - slack
    rh = np.add.reduceat(vals.rh, starts, axis=0) + slack
    il = np.add.reduceat(vals.il, starts, axis=0) - slack
    ih = np.add.reduceat(vals.ih, starts, axis=0) + slack
    out[out_index] = CBox(_down(rl.T), _up(rh.T), _down(il.T), _up(ih.T))


def _zbox(shape, X: CBox, lin_id, T):
    N = X.shape[0]
    zf = CBox.point(np.ones((T, N), dtype=complex))
    has = np.nonzero(lin_id >= 0)[0]
    if has.size:
        cols = shape.n_core + lin_id[has]
        sub = CBox(X.rl[:, cols].T, X.rh[:, cols].T, X.il[:, cols].T, X.ih[:, cols].T)
        zf[has] = sub
    return zf


def box_values(system: PolySystem, pvals, X: CBox) -> CBox:
    """Interval enclosure of the system values over box vectors X (N, n)."""
    shape = system.compiled()
    coeffs = system.coefficients(pvals)
    tables = _box_power_tables(shape, X)
    M = _box_monomials(shape, tables, shape.exps, X)
    vals = M * CBox.point(np.broadcast_to(coeffs[:, None], M.shape))
    vals = vals * _zbox(shape, X, shape.lin_id, shape.exps.shape[0])
    out = CBox.zeros((X.shape[0], shape.n_eq))
    ordered = vals[shape.order]
    _sum_rows(ordered, shape.seg_starts, out,
              (slice(None), shape.seg_eq))
    return out


def box_jacobian(system: PolySystem, pvals, X: CBox) -> CBox:
    """Interval Jacobian over box vectors X: (N, n_eq, n_unknowns)."""
    shape = system.compiled()
    coeffs = system.coefficients(pvals)
    tables = _box_power_tables(shape, X)
    N = X.shape[0]
    n = shape.n_core + shape.n_lin
    J = CBox.zeros((N, shape.n_eq, n))
    for v in range(shape.n_core):
        idx, dex, factor, starts, eqlist = shape.dtables[v]
        if not idx.size:
            continue
        M = _box_monomials(shape, tables, dex, X)
        cf = coeffs[idx] * factor
        vals = M * CBox.point(np.broadcast_to(cf[:, None], M.shape))
        vals = vals * _zbox(shape, X, shape.lin_id[idx], idx.size)
        _sum_rows(vals, starts, J, (slice(None), eqlist, v))
    if shape.zjac_idx.size:
        idx = shape.zjac_idx
        M = _box_monomials(shape, tables, shape.exps[idx], X)
        vals = M * CBox.point(np.broadcast_to(coeffs[idx][:, None], M.shape))
        _sum_rows(vals, shape.zjac_starts, J,
                  (slice(None), shape.zjac_eqs, shape.n_core + shape.zjac_lins))
    return J


def krawczyk_test(system: PolySystem, pvals, points, radii,
                  chunk: int = 64) -> np.ndarray:
    """Vector of booleans: Krawczyk contraction holds on the given boxes."""
    pts = np.atleast_2d(np.asarray(points, dtype=complex))
    if pts.shape[0] > chunk:
        return np.concatenate([
            krawczyk_test(system, pvals, pts[lo:lo + chunk],
                          np.broadcast_to(radii, (pts.shape[0],))[lo:lo + chunk])
            for lo in range(0, pts.shape[0], chunk)])
    N, n = pts.shape
    radii = np.broadcast_to(np.asarray(radii, dtype=float), (N,))
    X = CBox.from_center(pts, radii[:, None] * np.ones((1, n)))
    fx = box_values(system, pvals, CBox.point(pts))
    JX = box_jacobian(system, pvals, X)
    J0 = system.jacobian(pts, pvals)
    ok = np.zeros(N, dtype=bool)
    for i in range(N):
        try:
            Y = np.linalg.inv(J0[i])
        except np.linalg.LinAlgError:
            continue
        Yb = CBox.point(Y)
        # K = x - Y f(x) + (I - Y J(X)) (X - x)
        corr = box_matvec(Yb, fx[i])
        A = box_matmat(Yb, JX[i])
        eye = CBox.point(np.eye(n, dtype=complex))
        shifted = X[i] - CBox.point(pts[i])
        K = CBox.point(pts[i]) - corr + box_matvec(eye - A, shifted)
        ok[i] = bool(np.all(X[i].contains_strict(K)))
    return ok


def certify(system: PolySystem, pvals, solutions: list[Solution],
            base_radius: float = 1e-6) -> list[Solution]:
    """Krawczyk-certify endpoints; marks certified-distinct solutions.

    Uncertifiable solutions keep their previous status (never dropped).
    The count of certified-distinct entries is a proven lower bound on the
    number of distinct roots.
    """
    finite_idx = [i for i, s in enumerate(solutions) if s.is_finite()]
    finite = [solutions[i] for i in finite_idx]
    if not finite:
        return solutions
    pts = np.array([s.point for s in finite])
    pts, _res = newton_polish(system, pvals, pts, iters=3)
    scale = 1.0 + np.abs(pts).max(axis=1)
    ok = np.zeros(len(finite), dtype=bool)
    radii = base_radius * scale
    for attempt in range(3):
        todo = ~ok
        if not todo.any():
            break
        ok[todo] = krawczyk_test(system, pvals, pts[todo], radii[todo])
        radii = radii * 0.03
        if attempt == 1:
            # re-polish the stragglers before the tightest attempt
            pts[~ok], _ = newton_polish(system, pvals, pts[~ok], iters=6)
    # distinctness: greedy pairwise-disjoint certified boxes
    order = np.argsort(~ok)  # certified first
    kept: list[int] = []
    boxes = CBox.from_center(pts, (base_radius * scale)[:, None]
                             * np.ones((1, pts.shape[1])))
    for i in order:
        if not ok[i]:
            continue
        disjoint = all(np.any(boxes[i].disjoint(boxes[j])) for j in kept)
        if disjoint:
            kept.append(i)
    kept_set = set(kept)
    out = list(solutions)
    for idx, s in enumerate(finite):
        pos = finite_idx[idx]
        if idx in kept_set:
            out[pos] = Solution(pts[idx], s.residual, s.contraction,
                                "certified-distinct", s.winding,
                                s.multiplicity_flag, s.path_index)
        elif ok[idx]:
            out[pos] = Solution(pts[idx], s.residual, s.contraction,
                                "uncertified", s.winding,
                                True, s.path_index)
    return out


def count_certified_distinct(solutions: list[Solution]) -> int:
    return sum(1 for s in solutions if s.status == "certified-distinct")
