"""Compiled polynomial systems with fast batched evaluation and Jacobians.

A system is a list of equations over a combined unknown vector
``x = (core..., lin...)``.  Each equation is a sum of *groups*: a group is a
polynomial in the core unknowns, optionally multiplied by one unknown of the
linear block.  Incidence systems are exactly of this shape (chart
coordinates enter linearly); systems without a linear block (critical-point
systems, start systems) use groups with no linear factor.

Coefficients are affine-linear in a parameter vector, so parameter
homotopies reduce to affine combinations of two instantiated coefficient
vectors over a fixed term support.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


@dataclass
class Term:
    exps: tuple[int, ...]
    const: complex = 0.0
    lin: dict[int, complex] = field(default_factory=dict)  # param index -> coeff


@dataclass
class Group:
    lin_index: int | None  # index into the linear block, or None
    terms: list[Term]


@dataclass
class PolySystem:
    """Square or rectangular polynomial system with parameter slots."""

    core_vars: tuple[str, ...]
    lin_vars: tuple[str, ...]
    params: tuple[str, ...]
    equations: list[list[Group]]

    _compiled: "CompiledShape | None" = field(default=None, repr=False, compare=False)

    @property
    def unknowns(self) -> tuple[str, ...]:
        return self.core_vars + self.lin_vars

    @property
    def n_unknowns(self) -> int:
        return len(self.core_vars) + len(self.lin_vars)

    @property
    def n_equations(self) -> int:
        return len(self.equations)

    def compiled(self) -> "CompiledShape":
        if self._compiled is None:
            self._compiled = CompiledShape(self)
        return self._compiled

    def coefficients(self, pvals) -> np.ndarray:
        """Materialize the coefficient vector at a parameter point."""
        pvals = np.asarray(pvals, dtype=complex)
        if pvals.shape != (len(self.params),):
            raise ValueError("parameter vector has wrong length")
        shape = self.compiled()
        out = shape.const.copy()
        if shape.lin_rows.size:
            np.add.at(out, shape.lin_rows, shape.lin_vals * pvals[shape.lin_cols])
        return out

    def evaluate(self, X, pvals):
        """Convenience: values at points X (N, n_unknowns)."""
        return self.compiled().eval_values(np.atleast_2d(np.asarray(X, dtype=complex)),
                                           self.coefficients(pvals))

    def jacobian(self, X, pvals):
        return self.compiled().eval_jacobian(np.atleast_2d(np.asarray(X, dtype=complex)),
                                             self.coefficients(pvals))

    def degrees(self) -> list[int]:
        """Total degrees (core + linear factor) per equation."""
        out = []
        for eq in self.equations:
            d = 0
            for g in eq:
                base = max((sum(t.exps) for t in g.terms), default=0)
                d = max(d, base + (1 if g.lin_index is not None else 0))
            out.append(d)
        return out

    def multidegrees(self) -> list[tuple[int, int]]:
        """(core degree, linear-block degree) per equation."""
        out = []
        for eq in self.equations:
            dc = dl = 0
            for g in eq:
                dc = max(dc, max((sum(t.exps) for t in g.terms), default=0))
                if g.lin_index is not None:
                    dl = 1
            out.append((dc, dl))
        return out


class CompiledShape:
    """Flat arrays for batched evaluation of a PolySystem."""

    def __init__(self, sys: PolySystem):
        nc = len(sys.core_vars)
        exps, eq_id, lin_id, const = [], [], [], []
        lin_rows, lin_cols, lin_vals = [], [], []
        t = 0
        for i, eq in enumerate(sys.equations):
            for g in eq:
                li = -1 if g.lin_index is None else g.lin_index
                for term in g.terms:
                    exps.append(tuple(term.exps))
                    eq_id.append(i)
                    lin_id.append(li)
                    const.append(term.const)
                    for pj, val in term.lin.items():
                        lin_rows.append(t)
                        lin_cols.append(pj)
                        lin_vals.append(val)
                    t += 1
        self.n_core = nc
        self.n_lin = len(sys.lin_vars)
        self.n_eq = len(sys.equations)
        self.exps = np.asarray(exps, dtype=np.int16).reshape(t, nc)
        self.eq_id = np.asarray(eq_id, dtype=np.int64)
        self.lin_id = np.asarray(lin_id, dtype=np.int64)
        self.const = np.asarray(const, dtype=complex)
        self.lin_rows = np.asarray(lin_rows, dtype=np.int64)
        self.lin_cols = np.asarray(lin_cols, dtype=np.int64)
        self.lin_vals = np.asarray(lin_vals, dtype=complex)
        self.maxdeg = int(self.exps.max(initial=0))
        order = np.argsort(self.eq_id, kind="stable")
        self.order = order
        self.seg_starts, self.seg_eq = _segments(self.eq_id[order], self.n_eq)
        # derivative tables per core variable, grouped by equation
        self.dtables = []
        for v in range(nc):
            idx = np.nonzero(self.exps[:, v] > 0)[0]
            dex = self.exps[idx].copy()
            factor = dex[:, v].astype(complex)
            dex[:, v] -= 1
            o = np.argsort(self.eq_id[idx], kind="stable")
            idx, dex, factor = idx[o], dex[o], factor[o]
            starts, eqlist = _segments(self.eq_id[idx], self.n_eq)
            self.dtables.append((idx, dex, factor, starts, eqlist))
        # (eq, lin) grouping for the linear-block Jacobian columns
        has = np.nonzero(self.lin_id >= 0)[0]
        if self.n_lin and has.size:
            key = self.eq_id[has] * self.n_lin + self.lin_id[has]
            o = np.argsort(key, kind="stable")
            self.zjac_idx = has[o]
            starts, keys = _segments(key[o], self.n_eq * self.n_lin)
            self.zjac_starts = starts
            self.zjac_eqs = keys // self.n_lin
            self.zjac_lins = keys % self.n_lin
        else:
            self.zjac_idx = np.array([], dtype=np.int64)

    # -- batched complex evaluation ---------------------------------------
    def power_table(self, X):
        N = X.shape[0]
        P = np.empty((self.n_core, self.maxdeg + 1, N), dtype=complex)
        P[:, 0] = 1.0
        for v in range(self.n_core):
            col = X[:, v]
            for k in range(1, self.maxdeg + 1):
                P[v, k] = P[v, k - 1] * col
        return P

    def monomials(self, P, exps):
        """Products over core vars: (T, N)."""
        T = exps.shape[0]
        N = P.shape[2]
        M = np.ones((T, N), dtype=complex)
        for v in range(self.n_core):
            e = exps[:, v]
            nz = np.nonzero(e)[0]
            if nz.size:
                M[nz] *= P[v, e[nz]]
        return M

    def _zfactors(self, X, lin_id):
        zf = np.ones((lin_id.shape[0], X.shape[0]), dtype=complex)
        has = lin_id >= 0
        if has.any():
            zf[has] = X[:, self.n_core + lin_id[has]].T
        return zf

    def eval_values(self, X, coeffs):
        """System values: (N, n_eq)."""
        P = self.power_table(X)
        M = self.monomials(P, self.exps)
        vals = M * coeffs[:, None] * self._zfactors(X, self.lin_id)
        out = np.zeros((X.shape[0], self.n_eq), dtype=complex)
        if self.seg_starts.size:
            sums = np.add.reduceat(vals[self.order], self.seg_starts, axis=0)
            out[:, self.seg_eq] = sums.T
        return out

    def eval_jacobian(self, X, coeffs):
        """Full Jacobian: (N, n_eq, n_unknowns)."""
        N = X.shape[0]
        P = self.power_table(X)
        J = np.zeros((N, self.n_eq, self.n_core + self.n_lin), dtype=complex)
        for v in range(self.n_core):
            idx, dex, factor, starts, eqlist = self.dtables[v]
            if not idx.size:
                continue
            M = self.monomials(P, dex)
            vals = M * (coeffs[idx] * factor)[:, None] * self._zfactors(X, self.lin_id[idx])
            if starts.size:
                sums = np.add.reduceat(vals, starts, axis=0)
                J[:, eqlist, v] = sums.T
        if self.zjac_idx.size:
            idx = self.zjac_idx
            M = self.monomials(P, self.exps[idx])
            vals = M * coeffs[idx][:, None]
            sums = np.add.reduceat(vals, self.zjac_starts, axis=0)
            J[:, self.zjac_eqs, self.n_core + self.zjac_lins] = sums.T
        return J

    # -- scalar high-precision evaluation ----------------------------------
    def eval_mp(self, x, coeffs, mp):
        """Values at one mpmath point (list of mpc)."""
        vals = [mp.mpc(0)] * self.n_eq
        powers = _mp_powers(x, self.n_core, self.maxdeg, mp)
        for t in range(self.exps.shape[0]):
            mono = mp.mpc(complex(coeffs[t]))
            for v in range(self.n_core):
                e = int(self.exps[t, v])
                if e:
                    mono *= powers[v][e]
            li = int(self.lin_id[t])
            if li >= 0:
                mono *= x[self.n_core + li]
            vals[int(self.eq_id[t])] += mono
        return vals

    def eval_jacobian_mp(self, x, coeffs, mp):
        n = self.n_core + self.n_lin
        J = [[mp.mpc(0)] * n for _ in range(self.n_eq)]
        powers = _mp_powers(x, self.n_core, self.maxdeg, mp)
        for t in range(self.exps.shape[0]):
            e = self.exps[t]
            li = int(self.lin_id[t])
            c = mp.mpc(complex(coeffs[t]))
            i = int(self.eq_id[t])
            zfac = x[self.n_core + li] if li >= 0 else None
            for v in range(self.n_core):
                ev = int(e[v])
                if not ev:
                    continue
                mono = c * ev
                for w in range(self.n_core):
                    ew = int(e[w]) - (1 if w == v else 0)
                    if ew:
                        mono *= powers[w][ew]
                if zfac is not None:
                    mono *= zfac
                J[i][v] += mono
            if li >= 0:
                mono = c
                for w in range(self.n_core):
                    ew = int(e[w])
                    if ew:
                        mono *= powers[w][ew]
                J[i][self.n_core + li] += mono
        return J


def _mp_powers(x, n_core, maxdeg, mp):
    powers = []
    for v in range(n_core):
        row = [mp.mpc(1)]
        for _ in range(maxdeg):
            row.append(row[-1] * x[v])
        powers.append(row)
    return powers


def _segments(sorted_ids, nbuckets):
    """reduceat segment starts and their bucket ids for a sorted id array."""
    if sorted_ids.size == 0:
        return np.array([], dtype=np.int64), np.array([], dtype=np.int64)
    change = np.nonzero(np.diff(sorted_ids))[0] + 1
    starts = np.concatenate(([0], change)).astype(np.int64)
    return starts, sorted_ids[starts]
