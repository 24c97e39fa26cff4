"""Start systems: total-degree and linear-product (multihomogeneous).

Both builders return a ``Homotopy`` whose start side has known, nonsingular
solutions, together with those start points.  The start and target share
one combined term support so the pencil ``gamma (1-t) S + t F`` is a single
compiled system with two coefficient vectors.
"""

from __future__ import annotations

import itertools

import numpy as np

from .polysystem import Group, PolySystem, Term
from .track import Homotopy


def _combined_homotopy(target: PolySystem, pvals, start_eqs, gamma,
                       shared_eqs=()) -> Homotopy:
    """Union-support pencil; ``shared_eqs`` stay identical on both sides."""
    cf_target = target.coefficients(pvals)
    eqs = []
    cG, cF = [], []
    k = 0
    shared = set(shared_eqs)
    for i, eq in enumerate(target.equations):
        groups = []
        if i in shared:
            # keep the equation itself on both sides, scaled identically
            for g in eq:
                terms = []
                for t in g.terms:
                    terms.append(Term(t.exps, 0.0, {}))
                    cG.append(cf_target[k])
                    cF.append(cf_target[k])
                    k += 1
                groups.append(Group(g.lin_index, terms))
            eqs.append(groups)
            continue
        for g in start_eqs[i]:
            terms = []
            for t in g.terms:
                terms.append(Term(t.exps, 0.0, {}))
                cG.append(t.const)
                cF.append(0.0)
            groups.append(Group(g.lin_index, terms))
        for g in eq:
            terms = []
            for t in g.terms:
                terms.append(Term(t.exps, 0.0, {}))
                cG.append(0.0)
                cF.append(cf_target[k])
                k += 1
            groups.append(Group(g.lin_index, terms))
        eqs.append(groups)
    combined = PolySystem(target.core_vars, target.lin_vars, (), eqs)
    return Homotopy(combined, np.asarray(cG, dtype=complex),
                    np.asarray(cF, dtype=complex), gamma=gamma)


# ---------------------------------------------------------------------------
# total degree
# ---------------------------------------------------------------------------

def total_degree_start(system: PolySystem, pvals, seed: int,
                       path_budget: int = 200000):
    """Start system x_i^{d_i} - r_i with all root combinations.

    Only systems without a linear block are supported (the linear block
    carries chart coordinates, which the incidence solvers handle with the
    linear-product start instead).
    """
    if system.lin_vars:
        raise ValueError("total-degree start requires an empty linear block")
    n = system.n_unknowns
    if system.n_equations != n:
        raise ValueError("total-degree start needs a square system")
    rng = np.random.default_rng(seed)
    degs = system.degrees()
    total = 1
    for d in degs:
        total *= max(d, 1)
    if total > path_budget:
        raise ValueError(f"Bezout count {total} exceeds path budget {path_budget}")
    radii = np.exp(2j * np.pi * rng.random(n))
    start_eqs = []
    for i, d in enumerate(degs):
        e_hi = [0] * n
        e_hi[i] = d
        start_eqs.append([Group(None, [Term(tuple(e_hi), 1.0),
                                       Term((0,) * n, -radii[i])])])
    gamma = np.exp(2j * np.pi * rng.random())
    hom = _combined_homotopy(system, pvals, start_eqs, gamma)
    roots = [radii[i] ** (1.0 / degs[i])
             * np.exp(2j * np.pi * np.arange(degs[i]) / degs[i])
             for i in range(n)]
    starts = np.array([list(combo) for combo in itertools.product(*roots)],
                      dtype=complex)
    return hom, starts


# ---------------------------------------------------------------------------
# linear-product start for the sliced incidence structure
# ---------------------------------------------------------------------------

class ProductSpec:
    """Factor structure of one equation of a sliced incidence system.

    kind = 'product': n_alpha affine alpha-factors, then optionally a
    y-factor or a z-factor (never both here).  kind = 'fixed': the equation
    is linear and kept identical on both sides of the pencil.
    """

    def __init__(self, kind, n_alpha=0, has_y=False, has_z=False):
        self.kind = kind
        self.n_alpha = n_alpha
        self.has_y = has_y
        self.has_z = has_z


def _expand_alpha_product(forms, n_core):
    """Multiply affine forms sum_j c_j a_j + c0; returns exps->coeff dict."""
    acc = {(0,) * n_core: 1.0 + 0j}
    for form in forms:
        nxt = {}
        for e, c in acc.items():
            for j, cj in enumerate(form[:-1]):
                if cj == 0:
                    continue
                e2 = list(e)
                e2[j] += 1
                key = tuple(e2)
                nxt[key] = nxt.get(key, 0.0) + c * cj
            if form[-1] != 0:
                nxt[e] = nxt.get(e, 0.0) + c * form[-1]
        acc = nxt
    return acc


def linear_product_start(system: PolySystem, pvals, specs: list[ProductSpec],
                         alpha_idx: list[int], y_idx: int | None, seed: int):
    """Multihomogeneous start respecting the (alpha | y | z) block split.

    Enumerates all block-balanced factor choices; each choice contributes
    one start solution obtained from a single linear solve.
    """
    rng = np.random.default_rng(seed)
    n_core = len(system.core_vars)
    n_lin = len(system.lin_vars)
    n_unk = n_core + n_lin
    n_alpha = len(alpha_idx)

    # draw the random factors
    alpha_forms: list[list[np.ndarray]] = []   # per eq: list of (n_core+1,)
    z_forms: list[np.ndarray | None] = []      # per eq: (n_lin+1,) or None
    y_forms: list[np.ndarray | None] = []      # per eq: (2,) c*y + d or None
    for spec in specs:
        if spec.kind == "fixed":
            alpha_forms.append([])
            z_forms.append(None)
            y_forms.append(None)
            continue
        forms = []
        for _ in range(spec.n_alpha):
            f = np.zeros(n_core + 1, dtype=complex)
            for j in alpha_idx:
                f[j] = _g(rng)
            f[-1] = _g(rng)
            forms.append(f)
        alpha_forms.append(forms)
        z_forms.append(np.concatenate([_g(rng, n_lin), [_g(rng)]])
                       if spec.has_z else None)
        y_forms.append(np.array([_g(rng), _g(rng)]) if spec.has_y else None)

    # start equations in expanded form
    start_eqs = []
    shared = []
    for i, spec in enumerate(specs):
        if spec.kind == "fixed":
            start_eqs.append([])
            shared.append(i)
            continue
        base = _expand_alpha_product(alpha_forms[i], n_core)
        groups = []
        if spec.has_y:
            c, dconst = y_forms[i]
            ye = [0] * n_core
            ye[y_idx] = 1
            terms = []
            for e, coef in base.items():
                e2 = tuple(a + b for a, b in zip(e, ye))
                terms.append(Term(e2, coef * c))
                terms.append(Term(e, coef * dconst))
            groups.append(Group(None, terms))
        elif spec.has_z:
            zf = z_forms[i]
            groups.append(Group(None, [Term(e, coef * zf[-1])
                                       for e, coef in base.items()]))
            for j in range(n_lin):
                if zf[j] != 0:
                    groups.append(Group(j, [Term(e, coef * zf[j])
                                            for e, coef in base.items()]))
        else:
            groups.append(Group(None, [Term(e, coef) for e, coef in base.items()]))
        start_eqs.append(groups)

    gamma = np.exp(2j * np.pi * rng.random())
    hom = _combined_homotopy(system, pvals, start_eqs, gamma, shared_eqs=shared)

    # fixed linear rows, materialized once
    fixed_rows, fixed_rhs = _materialize_linear(system, pvals, shared, n_unk, n_core)

    # capacity of the z block = n_lin minus number of fixed z-only rows;
    # the remaining fixed rows couple all unknowns and absorb leftovers.
    starts = []
    prod_eqs = [i for i, s in enumerate(specs) if s.kind == "product"]
    choices: list[tuple] = []

    def enumerate_choices(pos, used_alpha, used_y, used_z, picked):
        if used_alpha > n_alpha or used_y > (0 if y_idx is None else 1):
            return
        if pos == len(prod_eqs):
            rows = fixed_rows.copy()
            rhs = fixed_rhs.copy()
            extra_rows, extra_rhs = [], []
            for i, pick in picked:
                spec = specs[i]
                if pick == "y":
                    c, dconst = y_forms[i]
                    row = np.zeros(n_unk, dtype=complex)
                    row[y_idx] = c
                    extra_rows.append(row)
                    extra_rhs.append(-dconst)
                elif pick == "z":
                    zf = z_forms[i]
                    row = np.zeros(n_unk, dtype=complex)
                    row[n_core:] = zf[:-1]
                    extra_rows.append(row)
                    extra_rhs.append(-zf[-1])
                else:
                    f = alpha_forms[i][pick]
                    row = np.zeros(n_unk, dtype=complex)
                    row[:n_core] = f[:-1]
                    extra_rows.append(row)
                    extra_rhs.append(-f[-1])
            A = np.vstack([rows] + [np.array(extra_rows)]) if extra_rows else rows
            b = np.concatenate([rhs, np.array(extra_rhs)]) if extra_rhs else rhs
            if A.shape[0] != n_unk:
                return
            try:
                x = np.linalg.solve(A, b)
            except np.linalg.LinAlgError:
                return
            if (np.isfinite(x).all()
                    and np.linalg.norm(A @ x - b) <= 1e-8 * (1 + np.linalg.norm(b))):
                starts.append(x)
            return
        i = prod_eqs[pos]
        spec = specs[i]
        for k in range(spec.n_alpha):
            enumerate_choices(pos + 1, used_alpha + 1, used_y, used_z,
                              picked + [(i, k)])
        if spec.has_y:
            enumerate_choices(pos + 1, used_alpha, used_y + 1, used_z,
                              picked + [(i, "y")])
        if spec.has_z:
            enumerate_choices(pos + 1, used_alpha, used_y, used_z + 1,
                              picked + [(i, "z")])

    enumerate_choices(0, 0, 0, 0, [])
    return hom, (np.array(starts, dtype=complex)
                 if starts else np.zeros((0, n_unk), dtype=complex))


def _g(rng, shape=None):
    if shape is None:
        return complex(rng.standard_normal() + 1j * rng.standard_normal())
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def _materialize_linear(system, pvals, shared, n_unk, n_core):
    """Fixed linear equations as rows A x = b."""
    coeffs = system.coefficients(pvals)
    shape = system.compiled()
    rows, rhs = [], []
    # walk the compiled term order to find each equation's terms
    term_eq = shape.eq_id
    for i in shared:
        row = np.zeros(n_unk, dtype=complex)
        b = 0.0 + 0j
        for t in np.nonzero(term_eq == i)[0]:
            e = shape.exps[t]
            li = shape.lin_id[t]
            c = coeffs[t]
            nz = np.nonzero(e)[0]
            if li >= 0 and not nz.size:
                row[n_core + li] += c
            elif li < 0 and nz.size == 1 and e[nz[0]] == 1:
                row[nz[0]] += c
            elif li < 0 and not nz.size:
                b -= c
            else:
                raise ValueError(f"equation {i} marked fixed is not affine-linear")
        rows.append(row)
        rhs.append(b)
    if rows:
        return np.array(rows), np.array(rhs)
    return np.zeros((0, n_unk), dtype=complex), np.zeros(0, dtype=complex)
