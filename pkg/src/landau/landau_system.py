"""Landau incidence systems and closed-form one-loop / banana oracles.

The incidence system for a diagram G and chart E consists of the E_G
dehomogenized critical-point equations of the kinematic-weighted graph
polynomial together with one saturation equation ``1 - y*g`` that removes
solutions with a vanishing Schwinger variable or vanishing first graph
polynomial.  Slicing appends random linear equations in the chart
parameters (plus a dehomogenization row, plus ambient rows to square the
system when the search codimension exceeds one).
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .diagram import Diagram
from .kinematics import Chart
from .symanzik import (LinForm, ParamPoly, alpha_names, first_symanzik,
                       internal_mass_names, momentum_square, partials,
                       second_symanzik)


@dataclass(frozen=True)
class SliceSpec:
    """Random linear slice data added to an incidence system.

    ``rows``       : (k, q+1) complex — homogeneous equations in the params
    ``dehom``      : (q+1,) complex — affine row, dehom . z = 1
    ``ambient``    : (r, n_unknowns) complex with constants ``ambient_c`` —
                     generic affine rows over all unknowns, used to cut
                     positive-dimensional fibers to points
    ``seed``       : RNG seed the rows were drawn from
    """

    rows: np.ndarray
    dehom: np.ndarray
    ambient: np.ndarray
    ambient_c: np.ndarray
    seed: int

    @property
    def codim(self) -> int:
        return self.rows.shape[1] - 1 - self.rows.shape[0]


@dataclass(frozen=True)
class IncidenceSystem:
    """Dehomogenized, saturated critical-point system of a diagram."""

    diagram: Diagram
    chart: Chart
    equations: tuple[ParamPoly, ...] = field(compare=False)
    unknowns: tuple[str, ...]
    slice: SliceSpec | None = field(default=None, compare=False)

    @property
    def params(self) -> tuple[str, ...]:
        return self.chart.params

    def dump_json(self) -> str:
        """Equations as term lists, for debugging."""
        eqs = []
        for eq in self.equations:
            terms = []
            for e, c in sorted(eq.terms.items()):
                terms.append({"exps": list(e),
                              "coeff": {k or "1": [v.numerator, v.denominator]
                                        for k, v in c.coeffs.items()}})
            eqs.append(terms)
        data = {"unknowns": list(self.unknowns), "params": list(self.params),
                "equations": eqs}
        if self.slice is not None:
            data["slice"] = {
                "rows": _cplx_list(self.slice.rows),
                "dehom": _cplx_list(self.slice.dehom),
                "ambient": _cplx_list(self.slice.ambient),
                "ambient_c": _cplx_list(self.slice.ambient_c),
                "seed": self.slice.seed,
            }
        return json.dumps(data)


def _cplx_list(a):
    a = np.asarray(a)
    return [[float(z.real), float(z.imag)] for z in a.ravel()] + [list(a.shape)]


def saturation_poly(d: Diagram, variables) -> ParamPoly:
    """g = a1*...*a_{E-1} * U|_{a_E=1}, in the given variable list."""
    u = first_symanzik(d).set_var_to_one(f"a{d.num_edges}")
    g = u.extend_vars(variables)
    for e in range(1, d.num_edges):
        g = g * ParamPoly.variable(variables, f"a{e}")
    return g


def build_incidence(d: Diagram, chart: Chart) -> IncidenceSystem:
    """The E_G partials (a_E = 1) plus the saturation equation 1 - y*g."""
    f = chart.apply(second_symanzik(d))
    last = f"a{d.num_edges}"
    unknowns = tuple(a for a in alpha_names(d.num_edges) if a != last) + ("y",)
    eqs = []
    for df in partials(f):
        eqs.append(df.set_var_to_one(last).extend_vars(unknowns))
    g = saturation_poly(d, unknowns)
    one = ParamPoly.monomial(unknowns, (0,) * len(unknowns), 1)
    sat = one - g * ParamPoly.variable(unknowns, "y")
    eqs.append(sat)
    return IncidenceSystem(d, chart, tuple(eqs), unknowns)


def slice_system(sys: IncidenceSystem, k: int, seed: int,
                 dehom: str = "random") -> IncidenceSystem:
    """Append k random parameter rows, a dehomogenization, and squaring rows.

    ``k = q-1`` cuts a line in the chart (codimension-1 search), ``k = q-2``
    a plane (codimension-2 search).  With fewer than q-1 parameter rows the
    solution set of the restricted incidence variety may be a curve; generic
    affine rows over all unknowns are appended so the final system is always
    square.
    """
    q = sys.chart.dim
    if not 0 <= k <= q:
        raise ValueError(f"slice count k={k} out of range for a chart of dim {q}")
    rng = np.random.default_rng(seed)
    npar = q + 1
    rows = _gaussian(rng, (k, npar))
    if dehom == "random":
        drow = _gaussian(rng, (npar,))
    elif dehom == "last":
        drow = np.zeros(npar, dtype=complex)
        drow[-1] = 1.0
    else:
        raise ValueError("dehom must be 'random' or 'last'")
    n_amb = max(0, (q - 1) - k)
    n_unk = len(sys.unknowns) + npar
    ambient = _gaussian(rng, (n_amb, n_unk))
    ambient_c = _gaussian(rng, (n_amb,))
    spec = SliceSpec(rows, drow, ambient, ambient_c, seed)
    return IncidenceSystem(sys.diagram, sys.chart, sys.equations,
                           sys.unknowns, spec)


def _gaussian(rng, shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


# ---------------------------------------------------------------------------
# one-loop oracle
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class YMatrix:
    """Symmetric n x n matrix of linear forms for the one-loop family."""

    n: int
    entries: tuple = field(compare=False)  # tuple of tuples of LinForm

    def applied(self, chart: Chart) -> "YMatrix":
        ent = tuple(tuple(f.substitute(chart.mapping) for f in row)
                    for row in self.entries)
        return YMatrix(self.n, ent)

    def numeric(self, values: dict[str, complex]) -> np.ndarray:
        return np.array([[f.value(values) for f in row] for row in self.entries],
                        dtype=complex)


def one_loop_y_matrix(n: int) -> YMatrix:
    """Entries Y_ij = (p_i + ... + p_{j-1})^2 - m_i - m_j, Y_ii = -2 m_i."""
    ent = []
    for i in range(1, n + 1):
        row = []
        for j in range(1, n + 1):
            a, b = min(i, j), max(i, j)
            if a == b:
                row.append(LinForm.symbol(f"m{a}", -2))
            else:
                legs = frozenset(range(a, b))
                row.append(momentum_square(legs, n)
                           - LinForm.symbol(f"m{a}") - LinForm.symbol(f"m{b}"))
        ent.append(tuple(row))
    return YMatrix(n, tuple(ent))


def det_poly(y: YMatrix) -> ParamPoly:
    """Exact determinant as a polynomial in the symbols of the entries."""
    syms = sorted({s for row in y.entries for f in row for s in f.symbols()})
    out = ParamPoly.zero(syms)
    zero = [0] * len(syms)
    idx = {s: i for i, s in enumerate(syms)}
    for perm in itertools.permutations(range(y.n)):
        sign = _perm_sign(perm)
        term = ParamPoly.monomial(syms, tuple(zero), sign)
        for i, j in enumerate(perm):
            f = y.entries[i][j]
            exp_poly = ParamPoly(syms, {
                tuple(_unit(idx.get(k), len(syms))): v
                for k, v in f.coeffs.items()})
            term = term * exp_poly
        out = out + term
    return out


def _unit(i, n):
    e = [0] * n
    if i is not None:
        e[i] = 1
    return e


def _perm_sign(perm) -> int:
    sign = 1
    seen = [False] * len(perm)
    for i in range(len(perm)):
        if seen[i]:
            continue
        clen = 0
        j = i
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            clen += 1
        if clen % 2 == 0:
            sign = -sign
    return sign


def kernel_admissible(ymat: np.ndarray, tol: float = 1e-8) -> bool:
    """Check ker Y is not inside {a1*...*an*(a1+...+an) = 0}.

    Uses the smallest singular vector as the kernel direction; valid when
    the kernel is one-dimensional (the generic situation on one component).
    """
    _, sing, vh = np.linalg.svd(ymat)
    v = vh[-1].conj()
    scale = np.abs(v).max()
    if scale == 0:
        return False
    v = v / scale
    if np.min(np.abs(v)) < tol:
        return False
    return abs(np.sum(v)) >= tol


def one_loop_oracle(n: int, chart: Chart):
    """Restricted Y matrix, exact det polynomial, and admissibility test."""
    y = one_loop_y_matrix(n).applied(chart)
    det = det_poly(y)

    def admissible(values: dict[str, complex], tol: float = 1e-8) -> bool:
        return kernel_admissible(y.numeric(values), tol)

    return y, det, admissible


# ---------------------------------------------------------------------------
# banana oracle
# ---------------------------------------------------------------------------

def banana_oracle(masses) -> list[dict]:
    """Threshold data for the E-edge banana with positive masses.

    One entry per projectively-inequivalent sign vector (eta_1 = +1):
    the threshold position s = (sum eta_e m_e)^2 and the Schwinger point
    alpha = (eta_1/m_1 : ... : eta_E/m_E).
    """
    masses = [Fraction(m) for m in masses]
    if any(m <= 0 for m in masses):
        raise ValueError("banana oracle needs positive masses")
    out = []
    E = len(masses)
    for rest in itertools.product((1, -1), repeat=E - 1):
        eta = (1,) + rest
        tot = sum(h * m for h, m in zip(eta, masses))
        out.append({
            "signs": eta,
            "s": tot * tot,
            "alpha": tuple(Fraction(h, 1) / m for h, m in zip(eta, masses)),
        })
    return out


# ---------------------------------------------------------------------------
# exact full-rank check of the kinematic coefficient matrix
# ---------------------------------------------------------------------------

def mass_minor_identity(d: Diagram, alpha: dict[str, Fraction]) -> tuple[Fraction, Fraction]:
    """Determinant of the internal-mass column block vs (L+1) * U(alpha)^E.

    The critical-point equations are linear in the kinematic symbols; the
    minor of their coefficient matrix over the internal-mass columns equals
    (L_G + 1) * U_G(alpha)^{E_G} identically.  Returns both sides, exactly.
    """
    f = second_symanzik(d)
    u = first_symanzik(d)
    E = d.num_edges
    mass_syms = internal_mass_names(E)
    mat = []
    for df in partials(f):
        row = []
        for sym in mass_syms:
            coeff_poly = ParamPoly(df.vars, {
                e: LinForm.const(c.coeffs.get(sym, Fraction(0)))
                for e, c in df.terms.items()})
            row.append(coeff_poly.exact_eval(alpha, {}))
        mat.append(row)
    det = _exact_det(mat)
    uval = u.exact_eval(alpha, {})
    # the mass block is -(U*I + dU alpha^T), hence the (-1)^E
    return det, Fraction(-1) ** E * (d.num_loops + 1) * uval ** E


def _exact_det(m):
    m = [row[:] for row in m]
    n = len(m)
    det = Fraction(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            m[col], m[piv] = m[piv], m[col]
            det = -det
        det *= m[col][col]
        inv = Fraction(1) / m[col][col]
        for r in range(col + 1, n):
            fct = m[r][col] * inv
            if fct:
                m[r] = [x - fct * y for x, y in zip(m[r], m[col])]
    return det
