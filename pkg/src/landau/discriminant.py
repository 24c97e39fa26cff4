"""Witness sets, monodromy decomposition, sampling, and interpolation.

The singularity locus of a diagram in a kinematic chart is computed by
slicing the saturated incidence system with random linear equations in the
chart coordinates, solving by a multihomogeneous start system, counting
distinct projections (the degree), splitting the witness points into
monodromy orbits (the irreducible components), then sampling each component
by moving the slice and interpolating a homogeneous polynomial through the
projected samples.  Rational coefficients are recovered by continued
fractions and verified on held-out samples.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .diagram import Diagram
from .kinematics import Chart
from .landau_system import IncidenceSystem, build_incidence, slice_system
from .symanzik import LinForm, ParamPoly
from .tracker import (Homotopy, ProductSpec, Solution, TrackOptions,
                      cluster_distinct, linear_product_start, newton_polish,
                      refine, track)
from .tracker.polysystem import Group, PolySystem, Term

PROJ_TOL = 1e-6


class DegreeError(RuntimeError):
    """Raised when a slice yields no witness points at the requested codim."""


class KernelDimensionError(RuntimeError):
    def __init__(self, dim, msg=""):
        super().__init__(msg or f"interpolation kernel has dimension {dim}, expected 1")
        self.dim = dim


@dataclass
class WitnessData:
    """A sliced incidence solve: the raw solutions plus their projections."""

    diagram: Diagram
    chart: Chart
    system: PolySystem
    incidence: IncidenceSystem
    pvals: np.ndarray
    solutions: list[Solution]
    projections: np.ndarray  # normalized chart points, one per finite solution
    reps: np.ndarray         # distinct projected representatives
    codim: int
    seed: int
    telemetry: dict = field(default_factory=dict)

    @property
    def degree(self) -> int:
        return len(self.reps)


@dataclass
class SampleCloud:
    """Projected samples from one monodromy orbit (or the whole witness)."""

    chart: Chart
    points: np.ndarray           # (n, q+1) normalized complex chart points
    mp_points: list | None = None  # optional mpmath high-precision rows
    component: int = -1
    slice_ids: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=int))


@dataclass
class DiscPoly:
    """Homogeneous interpolant in the chart coordinates."""

    chart_params: tuple[str, ...]
    degree: int
    exps: list[tuple[int, ...]]
    coeffs: np.ndarray
    gap: float
    basis: str = "monomial"

    def evaluate(self, z) -> complex:
        z = np.asarray(z, dtype=complex)
        tot = 0j
        for e, c in zip(self.exps, self.coeffs):
            mono = 1.0 + 0j
            for zi, k in zip(z, e):
                if k:
                    mono *= zi ** k
            tot += c * mono
        return tot


# ---------------------------------------------------------------------------
# compiling a sliced incidence system
# ---------------------------------------------------------------------------

def compile_sliced(sys: IncidenceSystem) -> tuple[PolySystem, np.ndarray, list[ProductSpec]]:
    """PolySystem over (alphas, y | chart coords) with slice rows as parameters.

    Returns (system, parameter values, product structure for the start
    system builder).
    """
    if sys.slice is None:
        raise ValueError("incidence system has no slice attached")
    d = sys.diagram
    core = sys.unknowns            # a1..a_{E-1}, y
    lin = sys.params               # chart coordinates
    zidx = {p: j for j, p in enumerate(lin)}
    k = sys.slice.rows.shape[0]
    npar_z = len(lin)
    r = sys.slice.ambient.shape[0]
    n_unk = len(core) + npar_z

    params: list[str] = []
    pvals: list[complex] = []

    def new_param(name, value):
        params.append(name)
        pvals.append(complex(value))
        return len(params) - 1

    equations: list[list[Group]] = []
    specs: list[ProductSpec] = []
    L = d.num_loops
    E = d.num_edges
    # incidence equations: constants from the chart-applied linear forms
    for i, eq in enumerate(sys.equations):
        by_group: dict[int | None, list[Term]] = {}
        for e, form in eq.terms.items():
            for sym, val in form.coeffs.items():
                gi = None if sym == "" else zidx[sym]
                by_group.setdefault(gi, []).append(Term(tuple(e), complex(val)))
        equations.append([Group(gi, terms) for gi, terms in sorted(
            by_group.items(), key=lambda kv: (-1 if kv[0] is None else kv[0]))])
        if i < E:
            specs.append(ProductSpec("product", n_alpha=L, has_z=True))
        else:
            n_alpha = 0 if sys.slice.codim <= 1 else (E - 1) + L
            specs.append(ProductSpec("product", n_alpha=n_alpha, has_y=True))
    # slice rows (homogeneous in z), coefficients are parameters
    for i in range(k):
        groups = []
        for j in range(npar_z):
            pj = new_param(f"A{i}_{j}", sys.slice.rows[i, j])
            groups.append(Group(j, [Term((0,) * len(core), 0.0, {pj: 1.0})]))
        equations.append(groups)
        specs.append(ProductSpec("fixed"))
    # dehomogenization row: fixed coefficients, affine
    groups = [Group(None, [Term((0,) * len(core), -1.0)])]
    for j in range(npar_z):
        c = sys.slice.dehom[j]
        if c != 0:
            groups.append(Group(j, [Term((0,) * len(core), complex(c))]))
    equations.append(groups)
    specs.append(ProductSpec("fixed"))
    # ambient squaring rows over all unknowns, coefficients are parameters
    for i in range(r):
        groups = []
        none_terms = [Term((0,) * len(core), -1.0)]
        for v in range(len(core)):
            pj = new_param(f"W{i}_{v}", sys.slice.ambient[i, v])
            e = [0] * len(core)
            e[v] = 1
            none_terms.append(Term(tuple(e), 0.0, {pj: 1.0}))
        groups.append(Group(None, none_terms))
        for j in range(npar_z):
            pj = new_param(f"W{i}_z{j}", sys.slice.ambient[i, len(core) + j])
            groups.append(Group(j, [Term((0,) * len(core), 0.0, {pj: 1.0})]))
        equations.append(groups)
        specs.append(ProductSpec("fixed"))
    system = PolySystem(tuple(core), tuple(lin), tuple(params), equations)
    return system, np.asarray(pvals, dtype=complex), specs


def normalize_projective(z) -> np.ndarray:
    """Scale so the vector has unit norm and a real-positive anchor entry.

    The anchor is the largest-modulus coordinate; using it fixes the phase
    so equal projective points become equal vectors.
    """
    z = np.asarray(z, dtype=complex)
    nrm = np.linalg.norm(z)
    if nrm == 0:
        return z
    z = z / nrm
    a = np.argmax(np.abs(z))
    ph = z[a] / abs(z[a])
    return z / ph


def _finite_sols(sols, min_residual=1e-6):
    return [s for s in sols if s.is_finite() and (s.residual < min_residual
                                                  or s.status == "singular-suspect")]


def solve_witness(d: Diagram, chart: Chart, codim: int, seed: int,
                  opts: TrackOptions | None = None) -> WitnessData:
    """Solve one random slice of the incidence system."""
    q = chart.dim
    if q < codim:
        raise ValueError("chart dimension is smaller than the requested codim")
    inc = slice_system(build_incidence(d, chart), q - codim, seed)
    system, pvals, specs = compile_sliced(inc)
    n_alpha = len(inc.unknowns) - 1
    hom, starts = linear_product_start(
        system, pvals, specs, alpha_idx=list(range(n_alpha)),
        y_idx=n_alpha, seed=seed + 101)
    telemetry = {}
    sols = track(hom, starts, opts, telemetry=telemetry)
    finite = _finite_sols(sols)
    nc = len(inc.unknowns)
    projections = np.array([normalize_projective(s.point[nc:]) for s in finite]
                           ) if finite else np.zeros((0, q + 1))
    reps, sizes, labels = cluster_distinct(projections, PROJ_TOL)
    telemetry["start_paths"] = len(starts)
    return WitnessData(d, chart, system, inc, pvals, finite, projections,
                       reps, codim, seed, telemetry)


def degree_projection(d: Diagram, chart: Chart, codim: int = 1, seed: int = 0,
                      retries: int = 3, opts: TrackOptions | None = None
                      ) -> tuple[int, WitnessData]:
    """Distinct projected-point count of a generic slice (the degree).

    Re-randomizes the slice on empty results; raises DegreeError when every
    retry comes back empty, which suggests a higher-codimension locus.
    """
    last = None
    for attempt in range(retries):
        w = solve_witness(d, chart, codim, seed + 7919 * attempt, opts)
        if w.degree > 0:
            return w.degree, w
        last = w
    raise DegreeError(
        f"no witness points at codim {codim} after {retries} slices "
        f"(telemetry {last.telemetry if last else {}})")


# ---------------------------------------------------------------------------
# monodromy decomposition
# ---------------------------------------------------------------------------

def _retarget(w: WitnessData, points, p_from, p_to, opts=None):
    hom = Homotopy(w.system, w.system.coefficients(p_from),
                   w.system.coefficients(p_to))
    return track(hom, points, opts)


def _random_params_like(w: WitnessData, rng) -> np.ndarray:
    return rng.standard_normal(len(w.pvals)) + 1j * rng.standard_normal(len(w.pvals))


def monodromy_decompose(w: WitnessData, loops: int = 5, seed: int = 0,
                        max_loops: int = 40, opts: TrackOptions | None = None
                        ) -> list[list[int]]:
    """Partition witness solutions into monodromy orbits.

    Tracks the witness set around random triangle loops in slice-coefficient
    space until ``loops`` consecutive loops merge nothing.
    """
    rng = np.random.default_rng(seed)
    n = len(w.solutions)
    if n <= 1:
        return [list(range(n))]
    pts = np.array([s.point for s in w.solutions])
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    def ngroups():
        return len({find(i) for i in range(n)})

    streak = 0
    for _ in range(max_loops):
        if ngroups() == 1 or streak >= loops:
            break
        p1 = _random_params_like(w, rng)
        p2 = _random_params_like(w, rng)
        cur = pts
        okmask = np.ones(n, dtype=bool)
        for a, b in ((w.pvals, p1), (p1, p2), (p2, w.pvals)):
            sols = _retarget(w, cur, a, b, opts)
            nxt = np.array([s.point for s in sols])
            okmask &= np.array([s.is_finite() for s in sols])
            cur = np.where(okmask[:, None], nxt, cur)
        merged = False
        for i in np.nonzero(okmask)[0]:
            dists = np.linalg.norm(pts - cur[i], axis=1) / (
                1.0 + np.linalg.norm(pts, axis=1))
            j = int(np.argmin(dists))
            if dists[j] < 1e-5 and find(i) != find(j):
                parent[find(i)] = find(j)
                merged = True
        streak = 0 if merged else streak + 1
    groups: dict[int, list[int]] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    return sorted(groups.values(), key=lambda g: (len(g), g))


def group_projected_degree(w: WitnessData, group: list[int]) -> int:
    reps, _, _ = cluster_distinct(w.projections[group], PROJ_TOL)
    return len(reps)


# ---------------------------------------------------------------------------
# sampling
# ---------------------------------------------------------------------------

def sample_projection(w: WitnessData, group: list[int] | None = None,
                      npoints: int = 500, precision: int = 0, seed: int = 0,
                      max_retargets: int = 2000,
                      opts: TrackOptions | None = None) -> SampleCloud:
    """Harvest projected points by retargeting the slice repeatedly."""
    rng = np.random.default_rng(seed)
    idx = list(range(len(w.solutions))) if group is None else list(group)
    pts = np.array([w.solutions[i].point for i in idx])
    nc = len(w.incidence.unknowns)
    rows, mp_rows, slice_ids = [], [], []
    retarget = 0
    while len(rows) < npoints and retarget < max_retargets:
        retarget += 1
        p_t = _random_params_like(w, rng)
        sols = _retarget(w, pts, w.pvals, p_t, opts)
        for s in sols:
            if not (s.is_finite() and s.residual < 1e-6):
                continue
            if precision:
                xs, resid = refine(w.system, p_t, s.point, precision)
                mp_rows.append(xs[nc:])
                rows.append(np.array([complex(v) for v in xs[nc:]]))
            else:
                rows.append(s.point[nc:].copy())
            slice_ids.append(retarget)
        if retarget * max(1, len(idx)) > 50 * npoints and not rows:
            break
    if len(rows) < npoints:
        raise RuntimeError(
            f"collected only {len(rows)}/{npoints} samples after "
            f"{retarget} retargets")
    points = np.array([normalize_projective(r) for r in rows])
    return SampleCloud(w.chart, points,
                       mp_points=mp_rows or None,
                       component=-1 if group is None else 0,
                       slice_ids=np.array(slice_ids))


# ---------------------------------------------------------------------------
# interpolation
# ---------------------------------------------------------------------------

def homogeneous_exponents(nvars: int, degree: int) -> list[tuple[int, ...]]:
    """Exponent vectors of total degree == degree, graded-lex order."""
    out = []
    for combo in itertools.combinations_with_replacement(range(nvars), degree):
        e = [0] * nvars
        for c in combo:
            e[c] += 1
        out.append(tuple(e))
    out.sort(key=lambda e: tuple(-x for x in e))
    return out


def symmetric_basis_exponents(degree: int):
    """Exponents (a, b, c, d) for M^a m^b sigma2^c sigma3^d of weight degree."""
    out = []
    for dnum in range(degree // 3 + 1):
        for c in range((degree - 3 * dnum) // 2 + 1):
            rest = degree - 3 * dnum - 2 * c
            for a in range(rest + 1):
                out.append((a, rest - a, c, dnum))
    return out


def _eval_basis_rows(points, exps):
    pts = np.asarray(points, dtype=complex)
    cols = []
    for e in exps:
        col = np.ones(pts.shape[0], dtype=complex)
        for v, k in enumerate(e):
            if k:
                col = col * pts[:, v] ** k
        cols.append(col)
    return np.stack(cols, axis=1)


def _symmetric_rows(points, exps):
    """Rows for the (M, m, sigma2, sigma3) basis of a 4-point chart."""
    pts = np.asarray(points, dtype=complex)
    s, t, M, m = pts[:, 0], pts[:, 1], pts[:, 2], pts[:, 3]
    u = 4 * M - s - t
    sig2 = s * t + t * u + u * s
    sig3 = s * t * u
    vals = np.stack([M, m, sig2, sig3], axis=1)
    cols = []
    for e in exps:
        col = np.ones(pts.shape[0], dtype=complex)
        for v, k in enumerate(e):
            if k:
                col = col * vals[:, v] ** k
        cols.append(col)
    return np.stack(cols, axis=1)


def interpolate_deg(cloud: SampleCloud, degree: int, chart: Chart,
                    basis: str = "monomial", holdout: float = 0.2,
                    seed: int = 0, gap_min: float = 1e4,
                    use_mp: bool = False) -> DiscPoly:
    """Kernel-vector interpolation of a homogeneous polynomial.

    Splits off a held-out fraction, builds the Vandermonde matrix of
    degree-d basis functions on the rest, takes the smallest right singular
    vector, and validates on the held-out rows.
    """
    nvars = len(chart.params)
    if basis == "monomial":
        exps = homogeneous_exponents(nvars, degree)
        rows_of = _eval_basis_rows
    elif basis == "symmetric":
        if nvars != 4:
            raise ValueError("symmetric basis needs a (s, t, M, m) chart")
        exps = symmetric_basis_exponents(degree)
        rows_of = _symmetric_rows
    else:
        raise ValueError(f"unknown basis {basis!r}")
    nbasis = len(exps)
    n = cloud.points.shape[0]
    need = math.ceil(1.2 * (nbasis - 1))
    rng = np.random.default_rng(seed)
    perm = rng.permutation(n)
    nhold = max(1, int(holdout * n)) if n > nbasis else 0
    fit_idx, hold_idx = perm[nhold:], perm[:nhold]
    if len(fit_idx) < need:
        raise ValueError(
            f"need at least {need} fitting samples for degree {degree} "
            f"({nbasis} basis functions), got {len(fit_idx)}")
    if use_mp and cloud.mp_points is not None:
        coeffs, gap = _mp_kernel(cloud, fit_idx, exps, basis)
    else:
        M = rows_of(cloud.points[fit_idx], exps)
        _, sing, vh = np.linalg.svd(M, full_matrices=False)
        kdim = int(np.sum(sing < 1e-10 * sing[0]))
        if kdim > 1:
            raise KernelDimensionError(kdim)
        gap = float(sing[-2] / sing[-1]) if sing[-1] > 0 else np.inf
        coeffs = vh[-1].conj()
    a = np.argmax(np.abs(coeffs))
    coeffs = coeffs / coeffs[a]
    poly = DiscPoly(chart.params, degree, exps, coeffs, gap, basis)
    if nhold:
        resid = _validation_residual(poly, cloud.points[hold_idx], rows_of)
        if resid > 1e-6:
            raise KernelDimensionError(
                1, f"interpolant fails on held-out samples (residual {resid:.2e})")
    return poly


def _validation_residual(poly: DiscPoly, points, rows_of) -> float:
    rows = rows_of(points, poly.exps)
    vals = rows @ poly.coeffs
    scale = np.abs(rows).max(axis=1) * np.abs(poly.coeffs).max()
    return float(np.max(np.abs(vals) / np.maximum(scale, 1e-300)))


def _mp_kernel(cloud, fit_idx, exps, basis):
    """Smallest singular vector at extended precision via mpmath."""
    import mpmath as mp
    pts = [cloud.mp_points[i] for i in fit_idx]
    with mp.workprec(max(128, mp.prec)):
        rows = []
        for p in pts:
            vals = list(p)
            nrm = mp.sqrt(sum((abs(v) ** 2 for v in vals), mp.mpf(0)))
            vals = [v / nrm for v in vals]
            if basis == "symmetric":
                s, t, M, m = vals
                u = 4 * M - s - t
                vals = [M, m, s * t + t * u + u * s, s * t * u]
            row = []
            for e in exps:
                mono = mp.mpc(1)
                for v, k in enumerate(e):
                    for _ in range(k):
                        mono *= vals[v]
                row.append(mono)
            rows.append(row)
        A = mp.matrix(rows)
        # kernel of A via eigen-decomposition of A^H A
        AH = A.H
        G = AH * A
        eigvals, eigvecs = mp.eigsy(mp.matrix([[ (G[i,j]+mp.conj(G[j,i]))/2
                                                for j in range(G.cols)]
                                               for i in range(G.rows)]))
        order = sorted(range(len(eigvals)), key=lambda i: abs(eigvals[i]))
        k0, k1 = order[0], order[1]
        gap = float(mp.sqrt(abs(eigvals[k1]) / max(abs(eigvals[k0]), mp.mpf(1e-300))))
        vec = np.array([complex(eigvecs[i, k0]) for i in range(G.rows)])
    return vec, gap


# ---------------------------------------------------------------------------
# rationalization
# ---------------------------------------------------------------------------

def _best_fraction(x: float, denom_bound: int, tol: float) -> Fraction | None:
    fr = Fraction(x).limit_denominator(denom_bound)
    if abs(float(fr) - x) <= tol:
        return fr
    return None


def rationalize(poly: DiscPoly, denom_bound: int = 10 ** 6,
                tol: float = 1e-6, gap_warn: float = 1e4) -> ParamPoly:
    """Per-coefficient continued-fraction approximation, then clear denominators.

    Returns a primitive integer-coefficient polynomial over the chart
    parameters.  Raises when some coefficient has no nearby small rational.
    """
    import warnings
    if poly.gap < gap_warn:
        warnings.warn(f"singular-value gap {poly.gap:.2e} below {gap_warn:.0e}; "
                      "rationalization may be unreliable")
    coeffs = np.asarray(poly.coeffs)
    if np.abs(coeffs.imag).max() > 100 * tol:
        raise ValueError("coefficients are not real after phase normalization "
                         f"(max imag {np.abs(coeffs.imag).max():.2e})")
    fracs = []
    for c in coeffs.real:
        if abs(c) <= tol:
            fracs.append(Fraction(0))
            continue
        fr = _best_fraction(float(c), denom_bound, tol)
        if fr is None:
            raise ValueError(f"coefficient {c!r} has no rational approximation "
                             f"with denominator <= {denom_bound}")
        fracs.append(fr)
    lcm = 1
    for fr in fracs:
        lcm = lcm * fr.denominator // math.gcd(lcm, fr.denominator)
    ints = [int(fr * lcm) for fr in fracs]
    content = 0
    for v in ints:
        content = math.gcd(content, abs(v))
    if content:
        ints = [v // content for v in ints]
    # sign convention: leading graded-lex coefficient positive
    order = sorted(range(len(poly.exps)), key=lambda i: tuple(-x for x in poly.exps[i]))
    lead = next((i for i in order if ints[i]), None)
    if lead is not None and ints[lead] < 0:
        ints = [-v for v in ints]
    if poly.basis == "symmetric":
        names = ("M", "m", "sigma2", "sigma3")
    else:
        names = poly.chart_params
    terms = {tuple(e): LinForm.const(v) for e, v in zip(poly.exps, ints) if v}
    return ParamPoly(names, terms)


def verify_on_samples(exact: ParamPoly, cloud: SampleCloud, chart: Chart,
                      tol: float = 1e-6) -> float:
    """Max relative residual of an exact polynomial on sample points."""
    vals = []
    names = exact.vars
    for z in cloud.points:
        point = dict(zip(chart.params, z))
        if names != tuple(chart.params):
            s, t, M, m = (point[p] for p in ("s", "t", "M", "m"))
            u = 4 * M - s - t
            point = {"M": M, "m": m, "sigma2": s * t + t * u + u * s,
                     "sigma3": s * t * u}
        tot = 0j
        scale = 0.0
        for e, c in exact.terms.items():
            mono = complex(c.coeffs.get("", 0))
            for v, k in zip(names, e):
                if k:
                    mono *= point[v] ** k
            tot += mono
            scale = max(scale, abs(mono))
        vals.append(abs(tot) / max(scale, 1e-300))
    return float(max(vals)) if vals else 0.0


# ---------------------------------------------------------------------------
# end-to-end pipeline
# ---------------------------------------------------------------------------

@dataclass
class ComponentReport:
    indices: list[int]
    degree: int
    samples: SampleCloud | None = None
    poly: DiscPoly | None = None
    exact: ParamPoly | None = None
    residual: float = np.nan
    note: str = ""


@dataclass
class PipelineReport:
    diagram: Diagram
    chart: Chart
    codim: int
    degree: int
    seed: int
    components: list[ComponentReport]
    degree_check_seeds: tuple[int, int]
    degrees_agree: bool
    telemetry: dict

    @property
    def component_degrees(self) -> list[int]:
        return sorted(c.degree for c in self.components)


def discriminant_pipeline(d: Diagram, chart: Chart, seed: int = 0,
                          codim: int | None = None, loops: int = 5,
                          interpolate: bool = True, precision: int = 0,
                          denom_bound: int = 10 ** 6,
                          basis: str = "monomial",
                          max_basis: int = 4000,
                          opts: TrackOptions | None = None) -> PipelineReport:
    """degree -> decompose -> per-component sample/interpolate/rationalize.

    When ``codim`` is None a codimension-1 search runs first and falls back
    to codimension 2 if the slice misses the locus.  Interpolation is
    skipped (samples only) when the basis would exceed ``max_basis``.
    """
    if codim is None:
        try:
            deg1, w = degree_projection(d, chart, 1, seed, opts=opts)
            codim = 1
        except DegreeError:
            deg1, w = degree_projection(d, chart, 2, seed, opts=opts)
            codim = 2
    else:
        deg1, w = degree_projection(d, chart, codim, seed, opts=opts)
    seed2 = seed + 424243
    deg2, _w2 = degree_projection(d, chart, codim, seed2, opts=opts)
    groups = monodromy_decompose(w, loops=loops, seed=seed + 17, opts=opts)
    comps = []
    for gi, group in enumerate(groups):
        deg_g = group_projected_degree(w, group)
        rep = ComponentReport(group, deg_g)
        if interpolate:
            nbasis = math.comb(deg_g + chart.dim, chart.dim)
            if nbasis > max_basis:
                rep.note = f"samples only: basis size {nbasis} > {max_basis}"
            else:
                try:
                    npts = math.ceil(1.6 * nbasis) + 8
                    rep.samples = sample_projection(
                        w, group, npoints=npts, precision=precision,
                        seed=seed + 1000 + gi, opts=opts)
                    rep.poly = interpolate_deg(rep.samples, deg_g, chart,
                                               basis=basis, seed=seed,
                                               use_mp=precision > 0)
                    rep.exact = rationalize(rep.poly, denom_bound)
                    rep.residual = verify_on_samples(rep.exact, rep.samples, chart)
                except (ValueError, RuntimeError, KernelDimensionError) as exc:
                    rep.note = f"interpolation failed: {exc}"
        comps.append(rep)
    return PipelineReport(d, chart, codim, deg1, seed, comps,
                          (seed, seed2), deg1 == deg2, w.telemetry)
