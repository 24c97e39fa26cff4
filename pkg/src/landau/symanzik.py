"""Symanzik polynomials as sparse parametric polynomials.

``ParamPoly`` stores terms as exponent vectors over the Schwinger variables
with coefficients that are exact linear forms in kinematic symbols
(Mandelstams ``s``/``t``/``s12``..., external mass squares ``M1``..., internal
mass squares ``m1``...).  All identities (deletion-contraction, Euler
homogeneity, facet factorizations) hold exactly at this level; rounding
happens only when a polynomial is instantiated with numeric kinematics.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .diagram import Diagram, spanning_trees, spanning_2trees

_CONST = ""  # symbol key reserved for the constant part of a linear form


class LinForm:
    """Linear form c0 + sum_k c_k * symbol_k with exact rational scalars."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=None):
        self.coeffs = {}
        if coeffs:
            for k, v in coeffs.items():
                v = Fraction(v)
                if v:
                    self.coeffs[k] = v

    @classmethod
    def const(cls, value) -> "LinForm":
        return cls({_CONST: Fraction(value)})

    @classmethod
    def symbol(cls, name: str, scale=1) -> "LinForm":
        return cls({name: Fraction(scale)})

    def __bool__(self):
        return bool(self.coeffs)

    def __add__(self, other: "LinForm") -> "LinForm":
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out.get(k, Fraction(0)) + v
        return LinForm(out)

    def __sub__(self, other: "LinForm") -> "LinForm":
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out.get(k, Fraction(0)) - v
        return LinForm(out)

    def __neg__(self) -> "LinForm":
        return LinForm({k: -v for k, v in self.coeffs.items()})

    def scaled(self, factor) -> "LinForm":
        factor = Fraction(factor)
        return LinForm({k: v * factor for k, v in self.coeffs.items()})

    def symbols(self):
        return {k for k in self.coeffs if k != _CONST}

    def substitute(self, mapping: dict[str, "LinForm"]) -> "LinForm":
        """Replace each symbol by a linear form; constants pass through."""
        out = LinForm({_CONST: self.coeffs.get(_CONST, Fraction(0))})
        for k, v in self.coeffs.items():
            if k == _CONST:
                continue
            if k not in mapping:
                raise KeyError(f"no substitution for symbol {k!r}")
            out = out + mapping[k].scaled(v)
        return out

    def value(self, values: dict[str, complex]) -> complex:
        tot = complex(self.coeffs.get(_CONST, Fraction(0)))
        for k, v in self.coeffs.items():
            if k == _CONST:
                continue
            if k not in values:
                raise KeyError(f"missing value for symbol {k!r}")
            tot += complex(v) * values[k]
        return tot

    def exact_value(self, values: dict[str, Fraction]) -> Fraction:
        tot = self.coeffs.get(_CONST, Fraction(0))
        for k, v in self.coeffs.items():
            if k != _CONST:
                tot += v * Fraction(values[k])
        return tot

    def __eq__(self, other):
        return isinstance(other, LinForm) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(frozenset(self.coeffs.items()))

    def __repr__(self):
        if not self.coeffs:
            return "0"
        bits = []
        for k in sorted(self.coeffs, key=lambda x: (x != _CONST, x)):
            c = self.coeffs[k]
            name = k if k else ""
            if name:
                piece = f"{c}*{name}" if abs(c) != 1 else (name if c > 0 else f"-{name}")
            else:
                piece = str(c)
            bits.append(piece)
        txt = " + ".join(bits).replace("+ -", "- ")
        return txt


class ParamPoly:
    """Sparse polynomial in named variables with LinForm coefficients."""

    __slots__ = ("vars", "terms")

    def __init__(self, variables, terms=None):
        self.vars = tuple(variables)
        self.terms: dict[tuple[int, ...], LinForm] = {}
        if terms:
            for e, c in terms.items():
                if not isinstance(c, LinForm):
                    c = LinForm.const(c)
                if c:
                    if len(e) != len(self.vars):
                        raise ValueError("exponent length mismatch")
                    self.terms[tuple(e)] = c

    # -- constructors ------------------------------------------------------
    @classmethod
    def zero(cls, variables) -> "ParamPoly":
        return cls(variables)

    @classmethod
    def monomial(cls, variables, exps, coeff=1) -> "ParamPoly":
        c = coeff if isinstance(coeff, LinForm) else LinForm.const(coeff)
        return cls(variables, {tuple(exps): c})

    @classmethod
    def variable(cls, variables, name) -> "ParamPoly":
        e = [0] * len(variables)
        e[list(variables).index(name)] = 1
        return cls(variables, {tuple(e): LinForm.const(1)})

    # -- ring operations ---------------------------------------------------
    def _check(self, other):
        if self.vars != other.vars:
            raise ValueError("variable sets differ")

    def __add__(self, other: "ParamPoly") -> "ParamPoly":
        self._check(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = out.get(e)
            out[e] = c if s is None else s + c
        return ParamPoly(self.vars, out)

    def __sub__(self, other: "ParamPoly") -> "ParamPoly":
        return self + other.scaled(-1)

    def __mul__(self, other: "ParamPoly") -> "ParamPoly":
        # At most one side may carry kinematic symbols: coefficient forms
        # stay linear, so products of two symbol-bearing polys are rejected.
        self._check(other)
        out: dict[tuple[int, ...], LinForm] = {}
        for e1, c1 in self.terms.items():
            sym1 = bool(c1.symbols())
            for e2, c2 in other.terms.items():
                if sym1 and c2.symbols():
                    raise ValueError("product would be quadratic in kinematic symbols")
                e = tuple(a + b for a, b in zip(e1, e2))
                if sym1:
                    c = c1.scaled(c2.coeffs.get(_CONST, Fraction(0)))
                elif c2.symbols():
                    c = c2.scaled(c1.coeffs.get(_CONST, Fraction(0)))
                else:
                    c = LinForm.const(c1.coeffs.get(_CONST, Fraction(0))
                                      * c2.coeffs.get(_CONST, Fraction(0)))
                s = out.get(e)
                out[e] = c if s is None else s + c
        return ParamPoly(self.vars, out)

    def scaled(self, factor) -> "ParamPoly":
        return ParamPoly(self.vars, {e: c.scaled(factor) for e, c in self.terms.items()})

    def coeff_scaled(self, form: LinForm) -> "ParamPoly":
        """Multiply every coefficient by a linear form (coeffs must be constant)."""
        out = {}
        for e, c in self.terms.items():
            if c.symbols():
                raise ValueError("coefficients already carry symbols")
            out[e] = form.scaled(c.coeffs.get(_CONST, Fraction(0)))
        return ParamPoly(self.vars, out)

    def diff(self, name: str) -> "ParamPoly":
        i = self.vars.index(name)
        out = {}
        for e, c in self.terms.items():
            if e[i]:
                e2 = list(e)
                e2[i] -= 1
                key = tuple(e2)
                add = c.scaled(e[i])
                s = out.get(key)
                out[key] = add if s is None else s + add
        return ParamPoly(self.vars, out)

    def set_var_to_one(self, name: str) -> "ParamPoly":
        """Substitute a variable by 1 and drop it from the variable list."""
        i = self.vars.index(name)
        newvars = self.vars[:i] + self.vars[i + 1:]
        out: dict[tuple[int, ...], LinForm] = {}
        for e, c in self.terms.items():
            key = e[:i] + e[i + 1:]
            s = out.get(key)
            out[key] = c if s is None else s + c
        return ParamPoly(newvars, out)

    def extend_vars(self, variables) -> "ParamPoly":
        """Reinterpret over a superset of variables (new exponents zero)."""
        variables = tuple(variables)
        pos = [variables.index(v) for v in self.vars]
        out = {}
        for e, c in self.terms.items():
            e2 = [0] * len(variables)
            for p, k in zip(pos, e):
                e2[p] = k
            out[tuple(e2)] = c
        return ParamPoly(variables, out)

    # -- queries -----------------------------------------------------------
    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=0)

    def is_homogeneous(self) -> bool:
        degs = {sum(e) for e in self.terms}
        return len(degs) <= 1

    def symbols(self) -> set[str]:
        out = set()
        for c in self.terms.values():
            out |= c.symbols()
        return out

    def support(self):
        return sorted(self.terms)

    def __eq__(self, other):
        return (isinstance(other, ParamPoly) and self.vars == other.vars
                and self.terms == other.terms)

    def __bool__(self):
        return bool(self.terms)

    # -- evaluation --------------------------------------------------------
    def substitute_symbols(self, mapping: dict[str, LinForm]) -> "ParamPoly":
        out = {}
        for e, c in self.terms.items():
            c2 = c.substitute(mapping)
            if c2:
                out[e] = c2
        return ParamPoly(self.vars, out)

    def substitute_numeric(self, values: dict[str, complex],
                           dropout: float = 0.0) -> "NumPoly":
        """Instantiate kinematics; coefficients below ``dropout`` are reported."""
        coeffs = {}
        dropped = []
        scale = 0.0
        for e, c in self.terms.items():
            z = c.value(values)
            coeffs[e] = z
            scale = max(scale, abs(z))
        if dropout:
            for e, z in list(coeffs.items()):
                if abs(z) <= dropout * scale:
                    dropped.append(e)
        return NumPoly(self.vars, coeffs, dropped=tuple(dropped))

    def exact_eval(self, alpha: dict[str, Fraction],
                   values: dict[str, Fraction]) -> Fraction:
        tot = Fraction(0)
        for e, c in self.terms.items():
            mono = Fraction(1)
            for v, k in zip(self.vars, e):
                if k:
                    mono *= Fraction(alpha[v]) ** k
            tot += mono * c.exact_value(values)
        return tot

    def __repr__(self):
        return format_poly(self)


@dataclass(frozen=True)
class NumPoly:
    """ParamPoly after numeric substitution: complex coefficients."""

    vars: tuple[str, ...]
    coeffs: dict[tuple[int, ...], complex]
    dropped: tuple = ()

    def evaluate(self, point: dict[str, complex]) -> complex:
        tot = 0j
        for e, c in self.coeffs.items():
            mono = 1.0 + 0j
            for v, k in zip(self.vars, e):
                if k:
                    mono *= point[v] ** k
            tot += c * mono
        return tot

    def degree(self) -> int:
        return max((sum(e) for e, c in self.coeffs.items() if c != 0), default=0)


# ---------------------------------------------------------------------------
# kinematic symbol conventions
# ---------------------------------------------------------------------------

def alpha_names(num_edges: int) -> tuple[str, ...]:
    return tuple(f"a{e}" for e in range(1, num_edges + 1))


def mandelstam_names(num_legs: int) -> tuple[str, ...]:
    if num_legs <= 3:
        return ()
    if num_legs == 4:
        return ("s", "t")
    if num_legs == 5:
        return ("s12", "s23", "s34", "s45", "s51")
    raise ValueError("only diagrams with up to 5 legs carry Mandelstam symbols")


def external_mass_names(num_legs: int) -> tuple[str, ...]:
    return tuple(f"M{i}" for i in range(1, num_legs + 1))


def internal_mass_names(num_edges: int) -> tuple[str, ...]:
    return tuple(f"m{e}" for e in range(1, num_edges + 1))


def kinematic_symbols(d: Diagram) -> tuple[str, ...]:
    return (mandelstam_names(d.num_legs) + external_mass_names(d.num_legs)
            + internal_mass_names(d.num_edges))


def _solve_dot_products(n: int) -> dict[frozenset, LinForm]:
    """Express sigma_ij = 2 p_i . p_j in the canonical invariant basis.

    Uses the basis Mandelstams plus momentum conservation
    sum_{j != i} sigma_ij = -2 M_i.  Exact rational solve.
    """
    pairs = [frozenset((i, j)) for i, j in itertools.combinations(range(1, n + 1), 2)]
    index = {p: k for k, p in enumerate(pairs)}
    rows = []
    rhs = []
    if n == 4:
        basis = {frozenset((1, 2)): "s", frozenset((2, 3)): "t"}
    elif n == 5:
        basis = {frozenset((i, i % 5 + 1)): f"s{i}{i % 5 + 1}" for i in range(1, 6)}
    else:
        basis = {}
    for pair, name in basis.items():
        i, j = sorted(pair)
        row = [Fraction(0)] * len(pairs)
        row[index[pair]] = Fraction(1)
        rows.append(row)
        rhs.append(LinForm.symbol(name) - LinForm.symbol(f"M{i}") - LinForm.symbol(f"M{j}"))
    for i in range(1, n + 1):
        row = [Fraction(0)] * len(pairs)
        for j in range(1, n + 1):
            if j != i:
                row[index[frozenset((i, j))]] = Fraction(1)
        rows.append(row)
        rhs.append(LinForm.symbol(f"M{i}", -2))
    if n == 2:
        rows, rhs = rows[:1], rhs[:1]  # p1 = -p2 makes the second row redundant
    # Gaussian elimination with LinForm right-hand sides
    m = len(pairs)
    sol: list[LinForm | None] = [None] * m
    rows = [row[:] for row in rows]
    rhs = list(rhs)
    r = 0
    for col in range(m):
        piv = next((k for k in range(r, len(rows)) if rows[k][col] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        rhs[r], rhs[piv] = rhs[piv], rhs[r]
        inv = Fraction(1) / rows[r][col]
        rows[r] = [x * inv for x in rows[r]]
        rhs[r] = rhs[r].scaled(inv)
        for k in range(len(rows)):
            if k != r and rows[k][col]:
                f = rows[k][col]
                rows[k] = [x - f * y for x, y in zip(rows[k], rows[r])]
                rhs[k] = rhs[k] - rhs[r].scaled(f)
        r += 1
    if r < m:
        raise ValueError(f"dot-product system is rank deficient for n={n}")
    for k in range(m):
        col = next(c for c in range(m) if rows[k][c] != 0)
        sol[col] = rhs[k]
    return {pairs[k]: sol[k] for k in range(m)}


def momentum_square(legs: frozenset[int], n: int) -> LinForm:
    """(sum_{i in legs} p_i)^2 in the canonical basis for n external legs."""
    legs = sorted(legs)
    if len(legs) == 1:
        return LinForm.symbol(f"M{legs[0]}")
    sigma = _sigma_cache.get(n)
    if sigma is None:
        sigma = _solve_dot_products(n)
        _sigma_cache[n] = sigma
    out = LinForm()
    for i in legs:
        out = out + LinForm.symbol(f"M{i}")
    for i, j in itertools.combinations(legs, 2):
        out = out + sigma[frozenset((i, j))]
    return out


_sigma_cache: dict[int, dict] = {}


# ---------------------------------------------------------------------------
# Symanzik polynomials
# ---------------------------------------------------------------------------

def first_symanzik(d: Diagram) -> ParamPoly:
    """U_G = sum over spanning trees of the product of removed alphas."""
    names = alpha_names(d.num_edges)
    all_ids = set(range(1, d.num_edges + 1))
    terms: dict[tuple[int, ...], LinForm] = {}
    for tree in spanning_trees(d):
        e = [0] * d.num_edges
        for i in all_ids - tree.kept:
            e[i - 1] += 1
        key = tuple(e)
        terms[key] = terms.get(key, LinForm()) + LinForm.const(1)
    return ParamPoly(names, terms)


def two_tree_sum(d: Diagram, legs: frozenset[int]) -> ParamPoly:
    """F_{G,S}: sum over 2-trees separating ``legs`` of removed-alpha products."""
    names = alpha_names(d.num_edges)
    all_ids = set(range(1, d.num_edges + 1))
    terms: dict[tuple[int, ...], LinForm] = {}
    for forest in spanning_2trees(d, set(legs)):
        e = [0] * d.num_edges
        for i in all_ids - forest.kept:
            e[i - 1] += 1
        key = tuple(e)
        terms[key] = terms.get(key, LinForm()) + LinForm.const(1)
    return ParamPoly(names, terms)


def second_symanzik(d: Diagram) -> ParamPoly:
    """F_G in the canonical Mandelstam/mass basis, exact coefficients."""
    if d.num_legs < 2:
        raise ValueError("second Symanzik polynomial needs at least 2 legs")
    if d.num_legs > 5:
        raise ValueError("canonical basis implemented for up to 5 legs")
    names = alpha_names(d.num_edges)
    n = d.num_legs
    out = ParamPoly.zero(names)
    seen = set()
    for r in range(1, n // 2 + 1):
        for combo in itertools.combinations(range(1, n + 1), r):
            S = frozenset(combo)
            comp = frozenset(range(1, n + 1)) - S
            key = S if 1 in S else comp
            if key in seen:
                continue
            seen.add(key)
            fgs = two_tree_sum(d, key)
            if fgs:
                out = out + fgs.coeff_scaled(momentum_square(key, n))
    mass = ParamPoly.zero(names)
    for e in range(1, d.num_edges + 1):
        ae = ParamPoly.variable(names, f"a{e}")
        mass = mass + ae.coeff_scaled(LinForm.symbol(f"m{e}"))
    return out - mass * first_symanzik(d)


def partials(f: ParamPoly) -> list[ParamPoly]:
    """All first partial derivatives with respect to the alpha variables."""
    return [f.diff(v) for v in f.vars if v.startswith("a")]


def format_poly(p: ParamPoly | NumPoly) -> str:
    """Deterministic plain-text form, graded-lex monomial order."""
    if isinstance(p, NumPoly):
        items = [(e, c) for e, c in p.coeffs.items() if c != 0]
    else:
        items = list(p.terms.items())
    items.sort(key=lambda ec: (-sum(ec[0]), tuple(-x for x in ec[0])))
    if not items:
        return "0"
    bits = []
    for e, c in items:
        mono = "*".join(f"{v}^{k}" if k > 1 else v
                        for v, k in zip(p.vars, e) if k)
        cs = repr(c) if isinstance(c, LinForm) else repr(c)
        if mono:
            bits.append(f"({cs})*{mono}" if not _is_plain_one(c) else mono)
        else:
            bits.append(f"({cs})")
    return " + ".join(bits)


def _is_plain_one(c) -> bool:
    return isinstance(c, LinForm) and c.coeffs == {_CONST: Fraction(1)}
