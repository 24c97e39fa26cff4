"""Kinematic charts: linear restrictions of the projectivized kinematic space.

A chart maps every kinematic symbol of a diagram to a linear form in a short
list of free parameters (the homogeneous coordinates of the restricted
space).  Equal-mass assumptions, pinned mass patterns, and the identity
chart are all instances.  Dehomogenization is deferred to the solvers, which
add one affine row in the chart coordinates.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .diagram import Diagram
from .symanzik import (LinForm, ParamPoly, external_mass_names,
                       internal_mass_names, kinematic_symbols,
                       mandelstam_names)


@dataclass(frozen=True)
class Chart:
    """Linear substitution from kinematic symbols into free parameters."""

    params: tuple[str, ...]
    mapping: dict[str, LinForm] = field(compare=False)
    label: str = ""

    def __post_init__(self):
        for sym, form in self.mapping.items():
            unknown = form.symbols() - set(self.params)
            if unknown:
                raise ValueError(f"chart maps {sym} through unknown params {unknown}")

    @property
    def dim(self) -> int:
        """Projective dimension q of the restricted space."""
        return len(self.params) - 1

    def covers(self, symbols) -> bool:
        return set(symbols) <= set(self.mapping)

    def apply(self, p: ParamPoly) -> ParamPoly:
        missing = p.symbols() - set(self.mapping)
        if missing:
            raise KeyError(f"chart does not cover symbols {sorted(missing)}")
        return p.substitute_symbols(self.mapping)


def apply_chart(p: ParamPoly, chart: Chart) -> ParamPoly:
    return chart.apply(p)


def identity_chart(d: Diagram) -> Chart:
    syms = kinematic_symbols(d)
    return Chart(tuple(syms), {s: LinForm.symbol(s) for s in syms}, label="generic")


def _mass_map(equalM: bool, equalm: bool, num_legs: int, num_edges: int):
    mapping = {}
    params: list[str] = []
    if equalM:
        params.append("M")
        for name in external_mass_names(num_legs):
            mapping[name] = LinForm.symbol("M")
    else:
        for name in external_mass_names(num_legs):
            params.append(name)
            mapping[name] = LinForm.symbol(name)
    if equalm:
        params.append("m")
        for name in internal_mass_names(num_edges):
            mapping[name] = LinForm.symbol("m")
    else:
        for name in internal_mass_names(num_edges):
            params.append(name)
            mapping[name] = LinForm.symbol(name)
    return params, mapping


def chart_4legs(equalM: bool, equalm: bool, num_edges: int) -> Chart:
    """Chart (s:t:masses) for four-point diagrams."""
    params = ["s", "t"]
    mapping = {"s": LinForm.symbol("s"), "t": LinForm.symbol("t")}
    mp, mm = _mass_map(equalM, equalm, 4, num_edges)
    params += mp
    mapping.update(mm)
    label = {(True, True): "equal-all", (True, False): "equalM",
             (False, True): "equalm", (False, False): "generic"}[(equalM, equalm)]
    return Chart(tuple(params), mapping, label=label)


def chart_5legs(equalM: bool, equalm: bool, num_edges: int) -> Chart:
    """Chart (s12:s23:s34:s45:s51:masses) for five-point diagrams."""
    mands = list(mandelstam_names(5))
    params = list(mands)
    mapping = {s: LinForm.symbol(s) for s in mands}
    mp, mm = _mass_map(equalM, equalm, 5, num_edges)
    params += mp
    mapping.update(mm)
    label = {(True, True): "equal-all", (True, False): "equalM",
             (False, True): "equalm", (False, False): "generic"}[(equalM, equalm)]
    return Chart(tuple(params), mapping, label=label)


def chart_for(d: Diagram, spec: str) -> Chart:
    """Resolve a chart spec: generic|equalM|equalm|equal-all|file:<path>."""
    if spec == "generic":
        return identity_chart(d)
    if spec.startswith("file:"):
        with open(spec[5:], "r", encoding="utf8") as fh:
            return chart_from_dict(d, json.load(fh))
    flags = {"equalM": (True, False), "equalm": (False, True),
             "equal-all": (True, True)}
    if spec not in flags:
        raise ValueError(f"unknown chart spec {spec!r}")
    equalM, equalm = flags[spec]
    if d.num_legs == 5:
        return chart_5legs(equalM, equalm, d.num_edges)
    if d.num_legs == 4:
        return chart_4legs(equalM, equalm, d.num_edges)
    # 2- and 3-leg diagrams have no Mandelstams; build the mass chart directly
    params, mapping = _mass_map(equalM, equalm, d.num_legs, d.num_edges)
    return Chart(tuple(params), mapping, label=spec)


def chart_from_dict(d: Diagram, data: dict) -> Chart:
    """Chart from a JSON object: symbol -> parameter name or {param: coeff}.

    Example: {"M1": "A", "M2": "B", "m1": "w", ..., "s": "s", "t": "t"}
    pins masses pairwise; the free parameters are collected in first-use
    order.  Every kinematic symbol of the diagram must be covered.
    """
    params: list[str] = []
    mapping: dict[str, LinForm] = {}

    def param(name):
        if name not in params:
            params.append(name)
        return LinForm.symbol(name)

    for sym in kinematic_symbols(d):
        if sym not in data:
            raise KeyError(f"chart file does not cover symbol {sym!r}")
        val = data[sym]
        if isinstance(val, str):
            mapping[sym] = param(val)
        else:
            form = LinForm()
            for pname, coeff in val.items():
                form = form + param(pname).scaled(coeff)
            mapping[sym] = form
    return Chart(tuple(params), mapping, label=data.get("label", "custom"))
