"""Rectangular complex interval arithmetic with outward rounding.

Boxes are stored as four float arrays (re_lo, re_hi, im_lo, im_hi) of a
common shape.  Every primitive operation rounds its bounds outward by two
ulps, which dominates the half-ulp error of each IEEE double operation, so
enclosures are rigorous without touching the FPU rounding mode.
"""

from __future__ import annotations

import numpy as np

_INF = np.inf


def _down(a):
    return np.nextafter(np.nextafter(a, -_INF), -_INF)


def _up(a):
    return np.nextafter(np.nextafter(a, _INF), _INF)


class CBox:
    """Axis-aligned rectangle(s) in the complex plane."""

    __slots__ = ("rl", "rh", "il", "ih")

    def __init__(self, rl, rh, il, ih):
        self.rl = np.asarray(rl, dtype=float)
        self.rh = np.asarray(rh, dtype=float)
        self.il = np.asarray(il, dtype=float)
        self.ih = np.asarray(ih, dtype=float)

    # -- constructors ------------------------------------------------------
    @classmethod
    def point(cls, z) -> "CBox":
        z = np.asarray(z, dtype=complex)
        return cls(z.real.copy(), z.real.copy(), z.imag.copy(), z.imag.copy())

    @classmethod
    def from_center(cls, z, radius) -> "CBox":
        z = np.asarray(z, dtype=complex)
        r = np.asarray(radius, dtype=float)
        return cls(_down(z.real - r), _up(z.real + r),
                   _down(z.imag - r), _up(z.imag + r))

    @classmethod
    def zeros(cls, shape) -> "CBox":
        z = np.zeros(shape)
        return cls(z.copy(), z.copy(), z.copy(), z.copy())

    # -- shape plumbing ------------------------------------------------------
    @property
    def shape(self):
        return self.rl.shape

    def __getitem__(self, idx) -> "CBox":
        return CBox(self.rl[idx], self.rh[idx], self.il[idx], self.ih[idx])

    def __setitem__(self, idx, val: "CBox"):
        self.rl[idx] = val.rl
        self.rh[idx] = val.rh
        self.il[idx] = val.il
        self.ih[idx] = val.ih

    def reshape(self, *shape) -> "CBox":
        return CBox(self.rl.reshape(*shape), self.rh.reshape(*shape),
                    self.il.reshape(*shape), self.ih.reshape(*shape))

    def copy(self) -> "CBox":
        return CBox(self.rl.copy(), self.rh.copy(), self.il.copy(), self.ih.copy())

    # -- queries -------------------------------------------------------------
    def mid(self):
        return 0.5 * (self.rl + self.rh) + 0.5j * (self.il + self.ih)

    def rad(self):
        return np.maximum(self.rh - self.rl, self.ih - self.il) * 0.5

    def mag_upper(self):
        """Upper bound for |z| over the box."""
        re = np.maximum(np.abs(self.rl), np.abs(self.rh))
        im = np.maximum(np.abs(self.il), np.abs(self.ih))
        return _up(np.hypot(re, im))

    def contains_strict(self, other: "CBox"):
        """True where ``other`` lies strictly inside ``self``."""
        return ((self.rl < other.rl) & (other.rh < self.rh)
                & (self.il < other.il) & (other.ih < self.ih))

    def disjoint(self, other: "CBox"):
        return ((self.rh < other.rl) | (other.rh < self.rl)
                | (self.ih < other.il) | (other.ih < self.il))

    # -- arithmetic ------------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, CBox):
            other = CBox.point(other)
        return CBox(_down(self.rl + other.rl), _up(self.rh + other.rh),
                    _down(self.il + other.il), _up(self.ih + other.ih))

    def __sub__(self, other):
        if not isinstance(other, CBox):
            other = CBox.point(other)
        return CBox(_down(self.rl - other.rh), _up(self.rh - other.rl),
                    _down(self.il - other.ih), _up(self.ih - other.il))

    def __neg__(self):
        return CBox(-self.rh, -self.rl, -self.ih, -self.il)

    def __mul__(self, other):
        if not isinstance(other, CBox):
            other = CBox.point(other)
        rr = _ival_mul(self.rl, self.rh, other.rl, other.rh)
        ii = _ival_mul(self.il, self.ih, other.il, other.ih)
        ri = _ival_mul(self.rl, self.rh, other.il, other.ih)
        ir = _ival_mul(self.il, self.ih, other.rl, other.rh)
        return CBox(_down(rr[0] - ii[1]), _up(rr[1] - ii[0]),
                    _down(ri[0] + ir[0]), _up(ri[1] + ir[1]))

    def power(self, k: int) -> "CBox":
        if k == 0:
            one = np.ones_like(self.rl)
            return CBox(one.copy(), one.copy(), np.zeros_like(one), np.zeros_like(one))
        out = self
        for _ in range(k - 1):
            out = out * self
        return out

    def scale(self, z: complex) -> "CBox":
        return self * CBox.point(np.full(self.shape, z, dtype=complex))

    def sum(self, axis=None) -> "CBox":
        return CBox(_down(self.rl.sum(axis=axis)), _up(self.rh.sum(axis=axis)),
                    _down(self.il.sum(axis=axis)), _up(self.ih.sum(axis=axis)))


def _ival_mul(al, ah, bl, bh):
    """Real interval product bounds, outward rounded."""
    p1, p2, p3, p4 = al * bl, al * bh, ah * bl, ah * bh
    lo = np.minimum(np.minimum(p1, p2), np.minimum(p3, p4))
    hi = np.maximum(np.maximum(p1, p2), np.maximum(p3, p4))
    return _down(lo), _up(hi)


def box_matvec(mat: CBox, vec: CBox) -> CBox:
    """(n, m) box matrix times (m,) box vector."""
    n, m = mat.shape
    prod = mat * CBox(np.broadcast_to(vec.rl, (n, m)), np.broadcast_to(vec.rh, (n, m)),
                      np.broadcast_to(vec.il, (n, m)), np.broadcast_to(vec.ih, (n, m)))
    return prod.sum(axis=1)


def box_matmat(a: CBox, b: CBox) -> CBox:
    """(n, k) box matrix times (k, m) box matrix."""
    n, k = a.shape
    k2, m = b.shape
    assert k == k2
    big = a.reshape(n, k, 1) * CBox(
        np.broadcast_to(b.rl, (n, k, m)), np.broadcast_to(b.rh, (n, k, m)),
        np.broadcast_to(b.il, (n, k, m)), np.broadcast_to(b.ih, (n, k, m)))
    return big.sum(axis=1)
