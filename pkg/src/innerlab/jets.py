"""Truncated Taylor expansions (jets) and their arithmetic.

A jet of order M at a center w stores the coefficients c_0..c_M of the
Taylor polynomial, c_i = f^(i)(w)/i!.  Storing coefficients rather than raw
derivatives keeps multiplication a plain Cauchy product; the l-th derivative
is recovered as l! * c_l.

Coefficients may be ``complex``/``float`` (default backend) or
:class:`~innerlab.exact.QComplex`/``Fraction`` (exact backend); all
operations are generic over the two.  Batched float jets, used by the grid
sweeps in :mod:`innerlab.criteria`, live at the bottom of this module and
operate on ``numpy`` arrays of shape (..., M+1).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Tuple

import numpy as np

from .exact import QComplex


class SingularityError(ZeroDivisionError):
    """Raised when an evaluation or jet is requested at a singular point."""


def _same_kind(a: "Jet", b: "Jet") -> None:
    if a.center != b.center:
        raise ValueError(f"jet centers differ: {a.center!r} != {b.center!r}")
    if a.order != b.order:
        raise ValueError(f"jet orders differ: {a.order} != {b.order}")


def _mul_lists(a: Sequence, b: Sequence) -> list:
    n = len(a)
    out = []
    for l in range(n):
        acc = a[0] * b[l]
        for i in range(1, l + 1):
            acc = acc + a[i] * b[l - i]
        out.append(acc)
    return out


def _div_lists(a: Sequence, b: Sequence) -> list:
    n = len(a)
    b0 = b[0]
    if _value_is_zero(b0):
        raise SingularityError("jet division by a jet with zero constant term")
    out = []
    for l in range(n):
        acc = a[l]
        for i in range(l):
            acc = acc - out[i] * b[l - i]
        out.append(acc / b0)
    return out


def _value_is_zero(v) -> bool:
    if isinstance(v, QComplex):
        return v.is_zero()
    return v == 0


@dataclass(frozen=True)
class Jet:
    """Taylor polynomial of an analytic function at ``center``.

    coeffs[i] = f^(i)(center) / i!; the order is ``len(coeffs) - 1``.
    """

    center: object
    coeffs: Tuple

    def __post_init__(self):
        if len(self.coeffs) < 1:
            raise ValueError("a jet needs at least the constant coefficient")
        object.__setattr__(self, "coeffs", tuple(self.coeffs))

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    @property
    def value(self):
        """f(center) = c_0."""
        return self.coeffs[0]

    @classmethod
    def constant(cls, value, center, order: int) -> "Jet":
        zero = value * 0
        return cls(center, (value,) + (zero,) * order)

    @classmethod
    def identity(cls, center, order: int) -> "Jet":
        """Jet of f(z) = z."""
        one = center * 0 + 1
        zero = center * 0
        if order == 0:
            return cls(center, (center,))
        return cls(center, (center, one) + (zero,) * (order - 1))

    def derivative(self, l: int):
        """f^(l)(center) = l! * c_l."""
        if not 0 <= l <= self.order:
            raise ValueError(f"derivative order {l} outside jet order {self.order}")
        return math.factorial(l) * self.coeffs[l]

    def scale(self, factor) -> "Jet":
        return Jet(self.center, tuple(factor * c for c in self.coeffs))

    def __neg__(self) -> "Jet":
        return Jet(self.center, tuple(-c for c in self.coeffs))

    def __add__(self, other: "Jet") -> "Jet":
        _same_kind(self, other)
        return Jet(self.center, tuple(x + y for x, y in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: "Jet") -> "Jet":
        _same_kind(self, other)
        return Jet(self.center, tuple(x - y for x, y in zip(self.coeffs, other.coeffs)))

    def __mul__(self, other: "Jet") -> "Jet":
        _same_kind(self, other)
        return Jet(self.center, tuple(_mul_lists(self.coeffs, other.coeffs)))

    def __truediv__(self, other: "Jet") -> "Jet":
        _same_kind(self, other)
        return Jet(self.center, tuple(_div_lists(self.coeffs, other.coeffs)))

    def pow_int(self, p: int) -> "Jet":
        if p < 0:
            raise ValueError("negative powers go through division")
        out = Jet.constant(self.coeffs[0] * 0 + 1, self.center, self.order)
        base = self
        while p:
            if p & 1:
                out = out * base
            base = base * base
            p >>= 1
        return out

    def exp(self) -> "Jet":
        """exp of the jet (float backend only)."""
        u = self.coeffs
        if any(isinstance(c, (QComplex, Fraction)) for c in u):
            raise TypeError("exp is not available on the exact backend")
        v = [np.exp(complex(u[0]))]
        for k in range(1, len(u)):
            acc = 0j
            for i in range(1, k + 1):
                acc += i * complex(u[i]) * v[k - i]
            v.append(acc / k)
        return Jet(self.center, tuple(v))

    def truncate(self, order: int) -> "Jet":
        if order > self.order:
            raise ValueError("cannot extend a jet by truncation")
        return Jet(self.center, self.coeffs[: order + 1])


def jet_arith(a: Jet, b: Jet, kind: str) -> Jet:
    """Combine two jets at the same center and order.

    kind is one of ``add``, ``sub``, ``mul``, ``div``.
    """
    if kind == "add":
        return a + b
    if kind == "sub":
        return a - b
    if kind == "mul":
        return a * b
    if kind == "div":
        return a / b
    raise ValueError(f"unknown jet operation {kind!r}")


# ---------------------------------------------------------------------------
# Batched float jets: coefficient arrays of shape (..., M+1), complex128.
# Index arithmetic mirrors the scalar helpers above; leading axes broadcast.
# ---------------------------------------------------------------------------


def batch_mul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    n = a.shape[-1]
    out = np.zeros(np.broadcast_shapes(a.shape, b.shape), dtype=complex)
    for l in range(n):
        for i in range(l + 1):
            out[..., l] += a[..., i] * b[..., l - i]
    return out


def batch_div(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    n = a.shape[-1]
    b0 = b[..., 0]
    if np.any(b0 == 0):
        raise SingularityError("jet division by a jet with zero constant term")
    shape = np.broadcast_shapes(a.shape, b.shape)
    out = np.zeros(shape, dtype=complex)
    for l in range(n):
        acc = a[..., l] + np.zeros(shape[:-1], dtype=complex)
        for i in range(l):
            acc = acc - out[..., i] * b[..., l - i]
        out[..., l] = acc / b0
    return out


def batch_exp(u: np.ndarray) -> np.ndarray:
    n = u.shape[-1]
    out = np.zeros_like(u, dtype=complex)
    out[..., 0] = np.exp(u[..., 0])
    for k in range(1, n):
        acc = np.zeros(u.shape[:-1], dtype=complex)
        for i in range(1, k + 1):
            acc += i * u[..., i] * out[..., k - i]
        out[..., k] = acc / k
    return out


def batch_pow_int(a: np.ndarray, p: int) -> np.ndarray:
    out = np.zeros_like(a, dtype=complex)
    out[..., 0] = 1.0
    base = a.astype(complex)
    while p:
        if p & 1:
            out = batch_mul(out, base)
        base = batch_mul(base, base)
        p >>= 1
    return out


def batch_constant(values: np.ndarray, order: int) -> np.ndarray:
    values = np.asarray(values, dtype=complex)
    out = np.zeros(values.shape + (order + 1,), dtype=complex)
    out[..., 0] = values
    return out


def batch_identity(z: np.ndarray, order: int) -> np.ndarray:
    z = np.asarray(z, dtype=complex)
    out = np.zeros(z.shape + (order + 1,), dtype=complex)
    out[..., 0] = z
    if order >= 1:
        out[..., 1] = 1.0
    return out
