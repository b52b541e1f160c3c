"""Closed-form analytic expressions on the unit disk.

The node algebra covers exactly the test functions the rest of the package
needs: constants, the identity, Moebius disk factors, principal-branch
powers (1-z)^beta with beta > 0, finite sums and products, integer powers,
and the exponential-of-Moebius factor of an atomic singular inner function.

Every node evaluates pointwise (scalars, numpy arrays, or exact
:class:`~innerlab.exact.QComplex` values where the node is rational) and
propagates jets; ``jet(w, M).value`` always agrees with ``eval(w)``.

Serialization: each node maps to ``{"op": ..., "params": ..., "args": ...}``;
the wire format is versioned (schema "1").
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Tuple

import numpy as np

from .exact import QComplex
from .jets import (
    Jet,
    SingularityError,
    batch_constant,
    batch_div,
    batch_exp,
    batch_identity,
    batch_mul,
    batch_pow_int,
)

SCHEMA_VERSION = "1"


def _conj(v):
    return v.conjugate()


def _cx_to_pair(v) -> list:
    v = complex(v)
    return [v.real, v.imag]


def _pair_to_cx(p) -> complex:
    return complex(p[0], p[1])


class AnalyticExpr:
    """Base class for expression nodes; all subclasses are immutable."""

    def eval(self, z):
        raise NotImplementedError

    def jet(self, w, order: int) -> Jet:
        raise NotImplementedError

    def jet_coeffs(self, z: np.ndarray, order: int) -> np.ndarray:
        """Batched float jets: coefficients with shape z.shape + (order+1,)."""
        raise NotImplementedError

    def to_node(self) -> dict:
        raise NotImplementedError

    def __call__(self, z):
        return self.eval(z)

    def __add__(self, other):
        return Sum((self, other))

    def __mul__(self, other):
        return Prod((self, other))


@dataclass(frozen=True)
class Const(AnalyticExpr):
    value: object

    def eval(self, z):
        if isinstance(z, np.ndarray):
            return np.full(z.shape, complex(self.value), dtype=complex)
        return self.value

    def jet(self, w, order):
        return Jet.constant(self.value * (w * 0 + 1), w, order)

    def jet_coeffs(self, z, order):
        return batch_constant(np.full(np.shape(z), complex(self.value)), order)

    def to_node(self):
        return {"op": "const", "params": {"value": _cx_to_pair(self.value)}, "args": []}


@dataclass(frozen=True)
class Z(AnalyticExpr):
    """The identity function z."""

    def eval(self, z):
        return z

    def jet(self, w, order):
        return Jet.identity(w, order)

    def jet_coeffs(self, z, order):
        return batch_identity(z, order)

    def to_node(self):
        return {"op": "z", "params": {}, "args": []}


@dataclass(frozen=True)
class Moebius(AnalyticExpr):
    """Blaschke factor (z_j - z) / (1 - conj(z_j) z) for a disk point z_j.

    With ``normalize`` the factor carries the unimodular constant
    conj(z_j)/|z_j| (limit convention: the factor degenerates to z when
    z_j = 0).  Normalization needs a square root and is therefore not
    available on the exact backend.
    """

    zero: object
    normalize: bool = False

    def __post_init__(self):
        mod2 = _abs2(self.zero)
        if not mod2 < 1:
            raise ValueError("Moebius parameter must lie in the open disk")

    def _normalizer(self):
        if isinstance(self.zero, QComplex):
            raise TypeError("normalized Moebius factors need the float backend")
        return self.zero.conjugate() / abs(self.zero)

    def eval(self, z):
        if self.normalize and _is_origin(self.zero):
            return z
        raw = (self.zero - z) / (1 - _conj(self.zero) * z)
        if self.normalize:
            return self._normalizer() * raw
        return raw

    def jet(self, w, order):
        if self.normalize and _is_origin(self.zero):
            return Jet.identity(w, order)
        one = w * 0 + 1
        zero_c = w * 0
        num = [self.zero - w, -one] + [zero_c] * (order - 1) if order >= 1 else [self.zero - w]
        cj = _conj(self.zero)
        den = [one - cj * w, -cj] + [zero_c] * (order - 1) if order >= 1 else [one - cj * w]
        q = Jet(w, tuple(num)) / Jet(w, tuple(den))
        if self.normalize:
            return q.scale(self._normalizer())
        return q

    def jet_coeffs(self, z, order):
        if self.normalize and _is_origin(self.zero):
            return batch_identity(z, order)
        z = np.asarray(z, dtype=complex)
        num = np.zeros(z.shape + (order + 1,), dtype=complex)
        num[..., 0] = complex(self.zero) - z
        cj = complex(self.zero).conjugate()
        den = np.zeros_like(num)
        den[..., 0] = 1 - cj * z
        if order >= 1:
            num[..., 1] = -1.0
            den[..., 1] = -cj
        out = batch_div(num, den)
        if self.normalize:
            out = out * self._normalizer()
        return out

    def to_node(self):
        return {
            "op": "moebius",
            "params": {"zero": _cx_to_pair(self.zero), "normalize": self.normalize},
            "args": [],
        }


@dataclass(frozen=True)
class OneMinusZPow(AnalyticExpr):
    """(1 - z)^beta, beta > 0, principal branch with slit along [1, inf)."""

    beta: float

    def __post_init__(self):
        if not self.beta > 0:
            raise ValueError("beta must be positive")

    def _check_point(self, w):
        wc = complex(w)
        if wc.imag == 0 and wc.real >= 1:
            raise SingularityError("(1-z)^beta is singular on the slit [1, inf)")

    def eval(self, z):
        if isinstance(z, QComplex):
            raise TypeError("(1-z)^beta needs the float backend")
        if not isinstance(z, np.ndarray):
            self._check_point(z)
        return np.power((1 + 0j) - z, self.beta)

    def jet(self, w, order):
        if isinstance(w, QComplex):
            raise TypeError("(1-z)^beta needs the float backend")
        self._check_point(w)
        base = (1 + 0j) - complex(w)
        coeffs = [np.power(base, self.beta)]
        for l in range(1, order + 1):
            coeffs.append(coeffs[-1] * (-(self.beta - l + 1) / l) / base)
        return Jet(w, tuple(coeffs))

    def jet_coeffs(self, z, order):
        z = np.asarray(z, dtype=complex)
        base = (1 + 0j) - z
        out = np.zeros(z.shape + (order + 1,), dtype=complex)
        out[..., 0] = np.power(base, self.beta)
        for l in range(1, order + 1):
            out[..., l] = out[..., l - 1] * (-(self.beta - l + 1) / l) / base
        return out

    def to_node(self):
        return {"op": "one_minus_z_pow", "params": {"beta": self.beta}, "args": []}


@dataclass(frozen=True)
class SingExp(AnalyticExpr):
    """exp(-mass * (point + z) / (point - z)): one atom of a singular inner
    function, with ``point`` on the unit circle and ``mass`` > 0."""

    point: object
    mass: float

    def __post_init__(self):
        if not self.mass > 0:
            raise ValueError("atom mass must be positive")
        if abs(abs(complex(self.point)) - 1.0) > 1e-9:
            raise ValueError("atom location must lie on the unit circle")

    def eval(self, z):
        if isinstance(z, QComplex):
            raise TypeError("singular factors need the float backend")
        p = complex(self.point)
        if not isinstance(z, np.ndarray) and z == p:
            raise SingularityError("evaluation at the atom location")
        return np.exp(-self.mass * (p + z) / (p - z))

    def jet(self, w, order):
        p = complex(self.point)
        wc = complex(w)
        if wc == p:
            raise SingularityError("jet at the atom location")
        one = 1 + 0j
        num = [p + wc, one] + [0j] * (order - 1) if order >= 1 else [p + wc]
        den = [p - wc, -one] + [0j] * (order - 1) if order >= 1 else [p - wc]
        expo = (Jet(wc, tuple(num)) / Jet(wc, tuple(den))).scale(-self.mass)
        return expo.exp()

    def jet_coeffs(self, z, order):
        z = np.asarray(z, dtype=complex)
        p = complex(self.point)
        num = np.zeros(z.shape + (order + 1,), dtype=complex)
        den = np.zeros_like(num)
        num[..., 0] = p + z
        den[..., 0] = p - z
        if order >= 1:
            num[..., 1] = 1.0
            den[..., 1] = -1.0
        return batch_exp(batch_div(num, den) * (-self.mass))

    def to_node(self):
        return {
            "op": "sing_exp",
            "params": {"point": _cx_to_pair(self.point), "mass": self.mass},
            "args": [],
        }


@dataclass(frozen=True)
class Sum(AnalyticExpr):
    terms: Tuple[AnalyticExpr, ...]

    def __post_init__(self):
        if not self.terms:
            raise ValueError("empty sum")
        object.__setattr__(self, "terms", tuple(self.terms))

    def eval(self, z):
        acc = self.terms[0].eval(z)
        for t in self.terms[1:]:
            acc = acc + t.eval(z)
        return acc

    def jet(self, w, order):
        acc = self.terms[0].jet(w, order)
        for t in self.terms[1:]:
            acc = acc + t.jet(w, order)
        return acc

    def jet_coeffs(self, z, order):
        acc = self.terms[0].jet_coeffs(z, order)
        for t in self.terms[1:]:
            acc = acc + t.jet_coeffs(z, order)
        return acc

    def to_node(self):
        return {"op": "sum", "params": {}, "args": [t.to_node() for t in self.terms]}


@dataclass(frozen=True)
class Prod(AnalyticExpr):
    factors: Tuple[AnalyticExpr, ...]

    def __post_init__(self):
        if not self.factors:
            raise ValueError("empty product")
        object.__setattr__(self, "factors", tuple(self.factors))

    def eval(self, z):
        acc = self.factors[0].eval(z)
        for f in self.factors[1:]:
            acc = acc * f.eval(z)
        return acc

    def jet(self, w, order):
        acc = self.factors[0].jet(w, order)
        for f in self.factors[1:]:
            acc = acc * f.jet(w, order)
        return acc

    def jet_coeffs(self, z, order):
        acc = self.factors[0].jet_coeffs(z, order)
        for f in self.factors[1:]:
            acc = batch_mul(acc, f.jet_coeffs(z, order))
        return acc

    def to_node(self):
        return {"op": "prod", "params": {}, "args": [f.to_node() for f in self.factors]}


@dataclass(frozen=True)
class IntPow(AnalyticExpr):
    base: AnalyticExpr
    exponent: int

    def __post_init__(self):
        if self.exponent < 0:
            raise ValueError("exponent must be a nonnegative integer")

    def eval(self, z):
        if isinstance(z, QComplex):
            return self.base.eval(z) ** self.exponent
        return self.base.eval(z) ** self.exponent

    def jet(self, w, order):
        return self.base.jet(w, order).pow_int(self.exponent)

    def jet_coeffs(self, z, order):
        return batch_pow_int(self.base.jet_coeffs(z, order), self.exponent)

    def to_node(self):
        return {
            "op": "int_pow",
            "params": {"exponent": self.exponent},
            "args": [self.base.to_node()],
        }


def _abs2(v):
    if isinstance(v, QComplex):
        return float(v.abs2())
    return abs(complex(v)) ** 2


def _is_origin(v) -> bool:
    if isinstance(v, QComplex):
        return v.is_zero()
    return complex(v) == 0


def polynomial(coeffs) -> AnalyticExpr:
    """Expression for sum_i coeffs[i] * z^i."""
    coeffs = list(coeffs)
    if not coeffs:
        raise ValueError("empty coefficient list")
    terms = []
    for i, c in enumerate(coeffs):
        if i == 0:
            terms.append(Const(c))
        elif i == 1:
            terms.append(Prod((Const(c), Z())))
        else:
            terms.append(Prod((Const(c), IntPow(Z(), i))))
    return terms[0] if len(terms) == 1 else Sum(tuple(terms))


# -- spec surface -----------------------------------------------------------


def jet_of_expr(e: AnalyticExpr, w, order: int) -> Jet:
    """Jet of the expression at w; coefficient 0 equals pointwise evaluation."""
    if order < 0:
        raise ValueError("order must be nonnegative")
    return e.jet(w, order)


def derivative(e: AnalyticExpr, w, l: int):
    """l-th derivative of the expression at w."""
    return jet_of_expr(e, w, l).derivative(l)


# -- serialization ----------------------------------------------------------

_NODE_TYPES = {}


def _from_node(node: dict) -> AnalyticExpr:
    op = node.get("op")
    params = node.get("params", {})
    args = [_from_node(a) for a in node.get("args", [])]
    if op == "const":
        return Const(_pair_to_cx(params["value"]))
    if op == "z":
        return Z()
    if op == "moebius":
        return Moebius(_pair_to_cx(params["zero"]), bool(params.get("normalize", False)))
    if op == "one_minus_z_pow":
        return OneMinusZPow(float(params["beta"]))
    if op == "sing_exp":
        return SingExp(_pair_to_cx(params["point"]), float(params["mass"]))
    if op == "sum":
        return Sum(tuple(args))
    if op == "prod":
        return Prod(tuple(args))
    if op == "int_pow":
        return IntPow(args[0], int(params["exponent"]))
    raise ValueError(f"unknown expression op {op!r}")


def expr_to_json(expr: AnalyticExpr) -> dict:
    return {"schema_version": SCHEMA_VERSION, "expr": expr.to_node()}


def expr_from_json(doc: dict) -> AnalyticExpr:
    if doc.get("schema_version") != SCHEMA_VERSION:
        raise ValueError(f"unsupported expression schema {doc.get('schema_version')!r}")
    return _from_node(doc["expr"])
