"""Traces on finite sets and the Taylor-compatibility (admissibility) check.

A trace assigns candidate derivative values phi_0..phi_n to every point of
a finite set E.  It is admissible with exponent alpha when every ordered
pair (z, w) and order s satisfies

    |phi_s(z) - sum_{m=0}^{n-s} phi_{s+m}(w) (z-w)^m / m!| <= C |z-w|^(alpha-s)

for a uniform C; the checker reports the smallest such C together with the
pair realizing it.  The inequality is not symmetric in (z, w), so ordered
pairs are checked.  Boundary points supplied in E are treated as data.

``build_delta_jet`` produces the one-nonzero-level trace
phi_k(z_j) = d_j^(alpha-k) (zero at boundary accumulation points), which is
admissible with C = 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np

from .exprs import AnalyticExpr
from .geometry import ZeroSequence, nearest_gaps

SCHEMA_VERSION = "1"


@dataclass(frozen=True)
class JetData:
    """Values phi_s(z) for s = 0..n on a finite set E, with n < alpha <= n+1."""

    points: Tuple[complex, ...]
    n: int
    alpha: float
    values: np.ndarray  # shape (n+1, len(points))

    def __post_init__(self):
        pts = tuple(complex(p) for p in self.points)
        object.__setattr__(self, "points", pts)
        vals = np.asarray(self.values, dtype=complex)
        object.__setattr__(self, "values", vals)
        if len(set(pts)) != len(pts):
            raise ValueError("trace points must be pairwise distinct")
        for p in pts:
            if abs(p) > 1 + 1e-12:
                raise ValueError(f"trace point {p} outside the closed disk")
        if vals.shape != (self.n + 1, len(pts)):
            raise ValueError(f"value table must have shape {(self.n + 1, len(pts))}, got {vals.shape}")
        if np.any(~np.isfinite(vals)):
            raise ValueError("value table has missing or non-finite entries")
        if not self.n < self.alpha <= self.n + 1:
            raise ValueError("alpha must satisfy n < alpha <= n + 1")

    def scale(self, factor: complex) -> "JetData":
        return JetData(self.points, self.n, self.alpha, self.values * factor)

    def to_json_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "alpha": self.alpha,
            "n": self.n,
            "points": [[p.real, p.imag] for p in self.points],
            "phi": [[[v.real, v.imag] for v in row] for row in self.values],
        }

    @classmethod
    def from_json_dict(cls, doc: dict) -> "JetData":
        if doc.get("schema_version") != SCHEMA_VERSION:
            raise ValueError(f"unsupported trace schema {doc.get('schema_version')!r}")
        pts = tuple(complex(p[0], p[1]) for p in doc["points"])
        vals = np.array([[complex(v[0], v[1]) for v in row] for row in doc["phi"]])
        return cls(pts, int(doc["n"]), float(doc["alpha"]), vals)


@dataclass(frozen=True)
class AdmissibilityReport:
    c_min: float
    worst_pair: Optional[Tuple[complex, complex, int]]  # (z, w, s)
    passed: Optional[bool]
    gate: Optional[float]
    notes: str = ""

    def to_json_dict(self) -> dict:
        wp = self.worst_pair
        return {
            "schema_version": SCHEMA_VERSION,
            "c_min": self.c_min,
            "worst_pair": None if wp is None else {
                "z": [wp[0].real, wp[0].imag],
                "w": [wp[1].real, wp[1].imag],
                "s": wp[2],
            },
            "passed": self.passed,
            "gate": self.gate,
            "notes": self.notes,
        }


def check_admissible(data: JetData, gate: Optional[float] = None) -> AdmissibilityReport:
    """Smallest C for which the pairwise Taylor-compatibility bounds hold.

    The maximum runs over all ordered pairs z != w in E and all s = 0..n.
    """
    pts = np.asarray(data.points, dtype=complex)
    P = len(pts)
    if P < 2:
        raise ValueError("admissibility needs at least two points")
    diff = pts[:, None] - pts[None, :]  # (z index, w index)
    absd = np.abs(diff)
    off = ~np.eye(P, dtype=bool)
    c_min = 0.0
    worst = None
    for s in range(data.n + 1):
        taylor = np.zeros((P, P), dtype=complex)
        fact = 1.0
        for m in range(data.n - s + 1):
            if m > 0:
                fact *= m
            taylor += data.values[s + m][None, :] * diff**m / fact
        lhs = np.abs(data.values[s][:, None] - taylor)
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = np.where(off, lhs / absd ** (data.alpha - s), 0.0)
        idx = np.unravel_index(np.argmax(ratio), ratio.shape)
        if ratio[idx] > c_min:
            c_min = float(ratio[idx])
            worst = (complex(pts[idx[0]]), complex(pts[idx[1]]), s)
    notes = ""
    if any(abs(abs(p) - 1) <= 1e-12 for p in data.points):
        notes = "boundary entries treated as data (no continuity surrogate)"
    passed = None if gate is None else bool(c_min <= gate)
    return AdmissibilityReport(c_min, worst, passed, gate, notes)


def build_delta_jet(seq: ZeroSequence, k: int, alpha: float) -> JetData:
    """Trace with phi_k(z_j) = d_j^(alpha - k) and every other level zero.

    The top order is n = ceil(alpha) - 1, so n < alpha <= n + 1; k must not
    exceed n.  Declared boundary accumulation points enter E with a zero
    trace row.
    """
    n = math.ceil(alpha) - 1
    if k < 0 or k > n:
        raise ValueError(f"need 0 <= k <= n = {n} for alpha = {alpha}")
    gaps = nearest_gaps(seq)
    pts = list(seq.points) + list(seq.accumulation)
    values = np.zeros((n + 1, len(pts)), dtype=complex)
    values[k, : len(seq.points)] = gaps ** (alpha - k)
    return JetData(tuple(pts), n, alpha, values)


def trace_of_expr(e: AnalyticExpr, points: Sequence[complex], n: int, alpha: float) -> JetData:
    """Trace of a genuine analytic function: phi_s = e^(s) on E, via jets."""
    pts = tuple(complex(p) for p in points)
    values = np.zeros((n + 1, len(pts)), dtype=complex)
    for idx, p in enumerate(pts):
        jet = e.jet(p, n)
        for s in range(n + 1):
            values[s, idx] = jet.derivative(s)
    return JetData(pts, n, alpha, values)
