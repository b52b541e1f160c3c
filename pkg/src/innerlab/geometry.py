"""Geometry of zero sequences in the unit disk.

Covers the per-point gap d_j = dist(z_j, {z_l}_{l != j}), the
pseudohyperbolic metric, the Carleson interpolation constant, separation
and two-family splits, the dyadic arc-porosity constant, the logarithmic
boundary entropy, and the gap/Blaschke-distance ratio d_j/(1-|z_j|) whose
boundedness separates the two qualitative regimes probed by the built-in
spiral and radial generators.

All scalars reported here are finite-truncation estimates; callers are
expected to quote them together with ``tail_mass`` when arguing about the
infinite object.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence, Tuple

import numpy as np
from scipy import integrate

SCHEMA_VERSION = "1"

#: indices at the tail of a truncated generator sequence whose gap statistics
#: are biased by the missing continuation
EDGE_COUNT = 2


@dataclass(frozen=True)
class ZeroSequence:
    """Ordered distinct points in the open disk plus generator metadata."""

    points: Tuple[complex, ...]
    kind: str = "custom"
    params: dict = field(default_factory=dict)
    accumulation: Tuple[complex, ...] = ()

    def __post_init__(self):
        pts = tuple(complex(p) for p in self.points)
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "accumulation", tuple(complex(p) for p in self.accumulation))
        if len(set(pts)) != len(pts):
            raise ValueError("zero sequence points must be pairwise distinct")
        for p in pts:
            if not abs(p) < 1:
                raise ValueError(f"zero {p} is not in the open disk")

    def __len__(self):
        return len(self.points)

    @property
    def array(self) -> np.ndarray:
        return np.asarray(self.points, dtype=complex)

    def is_generated(self) -> bool:
        return self.kind in ("spiral", "radial")

    def edge_mask(self) -> np.ndarray:
        """True on indices whose gap statistics are truncation-biased."""
        mask = np.zeros(len(self), dtype=bool)
        if self.is_generated():
            mask[-EDGE_COUNT:] = True
        return mask

    def next_term(self) -> complex:
        """First omitted generator term (generator kinds only)."""
        if not self.is_generated():
            raise ValueError("next_term is only defined for generated sequences")
        return _generate(self.kind, self.params, len(self) + 1)[-1]

    def tail_mass(self, J: Optional[int] = None) -> float:
        """sum_{j > J} (1 - |z_j|); exact geometric tail for the generators."""
        if J is None:
            J = len(self)
        if self.kind == "radial":
            a = self.params["a"]
            return a ** (J + 1) / (1 - a)
        if self.kind == "spiral":
            a = self.params["a"]
            return a ** (J + 1) / (1 - a)
        if J >= len(self):
            return 0.0
        return float(sum(1 - abs(p) for p in self.points[J:]))

    def to_json_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "kind": self.kind,
            "params": dict(self.params),
            "J": len(self),
            "points": [[p.real, p.imag] for p in self.points],
            "accumulation": [[p.real, p.imag] for p in self.accumulation],
        }

    @classmethod
    def from_json_dict(cls, doc: dict) -> "ZeroSequence":
        if doc.get("schema_version") != SCHEMA_VERSION:
            raise ValueError(f"unsupported sequence schema {doc.get('schema_version')!r}")
        kind = doc.get("kind", "custom")
        params = doc.get("params", {})
        if kind in ("spiral", "radial") and "points" not in doc:
            return gen_sequence(kind, params, doc["J"])
        pts = [complex(p[0], p[1]) for p in doc["points"]]
        acc = [complex(p[0], p[1]) for p in doc.get("accumulation", [])]
        return cls(tuple(pts), kind, dict(params), tuple(acc))


def _generate(kind: str, params: dict, J: int) -> Tuple[complex, ...]:
    js = np.arange(1, J + 1)
    if kind == "radial":
        a = params["a"]
        return tuple(complex(1 - a**j) for j in js)
    if kind == "spiral":
        a, b = params["a"], params["b"]
        return tuple((1 - a**j) * np.exp(1j * b**j) for j in js)
    raise ValueError(f"unknown generator kind {kind!r}")


def gen_sequence(kind: str, params, J: int = None) -> ZeroSequence:
    """Built-in sequence generators.

    spiral(a, b): z_j = (1 - a^j) exp(i b^j), 0 < a < b < 1.
    radial(a):    z_j = 1 - a^j,              0 < a < 1.
    custom:       params is the explicit point list.
    """
    if kind == "custom":
        pts = tuple(complex(p) for p in params)
        if J is not None:
            pts = pts[:J]
        return ZeroSequence(pts, "custom", {})
    if J is None or J < 1:
        raise ValueError("J must be a positive integer")
    if kind == "radial":
        a = float(params["a"]) if isinstance(params, dict) else float(params)
        if not 0 < a < 1:
            raise ValueError("radial generator needs 0 < a < 1")
        return ZeroSequence(_generate("radial", {"a": a}, J), "radial", {"a": a}, (1 + 0j,))
    if kind == "spiral":
        a, b = (float(params["a"]), float(params["b"]))
        if not 0 < a < b < 1:
            raise ValueError("spiral generator needs 0 < a < b < 1")
        return ZeroSequence(_generate("spiral", {"a": a, "b": b}, J), "spiral", {"a": a, "b": b}, (1 + 0j,))
    raise ValueError(f"unknown sequence kind {kind!r}")


def nearest_gaps(seq: ZeroSequence, stabilize_edge: bool = False) -> np.ndarray:
    """d_j = min_{l != j} |z_j - z_l| over the truncation.

    With ``stabilize_edge`` the first omitted generator term joins the
    candidate set, which removes the upward bias of the final gap.
    """
    pts = seq.array
    if len(pts) < 2:
        raise ValueError("nearest gaps need at least two points")
    cand = pts
    if stabilize_edge and seq.is_generated():
        cand = np.concatenate([pts, [seq.next_term()]])
    dist = np.abs(pts[:, None] - cand[None, :])
    np.fill_diagonal(dist[:, : len(pts)], np.inf)
    return dist.min(axis=1)


def rho(z, w) -> float:
    """Pseudohyperbolic distance |z - w| / |1 - conj(z) w|."""
    z, w = complex(z), complex(w)
    if abs(z) > 1 + 1e-12 or abs(w) > 1 + 1e-12:
        raise ValueError("rho is defined on the closed disk")
    den = abs(1 - z.conjugate() * w)
    if den == 0:
        raise ValueError("rho undefined: both points on the boundary with zero denominator")
    return abs(z - w) / den


def _rho_matrix(pts: np.ndarray) -> np.ndarray:
    num = np.abs(pts[:, None] - pts[None, :])
    den = np.abs(1 - np.conj(pts[:, None]) * pts[None, :])
    return num / den


def carleson_delta(seq: ZeroSequence) -> float:
    """inf_j prod_{l != j} rho(z_j, z_l) on the truncation."""
    pts = seq.array
    if len(pts) < 2:
        raise ValueError("the Carleson constant needs at least two points")
    m = _rho_matrix(pts)
    np.fill_diagonal(m, 1.0)
    return float(np.prod(m, axis=1).min())


def _two_split_exact(adj: np.ndarray) -> bool:
    """Backtracking 2-coloring of the conflict graph (exact)."""
    n = adj.shape[0]
    color = [-1] * n

    def assign(i: int) -> bool:
        if i == n:
            return True
        for c in (0, 1):
            ok = True
            for j in range(i):
                if adj[i, j] and color[j] == c:
                    ok = False
                    break
            if ok:
                color[i] = c
                if assign(i + 1):
                    return True
        color[i] = -1
        return False

    return assign(0)


def _two_split_greedy(adj: np.ndarray) -> bool:
    """BFS 2-coloring per connected component."""
    n = adj.shape[0]
    color = np.full(n, -1)
    for start in range(n):
        if color[start] >= 0:
            continue
        color[start] = 0
        queue = [start]
        while queue:
            i = queue.pop()
            for j in np.nonzero(adj[i])[0]:
                if color[j] < 0:
                    color[j] = 1 - color[i]
                    queue.append(j)
                elif color[j] == color[i]:
                    return False
    return True


def separation_check(seq: ZeroSequence, threshold: float = 0.1) -> Tuple[float, bool]:
    """(min pairwise rho, can the points split into two threshold-separated
    families).  Pairs closer than ``threshold`` in rho conflict; the split
    search is exact up to 20 points and greedy beyond.
    """
    pts = seq.array
    if len(pts) < 2:
        raise ValueError("separation check needs at least two points")
    m = _rho_matrix(pts)
    np.fill_diagonal(m, np.inf)
    min_rho = float(m.min())
    adj = m < threshold
    if len(pts) <= 20:
        split = _two_split_exact(adj)
    else:
        split = _two_split_greedy(adj)
    return min_rho, split


def _boundary_set(seq: ZeroSequence) -> np.ndarray:
    pts = list(seq.points) + list(seq.accumulation)
    return np.asarray(pts, dtype=complex)


def arc_condition(seq: ZeroSequence, depth: int = 6, samples_per_arc: int = 64) -> float:
    """Estimate of the best c with sup_{zeta in I} dist(zeta, E) >= c|I| over
    dyadic arcs I of levels 0..depth, E = points + declared accumulation."""
    if depth > 16:
        raise ValueError("depth must not exceed 16")
    E = _boundary_set(seq)
    best = math.inf
    for q in range(depth + 1):
        n_arcs = 2**q
        arc_len = 2 * math.pi / n_arcs
        # samples_per_arc equispaced points per arc, all arcs at once
        t = (np.arange(n_arcs)[:, None] + (np.arange(samples_per_arc) + 0.5)[None, :] / samples_per_arc) * arc_len
        zeta = np.exp(1j * t)
        dist = np.abs(zeta[..., None] - E[None, None, :]).min(axis=-1)
        sup_per_arc = dist.max(axis=1)
        best = min(best, float(sup_per_arc.min() / arc_len))
    return best


def bc_entropy(seq: ZeroSequence, panels_per_gap: int = 8) -> float:
    """integral over the circle of log dist(zeta, E) |d zeta| (arc length).

    The integrand has logarithmic singularities exactly at the boundary
    points of E; the circle is split there and each piece is integrated
    adaptively.
    """
    E = _boundary_set(seq)

    def integrand(t):
        zeta = np.exp(1j * t)
        return np.log(np.abs(zeta - E).min())

    sing = sorted({float(np.angle(p)) % (2 * math.pi) for p in seq.accumulation}
                  | {float(np.angle(p)) % (2 * math.pi) for p in seq.points if abs(abs(p) - 1) < 1e-12})
    if not sing:
        edges = [0.0, 2 * math.pi]
    else:
        edges = sing + [sing[0] + 2 * math.pi]
    total = 0.0
    for left, right in zip(edges[:-1], edges[1:]):
        if right - left < 1e-15:
            continue
        # grade sub-panels toward both (possibly singular) endpoints
        cuts = np.linspace(left, right, panels_per_gap + 1)
        width = right - left
        for frac in (1e-3, 1e-6):
            cuts = np.append(cuts, [left + frac * width, right - frac * width])
        cuts = np.unique(cuts)
        for a, b in zip(cuts[:-1], cuts[1:]):
            val, _ = integrate.quad(integrand, a, b, limit=200)
            total += val
    return total


def v1_ratio(seq: ZeroSequence) -> Tuple[np.ndarray, float]:
    """Per-index ratios d_j / (1 - |z_j|) and their max over the interior
    (edge-flagged truncation indices are excluded from the max)."""
    gaps = nearest_gaps(seq)
    ratios = gaps / (1 - np.abs(seq.array))
    interior = ~seq.edge_mask()
    if interior.any():
        peak = float(ratios[interior].max())
    else:
        peak = float(ratios.max())
    return ratios, peak


@dataclass(frozen=True)
class GeometryReport:
    """Per-index gap table plus the scalar diagnostics of the sequence."""

    seq: ZeroSequence
    gaps: np.ndarray
    ratios: np.ndarray
    edge: np.ndarray
    carleson_delta: float
    min_rho: float
    two_split: bool
    arc_constant: float
    entropy: float
    v1_max: float
    tail_mass: float

    @property
    def J(self) -> int:
        return len(self.seq)

    def scalar_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "kind": self.seq.kind,
            "params": dict(self.seq.params),
            "J": self.J,
            "carleson_delta": self.carleson_delta,
            "min_rho": self.min_rho,
            "two_split": self.two_split,
            "arc_constant": self.arc_constant,
            "entropy": self.entropy,
            "v1_max": self.v1_max,
            "tail_mass": self.tail_mass,
        }

    def write_csv(self, path) -> None:
        pts = self.seq.array
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["j", "|z_j|", "1-|z_j|", "d_j", "ratio", "edge_flag"])
            for i in range(self.J):
                r = abs(pts[i])
                writer.writerow([i + 1, repr(r), repr(1 - r), repr(float(self.gaps[i])),
                                 repr(float(self.ratios[i])), int(self.edge[i])])

    def write_json(self, path) -> None:
        with open(path, "w") as fh:
            json.dump(self.scalar_dict(), fh, indent=2, sort_keys=True)


def geometry_report(seq: ZeroSequence, arc_depth: int = 6) -> GeometryReport:
    gaps = nearest_gaps(seq)
    ratios, peak = v1_ratio(seq)
    min_rho, split = separation_check(seq)
    return GeometryReport(
        seq=seq,
        gaps=gaps,
        ratios=ratios,
        edge=seq.edge_mask(),
        carleson_delta=carleson_delta(seq),
        min_rho=min_rho,
        two_split=split,
        arc_constant=arc_condition(seq, depth=arc_depth),
        entropy=bc_entropy(seq),
        v1_max=peak,
        tail_mass=seq.tail_mass(),
    )
