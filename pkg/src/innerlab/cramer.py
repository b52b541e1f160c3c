"""Exact reciprocal-factorial matrices and the derivative-recovery system.

For integers 1 <= k <= n the square matrix of size n-k+1 has entries
M[s][t] = 1/(k + t - s)! (an entry is zero when the factorial argument is
negative, which cannot happen under the constraint k > n/2).  The linear
system

    sum_{m=k}^{n} g^(m)(z_j)/(m-s)! (z_l - z_j)^(m-k) = R_s,  s = 0..n-k,

has coefficient matrix M(k, n) in the unknowns u_t = g^(k+t)(z_j)(z_l-z_j)^t,
and Cramer's rule recovers g^(k)(z_j) = det M_1 / det M.  Everything on the
matrix side is exact rational arithmetic; floats enter only through the
right-hand sides.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Tuple

import numpy as np

from .exact import QComplex
from .exprs import AnalyticExpr

SCHEMA_VERSION = "1"


@dataclass(frozen=True)
class RationalMatrix:
    """M(k, n): entries 1/(k+t-s)! for s, t = 0..n-k, exact."""

    k: int
    n: int
    entries: Tuple[Tuple[Fraction, ...], ...]
    outside_paper_hypotheses: bool = False

    @property
    def size(self) -> int:
        return self.n - self.k + 1

    def row(self, s: int) -> Tuple[Fraction, ...]:
        return self.entries[s]

    def replace_column(self, t: int, column: Sequence) -> list:
        out = [list(r) for r in self.entries]
        for s in range(self.size):
            out[s][t] = column[s]
        return out

    def to_json_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "k": self.k,
            "n": self.n,
            "outside_paper_hypotheses": self.outside_paper_hypotheses,
            "entries": [[_frac_str(e) for e in row] for row in self.entries],
        }


def _frac_str(q: Fraction) -> dict:
    return {"num": str(q.numerator), "den": str(q.denominator)}


def build_M(k: int, n: int, allow_outside_hypotheses: bool = False) -> RationalMatrix:
    """Build M(k, n); requires n/2 < k <= n unless exploration is requested.

    Outside the hypotheses, entries with a negative factorial argument are
    zero (the reciprocal-Gamma convention) and the matrix is labeled.
    """
    if not 1 <= k <= n:
        raise ValueError("need 1 <= k <= n")
    outside = 2 * k <= n
    if outside and not allow_outside_hypotheses:
        raise ValueError(
            f"k = {k}, n = {n} violates n/2 < k; pass allow_outside_hypotheses=True to explore"
        )
    size = n - k + 1
    rows = []
    for s in range(size):
        row = []
        for t in range(size):
            arg = k + t - s
            row.append(Fraction(1, math.factorial(arg)) if arg >= 0 else Fraction(0))
        rows.append(tuple(row))
    return RationalMatrix(k, n, tuple(rows), outside)


def _bareiss_det_int(m: list) -> int:
    """Fraction-free (Bareiss) determinant of an integer matrix."""
    n = len(m)
    if n == 0:
        return 1
    m = [row[:] for row in m]
    sign = 1
    prev = 1
    for p in range(n - 1):
        if m[p][p] == 0:
            for r in range(p + 1, n):
                if m[r][p] != 0:
                    m[p], m[r] = m[r], m[p]
                    sign = -sign
                    break
            else:
                return 0
        for r in range(p + 1, n):
            for c in range(p + 1, n):
                m[r][c] = (m[r][c] * m[p][p] - m[r][p] * m[p][c]) // prev
            m[r][p] = 0
        prev = m[p][p]
    return sign * m[n - 1][n - 1]


def det_exact(matrix: RationalMatrix) -> Fraction:
    """Exact determinant via integer scaling and fraction-free elimination."""
    rows = matrix.entries
    size = matrix.size
    denoms = [e.denominator for row in rows for e in row]
    scale = math.lcm(*denoms) if denoms else 1
    ints = [[int(e * scale) for e in row] for row in rows]
    return Fraction(_bareiss_det_int(ints), scale**size)


def _minor_det(rows: list, drop_row: int, drop_col: int) -> Fraction:
    sub = [
        [rows[r][c] for c in range(len(rows)) if c != drop_col]
        for r in range(len(rows))
        if r != drop_row
    ]
    if not sub:
        return Fraction(1)
    denoms = [e.denominator for row in sub for e in row]
    scale = math.lcm(*denoms)
    ints = [[int(e * scale) for e in row] for row in sub]
    return Fraction(_bareiss_det_int(ints), scale ** len(sub))


def cofactors(matrix: RationalMatrix) -> list:
    """Exact cofactor table C[s][t] = (-1)^(s+t) det(minor st)."""
    rows = [list(r) for r in matrix.entries]
    size = matrix.size
    return [
        [(-1) ** (s + t) * _minor_det(rows, s, t) for t in range(size)]
        for s in range(size)
    ]


@dataclass(frozen=True)
class SystemSolution:
    """Cramer solution of M u = rhs with determinant bookkeeping."""

    unknowns: Tuple
    det_M: Fraction
    det_M1: object
    residuals: Tuple

    def max_residual(self) -> float:
        out = 0.0
        for r in self.residuals:
            out = max(out, abs(_to_complex(r)))
        return out

    def to_json_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "unknowns": [_value_json(u) for u in self.unknowns],
            "det_M": _frac_str(self.det_M),
            "det_M1": _value_json(self.det_M1),
            "residuals": [_value_json(r) for r in self.residuals],
        }


def _to_complex(v) -> complex:
    if isinstance(v, QComplex):
        return v.to_complex()
    return complex(v)


def _value_json(v):
    if isinstance(v, Fraction):
        return _frac_str(v)
    if isinstance(v, QComplex):
        return {"re": _frac_str(v.re), "im": _frac_str(v.im)}
    v = complex(v)
    return [v.real, v.imag]


def cramer_solve(matrix: RationalMatrix, rhs: Sequence) -> SystemSolution:
    """Solve M u = rhs by Cramer column replacement.

    The cofactor expansion keeps the matrix side exact, so exact right-hand
    sides give exact unknowns and float right-hand sides keep full float
    accuracy.
    """
    size = matrix.size
    if len(rhs) != size:
        raise ValueError(f"rhs must have length {size}")
    det_m = det_exact(matrix)
    if det_m == 0:
        raise ZeroDivisionError("matrix is singular; Cramer solve unavailable")
    cof = cofactors(matrix)
    unknowns = []
    dets = []
    for t in range(size):
        # det of M with column t replaced by rhs, expanded along that column
        acc = None
        for s in range(size):
            term = rhs[s] * cof[s][t]
            acc = term if acc is None else acc + term
        dets.append(acc)
        unknowns.append(acc / det_m)
    residuals = []
    for s in range(size):
        acc = None
        for t in range(size):
            term = unknowns[t] * matrix.entries[s][t]
            acc = term if acc is None else acc + term
        residuals.append(acc - rhs[s])
    return SystemSolution(tuple(unknowns), det_m, dets[0], tuple(residuals))


@dataclass(frozen=True)
class RecoveryReport:
    """Round trip g -> R_s -> Cramer -> g^(k)(z_j), with decrease certificates."""

    solution: SystemSolution
    expected: Tuple
    max_rel_error: float
    consistent: bool
    rhs: Tuple
    certificate_ratios: Tuple[float, ...]
    cross_check_gap: Optional[float]


def recover_gk(
    g: AnalyticExpr,
    z_j,
    z_l,
    k: int,
    n: int,
    alpha: float,
    tol: float = 1e-9,
    vanish_tol: float = 1e-10,
    cross_check: bool = False,
) -> RecoveryReport:
    """Recover g^(k)(z_j) through the reciprocal-factorial system.

    Requires g to vanish at z_j to order >= k (verified on the jet).  The
    right-hand sides R_s come from the jet of g at z_j; the report carries
    the ratios |R_s| / |z_l - z_j|^(alpha - k), which are the decrease
    certificates of the derivation, and optionally the Taylor-remainder
    cross-check of R_s computed from g^(s)(z_l).
    """
    if 2 * k <= n:
        raise ValueError("recovery requires n/2 < k <= n")
    if _to_complex(z_l) == _to_complex(z_j):
        raise ValueError("z_l must differ from z_j")
    jet = g.jet(z_j, n)
    derivs = [jet.derivative(m) for m in range(n + 1)]
    scale = max((abs(_to_complex(c)) for c in jet.coeffs), default=0.0)
    if scale == 0.0:
        raise ValueError("g is numerically zero at z_j; recovery is vacuous")
    for i in range(k):
        if abs(_to_complex(jet.coeffs[i])) > vanish_tol * scale:
            raise ValueError(
                f"g does not vanish to order {k} at z_j: coefficient {i} is "
                f"{_to_complex(jet.coeffs[i])!r}"
            )
    step = z_l - z_j
    matrix = build_M(k, n)
    rhs = []
    for s in range(n - k + 1):
        acc = None
        for m in range(k, n + 1):
            term = derivs[m] * (step ** (m - k)) * Fraction(1, math.factorial(m - s))
            acc = term if acc is None else acc + term
        rhs.append(acc)
    sol = cramer_solve(matrix, rhs)
    expected = tuple(derivs[k + t] * step**t for t in range(n - k + 1))
    max_rel = 0.0
    for u, e in zip(sol.unknowns, expected):
        ref = max(abs(_to_complex(e)), scale * abs(_to_complex(step)) ** (n - k))
        if ref == 0:
            continue
        max_rel = max(max_rel, abs(_to_complex(u) - _to_complex(e)) / ref)
    ratios = tuple(
        abs(_to_complex(r)) / abs(_to_complex(step)) ** (alpha - k) for r in rhs
    )
    gap = None
    if cross_check:
        # Taylor-remainder route: R_s is approximately g^(s)(z_l) (z_l-z_j)^(s-k)
        gap = 0.0
        jet_l = g.jet(z_l, n)
        for s in range(n - k + 1):
            alt = _to_complex(jet_l.derivative(s)) * _to_complex(step) ** (s - k)
            gap = max(gap, abs(alt - _to_complex(rhs[s])))
    return RecoveryReport(
        solution=sol,
        expected=expected,
        max_rel_error=max_rel,
        consistent=bool(max_rel <= tol),
        rhs=tuple(rhs),
        certificate_ratios=ratios,
        cross_check_gap=gap,
    )
