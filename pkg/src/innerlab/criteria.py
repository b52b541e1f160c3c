"""Finite-grid estimators for the decrease and boundedness criteria.

Every estimator reports a sup over a sampled region together with the
witness point attaining it; nothing here decides membership in a smoothness
class.  Verdict vocabulary is {bounded, comparable, divergent,
inconclusive}: "bounded" means the sup moved by at most 10% between two
grid depths (or stayed under an explicit user gate), "comparable" is the
two-sided version for ratio profiles, "divergent" requires a growing tail,
and everything else is inconclusive.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np

from .exprs import AnalyticExpr
from .geometry import ZeroSequence, nearest_gaps
from .grids import BoundaryGrid, GridSpec
from .inner import InnerFunction, sample_sublevel

SCHEMA_VERSION = "1"

#: default relative-change threshold of the two-depth stability gate
STABILITY_RTOL = 0.10


@dataclass(frozen=True)
class CriterionReport:
    """A sup estimate with its witness, grid provenance, and verdict."""

    criterion: str
    params: dict
    sup: float
    witness: Optional[complex]
    witness_value: Optional[float]
    grid: str
    verdict: Optional[str] = None
    skipped: int = 0
    empty: bool = False
    flags: dict = field(default_factory=dict)

    def to_json_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "criterion": self.criterion,
            "params": {k: _jsonable(v) for k, v in self.params.items()},
            "sup": self.sup,
            "witness": None if self.witness is None else [self.witness.real, self.witness.imag],
            "witness_value": self.witness_value,
            "grid": self.grid,
            "verdict": self.verdict,
            "skipped": self.skipped,
            "empty": self.empty,
            "flags": {k: _jsonable(v) for k, v in self.flags.items()},
        }


def _jsonable(v):
    if isinstance(v, complex):
        return [v.real, v.imag]
    if isinstance(v, (np.floating, np.integer)):
        return v.item()
    if isinstance(v, (bool, int, float, str)) or v is None:
        return v
    return str(v)


def _sup_with_witness(points: np.ndarray, values: np.ndarray, revalue) -> Tuple[float, complex, float]:
    """Max of ``values`` with its point; the witness is re-evaluated through
    ``revalue`` so the reported sup is reproducible from the witness alone."""
    idx = int(np.argmax(values))
    sup = float(values[idx])
    w = complex(points[idx])
    check = float(revalue(w))
    if not math.isclose(check, sup, rel_tol=1e-9, abs_tol=1e-300):
        raise AssertionError(f"witness re-evaluation drifted: {check} vs {sup}")
    return sup, w, check

def _finite_mask(values: np.ndarray) -> np.ndarray:
    return np.isfinite(values)


def _stability_verdict(sup_fine: float, sup_coarse: float, rtol: float = STABILITY_RTOL) -> str:
    if sup_fine == 0.0:
        return "bounded"
    return "bounded" if abs(sup_fine - sup_coarse) <= rtol * abs(sup_fine) else "inconclusive"


def decrease_sup(
    f: AnalyticExpr,
    theta: InnerFunction,
    eps: float,
    exponent: float,
    grid: GridSpec = GridSpec(),
    gate: Optional[float] = None,
    check_stability: bool = True,
) -> CriterionReport:
    """sup over the sampled sublevel set {|theta| < eps} of
    |f(z)| / (1 - |z|)^exponent."""
    if not 0 < eps < 1:
        raise ValueError("eps must lie in (0, 1)")
    if not exponent > 0:
        raise ValueError("exponent must be positive")
    params = {"eps": eps, "exponent": exponent}
    sample = sample_sublevel(theta, eps, grid)
    if sample.empty:
        return CriterionReport("decrease_sup", params, 0.0, None, None,
                               grid.descriptor(), verdict=None, empty=True,
                               flags={"empty_sublevel": True})
    vals = np.abs(np.asarray(f.eval(sample.points)))
    finite = _finite_mask(vals)
    ratios = vals[finite] / (1 - np.abs(sample.points[finite])) ** exponent
    sup, w, wv = _sup_with_witness(
        sample.points[finite], ratios,
        lambda z: abs(complex(f.eval(z))) / (1 - abs(z)) ** exponent,
    )
    flags = {}
    verdict = None
    if gate is not None:
        verdict = "bounded" if sup <= gate else "inconclusive"
    elif check_stability and grid.depth > 1:
        coarse = decrease_sup(f, theta, eps, exponent, grid.coarsen(),
                              gate=None, check_stability=False)
        flags["sup_coarse"] = coarse.sup
        verdict = _stability_verdict(sup, coarse.sup)
    return CriterionReport("decrease_sup", params, sup, w, wv, grid.descriptor(),
                           verdict=verdict, skipped=int((~finite).sum()), flags=flags)


def derivative_decrease(
    f: AnalyticExpr,
    theta: InnerFunction,
    eps: float,
    alpha: float,
    k: int,
    grid: GridSpec = GridSpec(),
    gate: Optional[float] = None,
    check_stability: bool = True,
) -> CriterionReport:
    """sup over the sampled {|theta| < eps/2} of
    |f^(k)(z)| / (1 - |z|)^(alpha - k)."""
    if not 0 < eps < 1:
        raise ValueError("eps must lie in (0, 1)")
    if k < 1:
        raise ValueError("k must be at least 1")
    params = {"eps": eps, "alpha": alpha, "k": k}
    sample = sample_sublevel(theta, eps / 2, grid)
    if sample.empty:
        return CriterionReport("derivative_decrease", params, 0.0, None, None,
                               grid.descriptor(), empty=True,
                               flags={"empty_sublevel": True})
    coeffs = f.jet_coeffs(sample.points, k)
    derivs = np.abs(coeffs[..., k]) * math.factorial(k)
    finite = _finite_mask(derivs)
    ratios = derivs[finite] / (1 - np.abs(sample.points[finite])) ** (alpha - k)
    sup, w, wv = _sup_with_witness(
        sample.points[finite], ratios,
        lambda z: abs(f.jet(z, k).derivative(k)) / (1 - abs(z)) ** (alpha - k),
    )
    flags = {}
    verdict = None
    if gate is not None:
        verdict = "bounded" if sup <= gate else "inconclusive"
    elif check_stability and grid.depth > 1:
        coarse = derivative_decrease(f, theta, eps, alpha, k, grid.coarsen(),
                                     gate=None, check_stability=False)
        flags["sup_coarse"] = coarse.sup
        verdict = _stability_verdict(sup, coarse.sup)
    return CriterionReport("derivative_decrease", params, sup, w, wv, grid.descriptor(),
                           verdict=verdict, skipped=int((~finite).sum()), flags=flags)


def boundary_crit(
    f: AnalyticExpr,
    theta: InnerFunction,
    N: int,
    bgrid: BoundaryGrid = BoundaryGrid(),
) -> CriterionReport:
    """sup over the boundary grid of |f(zeta)| |theta'(zeta)|^N.

    Points inside the spectrum exclusion zone are dropped; when the sup
    concentrates on that zone's rim the report flags edge growth (the sup
    would diverge as the exclusion shrinks)."""
    spectrum = theta.spectrum().points
    zeta = bgrid.points(spectrum)
    deriv = theta.boundary_deriv_modulus(zeta)
    vals = np.abs(np.asarray(f.eval(zeta))) * deriv**N
    finite = _finite_mask(vals)
    sup, w, wv = _sup_with_witness(
        zeta[finite], vals[finite],
        lambda z: abs(complex(f.eval(z))) * theta.boundary_deriv_modulus(z) ** N,
    )
    flags = {}
    if spectrum:
        relaxed = np.ones(zeta.shape, dtype=bool)
        for s in spectrum:
            relaxed &= np.abs(zeta - s) > 10 * bgrid.exclusion
        relaxed &= finite
        if relaxed.any():
            sup_relaxed = float(vals[relaxed].max())
            flags["sup_off_rim"] = sup_relaxed
            flags["edge_growth"] = bool(sup > 1.5 * sup_relaxed)
    return CriterionReport("boundary_crit", {"N": N}, sup, w, wv, bgrid.descriptor(),
                           skipped=int((~finite).sum()), flags=flags)


def shider_sup(
    theta: InnerFunction,
    l: int,
    bgrid: BoundaryGrid = BoundaryGrid(),
) -> CriterionReport:
    """Empirical constant sup |theta^(l)(zeta)| tau_theta(zeta)^l over the
    boundary grid."""
    if l < 1:
        raise ValueError("l must be at least 1")
    zeta = bgrid.points(theta.spectrum().points)
    coeffs = theta.jet_coeffs(zeta, l)
    derivs = np.abs(coeffs[..., l]) * math.factorial(l)
    _, tau = theta.d_tau(zeta)
    vals = derivs * tau**l
    finite = _finite_mask(vals)

    def revalue(z):
        d = abs(theta.jet(z, l).derivative(l))
        _, t = theta.d_tau(z)
        return d * t**l

    sup, w, wv = _sup_with_witness(zeta[finite], vals[finite], revalue)
    return CriterionReport("shider_sup", {"l": l}, sup, w, wv, bgrid.descriptor(),
                           skipped=int((~finite).sum()))


@dataclass(frozen=True)
class LeibnizReport:
    """Per-term sups of the order-N product-rule expansion of (f theta)^(N),
    plus the pointwise re-summation check."""

    terms: Tuple[CriterionReport, ...]
    tau_terms: Tuple[CriterionReport, ...]
    sum_check_max_rel: float
    grid: str


def leibniz_terms(
    f: AnalyticExpr,
    theta: InnerFunction,
    N: int,
    bgrid: BoundaryGrid = BoundaryGrid(),
) -> LeibnizReport:
    """For each l = 0..N: sup |f^(N-l) theta^(l)| and sup |f^(N-l)| / tau^l
    over the boundary grid, plus verification that the binomial expansion
    reproduces (f theta)^(N) pointwise."""
    zeta = bgrid.points(theta.spectrum().points)
    fj = f.jet_coeffs(zeta, N)
    tj = theta.jet_coeffs(zeta, N)
    _, tau = theta.d_tau(zeta)
    term_reports = []
    tau_reports = []
    total = np.zeros(zeta.shape, dtype=complex)
    for l in range(N + 1):
        f_deriv = fj[..., N - l] * math.factorial(N - l)
        t_deriv = tj[..., l] * math.factorial(l)
        total += math.comb(N, l) * f_deriv * t_deriv
        prod_vals = np.abs(f_deriv * t_deriv)
        finite = _finite_mask(prod_vals)
        sup, w, wv = _sup_with_witness(
            zeta[finite], prod_vals[finite],
            lambda z, l=l: abs(
                f.jet(z, N - l).derivative(N - l) * theta.jet(z, l).derivative(l)
            ),
        )
        term_reports.append(CriterionReport(
            "leibniz_term", {"N": N, "l": l}, sup, w, wv, bgrid.descriptor(),
            skipped=int((~finite).sum())))
        tau_vals = np.abs(f_deriv) / tau**l
        finite = _finite_mask(tau_vals)

        def tau_revalue(z, l=l):
            d = abs(f.jet(z, N - l).derivative(N - l))
            _, t = theta.d_tau(z)
            return d / t**l

        sup, w, wv = _sup_with_witness(zeta[finite], tau_vals[finite], tau_revalue)
        tau_reports.append(CriterionReport(
            "leibniz_tau_bound", {"N": N, "l": l}, sup, w, wv, bgrid.descriptor(),
            skipped=int((~finite).sum())))
    # independent route: N-th derivative of the product jet
    from .jets import batch_mul

    direct = batch_mul(fj, tj)[..., N] * math.factorial(N)
    scale = np.abs(direct).max()
    denom = np.maximum(np.abs(direct), 1e-30 + 1e-16 * scale)
    max_rel = float((np.abs(total - direct) / denom).max())
    return LeibnizReport(tuple(term_reports), tuple(tau_reports), max_rel, bgrid.descriptor())


@dataclass(frozen=True)
class ZeroDecayProfile:
    """Decay of |f(z_j)| against the gap scale d_j^(alpha-k) (1-|z_j|)^k and
    the pure Blaschke scale (1-|z_j|)^alpha."""

    r1: np.ndarray
    r2: np.ndarray
    dichotomy: np.ndarray
    interior: np.ndarray
    r1_max: float
    r1_min: float
    r2_max: float
    r2_min: float
    verdict_r1: str
    verdict_r2: str
    gate: float

    def to_json_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "r1_max": self.r1_max,
            "r1_min": self.r1_min,
            "r2_max": self.r2_max,
            "r2_min": self.r2_min,
            "verdict_r1": self.verdict_r1,
            "verdict_r2": self.verdict_r2,
            "gate": self.gate,
        }


def zero_decay_profile(
    f: Union[AnalyticExpr, Sequence[complex], np.ndarray],
    seq: ZeroSequence,
    k: int,
    alpha: float,
    gate: float = 100.0,
) -> ZeroDecayProfile:
    """Ratio profiles r1_j = |f(z_j)| / (d_j^(alpha-k) (1-|z_j|)^k) and
    r2_j = |f(z_j)| / (1-|z_j|)^alpha, with max/min summaries over the
    interior (non-edge) indices and qualitative verdicts.

    r1 probes two-sided comparability; r2 probes one-sided boundedness, and
    a growing tail with max/min beyond the gate is reported divergent.
    """
    n = math.ceil(alpha) - 1
    if not 0 <= k <= n:
        raise ValueError(f"need 0 <= k <= {n} for alpha = {alpha}")
    pts = seq.array
    if isinstance(f, AnalyticExpr):
        fvals = np.abs(np.asarray(f.eval(pts)))
    else:
        fvals = np.abs(np.asarray(f, dtype=complex))
        if fvals.shape != pts.shape:
            raise ValueError("value table length must match the sequence")
    gaps = nearest_gaps(seq)
    one_minus = 1 - np.abs(pts)
    r1 = fvals / (gaps ** (alpha - k) * one_minus**k)
    r2 = fvals / one_minus**alpha
    dichotomy = gaps / one_minus
    interior = ~seq.edge_mask()
    if not interior.any():
        interior = np.ones(len(pts), dtype=bool)
    r1_int, r2_int = r1[interior], r2[interior]
    r1_max, r1_min = float(r1_int.max()), float(r1_int.min())
    r2_max, r2_min = float(r2_int.max()), float(r2_int.min())
    verdict_r1 = "comparable" if r1_min > 0 and r1_max / r1_min <= gate else "inconclusive"
    if r2_min > 0 and r2_max / r2_min <= gate:
        verdict_r2 = "bounded"
    else:
        tail = r2_int[-min(5, len(r2_int)):]
        growing = len(tail) >= 2 and bool(np.all(np.diff(tail) > 0))
        at_end = bool(np.argmax(r2_int) == len(r2_int) - 1)
        verdict_r2 = "divergent" if (growing and at_end) else "inconclusive"
    return ZeroDecayProfile(r1, r2, dichotomy, interior, r1_max, r1_min,
                            r2_max, r2_min, verdict_r1, verdict_r2, gate)


@dataclass(frozen=True)
class CoveringReport:
    """Pseudohyperbolic covering data of a sampled sublevel set, and the
    exact two-factor splitting check."""

    lambda_emp: Optional[float]
    lambda_witness: Optional[complex]
    c_emp: Optional[float]
    split_violations: int
    n_samples: int
    empty: bool
    grid: str

    @property
    def split_ok(self) -> bool:
        return self.split_violations == 0

    def to_json_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "lambda_emp": self.lambda_emp,
            "lambda_witness": None if self.lambda_witness is None
            else [self.lambda_witness.real, self.lambda_witness.imag],
            "c_emp": self.c_emp,
            "split_violations": self.split_violations,
            "n_samples": self.n_samples,
            "empty": self.empty,
            "grid": self.grid,
        }


def covering_profile(
    B1: InnerFunction,
    B2: InnerFunction,
    eps: float,
    grid: GridSpec = GridSpec(),
) -> CoveringReport:
    """Over the sampled {|B1 B2| < eps}: the worst pseudohyperbolic distance
    to the nearest zero, the Euclidean comparability constant for that zero,
    and the pointwise check that each sample lies in {|B1| < sqrt(eps)} or
    {|B2| < sqrt(eps)}."""
    if B1.atoms or B2.atoms:
        raise ValueError("covering profile expects pure Blaschke factors")
    B = B1 * B2
    sample = sample_sublevel(B, eps, grid)
    if sample.empty:
        return CoveringReport(None, None, None, 0, 0, True, grid.descriptor())
    z = sample.points
    root = math.sqrt(eps)
    m1 = np.abs(B1.eval(z)) if (B1.zeros or B1.atoms or B1.phase != 1) else np.ones(z.shape)
    m2 = np.abs(B2.eval(z)) if (B2.zeros or B2.atoms or B2.phase != 1) else np.ones(z.shape)
    violations = int(np.count_nonzero((m1 >= root) & (m2 >= root)))
    zeros = np.asarray(B.zeros, dtype=complex)
    if zeros.size == 0:
        return CoveringReport(None, None, None, violations, int(z.size), False, grid.descriptor())
    num = np.abs(z[:, None] - zeros[None, :])
    den = np.abs(1 - np.conj(z[:, None]) * zeros[None, :])
    rho_mat = num / den
    nearest = np.argmin(rho_mat, axis=1)
    min_rho = rho_mat[np.arange(z.size), nearest]
    idx = int(np.argmax(min_rho))
    lambda_emp = float(min_rho[idx])
    zj = zeros[nearest]
    one_minus = 1 - np.abs(z)
    c_vals = np.maximum(np.abs(z - zj) / one_minus, (1 - np.abs(zj)) / one_minus)
    c_emp = float(c_vals.max())
    return CoveringReport(lambda_emp, complex(z[idx]), c_emp, violations,
                          int(z.size), False, grid.descriptor())
