"""Named verification suites: reproducible batteries over the library.

Each suite maps to a family of identities or estimates from the rest of
the package and emits one check record per case.  Identical SuiteSpec and
seed produce identical records.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Callable, Dict, List, Optional

import numpy as np

from . import cramer
from .admissible import build_delta_jet, check_admissible, trace_of_expr
from .criteria import (
    boundary_crit,
    covering_profile,
    decrease_sup,
    leibniz_terms,
    shider_sup,
)
from .exact import QComplex
from .exprs import Const, IntPow, Moebius, OneMinusZPow, Prod, Sum, Z, polynomial
from .geometry import gen_sequence, v1_ratio
from .grids import BoundaryGrid, GridSpec
from .inner import InnerFunction
from .report import CheckRecord, Report, export

SUITE_IDS = (
    "lemma-identities",
    "matrix-sweep",
    "admissibility",
    "dichotomy",
    "criteria-corpus",
    "covering",
)


@dataclass(frozen=True)
class SuiteSpec:
    suite: str
    overrides: dict = field(default_factory=dict)
    seed: int = 0
    out_dir: Optional[str] = None

    def __post_init__(self):
        if self.suite not in SUITE_IDS:
            raise ValueError(f"unknown suite id {self.suite!r}; known: {', '.join(SUITE_IDS)}")


def _merge(defaults: dict, overrides: dict) -> dict:
    cfg = dict(defaults)
    for key, val in overrides.items():
        if key not in defaults:
            raise ValueError(f"unknown suite parameter {key!r}; known: {sorted(defaults)}")
        cfg[key] = val
    return cfg


def _random_disk_points(rng: np.random.Generator, count: int, rmax: float = 0.8) -> np.ndarray:
    r = rmax * np.sqrt(rng.random(count))
    ang = 2 * np.pi * rng.random(count)
    return r * np.exp(1j * ang)


def _suite_matrix_sweep(cfg: dict, rng) -> List[CheckRecord]:
    records = []
    for n in range(1, cfg["n_max"] + 1):
        for k in range(n // 2 + 1, n + 1):
            det = cramer.det_exact(cramer.build_M(k, n))
            records.append(CheckRecord(
                f"det_nonzero_k{k}_n{n}",
                "pass" if det != 0 else "fail",
                value={"num": str(det.numerator), "den": str(det.denominator)},
                gate="det != 0",
                witness={"k": k, "n": n},
            ))
    for (k, n), expect in (((2, 3), Fraction(1, 12)), ((3, 4), Fraction(1, 144))):
        det = cramer.det_exact(cramer.build_M(k, n))
        records.append(CheckRecord(
            f"det_spot_k{k}_n{n}",
            "pass" if det == expect else "fail",
            value=str(det), gate=str(expect), witness={"k": k, "n": n},
        ))
    return records


def _random_blaschke_case(rng, max_zeros: int, exact: bool):
    n_zeros = int(rng.integers(2, max_zeros + 1))
    if exact:
        zeros = []
        while len(zeros) < n_zeros:
            re = Fraction(int(rng.integers(-7, 8)), 16)
            im = Fraction(int(rng.integers(-7, 8)), 16)
            q = QComplex(re, im)
            if q.abs2() < Fraction(9, 10) and q not in zeros:
                zeros.append(q)
        coeffs = [QComplex(Fraction(int(rng.integers(-8, 9)), 4),
                           Fraction(int(rng.integers(-8, 9)), 4)) for _ in range(4)]
    else:
        zeros = list(_random_disk_points(rng, n_zeros))
        coeffs = list(rng.standard_normal(4) + 1j * rng.standard_normal(4))
    f = polynomial(coeffs)
    B = Prod(tuple(Moebius(z, normalize=False) for z in zeros))
    return f, B, zeros


def _lemma2_gap(f, B, zj, m: int):
    """(f B^m)^(m)(z_j) versus f(z_j) (B^m)^(m)(z_j); returns both sides."""
    Bm = IntPow(B, m)
    lhs = Prod((f, Bm)).jet(zj, m).derivative(m)
    rhs = f.jet(zj, 0).value * Bm.jet(zj, m).derivative(m)
    return lhs, rhs


def _suite_lemma_identities(cfg: dict, rng) -> List[CheckRecord]:
    records: List[CheckRecord] = []
    if cfg["corpus_size"] == 0:
        return records
    # float corpus
    for case in range(cfg["corpus_size"]):
        f, B, zeros = _random_blaschke_case(rng, cfg["max_zeros"], exact=False)
        m = int(rng.integers(1, cfg["m_max"] + 1))
        zj = zeros[int(rng.integers(0, len(zeros)))]
        lhs, rhs = _lemma2_gap(f, B, zj, m)
        scale = max(abs(complex(lhs)), abs(complex(rhs)), 1e-300)
        rel = abs(complex(lhs) - complex(rhs)) / scale
        records.append(CheckRecord(
            f"lemma2_float_{case}", "pass" if rel <= 1e-11 else "fail",
            value=rel, gate=1e-11, witness={"m": m, "z_j": [zj.real, zj.imag]}))
    # exact corpus
    for case in range(min(10, cfg["corpus_size"])):
        f, B, zeros = _random_blaschke_case(rng, min(cfg["max_zeros"], 6), exact=True)
        m = int(rng.integers(1, cfg["m_max"] + 1))
        zj = zeros[int(rng.integers(0, len(zeros)))]
        lhs, rhs = _lemma2_gap(f, B, zj, m)
        records.append(CheckRecord(
            f"lemma2_exact_{case}", "pass" if lhs == rhs else "fail",
            value="exact-equal" if lhs == rhs else "mismatch",
            gate="exact", witness={"m": m, "z_j": [float(zj.re), float(zj.im)]}))
    # Lemma 3: induction identity and the normalized-derivative band
    seq = gen_sequence("radial", {"a": 0.5}, cfg["lemma3_J"])
    B = Prod(tuple(Moebius(z, normalize=False) for z in seq.points))
    zeros = seq.array
    for m in (1, 2):
        worst = 0.0
        for j in range(4, min(36, len(zeros)), 5):
            zj = complex(zeros[j])
            lhs = IntPow(B, m + 1).jet(zj, m + 1).derivative(m + 1)
            rhs = (m + 1) * IntPow(B, m).jet(zj, m).derivative(m) * B.jet(zj, 1).derivative(1)
            worst = max(worst, abs(lhs - rhs) / max(abs(lhs), 1e-300))
        records.append(CheckRecord(
            f"lemma3_induction_m{m}", "pass" if worst <= 1e-11 else "fail",
            value=worst, gate=1e-11, witness={"m": m}))
    for m in (1, 2, 3):
        ratios = []
        for j in range(5, min(36, len(zeros) + 1)):
            zj = complex(zeros[j - 1])
            deriv = IntPow(B, m).jet(zj, m).derivative(m)
            ratios.append(abs(deriv) * (1 - abs(zj)) ** m)
        lo, hi = min(ratios), max(ratios)
        ok = 1e-3 <= lo and hi <= 1e3
        records.append(CheckRecord(
            f"lemma3_band_m{m}", "pass" if ok else "fail",
            value={"min": lo, "max": hi}, gate=[1e-3, 1e3], witness={"m": m}))
    return records


def _suite_admissibility(cfg: dict, rng) -> List[CheckRecord]:
    records = []
    sequences = {
        "spiral": gen_sequence("spiral", {"a": 0.25, "b": 0.5}, cfg["J"]),
        "radial": gen_sequence("radial", {"a": 0.5}, cfg["J"]),
    }
    gate = 1.0 + 1e-12
    for label, seq in sequences.items():
        for n in range(cfg["n_max"] + 1):
            for k in range(n + 1):
                for frac in (0.25, 0.5, 0.75, 1.0):
                    alpha = n + frac
                    c_min = check_admissible(build_delta_jet(seq, k, alpha)).c_min
                    records.append(CheckRecord(
                        f"lemma1_{label}_k{k}_n{n}_alpha{alpha}",
                        "pass" if c_min <= gate else "fail",
                        value=c_min, gate=gate,
                        witness={"seq": label, "k": k, "alpha": alpha}))
    # degree <= n polynomial traces are reproduced exactly
    pts = list(_random_disk_points(rng, 6))
    poly = polynomial(list(rng.standard_normal(3) + 1j * rng.standard_normal(3)))
    c_min = check_admissible(trace_of_expr(poly, pts, 2, 2.5)).c_min
    records.append(CheckRecord(
        "polynomial_trace_exact", "pass" if c_min <= 1e-9 else "fail",
        value=c_min, gate=1e-9, witness="degree-2 polynomial, n=2"))
    return records


def _suite_dichotomy(cfg: dict, rng) -> List[CheckRecord]:
    records = []
    spiral = gen_sequence("spiral", {"a": 0.25, "b": 0.5}, cfg["J"])
    radial = gen_sequence("radial", {"a": 0.5}, cfg["J"])
    ratios_s, max_s = v1_ratio(spiral)
    interior = ~spiral.edge_mask()
    increasing = bool(np.all(np.diff(ratios_s[interior]) > 0))
    records.append(CheckRecord(
        "spiral_ratios_increasing", "pass" if increasing else "fail",
        value=increasing, gate=True, witness={"J": cfg["J"]}))
    records.append(CheckRecord(
        "spiral_ratio_max", "pass" if max_s > cfg["spiral_gate"] else "fail",
        value=max_s, gate=cfg["spiral_gate"], witness={"J": cfg["J"]}))
    ratios_r, _ = v1_ratio(radial)
    dev = float(np.abs(ratios_r[~radial.edge_mask()] - 0.5).max())
    records.append(CheckRecord(
        "radial_ratios_constant", "pass" if dev <= 1e-12 else "fail",
        value=dev, gate=1e-12, witness={"J": cfg["J"]}))
    records.append(CheckRecord(
        "tail_mass", "info", value={"spiral": spiral.tail_mass(), "radial": radial.tail_mass()}))
    return records


def _suite_criteria_corpus(cfg: dict, rng) -> List[CheckRecord]:
    records = []
    bgrid = BoundaryGrid(cfg["boundary_log2"])
    bgrid_coarse = bgrid.coarsen()
    atom = InnerFunction(atoms=((1 + 0j, 1.0),))
    ident = InnerFunction(zeros=(0j,))
    # Lemma 5 closed-form case: |f| |theta'| is constant 2
    rep = boundary_crit(Prod((OneMinusZPow(1.0), OneMinusZPow(1.0))), atom, 1, bgrid)
    records.append(CheckRecord(
        "boundary_crit_atom_square", "pass" if abs(rep.sup - 2.0) <= 1e-9 else "fail",
        value=rep.sup, gate="2 +- 1e-9",
        witness=[rep.witness.real, rep.witness.imag]))
    rep = boundary_crit(Const(1.0), ident, 3, bgrid)
    records.append(CheckRecord(
        "boundary_crit_identity", "pass" if abs(rep.sup - 1.0) <= 1e-12 else "fail",
        value=rep.sup, gate="1 +- 1e-12", witness=[rep.witness.real, rep.witness.imag]))
    rep = shider_sup(ident, 1, bgrid)
    records.append(CheckRecord(
        "shider_identity_l1", "pass" if abs(rep.sup - 1.0) <= 1e-12 else "fail",
        value=rep.sup, gate="1 +- 1e-12", witness=[rep.witness.real, rep.witness.imag]))
    for label, theta, l in (("atom_l1", atom, 1), ("zero_half_l2", InnerFunction(zeros=(0.5 + 0j,)), 2)):
        fine = shider_sup(theta, l, bgrid).sup
        coarse = shider_sup(theta, l, bgrid_coarse).sup
        drift = abs(fine - coarse) / max(fine, 1e-300)
        records.append(CheckRecord(
            f"shider_stability_{label}", "pass" if drift <= 0.10 else "fail",
            value={"fine": fine, "coarse": coarse, "drift": drift}, gate=0.10,
            witness={"theta": label, "l": l}))
    corpus = [
        ("const_identity_N1", Const(1.0), ident, 1),
        ("slit_square_atom_N1", Prod((OneMinusZPow(1.0), OneMinusZPow(1.0))), atom, 1),
    ]
    zeros = _random_disk_points(rng, 3)
    B3 = InnerFunction(zeros=tuple(zeros))
    corpus.append(("poly_blaschke3_N2",
                   polynomial(list(rng.standard_normal(3) + 1j * rng.standard_normal(3))),
                   B3, 2))
    for label, f, theta, N in corpus:
        rep = leibniz_terms(f, theta, N, bgrid)
        records.append(CheckRecord(
            f"leibniz_sum_{label}", "pass" if rep.sum_check_max_rel <= 1e-11 else "fail",
            value=rep.sum_check_max_rel, gate=1e-11, witness={"N": N}))
        fine = max(t.sup for t in rep.terms)
        coarse = max(t.sup for t in leibniz_terms(f, theta, N, bgrid_coarse).terms)
        drift = abs(fine - coarse) / max(fine, 1e-300)
        records.append(CheckRecord(
            f"leibniz_term_stability_{label}", "pass" if drift <= 0.10 else "fail",
            value={"fine": fine, "coarse": coarse, "drift": drift}, gate=0.10,
            witness={"N": N}))
    rep = decrease_sup(Const(0.0), ident, 0.5, 1.5, GridSpec(cfg["grid_depth"]))
    records.append(CheckRecord(
        "decrease_sup_null", "pass" if rep.sup == 0.0 else "fail",
        value=rep.sup, gate=0.0, witness="f = 0"))
    return records


def _suite_covering(cfg: dict, rng) -> List[CheckRecord]:
    records = []
    grid = GridSpec(cfg["grid_depth"])
    for case in range(cfg["cases"]):
        count = int(rng.integers(2, 11))
        zeros = _random_disk_points(rng, count, rmax=0.95)
        split = rng.random(count) < 0.5
        if split.all() or not split.any():
            split[0] = ~split[0]
        B1 = InnerFunction(zeros=tuple(zeros[split]))
        B2 = InnerFunction(zeros=tuple(zeros[~split]))
        for eps in cfg["eps"]:
            rep = covering_profile(B1, B2, eps, grid)
            records.append(CheckRecord(
                f"split_exact_case{case}_eps{eps}",
                "pass" if rep.split_ok else "fail",
                value={"violations": rep.split_violations, "samples": rep.n_samples},
                gate=0, witness={"case": case, "eps": eps}))
    seq = gen_sequence("radial", {"a": 0.5}, 20)
    odd = InnerFunction(zeros=seq.points[0::2])
    even = InnerFunction(zeros=seq.points[1::2])
    fine = covering_profile(odd, even, 0.1, grid)
    coarse = covering_profile(odd, even, 0.1, grid.coarsen())
    drift = abs((fine.lambda_emp or 0.0) - (coarse.lambda_emp or 0.0))
    records.append(CheckRecord(
        "lambda_stability_radial_split", "pass" if drift <= 0.02 else "fail",
        value={"fine": fine.lambda_emp, "coarse": coarse.lambda_emp},
        gate=0.02, witness={"eps": 0.1}))
    records.append(CheckRecord(
        "lambda_below_one", "pass" if (fine.lambda_emp or 0.0) < 1.0 else "fail",
        value=fine.lambda_emp, gate=1.0, witness={"eps": 0.1}))
    return records


_DEFAULTS: Dict[str, dict] = {
    "matrix-sweep": {"n_max": 12},
    "lemma-identities": {"corpus_size": 50, "max_zeros": 8, "m_max": 4, "lemma3_J": 40},
    "admissibility": {"J": 40, "n_max": 4},
    "dichotomy": {"J": 30, "spiral_gate": 1e6},
    "criteria-corpus": {"boundary_log2": 13, "grid_depth": 8},
    "covering": {"cases": 10, "eps": [0.04, 0.25], "grid_depth": 8},
}

_BUILDERS: Dict[str, Callable] = {
    "matrix-sweep": _suite_matrix_sweep,
    "lemma-identities": _suite_lemma_identities,
    "admissibility": _suite_admissibility,
    "dichotomy": _suite_dichotomy,
    "criteria-corpus": _suite_criteria_corpus,
    "covering": _suite_covering,
}


def run_suite(spec: SuiteSpec) -> Report:
    """Execute a named suite; optionally persist report.json + report.csv."""
    cfg = _merge(_DEFAULTS[spec.suite], spec.overrides)
    rng = np.random.default_rng(spec.seed)
    records = _BUILDERS[spec.suite](cfg, rng)
    report = Report(spec.suite, cfg, spec.seed, tuple(records))
    if spec.out_dir is not None:
        out = Path(spec.out_dir)
        out.mkdir(parents=True, exist_ok=True)
        export(report, "json", out / "report.json")
        export(report, "csv", out / "report.csv")
    return report
