"""Finite Blaschke products and finite-atomic singular inner functions.

An :class:`InnerFunction` is stored in closed form: a list of disk zeros
(multiplicities allowed), a list of boundary atoms (location, mass), an
optional unimodular constant, and the boundary accumulation points declared
by the generating sequence.  Evaluation, jets, boundary derivative moduli,
the spectrum scales (d_theta, tau_theta), and sublevel-set sampling all
work from this data.

Truncations of infinite products are audited via ``tail_mass``: every
report of a truncated product should quote it.
"""

from __future__ import annotations

import csv
import warnings
from dataclasses import dataclass, field
from typing import Optional, Sequence, Tuple

import numpy as np

from .exprs import AnalyticExpr, Const, Moebius, Prod, SingExp, Z
from .geometry import ZeroSequence
from .grids import GridSpec
from .jets import Jet, SingularityError

SCHEMA_VERSION = "1"


@dataclass(frozen=True)
class Spectrum:
    """Zeros, atom locations, and declared boundary accumulation points."""

    points: Tuple[complex, ...]

    @property
    def empty(self) -> bool:
        return len(self.points) == 0

    def distance(self, z) -> np.ndarray:
        """Euclidean distance from z (scalar or array) to the spectrum."""
        if self.empty:
            raise ValueError("distance to an empty spectrum")
        pts = np.asarray(self.points, dtype=complex)
        z = np.asarray(z, dtype=complex)
        return np.abs(z[..., None] - pts).min(axis=-1)

    def contains(self, z, tol: float = 0.0) -> bool:
        if self.empty:
            return False
        return bool(self.distance(complex(z)) <= tol)


@dataclass(frozen=True)
class InnerFunction:
    """lambda * B * S in closed form.

    zeros:        Blaschke zeros in the open disk, multiplicities allowed.
    atoms:        (location on the circle, positive mass) pairs.
    phase:        optional unimodular constant lambda.
    normalized:   carry the conj(z_j)/|z_j| factor normalizers (a zero at the
                  origin contributes the factor z under the limit convention).
    accumulation: declared boundary accumulation points of the generating
                  sequence; they belong to the spectrum of the limit object.
    """

    zeros: Tuple[complex, ...] = ()
    atoms: Tuple[Tuple[complex, float], ...] = ()
    phase: complex = 1.0 + 0j
    normalized: bool = True
    accumulation: Tuple[complex, ...] = ()

    def __post_init__(self):
        zs = tuple(complex(z) for z in self.zeros)
        object.__setattr__(self, "zeros", zs)
        ats = tuple((complex(p), float(m)) for p, m in self.atoms)
        object.__setattr__(self, "atoms", ats)
        object.__setattr__(self, "phase", complex(self.phase))
        object.__setattr__(self, "accumulation", tuple(complex(p) for p in self.accumulation))
        for z in zs:
            if not abs(z) < 1:
                raise ValueError(f"Blaschke zero {z} is not in the open disk")
        for p, m in ats:
            if abs(abs(p) - 1) > 1e-9:
                raise ValueError(f"atom location {p} is not on the unit circle")
            if not m > 0:
                raise ValueError("atom masses must be positive")
        if abs(abs(self.phase) - 1) > 1e-9:
            raise ValueError("phase must be unimodular")

    # -- structure -----------------------------------------------------------

    @classmethod
    def from_sequence(cls, seq: ZeroSequence, normalized: bool = True) -> "InnerFunction":
        return cls(zeros=seq.points, normalized=normalized, accumulation=seq.accumulation)

    def spectrum(self) -> Spectrum:
        pts = tuple(dict.fromkeys(
            list(self.zeros) + [p for p, _ in self.atoms] + list(self.accumulation)
        ))
        return Spectrum(pts)

    def to_expr(self) -> AnalyticExpr:
        factors = []
        if self.phase != 1:
            factors.append(Const(self.phase))
        for z in self.zeros:
            if z == 0:
                factors.append(Z() if self.normalized else Moebius(0j, normalize=False))
            else:
                factors.append(Moebius(z, normalize=self.normalized))
        for p, m in self.atoms:
            factors.append(SingExp(p, m))
        if not factors:
            return Const(1.0 + 0j)
        if len(factors) == 1:
            return factors[0]
        return Prod(tuple(factors))

    def __mul__(self, other: "InnerFunction") -> "InnerFunction":
        if self.normalized != other.normalized:
            raise ValueError("cannot multiply differently normalized inner functions")
        return InnerFunction(
            self.zeros + other.zeros,
            self.atoms + other.atoms,
            self.phase * other.phase,
            self.normalized,
            tuple(dict.fromkeys(self.accumulation + other.accumulation)),
        )

    # -- evaluation ----------------------------------------------------------

    def eval(self, z):
        """theta(z) for scalar z or a numpy array of points."""
        if not isinstance(z, np.ndarray):
            if self.spectrum().contains(z):
                atoms = [p for p, _ in self.atoms]
                if complex(z) in atoms:
                    raise SingularityError(f"evaluation at the atom {z}")
        return self.to_expr().eval(z)

    def jet(self, z, order: int) -> Jet:
        zc = complex(z)
        if abs(abs(zc) - 1) <= 1e-12 and self.spectrum().contains(zc, tol=0.0):
            raise SingularityError(f"jet at the boundary spectrum point {zc}")
        if any(zc == p for p, _ in self.atoms):
            raise SingularityError(f"jet at the atom {zc}")
        return self.to_expr().jet(zc, order)

    def jet_coeffs(self, z: np.ndarray, order: int) -> np.ndarray:
        return self.to_expr().jet_coeffs(z, order)

    def boundary_deriv_modulus(self, zeta):
        """|theta'(zeta)| on the circle, in closed form:
        sum_j (1-|z_j|^2)/|zeta-z_j|^2 + sum_i 2 sigma_i / |zeta-zeta_i|^2.
        """
        scalar = not isinstance(zeta, np.ndarray)
        z = np.asarray(zeta, dtype=complex)
        if np.any(np.abs(np.abs(z) - 1) > 1e-9):
            raise ValueError("boundary derivative modulus is defined on the circle")
        out = np.zeros(z.shape, dtype=float)
        for zj in self.zeros:
            d2 = np.abs(z - zj) ** 2
            out += (1 - abs(zj) ** 2) / d2
        for p, m in self.atoms:
            d2 = np.abs(z - p) ** 2
            if np.any(d2 == 0):
                raise SingularityError("boundary derivative modulus at an atom")
            out += 2 * m / d2
        if scalar:
            return float(out)
        return out

    def d_tau(self, zeta):
        """(d_theta(zeta), tau_theta(zeta)) with
        d_theta = dist(zeta, spectrum) and tau = min(d_theta, 1/|theta'|).

        An empty spectrum is flagged with a warning and d_theta = 2 (the
        disk diameter)."""
        spec = self.spectrum()
        scalar = not isinstance(zeta, np.ndarray)
        z = np.asarray(zeta, dtype=complex)
        if spec.empty:
            warnings.warn("empty spectrum: d_theta defaults to the disk diameter 2")
            d = np.full(z.shape, 2.0)
        else:
            d = spec.distance(z)
            if np.any(d == 0):
                raise SingularityError("d_tau at a spectrum point")
        deriv = self.boundary_deriv_modulus(z)
        deriv = np.asarray(deriv, dtype=float)
        with np.errstate(divide="ignore"):
            inv = np.where(deriv > 0, 1.0 / np.where(deriv > 0, deriv, 1.0), np.inf)
        tau = np.minimum(d, inv)
        if scalar:
            return float(d), float(tau)
        return d, tau

    # -- serialization ---------------------------------------------------------

    def to_json_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "zeros": [[z.real, z.imag] for z in self.zeros],
            "atoms": [[p.real, p.imag, m] for p, m in self.atoms],
            "phase": [self.phase.real, self.phase.imag],
            "normalized": self.normalized,
            "accumulation": [[p.real, p.imag] for p in self.accumulation],
        }

    @classmethod
    def from_json_dict(cls, doc: dict) -> "InnerFunction":
        if doc.get("schema_version") != SCHEMA_VERSION:
            raise ValueError(f"unsupported inner function schema {doc.get('schema_version')!r}")
        return cls(
            zeros=tuple(complex(z[0], z[1]) for z in doc.get("zeros", [])),
            atoms=tuple((complex(a[0], a[1]), a[2]) for a in doc.get("atoms", [])),
            phase=complex(*doc.get("phase", [1.0, 0.0])),
            normalized=bool(doc.get("normalized", True)),
            accumulation=tuple(complex(p[0], p[1]) for p in doc.get("accumulation", [])),
        )


# -- spec surface -------------------------------------------------------------


def eval_inner(theta: InnerFunction, z):
    return theta.eval(z)


def inner_jet(theta: InnerFunction, z, order: int) -> Jet:
    return theta.jet(z, order)


def boundary_deriv_modulus(theta: InnerFunction, zeta):
    return theta.boundary_deriv_modulus(zeta)


def d_tau(theta: InnerFunction, zeta):
    return theta.d_tau(zeta)


def tail_mass(seq: ZeroSequence, J: Optional[int] = None) -> float:
    """sum_{j > J} (1 - |z_j|): the auditable truncation error of a product."""
    return seq.tail_mass(J)


@dataclass(frozen=True)
class SublevelSample:
    """Grid points of the sublevel set {z : |theta(z)| < epsilon}."""

    epsilon: float
    points: np.ndarray
    moduli: np.ndarray
    grid: str
    n_grid: int

    def __post_init__(self):
        if not np.all(self.moduli < self.epsilon):
            raise ValueError("sublevel sample contains points violating |theta| < epsilon")

    @property
    def empty(self) -> bool:
        return self.points.size == 0

    def write_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["re", "im", "abs_theta", "one_minus_abs_z"])
            for z, m in zip(self.points, self.moduli):
                writer.writerow([repr(z.real), repr(z.imag), repr(float(m)),
                                 repr(float(1 - abs(z)))])


def sample_sublevel(theta: InnerFunction, epsilon: float, grid: GridSpec = GridSpec()) -> SublevelSample:
    """All mesh nodes with |theta| < epsilon, re-verified on output."""
    if not 0 < epsilon < 1:
        raise ValueError("epsilon must lie in (0, 1)")
    pts = grid.points()
    vals = np.abs(theta.eval(pts))
    keep = vals < epsilon
    sample = pts[keep]
    # defining inequality re-verified by an independent pass
    recheck = np.abs(theta.eval(sample))
    if not np.all(recheck < epsilon):
        raise AssertionError("sublevel re-verification failed")
    return SublevelSample(epsilon, sample, recheck, grid.descriptor(), pts.size)
