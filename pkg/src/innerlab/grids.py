"""Sampling meshes for the disk and the circle.

The interior mesh is hyperbolically graded: ring radii follow
1 - 2^(-i/rings_per_level) so that each dyadic boundary layer
1 - |z| ~ 2^(-q) holds ``rings_per_level`` rings, and the angular step on a
ring is proportional to 1 - r.  Refining the depth extends the mesh without
moving existing nodes, so sup-estimators are monotone under refinement.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


class EmptyGridError(ValueError):
    """All grid points were excluded (e.g. swallowed by spectrum zones)."""


@dataclass(frozen=True)
class GridSpec:
    """Polar mesh of the open disk, graded toward the boundary.

    depth:           deepest dyadic layer; the largest radius is 1 - 2^(-depth).
    rings_per_level: rings per dyadic layer (geometric subdivision of 1 - r).
    angular_base:    points on the innermost ring; counts scale like 1/(1-r).
    """

    depth: int = 12
    rings_per_level: int = 4
    angular_base: int = 16

    def __post_init__(self):
        if self.depth < 1 or self.rings_per_level < 1 or self.angular_base < 1:
            raise ValueError("grid parameters must be positive")

    def radii(self) -> np.ndarray:
        i = np.arange(0, self.depth * self.rings_per_level + 1)
        return 1.0 - np.power(2.0, -i / self.rings_per_level)

    def points(self) -> np.ndarray:
        """All mesh nodes in canonical order (ring index, then angle index)."""
        chunks = [np.zeros(1, dtype=complex)]
        R = self.rings_per_level
        for i in range(1, self.depth * R + 1):
            r = 1.0 - 2.0 ** (-i / R)
            n = int(math.ceil(self.angular_base * 2.0 ** (i / R)))
            ang = 2 * np.pi * np.arange(n) / n
            chunks.append(r * np.exp(1j * ang))
        return np.concatenate(chunks)

    def coarsen(self) -> "GridSpec":
        if self.depth <= 1:
            raise ValueError("cannot coarsen below depth 1")
        return GridSpec(self.depth - 1, self.rings_per_level, self.angular_base)

    def refine(self) -> "GridSpec":
        return GridSpec(self.depth + 1, self.rings_per_level, self.angular_base)

    def descriptor(self) -> str:
        return f"polar(depth={self.depth},rings={self.rings_per_level},angular_base={self.angular_base})"


@dataclass(frozen=True)
class BoundaryGrid:
    """Equispaced circle mesh with an exclusion zone around spectrum points."""

    log2_points: int = 14
    exclusion: float = 1e-6

    def __post_init__(self):
        if self.log2_points < 1:
            raise ValueError("log2_points must be positive")
        if self.exclusion < 0:
            raise ValueError("exclusion must be nonnegative")

    def all_points(self) -> np.ndarray:
        n = 2**self.log2_points
        return np.exp(2j * np.pi * np.arange(n) / n)

    def points(self, spectrum=()) -> np.ndarray:
        """Mesh nodes at chordal distance > exclusion from every spectrum point."""
        zeta = self.all_points()
        spectrum = np.asarray(list(spectrum), dtype=complex)
        if spectrum.size:
            keep = np.ones(zeta.shape, dtype=bool)
            for s in spectrum:
                keep &= np.abs(zeta - s) > self.exclusion
            zeta = zeta[keep]
        if zeta.size == 0:
            raise EmptyGridError("every boundary node fell inside an exclusion zone")
        return zeta

    def coarsen(self) -> "BoundaryGrid":
        if self.log2_points <= 1:
            raise ValueError("cannot coarsen below 2 points")
        return BoundaryGrid(self.log2_points - 1, self.exclusion)

    def descriptor(self) -> str:
        return f"circle(n=2^{self.log2_points},exclusion={self.exclusion:g})"
