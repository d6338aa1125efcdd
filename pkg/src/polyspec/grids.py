"""Tensor-product interior grids with Dirichlet extension-by-zero.

A domain is a box (or a bitmap-masked rectangle) discretized on a uniform
grid. Only interior points carry unknowns; every value outside the interior
is identified with zero, which is how the clamped boundary conditions enter
the discrete operators.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

SHAPES = ("interval", "rectangle", "box", "masked-rectangle")
_SHAPE_DIMS = {"interval": 1, "rectangle": 2, "box": 3, "masked-rectangle": 2}


class GridError(ValueError):
    """Invalid domain description."""


@dataclass(frozen=True)
class DomainSpec:
    """Declarative description of the domain, grid and operator order.

    extents and h are per-axis; the interior point count per axis is
    extents[d]/h[d] - 1, which must come out integral. mask (rows of '0'/'1'
    characters, axis 0 major) selects interior cells for masked rectangles.
    """

    shape: str
    n: int
    extents: tuple
    h: tuple
    l: int = 1
    mask: Optional[tuple] = None

    def __post_init__(self):
        if self.shape not in SHAPES:
            raise GridError(f"unknown shape {self.shape!r}; expected one of {SHAPES}")
        if self.n != _SHAPE_DIMS[self.shape]:
            raise GridError(f"shape {self.shape!r} requires n={_SHAPE_DIMS[self.shape]}, got {self.n}")
        extents = tuple(float(e) for e in self.extents)
        h = tuple(float(v) for v in self.h)
        if len(extents) != self.n or len(h) != self.n:
            raise GridError("extents and h must both have length n")
        if any(e <= 0 for e in extents) or any(v <= 0 for v in h):
            raise GridError("extents and h must be positive")
        if self.l < 1:
            raise GridError("operator order l must be a positive integer")
        object.__setattr__(self, "extents", extents)
        object.__setattr__(self, "h", h)
        for d in range(self.n):
            ratio = extents[d] / h[d]
            if abs(ratio - round(ratio)) > 1e-8 * ratio:
                raise GridError(f"h[{d}]={h[d]} does not divide extent {extents[d]}")
        shape_pts = self.interior_shape
        minimum = 2 * self.l + 3
        for d, m in enumerate(shape_pts):
            if m < minimum:
                raise GridError(
                    f"axis {d}: {m} interior points < required {minimum} for order l={self.l}")
        if self.shape == "masked-rectangle":
            if self.mask is None:
                raise GridError("masked-rectangle requires a mask")
            mask = tuple(str(row) for row in self.mask)
            if len(mask) != shape_pts[0] or any(len(r) != shape_pts[1] for r in mask):
                raise GridError(
                    f"mask must be {shape_pts[0]} rows of {shape_pts[1]} characters")
            if any(ch not in "01" for row in mask for ch in row):
                raise GridError("mask rows may contain only '0' and '1'")
            if not any(ch == "1" for row in mask for ch in row):
                raise GridError("mask selects no interior cells")
            object.__setattr__(self, "mask", mask)
        elif self.mask is not None:
            raise GridError(f"mask is only valid for masked-rectangle, not {self.shape!r}")

    @classmethod
    def with_points(cls, shape: str, extents: Sequence[float],
                    points: Sequence[int], l: int = 1,
                    mask: Optional[Sequence[str]] = None) -> "DomainSpec":
        """Construct from interior point counts instead of spacings."""
        extents = tuple(float(e) for e in extents)
        h = tuple(e / (m + 1) for e, m in zip(extents, points))
        return cls(shape=shape, n=len(extents), extents=extents, h=h, l=l,
                   mask=tuple(mask) if mask is not None else None)

    @property
    def interior_shape(self) -> tuple:
        return tuple(int(round(e / v)) - 1 for e, v in zip(self.extents, self.h))

    @property
    def mask_array(self) -> np.ndarray:
        """Boolean interior-cell selector over the box, C-ordered."""
        if self.mask is None:
            return np.ones(self.interior_shape, dtype=bool)
        return np.array([[ch == "1" for ch in row] for row in self.mask], dtype=bool)

    @property
    def interior_count(self) -> int:
        return int(self.mask_array.sum())

    @property
    def cell_volume(self) -> float:
        return float(np.prod(self.h))

    def flat_indices(self) -> np.ndarray:
        """Positions of interior cells in the C-ordered box raveling."""
        return np.flatnonzero(self.mask_array.ravel())

    def axis_coordinates(self, p: int) -> np.ndarray:
        if not 0 <= p < self.n:
            raise GridError(f"axis {p} out of range for n={self.n}")
        return (np.arange(self.interior_shape[p]) + 1.0) * self.h[p]

    def coordinate(self, p: int) -> np.ndarray:
        """x_p at every interior cell, in flat (mask-restricted) order."""
        if not 0 <= p < self.n:
            raise GridError(f"axis {p} out of range for n={self.n}")
        axes = [self.axis_coordinates(d) for d in range(self.n)]
        grid = np.meshgrid(*axes, indexing="ij")
        return grid[p].ravel()[self.flat_indices()]

    def to_dict(self) -> dict:
        out = {
            "shape": self.shape,
            "n": self.n,
            "extents": list(self.extents),
            "h": list(self.h),
            "l": self.l,
        }
        if self.mask is not None:
            out["mask"] = list(self.mask)
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "DomainSpec":
        if not isinstance(data, dict):
            raise GridError("domain must be a mapping")
        try:
            shape = data["shape"]
            extents = tuple(data["extents"])
            h = tuple(data["h"])
        except KeyError as exc:
            raise GridError(f"domain is missing field {exc}") from exc
        n = int(data.get("n", len(extents)))
        l = int(data.get("l", 1))
        mask = data.get("mask")
        return cls(shape=shape, n=n, extents=extents, h=h, l=l,
                   mask=tuple(mask) if mask is not None else None)


@dataclass
class GridFunction:
    """Real values over the interior cells of a DomainSpec (flat order)."""

    values: np.ndarray
    spec: DomainSpec

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float).ravel()
        if self.values.size != self.spec.interior_count:
            raise GridError(
                f"value count {self.values.size} != interior count {self.spec.interior_count}")

    @classmethod
    def zeros(cls, spec: DomainSpec) -> "GridFunction":
        return cls(np.zeros(spec.interior_count), spec)

    @classmethod
    def from_box(cls, box_values: np.ndarray, spec: DomainSpec) -> "GridFunction":
        box_values = np.asarray(box_values, dtype=float)
        if box_values.shape != spec.interior_shape:
            raise GridError(f"box shape {box_values.shape} != {spec.interior_shape}")
        return cls(box_values.ravel()[spec.flat_indices()], spec)

    def embed(self) -> np.ndarray:
        """Full interior-box array with zeros on masked-out cells."""
        full = np.zeros(int(np.prod(self.spec.interior_shape)))
        full[self.spec.flat_indices()] = self.values
        return full.reshape(self.spec.interior_shape)

    def inner(self, other: "GridFunction") -> float:
        """Mesh inner product: cell volume times the Euclidean dot product."""
        return self.spec.cell_volume * float(np.dot(self.values, other.values))

    def norm(self) -> float:
        return float(np.sqrt(self.inner(self)))

    def normalized(self) -> "GridFunction":
        nrm = self.norm()
        if nrm == 0:
            raise GridError("cannot normalize the zero grid function")
        return GridFunction(self.values / nrm, self.spec)
