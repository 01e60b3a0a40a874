"""Dipole-dipole coupling tensor between two radical spins.

Two routes are provided:

* classical point dipoles, ``D = C (3 r r^T - r^2 I) / r^5``;
* a point dipole interacting with the delocalised spin density of the other
  radical, discretised as weighted points (e.g. atomic spin populations), so
  the volume integral becomes a weighted sum over those points.

``C = (mu0/4pi) g_e^2 mu_B^2`` is the SI form of the atomic-unit prefactor
``alpha^2 mu_B^2 g_e^2``.  Tensors are stored in joules.
"""

from __future__ import annotations

import enum
import io
from decimal import Decimal, InvalidOperation
import math
import re
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, TextIO

import numpy as np

from .constants import CODATA2018, PhysicalConstants
from .errors import SingularGeometryError, SpinDensityParseError, SpinDensityValidationError

# Closest allowed approach of the point dipole to any density point (m).
EXCLUSION_DISTANCE = 1e-12
WEIGHT_SUM_TOLERANCE = 1e-6
DEFAULT_AXIS = (0.0, 1.0, 0.0)


class Method(enum.Enum):
    CLASSICAL = "classical"
    DENSITY = "density"


@dataclass(frozen=True, eq=False)
class SpinDensity:
    """Spin density as weighted points; positions in metres."""

    positions: np.ndarray
    weights: np.ndarray
    label: str = ""

    def __post_init__(self):
        positions = np.array(self.positions, dtype=float).reshape(-1, 3)
        weights = np.array(self.weights, dtype=float).reshape(-1)
        if len(weights) == 0:
            raise SpinDensityValidationError("spin density has no points")
        if len(weights) != len(positions):
            raise SpinDensityValidationError(
                f"{len(positions)} positions but {len(weights)} weights"
            )
        if not np.all(np.isfinite(positions)):
            raise SpinDensityValidationError("non-finite position in spin density")
        if not np.all(np.isfinite(weights)):
            raise SpinDensityValidationError("non-finite weight in spin density")
        total = float(math.fsum(weights))
        if abs(total - 1.0) > WEIGHT_SUM_TOLERANCE:
            raise SpinDensityValidationError(
                f"spin populations must sum to 1 (tolerance {WEIGHT_SUM_TOLERANCE}), got {total!r}"
            )
        positions.flags.writeable = False
        weights.flags.writeable = False
        object.__setattr__(self, "positions", positions)
        object.__setattr__(self, "weights", weights)

    def __len__(self):
        return len(self.weights)

    def __eq__(self, other):
        if not isinstance(other, SpinDensity):
            return NotImplemented
        return (
            self.label == other.label
            and np.array_equal(self.positions, other.positions)
            and np.array_equal(self.weights, other.weights)
        )

    @classmethod
    def point(cls, position=(0.0, 0.0, 0.0), label="point"):
        return cls(np.array([position], dtype=float), np.array([1.0]), label)

    def translated(self, shift) -> "SpinDensity":
        return SpinDensity(self.positions + np.asarray(shift, dtype=float), self.weights, self.label)

    @property
    def extent(self) -> float:
        """Largest distance between two density points (m)."""
        diff = self.positions[:, None, :] - self.positions[None, :, :]
        return float(np.sqrt((diff**2).sum(-1)).max())


@dataclass(frozen=True, eq=False)
class DipoleTensor:
    """Symmetric, traceless 3x3 coupling tensor in joules."""

    components: np.ndarray
    method: Method
    label: str = field(default="")

    def __post_init__(self):
        d = np.array(self.components, dtype=float)
        if d.shape != (3, 3):
            raise ValueError(f"dipole tensor must be 3x3, got shape {d.shape}")
        scale = np.abs(d).max()
        if scale > 0:
            if np.abs(d - d.T).max() > 1e-12 * scale:
                raise ValueError("dipole tensor is not symmetric")
            if abs(np.trace(d)) > 1e-10 * scale:
                raise ValueError("dipole tensor is not traceless")
        d.flags.writeable = False
        object.__setattr__(self, "components", d)

    @property
    def zz(self) -> float:
        return float(self.components[2, 2])

    def in_hz(self, constants: PhysicalConstants = CODATA2018) -> np.ndarray:
        return self.components / constants.planck_h

    def __getitem__(self, index):
        return self.components[index]


def prefactor(constants: PhysicalConstants = CODATA2018) -> float:
    """(mu0/4pi) g_e^2 mu_B^2 in J m^3."""
    c = constants
    return c.vacuum_permeability_over_4pi * c.free_electron_g**2 * c.bohr_magneton**2


def _kernel(r: np.ndarray) -> np.ndarray:
    """(3 r r^T - r^2 I) / r^5 for each row of r, shape (n, 3, 3)."""
    r2 = np.einsum("ni,ni->n", r, r)
    r5 = r2**2 * np.sqrt(r2)
    outer = 3.0 * np.einsum("ni,nj->nij", r, r)
    outer[:, [0, 1, 2], [0, 1, 2]] -= r2[:, None]
    return outer / r5[:, None, None]


def classical_tensor(r_vec, constants: PhysicalConstants = CODATA2018) -> DipoleTensor:
    """Point-dipole tensor for spin 2 at ``r_vec`` (m) relative to spin 1."""
    r = np.asarray(r_vec, dtype=float).reshape(1, 3)
    if not np.all(np.isfinite(r)):
        raise ValueError(f"non-finite separation vector {r_vec!r}")
    if np.linalg.norm(r) <= EXCLUSION_DISTANCE:
        raise SingularGeometryError(f"separation vector {r_vec!r} has zero length")
    d = prefactor(constants) * _kernel(r)[0]
    return DipoleTensor(d, Method.CLASSICAL, "classical")


def spin_density_tensor(
    density: SpinDensity, dipole_position, constants: PhysicalConstants = CODATA2018
) -> DipoleTensor:
    """Tensor between a point dipole at ``dipole_position`` and a delocalised density.

    ``r = r_e - r_M`` for each density point; the integral is the weight-sum
    of the point-dipole kernel over the points.
    """
    r_m = np.asarray(dipole_position, dtype=float).reshape(3)
    r = density.positions - r_m
    dist = np.sqrt(np.einsum("ni,ni->n", r, r))
    if dist.min() <= EXCLUSION_DISTANCE:
        k = int(dist.argmin())
        raise SingularGeometryError(
            f"dipole at {r_m.tolist()} is within {EXCLUSION_DISTANCE} m of density point {k}"
        )
    d = prefactor(constants) * np.einsum("n,nij->ij", density.weights, _kernel(r))
    return DipoleTensor(d, Method.DENSITY, density.label)


def coupling_frequency(tensor: DipoleTensor, constants: PhysicalConstants = CODATA2018) -> float:
    """|D_zz| / hbar in rad/s, the coupling that enters the spin Hamiltonian."""
    return abs(tensor.zz) / constants.reduced_planck


class SweepRow(NamedTuple):
    a: float  # m
    d_mhz: float  # |D_zz|/h
    method: str
    label: str


def sweep_distance(
    method: Method | str,
    a_min: float,
    a_max: float,
    n_points: int,
    axis=DEFAULT_AXIS,
    density: SpinDensity | None = None,
    constants: PhysicalConstants = CODATA2018,
) -> list[SweepRow]:
    """|D_zz|/h (MHz) on an evenly spaced grid of separations along ``axis``."""
    method = Method(method)
    if not (0 < a_min < a_max):
        raise ValueError(f"need 0 < a_min < a_max, got {a_min!r}, {a_max!r}")
    if n_points < 2:
        raise ValueError(f"n_points must be >= 2, got {n_points!r}")
    if method is Method.DENSITY and density is None:
        raise ValueError("density method needs a SpinDensity")
    u = np.asarray(axis, dtype=float).reshape(3)
    norm = np.linalg.norm(u)
    if not norm > 0:
        raise ValueError("sweep axis must be non-zero")
    u = u / norm

    rows = []
    for a in np.linspace(a_min, a_max, n_points):
        if method is Method.CLASSICAL:
            t = classical_tensor(a * u, constants)
        else:
            t = spin_density_tensor(density, a * u, constants)
        rows.append(SweepRow(float(a), abs(t.zz) / constants.planck_h / 1e6, method.value, t.label))
    return rows


_ANGSTROM_EXPONENT = -10
_LABEL_RE = re.compile(r"#\s*label:(.*)$")


def parse_spin_density(stream: TextIO | str | Iterable[str], label: str = "") -> SpinDensity:
    """Read ``x y z w`` lines (x, y, z in angstrom) into a SpinDensity.

    Lines starting with ``#`` and blank lines are skipped, except that a
    ``# label: NAME`` comment supplies the label when none is passed.
    """
    if isinstance(stream, str):
        stream = io.StringIO(stream)
    positions, weights = [], []
    for lineno, raw in enumerate(stream, start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            m = _LABEL_RE.match(line)
            if m and not label:
                label = m.group(1).strip()
            continue
        fields = line.split()
        if len(fields) != 4:
            raise SpinDensityParseError(lineno, line, f"expected 4 fields, found {len(fields)}")
        try:
            values = [Decimal(f) for f in fields]
        except InvalidOperation:
            raise SpinDensityParseError(lineno, line, "non-numeric field") from None
        if not all(v.is_finite() for v in values):
            raise SpinDensityParseError(lineno, line, "non-finite field")
        # Exact decimal shift, so any float position survives a write/read cycle.
        positions.append([float(v.scaleb(_ANGSTROM_EXPONENT)) for v in values[:3]])
        values[3] = float(values[3])
        weights.append(values[3])
    if not weights:
        raise SpinDensityValidationError("spin density file contains no data lines")
    return SpinDensity(np.array(positions), np.array(weights), label)


def _angstrom_field(metres: float) -> str:
    return format(Decimal(repr(metres)).scaleb(-_ANGSTROM_EXPONENT), "f")


def format_spin_density(density: SpinDensity) -> str:
    """Inverse of parse_spin_density; parse(format(d)) reproduces d exactly."""
    lines = []
    if density.label:
        lines.append(f"# label: {density.label}")
    lines.append("# x_A y_A z_A weight")
    for pos, w in zip(density.positions, density.weights):
        xyz = " ".join(_angstrom_field(float(p)) for p in pos)
        lines.append(f"{xyz} {float(w)!r}")
    return "\n".join(lines) + "\n"
