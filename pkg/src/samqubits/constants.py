"""Physical constants (CODATA 2018), frozen so results are reproducible bit-for-bit."""

from dataclasses import dataclass
import math


@dataclass(frozen=True)
class PhysicalConstants:
    bohr_magneton: float = 9.2740100783e-24  # J/T
    free_electron_g: float = 2.00231930436
    planck_h: float = 6.62607015e-34  # J s
    vacuum_permeability_over_4pi: float = 1.0e-7  # H/m

    def __post_init__(self):
        for name in ("bohr_magneton", "free_electron_g", "planck_h", "vacuum_permeability_over_4pi"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise ValueError(f"{name} must be positive and finite, got {value!r}")

    @property
    def reduced_planck(self) -> float:
        return self.planck_h / (2 * math.pi)

    @property
    def electron_gyromagnetic_ratio(self) -> float:
        """g_e * mu_B / hbar in rad/(s T)."""
        return self.free_electron_g * self.bohr_magneton / self.reduced_planck


CODATA2018 = PhysicalConstants()

ANGSTROM = 1e-10
NANOMETER = 1e-9


def to_hz(omega: float) -> float:
    return omega / (2 * math.pi)


def to_mhz(omega: float) -> float:
    return omega / (2 * math.pi) / 1e6


def from_mhz(f_mhz: float) -> float:
    return 2 * math.pi * f_mhz * 1e6
