"""Two-spin Hamiltonian in a field gradient: energy levels and transition frequencies.

Spin 2 sits at field ``b0`` and spin 1 at ``b0 + G*a``.  Both spins share
the same ``g_zz`` and are coupled by the secular dipolar term ``-D Sz(1) Sz(2)``.
Everything is returned as angular frequency (rad/s), i.e. energy over hbar.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import NamedTuple

from .constants import CODATA2018, PhysicalConstants
from .errors import ParameterError


class BasisState(enum.IntEnum):
    """Product states |s1 s2>; the integer value is the amplitude index."""

    S00 = 0
    S01 = 1
    S10 = 2
    S11 = 3

    @property
    def spin1(self) -> int:
        return self.value >> 1

    @property
    def spin2(self) -> int:
        return self.value & 1

    @property
    def ket(self) -> str:
        return f"|{self.spin1}{self.spin2}>"


class Transition(enum.Enum):
    """Single-spin flips.  ``W1_0`` flips spin 1 while spin 2 is in |0>, etc."""

    W2_0 = (2, 0)
    W1_0 = (1, 0)
    W2_1 = (2, 1)
    W1_1 = (1, 1)

    @property
    def spin(self) -> int:
        return self.value[0]

    @property
    def neighbour(self) -> int:
        return self.value[1]

    @property
    def lower(self) -> BasisState:
        return _PAIRS[self][0]

    @property
    def upper(self) -> BasisState:
        return _PAIRS[self][1]

    @property
    def label(self) -> str:
        return f"w{self.spin}_{self.neighbour}"


def _pair(spin: int, k: int) -> tuple[BasisState, BasisState]:
    if spin == 1:
        return BasisState(k), BasisState(2 | k)
    return BasisState(k << 1), BasisState((k << 1) | 1)


_PAIRS = {t: _pair(*t.value) for t in Transition}

# Output order of transition_frequencies.
TRANSITION_ORDER = (Transition.W2_0, Transition.W1_0, Transition.W2_1, Transition.W1_1)


class TransitionFrequencies(NamedTuple):
    w2_0: float
    w1_0: float
    w2_1: float
    w1_1: float

    def __getitem__(self, key):
        if isinstance(key, Transition):
            return getattr(self, key.label)
        return tuple.__getitem__(self, key)

    def items(self):
        return zip(TRANSITION_ORDER, self)


@dataclass(frozen=True)
class SystemParams:
    """Spin-group parameters in SI units.

    ``gradient_g`` and ``coupling_d`` are magnitudes |dBz/dy| and |D_zz|; the
    physical quantities are both negative in the reference geometry.
    ``coupling_d`` is in rad/s.
    """

    b0: float
    gradient_g: float
    separation_a: float
    g_zz: float
    coupling_d: float
    constants: PhysicalConstants = CODATA2018

    def __post_init__(self):
        for name in ("b0", "gradient_g", "separation_a", "g_zz", "coupling_d"):
            value = getattr(self, name)
            if not math.isfinite(value):
                raise ParameterError(f"{name} must be finite, got {value!r}")
        if self.b0 <= 0:
            raise ParameterError(f"b0 must be > 0, got {self.b0!r}")
        if self.separation_a <= 0:
            raise ParameterError(f"separation_a must be > 0, got {self.separation_a!r}")
        if self.g_zz <= 0:
            raise ParameterError(f"g_zz must be > 0, got {self.g_zz!r}")
        if self.gradient_g < 0:
            raise ParameterError(f"gradient_g must be >= 0, got {self.gradient_g!r}")
        if self.coupling_d < 0:
            raise ParameterError(f"coupling_d must be >= 0, got {self.coupling_d!r}")
        _check_positive(_frequencies(self))

    @property
    def field_spin1(self) -> float:
        return self.b0 + self.gradient_g * self.separation_a

    def zeeman_spin2(self) -> float:
        """Larmor angular frequency of spin 2 (rad/s)."""
        c = self.constants
        return self.g_zz * c.bohr_magneton * self.b0 / c.reduced_planck

    def zeeman_spin1(self) -> float:
        c = self.constants
        return self.g_zz * c.bohr_magneton * self.field_spin1 / c.reduced_planck

    def gradient_splitting(self) -> float:
        """Difference of the two Larmor frequencies, g mu_B G a / hbar."""
        c = self.constants
        return self.g_zz * c.bohr_magneton * self.gradient_g * self.separation_a / c.reduced_planck


def _frequencies(params: SystemParams) -> TransitionFrequencies:
    z2 = params.zeeman_spin2()
    z1 = params.zeeman_spin1()
    half_d = 0.5 * params.coupling_d
    return TransitionFrequencies(
        w2_0=z2 - half_d,
        w1_0=z1 - half_d,
        w2_1=z2 + half_d,
        w1_1=z1 + half_d,
    )


def _check_positive(freqs: TransitionFrequencies):
    for transition, w in freqs.items():
        if not w > 0:
            raise ParameterError(
                f"transition {transition.label} has non-positive frequency {w!r} rad/s; "
                "coupling too large for the Zeeman splitting"
            )


def energy_levels(params: SystemParams) -> dict[BasisState, float]:
    """E/hbar of the four product states in rad/s."""
    z2 = params.zeeman_spin2()
    z1 = params.zeeman_spin1()
    quarter_d = 0.25 * params.coupling_d
    return {
        BasisState.S00: -0.5 * z2 - 0.5 * z1 + quarter_d,
        BasisState.S01: 0.5 * z2 - 0.5 * z1 - quarter_d,
        BasisState.S10: -0.5 * z2 + 0.5 * z1 - quarter_d,
        BasisState.S11: 0.5 * z2 + 0.5 * z1 + quarter_d,
    }


def transition_frequencies(params: SystemParams) -> TransitionFrequencies:
    """Angular frequencies (w2_0, w1_0, w2_1, w1_1) of the four allowed transitions.

    Raises ParameterError if any frequency is non-positive.
    """
    freqs = _frequencies(params)
    _check_positive(freqs)
    return freqs


def g_from_shift(shift_ppm: float, constants: PhysicalConstants = CODATA2018) -> float:
    """Absolute g value from a g-shift quoted in ppm."""
    if not math.isfinite(shift_ppm):
        raise ParameterError(f"shift must be finite, got {shift_ppm!r}")
    return constants.free_electron_g + shift_ppm * 1e-6
