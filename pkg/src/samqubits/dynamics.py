"""Ideal frequency-selective pulses on the two-spin pure state.

A pulse at angular frequency ``w`` rotates every transition whose frequency
matches ``w`` within a relative tolerance.  Pulses are instantaneous; in a
resolvable spectrum each pulse drives exactly one two-level subspace.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .errors import ParameterError, ResolutionError
from .spin_system import BasisState, SystemParams, Transition, transition_frequencies

DEFAULT_MATCH_TOLERANCE = 1e-9
NORM_TOLERANCE = 1e-12


@dataclass(frozen=True, eq=False)
class TwoQubitState:
    """Pure state with amplitudes ordered S00, S01, S10, S11."""

    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.array(self.amplitudes, dtype=complex).reshape(-1)
        if amps.shape != (4,):
            raise ValueError(f"need 4 amplitudes, got {amps.shape[0]}")
        norm2 = float(np.vdot(amps, amps).real)
        if abs(norm2 - 1.0) > NORM_TOLERANCE:
            raise ValueError(f"state is not normalised: sum |a|^2 = {norm2!r}")
        amps.flags.writeable = False
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def basis(cls, state: BasisState | int) -> "TwoQubitState":
        amps = np.zeros(4, dtype=complex)
        amps[int(state)] = 1.0
        return cls(amps)

    @classmethod
    def from_unnormalized(cls, amplitudes) -> "TwoQubitState":
        amps = np.asarray(amplitudes, dtype=complex)
        return cls(amps / np.linalg.norm(amps))

    @classmethod
    def bell(cls, phase: float = 0.0) -> "TwoQubitState":
        return cls(np.array([1, 0, 0, np.exp(1j * phase)]) / math.sqrt(2))

    @property
    def populations(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def __getitem__(self, index):
        return self.amplitudes[int(index)]

    def fidelity(self, other: "TwoQubitState") -> float:
        """|<self|other>|, insensitive to global phase."""
        return float(abs(np.vdot(self.amplitudes, other.amplitudes)))

    def __repr__(self):
        amps = ", ".join(f"{a:.6g}" for a in self.amplitudes)
        return f"TwoQubitState([{amps}])"


GROUND = TwoQubitState.basis(BasisState.S00)


@dataclass(frozen=True)
class Pulse:
    frequency: float  # rad/s
    nominal_angle: float  # rad
    phase: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.frequency) and self.frequency > 0):
            raise ParameterError(f"pulse frequency must be > 0, got {self.frequency!r}")
        if not (0 < self.nominal_angle <= 2 * math.pi):
            raise ParameterError(f"pulse angle must be in (0, 2pi], got {self.nominal_angle!r}")
        if not math.isfinite(self.phase):
            raise ParameterError(f"pulse phase must be finite, got {self.phase!r}")


@dataclass(frozen=True)
class PulseResult:
    state: TwoQubitState
    matched: tuple[Transition, ...]

    @property
    def off_resonant(self) -> bool:
        return not self.matched


def rotation(theta: float, phi: float = 0.0) -> np.ndarray:
    """Rotation by ``theta`` about an in-plane axis at angle ``phi``, on (lower, upper)."""
    c = math.cos(theta / 2)
    s = math.sin(theta / 2)
    return np.array(
        [[c, -1j * np.exp(-1j * phi) * s], [-1j * np.exp(1j * phi) * s, c]],
        dtype=complex,
    )


def _matches(w: float, target: float, tol: float) -> bool:
    return abs(w - target) <= tol * target


def matched_transitions(frequency: float, params: SystemParams, match_tolerance: float) -> tuple[Transition, ...]:
    freqs = transition_frequencies(params)
    return tuple(t for t, w in freqs.items() if _matches(frequency, w, match_tolerance))


def pulse_unitary(transitions, theta: float, phi: float = 0.0) -> np.ndarray:
    """4x4 propagator of a pulse driving ``transitions`` simultaneously.

    Disjoint pairs get the closed-form rotation on each pair.  Pairs sharing
    a level (only in degenerate spectra) are driven together by exponentiating
    the summed drive, of which the disjoint case is the special case.
    """
    transitions = tuple(transitions)
    levels = [lvl for t in transitions for lvl in (t.lower, t.upper)]
    u = np.eye(4, dtype=complex)
    if len(set(levels)) == len(levels):
        r = rotation(theta, phi)
        for t in transitions:
            idx = np.ix_([t.lower, t.upper], [t.lower, t.upper])
            u[idx] = r
        return u
    drive = np.zeros((4, 4), dtype=complex)
    for t in transitions:
        drive[t.lower, t.upper] = np.exp(-1j * phi)
        drive[t.upper, t.lower] = np.exp(1j * phi)
    evals, evecs = np.linalg.eigh(drive)
    return (evecs * np.exp(-0.5j * theta * evals)) @ evecs.conj().T


def apply_pulse(
    state: TwoQubitState,
    pulse: Pulse,
    params: SystemParams,
    match_tolerance: float = DEFAULT_MATCH_TOLERANCE,
) -> PulseResult:
    if not (0 < match_tolerance <= 1e-3):
        raise ParameterError(f"match_tolerance must be in (0, 1e-3], got {match_tolerance!r}")
    matched = matched_transitions(pulse.frequency, params, match_tolerance)
    if not matched:
        return PulseResult(state, ())
    u = pulse_unitary(matched, pulse.nominal_angle, pulse.phase)
    amps = u @ state.amplitudes
    # Remove rounding drift so chained pulses stay within the norm invariant.
    amps = amps / np.linalg.norm(amps)
    return PulseResult(TwoQubitState(amps), matched)


def check_resolvable(params: SystemParams, match_tolerance: float = DEFAULT_MATCH_TOLERANCE):
    """Raise ResolutionError naming the first pair of transitions that collide."""
    freqs = transition_frequencies(params)
    for (t1, w1), (t2, w2) in itertools.combinations(freqs.items(), 2):
        if _matches(w1, w2, match_tolerance) or _matches(w2, w1, match_tolerance):
            raise ResolutionError(
                t1.label,
                t2.label,
                f"transitions {t1.label} and {t2.label} differ by {abs(w1 - w2):.6g} rad/s, "
                f"not resolvable at relative tolerance {match_tolerance:g}",
            )


def prepare_bell(params: SystemParams, match_tolerance: float = DEFAULT_MATCH_TOLERANCE) -> TwoQubitState:
    """pi/2 on w1_0 then pi on w2_1, starting from |00>: (|00> + e^{i phi}|11>)/sqrt(2)."""
    check_resolvable(params, match_tolerance)
    freqs = transition_frequencies(params)
    state = apply_pulse(GROUND, Pulse(freqs.w1_0, math.pi / 2), params, match_tolerance).state
    return apply_pulse(state, Pulse(freqs.w2_1, math.pi), params, match_tolerance).state


def concurrence(state: TwoQubitState) -> float:
    a = state.amplitudes
    return min(1.0, float(2 * abs(a[0] * a[3] - a[1] * a[2])))
