"""OSCAR readout as a three-outcome projective measurement.

With the rf tuned to one transition, the resonant spin flips with the
cantilever and shifts its frequency: negative if that spin started in the
ground state, positive if excited.  When the spectator spin is in the wrong
state nothing is resonant and the shift is zero.  The zero outcome projects
onto the two-dimensional off-resonant subspace rather than a basis state.
"""

from __future__ import annotations

import enum
import math
from collections import Counter
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .constants import CODATA2018, PhysicalConstants
from .dynamics import TwoQubitState, check_resolvable
from .errors import AmbiguousResonanceError, ParameterError
from .spin_system import BasisState, SystemParams, Transition, transition_frequencies

RESONANCE_TOLERANCE = 1e-9
DEFAULT_ETA_MAX = 0.1


class ShiftOutcome(enum.Enum):
    NEGATIVE = "negative"
    POSITIVE = "positive"
    ZERO = "zero"


# Cumulative sampling order for a uniform draw.
SAMPLING_ORDER = (ShiftOutcome.NEGATIVE, ShiftOutcome.POSITIVE, ShiftOutcome.ZERO)


class ProtocolOutcome(enum.Enum):
    O1 = "O1"
    O2A = "O2a"
    O2B = "O2b"
    O3 = "O3"

    @property
    def consistent_with_bell(self) -> bool:
        return self in (ProtocolOutcome.O1, ProtocolOutcome.O2B)


PROTOCOL_ORDER = tuple(ProtocolOutcome)


@dataclass(frozen=True)
class MeasurementRecord:
    rf_frequency: float
    shift: ShiftOutcome
    collapsed: TwoQubitState
    probabilities: dict
    transition: Transition
    protocol: ProtocolOutcome | None = None


def _projectors(transition: Transition) -> dict[ShiftOutcome, tuple[BasisState, ...]]:
    off = tuple(s for s in BasisState if s not in (transition.lower, transition.upper))
    return {
        ShiftOutcome.NEGATIVE: (transition.lower,),
        ShiftOutcome.POSITIVE: (transition.upper,),
        ShiftOutcome.ZERO: off,
    }


_PROJECTORS = {t: _projectors(t) for t in Transition}


def projectors(transition: Transition) -> dict[ShiftOutcome, tuple[BasisState, ...]]:
    """Basis states spanning each outcome's subspace for rf on ``transition``."""
    return _PROJECTORS[transition]


def resonant_transition(rf_frequency: float, params: SystemParams) -> Transition:
    freqs = transition_frequencies(params)
    hits = [t for t, w in freqs.items() if abs(rf_frequency - w) <= RESONANCE_TOLERANCE * w]
    if len(hits) != 1:
        names = ", ".join(t.label for t in hits) or "none"
        raise AmbiguousResonanceError(
            f"rf frequency {rf_frequency!r} rad/s must match exactly one transition, matched: {names}"
        )
    return hits[0]


def outcome_probabilities(state: TwoQubitState, transition: Transition) -> dict[ShiftOutcome, float]:
    pops = state.populations.tolist()
    return {o: math.fsum(pops[s] for s in states) for o, states in _PROJECTORS[transition].items()}


def _select(probs: dict[ShiftOutcome, float], draw: float) -> ShiftOutcome:
    # Outcomes with zero weight are never selected, even at the top of [0, 1).
    cumulative = 0.0
    chosen = None
    for outcome in SAMPLING_ORDER:
        p = probs[outcome]
        if p <= 0.0:
            continue
        chosen = outcome
        cumulative += p
        if draw < cumulative:
            return outcome
    return chosen


def measure(
    state: TwoQubitState, rf_frequency: float, params: SystemParams, random_draw: float
) -> MeasurementRecord:
    """Project ``state`` according to the cantilever shift at ``rf_frequency``.

    ``random_draw`` in [0, 1) is mapped to an outcome by cumulative Born
    probabilities in the order negative, positive, zero.
    """
    if not 0.0 <= random_draw < 1.0:
        raise ValueError(f"random_draw must lie in [0, 1), got {random_draw!r}")
    transition = resonant_transition(rf_frequency, params)
    probs = outcome_probabilities(state, transition)
    outcome = _select(probs, random_draw)
    keep = list(_PROJECTORS[transition][outcome])
    amps = np.zeros(4, dtype=complex)
    amps[keep] = state.amplitudes[keep]
    collapsed = TwoQubitState(amps / np.linalg.norm(amps))
    return MeasurementRecord(rf_frequency, outcome, collapsed, probs, transition)


def verification_protocol(
    state: TwoQubitState, params: SystemParams, rng: np.random.Generator
) -> tuple[ProtocolOutcome, TwoQubitState]:
    """Entanglement check: read at w2_0, and on a zero shift re-read at w1_0."""
    check_resolvable(params, RESONANCE_TOLERANCE)
    freqs = transition_frequencies(params)
    first = measure(state, freqs.w2_0, params, rng.random())
    if first.shift is ShiftOutcome.NEGATIVE:
        return ProtocolOutcome.O1, first.collapsed
    if first.shift is ShiftOutcome.POSITIVE:
        return ProtocolOutcome.O3, first.collapsed
    second = measure(first.collapsed, freqs.w1_0, params, rng.random())
    # After a zero shift at w2_0 spin 1 is in |1>, so |00> cannot be found.
    assert second.shift is not ShiftOutcome.NEGATIVE, "negative shift after projection onto spin 1 = |1>"
    if second.shift is ShiftOutcome.POSITIVE:
        return ProtocolOutcome.O2A, second.collapsed
    return ProtocolOutcome.O2B, second.collapsed


def monte_carlo(
    preparation: Callable[[], TwoQubitState],
    params: SystemParams,
    n_trials: int,
    seed: int,
) -> dict[ProtocolOutcome, int]:
    """Histogram of protocol outcomes over independent trials.

    Trial ``k`` draws from its own generator spawned from ``seed``, so the
    counts do not depend on the order in which trials run.
    """
    if n_trials < 1:
        raise ValueError(f"n_trials must be >= 1, got {n_trials!r}")
    counts = Counter()
    for child in np.random.SeedSequence(seed).spawn(n_trials):
        outcome, _ = verification_protocol(preparation(), params, np.random.default_rng(child))
        counts[outcome] += 1
    return {o: counts.get(o, 0) for o in PROTOCOL_ORDER}


@dataclass(frozen=True)
class AdiabaticParams:
    b1: float  # rf amplitude, T
    delta_b: float  # peak effective-field sweep amplitude, T
    omega_c: float  # cantilever angular frequency, rad/s
    eta_max: float = DEFAULT_ETA_MAX

    def __post_init__(self):
        for name in ("b1", "delta_b", "omega_c", "eta_max"):
            value = getattr(self, name)
            if not math.isfinite(value):
                raise ParameterError(f"{name} must be finite, got {value!r}")
        if self.b1 <= 0:
            raise ParameterError(f"b1 must be > 0, got {self.b1!r}")
        if self.omega_c <= 0:
            raise ParameterError(f"omega_c must be > 0, got {self.omega_c!r}")
        # delta_b = 0 is the static limit and is allowed.
        if self.delta_b < 0:
            raise ParameterError(f"delta_b must be >= 0, got {self.delta_b!r}")
        if not 0 < self.eta_max < 1:
            raise ParameterError(f"eta_max must be in (0, 1), got {self.eta_max!r}")


def adiabaticity(p: AdiabaticParams, constants: PhysicalConstants = CODATA2018) -> tuple[float, bool]:
    """Ratio of the peak sweep rate of the effective field to gamma_e * B1^2.

    The effective field is swept sinusoidally by the cantilever, so its peak
    rate is ``delta_b * omega_c``.  Returns ``(eta, eta < eta_max)``.
    """
    eta = p.delta_b * p.omega_c / (constants.electron_gyromagnetic_ratio * p.b1**2)
    return eta, eta < p.eta_max
