"""Two-radical spin-qubit simulator: spectrum, dipolar coupling, Bell preparation and OSCAR readout."""

from .constants import CODATA2018, PhysicalConstants
from .dipole import (
    DipoleTensor,
    Method,
    SpinDensity,
    classical_tensor,
    coupling_frequency,
    format_spin_density,
    parse_spin_density,
    spin_density_tensor,
    sweep_distance,
)
from .dynamics import Pulse, PulseResult, TwoQubitState, apply_pulse, concurrence, prepare_bell
from .errors import (
    AmbiguousResonanceError,
    ParameterError,
    ResolutionError,
    SingularGeometryError,
    SpinDensityParseError,
    SpinDensityValidationError,
)
from .oscar import (
    AdiabaticParams,
    MeasurementRecord,
    ProtocolOutcome,
    ShiftOutcome,
    adiabaticity,
    measure,
    monte_carlo,
    verification_protocol,
)
from .spin_system import (
    BasisState,
    SystemParams,
    Transition,
    TransitionFrequencies,
    energy_levels,
    g_from_shift,
    transition_frequencies,
)

__version__ = "0.1.0"
