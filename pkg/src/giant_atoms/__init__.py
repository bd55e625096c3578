"""Entanglement dynamics of two giant atoms coupled to a one-dimensional waveguide.

Three coupling geometries (separate, braided, nested) are supported. The
package derives the master-equation coefficients from the coupling-point
positions, integrates the two-atom master equation, and evaluates the
Wootters concurrence, the collective-state populations and the
single-excitation closed forms.
"""

__version__ = "0.1.0"

from .rates import (  # noqa: E402
    CouplingConfig,
    CouplingKind,
    DerivedRates,
    PhysicalParams,
    coupling_geometry,
    derive_rates_closed_form,
    derive_rates_from_geometry,
    rates_for,
)
from .entanglement import NumericalError, concurrence, spin_flip  # noqa: E402
from .lindblad import (  # noqa: E402
    StepSizeError,
    Trajectory,
    evolve,
    hamiltonian_matrix,
    initial_state,
    liouvillian_apply,
)
from .collective import (  # noqa: E402
    DegenerateBasisError,
    collective_basis,
    collective_populations,
    transition_rates,
)
from .single_excitation import (  # noqa: E402
    UnsupportedInput,
    amplitudes,
    concurrence_closed_form,
    effective_hamiltonian,
)
from .scenarios import (  # noqa: E402
    SweepSpec,
    max_concurrence_vs_detuning,
    phase_cut,
    run_sweep,
    sudden_birth_time,
)

__all__ = [
    "CouplingConfig",
    "CouplingKind",
    "DerivedRates",
    "PhysicalParams",
    "coupling_geometry",
    "derive_rates_closed_form",
    "derive_rates_from_geometry",
    "rates_for",
    "NumericalError",
    "concurrence",
    "spin_flip",
    "StepSizeError",
    "Trajectory",
    "evolve",
    "hamiltonian_matrix",
    "initial_state",
    "liouvillian_apply",
    "DegenerateBasisError",
    "collective_basis",
    "collective_populations",
    "transition_rates",
    "UnsupportedInput",
    "amplitudes",
    "concurrence_closed_form",
    "effective_hamiltonian",
    "SweepSpec",
    "max_concurrence_vs_detuning",
    "phase_cut",
    "run_sweep",
    "sudden_birth_time",
]
