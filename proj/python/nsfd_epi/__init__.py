"""Positivity-preserving discrete maps for host-parasite epidemic models."""

from ._core import (
    Equilibrium,
    HostParams,
    Model,
    ModelVariant,
    State,
    consistency_experiment,
    denominators,
    equilibria,
    euler_failure_demo,
    euler_step,
    general_reference_params,
    interior_equilibrium,
    iterate,
    iterate_euler,
    nsfd_step,
    reference_initial_points,
    perfect_vertical_reference_params,
    reproduction_numbers,
    rk4_step,
    run_acceptance,
    simulate_continuous,
    stability,
    step_size_sweep,
    vector_field,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
