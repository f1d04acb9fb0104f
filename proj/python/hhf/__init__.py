"""Hartree-Fock verification for the half-filled Hubbard model on the torus."""

import json

from ._core import (  # noqa: F401
    FockCapError,
    __version__,
    dispersion,
    energy_density,
    extensivity_sweep,
    gap_residual,
    hf_functional,
    hf_projector,
    load_projector,
    lower_bound_constant,
    q7_norm_per_volume,
    run_cli,
    save_projector,
    solve_gap,
    verify_json,
    wick_identity_check,
)


def verify(which="all", d=1, L=4, g=2.0, epsilon=0.25, fock_cap=16, seed=1):
    """Run a verification and return (exit_code, report) with the report as a dict."""
    code, text = verify_json(which, d, L, g, epsilon, fock_cap, seed)
    return code, json.loads(text)
