"""Generalized Mach-Zehnder interferometer switches: simulation, phase compilation and fabric planning."""

from .fock import FockBasis, FockVector, GmziSpec, extract_signed_permutation, pivot_sign, sign_table, simulate_gmzi
from .graph import MixedGraph, build_mixed_graph, route_pair, validate
from .phases import (
    InvalidPhaseConfig,
    PhaseConfig,
    RouteRequest,
    SignedPermutation,
    compile_phi,
    enumerate_valid,
    is_type_consistent,
    solve_route,
)
from .planner import SwitchScheme, audit, build_scheme, preset, resource_report
from .scheduler import (
    DisjointnessViolation,
    Schedule,
    UnsatisfiableRoute,
    schedule_merge,
    schedule_msd_distribution,
    schedule_pairing,
    schedule_stabilizer_readout,
    verify_schedule,
)
from .wigner import jacobi_poly, wigner_d

__version__ = "0.1.0"
