"""Coded caching over a two-user interference network.

Exact GF(2) scheme construction and certification, memory/load and
memory/DoF trade-off curves with converse checks, and a desk-scale
aligned physical layer.
"""

from .gf2 import BitMatrix, mat_mul, rank, solve_left, vstack
from .netchannel import (
    Demand,
    MessageQuad,
    ReceiverObservation,
    transmit,
    user_channel_matrix,
)
from .phy import (
    DemodError,
    MonteCarloResult,
    PhyConfig,
    PhyFrame,
    aligned_coefficients,
    channel_out,
    demodulate,
    e2e_run,
    enumerate_constellation,
    front_end,
    monte_carlo,
    power_for_min_gap,
    send_frame,
    uniqueness_certificate,
)
from .schemes import (
    CORNER_NAMES,
    DeliveryQuad,
    LinearScheme,
    SchemeFormatError,
    corner_scheme,
    file_selector,
    memory_share,
    read_scheme,
    scheme_for_memory,
    write_scheme,
)
from .tradeoff import (
    BaselinePoint,
    ConverseReport,
    InequalityCheck,
    SweepRow,
    TradeoffPoint,
    baseline_comparison,
    breakpoints,
    check_converse,
    curve_corners,
    dof_lower_bound,
    inverse_dof,
    inverse_dof_direct,
    optimality_gap,
    rho_star,
    sweep,
    sweep_csv,
)
from .verifier import (
    VerificationReport,
    decodable,
    decode_bits,
    observation_matrix,
    verify_all,
)

__version__ = "0.1.0"

__all__ = [
    "BaselinePoint",
    "BitMatrix",
    "CORNER_NAMES",
    "ConverseReport",
    "DeliveryQuad",
    "Demand",
    "DemodError",
    "InequalityCheck",
    "LinearScheme",
    "MessageQuad",
    "MonteCarloResult",
    "PhyConfig",
    "PhyFrame",
    "ReceiverObservation",
    "SchemeFormatError",
    "SweepRow",
    "TradeoffPoint",
    "VerificationReport",
    "aligned_coefficients",
    "baseline_comparison",
    "breakpoints",
    "channel_out",
    "check_converse",
    "corner_scheme",
    "curve_corners",
    "decodable",
    "decode_bits",
    "demodulate",
    "dof_lower_bound",
    "e2e_run",
    "enumerate_constellation",
    "file_selector",
    "front_end",
    "inverse_dof",
    "inverse_dof_direct",
    "mat_mul",
    "memory_share",
    "monte_carlo",
    "observation_matrix",
    "optimality_gap",
    "power_for_min_gap",
    "rank",
    "read_scheme",
    "rho_star",
    "scheme_for_memory",
    "send_frame",
    "solve_left",
    "sweep",
    "sweep_csv",
    "transmit",
    "uniqueness_certificate",
    "user_channel_matrix",
    "verify_all",
    "vstack",
    "write_scheme",
]
