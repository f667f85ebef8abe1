"""Exact soliton lattice lab.

Exact-arithmetic simulation of a two-parameter discrete KdV-type lattice
map, its determinant N-soliton solutions, the box-ball automaton with a
capacity-limited carrier that is its tropical limit, and blind measurement
tools for soliton speeds and amplitudes.
"""

from .boxball import (
    BBSCState,
    UDField,
    bbs_step,
    bbsc_step,
    bbsc_sweep,
    evolve_bbsc,
    field_from_state,
    param_correspondence,
    render_ascii,
    shift_to_uv,
    tropical_step,
    ud_limit_check,
    write_bbsc_csv,
)
from .exact import Rat, det, rat_parse, rat_str
from .lattice import (
    LatticeField,
    SystemParams,
    dkdv_local,
    evolve_gkdv,
    gkdv_local,
    limit_chain_check,
    scale_to_yb,
    step_dkdv,
    step_gkdv,
    yb_map,
)
from .measure import (
    ClusterTrack,
    TroughTrack,
    detect_bbsc_solitons,
    measure_amplitude,
    measure_velocity,
    overtake_report,
    track_amplitude,
    track_troughs,
)
from .solitons import (
    KPParams,
    SolitonConstants,
    amplitude,
    check_kp_bilinear,
    check_reduction,
    kp_tau,
    random_kp_params,
    sample_field,
    sample_xy,
    scan_monotonicity,
    tau_f,
    tau_g,
    validate,
    velocity,
)

__version__ = "0.1.0"

__all__ = [
    "BBSCState", "ClusterTrack", "KPParams", "LatticeField", "Rat",
    "SolitonConstants", "SystemParams", "TroughTrack", "UDField",
    "amplitude", "bbs_step", "bbsc_step", "bbsc_sweep", "check_kp_bilinear",
    "check_reduction", "det", "detect_bbsc_solitons", "dkdv_local",
    "evolve_bbsc", "evolve_gkdv", "field_from_state", "gkdv_local",
    "kp_tau", "limit_chain_check", "measure_amplitude", "measure_velocity",
    "overtake_report", "param_correspondence", "random_kp_params",
    "rat_parse", "rat_str", "render_ascii", "sample_field", "sample_xy",
    "scale_to_yb", "scan_monotonicity", "shift_to_uv", "step_dkdv",
    "step_gkdv", "tau_f", "tau_g", "track_amplitude", "track_troughs",
    "tropical_step", "ud_limit_check", "validate", "velocity",
    "write_bbsc_csv", "yb_map",
]
