"""Complex angular momentum scattering for a layered spherical potential.

Core objects: an exact S-matrix for a hard core + rectangular well + delta
shell, Regge pole location and tracing, Siegert energies, trajectory
classification, and Mulholland decompositions of the integral cross section.
"""

from .config import (
    EnergyGrid,
    RunConfig,
    Tolerances,
    load_config,
    parse_config,
    preset_config,
    serialize_config,
)
from .cylinder import CylinderValue, bessel_j, hankel, hankel_pair, log_deriv_hankel
from .model import (
    ChannelKinematics,
    PotentialParams,
    ReggePole,
    delta_functions,
    interior_logderiv,
    kinematics,
    pole_function,
    residue,
    s_matrix,
)
from .poles import (
    ReggeTrajectory,
    SiegertTrajectory,
    TrajectoryClass,
    bound_levels_swave,
    classify_trajectory,
    find_regge_pole,
    find_siegert_energy,
    lambda_estimate,
    metastable_levels_swave,
    region_winding,
    scan_poles,
    trace_regge_trajectory,
    trace_siegert_trajectory,
)
from .xsec import (
    MulhollandDecomposition,
    lambda_max,
    modified_decomposition,
    relevant_poles,
    sigma_hard_sphere,
    sigma_res,
    sigma_res_n,
    sigma_total_pw,
    sigma1,
    sigma2,
)

__version__ = "0.1.0"

__all__ = [
    "EnergyGrid",
    "RunConfig",
    "Tolerances",
    "load_config",
    "parse_config",
    "preset_config",
    "serialize_config",
    "CylinderValue",
    "bessel_j",
    "hankel",
    "hankel_pair",
    "log_deriv_hankel",
    "ChannelKinematics",
    "PotentialParams",
    "ReggePole",
    "delta_functions",
    "interior_logderiv",
    "kinematics",
    "pole_function",
    "residue",
    "s_matrix",
    "ReggeTrajectory",
    "SiegertTrajectory",
    "TrajectoryClass",
    "bound_levels_swave",
    "classify_trajectory",
    "find_regge_pole",
    "find_siegert_energy",
    "lambda_estimate",
    "metastable_levels_swave",
    "region_winding",
    "scan_poles",
    "trace_regge_trajectory",
    "trace_siegert_trajectory",
    "MulhollandDecomposition",
    "lambda_max",
    "modified_decomposition",
    "relevant_poles",
    "sigma_hard_sphere",
    "sigma_res",
    "sigma_res_n",
    "sigma_total_pw",
    "sigma1",
    "sigma2",
]
