"""Exact hole-geometry and one-sided weight analysis on the real line."""

from .intervals import GapList, Interval
from .sets import (
    CantorIterate,
    Cutoff,
    EmptySetError,
    FinitePoints,
    GeometricPlusLattice,
    Lattice,
    PointCapExceeded,
    Reflect,
    SetDescription,
    SetFormatError,
    Translate,
    UnionSet,
    cutoff,
    distance,
    from_dict,
    from_json,
    gaps,
    neighborhood_measure,
    reflect,
    set_distance,
    to_dict,
    to_json,
    translate,
    union,
)

from .porosity import (
    PorosityParams,
    PorosityReport,
    ProbeFamily,
    certification_probes,
    certify,
    doubling_witness,
    left_propagation_check,
    pore_transport_check,
    rho,
    sigma_at,
    sweep_parameters,
)
from .weights import (
    SupportProfile,
    WeightSpec,
    average,
    ess_inf,
    ess_sup,
    integrate,
    maximal_minus,
    maximal_plus,
    support_profile,
    weight_value,
)
from .muckenhoupt import A1Report, TripleFamily, a1_constant, critical_alpha, triple_value
from .presets import catalog, preset

__all__ = [
    "A1Report",
    "CantorIterate",
    "Cutoff",
    "EmptySetError",
    "FinitePoints",
    "GapList",
    "GeometricPlusLattice",
    "Interval",
    "Lattice",
    "PointCapExceeded",
    "PorosityParams",
    "PorosityReport",
    "ProbeFamily",
    "Reflect",
    "SetDescription",
    "SetFormatError",
    "SupportProfile",
    "Translate",
    "TripleFamily",
    "UnionSet",
    "WeightSpec",
    "a1_constant",
    "average",
    "catalog",
    "certification_probes",
    "certify",
    "critical_alpha",
    "cutoff",
    "distance",
    "doubling_witness",
    "ess_inf",
    "ess_sup",
    "from_dict",
    "from_json",
    "gaps",
    "integrate",
    "left_propagation_check",
    "maximal_minus",
    "maximal_plus",
    "neighborhood_measure",
    "pore_transport_check",
    "preset",
    "reflect",
    "rho",
    "set_distance",
    "sigma_at",
    "support_profile",
    "sweep_parameters",
    "to_dict",
    "to_json",
    "translate",
    "triple_value",
    "union",
    "weight_value",
]

__version__ = "0.1.0"
