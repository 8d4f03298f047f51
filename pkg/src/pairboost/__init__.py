"""Entanglement and coherence of an electron-positron pair state under
Lorentz boosts, with Wigner-rotated spins and boosted momentum labels."""

from .errors import (
    DegenerateScenarioError,
    DomainError,
    NumericalFailure,
    PairBoostError,
    PrecisionError,
    StructureError,
)
from .pairsim import (
    DegenerateBoostWarning,
    PairConfig,
    ResourceReport,
    boost_omegas,
    boosted_state,
    certify_four_party_separability,
    lab_state,
    resource_report,
    spinor_rotation,
    spinor_states,
)
from .quantum import (
    PARTIES,
    Branch,
    DensityMatrix,
    MultiPartyPureState,
    Party,
    ValueBasis,
    dephase,
    linear_entropy,
    partial_trace,
    spin_ket,
    state_from_branches,
    von_neumann_entropy,
)
from .relativity import (
    BoostParams,
    FourVector,
    LorentzTransform,
    WignerRotation,
    boost_transform,
    branch_momenta,
    gamma,
    standard_boost,
    wigner_angle,
    wigner_angle_extended,
    wigner_angles_batch,
    wigner_cos_closed_form,
    wigner_transform,
)
from .resources import (
    Bipartition,
    GMEResult,
    SeparabilityCertificate,
    bipartition_entropies,
    coherence_linear,
    coherence_relative_entropy,
    enumerate_bipartitions,
    gme,
    invariant_combination,
    separability_structure_check,
)
from .sweep import Axis, SweepSpec, fig2_surface, parse_axis, sweep_rows

__version__ = "0.1.0"
