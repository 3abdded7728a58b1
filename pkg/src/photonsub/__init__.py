"""Photon subtraction on a 50/50 beam splitter in a truncated Fock basis."""

from .errors import (
    ConvergenceError,
    DegeneratePairError,
    DomainError,
    NoCrossingError,
    ParityError,
    PhotonSubError,
    ShapeMismatchError,
    VanishingStateError,
)
from .fock import (
    FockAmplitudes,
    SchmidtSpectrum,
    TwoModeState,
    fidelity,
    fock_state,
    normalize,
    photon_distribution,
    schmidt,
    tensor,
)
from .beamsplitter import (
    BeamSplitterParams,
    apply_50_50,
    apply_general,
    conditional_probability,
    su2_coherent,
)
from .subtraction import (
    SubtractionDecomposition,
    decompose_output,
    even_output,
    odd_output,
    separability_rank,
    subtracted_state,
)
from .named_states import (
    cat_even,
    cat_odd,
    coherent,
    lambda_odd,
    lambda_vac,
    odd_squeezed,
    squeezed_vacuum,
    subtracted_odd_squeezed,
    subtracted_squeezed_vacuum,
    subtraction_probability,
)
from .wigner import PhaseSpaceGrid, WignerField, wigner_field, wigner_point
from .analysis import BellReport, bell_check, match_crossing, parity_joint_distribution, probability_sweep

__version__ = "0.1.0"
