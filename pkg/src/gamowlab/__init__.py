"""Numerical toolkit for resonances as generalized eigenstates.

The package verifies, by quadrature and closed-form oracles, the analytic
machinery behind decaying states: two-sheet S-matrix models, Hardy-class
membership and half-line Fourier support, Gamow pairings with complex
eigenvalues and one-sided semigroup evolution, pole + background
expansions of matrix elements, and the exact exponential decay law with
its Born-approximation limit.
"""
__version__ = "0.1.0"

from .errors import (
    BranchPointHit,
    ClassMismatch,
    DecayTooSlow,
    GamowLabError,
    InconsistentResidue,
    NonConvergence,
    ParseError,
    PoleHit,
    PoleOnPath,
    TimeDirectionViolation,
    ValidationError,
    WrongHalfPlane,
    ZeroCoupling,
)
from .paths import (
    ArcSegment,
    ContourPath,
    LineSegment,
    Orientation,
    RaySegment,
    Sheet,
    circle,
    horizontal_line,
    negative_axis_ray,
    rectangle,
    tilted_v,
)
from .quadrature import (
    QuadratureResult,
    integrate_contour,
    integrate_real_line,
    residue_at,
)
from .spectral import (
    ComplexEnergy,
    EnergyWaveFunction,
    HardyClass,
    ModelKind,
    ResonancePole,
    SMatrixModel,
    WaveTerm,
    evaluate_smatrix,
    evaluate_wavefunction,
    momentum_for_sheet,
    unitarity_defect,
)
from .hardy import (
    HardyClassReport,
    TimeSignal,
    fourier_transform_signal,
    paley_wiener_classify,
    signal_energy,
    titchmarsh_conjugate_defect,
    titchmarsh_value,
)
from .gamow import (
    GamowFunctional,
    GamowVariant,
    breit_wigner_pole_term,
    eigenvalue_defect,
    gamow_pairing,
    semigroup_divergence_scan,
    semigroup_factor,
)
from .expansion import (
    ExpansionReport,
    background_term,
    continuum_completeness_defect,
    decompose,
    direct_smatrix_element,
)
from .goldenrule import (
    ConstantCoupling,
    DecayScenario,
    PolynomialLorentzianCoupling,
    TabulatedCoupling,
    born_rate,
    decay_rate,
    intensity,
    normalize,
    transition_probability,
)
from .config import ScenarioConfig, TaskSpec, load_config, parse_config
from .runner import RunReport, TaskResult, run
from .verify import CriterionResult, run_all
