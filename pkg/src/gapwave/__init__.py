"""gapwave: a numerical laboratory for signals with spectral gaps.

Subpackages cover sign-change counting and densities, exact oscillation
bounds for trigonometric polynomials, the analytic-signal (Hardy space)
machinery with phase counting, heat-kernel scale space, and desk-scale
builders for two zero-distribution counterexamples.
"""

from .core_signals import (
    Grid,
    SampledSignal,
    TrigPoly,
    Spectrum,
    GapSpec,
    GapReport,
    synth_trig,
    spectrum_of,
    inverse_spectrum,
    random_highpass,
    verify_gap,
    apply_gap_mask,
    signal_energy,
    spectrum_energy,
)
from .errors import (
    GapwaveError,
    InvalidInputError,
    OutOfRangeError,
    NearZeroOnCircleError,
    NeedsHeatingError,
    NeedsRefinementError,
    NoSplitError,
    DiagnosticError,
)
from .oscillation import (
    ZeroPlace,
    SignChangeReport,
    DensityProfile,
    zero_places,
    sign_change_places,
    s_count,
    density_profile,
    averaged_S,
)
from .sturm_hurwitz import (
    SturmReport,
    WindingReport,
    check_sturm_bound,
    orthogonality_witness,
    winding_count,
    logan_g,
    alternation_bound,
)
from .hardy import (
    AnalyticDecomposition,
    Lattice,
    PhaseCurve,
    JReport,
    decompose,
    cauchy_h,
    decay_check,
    nevanlinna_exponent,
    hilbert_transform,
    hilbert_spectral,
    J_functional,
    make_harmonic_pair,
    kolmogorov_check,
    tail_split,
    phase_curve,
    phase_curve_from_callable,
    lattice_crossings,
    blaschke,
    quant_bound,
    carleman_pair,
    carleman_mismatch,
)
from .heat_flow import (
    TemperatureField,
    MonotonicityReport,
    heat_kernel,
    heat_convolve,
    heat_trig,
    temperature_field,
    heat_residual,
    monotonicity_check,
    simple_zero_time,
)
from .limit_sets_examples import (
    ChargeProfile,
    Example2Constants,
    IntervalMeasure,
    ZeroSet,
    u0_profile,
    Q_closed,
    q_closed,
    charge_profile,
    find_constants,
    scale_u,
    scale_mu,
    scaling_orbit,
    boundary_charge,
    split_check,
    integer_zero_set,
    example1_build,
    example2_build,
)

__version__ = "0.1.0"
