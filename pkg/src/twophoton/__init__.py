"""Wave-optics simulation of two-photon phase super-resolution in an unbalanced Michelson."""
__version__ = "0.1.0"

from .errors import (  # noqa: E402
    ConfigurationError,
    DomainError,
    MeasurementError,
    TwoPhotonError,
    UsageError,
)
from .wavecore import (  # noqa: E402
    C,
    Envelope,
    SampledGrid,
    from_spectrum,
    fwhm,
    make_grid,
    omega_to_wavelength,
    to_spectrum,
    wavelength_to_omega,
)
from .pulsegen import PulseSpec, coherence_length, gaussian_pulse, pulse_energy  # noqa: E402
from .interferogram import Interferogram, load_interferogram  # noqa: E402
from .classical import (  # noqa: E402
    ClassicalConfig,
    FilterSpec,
    apply_bandpass,
    classical_signal_at,
    detect_energy,
    envelope_scan,
    michelson_transform,
    scan_classical,
    sfg_transform,
)
from .quantum import (  # noqa: E402
    BiphotonState,
    QuantumConfig,
    biphoton_michelson,
    coincidence_probability,
    joint_temporal,
    make_biphoton,
    quantum_signal_at,
    scan_quantum,
)
from .fringes import (  # noqa: E402
    CalibrationFit,
    FringeMetrics,
    calibrate_displacement,
    envelope_fwhm,
    fit_fringe,
    peak_ratio,
)
from .comparison import ComparisonReport, compare, matched_classical_config  # noqa: E402
