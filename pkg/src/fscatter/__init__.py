"""Translation-invariant scattering and dispersion features of 1-D signals,
computed entirely in the Fourier domain on sparse Morlet filter banks."""

from .engine import (
    FeatureEntry,
    FeatureVector,
    LayerRepresentation,
    ScatterConfig,
    extract_dispersion,
    extract_scattering,
    forward_layer,
    quadratic_pointwise,
    reconstruct_band,
    scatter,
    scatter_with_layers,
    spectral_square,
)
from .filters import (
    INFINITE_TIME_SUPPORT,
    FilterBank,
    FourierFilter,
    MotherParams,
    ParameterError,
    build_scale_set,
    generate_filterbank,
    morlet_support,
    mother_params,
    renormalize_littlewood_paley,
    sample_gaussian_scaling,
    sample_morlet,
)
from .fourier import (
    HalfSpectrum,
    LengthError,
    ShapeError,
    SupportWindow,
    SymmetryError,
    expand_half_spectrum,
    fft,
    hadamard_on_support,
    ifft,
    padded_autocorrelation,
)
from .oracle import DenseFilter, oracle_convolve, oracle_scatter
from .pipeline import (
    DegenerateInputError,
    FeatureRecord,
    PipelineConfig,
    export_features,
    normalize_input,
    pad_to_pow2,
    run_bench,
    run_extract,
)
from .wavio import WavFormatError, ingest_wav

__version__ = "0.1.0"
