"""Panel decomposition toolkit.

Thin python facade over the C++ core: CSV panel ingestion, dyadic wavelet
multiresolution analysis, wavelet multifractal spectra, exact dynamic mode
decomposition and seeded synthetic generators.
"""

from wavemode._core import (  # noqa: F401
    INFINITE,
    BoundaryPolicy,
    CycleSpec,
    DmdMode,
    DmdModel,
    FilterPair,
    JbResult,
    LevelRange,
    MissingPolicy,
    ModeReport,
    ModeRow,
    MraDecomposition,
    MultifractalSpectrum,
    NormalizeMethod,
    NumericError,
    Panel,
    PowerConvention,
    SeriesSummary,
    SpectrumPoint,
    StructureFunctions,
    ValidationError,
    WaveletCoefficients,
    __version__,
    besov_exponent,
    concavity_test,
    dwt_forward,
    dwt_inverse,
    estimate_spectrum,
    fit_dmd,
    gen_cascade,
    gen_linear_system,
    gen_planted_cycles,
    jarque_bera,
    load_panel,
    loads_panel,
    mode_report,
    mra,
    normalize,
    phase_magnitude,
    quadrature_pair,
    real_mode_trace,
    reconstruct,
    run_pipeline_file,
    save_panel,
    singularity_spectrum,
    stack_for_plot,
    structure_functions,
    summarize,
    temporal_dynamics,
)
