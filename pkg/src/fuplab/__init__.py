"""fuplab: a numerical laboratory for fractal uncertainty principles.

Discrete Cantor sets (1D and 2D) with restricted-transform norms and
certified uncertainty exponents, Schottky limit sets with dimension
estimation, regularity/porosity checkers, fractal-measure Fourier
statistics, additive energy, and a deterministic experiment CLI.
"""

__version__ = "0.1.0"

from .cantor1d import (  # noqa: F401
    CantorSpec1D,
    NormReport,
    alphabet_scan,
    build_cantor,
    dilated_exponent_curve,
    dimension,
    fup_exponent,
    fup_norm,
    schur_dilated_bound,
    strictness_witness,
    submultiplicativity_check,
)
from .cantor2d import (  # noqa: F401
    CantorSpec2D,
    build_cantor2,
    check_column_criterion,
    check_cross_criterion,
    check_nondegenerate_pairing,
    classify_exceptional,
    fup_norm2,
    thin_count,
)
from .covers import (  # noqa: F401
    IntervalCover,
    PorosityParams,
    RegularityParams,
    check_porosity,
    check_regularity,
    check_volume_bound,
    middle_third_cover,
    neighborhood,
    porous_to_regular_cover,
    volume,
)
from .dft import (  # noqa: F401
    TransformSpec,
    dft2_apply,
    dft_apply,
    dilated_dft_apply,
    idft2_apply,
    idft_apply,
    kernel_F,
)
from .energy import (  # noqa: F401
    EnergyReport,
    additive_energy_discrete,
    ae_fup_exponent,
    energy_exponent,
    ps_additive_energy,
    stereographic,
)
from .errors import BudgetError, ConvergenceError, FuplabError, InputError  # noqa: F401
from .fractalmeasure import (  # noqa: F401
    DecayFit,
    FourierSamples,
    WeightedCover,
    cantor_kernel_KX,
    cantor_measure_cover,
    decay_slope,
    envelope,
    fourier_fup_exponent,
    fourier_transform_measure,
    kernel_KX_cover,
    ps_weights,
    schur_fup_bound,
)
from .schottky import (  # noqa: F401
    SchottkyData,
    WordTree,
    builtin_schottky,
    enumerate_words,
    estimate_dimension,
    fig_sch1,
    mobius_apply,
    refine,
    three_funnel_schottky,
    validate_schottky,
    word_count,
)
