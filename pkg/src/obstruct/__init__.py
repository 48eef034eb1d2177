"""Beta-shifts, orbit-segment decompositions, maximal-entropy measures,
and machine checks of the counting/Gibbs/mixing estimates behind
intrinsic ergodicity, including sliding-block factors."""

from .beta import BetaExpansion, BetaSystem, greedy_expansion, parse_beta, quasi_greedy
from .decomposition import (
    BetaDecomposition,
    DecompositionScheme,
    FiltrationLevel,
    GluingResult,
    SpecificationReport,
    beta_decomposition,
    check_specification,
    degenerate_decomposition,
    filtration_coverage,
    min_gluing_time,
    obstruction_entropy_profile,
    obstruction_entropy_upper,
    split,
    zero_padding_to_core,
)
from .factors import (
    BlockCode,
    FactorSystem,
    PairAutomaton,
    apply_code,
    build_pair_automaton,
    factor_entropy_positive,
    factor_language,
    factor_suffix_entropy,
    induced_decomposition,
    nonexpansive_growth,
)
from .measures import (
    CylinderMeasure,
    empirical_mme,
    max_depth_gap,
    measure_entropy_rate,
    parry_measure,
)
from .orbits import (
    EntropyEstimate,
    OrbitCollection,
    count_separated,
    lower_entropy,
    upper_entropy,
)
from .perron import PerronData, perron_eigendata
from .quadratic import QuadraticNumber, golden_ratio
from .suites import (
    CountingSuiteReport,
    GibbsReport,
    counting_suite,
    gibbs_check,
    gibbs_proof_constant,
    mixing_check,
    mixing_liminf_probe,
    mixing_proof_constant,
    positive_mass_constant,
    positive_mass_count,
)
from .words import (
    SCALE_MULTIPLIER_DEPTH_SHIFT,
    Word,
    bowen_cylinder,
    depth_for_scale,
    format_word,
    parse_word,
    scaled_depth,
    word,
)

__version__ = "0.1.0"
