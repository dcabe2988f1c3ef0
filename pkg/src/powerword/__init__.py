"""powerword: build and verify finite words with prescribed repetitions."""

from .words import (
    Rational,
    Word,
    cartesian_product,
    exponent_of,
    hamming_distance,
    is_periodic,
    read_words,
    smallest_period,
    word,
    write_words,
)
from .analysis import (
    DefectRow,
    Run,
    approximate_power_defect,
    brute_force_critical_exponent,
    check_period_difference,
    critical_exponent,
    defect_to_periodic,
    maximal_repetitions,
    power_defect_sweep,
)
from .patterns import (
    ActiveInterval,
    ClassMap,
    RepetitionPattern,
    bracket_layer,
    build_class_map,
    class_members,
    class_of,
    enumerate_exponents,
    free_bit_count,
    layout_intervals,
    materialize,
    min_free_density,
    periodic_layer,
)
from .codec import (
    BitCode,
    binary_entropy,
    decode_approx_power,
    decode_power,
    encode_approx_power,
    encode_power,
    lz_phrase_count,
    subset_rank,
    subset_unrank,
)
from .lll import (
    ConditionReport,
    Event,
    EventSystem,
    ResampleFailure,
    ResampleTrace,
    Xorshift64,
    build_power_events,
    check_asymmetric_condition,
    resample_fill,
    threshold_N,
)
from .synth import (
    SynthesisConfig,
    SynthesisReport,
    VerificationError,
    core_report_text,
    render_report,
    synthesize,
    verify,
)

__version__ = "0.1.0"
