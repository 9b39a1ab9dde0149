from sector_verifier.zigzag.facts import (
    shrink_against,
    zz_avoid_third,
    zz_concat_split,
    zz_disjointify,
    zz_shorten,
)
from sector_verifier.zigzag.indicator import ga3_zigzag, is_ga15_witness, is_small_indicator, small_indicator
from sector_verifier.zigzag.mdz import (
    PATTERNS,
    TriangleDance,
    concat,
    mdz_around,
    mdz_between_splittings,
    mdz_through,
    normalize,
    orient_start,
    reverse,
    slice_mdz,
    swap_mdz,
    swap_rows,
    triangle_dance,
    trivial,
    true_reverse,
)
from sector_verifier.zigzag.reflection import find_reflection, search_reflection

__all__ = [
    "PATTERNS",
    "TriangleDance",
    "concat",
    "find_reflection",
    "ga3_zigzag",
    "is_ga15_witness",
    "is_small_indicator",
    "mdz_around",
    "mdz_between_splittings",
    "mdz_through",
    "normalize",
    "orient_start",
    "reverse",
    "slice_mdz",
    "search_reflection",
    "shrink_against",
    "small_indicator",
    "swap_mdz",
    "swap_rows",
    "triangle_dance",
    "trivial",
    "true_reverse",
    "zz_avoid_third",
    "zz_concat_split",
    "zz_disjointify",
    "zz_shorten",
]
