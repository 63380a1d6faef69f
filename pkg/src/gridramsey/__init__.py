"""Monochromatic boxes in colored grids: exact bounds, searches and certificates."""
from .bounds import (
    bound_certificate,
    compose_guarantee,
    corollary_grid,
    delta_sequence,
    epsilon,
    epsilon_value,
    gamma_sequence,
    guaranteed_count_lower_bound,
    hereditary_check,
    lll_volume_threshold,
    minimal_coloring,
    mu_sequence,
    pinch_points,
    virtual_color_count,
)
from .certificate import COLORABLE, GUARANTEED, UNKNOWN, Certificate, certificate_from_dict
from .grid import (
    Coloring,
    Grid,
    box_count,
    canonicalize,
    count_monochromatic_boxes,
    dominance_leq,
    parse_coloring,
    read_coloring,
    write_coloring,
)
from .pipeline import a3_table, best_t, least_a3_delta, obstruction_count_exponent, product_extension
from .qform import build_matrix, min_rectangles, psd_check, qform_penalized, spectrum
from .search import (
    SearchBudget,
    find_coloring,
    is_guaranteed_exact,
    min_mono_boxes_exact,
    moser_tardos_color,
    obstruction_set,
)
from .verify import verify_certificate

__version__ = "0.1.0"
