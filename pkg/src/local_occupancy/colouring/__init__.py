from local_occupancy.colouring.analysis import (
    availability,
    chernoff_lower_tail,
    expected_residual_list_size,
    lll_condition,
    negative_correlation_gap,
    residual_list_lower_bound,
)
from local_occupancy.colouring.cover import (
    Cover,
    CoverDocument,
    PartialColouring,
    audit,
    cover_from_document,
    cover_from_json,
    cover_from_lists,
    cover_to_document,
    cover_to_json,
    format_lists,
    parse_lists,
    random_cover,
    verify_colouring,
)
from local_occupancy.colouring.fractional import (
    FractionalColouring,
    FractionalOutcome,
    fractional_greedy,
)
from local_occupancy.colouring.phases import (
    ColouringCertificate,
    PhaseStats,
    colour,
    phase1_partial,
    phase2_finish,
)
from local_occupancy.colouring.splitting import (
    SplitAudit,
    SplitResult,
    iterated_split,
    split_partition,
)

__all__ = [
    "ColouringCertificate",
    "Cover",
    "CoverDocument",
    "FractionalColouring",
    "FractionalOutcome",
    "PartialColouring",
    "PhaseStats",
    "SplitAudit",
    "SplitResult",
    "audit",
    "availability",
    "chernoff_lower_tail",
    "colour",
    "cover_from_document",
    "cover_from_json",
    "cover_from_lists",
    "cover_to_document",
    "cover_to_json",
    "expected_residual_list_size",
    "format_lists",
    "fractional_greedy",
    "iterated_split",
    "lll_condition",
    "negative_correlation_gap",
    "parse_lists",
    "phase1_partial",
    "phase2_finish",
    "random_cover",
    "residual_list_lower_bound",
    "split_partition",
    "verify_colouring",
]
