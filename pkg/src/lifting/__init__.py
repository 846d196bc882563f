from src.lifting.audit import (
    AuditSummary,
    LowerBoundReport,
    audit_lower_bound,
    random_pixel_set,
    verify_lower_bound,
)
from src.lifting.construct import (
    LiftingResult,
    construct_lifting,
    deck_ambiguity,
    lifting_set_correspondence,
)
from src.lifting.grid import EdgeSet, GridField, LatticeGrid, PixelSet
from src.lifting.jordan import ContactTag, EdgePath, classify_arcs, contact_map, jordan_decompose
from src.lifting.perimeter import essential_boundary, la_edge_set, symdiff_boundary_check
from src.lifting.rasterize import cut_band, segment_band
from src.lifting.trails import Trail, TrailPartition, euler_trails
from src.lifting.winding import (
    Singularity,
    SingularityReport,
    boundary_winding,
    detect_singularities,
    loop_parity,
    winding_of_values,
)

__all__ = [
    "AuditSummary",
    "LowerBoundReport",
    "audit_lower_bound",
    "random_pixel_set",
    "verify_lower_bound",
    "LiftingResult",
    "construct_lifting",
    "deck_ambiguity",
    "lifting_set_correspondence",
    "EdgeSet",
    "GridField",
    "LatticeGrid",
    "PixelSet",
    "ContactTag",
    "EdgePath",
    "classify_arcs",
    "contact_map",
    "jordan_decompose",
    "essential_boundary",
    "la_edge_set",
    "symdiff_boundary_check",
    "cut_band",
    "segment_band",
    "Trail",
    "TrailPartition",
    "euler_trails",
    "Singularity",
    "SingularityReport",
    "boundary_winding",
    "detect_singularities",
    "loop_parity",
    "winding_of_values",
]
