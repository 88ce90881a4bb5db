"""Folding, stratification and dual cube complexes of cell complexes."""
from .actions import (
    GroupAction,
    generate,
    induced_dual_action,
    stabilizer,
    verify_stabilizer_lemmas,
)
from .complexes import (
    CubicalComplex,
    MarkedComplex,
    SimplicialComplex,
    admissibility_check,
    barycentric_subdivision,
    cubify,
    link,
    relative_cone,
)
from .covers import (
    CoverProjection,
    PermRep,
    branched_cover,
    build_cover,
    deck_transformations,
    pi1_presentation,
)
from .curvature import is_flag, npc_certificate, vertex_link
from .dual import DualComplex, branched_dual_consistency, dual_mirror, dual_tile, dualize
from .errors import *  # noqa: F401,F403
from .fileio import format_complex, parse_complex, parse_rep, read_complex, write_complex
from .folding import Folding, compute_folding, simplicial_folding, verify_folding
from .homotopy import (
    ContractionCertificate,
    EdgePath,
    contract_in_tile,
    contract_loop,
    crossings,
    find_minimal_bridge,
    project_bridge,
    validate_certificate,
)
from .report import Report
from .strata import (
    Stratification,
    mirror_structure_check,
    mirrors,
    separation_check,
    stratify,
)

__version__ = "0.1.0"
