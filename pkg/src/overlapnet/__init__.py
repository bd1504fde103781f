"""Overlapping community structure from influence spreading.

The pipeline: load a weighted network, compute (or import) an
influence-spreading matrix, find many locally optimal bipartitions,
group nodes into building blocks by their membership signatures across
those divisions, then apply a size-ratio threshold rule to decide which
blocks mark genuinely overlapping nodes.
"""
from .blocks import (BlockAssignment, DivisionScores, Pattern, block_table,
                     blocks_for_segment, build_blocks, compute_and_rank)
from .config import RunConfig, resolve_config
from .errors import (DegenerateStructureError, DimensionError, FormatError,
                     OverlapnetError, ParameterError, UndefinedRatioError,
                     ValidationError)
from .graph import (Graph, clustering_coefficient, load_edge_list,
                    load_labels, save_edge_list)
from .influence import (InfluenceMatrix, compute_influence, export_matrix,
                        import_matrix)
from .overlap import (CommunityAssignment, OverlapResult, community_sizes,
                      evaluate_communities, load_communities, ratio,
                      threshold_sweep)
from .partition import (Division, DivisionSet, export_divisions,
                        generate_divisions, import_divisions, local_search,
                        quality)

__version__ = "0.1.0"

__all__ = [
    "BlockAssignment", "CommunityAssignment", "DegenerateStructureError",
    "DimensionError", "Division", "DivisionScores", "DivisionSet",
    "FormatError", "Graph", "InfluenceMatrix", "OverlapResult",
    "OverlapnetError", "ParameterError", "Pattern", "RunConfig",
    "UndefinedRatioError", "ValidationError", "block_table",
    "blocks_for_segment", "build_blocks", "clustering_coefficient",
    "community_sizes", "compute_and_rank", "compute_influence",
    "evaluate_communities", "export_divisions", "export_matrix",
    "generate_divisions", "import_divisions", "import_matrix",
    "load_communities", "load_edge_list", "load_labels", "local_search",
    "quality", "ratio", "resolve_config", "save_edge_list",
    "threshold_sweep",
]
