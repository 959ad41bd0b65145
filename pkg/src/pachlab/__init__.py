"""Computational laboratory for overlap properties of join complexes.

Everything is exact: F2 chain algebra on join complexes, rational planar
geometry, PL maps with crossing-parity intersection numbers, random
constructions for upper bounds, and a verified lower-bound pipeline that
extracts a common-point witness from any valid map.
"""

from ._core import BACKEND, backend_report
from .cochains import (CofillingReport, F2Chain, F2Cochain, cofilling_constant,
                       cohomology_rank, gromov_bound, minimal_cofilling,
                       pairing)
from .complexes import JoinComplex
from .errors import (BudgetExceededError, DegeneracyError, InvalidFaceError,
                     MapValidationError, NotACoboundaryError, PachlabError,
                     PipelineError, SearchFailedError, SizeLimitError)
from .geometry import (ExactPoint, PointConfiguration, candidate_points,
                       certify_general_position, point_in_triangle,
                       random_configuration, segments_cross_parity)
from .plmap import (PLMap, Polyline, affine_map, boundary_identity_check,
                    edge_path_parity, map_from_json, map_to_json,
                    point_face_parity, validate_map)

__version__ = "0.1.0"

__all__ = [
    "BACKEND", "backend_report", "__version__",
    "JoinComplex",
    "F2Chain", "F2Cochain", "CofillingReport", "pairing", "cohomology_rank",
    "minimal_cofilling", "cofilling_constant", "gromov_bound",
    "ExactPoint", "PointConfiguration", "point_in_triangle",
    "segments_cross_parity", "candidate_points", "certify_general_position",
    "random_configuration",
    "PLMap", "Polyline", "affine_map", "validate_map", "point_face_parity",
    "edge_path_parity", "boundary_identity_check", "map_to_json",
    "map_from_json",
    "PachlabError", "InvalidFaceError", "SizeLimitError", "DegeneracyError",
    "NotACoboundaryError", "BudgetExceededError", "MapValidationError",
    "SearchFailedError", "PipelineError",
]
