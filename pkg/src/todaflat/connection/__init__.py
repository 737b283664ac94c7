from .assemble import ConnectionForm, assemble_connection, curvature, curvature_sup_norm
from .holonomy import HolonomyResult, holonomy, loop_path, trace_invariants

__all__ = [
    "ConnectionForm",
    "assemble_connection",
    "curvature",
    "curvature_sup_norm",
    "HolonomyResult",
    "holonomy",
    "loop_path",
    "trace_invariants",
]
