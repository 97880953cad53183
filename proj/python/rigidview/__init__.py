"""Two-view rigid-body geometry from point projections."""

try:
    from ._rigidview import (
        RigidviewError,
        cross_ratio,
        dof,
        locate_focal,
        match,
        min_frames,
        min_points,
        predict_line,
        simulate,
    )
except ImportError:  # build tree, module next to the package
    from _rigidview import (
        RigidviewError,
        cross_ratio,
        dof,
        locate_focal,
        match,
        min_frames,
        min_points,
        predict_line,
        simulate,
    )

__all__ = [
    "RigidviewError",
    "cross_ratio",
    "dof",
    "locate_focal",
    "match",
    "min_frames",
    "min_points",
    "predict_line",
    "simulate",
]
