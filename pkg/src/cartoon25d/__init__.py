"""Layered 2.5D cartoon models: author 2D vector parts in a few key camera
views, solve for per-part 3D anchors plus per-view distortions, and evaluate
the model from any camera rotation with blended anchors, depths, colors, and
rigidity-preserving shape interpolation."""

from .animation import ModelTrack, load_track, sample_track, track_from_doc
from .arap import ArapCache, assemble_shape, extract_transforms
from .baselines import (AnchorMethod, WeightMethod, anchor_no_vdd,
                        anchor_pure2d, weights_alternative)
from .blend import (BlendParams, DEFAULT_PARAMS, WeightVector, blend_anchor,
                    blend_color, blend_depth, compute_weights, evaluate_frame,
                    quantize_view)
from .errors import (Cartoon25dError, DegenerateConfiguration,
                     DegenerateTriangle, DuplicateKeyView, EmptyModel,
                     NonOrthonormalView, NotPositiveDefinite, OutOfRange,
                     ParseError, ReflectionError, SingularSystem,
                     TopologyMismatch, UnsolvedModel, ValidationError,
                     VertexCountMismatch)
from .geometry import (IDENTITY_VIEW, ViewRotation, frobenius_distance,
                       project, rotation_from_euler)
from .model import (BlendedFrame, KeyViewRecord, Model25, PartTopology,
                    PartView, SolvedPart, add_key_view, delete_latest_key_view,
                    frame_to_doc, load_model, model_from_doc, model_to_doc,
                    replace_part_view, save_model, validate_model)
from .solver import anchor_residual, solve_model, triangulate_anchor
from .svg import RenderOptions, render_frame, render_turntable

__version__ = "0.1.0"

__all__ = [
    "AnchorMethod", "ArapCache", "BlendParams", "BlendedFrame",
    "Cartoon25dError", "DEFAULT_PARAMS", "DegenerateConfiguration",
    "DegenerateTriangle", "DuplicateKeyView", "EmptyModel", "IDENTITY_VIEW",
    "KeyViewRecord", "Model25", "ModelTrack", "NonOrthonormalView",
    "NotPositiveDefinite",
    "OutOfRange", "ParseError", "PartTopology", "PartView", "ReflectionError",
    "RenderOptions", "SingularSystem", "SolvedPart", "TopologyMismatch",
    "UnsolvedModel", "ValidationError", "VertexCountMismatch", "ViewRotation",
    "WeightMethod", "WeightVector", "add_key_view", "anchor_no_vdd",
    "anchor_pure2d", "anchor_residual", "assemble_shape", "blend_anchor",
    "blend_color", "blend_depth", "compute_weights", "delete_latest_key_view",
    "evaluate_frame", "extract_transforms", "frame_to_doc",
    "frobenius_distance", "load_model", "load_track", "model_from_doc",
    "model_to_doc", "project", "quantize_view", "render_frame",
    "render_turntable", "replace_part_view", "rotation_from_euler",
    "sample_track", "save_model", "solve_model", "track_from_doc",
    "triangulate_anchor", "validate_model", "weights_alternative",
    "__version__",
]
