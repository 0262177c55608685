"""Statistically significant discriminative window mining for binary-labelled
multi-agent trajectory data, with a basketball attack labeler, a synthetic
data generator, and an SVG court renderer."""

__version__ = "0.1.0"

from trajmine.distance import (
    DistanceMode,
    chebyshev,
    directed_hausdorff,
    euclidean,
    hausdorff,
    manhattan,
    submatrix_distance,
)
from trajmine.labeling import (
    CourtGeometry,
    DefenderDistanceCategory,
    PlayerShotStats,
    Position,
    ShotEvent,
    ShotZone,
    adjusted_three_point_prob,
    classify_zone,
    defender_category,
    explain_label,
    label_attack,
    three_point_prob,
)
from trajmine.mining import (
    Discovery,
    MinerConfig,
    MiningResult,
    Node,
    enumerate_seeds,
    extend_node,
    mine,
    seed_neighborhood,
)
from trajmine.model import (
    AgentRole,
    Dataset,
    Point2D,
    SubMatrixRef,
    TrajectoryMatrix,
    crop_attack,
    extract_submatrix,
    make_dataset,
    validate_dataset,
)
from trajmine.render import RenderSpec, render_attack_svg
from trajmine.stats import (
    ContingencyMargins,
    PermutationSet,
    calibrate_delta,
    envelope_bound,
    fet_pvalue,
    min_attainable_p,
    permuted_support_pvalue,
)
from trajmine.synth import SynthConfig, gen_null, gen_planted

__all__ = [
    "AgentRole",
    "ContingencyMargins",
    "CourtGeometry",
    "Dataset",
    "DefenderDistanceCategory",
    "Discovery",
    "DistanceMode",
    "MinerConfig",
    "MiningResult",
    "Node",
    "PermutationSet",
    "PlayerShotStats",
    "Point2D",
    "Position",
    "RenderSpec",
    "ShotEvent",
    "ShotZone",
    "SubMatrixRef",
    "SynthConfig",
    "TrajectoryMatrix",
    "adjusted_three_point_prob",
    "calibrate_delta",
    "chebyshev",
    "classify_zone",
    "crop_attack",
    "defender_category",
    "directed_hausdorff",
    "enumerate_seeds",
    "envelope_bound",
    "euclidean",
    "explain_label",
    "extend_node",
    "extract_submatrix",
    "fet_pvalue",
    "gen_null",
    "gen_planted",
    "hausdorff",
    "label_attack",
    "make_dataset",
    "manhattan",
    "mine",
    "min_attainable_p",
    "permuted_support_pvalue",
    "render_attack_svg",
    "seed_neighborhood",
    "submatrix_distance",
    "three_point_prob",
    "validate_dataset",
]
