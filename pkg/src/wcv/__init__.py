"""Supervised dimension reduction and classification for distribution-valued
data in the Wasserstein metric space."""

from .classifier import (
    ClassifierConfig,
    PseudoMixtureModel,
    fit_pseudo_mixture,
    model_from_dict,
    model_from_json,
    model_to_dict,
    model_to_json,
    posterior,
    predict,
    pseudo_density,
)
from .distributions import (
    DiscreteDistribution,
    GaussianComponent,
    GaussianMixture,
    LabeledSample,
    from_discrete,
    mixture_from_dict,
    mixture_from_json,
    mixture_to_dict,
    mixture_to_json,
    project,
)
from .errors import (
    DegenerateWithinVariation,
    DimensionMismatch,
    EmptyClass,
    EmptyCloud,
    EmptyPairSet,
    IdMismatch,
    InvalidInput,
    MarginalMismatch,
    NotPositiveSemidefinite,
    RankDeficient,
    SingletonClass,
    SingularMatrix,
    WcvError,
)
from .linalg import (
    Subspace,
    SymMatrix,
    grassmann_distance,
    orthonormal_span,
    psd_inv_sqrt,
    psd_sqrt,
    sym_eig,
)
from .otaf import (
    OtafConfig,
    OtafResult,
    PairSets,
    ProjectionMatrix,
    discriminant_ratios,
    fisher_ratio,
    fit,
    scatter_matrices,
    select_pairs,
    solve_directions,
)
from .pipeline import (
    CrossRepresentationResult,
    DataCloud,
    EvaluationReport,
    FoldRecord,
    GmmBuildConfig,
    build_gmms,
    cross_representation_eval,
    kmeans,
    leave_one_out,
    leave_one_out_clouds,
    load_long_csv,
    load_manifest,
    rank_auc,
    represent_cloud,
    select_top_variable_features,
)
from .transport import (
    Coupling,
    OtResult,
    gaussian_w2,
    gaussian_what2,
    maw2,
    pairwise_maw_sq,
    solve_ot,
    wasserstein2_discrete,
)

__version__ = "0.1.0"

__all__ = [
    "ClassifierConfig",
    "Coupling",
    "CrossRepresentationResult",
    "DataCloud",
    "DegenerateWithinVariation",
    "DimensionMismatch",
    "DiscreteDistribution",
    "EmptyClass",
    "EmptyCloud",
    "EmptyPairSet",
    "EvaluationReport",
    "FoldRecord",
    "GaussianComponent",
    "GaussianMixture",
    "GmmBuildConfig",
    "IdMismatch",
    "InvalidInput",
    "LabeledSample",
    "MarginalMismatch",
    "NotPositiveSemidefinite",
    "OtResult",
    "OtafConfig",
    "OtafResult",
    "PairSets",
    "ProjectionMatrix",
    "PseudoMixtureModel",
    "RankDeficient",
    "SingletonClass",
    "SingularMatrix",
    "Subspace",
    "SymMatrix",
    "WcvError",
    "build_gmms",
    "cross_representation_eval",
    "discriminant_ratios",
    "fisher_ratio",
    "fit",
    "fit_pseudo_mixture",
    "from_discrete",
    "gaussian_w2",
    "gaussian_what2",
    "grassmann_distance",
    "kmeans",
    "leave_one_out",
    "leave_one_out_clouds",
    "load_long_csv",
    "load_manifest",
    "maw2",
    "mixture_from_dict",
    "mixture_from_json",
    "mixture_to_dict",
    "mixture_to_json",
    "model_from_dict",
    "model_from_json",
    "model_to_dict",
    "model_to_json",
    "orthonormal_span",
    "pairwise_maw_sq",
    "posterior",
    "predict",
    "project",
    "pseudo_density",
    "psd_inv_sqrt",
    "psd_sqrt",
    "rank_auc",
    "represent_cloud",
    "scatter_matrices",
    "select_pairs",
    "select_top_variable_features",
    "solve_directions",
    "solve_ot",
    "sym_eig",
    "wasserstein2_discrete",
]
