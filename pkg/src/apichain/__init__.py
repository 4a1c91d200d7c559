"""Markov-chain behavioral malware classification over abstracted API calls."""

from .signatures import (
    AbstractionMode,
    AbstractionTable,
    AbstractLabel,
    ApiCallSignature,
    abstract_call,
    is_obfuscated,
    parse_signature,
    state_space,
)
from .callgraph import (
    CallGraph,
    TransitionCounts,
    entry_nodes,
    extract_transitions,
    load_call_graph,
)
from .markov import MarkovChain, MarkovFeatureVector, build_chain, featurize
from .reduction import (
    ClassClustering,
    PcaModel,
    build_cooccurrence,
    cluster_classes,
    cosine_similarity,
    fit_pca,
    kmeans_cluster,
    transform_pca,
)
from .classify import KNearestNeighbors, RandomForest, RandomForestConfig
from .evaluation import (
    EvaluationReport,
    cross_validate,
    evaluate,
    temporal_evaluate,
)
from .fam import FamFeatureSet, FrequencyProfile, fam_featurize, profile_app, select_features
from .pipeline import DatasetManifest, PipelineConfig
from .synth import SynthSpec, generate_corpus

__version__ = "0.1.0"
