"""Pipeline orchestration: manifests, config, and end-to-end commands.

Every command is a plain function so the CLI stays a thin argparse layer;
all of them are deterministic given (manifest, config, seed), including
the worker-pool featurization (results are ordered by manifest index, not
completion time).
"""

from __future__ import annotations

import configparser
import hashlib
import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, asdict, field
from pathlib import Path

import numpy as np

from . import fam as fam_mod
from .callgraph import (
    entry_label_sets,
    extract_transitions,
    load_call_graph,
    node_label_counts,
    path_label_sets,
)
from .classify import (
    RandomForestConfig,
    make_classifier,
    load_model,
    read_model_header,
    save_model,
)
from .errors import (
    ApichainError,
    DimensionMismatch,
    IoFailure,
    MalformedGraphFile,
    MalformedSignature,
    NoDiscriminativeFeatures,
    PathExplosion,
)
from .evaluation import (
    cross_validate,
    evaluate,
    temporal_evaluate,
    write_reports,
    write_unavailable_report,
)
from .markov import build_chain, hash_states, load_feature_matrix, save_feature_matrix
from .reduction import (
    ClassClustering,
    cluster_classes,
    fit_pca,
    load_clustering,
    save_clustering,
    transform_pca,
)
from .signatures import AbstractionMode, AbstractionTable

WORKERS_ENV = "APICHAIN_WORKERS"

# Forest shapes per abstraction granularity; class mode shares the package
# configuration.
FOREST_DEFAULTS = {"family": (51, 8), "package": (101, 64), "class": (101, 64)}

SKIPPABLE = (MalformedGraphFile, MalformedSignature, IoFailure, PathExplosion)


# ---------------------------------------------------------------------------
# Dataset manifest


@dataclass
class ManifestEntry:
    path: Path
    label: str
    year: int | None
    sha256: str | None = None


@dataclass
class DatasetManifest:
    name: str
    entries: list[ManifestEntry]


def load_manifest(path: str | Path, verify_checksums: bool = True) -> DatasetManifest:
    path = Path(path)
    try:
        doc = json.loads(path.read_text(encoding="utf-8"))
    except OSError as exc:
        raise IoFailure(f"cannot read manifest {path}: {exc}") from exc
    entries = []
    for i, raw in enumerate(doc.get("entries", [])):
        gpath = Path(raw["path"])
        if not gpath.is_absolute():
            gpath = path.parent / gpath
        if not gpath.exists():
            raise IoFailure(f"manifest entry {i}: missing file {gpath}")
        label = raw["label"]
        if label not in ("benign", "malware"):
            raise ValueError(f"manifest entry {i}: label must be benign|malware, got {label!r}")
        year = raw.get("year")
        if year is not None:
            year = int(year)
            if not (1000 <= year <= 9999):
                raise ValueError(f"manifest entry {i}: year {year} is not 4-digit")
        digest = raw.get("sha256")
        if digest and verify_checksums:
            actual = hashlib.sha256(gpath.read_bytes()).hexdigest()
            if actual != digest:
                raise IoFailure(f"manifest entry {i}: checksum mismatch for {gpath}")
        entries.append(ManifestEntry(gpath, label, year, digest))
    if not entries:
        raise ValueError(f"manifest {path} has no entries")
    return DatasetManifest(str(doc.get("name", path.stem)), entries)


# ---------------------------------------------------------------------------
# Pipeline configuration (flat INI; CLI flags override keys)


@dataclass
class PipelineConfig:
    mode: str = "family"
    strategy: str = "edge-multiset"
    featurizer: str = "markov"
    seed: int = 0
    workers: int = 1
    max_path_depth: int | None = None
    path_budget: int = 1_000_000
    cooccurrence: str = "app"
    packages: str = "builtin"
    classes: str = "builtin"
    split_android: bool = True
    adlibs: str = ""
    clustering: str = ""
    pca_components: int | None = None
    classifier: str = "random-forest"
    trees: int | None = None
    depth: int | None = None
    fam_top_k: int = fam_mod.PACKAGE_TOP_K

    def __post_init__(self):
        if self.mode not in ("family", "package", "class"):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.strategy not in ("edge-multiset", "path-enumeration"):
            raise ValueError(f"unknown strategy {self.strategy!r}")
        if self.featurizer not in ("markov", "fam"):
            raise ValueError(f"unknown featurizer {self.featurizer!r}")
        if self.classifier not in ("random-forest", "1nn", "3nn"):
            raise ValueError(f"unknown classifier {self.classifier!r}")
        if self.cooccurrence not in ("app", "entry", "path"):
            raise ValueError(f"unknown co-occurrence granularity {self.cooccurrence!r}")

    def table(self) -> AbstractionTable:
        kwargs = {"split_android_package": self.split_android}
        if self.packages == "builtin" and self.classes == "builtin":
            return AbstractionTable.default(**kwargs)
        return AbstractionTable.load(self.packages, self.classes, **kwargs)

    def mode_enum(self) -> AbstractionMode:
        return AbstractionMode(self.mode)

    def forest_config(self) -> RandomForestConfig:
        trees, depth = FOREST_DEFAULTS[self.mode]
        return RandomForestConfig(
            n_trees=self.trees if self.trees is not None else trees,
            max_depth=self.depth if self.depth is not None else depth,
            seed=self.seed,
        )

    def ad_prefixes(self) -> tuple[str, ...]:
        if not self.adlibs:
            return ()
        lines = Path(self.adlibs).read_text(encoding="utf-8").splitlines()
        return tuple(l.strip() for l in lines if l.strip() and not l.strip().startswith("#"))

    def load_clustering_or_none(self) -> ClassClustering | None:
        return load_clustering(self.clustering) if self.clustering else None

    def to_ini(self, path: str | Path) -> Path:
        cp = configparser.ConfigParser()
        cp["pipeline"] = {
            "mode": self.mode,
            "strategy": self.strategy,
            "featurizer": self.featurizer,
            "seed": str(self.seed),
            "workers": str(self.workers),
            "max_path_depth": "" if self.max_path_depth is None else str(self.max_path_depth),
            "path_budget": str(self.path_budget),
            "cooccurrence": self.cooccurrence,
        }
        cp["abstraction"] = {
            "packages": self.packages,
            "classes": self.classes,
            "split_android": str(self.split_android).lower(),
            "adlibs": self.adlibs,
            "clustering": self.clustering,
        }
        cp["pca"] = {
            "components": "" if self.pca_components is None else str(self.pca_components),
        }
        cp["classifier"] = {
            "kind": self.classifier,
            "trees": "" if self.trees is None else str(self.trees),
            "depth": "" if self.depth is None else str(self.depth),
            "fam_top_k": str(self.fam_top_k),
        }
        path = Path(path)
        with path.open("w", encoding="utf-8") as f:
            cp.write(f)
        return path

    @classmethod
    def from_ini(cls, path: str | Path, overrides: dict | None = None) -> "PipelineConfig":
        cp = configparser.ConfigParser()
        read = cp.read(path)
        if not read:
            raise IoFailure(f"cannot read config {path}")

        def get(section, key, fallback):
            return cp.get(section, key, fallback=fallback)

        def get_opt_int(section, key):
            raw = cp.get(section, key, fallback="")
            return int(raw) if raw.strip() else None

        cfg = cls(
            mode=get("pipeline", "mode", "family"),
            strategy=get("pipeline", "strategy", "edge-multiset"),
            featurizer=get("pipeline", "featurizer", "markov"),
            seed=int(get("pipeline", "seed", "0")),
            workers=int(get("pipeline", "workers", "1")),
            max_path_depth=get_opt_int("pipeline", "max_path_depth"),
            path_budget=int(get("pipeline", "path_budget", "1000000")),
            cooccurrence=get("pipeline", "cooccurrence", "app"),
            packages=get("abstraction", "packages", "builtin"),
            classes=get("abstraction", "classes", "builtin"),
            split_android=get("abstraction", "split_android", "true").lower() == "true",
            adlibs=get("abstraction", "adlibs", ""),
            clustering=get("abstraction", "clustering", ""),
            pca_components=get_opt_int("pca", "components"),
            classifier=get("classifier", "kind", "random-forest"),
            trees=get_opt_int("classifier", "trees"),
            depth=get_opt_int("classifier", "depth"),
            fam_top_k=int(get("classifier", "fam_top_k", str(fam_mod.PACKAGE_TOP_K))),
        )
        for key, value in (overrides or {}).items():
            if value is not None:
                setattr(cfg, key, value)
        cfg.__post_init__()
        return cfg


def resolve_workers(config: PipelineConfig) -> int:
    env = os.environ.get(WORKERS_ENV)
    if env:
        return max(1, int(env))
    return max(1, config.workers)


# ---------------------------------------------------------------------------
# Featurization (worker-pool capable)

_WORKER_STATE: dict = {}


def _featurize_setup(config: PipelineConfig) -> dict:
    table = config.table()
    mode = config.mode_enum()
    state: dict = {"config": config, "table": table, "mode": mode}
    if config.featurizer == "markov":
        clustering = config.load_clustering_or_none()
        if mode is AbstractionMode.CLASS:
            if clustering is None:
                raise ApichainError(
                    "class-mode featurization needs a clustering file "
                    "(run cluster-classes first)"
                )
            state["label_map"] = clustering.label_map()
            state["states"] = clustering.label_space()
        else:
            state["label_map"] = None
            state["states"] = table.state_space(mode, for_featurization=True)
    else:
        state["ad_prefixes"] = config.ad_prefixes()
        state["states"] = table.state_space(mode, for_featurization=False)
    return state


def _init_worker(config: PipelineConfig) -> None:
    _WORKER_STATE.clear()
    _WORKER_STATE.update(_featurize_setup(config))


def _featurize_one(task: tuple[int, str, str, int | None]):
    idx, path, label, year = task
    st = _WORKER_STATE
    config: PipelineConfig = st["config"]
    try:
        graph = load_call_graph(path)
        if config.featurizer == "markov":
            counts = extract_transitions(
                graph,
                st["mode"],
                st["table"],
                strategy=config.strategy,
                max_depth=config.max_path_depth,
                path_budget=config.path_budget,
            )
            chain = build_chain(counts, st["table"], st["label_map"], st["states"])
            vector = chain.probabilities.reshape(-1)
        else:
            node_counts = node_label_counts(graph, st["mode"], st["table"], st["ad_prefixes"])
            profile = fam_mod.profile_app(node_counts, st["mode"], graph.app_id, label)
            vector = np.array(
                [profile.freq.get(s, 0.0) for s in st["states"]], dtype=np.float64
            )
        return (idx, graph.app_id, vector, None)
    except SKIPPABLE as exc:
        return (idx, Path(path).stem, None, str(exc))


@dataclass
class FeaturizeResult:
    out_path: Path
    log_path: Path
    featurized: int
    skipped: list[dict] = field(default_factory=list)


def cmd_featurize(
    manifest_path: str | Path, config: PipelineConfig, out_path: str | Path
) -> FeaturizeResult:
    """Turn every manifest entry into one feature vector; skip-and-record."""
    manifest = load_manifest(manifest_path)
    out_path = Path(out_path)
    tasks = [
        (i, str(e.path), e.label, e.year) for i, e in enumerate(manifest.entries)
    ]
    workers = resolve_workers(config)
    if workers > 1:
        with ProcessPoolExecutor(
            max_workers=workers, initializer=_init_worker, initargs=(config,)
        ) as pool:
            results = list(pool.map(_featurize_one, tasks, chunksize=8))
    else:
        _init_worker(config)
        results = [_featurize_one(t) for t in tasks]
    results.sort(key=lambda r: r[0])

    vectors, app_ids, labels, years, skipped = [], [], [], [], []
    for (idx, app_id, vector, error) in results:
        entry = manifest.entries[idx]
        if error is not None:
            skipped.append({"index": idx, "app_id": app_id, "path": str(entry.path), "error": error})
            continue
        vectors.append(vector)
        app_ids.append(app_id)
        labels.append(entry.label)
        years.append(entry.year)
    if not vectors:
        raise ApichainError("no app could be featurized")
    matrix = np.vstack(vectors)
    st = _featurize_setup(config)
    save_feature_matrix(
        out_path,
        matrix,
        app_ids,
        labels,
        years,
        config.mode_enum(),
        st["states"],
        featurizer=config.featurizer,
    )
    log_path = out_path.with_name(out_path.name + ".log.json")
    log = {
        "total": len(manifest.entries),
        "featurized": len(app_ids),
        "skipped": skipped,
    }
    log_path.write_text(json.dumps(log, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return FeaturizeResult(out_path, log_path, len(app_ids), skipped)


# ---------------------------------------------------------------------------
# Training / prediction / evaluation


def _experiment_name(verb: str, config: PipelineConfig) -> str:
    return (
        f"{verb} mode={config.mode} featurizer={config.featurizer} "
        f"classifier={config.classifier}"
    )


def _make_fit_predict(config: PipelineConfig):
    """fit_predict closure applying FAM selection / PCA inside each split."""

    mode = config.mode_enum()
    states: tuple[str, ...] | None = None
    if config.featurizer == "fam":
        states = _featurize_setup(config)["states"]

    def fit_predict(train_X, train_labels, test_X):
        tr, te = train_X, test_X
        if config.featurizer == "fam":
            feature_set = _select_on_matrix(tr, train_labels, states, mode, config.fam_top_k)
            cols = [states.index(s) for s in feature_set.selected]
            tr, te = tr[:, cols], te[:, cols]
        if config.pca_components is not None:
            pca = fit_pca(tr, config.pca_components)
            tr, te = transform_pca(pca, tr), transform_pca(pca, te)
        clf = make_classifier(config.classifier, config.forest_config())
        clf.fit(tr, train_labels)
        return clf.predict(te)

    return fit_predict


def _select_on_matrix(matrix, labels, states, mode, top_k) -> fam_mod.FamFeatureSet:
    profiles = []
    for i, lab in enumerate(labels):
        freq = {states[j]: float(v) for j, v in enumerate(matrix[i]) if v}
        profiles.append(fam_mod.FrequencyProfile(f"app{i}", mode, freq, lab))
    return fam_mod.select_features(profiles, mode, top_k=top_k)


def cmd_train(
    features_path: str | Path, config: PipelineConfig, model_out: str | Path
) -> Path:
    matrix, meta = load_feature_matrix(features_path)
    labels = meta["labels"]
    mode = config.mode_enum()
    fam_set = None
    pca = None
    states = None
    X = matrix
    if meta.get("featurizer", "markov") == "fam":
        states = _featurize_setup(config)["states"]
        if hash_states(states) != meta["state_list_hash"]:
            raise DimensionMismatch("feature file state list does not match config")
        fam_set = _select_on_matrix(X, labels, states, mode, config.fam_top_k)
        cols = [states.index(s) for s in fam_set.selected]
        X = X[:, cols]
    if config.pca_components is not None:
        pca = fit_pca(X, config.pca_components)
        X = transform_pca(pca, X)
    clf = make_classifier(config.classifier, config.forest_config())
    clf.fit(X, labels)
    header = {
        "kind": config.classifier,
        "config": asdict(config.forest_config()) if config.classifier == "random-forest" else {},
        "seed": config.seed,
        "feature_dimension": int(matrix.shape[1]),
        "state_list_hash": meta["state_list_hash"],
        "featurizer": meta.get("featurizer", "markov"),
        "mode": meta["mode"],
        "pca_components": config.pca_components,
        "fam_selected": list(fam_set.selected) if fam_set else None,
    }
    bundle = {"model": clf, "pca": pca, "fam": fam_set, "states": states}
    return save_model(model_out, bundle, header)


def _apply_bundle_transforms(header: dict, bundle: dict, matrix: np.ndarray, meta: dict) -> np.ndarray:
    if header["state_list_hash"] != meta["state_list_hash"]:
        raise DimensionMismatch(
            "feature file state list does not match the model "
            f"({meta['state_list_hash'][:12]} vs {header['state_list_hash'][:12]})"
        )
    X = matrix
    fam_set = bundle.get("fam")
    if fam_set is not None:
        # The hash guard above pins this matrix to the training state list,
        # so the column positions recorded at train time still apply.
        states = bundle["states"]
        cols = [states.index(s) for s in fam_set.selected]
        X = X[:, cols]
    pca = bundle.get("pca")
    if pca is not None:
        X = transform_pca(pca, X)
    return X


def cmd_predict(
    model_path: str | Path, features_path: str | Path, out_path: str | Path
) -> Path:
    header, bundle = load_model(model_path)
    matrix, meta = load_feature_matrix(features_path)
    X = _apply_bundle_transforms(header, bundle, matrix, meta)
    predicted = bundle["model"].predict(X)
    out_path = Path(out_path)
    with out_path.open("w", encoding="utf-8", newline="") as f:
        f.write("app_id,predicted\n")
        for app_id, pred in zip(meta["app_ids"], predicted):
            f.write(f"{app_id},{pred}\n")
    return out_path


def cmd_eval(
    model_path: str | Path,
    features_path: str | Path,
    config: PipelineConfig,
    out_base: str | Path,
) -> tuple[Path, Path]:
    header, bundle = load_model(model_path)
    matrix, meta = load_feature_matrix(features_path)
    X = _apply_bundle_transforms(header, bundle, matrix, meta)
    report = evaluate(bundle["model"], X, meta["labels"], _experiment_name("eval", config))
    return write_reports(out_base, [report])


def cmd_crossval(
    features_path: str | Path,
    config: PipelineConfig,
    out_base: str | Path,
    folds: int = 10,
) -> tuple[Path, Path]:
    matrix, meta = load_feature_matrix(features_path)
    name = _experiment_name("crossval", config)
    try:
        report = cross_validate(
            matrix,
            meta["labels"],
            _make_fit_predict(config),
            folds=folds,
            seed=config.seed,
            experiment=name,
        )
    except NoDiscriminativeFeatures as exc:
        return write_unavailable_report(out_base, name, str(exc))
    return write_reports(out_base, [report])


def cmd_temporal(
    features_path: str | Path, config: PipelineConfig, out_base: str | Path
) -> tuple[Path, Path]:
    matrix, meta = load_feature_matrix(features_path)
    name = _experiment_name("temporal", config)
    try:
        reports = temporal_evaluate(
            matrix, meta["labels"], meta["years"], _make_fit_predict(config), experiment=name
        )
    except NoDiscriminativeFeatures as exc:
        return write_unavailable_report(out_base, name, str(exc))
    return write_reports(out_base, reports)


def cmd_cluster_classes(
    manifest_path: str | Path,
    config: PipelineConfig,
    out_path: str | Path,
    k: int = 400,
    seed: int | None = None,
) -> tuple[Path, list[dict]]:
    """Build and persist the class clustering used by class-mode runs."""
    manifest = load_manifest(manifest_path)
    table = config.table()
    sequences = []
    skipped = []
    for i, entry in enumerate(manifest.entries):
        try:
            graph = load_call_graph(entry.path)
            if config.cooccurrence == "entry":
                sequences.extend(entry_label_sets(graph, AbstractionMode.CLASS, table))
            elif config.cooccurrence == "path":
                sequences.extend(
                    path_label_sets(
                        graph,
                        AbstractionMode.CLASS,
                        table,
                        max_depth=config.max_path_depth,
                        path_budget=config.path_budget,
                    )
                )
            else:
                sequences.append(
                    extract_transitions(
                        graph,
                        AbstractionMode.CLASS,
                        table,
                        strategy=config.strategy,
                        max_depth=config.max_path_depth,
                        path_budget=config.path_budget,
                    )
                )
        except SKIPPABLE as exc:
            skipped.append({"index": i, "path": str(entry.path), "error": str(exc)})
    if not sequences:
        raise ApichainError("no graph could be read for clustering")
    clustering = cluster_classes(
        sequences, table, k=k, seed=config.seed if seed is None else seed
    )
    return save_clustering(out_path, clustering), skipped
