"""Call graph representation, file ingestion, and transition extraction.

Graphs arrive as edge-list or JSON files produced by an external static
analyzer; nodes are method signatures, edges are caller -> callee pairs
(a multiset: repeated call sites keep their multiplicity).
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path

from .errors import IoFailure, MalformedGraphFile, MalformedSignature, PathExplosion
from .signatures import (
    AbstractionMode,
    AbstractionTable,
    ApiCallSignature,
    abstract_call,
    parse_signature,
)

EDGE_SEPARATOR = " -> "

VALID_GROUND_TRUTH = ("benign", "malware", "unknown")


@dataclass
class CallGraph:
    """Directed multigraph of API call signatures. Immutable after load."""

    nodes: list[ApiCallSignature]
    edges: list[tuple[int, int]]
    app_id: str
    metadata: dict[str, str] = field(default_factory=dict)

    def __post_init__(self):
        if not self.app_id:
            raise ValueError("app_id must be non-empty")
        n = len(self.nodes)
        for u, v in self.edges:
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) out of range for {n} nodes")

    @property
    def label(self) -> str:
        return self.metadata.get("label", "unknown")

    @property
    def year(self) -> int | None:
        y = self.metadata.get("year")
        return int(y) if y else None


@dataclass
class TransitionCounts:
    """Occurrence counts O[j, k] of label k directly after label j."""

    mode: AbstractionMode
    counts: Counter

    def present_labels(self) -> set[str]:
        labels = set()
        for j, k in self.counts:
            labels.add(j)
            labels.add(k)
        return labels


def _node_key(sig: ApiCallSignature) -> tuple:
    # Identity ignores the raw text so equivalent renderings merge.
    return (sig.class_path, sig.method_name, sig.return_type, sig.param_types)


def load_call_graph(path: str | Path, format: str | None = None) -> CallGraph:
    """Load a graph file; format inferred from the extension when omitted."""
    path = Path(path)
    if format is None:
        format = "json" if path.suffix == ".json" else "edge-list"
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise IoFailure(f"cannot read {path}: {exc}") from exc
    if format == "json":
        return _parse_json_graph(text, path)
    if format == "edge-list":
        return _parse_edge_list(text, path)
    raise ValueError(f"unknown graph format {format!r}")


def _parse_edge_list(text: str, path: Path) -> CallGraph:
    app_id = path.stem
    metadata: dict[str, str] = {}
    nodes: list[ApiCallSignature] = []
    index: dict[tuple, int] = {}
    edges: list[tuple[int, int]] = []

    def intern(sig: ApiCallSignature) -> int:
        key = _node_key(sig)
        if key not in index:
            index[key] = len(nodes)
            nodes.append(sig)
        return index[key]

    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("@"):
            parts = line[1:].split(None, 1)
            if len(parts) != 2:
                raise MalformedGraphFile(f"{path}:{lineno}: bad header {line!r}")
            key, value = parts[0], parts[1].strip()
            if key == "app":
                app_id = value
            elif key in ("label", "year", "dataset"):
                metadata[key] = value
            else:
                raise MalformedGraphFile(f"{path}:{lineno}: unknown header @{key}")
            continue
        halves = line.split(EDGE_SEPARATOR)
        if len(halves) != 2:
            raise MalformedGraphFile(f"{path}:{lineno}: expected '<caller>{EDGE_SEPARATOR}<callee>'")
        try:
            caller = parse_signature(halves[0])
            callee = parse_signature(halves[1])
        except MalformedSignature as exc:
            raise MalformedSignature(f"{path}:{lineno}: {exc}") from exc
        edges.append((intern(caller), intern(callee)))

    if not nodes:
        raise MalformedGraphFile(f"{path}: no edges found")
    _check_metadata(metadata, path)
    return CallGraph(nodes, edges, app_id, metadata)


def _parse_json_graph(text: str, path: Path) -> CallGraph:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedGraphFile(f"{path}: invalid JSON ({exc})") from exc
    if not isinstance(doc, dict) or "nodes" not in doc:
        raise MalformedGraphFile(f"{path}: expected an object with 'nodes'")
    raw_nodes = doc.get("nodes") or []
    if not raw_nodes:
        raise MalformedGraphFile(f"{path}: empty node list")
    try:
        nodes = [parse_signature(s) for s in raw_nodes]
    except MalformedSignature as exc:
        raise MalformedSignature(f"{path}: {exc}") from exc
    edges = []
    for pair in doc.get("edges") or []:
        if not (isinstance(pair, (list, tuple)) and len(pair) == 2):
            raise MalformedGraphFile(f"{path}: bad edge entry {pair!r}")
        edges.append((int(pair[0]), int(pair[1])))
    metadata = {}
    for key in ("label", "year", "dataset"):
        if doc.get(key) is not None:
            metadata[key] = str(doc[key])
    _check_metadata(metadata, path)
    app_id = str(doc.get("app_id") or path.stem)
    try:
        return CallGraph(nodes, edges, app_id, metadata)
    except ValueError as exc:
        raise MalformedGraphFile(f"{path}: {exc}") from exc


def _check_metadata(metadata: dict[str, str], path: Path) -> None:
    label = metadata.get("label")
    if label is not None and label not in VALID_GROUND_TRUTH:
        raise MalformedGraphFile(f"{path}: label must be one of {VALID_GROUND_TRUTH}")
    year = metadata.get("year")
    if year is not None and not (len(year) == 4 and year.isdigit()):
        raise MalformedGraphFile(f"{path}: year must be a 4-digit string")


def entry_nodes(g: CallGraph) -> list[int]:
    """Indices of nodes with no incoming edges, ascending."""
    indeg = [0] * len(g.nodes)
    for _, v in g.edges:
        indeg[v] += 1
    return [i for i, d in enumerate(indeg) if d == 0]


def _abstract_nodes(g: CallGraph, mode: AbstractionMode, table: AbstractionTable) -> list[str]:
    return [abstract_call(sig, mode, table).name for sig in g.nodes]


def node_label_counts(
    g: CallGraph,
    mode: AbstractionMode,
    table: AbstractionTable,
    exclude_prefixes: tuple[str, ...] = (),
) -> Counter:
    """Abstracted-label counts over the graph's nodes.

    exclude_prefixes drops calls whose class FQN sits under any of the
    given package prefixes (ad-library removal).
    """
    counts: Counter = Counter()
    for sig in g.nodes:
        fqn = sig.class_fqn
        if any(fqn == p or fqn.startswith(p + ".") for p in exclude_prefixes):
            continue
        counts[abstract_call(sig, mode, table).name] += 1
    return counts


def extract_transitions(
    g: CallGraph,
    mode: AbstractionMode,
    table: AbstractionTable,
    strategy: str = "edge-multiset",
    max_depth: int | None = None,
    path_budget: int = 1_000_000,
) -> TransitionCounts:
    """Count abstracted-label transitions.

    edge-multiset counts every edge once (multiplicity preserved).
    path-enumeration walks simple paths depth-first from each entry node
    and counts each edge traversal; a graph with no entry nodes falls back
    to treating every node as an entry.
    """
    labels = _abstract_nodes(g, mode, table)
    counts: Counter = Counter()
    if strategy == "edge-multiset":
        for u, v in g.edges:
            counts[(labels[u], labels[v])] += 1
        return TransitionCounts(mode, counts)
    if strategy != "path-enumeration":
        raise ValueError(f"unknown strategy {strategy!r}")

    succ: list[list[int]] = [[] for _ in g.nodes]
    for u, v in g.edges:
        succ[u].append(v)
    for lst in succ:
        lst.sort()

    entries = entry_nodes(g) or list(range(len(g.nodes)))
    paths_done = 0
    on_path = [False] * len(g.nodes)

    for start in entries:
        # Frame: [node, next successor slot, extended?]; depth = edges so far.
        on_path[start] = True
        frames: list[list] = [[start, 0, False]]
        while frames:
            frame = frames[-1]
            node = frame[0]
            pushed = False
            if max_depth is None or len(frames) - 1 < max_depth:
                nbrs = succ[node]
                while frame[1] < len(nbrs):
                    nxt = nbrs[frame[1]]
                    frame[1] += 1
                    if on_path[nxt]:
                        continue
                    counts[(labels[node], labels[nxt])] += 1
                    frame[2] = True
                    on_path[nxt] = True
                    frames.append([nxt, 0, False])
                    pushed = True
                    break
            if pushed:
                continue
            if not frame[2]:
                paths_done += 1
                if paths_done > path_budget:
                    raise PathExplosion(f"more than {path_budget} paths enumerated")
            on_path[node] = False
            frames.pop()
    return TransitionCounts(mode, counts)


def path_label_sets(
    g: CallGraph,
    mode: AbstractionMode,
    table: AbstractionTable,
    max_depth: int | None = None,
    path_budget: int = 1_000_000,
) -> list[set[str]]:
    """Label set of every simple path from every entry node.

    One set per enumerated path (the finest co-occurrence granularity).
    Deterministic order: entries ascending, successors ascending.
    """
    labels = _abstract_nodes(g, mode, table)
    succ: list[list[int]] = [[] for _ in g.nodes]
    for u, v in g.edges:
        succ[u].append(v)
    for lst in succ:
        lst.sort()
    entries = entry_nodes(g) or list(range(len(g.nodes)))
    on_path = [False] * len(g.nodes)
    result: list[set[str]] = []
    for start in entries:
        on_path[start] = True
        frames: list[list] = [[start, 0, False]]
        while frames:
            frame = frames[-1]
            node = frame[0]
            pushed = False
            if max_depth is None or len(frames) - 1 < max_depth:
                nbrs = succ[node]
                while frame[1] < len(nbrs):
                    nxt = nbrs[frame[1]]
                    frame[1] += 1
                    if on_path[nxt]:
                        continue
                    frame[2] = True
                    on_path[nxt] = True
                    frames.append([nxt, 0, False])
                    pushed = True
                    break
            if pushed:
                continue
            if not frame[2]:
                result.append({labels[f[0]] for f in frames})
                if len(result) > path_budget:
                    raise PathExplosion(f"more than {path_budget} paths enumerated")
            on_path[node] = False
            frames.pop()
    return result


def entry_label_sets(
    g: CallGraph, mode: AbstractionMode, table: AbstractionTable
) -> list[set[str]]:
    """Abstracted labels reachable from each entry node (one set per entry).

    The entry-subtree sequence granularity for class co-occurrence; graphs
    without entry nodes contribute one set per node.
    """
    labels = _abstract_nodes(g, mode, table)
    succ: list[list[int]] = [[] for _ in g.nodes]
    for u, v in g.edges:
        succ[u].append(v)
    entries = entry_nodes(g) or list(range(len(g.nodes)))
    result = []
    for start in entries:
        seen = {start}
        stack = [start]
        while stack:
            node = stack.pop()
            for nxt in succ[node]:
                if nxt not in seen:
                    seen.add(nxt)
                    stack.append(nxt)
        result.append({labels[i] for i in seen})
    return result
