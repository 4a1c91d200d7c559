"""Synthetic call-graph corpora with known class-conditional behavior.

Benign and malware apps are drawn from two ground-truth Markov chains
over the family-mode featurization states; a divergence knob controls how
far apart the two chains are (0 makes the classes indistinguishable) and
a drift knob moves the malware chain toward the benign one year by year,
giving the temporal protocol a known decay direction.
"""

from __future__ import annotations

import hashlib
import json
import string
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import InvalidSpec
from .signatures import (
    OBFUSCATED,
    SELF_DEFINED,
    AbstractionMode,
    AbstractionTable,
    FAMILY_PREFIXES,
)


@dataclass
class SynthSpec:
    name: str = "synth"
    apps_per_class: int = 50
    years: tuple[int, ...] = (2013,)
    nodes_min: int = 20
    nodes_max: int = 60
    divergence: float = 1.0
    drift: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if self.apps_per_class < 1:
            raise InvalidSpec("apps_per_class must be >= 1")
        if self.nodes_min < 2 or self.nodes_max < self.nodes_min:
            raise InvalidSpec("need nodes_max >= nodes_min >= 2")
        if not (0.0 <= self.divergence <= 1.0):
            raise InvalidSpec("divergence must be in [0, 1]")
        if self.drift < 0.0:
            raise InvalidSpec("drift must be >= 0")
        if not self.years:
            raise InvalidSpec("at least one year tag required")
        for y in self.years:
            if not (1000 <= int(y) <= 9999):
                raise InvalidSpec(f"year {y!r} is not 4-digit")


def _random_chain(rng: np.random.RandomState, n: int, alpha: float = 0.3) -> np.ndarray:
    return rng.dirichlet(np.full(n, alpha), size=n)


def _blend(a: np.ndarray, b: np.ndarray, w: float) -> np.ndarray:
    return (1.0 - w) * a + w * b


class _SignaturePool:
    """Deterministic sampling of signature text per abstract family state."""

    def __init__(self, table: AbstractionTable, rng: np.random.RandomState):
        self._rng = rng
        self._by_family: dict[str, list[str]] = {fam: [] for _, fam in FAMILY_PREFIXES}
        prefixes = [(p, fam) for p, fam in FAMILY_PREFIXES]
        for cls in sorted(table.class_whitelist):
            path = tuple(cls.split("."))
            for prefix, fam in prefixes:
                if path[: len(prefix)] == prefix:
                    self._by_family[fam].append(cls)
                    break

    def draw(self, state: str, node_index: int) -> str:
        rng = self._rng
        if state == SELF_DEFINED:
            vendor = f"vendor{rng.randint(1000):03d}"
            module = f"core{rng.randint(100):02d}"
            cls = f"com.{vendor}.{module}.Worker{rng.randint(100):02d}"
        elif state == OBFUSCATED:
            letters = string.ascii_lowercase
            segs = [letters[rng.randint(26)] for _ in range(3)]
            cls = "com." + ".".join(segs)
        else:
            pool = self._by_family[state]
            cls = pool[rng.randint(len(pool))]
        return f"{cls}: m{node_index}()"


def _write_app(
    path: Path,
    app_id: str,
    label: str,
    year: int,
    chain: np.ndarray,
    states: tuple[str, ...],
    n_nodes: int,
    pool: _SignaturePool,
    rng: np.random.RandomState,
) -> None:
    walk = [int(rng.randint(len(states)))]
    for _ in range(n_nodes - 1):
        walk.append(int(rng.choice(len(states), p=chain[walk[-1]])))
    sigs = [pool.draw(states[s], i) for i, s in enumerate(walk)]
    lines = [f"@app {app_id}", f"@label {label}", f"@year {year}"]
    for i in range(len(sigs) - 1):
        lines.append(f"{sigs[i]} -> {sigs[i + 1]}")
    path.write_text("\n".join(lines) + "\n", encoding="utf-8", newline="\n")


def generate_corpus(
    spec: SynthSpec, out_dir: str | Path, table: AbstractionTable | None = None
) -> Path:
    """Write graph files plus a manifest; byte-identical under a fixed seed."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    if table is None:
        table = AbstractionTable.default()
    states = table.state_space(AbstractionMode.FAMILY, for_featurization=True)
    rng = np.random.RandomState(spec.seed)
    benign_chain = _random_chain(rng, len(states))
    alt_chain = _random_chain(rng, len(states))
    malware_chain = _blend(benign_chain, alt_chain, spec.divergence)
    pool = _SignaturePool(table, rng)

    entries = []
    for year_idx, year in enumerate(spec.years):
        w = min(1.0, spec.drift * year_idx)
        year_malware = _blend(malware_chain, benign_chain, w)
        for label, chain in (("benign", benign_chain), ("malware", year_malware)):
            for i in range(spec.apps_per_class):
                app_id = f"{spec.name}_{label}_{year}_{i:04d}"
                n_nodes = int(rng.randint(spec.nodes_min, spec.nodes_max + 1))
                path = out_dir / f"{app_id}.edges"
                _write_app(path, app_id, label, int(year), chain, states, n_nodes, pool, rng)
                digest = hashlib.sha256(path.read_bytes()).hexdigest()
                entries.append(
                    {"path": path.name, "label": label, "year": int(year), "sha256": digest}
                )
    manifest = {"name": spec.name, "entries": entries}
    manifest_path = out_dir / "manifest.json"
    manifest_path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return manifest_path
