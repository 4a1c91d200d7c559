"""Parsing of fully-qualified API call signatures and their abstraction.

A call like ``java.lang.Throwable: java.lang.String getMessage()`` can be
abstracted at three granularities: its family (``java``), its package
(``java.lang``), or its class (``java.lang.Throwable``). Calls outside the
known API surface are labeled ``self-defined``, or ``obfuscated`` when the
identifiers look mangled.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import Enum
from importlib import resources
from pathlib import Path

from .errors import MalformedSignature

SELF_DEFINED = "self-defined"
OBFUSCATED = "obfuscated"

# Root package groups; most-specific prefix first.
FAMILY_PREFIXES: tuple[tuple[tuple[str, ...], str], ...] = (
    (("org", "w3c", "dom"), "dom"),
    (("com", "google"), "google"),
    (("org", "xml"), "xml"),
    (("org", "apache"), "apache"),
    (("org", "json"), "json"),
    (("android",), "android"),
    (("java",), "java"),
    (("javax",), "javax"),
    (("junit",), "junit"),
)

DEFAULT_FAMILY_EXCLUSIONS = frozenset({"json", "dom", "junit"})

# Leading segments ignored by the obfuscation test (generic TLD-ish roots).
_TLD_SEGMENTS = frozenset({"com", "org", "net", "io"})

_IDENT_RE = re.compile(r"^[^\s.]+$")


class AbstractionMode(Enum):
    FAMILY = "family"
    PACKAGE = "package"
    CLASS = "class"


@dataclass(frozen=True)
class ApiCallSignature:
    """A parsed fully-qualified method reference."""

    class_path: tuple[str, ...]
    method_name: str
    return_type: str | None
    param_types: tuple[str, ...] | None
    raw: str

    @property
    def class_fqn(self) -> str:
        return ".".join(self.class_path)

    def __str__(self) -> str:
        return self.raw


@dataclass(frozen=True)
class AbstractLabel:
    mode: AbstractionMode
    name: str

    def __str__(self) -> str:
        return self.name


def parse_signature(text: str) -> ApiCallSignature:
    """Parse ``<class-fqn>: [<return-type>] <method>([<params>])``.

    Accepts the Soot rendering wrapped in angle brackets as well as the
    bare return-type-free form. Raises MalformedSignature otherwise.
    """
    raw = text
    body = text.strip()
    if body.startswith("<") and body.endswith(">"):
        body = body[1:-1].strip()
    if ":" not in body:
        raise MalformedSignature(f"missing ':' separator: {raw!r}")
    class_part, _, rest = body.partition(":")
    class_part = class_part.strip()
    rest = rest.strip()
    if not class_part:
        raise MalformedSignature(f"empty class path: {raw!r}")
    segments = tuple(class_part.split("."))
    for seg in segments:
        if not _IDENT_RE.match(seg):
            raise MalformedSignature(f"bad class path segment {seg!r}: {raw!r}")
    if not rest:
        raise MalformedSignature(f"missing method: {raw!r}")

    param_types: tuple[str, ...] | None = None
    if rest.endswith(")"):
        open_idx = rest.find("(")
        if open_idx < 0:
            raise MalformedSignature(f"unbalanced parentheses: {raw!r}")
        params_src = rest[open_idx + 1 : -1]
        if "(" in params_src or ")" in params_src:
            raise MalformedSignature(f"unbalanced parentheses: {raw!r}")
        head = rest[:open_idx].strip()
        param_types = tuple(p.strip() for p in params_src.split(",") if p.strip())
    elif "(" in rest or ")" in rest:
        raise MalformedSignature(f"unbalanced parentheses: {raw!r}")
    else:
        head = rest

    head_parts = head.split()
    if len(head_parts) == 1:
        return_type, method = None, head_parts[0]
    elif len(head_parts) == 2:
        return_type, method = head_parts
    else:
        raise MalformedSignature(f"cannot split return type and method: {raw!r}")
    if not method:
        raise MalformedSignature(f"missing method name: {raw!r}")
    return ApiCallSignature(segments, method, return_type, param_types, raw)


def is_obfuscated(sig: ApiCallSignature, max_segment_len: int = 2) -> bool:
    """Heuristic for mangled identifiers on non-whitelisted calls.

    True when, after skipping one leading TLD-like segment, every class
    path segment is at most ``max_segment_len`` characters (ProGuard-style
    names such as com.fa.a.b.d).
    """
    segments = sig.class_path
    if len(segments) > 1 and segments[0] in _TLD_SEGMENTS:
        segments = segments[1:]
    return all(len(s) <= max_segment_len for s in segments)


def _outer_class_path(class_path: tuple[str, ...]) -> tuple[str, ...]:
    # Foo$Bar normalizes to Foo; whitelists enumerate outer classes only.
    out = []
    for seg in class_path:
        if "$" in seg:
            head = seg.split("$", 1)[0]
            if head:
                out.append(head)
            break
        out.append(seg)
    return tuple(out)


class AbstractionTable:
    """Immutable whitelists plus the rules mapping a signature to a label.

    Safe to share across workers: nothing mutates after construction.
    """

    def __init__(
        self,
        package_whitelist: set[str] | frozenset[str],
        class_whitelist: set[str] | frozenset[str],
        family_exclusions: frozenset[str] = DEFAULT_FAMILY_EXCLUSIONS,
        split_android_package: bool = True,
        obfuscation_segment_len: int = 2,
    ):
        overlap = {SELF_DEFINED, OBFUSCATED} & (set(package_whitelist) | set(class_whitelist))
        if overlap:
            raise ValueError(f"whitelist collides with synthetic labels: {overlap}")
        self.package_whitelist = frozenset(package_whitelist)
        self.class_whitelist = frozenset(class_whitelist)
        self.family_exclusions = frozenset(family_exclusions)
        self.split_android_package = split_android_package
        self.obfuscation_segment_len = obfuscation_segment_len
        self._package_paths = frozenset(tuple(p.split(".")) for p in self.package_whitelist)
        self._max_package_depth = max((len(p) for p in self._package_paths), default=0)
        self._space_cache: dict[tuple[AbstractionMode, bool], tuple[str, ...]] = {}

    @classmethod
    def load(
        cls,
        packages_path: str | Path,
        classes_path: str | Path,
        **kwargs,
    ) -> "AbstractionTable":
        return cls(
            package_whitelist=set(_read_name_list(Path(packages_path))),
            class_whitelist=set(_read_name_list(Path(classes_path))),
            **kwargs,
        )

    @classmethod
    def default(cls, **kwargs) -> "AbstractionTable":
        """Table backed by the bundled API-level-24 whitelists."""
        data = resources.files("apichain.data")
        with resources.as_file(data / "packages.txt") as pp, resources.as_file(data / "classes.txt") as cp:
            return cls.load(pp, cp, **kwargs)

    def longest_package_prefix(self, class_path: tuple[str, ...]) -> str | None:
        limit = min(len(class_path), self._max_package_depth)
        for depth in range(limit, 0, -1):
            cand = class_path[:depth]
            if cand in self._package_paths:
                return ".".join(cand)
        return None

    def state_space(self, mode: AbstractionMode, for_featurization: bool) -> tuple[str, ...]:
        """Canonical sorted label names for a mode (cached)."""
        key = (mode, for_featurization)
        if key not in self._space_cache:
            self._space_cache[key] = self._build_space(mode, for_featurization)
        return self._space_cache[key]

    def _build_space(self, mode: AbstractionMode, for_featurization: bool) -> tuple[str, ...]:
        if mode is AbstractionMode.FAMILY:
            names = {fam for _, fam in FAMILY_PREFIXES}
            if for_featurization:
                names -= self.family_exclusions
        elif mode is AbstractionMode.PACKAGE:
            names = set(self.package_whitelist)
            if self.split_android_package and "android" in names:
                names.remove("android")
                names.update({"android.R", "android.Manifest"})
        else:
            names = set(self.class_whitelist)
        names.update({SELF_DEFINED, OBFUSCATED})
        return tuple(sorted(names))


def _read_name_list(path: Path) -> list[str]:
    names = []
    for line in path.read_text(encoding="utf-8").splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            names.append(line)
    return names


def _family_of(class_path: tuple[str, ...]) -> str | None:
    for prefix, family in FAMILY_PREFIXES:
        if class_path[: len(prefix)] == prefix:
            return family
    return None


def _fallback_label(sig: ApiCallSignature, table: AbstractionTable) -> str:
    if is_obfuscated(sig, table.obfuscation_segment_len):
        return OBFUSCATED
    return SELF_DEFINED


def abstract_call(
    sig: ApiCallSignature, mode: AbstractionMode, table: AbstractionTable
) -> AbstractLabel:
    """Abstract one call to its family/package/class label.

    Total over valid signatures: anything outside the whitelists comes back
    as self-defined or obfuscated.
    """
    outer = _outer_class_path(sig.class_path)
    if mode is AbstractionMode.FAMILY:
        family = _family_of(outer)
        return AbstractLabel(mode, family if family else _fallback_label(sig, table))

    if mode is AbstractionMode.PACKAGE:
        if table.split_android_package and len(outer) >= 2 and outer[0] == "android":
            if outer[1] == "R":
                return AbstractLabel(mode, "android.R")
            if outer[1] == "Manifest":
                return AbstractLabel(mode, "android.Manifest")
        pkg = table.longest_package_prefix(outer)
        if pkg == "android" and table.split_android_package:
            # The bare android package was split away; treat stray matches
            # (self-defined code named android.*) as unknown.
            pkg = None
        return AbstractLabel(mode, pkg if pkg else _fallback_label(sig, table))

    fqn = ".".join(outer)
    if fqn in table.class_whitelist:
        return AbstractLabel(mode, fqn)
    return AbstractLabel(mode, _fallback_label(sig, table))


def state_space(
    mode: AbstractionMode, table: AbstractionTable, for_featurization: bool
) -> list[AbstractLabel]:
    """Deterministic sorted label list spanning a mode's state space."""
    return [AbstractLabel(mode, n) for n in table.state_space(mode, for_featurization)]
