"""File formats: edge lists, label/cluster TSVs, run manifests.

Edge-list files hold one hyperedge per line.  Vertex labels are arbitrary
tokens separated by commas and/or whitespace; blank lines and lines whose
first non-blank character is ``#`` are skipped.  Labels are interned to
dense ids in order of first appearance.
"""

from __future__ import annotations

import hashlib
import json
import os
import re
import tempfile
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

from .hypergraph import Hypergraph, build

_SPLIT = re.compile(r"[,\s]+")


class FormatError(ValueError):
    pass


@dataclass
class LabeledHypergraph:
    """A hypergraph plus the external label of each vertex id."""

    hypergraph: Hypergraph
    labels: list[str]

    @property
    def index(self) -> dict[str, int]:
        return {lab: i for i, lab in enumerate(self.labels)}


def parse_edge_lines(
    lines: Iterable[str],
    allow_multi_inclusion: bool = False,
    dedupe: bool = False,
    universe: Sequence[str] = (),
    source: str = "<input>",
) -> LabeledHypergraph:
    """Parse edge-list text.

    ``universe`` pre-interns labels (e.g. isolated vertices) ahead of those
    found in the edges.  ``dedupe`` drops repeated hyperedges, comparing
    member multisets.
    """
    index: dict[str, int] = {}
    labels: list[str] = []
    for lab in universe:
        if lab not in index:
            index[lab] = len(labels)
            labels.append(lab)
    edges = []
    seen = set()
    for lineno, line in enumerate(lines, 1):
        text = line.strip()
        if not text or text.startswith("#"):
            continue
        tokens = [tok for tok in _SPLIT.split(text) if tok]
        edge = []
        for tok in tokens:
            if tok not in index:
                index[tok] = len(labels)
                labels.append(tok)
            edge.append(index[tok])
        if not allow_multi_inclusion and len(set(edge)) != len(edge):
            raise FormatError(f"{source}:{lineno}: vertex repeated within an edge")
        if dedupe:
            key = tuple(sorted(edge))
            if key in seen:
                continue
            seen.add(key)
        edges.append(edge)
    try:
        H = build(edges, allow_multi_inclusion=allow_multi_inclusion, n=len(labels))
    except ValueError as exc:
        raise FormatError(f"{source}: {exc}") from None
    return LabeledHypergraph(H, labels)


def read_edge_list(path, **kwargs) -> LabeledHypergraph:
    with open(path, encoding="utf-8") as fh:
        return parse_edge_lines(fh, source=str(path), **kwargs)


def format_edge_list(H: Hypergraph, labels: Sequence[str] | None = None) -> str:
    if labels is None:
        labels = [str(v) for v in range(H.n)]
    return "".join(",".join(labels[v] for v in e) + "\n" for e in H.edges)


def read_label_tsv(path) -> list[tuple[str, str]]:
    """Rows ``label<TAB>cluster`` (no header)."""
    rows = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            text = line.rstrip("\r\n")
            if not text.strip():
                continue
            parts = text.split("\t")
            if len(parts) != 2:
                raise FormatError(f"{path}:{lineno}: expected 'label<TAB>cluster'")
            rows.append((parts[0], parts[1]))
    return rows


def format_label_tsv(labels: Sequence[str], clusters: Sequence) -> str:
    return "".join(f"{lab}\t{c}\n" for lab, c in zip(labels, clusters))


def file_sha256(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


def write_outputs(files: dict[str, str]) -> None:
    """Write several text files so that either all of them appear or none.

    Contents are staged in temporary files next to their targets and renamed
    into place only after every one was written.
    """
    staged = []
    try:
        for target, text in files.items():
            target = Path(target)
            fd, tmp = tempfile.mkstemp(prefix=f".{target.name}.", dir=target.parent or ".")
            staged.append((tmp, target))
            with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
        for tmp, target in staged:
            os.replace(tmp, target)
        staged = []
    finally:
        for tmp, _ in staged:
            if os.path.exists(tmp):
                os.unlink(tmp)


def dumps_manifest(manifest: dict) -> str:
    return json.dumps(manifest, indent=2, sort_keys=True) + "\n"


def load_manifest(path) -> dict:
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)
