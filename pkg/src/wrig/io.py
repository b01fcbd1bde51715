"""Plain-text file formats for graphs, weights, manifests and tables.

Vertex ids are 0-based in memory and 1-based on disk.
"""
from __future__ import annotations

import csv
import json
import os

import numpy as np

from . import __version__
from .graphgen import BipartiteGraph, Graph

MANIFEST_FORMAT = 1


def write_edge_list(path, g: Graph) -> None:
    """One ``u<TAB>v`` line per edge, ``u < v``, 1-based, sorted."""
    with open(path, "w") as fh:
        if g.edge_count:
            np.savetxt(fh, g.edges + 1, fmt="%d", delimiter="\t")


def read_edge_list(path, n: int) -> Graph:
    with open(path) as fh:
        rows = [line.split() for line in fh if line.strip()]
    edges = np.array(rows, dtype=np.int64).reshape(-1, 2) - 1
    return Graph.from_edges(n, edges)


def write_memberships(path, b: BipartiteGraph) -> None:
    """One line per group (empty groups give empty lines), 1-based vertex ids."""
    bounds = np.searchsorted(b.group_ids, np.arange(b.m + 1))
    ids = (b.members + 1).astype(str)
    with open(path, "w") as fh:
        for a in range(b.m):
            fh.write(" ".join(ids[bounds[a]:bounds[a + 1]]))
            fh.write("\n")


def read_memberships(path, n: int) -> BipartiteGraph:
    with open(path) as fh:
        groups = [[int(v) - 1 for v in line.split()] for line in fh.read().split("\n")[:-1]]
    return BipartiteGraph.from_memberships(n, groups)


def write_weights(path, w) -> None:
    """Weights as text, one per line, or as a binary column if ``path`` ends in ``.npy``."""
    w = np.asarray(w, dtype=float)
    if str(path).endswith(".npy"):
        np.save(path, w)
    else:
        np.savetxt(path, w, fmt="%.17g")


def read_weights(path) -> np.ndarray:
    if str(path).endswith(".npy"):
        return np.load(path)
    return np.atleast_1d(np.loadtxt(path, dtype=float))


def write_json(path, obj) -> None:
    with open(path, "w") as fh:
        json.dump(obj, fh, indent=2, sort_keys=True)
        fh.write("\n")


def read_json(path) -> dict:
    with open(path) as fh:
        return json.load(fh)


def manifest(command: str, params: dict, seed, files: dict | None = None, **extra) -> dict:
    out = {"format_version": MANIFEST_FORMAT, "library_version": __version__,
           "command": command, "params": params, "seed": seed, "files": files or {}}
    out.update(extra)
    return out


def read_manifest(path) -> dict:
    m = read_json(path)
    if m.get("format_version") != MANIFEST_FORMAT:
        raise ValueError(f"unsupported manifest format {m.get('format_version')!r}")
    return m


def write_table(path, header, rows) -> None:
    """CSV with floats at 15 significant digits."""
    with open(path, "w", newline="") as fh:
        wr = csv.writer(fh, lineterminator="\n")
        wr.writerow(header)
        for r in rows:
            wr.writerow([f"{v:.15g}" if isinstance(v, float) else v for v in r])


def read_table(path):
    with open(path, newline="") as fh:
        rd = csv.reader(fh)
        header = next(rd)
        return header, [[float(v) for v in r] for r in rd]


def ensure_dir(path) -> str:
    os.makedirs(path, exist_ok=True)
    return str(path)
