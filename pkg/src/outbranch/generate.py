"""Seeded instance generators."""

from __future__ import annotations

import random
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from .digraph import Digraph
from .formats import parse_instance

__all__ = ["KINDS", "InstanceSpec", "generate"]

KINDS = (
    "file",
    "gnp_digraph",
    "hamiltonian_gnp",
    "random_single_source_dag",
    "path",
    "cycle",
    "out_star",
)


@dataclass(frozen=True)
class InstanceSpec:
    kind: str
    n: int = 0
    p: float = 0.0
    seed: int = 0
    path: Optional[str] = None

    @property
    def instance_id(self) -> str:
        if self.kind == "file":
            return str(self.path)
        return f"{self.kind}-n{self.n}-p{self.p:g}-s{self.seed}"


def _gnp_arcs(n: int, p: float, rng: random.Random):
    return [(u, v) for u in range(n) for v in range(n) if u != v and rng.random() < p]


def generate(spec: InstanceSpec) -> Digraph:
    """Build the digraph described by ``spec``; identical specs give identical graphs."""
    if spec.kind not in KINDS:
        raise ValueError(f"unknown instance kind {spec.kind!r}")
    if spec.kind == "file":
        if spec.path is None:
            raise ValueError("file instances need a path")
        return parse_instance(Path(spec.path).read_text())
    n, p = spec.n, spec.p
    if n < 1:
        raise ValueError("n must be positive")
    if not 0.0 <= p <= 1.0:
        raise ValueError("p must lie in [0, 1]")
    rng = random.Random(spec.seed)

    if spec.kind == "path":
        return Digraph(n, [(i, i + 1) for i in range(n - 1)])
    if spec.kind == "cycle":
        return Digraph(n, [(i, (i + 1) % n) for i in range(n)] if n > 1 else [])
    if spec.kind == "out_star":
        return Digraph(n, [(0, i) for i in range(1, n)])
    if spec.kind == "gnp_digraph":
        return Digraph(n, _gnp_arcs(n, p, rng))
    if spec.kind == "hamiltonian_gnp":
        order = list(range(n))
        rng.shuffle(order)
        g = Digraph(n, _gnp_arcs(n, p, rng))
        if n > 1:
            for i in range(n):
                g.add_arc(order[i], order[(i + 1) % n])
        return g
    # random_single_source_dag: arcs go forward along a random order, and
    # every vertex but the first gets an earlier in-neighbour
    order = list(range(n))
    rng.shuffle(order)
    g = Digraph(n)
    for i in range(1, n):
        g.add_arc(order[rng.randrange(i)], order[i])
        for j in range(i):
            if rng.random() < p:
                g.add_arc(order[j], order[i])
    return g
