"""Instrumentation collected during a product.

Counters never influence results; passing ``report=None`` skips them.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field


@dataclass
class BackendCall:
    x: int
    y: int
    z: int
    nnz_a: int
    nnz_b: int

    @property
    def cap(self) -> int:
        return self.x * self.z


@dataclass
class RecoverCall:
    x: int
    z: int
    support: int
    levels: int
    functions: int
    max_cap: int
    hashing: str
    backend_caps: list = field(default_factory=list)


@dataclass
class RecursionStep:
    route: str
    depth: int
    x: int
    support: int
    child_nnz: int


@dataclass
class Report:
    backend_calls: list = field(default_factory=list)
    recover_calls: list = field(default_factory=list)
    recursion: list = field(default_factory=list)
    light_work: int = 0
    light_calls: int = 0
    heavy_calls: int = 0
    heavy_shapes: list = field(default_factory=list)
    fallbacks: int = 0
    transposed: int = 0
    ring_nodes: int = 0

    @property
    def max_cap(self) -> int:
        return max((c.cap for c in self.backend_calls), default=0)

    @property
    def max_depth(self) -> int:
        return max((r.depth for r in self.recursion), default=-1) + 1

    def summary(self) -> dict:
        return {
            "backend_calls": len(self.backend_calls),
            "max_xz_cap": self.max_cap,
            "recover_calls": len(self.recover_calls),
            "max_support": max((r.support for r in self.recover_calls), default=0),
            "max_family": max((r.functions for r in self.recover_calls), default=0),
            "recursion_depth": self.max_depth,
            "light_work": self.light_work,
            "light_calls": self.light_calls,
            "heavy_calls": self.heavy_calls,
            "enumeration_fallbacks": self.fallbacks,
            "transposed": self.transposed,
            "ring_nodes": self.ring_nodes,
        }

    def to_json(self, full: bool = False) -> str:
        data = self.summary()
        if full:
            data["backend"] = [asdict(c) for c in self.backend_calls]
            data["recover"] = [asdict(c) for c in self.recover_calls]
            data["recursion"] = [asdict(c) for c in self.recursion]
        return json.dumps(data, indent=2)
