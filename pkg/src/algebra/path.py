"""Piecewise-linear paths in A_r"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Sequence

from .cdnum import CdNum


@dataclass(frozen=True)
class Path:
    """
    Polyline γ: [0, 1] → A_r through ``nodes`` with uniform parameter
    speed per segment (each segment gets an equal share of [0, 1]).
    """

    nodes: tuple[CdNum, ...]

    def __post_init__(self):
        if len(self.nodes) < 2:
            raise ValueError(f"a path needs at least 2 nodes, got {len(self.nodes)}")
        level = max(node.level for node in self.nodes)
        promoted = tuple(node.promote(level) for node in self.nodes)
        for a, b in zip(promoted, promoted[1:]):
            if a == b:
                raise ValueError(f"consecutive path nodes must differ, got {a} twice")
        object.__setattr__(self, "nodes", promoted)

    @classmethod
    def straight(cls, start: CdNum, end: CdNum) -> "Path":
        return cls((start, end))

    @classmethod
    def polyline(cls, nodes: Sequence[CdNum]) -> "Path":
        return cls(tuple(nodes))

    @property
    def level(self) -> int:
        return self.nodes[0].level

    @property
    def start(self) -> CdNum:
        return self.nodes[0]

    @property
    def end(self) -> CdNum:
        return self.nodes[-1]

    @property
    def segment_count(self) -> int:
        return len(self.nodes) - 1

    def segments(self) -> Iterator[tuple[CdNum, CdNum]]:
        return zip(self.nodes, self.nodes[1:])

    def length(self) -> float:
        return sum(abs(b - a) for a, b in self.segments())

    def _locate(self, t: float) -> tuple[int, float]:
        if not 0.0 <= t <= 1.0:
            raise ValueError(f"path parameter must lie in [0, 1], got {t}")
        scaled = t * self.segment_count
        index = min(int(scaled), self.segment_count - 1)
        return index, scaled - index

    def point(self, t: float) -> CdNum:
        index, local = self._locate(t)
        a, b = self.nodes[index], self.nodes[index + 1]
        return a + (b - a) * local

    def derivative(self, t: float) -> CdNum:
        index, _ = self._locate(t)
        a, b = self.nodes[index], self.nodes[index + 1]
        return (b - a) * float(self.segment_count)

    def reversed(self) -> "Path":
        return Path(tuple(reversed(self.nodes)))
