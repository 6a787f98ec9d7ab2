"""Measurement specifications: per target qudit, a complete rank-1 projector basis."""
from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Sequence

from .circuit import _check_local_projectors, _matrix_from_json
from .errors import ParseError
from .exactnum import ExactMatrix

__all__ = ["MeasurementSpec", "parse_measure_spec", "computational_projectors"]


def computational_projectors(d: int) -> tuple[ExactMatrix, ...]:
    out = []
    for k in range(d):
        m = ExactMatrix.zeros(d)
        m.re[k, k] = 1
        out.append(m)
    return tuple(out)


@dataclass(frozen=True, eq=False)
class MeasurementSpec:
    targets: tuple[tuple[int, tuple[ExactMatrix, ...]], ...]

    def validate(self, dims: Sequence[int]) -> "MeasurementSpec":
        seen = set()
        for q, projs in self.targets:
            if not 0 <= q < len(dims):
                raise ValueError(f"measured qudit {q} outside register")
            if q in seen:
                raise ValueError(f"qudit {q} measured twice")
            seen.add(q)
            _check_local_projectors(q, dims[q], projs)
        return self

    @classmethod
    def computational(cls, qudits: Sequence[int], dims: Sequence[int]) -> "MeasurementSpec":
        return cls(tuple((q, computational_projectors(dims[q])) for q in qudits))

    @property
    def qudits(self) -> tuple[int, ...]:
        return tuple(q for q, _ in self.targets)


def parse_measure_spec(text: str, dims: Sequence[int]) -> MeasurementSpec:
    """``q:Z`` or ``q:FILE`` items, comma separated; FILE holds a JSON list of projectors."""
    targets = []
    for token in text.split(","):
        token = token.strip()
        q_text, sep, what = token.partition(":")
        if not sep or not q_text.strip().isdigit() or not what:
            raise ParseError(f"bad measurement token {token!r}")
        q = int(q_text)
        if q >= len(dims):
            raise ParseError(f"bad measurement token {token!r}: qudit out of range")
        if what == "Z":
            projs = computational_projectors(dims[q])
        else:
            try:
                with open(what) as fh:
                    obj = json.load(fh)
            except (OSError, json.JSONDecodeError) as e:
                raise ParseError(f"bad measurement token {token!r}: {e}") from None
            if not isinstance(obj, list):
                raise ParseError(f"bad measurement token {token!r}: expected a list of projectors")
            projs = tuple(_matrix_from_json(p, f"measurement basis {what}") for p in obj)
        targets.append((q, tuple(projs)))
    try:
        return MeasurementSpec(tuple(targets)).validate(dims)
    except ValueError as e:
        if isinstance(e, ParseError):
            raise
        raise ParseError(f"bad measurement spec {text!r}: {e}") from None
