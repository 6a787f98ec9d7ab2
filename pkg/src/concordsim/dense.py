"""Dense multi-qudit operator helpers: embedding, local application, partial trace."""
from __future__ import annotations

from math import prod
from typing import Sequence

import numpy as np

from .exactnum import ExactMatrix

__all__ = ["embed_operator", "apply_left", "conjugate_local", "partial_trace", "product_vector"]


def _to_front(arr: np.ndarray, dims: Sequence[int], support: Sequence[int]) -> tuple[np.ndarray, list[int]]:
    """Reshape a (D, K) array to (d_support, rest * K) with support row axes first."""
    n = len(dims)
    K = arr.shape[1]
    t = arr.reshape(tuple(dims) + (K,))
    order = list(support) + [a for a in range(n) if a not in support] + [n]
    t = t.transpose(order)
    return t.reshape(prod(dims[j] for j in support), -1), order


def _from_front(arr: np.ndarray, dims: Sequence[int], order: list[int], K: int) -> np.ndarray:
    n = len(dims)
    shape = [dims[a] if a < n else K for a in order]
    t = arr.reshape(shape)
    inv = np.argsort(order)
    return t.transpose(inv).reshape(prod(dims), K)


def apply_left(op: ExactMatrix, support: Sequence[int], dims: Sequence[int], A: ExactMatrix) -> ExactMatrix:
    """(op on support, identity elsewhere) @ A."""
    re, order = _to_front(A.re, dims, support)
    im, _ = _to_front(A.im, dims, support)
    part = op @ ExactMatrix(re, im, A.den, reduce_=False)
    K = A.cols
    return ExactMatrix(_from_front(part.re, dims, order, K), _from_front(part.im, dims, order, K), part.den)


def conjugate_local(op: ExactMatrix, support: Sequence[int], dims: Sequence[int], A: ExactMatrix) -> ExactMatrix:
    """op A op^dagger with op acting on ``support``."""
    left = apply_left(op, support, dims, A)
    return apply_left(op, support, dims, left.dagger()).dagger()


def embed_operator(op: ExactMatrix, support: Sequence[int], dims: Sequence[int]) -> ExactMatrix:
    return apply_left(op, support, dims, ExactMatrix.identity(prod(dims)))


def partial_trace(A: ExactMatrix, keep: Sequence[int], dims: Sequence[int]) -> ExactMatrix:
    """Trace out every qudit not in ``keep`` (kept qudits stay in register order)."""
    n = len(dims)
    keep = sorted(keep)
    traced = [a for a in range(n) if a not in keep]
    dk = prod(dims[a] for a in keep) if keep else 1
    dt = prod(dims[a] for a in traced) if traced else 1
    order = keep + traced + [n + a for a in keep] + [n + a for a in traced]

    def reduce(arr):
        t = arr.reshape(tuple(dims) + tuple(dims)).transpose(order).reshape(dk, dt, dk, dt)
        out = np.empty((dk, dk), dtype=object)
        out.fill(0)
        for r in range(dt):
            out = out + t[:, r, :, r]
        return out

    return ExactMatrix(reduce(A.re), reduce(A.im), A.den)


def product_vector(vectors: Sequence[ExactMatrix]) -> ExactMatrix:
    return ExactMatrix.kron_all(list(vectors))
