"""Finite sections ``P_n A P_n`` of Cuntz algebra elements as dense matrices.

Matrices act on the first ``n`` standard basis vectors of l^2(Z+). The
generator ``S_i`` sends ``e_r`` to ``e_{rN+i}``, so every word section is a
partial permutation matrix. Word sections are formed as products of the
generator sections, which equals ``P_n S_l S_m^* P_n`` exactly because
``P_n S_j = P_n S_j P_n`` and ``S_j^* P_n = P_n S_j^* P_n``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Optional

import numpy as np
import scipy.sparse as sp

from .symbolic import Element, MultiIndex, Word, multi_index_value, sharp_map

#: Largest section size built without an explicit override.
MAX_SIZE = 4096


class SizeLimitError(ValueError):
    pass


def _check_size(n: int, max_size: Optional[int]):
    if n < 1:
        raise ValueError(f"section size must be >= 1, got {n}")
    limit = MAX_SIZE if max_size is None else max_size
    if n > limit:
        raise SizeLimitError(f"section size {n} exceeds the configured limit {limit}")


@dataclass(frozen=True)
class SizeSchedule:
    """Sequence of truncation sizes.

    ``powers`` yields ``N^start, ..., N^max_power``; ``arithmetic`` yields
    ``start, start+step, ...`` up to ``N^max_power``; ``custom`` yields
    ``sizes`` verbatim.
    """

    N: int = 2
    mode: str = "powers"
    max_power: int = 8
    start: int = 0
    step: int = 1
    sizes: tuple[int, ...] = field(default_factory=tuple)

    def __post_init__(self):
        if self.mode not in ("powers", "arithmetic", "custom"):
            raise ValueError(f"unknown schedule mode {self.mode!r}")
        if self.mode == "custom":
            if not self.sizes or any(int(s) < 1 for s in self.sizes):
                raise ValueError("custom schedule needs positive sizes")
            object.__setattr__(self, "sizes", tuple(int(s) for s in self.sizes))

    def __iter__(self):
        return iter(self.values())

    def values(self) -> list[int]:
        if self.mode == "powers":
            return [self.N**p for p in range(self.start, self.max_power + 1)]
        if self.mode == "arithmetic":
            return list(range(max(self.start, 1), self.N**self.max_power + 1, self.step))
        return list(self.sizes)


@lru_cache(maxsize=512)
def _generator_sparse(N: int, i: int, n: int) -> sp.csr_matrix:
    cols = np.arange(n)
    rows = cols * N + i
    keep = rows < n
    data = np.ones(int(keep.sum()))
    return sp.csr_matrix((data, (rows[keep], cols[keep])), shape=(n, n))


def generator_matrix(N: int, i: int, n: int) -> np.ndarray:
    """Dense ``n x n`` section of the generator ``S_i``."""
    if not 0 <= i < N:
        raise ValueError(f"digit {i} out of range for N={N}")
    _check_size(n, None)
    return _generator_sparse(N, i, n).toarray()


def _word_index_map(word: Word, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Row of the single nonzero in each column (``-1`` if none) and the column mask.

    The product of generator sections acts on ``e_c`` factor by factor from
    the right, each factor being truncated to the first ``n`` coordinates;
    composing these partial maps gives the same 0/1 matrix as multiplying
    the section matrices.
    """
    N = word.N
    r = np.arange(n)
    alive = np.ones(n, dtype=bool)
    # S_m^* = S_{m_k}^* ... S_{m_1}^*: the factor for m_1 acts first
    for d in word.right.digits:
        alive &= r % N == d
        r = (r - d) // N
    for d in reversed(word.left.digits):
        r = r * N + d
        alive &= r < n
    return np.where(alive, r, -1), alive


def word_sparse(word: Word, n: int, max_size: Optional[int] = None) -> sp.csc_matrix:
    """Sparse section of ``S_l S_m^*`` (CSC, at most one nonzero per column)."""
    _check_size(n, max_size)
    rows, alive = _word_index_map(word, n)
    indptr = np.concatenate(([0], np.cumsum(alive)))
    return sp.csc_matrix((np.ones(int(indptr[-1])), rows[alive], indptr), shape=(n, n))


def word_matrix(word: Word, n: int, max_size: Optional[int] = None) -> np.ndarray:
    """Product of generator sections for ``S_l S_m^*``."""
    _check_size(n, max_size)
    return word_sparse(word, n).toarray()


def element_sparse(a: Element, n: int, max_size: Optional[int] = None) -> sp.csr_matrix:
    _check_size(n, max_size)
    dtype = float if a.is_real() else complex
    rows, cols, data = [], [], []
    for word, c in a.terms.items():
        r, alive = _word_index_map(word, n)
        rows.append(r[alive])
        cols.append(np.flatnonzero(alive))
        data.append(np.full(int(alive.sum()), c.real if dtype is float else c, dtype=dtype))
    if not rows:
        return sp.csr_matrix((n, n), dtype=dtype)
    # duplicate positions are summed on conversion
    return sp.coo_matrix(
        (np.concatenate(data), (np.concatenate(rows), np.concatenate(cols))), shape=(n, n)
    ).tocsr()


def element_matrix(
    a: Element,
    n: int,
    K: Optional[np.ndarray] = None,
    max_size: Optional[int] = None,
) -> np.ndarray:
    """Section ``P_n A P_n`` (plus the top-left corner of ``K`` when given).

    The result is real when every coefficient of ``a`` and ``K`` is real.
    """
    mat = element_sparse(a, n, max_size).toarray()
    if K is not None:
        K = np.asarray(K)
        if np.iscomplexobj(K) and not np.iscomplexobj(mat):
            mat = mat.astype(complex)
        d = min(K.shape[0], n)
        mat[:d, :d] += K[:d, :d]
    return mat


def projection_matrix(m: int, n: int) -> np.ndarray:
    """``P_m`` restricted to the first ``n`` coordinates; ``P_0 = 0``."""
    if m < 0:
        raise ValueError("projection rank must be non-negative")
    diag = np.zeros(n)
    diag[: min(m, n)] = 1.0
    return np.diag(diag)


def reflection_matrix(n: int) -> np.ndarray:
    """``R_n``: reverses the first ``n`` coordinates."""
    _check_size(n, None)
    return np.eye(n)[::-1].copy()


def initial_projection_size(i: MultiIndex, n: int) -> int:
    """Rank ``m`` with ``P_n S_i^* P_n S_i P_n = P_m``.

    ``m = ceil((n - v) / N^k)`` clamped at zero, ``v`` the N-adic value of
    ``i`` and ``k = |i|``.
    """
    if len(i) == 0:
        raise ValueError("initial projection needs a non-empty multi-index")
    k = len(i)
    v = multi_index_value(i)
    # ceil for integers without floating point
    m = -((v - n) // i.N**k)
    return max(0, m)


def initial_projection_matrix(i: MultiIndex, n: int) -> np.ndarray:
    """``P_n S_i^* P_n S_i P_n`` as an explicit product of generator sections."""
    T = word_matrix(Word(i, MultiIndex(i.N)), n)
    return T.T @ T


def reflected_section(a: Element, n: int) -> np.ndarray:
    """``R_n A_n R_n``; conjugation by the reversal permutes rows and columns."""
    return element_matrix(a, n)[::-1, ::-1].copy()


def reflection_limit_window(w: Word, n: int) -> tuple[np.ndarray, int]:
    """Reflected section of a balanced word and its exact-agreement window.

    Returns ``(R_n P_n w P_n R_n, n - N^k)`` with ``k = |l| = |m|``. On rows
    and columns below the window the reflected section coincides with the
    section of ``w^sharp``; an AssertionError is raised otherwise.
    """
    if not w.is_balanced:
        raise ValueError("reflection limit exists only for balanced words")
    a = Element.from_word(w)
    reflected = reflected_section(a, n)
    window = max(0, n - w.N ** len(w.left))
    expected = element_matrix(sharp_map(a), n)
    if not np.array_equal(reflected[:window, :window], expected[:window, :window]):
        raise AssertionError(f"reflection limit mismatch for {w} at n={n}")
    return reflected, window


def is_power_of(N: int, n: int) -> bool:
    if n < 1:
        return False
    while n % N == 0:
        n //= N
    return n == 1


def power_exponent(N: int, n: int) -> int:
    if not is_power_of(N, n):
        raise ValueError(f"{n} is not a power of {N}")
    return round(math.log(n, N)) if n > 1 else 0


def fractal_witness(N: int, n: int, power: int = 1) -> np.ndarray:
    """``P_n (S_0^*)^k P_n S_0^k P_n - P_n (S_1^*)^k P_n S_1^k P_n`` with ``k = power``."""
    i0 = MultiIndex(N, (0,) * power)
    i1 = MultiIndex(N, (1,) * power)
    return initial_projection_matrix(i0, n) - initial_projection_matrix(i1, n)


def sum_of_range_projections(N: int, n: int) -> np.ndarray:
    """``sum_i T_i T_i^*`` for the generator sections ``T_i``."""
    total = np.zeros((n, n))
    for i in range(N):
        T = generator_matrix(N, i, n)
        total += T @ T.T
    return total

