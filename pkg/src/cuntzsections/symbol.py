"""Block-Toeplitz symbols and finite estimates of the lifting homomorphism.

The symbol of a word ``S_l S_m^*`` is the block matrix carrying that word
on the block diagonal ``i - j = |m| - |l|``. A truncation keeps ``B`` block
rows/columns and cuts each block to its leading ``M x M`` corner, which is
an exact compression of the infinite block operator.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional, Union

import numpy as np

from .sections import (
    element_matrix,
    generator_matrix,
    power_exponent,
    projection_matrix,
    reflection_matrix,
    word_matrix,
)
from .symbolic import Element, Word, sharp_map

Sequence = Callable[[int], np.ndarray]


@dataclass(frozen=True)
class SymbolTruncation:
    N: int
    B: int
    M: int
    entries: np.ndarray

    def block(self, i: int, j: int) -> np.ndarray:
        M = self.M
        return self.entries[i * M:(i + 1) * M, j * M:(j + 1) * M]

    @property
    def shape(self):
        return self.entries.shape


def symbol_truncation(a: Element, B: int, M: int, apply_sharp: bool = False) -> SymbolTruncation:
    """``(B*M) x (B*M)`` compression of ``Psi(a)`` (or ``Psi(a^sharp)``)."""
    if B < 1 or M < 1:
        raise ValueError("B and M must be positive")
    if apply_sharp:
        a = sharp_map(a)
    dtype = float if a.is_real() else complex
    out = np.zeros((B * M, B * M), dtype=dtype)
    for word, c in a.terms.items():
        offset = len(word.right) - len(word.left)
        block = word_matrix(word, M) * (c.real if dtype is float else c)
        for j in range(B):
            i = j + offset
            if 0 <= i < B:
                out[i * M:(i + 1) * M, j * M:(j + 1) * M] += block
    return SymbolTruncation(a.N, B, M, out)


def block_projection_matrix(k: int, B: int, M: int) -> np.ndarray:
    """``Pi_k``: the first ``min(k, B)`` diagonal blocks are identities."""
    if k < 0:
        raise ValueError("k must be non-negative")
    return projection_matrix(min(k, B) * M, B * M)


def _as_sequence(a: Union[Element, Sequence]) -> Sequence:
    if isinstance(a, Element):
        return lambda n: element_matrix(a, n)
    return a


def lifting_entry_estimate(
    a: Union[Element, Sequence],
    i: int,
    j: int,
    n: int,
    N: Optional[int] = None,
) -> np.ndarray:
    """Size-``n`` approximant of the block ``W_ij(a)`` of the lifting.

    ``a`` is an Element (its section sequence is used) or any callable
    returning the ``n x n`` member of a sequence; ``n`` must be a power of N.
    Computes ``(T_{N-1}^*)^i R_n E T_0^i A_n (T_0^*)^j E R_n T_{N-1}^j``
    with ``E = I - P_{n/N}`` and ``T_r`` the generator sections.
    """
    if i < 0 or j < 0:
        raise ValueError("block indices must be non-negative")
    if isinstance(a, Element):
        N = a.N
    elif N is None:
        raise ValueError("N is required when a is a matrix sequence")
    p = power_exponent(N, n)
    if p < 1:
        raise ValueError("lifting estimates need n = N^p with p >= 1")
    A = np.asarray(_as_sequence(a)(n))
    T0 = generator_matrix(N, 0, n)
    Tlast = generator_matrix(N, N - 1, n)
    E = np.eye(n) - projection_matrix(n // N, n)
    C = E @ np.linalg.matrix_power(T0, i) @ A @ np.linalg.matrix_power(T0.T, j) @ E
    R = reflection_matrix(n)
    return np.linalg.matrix_power(Tlast.T, i) @ (R @ C @ R) @ np.linalg.matrix_power(Tlast, j)


def lifting_window(N: int, i: int, j: int, n: int) -> int:
    """Leading index window on which a lifting estimate is exact.

    After reflection, ``E`` leaves the first ``n - n/N`` coordinates; the
    outer factors read row ``(p+1) N^i - 1`` and column ``(q+1) N^j - 1``.
    """
    w0 = n - n // N
    return min(w0 // N**i, w0 // N**j)


@dataclass(frozen=True)
class LiftingCheck:
    i: int
    j: int
    n: int
    window: int
    deviation: float
    match: bool


def lifting_vs_symbol_check(
    w: Union[Word, Element, Sequence],
    i: int,
    j: int,
    n: int,
    reference: Optional[np.ndarray] = None,
    N: Optional[int] = None,
    length: Optional[int] = None,
) -> LiftingCheck:
    """Compare a lifting estimate with block ``(i, j)`` of ``Psi(w^sharp)``.

    ``reference`` overrides the symbol block; it must be at least ``n x n``
    on the window and is used for sequences that are not sections of a
    single Element (``p_1`` for instance, whose lifting is ``I - Pi_1``).
    ``length`` bounds the word length of the sequence; it is taken from
    the Element when one is given and defaults to 1 otherwise.
    """
    if isinstance(w, Word):
        w = Element.from_word(w)
    if isinstance(w, Element):
        N = w.N
        length = w.max_length if length is None else length
    elif N is None:
        raise ValueError("N is required when w is a matrix sequence")
    length = 1 if length is None else length
    p = power_exponent(N, n)
    if p < i + j + length:
        raise ValueError(f"n = {N}^{p} too small: need exponent >= {i + j + length}")
    est = lifting_entry_estimate(w, i, j, n, N=N)
    if reference is None:
        if not isinstance(w, Element):
            raise ValueError("a reference block is required for matrix sequences")
        reference = symbol_truncation(w, max(i, j) + 1, n, apply_sharp=True).block(i, j)
    win = lifting_window(N, i, j, n)
    diff = est[:win, :win] - np.asarray(reference)[:win, :win]
    deviation = float(np.max(np.abs(diff))) if win else 0.0
    return LiftingCheck(i, j, n, win, deviation, deviation == 0.0)


def lifting_block_matrix(
    a: Union[Element, Sequence],
    B: int,
    n: int,
    N: Optional[int] = None,
) -> np.ndarray:
    """Assemble the ``B x B`` array of lifting estimates at size ``n``."""
    if isinstance(a, Element):
        N = a.N
    blocks = [[lifting_entry_estimate(a, i, j, n, N=N) for j in range(B)] for i in range(B)]
    return np.block(blocks)


def p1_sequence(N: int) -> Sequence:
    """Sequence ``T_0^* T_0`` of products of sections, representing ``p_1``."""

    def seq(n: int) -> np.ndarray:
        T0 = generator_matrix(N, 0, n)
        return T0.T @ T0

    return seq
