"""Sections of Cuntz elements plus finitely supported compact perturbations."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .sections import SizeSchedule, element_matrix
from .spectral import (
    DEFAULT_TOL,
    SpectralReport,
    singular_values,
    stability_verdict,
    symbol_sigma_min_trend,
)
from .symbolic import Element

#: ``sigma_alpha`` must end below this fraction of its value at the first size.
FREDHOLM_DECAY = 0.5


@dataclass(frozen=True)
class CompactBlock:
    """Operator supported on the leading ``d x d`` corner."""

    entries: np.ndarray

    def __post_init__(self):
        K = np.asarray(self.entries)
        if K.ndim != 2 or K.shape[0] != K.shape[1]:
            raise ValueError("compact block must be square")
        object.__setattr__(self, "entries", K)

    @property
    def d(self) -> int:
        return self.entries.shape[0]

    @classmethod
    def zero(cls) -> "CompactBlock":
        return cls(np.zeros((0, 0)))

    @classmethod
    def unit(cls, r: int, c: int, value: complex = 1.0) -> "CompactBlock":
        d = max(r, c) + 1
        K = np.zeros((d, d), dtype=complex if np.iscomplexobj(value) else float)
        K[r, c] = value
        return cls(K)

    def embed(self, n: int) -> np.ndarray:
        out = np.zeros((n, n), dtype=self.entries.dtype)
        d = min(self.d, n)
        out[:d, :d] = self.entries[:d, :d]
        return out

    def __add__(self, other: "CompactBlock") -> "CompactBlock":
        d = max(self.d, other.d)
        return CompactBlock(self.embed(d) + other.embed(d))

    def __neg__(self):
        return CompactBlock(-self.entries)


@dataclass(frozen=True)
class ExtendedSequenceSpec:
    """Sequence ``P_n (A + K) P_n`` with ``A`` and ``K`` kept apart."""

    a: Element
    K: CompactBlock = field(default_factory=CompactBlock.zero)
    schedule: Optional[SizeSchedule] = None

    def sizes(self) -> list[int]:
        return (self.schedule or SizeSchedule(N=self.a.N)).values()


def extended_section_matrix(spec: ExtendedSequenceSpec, n: int) -> np.ndarray:
    K = spec.K.entries if spec.K.d else None
    return element_matrix(spec.a, n, K)


@dataclass
class TwoSymbolReport:
    verdict: str
    causes: list[str]
    sections: SpectralReport
    symbol: SpectralReport

    def to_dict(self) -> dict:
        return {
            "verdict": self.verdict,
            "causes": self.causes,
            "sections": self.sections.to_dict(),
            "symbol": self.symbol.to_dict(),
        }


def two_symbol_stability_verdict(spec: ExtendedSequenceSpec, tol: float = DEFAULT_TOL) -> TwoSymbolReport:
    """Stability from the sections of ``A + K`` and the symbol ``Psi(A^sharp)``.

    The compact part does not enter the symbol. ``causes`` names the failing
    side: ``W_tilde`` when the symbol trend is not stable, otherwise ``W``
    when only the section trend fails.
    """
    schedule = spec.schedule or SizeSchedule(N=spec.a.N)
    K = spec.K.entries if spec.K.d else None
    sections = stability_verdict(spec.a, K, schedule, tol)
    symbol = symbol_sigma_min_trend(spec.a, schedule, tol)
    causes = []
    if symbol.verdict != "stable":
        causes.append("W_tilde")
    elif sections.verdict != "stable":
        causes.append("W")
    if not causes:
        verdict = "stable"
    elif "unstable" in (sections.verdict, symbol.verdict):
        verdict = "unstable"
    else:
        verdict = "inconclusive"
    return TwoSymbolReport(verdict, causes, sections, symbol)


@dataclass
class FredholmReport:
    alpha: Optional[int]
    sizes: list[int]
    sigma: list[list[float]]
    tol: float
    floor: float


def fredholm_analysis(
    spec: ExtendedSequenceSpec,
    k_max: int,
    tol: float = DEFAULT_TOL,
    floor: Optional[float] = None,
) -> tuple[Optional[int], FredholmReport]:
    """Estimate ``dim ker W(a)`` from the split in the leading singular values.

    ``sigma_k`` vanishes when at the largest size it is below ``tol`` and
    either below ``FREDHOLM_DECAY`` times its first value or already below
    ``tol`` at the first size. ``alpha`` is the count of leading vanishing
    values provided ``sigma_{alpha+1}`` stays above ``floor`` (default
    ``sqrt(tol)``) over the last half of the sizes; otherwise None.
    Sizes smaller than ``k_max + 1`` are skipped.
    """
    if k_max < 1:
        raise ValueError("k_max must be >= 1")
    floor = np.sqrt(tol) if floor is None else floor
    all_sizes = spec.sizes()
    if k_max + 1 > max(all_sizes):
        raise ValueError(f"k_max={k_max} exceeds the largest matrix size {max(all_sizes)}")
    sizes = [n for n in all_sizes if n >= k_max + 1]
    if len(sizes) < 2:
        raise ValueError("need at least two sizes of dimension > k_max")
    table = np.array([singular_values(extended_section_matrix(spec, n))[: k_max + 1] for n in sizes])

    def vanishes(col):
        first, last = table[0, col], table[-1, col]
        return last < tol and (first < tol or last < FREDHOLM_DECAY * first)

    alpha = 0
    while alpha <= k_max and vanishes(alpha):
        alpha += 1
    tail = table[-max(2, (len(sizes) + 1) // 2):]
    result = None
    if alpha <= k_max and np.all(tail[:, alpha] > floor):
        result = alpha
    report = FredholmReport(result, sizes, table.tolist(), tol, float(floor))
    return result, report
