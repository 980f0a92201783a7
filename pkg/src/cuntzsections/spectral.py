"""Singular values, spectra, pseudospectra and stability verdicts for section sequences."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np
import scipy.linalg
from scipy.spatial import cKDTree

from .sections import SizeSchedule, element_matrix, power_exponent
from .symbol import symbol_truncation
from .symbolic import Element

#: Default threshold below which a smallest singular value counts as zero.
DEFAULT_TOL = 1e-8
#: An unstable verdict needs the last sigma_min below ``tol * UNSTABLE_DECAY``.
UNSTABLE_DECAY = 1e-2
#: Relative drop allowed between consecutive tail values of a stable sequence.
STABLE_SLACK = 0.10
HERMITIAN_TOL = 1e-12
#: Relative slack on the pseudospectral boundary test (boundary is included).
BOUNDARY_RTOL = 1e-12


class SpectralComputationError(RuntimeError):
    pass


def _map(fn, items, workers):
    items = list(items)
    if not workers or workers <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def singular_values(M: np.ndarray) -> np.ndarray:
    """Ascending singular values of a square matrix."""
    M = np.asarray(M)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {M.shape}")
    if M.shape[0] == 0:
        return np.zeros(0)
    try:
        s = scipy.linalg.svdvals(M, check_finite=True)
    except (np.linalg.LinAlgError, ValueError) as exc:
        raise SpectralComputationError(str(exc)) from exc
    return np.sort(s)


def sigma_min(M: np.ndarray) -> float:
    return float(singular_values(M)[0])


def hermitian_eigenvalues(M: np.ndarray) -> np.ndarray:
    M = np.asarray(M)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {M.shape}")
    if M.size and np.max(np.abs(M - M.conj().T)) > HERMITIAN_TOL:
        raise ValueError("matrix is not Hermitian")
    try:
        return np.sort(scipy.linalg.eigvalsh(M))
    except np.linalg.LinAlgError as exc:
        raise SpectralComputationError(str(exc)) from exc


@dataclass
class PseudospectrumGrid:
    """Grid scan of ``sigma_min(M - lambda I)``; ``points`` is the epsilon set."""

    re: np.ndarray
    im: np.ndarray
    sigma: np.ndarray
    eps: float

    @property
    def mask(self) -> np.ndarray:
        return self.sigma <= self.eps * (1 + BOUNDARY_RTOL)

    @property
    def points(self) -> np.ndarray:
        lam = self.re[None, :] + 1j * self.im[:, None]
        return lam[self.mask]

    def with_eps(self, eps: float) -> "PseudospectrumGrid":
        return PseudospectrumGrid(self.re, self.im, self.sigma, eps)


def sigma_min_grid(
    M: np.ndarray,
    region: Sequence[float],
    resolution: int,
    workers: Optional[int] = None,
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """``sigma_min(M - lambda I)`` on a ``resolution x resolution`` grid.

    ``region`` is ``(re_min, re_max, im_min, im_max)``; rows of the returned
    array follow the imaginary axis.
    """
    if resolution < 2:
        raise ValueError("resolution must be >= 2")
    x0, x1, y0, y1 = region
    re = np.linspace(x0, x1, resolution)
    im = np.linspace(y0, y1, resolution)
    M = np.asarray(M, dtype=complex)
    eye = np.eye(M.shape[0])

    def row(y):
        return [sigma_min(M - (x + 1j * y) * eye) for x in re]

    sigma = np.array(_map(row, im, workers))
    return re, im, sigma


def pseudospectrum_grid(
    M: np.ndarray,
    region: Sequence[float],
    resolution: int,
    eps: float,
    workers: Optional[int] = None,
) -> PseudospectrumGrid:
    if eps <= 0:
        raise ValueError("eps must be positive")
    re, im, sigma = sigma_min_grid(M, region, resolution, workers)
    return PseudospectrumGrid(re, im, sigma, eps)


def _as_points(A) -> np.ndarray:
    pts = np.asarray(A, dtype=complex).ravel()
    if pts.size == 0:
        raise ValueError("Hausdorff distance needs non-empty point sets")
    return np.column_stack([pts.real, pts.imag])


def hausdorff_distance(A: Iterable[complex], B: Iterable[complex]) -> float:
    """Symmetric Hausdorff distance between finite sets of complex numbers."""
    a = _as_points(A)
    b = _as_points(B)
    d_ab = cKDTree(b).query(a)[0].max()
    d_ba = cKDTree(a).query(b)[0].max()
    return float(max(d_ab, d_ba))


@dataclass
class SpectralReport:
    sizes: list[int]
    sigma_min: list[float]
    verdict: str
    tol: float
    sigma_full: Optional[list[list[float]]] = None
    unstable_decay: float = UNSTABLE_DECAY
    stable_slack: float = STABLE_SLACK

    def to_dict(self) -> dict:
        return asdict(self)


def classify_trend(values: Sequence[float], tol: float) -> str:
    """Verdict for a sequence of smallest singular values over growing sizes.

    ``stable``: the tail (last half, at least two values) stays above
    ``tol`` and never drops by more than ``STABLE_SLACK`` relative to its
    predecessor. ``unstable``: the whole sequence is non-increasing and
    ends below ``tol * UNSTABLE_DECAY``. Anything else is ``inconclusive``.
    """
    v = np.asarray(values, dtype=float)
    if v.size < 3:
        raise ValueError("a verdict needs at least three sizes")
    tail = v[-max(2, (v.size + 1) // 2):]
    if np.all(tail > tol) and np.all(tail[1:] >= (1 - STABLE_SLACK) * tail[:-1]):
        return "stable"
    if np.all(np.diff(v) <= 0) and v[-1] < tol * UNSTABLE_DECAY:
        return "unstable"
    return "inconclusive"


def stability_verdict(
    a: Element,
    K: Optional[np.ndarray] = None,
    schedule: Optional[SizeSchedule] = None,
    tol: float = DEFAULT_TOL,
    full: bool = False,
    workers: Optional[int] = None,
) -> SpectralReport:
    """Trend of ``sigma_min`` of the sections ``P_n (A + K) P_n`` over a schedule."""
    schedule = schedule or SizeSchedule(N=a.N)
    sizes = schedule.values()
    if len(sizes) < 3:
        raise ValueError("schedule must yield at least three sizes")
    spectra = _map(lambda n: singular_values(element_matrix(a, n, K)), sizes, workers)
    mins = [float(s[0]) for s in spectra]
    return SpectralReport(
        sizes=list(sizes),
        sigma_min=mins,
        verdict=classify_trend(mins, tol),
        tol=tol,
        sigma_full=[s.tolist() for s in spectra] if full else None,
    )


def matched_symbol_shape(N: int, n: int) -> tuple[int, int]:
    """``(B, M)`` with ``B * M = n = N^p``: ``M = N^ceil(p/2)``, ``B = N^floor(p/2)``."""
    p = power_exponent(N, n)
    return N ** (p // 2), N ** (p - p // 2)


def symbol_sigma_min_trend(
    a: Element,
    schedule: Optional[SizeSchedule] = None,
    tol: float = DEFAULT_TOL,
    workers: Optional[int] = None,
) -> SpectralReport:
    """``sigma_min`` of truncations of ``Psi(a^sharp)`` at matched sizes."""
    schedule = schedule or SizeSchedule(N=a.N)
    sizes = schedule.values()
    if len(sizes) < 3:
        raise ValueError("schedule must yield at least three sizes")

    def one(n):
        B, M = matched_symbol_shape(a.N, n)
        return sigma_min(symbol_truncation(a, B, M, apply_sharp=True).entries)

    mins = _map(one, sizes, workers)
    return SpectralReport(sizes=list(sizes), sigma_min=mins, verdict=classify_trend(mins, tol), tol=tol)


@dataclass
class ConvergenceRow:
    n: int
    symbol_shape: tuple[int, int]
    d_sigma2: float
    d_pseudo: dict = field(default_factory=dict)


def spectral_convergence_report(
    a: Element,
    schedule: Optional[SizeSchedule] = None,
    eps_list: Sequence[float] = (),
    region: Optional[Sequence[float]] = None,
    resolution: int = 41,
    workers: Optional[int] = None,
    with_spectra: bool = False,
):
    """Hausdorff distances between spectral sets of sections and symbol truncations.

    For every schedule size ``n = N^p`` the section ``P_n a P_n`` is compared
    with the truncation of ``Psi(a^sharp)`` having ``B * M = n``. Distances
    are reported, never asserted. Returns a list of ConvergenceRow, plus the
    per-size singular values when ``with_spectra`` is set.
    """
    schedule = schedule or SizeSchedule(N=a.N)
    if eps_list and region is None:
        bound = sum(abs(c) for c in a.terms.values()) + max(eps_list)
        region = (-bound, bound, -bound, bound)
    rows = []
    spectra = []
    for n in schedule.values():
        B, M = matched_symbol_shape(a.N, n)
        sec = element_matrix(a, n)
        sym = symbol_truncation(a, B, M, apply_sharp=True).entries
        s_sec = singular_values(sec)
        s_sym = singular_values(sym)
        row = ConvergenceRow(n, (B, M), hausdorff_distance(s_sec, s_sym))
        if eps_list:
            g_sec = sigma_min_grid(sec, region, resolution, workers)
            g_sym = sigma_min_grid(sym, region, resolution, workers)
            for eps in eps_list:
                p_sec = PseudospectrumGrid(*g_sec, eps).points
                p_sym = PseudospectrumGrid(*g_sym, eps).points
                if p_sec.size and p_sym.size:
                    row.d_pseudo[eps] = hausdorff_distance(p_sec, p_sym)
                else:
                    row.d_pseudo[eps] = float("nan")
        rows.append(row)
        spectra.append((n, s_sec, s_sym))
    if with_spectra:
        return rows, spectra
    return rows
