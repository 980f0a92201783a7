"""Named example elements and a seeded generator of random Elements."""

from __future__ import annotations

import numpy as np

from .parser import parse_element
from .symbolic import Element, Word

#: expression -> expected section-stability verdict for N = 2
STABILITY_CATALOG = {
    "I": "stable",
    "I + 0.5*S0": "stable",
    "I + 0.5*S1^*": "stable",
    "2*I + S0 S1^*": "stable",
    "S0": "unstable",
    "S0^*": "unstable",
    "S0 S0^*": "unstable",
    "S0 + S1": "unstable",
}


def catalog_element(text: str, N: int = 2) -> Element:
    return parse_element(text, N)


def random_word(N: int, rng: np.random.Generator, max_len: int = 3) -> Word:
    kl, km = rng.integers(0, max_len + 1, size=2)
    left = rng.integers(0, N, size=kl)
    right = rng.integers(0, N, size=km)
    return Word.from_digits(N, left.tolist(), right.tolist())


def random_element(
    N: int,
    rng: np.random.Generator,
    max_len: int = 3,
    max_terms: int = 5,
    complex_coeffs: bool = True,
) -> Element:
    """Sum of up to ``max_terms`` random words with Gaussian coefficients."""
    n_terms = int(rng.integers(1, max_terms + 1))
    pairs = []
    for _ in range(n_terms):
        c = rng.normal()
        if complex_coeffs:
            c = complex(c, rng.normal())
        pairs.append((random_word(N, rng, max_len), c))
    return Element.from_terms(N, pairs)
