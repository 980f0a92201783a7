"""Exact *-algebra of finite word combinations in the Cuntz algebra O_N.

A word ``S_l S_m^*`` is stored by its pair of multi-indices ``(l, m)``,
where ``S_l = S_{l_1} S_{l_2} ... S_{l_k}`` and ``S_m^* = (S_m)^*``.
Products are reduced with ``S_i^* S_j = delta_ij I`` only; the completeness
relation ``sum_i S_i S_i^* = I`` is never applied, so two Elements compare
equal exactly when their normal-form expansions coincide.
"""

from __future__ import annotations

import numbers
from dataclasses import dataclass
from types import MappingProxyType
from typing import Iterable, Mapping, Optional


@dataclass(frozen=True)
class MultiIndex:
    """Tuple of digits in ``{0, ..., N-1}``; the empty index stands for ``S_∅ = I``."""

    N: int
    digits: tuple[int, ...] = ()

    def __post_init__(self):
        if not isinstance(self.N, numbers.Integral) or self.N < 2:
            raise ValueError(f"branching degree must be an integer >= 2, got {self.N!r}")
        digits = tuple(int(d) for d in self.digits)
        for d in digits:
            if not 0 <= d < self.N:
                raise ValueError(f"digit {d} out of range for N={self.N}")
        object.__setattr__(self, "digits", digits)

    def __len__(self):
        return len(self.digits)

    def __iter__(self):
        return iter(self.digits)

    def __add__(self, other: "MultiIndex") -> "MultiIndex":
        _check_same_N(self.N, other.N)
        return MultiIndex(self.N, self.digits + other.digits)

    def is_prefix_of(self, other: "MultiIndex") -> bool:
        """``self ≺ other``; every index is a prefix of itself."""
        k = len(self.digits)
        return k <= len(other.digits) and other.digits[:k] == self.digits

    def strip_prefix(self, prefix: "MultiIndex") -> "MultiIndex":
        """Left difference ``(-prefix) + self``."""
        if not prefix.is_prefix_of(self):
            raise ValueError(f"{prefix} is not a prefix of {self}")
        return MultiIndex(self.N, self.digits[len(prefix.digits):])

    @property
    def value(self) -> int:
        return multi_index_value(self)

    def dual(self) -> "MultiIndex":
        return dual_index(self)

    def __repr__(self):
        return f"MultiIndex(N={self.N}, {self.digits})"


def _check_same_N(a: int, b: int):
    if a != b:
        raise ValueError(f"mismatched branching degrees: {a} vs {b}")


def multi_index_value(i: MultiIndex) -> int:
    """N-adic value ``i_1 + i_2 N + ... + i_k N^(k-1)``; 0 for the empty index."""
    value = 0
    for d in reversed(i.digits):
        value = value * i.N + d
    return value


def dual_index(i: MultiIndex) -> MultiIndex:
    """Digitwise complement ``N - 1 - i_r``."""
    return MultiIndex(i.N, tuple(i.N - 1 - d for d in i.digits))


@dataclass(frozen=True)
class Word:
    """Normal-form monomial ``S_left S_right^*``."""

    left: MultiIndex
    right: MultiIndex

    def __post_init__(self):
        _check_same_N(self.left.N, self.right.N)

    @property
    def N(self) -> int:
        return self.left.N

    @classmethod
    def identity(cls, N: int) -> "Word":
        return cls(MultiIndex(N), MultiIndex(N))

    @classmethod
    def from_digits(cls, N: int, left: Iterable[int] = (), right: Iterable[int] = ()) -> "Word":
        return cls(MultiIndex(N, tuple(left)), MultiIndex(N, tuple(right)))

    @property
    def degree(self) -> int:
        """``|l| - |m|``: the power of ``lambda^{-1}`` under the gauge action."""
        return len(self.left) - len(self.right)

    @property
    def is_balanced(self) -> bool:
        return len(self.left) == len(self.right)

    @property
    def length(self) -> int:
        return max(len(self.left), len(self.right))

    def adjoint(self) -> "Word":
        return Word(self.right, self.left)

    def sharp(self) -> "Word":
        return Word(dual_index(self.left), dual_index(self.right))

    def __str__(self):
        factors = [f"S{d}" for d in self.left.digits]
        factors += [f"S{d}^*" for d in reversed(self.right.digits)]
        return " ".join(factors) if factors else "I"


def word_multiply(w1: Word, w2: Word) -> Optional[Word]:
    """Reduce ``S_i S_j^* S_k S_l^*`` to a word, or return None for zero."""
    _check_same_N(w1.N, w2.N)
    i, j = w1.left, w1.right
    k, l = w2.left, w2.right
    if j.is_prefix_of(k):
        return Word(i + k.strip_prefix(j), l)
    if k.is_prefix_of(j):
        return Word(i, l + j.strip_prefix(k))
    return None


class Element:
    """Finite complex linear combination of words over a fixed ``N``.

    Instances are immutable; arithmetic operators return new Elements.
    Terms whose accumulated coefficient is exactly zero are dropped.
    """

    __slots__ = ("_N", "_terms")

    def __init__(self, N: int, terms: Optional[Mapping[Word, complex]] = None):
        if not isinstance(N, numbers.Integral) or N < 2:
            raise ValueError(f"branching degree must be an integer >= 2, got {N!r}")
        clean: dict[Word, complex] = {}
        for word, coeff in (terms or {}).items():
            _check_same_N(N, word.N)
            c = complex(coeff)
            if c != 0:
                clean[word] = c
        self._N = int(N)
        self._terms = MappingProxyType(clean)

    # construction helpers

    @classmethod
    def zero(cls, N: int) -> "Element":
        return cls(N)

    @classmethod
    def identity(cls, N: int) -> "Element":
        return cls(N, {Word.identity(N): 1})

    @classmethod
    def generator(cls, N: int, i: int) -> "Element":
        return cls(N, {Word.from_digits(N, (i,)): 1})

    @classmethod
    def from_word(cls, word: Word, coeff: complex = 1) -> "Element":
        return cls(word.N, {word: coeff})

    @classmethod
    def from_terms(cls, N: int, pairs: Iterable[tuple[Word, complex]]) -> "Element":
        acc: dict[Word, complex] = {}
        for word, coeff in pairs:
            acc[word] = acc.get(word, 0) + complex(coeff)
        return cls(N, acc)

    # accessors

    @property
    def N(self) -> int:
        return self._N

    @property
    def terms(self) -> Mapping[Word, complex]:
        return self._terms

    def __len__(self):
        return len(self._terms)

    def __iter__(self):
        return iter(self._terms.items())

    @property
    def max_length(self) -> int:
        """Largest ``max(|l|, |m|)`` over the stored words (0 for the zero element)."""
        return max((w.length for w in self._terms), default=0)

    @property
    def total_degree(self) -> int:
        """Largest ``|l| + |m|`` over the stored words."""
        return max((len(w.left) + len(w.right) for w in self._terms), default=0)

    def is_zero(self) -> bool:
        return not self._terms

    def is_real(self) -> bool:
        return all(c.imag == 0 for c in self._terms.values())

    # algebra

    def _coerce(self, other) -> "Element":
        if isinstance(other, Element):
            _check_same_N(self.N, other.N)
            return other
        if isinstance(other, numbers.Number):
            return Element(self.N, {Word.identity(self.N): other})
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        acc = dict(self._terms)
        for w, c in other._terms.items():
            acc[w] = acc.get(w, 0) + c
        return Element(self.N, acc)

    __radd__ = __add__

    def __neg__(self):
        return Element(self.N, {w: -c for w, c in self._terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, numbers.Number):
            return Element(self.N, {w: c * other for w, c in self._terms.items()})
        if isinstance(other, Element):
            return element_multiply(self, other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, numbers.Number):
            return self * other
        return NotImplemented

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative powers are not defined")
        result = Element.identity(self.N)
        for _ in range(k):
            result = result * self
        return result

    def adjoint(self) -> "Element":
        return element_adjoint(self)

    @property
    def H(self) -> "Element":
        return element_adjoint(self)

    def sharp(self) -> "Element":
        return sharp_map(self)

    def __eq__(self, other):
        if not isinstance(other, Element):
            return NotImplemented
        return self.N == other.N and dict(self._terms) == dict(other._terms)

    def __hash__(self):
        return hash((self.N, frozenset(self._terms.items())))

    def __repr__(self):
        return f"Element(N={self.N}, {format_element(self)!r})"

    def __str__(self):
        return format_element(self)


def element_multiply(a: Element, b: Element) -> Element:
    """Bilinear extension of :func:`word_multiply`."""
    _check_same_N(a.N, b.N)
    acc: dict[Word, complex] = {}
    for w1, c1 in a.terms.items():
        for w2, c2 in b.terms.items():
            w = word_multiply(w1, w2)
            if w is not None:
                acc[w] = acc.get(w, 0) + c1 * c2
    return Element(a.N, acc)


def element_adjoint(a: Element) -> Element:
    return Element(a.N, {w.adjoint(): c.conjugate() for w, c in a.terms.items()})


def sharp_map(a: Element) -> Element:
    """The automorphism ``S_i -> S_{N-1-i}`` applied word by word."""
    return Element(a.N, {w.sharp(): c for w, c in a.terms.items()})


def _s0_power(N: int, k: int) -> Element:
    return Element.from_word(Word.from_digits(N, (0,) * k))


def fourier_coefficient(a: Element, k: int) -> Element:
    """Balanced Fourier part ``Phi_k(a)``.

    ``Phi_0`` keeps the balanced words. Other indices follow the shift rules
    ``Phi_k(A) = Phi_0(A (S_0^*)^k)`` for ``k > 0`` and
    ``Phi_k(A) = Phi_0(S_0^{-k} A)`` for ``k < 0``.
    """
    if k > 0:
        a = a * _s0_power(a.N, k).adjoint()
    elif k < 0:
        a = _s0_power(a.N, -k) * a
    return Element(a.N, {w: c for w, c in a.terms.items() if w.is_balanced})


def format_coefficient(c: complex) -> str:
    if c.imag == 0:
        return repr(float(c.real))
    sign = "-" if c.imag < 0 else "+"
    return f"({float(c.real)!r}{sign}{abs(float(c.imag))!r}i)"


def format_element(a: Element) -> str:
    """Text form accepted by :func:`cuntzsections.parser.parse_element`."""
    if a.is_zero():
        return "0*I"
    out = ""
    for w, c in sorted(a.terms.items(), key=lambda item: _word_sort_key(item[0])):
        negative = c.imag == 0 and c.real < 0
        coeff = format_coefficient(-c if negative else c)
        if not out:
            out = f"-{coeff}*{w}" if negative else f"{coeff}*{w}"
        else:
            out += f" {'-' if negative else '+'} {coeff}*{w}"
    return out


def _word_sort_key(w: Word):
    return (len(w.left) + len(w.right), w.left.digits, w.right.digits)
