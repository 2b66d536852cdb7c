"""k-step Fibonacci-type sequences, the companion matrix A_k and R-vectors.

The sequence of order ``k`` is indexed from ``2 - k`` upward with

    F[2-k] = ... = F[0] = 0,   F[1] = 1,   F[l] = F[l-1] + ... + F[l-k]  (l >= 2)

so ``k = 2`` gives the Fibonacci numbers, ``k = 3`` Tribonacci and so on.
Indices are kept as the natural (possibly negative) integers rather than shifted
into a 0-based list, so every formula can be written as it reads.

Successive integration of the exponential density over the avoidance region
produces coefficient vectors ``R^l = A_k^(l-1) (1, ..., 1)``;
:func:`r_vector` computes them by repeated products and
:func:`r_vector_closed_form` from Fibonacci-type terms.  Both are exact.

Sharing: a :class:`KStepSequence` may be used from several threads at once.
Cache growth happens under a per-instance lock and cached terms never change.
"""

from __future__ import annotations

import os
import threading
from dataclasses import dataclass
from functools import lru_cache

from .errors import DomainError

DEFAULT_MAX_K = 64
MAX_K_ENV = "STICKS_MAX_K"


def max_k() -> int:
    """Current cap on the order ``k``; ``STICKS_MAX_K`` overrides the default."""
    raw = os.environ.get(MAX_K_ENV)
    if raw is None or raw == "":
        return DEFAULT_MAX_K
    try:
        cap = int(raw)
    except ValueError:
        raise DomainError(f"{MAX_K_ENV} must be an integer (got {raw!r})") from None
    if cap < 2:
        raise DomainError(f"{MAX_K_ENV} must be >= 2 (got {cap})")
    return cap


def check_order(k: int) -> None:
    if not isinstance(k, int) or isinstance(k, bool):
        raise DomainError(f"k must be an integer (got {k!r})")
    if k < 2:
        raise DomainError(f"k must be >= 2 (got {k})")
    cap = max_k()
    if k > cap:
        raise DomainError(f"k must be <= {cap} (got {k}); raise {MAX_K_ENV} to allow more")


class KStepSequence:
    """Memoized terms of the order-``k`` Fibonacci-type sequence.

    >>> seq = KStepSequence(4)
    >>> [seq[l] for l in range(-2, 6)]
    [0, 0, 0, 1, 1, 2, 4, 8]
    """

    def __init__(self, k: int):
        check_order(k)
        self.k = k
        # _terms[i] holds F[i + 2 - k]
        self._terms: list[int] = [0] * (k - 1) + [1]
        self._running = 1  # sum of the last k stored terms
        self._lock = threading.Lock()

    @property
    def first_index(self) -> int:
        return 2 - self.k

    def __len__(self) -> int:
        return len(self._terms)

    def __getitem__(self, l: int) -> int:
        return self.term(l)

    def term(self, l: int) -> int:
        if l < self.first_index:
            raise DomainError(f"l must be >= 2-k = {self.first_index} for k={self.k} (got {l})")
        pos = l - self.first_index
        terms = self._terms
        if pos < len(terms):
            return terms[pos]
        with self._lock:
            self._grow(pos)
        return self._terms[pos]

    def terms(self, start: int, stop: int) -> list[int]:
        """Terms ``F[start], ..., F[stop - 1]``."""
        if stop > start:
            self.term(stop - 1)
        return [self.term(l) for l in range(start, stop)]

    def _grow(self, pos: int) -> None:
        terms, k = self._terms, self.k
        running = self._running
        while len(terms) <= pos:
            terms.append(running)
            running += running - terms[-1 - k]
        self._running = running

    def __repr__(self) -> str:
        return f"KStepSequence(k={self.k}, cached={len(self._terms)})"


@lru_cache(maxsize=None)
def _shared_sequence(k: int) -> KStepSequence:
    return KStepSequence(k)


def sequence(k: int) -> KStepSequence:
    """The process-wide shared sequence of order ``k``."""
    check_order(k)
    return _shared_sequence(k)


def kfib_term(k: int, l: int) -> int:
    """``F_k^l``; rejects ``k < 2`` and ``l < 2 - k``."""
    return sequence(k).term(l)


@dataclass(frozen=True)
class CompanionMatrix:
    k: int
    entries: tuple[tuple[int, ...], ...]

    def __matmul__(self, vec):
        return tuple(sum(a * v for a, v in zip(row, vec)) for row in self.entries)

    def power(self, e: int) -> tuple[tuple[int, ...], ...]:
        """Exact ``A_k ** e`` by binary exponentiation."""
        if e < 0:
            raise DomainError(f"exponent must be >= 0 (got {e})")
        k = self.k
        result = tuple(tuple(int(i == j) for j in range(k)) for i in range(k))
        base = self.entries
        while e:
            if e & 1:
                result = _matmul(result, base)
            base = _matmul(base, base)
            e >>= 1
        return result

    def determinant(self) -> int:
        """Exact determinant via fraction-free (Bareiss) elimination."""
        m = [list(row) for row in self.entries]
        n = len(m)
        sign, prev = 1, 1
        for i in range(n - 1):
            if m[i][i] == 0:
                swap = next((r for r in range(i + 1, n) if m[r][i] != 0), None)
                if swap is None:
                    return 0
                m[i], m[swap] = m[swap], m[i]
                sign = -sign
            for r in range(i + 1, n):
                for c in range(i + 1, n):
                    m[r][c] = (m[r][c] * m[i][i] - m[r][i] * m[i][c]) // prev
            prev = m[i][i]
        return sign * m[n - 1][n - 1]


def _matmul(a, b):
    cols = list(zip(*b))
    return tuple(tuple(sum(x * y for x, y in zip(row, col)) for col in cols) for row in a)


@lru_cache(maxsize=None)
def _companion(k: int) -> CompanionMatrix:
    rows = []
    for i in range(1, k + 1):
        row = [0] * k
        row[max(i - 2, 0)] = 1
        row[k - 1] += k - 1 if i == 1 else k - i
        rows.append(tuple(row))
    return CompanionMatrix(k, tuple(rows))


def companion_matrix(k: int) -> CompanionMatrix:
    """The k x k integer matrix driving ``R^{l+1} = A_k R^l``."""
    check_order(k)
    return _companion(k)


@dataclass(frozen=True)
class RVector:
    k: int
    l: int
    entries: tuple[int, ...]

    def __getitem__(self, i: int) -> int:
        """1-based entry ``R_i^l``."""
        if not 1 <= i <= self.k:
            raise IndexError(f"R-vector entry index must be in 1..{self.k} (got {i})")
        return self.entries[i - 1]


def _check_r_index(k: int, l: int) -> None:
    check_order(k)
    if not isinstance(l, int) or l < 1:
        raise DomainError(f"l must be >= 1 (got {l})")


def r_vectors(k: int, l_max: int) -> list[RVector]:
    """``R^1, ..., R^l_max`` by iterated matrix-vector products."""
    _check_r_index(k, l_max)
    a = companion_matrix(k)
    vec = (1,) * k
    out = [RVector(k, 1, vec)]
    for l in range(2, l_max + 1):
        vec = a @ vec
        out.append(RVector(k, l, vec))
    return out


def r_vector(k: int, l: int, method: str = "iterate") -> RVector:
    """``R^l = A_k^(l-1) (1, ..., 1)``.

    ``method="iterate"`` is the reference path; ``method="power"`` uses binary
    exponentiation of the matrix and must agree exactly.
    """
    _check_r_index(k, l)
    if method == "iterate":
        return r_vectors(k, l)[-1]
    if method == "power":
        p = companion_matrix(k).power(l - 1)
        return RVector(k, l, tuple(sum(row) for row in p))
    raise ValueError(f"unknown method {method!r}")


def r_vector_closed_form(k: int, l: int) -> RVector:
    """``R^l`` assembled from Fibonacci-type terms alone.

    R_k = F[l], R_{k-1} = F[l+1], and for i <= k-2
    R_i = F[l+k-i] - sum_{j=1}^{k-i-1} (k-i-j) F[l+j-1].
    """
    _check_r_index(k, l)
    f = sequence(k)
    entries = []
    for i in range(1, k - 1):
        correction = sum((k - i - j) * f[l + j - 1] for j in range(1, k - i))
        entries.append(f[l + k - i] - correction)
    entries.append(f[l + 1])
    entries.append(f[l])
    return RVector(k, l, tuple(entries))
