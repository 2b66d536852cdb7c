"""Exact rational probability that no k+1 of n uniform sticks form a polygon."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import ConsistencyError, DomainError
from .kfib import check_order, r_vectors, sequence


@dataclass(frozen=True)
class ExactProbability:
    k: int
    n: int
    value: Fraction

    @property
    def numerator(self) -> int:
        return self.value.numerator

    @property
    def denominator(self) -> int:
        return self.value.denominator

    @property
    def trivial(self) -> bool:
        """True when there are too few sticks for any (k+1)-subset."""
        return self.n <= self.k

    def __str__(self) -> str:
        return str(self.value)


def _check_args(k: int, n: int) -> None:
    check_order(k)
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise DomainError(f"n must be >= 1 (got {n!r})")


def _reciprocal_product(factors, k: int, n: int, what: str) -> Fraction:
    # Fraction reduces after every multiplication
    acc = Fraction(1)
    for f in factors:
        if f <= 0:
            raise ConsistencyError(f"nonpositive {what} factor {f} at k={k}, n={n}")
        acc /= f
    return acc


def correction_factors(k: int, n: int) -> list[int]:
    """The k-2 trailing denominators F[n-i+1] - sum_j (k-i-j) F[n-k+j]."""
    _check_args(k, n)
    f = sequence(k)
    return [f[n - i + 1] - sum((k - i - j) * f[n - k + j] for j in range(1, k - i))
            for i in range(1, k - 1)]


def exact_probability(k: int, n: int) -> ExactProbability:
    """P_n^(k) from the product of Fibonacci-type terms.

    ``n <= k`` gives exactly 1.  ``k = 2`` is accepted: the correction
    product is then empty and the result is one over the product of the
    first ``n`` Fibonacci numbers.
    """
    _check_args(k, n)
    if n <= k:
        return ExactProbability(k, n, Fraction(1))
    f = sequence(k)
    value = _reciprocal_product(f.terms(1, n - k + 3), k, n, "Fibonacci")
    value *= _reciprocal_product(correction_factors(k, n), k, n, "correction")
    return ExactProbability(k, n, value)


def exact_probability_proof_form(k: int, n: int) -> ExactProbability:
    """P_n^(k) as the product of trailing R-vector entries.

    One factor 1/R_k^l for each of the n-k integrations, then 1/R_i^(n-k+1)
    for the k variables left over.  Requires ``n >= k + 1``.
    """
    _check_args(k, n)
    if n <= k:
        raise DomainError(f"proof form needs n >= k+1 = {k + 1} (got n={n})")
    rs = r_vectors(k, n - k + 1)
    factors = [r[k] for r in rs[:-1]] + list(rs[-1].entries)
    return ExactProbability(k, n, _reciprocal_product(factors, k, n, "R-vector"))


def decimal_render(p: ExactProbability | Fraction, digits: int = 6) -> str:
    """Round-half-even decimal with ``digits`` places.

    ``" (exact)"`` is appended when the rounded string equals the rational.

    >>> decimal_render(Fraction(1, 2), 4)
    '0.5000 (exact)'
    >>> decimal_render(Fraction(1, 6), 6)
    '0.166667'
    """
    if not isinstance(digits, int) or digits < 1:
        raise DomainError(f"digits must be >= 1 (got {digits!r})")
    value = p.value if isinstance(p, ExactProbability) else Fraction(p)
    sign = "-" if value < 0 else ""
    num, den = abs(value.numerator), value.denominator
    q, r = divmod(num * 10**digits, den)
    if 2 * r > den or (2 * r == den and q % 2):
        q += 1
    whole, frac = divmod(q, 10**digits)
    text = f"{sign}{whole}.{frac:0{digits}d}"
    return text + " (exact)" if r == 0 else text
