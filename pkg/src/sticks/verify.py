"""Exact identity suite behind ``sticks verify``."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial, prod

from . import exact, kfib
from .errors import DomainError


@dataclass
class Failure:
    where: dict
    got: object
    expected: object

    def __str__(self) -> str:
        loc = ", ".join(f"{key}={val}" for key, val in self.where.items())
        return f"at {loc}: got {self.got}, expected {self.expected}"


@dataclass
class FamilyResult:
    name: str
    checked: int = 0
    passed: int = 0
    failure: Failure | None = None

    @property
    def ok(self) -> bool:
        return self.failure is None

    def check(self, got, expected, **where) -> bool:
        self.checked += 1
        if got == expected:
            self.passed += 1
            return True
        self.failure = Failure(where, got, expected)
        return False


def tetranacci_example(n: int) -> Fraction:
    """The worked k=4 formula, reading the bare ``2R^{n-3}`` as ``2 R_4^{n-3}``."""
    if n < 5:
        raise DomainError(f"n must be >= 5 (got {n})")
    r4 = [None] + [r[4] for r in kfib.r_vectors(4, n)]  # r4[i] = R_4^i
    first = r4[n - 1] - r4[n - 3]
    second = r4[n] - r4[n - 2] - 2 * r4[n - 3]
    return Fraction(1, first * second * prod(r4[1:n - 1]))


def closed_form_family(k_max: int, l_max: int) -> FamilyResult:
    res = FamilyResult("R-vector closed forms")
    for k in range(2, k_max + 1):
        iterated = kfib.r_vectors(k, l_max)
        for l, r in enumerate(iterated, start=1):
            if not res.check(r.entries, kfib.r_vector_closed_form(k, l).entries, k=k, l=l):
                return res
        if not res.check(kfib.r_vector(k, l_max, method="power").entries,
                         iterated[-1].entries, k=k, l=l_max, path="power"):
            return res
    return res


def laws_family(k_max: int, l_max: int) -> FamilyResult:
    res = FamilyResult("shift / first-two-rows / k-step laws")
    for k in range(2, k_max + 1):
        rs = [None] + kfib.r_vectors(k, l_max + 1)  # rs[l] = R^l
        for l in range(1, l_max + 1):
            if not res.check(rs[l + 1][k], rs[l][k - 1], k=k, l=l, law="shift"):
                return res
            if l >= 2 and not res.check(rs[l][1] - rs[l][2], rs[l - 1][k], k=k, l=l, law="rows"):
                return res
            if l >= k and not res.check(rs[l + 1][k], sum(rs[l + 1 - i][k] for i in range(1, k + 1)),
                                        k=k, l=l, law="k-step"):
                return res
    return res


def product_form_family(k_max: int, n_max: int) -> FamilyResult:
    res = FamilyResult("closed product vs R-vector product")
    for k in range(2, k_max + 1):
        for n in range(k + 1, n_max + 1):
            if not res.check(exact.exact_probability(k, n).value,
                             exact.exact_probability_proof_form(k, n).value, k=k, n=n):
                return res
    return res


def triangle_family(n_max: int) -> FamilyResult:
    res = FamilyResult("triangle (Fibonacci product)")
    fib = [1, 1]
    while len(fib) < n_max:
        fib.append(fib[-1] + fib[-2])
    for n in range(3, n_max + 1):
        if not res.check(exact.exact_probability(2, n).value, Fraction(1, prod(fib[:n])), k=2, n=n):
            return res
    return res


def factorial_family(k_max: int) -> FamilyResult:
    res = FamilyResult("factorial boundary n=k+1")
    for k in range(2, k_max + 1):
        if not res.check(exact.exact_probability(k, k + 1).value, Fraction(1, factorial(k)), k=k, n=k + 1):
            return res
    return res


def tetranacci_family(n_max: int) -> FamilyResult:
    res = FamilyResult("tetranacci example k=4")
    for n in range(5, n_max + 1):
        want = tetranacci_example(n)
        if not res.check(exact.exact_probability(4, n).value, want, k=4, n=n, evaluator="closed"):
            return res
        if not res.check(exact.exact_probability_proof_form(4, n).value, want, k=4, n=n, evaluator="proof"):
            return res
    return res


def run_suite(k_max: int = 8, l_max: int = 50, n_max: int = 25) -> list[FamilyResult]:
    if k_max < 2:
        raise DomainError(f"k-max must be >= 2 (got {k_max})")
    if l_max < 2:
        raise DomainError(f"l-max must be >= 2 (got {l_max})")
    if n_max < 3:
        raise DomainError(f"n-max must be >= 3 (got {n_max})")
    families = [
        closed_form_family(k_max, l_max),
        laws_family(k_max, l_max),
        product_form_family(k_max, n_max),
        triangle_family(n_max),
        factorial_family(k_max),
    ]
    if k_max >= 4 and n_max >= 5:
        families.append(tetranacci_family(n_max))
    return families
