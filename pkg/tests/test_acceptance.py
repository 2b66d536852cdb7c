"""Exit criteria for the package, one test per criterion."""

import json
import math
import subprocess
import sys
import time
from fractions import Fraction
from math import factorial, prod

import numpy as np
import pytest

from conftest import mixed_instances
from sticks import exact_probability, exact_probability_proof_form, verify
from sticks.mc import (SimulationConfig, estimate, no_subset_forms_polygon_batch,
                       window_condition_batch)

MC_GRID = [(k, n) for k in (2, 3, 4) for n in range(k + 1, 9)]
EQUIV_GRID = [(k, n) for k in (2, 3, 4) for n in range(k + 1, 11)]


class Timer:
    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.start


def test_01_triangle_specialization(record_criterion):
    with Timer() as t:
        fib = [1, 1]
        while len(fib) < 20:
            fib.append(fib[-1] + fib[-2])
        bad = [n for n in range(3, 21) if exact_probability(2, n).value != Fraction(1, prod(fib[:n]))]
    ok = not bad and t.elapsed < 1.0
    record_criterion(1, "P_n^(2) = 1/(F_1...F_n), 3<=n<=20", ok, f"{t.elapsed:.3f}s, mismatches={bad}")
    assert ok


def test_02_factorial_boundary(record_criterion):
    with Timer() as t:
        bad = [k for k in range(2, 9) if exact_probability(k, k + 1).value != Fraction(1, factorial(k))]
    ok = not bad and t.elapsed < 1.0
    record_criterion(2, "P_{k+1}^(k) = 1/k!, 2<=k<=8", ok, f"{t.elapsed:.3f}s, mismatches={bad}")
    assert ok


def test_03_r_vector_identity_suite(record_criterion):
    with Timer() as t:
        families = [verify.closed_form_family(8, 50), verify.laws_family(8, 50)]
    failures = [f"{f.name} {f.failure}" for f in families if not f.ok]
    checked = sum(f.checked for f in families)
    ok = not failures and t.elapsed < 5.0
    record_criterion(3, "R-vector closed forms and laws, 2<=k<=8, 1<=l<=50", ok,
                     f"{checked} identities, {t.elapsed:.3f}s {failures or ''}".strip())
    assert ok


def test_04_closed_product_equals_proof_form(record_criterion):
    with Timer() as t:
        bad = [(k, n) for k in range(2, 7) for n in range(k + 1, 26)
               if exact_probability(k, n) != exact_probability_proof_form(k, n)]
    ok = not bad and t.elapsed < 5.0
    record_criterion(4, "closed product = proof form, 2<=k<=6, k+1<=n<=25", ok, f"{t.elapsed:.3f}s, mismatches={bad}")
    assert ok


def _worked_example_k4(n):
    # tetranacci 1, 1, 2, 4, 8, ...; the bare 2R^{n-3} read as 2 R_4^{n-3}
    t = [None, 1, 1, 2, 4]
    while len(t) <= n:
        t.append(t[-1] + t[-2] + t[-3] + t[-4])
    return Fraction(1, (t[n - 1] - t[n - 3]) * (t[n] - t[n - 2] - 2 * t[n - 3]) * prod(t[1:n - 1]))


def test_05_tetranacci_worked_example_corrected_subscripts(record_criterion):
    with Timer() as t:
        bad = [n for n in range(5, 16)
               if not (_worked_example_k4(n) == exact_probability(4, n).value
                       == exact_probability_proof_form(4, n).value)]
    ok = not bad and t.elapsed < 1.0
    record_criterion(5, "k=4 worked example = both evaluators, 5<=n<=15", ok,
                     f"{t.elapsed:.3f}s, mismatches={bad}")
    assert ok


def test_06_monte_carlo_agreement(record_criterion):
    worst = []
    for k, n in MC_GRID:
        truth = float(exact_probability(k, n).value)
        passes = 0
        for seed in range(20):
            r = estimate(SimulationConfig(k, n, 10**6, seed=1000 + seed))
            passes += abs(r.estimate - truth) < 4 * r.stderr
        worst.append((passes, k, n))
    failing = [(k, n, p) for p, k, n in worst if p < 19]
    ok = not failing
    low = min(worst)
    record_criterion(6, "10^6-trial MC within 4 stderr in >=19/20 seeds per grid point", ok,
                     f"{len(MC_GRID)} points, worst {low[0]}/20 at k={low[1]}, n={low[2]}; below 19/20: {failing}")
    assert ok, failing


def test_07_equivalence_oracle(record_criterion):
    rng = np.random.default_rng(7)
    discrepancies = {}
    with Timer() as t:
        for k, n in EQUIV_GRID:
            rows = mixed_instances(rng, 10**5, n, k)
            window = window_condition_batch(np.sort(rows, axis=1), k)
            subset = no_subset_forms_polygon_batch(rows, k)
            bad = int(np.count_nonzero(window != subset))
            if bad:
                discrepancies[(k, n)] = bad
    ok = not discrepancies and t.elapsed < 60.0
    record_criterion(7, "window condition <=> no (k+1)-subset forms a polygon, 10^5 per (k,n)", ok,
                     f"{len(EQUIV_GRID)} grid points, {t.elapsed:.1f}s, discrepancies={discrepancies}")
    assert ok


def test_08_sampler_cross_validation(record_criterion):
    worst = (0.0, None)
    failing = []
    for k, n in MC_GRID:
        a = estimate(SimulationConfig(k, n, 10**6, seed=77, sampler="uniform-sort"))
        b = estimate(SimulationConfig(k, n, 10**6, seed=78, sampler="exponential-sums"))
        combined = math.hypot(a.stderr, b.stderr)
        ratio = abs(a.estimate - b.estimate) / combined
        worst = max(worst, (ratio, (k, n)))
        if not ratio < 5:
            failing.append((k, n, ratio))
    ok = not failing
    record_criterion(8, "uniform-sort vs exponential-sums within 5 combined stderr", ok,
                     f"worst {worst[0]:.2f} at k,n={worst[1]}")
    assert ok, failing


def test_09_determinism_across_processes(record_criterion):
    argv = [sys.executable, "-m", "sticks", "simulate", "--k", "3", "--n", "6", "--trials", "300000",
            "--seed", "987654321", "--workers", "3", "--sampler", "exponential-sums", "--format", "json"]
    first = subprocess.run(argv, capture_output=True, check=True).stdout
    second = subprocess.run(argv, capture_output=True, check=True).stdout
    report = json.loads(first)
    ok = first == second and report["trials"] == 300000
    record_criterion(9, "identical config gives bit-identical report JSON across processes", ok,
                     f"{len(first)} bytes")
    assert ok
