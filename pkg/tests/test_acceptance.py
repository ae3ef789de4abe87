"""Top-level acceptance checks, one test per shipped guarantee.

Each test states its tolerance inline and prints a single PASS line when it
holds; failures carry the offending report so a regression is diagnosable
from the pytest output alone.
"""
import dataclasses
import math
import random
import time
from fractions import Fraction

import numpy as np
import pytest

from aqrm import constraint, gfunction, heun, sl2rep, spectrum
from aqrm.constraint import PLAIN, TILDE, ConstraintFamily
from aqrm.exactpoly import BivarPoly, poly_div_x

X, D = BivarPoly.x(), BivarPoly.d()
PREC = Fraction(1, 10**12)


def test_criterion_01_ladder_identity_exact_to_level_15():
    start = time.monotonic()
    for N in range(1, 16):
        report = constraint.verify_identity_half(N)
        assert report["ok"], report
        assert report["checked"] == N + 1
    elapsed = time.monotonic() - start
    assert elapsed < 10.0, f"identity sweep took {elapsed:.2f}s"
    print(f"criterion 1: PASS (N=1..15 exact, {elapsed:.2f}s)")


def test_criterion_02_half_shift_division_exact_to_level_15():
    for N in range(1, 16):
        num = constraint.constraint_poly(
            ConstraintFamily(N + 1, 1, TILDE), N + 1)
        den = constraint.constraint_poly(ConstraintFamily(N, 1, PLAIN), N)
        quot, rem = poly_div_x(num, den)
        assert quot == (N + 1) * X + D
        assert rem.is_zero()
    print("criterion 2: PASS (quotient (N+1)x + d, remainder 0, N=1..15)")


def test_criterion_03_integer_quotient_conjecture_at_desk_scale():
    for ell in range(4):
        for N in range(1, 11):
            report = constraint.verify_conjecture(N, ell)
            evidence = {k: report[k] for k in
                        ("N", "ell", "remainder_zero", "integer_coeffs",
                         "all_positive")}
            assert report["ok"], f"conjecture evidence: {evidence}"
    print("criterion 3: PASS (ell 0..3, N 1..10: division, integrality, "
          "positivity)")


def test_criterion_04_root_counts_in_each_window():
    for N in range(1, 7):
        for two_eps in (0, 1, 2):
            eps = Fraction(two_eps, 2)
            for k in range(N + 1):
                lo = k * k + 2 * k * eps
                hi = (k + 1) ** 2 + 2 * (k + 1) * eps
                d = Fraction(lo + hi, 2)
                count = len(constraint.find_crossings(N, two_eps, d, PREC))
                assert count == N - k, (N, two_eps, k, count)
    print("criterion 4: PASS (root count N-k in every window, N<=6)")


def test_criterion_05_crossings_confirmed_and_discriminated():
    judd = constraint.find_crossings(1, 0, Fraction(1, 2), PREC)[0]
    obs = spectrum.confirm_crossing(judd, n_max=60)
    assert obs.gap < 1e-7
    assert abs(obs.lambda_star - 0.875) < 1e-7
    records = constraint.find_crossings(2, 1, Fraction(1, 4), PREC)
    assert len(records) == 2
    for rec in records:
        obs = spectrum.confirm_crossing(rec)
        assert obs.gap < 1e-7
        assert abs(obs.lambda_star - (2 - rec.g**2 + 0.5)) < 1e-7
    for rec in (judd, *records):
        lo, hi = rec.root_interval
        scale = Fraction(441, 400)  # shifts g by 5 percent
        fake = dataclasses.replace(rec, root_interval=(lo * scale,
                                                       hi * scale))
        g = fake.g
        lam = fake.N - g * g + fake.two_eps / 2
        ev = spectrum.eigenvalues(spectrum.ModelParams(
            g, math.sqrt(float(fake.d_value)), fake.two_eps / 2), 60)
        order = np.argsort(np.abs(ev - lam))
        gap = abs(ev[order[0]] - ev[order[1]])
        assert gap > 1e-3, (rec.N, gap)
        with pytest.raises(ValueError):
            spectrum.confirm_crossing(fake)
    print("criterion 5: PASS (gaps < 1e-7 at roots, > 1e-3 off-root)")


def test_criterion_06_block_equals_tridiagonal_all_families():
    rng = random.Random(2024)
    for N in range(1, 9):
        for variant in (PLAIN, TILDE):
            for two_eps in (-1, 0, 1, 2):
                g2 = Fraction(rng.randint(1, 12), rng.randint(1, 8))
                d = Fraction(rng.randint(1, 12), rng.randint(1, 8))
                block = sl2rep.k_block_minus_lambda(N, two_eps, variant,
                                                    g2, d)
                spec = constraint.tridiag_matrix(
                    ConstraintFamily(N, two_eps, variant), N)
                x = 4 * g2
                for r in range(N + 1):
                    for c in range(N + 1):
                        if c == r:
                            want = spec.diag[r].evaluate(x, d)
                        elif c == r + 1:
                            want = spec.sup[r].evaluate(x, d)
                        elif c == r - 1:
                            want = spec.sub[r - 1].evaluate(x, d)
                        else:
                            want = Fraction(0)
                        assert block[r][c] == want, (N, variant, two_eps, r, c)
    print("criterion 6: PASS (exact F-block match, both variants, N<=8)")


def test_criterion_07_mixed_commutator_twenty_random_tuples():
    rng = random.Random(777)
    for _ in range(20):
        j = rng.choice((1, 2))
        a = Fraction(rng.randint(-9, 9), rng.randint(1, 5))
        params = sl2rep.RepParams(j, a, -6, 6)  # width 13
        lam = Fraction(rng.randint(-9, 9), rng.randint(1, 5))
        g2 = Fraction(rng.randint(1, 9), rng.randint(1, 5))
        d = Fraction(rng.randint(1, 9), rng.randint(1, 5))
        eps = Fraction(rng.randint(-6, 6), rng.randint(1, 4))
        report = sl2rep.commutator_check(params, lam, g2, d, eps)
        assert report["ok"] and report["max_discrepancy"] == 0, report
    print("criterion 7: PASS (commutator identity exact, 20 tuples)")


def test_criterion_08_heun_reduction_hundred_random_tuples():
    rng = random.Random(888)
    for _ in range(100):
        lam = Fraction(rng.randint(-12, 12), rng.randint(1, 6))
        g2 = Fraction(rng.randint(1, 12), rng.randint(1, 6))
        d = Fraction(rng.randint(1, 12), rng.randint(1, 6))
        eps = Fraction(rng.randint(-8, 8), rng.randint(1, 4))
        for which in (1, 2):
            direct = heun.heun_direct(which, lam, g2, d, eps)
            assert heun.heun_from_K(which, lam, g2, d, eps) == direct
            out = heun.exponents(which, lam, g2, eps)
            assert set(direct.indicial_roots(0)) == set(out["at0"])
            assert set(direct.indicial_roots(1)) == set(out["at1"])
    print("criterion 8: PASS (operator correspondence exact, 100 tuples)")


def test_criterion_09_g_function_recurrence_reflection_and_roots():
    for N, g, delta in ((1, 0.3, 0.4), (1, 1.2, 2.0), (2, 1.36, 1.5),
                        (3, 0.7, 2.5)):
        ks = gfunction.k_series(N, g, delta, N + 300)
        assert max(gfunction.recurrence_residuals(ks)) <= 1e-12
    for g in np.linspace(0.05, 1.85, 10):
        for delta in np.linspace(0.3, 2.8, 10):
            assert gfunction.g_minus(1, float(g), float(delta)).value == \
                gfunction.g_plus(1, float(g), -float(delta)).value
    roots = gfunction.find_exceptional(1, 2.0, (0.01, 1.5))
    for r in roots:
        ev = spectrum.eigenvalues(spectrum.ModelParams(r.g_root, 2.0), 60)
        dists = np.sort(np.abs(ev - (1 - r.g_root**2)))
        assert dists[0] < 1e-6 and dists[1] > 1e-4
    # non-vacuous companion: this range does contain an exceptional point
    roots = gfunction.find_exceptional(2, 1.5, (0.8, 1.6))
    assert len(roots) == 1
    ev = spectrum.eigenvalues(spectrum.ModelParams(roots[0].g_root, 1.5), 60)
    dists = np.sort(np.abs(ev - roots[0].lambda_))
    assert dists[0] < 1e-6 and dists[1] > 1e-4
    print("criterion 9: PASS (residuals <= 1e-12, exact reflection, roots "
          "confirmed non-degenerate)")


def test_criterion_10_sl2_suite_exact_and_fast():
    start = time.monotonic()
    rng = random.Random(1010)
    for _ in range(6):
        j = rng.choice((1, 2))
        a = Fraction(rng.randint(-9, 9), rng.randint(1, 5))
        params = sl2rep.RepParams(j, a, -5, 5)
        assert sl2rep.commutation_relations_check(params)["ok"]
        report = sl2rep.casimir_scalar_check(params)
        assert report["ok"] and report["scalar"] == a * (a - 2)
    # finite-module scalars n^2 - 1 on genuinely invariant blocks
    for j, a, window, dim in ((1, Fraction(-2), (-1, 1), 3),
                              (1, Fraction(-4), (-2, 2), 5),
                              (2, Fraction(-3), (-2, 1), 4)):
        params = sl2rep.RepParams(j, a, *window)
        omega = sl2rep.casimir(params)
        assert omega.matrix == sl2rep.identity_op(params,
                                                  dim * dim - 1).matrix
        assert a * (a - 2) == dim * dim - 1
    for j in (1, 2):
        for m in (1, 2, 3):
            assert sl2rep.invariant_subspace_check(j, m)["ok"]
    for a in (Fraction(1, 2), Fraction(1), Fraction(3), Fraction(-3, 2),
              Fraction(7, 3)):
        assert sl2rep.intertwiner_check(a, (-5, 5))["ok"]
    elapsed = time.monotonic() - start
    assert elapsed < 5.0, f"sl2 suite took {elapsed:.2f}s"
    print(f"criterion 10: PASS (exact algebra suite, {elapsed:.2f}s)")
