"""Acceptance criteria, one test per criterion.

Each test prints a single pass/fail line (visible with ``pytest -s`` or in
the failure report) and asserts the criterion at its stated tolerance.
Run with: pytest tests/test_acceptance.py -v -s
"""

import math
import time

import numpy as np
import pytest

from contractum.contractions import ContractionSpec, Status, Variant, check_pair, verify_over_finite, verify_over_sample
from contractum.families import builtin_pair
from contractum.fixtures import EXAMPLE_2_2, EXAMPLE_3_4, EXAMPLE_3_10, integral_sin_problem
from contractum.integral import lambda_bound, refined_residual, solve
from contractum.picard import IterationConfig, audit_trace, iterate, verify_uniqueness
from contractum.spaces import FiniteSpace, classify_space, validate_space


def _report(n: int, ok: bool, detail: str) -> None:
    print(f"criterion {n}: {'PASS' if ok else 'FAIL'} - {detail}")
    assert ok, f"criterion {n} failed: {detail}"


def test_criterion_1_example_2_2_validates_at_s3():
    start = time.perf_counter()
    space = EXAMPLE_2_2.space(grid=64)
    report = validate_space(space, 3.0)
    elapsed = time.perf_counter() - start
    ok = report.holds and report.witness is None and elapsed < 5.0
    _report(1, ok,
            f"six-point table + 64-point interval sample is b-rectangular at "
            f"s=3 (minimal s {report.minimal_s:.6f}) in {elapsed:.2f}s")


def test_criterion_2_example_3_4_classification_witnesses():
    flags = classify_space(EXAMPLE_3_4.space(grid=0))
    tri = flags.triangle_witnesses[0] if flags.triangle_witnesses else None
    quad = flags.quadrilateral_witnesses[0] if flags.quadrilateral_witnesses else None
    ok = (
        not flags.is_metric
        and tri is not None
        and (tri.x, tri.z, tri.y) == ("0", "1/3", "1/4")
        and abs(tri.lhs - 0.25) <= 1e-12
        and abs(tri.rhs - 0.08) <= 1e-12
        and not flags.is_rectangular
        and quad is not None
        and (quad.x, quad.u, quad.v, quad.y) == ("1/2", "0", "1/3", "1/4")
        and abs(quad.lhs - 0.25) <= 1e-12
        and abs(quad.rhs - 0.24) <= 1e-12
    )
    _report(2, ok,
            "not a metric space (0, 1/3, 1/4: 0.25 > 0.08) and not rectangular "
            "(1/2, 0, 1/3, 1/4: 0.25 > 0.24)")


def test_criterion_3_type_f_contraction_and_identity_control():
    space = EXAMPLE_3_4.sampled_space(grid=32)
    spec = ContractionSpec(variant=Variant.TYPE_F, s=3.0, pair=EXAMPLE_3_4.pair)
    good = verify_over_finite(spec, space, EXAMPLE_3_4.map)
    bad = verify_over_finite(spec, space, lambda x: x)
    n_pairs = len(space.points) * (len(space.points) - 1) // 2
    ok = (good.passed and good.violated == 0
          and bad.violated == bad.total == n_pairs and bad.vacuous == 0)
    _report(3, ok,
            f"fourth-root map satisfies type-F on {good.total} pairs "
            f"({good.vacuous} vacuous); identity violates all {bad.violated}")


def test_criterion_4_picard_convergence_three_starts():
    starts = [2.0, 1.7, 0.25]
    config = IterationConfig(tol=1e-9)
    all_ok = True
    details = []
    for x0 in starts:
        result = iterate(EXAMPLE_3_4.map, x0, EXAMPLE_3_4.metric, config)
        diag = audit_trace(result.trace, s=3.0)
        run_ok = (result.converged and result.residual <= 1e-9
                  and result.iterations <= 200
                  and abs(result.point - 1.0) <= 1e-4
                  and diag.gap1_strictly_decreasing)
        all_ok &= run_ok
        details.append(f"x0={x0}: {result.iterations} steps")
    uniq = verify_uniqueness(EXAMPLE_3_4.map, starts, EXAMPLE_3_4.metric, config)
    all_ok &= bool(uniq.conclusive and uniq.agree)
    _report(4, all_ok,
            f"all starts reach 1 with decreasing gaps ({', '.join(details)}); "
            f"uniqueness agreed within {uniq.threshold}")


def test_criterion_5_example_3_10_sampled_and_closed_form_orbit():
    spec = ContractionSpec(variant=Variant.TYPE_IM, s=3.0, pair=EXAMPLE_3_10.pair)
    summary = verify_over_sample(spec, EXAMPLE_3_10.sampler(), EXAMPLE_3_10.metric,
                                 EXAMPLE_3_10.map, n=10_000, seed=0)
    result = iterate(EXAMPLE_3_10.map, 2.5, EXAMPLE_3_10.metric,
                     IterationConfig(tol=1e-9))
    orbit_ok = all(
        abs(x_n - 2.5 ** (6.0 ** -n)) <= 1e-12
        for n, x_n in enumerate(result.trace.points))
    ok = (summary.passed and summary.violated == 0
          and result.converged and abs(result.point - 1.0) <= 1e-4 and orbit_ok)
    _report(5, ok,
            f"type-Im holds on 10000 seeded pairs ({summary.vacuous} vacuous); "
            f"sixth-root orbit matches closed-form powers to 1e-12")


def test_criterion_6_dominance_on_random_spaces():
    pair = builtin_pair("ln_plus_sqrt", "inv_1p")
    rng = np.random.default_rng(2024)
    counterexamples = 0
    implications = 0
    for _ in range(500):
        n = int(rng.integers(3, 9))
        M = rng.uniform(0.05, 2.0, (n, n))
        D = np.triu(M, 1) + np.triu(M, 1).T
        space = FiniteSpace(tuple(str(i) for i in range(n)), D)
        images = rng.integers(0, n, n)
        T = lambda p: str(images[int(p)])
        s = float(rng.choice([1.0, 1.5, 3.0]))
        raw = rng.uniform(0, 1, 4)
        betas = tuple(raw / raw.sum() * rng.uniform(0.3, 1.0))
        strong = ContractionSpec(variant=Variant.TYPE_IM, s=s, pair=pair)
        weaker = [
            ContractionSpec(variant=Variant.KANNAN, s=s, pair=pair),
            ContractionSpec(variant=Variant.REICH, s=s, pair=pair),
            ContractionSpec(variant=Variant.BETA_COMBO, s=s, pair=pair, betas=betas),
        ]
        for x in space.points:
            for y in space.points:
                im_verdict = None
                for weak_spec in weaker:
                    v = check_pair(weak_spec, space, T, x, y)
                    if v.status is Status.HOLDS:
                        if im_verdict is None:
                            im_verdict = check_pair(strong, space, T, x, y)
                        implications += 1
                        if im_verdict.status is not Status.HOLDS:
                            counterexamples += 1
    ok = counterexamples == 0 and implications > 0
    _report(6, ok,
            f"Kannan/Reich/beta-combo imply type-Im on 500 random spaces "
            f"({implications} implications, {counterexamples} counterexamples)")


def test_criterion_7_integral_solver_sine_instance():
    problem = integral_sin_problem(m=65)
    assert problem.lam == pytest.approx(math.exp(-3), rel=1e-15)
    config = IterationConfig(tol=1e-10)
    sol_a = solve(problem, config, x0=0.5)
    sol_b = solve(problem, config, x0=-1.0)
    agreement = problem.metric(sol_a.values, sol_b.values)
    resid = refined_residual(problem, sol_a.values, refine=2)  # 129 points
    over = integral_sin_problem(m=65, lam=1.5 * lambda_bound(0.0, 1.0, 3.0))
    flagged = solve(over, config, x0=0.5)
    ok = (sol_a.result.converged and sol_b.result.converged
          and agreement <= 10 * config.tol
          and resid <= 1e-6
          and not sol_a.lambda_bound_exceeded
          and flagged.lambda_bound_exceeded)
    _report(7, ok,
            f"both starts converge and agree (d={agreement:.2e}); 129-point "
            f"residual {resid:.2e} <= 1e-6; over-bound lambda raises the flag")


def test_criterion_8_scaled_gaps_eventually_decrease():
    config = IterationConfig(tol=1e-9)
    runs = []
    for x0 in (2.0, 1.7, 0.25):
        runs.append(("example-3.4", iterate(EXAMPLE_3_4.map, x0,
                                            EXAMPLE_3_4.metric, config), 3.0))
    runs.append(("example-3.10", iterate(EXAMPLE_3_10.map, 2.5,
                                         EXAMPLE_3_10.metric, config), 3.0))
    problem = integral_sin_problem(m=65)
    int_config = IterationConfig(tol=1e-10)
    for x0 in (0.5, -1.0):
        runs.append(("integral-sin", solve(problem, int_config, x0=x0).result, 3.0))
    all_ok = True
    for name, result, s in runs:
        assert result.converged, name
        diag = audit_trace(result.trace, s)
        all_ok &= diag.scaled1_trending_zero
    _report(8, all_ok,
            f"log-scaled gap sequences head down on all {len(runs)} converged "
            f"paper-fixture runs")
