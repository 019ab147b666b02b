import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate

from jacobifde.analysis import (
    convergence_study,
    empirical_rate,
    error_l2,
    error_weighted,
    error_weighted_direct,
    predicted_rate,
)
from jacobifde.errors import DomainError
from jacobifde.problem import ProblemSpec, example_1, example_2, solve_beta, transform
from jacobifde.solver import evaluate, solve

from reference_tables import N_LIST, TABLES

STUDY_CASES = [(t["make"], t["alpha"], t["r"]) for t in TABLES.values()]


@pytest.fixture(scope="module")
def reports():
    return {key: convergence_study(t["make"](t["alpha"], t["r"]), N_LIST) for key, t in TABLES.items()}


class TestErrorNorms:
    def test_self_error_is_zero(self):
        tp = transform(example_1(1.7, 0.34))
        sol = solve(tp, 12)
        assert error_weighted(sol, sol) < 1e-14
        assert error_l2(sol, sol) < 1e-14

    def test_table_1_first_row(self):
        spec = example_1(1.7, 0.34)
        sol = solve(transform(spec), 16)
        assert error_weighted(sol, spec.exact_solution) == pytest.approx(2.69e-4, rel=0.05)
        assert error_l2(sol, spec.exact_solution) == pytest.approx(5.33e-5, rel=0.05)

    def test_table_6_middle_row(self):
        spec = example_2(1.4, 0.5)
        sol = solve(transform(spec), 20)
        assert error_weighted(sol, spec.exact_solution) == pytest.approx(1.73e-4, rel=0.05)

    @pytest.mark.parametrize("make,alpha,r", STUDY_CASES + [(example_1, 1.9, 0.1), (example_2, 1.1, 0.9)])
    def test_factored_matches_direct(self, make, alpha, r):
        spec = make(alpha, r)
        sol = solve(transform(spec), 16)
        assert error_weighted(sol, spec.exact_solution) == pytest.approx(
            error_weighted_direct(sol, spec.exact_solution), rel=1e-9
        )

    def test_l2_against_scipy_quad(self):
        spec = example_2(1.4, 0.62)
        sol = solve(transform(spec), 16)
        diff2 = lambda x: float((spec.exact_solution(x) - evaluate(sol, x)) ** 2)
        ref, _ = integrate.quad(diff2, 0, 1, limit=400, epsabs=1e-16, epsrel=1e-12)
        assert error_l2(sol, spec.exact_solution) == pytest.approx(math.sqrt(ref), rel=1e-8)

    def test_direct_rejects_endpoint_beta(self):
        spec = example_1(1.5, 1.0)
        sol = solve(transform(spec), 4)
        with pytest.raises(DomainError):
            error_weighted_direct(sol, spec.exact_solution)

    @pytest.mark.parametrize("make,alpha,r", STUDY_CASES)
    def test_quad_order_stability(self, make, alpha, r):
        spec = make(alpha, r)
        sol = solve(transform(spec), 20)
        base = error_weighted(sol, spec.exact_solution, quad_order=80)
        assert error_weighted(sol, spec.exact_solution, quad_order=160) == pytest.approx(base, rel=1e-3)
        base = error_l2(sol, spec.exact_solution, quad_order=80)
        assert error_l2(sol, spec.exact_solution, quad_order=160) == pytest.approx(base, rel=1e-3)

    @settings(max_examples=15, deadline=None)
    @given(alpha=st.floats(1.05, 1.95), r=st.floats(0.0, 1.0), N=st.integers(0, 20), second=st.booleans())
    def test_norm_ordering(self, alpha, r, N, second):
        spec = (example_2 if second else example_1)(alpha, r)
        sol = solve(transform(spec), N)
        assert error_l2(sol, spec.exact_solution) <= error_weighted(sol, spec.exact_solution)


class TestRates:
    def test_equal_errors(self):
        assert empirical_rate(1e-3, 1e-3, 4, 8) == 0.0

    @given(p=st.floats(0.5, 4.0), n1=st.integers(1, 50), gap=st.integers(1, 50))
    def test_power_law(self, p, n1, gap):
        n2 = n1 + gap
        rate = empirical_rate((n1 + 1.0) ** -p, (n2 + 1.0) ** -p, n1, n2)
        assert rate == pytest.approx(p, rel=1e-10)

    def test_tabulated_l2_rate(self):
        assert empirical_rate(4.03e-5, 3.13e-5, 18, 20) == pytest.approx(2.52, abs=0.02)

    def test_invalid(self):
        with pytest.raises(DomainError):
            empirical_rate(1.0, 0.5, 8, 8)
        with pytest.raises(DomainError):
            empirical_rate(0.0, 0.5, 4, 8)

    @pytest.mark.parametrize("alpha,beta,expected", [(1.7, 0.9, "2.10"), (1.4, 0.6, "2.20"), (1.4, 0.7, "2.30")])
    def test_predicted(self, alpha, beta, expected):
        assert f"{predicted_rate(alpha, beta):.2f}" == expected


class TestConvergenceStudy:
    def test_rows_and_metadata(self, reports):
        for key, report in reports.items():
            t = TABLES[key]
            assert [row.N for row in report.rows] == list(N_LIST)
            assert report.rows[0].rate_weighted is None and report.rows[0].rate_l2 is None
            assert report.beta == pytest.approx(solve_beta(t["alpha"], t["r"]))
            assert report.predicted_rate == pytest.approx(predicted_rate(t["alpha"], report.beta))

    def test_last_weighted_rate_near_prediction(self, reports):
        for report in reports.values():
            assert abs(report.rows[-1].rate_weighted - report.predicted_rate) < 0.15

    def test_errors_decay(self, reports):
        for report in reports.values():
            ew = [row.err_weighted for row in report.rows]
            el = [row.err_l2 for row in report.rows]
            assert all(a > b for a, b in zip(ew, ew[1:]))
            assert all(a > b for a, b in zip(el, el[1:]))

    def test_matches_reference(self, reports):
        for key, report in reports.items():
            t = TABLES[key]
            np.testing.assert_allclose([row.err_weighted for row in report.rows], t["err_weighted"], rtol=0.05)
            np.testing.assert_allclose([row.err_l2 for row in report.rows], t["err_l2"], rtol=0.05)

    def test_single_entry(self):
        report = convergence_study(example_1(1.7, 0.34), [16])
        assert len(report.rows) == 1
        assert report.rows[0].rate_weighted is None

    def test_workers_preserve_order_and_values(self):
        spec = example_2(1.7, 0.34)
        serial = convergence_study(spec, [4, 8, 12, 16])
        threaded = convergence_study(spec, [4, 8, 12, 16], workers=4)
        assert serial.rows == threaded.rows

    def test_invalid(self):
        with pytest.raises(DomainError):
            convergence_study(example_1(1.7, 0.34), [8, 8])
        with pytest.raises(DomainError):
            convergence_study(example_1(1.7, 0.34), [])
        no_exact = ProblemSpec(alpha=1.5, r=0.5, K=np.exp, f=np.exp)
        with pytest.raises(DomainError):
            convergence_study(no_exact, [4])
