from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings as hsettings, strategies as st

from chainedbell import (
    BlochVector,
    DeterministicStrategy,
    FiniteConditionalDistribution,
    IncompleteDataError,
    InvalidInputError,
    LeggettHiddenDist,
    PLANE_PLUS_H,
    PLANE_PLUS_L,
    SignalingError,
    UndefinedConditionalError,
    apply_werner_noise,
    build_plan,
    case4_grid_check,
    check_nonsignaling,
    falsification_report,
    leggett_critical,
    leggett_expected_distance,
    leggett_outcome,
    lhv_min_chained,
    lhv_mixture,
    markov_violation,
    min_visibility,
    phi_plus_state,
    predicted_chained_value,
    quantum_model,
    tightness_model,
    variational_distance,
    verify_lemma_bound,
)
from chainedbell.alttheories import leggett_critical_is_tabulated

# 4-decimal critical values for the four hidden-polarization model cases.
CRITICAL_TABLE = {
    (1, 2): 0.3536, (1, 3): 0.4330, (1, 4): 0.4619,
    (1, 5): 0.4755, (1, 6): 0.4830, (1, 7): 0.4875,
    (2, 2): 0.2, (2, 3): 0.3062, (2, 4): 0.3266,
    (2, 5): 0.3362, (2, 6): 0.3415, (2, 7): 0.3447,
    (3, 2): 0.25, (3, 3): 0.25, (3, 4): 0.25,
    (3, 5): 0.25, (3, 6): 0.25, (3, 7): 0.25,
    (4, 2): 0.1768, (4, 3): 0.2165, (4, 4): 0.2310,
    (4, 5): 0.2378, (4, 6): 0.2415, (4, 7): 0.2437,
}

# Measured deltas of the bundled experiment (primary plane, all N; the
# orthogonal plane was measured at N=6 only).
MEASURED_DELTA1 = {2: 0.3125, 3: 0.2437, 4: 0.2094, 5: 0.2015, 6: 0.1942, 7: 0.1948}
MEASURED_DELTA2 = {6: 0.2297}

distributions = st.lists(
    st.floats(0.001, 1.0), min_size=4, max_size=4
).map(lambda raw: [x / sum(raw) for x in raw])


class TestVariationalDistance:
    def test_known_value(self):
        assert variational_distance([1.0, 0.0], [0.5, 0.5]) == pytest.approx(0.5)

    def test_alphabet_mismatch_rejected(self):
        with pytest.raises(InvalidInputError):
            variational_distance([1.0, 0.0], [1.0, 0.0, 0.0])

    @given(distributions, distributions)
    def test_metric_properties(self, p, q):
        d = variational_distance(p, q)
        assert 0.0 <= d <= 1.0 + 1e-12
        assert d == pytest.approx(variational_distance(q, p), abs=1e-12)
        assert variational_distance(p, p) == 0.0

    @given(distributions, distributions, distributions)
    def test_triangle_inequality(self, p, q, r):
        d_pr = variational_distance(p, r)
        d_pq = variational_distance(p, q)
        d_qr = variational_distance(q, r)
        assert d_pr <= d_pq + d_qr + 1e-12


class TestFiniteConditionalDistribution:
    def test_unnormalized_rejected(self):
        table = np.zeros((2, 2, 1, 1, 1, 1))
        table[0, 0, 0, 0, 0, 0] = 0.9
        with pytest.raises(InvalidInputError):
            FiniteConditionalDistribution(
                table=table, z_values=(0,), a_values=(0,), b_values=(1,))

    def test_negative_rejected(self):
        table = np.zeros((2, 2, 1, 1, 1, 1))
        table[0, 0, 0, 0, 0, 0] = 1.5
        table[1, 1, 0, 0, 0, 0] = -0.5
        with pytest.raises(InvalidInputError):
            FiniteConditionalDistribution(
                table=table, z_values=(0,), a_values=(0,), b_values=(1,))

    def test_unknown_label_rejected(self):
        dist = tightness_model(0.2, 2)
        with pytest.raises(InvalidInputError):
            dist.joint_xy(5, 1, 0)

    def test_zero_probability_conditional_undefined(self):
        dist = tightness_model(0.0, 2)  # X = -1 never happens
        with pytest.raises(UndefinedConditionalError):
            dist.conditional_z_given_x(0, 1, 0, -1)


class TestNonSignaling:
    def test_tightness_family_is_nonsignaling(self):
        report = check_nonsignaling(tightness_model(0.3, 4))
        assert report.passed
        assert report.max_deviation <= 1e-12

    def test_signaling_distribution_detected(self):
        # Alice's outcome distribution depends on Bob's input b.
        table = np.zeros((2, 2, 1, 1, 2, 1))
        table[0, 0, 0, 0, 0, 0] = 1.0      # b=first: X always +1
        table[1, 0, 0, 0, 1, 0] = 1.0      # b=second: X always -1
        dist = FiniteConditionalDistribution(
            table=table, z_values=(0,), a_values=(0,), b_values=(1, 3))
        report = check_nonsignaling(dist)
        assert not report.passed
        assert "X" in report.violation and "B" in report.violation
        # the two branches sit 0.5 away from their mean
        assert report.max_deviation == pytest.approx(0.5)

    def test_quantum_statistics_are_nonsignaling(self, plan6):
        dist = quantum_model(plan6, phi_plus_state())
        assert check_nonsignaling(dist).passed


class TestLemmaBound:
    def test_tightness_family_saturates(self, plan6):
        for eps in (0.1, 0.25, 0.4, 0.5):
            report = verify_lemma_bound(tightness_model(eps, 6), plan6)
            assert report.satisfied
            assert report.i_n == pytest.approx(1.0, abs=1e-12)
            assert report.nu_n == pytest.approx(0.5 - eps, abs=1e-12)
            assert report.max_violation == pytest.approx(1.0 - eps, abs=1e-12)
            assert report.margin == pytest.approx(0.0, abs=1e-12)

    def test_quantum_model_satisfies_bound(self, plan6):
        report = verify_lemma_bound(quantum_model(plan6, phi_plus_state()), plan6)
        assert report.satisfied
        assert report.max_violation == pytest.approx(0.0, abs=1e-12)
        assert report.i_n == pytest.approx(predicted_chained_value(6, 1.0), abs=1e-9)

    def test_revealed_hidden_variable_stays_within_bound(self):
        plan = build_plan(3)
        always_plus = DeterministicStrategy(
            f={a: +1 for a in (0, 2, 4)}, g={b: +1 for b in (1, 3, 5)})
        always_minus = DeterministicStrategy(
            f={a: -1 for a in (0, 2, 4)}, g={b: -1 for b in (1, 3, 5)})
        dist = lhv_mixture(3, [always_plus, always_minus], [0.5, 0.5])
        report = verify_lemma_bound(dist, plan)
        assert report.satisfied
        # knowing X pins the strategy label completely here
        assert report.max_violation == pytest.approx(0.5, abs=1e-12)
        assert report.i_n == pytest.approx(1.0, abs=1e-12)

    def test_signaling_input_rejected(self, plan6):
        table = np.zeros((2, 2, 1, 6, 6, 1))
        a_values = (0, 2, 4, 6, 8, 10)
        b_values = (1, 3, 5, 7, 9, 11)
        for ai in range(6):
            for bi in range(6):
                if bi == 0:
                    table[0, 0, 0, ai, bi, 0] = 1.0
                else:
                    table[1, 1, 0, ai, bi, 0] = 1.0
        dist = FiniteConditionalDistribution(
            table=table, z_values=(0,), a_values=a_values, b_values=b_values)
        with pytest.raises(SignalingError):
            verify_lemma_bound(dist, plan6)

    def test_alphabet_mismatch_rejected(self, plan6):
        with pytest.raises(InvalidInputError):
            verify_lemma_bound(tightness_model(0.2, 5), plan6)

    def test_random_lhv_mixtures_satisfy_bound(self):
        rng = np.random.default_rng(20260814)
        plan = build_plan(4)
        a_values = (0, 2, 4, 6)
        b_values = (1, 3, 5, 7)
        for _trial in range(100):
            n_strategies = int(rng.integers(1, 5))
            strategies = [
                DeterministicStrategy(
                    f={a: int(s) for a, s in zip(
                        a_values, rng.choice([-1, 1], size=4))},
                    g={b: int(s) for b, s in zip(
                        b_values, rng.choice([-1, 1], size=4))},
                )
                for _ in range(n_strategies)
            ]
            raw = rng.random(n_strategies)
            weights = raw / raw.sum()
            dist = lhv_mixture(4, strategies, list(weights))
            report = verify_lemma_bound(dist, plan)
            assert report.satisfied
            assert report.i_n >= 1.0 - 1e-9  # LHV bound


class TestLhvBruteForce:
    def test_minimum_is_one_for_small_n(self):
        for n in range(2, 8):
            minimum, strategy = lhv_min_chained(n)
            assert minimum == 1.0
            assert set(strategy.f) == set(range(0, 2 * n, 2))
            assert set(strategy.g) == set(range(1, 2 * n, 2))

    def test_argmin_strategy_achieves_minimum(self):
        minimum, strategy = lhv_min_chained(5)
        value = (1.0 if strategy.f[0] == strategy.g[9] else 0.0)
        for a, b in [(0, 1), (2, 1), (2, 3), (4, 3), (4, 5),
                     (6, 5), (6, 7), (8, 7), (8, 9)]:
            value += 0.0 if strategy.f[a] == strategy.g[b] else 1.0
        assert value == minimum

    def test_out_of_range_rejected(self):
        with pytest.raises(InvalidInputError):
            lhv_min_chained(1)
        with pytest.raises(InvalidInputError):
            lhv_min_chained(11)

    def test_single_strategy_mixture_matches_enumeration(self):
        _, strategy = lhv_min_chained(3)
        dist = lhv_mixture(3, [strategy], [1.0])
        report = verify_lemma_bound(dist, build_plan(3))
        assert report.i_n == pytest.approx(1.0, abs=1e-12)


class TestTightnessModel:
    def test_epsilon_bounds_enforced(self):
        with pytest.raises(InvalidInputError):
            tightness_model(-0.1, 4)
        with pytest.raises(InvalidInputError):
            tightness_model(0.6, 4)

    @given(st.floats(0.01, 0.5), st.integers(2, 7))
    @hsettings(max_examples=25, deadline=None)
    def test_violation_equals_one_minus_epsilon(self, eps, n):
        report = verify_lemma_bound(tightness_model(eps, n), build_plan(n))
        assert report.max_violation == pytest.approx(1.0 - eps, abs=1e-12)
        assert report.margin == pytest.approx(0.0, abs=1e-12)


class TestLeggettModel:
    def test_outcome_law(self):
        alpha = BlochVector(1, 0, 0)
        z = BlochVector(1, 0, 0)
        assert leggett_outcome(alpha, z) == (1.0, 0.0)
        p_plus, p_minus = leggett_outcome(alpha, BlochVector(0, 1, 0))
        assert p_plus == pytest.approx(0.5)
        assert p_plus + p_minus == pytest.approx(1.0)

    def test_fixed_atom_distance(self):
        alpha = BlochVector(1, 0, 0)
        dist = LeggettHiddenDist.fixed(BlochVector(0, 1, 0))
        assert leggett_expected_distance(dist, alpha) == pytest.approx(0.0)
        aligned = LeggettHiddenDist.fixed(alpha)
        assert leggett_expected_distance(aligned, alpha) == pytest.approx(0.5)

    def test_uniform_sphere_analytic_value(self):
        dist = LeggettHiddenDist.uniform()
        assert leggett_expected_distance(dist, BlochVector(1, 0, 0)) == 0.25

    def test_uniform_sphere_monte_carlo_agrees(self):
        dist = LeggettHiddenDist.uniform()
        mc = leggett_expected_distance(
            dist, BlochVector(0, 0, 1), mc_samples=1_000_000, seed=4)
        assert mc == pytest.approx(0.25, abs=0.002)

    def test_uniform_sphere_is_direction_independent(self):
        dist = LeggettHiddenDist.uniform()
        rng = np.random.default_rng(17)
        values = []
        for _ in range(50):
            raw = rng.standard_normal(3)
            alpha = BlochVector.from_array(raw / np.linalg.norm(raw))
            values.append(leggett_expected_distance(dist, alpha))
        assert max(values) - min(values) == 0.0

    def test_atom_weights_validated(self):
        with pytest.raises(InvalidInputError):
            LeggettHiddenDist.from_atoms([(BlochVector(1, 0, 0), 0.7)])
        with pytest.raises(InvalidInputError):
            LeggettHiddenDist.from_atoms([(BlochVector(1, 0, 0), -1.0),
                                          (BlochVector(0, 1, 0), 2.0)])

    def test_mc_sampling_of_atoms_matches_analytic(self):
        dist = LeggettHiddenDist.in_plane_atoms(
            PLANE_PLUS_L, [(0.0, 0.25), (math.pi / 3, 0.75)])
        alpha = PLANE_PLUS_L.embed(1.0, 0.0)
        analytic = leggett_expected_distance(dist, alpha)
        mc = leggett_expected_distance(dist, alpha, mc_samples=200_000, seed=8)
        assert mc == pytest.approx(analytic, abs=0.002)


class TestLeggettCritical:
    def test_full_table_to_four_decimals(self):
        for (case, n), want in CRITICAL_TABLE.items():
            assert round(leggett_critical(case, n), 4) == pytest.approx(want)

    def test_case2_n2_is_tabulated_special_case(self):
        assert leggett_critical_is_tabulated(2, 2)
        assert not leggett_critical_is_tabulated(2, 3)
        assert not leggett_critical_is_tabulated(4, 2)
        assert leggett_critical(2, 2) == 0.2
        # the generic formula would give a different number there
        assert leggett_critical(2, 2) != pytest.approx(
            math.cos(math.pi / 4) / (2 * math.sqrt(2)))

    def test_case_validation(self):
        with pytest.raises(InvalidInputError):
            leggett_critical(5, 4)
        with pytest.raises(InvalidInputError):
            leggett_critical(1, 1)

    def test_min_visibilities(self):
        for case, (v_want, n_want) in {
            1: (0.821, 3), 2: (0.906, 4), 3: (0.946, 5), 4: (0.951, 5),
        }.items():
            v_got, n_got = min_visibility(case)
            assert v_got == pytest.approx(v_want, abs=1e-3)
            assert n_got == n_want


class TestFalsification:
    def test_verdict_pattern_of_reference_experiment(self):
        ruled_out_cells = set()
        for n in MEASURED_DELTA1:
            for case in (1, 3):
                verdict = falsification_report(case, n, MEASURED_DELTA1[n])
                if verdict.ruled_out:
                    ruled_out_cells.add((case, n))
            for case in (2, 4):
                if n in MEASURED_DELTA2:
                    verdict = falsification_report(
                        case, n, MEASURED_DELTA1[n], MEASURED_DELTA2[n])
                    if verdict.ruled_out:
                        ruled_out_cells.add((case, n))
        expected = (
            {(1, n) for n in MEASURED_DELTA1}
            | {(3, n) for n in (3, 4, 5, 6, 7)}
            | {(2, 6), (4, 6)}
        )
        assert ruled_out_cells == expected

    def test_two_plane_cases_require_second_delta(self):
        with pytest.raises(IncompleteDataError):
            falsification_report(2, 6, 0.19)
        with pytest.raises(IncompleteDataError):
            falsification_report(4, 6, 0.19)
        # single-plane cases do not
        assert falsification_report(1, 6, 0.19).ruled_out

    def test_margin_sign_matches_verdict(self):
        positive = falsification_report(4, 6, 0.1942, 0.2297)
        assert positive.ruled_out
        assert positive.margin > 0
        negative = falsification_report(3, 2, 0.3125)
        assert not negative.ruled_out
        assert negative.margin < 0

    def test_worst_delta_governs(self):
        # ruled out only if *every* plane's delta beats the critical value
        verdict = falsification_report(4, 6, 0.10, 0.30)
        assert not verdict.ruled_out


class TestCase4Geometry:
    def test_two_atom_value_exact_for_odd_n(self):
        for n in (3, 5, 7):
            chk = case4_grid_check(n, PLANE_PLUS_L, PLANE_PLUS_H)
            want = 0.25 * math.cos(math.pi / (2 * n))
            assert chk.two_atom_value == pytest.approx(want, abs=1e-12)
            assert chk.best_symmetric_pair == pytest.approx(want, abs=1e-12)

    def test_even_n_hits_quarter_instead(self):
        # on even grids one in-plane direction coincides with a measurement
        # direction, so the pair construction cannot do better than 1/4
        for n in (4, 6):
            chk = case4_grid_check(n, PLANE_PLUS_L, PLANE_PLUS_H)
            assert chk.two_atom_value == pytest.approx(0.25, abs=1e-12)
            assert chk.two_atom_value >= 0.25 * math.cos(math.pi / (2 * n))

    def test_pairs_beat_single_atoms(self):
        for n in (3, 4, 5, 6):
            chk = case4_grid_check(n, PLANE_PLUS_L, PLANE_PLUS_H)
            assert chk.best_symmetric_pair <= chk.best_single_atom + 1e-12
            assert chk.argmin_theta == pytest.approx(0.0, abs=1e-12)

    def test_arc_requires_orthogonal_far_axes(self):
        with pytest.raises(InvalidInputError):
            LeggettHiddenDist.two_atom(PLANE_PLUS_L, PLANE_PLUS_L)


class TestQuantumHelpers:
    def test_quantum_model_matches_prediction(self):
        for n, v in ((3, 1.0), (6, 1.0), (6, 0.9)):
            plan = build_plan(n)
            state = apply_werner_noise(phi_plus_state(), v)
            report = verify_lemma_bound(quantum_model(plan, state), plan)
            assert report.i_n == pytest.approx(
                predicted_chained_value(n, v), abs=1e-9)
            assert report.nu_n == pytest.approx(0.0, abs=1e-12)

    def test_mixture_weights_validated(self):
        strategy = DeterministicStrategy(f={0: 1, 2: 1}, g={1: 1, 3: 1})
        with pytest.raises(InvalidInputError):
            lhv_mixture(2, [strategy], [0.5])
        with pytest.raises(InvalidInputError):
            lhv_mixture(2, [], [])
