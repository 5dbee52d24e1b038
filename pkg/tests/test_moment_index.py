import math

import numpy as np
import pytest

from chover.distributions import (
    Degenerate,
    GaussianUnitVariance,
    LatticeExp2,
    LogWeibullTail,
    Shifted,
    SymmetricStable,
    lattice_constant,
    tail_prob_log,
)
from chover.moment_index import (
    IndexNotResolvableError,
    MomentIndexResult,
    ProbeRecord,
    moment_functional,
    moment_index_analytic,
    moment_index_numeric,
    truncated_second_moment,
    einmahl_li_condition,
)
from chover.numeric_core import NEG_INF, POS_INF


def family_tail(spec):
    def tail(x):
        return math.exp(tail_prob_log(spec, x))

    return tail


class TestMomentFunctional:
    def test_lattice_divergent_ratio_two(self):
        cert = moment_functional(LatticeExp2(1.0, 2.0), 1.0, 1.0)
        assert not cert.finite
        assert cert.value_or_divergence == POS_INF

    def test_lattice_boundary_divergent(self):
        # b exactly at lam/alpha: ratio 1, still divergent
        cert = moment_functional(LatticeExp2(1.0, 2.0), 1.0, 2.0)
        assert not cert.finite

    def test_lattice_geometric_value(self):
        # ratio 2^(2-3) = 1/2: value c * sum (1/2)^n = c
        c = lattice_constant(1.0, 2.0)
        cert = moment_functional(LatticeExp2(1.0, 2.0), 1.0, 3.0)
        assert cert.finite
        assert cert.value_or_divergence == pytest.approx(c, rel=1e-12)

    def test_lattice_series_oracle(self):
        mpmath = pytest.importorskip("mpmath")
        mpmath.mp.dps = 50
        alpha, lam, b = 2.0, 1.0, 1.25
        c = lattice_constant(alpha, lam)
        expected = float(
            c * sum(mpmath.mpf(2) ** (n * (lam - b * alpha)) for n in range(1, 200))
        )
        cert = moment_functional(LatticeExp2(alpha, lam), alpha, b)
        assert cert.value_or_divergence == pytest.approx(expected, rel=1e-12)

    def test_logweibull_negative_p_finite_everywhere(self):
        for b in (-5.0, 0.0, 3.0):
            cert = moment_functional(LogWeibullTail(1.0, -1.0, 0.5), 1.0, b)
            assert cert.finite

    def test_logweibull_positive_p_infinite_everywhere(self):
        for b in (-5.0, 0.0, 5.0):
            cert = moment_functional(LogWeibullTail(1.0, 1.0, 0.5), 1.0, b)
            assert not cert.finite

    def test_logweibull_value_quadrature_oracle(self):
        from scipy import integrate

        alpha, p, gamma, b = 1.0, -1.0, 0.5, 2.0
        dens = lambda u: math.exp(-alpha * u + p * u**gamma)
        z, _ = integrate.quad(dens, 1.0, 400.0, limit=400)
        # E(|X|^alpha (L|X|)^(-b alpha)) with |X| = e^U: e^(alpha u) u^(-b alpha) weighted
        num, _ = integrate.quad(lambda u: dens(u) * math.exp(alpha * u) * u ** (-b * alpha), 1.0, 400.0, limit=400)
        cert = moment_functional(LogWeibullTail(alpha, p, gamma), alpha, b)
        assert cert.finite
        assert cert.value_or_divergence == pytest.approx(num / z, rel=1e-6)

    def test_stable_finiteness_boundary(self):
        spec = SymmetricStable(1.0)
        assert not moment_functional(spec, 1.0, 1.0).finite  # b = 1/alpha divergent
        assert not moment_functional(spec, 1.0, 0.5).finite
        assert moment_functional(spec, 1.0, 1.5).finite

    def test_stable_mismatch_flagged(self):
        cert = moment_functional(SymmetricStable(1.5), 1.0, 0.0)
        assert cert.finite  # moment order 1 below tail exponent 1.5
        assert "mismatch" in cert.evidence
        cert2 = moment_functional(SymmetricStable(0.5), 1.0, 10.0)
        assert not cert2.finite

    def test_gaussian_always_finite(self):
        for b in (-3.0, 0.0, 4.0):
            cert = moment_functional(GaussianUnitVariance(), 2.0, b)
            assert cert.finite

    def test_gaussian_second_moment_value(self):
        # b = 0: plain E X^2 = 1
        cert = moment_functional(GaussianUnitVariance(), 2.0, 0.0)
        assert cert.value_or_divergence == pytest.approx(1.0, rel=1e-9)

    def test_degenerate(self):
        cert = moment_functional(Degenerate(0.0), 1.0, 2.0)
        assert cert.finite and cert.value_or_divergence == 0.0
        big = moment_functional(Degenerate(math.exp(10.0)), 1.0, 1.0)
        assert big.value_or_divergence == pytest.approx(math.exp(10.0) / 10.0, rel=1e-12)

    def test_shifted_inherits_class(self):
        assert not moment_functional(Shifted(LatticeExp2(1.0, 2.0), 3.0), 1.0, 1.0).finite
        assert moment_functional(Shifted(GaussianUnitVariance(), 3.0), 2.0, 1.0).finite

    def test_evidence_nonempty(self):
        cert = moment_functional(GaussianUnitVariance(), 2.0, 1.0)
        assert cert.evidence


class TestAnalyticIndex:
    @pytest.mark.parametrize("alpha", [0.4, 0.5, 1.0, 1.5, 1.9])
    def test_stable_inverse_alpha(self, alpha):
        res = moment_index_analytic(SymmetricStable(alpha), alpha)
        assert res.index == 1.0 / alpha
        assert res.method == "analytic"

    @pytest.mark.parametrize("lam", [-2.0, 0.0, 1.0, 2.0])
    @pytest.mark.parametrize("alpha", [0.5, 1.0, 2.0])
    def test_lattice_lambda_over_alpha(self, alpha, lam):
        res = moment_index_analytic(LatticeExp2(alpha, lam), alpha)
        if alpha == 2.0:
            assert res.index == max(lam / alpha, 0.0)
        else:
            assert res.index == lam / alpha

    def test_logweibull_signs(self):
        assert moment_index_analytic(LogWeibullTail(1.0, 1.0, 0.5), 1.0).index == POS_INF
        assert moment_index_analytic(LogWeibullTail(1.0, -1.0, 0.5), 1.0).index == NEG_INF

    def test_gaussian_clamped_at_zero(self):
        res = moment_index_analytic(GaussianUnitVariance(), 2.0)
        assert res.index == 0.0
        assert "b > 0" in res.convention

    def test_gaussian_below_two(self):
        assert moment_index_analytic(GaussianUnitVariance(), 1.5).index == NEG_INF

    def test_degenerate(self):
        assert moment_index_analytic(Degenerate(7.0), 1.0).index == NEG_INF
        assert moment_index_analytic(Degenerate(7.0), 2.0).index == 0.0  # clamped

    def test_shifted_matches_base(self):
        base = LatticeExp2(1.0, -1.0)
        assert (
            moment_index_analytic(Shifted(base, 5.0), 1.0).index
            == moment_index_analytic(base, 1.0).index
        )

    def test_alpha_mismatch_extremes(self):
        assert moment_index_analytic(SymmetricStable(1.5), 1.0).index == NEG_INF
        assert moment_index_analytic(SymmetricStable(0.5), 1.0).index == POS_INF
        assert moment_index_analytic(LatticeExp2(1.5, 1.0), 2.0).index == POS_INF

    def test_probes_monotone_enforced(self):
        with pytest.raises(ValueError):
            MomentIndexResult(
                index=1.0,
                method="analytic",
                probes=(
                    ProbeRecord(2.0, "infinite"),
                    ProbeRecord(1.5, "finite"),
                ),
                alpha=1.0,
            )


class TestNumericIndex:
    def test_pareto_like_tail(self):
        res = moment_index_numeric(lambda x: min(1.0, 1.0 / x), 1.0, -2.0, 4.0, 0.1)
        lo, hi = res.interval
        assert lo <= 1.0 <= hi
        assert hi - lo <= 0.1 + 1e-12

    def test_exponential_tail_all_finite(self):
        tail = lambda x: math.exp(-x) if x < 745.0 else 0.0
        res = moment_index_numeric(tail, 2.0, 0.5, 3.0, 0.1)
        assert res.index == 0.5
        assert "all probes finite" in res.convention

    def test_stable_cross_check(self):
        spec = SymmetricStable(1.5)
        res = moment_index_numeric(family_tail(spec), 1.5, -6.0, 6.0, 0.1)
        lo, hi = res.interval
        assert lo <= 2.0 / 3.0 <= hi

    def test_heavy_everywhere_all_infinite(self):
        # tail barely decaying: log-order only, index is +inf-like
        tail = lambda x: min(1.0, 1.0 / math.log(max(x, 2.0)))
        res = moment_index_numeric(tail, 1.0, -2.0, 2.0, 0.5)
        assert res.index == 2.0
        assert "all probes infinite" in res.convention

    def test_bad_bracket_rejected(self):
        with pytest.raises(ValueError):
            moment_index_numeric(lambda x: 1.0 / x, 1.0, 2.0, 1.0, 0.1)
        with pytest.raises(ValueError):
            moment_index_numeric(lambda x: 1.0 / x, 1.0, 0.0, 1.0, -0.1)

    def test_increasing_tail_rejected(self):
        with pytest.raises(ValueError):
            moment_index_numeric(lambda x: math.tanh(x / 1e6), 1.0, 0.0, 2.0, 0.1)

    def test_probe_records_kept(self):
        res = moment_index_numeric(lambda x: min(1.0, 1.0 / x), 1.0, -2.0, 4.0, 0.5)
        assert any(p.verdict == "finite" for p in res.probes)
        assert any(p.verdict == "infinite" for p in res.probes)


class TestConsistencyInvariant:
    @pytest.mark.parametrize("alpha", [0.5, 1.0, 1.5])
    def test_stable_brackets_analytic(self, alpha):
        spec = SymmetricStable(alpha)
        target = moment_index_analytic(spec, alpha).index
        res = moment_index_numeric(family_tail(spec), alpha, -6.0, 6.0, 0.1)
        lo, hi = res.interval
        assert lo - 1e-9 <= target <= hi + 1e-9

    @pytest.mark.parametrize("alpha,lam", [(1.0, -2.0), (2.0, 1.0), (0.5, 2.0)])
    def test_lattice_brackets_analytic(self, alpha, lam):
        spec = LatticeExp2(alpha, lam)
        res = moment_index_numeric(family_tail(spec), alpha, -6.0, 6.0, 0.1)
        lo, hi = res.interval
        assert lo - 1e-9 <= lam / alpha <= hi + 1e-9


class TestMidpointProbe:
    @pytest.mark.parametrize(
        "spec,alpha",
        [
            (SymmetricStable(0.5), 0.5),
            (SymmetricStable(1.5), 1.5),
            (LatticeExp2(1.0, 2.0), 1.0),
            (LatticeExp2(2.0, 1.0), 2.0),
        ],
    )
    def test_halfway_probe_also_finite(self, spec, alpha):
        # For b above the index, the halfway point h = (b + index)/2 is
        # still above the index, hence finite as well.
        index = moment_index_analytic(spec, alpha).index
        b = index + 0.5
        h = (b + index) / 2.0
        assert moment_functional(spec, alpha, b).finite
        assert moment_functional(spec, alpha, h).finite

    def test_monotone_in_b(self):
        spec = LatticeExp2(1.0, 1.0)
        finite_flags = [moment_functional(spec, 1.0, b).finite for b in np.linspace(-1, 3, 17)]
        # once finite, stays finite
        first_finite = finite_flags.index(True)
        assert all(finite_flags[first_finite:])


class TestTruncatedSecondMoment:
    def test_degenerate_zero(self):
        for x in (0.0, 1.0, 100.0):
            assert truncated_second_moment(Degenerate(0.0), x) == 0.0

    def test_degenerate_threshold(self):
        spec = Degenerate(3.0)
        assert truncated_second_moment(spec, 2.0) == 0.0
        assert truncated_second_moment(spec, 3.0) == pytest.approx(9.0)

    def test_lattice_series_oracle(self):
        # alpha = 2, lambda = 1, x = d_3: c * (2 + 4 + 8) = 14c
        c = lattice_constant(2.0, 1.0)
        got = truncated_second_moment(LatticeExp2(2.0, 1.0), math.exp(8.0))
        assert got == pytest.approx(14.0 * c, rel=1e-12)

    def test_monotone_nondecreasing(self):
        spec = LatticeExp2(2.0, 1.0)
        xs = [1.0, 10.0, math.exp(2.0), math.exp(4.0), math.exp(8.0), math.exp(16.0)]
        vals = [truncated_second_moment(spec, x) for x in xs]
        assert all(b >= a for a, b in zip(vals, vals[1:]))

    def test_gaussian_limit_one(self):
        assert truncated_second_moment(GaussianUnitVariance(), 50.0) == pytest.approx(1.0, rel=1e-12)
        assert truncated_second_moment(GaussianUnitVariance(), 1.0) < 1.0

    def test_logweibull_quadrature(self):
        from scipy import integrate

        spec = LogWeibullTail(2.0, -1.0, 0.5)
        dens_u = lambda u: math.exp(-2.0 * u - u**0.5)
        z, _ = integrate.quad(dens_u, 1.0, 300.0, limit=300)
        num, _ = integrate.quad(lambda u: math.exp(2.0 * u) * dens_u(u), 1.0, 4.0, limit=300)
        got = truncated_second_moment(spec, math.exp(4.0))
        assert got == pytest.approx(num / z, rel=1e-8)

    def test_negative_x_rejected(self):
        with pytest.raises(ValueError):
            truncated_second_moment(Degenerate(1.0), -1.0)


class TestEinmahlLiCondition:
    def test_gaussian_holds(self):
        assert einmahl_li_condition(GaussianUnitVariance(), 1.0) == "holds"

    def test_lattice_below_index_fails(self):
        # index of LatticeExp2(2, 1) is 0.5 > b: the decay condition fails
        assert einmahl_li_condition(LatticeExp2(2.0, 1.0), 0.25) == "fails"

    def test_lattice_above_index_holds(self):
        assert einmahl_li_condition(LatticeExp2(2.0, 1.0), 1.0) == "holds"

    def test_b_positive_required(self):
        with pytest.raises(ValueError):
            einmahl_li_condition(GaussianUnitVariance(), 0.0)
