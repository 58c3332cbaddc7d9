"""Distribution numerics: special functions, CDFs, and p recomputation."""

from __future__ import annotations

import math
import time

import pytest

from statex import (
    DomainError,
    ParsedResult,
    RangeViolation,
    StatKind,
    TailMode,
    chi2_cdf,
    chi2_sf,
    f_sf,
    normal_cdf,
    recompute_p,
    reg_inc_beta,
    reg_inc_gamma_lower,
    t_cdf,
    t_sf_two_sided,
)
from statex.extract import Comparator

from oracles import beta_grid, beta_oracle, gamma_grid, gamma_lower_oracle


def _result(kind, value=None, df1=None, df2=None, **kwargs) -> ParsedResult:
    return ParsedResult(kind=kind, stat_value=value, df1=df1, df2=df2, **kwargs)


class TestRegIncBeta:
    def test_uniform_case(self):
        # I_x(1,1) = x
        assert reg_inc_beta(1.0, 1.0, 0.3) == pytest.approx(0.3, abs=1e-12)

    def test_symmetry_at_half(self):
        # I_{1/2}(a,a) = 1/2
        assert reg_inc_beta(0.5, 0.5, 0.5) == pytest.approx(0.5, abs=1e-12)

    def test_bounds(self):
        assert reg_inc_beta(2.0, 3.0, 0.0) == 0.0
        assert reg_inc_beta(2.0, 3.0, 1.0) == 1.0

    def test_t_cdf_argument_against_oracle(self):
        x = 12.0 / (12.0 + 2.3**2)
        expected = beta_oracle(6.0, 0.5, x)
        assert reg_inc_beta(6.0, 0.5, x) == pytest.approx(expected, abs=1e-12)

    def test_domain_errors(self):
        with pytest.raises(DomainError):
            reg_inc_beta(0.0, 1.0, 0.5)
        with pytest.raises(DomainError):
            reg_inc_beta(1.0, -2.0, 0.5)
        with pytest.raises(DomainError):
            reg_inc_beta(1.0, 1.0, 1.5)

    def test_oracle_grid(self):
        for a, b, x in beta_grid():
            assert reg_inc_beta(a, b, x) == pytest.approx(
                beta_oracle(a, b, x), abs=1e-10
            ), (a, b, x)


class TestRegIncGammaLower:
    def test_zero(self):
        assert reg_inc_gamma_lower(1.0, 0.0) == 0.0

    def test_monotone_limit(self):
        values = [reg_inc_gamma_lower(0.5, x) for x in (1.0, 5.0, 20.0, 80.0)]
        assert values == sorted(values)
        assert values[-1] == pytest.approx(1.0, abs=1e-12)

    def test_against_series_oracle(self):
        assert reg_inc_gamma_lower(6.0, 1.7) == pytest.approx(
            gamma_lower_oracle(6.0, 1.7), abs=1e-12
        )

    def test_domain_errors(self):
        with pytest.raises(DomainError):
            reg_inc_gamma_lower(0.0, 1.0)
        with pytest.raises(DomainError):
            reg_inc_gamma_lower(1.0, -0.5)

    def test_oracle_grid(self):
        for s, x in gamma_grid():
            assert reg_inc_gamma_lower(s, x) == pytest.approx(
                gamma_lower_oracle(s, x), abs=1e-10
            ), (s, x)


class TestCdfs:
    def test_chi2_gamma_consistency(self):
        # ChiSq_df(x) == P(df/2, x/2) exactly by construction.
        for df in (1.0, 6.0, 12.0, 31.0):
            for x in (0.3, 1.7, 3.4, 20.0):
                assert chi2_cdf(x, df) == reg_inc_gamma_lower(df / 2.0, x / 2.0)

    def test_f_t_square_equivalence(self):
        for t in (0.1, 0.34, 1.0, 2.3, 5.6):
            for df in (1.0, 2.0, 12.0, 34.0, 1234.0):
                assert f_sf(t * t, 1.0, df) == pytest.approx(
                    t_sf_two_sided(t, df), abs=1e-9
                )

    def test_t_converges_to_normal(self):
        for x in (0.0, 0.5, 1.0, 2.0, 3.5, 5.0):
            t_p = t_sf_two_sided(x, 1e6) if x else 1.0
            z_p = math.erfc(x / math.sqrt(2.0))
            assert abs(t_p - z_p) < 1e-6

    def test_monotone_cdfs(self):
        grids = {
            "normal": [normal_cdf(-8 + 16 * i / 999) for i in range(1000)],
            "t": [t_cdf(-8 + 16 * i / 999, 12.0) for i in range(1000)],
            "chi2": [chi2_cdf(40 * i / 999, 12.0) for i in range(1000)],
            "f": [1.0 - f_sf(20 * i / 999, 3.0, 17.0) for i in range(1000)],
        }
        for name, values in grids.items():
            assert all(a <= b + 1e-15 for a, b in zip(values, values[1:])), name


class TestRecomputeP:
    def test_t_value(self):
        rec = recompute_p(_result(StatKind.T, 2.3, 12.0))
        assert rec is not None
        assert rec.value == pytest.approx(0.04019757, abs=1e-6)
        assert rec.method is StatKind.T
        assert rec.tails is TailMode.TWO_TAILED

    def test_f_value(self):
        rec = recompute_p(_result(StatKind.F, 4.5, 1.0, 23.0))
        assert rec.value == pytest.approx(0.04488686, abs=1e-6)

    def test_r_conversion(self):
        rec = recompute_p(_result(StatKind.R, 0.3, 12.0))
        assert rec.value == pytest.approx(0.30, abs=0.005)
        rec = recompute_p(_result(StatKind.R, 0.34, 12.0))
        assert rec.value == pytest.approx(0.23428054, abs=1e-6)

    def test_chi2_family(self):
        for kind in (StatKind.CHI2, StatKind.Q, StatKind.H, StatKind.G2):
            rec = recompute_p(_result(kind, 3.4, 12.0))
            assert rec.value == pytest.approx(0.99200057, abs=1e-6)

    def test_beta_se(self):
        rec = recompute_p(
            ParsedResult(kind=StatKind.BETA_SE, beta=1.2, se_beta=0.34)
        )
        assert 1.2 / 0.34 == pytest.approx(3.53, abs=0.005)
        assert rec.value == pytest.approx(0.0004164845, abs=1e-6)

    def test_z_symmetry(self):
        rec = recompute_p(_result(StatKind.Z, 0.0))
        assert rec.value == 1.0
        assert recompute_p(_result(StatKind.Z, -1.2)).value == pytest.approx(
            recompute_p(_result(StatKind.Z, 1.2)).value, abs=1e-15
        )

    def test_z_ignores_df(self):
        with_df = recompute_p(_result(StatKind.Z, 1.2, 99.0))
        assert with_df.value == pytest.approx(0.23013934, abs=1e-6)

    def test_missing_df_returns_none(self):
        assert recompute_p(_result(StatKind.T, 0.12)) is None
        assert recompute_p(_result(StatKind.F, 4.5, 1.0)) is None
        assert recompute_p(_result(StatKind.CHI2, 3.4)) is None

    def test_unrecomputable_kinds(self):
        assert recompute_p(_result(StatKind.U, 0.3)) is None
        assert recompute_p(_result(StatKind.R2, 0.3)) is None
        assert recompute_p(_result(StatKind.UNKNOWN, 0.3, 12.0)) is None
        assert recompute_p(ParsedResult(kind=StatKind.P_ONLY, reported_p=0.12)) is None

    def test_out_of_range_r_blocked(self):
        result = ParsedResult(
            kind=StatKind.R, stat_value=1.2, df1=12.0,
            range_violations=frozenset({RangeViolation.R_OUT_OF_RANGE}),
        )
        assert recompute_p(result) is None

    def test_one_tailed_halves_sign_symmetric(self):
        two = recompute_p(_result(StatKind.T, 2.3, 12.0))
        one = recompute_p(_result(StatKind.T, 2.3, 12.0), TailMode.ONE_TAILED)
        assert one.value == pytest.approx(two.value / 2.0, abs=1e-15)
        assert one.tails is TailMode.ONE_TAILED
        chi_one = recompute_p(_result(StatKind.CHI2, 3.4, 12.0), TailMode.ONE_TAILED)
        assert chi_one.value == pytest.approx(0.99200057, abs=1e-6)
        assert chi_one.tails is TailMode.TWO_TAILED


def test_grid_runtime_sane():
    start = time.time()
    for a, b, x in beta_grid()[:50]:
        reg_inc_beta(a, b, x)
    assert time.time() - start < 1.0
