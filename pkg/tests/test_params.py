import math

import mpmath as mp
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracle
from dok.errors import BranchMismatch, DegenerateRoots, InvalidStepSize
from dok.params import (
    SERIES_THRESHOLD,
    StepSize,
    _d_direct,
    _d_series,
    _s_direct,
    _s_series,
    _w_direct,
    _w_series,
    compute_params,
    stable_d,
    stable_s,
    stable_w,
)

STEPS = [0.5, 0.2, 0.1, 0.05, 0.01, 1e-3, 1e-4, 1.0, 0.3, 0.25, 0.2499]


def rel(a, b):
    return abs(float((mp.mpf(a) - b) / b))


class TestStepSize:
    def test_from_n(self):
        s = StepSize.from_n(20)
        assert s.h == 1 / 20 and s.n == 20 and s.label == "1/20"

    @pytest.mark.parametrize("text,h,label", [("0.1", 0.1, "0.1"), ("1/8", 0.125, "1/8"), (" 2/5 ", 0.4, "2/5")])
    def test_parse(self, text, h, label):
        s = StepSize.parse(text)
        assert s.h == h and s.label == label

    @pytest.mark.parametrize("bad", [0.0, -0.1, math.pi, 4.0, math.inf, math.nan])
    def test_rejects(self, bad):
        with pytest.raises(InvalidStepSize):
            StepSize(bad)

    @pytest.mark.parametrize("text", ["abc", "1/0", "", "0"])
    def test_parse_rejects(self, text):
        with pytest.raises(InvalidStepSize):
            StepSize.parse(text)

    def test_nominal_window(self):
        assert StepSize(1.0).nominal
        assert not StepSize(2.0).nominal

    def test_mismatched_n(self):
        with pytest.raises(InvalidStepSize):
            StepSize(0.3, n=3)


class TestStableScalars:
    @pytest.mark.parametrize("h", STEPS)
    def test_d_matches_oracle(self, h):
        assert rel(stable_d(h), oracle.params(h)["d"]) <= 1e-13

    @pytest.mark.parametrize("h", STEPS)
    def test_s_matches_oracle(self, h):
        assert rel(stable_s(h), oracle.params(h)["s"]) <= 1e-13

    @pytest.mark.parametrize("h", STEPS)
    def test_w_matches_oracle(self, h):
        assert rel(stable_w(h), oracle.params(h)["w"]) <= 1e-13

    def test_frozen_values(self):
        assert stable_d(0.1) == pytest.approx(3.3300011902557575e-4, rel=1e-13)
        assert stable_d(1.0) == pytest.approx(0.30116867893975679, rel=1e-13)
        assert stable_s(0.1) == pytest.approx(3.3288920620815569e-5, rel=1e-13)
        assert stable_s(0.5) == pytest.approx(0.020151152934069859, rel=1e-13)

    def test_small_h_limits(self):
        h = 1e-4
        assert stable_d(h) / (h**3 / 3) == pytest.approx(1.0, abs=1e-8)
        assert stable_s(h) / (h**4 / 3) == pytest.approx(1.0, abs=1e-8)

    @pytest.mark.parametrize("pair", [(_d_direct, _d_series), (_s_direct, _s_series), (_w_direct, _w_series)])
    def test_branches_agree_on_overlap(self, pair):
        direct, series = pair
        for h in [SERIES_THRESHOLD / 2 * (1 + k / 20) for k in range(61)]:
            assert abs(direct(h) - series(h)) <= 1e-10 * abs(series(h))

    @given(st.floats(min_value=1e-6, max_value=1.0))
    @settings(max_examples=200, deadline=None)
    def test_positive(self, h):
        assert stable_d(h) > 0 and stable_s(h) > 0 and stable_w(h) > 0

    def test_strict_mode_runs_both_branches(self, monkeypatch):
        monkeypatch.setenv("DOK_PRECISION_MODE", "strict")
        for h in [0.13, 0.2, 0.3, 0.49]:
            compute_params(h)

    def test_strict_mode_detects_disagreement(self, monkeypatch):
        import dok.params as mod

        monkeypatch.setenv("DOK_PRECISION_MODE", "strict")
        monkeypatch.setattr(mod, "_d_series", lambda h: 1.001 * _d_series(h))
        with pytest.raises(BranchMismatch):
            mod.stable_d(0.2)
        # outside the overlap window only one branch runs
        mod.stable_d(0.05)


class TestComputeParams:
    @pytest.mark.parametrize("h", STEPS)
    def test_against_oracle(self, h):
        p = compute_params(h)
        o = oracle.params(h)
        for name in ("lambda1", "lambda2", "a1", "k", "c"):
            assert rel(getattr(p, name), o[name]) <= 1e-11, name

    def test_frozen_h01(self):
        p = compute_params(0.1)
        assert p.lambda1 == pytest.approx(-0.26825880909284962, rel=1e-13)
        assert p.a1 == pytest.approx(-2.7785457094681422, rel=1e-12)
        assert p.k == pytest.approx(6006.0038592550531, rel=1e-13)
        assert p.branch == "series"
        assert compute_params(0.5).branch == "direct"

    def test_small_h_limit(self):
        assert abs(compute_params(1e-4).lambda1 - (math.sqrt(3) - 2)) <= 1e-6

    @given(st.floats(min_value=1e-5, max_value=1.0))
    @settings(max_examples=300, deadline=None)
    def test_root_identities(self, h):
        p = compute_params(h)
        assert abs(p.lambda1) < 1 and p.lambda1 < 0
        assert abs(p.lambda1 * p.lambda2 - 1) <= 1e-13
        scale = abs(p.c) + 2
        assert abs(p.q2(p.lambda1)) <= 1e-12 * scale
        assert abs(p.q2(p.lambda2)) <= 1e-12 * scale * p.lambda2**2
        assert abs(p.b1 * p.lambda1**2 + p.a1) <= 1e-12 * abs(p.a1)
        assert p.a1 < 0
        assert p.d > 0 and p.s > 0

    def test_b1_definition(self):
        p = compute_params(0.1)
        assert p.b1 == -p.a1 / p.lambda1**2

    def test_centre_term(self):
        for h in (0.1, 0.7, 1e-3):
            assert rel(compute_params(h).centre_term, oracle.params(h)["centre"]) <= 1e-12

    def test_degenerate_roots_near_pi(self):
        with pytest.raises(DegenerateRoots):
            compute_params(math.pi - 1e-13)

    def test_extended_range_accepted(self):
        p = compute_params(2.0)
        assert abs(p.lambda1) < 1
        assert not p.step.nominal
