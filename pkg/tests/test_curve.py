import numpy as np
import pytest

from isoasym.curve import CurveError, CurveSpec, derivatives, sample_interval, validate

from conftest import central_diff

EX1 = CurveSpec(("1/2*cos(s)", "1/2*sin(s)", "1/2*s", "sqrt(2)/2*s"), (0.0, 2 * np.pi))
EX2 = CurveSpec(("1/2*sin(s)", "1/2*cos(s)", "0", "sqrt(3)/2*s"), (0.0, 3.0))


def test_first_and_second_derivative_ex1():
    s = 1.1
    r, d1, d2 = derivatives(EX1, s, 2)
    np.testing.assert_allclose(r, [np.cos(s) / 2, np.sin(s) / 2, s / 2, np.sqrt(2) / 2 * s], rtol=1e-15)
    np.testing.assert_allclose(d1, [-np.sin(s) / 2, np.cos(s) / 2, 0.5, np.sqrt(2) / 2], rtol=1e-15)
    np.testing.assert_allclose(d2, [-np.cos(s) / 2, -np.sin(s) / 2, 0, 0], atol=1e-16)


def test_batched_derivatives_shape():
    s = np.linspace(0, 1, 6)
    out = derivatives(EX2, s)
    assert len(out) == 5
    assert all(d.shape == (6, 4) for d in out)
    np.testing.assert_array_equal(out[0][:, 2], 0.0)


def test_order_bounds():
    with pytest.raises(ValueError):
        derivatives(EX1, 0.0, 5)
    assert len(derivatives(EX1, 0.0, 0)) == 1


@pytest.mark.parametrize("curve", [EX1, EX2], ids=["ex1", "ex2"])
@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_symbolic_derivatives_match_finite_differences(curve, k):
    s = np.linspace(*curve.interval, 13)[1:-1]
    fd = central_diff(lambda x: derivatives(curve, x, k - 1)[k - 1], s)
    np.testing.assert_allclose(derivatives(curve, s, k)[k], fd, atol=1e-6)


def test_validate_examples():
    rep = validate(EX1)
    assert rep.passed and rep.max_speed_deviation <= 1e-12
    rep = validate(EX2)
    assert rep.passed
    assert rep.min_second_derivative_norm == pytest.approx(0.5, rel=1e-15)


def test_validate_rejects_non_unit_speed():
    rep = validate(CurveSpec(("s", "s", "0", "0"), (0, 1)))
    assert not rep.passed
    assert rep.max_speed_deviation == pytest.approx(np.sqrt(2) - 1)


def test_validate_rejects_straight_line():
    rep = validate(CurveSpec(("s/sqrt(2)", "s/sqrt(2)", "0", "0"), (0, 1)))
    assert not rep.passed
    assert rep.min_second_derivative_norm == 0.0


def test_validate_reports_domain_errors():
    rep = validate(CurveSpec(("ln(s)", "0", "0", "0"), (0, 1)))
    assert not rep.passed and "evaluation failed" in rep.problems[0]


def test_curve_rejects_bad_input():
    with pytest.raises(CurveError):
        CurveSpec(("s", "t", "0", "0"), (0, 1))
    with pytest.raises(CurveError):
        CurveSpec(("s", "0", "0"), (0, 1))
    with pytest.raises(CurveError):
        CurveSpec(("s", "0", "0", "0"), (1, 1))


def test_sample_interval_open_ends():
    np.testing.assert_allclose(sample_interval((0, 1), 5), [0, .25, .5, .75, 1])
    left = sample_interval((0, 1), 4, (True, False))
    np.testing.assert_allclose(left, [.25, .5, .75, 1])
    both = sample_interval((0, 1), 3, (True, True))
    np.testing.assert_allclose(both, [.25, .5, .75])
