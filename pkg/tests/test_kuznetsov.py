"""Trace-formula machinery: admissible weights, geometric side, spectral
side, and the identity checker."""

import math

import numpy as np
import pytest

from maassdensity.errors import DomainError, MissingCoefficientError
from maassdensity.kuznetsov import (
    averaged_eigenvalue,
    geometric_side,
    spectral_side,
    total_mass,
    verify_trace_identity,
    weight_combination,
    weight_gaussian,
    weight_log_conductor,
    weight_spectral,
)
from maassdensity.maassdata import parse_records_text

SAMPLE = parse_records_text(
    """# normalization: hecke-unit
t,parity,norm_sq,lambda_2,lambda_3
9.53,even,8.2,0.65,-0.32
12.17,odd,10.1,-0.93,0.41
13.78,odd,9.4,0.12,0.77
""",
    "csv",
)


def test_weight_constructors_validate():
    with pytest.raises(DomainError):
        weight_spectral(6)
    with pytest.raises(DomainError):
        weight_gaussian(3.0, -1.0)
    with pytest.raises(DomainError):
        weight_combination([])


def test_weights_are_even_and_positive_where_expected():
    grid = np.array([0.5, 2.0, 9.0])
    for w in (weight_spectral(5), weight_gaussian(4.0, 1.5), weight_log_conductor(5)):
        assert np.allclose(w.eval(grid), w.eval(-grid))
        assert np.all(w.eval(grid) >= 0.0)


def test_weight_combination_linearity_on_geometric_side():
    w1 = weight_gaussian(6.0, 1.0)
    w2 = weight_gaussian(11.0, 2.0)
    combo = weight_combination([(2.0, w1), (-0.5, w2)])
    m, n, c_max = 2, 3, 40
    a = geometric_side(m, n, w1, c_max=c_max).total()
    b = geometric_side(m, n, w2, c_max=c_max).total()
    c = geometric_side(m, n, combo, c_max=c_max).total()
    assert abs(c - (2.0 * a - 0.5 * b)) < 1e-9 * (1.0 + abs(c))


def test_geometric_side_breakdown_structure():
    br = geometric_side(1, 1, weight_spectral(5), c_max=80)
    assert br.delta_term > 0.0
    assert br.total() == br.delta_term + br.eisenstein_term + br.kloosterman_contribution
    assert br.residual_imag() < 1e-8 * (1.0 + abs(br.total()))
    assert br.error_budget >= 0.0
    # off-diagonal drops the delta term
    off = geometric_side(2, 1, weight_spectral(5), c_max=80)
    assert off.delta_term == 0.0


def test_geometric_side_validation():
    with pytest.raises(DomainError):
        geometric_side(0, 1, weight_spectral(5))
    with pytest.raises(DomainError):
        geometric_side(1, 1, weight_spectral(5), c_max=0)


def test_residue_and_generic_kloosterman_routes_agree():
    # the h_T fast path must match the direct oscillatory-grid route,
    # exercised through a combo wrapper that hides the h_T kind
    T, m, n, c_max = 5, 2, 2, 60
    fast = geometric_side(m, n, weight_spectral(T), c_max=c_max)
    slow = geometric_side(
        m, n, weight_combination([(1.0, weight_spectral(T))]), c_max=c_max
    )
    tol = 1e-7 * (1.0 + abs(fast.total())) + fast.error_budget + slow.error_budget
    assert abs(fast.total() - slow.total()) < tol


def test_total_mass_scales_like_t_squared():
    a = total_mass(11, c_max=150)
    b = total_mass(21, c_max=150)
    assert 0.25 < (b / 21 ** 2) / (a / 11 ** 2) < 4.0


def test_averaged_eigenvalue_basics():
    assert averaged_eigenvalue(1, 11) == 1.0
    avg = averaged_eigenvalue(2, 11, c_max=150)
    # the average must be small: individual lambda_2 are O(1) with signs
    assert abs(avg) < 1.0
    with pytest.raises(DomainError):
        averaged_eigenvalue(0, 11)


def test_spectral_side_requires_sorted_and_tempered_data():
    with pytest.raises(DomainError):
        spectral_side(1, 1, weight_gaussian(10.0, 2.0), [])
    unsorted_data = [SAMPLE[1], SAMPLE[0]]
    with pytest.raises(DomainError):
        spectral_side(1, 1, weight_gaussian(10.0, 2.0), unsorted_data)
    wild = parse_records_text(
        """# normalization: hecke-unit
t,parity,norm_sq,lambda_2
10.0,even,1.0,2.4
""",
        "csv",
    )
    with pytest.raises(DomainError):
        spectral_side(2, 1, weight_gaussian(10.0, 2.0), wild)


def test_spectral_side_missing_coefficient():
    with pytest.raises(MissingCoefficientError):
        spectral_side(5, 1, weight_gaussian(10.0, 2.0), SAMPLE)


def test_spectral_side_weighted_sum_oracle():
    w = weight_gaussian(11.0, 2.0)
    acc = sum(
        float(w.eval(np.array([r.t]))[0]) / r.norm_sq * r.lambdas[2] for r in SAMPLE
    )
    got, tail = spectral_side(2, 1, w, SAMPLE)
    assert got == pytest.approx(acc, rel=1e-12)
    assert tail >= 0.0


def test_verify_trace_identity_without_data_reports_flags():
    report = verify_trace_identity(1, 1, weight_gaussian(9.0, 1.0), [], c_max=40)
    assert report["flags"]
    assert report["budgets"]["spectral_tail"] == math.inf
    assert "gap" not in report


def test_verify_trace_identity_report_shape():
    # three synthetic forms cannot reproduce the geometric side; the report
    # path (rather than the numbers) is what this test pins down
    from maassdensity.errors import VerificationError

    try:
        report = verify_trace_identity(
            2, 1, weight_gaussian(11.0, 2.0), SAMPLE, c_max=40
        )
    except VerificationError as exc:
        report = exc.report
    assert set(report) >= {"m", "n", "geometric", "spectral", "budgets"}
    assert report["m"] == 2 and report["n"] == 1
