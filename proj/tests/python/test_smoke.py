"""Smoke tests for the python bindings."""

import math

import pytest

import qspecial as qs


def test_q_gamma_small_integers():
    # Gamma_q(3) = 1 + q
    assert qs.q_gamma(3.0, 0.5).value == pytest.approx(1.5, rel=1e-13)
    assert qs.q_gamma(1.0, 0.3).value == pytest.approx(1.0, rel=1e-13)
    assert qs.q_gamma(2.0, 0.9).value == pytest.approx(1.0, rel=1e-13)


def test_evaluation_fields():
    e = qs.q_psi(0.5, 0.5)
    assert math.isfinite(e.value)
    assert e.est_error >= 0.0
    assert e.terms_used > 0
    assert isinstance(e.flag_names, str)
    assert float(e) == e.value


def test_pole_raises():
    with pytest.raises(qs.PoleError):
        qs.q_gamma(-2.0, 0.5)
    with pytest.raises(qs.DomainError):
        qs.q_gamma(1.0, 1.5)


def test_bessel_and_neumann():
    assert qs.bessel_j(0.0, 0.0, 0.5).value == 1.0
    j = qs.bessel_j(1.0, 1.0, 0.5).value
    n = qs.neumann_n(1.0, 1.0, 0.5).value
    assert math.isfinite(j) and math.isfinite(n)
    with pytest.raises(qs.DomainError):
        qs.neumann_n(1.0, 0.0, 0.5)


def test_residue_closed_forms():
    # residue of psi_q is -1 at every pole
    assert qs.q_psi_residue(2, 0.5) == -1.0
    r = qs.q_gamma_residue(1, 0.5)
    assert qs.psi_over_gamma_limit(1, 0.5) == pytest.approx(-1.0 / r, rel=1e-13)


def test_verify_suite():
    names = qs.verify_suite_names()
    assert "all" in names and "product" in names
    report = qs.verify_suite("residue")
    assert report["total"] == len(report["cases"]) > 0
    assert report["failed"] == 0
    with pytest.raises(qs.DomainError):
        qs.verify_suite("nosuch")
