import json
from fractions import Fraction

import pytest

from zerorepulsion.interval import Interval

from zerorepulsion.certificates import (
    REGISTRY,
    certificate_names,
    verify_certificate,
)

EXPECTED = [
    "int_4_5",
    "int_5_8",
    "series_n2logn",
    "B1_product",
    "ratio_integral",
    "maple_ineq",
    "small_arith",
    "logR_bound",
    "zeta_half_window",
    "theta_endgame",
]


def test_registry_names():
    assert certificate_names() == EXPECTED
    assert set(REGISTRY) == set(EXPECTED)


@pytest.mark.parametrize("name", ["int_4_5", "series_n2logn"])
def test_single_certificates_verify(name):
    cert = verify_certificate(name)
    assert cert.verdict == "verified"
    assert cert.enclosure.lo <= cert.enclosure.hi


def test_unknown_name():
    with pytest.raises(KeyError):
        verify_certificate("no_such_certificate")


def test_suite_shape(all_certificates):
    assert list(all_certificates) == EXPECTED
    for cert in all_certificates.values():
        assert cert.verdict in ("verified", "failed", "inconclusive")
        d = cert.to_dict()
        assert {"name", "claim", "paper_location", "verdict", "enclosure"} <= set(d)
        json.dumps(d)


def test_verified_means_strict_endpoint_separation(all_certificates):
    for name in ("int_4_5", "series_n2logn"):
        cert = all_certificates[name]
        assert cert.enclosure.certainly_lt(cert.threshold)


def test_ratio_integral_reports_both_variants(all_certificates):
    variants = all_certificates["ratio_integral"].details["variants"]
    assert set(variants) == {"stated", "squared"}
    assert variants["stated"]["verdict"] == "verified"
    assert variants["stated"]["value"].certainly_lt(Fraction("92.7"))
    # squared constants give a larger integral, about 119.9
    assert variants["squared"]["verdict"] == "failed"
    assert variants["squared"]["value"].certainly_gt(119)


def test_small_arith_pinpoints_the_product(all_certificates):
    claims = all_certificates["small_arith"].details["claims"]
    bad = [k for k, v in claims.items() if v["verdict"] != "verified"]
    # 1.008 * 125.2 = 126.2016 exactly
    assert bad == ["1.008*125.2 < 126"]
    assert Fraction("1.008") * Fraction("125.2") == Fraction("126.2016")


def test_logR_grid_and_chain(all_certificates):
    cert = all_certificates["logR_bound"]
    assert cert.details["intermediate_chain"]["verdict"] == "verified"
    assert cert.verdict == "failed"
    failures = [g for g in cert.details["grid"] if g["verdict"] == "failed"]
    assert failures and all(g["A"] <= 2 for g in failures)
    # every failure disappears once the factor e^(2 (log q)^(3/4)) of R is dropped
    for g in failures:
        u = Interval(g["q"]).log()
        assert (g["log2eR"] - 2 * u ** Fraction(3, 4)).certainly_le(g["rhs"])


def test_sampled_flag(all_certificates):
    assert all_certificates["zeta_half_window"].sampled
    assert sum(c.sampled for c in all_certificates.values()) == 1


def test_retry_precision_recorded():
    cert = verify_certificate("maple_ineq", bits=80)
    assert cert.precision == 80 and cert.verdict == "verified"


def test_deterministic_endpoints():
    a = verify_certificate("B1_product")
    b = verify_certificate("B1_product")
    assert a.to_dict() == b.to_dict()
