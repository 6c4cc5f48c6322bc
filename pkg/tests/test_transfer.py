import pytest

from restricted_powers.combinat import SetupConfig
from restricted_powers.complexes import build_L_complex
from restricted_powers.transfer import (check_against_L, check_closed_form, check_homotopy,
                                        corrupt_flip, kos_perturbation, perturb, transfer,
                                        unperturbed_retract, verify_retract)

CFGS = [(2, 1, (1, 1), None), (2, 2, (2, 2), None), (3, 2, (1, 1, 1), None),
        (3, 2, (2, 1, 1), None), (3, 3, (3, 1, 1), None), (2, 2, (2, 3), (1, 2)),
        (4, 2, (2, 2, 2, 2), None)]


@pytest.mark.parametrize("n,d,w,e", CFGS)
def test_homotopy(n, d, w, e):
    rep = check_homotopy(SetupConfig(n, d, w, e))
    assert rep.passed, rep.text()


@pytest.mark.parametrize("n,d,w,e", CFGS)
def test_retract_and_perturbation(n, d, w, e):
    cfg = SetupConfig(n, d, w, e)
    L = build_L_complex(cfg)
    r = unperturbed_retract(cfg, L)
    assert verify_retract(r).passed
    pr = perturb(r, kos_perturbation(r))
    assert verify_retract(pr).passed, verify_retract(pr).text()
    assert check_against_L(pr, L).passed
    assert check_closed_form(pr).passed
    assert pr.iterations <= n + d


def test_positive_sign_perturbation_is_still_a_retract():
    cfg = SetupConfig(3, 2, (2, 1, 1))
    L = build_L_complex(cfg)
    r = unperturbed_retract(cfg, L)
    pr = perturb(r, kos_perturbation(r, sign=1))
    assert verify_retract(pr).passed
    # but only the minus sign reproduces the L differential on the nose
    assert not check_against_L(pr, L).passed


@pytest.mark.parametrize("d", [1, 2, 3])
def test_corrupt_flip_is_caught(d):
    cfg = SetupConfig(3, d, (d, 1, 1) if d > 1 else (1, 1, 1))
    rep = verify_retract(corrupt_flip(transfer(cfg)))
    assert not rep.passed
    assert not rep["dF i = i dG"].passed
    assert rep["dF i = i dG"].counterexample
    if d >= 2:
        assert not rep["i p - 1 = dh + hd"].passed
