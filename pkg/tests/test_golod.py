import pytest

from restricted_powers.combinat import SetupConfig
from restricted_powers.complexes import build_L_complex, restricted_module
from restricted_powers.golod import (check_golod, check_golod_resolution, check_koszul,
                                     corrupt_lift, kos_mul, koszul_homology, lift_cycle,
                                     lift_differential, phi, poincare_coeffs)
from restricted_powers.complexes import restricted_power_ideal

CFGS = [(2, 2, (2, 2), None), (3, 2, (1, 1, 1), None), (3, 2, (2, 2, 2), None),
        (3, 3, (3, 1, 1), None), (2, 3, (2, 2), None), (2, 2, (2, 3), (1, 2)),
        (4, 2, (1, 1, 1, 1), None)]


def test_phi_example():
    cfg = SetupConfig(2, 2, (2, 2))
    p = phi(2, 1, (1, 2), cfg)
    signs = {(k.tau, k.rest): c.constant_term() for k, c in p.items()}
    assert signs == {((1,), (2,)): 1, ((2,), (1,)): -1}


@pytest.mark.parametrize("n,d,w,e", CFGS)
def test_lifts_are_cycles(n, d, w, e):
    cfg = SetupConfig(n, d, w, e)
    for i in range(1, n + 1):
        for lab in restricted_module(i, d - 1, cfg).labels:
            assert lift_differential(lift_cycle(lab.sigma, lab.alpha, cfg), cfg).is_zero(), lab


@pytest.mark.parametrize("n,d,w,e", CFGS)
def test_koszul_homology_matches_resolution(n, d, w, e):
    cfg = SetupConfig(n, d, w, e)
    kh = koszul_homology(cfg)
    rep = check_koszul(cfg, kh)
    assert rep.passed, rep.text()
    ranks = build_L_complex(cfg).ranks()
    assert [kh.dims.get(i, 0) for i in range(len(ranks))] == ranks


@pytest.mark.parametrize("n,d,w,e", CFGS[:-1])
def test_products_vanish(n, d, w, e):
    cfg = SetupConfig(n, d, w, e)
    kh = koszul_homology(cfg)
    I = restricted_power_ideal(cfg)
    for a in kh.classes:
        for b in kh.classes:
            assert kos_mul(a.rep, b.rep, cfg, I).is_zero()
    assert check_golod(cfg, kh).report.passed


def test_golod_needs_d_at_least_two():
    with pytest.raises(ValueError):
        check_golod(SetupConfig(2, 1, (1, 1)))


def test_poincare_series_n2_d2():
    # (1+t)^2 / (1 - 3t^2 - 2t^3) = 1 / (1 - 2t)
    assert poincare_coeffs(SetupConfig(2, 2, (2, 2)), 6) == [1, 2, 4, 8, 16, 32, 64]


@pytest.mark.parametrize("n,d,w,e", CFGS[:5])
def test_golod_resolution(n, d, w, e):
    cfg = SetupConfig(n, d, w, e)
    rep = check_golod_resolution(cfg, max_deg=5, acyclic_through=5)
    assert rep.passed, rep.text()


def test_corrupt_lift_is_caught():
    cfg = SetupConfig(3, 2, (2, 1, 1))
    rep = check_koszul(cfg, lift=corrupt_lift)
    c = rep["lifts are cycles"]
    assert not c.passed and "D(lift)" in c.counterexample


def test_no_product_free_reps_for_squarefree_n4():
    # H_1 at eps_i + eps_j is spanned by x_j e_i ~ x_i e_j; two reps using the same
    # multiplier x_i multiply to x_i^2 e_j e_k, nonzero mod I.  Six edges, four
    # vertices: every choice has a nonvanishing product.
    cfg = SetupConfig(4, 2, (1, 1, 1, 1))
    kh = koszul_homology(cfg)
    assert kh.strategy.startswith("greedy") and kh.falsification
    assert not check_golod(cfg, kh).report.passed
