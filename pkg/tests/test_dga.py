import json
from pathlib import Path

import pytest
import sympy as sp

from restricted_powers.cli import format_poly
from restricted_powers.combinat import SetupConfig
from restricted_powers.complexes import build_L_complex, build_X
from restricted_powers.corealg import BasisLabel, Element, Poly
from restricted_powers.dga import (check_algebra_laws, check_equivariance, check_generalized_leibniz,
                                   check_leibniz, check_transfer_identity, corrupt_sign,
                                   leibniz_witness, sym_product, transferred_table, x_product,
                                   x_product_table)
from restricted_powers.transfer import transfer

GOLDEN = Path(__file__).parent / "golden"

CFGS = [(2, 1, (1, 1)), (2, 2, (1, 1)), (2, 2, (2, 2)), (3, 2, (1, 1, 1)), (3, 2, (2, 1, 1)),
        (3, 3, (3, 1, 1)), (2, 3, (3, 3))]


def test_symmetric_overflow():
    cfg = SetupConfig(2, 2, (1, 1))
    # f1 * f1 = x1 f1 once the exponent is clamped at w_1 = 1
    assert sym_product((1, 0), (1, 0), cfg) == Element({BasisLabel((), (1, 0)): Poly.monomial((1, 0))})
    assert sym_product((1, 0), (0, 1), cfg).is_zero()


def test_x_product_vanishes_on_saturated_wedge_index():
    cfg = SetupConfig(2, 2, (1, 1))
    assert x_product(BasisLabel((1,), (0, 0)), BasisLabel((), (1, 0)), cfg).is_zero()
    assert not x_product(BasisLabel((1,), (0, 0)), BasisLabel((), (0, 1)), cfg).is_zero()


@pytest.mark.parametrize("n,d,w", CFGS)
def test_x_is_dg_algebra(n, d, w):
    cfg = SetupConfig(n, d, w)
    X = build_X(cfg)
    t = x_product_table(cfg, X)
    assert check_leibniz(X, t).passed
    assert check_algebra_laws(X, t).passed
    assert check_equivariance(t).passed


@pytest.mark.parametrize("n,d,w", CFGS)
def test_transferred_product_is_dg_algebra(n, d, w):
    cfg = SetupConfig(n, d, w)
    L = build_L_complex(cfg)
    t = transferred_table(transfer(cfg, L))
    assert check_leibniz(L, t).passed
    rep = check_algebra_laws(L, t)
    assert rep.passed, rep.text()
    assert check_equivariance(t, L).passed


def test_transferred_product_with_e():
    cfg = SetupConfig(2, 2, (2, 3), (1, 2))
    L = build_L_complex(cfg)
    t = transferred_table(transfer(cfg, L))
    assert check_leibniz(L, t).passed and check_algebra_laws(L, t).passed


def test_witness_exponents():
    cfg = SetupConfig(2, 2, (1, 1))
    W = leibniz_witness(BasisLabel((), (1, 0)), BasisLabel((), (1, 0)), cfg)
    assert W.T == (1,)
    assert W.alpha_primed == {1: 0} and W.beta_primed == {1: 0}


@pytest.mark.parametrize("n,d,w", CFGS)
def test_generalized_leibniz(n, d, w):
    cfg = SetupConfig(n, d, w)
    rep = check_generalized_leibniz(cfg, build_X(cfg))
    assert rep["witness exponents"].passed
    assert rep["displayed witness identity, T empty"].passed
    assert rep["weighted witness identity"].passed


def test_displayed_witness_identity_fails_with_overflow():
    # the unweighted combination overcounts d/df_i for i in T
    cfg = SetupConfig(2, 2, (1, 1))
    rep = check_generalized_leibniz(cfg, build_X(cfg))
    c = rep["displayed witness identity, T nonempty"]
    assert not c.passed and "T=(" in c.counterexample


def test_transfer_identity_depends_on_overflow():
    assert check_transfer_identity(transfer(SetupConfig(2, 2, (2, 2)))).passed
    assert not check_transfer_identity(transfer(SetupConfig(3, 2, (1, 1, 1)))).passed


def test_corrupt_sign_is_caught():
    cfg = SetupConfig(3, 2, (2, 1, 1))
    X = build_X(cfg)
    c = check_leibniz(X, corrupt_sign(x_product_table(cfg, X)))
    assert not c.passed and c.counterexample
    L = build_L_complex(cfg)
    c = check_leibniz(L, corrupt_sign(transferred_table(transfer(cfg, L))))
    assert not c.passed and c.counterexample


def _golden_table():
    data = json.loads((GOLDEN / "products_n2_d2_w22.json").read_text())
    return {(a, b): z for a, b, z in data["products"]}


def test_golden_products():
    cfg = SetupConfig(2, 2, (2, 2))
    L = build_L_complex(cfg)
    t = transferred_table(transfer(cfg, L))
    labs = L.all_labels()
    gold = _golden_table()
    assert len(gold) == len(labs) ** 2
    for a in labs:
        for b in labs:
            got = [[str(k), format_poly(p)] for k, p in t.entry(a, b).sorted_items()]
            assert got == gold[(str(a), str(b))]


def test_golden_products_sympy():
    # d_2 is injective, so Leibniz alone pins down products of degree-1 generators:
    # d(xy) = psi(x) y - psi(y) x.  Solve that with sympy and compare with the file.
    x1, x2 = sp.symbols("x1 x2")
    gens1 = ["L0[0,2;0]", "L0[1,1;0]", "L0[2,0;0]"]
    gens2 = ["L1[1,2;0]", "L1[2,1;0]"]
    mdeg1 = [(0, 2), (1, 1), (2, 0)]
    mdeg2 = [(1, 2), (2, 1)]
    d1 = sp.Matrix([[x2**2, x1 * x2, x1**2]])
    d2 = sp.Matrix([[-x1, 0], [x2, -x1], [0, x2]])
    assert (d1 * d2).expand() == sp.zeros(1, 2)
    gold = _golden_table()
    for i, a in enumerate(gens1):
        for j, b in enumerate(gens1):
            rhs = sp.zeros(3, 1)
            rhs[j] += d1[i]
            rhs[i] -= d1[j]
            tgt = (mdeg1[i][0] + mdeg1[j][0], mdeg1[i][1] + mdeg1[j][1])
            cs, z = [], sp.zeros(2, 1)
            for k, m in enumerate(mdeg2):
                if tgt[0] >= m[0] and tgt[1] >= m[1]:
                    c = sp.Symbol(f"c{k}")
                    cs.append(c)
                    z[k] = c * x1 ** (tgt[0] - m[0]) * x2 ** (tgt[1] - m[1])
            eqs = [co for e in (d2 * z - rhs).expand() for co in sp.Poly(e, x1, x2).coeffs()]
            sol = sp.solve(eqs, cs, dict=True)
            z = z.subs(sol[0]) if sol else sp.zeros(2, 1)
            want = {}
            for k, lab in enumerate(gens2):
                p = sp.Poly(sp.expand(z[k]), x1, x2)
                if not p.is_zero:
                    want[lab] = sorted([list(m), str(c)] for m, c in p.terms())
            got = {lab: sorted(terms) for lab, terms in gold[(a, b)]}
            assert got == want, (a, b)
