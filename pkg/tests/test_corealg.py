from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from restricted_powers.corealg import (BasisLabel, Element, FieldCfg, LinMap, MonomialIdeal,
                                       Poly, ideal_member, kernel_by_multidegree, mdeg, nullspace,
                                       rank, reduce_mod, ring_mdeg)

N = 3
exps = st.tuples(*[st.integers(0, 3)] * N)
coefs = st.fractions(min_value=-5, max_value=5, max_denominator=4)
polys = st.dictionaries(exps, coefs, max_size=4).map(lambda d: Poly(d, N))


@given(polys, polys, polys)
def test_poly_ring_axioms(a, b, c):
    assert (a + b) * c == a * c + b * c
    assert (a * b) * c == a * (b * c)
    assert a * b == b * a
    assert (a - a).is_zero()


@given(polys)
def test_poly_no_zero_terms(p):
    assert all(c != 0 for _, c in p)


def test_fp_arithmetic():
    F = FieldCfg.parse("fp:7")
    a, b = F(3), F(5)
    assert a + b == 1
    assert a * b == 1
    assert (a / b) * b == a
    assert F(Fraction(1, 2)) * 2 == 1
    with pytest.raises(ZeroDivisionError):
        F(Fraction(1, 7))


def test_field_parse():
    assert FieldCfg.parse("q").kind == "rationals"
    assert FieldCfg.parse("fp:11").p == 11
    with pytest.raises(ValueError):
        FieldCfg.parse("fp:12")
    with pytest.raises(ValueError):
        FieldCfg.parse("reals")


def test_ideal_minimal_generators():
    I = MonomialIdeal([(2, 0), (1, 1), (2, 1), (0, 3)], 2)
    assert set(I.gens) == {(2, 0), (1, 1), (0, 3)}
    assert I.lcm() == (2, 3)
    assert ideal_member((3, 0), I)
    assert not ideal_member((0, 2), I)


def test_reduce_mod():
    I = MonomialIdeal([(2, 0)], 2)
    p = Poly({(2, 0): 1, (1, 1): 3, (0, 0): 1})
    assert reduce_mod(p, I) == Poly({(1, 1): 3, (0, 0): 1})


def test_label_degrees():
    lab = BasisLabel((1, 3), (2, 0, 1))
    assert (lab.a, lab.b) == (2, 3)
    assert mdeg(lab) == (3, 0, 2)
    assert ring_mdeg(lab, (1, 2, 3)) == (3, 0, 6)


matrices = st.integers(1, 5).flatmap(
    lambda c: st.lists(st.lists(st.integers(-3, 3).map(Fraction), min_size=c, max_size=c),
                       min_size=1, max_size=5))


@settings(max_examples=60)
@given(matrices)
def test_rank_nullity(rows):
    ncols = len(rows[0])
    basis, free = nullspace(rows, ncols)
    assert rank(rows, ncols) + len(basis) == ncols
    for v in basis:
        assert all(sum(r[j] * v[j] for j in range(ncols)) == 0 for r in rows)


def test_linmap_rejects_foreign_target():
    a, b = BasisLabel((), (1, 0)), BasisLabel((), (0, 1))
    with pytest.raises(ValueError):
        LinMap({a: Element.basis(b, 2)}, [a], [a])


def test_kernel_by_multidegree():
    # f1 (x) f2 and f2 (x) f1 both map to f1 f2 under the multiplication map
    a = BasisLabel((1,), (0, 1))
    b = BasisLabel((2,), (1, 0))
    t = BasisLabel((), (1, 1))
    f = LinMap({a: Element.basis(t, 2), b: Element.basis(t, 2)}, [a, b], [t])
    ker = kernel_by_multidegree(f)
    assert len(ker) == 1
    assert f(ker[0]).is_zero()
    with pytest.raises(ValueError):
        kernel_by_multidegree(LinMap({a: Element({t: Poly.monomial((1, 0))})}, [a], [t]))
