from math import comb

import pytest

from restricted_powers.combinat import SetupConfig
from restricted_powers.complexes import (InternalConsistencyError, build_L_complex, build_X,
                                         koszul_complex, restricted_power_ideal)
from restricted_powers.corealg import BasisLabel, Element, Poly
from restricted_powers.oracle import check_d_squared, check_minimal


def test_ideal_generators_example():
    cfg = SetupConfig(3, 3, (3, 1, 1))
    assert set(restricted_power_ideal(cfg).gens) == {(3, 0, 0), (2, 1, 0), (2, 0, 1), (1, 1, 1)}
    assert build_L_complex(cfg).ranks()[1] == 4


def test_ideal_respects_e():
    cfg = SetupConfig(2, 2, (2, 3), (1, 2))
    assert set(restricted_power_ideal(cfg).gens) == {(2, 0), (1, 2), (0, 4)}


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_d1_is_koszul(n):
    cfg = SetupConfig(n, 1, (1,) * n)
    assert build_L_complex(cfg).ranks() == [comb(n, k) for k in range(n + 1)]


def test_X_ranks():
    assert build_X(SetupConfig(2, 2, (2, 2))).ranks() == [3, 6, 3]


@pytest.mark.parametrize("n,d,w,e", [(3, 2, (2, 2, 2), None), (3, 3, (3, 1, 1), None),
                                     (2, 2, (2, 3), (1, 2)), (4, 3, (2, 2, 1, 1), None)])
def test_d_squared_and_minimal(n, d, w, e):
    cfg = SetupConfig(n, d, w, e)
    for c in (build_L_complex(cfg), build_X(cfg)):
        assert check_d_squared(c).passed
    assert check_minimal(build_L_complex(cfg)).passed


def test_koszul_complex_squares_to_zero():
    cfg = SetupConfig(3, 2, (1, 1, 1))
    K = koszul_complex(cfg)
    assert K.ranks() == [1, 3, 3, 1]
    assert check_d_squared(K).passed


def test_coords_roundtrip_and_rejects_non_kernel():
    cfg = SetupConfig(3, 2, (2, 2, 2))
    L = build_L_complex(cfg)
    for lab in L.modules[2].labels:
        x = L.embedding[lab]
        assert L.coords(1, x) == Element.basis(lab, 3, cfg.one)
    bad = Element({BasisLabel((1,), (2, 0, 0)): Poly.const(cfg.one, 3)})
    with pytest.raises(InternalConsistencyError):
        L.coords(1, bad)


def test_prime_field_ranks_agree():
    q = build_L_complex(SetupConfig(3, 3, (3, 3, 3))).ranks()
    from restricted_powers.corealg import FieldCfg
    p = build_L_complex(SetupConfig(3, 3, (3, 3, 3), field=FieldCfg.parse("fp:101"))).ranks()
    assert q == p
