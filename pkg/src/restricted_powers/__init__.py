"""Minimal free resolutions of restricted powers of complete intersections,
with transferred DG-algebra structure and Golod certificates."""

__version__ = "0.1.0"

from .corealg import (BasisLabel, Element, FieldCfg, LinMap, MonomialIdeal, Poly,
                      ideal_member, kernel_by_multidegree, mdeg, reduce_mod)
from .combinat import (HookTableau, SetupConfig, hook_ssyt, restricted_exponents, sign_in,
                       sign_shuffle)
from .complexes import (BicomplexData, ComplexData, FreeModuleSpec, build_bicomplex, build_L_complex,
                        build_X, kappa, kos_tensor, koszul_complex, restricted_module,
                        restricted_power_ideal, totalize)
from .oracle import BettiTable, StrandBox, betti_table, strand_homology, verify_resolution
from .transfer import PerturbedRetract, RetractData, derham_h, transfer, verify_retract
from .dga import ProductTable, transferred_product, transferred_table, x_product_table
from .golod import KoszulHomology, golod_resolution, koszul_homology, lift_cycle, poincare_coeffs
