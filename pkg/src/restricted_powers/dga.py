"""Products: the restricted symmetric product, the product on ``X_d^w`` and
the product transferred to ``L^w(psi, d)``, with checkers for the DG laws."""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from functools import lru_cache
from typing import Callable

from .combinat import SetupConfig, perm_sign, wedge_sign
from .complexes import UNIT, ComplexData, LComplex, UnitLabel
from .corealg import BasisLabel, Element, Poly, vle
from .report import CheckReport, Report
from .transfer import PerturbedRetract, derham_label


def _psi(overflow, cfg: SetupConfig, c=1) -> Poly:
    return Poly.monomial(tuple(k * e for k, e in zip(overflow, cfg.e)), cfg.field(c))


def sym_product(alpha, beta, cfg: SetupConfig) -> Element:
    """``f^alpha . f^beta = psi(f^overflow) f^min(alpha+beta, w)``, zero once the clamp reaches degree d."""
    if not (vle(alpha, cfg.w) and vle(beta, cfg.w)):
        raise ValueError(f"{alpha} or {beta} exceeds w={cfg.w}")
    s = tuple(a + b for a, b in zip(alpha, beta))
    gamma = tuple(min(x, wi) for x, wi in zip(s, cfg.w))
    if sum(gamma) >= cfg.d:
        return Element()
    over = tuple(x - g for x, g in zip(s, gamma))
    return Element({BasisLabel((), gamma): _psi(over, cfg)})


@lru_cache(maxsize=None)
def x_product(x: BasisLabel, y: BasisLabel, cfg: SetupConfig) -> Element:
    """Product of two basis labels of ``X_d^w``."""
    (sigma, alpha), (tau, beta) = x, y
    w = cfg.w
    for i in set(sigma) | set(tau):
        if alpha[i - 1] + beta[i - 1] >= w[i - 1]:
            return Element()
    sign, rho = wedge_sign(sigma, tau)
    if sign == 0:
        return Element()
    s = tuple(a + b for a, b in zip(alpha, beta))
    gamma = tuple(min(v, wi) for v, wi in zip(s, w))
    if sum(gamma) >= cfg.d:
        return Element()
    over = tuple(v - g for v, g in zip(s, gamma))
    return Element({BasisLabel(rho, gamma): _psi(over, cfg, sign)})


def bilinear(x: Element, y: Element, basis_mul: Callable) -> Element:
    out = Element()
    for a, p in x.items():
        for b, q in y.items():
            prod = basis_mul(a, b)
            if not prod.is_zero():
                out.iadd(prod, p * q)
    return out


def x_mul(x: Element, y: Element, cfg: SetupConfig) -> Element:
    return bilinear(x, y, lambda a, b: x_product(a, b, cfg))


@dataclass
class ProductTable:
    """Cached products of basis pairs of ``carrier``; ``unit`` is its identity label."""

    carrier: ComplexData
    basis_mul: Callable
    unit: object
    cfg: SetupConfig
    entries: dict = dc_field(default_factory=dict)

    def entry(self, a, b) -> Element:
        key = (a, b)
        out = self.entries.get(key)
        if out is None:
            out = self.basis_mul(a, b)
            self.entries[key] = out
        return out

    def __call__(self, x: Element, y: Element) -> Element:
        return bilinear(x, y, self.entry)

    def fill(self) -> "ProductTable":
        labs = self.carrier.all_labels()
        for a in labs:
            for b in labs:
                self.entry(a, b)
        return self


def x_product_table(cfg: SetupConfig, X: ComplexData) -> ProductTable:
    return ProductTable(X, lambda a, b: x_product(a, b, cfg), BasisLabel((), (0,) * cfg.n), cfg)


def transferred_product(x: Element, y: Element, cfg: SetupConfig, pr: PerturbedRetract) -> Element:
    """``p_inf(i_inf(x) . i_inf(y))``."""
    return pr.p_inf(x_mul(pr.i_inf(x), pr.i_inf(y), cfg))


def transferred_table(pr: PerturbedRetract) -> ProductTable:
    cfg = pr.base.cfg
    n, one = cfg.n, cfg.one
    return ProductTable(
        pr.base.small,
        lambda a, b: transferred_product(Element.basis(a, n, one), Element.basis(b, n, one), cfg, pr),
        UNIT, cfg)


# ---------------------------------------------------------------------------
# law checks
# ---------------------------------------------------------------------------

def _deg(c: ComplexData, lab) -> int:
    return c.degree_of(lab)


def check_leibniz(c: ComplexData, prod: ProductTable) -> CheckReport:
    """``d(xy) = d(x) y + (-1)^|x| x d(y)`` over all basis pairs."""
    D = c.differential()
    cfg = prod.cfg
    n, one = cfg.n, cfg.one
    labs = c.all_labels()
    count = 0
    for a in labs:
        xa = Element.basis(a, n, one)
        da = D(xa)
        sign = -1 if _deg(c, a) % 2 else 1
        for b in labs:
            count += 1
            xb = Element.basis(b, n, one)
            lhs = D(prod.entry(a, b))
            rhs = prod(da, xb) + prod(xa, D(xb)).scale(cfg.field(sign))
            if lhs != rhs:
                return CheckReport("Leibniz", False, count, f"({a}, {b}): residual {lhs - rhs}")
    return CheckReport("Leibniz", True, count)


def check_algebra_laws(c: ComplexData, prod: ProductTable) -> Report:
    cfg = prod.cfg
    n, one = cfg.n, cfg.one
    labs = c.all_labels()
    rep = Report("algebra laws")

    # associativity over triples
    count, bad = 0, None
    for a in labs:
        for b in labs:
            ab = prod.entry(a, b)
            for cc in labs:
                count += 1
                left = prod(ab, Element.basis(cc, n, one))
                right = prod(Element.basis(a, n, one), prod.entry(b, cc))
                if left != right:
                    bad = f"({a}, {b}, {cc}): {left - right}"
                    break
            if bad:
                break
        if bad:
            break
    rep.add(CheckReport("associativity", bad is None, count, bad))

    count, bad = 0, None
    for a in labs:
        for b in labs:
            count += 1
            s = -1 if (_deg(c, a) * _deg(c, b)) % 2 else 1
            if prod.entry(a, b) != prod.entry(b, a).scale(cfg.field(s)):
                bad = f"({a}, {b}): {prod.entry(a, b)} vs {prod.entry(b, a)}"
                break
        if bad:
            break
    rep.add(CheckReport("graded commutativity", bad is None, count, bad))

    odd = [a for a in labs if _deg(c, a) % 2]
    bad = next((f"{a}^2 = {prod.entry(a, a)}" for a in odd if not prod.entry(a, a).is_zero()), None)
    rep.add(CheckReport("odd squares vanish", bad is None, len(odd), bad))

    u = prod.unit
    bad = None
    for a in labs:
        x = Element.basis(a, n, one)
        if prod.entry(u, a) != x or prod.entry(a, u) != x:
            bad = f"1*{a} = {prod.entry(u, a)}, {a}*1 = {prod.entry(a, u)}"
            break
    rep.add(CheckReport("unit", bad is None, len(labs), bad))
    return rep


# ---------------------------------------------------------------------------
# generalized Leibniz witness
# ---------------------------------------------------------------------------

@dataclass
class LeibnizWitness:
    T: tuple[int, ...]
    alpha_primed: dict[int, int]
    beta_primed: dict[int, int]


def leibniz_witness(x: BasisLabel, y: BasisLabel, cfg: SetupConfig) -> LeibnizWitness:
    T = tuple(i for i in range(1, cfg.n + 1) if x.alpha[i - 1] + y.alpha[i - 1] > cfg.w[i - 1])
    return LeibnizWitness(T, {i: cfg.w[i - 1] - y.alpha[i - 1] for i in T},
                          {i: cfg.w[i - 1] - x.alpha[i - 1] for i in T})


def _undivided_h(x: BasisLabel, cfg: SetupConfig) -> Element:
    """``(a+b) h``, i.e. ``sum_j f_j ^ (-) (x) d/df_j``."""
    return derham_label(x, cfg).scale(cfg.field(len(x.sigma) + sum(x.alpha)))


def _truncate(x: BasisLabel, i: int, new: int, cfg: SetupConfig) -> Element:
    """``psi(f_i^(x_i - new)) f_sigma (x) f^(alpha with entry i replaced by new)``."""
    alpha = list(x.alpha)
    drop = alpha[i - 1] - new
    alpha[i - 1] = new
    mono = tuple(drop * cfg.e[i - 1] if k == i - 1 else 0 for k in range(cfg.n))
    return Element({BasisLabel(x.sigma, tuple(alpha)): Poly.monomial(mono, cfg.one)})


def _witness_combination(x, y, W, cx, cy, c0, cfg) -> Element:
    """``(r+a) h(x) y' + (-1)^r (s+b) x' h(y)`` where ``y' = c0 y + sum_i cy[i] y_i``
    and ``y_i`` truncates entry ``i`` of ``beta`` to ``beta'_i`` (same for ``x'``)."""
    n, one = cfg.n, cfg.one
    yp = Element.basis(y, n, one).scale(cfg.field(c0))
    xp = Element.basis(x, n, one).scale(cfg.field(c0))
    for i in W.T:
        yp.iadd(_truncate(y, i, W.beta_primed[i], cfg).scale(cfg.field(cy[i])))
        xp.iadd(_truncate(x, i, W.alpha_primed[i], cfg).scale(cfg.field(cx[i])))
    out = x_mul(_undivided_h(x, cfg), yp, cfg)
    out.iadd(x_mul(xp, _undivided_h(y, cfg), cfg).scale(cfg.field(-1 if len(x.sigma) % 2 else 1)))
    return out


def check_generalized_leibniz(cfg: SetupConfig, X: ComplexData) -> Report:
    """Witness identities for the generalized Leibniz rule, over basis pairs with nonzero product.

    ``displayed``: the combination with weights ``1 - |T|`` and ``1`` equals
    ``(r+s+a+b) h(xy)``.  ``weighted``: with weights ``c_i = w_i/(alpha_i+beta_i)``
    and ``1 - sum c_i`` the combination equals ``(r+s+|gamma|) h(xy)``, ``gamma``
    the clamped exponent.  Both put ``h(xy)`` in ``h(x) X + X h(y)``.
    """
    labs = X.all_labels()
    rep = Report(f"generalized Leibniz {cfg}")
    vacuous = 0
    stats = {"plain": [0, None], "overflow": [0, None], "weighted": [0, None], "witness": [0, None]}
    n_plain = n_over = 0
    for x in labs:
        for y in labs:
            xy = x_product(x, y, cfg)
            if xy.is_zero():
                vacuous += 1
                continue
            W = leibniz_witness(x, y, cfg)
            if any(not (W.alpha_primed[i] < x.alpha[i - 1] and W.beta_primed[i] < y.alpha[i - 1])
                   for i in W.T):
                _fail(stats["witness"], f"({x}, {y}): {W}")
            h_xy = Element()
            for t, p in xy.items():
                h_xy.iadd(derham_label(t, cfg), p)
            ones = {i: 1 for i in W.T}
            lhs = _witness_combination(x, y, W, ones, ones, 1 - len(W.T), cfg)
            total = len(x.sigma) + len(y.sigma) + sum(x.alpha) + sum(y.alpha)
            key = "overflow" if W.T else "plain"
            if W.T:
                n_over += 1
            else:
                n_plain += 1
            if lhs != h_xy.scale(cfg.field(total)):
                _fail(stats[key], f"({x}, {y}) T={W.T}: residual {lhs - h_xy.scale(cfg.field(total))}")
            c = {i: Fraction(cfg.w[i - 1], x.alpha[i - 1] + y.alpha[i - 1]) for i in W.T}
            wl = _witness_combination(x, y, W, c, c, 1 - sum(c.values(), Fraction(0)), cfg)
            (lab, _), = xy.items()
            g = len(lab.sigma) + sum(lab.alpha)
            if wl != h_xy.scale(cfg.field(g)):
                _fail(stats["weighted"], f"({x}, {y}) T={W.T}: residual {wl - h_xy.scale(cfg.field(g))}")
    checked = n_plain + n_over

    def add(name, key, count, detail=""):
        bad, ex = stats[key]
        rep.add(CheckReport(name, bad == 0, count, ex, detail + (f" {bad} failing" if bad else "")))

    add("witness exponents", "witness", n_over)
    add("displayed witness identity, T empty", "plain", n_plain, f"{vacuous} vacuous pairs;")
    add("displayed witness identity, T nonempty", "overflow", n_over)
    add("weighted witness identity", "weighted", checked)
    return rep


def _fail(slot, text):
    slot[0] += 1
    if slot[1] is None:
        slot[1] = text


# ---------------------------------------------------------------------------
# transfer-specific checks
# ---------------------------------------------------------------------------

def check_transfer_identity(pr: PerturbedRetract) -> CheckReport:
    """``(dF_inf h_inf + h_inf dF_inf)(i_inf x . i_inf y) = 0`` for all basis pairs."""
    cfg = pr.base.cfg
    n, one = cfg.n, cfg.one
    labs = pr.base.small.all_labels()
    imgs = {a: pr.i_inf(Element.basis(a, n, one)) for a in labs}
    count = 0
    for a in labs:
        for b in labs:
            count += 1
            z = x_mul(imgs[a], imgs[b], cfg)
            v = pr.dF_inf(pr.h_inf(z)) + pr.h_inf(pr.dF_inf(z))
            if not v.is_zero():
                return CheckReport("(dh + hd)(i x . i y) = 0", False, count, f"({a}, {b}): {v}")
    return CheckReport("(dh + hd)(i x . i y) = 0", True, count)


def permute_label(lab: BasisLabel, perm) -> tuple[int, BasisLabel]:
    """Action of ``f_i -> f_perm[i]`` (1-based) on a basis label, with its wedge sign."""
    seq = tuple(perm[s - 1] for s in lab.sigma)
    alpha = [0] * len(lab.alpha)
    for i, a in enumerate(lab.alpha):
        alpha[perm[i] - 1] = a
    return perm_sign(seq), BasisLabel(tuple(sorted(seq)), tuple(alpha))


def permute_element(x: Element, perm, cfg: SetupConfig, L: LComplex | None = None) -> Element:
    out = Element()
    for lab, p in x.items():
        q = p.permute(perm)
        if isinstance(lab, UnitLabel):
            out.iadd(Element({lab: q}))
        elif isinstance(lab, BasisLabel):
            s, new = permute_label(lab, perm)
            out.iadd(Element({new: q}), Poly.const(cfg.field(s), cfg.n))
        else:
            # kernel label: act on its embedding and re-express
            img = permute_element(L.embedding[lab], perm, cfg)
            out.iadd(L.coords(lab.a, img), q)
    return out


def symmetric_generators(n: int) -> list[tuple[int, ...]]:
    """Adjacent transpositions, as 1-based image tuples."""
    out = []
    for i in range(1, n):
        p = list(range(1, n + 1))
        p[i - 1], p[i] = p[i], p[i - 1]
        out.append(tuple(p))
    return out


def check_equivariance(prod: ProductTable, L: LComplex | None = None,
                       perms=None) -> CheckReport:
    """``pi(x y) = pi(x) pi(y)`` on basis pairs for each permutation in ``perms``."""
    cfg = prod.cfg
    if any(e != 1 for e in cfg.e) or len(set(cfg.w)) != 1:
        return CheckReport("S_n-equivariance", True, 0, None, "skipped: needs e = 1 and constant w")
    n, one = cfg.n, cfg.one
    perms = perms if perms is not None else symmetric_generators(n)
    labs = prod.carrier.all_labels()
    count = 0
    for perm in perms:
        img = {a: permute_element(Element.basis(a, n, one), perm, cfg, L) for a in labs}
        for a in labs:
            for b in labs:
                count += 1
                lhs = permute_element(prod.entry(a, b), perm, cfg, L)
                rhs = prod(img[a], img[b])
                if lhs != rhs:
                    return CheckReport("S_n-equivariance", False, count,
                                       f"perm {perm}, ({a}, {b}): {lhs - rhs}")
    return CheckReport("S_n-equivariance", True, count)


def corrupt_sign(prod: ProductTable) -> ProductTable:
    """Negative-control fixture: flip the sign of every product with an odd left factor."""
    c = prod.carrier
    base = prod.basis_mul
    cfg = prod.cfg

    def bad(a, b):
        v = base(a, b)
        return v.scale(cfg.field(-1)) if c.degree_of(a) % 2 and c.degree_of(b) > 0 else v

    return ProductTable(c, bad, prod.unit, cfg)
