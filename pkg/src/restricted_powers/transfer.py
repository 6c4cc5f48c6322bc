"""Scaled de Rham homotopy, the retract of ``X_d^w`` (kappa only) onto the
L-modules, and the perturbation engine.

Conventions.  ``F`` is ``X_d^w`` with differential kappa, ``G`` carries the
L-modules with zero differential.  We use the homotopy ``H = -h`` (``h`` the
scaled de Rham map) so that ``ip - 1 = dH + Hd``; to keep ``pi = 1`` this
forces ``i = -h`` on the kernels and ``p = -kappa`` from the ``S_{d-1}`` row.
With ``delta = -(Kos (x) 1)`` the transferred differential is then exactly the
L-complex differential (``Kos (x) 1`` on kernels, ``+psi`` into ``R``).
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction
from functools import lru_cache

from .combinat import SetupConfig, wedge_sign
from .complexes import (UNIT, ComplexData, InternalConsistencyError, LComplex, build_L_complex,
                        build_X, kappa_label, kos_label, restricted_module)
from .corealg import BasisLabel, Element, LinMap, Poly, label_key
from .report import CheckReport, Report


@lru_cache(maxsize=None)
def derham_label(label: BasisLabel, cfg: SetupConfig) -> Element:
    """``h(f_sigma (x) f^alpha) = (1/(a+b)) sum_j alpha_j (f_j ^ f_sigma) (x) f^(alpha - eps_j)``."""
    sigma, alpha = label
    ab = len(sigma) + sum(alpha)
    if ab == 0:
        return Element()
    scale = cfg.field(Fraction(1, ab))
    out = Element()
    n = cfg.n
    for j, aj in enumerate(alpha, start=1):
        if aj == 0:
            continue
        sign, rho = wedge_sign((j,), sigma)
        if sign == 0:
            continue
        beta = tuple(x - (1 if i == j - 1 else 0) for i, x in enumerate(alpha))
        out.iadd(Element({BasisLabel(rho, beta): Poly.const(scale * (sign * aj), n)}))
    return out


def derham_h(a: int, b: int, cfg: SetupConfig) -> LinMap:
    """The scaled de Rham map on ``(wedge^a (x) S_b)_w``."""
    if a + b < 1:
        raise ValueError("the de Rham map needs a + b >= 1")
    src = restricted_module(a, b, cfg).labels
    tgt = restricted_module(a + 1, b - 1, cfg).labels if b >= 1 else []
    return LinMap({lab: derham_label(lab, cfg) for lab in src}, src, tgt)


def check_homotopy(cfg: SetupConfig, max_b: int | None = None) -> Report:
    """``h^2 = 0`` and ``kappa h + h kappa = 1`` on every restricted piece but ``(0, 0)``."""
    rep = Report(f"de Rham homotopy {cfg}")
    max_b = max_b if max_b is not None else sum(cfg.w)
    n = cfg.n
    sq_bad = id_bad = None
    count = 0

    def kap(x):
        out = Element()
        for lab, p in x.items():
            out.iadd(kappa_label(lab, cfg), p)
        return out

    def hh(x):
        out = Element()
        for lab, p in x.items():
            out.iadd(derham_label(lab, cfg), p)
        return out

    for b in range(max_b + 1):
        for a in range(n + 1):
            for lab in restricted_module(a, b, cfg).labels:
                count += 1
                x = Element.basis(lab, n, cfg.one)
                if sq_bad is None and not hh(hh(x)).is_zero():
                    sq_bad = str(lab)
                if (a, b) != (0, 0) and id_bad is None and kap(hh(x)) + hh(kap(x)) != x:
                    id_bad = f"{lab}: {kap(hh(x)) + hh(kap(x))}"
    rep.add(CheckReport("h^2 = 0", sq_bad is None, count, sq_bad))
    rep.add(CheckReport("kappa h + h kappa = 1", id_bad is None, count, id_bad))
    return rep


@dataclass
class RetractData:
    """Special deformation retract data; maps are graded LinMaps over all labels."""

    big: ComplexData
    small: ComplexData
    i: LinMap
    p: LinMap
    h: LinMap
    dF: LinMap
    dG: LinMap
    cfg: SetupConfig | None = None


@dataclass
class PerturbedRetract:
    base: RetractData
    delta: LinMap
    A: LinMap
    i_inf: LinMap
    p_inf: LinMap
    h_inf: LinMap
    dF_inf: LinMap
    dG_inf: LinMap
    iterations: int = 0

    def as_retract(self) -> RetractData:
        b = self.base
        return RetractData(b.big, b.small, self.i_inf, self.p_inf, self.h_inf,
                           self.dF_inf, self.dG_inf, b.cfg)


def _all_labels(c: ComplexData) -> list:
    return c.all_labels()


def unperturbed_retract(cfg: SetupConfig, L: LComplex | None = None, X: ComplexData | None = None,
                        check: bool = True) -> RetractData:
    """The retract of (``X_d^w``, kappa) onto the L-modules with zero differential."""
    L = L or build_L_complex(cfg)
    X = X or build_X(cfg)
    n, d = cfg.n, cfg.d
    one = Poly.const(cfg.one, n)
    corner = BasisLabel((), (0,) * n)
    xlabels = _all_labels(X)
    glabels = _all_labels(L)

    # kappa without the truncation would leave X at b = d-1; F only keeps b <= d-1
    dF = LinMap({lab: Element({t: p for t, p in kappa_label(lab, cfg).items() if t.b <= d - 1})
                 for lab in xlabels}, xlabels, xlabels)
    H = LinMap({lab: -derham_label(lab, cfg) for lab in xlabels}, xlabels, xlabels)
    dG = LinMap({}, glabels, glabels)

    icols = {UNIT: Element({corner: one})}
    for lab in glabels:
        if lab is UNIT or lab == UNIT:
            continue
        img = Element()
        for blab, p in L.embedding[lab].items():
            img.iadd(derham_label(blab, cfg), -p)
        icols[lab] = img
    i = LinMap(icols, glabels, xlabels)

    pcols = {}
    for lab in xlabels:
        if lab == corner:
            pcols[lab] = Element({UNIT: one})
        elif lab.b == d - 1 and lab.a >= 1:
            pcols[lab] = L.coords(lab.a - 1, -kappa_label(lab, cfg))
    p = LinMap(pcols, xlabels, glabels)
    r = RetractData(X, L, i, p, H, dF, dG, cfg)
    if check:
        rep = verify_retract(r)
        if not rep.passed:
            raise InternalConsistencyError("unperturbed retract fails:\n" + rep.text())
    return r


def kos_perturbation(r: RetractData, sign: int = -1) -> LinMap:
    """``delta = sign * (Kos (x) 1)`` on the big complex."""
    cfg = r.cfg
    labels = _all_labels(r.big)
    return LinMap({lab: kos_label(lab, cfg).scale(cfg.field(sign)) for lab in labels}, labels, labels)


def perturb(r: RetractData, delta: LinMap, check_perturbation: bool = True) -> PerturbedRetract:
    """Perturbation lemma with ``A = sum_k (delta h)^k delta``."""
    if check_perturbation:
        total = r.dF + delta
        for lab, col in total.columns.items():
            if not total(col).is_zero():
                raise ValueError(f"(dF + delta)^2 != 0 at {lab}")
    bound = r.cfg.n + r.cfg.d if r.cfg is not None else 64
    A = delta
    term = delta
    k = 0
    while True:
        term = delta @ (r.h @ term)
        if not term.columns:
            break
        k += 1
        if k > bound:
            raise InternalConsistencyError(f"Neumann series did not terminate within {bound} terms")
        A = A + term
    hA = r.h @ A
    return PerturbedRetract(
        base=r, delta=delta, A=A,
        i_inf=r.i + hA @ r.i,
        p_inf=r.p + r.p @ (A @ r.h),
        h_inf=r.h + hA @ r.h,
        dF_inf=r.dF + delta,
        dG_inf=r.dG + r.p @ (A @ r.i),
        iterations=k,
    )


def transfer(cfg: SetupConfig, L: LComplex | None = None):
    """Build L, X, the unperturbed retract and the Kos perturbation of it."""
    L = L or build_L_complex(cfg)
    r = unperturbed_retract(cfg, L)
    return perturb(r, kos_perturbation(r))


# ---------------------------------------------------------------------------
# verification
# ---------------------------------------------------------------------------

def _basis(lab, n, one):
    return Element.basis(lab, n, one)


def _identity_check(name, labels, lhs, rhs, n, one) -> CheckReport:
    count = 0
    for lab in sorted(labels, key=label_key):
        count += 1
        x = _basis(lab, n, one)
        a, b = lhs(x), rhs(x)
        if a != b:
            return CheckReport(name, False, count, f"{lab}: {a - b}")
    return CheckReport(name, True, count)


def verify_retract(r: RetractData | PerturbedRetract) -> Report:
    """The special-retract identities and chain-map conditions, exhaustively."""
    if isinstance(r, PerturbedRetract):
        r = r.as_retract()
    cfg = r.cfg
    n, one = cfg.n, cfg.one
    F, G = _all_labels(r.big), _all_labels(r.small)
    zero = lambda x: Element()  # noqa: E731
    rep = Report(f"retract {cfg}")
    rep.add(_identity_check("p i = 1", G, lambda x: r.p(r.i(x)), lambda x: x, n, one))
    rep.add(_identity_check("i p - 1 = dh + hd", F, lambda x: r.i(r.p(x)) - x,
                            lambda x: r.dF(r.h(x)) + r.h(r.dF(x)), n, one))
    rep.add(_identity_check("h i = 0", G, lambda x: r.h(r.i(x)), zero, n, one))
    rep.add(_identity_check("p h = 0", F, lambda x: r.p(r.h(x)), zero, n, one))
    rep.add(_identity_check("h h = 0", F, lambda x: r.h(r.h(x)), zero, n, one))
    rep.add(_identity_check("dF dF = 0", F, lambda x: r.dF(r.dF(x)), zero, n, one))
    rep.add(_identity_check("dG dG = 0", G, lambda x: r.dG(r.dG(x)), zero, n, one))
    rep.add(_identity_check("dF i = i dG", G, lambda x: r.dF(r.i(x)), lambda x: r.i(r.dG(x)), n, one))
    rep.add(_identity_check("dG p = p dF", F, lambda x: r.dG(r.p(x)), lambda x: r.p(r.dF(x)), n, one))
    return rep


def check_against_L(pr: PerturbedRetract, L: ComplexData) -> CheckReport:
    """Entrywise equality of the transferred differential with the L differential."""
    D = L.differential()
    labels = L.all_labels()
    for k, lab in enumerate(labels, start=1):
        if pr.dG_inf.column(lab) != D.column(lab):
            return CheckReport("dG_inf = L differential", False, k,
                               f"{lab}: transferred {pr.dG_inf.column(lab)} vs {D.column(lab)}")
    return CheckReport("dG_inf = L differential", True, len(labels))


def closed_form_i(pr: PerturbedRetract, x: Element) -> Element:
    """``-(1 - h Kos)^{-1} h`` on a kernel element, with ``h`` the de Rham map."""
    r = pr.base
    cfg = r.cfg
    L = r.small
    y = Element()
    for lab, p in x.items():
        if lab == UNIT:
            y.iadd(r.i(Element({lab: p})))
    x = Element({k: v for k, v in x.items() if k != UNIT})
    v = Element()
    for blab, p in L.embed(x).items():
        v.iadd(derham_label(blab, cfg), -p)
    acc = Element(dict(v.coeffs))
    for _ in range(cfg.n + cfg.d + 1):
        kv = Element()
        for lab, p in v.items():
            kv.iadd(kos_label(lab, cfg), p)
        nv = Element()
        for lab, p in kv.items():
            nv.iadd(derham_label(lab, cfg), p)
        v = nv
        if v.is_zero():
            break
        acc.iadd(v)
    return acc + y


def check_closed_form(pr: PerturbedRetract) -> CheckReport:
    cfg = pr.base.cfg
    G = _all_labels(pr.base.small)
    return _identity_check("i_inf = closed form", G, lambda x: pr.i_inf(x),
                           lambda x: closed_form_i(pr, x), cfg.n, cfg.one)


def corrupt_flip(pr: PerturbedRetract) -> PerturbedRetract:
    """Negative-control fixture: report ``dF - delta`` as the perturbed differential."""
    return replace(pr, dF_inf=pr.base.dF - pr.delta)
