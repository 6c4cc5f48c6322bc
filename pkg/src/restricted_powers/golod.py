"""Koszul homology of ``R/I`` for ``I`` a restricted power, explicit cycle
lifts, the zero Massey operation and Golod's resolution of the residue field."""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from itertools import combinations
from math import comb
from typing import NamedTuple

from .combinat import SetupConfig, sign_in, sign_shuffle, wedge_sign
from .complexes import (UNIT, ComplexData, FreeModuleSpec, KosLabel, UnitLabel, koszul_complex,
                        restricted_module, restricted_power_ideal, build_L_complex)
from .corealg import (BasisLabel, Element, ExpVec, LinMap, MonomialIdeal, Poly, ideal_member,
                      label_key, mdeg, rank, reduce_mod, ring_mdeg, unit_vec, vadd, vle)
from .oracle import (StrandBox, StrandEngine, check_acyclic, check_d_squared, check_minimal,
                     label_box)
from .report import CheckReport, Report


def z_coeff(tau, cfg: SetupConfig) -> ExpVec:
    """Exponent of the monomial in ``z_tau = prod_{t in tau} x_t^(e_t - 1) e_tau``."""
    return tuple(cfg.e[i] - 1 if i + 1 in tau else 0 for i in range(cfg.n))


class KWLabel(NamedTuple):
    """``e_tau (x) f_rest`` in ``K_j (x) wedge^(i-j)``."""

    tau: tuple[int, ...]
    rest: tuple[int, ...]

    def sort_key(self):
        return (len(self.tau), self.tau, self.rest)

    def __str__(self):
        return "e[%s]*f[%s]" % (",".join(map(str, self.tau)), ",".join(map(str, self.rest)))


class LiftLabel(NamedTuple):
    """``a (x) e_tau`` with ``a`` a label of ``(wedge (x) S_{d-1})_w`` or the unit of ``R``."""

    a: object
    tau: tuple[int, ...]

    def sort_key(self):
        a = self.a
        return (len(self.tau), self.tau, (0,) if isinstance(a, UnitLabel) else (1,) + a.sort_key())

    def __str__(self):
        return "%s (x) e[%s]" % (self.a, ",".join(map(str, self.tau)))


def phi(i: int, j: int, sigma, cfg: SetupConfig) -> Element:
    """``sum_{tau in sigma, |tau| = j} sgn(tau in sigma) z_tau (x) f_{sigma \\ tau}``."""
    sigma = tuple(sorted(sigma))
    if len(sigma) != i or not 0 <= j <= i:
        raise ValueError(f"need |sigma| = {i} and 0 <= {j} <= {i}")
    out = Element()
    for tau in combinations(sigma, j):
        rest = tuple(s for s in sigma if s not in tau)
        c = cfg.field(sign_shuffle(tau, sigma))
        out.iadd(Element({KWLabel(tau, rest): Poly.monomial(z_coeff(tau, cfg), c)}))
    return out


def _psi_alpha(alpha, cfg) -> ExpVec:
    return tuple(a * e for a, e in zip(alpha, cfg.e))


def lift_cycle(sigma, alpha, cfg: SetupConfig) -> Element:
    """``f_sigma (x) f^alpha + sum_{0<j<i} phi^i_j(f_sigma) (x) f^alpha + psi(f^alpha) phi^i_i(f_sigma)``."""
    sigma = tuple(sorted(sigma))
    alpha = tuple(alpha)
    lab = BasisLabel(sigma, alpha)
    if sum(alpha) != cfg.d - 1 or not vle(mdeg(lab), cfg.w):
        raise ValueError(f"{lab} is not a label of (wedge (x) S_{cfg.d - 1})_w")
    i = len(sigma)
    out = Element()
    for j in range(i + 1):
        for kw, p in phi(i, j, sigma, cfg).items():
            if kw.rest:
                out.iadd(Element({LiftLabel(BasisLabel(kw.rest, alpha), kw.tau): p}))
            else:
                out.iadd(Element({LiftLabel(UNIT, kw.tau): p * Poly.monomial(_psi_alpha(alpha, cfg))}))
    return out


def _d_A(a, cfg) -> Element:
    """Differential of ``... -> (wedge^1 (x) S_{d-1})_w -> R``; the last map is ``f_r (x) f^alpha -> psi(f^(alpha + eps_r))``."""
    if isinstance(a, UnitLabel):
        return Element()
    sigma, alpha = a
    n = cfg.n
    out = Element()
    for r in sigma:
        c = cfg.field(sign_in(r, sigma))
        rest = tuple(s for s in sigma if s != r)
        xr = tuple(cfg.e[k] if k == r - 1 else 0 for k in range(n))
        if rest:
            out.iadd(Element({BasisLabel(rest, alpha): Poly.monomial(xr, c)}))
        else:
            out.iadd(Element({UNIT: Poly.monomial(vadd(xr, _psi_alpha(alpha, cfg)), c)}))
    return out


def _d_K(tau, cfg) -> list[tuple[tuple, Poly]]:
    out = []
    for t in tau:
        out.append((tuple(s for s in tau if s != t),
                    Poly.monomial(unit_vec(cfg.n, t), cfg.field(sign_in(t, tau)))))
    return out


def lift_differential(x: Element, cfg: SetupConfig) -> Element:
    """Total differential on ``K (x) A``: ``D(e_tau (x) a) = d_K e_tau (x) a - (-1)^|tau| e_tau (x) d_A a``.

    Labels store the ``A`` factor first but the sign is the one for ``K`` first,
    matching the order used by ``sign_shuffle``.
    """
    out = Element()
    for lab, p in x.items():
        a, tau = lab
        s = cfg.field(1 if len(tau) % 2 else -1)
        for b, q in _d_A(a, cfg).items():
            out.iadd(Element({LiftLabel(b, tau): q * s}), p)
        for t2, q in _d_K(tau, cfg):
            out.iadd(Element({LiftLabel(a, t2): q}), p)
    return out


# ---------------------------------------------------------------------------
# Koszul homology
# ---------------------------------------------------------------------------

@dataclass
class HomologyClass:
    degree: int
    rep: Element
    provenance: tuple | None = None

    def __str__(self):
        return f"H{self.degree}: {self.rep}"


def candidate_rep(sigma, alpha, cfg: SetupConfig, ideal: MonomialIdeal | None = None) -> Element:
    """``psi(f^alpha) z_sigma`` in ``(R/I) (x) K``."""
    mono = vadd(_psi_alpha(alpha, cfg), z_coeff(sigma, cfg))
    p = reduce_mod(Poly.monomial(mono, cfg.one), ideal)
    return Element({KosLabel(tuple(sigma)): p})


def kos_mul(x: Element, y: Element, cfg: SetupConfig, ideal: MonomialIdeal | None) -> Element:
    """Product in the exterior algebra over ``R/I``."""
    out = Element()
    for a, p in x.items():
        for b, q in y.items():
            s, rho = wedge_sign(a.tau, b.tau)
            if s:
                out.iadd(Element({KosLabel(rho): reduce_mod(p * q, ideal) * cfg.field(s)}))
    return out


def koszul_homology_dims(cfg: SetupConfig, ideal: MonomialIdeal | None = None) -> dict:
    """``{(i, m): dim H_i((R/I) (x) K)_m}``, nonzero entries only.

    Taylor's resolution puts all of ``Tor^R(R/I, k)`` at lcms of generators,
    so the box ``[0, lcm(I)]`` sees everything.
    """
    ideal = ideal or restricted_power_ideal(cfg)
    K = koszul_complex(cfg, ideal)
    eng = StrandEngine(K, ideal)
    out = {}
    for m in StrandBox(ideal.lcm()).points():
        hs, _ = eng.homology(m)
        for i, h in enumerate(hs):
            if h:
                out[(i, m)] = h
    return out


@dataclass
class _Fiber:
    m: ExpVec
    degree: int
    need: int
    cands: list  # (sigma, alpha, rep)
    basis: list  # fiber labels in degree i
    boundary_rank: int
    boundary_rows: list


def _vector(rep: Element, m, basis) -> list:
    idx = {lab: k for k, lab in enumerate(basis)}
    v = [0] * len(basis)
    for lab, p in rep.items():
        for mono, c in p:
            v[idx[lab]] = c
    return v


def _fibers(cfg, ideal):
    K = koszul_complex(cfg, ideal)
    eng = StrandEngine(K, ideal)
    dims = koszul_homology_dims(cfg, ideal)
    by_m: dict = {}
    for i in range(1, cfg.n + 1):
        for lab in restricted_module(i, cfg.d - 1, cfg).labels:
            rep = candidate_rep(lab.sigma, lab.alpha, cfg, ideal)
            by_m.setdefault((i, ring_mdeg(lab, cfg.e)), []).append((lab.sigma, lab.alpha, rep))
    fibers = []
    for (i, m), need in sorted(dims.items()):
        if i == 0:
            continue
        fib = {k: eng.fiber(k, m) for k in eng.degs}
        B = eng.matrix(i + 1, m, fib) if i + 1 in fib else []
        # boundaries as row vectors in the degree-i fiber
        brows = [list(col) for col in zip(*B)] if B and B[0] else []
        cands = [c for c in by_m.get((i, m), []) if not c[2].is_zero()]
        fibers.append(_Fiber(m, i, need, cands, fib[i], rank(brows, len(fib[i])) if brows else 0, brows))
    return fibers, dims


def _independent(fiber: _Fiber, chosen_vecs: list) -> bool:
    nb = len(fiber.basis)
    rows = fiber.boundary_rows + chosen_vecs
    return rank(rows, nb) == fiber.boundary_rank + len(chosen_vecs)


def _product_zero(c1, c2, cfg, ideal) -> bool:
    (s1, a1, _), (s2, a2, _) = c1, c2
    if set(s1) & set(s2):
        return True
    mono = vadd(vadd(_psi_alpha(a1, cfg), z_coeff(s1, cfg)), vadd(_psi_alpha(a2, cfg), z_coeff(s2, cfg)))
    return ideal_member(mono, ideal)


@dataclass
class KoszulHomology:
    classes: list[HomologyClass]
    dims: dict[int, int]
    graded: dict
    strategy: str
    falsification: str | None = None
    nodes: int = 0


def koszul_homology(cfg: SetupConfig, ideal: MonomialIdeal | None = None,
                    node_limit: int = 200000) -> KoszulHomology:
    """Classes ``psi(f^alpha) z_sigma`` spanning ``H_{>=1}``, fiber by fiber.

    Representatives are chosen by a depth-first search over lexicographic
    candidate subsets so that all pairwise products vanish identically mod
    ``I``; if no such choice exists the greedy lexicographic choice is
    returned and the reason recorded.
    """
    ideal = ideal or restricted_power_ideal(cfg)
    fibers, graded = _fibers(cfg, ideal)
    dims: dict[int, int] = {}
    for (i, m), h in graded.items():
        dims[i] = dims.get(i, 0) + h
    for f in fibers:
        if len(f.cands) < f.need:
            raise ValueError(f"only {len(f.cands)} candidate reps at {f.m} for dim H_{f.degree} = {f.need}")

    # per-fiber admissible subsets, in lexicographic order of candidate index
    options = []
    for f in fibers:
        opts = []
        for combo in combinations(range(len(f.cands)), f.need):
            vecs = [_vector(f.cands[k][2], f.m, f.basis) for k in combo]
            if _independent(f, vecs):
                opts.append(combo)
        if not opts:
            raise ValueError(f"candidate reps do not span H_{f.degree} at {f.m}")
        options.append(opts)

    nodes = 0
    chosen: list = []

    def compatible(cands):
        for c in cands:
            for d in chosen_flat:
                if not _product_zero(c, d, cfg, ideal):
                    return False
        for x, y in combinations(cands, 2):
            if not _product_zero(x, y, cfg, ideal):
                return False
        return all(_product_zero(c, c, cfg, ideal) for c in cands)

    chosen_flat: list = []

    def dfs(k):
        nonlocal nodes
        if k == len(fibers):
            return True
        for combo in options[k]:
            nodes += 1
            if nodes > node_limit:
                return False
            cands = [fibers[k].cands[j] for j in combo]
            if compatible(cands):
                chosen.append(cands)
                chosen_flat.extend(cands)
                if dfs(k + 1):
                    return True
                chosen.pop()
                del chosen_flat[len(chosen_flat) - len(cands):]
        return False

    ok = dfs(0)
    strategy, why = "product-free search", None
    if not ok:
        chosen = [[f.cands[j] for j in options[k][0]] for k, f in enumerate(fibers)]
        strategy = "greedy (lexicographic)"
        why = ("no choice of representatives has identically vanishing pairwise products"
               if nodes <= node_limit else f"search stopped after {node_limit} nodes")
    classes = []
    for f, cands in zip(fibers, chosen):
        for sigma, alpha, rep in cands:
            classes.append(HomologyClass(f.degree, rep, (sigma, alpha)))
    return KoszulHomology(classes, dims, graded, strategy, why, nodes)


def corrupt_lift(sigma, alpha, cfg: SetupConfig) -> Element:
    """Negative-control fixture: the lift with its ``j = i`` term negated."""
    z = lift_cycle(sigma, alpha, cfg)
    top = len(sigma)
    return Element({lab: (-p if len(lab.tau) == top else p) for lab, p in z.items()})


def check_koszul(cfg: SetupConfig, kh: KoszulHomology | None = None, lift=None) -> Report:
    """Lifts are cycles, reps are cycles, and ``dim H_i`` equals the L rank in degree ``i``."""
    lift = lift or lift_cycle
    rep = Report(f"Koszul homology {cfg}")
    n = 0
    bad = None
    for i in range(1, cfg.n + 1):
        for lab in restricted_module(i, cfg.d - 1, cfg).labels:
            n += 1
            z = lift(lab.sigma, lab.alpha, cfg)
            dz = lift_differential(z, cfg)
            if not dz.is_zero() and bad is None:
                bad = f"{lab}: D(lift) = {dz}"
    rep.add(CheckReport("lifts are cycles", bad is None, n, bad))

    ideal = restricted_power_ideal(cfg)
    kh = kh or koszul_homology(cfg, ideal)
    K = koszul_complex(cfg, ideal)
    D = K.differential()
    bad = next((str(c) for c in kh.classes if not D(c.rep).reduce_mod(ideal).is_zero()), None)
    rep.add(CheckReport("representatives are cycles mod I", bad is None, len(kh.classes), bad))

    L = build_L_complex(cfg)
    ranks = L.ranks()
    bad = None
    for i in range(1, max(len(ranks), cfg.n + 1)):
        want = ranks[i] if i < len(ranks) else 0
        if kh.dims.get(i, 0) != want:
            bad = f"dim H_{i} = {kh.dims.get(i, 0)}, rank L_{i} = {want}"
            break
    rep.add(CheckReport("dim H_i = rank L_i", bad is None, cfg.n, bad,
                        "dims " + ",".join(str(kh.dims.get(i, 0)) for i in range(1, cfg.n + 1))))
    return rep


# ---------------------------------------------------------------------------
# Massey operation
# ---------------------------------------------------------------------------

@dataclass
class MasseyWitness:
    basis: list[HomologyClass]
    mu: dict = dc_field(default_factory=dict)
    report: Report | None = None

    def __call__(self, *classes):
        """``mu(h) = rep``, ``mu(h_1, ..., h_p) = 0`` for ``p >= 2``."""
        if len(classes) == 1:
            return self.mu[classes[0]]
        return Element()


def check_golod(cfg: SetupConfig, kh: KoszulHomology | None = None) -> MasseyWitness:
    if cfg.d < 2:
        raise ValueError("Golodness is claimed for d >= 2 only")
    ideal = restricted_power_ideal(cfg)
    kh = kh or koszul_homology(cfg, ideal)
    rep = Report(f"Golod {cfg}")
    count, bad = 0, None
    for a in kh.classes:
        for b in kh.classes:
            count += 1
            prod = kos_mul(a.rep, b.rep, cfg, ideal)
            if not prod.is_zero() and bad is None:
                bad = f"({a.rep}) * ({b.rep}) = {prod}"
    detail = f"choice: {kh.strategy}"
    if kh.falsification:
        detail += f"; {kh.falsification}"
    rep.add(CheckReport("pairwise products vanish mod I", bad is None, count, bad, detail))
    mu = {k: c.rep for k, c in enumerate(kh.classes)}
    # the Massey equation for p >= 2: d mu(h_1..h_p) = sum +- mu(..) mu(..); both sides vanish
    rep.add(CheckReport("zero Massey operation well defined", bad is None, count, bad))
    return MasseyWitness(kh.classes, mu, rep)


# ---------------------------------------------------------------------------
# Golod's resolution of k
# ---------------------------------------------------------------------------

class GolodWord(NamedTuple):
    """``e_tau (x) v_{c_1} (x) ... (x) v_{c_p}``; letters are indices into the class list."""

    koszul: tuple[int, ...]
    letters: tuple[int, ...]

    def sort_key(self):
        return (len(self.koszul), self.koszul, self.letters)

    def __str__(self):
        return "e[%s]|%s" % (",".join(map(str, self.koszul)), ".".join(f"v{c}" for c in self.letters))


def _letter_degree(c: HomologyClass) -> int:
    return c.degree + 1


def _words(cfg, classes, max_deg):
    """All words by homological degree ``h + sum(|sigma_j| + 1)``."""
    by_deg: dict[int, list] = {k: [] for k in range(max_deg + 1)}
    lens = [_letter_degree(c) for c in classes]

    def seqs(budget):
        yield ()
        for k, ln in enumerate(lens):
            if ln <= budget:
                for rest in seqs(budget - ln):
                    yield (k,) + rest

    for h in range(cfg.n + 1):
        if h > max_deg:
            break
        for tau in combinations(range(1, cfg.n + 1), h):
            for s in seqs(max_deg - h):
                deg = h + sum(lens[k] for k in s)
                by_deg[deg].append(GolodWord(tau, s))
    return by_deg


def golod_resolution(cfg: SetupConfig, max_deg: int, kh: KoszulHomology | None = None) -> ComplexData:
    """Degrees ``0..max_deg`` of Golod's resolution of ``k`` over ``R/I``."""
    if cfg.d < 2:
        raise ValueError("Golod's construction here needs d >= 2")
    if max_deg < 1:
        raise ValueError("max_deg must be >= 1")
    ideal = restricted_power_ideal(cfg)
    kh = kh or koszul_homology(cfg, ideal)
    classes = kh.classes
    cm = [_class_mdeg(c, cfg) for c in classes]
    words = _words(cfg, classes, max_deg)
    modules = {}
    for k in range(max_deg + 1):
        labs = sorted(words[k], key=label_key)
        rmd = {}
        for wd in labs:
            m = tuple(1 if i + 1 in wd.koszul else 0 for i in range(cfg.n))
            for c in wd.letters:
                m = vadd(m, cm[c])
            rmd[wd] = m
        modules[k] = FreeModuleSpec(labs, rmd)
    diffs = {}
    for k in range(1, max_deg + 1):
        cols = {}
        for wd in modules[k].labels:
            col = Element()
            for t2, q in _d_K(wd.koszul, cfg):
                q = reduce_mod(q, ideal)
                if not q.is_zero():
                    col.iadd(Element({GolodWord(t2, wd.letters): q}))
            if wd.letters:
                s = cfg.field(-1 if len(wd.koszul) % 2 else 1)
                z = classes[wd.letters[0]].rep
                for lab, p in kos_mul(Element({KosLabel(wd.koszul): Poly.const(cfg.one, cfg.n)}),
                                      z, cfg, ideal).items():
                    col.iadd(Element({GolodWord(lab.tau, wd.letters[1:]): p * s}))
            cols[wd] = col
        diffs[k] = LinMap(cols, modules[k].labels, modules[k - 1].labels)
    return ComplexData(modules, diffs, cfg.n, ideal, name="T")


def _class_mdeg(c: HomologyClass, cfg) -> ExpVec:
    sigma, alpha = c.provenance
    return ring_mdeg(BasisLabel(sigma, alpha), cfg.e)


def poincare_coeffs(cfg: SetupConfig, max_deg: int, dims: dict | None = None) -> list[int]:
    """Coefficients of ``(1+t)^n / (1 - sum_i dim H_i t^(i+1))`` up to ``t^max_deg``."""
    if dims is None:
        dims = koszul_homology(cfg).dims
    num = [0] * (max_deg + 1)
    for k in range(min(cfg.n, max_deg) + 1):
        num[k] = comb(cfg.n, k)
    out = [0] * (max_deg + 1)
    for k in range(max_deg + 1):
        v = num[k]
        for i, h in dims.items():
            if i >= 1 and k - i - 1 >= 0:
                v += h * out[k - i - 1]
        out[k] = v
    return out


def check_golod_resolution(cfg: SetupConfig, max_deg: int = 5, acyclic_through: int | None = None,
                           kh: KoszulHomology | None = None) -> Report:
    """``d^2 = 0`` mod I, minimality, strand acyclicity in degrees ``1..acyclic_through``
    over the label box, ``H_0 = k``, and ranks against the series."""
    ideal = restricted_power_ideal(cfg)
    kh = kh or koszul_homology(cfg, ideal)
    top = max_deg if acyclic_through is None else max(max_deg, acyclic_through + 1)
    T = golod_resolution(cfg, top, kh)
    rep = Report(f"Golod resolution {cfg}")
    rep.add(check_d_squared(T, ideal))
    rep.add(check_minimal(T))
    through = acyclic_through if acyclic_through is not None else max_deg - 1
    box = StrandBox(label_box(T))
    zero = (0,) * cfg.n
    rep.add(check_acyclic(T, box, ideal, range(1, through + 1),
                          h0=lambda m: 1 if m == zero else 0,
                          name=f"strand acyclicity in degrees 1..{through}, H_0 = k"))
    ranks = T.ranks(trim=False)[: max_deg + 1]
    series = poincare_coeffs(cfg, max_deg, kh.dims)
    rep.add(CheckReport("ranks = series coefficients", ranks == series, max_deg + 1,
                        None if ranks == series else f"ranks {ranks} vs series {series}",
                        "series " + ",".join(map(str, series))))
    rep.payload.update({"ranks": ranks, "series": series})
    return rep
