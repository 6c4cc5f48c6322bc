"""Complexes: the restricted bicomplex, its totalization ``X_d^w``, the
resolution ``L^w(psi, d)``, the Koszul complex on the variables and the
restricted-power ideal itself."""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from functools import lru_cache
from itertools import combinations
from typing import Hashable, NamedTuple

from .combinat import SetupConfig, compositions, restricted_exponents, sign_in
from .corealg import (BasisLabel, Element, ExpVec, FiberKernel, LinMap, MonomialIdeal, Poly,
                      kernel_fibers, label_key, mdeg, reduce_mod, ring_mdeg, vadd,
                      unit_vec)


class UnitLabel(NamedTuple):
    """Generator of the free module ``R`` in homological degree 0."""

    def sort_key(self):
        return (0,)

    def __str__(self):
        return "1"


UNIT = UnitLabel()


class LLabel(NamedTuple):
    """Kernel basis vector number ``idx`` of ``L^a_{d,w}`` in formal multidegree ``mdeg``."""

    a: int
    mdeg: ExpVec
    idx: int

    def sort_key(self):
        return (self.a, self.mdeg, self.idx)

    def __str__(self):
        return "L%d[%s;%d]" % (self.a, ",".join(map(str, self.mdeg)), self.idx)


class KosLabel(NamedTuple):
    """``e_tau`` in the Koszul complex on the variables."""

    tau: tuple[int, ...]

    def sort_key(self):
        return (len(self.tau), self.tau)

    def __str__(self):
        return "e[%s]" % ",".join(map(str, self.tau))


@dataclass
class FreeModuleSpec:
    labels: list
    ring_mdeg: dict

    def __len__(self):
        return len(self.labels)


@dataclass
class ComplexData:
    """Finite complex of labeled free modules; ``diffs[k]`` maps degree k to k-1."""

    modules: dict[int, FreeModuleSpec]
    diffs: dict[int, LinMap]
    n: int
    ideal: MonomialIdeal | None = None
    name: str = ""

    def degrees(self) -> list[int]:
        return sorted(self.modules)

    def ranks(self, trim: bool = True) -> list[int]:
        top = max(self.modules) if self.modules else -1
        out = [len(self.modules.get(k, FreeModuleSpec([], {}))) for k in range(top + 1)]
        while trim and out and out[-1] == 0:
            out.pop()
        return out

    def labels(self, k: int) -> list:
        m = self.modules.get(k)
        return m.labels if m else []

    def all_labels(self) -> list:
        return [lab for k in self.degrees() for lab in self.modules[k].labels]

    def degree_of(self, label) -> int:
        return self._degree_index()[label]

    def _degree_index(self) -> dict:
        idx = getattr(self, "_deg_cache", None)
        if idx is None:
            idx = {lab: k for k in self.degrees() for lab in self.modules[k].labels}
            self._deg_cache = idx
        return idx

    def ring_mdeg(self, label) -> ExpVec:
        return self.modules[self.degree_of(label)].ring_mdeg[label]

    def differential(self) -> LinMap:
        """All differentials as one graded map."""
        cols = {}
        for d in self.diffs.values():
            cols.update(d.columns)
        return LinMap(cols)

    def d(self, x: Element) -> Element:
        out = self.differential()(x)
        return out.reduce_mod(self.ideal) if self.ideal is not None else out


@dataclass
class BicomplexData:
    """Modules keyed by ``(a, b)``; ``horiz`` holds kappa, ``vert`` holds Kos (x) 1."""

    modules: dict[tuple[int, int], FreeModuleSpec]
    horiz: dict[tuple[int, int], LinMap]
    vert: dict[tuple[int, int], LinMap]
    cfg: SetupConfig


# ---------------------------------------------------------------------------
# modules and the two basic maps
# ---------------------------------------------------------------------------

def restricted_module(a: int, b: int, cfg: SetupConfig) -> FreeModuleSpec:
    """Labels ``(sigma, alpha)`` with ``|sigma| = a``, ``|alpha| = b`` and ``mdeg <= w``."""
    labels = _restricted_labels(a, b, cfg.n, cfg.w)
    return FreeModuleSpec(list(labels), {lab: ring_mdeg(lab, cfg.e) for lab in labels})


@lru_cache(maxsize=None)
def _restricted_labels(a: int, b: int, n: int, w: ExpVec) -> tuple[BasisLabel, ...]:
    if a < 0 or b < 0 or a > n:
        return ()
    out = []
    for sigma in combinations(range(1, n + 1), a):
        cap = list(w)
        ok = True
        for s in sigma:
            cap[s - 1] -= 1
            ok &= cap[s - 1] >= 0
        if not ok:
            continue
        for alpha in compositions(b, n, tuple(cap)):
            out.append(BasisLabel(sigma, alpha))
    return tuple(sorted(out, key=label_key))


@lru_cache(maxsize=None)
def kappa_label(label: BasisLabel, cfg: SetupConfig) -> Element:
    """``kappa(f_sigma (x) f^alpha) = sum_r sgn(r in sigma) f_{sigma\\r} (x) f^{alpha+eps_r}``."""
    sigma, alpha = label
    n = cfg.n
    out = {}
    for r in sigma:
        lab = BasisLabel(tuple(s for s in sigma if s != r), vadd(alpha, unit_vec(n, r)))
        out[lab] = Poly.const(cfg.field(sign_in(r, sigma)), n)
    return Element(out)


@lru_cache(maxsize=None)
def kos_label(label: BasisLabel, cfg: SetupConfig) -> Element:
    """``(Kos (x) 1)(f_sigma (x) f^alpha) = sum_r sgn(r in sigma) x_r^{e_r} f_{sigma\\r} (x) f^alpha``."""
    sigma, alpha = label
    n = cfg.n
    out = {}
    for r in sigma:
        lab = BasisLabel(tuple(s for s in sigma if s != r), alpha)
        out[lab] = Poly.monomial(tuple(cfg.e[i] if i == r - 1 else 0 for i in range(n)),
                                 cfg.field(sign_in(r, sigma)))
    return Element(out)


def kappa(a: int, b: int, cfg: SetupConfig) -> LinMap:
    src = restricted_module(a, b, cfg).labels
    tgt = restricted_module(a - 1, b + 1, cfg).labels
    return LinMap({lab: kappa_label(lab, cfg) for lab in src}, src, tgt)


def kos_tensor(a: int, b: int, cfg: SetupConfig) -> LinMap:
    src = restricted_module(a, b, cfg).labels
    tgt = restricted_module(a - 1, b, cfg).labels
    return LinMap({lab: kos_label(lab, cfg) for lab in src}, src, tgt)


def graded_map(labels, fn, cfg: SetupConfig) -> LinMap:
    """Assemble a map from a per-label function."""
    return LinMap({lab: fn(lab, cfg) for lab in labels})


# ---------------------------------------------------------------------------
# the bicomplex and X_d^w
# ---------------------------------------------------------------------------

def build_bicomplex(cfg: SetupConfig) -> BicomplexData:
    """Pieces ``(wedge^a (x) S_b)_w`` for ``b < d`` with kappa and Kos (x) 1;
    the column of kernels is not included."""
    mods, horiz, vert = {}, {}, {}
    for b in range(cfg.d):
        for a in range(cfg.n + 1):
            m = restricted_module(a, b, cfg)
            if m.labels:
                mods[(a, b)] = m
    for (a, b) in mods:
        if a >= 1 and b + 1 <= cfg.d - 1:
            horiz[(a, b)] = kappa(a, b, cfg)
        if a >= 1:
            vert[(a, b)] = kos_tensor(a, b, cfg)
    return BicomplexData(mods, horiz, vert, cfg)


def totalize(B: BicomplexData) -> ComplexData:
    """Total complex with differential ``horiz - vert``; piece ``(a, b)`` sits in degree ``a``."""
    cfg = B.cfg
    modules: dict[int, FreeModuleSpec] = {}
    for (a, b) in sorted(B.modules, key=lambda ab: (ab[0], ab[1])):
        m = B.modules[(a, b)]
        spec = modules.setdefault(a, FreeModuleSpec([], {}))
        spec.labels.extend(m.labels)
        spec.ring_mdeg.update(m.ring_mdeg)
    diffs = {}
    for k in modules:
        if k == 0:
            continue
        cols = {}
        for (a, b), m in B.modules.items():
            if a != k:
                continue
            h = B.horiz.get((a, b))
            v = B.vert.get((a, b))
            for lab in m.labels:
                col = Element()
                if h is not None:
                    col.iadd(h.column(lab))
                if v is not None:
                    col.iadd(-v.column(lab))
                cols[lab] = col
        diffs[k] = LinMap(cols, modules[k].labels, modules.get(k - 1, FreeModuleSpec([], {})).labels)
    return ComplexData(modules, diffs, cfg.n, None, name="X")


def build_X(cfg: SetupConfig) -> ComplexData:
    return totalize(build_bicomplex(cfg))


# ---------------------------------------------------------------------------
# the resolution L^w(psi, d)
# ---------------------------------------------------------------------------

class InternalConsistencyError(RuntimeError):
    """A construction produced something its own invariants forbid."""


@dataclass
class LComplex(ComplexData):
    """``L^w(psi, d)``: ``R`` in degree 0 and ``L^a_{d,w}`` in degree ``a + 1``."""

    cfg: SetupConfig | None = None
    fibers: dict[int, dict[ExpVec, FiberKernel]] = dc_field(default_factory=dict)
    embedding: dict[Hashable, Element] = dc_field(default_factory=dict)

    def coords(self, a: int, x: Element) -> Element:
        """Express ``x`` in ``(wedge^a (x) S_d)_w`` (polynomial coefficients) in
        the kernel basis of ``L^a_{d,w}``; raise if ``x`` is not in the kernel."""
        cfg = self.cfg
        # split by monomial coefficient, then by fiber
        pieces: dict[tuple, dict] = {}
        for lab, p in x.items():
            if lab.a != a or lab.b != cfg.d:
                raise InternalConsistencyError(f"{lab} is not a label of wedge^{a} (x) S_{cfg.d}")
            md = mdeg(lab)
            for mono, c in p:
                pieces.setdefault((mono, md), {})[lab] = c
        out = Element()
        for (mono, md), vec in pieces.items():
            fk = self.fibers.get(a, {}).get(md)
            if fk is None:
                raise InternalConsistencyError(f"no kernel fiber at {md} for {vec}")
            cs = fk.coords(vec)
            recon: dict = {}
            for c, v in zip(cs, fk.vectors):
                if c == 0:
                    continue
                for lab, t in zip(fk.labels, v):
                    if t != 0:
                        recon[lab] = recon.get(lab, 0) + c * t
            recon = {k: v for k, v in recon.items() if v != 0}
            if recon != {k: v for k, v in vec.items() if v != 0}:
                raise InternalConsistencyError(f"vector {vec} at {md} is not in L^{a}")
            for i, c in enumerate(cs):
                if c != 0:
                    out.iadd(Element({LLabel(a, md, i): Poly.monomial(mono, c)}))
        return out

    def embed(self, x: Element) -> Element:
        """Map an element over L-labels into ``wedge (x) S_d`` (the unit stays put)."""
        out = Element()
        for lab, p in x.items():
            if isinstance(lab, UnitLabel):
                out.iadd(Element({lab: p}))
            else:
                out.iadd(self.embedding[lab], p)
        return out


def build_L_complex(cfg: SetupConfig) -> LComplex:
    n, d = cfg.n, cfg.d
    modules = {0: FreeModuleSpec([UNIT], {UNIT: (0,) * n})}
    fibers: dict[int, dict] = {}
    embedding: dict = {}
    for a in range(n):
        src = restricted_module(a, d, cfg).labels
        kap = LinMap({lab: kappa_label(lab, cfg) for lab in src})
        fk = kernel_fibers(kap, src, n, cfg.field)
        fibers[a] = fk
        labels, rmd = [], {}
        for md, fiber in fk.items():
            for i, el in enumerate(fiber.elements(n)):
                lab = LLabel(a, md, i)
                labels.append(lab)
                rmd[lab] = tuple(k * e for k, e in zip(md, cfg.e))
                embedding[lab] = el
        labels.sort(key=label_key)
        modules[a + 1] = FreeModuleSpec(labels, rmd)
    L = LComplex(modules, {}, n, None, "L", cfg=cfg, fibers=fibers, embedding=embedding)
    # degree 1 -> 0 is psi
    cols = {}
    for lab in modules[1].labels:
        (blab, p), = embedding[lab].items()
        c = p.constant_term()
        cols[lab] = Element({UNIT: Poly.monomial(ring_mdeg(blab, cfg.e), c)})
    L.diffs[1] = LinMap(cols, modules[1].labels, [UNIT])
    for a in range(1, n):
        cols = {}
        for lab in modules[a + 1].labels:
            img = Element()
            for blab, p in embedding[lab].items():
                img.iadd(kos_label(blab, cfg), p)
            cols[lab] = L.coords(a - 1, img)
        L.diffs[a + 1] = LinMap(cols, modules[a + 1].labels, modules[a].labels)
    return L


# ---------------------------------------------------------------------------
# Koszul complex on the variables, the ideal
# ---------------------------------------------------------------------------

def koszul_complex(cfg: SetupConfig, ideal: MonomialIdeal | None = None) -> ComplexData:
    """Exterior algebra on ``e_1..e_n`` with ``d(e_i) = x_i``; over ``R/I`` if ``ideal`` is given."""
    n = cfg.n
    modules, diffs = {}, {}
    for k in range(n + 1):
        labs = [KosLabel(t) for t in combinations(range(1, n + 1), k)]
        modules[k] = FreeModuleSpec(labs, {lab: _indicator(lab.tau, n) for lab in labs})
    for k in range(1, n + 1):
        cols = {}
        for lab in modules[k].labels:
            col = {}
            for r in lab.tau:
                p = Poly.monomial(unit_vec(n, r), cfg.field(sign_in(r, lab.tau)))
                p = reduce_mod(p, ideal)
                if not p.is_zero():
                    col[KosLabel(tuple(t for t in lab.tau if t != r))] = p
            cols[lab] = Element(col)
        diffs[k] = LinMap(cols, modules[k].labels, modules[k - 1].labels)
    return ComplexData(modules, diffs, n, ideal, name="K")


def _indicator(tau, n) -> ExpVec:
    return tuple(1 if i + 1 in tau else 0 for i in range(n))


def restricted_power_ideal(cfg: SetupConfig) -> MonomialIdeal:
    """``(im psi)^d_w`` with ``psi(f_i) = x_i^{e_i}``, minimalized."""
    gens = [tuple(a * e for a, e in zip(alpha, cfg.e)) for alpha in restricted_exponents(cfg)]
    return MonomialIdeal(gens, cfg.n)


def column_complex(b: int, cfg: SetupConfig) -> ComplexData:
    """The column ``(wedge^* (x) S_b)_w`` with Kos (x) 1."""
    modules, diffs = {}, {}
    for a in range(cfg.n + 1):
        modules[a] = restricted_module(a, b, cfg)
    for a in range(1, cfg.n + 1):
        diffs[a] = kos_tensor(a, b, cfg)
    return ComplexData(modules, diffs, cfg.n, None, name=f"col{b}")


def row_fibers(t: int, cfg: SetupConfig) -> dict[ExpVec, list[int]]:
    """Homology dimensions of the row of total degree ``t`` (pieces
    ``(wedge^{t-b} (x) S_b)_w`` for ``b < d``, maps kappa), per formal multidegree.

    Returned lists are indexed by ``b``.  kappa has scalar entries, so the
    computation is fiber linear algebra, no strand oracle needed.
    """
    from .corealg import rank
    bs = [b for b in range(min(t, cfg.d - 1) + 1) if 0 <= t - b <= cfg.n]
    pieces = {b: restricted_module(t - b, b, cfg).labels for b in bs}
    fibers: dict[ExpVec, dict[int, list]] = {}
    for b, labs in pieces.items():
        for lab in labs:
            fibers.setdefault(mdeg(lab), {}).setdefault(b, []).append(lab)
    out = {}
    for md, by_b in fibers.items():
        dims = []
        for b in bs:
            src = by_b.get(b, [])
            # rank of kappa out of b and into b
            def mat(srcs, tgts):
                idx = {lab: i for i, lab in enumerate(tgts)}
                rows = [[cfg.field.zero] * len(srcs) for _ in tgts]
                for j, lab in enumerate(srcs):
                    for tlab, p in kappa_label(lab, cfg).items():
                        if tlab in idx:
                            rows[idx[tlab]][j] = p.constant_term()
                return rows
            out_rank = rank(mat(src, by_b.get(b + 1, [])), len(src)) if b + 1 in by_b else 0
            prev = by_b.get(b - 1, [])
            in_rank = rank(mat(prev, src), len(prev)) if prev else 0
            dims.append(len(src) - out_rank - in_rank)
        out[md] = dims
    return out
