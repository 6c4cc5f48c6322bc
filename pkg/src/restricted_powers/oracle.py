"""Independent certification by multigraded strand linear algebra.

A complex of free multigraded modules (over ``R`` or ``R/I``) breaks into
finite-dimensional strands, one per ring multidegree ``m``.  The strand of a
summand generated in multidegree ``mu`` is spanned by ``x^(m - mu)`` when
``mu <= m`` (and, over ``R/I``, when that monomial is not in ``I``).  Ranks of
the strand matrices give homology; nothing here reuses the kernel bases or
homotopies the complexes were built with.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from itertools import product as iproduct

import numpy as np

from ._kernels import P_DEFAULT, rank_mod_p
from .complexes import ComplexData, FreeModuleSpec, restricted_power_ideal
from .corealg import ExpVec, Fp, LinMap, MonomialIdeal, ideal_member, rank, vle, vsub
from .report import CheckReport, Report


@dataclass(frozen=True)
class StrandBox:
    """The multidegrees ``0 <= m <= upper``."""

    upper: ExpVec

    def points(self):
        return iproduct(*(range(u + 1) for u in self.upper))

    def size(self) -> int:
        out = 1
        for u in self.upper:
            out *= u + 1
        return out

    def __str__(self):
        return "[0,(" + ",".join(map(str, self.upper)) + ")]"


@dataclass
class BettiTable:
    ranks: dict[int, int]
    graded: dict[tuple[int, ExpVec], int] = dc_field(default_factory=dict)

    def rank_list(self) -> list[int]:
        top = max((k for k, v in self.ranks.items() if v), default=-1)
        return [self.ranks.get(k, 0) for k in range(top + 1)]

    def to_dict(self) -> dict:
        return {"ranks": self.rank_list(),
                "graded": [[k, list(m), v] for (k, m), v in sorted(self.graded.items())]}

    @classmethod
    def from_dict(cls, d: dict) -> "BettiTable":
        return cls({k: v for k, v in enumerate(d["ranks"])},
                   {(k, tuple(m)): v for k, m, v in d["graded"]})


def betti_table(c: ComplexData) -> BettiTable:
    ranks, graded = {}, {}
    for k in c.degrees():
        mod = c.modules[k]
        ranks[k] = len(mod.labels)
        for lab in mod.labels:
            key = (k, tuple(mod.ring_mdeg[lab]))
            graded[key] = graded.get(key, 0) + 1
    while ranks and not ranks[max(ranks)]:
        del ranks[max(ranks)]
    return BettiTable(ranks, graded)


def label_box(c: ComplexData) -> ExpVec:
    """Componentwise max of all label ring multidegrees."""
    up = [0] * c.n
    for k in c.degrees():
        for mu in c.modules[k].ring_mdeg.values():
            up = [max(a, b) for a, b in zip(up, mu)]
    return tuple(up)


def default_box(c: ComplexData, cfg) -> StrandBox:
    """Label box padded by ``d * e``."""
    up = label_box(c)
    return StrandBox(tuple(u + cfg.d * e for u, e in zip(up, cfg.e)))


class InhomogeneousError(ValueError):
    pass


class StrandEngine:
    """Precomputed columns of a complex, ready to be sliced at any ``m``."""

    def __init__(self, c: ComplexData, ideal: MonomialIdeal | None = None):
        self.c = c
        self.ideal = ideal
        self.degs = c.degrees()
        self.top = max(self.degs) if self.degs else -1
        self.mu = {k: dict(c.modules[k].ring_mdeg) for k in self.degs}
        self.prime = None
        # cols[k][label] = [(target, scalar)] with the scalar the coefficient of x^(mu_s - mu_t)
        self.cols: dict[int, dict] = {}
        for k, d in c.diffs.items():
            tgt_mu = self.mu.get(k - 1, {})
            cols = {}
            for lab, col in d.columns.items():
                ms = self.mu[k][lab]
                entries = []
                for t, p in col.items():
                    shift = vsub(ms, tgt_mu[t])
                    for mono, coef in p:
                        if mono != shift:
                            raise InhomogeneousError(
                                f"entry {lab} -> {t} has term x^{mono}, expected x^{shift}")
                        if isinstance(coef, Fp):
                            self.prime = coef.p
                        entries.append((t, coef))
                cols[lab] = entries
            self.cols[k] = cols

    def fiber(self, k: int, m: ExpVec) -> list:
        out = []
        for lab, mu in self.mu.get(k, {}).items():
            if vle(mu, m) and (self.ideal is None or not ideal_member(vsub(m, mu), self.ideal)):
                out.append(lab)
        return out

    def matrix(self, k: int, m: ExpVec, fibers: dict) -> list[list]:
        """Rows indexed by fibers[k-1], columns by fibers[k]."""
        rows_idx = {lab: i for i, lab in enumerate(fibers.get(k - 1, []))}
        src = fibers.get(k, [])
        mat = [[0] * len(src) for _ in rows_idx]
        for j, lab in enumerate(src):
            for t, coef in self.cols.get(k, {}).get(lab, ()):
                i = rows_idx.get(t)
                if i is not None:
                    mat[i][j] = coef
        return mat

    def homology(self, m: ExpVec, exact: bool = False, care=None) -> tuple[list[int], bool]:
        """Per-degree homology dimensions at ``m``; second value says whether
        the exact fallback ran.

        Over the rationals ranks are first taken mod a large prime, which can
        only overestimate homology, so a zero is certified.  A positive value
        in a degree listed in ``care`` (default: all) triggers exact ranks;
        other degrees are then only upper bounds.
        """
        fibers = {k: self.fiber(k, m) for k in self.degs}
        mats = {k: self.matrix(k, m, fibers) for k in self.degs if k - 1 in fibers}
        dims = [len(fibers.get(k, [])) for k in range(self.top + 1)]

        def ranks(fn):
            return {k: (fn(M, len(fibers[k])) if M and fibers[k] else 0) for k, M in mats.items()}

        used_exact = False
        if self.prime is not None:
            rk = ranks(lambda M, nc: _rank_prime(M, self.prime))
        else:
            rk = None if exact else ranks(_rank_mod_big_prime)
            if rk is None or None in rk.values() or any(
                    dims[k] - rk.get(k, 0) - rk.get(k + 1, 0) > 0
                    for k in (range(self.top + 1) if care is None else care)):
                # the modular bound only certifies zeros; pay for exact ranks
                rk = ranks(lambda M, nc: rank([[Fraction(x) for x in row] for row in M], nc))
                used_exact = True
        return [dims[k] - rk.get(k, 0) - rk.get(k + 1, 0) for k in range(self.top + 1)], used_exact


def _to_mod(x, p):
    if isinstance(x, Fp):
        return x.v
    x = Fraction(x)
    if x.denominator % p == 0:
        return None
    return x.numerator % p * pow(x.denominator, -1, p) % p


def _rank_mod_big_prime(M, ncols):
    vals = [[_to_mod(x, P_DEFAULT) for x in row] for row in M]
    if any(v is None for row in vals for v in row):
        return None
    return rank_mod_p(np.array(vals, dtype=np.int64), P_DEFAULT)


def _rank_prime(M, p):
    if p >= (1 << 31):
        return rank([[Fp(_to_mod(x, p), p) for x in row] for row in M], ncols=len(M[0]))
    vals = [[_to_mod(x, p) for x in row] for row in M]
    return rank_mod_p(np.array(vals, dtype=np.int64), p)


def strand_homology(c: ComplexData, m: ExpVec, I: MonomialIdeal | None = None,
                    exact: bool = False) -> list[int]:
    """Homology dimensions of ``c`` (over ``R``, or ``R/I`` when given) at ``m``."""
    return StrandEngine(c, I).homology(tuple(m), exact)[0]


# ---------------------------------------------------------------------------
# whole-complex checks
# ---------------------------------------------------------------------------

def check_d_squared(c: ComplexData, ideal: MonomialIdeal | None = None) -> CheckReport:
    n = 0
    for k in sorted(c.diffs):
        if k - 1 not in c.diffs:
            continue
        lo, hi = c.diffs[k - 1], c.diffs[k]
        for lab, col in hi.columns.items():
            n += 1
            img = lo(col)
            if ideal is not None:
                img = img.reduce_mod(ideal)
            if not img.is_zero():
                return CheckReport("d^2 = 0", False, n, f"degree {k}, label {lab}: {img}")
    return CheckReport("d^2 = 0", True, n)


def check_minimal(c: ComplexData) -> CheckReport:
    n = 0
    for k in sorted(c.diffs):
        for lab, col in c.diffs[k].columns.items():
            for t, p in col.items():
                n += 1
                if p.constant_term() != 0:
                    return CheckReport("minimality", False, n,
                                       f"degree {k}: unit entry {p} at {lab} -> {t}")
    return CheckReport("minimality", True, n)


def _box_points(box: StrandBox, clamp: ExpVec | None):
    if clamp is None:
        return list(box.points())
    seen = set()
    for m in box.points():
        seen.add(tuple(min(a, b) for a, b in zip(m, clamp)))
    return sorted(seen)


def verify_resolution(c: ComplexData, cfg, box: StrandBox | None = None,
                      ideal: MonomialIdeal | None = None) -> Report:
    """Certify that ``c`` is a minimal free resolution of ``R/I`` inside ``box``."""
    ideal = ideal if ideal is not None else restricted_power_ideal(cfg)
    box = box or default_box(c, cfg)
    rep = Report(f"resolution {cfg}")
    rep.add(check_d_squared(c))
    rep.add(check_minimal(c))
    try:
        eng = StrandEngine(c)
    except InhomogeneousError as exc:
        rep.add(CheckReport("homogeneity", False, 0, str(exc)))
        return rep
    # over R, strands beyond the label box repeat the clamped one
    pts = _box_points(box, label_box(c))
    exact_runs = 0
    bad_exact = bad_h0 = None
    for m in pts:
        hs, ex = eng.homology(m)
        exact_runs += ex
        if bad_exact is None and any(h != 0 for h in hs[1:]):
            bad_exact = f"m={m}: H={hs}"
        want = 0 if ideal_member(m, ideal) else 1
        if bad_h0 is None and hs[0] != want:
            bad_h0 = f"m={m}: H0={hs[0]}, dim (R/I)_m={want}"
    detail = f"box {box}, {len(pts)} distinct strands"
    rep.add(CheckReport("exactness in degrees >= 1 (box-certified)", bad_exact is None,
                        len(pts), bad_exact, detail))
    rep.add(CheckReport("H0 = R/I (box-certified)", bad_h0 is None, len(pts), bad_h0))
    rep.payload.update({"box": list(box.upper), "strands": len(pts), "exact_fallbacks": exact_runs,
                        "betti": betti_table(c).rank_list()})
    return rep


def check_acyclic(c: ComplexData, box: StrandBox, ideal: MonomialIdeal | None,
                  degrees, h0=None, name: str = "strand acyclicity") -> CheckReport:
    """``H_i = 0`` at every strand of ``box`` for ``i`` in ``degrees``; ``h0``
    optionally maps ``m`` to the expected ``dim H_0``."""
    eng = StrandEngine(c, ideal)
    pts = list(box.points())
    care = set(degrees) | ({0} if h0 is not None else set())
    for m in pts:
        hs, _ = eng.homology(m, care=care)
        for i in degrees:
            if i < len(hs) and hs[i] != 0:
                return CheckReport(name, False, len(pts), f"m={m}: H_{i}={hs[i]}", f"box {box}")
        if h0 is not None and hs and hs[0] != h0(m):
            return CheckReport(name, False, len(pts), f"m={m}: H_0={hs[0]}, want {h0(m)}",
                               f"box {box}")
    return CheckReport(name, True, len(pts), None, f"box {box}")


def delete_label(c: ComplexData, k: int, label) -> ComplexData:
    """Copy of ``c`` with one basis label of degree ``k`` removed (a corrupted fixture)."""
    mods = {}
    for j, m in c.modules.items():
        labs = [x for x in m.labels if not (j == k and x == label)]
        mods[j] = FreeModuleSpec(labs, {x: m.ring_mdeg[x] for x in labs})
    diffs = {}
    for j, d in c.diffs.items():
        cols = {}
        for lab, col in d.columns.items():
            if j == k and lab == label:
                continue
            if j == k + 1:
                col = type(col)({t: p for t, p in col.items() if t != label})
            cols[lab] = col
        diffs[j] = LinMap(cols, mods[j].labels, mods.get(j - 1, FreeModuleSpec([], {})).labels)
    return ComplexData(mods, diffs, c.n, c.ideal, c.name + "-corrupt")
