"""Exact coefficient arithmetic, sparse polynomials, monomial ideals and
basis-labeled free modules.

Everything here is deliberately small and dictionary based.  A polynomial is
a map ``exponent tuple -> scalar``; an :class:`Element` of a free module is a
map ``label -> Poly``; a :class:`LinMap` stores one :class:`Element` per source
label.  Scalars are :class:`fractions.Fraction` over the rationals or
:class:`Fp` over a prime field.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Hashable, Iterable, Iterator, NamedTuple

ExpVec = tuple[int, ...]


# ---------------------------------------------------------------------------
# scalars
# ---------------------------------------------------------------------------

class Fp:
    """Element of the prime field Z/p."""

    __slots__ = ("v", "p")

    def __init__(self, v: int, p: int):
        self.v = v % p
        self.p = p

    def _lift(self, other):
        if isinstance(other, Fp):
            return other.v
        if isinstance(other, int):
            return other % self.p
        if isinstance(other, Fraction):
            return other.numerator * pow(other.denominator, -1, self.p) % self.p
        return NotImplemented

    def __add__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return Fp(self.v + o, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return Fp(self.v - o, self.p)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return Fp(o - self.v, self.p)

    def __mul__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return Fp(self.v * o, self.p)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        if o == 0:
            raise ZeroDivisionError("division by zero in F_%d" % self.p)
        return Fp(self.v * pow(o, -1, self.p), self.p)

    def __rtruediv__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return Fp(o * pow(self.v, -1, self.p), self.p)

    def __neg__(self):
        return Fp(-self.v, self.p)

    def __eq__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return False
        return self.v == o

    def __hash__(self):
        return hash((self.v, self.p))

    def __bool__(self):
        return self.v != 0

    def __repr__(self):
        return f"{self.v} mod {self.p}"

    def __str__(self):
        # symmetric representative reads better in reports
        v = self.v if self.v <= self.p // 2 else self.v - self.p
        return str(v)


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


@dataclass(frozen=True)
class FieldCfg:
    """Coefficient field: ``kind`` is ``"rationals"`` or ``"prime-field"``."""

    kind: str = "rationals"
    p: int | None = None

    def __post_init__(self):
        if self.kind not in ("rationals", "prime-field"):
            raise ValueError(f"unknown field kind {self.kind!r}")
        if self.kind == "prime-field":
            if self.p is None or not _is_prime(self.p):
                raise ValueError(f"prime field needs a prime modulus, got {self.p}")
        elif self.p is not None:
            raise ValueError("the rationals take no modulus")

    @classmethod
    def parse(cls, text: str) -> "FieldCfg":
        text = text.strip().lower()
        if text in ("q", "qq", "rationals"):
            return cls()
        if text.startswith("fp:"):
            return cls("prime-field", int(text[3:]))
        raise ValueError(f"cannot parse field {text!r} (use 'q' or 'fp:<p>')")

    def __call__(self, x):
        if self.kind == "rationals":
            if isinstance(x, Fp):
                raise TypeError("cannot coerce a prime-field scalar to Q")
            return Fraction(x)
        if isinstance(x, Fp):
            return Fp(x.v, self.p)
        x = Fraction(x)
        if x.denominator % self.p == 0:
            raise ZeroDivisionError(f"{x} has no image in F_{self.p}")
        return Fp(x.numerator * pow(x.denominator, -1, self.p), self.p)

    @property
    def zero(self):
        return self(0)

    @property
    def one(self):
        return self(1)

    def tag(self) -> str:
        return "q" if self.kind == "rationals" else f"fp:{self.p}"


# ---------------------------------------------------------------------------
# exponent vectors
# ---------------------------------------------------------------------------

def vle(a: ExpVec, b: ExpVec) -> bool:
    """Componentwise ``a <= b``."""
    return all(x <= y for x, y in zip(a, b))


def vadd(a: ExpVec, b: ExpVec) -> ExpVec:
    return tuple(x + y for x, y in zip(a, b))


def vsub(a: ExpVec, b: ExpVec) -> ExpVec:
    return tuple(x - y for x, y in zip(a, b))


def unit_vec(n: int, i: int) -> ExpVec:
    """The indicator vector of the 1-based index ``i``."""
    return tuple(1 if j == i - 1 else 0 for j in range(n))


# ---------------------------------------------------------------------------
# polynomials
# ---------------------------------------------------------------------------

class Poly:
    """Sparse polynomial in ``x_1..x_n``; no zero coefficients are stored."""

    __slots__ = ("terms", "n")

    def __init__(self, terms: dict[ExpVec, object] | None = None, n: int = 0):
        self.n = n
        self.terms: dict[ExpVec, object] = {}
        if terms:
            for m, c in terms.items():
                if c != 0:
                    self.terms[m] = c
            if terms and not n:
                self.n = len(next(iter(terms)))

    @classmethod
    def const(cls, c, n: int) -> "Poly":
        return cls({(0,) * n: c}, n)

    @classmethod
    def monomial(cls, exp: ExpVec, c=1) -> "Poly":
        return cls({tuple(exp): c}, len(exp))

    def is_zero(self) -> bool:
        return not self.terms

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def constant_term(self):
        return self.terms.get((0,) * self.n, 0)

    def __iter__(self) -> Iterator[tuple[ExpVec, object]]:
        return iter(self.terms.items())

    def __len__(self):
        return len(self.terms)

    def __add__(self, other: "Poly") -> "Poly":
        if not isinstance(other, Poly):
            other = Poly.const(other, self.n) if other != 0 else Poly(n=self.n)
        out = dict(self.terms)
        for m, c in other.terms.items():
            v = out.get(m, 0) + c
            if v == 0:
                out.pop(m, None)
            else:
                out[m] = v
        r = Poly(n=self.n or other.n)
        r.terms = out
        return r

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        r = Poly(n=self.n)
        r.terms = {m: -c for m, c in self.terms.items()}
        return r

    def __sub__(self, other: "Poly") -> "Poly":
        if not isinstance(other, Poly):
            other = Poly.const(other, self.n) if other != 0 else Poly(n=self.n)
        return self + (-other)

    def __mul__(self, other) -> "Poly":
        if not isinstance(other, Poly):
            if other == 0:
                return Poly(n=self.n)
            r = Poly(n=self.n)
            r.terms = {m: c * other for m, c in self.terms.items() if c * other != 0}
            return r
        out: dict[ExpVec, object] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                v = out.get(m, 0) + c1 * c2
                if v == 0:
                    out.pop(m, None)
                else:
                    out[m] = v
        r = Poly(n=self.n or other.n)
        r.terms = out
        return r

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if isinstance(other, Poly):
            return self.terms == other.terms
        if other == 0:
            return not self.terms
        return self.terms == {(0,) * self.n: other}

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def reduce_mod(self, ideal: "MonomialIdeal") -> "Poly":
        return reduce_mod(self, ideal)

    def permute(self, perm: ExpVec) -> "Poly":
        """Apply ``x_i -> x_{perm[i]}`` (1-based images)."""
        r = Poly(n=self.n)
        for m, c in self.terms.items():
            new = [0] * self.n
            for i, k in enumerate(m):
                new[perm[i] - 1] = k
            r.terms[tuple(new)] = c
        return r

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for m, c in sorted(self.terms.items(), reverse=True):
            mono = "*".join(
                f"x{i + 1}" + (f"^{k}" if k > 1 else "") for i, k in enumerate(m) if k
            )
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")


# ---------------------------------------------------------------------------
# monomial ideals
# ---------------------------------------------------------------------------

class MonomialIdeal:
    """Monomial ideal stored by its minimal generators."""

    __slots__ = ("gens", "n")

    def __init__(self, gens: Iterable[ExpVec], n: int):
        gens = sorted(set(tuple(g) for g in gens), key=lambda g: (sum(g), g))
        minimal: list[ExpVec] = []
        for g in gens:
            if not any(vle(h, g) for h in minimal):
                minimal.append(g)
        self.gens = tuple(sorted(minimal, reverse=True))
        self.n = n

    def __contains__(self, m: ExpVec) -> bool:
        return ideal_member(m, self)

    def lcm(self) -> ExpVec:
        if not self.gens:
            return (0,) * self.n
        return tuple(max(g[i] for g in self.gens) for i in range(self.n))

    def __eq__(self, other):
        return isinstance(other, MonomialIdeal) and self.gens == other.gens

    def __hash__(self):
        return hash(self.gens)

    def __repr__(self):
        return "(" + ", ".join(repr(Poly.monomial(g, 1)) for g in self.gens) + ")"


def ideal_member(m: ExpVec, ideal: MonomialIdeal) -> bool:
    """True iff some generator divides ``x^m``."""
    return any(vle(g, m) for g in ideal.gens)


def reduce_mod(p: Poly, ideal: MonomialIdeal | None) -> Poly:
    """Normal form in ``R/I``: drop every term whose monomial lies in ``I``."""
    if ideal is None or not ideal.gens:
        return p
    r = Poly(n=p.n)
    r.terms = {m: c for m, c in p.terms.items() if not ideal_member(m, ideal)}
    return r


# ---------------------------------------------------------------------------
# labels
# ---------------------------------------------------------------------------

class BasisLabel(NamedTuple):
    """The basis element ``f_sigma (x) f^alpha`` of ``wedge^a (x) S_b``."""

    sigma: tuple[int, ...]
    alpha: ExpVec

    @property
    def a(self) -> int:
        return len(self.sigma)

    @property
    def b(self) -> int:
        return sum(self.alpha)

    @property
    def grade(self) -> tuple[int, int]:
        return (self.a, self.b)

    def sort_key(self):
        return (len(self.sigma), self.sigma, self.alpha)

    def __str__(self):
        return "f[%s]*m[%s]" % (",".join(map(str, self.sigma)), ",".join(map(str, self.alpha)))


def mdeg(label: BasisLabel) -> ExpVec:
    """Formal multidegree ``eps_sigma_1 + ... + eps_sigma_a + alpha``."""
    out = list(label.alpha)
    for s in label.sigma:
        out[s - 1] += 1
    return tuple(out)


def ring_mdeg(label: BasisLabel, e: ExpVec) -> ExpVec:
    """Ring multidegree: entry ``i`` of :func:`mdeg` scaled by ``e_i``."""
    return tuple(k * ei for k, ei in zip(mdeg(label), e))


def label_key(label):
    key = getattr(label, "sort_key", None)
    return key() if key is not None else label


# ---------------------------------------------------------------------------
# free-module elements and maps
# ---------------------------------------------------------------------------

class Element:
    """Finite R-linear combination of basis labels with :class:`Poly` coefficients."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: dict | None = None):
        self.coeffs: dict[Hashable, Poly] = {}
        if coeffs:
            for k, p in coeffs.items():
                if not p.is_zero():
                    self.coeffs[k] = p

    @classmethod
    def basis(cls, label, n: int, one=1) -> "Element":
        return cls({label: Poly.const(one, n)})

    def is_zero(self) -> bool:
        return not self.coeffs

    def items(self):
        return self.coeffs.items()

    def labels(self):
        return self.coeffs.keys()

    def __getitem__(self, label) -> Poly:
        return self.coeffs[label]

    def get(self, label, n: int = 0) -> Poly:
        return self.coeffs.get(label, Poly(n=n))

    def __len__(self):
        return len(self.coeffs)

    def iadd(self, other: "Element", scale: Poly | None = None) -> "Element":
        """In-place ``self += scale * other``."""
        for k, p in other.coeffs.items():
            q = p * scale if scale is not None else p
            cur = self.coeffs.get(k)
            s = q if cur is None else cur + q
            if s.is_zero():
                self.coeffs.pop(k, None)
            else:
                self.coeffs[k] = s
        return self

    def __add__(self, other: "Element") -> "Element":
        return Element(dict(self.coeffs)).iadd(other)

    def __sub__(self, other: "Element") -> "Element":
        return Element(dict(self.coeffs)).iadd(-other)

    def __neg__(self) -> "Element":
        r = Element()
        r.coeffs = {k: -p for k, p in self.coeffs.items()}
        return r

    def scale(self, c) -> "Element":
        r = Element()
        for k, p in self.coeffs.items():
            q = p * c
            if not q.is_zero():
                r.coeffs[k] = q
        return r

    def reduce_mod(self, ideal: MonomialIdeal | None) -> "Element":
        return Element({k: reduce_mod(p, ideal) for k, p in self.coeffs.items()})

    def __eq__(self, other) -> bool:
        if isinstance(other, Element):
            return self.coeffs == other.coeffs
        return other == 0 and not self.coeffs

    def __hash__(self):
        return hash(frozenset((k, hash(p)) for k, p in self.coeffs.items()))

    def sorted_items(self):
        return sorted(self.coeffs.items(), key=lambda kv: label_key(kv[0]))

    def __repr__(self):
        if not self.coeffs:
            return "0"
        return " + ".join(f"({p})*{k}" for k, p in self.sorted_items())


class LinMap:
    """R-linear map between labeled free modules, stored by columns.

    Missing columns are zero.  ``source``/``target`` are optional ordered
    label lists used for validation, matrices and reports.
    """

    __slots__ = ("columns", "source", "target")

    def __init__(self, columns: dict | None = None, source=None, target=None):
        self.columns: dict[Hashable, Element] = {
            k: v for k, v in (columns or {}).items() if not v.is_zero()
        }
        self.source = list(source) if source is not None else None
        self.target = list(target) if target is not None else None
        if self.target is not None:
            allowed = set(self.target)
            for k, col in self.columns.items():
                bad = [lab for lab in col.labels() if lab not in allowed]
                if bad:
                    raise ValueError(f"column {k} has labels outside the target: {bad[:3]}")

    def column(self, label) -> Element:
        return self.columns.get(label, Element())

    def __call__(self, x: Element) -> Element:
        out = Element()
        for lab, p in x.items():
            col = self.columns.get(lab)
            if col is not None:
                out.iadd(col, p)
        return out

    def __matmul__(self, other: "LinMap") -> "LinMap":
        return LinMap({k: self(col) for k, col in other.columns.items()},
                      source=other.source, target=self.target)

    def __add__(self, other: "LinMap") -> "LinMap":
        cols = {k: Element(dict(v.coeffs)) for k, v in self.columns.items()}
        for k, v in other.columns.items():
            cols[k] = cols[k].iadd(v) if k in cols else v
        return LinMap(cols, source=self.source or other.source, target=self.target or other.target)

    def __neg__(self) -> "LinMap":
        return LinMap({k: -v for k, v in self.columns.items()}, self.source, self.target)

    def __sub__(self, other: "LinMap") -> "LinMap":
        return self + (-other)

    def scale(self, c) -> "LinMap":
        return LinMap({k: v.scale(c) for k, v in self.columns.items()}, self.source, self.target)

    def restrict(self, labels: Iterable) -> "LinMap":
        labels = list(labels)
        return LinMap({k: self.columns[k] for k in labels if k in self.columns},
                      source=labels, target=self.target)

    def __eq__(self, other) -> bool:
        return isinstance(other, LinMap) and self.columns == other.columns

    def __repr__(self):
        return f"LinMap({len(self.columns)} nonzero columns)"


def identity_map(labels: Iterable, n: int, one=1) -> LinMap:
    labels = list(labels)
    return LinMap({k: Element.basis(k, n, one) for k in labels}, labels, labels)


# ---------------------------------------------------------------------------
# exact linear algebra
# ---------------------------------------------------------------------------

def rref(rows: list[list], ncols: int) -> tuple[list[list], list[int]]:
    """Reduced row echelon form over a field; returns (rows, pivot columns)."""
    m = [list(r) for r in rows]
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c]
        m[r] = [v * inv for v in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank(rows: list[list], ncols: int) -> int:
    if not rows or not ncols:
        return 0
    return len(rref(rows, ncols)[1])


def nullspace(rows: list[list], ncols: int, one=Fraction(1)) -> tuple[list[list], list[int]]:
    """Kernel basis of the matrix with the given rows, one vector per free column.

    Each basis vector has a 1 at its free column and 0 at the other free
    columns, so coordinates of a kernel vector are read off the free columns.
    """
    red, pivots = rref(rows, ncols) if rows else ([], [])
    free = [c for c in range(ncols) if c not in set(pivots)]
    basis = []
    for f in free:
        v = [one * 0] * ncols
        v[f] = one
        for i, pc in enumerate(pivots):
            v[pc] = -red[i][f]
        basis.append(v)
    return basis, free


@dataclass
class FiberKernel:
    """Kernel of a scalar map restricted to one multidegree fiber."""

    mdeg: ExpVec
    labels: list
    vectors: list[list]
    free: list[int]

    def elements(self, n: int) -> list[Element]:
        out = []
        for v in self.vectors:
            out.append(Element({lab: Poly.const(c, n) for lab, c in zip(self.labels, v) if c != 0}))
        return out

    def coords(self, vec: dict) -> list:
        """Coordinates of a fiber vector (label -> scalar) in the kernel basis."""
        return [vec.get(self.labels[f], 0) for f in self.free]


def kernel_fibers(f: LinMap, source: list, n: int, field: FieldCfg,
                  mdeg_of: Callable = mdeg) -> dict[ExpVec, FiberKernel]:
    """Per-multidegree kernels of a homogeneous scalar map (see kernel_by_multidegree)."""
    fibers: dict[ExpVec, list] = defaultdict(list)
    for lab in source:
        fibers[mdeg_of(lab)].append(lab)
    zero_exp = (0,) * n
    out: dict[ExpVec, FiberKernel] = {}
    for md, labs in sorted(fibers.items()):
        labs = sorted(labs, key=label_key)
        targets: dict = {}
        cols = []
        for lab in labs:
            col = f.column(lab)
            entries = {}
            for t, p in col.items():
                if mdeg_of(t) != md:
                    raise ValueError(f"map mixes multidegrees at {lab} -> {t}")
                if set(p.terms) != {zero_exp}:
                    raise ValueError(f"non-scalar coefficient {p} at {lab} -> {t}")
                entries[t] = field(p.terms[zero_exp])
                targets.setdefault(t, len(targets))
            cols.append(entries)
        tlist = sorted(targets, key=label_key)
        rows = [[c.get(t, field.zero) for c in cols] for t in tlist]
        vecs, free = nullspace(rows, len(labs), field.one)
        out[md] = FiberKernel(md, labs, vecs, free)
    return out


def kernel_by_multidegree(f: LinMap, source: list | None = None, n: int | None = None,
                          field: FieldCfg = FieldCfg(), mdeg_of: Callable = mdeg) -> list[Element]:
    """Basis of ``ker f`` computed fiber by fiber with exact echelon reduction.

    ``f`` must preserve ``mdeg_of`` and carry only scalar coefficients;
    anything else raises :class:`ValueError`.
    """
    source = list(source if source is not None else (f.source or f.columns))
    if n is None:
        n = len(mdeg_of(source[0])) if source else 0
    out = []
    for fk in kernel_fibers(f, source, n, field, mdeg_of).values():
        out.extend(fk.elements(n))
    return out
