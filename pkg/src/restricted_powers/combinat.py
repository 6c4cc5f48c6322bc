"""Sign conventions, restricted simplex lattice points and hook tableaux."""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from itertools import combinations, combinations_with_replacement
from typing import Iterator

from .corealg import ExpVec, FieldCfg, vle


@dataclass(frozen=True)
class SetupConfig:
    """Ambient data shared by every construction.

    ``n`` generators ``f_i`` mapped to ``x_i^{e_i}``, power ``d`` and
    restriction vector ``w``.
    """

    n: int
    d: int
    w: ExpVec
    e: ExpVec | None = None
    field: FieldCfg = dc_field(default_factory=FieldCfg)

    def __post_init__(self):
        object.__setattr__(self, "w", tuple(int(x) for x in self.w))
        e = self.e if self.e is not None else (1,) * self.n
        object.__setattr__(self, "e", tuple(int(x) for x in e))
        if self.n < 1 or self.d < 1:
            raise ValueError("need n >= 1 and d >= 1")
        if len(self.w) != self.n or len(self.e) != self.n:
            raise ValueError(f"w and e must have length n={self.n}")
        if any(x < 0 for x in self.w):
            raise ValueError("w must be non-negative")
        if any(x < 1 for x in self.e):
            raise ValueError("exponents e_i must be >= 1")
        if sum(min(x, self.d) for x in self.w) < self.d:
            raise ValueError(f"w={self.w} admits no exponent vector of size d={self.d}")
        if self.field.kind == "prime-field" and self.field.p <= self.n + self.d:
            raise ValueError(f"prime {self.field.p} must exceed n+d={self.n + self.d}")

    @property
    def one(self):
        return self.field.one

    def describe(self) -> dict:
        return {"n": self.n, "d": self.d, "w": list(self.w), "e": list(self.e),
                "field": self.field.tag()}

    def __str__(self):
        return (f"n={self.n} d={self.d} w={','.join(map(str, self.w))} "
                f"e={','.join(map(str, self.e))} field={self.field.tag()}")


def sign_in(r: int, sigma: tuple[int, ...]) -> int:
    """``(-1)^(k-1)`` where ``r`` is the k-th smallest element of ``sigma``."""
    try:
        k = sorted(sigma).index(r)
    except ValueError:
        raise ValueError(f"{r} is not in {sigma}") from None
    return -1 if k % 2 else 1


def perm_sign(seq) -> int:
    """Sign of the permutation sorting ``seq`` (distinct entries)."""
    seq = list(seq)
    inv = sum(1 for i in range(len(seq)) for j in range(i + 1, len(seq)) if seq[i] > seq[j])
    return -1 if inv % 2 else 1


# Concatenation order used by sign_shuffle.  "tau-first" sorts (tau, sigma\tau);
# "rest-first" sorts (sigma\tau, tau).
SHUFFLE_ORDER = "tau-first"


def sign_shuffle(tau: tuple[int, ...], sigma: tuple[int, ...], order: str | None = None) -> int:
    """Sign of the shuffle reordering ``tau`` and ``sigma \\ tau`` into ``sigma``."""
    if not set(tau) <= set(sigma):
        raise ValueError(f"{tau} is not a subset of {sigma}")
    rest = tuple(s for s in sorted(sigma) if s not in set(tau))
    order = order or SHUFFLE_ORDER
    if order == "tau-first":
        return perm_sign(tuple(sorted(tau)) + rest)
    if order == "rest-first":
        return perm_sign(rest + tuple(sorted(tau)))
    raise ValueError(f"unknown shuffle order {order!r}")


def wedge_sign(sigma: tuple[int, ...], tau: tuple[int, ...]) -> tuple[int, tuple[int, ...]]:
    """``f_sigma ^ f_tau = sign * f_rho``; sign is 0 when the sets meet."""
    if set(sigma) & set(tau):
        return 0, ()
    return perm_sign(sigma + tau), tuple(sorted(sigma + tau))


def compositions(total: int, n: int, cap: ExpVec | None = None) -> Iterator[ExpVec]:
    """All length-``n`` vectors of non-negative ints summing to ``total``,
    bounded by ``cap``, in descending lexicographic order."""
    def rec(i, left):
        if i == n - 1:
            if cap is None or left <= cap[i]:
                yield (left,)
            return
        hi = left if cap is None else min(left, cap[i])
        for k in range(hi, -1, -1):
            for rest in rec(i + 1, left - k):
                yield (k,) + rest
    if n == 0:
        if total == 0:
            yield ()
        return
    yield from rec(0, total)


def restricted_exponents(cfg: SetupConfig) -> list[ExpVec]:
    """Exponent vectors ``alpha`` with ``|alpha| = d`` and ``alpha <= w``."""
    return list(compositions(cfg.d, cfg.n, cfg.w))


@dataclass(frozen=True)
class HookTableau:
    """Hook-shaped semistandard tableau: first row ``arm`` (weakly increasing,
    including the corner box) and the column ``leg`` below the corner."""

    arm: tuple[int, ...]
    leg: tuple[int, ...]

    def content(self, n: int) -> ExpVec:
        out = [0] * n
        for v in self.arm + self.leg:
            out[v - 1] += 1
        return tuple(out)

    def is_semistandard(self) -> bool:
        row_ok = all(x <= y for x, y in zip(self.arm, self.arm[1:]))
        col = self.arm[:1] + self.leg
        return row_ok and all(x < y for x, y in zip(col, col[1:]))

    def __str__(self):
        return "".join(map(str, self.arm)) + "|" + "".join(map(str, self.leg))


def hook_ssyt(a: int, b: int, cfg: SetupConfig) -> list[HookTableau]:
    """Hook SSYT with first row of length ``b`` and first column of length
    ``a + 1`` whose content is bounded by ``w``."""
    n, w = cfg.n, cfg.w
    out = []
    if b < 1:
        return out
    for arm in combinations_with_replacement(range(1, n + 1), b):
        for leg in combinations(range(arm[0] + 1, n + 1), a):
            t = HookTableau(tuple(arm), tuple(leg))
            if vle(t.content(n), w):
                out.append(t)
    return out
