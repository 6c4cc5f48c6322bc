"""Rank of an integer matrix modulo a prime.

Two implementations with the same contract: a numba-compiled elimination and
a vectorized numpy one.  ``RESTRICTED_POWERS_BACKEND=numpy`` forces the
fallback; by default numba is used when it imports.
"""

from __future__ import annotations

import os

import numpy as np

P_DEFAULT = 2147483647  # 2^31 - 1, products fit in int64

_want = os.environ.get("RESTRICTED_POWERS_BACKEND", "numba").strip().lower()

try:
    if _want == "numpy":
        raise ImportError
    from numba import njit
    HAVE_NUMBA = True
except ImportError:
    HAVE_NUMBA = False


def _rank_mod_p_numpy(a: np.ndarray, p: int) -> int:
    m = np.mod(a.astype(np.int64), p)
    rows, cols = m.shape
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(m[r:, c])[0]
        if nz.size == 0:
            continue
        piv = r + nz[0]
        if piv != r:
            m[[r, piv]] = m[[piv, r]]
        inv = pow(int(m[r, c]), p - 2, p)
        m[r] = (m[r] * inv) % p
        below = m[r + 1:, c].copy()
        hit = np.nonzero(below)[0]
        if hit.size:
            # entries < 2^31, so products stay inside int64
            f = below[hit][:, None]
            m[r + 1 + hit] = (m[r + 1 + hit] - (f * m[r][None, :]) % p) % p
        r += 1
    return r


if HAVE_NUMBA:
    @njit(cache=True)
    def _rank_mod_p_numba(a, p):
        m = a.copy()
        rows, cols = m.shape
        for i in range(rows):
            for j in range(cols):
                m[i, j] %= p
        r = 0
        for c in range(cols):
            if r == rows:
                break
            piv = -1
            for i in range(r, rows):
                if m[i, c] != 0:
                    piv = i
                    break
            if piv < 0:
                continue
            if piv != r:
                for j in range(cols):
                    t = m[r, j]
                    m[r, j] = m[piv, j]
                    m[piv, j] = t
            # modular inverse by Fermat
            base = m[r, c]
            e = p - 2
            inv = 1
            while e > 0:
                if e & 1:
                    inv = (inv * base) % p
                base = (base * base) % p
                e >>= 1
            for j in range(c, cols):
                m[r, j] = (m[r, j] * inv) % p
            for i in range(r + 1, rows):
                f = m[i, c]
                if f != 0:
                    for j in range(c, cols):
                        m[i, j] = (m[i, j] - f * m[r, j]) % p
            r += 1
        return r


def rank_mod_p(a, p: int = P_DEFAULT, backend: str | None = None) -> int:
    """Rank of the integer matrix ``a`` over F_p (``p < 2^31``)."""
    a = np.asarray(a, dtype=np.int64)
    if a.ndim != 2 or a.size == 0:
        return 0
    if p >= (1 << 31):
        raise ValueError("modulus must be below 2^31")
    backend = backend or ("numba" if HAVE_NUMBA else "numpy")
    if backend == "numba":
        if not HAVE_NUMBA:
            raise RuntimeError("numba backend requested but unavailable")
        return int(_rank_mod_p_numba(a, np.int64(p)))
    return _rank_mod_p_numpy(a, p)


def active_backend() -> str:
    return "numba" if HAVE_NUMBA else "numpy"
