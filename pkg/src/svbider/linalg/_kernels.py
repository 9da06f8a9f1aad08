"""Dense row echelon reduction over GF(p), p < 2**51.

Two interchangeable backends share one signature::

    echelon_mod_p(mat, p) -> (rank, pivot_cols, pivot_rows)

``mat`` is a C-contiguous int64 array with entries in ``[0, p)`` and is
overwritten.  ``pivot_rows`` are original row indices of an independent
row set spanning the row space.  Pivoting takes the first nonzero row in
each column, scanning columns left to right, so both backends return the
same pivots.

Products of two residues overflow int64, so ``a*b mod p`` uses a float64
estimate of the quotient and exact wrapping int64 arithmetic for the
remainder; with p < 2**51 the estimate is off by at most one.

Set ``SVBIDER_NO_NUMBA=1`` to force the numpy backend.
"""
from __future__ import annotations

import os

import numpy as np

MAX_PRIME_BITS = 51

_env_off = os.environ.get("SVBIDER_NO_NUMBA", "").strip().lower() not in ("", "0", "false", "no")

try:
    if _env_off:
        raise ImportError
    import numba
except ImportError:  # pragma: no cover - exercised via the env flag
    numba = None


# ---------------------------------------------------------------- numpy path

def _mulmod_np(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    q = np.floor(a.astype(np.float64) * b.astype(np.float64) / float(p)).astype(np.int64)
    with np.errstate(over="ignore"):
        r = a * b - q * np.int64(p)
    r = np.where(r < 0, r + p, r)
    return np.where(r >= p, r - p, r)


def _invmod_py(a: int, p: int) -> int:
    return pow(int(a), -1, int(p))


def echelon_mod_p_numpy(mat: np.ndarray, p: int):
    nrows, ncols = mat.shape
    perm = np.arange(nrows, dtype=np.int64)
    pivots: list[int] = []
    rank = 0
    pp = np.int64(p)
    for c in range(ncols):
        if rank == nrows:
            break
        nz = np.flatnonzero(mat[rank:, c])
        if nz.size == 0:
            continue
        r = rank + int(nz[0])
        if r != rank:
            mat[[rank, r]] = mat[[r, rank]]
            perm[[rank, r]] = perm[[r, rank]]
        inv = np.int64(_invmod_py(mat[rank, c], p))
        mat[rank, c:] = _mulmod_np(mat[rank, c:], np.full(ncols - c, inv, dtype=np.int64), p)
        below = rank + 1 + np.flatnonzero(mat[rank + 1:, c])
        if below.size:
            f = mat[below, c][:, None]
            prod = _mulmod_np(np.broadcast_to(f, (below.size, ncols - c)),
                              np.broadcast_to(mat[rank, c:], (below.size, ncols - c)), p)
            block = mat[below, c:] - prod
            block[block < 0] += pp
            mat[below, c:] = block
        pivots.append(c)
        rank += 1
    return rank, np.asarray(pivots, dtype=np.int64), perm[:rank].copy()


# ---------------------------------------------------------------- numba path

if numba is not None:

    @numba.njit(cache=True)
    def _mulmod_nb(a, b, p):
        q = np.int64(np.float64(a) * np.float64(b) / np.float64(p))
        r = a * b - q * p
        if r < 0:
            r += p
        if r < 0:
            r += p
        if r >= p:
            r -= p
        return r

    @numba.njit(cache=True)
    def _invmod_nb(a, p):
        t, new_t = np.int64(0), np.int64(1)
        r, new_r = p, a
        while new_r != 0:
            q = r // new_r
            t, new_t = new_t, t - q * new_t
            r, new_r = new_r, r - q * new_r
        if t < 0:
            t += p
        return t

    @numba.njit(cache=True)
    def _echelon_nb(mat, p):
        nrows, ncols = mat.shape
        perm = np.arange(nrows)
        pivots = np.empty(min(nrows, ncols), dtype=np.int64)
        rank = 0
        for c in range(ncols):
            if rank == nrows:
                break
            r = rank
            while r < nrows and mat[r, c] == 0:
                r += 1
            if r == nrows:
                continue
            if r != rank:
                for j in range(c, ncols):
                    tmp = mat[rank, j]
                    mat[rank, j] = mat[r, j]
                    mat[r, j] = tmp
                tmp = perm[rank]
                perm[rank] = perm[r]
                perm[r] = tmp
            inv = _invmod_nb(mat[rank, c], p)
            for j in range(c, ncols):
                mat[rank, j] = _mulmod_nb(mat[rank, j], inv, p)
            for i in range(rank + 1, nrows):
                f = mat[i, c]
                if f == 0:
                    continue
                for j in range(c, ncols):
                    pj = mat[rank, j]
                    if pj == 0:
                        continue
                    v = mat[i, j] - _mulmod_nb(f, pj, p)
                    if v < 0:
                        v += p
                    mat[i, j] = v
            pivots[rank] = c
            rank += 1
        return rank, pivots[:rank].copy(), perm[:rank].copy()

    def echelon_mod_p_numba(mat: np.ndarray, p: int):
        rank, piv, rows = _echelon_nb(mat, np.int64(p))
        return int(rank), piv, rows

else:
    echelon_mod_p_numba = None


BACKENDS = {"numpy": echelon_mod_p_numpy}
if echelon_mod_p_numba is not None:
    BACKENDS["numba"] = echelon_mod_p_numba

_active = "numba" if "numba" in BACKENDS else "numpy"


def active_backend() -> str:
    return _active


def set_backend(name: str) -> None:
    global _active
    if name not in BACKENDS:
        raise ValueError(f"backend {name!r} unavailable; have {sorted(BACKENDS)}")
    _active = name


def echelon_mod_p(mat: np.ndarray, p: int, backend: str | None = None):
    if p.bit_length() > MAX_PRIME_BITS:
        raise ValueError(f"prime must be below 2**{MAX_PRIME_BITS}")
    fn = BACKENDS[backend or _active]
    if mat.shape[0] == 0 or mat.shape[1] == 0:
        return 0, np.empty(0, dtype=np.int64), np.empty(0, dtype=np.int64)
    return fn(np.ascontiguousarray(mat, dtype=np.int64), p)


def echelon_mod_p_reference(rows: list[list[int]], p: int):
    """Pure-integer reference used by the tests; same pivoting rule."""
    mat = [list(r) for r in rows]
    nrows = len(mat)
    ncols = len(mat[0]) if mat else 0
    perm = list(range(nrows))
    pivots = []
    rank = 0
    for c in range(ncols):
        if rank == nrows:
            break
        r = next((i for i in range(rank, nrows) if mat[i][c] % p), None)
        if r is None:
            continue
        mat[rank], mat[r] = mat[r], mat[rank]
        perm[rank], perm[r] = perm[r], perm[rank]
        inv = pow(mat[rank][c], -1, p)
        mat[rank] = [(v * inv) % p for v in mat[rank]]
        for i in range(rank + 1, nrows):
            f = mat[i][c] % p
            if f:
                mat[i] = [(a - f * b) % p for a, b in zip(mat[i], mat[rank])]
        pivots.append(c)
        rank += 1
    return rank, pivots, perm[:rank]
