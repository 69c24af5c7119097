"""Exact integer linear algebra: Hermite and Smith forms, kernels, lattices.

Matrices are numpy arrays with dtype=object holding Python ints, so nothing
ever overflows. Vectors are rows; a lattice is the set of integer row
combinations of its basis. All reduced forms are canonical, which makes
lattice equality a plain array comparison.
"""

from __future__ import annotations

import bisect
from math import gcd
from typing import Iterable, Sequence

import numpy as np


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (x, y, g) with a*x + b*y == g == gcd(a, b), g >= 0."""
    x0, y0, r0 = 1, 0, a
    x1, y1, r1 = 0, 1, b
    while r1 != 0:
        q = r0 // r1
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
        r0, r1 = r1, r0 - q * r1
    if r0 < 0:
        x0, y0, r0 = -x0, -y0, -r0
    return x0, y0, r0


def obj_matrix(rows: Iterable[Sequence[int]], ncols: int | None = None) -> np.ndarray:
    """Build a 2-D dtype=object matrix from row sequences (may be empty)."""
    rows = [list(map(int, r)) for r in rows]
    if not rows:
        if ncols is None:
            ncols = 0
        return np.empty((0, ncols), dtype=object)
    out = np.empty((len(rows), len(rows[0])), dtype=object)
    for i, r in enumerate(rows):
        if ncols is not None and len(r) != ncols:
            raise ValueError("ragged rows")
        out[i, :] = r
    return out


def obj_zeros(nrows: int, ncols: int) -> np.ndarray:
    out = np.empty((nrows, ncols), dtype=object)
    out[:, :] = 0
    return out


def obj_eye(n: int) -> np.ndarray:
    out = obj_zeros(n, n)
    for i in range(n):
        out[i, i] = 1
    return out


def _first_nonzero(v: np.ndarray) -> int:
    for j, x in enumerate(v):
        if x != 0:
            return j
    return -1


class LatticeBuilder:
    """Incremental row-span accumulator kept in Hermite normal form.

    add() reduces the incoming vector against the stored rows before and
    during the pivot cascade, and re-reduces any row a cascade touches, so
    entries stay bounded by the pivots instead of swelling. Rank and
    membership are available at any point; hnf() is then just a copy.
    """

    def __init__(self, ncols: int):
        self.ncols = ncols
        self.rows: list[np.ndarray] = []     # sorted by pivot column
        self.pivot_cols: list[int] = []

    @property
    def rank(self) -> int:
        return len(self.rows)

    def _reduce_vec(self, v, start: int = 0):
        """Full-divide v by each stored pivot from row position start on."""
        for k in range(start, len(self.rows)):
            q = int(v[self.pivot_cols[k]]) // int(self.rows[k][self.pivot_cols[k]])
            if q:
                v = v - q * self.rows[k]
        return v

    def _reduce_column(self, k: int) -> None:
        """Bring earlier rows' entries in row k's pivot column into range."""
        j = self.pivot_cols[k]
        piv = int(self.rows[k][j])
        for i in range(k):
            q = int(self.rows[i][j]) // piv
            if q:
                self.rows[i] = self._reduce_vec(self.rows[i] - q * self.rows[k],
                                                k + 1)

    def add(self, vec) -> bool:
        """Insert a vector; returns True if the span grew."""
        v = np.array([int(x) for x in vec], dtype=object)
        if v.shape[0] != self.ncols:
            raise ValueError("wrong length")
        grew = False
        while True:
            v = self._reduce_vec(v)
            j = _first_nonzero(v)
            if j < 0:
                return grew
            k = bisect.bisect_left(self.pivot_cols, j)
            if k < len(self.pivot_cols) and self.pivot_cols[k] == j:
                # pivot collision with 0 < v[j] < pivot: shrink the pivot
                row = self.rows[k]
                a, b = int(row[j]), int(v[j])
                x, y, g = xgcd(a, b)
                combined = x * row + y * v
                v = (a // g) * v - (b // g) * row
                self.rows[k] = self._reduce_vec(combined, k + 1)
                self._reduce_column(k)
                grew = True
            else:
                if v[j] < 0:
                    v = -v
                self.rows.insert(k, self._reduce_vec(v, k))
                self.pivot_cols.insert(k, j)
                self._reduce_column(k)
                return True

    def member(self, vec) -> bool:
        v = np.array([int(x) for x in vec], dtype=object)
        for j, row in zip(self.pivot_cols, self.rows):
            x = int(v[j])
            if x == 0:
                continue
            piv = int(row[j])
            if x % piv != 0:
                return False
            v = v - (x // piv) * row
        return _first_nonzero(v) < 0

    def hnf(self) -> np.ndarray:
        """Canonical Hermite normal form of the accumulated span."""
        if not self.rows:
            return np.empty((0, self.ncols), dtype=object)
        return np.vstack([r.copy() for r in self.rows])


def hnf(mat) -> np.ndarray:
    """Canonical row-style HNF with zero rows dropped."""
    mat = np.asarray(mat, dtype=object)
    if mat.ndim != 2:
        raise ValueError("need a 2-D matrix")
    lb = LatticeBuilder(mat.shape[1])
    for r in mat:
        lb.add(r)
    return lb.hnf()


def rank_of(mat) -> int:
    mat = np.asarray(mat, dtype=object)
    lb = LatticeBuilder(mat.shape[1])
    for r in mat:
        lb.add(r)
    return lb.rank


def coords_in_hnf(H: np.ndarray, vec) -> list[int] | None:
    """Coordinates of vec over the HNF basis rows H, or None if not a member."""
    v = np.array([int(x) for x in vec], dtype=object)
    coords = []
    piv_cols = [_first_nonzero(r) for r in H]
    for row, j in zip(H, piv_cols):
        x = int(v[j])
        piv = int(row[j])
        if x % piv != 0:
            return None
        q = x // piv
        coords.append(q)
        if q != 0:
            v = v - q * row
    if _first_nonzero(v) >= 0:
        return None
    return coords


def residue_mod_hnf(H: np.ndarray, vec) -> np.ndarray:
    """Canonical coset representative of vec modulo the lattice spanned by H."""
    v = np.array([int(x) for x in vec], dtype=object)
    piv_cols = [_first_nonzero(r) for r in H]
    for row, j in zip(H, piv_cols):
        piv = int(row[j])
        q = int(v[j]) // piv        # floor division, no divisibility needed
        if q != 0:
            v = v - q * row
    return v


# ---------------------------------------------------------------------------
# Smith normal form

def _snf_diag_chain(diag: list[int]) -> list[int]:
    """Normalize a diagonal multiset into a divisibility chain d1 | d2 | ..."""
    d = [abs(x) for x in diag if x != 0]
    changed = True
    while changed:
        changed = False
        for i in range(len(d)):
            for j in range(i + 1, len(d)):
                if d[j] % d[i] != 0:
                    g = gcd(d[i], d[j])
                    l = d[i] // g * d[j]
                    d[i], d[j] = g, l
                    changed = True
    return sorted(d)


def snf_diagonal(mat) -> list[int]:
    """Invariant factors (nonzero SNF diagonal, divisibility-chained)."""
    A = np.asarray(mat, dtype=object).copy()
    m, n = A.shape
    diag: list[int] = []
    top = 0
    while top < min(m, n):
        sub = A[top:, top:]
        # locate a nonzero entry of smallest magnitude
        best = None
        for i in range(sub.shape[0]):
            for j in range(sub.shape[1]):
                x = sub[i, j]
                if x != 0 and (best is None or abs(x) < best[0]):
                    best = (abs(x), i, j)
                    if abs(x) == 1:
                        break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        _, bi, bj = best
        if bi != 0:
            sub[[0, bi], :] = sub[[bi, 0], :]
        if bj != 0:
            sub[:, [0, bj]] = sub[:, [bj, 0]]
        while True:
            piv = int(sub[0, 0])
            done = True
            for i in range(1, sub.shape[0]):
                x = int(sub[i, 0])
                if x == 0:
                    continue
                q = x // piv
                sub[i, :] = sub[i, :] - q * sub[0, :]
                if sub[i, 0] != 0:          # remainder smaller than pivot
                    sub[[0, i], :] = sub[[i, 0], :]
                    done = False
                    break
            if not done:
                continue
            for j in range(1, sub.shape[1]):
                x = int(sub[0, j])
                if x == 0:
                    continue
                q = x // piv
                sub[:, j] = sub[:, j] - q * sub[:, 0]
                if sub[0, j] != 0:
                    sub[:, [0, j]] = sub[:, [j, 0]]
                    done = False
                    break
            if done:
                break
        diag.append(abs(int(sub[0, 0])))
        top += 1
    return _snf_diag_chain(diag)


# ---------------------------------------------------------------------------
# Sparse variants for the large section-indexed systems

def sparse_snf_invariants(rows: list[dict[int, int]], ncols: int) -> tuple[list[int], int]:
    """Invariant factors and rank of a sparse integer matrix.

    Phase 1 eliminates +-1 pivots with Markowitz-style pivot choice (cheap for
    the relation matrices built here, where almost every row carries a unit);
    phase 2 runs the dense routine on whatever core remains.
    """
    work: dict[int, dict[int, int]] = {}
    col_rows: dict[int, set[int]] = {}
    for ri, row in enumerate(rows):
        r = {c: int(v) for c, v in row.items() if v != 0}
        if not r:
            continue
        work[ri] = r
        for c in r:
            col_rows.setdefault(c, set()).add(ri)
    ones = 0
    while True:
        # best unit pivot by fill estimate
        best = None
        for ri, r in work.items():
            rlen = len(r)
            for c, v in r.items():
                if v == 1 or v == -1:
                    cost = (rlen - 1) * (len(col_rows[c]) - 1)
                    if best is None or cost < best[0]:
                        best = (cost, ri, c)
            if best is not None and best[0] == 0:
                break
        if best is None:
            break
        _, pri, pc = best
        prow = work.pop(pri)
        pval = prow[pc]
        for c in prow:
            col_rows[c].discard(pri)
        for ri in list(col_rows.get(pc, ())):
            r = work[ri]
            factor = r[pc] * pval          # pval is +-1 so this is r[pc]/pval
            for c, v in prow.items():
                nv = r.get(c, 0) - factor * v
                if nv == 0:
                    if c in r:
                        del r[c]
                        col_rows[c].discard(ri)
                else:
                    if c not in r:
                        col_rows.setdefault(c, set()).add(ri)
                    r[c] = nv
            if not r:
                del work[ri]
        col_rows.pop(pc, None)
        ones += 1
    if not work:
        return [1] * ones, ones
    live_cols = sorted({c for r in work.values() for c in r})
    cmap = {c: i for i, c in enumerate(live_cols)}
    dense = obj_zeros(len(work), len(live_cols))
    for i, r in enumerate(work.values()):
        for c, v in r.items():
            dense[i, cmap[c]] = v
    rest = snf_diagonal(dense)
    return [1] * ones + rest, ones + len(rest)


def sparse_kernel(ncols: int, rows: Iterable[dict[int, int]]) -> list[dict[int, int]]:
    """Basis of {x in Z^ncols : A x = 0} for sparse constraint rows A.

    Processes one constraint at a time, maintaining an exact basis of the
    current solution lattice; solving a single linear functional on a lattice
    is an xgcd fold. The result is automatically saturated.
    """
    basis: dict[int, dict[int, int]] = {i: {i: 1} for i in range(ncols)}
    col_index: dict[int, set[int]] = {i: {i} for i in range(ncols)}

    def unregister(bid, cols):
        for c in cols:
            s = col_index.get(c)
            if s is not None:
                s.discard(bid)
                if not s:
                    del col_index[c]

    def register(bid, cols):
        for c in cols:
            col_index.setdefault(c, set()).add(bid)

    def set_vec(bid, vec):
        old = basis[bid]
        unregister(bid, old.keys())
        basis[bid] = vec
        register(bid, vec.keys())

    for a in rows:
        a = {c: int(v) for c, v in a.items() if v != 0}
        if not a:
            continue
        cand: set[int] = set()
        for c in a:
            cand |= col_index.get(c, set())
        pairs = []
        for bid in cand:
            b = basis[bid]
            if len(b) < len(a):
                d = sum(v * a.get(c, 0) for c, v in b.items())
            else:
                d = sum(v * b.get(c, 0) for c, v in a.items())
            if d != 0:
                pairs.append((bid, d))
        if not pairs:
            continue
        # fold all nonzero dots into one carrier vector
        pairs.sort(key=lambda t: (abs(t[1]), t[0]))
        unit = next((t for t in pairs if abs(t[1]) == 1), None)
        if unit is not None:
            cid, cd = unit
            carrier = basis[cid]
            for bid, d in pairs:
                if bid == cid:
                    continue
                coef = d * cd              # d / cd since cd is +-1
                vec = dict(basis[bid])
                for c, v in carrier.items():
                    nv = vec.get(c, 0) - coef * v
                    if nv == 0:
                        vec.pop(c, None)
                    else:
                        vec[c] = nv
                set_vec(bid, vec)
        else:
            cid, cd = pairs[0]
            for bid, d in pairs[1:]:
                x, y, g = xgcd(cd, d)
                bvec = basis[bid]
                cvec = basis[cid]
                merged: dict[int, int] = {}
                for c, v in cvec.items():
                    merged[c] = x * v
                for c, v in bvec.items():
                    nv = merged.get(c, 0) + y * v
                    if nv == 0:
                        merged.pop(c, None)
                    else:
                        merged[c] = nv
                repl: dict[int, int] = {}
                for c, v in cvec.items():
                    repl[c] = -(d // g) * v
                for c, v in bvec.items():
                    nv = repl.get(c, 0) + (cd // g) * v
                    if nv == 0:
                        repl.pop(c, None)
                    else:
                        repl[c] = nv
                set_vec(cid, merged)
                set_vec(bid, repl)
                cd = g
        unregister(cid, basis[cid].keys())
        del basis[cid]
    return [basis[k] for k in sorted(basis)]


def kernel_basis(mat) -> np.ndarray:
    """Saturated basis (rows) of the right kernel of a dense matrix."""
    A = np.asarray(mat, dtype=object)
    m, n = A.shape
    rows = []
    for i in range(m):
        r = {j: int(A[i, j]) for j in range(n) if A[i, j] != 0}
        rows.append(r)
    sol = sparse_kernel(n, rows)
    lb = LatticeBuilder(n)
    for s in sol:
        vec = [0] * n
        for c, v in s.items():
            vec[c] = v
        lb.add(vec)
    return lb.hnf()


# ---------------------------------------------------------------------------

class IntegerLattice:
    """A sublattice of Z^ambient with a canonical HNF basis."""

    def __init__(self, ambient: int, basis_rows=None):
        self.ambient = ambient
        if basis_rows is None:
            self.basis = np.empty((0, ambient), dtype=object)
        else:
            self.basis = hnf(obj_matrix(basis_rows, ambient)
                             if not isinstance(basis_rows, np.ndarray) else basis_rows)
        self._piv = [_first_nonzero(r) for r in self.basis]

    @property
    def rank(self) -> int:
        return self.basis.shape[0]

    def member(self, vec) -> bool:
        return coords_in_hnf(self.basis, vec) is not None

    def coordinates_of(self, vec) -> list[int]:
        c = coords_in_hnf(self.basis, vec)
        if c is None:
            raise ValueError("vector is not in the lattice")
        return c

    def contains(self, other: "IntegerLattice") -> bool:
        return all(self.member(r) for r in other.basis)

    def __eq__(self, other) -> bool:
        if not isinstance(other, IntegerLattice):
            return NotImplemented
        return (self.ambient == other.ambient
                and self.basis.shape == other.basis.shape
                and bool(np.all(self.basis == other.basis)))

    def __hash__(self):
        return hash((self.ambient, self.basis.shape))

    def sum(self, other: "IntegerLattice") -> "IntegerLattice":
        if self.ambient != other.ambient:
            raise ValueError("ambient mismatch")
        lb = LatticeBuilder(self.ambient)
        for r in self.basis:
            lb.add(r)
        for r in other.basis:
            lb.add(r)
        out = IntegerLattice(self.ambient)
        out.basis = lb.hnf()
        out._piv = [_first_nonzero(r) for r in out.basis]
        return out

    def quotient_invariants(self, sub: "IntegerLattice") -> list[int]:
        """SNF diagonal of self/sub: torsion factors then one 0 per free rank.

        sub must be contained in self; factors equal to 1 are kept so the
        list length is always rank(self).
        """
        coords = []
        for r in sub.basis:
            c = coords_in_hnf(self.basis, r)
            if c is None:
                raise ValueError("not a sublattice")
            coords.append(c)
        d = snf_diagonal(obj_matrix(coords, self.rank)) if coords else []
        free = self.rank - len(d)
        return d + [0] * free

    def __repr__(self):
        return f"IntegerLattice(ambient={self.ambient}, rank={self.rank})"


def lattice_from_rows(ambient: int, rows) -> IntegerLattice:
    lat = IntegerLattice(ambient)
    lb = LatticeBuilder(ambient)
    for r in rows:
        lb.add(r)
    lat.basis = lb.hnf()
    lat._piv = [_first_nonzero(r) for r in lat.basis]
    return lat
