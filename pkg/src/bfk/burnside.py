"""The ring of finite group actions up to equivalence, with exact integers.

The free basis is indexed by conjugacy classes of subgroups in the fixed
deterministic order of the lattice analysis. Everything about an element is
a column vector over that basis; maps act as matrix-times-column.

Fixed-point counts against cyclic subgroups linearize the ring; the kernel
of that linearization is the lattice this package mostly studies. Bisets act
through orbit counting, with closed-form fast paths for the standard
induce/inflate and restrict/deflate maps along sections.
"""

from __future__ import annotations

import threading

import numpy as np

from .bisets import ConcreteBiset, _UnionFind, _coset_ids, opposite
from .groups import (
    FiniteGroup,
    GroupAnalysis,
    Section,
    analysis,
    classify_group,
    double_coset_reps,
    product_members,
    subgroup_generators,
    trivial_group,
)
from .zlinalg import (
    IntegerLattice,
    LatticeBuilder,
    hnf,
    kernel_basis,
    lattice_from_rows,
    obj_eye,
    obj_matrix,
    obj_zeros,
    rank_of,
    sparse_kernel,
)


def mark_count(ana: GroupAnalysis, s_members, t_members) -> int:
    """Fixed points of the first subgroup on cosets of the second."""
    G = ana.group
    if G.is_abelian:
        if set(int(x) for x in s_members) <= set(int(x) for x in t_members):
            return G.order // len(t_members)
        return 0
    t_arr = np.asarray(t_members, dtype=np.int32)
    s_set = set(int(x) for x in s_members)
    seen = np.zeros(G.order, dtype=bool)
    count = 0
    for x in range(G.order):
        if seen[x]:
            continue
        seen[G.table[x, t_arr]] = True
        conj = G.table[G.table[x, t_arr], G.inv[x]]
        if s_set <= set(conj.tolist()):
            count += 1
    return count


class RingData:
    """Per-group basis bookkeeping, marks, linearization, kernel lattice."""

    def __init__(self, G: FiniteGroup):
        self.group = G
        self.ana = analysis(G)
        self.n_classes = len(self.ana.classes)
        self.reps_members = [self.ana.subgroup_members[i]
                             for i in self.ana.class_reps]
        self.orders = [len(m) for m in self.reps_members]
        self.cyclic_positions = list(self.ana.cyclic_class_positions)
        self._lock = threading.RLock()
        self._marks = None
        self._lin = None
        self._kernel = None

    def class_position(self, members) -> int:
        return int(self.ana.class_of_sub[self.ana.index_of(members)])

    def marks(self) -> np.ndarray:
        with self._lock:
            if self._marks is None:
                n = self.n_classes
                M = obj_zeros(n, n)
                for i, sm in enumerate(self.reps_members):
                    for j, tm in enumerate(self.reps_members):
                        if self.orders[i] <= self.orders[j]:
                            M[i, j] = mark_count(self.ana, sm, tm)
                self._marks = M
            return self._marks

    def linearization(self) -> np.ndarray:
        """Rows are fixed-point counts against the cyclic classes."""
        with self._lock:
            if self._lin is None:
                rows = []
                for ci in self.cyclic_positions:
                    sm = self.reps_members[ci]
                    rows.append([mark_count(self.ana, sm, tm)
                                 for tm in self.reps_members])
                self._lin = obj_matrix(rows, self.n_classes)
            return self._lin

    def kernel(self) -> IntegerLattice:
        with self._lock:
            if self._kernel is None:
                L = self.linearization()
                sparse_rows = [{j: int(r[j]) for j in range(self.n_classes)
                                if r[j] != 0} for r in L]
                sol = sparse_kernel(self.n_classes, sparse_rows)
                rows = []
                for s in sol:
                    vec = [0] * self.n_classes
                    for c, v in s.items():
                        vec[c] = v
                    rows.append(vec)
                self._kernel = lattice_from_rows(self.n_classes, rows)
            return self._kernel


_RING: dict[int, RingData] = {}
_RING_LOCK = threading.Lock()
_RING_KEEP: dict[int, FiniteGroup] = {}


def ring_data(G: FiniteGroup) -> RingData:
    key = id(G)
    hit = _RING.get(key)
    if hit is not None:
        return hit
    with _RING_LOCK:
        hit = _RING.get(key)
        if hit is None:
            hit = RingData(G)
            _RING[key] = hit
            _RING_KEEP[key] = G
        return hit


def table_of_marks(G: FiniteGroup) -> np.ndarray:
    return ring_data(G).marks()


def linearization_matrix(G: FiniteGroup) -> np.ndarray:
    return ring_data(G).linearization()


def linearization_kernel(G: FiniteGroup) -> IntegerLattice:
    return ring_data(G).kernel()


def character_rank_full(G: FiniteGroup) -> bool:
    """Whether the linearization has full rank, one per cyclic class."""
    rd = ring_data(G)
    return rank_of(rd.linearization()) == len(rd.cyclic_positions)


# ---------------------------------------------------------------------------
# distinguished kernel elements

def rank_two_kernel_element(G: FiniteGroup) -> np.ndarray:
    """For an elementary abelian group of rank 2: the generator of the
    linearization kernel, with the point orbit weighted 1, each index-p
    orbit weighted -1, and the trivial orbit weighted p."""
    p = G.prime
    lab = classify_group(G)
    if not (lab.kind == "elab" and lab.rank == 2):
        raise ValueError("needs an elementary abelian group of rank 2")
    rd = ring_data(G)
    coeffs = [1 if order == 1 else (-1 if order == p else p)
              for order in rd.orders]
    return np.array(coeffs, dtype=object)


def extraspecial_kernel_element(G: FiniteGroup, first: int = 0,
                                second: int = 1) -> np.ndarray:
    """For the extraspecial group of order p^3 and exponent p: the kernel
    element supported on two chosen non-central order-p classes and the
    maximal subgroups they generate with the center."""
    if classify_group(G).kind != "xsp":
        raise ValueError("needs the extraspecial group of exponent p")
    rd = ring_data(G)
    ana = rd.ana
    zmem = ana.center_members
    noncentral = [j for j, m in enumerate(rd.reps_members)
                  if len(m) == G.prime and m != zmem]
    if first == second:
        raise ValueError("the two classes must differ")
    i_pos, j_pos = noncentral[first], noncentral[second]
    coeffs = [0] * rd.n_classes
    for pos, sign in ((i_pos, 1), (j_pos, -1)):
        mem = rd.reps_members[pos]
        with_center = product_members(G, mem, zmem)
        coeffs[pos] += sign
        coeffs[rd.class_position(with_center)] -= sign
    return np.array(coeffs, dtype=object)


# ---------------------------------------------------------------------------
# biset action by orbit counting

def decompose_left_action(left: np.ndarray, dq: RingData) -> list:
    """Coefficients of a finite left action in the orbit basis."""
    anaQ = dq.ana
    nq = left.shape[1]
    coeffs = [0] * dq.n_classes
    seen = np.zeros(nq, dtype=bool)
    for x in range(nq):
        if seen[x]:
            continue
        col = left[:, x]
        orbit = sorted(set(col.tolist()))
        seen[orbit] = True
        stab = tuple(int(q) for q in range(left.shape[0]) if col[q] == x)
        coeffs[dq.class_position(stab)] += 1
    return coeffs


def act_on_basis_element(U: ConcreteBiset, t_members, dq: RingData) -> list:
    """Image of the transitive right-group set with the given stabilizer:
    collapse U by the right subgroup action, then decompose the left set."""
    uf = _UnionFind(U.size)
    for t in subgroup_generators(U.right_group, t_members):
        col = U.right[:, t]
        for u in range(U.size):
            uf.union(u, int(col[u]))
    roots = sorted({uf.find(x) for x in range(U.size)})
    index = {r: i for i, r in enumerate(roots)}
    Q = U.left_group
    left = np.empty((Q.order, len(roots)), dtype=np.int32)
    for i, r in enumerate(roots):
        for q in range(Q.order):
            left[q, i] = index[uf.find(int(U.left[q, r]))]
    return decompose_left_action(left, dq)


def biset_matrix(U: ConcreteBiset) -> np.ndarray:
    """Matrix of the induced map between the two orbit-basis modules,
    columns indexed by the right group's classes."""
    dq = ring_data(U.left_group)
    dp = ring_data(U.right_group)
    out = obj_zeros(dq.n_classes, dp.n_classes)
    for j, tm in enumerate(dp.reps_members):
        out[:, j] = act_on_basis_element(U, tm, dq)
    return out


def point_biset(anaP: GroupAnalysis, t_members) -> ConcreteBiset:
    """Cosets of a subgroup as a biset with trivial right side; composing
    any biset with it gives a concrete one-sided oracle for the action."""
    P = anaP.group
    ids, reps = _coset_ids(P, tuple(t_members), "left")
    left = ids[P.table[:, np.asarray(reps, dtype=np.int32)]]
    right = np.arange(len(reps), dtype=np.int32)[:, None]
    return ConcreteBiset(P, trivial_group(P.prime), left, right,
                         name=f"cosets[{tuple(t_members)}]")


# ---------------------------------------------------------------------------
# closed-form maps along sections

def indinf_class_matrix(anaP: GroupAnalysis, sec: Section) -> np.ndarray:
    """Induce from the top after inflating from the section quotient:
    each quotient orbit goes to the orbit of its preimage subgroup."""
    dp = ring_data(anaP.group)
    dq = ring_data(sec.group)
    out = obj_zeros(dp.n_classes, dq.n_classes)
    for j, wbar in enumerate(dq.reps_members):
        w = sec.preimage(wbar)
        out[dp.class_position(w), j] = 1
    return out


def defres_class_matrix(anaP: GroupAnalysis, sec: Section) -> np.ndarray:
    """Restrict to the top then deflate to the section quotient, via double
    cosets of the top against each stabilizer."""
    G = anaP.group
    dp = ring_data(G)
    dq = ring_data(sec.group)
    tmem = sec.top.members
    tset = set(tmem)
    out = obj_zeros(dq.n_classes, dp.n_classes)
    for j, wmem in enumerate(dp.reps_members):
        for x in double_coset_reps(G, tmem, wmem):
            conj = set(anaP.conjugate_members(x, wmem))
            inter = tuple(sorted(conj & tset))
            image = sec.image_members(inter)
            out[dq.class_position(image), j] += 1
    return out


def iso_class_matrix(f, src: FiniteGroup, dst: FiniteGroup) -> np.ndarray:
    """Permutation of orbit bases induced by a group isomorphism."""
    f = np.asarray(f, dtype=np.int32)
    ds = ring_data(src)
    dd = ring_data(dst)
    out = obj_zeros(dd.n_classes, ds.n_classes)
    for j, mem in enumerate(ds.reps_members):
        image = tuple(sorted(int(f[m]) for m in mem))
        out[dd.class_position(image), j] = 1
    return out


# ---------------------------------------------------------------------------
# kernel-level and dual maps

def kernel_restricted_matrix(M: np.ndarray, src: IntegerLattice,
                             dst: IntegerLattice) -> np.ndarray:
    """Rewrite a basis-level matrix as a map between kernel lattices,
    in their canonical bases. Raises if the image ever leaves dst."""
    cols = []
    for b in src.basis:
        cols.append(dst.coordinates_of(M @ b))
    out = obj_zeros(dst.rank, src.rank)
    for j, c in enumerate(cols):
        out[:, j] = c
    return out


def dual_action_matrix(U: ConcreteBiset) -> np.ndarray:
    """Action on dual modules: the transpose of the opposite biset's
    matrix, mapping functionals on the right side to the left side."""
    return biset_matrix(opposite(U)).T


def kernel_dual_action_matrix(U: ConcreteBiset) -> np.ndarray:
    """The dual action pushed down to functionals on the kernel lattices."""
    Mstar = dual_action_matrix(U)
    kq = ring_data(U.left_group).kernel()
    kp = ring_data(U.right_group).kernel()
    rows = []
    for row in kq.basis @ Mstar:
        rows.append(kp.coordinates_of(row))
    return obj_matrix(rows, kp.rank)


def dual_kernel_projection(G: FiniteGroup) -> np.ndarray:
    """Restriction of functionals to the kernel lattice: the kernel basis
    matrix itself, in the column-vector convention."""
    return ring_data(G).kernel().basis


def character_dual_sublattice(G: FiniteGroup) -> IntegerLattice:
    """Functionals that factor through the linearization: the pullbacks of
    the dual basis of the image lattice of fixed-point counts."""
    rd = ring_data(G)
    L = rd.linearization()
    r = len(rd.cyclic_positions)
    if rank_of(L) != r:
        raise ValueError("linearization is rank-deficient")
    H = hnf(L.T)                       # basis of the image of the transpose
    Ht = H.T                           # lower triangular, full rank
    n = rd.n_classes
    M = obj_zeros(r, n)
    for i in range(r):
        acc = L[i, :].copy()
        for k in range(i):
            if Ht[i, k] != 0:
                acc = acc - int(Ht[i, k]) * M[k, :]
        piv = int(Ht[i, i])
        for j in range(n):
            q, rem = divmod(int(acc[j]), piv)
            if rem != 0:
                raise AssertionError("dual basis pullback must be integral")
            M[i, j] = q
    return lattice_from_rows(n, M)


def dual_exactness_report(G: FiniteGroup) -> dict:
    """How the dual module splits against the character side: quotient
    invariants, rank bookkeeping, and whether the character functionals
    are exactly the annihilator of the kernel."""
    rd = ring_data(G)
    n = rd.n_classes
    r = len(rd.cyclic_positions)
    K = rd.kernel()
    rstar = character_dual_sublattice(G)
    kperp = lattice_from_rows(n, kernel_basis(K.basis))
    full = lattice_from_rows(n, obj_eye(n))
    inv = full.quotient_invariants(rstar)
    torsion = [d for d in inv if d not in (0,)]
    return {
        "basis_rank": n,
        "character_rank": r,
        "kernel_rank": K.rank,
        "rank_identity": K.rank == n - r,
        "dual_quotient_invariants": inv,
        "dual_quotient_free_rank": inv.count(0),
        "dual_quotient_torsion_free": all(d == 1 for d in torsion),
        "annihilator_matches": rstar == kperp,
    }


# ---------------------------------------------------------------------------
# sums of induced kernels

def sum_of_induced_kernels(G: FiniteGroup, sections) -> IntegerLattice:
    """Sublattice of the kernel spanned by the images of all the given
    sections' kernels under induce-after-inflate."""
    ana = analysis(G)
    rd = ring_data(G)
    lb = LatticeBuilder(rd.n_classes)
    for sec in sections:
        sub_rd = ring_data(sec.group)
        sub_kernel = sub_rd.kernel()
        if sub_kernel.rank == 0:
            continue
        M = indinf_class_matrix(ana, sec)
        for b in sub_kernel.basis:
            lb.add(M @ b)
    return lattice_from_rows(rd.n_classes, lb.hnf())