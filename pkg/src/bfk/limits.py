"""Coefficient systems over families of sections, with exact integer limits.

A family label picks out the sections (T, S) of a finite p-group P whose
quotient T/S stays inside a fixed shape vocabulary: elementary abelian up
to a rank cap, optionally also the exponent-p extraspecial group of order
p^3.  The values of a functor on those quotients, the downward maps
between them and conjugation by elements of P together form a coefficient
system; the inverse limit is the subgroup of the product of all values cut
out by the compatibility constraints, computed exactly over the integers.

Quotient groups are never materialized.  The transitive-set basis of a
quotient T/S is the set of T-conjugacy classes of intermediate subgroups
S <= W <= T, and every structure map is written in those coordinates on
the ambient group.  Large free systems go through a component-merging
solver whose basis updates are deferred on per-component chains; small or
torsion-carrying systems go through a direct sparse kernel.
"""

from __future__ import annotations

import json

import numpy as np

from .groups import (FiniteGroup, GroupAnalysis, analysis, _closure,
                     double_coset_reps, product_members, subgroup_generators)
from .zlinalg import (LatticeBuilder, coords_in_hnf, kernel_basis,
                      lattice_from_rows, obj_matrix, obj_zeros,
                      residue_mod_hnf, snf_diagonal, sparse_kernel,
                      sparse_snf_invariants)
from .burnside import ring_data

FAMILY_LABELS = ("E", "E2", "E3", "X", "X2", "X3")
FUNCTOR_NAMES = ("B", "K", "Bdual", "Kdual")

# label semantics: E* keeps elementary abelian quotients (digit = rank cap,
# no digit = unbounded), X* additionally keeps the extraspecial exponent-p
# quotient of order p^3.

_I64_BOUND = 1 << 55


class FamilyError(ValueError):
    pass


# ---------------------------------------------------------------------------
# subgroup shape caches on the ambient analysis


def _power_closure(ana: GroupAnalysis, ti: int) -> frozenset:
    """Subgroup generated by the p-th powers of the members of subgroup ti."""
    cache = getattr(ana, "_bfk_agemo", None)
    if cache is None:
        cache = {}
        ana._bfk_agemo = cache
    got = cache.get(ti)
    if got is None:
        G = ana.group
        gens = sorted({G.power(t, G.prime) for t in ana.subgroup_members[ti]})
        got = frozenset(_closure(G.table, tuple(gens)))
        cache[ti] = got
    return got


def _derived_closure(ana: GroupAnalysis, ti: int) -> frozenset:
    """Commutator subgroup of subgroup ti."""
    cache = getattr(ana, "_bfk_derived", None)
    if cache is None:
        cache = {}
        ana._bfk_derived = cache
    got = cache.get(ti)
    if got is None:
        G = ana.group
        mem = ana.subgroup_members[ti]
        comms = set()
        for a in mem:
            ia = G.inv_of(a)
            for b in mem:
                comms.add(G.mul(G.mul(ia, G.inv_of(b)), G.mul(a, b)))
        got = frozenset(_closure(G.table, tuple(sorted(comms))))
        cache[ti] = got
    return got


def family_contains(ana: GroupAnalysis, ti: int, si: int, label: str) -> bool:
    """Does the quotient of section (ti, si) belong to the labeled family?

    Assumes (ti, si) is a section: si normal in ti.  The tests reduce to
    two containments: the quotient has exponent p iff the p-th power
    closure of T lies in S, and it is abelian iff the derived subgroup
    does.  Order p^3 with exponent p and nonabelian is exactly the
    extraspecial member.
    """
    if label not in FAMILY_LABELS:
        raise FamilyError(f"unknown family label {label!r}")
    p = ana.group.prime
    index = len(ana.subgroup_members[ti]) // len(ana.subgroup_members[si])
    s_set = ana.member_sets[si]
    if index == 1:
        return True
    if not _power_closure(ana, ti) <= s_set:
        return False
    abelian = _derived_closure(ana, ti) <= s_set
    if label == "E":
        return abelian
    if label == "E2":
        return abelian and index <= p * p
    if label == "E3":
        return abelian and index <= p ** 3
    if label == "X3":
        # rank <= 3 elementary abelian, or the extraspecial quotient;
        # exponent p forces one of the two once the index caps at p^3
        return index <= p ** 3
    if label == "X2":
        return (abelian and index <= p * p) or (not abelian and index == p ** 3)
    # label == "X"
    return abelian or index == p ** 3


# ---------------------------------------------------------------------------
# section slots: transitive-set bases in ambient coordinates


class SectionSlot:
    """Basis data for one section (T, S) of the ambient group.

    classes holds one representative subgroup index per T-conjugacy class
    of intermediate subgroups; class_pos maps every intermediate subgroup
    index to the position of its class.
    """

    __slots__ = ("ti", "si", "classes", "class_pos", "dim", "_kernel")

    def __init__(self, ana: GroupAnalysis, ti: int, si: int):
        self.ti = ti
        self.si = si
        leq = ana.leq
        cand = [w for w in range(ana.n_sub) if leq[si, w] and leq[w, ti]]
        pos = {w: i for i, w in enumerate(cand)}
        parent = list(range(len(cand)))

        def find(a):
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        if not ana.group.is_abelian:
            tmem = ana.subgroup_members[ti]
            for w in cand:
                wm = ana.subgroup_members[w]
                for u in subgroup_generators(ana.group, tmem):
                    cw = pos[ana.index_of(ana.conjugate_members(u, wm))]
                    ra, rb = find(pos[w]), find(cw)
                    if ra != rb:
                        parent[max(ra, rb)] = min(ra, rb)
        reps = sorted({cand[find(i)] for i in range(len(cand))})
        self.classes = reps
        rep_pos = {w: i for i, w in enumerate(reps)}
        self.class_pos = {w: rep_pos[cand[find(pos[w])]] for w in cand}
        self.dim = len(reps)
        self._kernel = None

    def index(self, ana: GroupAnalysis) -> int:
        return (len(ana.subgroup_members[self.ti])
                // len(ana.subgroup_members[self.si]))


def _slot_kernel(ana: GroupAnalysis, slot: SectionSlot) -> np.ndarray:
    """HNF basis (rows) of the mark kernel of the quotient at this slot.

    Rows of the linearization are indexed by the classes whose quotient
    image is cyclic; the quotient of order dividing p contributes nothing.
    """
    if slot._kernel is not None:
        return slot._kernel
    p = ana.group.prime
    if slot.index(ana) <= p:
        slot._kernel = obj_zeros(0, slot.dim)
        return slot._kernel
    s_size = len(ana.subgroup_members[slot.si])
    m_sets = ana.member_sets
    cyc = []
    for w in slot.classes:
        wsize = len(ana.subgroup_members[w])
        if wsize == s_size:
            cyc.append(w)
            continue
        n_max = 0
        for u in slot.class_pos:
            if len(ana.subgroup_members[u]) * p == wsize and m_sets[u] <= m_sets[w]:
                n_max += 1
        # a p-group quotient is cyclic iff it has a unique maximal subgroup
        if n_max == 1:
            cyc.append(w)
    t_mem = ana.subgroup_members[slot.ti]
    rows = []
    for v in cyc:
        vmem = ana.subgroup_members[v]
        if ana.group.is_abelian:
            orbit = [m_sets[v]]
        else:
            orbit = list({frozenset(ana.conjugate_members(x, vmem))
                          for x in t_mem})
        mult = len(t_mem) // len(orbit)
        row = [0] * slot.dim
        for j, w in enumerate(slot.classes):
            wset = m_sets[w]
            wsize = len(ana.subgroup_members[w])
            hits = sum(1 for c in orbit if c <= wset)
            row[j] = (mult * hits) // wsize
        rows.append(row)
    slot._kernel = kernel_basis(obj_matrix(rows, slot.dim))
    return slot._kernel


# ---------------------------------------------------------------------------
# the family of sections of one group, with its generating moves


class SectionFamily:
    """All sections of one group whose quotient fits the family label.

    Sections are ordered by (top index, bottom index) over the canonical
    subgroup ordering, so every derived listing is deterministic.  Edges
    record the generating moves: one-step deflations (grow the bottom by
    p), one-step restrictions (shrink the top by p), and conjugation by
    the group generators when the group is nonabelian.
    """

    def __init__(self, G: FiniteGroup, label: str):
        if label not in FAMILY_LABELS:
            raise FamilyError(f"unknown family label {label!r}")
        self.group = G
        self.label = label
        ana = analysis(G)
        self.ana = ana
        secs = []
        for ti in range(ana.n_sub):
            for si in range(ana.n_sub):
                if not (ana.leq[si, ti] and ana.is_normal_in(si, ti)):
                    continue
                if family_contains(ana, ti, si, label):
                    secs.append((ti, si))
        self.sections = secs
        self.pos = {ts: i for i, ts in enumerate(secs)}
        self.slots = [SectionSlot(ana, t, s) for t, s in secs]

        p = G.prime
        cover = []
        for i, (ti, si) in enumerate(secs):
            so = len(ana.subgroup_members[si])
            to = len(ana.subgroup_members[ti])
            for sp in range(ana.n_sub):
                if (ana.leq[si, sp] and ana.leq[sp, ti]
                        and len(ana.subgroup_members[sp]) == so * p
                        and ana.is_normal_in(sp, ti)):
                    # families are closed under subquotients, so the target
                    # section is present; a miss is a bug, not a branch
                    cover.append((i, self.pos[(ti, sp)], "def"))
            for tm in range(ana.n_sub):
                if (ana.leq[si, tm] and ana.leq[tm, ti]
                        and len(ana.subgroup_members[tm]) * p == to):
                    cover.append((i, self.pos[(tm, si)], "res"))
        self.cover_edges = cover

        conj = []
        if not G.is_abelian:
            for i, (ti, si) in enumerate(secs):
                tmem = ana.subgroup_members[ti]
                smem = ana.subgroup_members[si]
                for u in ana.generators:
                    ct = ana.index_of(ana.conjugate_members(u, tmem))
                    cs = ana.index_of(ana.conjugate_members(u, smem))
                    j = self.pos[(ct, cs)]
                    if j == i and all(
                            self.slots[i].class_pos[ana.index_of(
                                ana.conjugate_members(u, ana.subgroup_members[w]))] == jj
                            for jj, w in enumerate(self.slots[i].classes)):
                        continue
                    conj.append((i, j, u))
        self.conj_edges = conj

    def nested_pairs(self):
        """All ordered pairs (i, j) with section j a subquotient of section i."""
        ana = self.ana
        out = []
        for i, (ti, si) in enumerate(self.sections):
            for j, (tj, sj) in enumerate(self.sections):
                if i == j:
                    continue
                if ana.leq[tj, ti] and ana.leq[si, sj] and ana.leq[sj, tj]:
                    out.append((i, j))
        return out


def section_family(G: FiniteGroup, label: str) -> SectionFamily:
    ana = analysis(G)
    cache = getattr(ana, "_bfk_families", None)
    if cache is None:
        cache = {}
        ana._bfk_families = cache
    fam = cache.get(label)
    if fam is None:
        fam = SectionFamily(G, label)
        cache[label] = fam
    return fam


# ---------------------------------------------------------------------------
# presentations of finitely generated abelian groups


class AbelianPresentation:
    """Z^n modulo the row span of an integer relation matrix."""

    def __init__(self, generators: int, relations=None):
        self.generators = int(generators)
        if relations is None:
            self.relations = obj_zeros(0, self.generators)
        else:
            self.relations = obj_matrix(relations, self.generators)
        self._hnf = None
        self._invariants = None

    @property
    def is_free(self) -> bool:
        return self.relations.shape[0] == 0

    def relation_hnf(self) -> np.ndarray:
        if self._hnf is None:
            lat = lattice_from_rows(self.generators, self.relations)
            self._hnf = lat.basis
        return self._hnf

    def invariant_factors(self) -> list:
        """SNF diagonal of the relations, padded with 0 per free generator."""
        if self._invariants is None:
            diag = snf_diagonal(self.relations) if self.relations.size else []
            self._invariants = list(diag) + [0] * (self.generators - len(diag))
        return list(self._invariants)

    def torsion_invariants(self) -> list:
        return [int(d) for d in self.invariant_factors() if d not in (0, 1)]

    def free_rank(self) -> int:
        return sum(1 for d in self.invariant_factors() if d == 0)

    def reduce(self, vec) -> np.ndarray:
        H = self.relation_hnf()
        if H.shape[0] == 0:
            return np.array([int(x) for x in vec], dtype=object)
        return residue_mod_hnf(H, vec)

    def same_element(self, a, b) -> bool:
        d = np.array([int(x) - int(y) for x, y in zip(a, b)], dtype=object)
        r = self.reduce(d)
        return not any(int(x) for x in r)

    def __repr__(self):
        return (f"AbelianPresentation(gen={self.generators}, "
                f"inv={self.invariant_factors()})")


class GroupHom:
    """Map between presentations, given by an integer matrix on generators."""

    def __init__(self, source: AbelianPresentation, target: AbelianPresentation,
                 matrix, check: bool = True):
        self.source = source
        self.target = target
        self.matrix = obj_matrix(matrix, source.generators)
        if self.matrix.shape[0] != target.generators:
            raise ValueError("matrix shape does not match the presentations")
        if check and not self.source.is_free:
            for r in self.source.relations:
                img = self.matrix @ np.array([int(x) for x in r], dtype=object)
                if any(int(x) for x in self.target.reduce(img)):
                    raise ValueError("matrix does not respect the relations")

    def apply(self, vec) -> np.ndarray:
        return self.matrix @ np.array([int(x) for x in vec], dtype=object)

    def compose(self, other: "GroupHom") -> "GroupHom":
        if other.target is not self.source:
            raise ValueError("homs do not compose")
        return GroupHom(other.source, self.target,
                        self.matrix @ other.matrix, check=False)


# ---------------------------------------------------------------------------
# coefficient systems for the built-in functors


def _as_i64(mat) -> np.ndarray:
    arr = np.asarray(mat)
    if arr.dtype == np.int64:
        return arr
    if arr.size == 0:
        return np.zeros(arr.shape, dtype=np.int64)
    try:
        out = arr.astype(np.int64)
    except (OverflowError, TypeError):
        raise OverflowError("entry exceeds the int64 working range") from None
    if int(np.abs(out).max()) > _I64_BOUND:
        raise OverflowError("entry exceeds the int64 working range")
    return out


def _kernel_coords(kern: np.ndarray, vec) -> list:
    c = coords_in_hnf(kern, vec)
    if c is None:
        raise AssertionError("image left the mark kernel; upstream map is wrong")
    return c


def _restrict_to_kernels(M: np.ndarray, src_kern: np.ndarray,
                         dst_kern: np.ndarray) -> np.ndarray:
    """Rewrite a transitive-basis matrix as a map between kernel bases."""
    k_src = src_kern.shape[0]
    k_dst = dst_kern.shape[0]
    out = obj_zeros(k_dst, k_src)
    Mo = np.asarray(M, dtype=object)
    for i in range(k_src):
        img = Mo @ src_kern[i]
        for r, v in enumerate(_kernel_coords(dst_kern, img)):
            out[r, i] = v
    return out


class CoefficientSystem:
    """Values and structure maps of one functor over one section family.

    functor B is the transitive-set functor itself, K its mark kernel;
    Bdual and Kdual are the dual functors, whose downward maps are the
    transposes of the upward maps of B and K along the same moves.
    """

    def __init__(self, family: SectionFamily, functor: str):
        if functor not in FUNCTOR_NAMES:
            raise FamilyError(f"unknown functor {functor!r}")
        self.family = family
        self.functor = functor
        self.group = family.group
        self.ana = family.ana
        self._edge_cache = {}
        self._base_cache = {}
        if functor in ("K", "Kdual"):
            self._kernels = [_slot_kernel(self.ana, s) for s in family.slots]
            self.dims = [k.shape[0] for k in self._kernels]
            self.base_kernel = ring_data(self.group).kernel()
            self.base_rank = self.base_kernel.rank
        else:
            self._kernels = None
            self.dims = [s.dim for s in family.slots]
            self.base_rank = ring_data(self.group).n_classes
        self.offsets = []
        run = 0
        for d in self.dims:
            self.offsets.append(run)
            run += d
        self.total = run

    # -- spec-facing value layer -------------------------------------------

    def value(self, i: int) -> AbelianPresentation:
        return AbelianPresentation(self.dims[i])

    def sections(self):
        return list(self.family.sections)

    def block(self, vec, i: int):
        off = self.offsets[i]
        return vec[off:off + self.dims[i]]

    # -- transitive-basis building blocks ----------------------------------

    def _b_defres_between(self, src: SectionSlot, dst: SectionSlot) -> np.ndarray:
        """Downward map of B between nested sections, ambient coordinates."""
        ana = self.ana
        tp_mem = ana.subgroup_members[dst.ti]
        sp_mem = ana.subgroup_members[dst.si]
        t_mem = ana.subgroup_members[src.ti]
        D = np.zeros((dst.dim, src.dim), dtype=np.int64)
        for j, w in enumerate(src.classes):
            wmem = ana.subgroup_members[w]
            for x in double_coset_reps(ana.group, tp_mem, wmem, within=t_mem):
                cw = ana.conjugate_members(x, wmem)
                inter = tuple(m for m in cw if m in ana.member_sets[dst.ti])
                tgt = product_members(ana.group, inter, sp_mem)
                D[dst.class_pos[ana.index_of(tgt)], j] += 1
        return D

    def _b_indinf_between(self, src: SectionSlot, dst: SectionSlot) -> np.ndarray:
        """Upward map of B from a subquotient into a nested ambient section.

        Both moves keep the representing subgroup itself: inflation reads a
        class over the larger bottom, induction reads it in the larger top.
        """
        M = np.zeros((dst.dim, src.dim), dtype=np.int64)
        for j, w in enumerate(src.classes):
            M[dst.class_pos[w], j] = 1
        return M

    def _b_conj(self, src: SectionSlot, dst: SectionSlot, u: int) -> np.ndarray:
        ana = self.ana
        C = np.zeros((dst.dim, src.dim), dtype=np.int64)
        for j, w in enumerate(src.classes):
            cw = ana.index_of(ana.conjugate_members(u, ana.subgroup_members[w]))
            C[dst.class_pos[cw], j] = 1
        return C

    # -- per-edge matrices for the configured functor ----------------------

    def edges(self):
        fam = self.family
        out = [(s, d, ("cover", kind)) for s, d, kind in fam.cover_edges]
        out.extend((s, d, ("conj", u)) for s, d, u in fam.conj_edges)
        return out

    def edge_matrix(self, src: int, dst: int, tag) -> np.ndarray:
        """Matrix of the downward move src -> dst on this functor's values."""
        key = (src, dst, tag)
        got = self._edge_cache.get(key)
        if got is not None:
            return got
        fam = self.family
        a, b = fam.slots[src], fam.slots[dst]
        kind = tag[0]
        if self.functor == "B":
            M = (self._b_defres_between(a, b) if kind == "cover"
                 else self._b_conj(a, b, tag[1]))
        elif self.functor == "K":
            B = (self._b_defres_between(a, b) if kind == "cover"
                 else self._b_conj(a, b, tag[1]))
            M = _as_i64(_restrict_to_kernels(B, self._kernels[src],
                                             self._kernels[dst]))
        elif self.functor == "Bdual":
            M = self._dual_edge_b(a, b, src, dst, kind, tag)
        else:
            M = self._dual_edge_k(a, b, src, dst, kind, tag)
        self._edge_cache[key] = M
        return M

    def _dual_edge_b(self, a, b, src, dst, kind, tag):
        if kind == "cover":
            return self._b_indinf_between(b, a).T.copy()
        u_inv = self.ana.group.inv_of(tag[1])
        return self._b_conj(b, a, u_inv).T.copy()

    def _dual_edge_k(self, a, b, src, dst, kind, tag):
        if kind == "cover":
            B = self._b_indinf_between(b, a)
        else:
            B = self._b_conj(b, a, self.ana.group.inv_of(tag[1]))
        N = _restrict_to_kernels(B, self._kernels[dst], self._kernels[src])
        return _as_i64(N).T.copy()

    # -- maps to and from the value at the whole group ---------------------

    def _b_defres_from_base(self, i: int) -> np.ndarray:
        ana = self.ana
        slot = self.family.slots[i]
        t_mem = ana.subgroup_members[slot.ti]
        s_mem = ana.subgroup_members[slot.si]
        reps = [ana.subgroup_members[r] for r in ana.class_reps]
        M = np.zeros((slot.dim, len(reps)), dtype=np.int64)
        for col, vmem in enumerate(reps):
            for x in double_coset_reps(ana.group, t_mem, vmem):
                cv = ana.conjugate_members(x, vmem)
                inter = tuple(m for m in cv if m in ana.member_sets[slot.ti])
                tgt = product_members(ana.group, inter, s_mem)
                M[slot.class_pos[ana.index_of(tgt)], col] += 1
        return M

    def _b_indinf_to_base(self, i: int) -> np.ndarray:
        ana = self.ana
        slot = self.family.slots[i]
        M = np.zeros((len(ana.class_reps), slot.dim), dtype=np.int64)
        for j, w in enumerate(slot.classes):
            M[ana.class_of_sub[w], j] = 1
        return M

    def defres_from_base(self, i: int) -> np.ndarray:
        """Component map F(P) -> value(i) of the product-of-downward-maps."""
        key = ("down", i)
        got = self._base_cache.get(key)
        if got is not None:
            return got
        if self.functor == "B":
            M = self._b_defres_from_base(i)
        elif self.functor == "K":
            B = np.asarray(self._b_defres_from_base(i), dtype=object)
            kern = self._kernels[i]
            out = obj_zeros(kern.shape[0], self.base_rank)
            for col in range(self.base_rank):
                img = B @ self.base_kernel.basis[col]
                for r, v in enumerate(_kernel_coords(kern, img)):
                    out[r, col] = v
            M = _as_i64(out)
        elif self.functor == "Bdual":
            M = self._b_indinf_to_base(i).T.copy()
        else:
            B = np.asarray(self._b_indinf_to_base(i), dtype=object)
            kern = self._kernels[i]
            out = obj_zeros(self.base_rank, kern.shape[0])
            for col in range(kern.shape[0]):
                img = B @ kern[col]
                for r, v in enumerate(_kernel_coords(self.base_kernel.basis, img)):
                    out[r, col] = v
            M = _as_i64(out).T.copy()
        self._base_cache[key] = M
        return M

    def indinf_to_base(self, i: int) -> np.ndarray:
        """Upward map value(i) -> F(P); defined for B and K only."""
        if self.functor not in ("B", "K"):
            raise FamilyError("upward maps to the base need functor B or K")
        key = ("up", i)
        got = self._base_cache.get(key)
        if got is not None:
            return got
        if self.functor == "B":
            M = self._b_indinf_to_base(i)
        else:
            B = np.asarray(self._b_indinf_to_base(i), dtype=object)
            kern = self._kernels[i]
            out = obj_zeros(self.base_rank, kern.shape[0])
            for col in range(kern.shape[0]):
                img = B @ kern[col]
                for r, v in enumerate(_kernel_coords(self.base_kernel.basis, img)):
                    out[r, col] = v
            M = _as_i64(out)
        self._base_cache[key] = M
        return M

    def unit_matrix(self) -> np.ndarray:
        """Stacked downward components: F(P) -> product of all values."""
        blocks = [self.defres_from_base(i) for i in range(len(self.dims))]
        if not blocks:
            return np.zeros((0, self.base_rank), dtype=np.int64)
        return np.vstack(blocks)


def coefficient_system(G: FiniteGroup, label: str, functor: str) -> CoefficientSystem:
    fam = section_family(G, label)
    cache = getattr(fam, "_systems", None)
    if cache is None:
        cache = {}
        fam._systems = cache
    sys = cache.get(functor)
    if sys is None:
        sys = CoefficientSystem(fam, functor)
        cache[functor] = sys
    return sys


# ---------------------------------------------------------------------------
# the component-merging limit solver with deferred updates


class _Node:
    __slots__ = ("mat", "next")

    def __init__(self):
        self.mat = None
        self.next = None


class _Overflow(Exception):
    pass


class MergeLimitSolver:
    """Exact solver for v[dst] = D v[src] constraint systems over Z.

    Sections start as independent free components.  A constraint into an
    untouched component substitutes; a constraint inside one component
    shrinks its parameter space by a small exact kernel; a constraint
    across two components merges them.  Basis rewrites are not applied to
    member sections eagerly: each component keeps a chain of update
    matrices, sections remember their position in it, and catching up is
    one multiplication against a suffix product at materialization time.
    """

    def __init__(self, dims, dtype=np.int64):
        self.n = len(dims)
        self.dims = list(dims)
        self.dt = dtype
        self.parent = list(range(self.n))
        eye = np.eye if dtype == np.int64 else _obj_eye_arr
        self.phi = [eye(d) for d in dims]
        self.ptr = []
        self.tail = {}
        self.kdim = {}
        self.free_at = {}
        for s in range(self.n):
            node = _Node()
            self.ptr.append(node)
            self.tail[s] = node
            self.kdim[s] = dims[s]
            self.free_at[s] = s
        self.n_solves = 0

    def find(self, a: int) -> int:
        while self.parent[a] != a:
            self.parent[a] = self.parent[self.parent[a]]
            a = self.parent[a]
        return a

    def _mul(self, A, B):
        if self.dt == np.int64 and A.size and B.size:
            amax = int(np.abs(A).max())
            bmax = int(np.abs(B).max())
            if amax * bmax * max(1, A.shape[1]) > _I64_BOUND:
                raise _Overflow
        return A @ B

    def _read(self, s: int):
        node = self.ptr[s]
        v = self.phi[s]
        while node.next is not None:
            nxt = node.next
            if nxt.next is not None:
                # fold the pair; rewiring only this node preserves the
                # product seen from every pointer into the chain
                if node.mat is None:
                    node.mat = nxt.mat
                elif nxt.mat is not None:
                    node.mat = self._mul(node.mat, nxt.mat)
                node.next = nxt.next
                continue
            if node.mat is not None:
                v = self._mul(v, node.mat)
            node = node.next
        self.phi[s] = v
        self.ptr[s] = node
        return v

    def _kernel_transform(self, rows, k: int):
        """Columns parametrizing the kernel of rows, as a k x k' update."""
        self.n_solves += 1
        basis = kernel_basis(obj_matrix(
            [[int(x) for x in r] for r in rows], k))
        if basis.shape[0] == 0:
            return (np.zeros((k, 0), dtype=np.int64) if self.dt == np.int64
                    else obj_zeros(k, 0))
        if self.dt == np.int64:
            return _as_i64(basis).T.copy()
        return basis.T.copy()

    @staticmethod
    def _is_identity(S) -> bool:
        return (S.shape[0] == S.shape[1]
                and bool(np.array_equal(S, np.eye(S.shape[0], dtype=S.dtype))
                         if S.dtype == np.int64
                         else all(int(S[i, j]) == (1 if i == j else 0)
                                  for i in range(S.shape[0])
                                  for j in range(S.shape[1]))))

    def _append(self, root: int, S):
        t = self.tail[root]
        t.mat = S
        new = _Node()
        t.next = new
        self.tail[root] = new
        self.kdim[root] = S.shape[1]
        self.free_at[root] = None

    def process(self, src: int, dst: int, D):
        """Impose value[dst] == D @ value[src]."""
        if D.shape[0] == 0:
            return
        if D.shape[1] == 0:
            # dst must vanish; a constraint entirely inside dst's component
            c2 = self.find(dst)
            b = self._read(dst)
            if not b.size or not _any_nonzero(b):
                return
            S = self._kernel_transform(-b, self.kdim[c2])
            self._append(c2, S)
            return
        c1, c2 = self.find(src), self.find(dst)
        if c1 == c2:
            a = self._read(src)
            b = self._read(dst)
            rows = self._mul(D, a) - b
            if not _any_nonzero(rows):
                return
            S = self._kernel_transform(rows, self.kdim[c1])
            if not self._is_identity(S):
                self._append(c1, S)
            return
        if self.free_at.get(c2) == dst:
            # dst's component is parametrized by dst's own value; define it
            X = self._mul(D, self._read(src))
            t2 = self.tail[c2]
            t2.mat = X
            t2.next = self.tail[c1]
            self.parent[c2] = c1
            del self.tail[c2], self.kdim[c2], self.free_at[c2]
            return
        a = self._read(src)
        b = self._read(dst)
        k1, k2 = self.kdim[c1], self.kdim[c2]
        rows = np.concatenate([self._mul(D, a), -b], axis=1)
        S = self._kernel_transform(rows, k1 + k2)
        S1, S2 = S[:k1], S[k1:]
        t1, t2 = self.tail[c1], self.tail[c2]
        if self._is_identity(S1):
            shared = t1
        else:
            t1.mat = S1
            shared = _Node()
            t1.next = shared
            self.free_at[c1] = None
        t2.mat = None if self._is_identity(S2) else S2
        t2.next = shared
        self.tail[c1] = shared
        self.kdim[c1] = S.shape[1]
        self.parent[c2] = c1
        del self.tail[c2], self.kdim[c2], self.free_at[c2]

    def _suffix(self, node, memo):
        stack = []
        while id(node) not in memo and node.next is not None:
            stack.append(node)
            node = node.next
        acc = memo.get(id(node))
        for nd in reversed(stack):
            if nd.mat is None:
                cur = acc
            elif acc is None:
                cur = nd.mat
            else:
                cur = self._mul(nd.mat, acc)
            memo[id(nd)] = cur
            acc = cur
        return acc

    def finish(self):
        """Materialize every section's basis block and the column layout."""
        memo = {}
        roots = []
        seen = set()
        for s in range(self.n):
            r = self.find(s)
            if r not in seen:
                seen.add(r)
                roots.append(r)
        col_off = {}
        total = 0
        for r in roots:
            col_off[r] = total
            total += self.kdim[r]
        blocks = []
        for s in range(self.n):
            suf = self._suffix(self.ptr[s], memo)
            v = self.phi[s] if suf is None else self._mul(self.phi[s], suf)
            r = self.find(s)
            if v.shape[1] != self.kdim[r]:
                raise AssertionError("chain bookkeeping lost a rewrite")
            blocks.append((col_off[r], v))
        return total, blocks


def _obj_eye_arr(n: int) -> np.ndarray:
    out = obj_zeros(n, n)
    for i in range(n):
        out[i, i] = 1
    return out


def _any_nonzero(arr) -> bool:
    if arr.dtype == np.int64:
        return bool(arr.any())
    return any(int(x) for x in arr.flat)


def _matmul_fits(A, B) -> bool:
    """May A @ B be taken in int64 without risking silent wraparound."""
    if A.dtype != np.int64 or B.dtype != np.int64 or not (A.size and B.size):
        return A.dtype == np.int64 and B.dtype == np.int64
    amax = int(np.abs(A).max())
    bmax = int(np.abs(B).max())
    return amax * bmax * max(1, A.shape[1]) < (1 << 62)


# ---------------------------------------------------------------------------
# inverse limits of the built-in systems


class InverseLimit:
    """Basis of the limit lattice inside the product of the values.

    The stored basis is canonical: columns are the transposed reduced
    row-echelon integer basis of the solution lattice, so two solvers
    that find the same lattice produce identical objects.
    """

    def __init__(self, system: CoefficientSystem, basis: np.ndarray):
        self.system = system
        self.basis = basis          # total x rank, object entries
        self.rank = basis.shape[1]
        self.pivots = []
        for j in range(self.rank):
            col = basis[:, j]
            i = 0
            while i < basis.shape[0] and not col[i]:
                i += 1
            self.pivots.append(i)

    def projection(self, i: int) -> np.ndarray:
        off = self.system.offsets[i]
        return self.basis[off:off + self.system.dims[i], :]

    def element(self, coords) -> "LimitElement":
        vec = self.basis @ np.array([int(x) for x in coords], dtype=object)
        return LimitElement(self.system, vec, check=False)


class LimitElement:
    """One compatible tuple of values, stored as a stacked vector."""

    def __init__(self, system: CoefficientSystem, vector, check: bool = True):
        self.system = system
        self.vector = np.array([int(x) for x in vector], dtype=object)
        if self.vector.shape[0] != system.total:
            raise ValueError("vector length does not match the system")
        if check:
            residual_check(system, self.vector.reshape(-1, 1))

    def component(self, ti: int, si: int) -> np.ndarray:
        i = self.system.family.pos[(ti, si)]
        return self.system.block(self.vector, i)

    def __eq__(self, other):
        return (isinstance(other, LimitElement)
                and self.system is other.system
                and all(int(a) == int(b)
                        for a, b in zip(self.vector, other.vector)))

    def __hash__(self):
        return hash(tuple(int(x) for x in self.vector))


def residual_check(system: CoefficientSystem, mat: np.ndarray) -> None:
    """Assert the columns of mat satisfy every generating constraint."""
    try:
        M = _as_i64(mat)
    except OverflowError:
        M = np.asarray(mat, dtype=object)
    for src, dst, tag in system.edges():
        if system.dims[dst] == 0:
            continue
        D = system.edge_matrix(src, dst, tag)
        a = M[system.offsets[src]:system.offsets[src] + system.dims[src], :]
        b = M[system.offsets[dst]:system.offsets[dst] + system.dims[dst], :]
        if M.dtype == object or not _matmul_fits(D, a):
            D = np.asarray(D, dtype=object)
            a = np.asarray(a, dtype=object)
            b = np.asarray(b, dtype=object)
        res = D @ a - b
        if _any_nonzero(res):
            raise AssertionError(
                f"constraint {src}->{dst} {tag} violated by the given columns")


def nested_pair_check(system: CoefficientSystem, mat: np.ndarray,
                      pairs=None) -> None:
    """Re-verify limit columns against arbitrary nested pairs, solver-free.

    Only meaningful for the downward functors B and K, where the map
    between nested sections is the double-coset formula used edge by edge;
    the dual functors are exercised through their generating moves alone.
    """
    if system.functor not in ("B", "K"):
        raise FamilyError("nested-pair re-verification needs functor B or K")
    fam = system.family
    if pairs is None:
        pairs = fam.nested_pairs()
    for i, j in pairs:
        if system.dims[j] == 0:
            continue
        B = system._b_defres_between(fam.slots[i], fam.slots[j])
        if system.functor == "K":
            D = np.asarray(_restrict_to_kernels(
                B, system._kernels[i], system._kernels[j]), dtype=object)
        else:
            D = np.asarray(B, dtype=object)
        a = mat[system.offsets[i]:system.offsets[i] + system.dims[i], :]
        b = mat[system.offsets[j]:system.offsets[j] + system.dims[j], :]
        if _any_nonzero(D @ a - b):
            raise AssertionError(f"nested pair {i}->{j} violated")


def _direct_limit_basis(system: CoefficientSystem) -> np.ndarray:
    rows = []
    for src, dst, tag in system.edges():
        if system.dims[dst] == 0:
            continue
        D = system.edge_matrix(src, dst, tag)
        so, do = system.offsets[src], system.offsets[dst]
        for r in range(D.shape[0]):
            row = {}
            for c in range(D.shape[1]):
                v = int(D[r, c])
                if v:
                    row[so + c] = row.get(so + c, 0) + v
            key = do + r
            row[key] = row.get(key, 0) - 1
            if row:
                rows.append(row)
    sol = sparse_kernel(system.total, rows)
    basis = obj_zeros(system.total, len(sol))
    for j, s in enumerate(sol):
        for c, v in s.items():
            basis[c, j] = v
    return basis


def _merge_limit_basis(system: CoefficientSystem, dtype) -> np.ndarray:
    solver = MergeLimitSolver(system.dims, dtype=dtype)
    edges = system.edges()
    order = sorted(range(len(edges)),
                   key=lambda e: (-system.dims[edges[e][0]],
                                  edges[e][0], edges[e][1], edges[e][2][0]))
    for e in order:
        src, dst, tag = edges[e]
        if system.dims[dst] == 0:
            continue
        solver.process(src, dst, system.edge_matrix(src, dst, tag))
    total_rank, blocks = solver.finish()
    basis = obj_zeros(system.total, total_rank)
    for i, (coff, v) in enumerate(blocks):
        off = system.offsets[i]
        for r in range(v.shape[0]):
            for c in range(v.shape[1]):
                x = int(v[r, c])
                if x:
                    basis[off + r, coff + c] = x
    return basis


def inverse_limit(system: CoefficientSystem, method: str = "auto",
                  verify: bool = True) -> InverseLimit:
    """Solve the compatibility constraints; basis columns span the limit.

    The merging solver and the direct sparse kernel agree up to basis
    change; both outputs are verified against the raw constraints when
    verify is set.
    """
    if method == "auto":
        method = "merge" if system.total > 600 else "direct"
    if method == "direct":
        basis = _direct_limit_basis(system)
    elif method == "merge":
        try:
            basis = _merge_limit_basis(system, np.int64)
        except _Overflow:
            basis = _merge_limit_basis(system, object)
    else:
        raise ValueError(f"unknown method {method!r}")
    lb = LatticeBuilder(system.total)
    for j in range(basis.shape[1]):
        lb.add(basis[:, j])
    basis = lb.hnf().T.copy()
    if verify:
        residual_check(system, basis)
    return InverseLimit(system, basis)


# ---------------------------------------------------------------------------
# the unit map into the limit and its comparison report


def unit_element(system: CoefficientSystem, f) -> LimitElement:
    """Image in the limit of one value at the whole group."""
    E = np.asarray(system.unit_matrix(), dtype=object)
    vec = E @ np.array([int(x) for x in f], dtype=object)
    return LimitElement(system, vec, check=True)


def limit_coordinates(limit: InverseLimit, mat: np.ndarray):
    """Coordinates of stacked columns in the canonical limit basis.

    Returns (X, ok): basis @ X == mat and ok is true exactly when every
    column lies in the limit lattice.  The echelon shape of the basis
    makes this a single vectorized back-substitution with no entry growth.
    """
    V = np.asarray(mat, dtype=object).copy()
    r = V.shape[1]
    k = limit.rank
    X = obj_zeros(k, r)
    for j in range(k):
        piv = limit.pivots[j]
        d = int(limit.basis[piv, j])
        q = V[piv, :] // d
        rem = V[piv, :] - q * d
        if _any_nonzero(np.asarray(rem, dtype=object)):
            return X, False
        X[j, :] = q
        if not any(int(x) for x in q):
            continue
        col = limit.basis[:, j]
        nz = np.nonzero(col)[0]
        V[nz, :] = V[nz, :] - np.outer(col[nz], q)
    return X, not _any_nonzero(V)


def comparison_report(limit: InverseLimit) -> dict:
    """Exact shape of the unit map F(P) -> limit.

    Expressing the unit columns in the canonical limit basis gives the
    unit map as an integer matrix; its invariant factors decide
    injectivity, surjectivity and the cokernel in one place.
    """
    system = limit.system
    E = system.unit_matrix()
    residual_check(system, np.asarray(E, dtype=object))
    k = limit.rank
    r = E.shape[1]
    X, unit_in_limit = limit_coordinates(limit, E)
    if unit_in_limit:
        rows = []
        for i in range(k):
            row = {j: int(X[i, j]) for j in range(r) if X[i, j]}
            if row:
                rows.append(row)
        inv, rank_unit = sparse_snf_invariants(rows, r)
    else:
        # the unit satisfies every constraint, so this cannot happen for
        # a correctly solved limit; report it rather than assert
        inv, rank_unit = [], 0
    report = {
        "group": system.group.name,
        "family": system.family.label,
        "functor": system.functor,
        "sections": len(system.family.sections),
        "ambient_rank": system.total,
        "limit_rank": k,
        "value_rank": r,
        "unit_in_limit": bool(unit_in_limit),
        "unit_rank": rank_unit,
        "unit_invariants": [int(d) for d in inv],
        "kernel_rank": r - rank_unit,
        "cokernel_torsion": [int(d) for d in inv if d != 1],
        "cokernel_free_rank": k - rank_unit,
    }
    report["is_isomorphism"] = bool(
        unit_in_limit and k == r == rank_unit and not report["cokernel_torsion"])
    return report


def project_between(big: CoefficientSystem, small: CoefficientSystem,
                    mat: np.ndarray) -> np.ndarray:
    """Restrict stacked columns from a larger family to a subfamily."""
    if (big.group is not small.group or big.functor != small.functor):
        raise FamilyError("projection needs the same group and functor")
    rows = []
    for (ts, d) in zip(small.family.sections, small.dims):
        if ts not in big.family.pos:
            raise FamilyError("target family is not contained in the source")
        i = big.family.pos[ts]
        if big.dims[i] != d:
            raise AssertionError("slot dimensions disagree between families")
        off = big.offsets[i]
        rows.extend(range(off, off + d))
    out = mat[rows, :] if mat.ndim == 2 else mat[rows]
    return out


# ---------------------------------------------------------------------------
# colimits of upward systems and the kernel-of-counit probe


def _colimit_relations(system: CoefficientSystem):
    """Sparse relation rows presenting the colimit of an upward system."""
    if system.functor not in ("B", "K"):
        raise FamilyError("colimits are built from functor B or K")
    rows = []
    for src, dst, tag in system.edges():
        if tag[0] == "cover":
            if system.dims[src] == 0 and system.dims[dst] == 0:
                continue
            fam = system.family
            a, b = fam.slots[src], fam.slots[dst]
            B = system._b_indinf_between(b, a)
            if system.functor == "K":
                N = _as_i64(_restrict_to_kernels(
                    B, system._kernels[dst], system._kernels[src]))
            else:
                N = B
            so, do = system.offsets[src], system.offsets[dst]
            for j in range(N.shape[1]):
                row = {do + j: 1}
                for i in range(N.shape[0]):
                    v = int(N[i, j])
                    if v:
                        row[so + i] = row.get(so + i, 0) - v
                rows.append({c: v for c, v in row.items() if v})
        else:
            C = system.edge_matrix(src, dst, tag)
            so, do = system.offsets[src], system.offsets[dst]
            for j in range(C.shape[1]):
                row = {so + j: 1}
                for i in range(C.shape[0]):
                    v = int(C[i, j])
                    if v:
                        row[do + i] = row.get(do + i, 0) - v
                rows.append({c: v for c, v in row.items() if v})
    return rows


def counit_matrix(system: CoefficientSystem) -> np.ndarray:
    """Summed upward maps: product of values -> F(P)."""
    blocks = [system.indinf_to_base(i) for i in range(len(system.dims))]
    if not blocks:
        return np.zeros((system.base_rank, 0), dtype=np.int64)
    return np.hstack(blocks)


def counit_transitivity_check(system: CoefficientSystem) -> None:
    """Upward maps to the base must agree along every generating move."""
    for src, dst, tag in system.edges():
        if tag[0] == "cover":
            fam = system.family
            a, b = fam.slots[src], fam.slots[dst]
            B = system._b_indinf_between(b, a)
            if system.functor == "K":
                N = np.asarray(_restrict_to_kernels(
                    B, system._kernels[dst], system._kernels[src]), dtype=object)
            else:
                N = np.asarray(B, dtype=object)
            lhs = np.asarray(system.indinf_to_base(src), dtype=object) @ N
            rhs = np.asarray(system.indinf_to_base(dst), dtype=object)
        else:
            C = np.asarray(system.edge_matrix(src, dst, tag), dtype=object)
            lhs = np.asarray(system.indinf_to_base(dst), dtype=object) @ C
            rhs = np.asarray(system.indinf_to_base(src), dtype=object)
        if _any_nonzero(lhs - rhs):
            raise AssertionError(
                f"upward maps disagree along {src}->{dst} {tag}")


def counit_kernel_report(system: CoefficientSystem,
                         full_relation_check: bool = True) -> dict:
    """Presentation-level data for the kernel of the counit.

    The counit descends to the colimit because it kills every relation;
    its kernel is finite exactly when the relation rank plus the rank of
    the base value fills the generator count, and then its invariant
    factors are the nontrivial relation invariants.
    """
    if system.functor != "K":
        raise FamilyError("the counit probe is defined for functor K")
    counit_transitivity_check(system)
    U = counit_matrix(system)
    rel = _colimit_relations(system)
    if full_relation_check:
        Uo = np.asarray(U, dtype=object)
        for row in rel:
            img = None
            for c, v in row.items():
                col = Uo[:, c] * v
                img = col if img is None else img + col
            if img is not None and _any_nonzero(img):
                raise AssertionError("counit does not kill a colimit relation")
    invariants, rel_rank = sparse_snf_invariants(rel, system.total)
    base = system.base_kernel
    image = lattice_from_rows(
        base.ambient,
        [np.asarray(base.basis, dtype=object).T @ col
         for col in np.asarray(U, dtype=object).T] if U.size else [])
    surjective = image == base
    finite = rel_rank + system.base_rank == system.total
    m_invariants = [int(d) for d in invariants if d != 1]
    return {
        "group": system.group.name,
        "family": system.family.label,
        "functor": system.functor,
        "generators": system.total,
        "relation_rank": int(rel_rank),
        "base_rank": int(system.base_rank),
        "counit_surjective": bool(surjective),
        "kernel_finite": bool(finite),
        "kernel_invariants": m_invariants,
        "kernel_trivial": bool(finite and not m_invariants),
    }


# ---------------------------------------------------------------------------
# external coefficient systems: interchange format and torsion-capable limits


class ExternalSystem:
    """Coefficient data supplied as explicit presentations and matrices.

    Sections are identified by their member tuples inside a given ambient
    group; maps are stored per edge with a kind tag ("defres", "conj" with
    an optional acting element, or "indinf").  Construction validates that
    every matrix respects the presentations, that any two two-step
    downward paths between the same endpoints agree, and that paired
    conjugations by an element and its inverse compose to the identity.
    """

    def __init__(self, G: FiniteGroup, sections, values, maps, validate=True):
        self.group = G
        self.ana = analysis(G)
        self.sections = []
        for tmem, smem in sections:
            ti = self.ana.index_of(tuple(sorted(int(x) for x in tmem)))
            si = self.ana.index_of(tuple(sorted(int(x) for x in smem)))
            if not self.ana.is_normal_in(si, ti):
                raise FamilyError("external data names a non-section pair")
            self.sections.append((ti, si))
        self.pos = {ts: i for i, ts in enumerate(self.sections)}
        self.values = [AbelianPresentation(v["generators"], v.get("relations"))
                       for v in values]
        self.dims = [v.generators for v in self.values]
        self.offsets = []
        run = 0
        for d in self.dims:
            self.offsets.append(run)
            run += d
        self.total = run
        self.maps = []
        for m in maps:
            src, dst, kind = int(m["src"]), int(m["dst"]), str(m["kind"])
            elem = None
            if kind.startswith("conj"):
                if ":" in kind:
                    elem = int(kind.split(":", 1)[1])
                kind = "conj"
            elif kind not in ("defres", "indinf"):
                raise FamilyError(f"unknown map kind {m['kind']!r}")
            hom = GroupHom(self.values[src], self.values[dst], m["matrix"],
                           check=validate)
            self.maps.append((src, dst, kind, elem, hom))
        if validate:
            self._validate_paths()

    def _hom_is_zero(self, i: int, mat) -> bool:
        val = self.values[i]
        for c in range(mat.shape[1]):
            if _any_nonzero(np.asarray(val.reduce(mat[:, c]), dtype=object)):
                return False
        return True

    def _validate_paths(self):
        down = {}
        for s, d, k, _, h in self.maps:
            if k == "defres":
                down.setdefault((s, d), h)
        for (a, b1), h1 in down.items():
            for (b2, c), h2 in down.items():
                if b2 != b1:
                    continue
                for (a2, b3), h3 in down.items():
                    if a2 != a or b3 == b1:
                        continue
                    h4 = down.get((b3, c))
                    if h4 is None:
                        continue
                    diff = (h2.compose(h1).matrix - h4.compose(h3).matrix)
                    if not self._hom_is_zero(c, diff):
                        raise FamilyError(
                            f"downward paths {a}->{c} fail to commute")
        conj = {}
        for s, d, k, e, h in self.maps:
            if k == "conj" and e is not None:
                conj[(s, d, e)] = h
        for (s, d, e), h in conj.items():
            back = conj.get((d, s, self.group.inv_of(e)))
            if back is None:
                continue
            comp = back.compose(h).matrix
            for j in range(comp.shape[1]):
                comp[j, j] = comp[j, j] - 1
            if not self._hom_is_zero(s, comp):
                raise FamilyError(
                    f"conjugation {s}->{d} is not undone by its inverse")


def external_limit(ext: ExternalSystem) -> AbelianPresentation:
    """Inverse limit of an external system, torsion included.

    Constraints are solved on the free covers with one auxiliary column
    per relation of each target value; the solution lattice is then
    presented modulo the direct sum of all value relations.
    """
    down = [(s, d, h) for s, d, k, _, h in ext.maps if k in ("defres", "conj")]
    rows = []
    naux = 0
    for s, d, hom in down:
        rel = ext.values[d].relations
        aux_base = ext.total + naux
        naux += rel.shape[0]
        so, do = ext.offsets[s], ext.offsets[d]
        M = hom.matrix
        for r in range(M.shape[0]):
            row = {}
            for c in range(M.shape[1]):
                v = int(M[r, c])
                if v:
                    row[so + c] = row.get(so + c, 0) + v
            row[do + r] = row.get(do + r, 0) - 1
            for ri in range(rel.shape[0]):
                v = int(rel[ri, r])
                if v:
                    row[aux_base + ri] = row.get(aux_base + ri, 0) + v
            rows.append({c: v for c, v in row.items() if v})
    sol = sparse_kernel(ext.total + naux, rows)
    lat = lattice_from_rows(
        ext.total,
        [[s.get(c, 0) for c in range(ext.total)] for s in sol])
    basis = lat.basis
    k = basis.shape[0]
    rel_rows = []
    for i, val in enumerate(ext.values):
        off = ext.offsets[i]
        for r in val.relations:
            vec = [0] * ext.total
            for c in range(val.generators):
                vec[off + c] = int(r[c])
            coords = coords_in_hnf(basis, vec) if k else None
            if coords is None:
                if any(vec):
                    raise AssertionError(
                        "a value relation escapes the solution lattice")
                coords = [0] * k
            rel_rows.append(coords)
    return AbelianPresentation(k, rel_rows if rel_rows else None)


def save_system(system: CoefficientSystem, path) -> None:
    """Write a built-in system in the interchange format."""
    ana = system.ana
    sections = []
    for ti, si in system.family.sections:
        sections.append([list(ana.subgroup_members[ti]),
                         list(ana.subgroup_members[si])])
    values = [{"generators": d, "relations": []} for d in system.dims]
    maps = []
    for src, dst, tag in system.edges():
        M = system.edge_matrix(src, dst, tag)
        kind = "defres" if tag[0] == "cover" else f"conj:{tag[1]}"
        maps.append({"src": src, "dst": dst, "kind": kind,
                     "matrix": [[int(x) for x in row] for row in M]})
    payload = {
        "format": "coefficient-system",
        "version": 1,
        "prime": system.group.prime,
        "group_order": system.group.order,
        "group_name": system.group.name,
        "family": system.family.label,
        "functor": system.functor,
        "sections": sections,
        "values": values,
        "maps": maps,
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, sort_keys=True, indent=1)
        fh.write("\n")


def load_external_system(path, G: FiniteGroup,
                         validate: bool = True) -> ExternalSystem:
    with open(path, "r", encoding="utf-8") as fh:
        payload = json.load(fh)
    if payload.get("format") != "coefficient-system":
        raise FamilyError("not a coefficient-system file")
    if int(payload["group_order"]) != G.order or int(payload["prime"]) != G.prime:
        raise FamilyError("file was written for a different group")
    return ExternalSystem(G, payload["sections"], payload["values"],
                          payload["maps"], validate=validate)
