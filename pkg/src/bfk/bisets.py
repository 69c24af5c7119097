"""Finite sets with commuting left and right group actions.

A biset here is fully concrete: an index set 0..size-1, a left action table
for one group and a right action table for another. Composition glues two
bisets over their shared middle group by identifying (v.q, u) with (v, q.u);
the opposite biset swaps the two sides through inverses.

Group-valued sides are always FiniteGroup objects; a subgroup T of P enters
as the quotient of the section (T, 1), whose table is literally P's table
restricted and relabeled. Two sides match when their tables are equal.
"""

from __future__ import annotations

import numpy as np

from .groups import FiniteGroup, GroupAnalysis, Section


class _UnionFind:
    __slots__ = ("parent",)

    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        p = self.parent
        root = x
        while p[root] != root:
            root = p[root]
        while p[x] != root:
            p[x], x = root, p[x]
        return root

    def union(self, a: int, b: int):
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return
        if rb < ra:
            ra, rb = rb, ra
        self.parent[rb] = ra


def _same_group(A: FiniteGroup, B: FiniteGroup) -> bool:
    return A is B or (A.order == B.order and np.array_equal(A.table, B.table))


class ConcreteBiset:
    """left[q, x] and right[x, p] give the two actions on 0..size-1."""

    __slots__ = ("left_group", "right_group", "size", "left", "right", "name")

    def __init__(self, left_group: FiniteGroup, right_group: FiniteGroup,
                 left, right, name: str = ""):
        self.left_group = left_group
        self.right_group = right_group
        self.left = np.asarray(left, dtype=np.int32)
        self.right = np.asarray(right, dtype=np.int32)
        self.size = self.left.shape[1]
        self.name = name
        if self.left.shape != (left_group.order, self.size):
            raise ValueError("left table shape mismatch")
        if self.right.shape != (self.size, right_group.order):
            raise ValueError("right table shape mismatch")

    def validate(self):
        Q, P = self.left_group, self.right_group
        n = self.size
        ident = np.arange(n, dtype=np.int32)
        if not np.array_equal(self.left[0], ident):
            raise ValueError("left identity must act trivially")
        if not np.array_equal(self.right[:, 0], ident):
            raise ValueError("right identity must act trivially")
        # associativity of both actions and their commutation
        for q1 in range(Q.order):
            rows = self.left[:, self.left[q1]]        # rows[q2, x] = q2.(q1.x)
            want = self.left[Q.table[:, q1]]          # (q2 q1).x
            if not np.array_equal(rows, want):
                raise ValueError("left action fails associativity")
            if not np.array_equal(self.right[self.left[q1], :],
                                  self.left[q1, self.right]):
                raise ValueError("actions fail to commute")
        for p1 in range(P.order):
            cols = self.right[self.right[:, p1], :]   # cols[x, p2] = (x.p1).p2
            want = self.right[:, P.table[p1]]         # x.(p1 p2)
            if not np.array_equal(cols, want):
                raise ValueError("right action fails associativity")
        return self

    def __repr__(self):
        return (f"ConcreteBiset({self.name or 'biset'}: size={self.size}, "
                f"left=|{self.left_group.order}|, right=|{self.right_group.order}|)")


# ---------------------------------------------------------------------------
# constructors

def identity_biset(G: FiniteGroup) -> ConcreteBiset:
    return ConcreteBiset(G, G, G.table, G.table, name=f"id[{G.name}]")


def _coset_ids(P: FiniteGroup, members, side: str):
    """Index cosets of a subgroup by ascending least representative.

    side 'left' indexes cosets xS, side 'right' indexes cosets Sx.
    Returns (ids array over P, reps list).
    """
    arr = np.asarray(sorted(members), dtype=np.int32)
    ids = np.full(P.order, -1, dtype=np.int32)
    reps = []
    for x in range(P.order):
        if ids[x] >= 0:
            continue
        coset = P.table[x, arr] if side == "left" else P.table[arr, x]
        ids[coset] = len(reps)
        reps.append(x)
    return ids, reps


def indinf_biset(sec: Section) -> ConcreteBiset:
    """Left cosets of the bottom of sec in the parent, as a
    (parent, quotient)-biset. Composing with it induces from the top after
    inflating from the quotient."""
    P = sec.parent
    ids, reps = _coset_ids(P, sec.bottom.members, "left")
    reps_arr = np.asarray(reps, dtype=np.int32)
    left = ids[P.table[:, reps_arr]]
    qreps = np.asarray([sec.reps[t] for t in range(sec.group.order)],
                       dtype=np.int32)
    right = ids[P.table[np.ix_(reps_arr, qreps)]]
    return ConcreteBiset(P, sec.group, left, right,
                         name=f"indinf[{sec.key}]")


def defres_biset(sec: Section) -> ConcreteBiset:
    """Right cosets of the bottom of sec, as a (quotient, parent)-biset.
    Composing with it restricts to the top then deflates to the quotient."""
    P = sec.parent
    ids, reps = _coset_ids(P, sec.bottom.members, "right")
    reps_arr = np.asarray(reps, dtype=np.int32)
    qreps = np.asarray([sec.reps[t] for t in range(sec.group.order)],
                       dtype=np.int32)
    left = ids[P.table[np.ix_(qreps, reps_arr)]]
    right = ids[P.table[reps_arr, :]]
    return ConcreteBiset(sec.group, P, left, right,
                         name=f"defres[{sec.key}]")


def restriction_biset(ana: GroupAnalysis, members) -> ConcreteBiset:
    sec = ana.section_at(members, (0,))
    return defres_biset(sec)


def induction_biset(ana: GroupAnalysis, members) -> ConcreteBiset:
    sec = ana.section_at(members, (0,))
    return indinf_biset(sec)


def inflation_biset(ana: GroupAnalysis, sec: Section) -> ConcreteBiset:
    """(top-as-group, quotient)-biset: the quotient with the top acting
    through the projection on the left."""
    tsec = ana.section_at(sec.top.members, (0,))
    T, q = tsec.group, sec.group
    lift = np.asarray(tsec.reps, dtype=np.int32)
    qreps = np.asarray([sec.reps[t] for t in range(q.order)], dtype=np.int32)
    left = sec.proj[sec.parent.table[np.ix_(lift, qreps)]]
    return ConcreteBiset(T, q, left, q.table, name=f"inf[{sec.key}]")


def deflation_biset(ana: GroupAnalysis, sec: Section) -> ConcreteBiset:
    """(quotient, top-as-group)-biset: the quotient with the top acting
    through the projection on the right."""
    tsec = ana.section_at(sec.top.members, (0,))
    T, q = tsec.group, sec.group
    lift = np.asarray(tsec.reps, dtype=np.int32)
    qreps = np.asarray([sec.reps[t] for t in range(q.order)], dtype=np.int32)
    right = sec.proj[sec.parent.table[np.ix_(qreps, lift)]]
    return ConcreteBiset(q, T, q.table, right, name=f"def[{sec.key}]")


def iso_biset(src: FiniteGroup, dst: FiniteGroup, f) -> ConcreteBiset:
    """(dst, src)-biset carried by a group isomorphism f: src -> dst."""
    f = np.asarray(f, dtype=np.int32)
    if sorted(f.tolist()) != list(range(dst.order)) or src.order != dst.order:
        raise ValueError("f must be a bijection onto dst")
    if not np.array_equal(dst.table[np.ix_(f, f)], f[src.table]):
        raise ValueError("f is not a homomorphism")
    right = dst.table[:, f]
    return ConcreteBiset(dst, src, dst.table, right, name="iso")


def section_transport(ana: GroupAnalysis, sec: Section, u: int):
    """Conjugate a section by u: returns the target section and the
    (target-quotient, source-quotient)-biset carried by conjugation."""
    G = ana.group
    tmem = ana.conjugate_members(u, sec.top.members)
    smem = ana.conjugate_members(u, sec.bottom.members)
    target = ana.section_at(tmem, smem)
    ui = G.inv_of(u)
    f = np.array([int(target.proj[G.mul(G.mul(u, sec.reps[t]), ui)])
                  for t in range(sec.group.order)], dtype=np.int32)
    return target, iso_biset(sec.group, target.group, f)


def opposite(U: ConcreteBiset) -> ConcreteBiset:
    Q, P = U.left_group, U.right_group
    left = U.right[:, P.inv].T.copy()
    right = U.left[Q.inv, :].T.copy()
    return ConcreteBiset(P, Q, left, right, name=f"op[{U.name}]")


def compose(V: ConcreteBiset, U: ConcreteBiset, return_pairs: bool = False):
    """V over (R,Q) and U over (Q,P) give the (R,P)-biset of Q-orbits on
    pairs, identifying (v.q, u) with (v, q.u).

    With return_pairs, also return the (V.size, U.size) array sending each
    pair to the index of its orbit in the composite."""
    if not _same_group(V.right_group, U.left_group):
        raise ValueError("middle groups do not match")
    R, P = V.left_group, U.right_group
    nV, nU = V.size, U.size
    uf = _UnionFind(nV * nU)
    for q in U.left_group.generators():
        vq = V.right[:, q]
        qu = U.left[q, :]
        for v in range(nV):
            a = int(vq[v]) * nU
            b = v * nU
            for u in range(nU):
                uf.union(a + u, b + int(qu[u]))
    roots = sorted({uf.find(x) for x in range(nV * nU)})
    index = {r: i for i, r in enumerate(roots)}
    size = len(roots)
    left = np.empty((R.order, size), dtype=np.int32)
    right = np.empty((size, P.order), dtype=np.int32)
    for i, r in enumerate(roots):
        v, u = divmod(r, nU)
        for g in range(R.order):
            left[g, i] = index[uf.find(int(V.left[g, v]) * nU + u)]
        for p in range(P.order):
            right[i, p] = index[uf.find(v * nU + int(U.right[u, p]))]
    W = ConcreteBiset(R, P, left, right, name=f"({V.name})o({U.name})")
    if not return_pairs:
        return W
    pairs = np.empty((nV, nU), dtype=np.int32)
    for v in range(nV):
        base = v * nU
        for u in range(nU):
            pairs[v, u] = index[uf.find(base + u)]
    return W, pairs


def left_transporter(U: ConcreteBiset, u: int, s_members) -> list:
    """^uS: all y in the left group with y.u = u.s for some s in S.

    For a subgroup S of the right group this is a subgroup of the left
    group; ^u{1} is the left stabilizer of u."""
    us = {int(U.right[u, s]) for s in s_members}
    return [y for y in range(U.left_group.order) if int(U.left[y, u]) in us]


def right_transporter(U: ConcreteBiset, t_members, u: int) -> list:
    """T^u: all x in the right group with t.u = u.x for some t in T."""
    tu = {int(U.left[t, u]) for t in t_members}
    return [x for x in range(U.right_group.order) if int(U.right[u, x]) in tu]


def double_coset_reps(U: ConcreteBiset, t_members) -> list:
    """Least point index in each orbit of T x (right group), ascending."""
    uf = _UnionFind(U.size)
    for t in t_members:
        row = U.left[t, :]
        for x in range(U.size):
            uf.union(x, int(row[x]))
    for p in U.right_group.generators():
        col = U.right[:, p]
        for x in range(U.size):
            uf.union(x, int(col[x]))
    return sorted({uf.find(x) for x in range(U.size)})


def left_quotient_biset(U: ConcreteBiset, c_members) -> ConcreteBiset:
    """Collapse points into orbits of a normal subgroup C of the left group.

    The left action descends because C is normal; the right action descends
    because the two actions commute. The left group object is kept, now
    acting through the quotient."""
    Q = U.left_group
    cset = set(int(c) for c in c_members)
    if 0 not in cset:
        raise ValueError("subgroup must contain the identity")
    for a in cset:
        if Q.inv_of(a) not in cset or any(Q.mul(a, b) not in cset for b in cset):
            raise ValueError("members do not form a subgroup")
    for g in Q.generators():
        gi = Q.inv_of(g)
        if any(Q.mul(Q.mul(g, c), gi) not in cset for c in cset):
            raise ValueError("subgroup is not normal in the left group")
    c_arr = np.asarray(sorted(cset), dtype=np.int32)
    ids = np.full(U.size, -1, dtype=np.int32)
    reps = []
    for x in range(U.size):
        if ids[x] >= 0:
            continue
        ids[U.left[c_arr, x]] = len(reps)
        reps.append(x)
    reps_arr = np.asarray(reps, dtype=np.int32)
    left = ids[U.left[:, reps_arr]]
    right = ids[U.right[reps_arr, :]]
    return ConcreteBiset(Q, U.right_group, left, right, name=f"quot[{U.name}]")


# ---------------------------------------------------------------------------
# orbit structure

def left_orbits(U: ConcreteBiset):
    """Orbits of the left action alone: (sorted orbit, stabilizer members
    of the representative), representative = least index."""
    Q = U.left_group
    out = []
    seen = np.zeros(U.size, dtype=bool)
    for x in range(U.size):
        if seen[x]:
            continue
        col = U.left[:, x]
        orbit = sorted(set(col.tolist()))
        seen[orbit] = True
        stab = tuple(int(q) for q in range(Q.order) if col[q] == x)
        out.append((orbit, stab))
    return out


def orbit_decompose(U: ConcreteBiset):
    """Two-sided orbits with their stabilizer pairs.

    Each entry: (rep, sorted orbit, stab) where stab is the sorted tuple of
    codes q * |P| + p over pairs with q.rep.p == rep.
    """
    Q, P = U.left_group, U.right_group
    nP = P.order
    seen = np.zeros(U.size, dtype=bool)
    out = []
    for x in range(U.size):
        if seen[x]:
            continue
        # all q.x.p in one sweep
        block = U.left[:, U.right[x, :]]        # block[q, p] = q.(x.p)
        orbit = sorted(set(block.ravel().tolist()))
        seen[orbit] = True
        qs, ps = np.nonzero(block == x)
        stab = tuple(sorted(int(q) * nP + int(p) for q, p in zip(qs, ps)))
        out.append((x, orbit, stab))
    return out


def _conj_pair_code(Q: FiniteGroup, P: FiniteGroup, code: int,
                    a: int, b: int) -> int:
    nP = P.order
    q, p = divmod(code, nP)
    q2 = Q.mul(Q.mul(a, q), Q.inv_of(a))
    p2 = P.mul(P.mul(P.inv_of(b), p), b)
    return q2 * nP + p2


def canonical_stabilizer(Q: FiniteGroup, P: FiniteGroup, stab) -> tuple:
    """Least tuple in the conjugation orbit of a pair-stabilizer, so equal
    labels mean conjugate stabilizers and hence isomorphic orbits."""
    start = tuple(sorted(stab))
    gens = [(a, 0) for a in Q.generators()] + [(0, b) for b in P.generators()]
    best = start
    frontier = [start]
    seen = {start}
    while frontier:
        nxt = []
        for cur in frontier:
            for a, b in gens:
                img = tuple(sorted(_conj_pair_code(Q, P, c, a, b) for c in cur))
                if img not in seen:
                    seen.add(img)
                    nxt.append(img)
                    if img < best:
                        best = img
        frontier = nxt
    return best


def orbit_labels(U: ConcreteBiset) -> list:
    """Multiset of (size, canonical stabilizer) over the orbits of U."""
    out = []
    for _, orbit, stab in orbit_decompose(U):
        out.append((len(orbit),
                    canonical_stabilizer(U.left_group, U.right_group, stab)))
    return sorted(out)


def is_biset_iso(U: ConcreteBiset, V: ConcreteBiset) -> bool:
    if not (_same_group(U.left_group, V.left_group)
            and _same_group(U.right_group, V.right_group)):
        raise ValueError("bisets over different group pairs")
    if U.size != V.size:
        return False
    return orbit_labels(U) == orbit_labels(V)
