"""Transfer maps between limits: retractions, gluing, adjunctions, actions.

Everything here moves values across groups rather than within one system:
the Moebius-weighted retraction from a limit back to the value at the
whole group, reassembly of an element from its proper quotients, the two
adjunction directions between groupwise maps and maps into limits, and
the action of a concrete biset on limit elements.
"""

from __future__ import annotations

import numpy as np

from .groups import FiniteGroup, analysis, product_members
from .bisets import ConcreteBiset, opposite
from .zlinalg import obj_zeros
from .limits import (CoefficientSystem, FamilyError, InverseLimit,
                     _any_nonzero, _restrict_to_kernels, coefficient_system,
                     limit_coordinates)


# ---------------------------------------------------------------------------
# Moebius retraction onto the value at the whole group


def _upward_to_base(system: CoefficientSystem, i: int) -> np.ndarray:
    """Transfer map value(i) -> F(P) for the functors that have one."""
    if system.functor in ("B", "K"):
        return np.asarray(system.indinf_to_base(i), dtype=object)
    if system.functor == "Kdual":
        ksys = coefficient_system(system.group, system.family.label, "K")
        return np.asarray(ksys.defres_from_base(i), dtype=object).T.copy()
    raise FamilyError("no upward transfer for functor Bdual")


def retraction_matrix(system: CoefficientSystem, reading: str = "A") -> np.ndarray:
    """Weighted sum of upward transfers, one term per family section.

    Terms are weighted by |S| times the Moebius value of the interval
    [S, T] in the subgroup poset.  Reading "A" takes both the component
    and the transfer at the shifted section (S, frattini(T)); reading "B"
    takes them at (T, S) itself.  Reading "A" is the one whose composite
    with the unit is multiplication by the group order; "B" is kept so
    the failure is demonstrable.
    """
    if system.family.label != "E":
        raise FamilyError("the retraction is defined over the family E")
    ana = system.ana
    fam = system.family
    r = system.base_rank
    sig = obj_zeros(r, system.total)
    for (ti, si) in fam.sections:
        mu = ana.moebius(si, ti)
        if mu == 0:
            continue
        coeff = len(ana.subgroup_members[si]) * mu
        if reading == "A":
            j = fam.pos[(si, ana.frattini_of(ti))]
        elif reading == "B":
            j = fam.pos[(ti, si)]
        else:
            raise ValueError(f"unknown reading {reading!r}")
        up = _upward_to_base(system, j)
        off = system.offsets[j]
        d = system.dims[j]
        if d == 0:
            continue
        sig[:, off:off + d] = sig[:, off:off + d] + coeff * up
    return sig


def retraction_identity_holds(limit: InverseLimit, reading: str = "A") -> bool:
    """Does unit-after-retraction scale the limit by the group order?"""
    system = limit.system
    sig = retraction_matrix(system, reading)
    E = np.asarray(system.unit_matrix(), dtype=object)
    lhs = E @ (sig @ limit.basis)
    rhs = system.group.order * limit.basis
    return not _any_nonzero(lhs - rhs)


def subfamily_retraction_matrix(system: CoefficientSystem) -> np.ndarray:
    """Retraction from a limit over a family containing E, via restriction.

    Composes the E-retraction with the projection that forgets the
    sections outside E; the identity composite then holds on the image of
    the projection whenever it holds over E.
    """
    esys = coefficient_system(system.group, "E", system.functor)
    sig_e = retraction_matrix(esys, "A")
    out = obj_zeros(system.base_rank, system.total)
    for idx, ts in enumerate(esys.family.sections):
        j = system.family.pos.get(ts)
        if j is None:
            raise FamilyError("family does not contain every E-section")
        d = system.dims[j]
        if d != esys.dims[idx]:
            raise AssertionError("slot dimensions disagree between families")
        out[:, system.offsets[j]:system.offsets[j] + d] = \
            sig_e[:, esys.offsets[idx]:esys.offsets[idx] + d]
    return out


# ---------------------------------------------------------------------------
# assembling an element of B(H) from values on its proper quotients


def assemble_from_quotients(H: FiniteGroup, quotient_values: dict) -> np.ndarray:
    """Moebius-weighted inflation sum over the nontrivial normal subgroups.

    quotient_values maps each subgroup index J > 1 of the elementary
    abelian group H to a vector over the transitive basis of H/J, written
    on the intermediate-subgroup classes of the section (H, J).  The
    result lives on the transitive basis of H itself.  No compatibility
    between the inputs is assumed or implied.
    """
    if not (H.is_abelian and H.exponent in (1, H.prime)):
        raise FamilyError("assembly needs an elementary abelian group")
    sysb = coefficient_system(H, "E", "B")
    ana = sysb.ana
    fam = sysb.family
    top = ana.n_sub - 1
    out = obj_zeros(sysb.base_rank, 1)[:, 0]
    for j_idx in range(ana.n_sub):
        if len(ana.subgroup_members[j_idx]) == 1:
            continue
        vec = quotient_values[j_idx]
        slot = fam.pos[(top, j_idx)]
        up = np.asarray(sysb.indinf_to_base(slot), dtype=object)
        mu = ana.moebius(0, j_idx)
        term = up @ np.array([int(x) for x in vec], dtype=object)
        out = out - mu * term
    return out


# ---------------------------------------------------------------------------
# adjunction between groupwise maps and maps into limits


class NaturalityError(ValueError):
    """Raised when a per-section family fails an edge compatibility.

    witness names the failing move as (source index, target index, tag).
    """

    def __init__(self, message: str, witness):
        super().__init__(message)
        self.witness = witness


def check_section_naturality(sys_f: CoefficientSystem, sys_g: CoefficientSystem,
                             components) -> None:
    """components[i]: F-value(i) -> G-value(i) must commute with every move."""
    for src, dst, tag in sys_f.edges():
        Df = np.asarray(sys_f.edge_matrix(src, dst, tag), dtype=object)
        Dg = np.asarray(sys_g.edge_matrix(src, dst, tag), dtype=object)
        lhs = Dg @ np.asarray(components[src], dtype=object)
        rhs = np.asarray(components[dst], dtype=object) @ Df
        if _any_nonzero(lhs - rhs):
            raise NaturalityError(
                f"components are not natural along {src}->{dst}", (src, dst, tag))


def adjunction_plus(sys_f: CoefficientSystem, sys_g: CoefficientSystem,
                    components) -> np.ndarray:
    """Groupwise map to limit-valued map: compose components with descent.

    components[i] acts on the value of F at section i and is validated
    for naturality first.  The result sends F at the whole group into the
    product of G-values; its columns land in the limit of G because the
    components commute with every generating move.
    """
    if sys_f.family is not sys_g.family:
        raise FamilyError("both functors must live over one section family")
    check_section_naturality(sys_f, sys_g, components)
    blocks = []
    for i in range(len(sys_f.dims)):
        down = np.asarray(sys_f.defres_from_base(i), dtype=object)
        blocks.append(np.asarray(components[i], dtype=object) @ down)
    if not blocks:
        return obj_zeros(0, sys_f.base_rank)
    return np.vstack(blocks)


def adjunction_minus(sys_g: CoefficientSystem, stacked: np.ndarray) -> np.ndarray:
    """Limit-valued map to groupwise map: read the whole-group component.

    The family must contain the section (P, 1); the block of the stacked
    matrix at that section is the groupwise map, in the coordinates of
    the value at (P, 1), which equal those of the value at P itself.
    """
    ana = sys_g.ana
    top = ana.n_sub - 1
    bottom = 0
    pos = sys_g.family.pos.get((top, bottom))
    if pos is None:
        raise FamilyError("family does not contain the whole-group section")
    off = sys_g.offsets[pos]
    return np.asarray(stacked[off:off + sys_g.dims[pos], :], dtype=object)


# ---------------------------------------------------------------------------
# action of a concrete biset on limit elements


def _biset_double_coset_points(U: ConcreteBiset, t_members) -> list:
    """Least points of the orbits of T x right-group acting on U's points."""
    n = U.size
    seen = np.zeros(n, dtype=bool)
    reps = []
    p_order = U.right_group.order
    for x0 in range(n):
        if seen[x0]:
            continue
        reps.append(x0)
        stack = [x0]
        seen[x0] = True
        while stack:
            x = stack.pop()
            for t in t_members:
                y = int(U.left[t, x])
                if not seen[y]:
                    seen[y] = True
                    stack.append(y)
            for p in range(p_order):
                y = int(U.right[x, p])
                if not seen[y]:
                    seen[y] = True
                    stack.append(y)
    return reps


def _transport_subgroup(U: ConcreteBiset, x: int, members) -> tuple:
    """Elements of the right group glued to the given left subgroup at x."""
    shifted = {int(U.left[t, x]) for t in members}
    return tuple(p for p in range(U.right_group.order)
                 if int(U.right[x, p]) in shifted)


def _left_transport(U: ConcreteBiset, x: int, t_members, w_members) -> tuple:
    """Members t of T with t.x inside x.W, for W in the right group."""
    xw = {int(U.right[x, w]) for w in w_members}
    return tuple(t for t in t_members if int(U.left[t, x]) in xw)


def act_on_limit_matrix(U: ConcreteBiset, sys_q: CoefficientSystem,
                        sys_p: CoefficientSystem) -> np.ndarray:
    """Matrix of the biset action from one group's limit to another's.

    U is a biset with left group matching sys_q and right group matching
    sys_p; both systems carry the same functor over the same family
    label.  For the downward functors each target section accumulates one
    term per double coset, read off a source section of the right group;
    the dual functor acts through the opposite biset, transposed.

    Transposition reverses the downward compatibilities, so for the dual
    functors the image of a limit element is again a limit element only
    when the biset is invertible; on stacked values the matrix is always
    the right one.
    """
    if sys_q.family.label != sys_p.family.label:
        raise FamilyError("action needs one family label on both sides")
    if sys_q.functor != sys_p.functor:
        raise FamilyError("action needs one functor on both sides")
    if U.left_group is not sys_q.group or U.right_group is not sys_p.group:
        raise FamilyError("biset groups do not match the systems")
    functor = sys_q.functor
    if functor in ("Kdual", "Bdual"):
        base = "K" if functor == "Kdual" else "B"
        kp = coefficient_system(sys_p.group, sys_p.family.label, base)
        kq = coefficient_system(sys_q.group, sys_q.family.label, base)
        return act_on_limit_matrix(opposite(U), kp, kq).T.copy()
    ana_q = sys_q.ana
    ana_p = sys_p.ana
    A = obj_zeros(sys_q.total, sys_p.total)
    for qi, (ti, si) in enumerate(sys_q.family.sections):
        if sys_q.dims[qi] == 0:
            continue
        t_mem = ana_q.subgroup_members[ti]
        s_mem = ana_q.subgroup_members[si]
        slot_q = sys_q.family.slots[qi]
        for x in _biset_double_coset_points(U, t_mem):
            tx = ana_p.index_of(_transport_subgroup(U, x, t_mem))
            sx = ana_p.index_of(_transport_subgroup(U, x, s_mem))
            pj = sys_p.family.pos.get((tx, sx))
            # section families are closed under the transported sections,
            # so a missing slot indicates corrupted biset data
            if pj is None:
                raise AssertionError("transported section left the family")
            if sys_p.dims[pj] == 0:
                continue
            slot_p = sys_p.family.slots[pj]
            B = np.zeros((slot_q.dim, slot_p.dim), dtype=np.int64)
            for j, w in enumerate(slot_p.classes):
                moved = _left_transport(U, x, t_mem, ana_p.subgroup_members[w])
                tgt = product_members(ana_q.group, moved, s_mem)
                B[slot_q.class_pos[ana_q.index_of(tgt)], j] += 1
            if functor == "K":
                blk = _restrict_to_kernels(B, sys_p._kernels[pj],
                                           sys_q._kernels[qi])
            else:
                blk = np.asarray(B, dtype=object)
            ro, co = sys_q.offsets[qi], sys_p.offsets[pj]
            A[ro:ro + sys_q.dims[qi], co:co + sys_p.dims[pj]] = \
                A[ro:ro + sys_q.dims[qi], co:co + sys_p.dims[pj]] + blk
    return A


def act_on_limit(U: ConcreteBiset, sys_q: CoefficientSystem,
                 limit_p: InverseLimit, limit_q: InverseLimit):
    """Apply the biset action to a limit basis; images get q-coordinates.

    Returns (X, ok): coordinates of the image columns in the target limit
    basis, with ok false when some image escapes the target lattice.
    """
    A = act_on_limit_matrix(U, sys_q, limit_p.system)
    img = A @ limit_p.basis
    return limit_coordinates(limit_q, img)
