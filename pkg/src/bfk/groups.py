"""Finite p-groups as explicit multiplication tables.

Element 0 is always the identity. Everything downstream (subgroup lattices,
sections, quotients, classification) lives here, built lazily per group and
guarded by a lock so threaded callers share one analysis.
"""

from __future__ import annotations

import hashlib
import threading
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np


class GroupTooLarge(ValueError):
    """Order exceeds the configured enumeration bound."""


class DescriptorError(ValueError):
    """Malformed or unsupported group descriptor."""


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def default_order_bound(p: int) -> int:
    # p = 3 is the primary regime; larger primes get a reduced default
    return p ** 4 if p == 3 else p ** 3


def _check_prime_power(order: int, p: int) -> int:
    k = 0
    n = order
    while n % p == 0:
        n //= p
        k += 1
    if n != 1:
        raise ValueError(f"order {order} is not a power of {p}")
    return k


class FiniteGroup:
    """Immutable finite group on points 0..order-1 given by its full table."""

    __slots__ = ("prime", "order", "table", "inv", "name",
                 "_abelian", "_elt_order", "_hash_hex", "_lock", "_analysis",
                 "_gens")

    def __init__(self, prime: int, table, name: str = "", validate: bool = True,
                 check_associativity: bool = False):
        if prime % 2 == 0 or not is_prime(prime):
            raise ValueError(f"prime must be an odd prime, got {prime}")
        tbl = np.asarray(table, dtype=np.int32)
        if tbl.ndim != 2 or tbl.shape[0] != tbl.shape[1]:
            raise ValueError("table must be square")
        n = tbl.shape[0]
        _check_prime_power(n, prime)
        self.prime = prime
        self.order = n
        self.table = tbl
        self.name = name or f"group-of-order-{n}"
        if validate:
            if tbl.min() < 0 or tbl.max() >= n:
                raise ValueError("table entries out of range")
            ident = np.arange(n, dtype=np.int32)
            if not (np.array_equal(tbl[0], ident) and np.array_equal(tbl[:, 0], ident)):
                raise ValueError("element 0 must be the identity")
            for i in range(n):
                if len(set(tbl[i].tolist())) != n:
                    raise ValueError("rows must be permutations")
        inv = np.empty(n, dtype=np.int32)
        for i in range(n):
            hits = np.nonzero(tbl[i] == 0)[0]
            if len(hits) != 1:
                raise ValueError("missing or non-unique inverse")
            inv[i] = hits[0]
        self.inv = inv
        if check_associativity:
            left = tbl[tbl, :]            # left[i,j,k] = (ij)k
            right = tbl[:, tbl]           # right[i,j,k] = i(jk)
            if not np.array_equal(left, right):
                raise ValueError("table is not associative")
        self._abelian = None
        self._elt_order = None
        self._hash_hex = None
        self._lock = threading.Lock()
        self._analysis = None
        self._gens = None

    def mul(self, a: int, b: int) -> int:
        return int(self.table[a, b])

    def inv_of(self, a: int) -> int:
        return int(self.inv[a])

    def power(self, a: int, k: int) -> int:
        if k < 0:
            a, k = self.inv_of(a), -k
        acc = 0
        for _ in range(k):
            acc = int(self.table[acc, a])
        return acc

    @property
    def is_abelian(self) -> bool:
        if self._abelian is None:
            self._abelian = bool(np.array_equal(self.table, self.table.T))
        return self._abelian

    def element_orders(self) -> np.ndarray:
        if self._elt_order is None:
            out = np.empty(self.order, dtype=np.int32)
            for g in range(self.order):
                x, k = int(self.table[0, g]), 1
                while x != 0:
                    x = int(self.table[x, g])
                    k += 1
                out[g] = k
            self._elt_order = out
        return self._elt_order

    @property
    def exponent(self) -> int:
        return int(self.element_orders().max())

    def generators(self) -> tuple:
        """A small generating set, greedily chosen, deterministic."""
        if self._gens is None:
            gens: list[int] = []
            have = {0}
            for g in range(self.order):
                if g not in have:
                    gens.append(g)
                    have = set(_closure(self.table, gens))
                    if len(have) == self.order:
                        break
            self._gens = tuple(gens)
        return self._gens

    def content_hash(self) -> str:
        if self._hash_hex is None:
            h = hashlib.sha256()
            h.update(f"p={self.prime};n={self.order};".encode())
            h.update(self.table.astype(np.int32).tobytes())
            self._hash_hex = h.hexdigest()
        return self._hash_hex

    def __repr__(self):
        return f"FiniteGroup({self.name}, order={self.order})"


@dataclass(frozen=True)
class Subgroup:
    parent: FiniteGroup
    members: tuple

    @property
    def order(self) -> int:
        return len(self.members)

    def __repr__(self):
        return f"Subgroup(order={self.order}, members={self.members})"


@dataclass(frozen=True)
class SectionClassLabel:
    kind: str                 # "elab" | "xsp" | "other"
    rank: int | None          # log_p order for elab, else None

    @property
    def is_elementary_abelian(self) -> bool:
        return self.kind == "elab"

    @property
    def is_extraspecial_exp_p(self) -> bool:
        return self.kind == "xsp"


class Section:
    """A pair S normal-in T of subgroups of one parent, with its quotient.

    quotient elements are cosets of S in T, ordered by least parent member,
    so element 0 is the coset S. proj maps parent elements of T to quotient
    indices (-1 outside T); reps holds the least member of each coset.
    """

    __slots__ = ("top", "bottom", "group", "proj", "reps", "label", "key")

    def __init__(self, top: Subgroup, bottom: Subgroup, group: FiniteGroup,
                 proj: np.ndarray, reps: list[int], label: SectionClassLabel):
        self.top = top
        self.bottom = bottom
        self.group = group
        self.proj = proj
        self.reps = reps
        self.label = label
        self.key = (top.members, bottom.members)

    @property
    def parent(self) -> FiniteGroup:
        return self.top.parent

    def preimage(self, quotient_members: Iterable[int]) -> tuple:
        want = set(int(m) for m in quotient_members)
        return tuple(t for t in self.top.members if int(self.proj[t]) in want)

    def image_members(self, parent_members: Iterable[int]) -> tuple:
        out = {int(self.proj[int(m)]) for m in parent_members
               if self.proj[int(m)] >= 0}
        return tuple(sorted(out))

    def __repr__(self):
        return (f"Section(|T|={self.top.order}, |S|={self.bottom.order}, "
                f"label={self.label.kind}:{self.label.rank})")


# ---------------------------------------------------------------------------
# constructors

def trivial_group(p: int = 3) -> FiniteGroup:
    return FiniteGroup(p, [[0]], name="C1")


def cyclic_group(n: int, p: int | None = None) -> FiniteGroup:
    if n == 1:
        if p is None:
            raise DescriptorError("order-1 cyclic group needs a prime, use elab:p:0")
        return trivial_group(p)
    if p is None:
        p = min(q for q in range(2, n + 1) if n % q == 0 and is_prime(q))
    _check_prime_power(n, p)
    idx = np.arange(n, dtype=np.int32)
    table = (idx[:, None] + idx[None, :]) % n
    return FiniteGroup(p, table, name=f"C{n}")


def elementary_abelian_group(p: int, rank: int) -> FiniteGroup:
    n = p ** rank
    if rank == 0:
        return trivial_group(p)
    idx = np.arange(n, dtype=np.int64)
    digits = np.stack([(idx // p ** i) % p for i in range(rank)], axis=1)
    sums = (digits[:, None, :] + digits[None, :, :]) % p
    table = sums @ (p ** np.arange(rank, dtype=np.int64))
    name = f"C{p}" + f"xC{p}" * (rank - 1)
    return FiniteGroup(p, table.astype(np.int32), name=name)


def extraspecial_group(p: int) -> FiniteGroup:
    """The nonabelian group of order p^3 and exponent p (upper unitriangular
    3x3 matrices over the field with p elements)."""
    n = p ** 3
    def enc(a, b, c):
        return a + p * b + p * p * c
    table = np.empty((n, n), dtype=np.int32)
    for a1 in range(p):
        for b1 in range(p):
            for c1 in range(p):
                i = enc(a1, b1, c1)
                for a2 in range(p):
                    for b2 in range(p):
                        for c2 in range(p):
                            table[i, enc(a2, b2, c2)] = enc(
                                (a1 + a2) % p, (b1 + b2) % p,
                                (c1 + c2 + a1 * b2) % p)
    return FiniteGroup(p, table, name=f"X{n}")


def direct_product(*factors: FiniteGroup) -> FiniteGroup:
    if len(factors) < 2:
        raise ValueError("need at least two factors")
    acc = factors[0]
    for g in factors[1:]:
        if g.prime != acc.prime:
            raise ValueError("factors must share the prime")
        na, nb = acc.order, g.order
        ta = acc.table.astype(np.int64)
        tb = g.table.astype(np.int64)
        table = (ta[:, None, :, None] * nb + tb[None, :, None, :]).reshape(na * nb, na * nb)
        acc = FiniteGroup(acc.prime, table.astype(np.int32),
                          name=f"{acc.name}x{g.name}")
    return acc


def group_from_table(p: int, table, name: str = "ingested") -> FiniteGroup:
    return FiniteGroup(p, table, name=name, validate=True, check_associativity=True)


# ---------------------------------------------------------------------------
# descriptors and the group file format

def parse_descriptor(desc: str, p_default: int | None = None) -> FiniteGroup:
    """Build a group from a symbolic descriptor.

    Grammar: cyclic:<order> | elab:<p>:<rank> | xsp:<p> | prod:<d1>,<d2>[,...]
    (prod arguments may not themselves contain commas).
    """
    desc = desc.strip()
    if desc.startswith("prod:"):
        parts = desc[len("prod:"):].split(",")
        if len(parts) < 2:
            raise DescriptorError(f"prod needs at least two factors: {desc!r}")
        return direct_product(*(parse_descriptor(q, p_default) for q in parts))
    bits = desc.split(":")
    try:
        if bits[0] == "cyclic" and len(bits) == 2:
            return cyclic_group(int(bits[1]), p_default if bits[1] == "1" else None)
        if bits[0] == "elab" and len(bits) == 3:
            return elementary_abelian_group(int(bits[1]), int(bits[2]))
        if bits[0] == "xsp" and len(bits) == 2:
            return extraspecial_group(int(bits[1]))
    except (ValueError, DescriptorError) as e:
        raise DescriptorError(f"bad descriptor {desc!r}: {e}") from e
    raise DescriptorError(f"unrecognized descriptor {desc!r}")


def save_group_file(G: FiniteGroup, path) -> None:
    with open(path, "w") as fh:
        fh.write(f"p {G.prime}\n")
        fh.write(f"order {G.order}\n")
        for row in G.table:
            fh.write(" ".join(str(int(x)) for x in row) + "\n")


def load_group_file(path, name: str | None = None) -> FiniteGroup:
    with open(path) as fh:
        lines = [ln.strip() for ln in fh if ln.strip()]
    if len(lines) < 2 or not lines[0].startswith("p ") or not lines[1].startswith("order "):
        raise DescriptorError(f"{path}: expected 'p <prime>' then 'order <n>' headers")
    p = int(lines[0].split()[1])
    n = int(lines[1].split()[1])
    if len(lines) != 2 + n:
        raise DescriptorError(f"{path}: expected {n} table rows, found {len(lines) - 2}")
    table = []
    for ln in lines[2:]:
        row = [int(x) for x in ln.split()]
        if len(row) != n:
            raise DescriptorError(f"{path}: table row of length {len(row)}, expected {n}")
        table.append(row)
    import os
    return group_from_table(p, table, name=name or os.path.basename(str(path)))


def group_from_spec(spec: str, p_default: int | None = None) -> FiniteGroup:
    """Descriptor string or a path to a group file."""
    import os
    if os.path.exists(spec):
        return load_group_file(spec)
    return parse_descriptor(spec, p_default)


# ---------------------------------------------------------------------------
# per-group analysis

def _closure(table: np.ndarray, gens: Sequence[int]) -> tuple:
    members = {0}
    frontier = [0]
    gens = list(dict.fromkeys(int(g) for g in gens))
    if not gens:
        return (0,)
    while frontier:
        prods = table[np.ix_(frontier, gens)].ravel()
        new = set(prods.tolist()) - members
        members |= new
        frontier = sorted(new)
    return tuple(sorted(members))


class GroupAnalysis:
    """Subgroup lattice, conjugacy classes, and section data for one group."""

    def __init__(self, group: FiniteGroup, bound: int, cached_payload=None):
        self.group = group
        self.bound = bound
        G = group
        n = G.order

        if cached_payload is not None:
            subs = [tuple(m) for m in cached_payload["subgroups"]]
            classes = [tuple(c) for c in cached_payload["classes"]]
        else:
            subs = self._enumerate_subgroups()
            classes = None

        subs.sort(key=lambda m: (len(m), m))
        self.subgroup_members: list[tuple] = subs
        self.n_sub = len(subs)
        self.index_by_members = {m: i for i, m in enumerate(subs)}

        sets = [frozenset(m) for m in subs]
        self.member_sets = sets
        mask = np.zeros((self.n_sub, n), dtype=np.int64)
        for i, m in enumerate(subs):
            mask[i, list(m)] = 1
        common = mask @ mask.T
        sizes = mask.sum(axis=1)
        self.leq = common == sizes[:, None]

        if classes is None:
            classes = self._conjugacy_classes()
        self.classes: list[tuple] = classes
        self.class_of_sub = np.empty(self.n_sub, dtype=np.int32)
        for ci, cls in enumerate(classes):
            for si in cls:
                self.class_of_sub[si] = ci
        self.class_reps = [cls[0] for cls in classes]

        orders = G.element_orders()
        self.is_cyclic_sub = [any(int(orders[m]) == len(mem) for m in mem)
                              for mem in subs]
        self.cyclic_class_positions = [ci for ci, cls in enumerate(self.classes)
                                       if self.is_cyclic_sub[cls[0]]]

        self.generators = G.generators()
        self.center_members = tuple(
            int(x) for x in range(n)
            if np.array_equal(G.table[x], G.table[:, x]))

        self._moebius_memo: dict[tuple, int] = {}
        self._normal_memo: dict[tuple, bool] = {}
        self._section_list: list[Section] | None = None
        self._section_index: dict | None = None
        self._section_lock = threading.Lock()

    # -- construction helpers ------------------------------------------------

    def _enumerate_subgroups(self) -> list[tuple]:
        G = self.group
        table = G.table
        p = G.prime
        found = {(0,)}
        current = [(0,)]
        while current:
            nxt = set()
            target = len(current[0]) * p
            if target > G.order:
                break
            for H in current:
                hset = set(H)
                for g in range(G.order):
                    if g in hset:
                        continue
                    K = _closure(table, H + (g,))
                    if len(K) == target and K not in found:
                        nxt.add(K)
            found |= nxt
            current = sorted(nxt)
        return list(found)

    def _conjugacy_classes(self) -> list[tuple]:
        G = self.group
        table, inv = G.table, G.inv
        seen = set()
        classes = []
        for i, mem in enumerate(self.subgroup_members):
            if i in seen:
                continue
            arr = np.array(mem, dtype=np.int32)
            orbit = set()
            for x in range(G.order):
                cm = table[table[x, arr], inv[x]]
                orbit.add(self.index_by_members[tuple(sorted(cm.tolist()))])
            cls = tuple(sorted(orbit))
            classes.append(cls)
            seen |= orbit
        classes.sort(key=lambda c: c[0])
        return classes

    # -- queries -------------------------------------------------------------

    def subgroup(self, idx: int) -> Subgroup:
        return Subgroup(self.group, self.subgroup_members[idx])

    def index_of(self, members: Iterable[int]) -> int:
        key = tuple(sorted(int(m) for m in members))
        try:
            return self.index_by_members[key]
        except KeyError:
            raise ValueError("not a subgroup of this group") from None

    def conjugate_members(self, x: int, members: Sequence[int]) -> tuple:
        G = self.group
        arr = np.asarray(members, dtype=np.int32)
        cm = G.table[G.table[x, arr], G.inv[x]]
        return tuple(sorted(cm.tolist()))

    def is_normal_in(self, si: int, ti: int) -> bool:
        if not self.leq[si, ti]:
            return False
        if self.group.is_abelian:
            return True
        key = (si, ti)
        hit = self._normal_memo.get(key)
        if hit is not None:
            return hit
        mem = self.subgroup_members[si]
        ok = all(self.conjugate_members(t, mem) == mem
                 for t in self.subgroup_members[ti])
        self._normal_memo[key] = ok
        return ok

    def normalizer_members(self, si: int) -> tuple:
        mem = self.subgroup_members[si]
        return tuple(x for x in range(self.group.order)
                     if self.conjugate_members(x, mem) == mem)

    def moebius(self, si: int, ti: int) -> int:
        """Moebius function of the subgroup poset on the interval [si, ti]."""
        if not self.leq[si, ti]:
            raise ValueError("moebius needs nested subgroups")
        key = (si, ti)
        hit = self._moebius_memo.get(key)
        if hit is not None:
            return hit
        if si == ti:
            val = 1
        else:
            val = -sum(self.moebius(si, ui)
                       for ui in range(self.n_sub)
                       if ui != ti and self.leq[si, ui] and self.leq[ui, ti])
        self._moebius_memo[key] = val
        return val

    def frattini_of(self, ti: int) -> int:
        """Subgroup index of the Frattini subgroup of subgroup ti."""
        mem = self.subgroup_members[ti]
        size = len(mem)
        if size == 1:
            return ti
        maximals = [j for j in range(self.n_sub)
                    if self.leq[j, ti] and len(self.subgroup_members[j]) * self.group.prime == size]
        inter = set(mem)
        for j in maximals:
            inter &= self.member_sets[j]
        return self.index_of(sorted(inter))

    # -- sections ------------------------------------------------------------

    def _build_sections(self):
        G = self.group
        out = []
        for ti in range(self.n_sub):
            for si in range(self.n_sub):
                if not self.leq[si, ti] or not self.is_normal_in(si, ti):
                    continue
                out.append(self._make_section(ti, si))
        self._section_list = out
        self._section_index = {sec.key: k for k, sec in enumerate(out)}

    def _make_section(self, ti: int, si: int) -> Section:
        G = self.group
        T = self.subgroup_members[ti]
        S = np.array(self.subgroup_members[si], dtype=np.int32)
        proj = np.full(G.order, -1, dtype=np.int32)
        reps: list[int] = []
        for t in T:
            if proj[t] >= 0:
                continue
            coset = G.table[t, S]
            proj[coset] = len(reps)
            reps.append(int(t))
        nq = len(reps)
        qt = np.empty((nq, nq), dtype=np.int32)
        for a, ra in enumerate(reps):
            qt[a, :] = proj[G.table[ra, np.array(reps, dtype=np.int32)]]
        q = FiniteGroup(G.prime, qt, name=f"{G.name}.sec{ti}.{si}", validate=False)
        label = classify_group(q)
        return Section(self.subgroup(ti), self.subgroup(si), q, proj, reps, label)

    def sections(self) -> list[Section]:
        if self._section_list is None:
            with self._section_lock:
                if self._section_list is None:
                    self._build_sections()
        return self._section_list

    def section_at(self, t_members, s_members) -> Section:
        self.sections()
        key = (tuple(sorted(t_members)), tuple(sorted(s_members)))
        try:
            return self._section_list[self._section_index[key]]
        except KeyError:
            raise ValueError("no such section") from None


_ANALYSES: dict[int, GroupAnalysis] = {}
_ANALYSES_LOCK = threading.Lock()
_KEEPALIVE: dict[int, FiniteGroup] = {}


def analysis(G: FiniteGroup, bound: int | None = None,
             cache_dir=None) -> GroupAnalysis:
    """The (cached) lattice analysis of G; enumeration refuses huge groups."""
    limit = bound if bound is not None else default_order_bound(G.prime)
    if G.order > limit:
        raise GroupTooLarge(
            f"|G| = {G.order} exceeds the enumeration bound {limit}; "
            f"pass a larger bound explicitly to override")
    key = id(G)
    hit = _ANALYSES.get(key)
    if hit is not None:
        return hit
    with _ANALYSES_LOCK:
        hit = _ANALYSES.get(key)
        if hit is not None:
            return hit
        payload = None
        if cache_dir is not None:
            from . import cache as _cache
            payload = _cache.load_payload(cache_dir, G)
        ana = GroupAnalysis(G, limit, cached_payload=payload)
        if cache_dir is not None and payload is None:
            from . import cache as _cache
            _cache.save_payload(cache_dir, G, ana)
        _ANALYSES[key] = ana
        _KEEPALIVE[key] = G
        return ana


def clear_caches():
    with _ANALYSES_LOCK:
        _ANALYSES.clear()
        _KEEPALIVE.clear()


# ---------------------------------------------------------------------------
# public wrappers

def all_subgroups(G: FiniteGroup, bound: int | None = None) -> list[Subgroup]:
    ana = analysis(G, bound)
    return [ana.subgroup(i) for i in range(ana.n_sub)]


def conjugacy_classes_of_subgroups(G: FiniteGroup) -> list[list[Subgroup]]:
    ana = analysis(G)
    return [[ana.subgroup(i) for i in cls] for cls in ana.classes]


def moebius(S: Subgroup, T: Subgroup) -> int:
    if S.parent is not T.parent:
        raise ValueError("subgroups of different parents")
    ana = analysis(S.parent)
    return ana.moebius(ana.index_of(S.members), ana.index_of(T.members))


def frattini(G: FiniteGroup) -> Subgroup:
    ana = analysis(G)
    top = ana.index_of(range(G.order))
    return ana.subgroup(ana.frattini_of(top))


def center(G: FiniteGroup) -> Subgroup:
    ana = analysis(G)
    return Subgroup(G, ana.center_members)


def conjugate_subgroup(x: int, S: Subgroup) -> Subgroup:
    ana = analysis(S.parent)
    return Subgroup(S.parent, ana.conjugate_members(x, S.members))


def is_normal(S: Subgroup, T: Subgroup) -> bool:
    ana = analysis(S.parent)
    return ana.is_normal_in(ana.index_of(S.members), ana.index_of(T.members))


def normalizer(S: Subgroup) -> Subgroup:
    ana = analysis(S.parent)
    return Subgroup(S.parent, ana.normalizer_members(ana.index_of(S.members)))


def classify_group(q: FiniteGroup) -> SectionClassLabel:
    p = q.prime
    if q.is_abelian and q.exponent in (1, p):
        rank = _check_prime_power(q.order, p)
        return SectionClassLabel("elab", rank)
    if q.order == p ** 3 and not q.is_abelian and q.exponent == p:
        return SectionClassLabel("xsp", None)
    return SectionClassLabel("other", None)


# the named section classes; every one is closed under subquotients
SECTION_CLASSES: dict[str, Callable[[SectionClassLabel], bool]] = {
    "E":  lambda lab: lab.is_elementary_abelian,
    "E2": lambda lab: lab.is_elementary_abelian and lab.rank <= 2,
    "E3": lambda lab: lab.is_elementary_abelian and lab.rank <= 3,
    "X":  lambda lab: lab.is_elementary_abelian or lab.is_extraspecial_exp_p,
    "X2": lambda lab: (lab.is_elementary_abelian and lab.rank <= 2)
                      or lab.is_extraspecial_exp_p,
    "X3": lambda lab: (lab.is_elementary_abelian and lab.rank <= 3)
                      or lab.is_extraspecial_exp_p,
}


def sections_in_class(G: FiniteGroup, klass) -> list[Section]:
    """All sections of G whose quotient label satisfies the class.

    klass is a name from SECTION_CLASSES or a predicate on SectionClassLabel.
    The full list (not class representatives) in deterministic order.
    """
    pred = SECTION_CLASSES[klass] if isinstance(klass, str) else klass
    ana = analysis(G)
    return [sec for sec in ana.sections() if pred(sec.label)]


def group_section(G: FiniteGroup) -> Section:
    """The section (G, 1); its quotient is a relabeled copy of G."""
    ana = analysis(G)
    return ana.section_at(range(G.order), [0])


def double_coset_reps(G: FiniteGroup, left_members: Sequence[int],
                      right_members: Sequence[int],
                      within: Sequence[int] | None = None) -> list[int]:
    """Ascending least representatives of the double cosets L\\G/R.

    With `within`, representatives are drawn from that subgroup's members
    (both L and R must then lie inside it), partitioning it instead of G.
    """
    seen = np.zeros(G.order, dtype=bool)
    left = np.asarray(left_members, dtype=np.int32)
    right = np.asarray(right_members, dtype=np.int32)
    reps = []
    for x in (range(G.order) if within is None else within):
        x = int(x)
        if seen[x]:
            continue
        reps.append(x)
        lx = G.table[left, x]
        seen[G.table[np.ix_(lx, right)].ravel()] = True
    return reps


def subgroup_generators(G: FiniteGroup, members: Sequence[int]) -> tuple:
    """Small generating set of the subgroup given by its members."""
    gens: list[int] = []
    have = {0}
    for m in members:
        m = int(m)
        if m not in have:
            gens.append(m)
            have = set(_closure(G.table, gens))
            if len(have) == len(members):
                break
    return tuple(gens)


def product_members(G: FiniteGroup, a_members: Sequence[int],
                    b_members: Sequence[int]) -> tuple:
    """All products a.b as a sorted member tuple (a subgroup when one
    factor normalizes the other)."""
    a = np.asarray(a_members, dtype=np.int32)
    b = np.asarray(b_members, dtype=np.int32)
    return tuple(sorted(set(G.table[np.ix_(a, b)].ravel().tolist())))
