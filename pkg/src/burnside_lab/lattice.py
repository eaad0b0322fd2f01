"""Subgroup lattices: enumeration, conjugacy classes, Moebius data, sections.

Subgroups are element bitmasks over the parent group.  The full list is
found by seeding with cyclic subgroups and closing under joins, which
reaches every subgroup because each is a join of its cyclic subgroups.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from .groups import (
    Group,
    GuardExceeded,
    IsoClass,
    classify_subset,
    close_under_mul,
    mask_bits,
    subquotient_group,
)

DEFAULT_SUBGROUP_GUARD = 20000


@dataclass(frozen=True)
class Subgroup:
    mask: int
    order: int

    def contains(self, other: "Subgroup") -> bool:
        return other.mask & ~self.mask == 0


class SubgroupTable:
    """All subgroups of a group, their conjugacy classes and normalizers."""

    def __init__(self, group: Group, masks: list[int]):
        self.group = group
        self.subgroups = tuple(
            Subgroup(m, m.bit_count())
            for m in sorted(masks, key=lambda m: (m.bit_count(), m))
        )
        self.index_of = {s.mask: i for i, s in enumerate(self.subgroups)}
        self._conj_perm: dict[int, list[int]] = {}
        self._build_classes()
        self._elements_cache: dict[int, list[int]] = {}
        self._names: Optional[list[str]] = None
        self._iso_cache: dict[int, IsoClass] = {}

    # -- construction -------------------------------------------------------

    def _conjugation(self, g: int) -> list[int]:
        perm = self._conj_perm.get(g)
        if perm is None:
            G = self.group
            mg, gi = G.mul[g], G.inv[g]
            perm = [G.mul[mg[x]][gi] for x in range(G.order)]
            self._conj_perm[g] = perm
        return perm

    def conjugate_mask(self, mask: int, g: int) -> int:
        perm = self._conjugation(g)
        out = 0
        while mask:
            low = mask & -mask
            out |= 1 << perm[low.bit_length() - 1]
            mask ^= low
        return out

    def _build_classes(self) -> None:
        n = len(self.subgroups)
        G = self.group
        class_of = [-1] * n
        to_rep = [G.id] * n  # t with t * H * t^-1 = class representative
        class_reps: list[int] = []
        for i, sub in enumerate(self.subgroups):
            if class_of[i] >= 0:
                continue
            c = len(class_reps)
            class_reps.append(i)
            class_of[i] = c
            for g in range(G.order):
                m2 = self.conjugate_mask(sub.mask, g)
                j = self.index_of[m2]
                if class_of[j] < 0:
                    class_of[j] = c
                    to_rep[j] = G.inv[g]
        self.class_of = tuple(class_of)
        self.class_reps = tuple(class_reps)
        self.to_rep = tuple(to_rep)
        sizes = [0] * len(class_reps)
        for c in class_of:
            sizes[c] += 1
        self.class_sizes = tuple(sizes)
        normalizers = []
        for r in class_reps:
            mask = self.subgroups[r].mask
            nm = 0
            for g in range(G.order):
                if self.conjugate_mask(mask, g) == mask:
                    nm |= 1 << g
            normalizers.append(self.index_of[nm])
        self.normalizer_of_rep = tuple(normalizers)
        # normalizer of an arbitrary subgroup: conjugate of its rep's normalizer
        norm_mask = [0] * n
        for i in range(n):
            r = class_reps[class_of[i]]
            t = to_rep[i]  # t H t^-1 = rep, so N(H) = t^-1 N(rep) t
            rep_norm = self.subgroups[self.normalizer_of_rep[class_of[i]]].mask
            norm_mask[i] = self.conjugate_mask(rep_norm, G.inv[t])
        self.normalizer_mask = tuple(norm_mask)

    # -- queries ------------------------------------------------------------

    @property
    def n_classes(self) -> int:
        return len(self.class_reps)

    def elements(self, sub_index: int) -> list[int]:
        got = self._elements_cache.get(sub_index)
        if got is None:
            got = mask_bits(self.subgroups[sub_index].mask)
            self._elements_cache[sub_index] = got
        return got

    def class_of_mask(self, mask: int) -> int:
        return self.class_of[self.index_of[mask]]

    def rep_subgroup(self, class_index: int) -> Subgroup:
        return self.subgroups[self.class_reps[class_index]]

    def is_normal(self, sub_index: int) -> bool:
        return self.class_sizes[self.class_of[sub_index]] == 1 and (
            self.normalizer_mask[sub_index].bit_count() == self.group.order
        )

    def normal_indices(self) -> list[int]:
        return [
            i
            for i in range(len(self.subgroups))
            if self.normalizer_mask[i].bit_count() == self.group.order
        ]

    def iso_class(self, class_index: int) -> IsoClass:
        got = self._iso_cache.get(class_index)
        if got is None:
            got = classify_subset(self.group, self.elements(self.class_reps[class_index]))
            self._iso_cache[class_index] = got
        return got

    def class_names(self) -> list[str]:
        """Deterministic class names: iso short name + 1-based ordinal."""
        if self._names is None:
            counts: dict[str, int] = {}
            names = []
            for c in range(self.n_classes):
                base = self.iso_class(c).short_name
                counts[base] = counts.get(base, 0) + 1
                names.append(f"{base}#{counts[base]}")
            self._names = names
        return self._names

    def subconjugate(self, ci: int, cj: int) -> bool:
        """True when some conjugate of class-ci's rep lies inside class-cj's rep."""
        target = self.rep_subgroup(cj).mask
        rep = self.rep_subgroup(ci).mask
        if self.rep_subgroup(ci).order > self.rep_subgroup(cj).order:
            return False
        for g in range(self.group.order):
            if self.conjugate_mask(rep, g) & ~target == 0:
                return True
        return False

    def poset_leq(self) -> list[list[bool]]:
        nc = self.n_classes
        return [[self.subconjugate(i, j) for j in range(nc)] for i in range(nc)]


def all_subgroups(G: Group, guard: int = DEFAULT_SUBGROUP_GUARD) -> SubgroupTable:
    """Enumerate every subgroup of G (cyclic seeds + join closure)."""
    mul = G.mul
    cyclics: dict[int, int] = {}
    for x in range(G.order):
        mask = 1 << G.id
        y = x
        while not (mask >> y) & 1:
            mask |= 1 << y
            y = mul[y][x]
        cyclics.setdefault(mask, x)
    cyclic_list = sorted(cyclics, key=lambda m: (m.bit_count(), m))
    found: set[int] = set(cyclic_list)
    work = list(cyclic_list)
    join_cache: dict[int, int] = {}
    i = 0
    while i < len(work):
        h = work[i]
        i += 1
        for c in cyclic_list:
            if c & ~h == 0:
                continue
            union = h | c
            j = join_cache.get(union)
            if j is None:
                j = close_under_mul(union, mul)
                join_cache[union] = j
            if j not in found:
                if len(found) >= guard:
                    raise GuardExceeded(f"more than {guard} subgroups")
                found.add(j)
                work.append(j)
    return SubgroupTable(G, list(found))


# ---------------------------------------------------------------------------
# Moebius functions.


@dataclass
class MoebiusTable:
    """mu over literal inclusions of subgroups, plus the normal-poset mu(1, N)."""

    table: SubgroupTable
    mu: dict[tuple[int, int], int]
    mu_normal: dict[int, int]  # subgroup index of normal N -> mu(1, N)
    normals: tuple[int, ...]

    def value(self, a_index: int, b_index: int) -> int:
        return self.mu.get((a_index, b_index), 0)


def moebius(table: SubgroupTable) -> MoebiusTable:
    subs = table.subgroups
    n = len(subs)
    below: list[list[int]] = []
    for i in range(n):
        mi = subs[i].mask
        below.append([j for j in range(n) if subs[j].mask & ~mi == 0])
    mu: dict[tuple[int, int], int] = {}
    for b in range(n):
        mb = subs[b].mask
        for a in below[b]:
            ma = subs[a].mask
            acc = 1 if a == b else 0
            for c in below[b]:
                if c != b and ma & ~subs[c].mask == 0:
                    acc -= mu[(a, c)]
            mu[(a, b)] = acc
    normals = tuple(sorted(table.normal_indices()))
    trivial = table.index_of[1 << table.group.id]
    mu_normal: dict[int, int] = {}
    for b in normals:
        mb = subs[b].mask
        acc = 1 if b == trivial else 0
        for c in mu_normal:
            if subs[c].mask & ~mb == 0 and c != b:
                acc -= mu_normal[c]
        mu_normal[b] = acc
    return MoebiusTable(table, mu, mu_normal, normals)


# ---------------------------------------------------------------------------
# Subgroups realized as standalone groups, and sections.


@dataclass
class SubgroupRealization:
    """A subgroup of `parent` rebuilt as a Group of its own.

    `emb[i]` is the parent element index of the realized group's element i,
    `into` the inverse map.
    """

    parent: Group
    sub_index: int
    group: Group
    emb: tuple[int, ...]
    into: dict[int, int]

    def mask_to_sub(self, parent_mask: int) -> int:
        out = 0
        for x in mask_bits(parent_mask):
            out |= 1 << self.into[x]
        return out

    def mask_to_parent(self, sub_mask: int) -> int:
        out = 0
        for x in mask_bits(sub_mask):
            out |= 1 << self.emb[x]
        return out


def realize_subgroup(table: SubgroupTable, sub_index: int) -> SubgroupRealization:
    G = table.group
    elems = table.elements(sub_index)
    into = {x: i for i, x in enumerate(elems)}
    mul = [[into[G.mul[a][b]] for b in elems] for a in elems]
    sub_gens = []
    seen = 1 << G.id
    for x in elems:
        if not (seen >> x) & 1:
            sub_gens.append(into[x])
            seen = close_under_mul(seen | (1 << x), G.mul)
    name = f"{G.name}|sub{sub_index}"
    H = Group(mul, sub_gens, name=name)
    return SubgroupRealization(G, sub_index, H, tuple(elems), into)


class Section:
    """A pair (T, S) with S normal in T, carrying the quotient group T/S.

    `proj` maps parent element indices of T onto quotient element indices.
    """

    def __init__(self, table: SubgroupTable, t_index: int, s_index: int):
        G = table.group
        t_sub, s_sub = table.subgroups[t_index], table.subgroups[s_index]
        if s_sub.mask & ~t_sub.mask:
            raise ValueError("S is not contained in T")
        self.table = table
        self.t_index = t_index
        self.s_index = s_index
        quotient, proj = subquotient_group(
            G, table.elements(t_index), s_sub.mask, name=f"{G.name}|sec({t_index},{s_index})"
        )
        self.quotient = quotient
        self.proj = proj
        self.label = classify_subset(
            quotient, list(range(quotient.order))
        )
        self._quotient_table: Optional[SubgroupTable] = None

    @property
    def quotient_table(self) -> SubgroupTable:
        if self._quotient_table is None:
            self._quotient_table = all_subgroups(self.quotient)
        return self._quotient_table

    def project_mask(self, parent_mask: int) -> int:
        """Image in the quotient of a parent-subgroup mask contained in T."""
        out = 0
        for x in mask_bits(parent_mask):
            out |= 1 << self.proj[x]
        return out

    def preimage_mask(self, quotient_mask: int) -> int:
        out = 0
        for x, q in self.proj.items():
            if (quotient_mask >> q) & 1:
                out |= 1 << x
        return out

    def __repr__(self) -> str:
        return (
            f"Section(T#{self.t_index}, S#{self.s_index}, "
            f"quotient={self.label.short_name})"
        )


@dataclass
class SectionClass:
    """Conjugacy class of sections: a representative plus its full orbit.

    `members` lists (t_index, s_index, g) with g * rep * g^-1 = member;
    `stabilizer_mask` is {x : x fixes the representative pair}.
    """

    rep: Section
    members: list[tuple[int, int, int]] = field(default_factory=list)
    stabilizer_mask: int = 0


def _normal_pairs(table: SubgroupTable) -> list[tuple[int, int]]:
    """All (t_index, s_index) with S normal in T, in sorted index order."""
    pairs = []
    n = len(table.subgroups)
    for t in range(n):
        tm = table.subgroups[t].mask
        for s in range(n):
            sm = table.subgroups[s].mask
            if sm & ~tm == 0 and tm & ~table.normalizer_mask[s] == 0:
                pairs.append((t, s))
    return pairs


def enumerate_sections(
    table: SubgroupTable,
    keep=None,
    with_members: bool = False,
) -> list[SectionClass]:
    """One SectionClass per conjugacy class of pairs (T, S) with S normal in T.

    `keep` filters by the quotient's IsoClass (a predicate); None keeps all.
    When `with_members` is set, each class carries its full orbit with
    transporter elements and the stabilizer of the representative pair.
    """
    G = table.group
    pairs = _normal_pairs(table)
    pair_set = set(pairs)
    seen: set[tuple[int, int]] = set()
    out: list[SectionClass] = []
    for pair in pairs:
        if pair in seen:
            continue
        t, s = pair
        orbit: dict[tuple[int, int], int] = {}
        tm, sm = table.subgroups[t].mask, table.subgroups[s].mask
        stab = 0
        for g in range(G.order):
            m = (
                table.index_of[table.conjugate_mask(tm, g)],
                table.index_of[table.conjugate_mask(sm, g)],
            )
            if m == pair:
                stab |= 1 << g
            if m not in orbit:
                orbit[m] = g
        assert set(orbit) <= pair_set
        seen.update(orbit)
        section = Section(table, t, s)
        if keep is not None and not keep(section.label):
            continue
        cls = SectionClass(rep=section, stabilizer_mask=stab)
        if with_members:
            cls.members = sorted((m[0], m[1], g) for m, g in orbit.items())
        out.append(cls)
    return out
