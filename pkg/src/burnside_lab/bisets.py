"""Biset operations materialized as integer matrices on Burnside basis classes.

Columns are indexed by the source ring's subgroup classes, rows by the
target's; composition is matrix product.  Forms (GF(2) functionals) are
moved around by `dual_action`, which is where the opposite-biset transpose
convention lives; element-level operations never see it.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .burnside import BurnsideRing, ring_of
from .groups import Group, mask_bits, product_group, quotient_group
from .lattice import (
    Section,
    SubgroupRealization,
    SubgroupTable,
    all_subgroups,
    realize_subgroup,
)


@dataclass
class BisetMatrix:
    source: BurnsideRing
    target: BurnsideRing
    rows: list[list[int]]  # target.n_classes x source.n_classes

    def column(self, j: int) -> list[int]:
        return [row[j] for row in self.rows]

    def apply_coeffs(self, coeffs: Sequence[int]) -> list[int]:
        return [sum(r * c for r, c in zip(row, coeffs) if c) for row in self.rows]

    def apply_bits(self, bits: int) -> int:
        out = 0
        for i, row in enumerate(self.rows):
            acc = 0
            for j, v in enumerate(row):
                if (bits >> j) & 1:
                    acc ^= v & 1
            out |= acc << i
        return out

    def compose(self, inner: "BisetMatrix") -> "BisetMatrix":
        """self o inner (apply `inner` first)."""
        assert inner.target is self.source, "composition endpoints do not match"
        n_t, n_mid, n_s = len(self.rows), len(inner.rows), inner.source.n_classes
        rows = [[0] * n_s for _ in range(n_t)]
        for i in range(n_t):
            srow = self.rows[i]
            out = rows[i]
            for m in range(n_mid):
                c = srow[m]
                if c:
                    irow = inner.rows[m]
                    for j in range(n_s):
                        if irow[j]:
                            out[j] += c * irow[j]
        return BisetMatrix(inner.source, self.target, rows)

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, BisetMatrix)
            and self.source is other.source
            and self.target is other.target
            and self.rows == other.rows
        )


def identity_matrix(ring: BurnsideRing) -> BisetMatrix:
    n = ring.n_classes
    return BisetMatrix(ring, ring, [[int(i == j) for j in range(n)] for i in range(n)])


def dual_action(op: BisetMatrix, form_bits: int) -> int:
    """Move a GF(2) form on the target backward along `op`.

    Result over source classes: psi(col j) = sum_i op[i][j] * phi(row i).
    This is the form-level action of the operation opposite to `op`; e.g.
    restricting a form is the transpose of inducing elements.
    """
    out = 0
    for j in range(op.source.n_classes):
        acc = 0
        for i, row in enumerate(op.rows):
            if (form_bits >> i) & 1:
                acc ^= row[j] & 1
        out |= acc << j
    return out


# ---------------------------------------------------------------------------
# Elementary operations.


def induction_matrix(real: SubgroupRealization) -> BisetMatrix:
    """B(H) -> B(G) for H realized inside G; H/K goes to G/K."""
    parent_ring = ring_of(real.parent)
    sub_ring = ring_of(real.group)
    rows = [[0] * sub_ring.n_classes for _ in range(parent_ring.n_classes)]
    for c in range(sub_ring.n_classes):
        k_mask = real.mask_to_parent(sub_ring.table.rep_subgroup(c).mask)
        rows[parent_ring.table.class_of_mask(k_mask)][c] = 1
    return BisetMatrix(sub_ring, parent_ring, rows)


def restriction_matrix(real: SubgroupRealization) -> BisetMatrix:
    """B(G) -> B(H): double-coset scan, G/K to sum of H/(H meet gKg^-1)."""
    parent_ring = ring_of(real.parent)
    sub_ring = ring_of(real.group)
    G = real.parent
    table = parent_ring.table
    h_mask = sum(1 << x for x in real.emb)
    h_elems = list(real.emb)
    rows = [[0] * parent_ring.n_classes for _ in range(sub_ring.n_classes)]
    for c in range(parent_ring.n_classes):
        k_idx = table.class_reps[c]
        k_elems = table.elements(k_idx)
        k_mask = table.subgroups[k_idx].mask
        visited = 0
        for g in range(G.order):
            if (visited >> g) & 1:
                continue
            for h in h_elems:
                hg = G.mul[h][g]
                for k in k_elems:
                    visited |= 1 << G.mul[hg][k]
            stab = h_mask & table.conjugate_mask(k_mask, g)
            sub_class = sub_ring.table.class_of_mask(real.mask_to_sub(stab))
            rows[sub_class][c] += 1
    return BisetMatrix(parent_ring, sub_ring, rows)


@dataclass
class QuotientRealization:
    """G/N realized as a Group, with the projection over all of G."""

    parent: Group
    group: Group
    proj: list[int]
    normal_mask: int

    def image_mask(self, parent_mask: int) -> int:
        out = 0
        for x in mask_bits(parent_mask):
            out |= 1 << self.proj[x]
        return out

    def preimage_mask(self, quotient_mask: int) -> int:
        out = 0
        for x, q in enumerate(self.proj):
            if (quotient_mask >> q) & 1:
                out |= 1 << x
        return out


def realize_quotient(G: Group, normal_mask: int) -> QuotientRealization:
    Q, proj = quotient_group(G, normal_mask)
    return QuotientRealization(G, Q, proj, normal_mask)


def inflation_matrix(quot: QuotientRealization) -> BisetMatrix:
    """B(G/N) -> B(G): (G/N)/(U/N) goes to G/U."""
    parent_ring = ring_of(quot.parent)
    q_ring = ring_of(quot.group)
    rows = [[0] * q_ring.n_classes for _ in range(parent_ring.n_classes)]
    for c in range(q_ring.n_classes):
        u_mask = quot.preimage_mask(q_ring.table.rep_subgroup(c).mask)
        rows[parent_ring.table.class_of_mask(u_mask)][c] = 1
    return BisetMatrix(q_ring, parent_ring, rows)


def deflation_matrix(quot: QuotientRealization) -> BisetMatrix:
    """B(G) -> B(G/N): G/K goes to (G/N)/(KN/N)."""
    parent_ring = ring_of(quot.parent)
    q_ring = ring_of(quot.group)
    rows = [[0] * parent_ring.n_classes for _ in range(q_ring.n_classes)]
    for c in range(parent_ring.n_classes):
        k_mask = parent_ring.table.rep_subgroup(c).mask
        rows[q_ring.table.class_of_mask(quot.image_mask(k_mask))][c] = 1
    return BisetMatrix(parent_ring, q_ring, rows)


def iso_matrix(source: BurnsideRing, target: BurnsideRing, elem_map: Sequence[int]) -> BisetMatrix:
    """Transport along a group isomorphism given as an element index map."""
    rows = [[0] * source.n_classes for _ in range(target.n_classes)]
    for c in range(source.n_classes):
        mask = source.table.rep_subgroup(c).mask
        image = 0
        for x in mask_bits(mask):
            image |= 1 << elem_map[x]
        rows[target.table.class_of_mask(image)][c] = 1
    return BisetMatrix(source, target, rows)


def elementary_matrix(kind: str, ring: BurnsideRing, data) -> BisetMatrix:
    """Dispatcher: kind in {Ind, Res, Inf, Def, Iso}.

    data: subgroup index for Ind/Res, normal-subgroup mask for Inf/Def,
    (target_ring, elem_map) for Iso.
    """
    if kind in ("Ind", "Res"):
        real = realize_subgroup(ring.table, data)
        return induction_matrix(real) if kind == "Ind" else restriction_matrix(real)
    if kind in ("Inf", "Def"):
        quot = realize_quotient(ring.group, data)
        return inflation_matrix(quot) if kind == "Inf" else deflation_matrix(quot)
    if kind == "Iso":
        target_ring, elem_map = data
        return iso_matrix(ring, target_ring, elem_map)
    raise ValueError(f"unknown elementary biset kind {kind!r}")


# ---------------------------------------------------------------------------
# Section composites.


def section_ring(section: Section) -> BurnsideRing:
    return ring_of(section.quotient, section.quotient_table)


def indinf_matrix(ring: BurnsideRing, section: Section) -> BisetMatrix:
    """B(T/S) -> B(G): (T/S)/(U/S) goes to G/U (preimage of U/S in T)."""
    assert section.table is ring.table
    q_ring = section_ring(section)
    rows = [[0] * q_ring.n_classes for _ in range(ring.n_classes)]
    for c in range(q_ring.n_classes):
        v_mask = q_ring.table.rep_subgroup(c).mask
        u_mask = section.preimage_mask(v_mask)
        rows[ring.table.class_of_mask(u_mask)][c] = 1
    return BisetMatrix(q_ring, ring, rows)


def defres_matrix(ring: BurnsideRing, section: Section) -> BisetMatrix:
    """B(G) -> B(T/S): restrict to T by double cosets, then push to T/S."""
    assert section.table is ring.table
    q_ring = section_ring(section)
    G = ring.group
    table = ring.table
    t_mask = table.subgroups[section.t_index].mask
    t_elems = table.elements(section.t_index)
    rows = [[0] * ring.n_classes for _ in range(q_ring.n_classes)]
    for c in range(ring.n_classes):
        k_idx = table.class_reps[c]
        k_elems = table.elements(k_idx)
        k_mask = table.subgroups[k_idx].mask
        visited = 0
        for g in range(G.order):
            if (visited >> g) & 1:
                continue
            for t in t_elems:
                tg = G.mul[t][g]
                for k in k_elems:
                    visited |= 1 << G.mul[tg][k]
            stab = t_mask & table.conjugate_mask(k_mask, g)
            q_class = q_ring.table.class_of_mask(section.project_mask(stab))
            rows[q_class][c] += 1
    return BisetMatrix(ring, q_ring, rows)


# ---------------------------------------------------------------------------
# Transitive bisets over a product group and their factorization.


class ProductContext:
    """H x G with its subgroup table; X-masks index transitive (H,G)-bisets."""

    def __init__(self, left: BurnsideRing, right: BurnsideRing):
        self.left = left
        self.right = right
        self.product = product_group(left.group, right.group)
        self.table = all_subgroups(self.product)

    def decode(self, p: int) -> tuple[int, int]:
        return divmod(p, self.right.group.order)

    def encode(self, a: int, b: int) -> int:
        return a * self.right.group.order + b


def _left_cosets(G: Group, sub_elems: list[int]) -> tuple[list[int], list[int]]:
    """(coset id per element, representative per coset id)."""
    cid = [-1] * G.order
    reps = []
    for g in range(G.order):
        if cid[g] >= 0:
            continue
        c = len(reps)
        reps.append(g)
        for s in sub_elems:
            cid[G.mul[g][s]] = c
    return cid, reps


def transitive_biset(ctx: ProductContext, x_mask: int) -> BisetMatrix:
    """Action of the transitive biset with point stabilizer X on basis classes.

    Computed by direct orbit counting on the composed set, independent of
    the factorization below.
    """
    H, G = ctx.left.group, ctx.right.group
    P = ctx.product
    x_elems = mask_bits(x_mask)
    u_cid, u_reps = _left_cosets(P, x_elems)
    n_u = len(u_reps)
    g_gens = list(G.generators)
    rows = [[0] * ctx.right.n_classes for _ in range(ctx.left.n_classes)]
    for c in range(ctx.right.n_classes):
        k_idx = ctx.right.table.class_reps[c]
        k_elems = ctx.right.table.elements(k_idx)
        v_cid, v_reps = _left_cosets(G, k_elems)
        n_v = len(v_reps)
        # Glue (u, v) pairs along the middle G-action.
        pair_class = [-1] * (n_u * n_v)
        n_pairs = 0
        pair_reps = []
        for start in range(n_u * n_v):
            if pair_class[start] >= 0:
                continue
            pc = n_pairs
            n_pairs += 1
            pair_reps.append(start)
            stack = [start]
            pair_class[start] = pc
            while stack:
                uv = stack.pop()
                u, v = divmod(uv, n_v)
                pa, pb = ctx.decode(u_reps[u])
                y = v_reps[v]
                for g in g_gens:
                    gi = G.inv[g]
                    u2 = u_cid[ctx.encode(pa, G.mul[gi][pb])]
                    v2 = v_cid[G.mul[g][y]]
                    uv2 = u2 * n_v + v2
                    if pair_class[uv2] < 0:
                        pair_class[uv2] = pc
                        stack.append(uv2)
        # Decompose the H-action on pair classes into orbits with stabilizers.
        def h_act(h: int, pc: int) -> int:
            uv = pair_reps[pc]
            u, v = divmod(uv, n_v)
            pa, pb = ctx.decode(u_reps[u])
            return pair_class[u_cid[ctx.encode(H.mul[h][pa], pb)] * n_v + v]

        seen = [False] * n_pairs
        for pc in range(n_pairs):
            if seen[pc]:
                continue
            stab = 0
            orbit = set()
            for h in range(H.order):
                img = h_act(h, pc)
                orbit.add(img)
                if img == pc:
                    stab |= 1 << h
            for o in orbit:
                seen[o] = True
            rows[ctx.left.table.class_of_mask(stab)][c] += 1
    return BisetMatrix(ctx.right, ctx.left, rows)


@dataclass
class Factorization:
    """The canonical pieces of a transitive biset: project, transport, lift."""

    ctx: ProductContext
    x_mask: int
    p1_mask: int
    k1_mask: int
    p2_mask: int
    k2_mask: int
    left_section: Section
    right_section: Section
    iso_map: list[int]  # right quotient element -> left quotient element

    def matrix(self) -> BisetMatrix:
        lift = indinf_matrix(self.ctx.left, self.left_section)
        drop = defres_matrix(self.ctx.right, self.right_section)
        relabel = iso_matrix(
            section_ring(self.right_section), section_ring(self.left_section), self.iso_map
        )
        return lift.compose(relabel.compose(drop))


def factorize(ctx: ProductContext, x_mask: int) -> Factorization:
    H, G = ctx.left.group, ctx.right.group
    p1 = k1 = p2 = k2 = 0
    pairs = []
    for p in mask_bits(x_mask):
        a, b = ctx.decode(p)
        pairs.append((a, b))
        p1 |= 1 << a
        p2 |= 1 << b
        if b == G.id:
            k1 |= 1 << a
        if a == H.id:
            k2 |= 1 << b
    left_sec = Section(ctx.left.table, ctx.left.table.index_of[p1], ctx.left.table.index_of[k1])
    right_sec = Section(ctx.right.table, ctx.right.table.index_of[p2], ctx.right.table.index_of[k2])
    iso_map = [-1] * right_sec.quotient.order
    for a, b in pairs:
        q2, q1 = right_sec.proj[b], left_sec.proj[a]
        if iso_map[q2] < 0:
            iso_map[q2] = q1
        elif iso_map[q2] != q1:
            raise AssertionError("transport map is not well defined")
    assert sorted(iso_map) == list(range(left_sec.quotient.order)), "not a bijection"
    return Factorization(ctx, x_mask, p1, k1, p2, k2, left_sec, right_sec, iso_map)
