"""Unit groups of Burnside rings by four independent routes.

* `units_oracle` enumerates +-1 ghost vectors and keeps those lifting to
  integral elements (definition-level brute force; the reference the other
  three methods are judged against).
* `yoshida_rank` solves the homomorphism criterion as a GF(2) system.
* `theorem_image_rank` imposes one condition per section whose quotient
  carries an epsilon element.
* `sectional_limit_rank` realizes the unit group as the inverse limit of
  unit groups of section quotients in the limit families, with
  compatibility and conjugation-equivariance constraints.

Units are carried as +-1 mark vectors; linear forms as GF(2) bitmasks over
subgroup classes, bit(H) = phi(G/H).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from . import gf2
from .bisets import section_ring
from .burnside import BurnsideElem, BurnsideRing
from .groups import GuardExceeded, close_under_mul, mask_bits
from .lattice import Section, SectionClass, enumerate_sections

DEFAULT_ORACLE_BITS = 24


@dataclass
class UnitGroupDescription:
    method: str
    rank: int
    n_classes: int
    unit_list: Optional[list[BurnsideElem]] = None
    form_basis: Optional[list[int]] = None  # bitmasks over subgroup classes

    @property
    def group_size(self) -> int:
        return 1 << self.rank


def iota(ring: BurnsideRing, unit: BurnsideElem) -> int:
    """Embed a unit as the GF(2) form recording which marks are -1."""
    bits = 0
    for k, s in enumerate(ring.marks(unit)):
        if s == -1:
            bits |= 1 << k
        elif s != 1:
            raise ValueError("element is not a unit: marks are not all +-1")
    return bits


def units_oracle(ring: BurnsideRing, max_bits: int = DEFAULT_ORACLE_BITS) -> UnitGroupDescription:
    """All units, by depth-first sign choice with integrality pruning.

    Signs are chosen per class from the largest subgroup down; the
    triangular back-substitution determines each coefficient from signs
    already fixed, so a fractional coefficient prunes the whole subtree.
    """
    nc = ring.n_classes
    if nc > max_bits:
        raise GuardExceeded(
            f"{ring.group.name} has {nc} subgroup classes; oracle limit is {max_bits}"
        )
    m = ring.mark_matrix
    supports = [[(j, m[j][k]) for j in range(k + 1, nc) if m[j][k]] for k in range(nc)]
    diags = [m[k][k] for k in range(nc)]
    coeffs = [0] * nc
    signs = [1] * nc
    found: list[tuple[tuple[int, ...], tuple[int, ...]]] = []

    def descend(k: int) -> None:
        if k < 0:
            found.append((tuple(signs), tuple(coeffs)))
            return
        acc = 0
        for j, mjk in supports[k]:
            cj = coeffs[j]
            if cj:
                acc += cj * mjk
        for s in (1, -1):
            num = s - acc
            if num % diags[k] == 0:
                signs[k] = s
                coeffs[k] = num // diags[k]
                descend(k - 1)
        coeffs[k] = 0

    descend(nc - 1)
    count = len(found)
    assert count and count & (count - 1) == 0, "unit count must be a power of two"
    found.sort(key=lambda sc: gf2.from_bits([s == -1 for s in sc[0]]))
    units = [ring.elem(c) for _, c in found]
    forms = [gf2.from_bits([s == -1 for s in sc]) for sc, _ in found]
    return UnitGroupDescription(
        method="oracle",
        rank=count.bit_length() - 1,
        n_classes=nc,
        unit_list=units,
        form_basis=gf2.rref(forms),
    )


# ---------------------------------------------------------------------------
# Homomorphism-criterion system.


def yoshida_rows(ring: BurnsideRing) -> list[int]:
    """GF(2) conditions making every phi~_H a homomorphism on N(H)/H."""
    table = ring.table
    G = ring.group
    rows: set[int] = set()
    for c in range(table.n_classes):
        h_idx = table.class_reps[c]
        h_mask = table.subgroups[h_idx].mask
        h_elems = table.elements(h_idx)
        n_idx = table.normalizer_of_rep[c]
        n_elems = table.elements(n_idx)
        coset_of: dict[int, int] = {}
        reps: list[int] = []
        for x in n_elems:
            if x in coset_of:
                continue
            cid = len(reps)
            reps.append(x)
            for h in h_elems:
                coset_of[G.mul[x][h]] = cid
        cls: list[int] = []
        for x in reps:
            gen = close_under_mul(h_mask | (1 << x), G.mul)
            if len(h_elems) > 1:
                # generated subgroup must not depend on the chosen lift
                other = G.mul[x][h_elems[1]]
                assert close_under_mul(h_mask | (1 << other), G.mul) == gen
            cls.append(table.class_of_mask(gen))
        base = 1 << c
        for i, x in enumerate(reps):
            row_x = G.mul[x]
            for j, y in enumerate(reps):
                cxy = cls[coset_of[row_x[y]]]
                row = (1 << cxy) ^ (1 << cls[i]) ^ (1 << cls[j]) ^ base
                if row:
                    rows.add(row)
    return sorted(rows)


def yoshida_rank(ring: BurnsideRing) -> UnitGroupDescription:
    rows = yoshida_rows(ring)
    kernel = gf2.nullspace(rows, ring.n_classes)
    return UnitGroupDescription(
        method="yoshida",
        rank=len(kernel),
        n_classes=ring.n_classes,
        form_basis=kernel,
    )


# ---------------------------------------------------------------------------
# Epsilon-section system.


def epsilon_condition_rows(ring: BurnsideRing) -> tuple[list[int], list[str]]:
    """One GF(2)B(G) element per epsilon-family section class.

    Row for section (T, S): the lift of the quotient's epsilon image, basis
    class of V <= T/S contributing at the class of its preimage in T.  A
    form phi is orthogonal to the row iff the section's pulled-back
    condition phi(lift(epsilon)) = 0 holds.
    """
    table = ring.table
    rows: list[int] = []
    labels: list[str] = []
    for sc in enumerate_sections(table, keep=lambda lab: lab.in_epsilon_class()):
        sec = sc.rep
        q_ring = section_ring(sec)
        _, eps_bits = q_ring.epsilon()
        row = 0
        for qc in range(q_ring.n_classes):
            if (eps_bits >> qc) & 1:
                v_mask = q_ring.table.rep_subgroup(qc).mask
                u_mask = sec.preimage_mask(v_mask)
                row ^= 1 << table.class_of_mask(u_mask)
        rows.append(row)
        t_ord = table.subgroups[sec.t_index].order
        s_ord = table.subgroups[sec.s_index].order
        labels.append(f"{sec.label.short_name}@(|T|={t_ord},|S|={s_ord})")
    return rows, labels


def theorem_image_rank(ring: BurnsideRing) -> UnitGroupDescription:
    rows, _ = epsilon_condition_rows(ring)
    kernel = gf2.nullspace(rows, ring.n_classes)
    return UnitGroupDescription(
        method="sections",
        rank=len(kernel),
        n_classes=ring.n_classes,
        form_basis=kernel,
    )


# ---------------------------------------------------------------------------
# Inverse-limit system.


def _greedy_generators(mask: int, group) -> list[int]:
    gens: list[int] = []
    closed = 1 << group.id
    for x in mask_bits(mask):
        if not (closed >> x) & 1:
            gens.append(x)
            closed = close_under_mul(closed | (1 << x), group.mul)
            if closed == mask:
                break
    return gens


def sectional_limit_rank(
    ring: BurnsideRing, oracle_bits: int = DEFAULT_ORACLE_BITS
) -> UnitGroupDescription:
    """Rank via the inverse limit over sections with limit-family quotients.

    Variables: coordinates of each section class's form in a basis of the
    quotient's unit-form space (from the oracle on the small quotient).
    Constraints: (a) lifting compatibility between nested sections,
    transported to class representatives; (b) invariance under the
    representative pair's stabilizer.
    """
    table = ring.table
    G = ring.group
    classes = enumerate_sections(table, keep=lambda lab: lab.in_limit_class(), with_members=True)
    pair_to: dict[tuple[int, int], tuple[int, int]] = {}
    for i, sc in enumerate(classes):
        for t, s, g in sc.members:
            pair_to[(t, s)] = (i, g)
    blocks = []
    offset = 0
    for sc in classes:
        q_ring = section_ring(sc.rep)
        desc = units_oracle(q_ring, max_bits=oracle_bits)
        blocks.append((offset, desc.form_basis, q_ring))
        offset += len(desc.form_basis)
    total = offset
    subs = table.subgroups
    rows: set[int] = set()

    def block_row(i: int, a: int, b: int) -> int:
        off, basis, _ = blocks[i]
        row = 0
        for t, vec in enumerate(basis):
            if ((vec >> a) ^ (vec >> b)) & 1:
                row |= 1 << (off + t)
        return row

    for i, sc in enumerate(classes):
        sec = sc.rep
        t_mask = subs[sec.t_index].mask
        s_mask = subs[sec.s_index].mask
        q_i = blocks[i][2]
        between = [
            s2.mask
            for s2 in subs
            if s_mask & ~s2.mask == 0 and s2.mask & ~t_mask == 0
        ]
        # (b) invariance under the stabilizer of the representative pair
        for x in _greedy_generators(sc.stabilizer_mask, G):
            xi = G.inv[x]
            row = 0
            for u_mask in between:
                a = q_i.table.class_of_mask(sec.project_mask(u_mask))
                b = q_i.table.class_of_mask(sec.project_mask(table.conjugate_mask(u_mask, xi)))
                if a != b:
                    rows.add(block_row(i, a, b))
        # (a) compatibility with every contained limit section
        for (t2, s2), (j, g) in pair_to.items():
            if (t2, s2) == (sec.t_index, sec.s_index):
                continue
            tm, sm = subs[t2].mask, subs[s2].mask
            if s_mask & ~sm or sm & ~tm or tm & ~t_mask:
                continue
            off_j, basis_j, q_j = blocks[j]
            sec_j = classes[j].rep
            gi = G.inv[g]
            off_i, basis_i, _ = blocks[i]
            for u_mask in between:
                if sm & ~u_mask or u_mask & ~tm:
                    continue
                a = q_i.table.class_of_mask(sec.project_mask(u_mask))
                b = q_j.table.class_of_mask(
                    sec_j.project_mask(table.conjugate_mask(u_mask, gi))
                )
                row = 0
                for t, vec in enumerate(basis_i):
                    if (vec >> a) & 1:
                        row |= 1 << (off_i + t)
                for t, vec in enumerate(basis_j):
                    if (vec >> b) & 1:
                        row ^= 1 << (off_j + t)
                if row:
                    rows.add(row)

    solutions = gf2.nullspace(rows, total)
    # Read each solution back to a form on G: phi(G/U) is the coordinate of
    # the (U, U) section, whose quotient is trivial with one unit coordinate.
    forms = []
    for sol in solutions:
        bits = 0
        for c in range(table.n_classes):
            u_idx = table.class_reps[c]
            j, _ = pair_to[(u_idx, u_idx)]
            off_j, basis_j, _ = blocks[j]
            assert len(basis_j) == 1
            if (sol >> off_j) & 1:
                bits |= 1 << c
        forms.append(bits)
    return UnitGroupDescription(
        method="limit",
        rank=len(solutions),
        n_classes=table.n_classes,
        form_basis=gf2.rref(forms),
    )


# ---------------------------------------------------------------------------
# Faithful units.


def f1_dual_bits(ring: BurnsideRing, form_bits: int) -> int:
    """Action of the faithful projector on a form (it is its own opposite)."""
    mat = ring.f1_matrix
    nc = ring.n_classes
    out = 0
    for j in range(nc):
        acc = 0
        for i in range(nc):
            if (form_bits >> i) & 1:
                acc ^= mat[i][j] & 1
        out |= acc << j
    return out


def faithful_units(
    ring: BurnsideRing, max_bits: int = DEFAULT_ORACLE_BITS
) -> list[BurnsideElem]:
    """Units killed by every proper deflation: f1 fixes their iota image."""
    desc = units_oracle(ring, max_bits=max_bits)
    out = []
    for u in desc.unit_list:
        form = iota(ring, u)
        if f1_dual_bits(ring, form) == form:
            out.append(u)
    return out


# ---------------------------------------------------------------------------
# Cross-method driver.


def compute_ranks(
    ring: BurnsideRing,
    methods: list[str],
    oracle_bits: int = DEFAULT_ORACLE_BITS,
    skip_oracle_on_guard: bool = False,
) -> dict[str, Optional[UnitGroupDescription]]:
    """Run the requested methods; oracle may be skipped when over guard."""
    out: dict[str, Optional[UnitGroupDescription]] = {}
    for method in methods:
        if method == "oracle":
            if ring.n_classes > oracle_bits and skip_oracle_on_guard:
                out[method] = None
                continue
            out[method] = units_oracle(ring, max_bits=oracle_bits)
        elif method == "yoshida":
            out[method] = yoshida_rank(ring)
        elif method == "sections":
            out[method] = theorem_image_rank(ring)
        elif method == "limit":
            out[method] = sectional_limit_rank(ring, oracle_bits=oracle_bits)
        else:
            raise ValueError(f"unknown method {method!r}")
    return out
