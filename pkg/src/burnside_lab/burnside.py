"""Burnside ring arithmetic over conjugacy classes of subgroups.

The basis of B(G) is indexed by the subgroup classes of the owning
SubgroupTable, sorted by (order, mask).  The table of marks is lower
triangular in that order, so ghost vectors are resolved by exact
back-substitution.  Rational coefficients (Fractions) appear only in the
primitive idempotents.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Union

from .groups import (
    FAMILY_CYCLIC,
    FAMILY_DIHEDRAL,
    FAMILY_KLEIN4,
    FAMILY_ODD_PRIME_CYCLIC,
    FAMILY_SEMIDIHEDRAL,
    Group,
    close_under_mul,
)
from .lattice import SubgroupTable, all_subgroups, moebius, MoebiusTable

Coeff = Union[int, Fraction]


class NotInEpsilonFamily(ValueError):
    """The group has no distinguished epsilon element."""


@dataclass(frozen=True)
class BurnsideElem:
    ring: "BurnsideRing"
    coeffs: tuple

    def __add__(self, other: "BurnsideElem") -> "BurnsideElem":
        assert self.ring is other.ring
        return BurnsideElem(self.ring, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: "BurnsideElem") -> "BurnsideElem":
        assert self.ring is other.ring
        return BurnsideElem(self.ring, tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self) -> "BurnsideElem":
        return BurnsideElem(self.ring, tuple(-a for a in self.coeffs))

    def __mul__(self, other: "BurnsideElem") -> "BurnsideElem":
        return self.ring.mul(self, other)

    def scaled(self, k: Coeff) -> "BurnsideElem":
        return BurnsideElem(self.ring, tuple(k * a for a in self.coeffs))

    def marks(self) -> tuple:
        return self.ring.marks(self)

    def is_integral(self) -> bool:
        return all(isinstance(a, int) or a.denominator == 1 for a in self.coeffs)

    def mod2_bits(self) -> int:
        """Image in GF(2)B(G) as a bitmask over classes (integral elements only)."""
        mask = 0
        for i, a in enumerate(self.coeffs):
            n = a if isinstance(a, int) else a.numerator  # denominator 1 enforced
            if not isinstance(a, int) and a.denominator != 1:
                raise ValueError("reduction mod 2 needs integral coefficients")
            if n & 1:
                mask |= 1 << i
        return mask

    def as_dict(self) -> dict[str, Coeff]:
        names = self.ring.table.class_names()
        return {names[i]: a for i, a in enumerate(self.coeffs) if a != 0}


class BurnsideRing:
    """B(G) with its table of marks and derived machinery."""

    def __init__(self, group: Group, table: Optional[SubgroupTable] = None):
        self.group = group
        self._table = table
        self._marks: Optional[list[list[int]]] = None
        self._columns: Optional[list[list[tuple[int, int]]]] = None
        self._moebius: Optional[MoebiusTable] = None
        self._f1: Optional[list[list[int]]] = None

    @property
    def table(self) -> SubgroupTable:
        if self._table is None:
            self._table = all_subgroups(self.group)
        return self._table

    @property
    def n_classes(self) -> int:
        return self.table.n_classes

    @property
    def moebius_table(self) -> MoebiusTable:
        if self._moebius is None:
            self._moebius = moebius(self.table)
        return self._moebius

    # -- table of marks ------------------------------------------------------

    @property
    def mark_matrix(self) -> list[list[int]]:
        """m[h][k] = number of fixed points of class-k's rep on G/H_h."""
        if self._marks is None:
            table = self.table
            G = self.group
            nc = table.n_classes
            k_masks = [table.rep_subgroup(k).mask for k in range(nc)]
            m = [[0] * nc for _ in range(nc)]
            for h in range(nc):
                h_mask = table.rep_subgroup(h).mask
                h_elems = table.elements(table.class_reps[h])
                visited = 0
                reps = []
                for g in range(G.order):
                    if (visited >> g) & 1:
                        continue
                    reps.append(g)
                    for x in h_elems:
                        visited |= 1 << G.mul[g][x]
                row = m[h]
                for g in reps:
                    gi = G.inv[g]
                    for k in range(h + 1):
                        if table.conjugate_mask(k_masks[k], gi) & ~h_mask == 0:
                            row[k] += 1
            self._marks = m
            self._columns = [
                [(j, m[j][k]) for j in range(k + 1, nc) if m[j][k]] for k in range(nc)
            ]
        return self._marks

    def marks(self, x: BurnsideElem) -> tuple:
        m = self.mark_matrix
        nc = self.n_classes
        nz = [(j, c) for j, c in enumerate(x.coeffs) if c]
        out = []
        for k in range(nc):
            acc = 0
            for j, c in nz:
                mjk = m[j][k]
                if mjk:
                    acc += c * mjk
            out.append(acc)
        return tuple(out)

    def _solve_marks(self, target: Sequence) -> Optional[list]:
        """Back-substitute marks(x) = target; exact, None when impossible."""
        m = self.mark_matrix
        cols = self._columns
        nc = self.n_classes
        coeffs: list = [0] * nc
        nonzero: list[int] = []
        for k in range(nc - 1, -1, -1):
            acc = target[k]
            for j in nonzero:
                mjk = m[j][k]
                if mjk:
                    acc -= coeffs[j] * mjk
            diag = m[k][k]
            if isinstance(acc, int):
                if acc % diag:
                    c = Fraction(acc, diag)
                else:
                    c = acc // diag
            else:
                c = acc / diag
                if c.denominator == 1:
                    c = int(c)
            if c:
                coeffs[k] = c
                nonzero.append(k)
        return coeffs

    # -- ring structure ------------------------------------------------------

    def elem(self, coeffs: Sequence[Coeff]) -> BurnsideElem:
        assert len(coeffs) == self.n_classes
        return BurnsideElem(self, tuple(coeffs))

    def zero(self) -> BurnsideElem:
        return self.elem([0] * self.n_classes)

    def basis(self, class_index: int) -> BurnsideElem:
        coeffs = [0] * self.n_classes
        coeffs[class_index] = 1
        return self.elem(coeffs)

    def one(self) -> BurnsideElem:
        return self.basis(self.n_classes - 1)  # G/G: the whole group sorts last

    def mul(self, x: BurnsideElem, y: BurnsideElem) -> BurnsideElem:
        assert x.ring is self and y.ring is self
        mx, my = self.marks(x), self.marks(y)
        product = [a * b for a, b in zip(mx, my)]
        coeffs = self._solve_marks(product)
        if x.is_integral() and y.is_integral():
            if any(isinstance(c, Fraction) for c in coeffs):
                raise ArithmeticError("non-integral product of integral elements")
        return self.elem(coeffs)

    def ghost_to_burnside(self, signs: Sequence[int]) -> Optional[BurnsideElem]:
        """The element with the given +-1 ghost vector, or None if not integral."""
        if any(s not in (1, -1) for s in signs):
            raise ValueError("ghost entries must be +-1")
        coeffs = self._solve_marks(list(signs))
        if any(isinstance(c, Fraction) for c in coeffs):
            return None
        return self.elem(coeffs)

    # -- idempotents and distinguished elements ------------------------------

    def idempotent(self, class_index: int) -> BurnsideElem:
        """Primitive rational idempotent supported at the given class."""
        table = self.table
        mu = self.moebius_table
        h_index = table.class_reps[class_index]
        h_mask = table.subgroups[h_index].mask
        norm = table.subgroups[table.normalizer_of_rep[class_index]].order
        coeffs: list[Coeff] = [Fraction(0)] * self.n_classes
        for l_index, l_sub in enumerate(table.subgroups):
            if l_sub.mask & ~h_mask:
                continue
            mu_lh = mu.value(l_index, h_index)
            if mu_lh:
                c = table.class_of[l_index]
                coeffs[c] += Fraction(l_sub.order * mu_lh, norm)
        return self.elem(coeffs)

    def epsilon(self) -> tuple[BurnsideElem, int]:
        """Distinguished element and its GF(2) image, for the epsilon families."""
        from .groups import classify

        label = classify(self.group)
        if not label.in_epsilon_class():
            raise NotInEpsilonFamily(f"{self.group.name} has no epsilon element")
        table = self.table
        nc = self.n_classes
        trivial = 0
        whole = nc - 1
        coeffs = [0] * nc
        if label.family == FAMILY_ODD_PRIME_CYCLIC:
            coeffs[trivial] = 1
            coeffs[whole] = -1
        elif label.family == FAMILY_CYCLIC:  # C4
            (s,) = [c for c in range(nc) if table.rep_subgroup(c).order == 2]
            coeffs[trivial] = 1
            coeffs[s] = -1
        elif label.family == FAMILY_KLEIN4:
            coeffs[trivial] = 1
            for c in range(nc):
                if table.rep_subgroup(c).order == 2:
                    coeffs[c] = -1
            coeffs[whole] = 2
        else:  # dihedral or semidihedral
            center = self.group.center_mask()
            noncentral = [
                c
                for c in range(nc)
                if table.rep_subgroup(c).order == 2
                and table.rep_subgroup(c).mask & ~center
            ]
            z_join = {
                c: table.class_of_mask(
                    close_under_mul(table.rep_subgroup(c).mask | center, self.group.mul)
                )
                for c in noncentral
            }
            if label.family == FAMILY_SEMIDIHEDRAL:
                (i,) = noncentral
                coeffs[i] = 1
                coeffs[z_join[i]] = -1
            else:
                i, j = self._dihedral_reflection_classes(noncentral)
                coeffs[i] += 1
                coeffs[z_join[i]] -= 1
                coeffs[j] -= 1
                coeffs[z_join[j]] += 1
        elem = self.elem(coeffs)
        return elem, elem.mod2_bits()

    def _dihedral_reflection_classes(self, noncentral: list[int]) -> tuple[int, int]:
        """Order the two reflection classes; the designated generator leads."""
        assert len(noncentral) == 2, "dihedral group needs two reflection classes"
        table = self.table
        d = self.group.designated_involution
        if d is not None:
            d_mask = (1 << self.group.id) | (1 << d)
            d_class = table.class_of_mask(d_mask)
            if d_class == noncentral[1]:
                return noncentral[1], noncentral[0]
        return noncentral[0], noncentral[1]

    # -- faithful projector ---------------------------------------------------

    @property
    def f1_matrix(self) -> list[list[int]]:
        """Matrix of the faithful idempotent: G/K -> sum_N mu(1,N) G/KN."""
        if self._f1 is None:
            table = self.table
            mu_n = self.moebius_table.mu_normal
            nc = self.n_classes
            mat = [[0] * nc for _ in range(nc)]
            for k in range(nc):
                k_mask = table.rep_subgroup(k).mask
                for n_index, mu in mu_n.items():
                    if not mu:
                        continue
                    kn = close_under_mul(k_mask | table.subgroups[n_index].mask, self.group.mul)
                    mat[table.class_of_mask(kn)][k] += mu
            self._f1 = mat
        return self._f1

    def f1_apply(self, x: BurnsideElem) -> BurnsideElem:
        mat = self.f1_matrix
        nc = self.n_classes
        out: list = [0] * nc
        for k, c in enumerate(x.coeffs):
            if not c:
                continue
            for i in range(nc):
                if mat[i][k]:
                    out[i] += mat[i][k] * c
        return self.elem(out)

    def f1_apply_bits(self, bits: int) -> int:
        mat = self.f1_matrix
        nc = self.n_classes
        out = 0
        for i in range(nc):
            row = mat[i]
            acc = 0
            for k in range(nc):
                if (bits >> k) & 1:
                    acc ^= row[k] & 1
            out |= acc << i
        return out


_ring_cache: dict[int, BurnsideRing] = {}


def ring_of(group: Group, table: Optional[SubgroupTable] = None) -> BurnsideRing:
    """Shared BurnsideRing per Group instance."""
    got = _ring_cache.get(id(group))
    if got is None:
        got = BurnsideRing(group, table)
        _ring_cache[id(group)] = got
    return got
