"""Finite groups as explicit multiplication tables, with preset families.

Elements are integers 0..order-1.  Groups are built once (from a preset
spec string, from permutation generators, or as quotients) and never
mutated afterwards, so they are safe to share between computations.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from itertools import permutations
from typing import Callable, Iterable, Optional, Sequence

DEFAULT_ELEMENT_GUARD = 10000


class SpecParseError(ValueError):
    """Malformed group spec string."""


class UnsupportedSpecError(SpecParseError):
    """Spec names a family member outside the supported range."""


class GuardExceeded(RuntimeError):
    """A configured size guard (elements, subgroups, oracle bits) was hit."""


class Group:
    """Immutable finite group with full multiplication table.

    `mul[a][b]` is the index of a*b, `inv[a]` of a^-1.  `generators` is a
    (possibly redundant) generating list of element indices.
    """

    __slots__ = (
        "order",
        "mul",
        "inv",
        "id",
        "generators",
        "element_labels",
        "name",
        "factors",
        "designated_involution",
        "_orders",
        "_abelian",
    )

    def __init__(
        self,
        mul: Sequence[Sequence[int]],
        generators: Sequence[int],
        name: str = "",
        element_labels: Optional[Sequence[str]] = None,
    ) -> None:
        self.order = len(mul)
        self.mul = tuple(tuple(row) for row in mul)
        self.name = name or f"G{self.order}"
        self.generators = tuple(generators)
        self.element_labels = tuple(element_labels) if element_labels else None
        self.factors = None  # set for direct products: (left Group, right Group)
        self.designated_involution = None  # set by dihedral presets
        self._orders = None
        self._abelian = None
        ident = None
        for e in range(self.order):
            if all(self.mul[e][x] == x for x in range(self.order)) and all(
                self.mul[x][e] == x for x in range(self.order)
            ):
                ident = e
                break
        if ident is None:
            raise ValueError("multiplication table has no identity")
        self.id = ident
        inv = [-1] * self.order
        for a in range(self.order):
            for b in range(self.order):
                if self.mul[a][b] == ident and self.mul[b][a] == ident:
                    inv[a] = b
                    break
            if inv[a] < 0:
                raise ValueError(f"element {a} has no inverse")
        self.inv = tuple(inv)

    def __repr__(self) -> str:
        return f"Group({self.name}, order={self.order})"

    def label(self, x: int) -> str:
        if self.element_labels is not None:
            return self.element_labels[x]
        return str(x)

    def conj(self, g: int, x: int) -> int:
        """g x g^-1."""
        return self.mul[self.mul[g][x]][self.inv[g]]

    def element_order(self, x: int) -> int:
        k, y = 1, x
        while y != self.id:
            y = self.mul[y][x]
            k += 1
        return k

    def element_orders(self) -> tuple[int, ...]:
        if self._orders is None:
            self._orders = tuple(self.element_order(x) for x in range(self.order))
        return self._orders

    def is_abelian(self) -> bool:
        if self._abelian is None:
            self._abelian = all(
                self.mul[a][b] == self.mul[b][a]
                for a in self.generators
                for b in self.generators
            )
        return self._abelian

    def center_mask(self) -> int:
        mask = 0
        for z in range(self.order):
            if all(self.mul[z][x] == self.mul[x][z] for x in range(self.order)):
                mask |= 1 << z
        return mask

    def minimal_generators(self) -> list[int]:
        """Greedy small generating set (used when labelling quotients)."""
        gens: list[int] = []
        closed = close_under_mul(1 << self.id, self.mul)
        for x in range(self.order):
            if not (closed >> x) & 1:
                gens.append(x)
                closed = close_under_mul(closed | (1 << x), self.mul)
                if closed.bit_count() == self.order:
                    break
        return gens


def close_under_mul(mask: int, mul: Sequence[Sequence[int]]) -> int:
    """Smallest submask containing `mask` and closed under the product."""
    members = [i for i in range(len(mul)) if (mask >> i) & 1]
    seen = mask
    i = 0
    while i < len(members):
        a = members[i]
        row_a = mul[a]
        i += 1
        for j in range(len(members)):
            b = members[j]
            for p in (row_a[b], mul[b][a]):
                if not (seen >> p) & 1:
                    seen |= 1 << p
                    members.append(p)
    return seen


def mask_bits(mask: int) -> list[int]:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


# ---------------------------------------------------------------------------
# Isomorphism-class labels for the families the algorithms care about.

FAMILY_TRIVIAL = "trivial"
FAMILY_CYCLIC = "cyclic"
FAMILY_ODD_PRIME_CYCLIC = "odd_prime_cyclic"
FAMILY_KLEIN4 = "klein4"
FAMILY_ELEM_ABELIAN_2 = "elem_abelian_2"
FAMILY_DIHEDRAL = "dihedral"
FAMILY_SEMIDIHEDRAL = "semidihedral"
FAMILY_QUATERNION = "quaternion"
FAMILY_OTHER = "other"


@dataclass(frozen=True)
class IsoClass:
    """Family label with a numeric parameter (group order, or rank for C2^k)."""

    family: str
    param: int = 0

    @property
    def short_name(self) -> str:
        f, p = self.family, self.param
        if f == FAMILY_TRIVIAL:
            return "C1"
        if f in (FAMILY_CYCLIC, FAMILY_ODD_PRIME_CYCLIC):
            return f"C{p}"
        if f == FAMILY_KLEIN4:
            return "V4"
        if f == FAMILY_ELEM_ABELIAN_2:
            return f"C2^{p}"
        if f == FAMILY_DIHEDRAL:
            return f"D{p}"
        if f == FAMILY_SEMIDIHEDRAL:
            return f"SD{p}"
        if f == FAMILY_QUATERNION:
            return f"Q{p}"
        return f"G{p}"

    def in_epsilon_class(self) -> bool:
        """Families that carry a distinguished epsilon element.

        Odd-prime cyclic, C4, Klein four, dihedral 2-groups of order >= 8
        and semidihedral 2-groups of order >= 16.
        """
        return (
            self.family == FAMILY_ODD_PRIME_CYCLIC
            or (self.family == FAMILY_CYCLIC and self.param == 4)
            or self.family == FAMILY_KLEIN4
            or (self.family == FAMILY_DIHEDRAL and self.param >= 8)
            or (self.family == FAMILY_SEMIDIHEDRAL and self.param >= 16)
        )

    def in_limit_class(self) -> bool:
        """Families admitted as section quotients in the inverse-limit method.

        The epsilon families together with every cyclic 2-group (including
        the trivial group) and the generalized quaternion 2-groups.
        """
        if self.in_epsilon_class():
            return True
        if self.family == FAMILY_TRIVIAL:
            return True
        if self.family == FAMILY_CYCLIC:
            p = self.param
            return p >= 1 and (p & (p - 1)) == 0
        return self.family == FAMILY_QUATERNION


def _is_odd_prime(n: int) -> bool:
    if n < 3 or n % 2 == 0:
        return False
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def _classify_profile(order: int, elem_orders: Sequence[int], abelian: bool) -> IsoClass:
    if order == 1:
        return IsoClass(FAMILY_TRIVIAL, 1)
    max_order = max(elem_orders)
    if max_order == order:
        if _is_odd_prime(order):
            return IsoClass(FAMILY_ODD_PRIME_CYCLIC, order)
        return IsoClass(FAMILY_CYCLIC, order)
    if abelian and max_order == 2:
        k = order.bit_length() - 1
        if order == 1 << k:
            return IsoClass(FAMILY_KLEIN4, 2) if order == 4 else IsoClass(FAMILY_ELEM_ABELIAN_2, k)
        return IsoClass(FAMILY_OTHER, order)
    # Nonabelian 2-groups with a cyclic subgroup of index 2 split by
    # involution count: 2^(n-1)+1 dihedral, 2^(n-2)+1 semidihedral, 1 quaternion.
    if not abelian and order >= 8 and order & (order - 1) == 0:
        involutions = sum(1 for o in elem_orders if o == 2)
        if involutions == 1:
            return IsoClass(FAMILY_QUATERNION, order)
        if max_order == order // 2:
            if involutions == order // 2 + 1:
                return IsoClass(FAMILY_DIHEDRAL, order)
            if involutions == order // 4 + 1 and order >= 16:
                return IsoClass(FAMILY_SEMIDIHEDRAL, order)
    return IsoClass(FAMILY_OTHER, order)


def classify(G: Group) -> IsoClass:
    return _classify_profile(G.order, G.element_orders(), G.is_abelian())


def classify_subset(G: Group, elems: Sequence[int]) -> IsoClass:
    """Classify the subgroup consisting of the given element indices."""
    orders = G.element_orders()
    sub_orders = [orders[x] for x in elems]
    abelian = all(
        G.mul[a][b] == G.mul[b][a] for i, a in enumerate(elems) for b in elems[: i + 1]
    )
    return _classify_profile(len(elems), sub_orders, abelian)


# ---------------------------------------------------------------------------
# Preset builders.


def _group_from_pairs(
    elems: list,
    mul_fn: Callable,
    gens: list,
    name: str,
    labels: Optional[Callable] = None,
) -> Group:
    index = {e: i for i, e in enumerate(elems)}
    table = [[index[mul_fn(a, b)] for b in elems] for a in elems]
    label_list = [labels(e) for e in elems] if labels else None
    return Group(table, [index[g] for g in gens], name=name, element_labels=label_list)


def cyclic_group(n: int) -> Group:
    if n < 1:
        raise SpecParseError("cyclic order must be positive")
    table = [[(a + b) % n for b in range(n)] for a in range(n)]
    gens = [1 % n] if n > 1 else []
    labels = ["e"] + [f"g{i}" if i > 1 else "g" for i in range(1, n)]
    return Group(table, gens, name=f"C{n}", element_labels=labels)


def dihedral_group(order: int) -> Group:
    # order 2m: pairs (i, j) = r^i s^j, with s r s^-1 = r^-1.
    if order < 4 or order % 2:
        raise UnsupportedSpecError(f"dihedral preset needs even order >= 4, got {order}")
    if order & (order - 1):
        raise UnsupportedSpecError(f"dihedral preset supports 2-power orders only, got {order}")
    m = order // 2
    elems = [(i, j) for j in range(2) for i in range(m)]

    def mul(a, b):
        i1, j1 = a
        i2, j2 = b
        return ((i1 + (i2 if j1 == 0 else -i2)) % m, j1 ^ j2)

    def label(e):
        i, j = e
        return ("r" + (str(i) if i > 1 else "")) * (i > 0) + "s" * j or "e"

    G = _group_from_pairs(elems, mul, [(1, 0), (0, 1)], name=f"D{order}", labels=label)
    G.designated_involution = m  # index of s = (0, 1)
    return G


def semidihedral_group(order: int) -> Group:
    if order < 16 or order & (order - 1):
        raise UnsupportedSpecError(f"semidihedral preset needs order 2^n >= 16, got {order}")
    m = order // 2
    k = m // 2 - 1  # s r s^-1 = r^k

    def mul(a, b):
        i1, j1 = a
        i2, j2 = b
        return ((i1 + (i2 if j1 == 0 else k * i2)) % m, j1 ^ j2)

    elems = [(i, j) for j in range(2) for i in range(m)]
    return _group_from_pairs(elems, mul, [(1, 0), (0, 1)], name=f"SD{order}")


def quaternion_group(order: int) -> Group:
    if order < 8 or order & (order - 1):
        raise UnsupportedSpecError(f"quaternion preset needs order 2^n >= 8, got {order}")
    m = order // 2

    def mul(a, b):
        i1, j1 = a
        i2, j2 = b
        i = (i1 + (i2 if j1 == 0 else -i2)) % m
        if j1 and j2:
            i = (i + m // 2) % m
        return (i, j1 ^ j2)

    elems = [(i, j) for j in range(2) for i in range(m)]
    return _group_from_pairs(elems, mul, [(1, 0), (0, 1)], name=f"Q{order}")


def elementary_abelian_group(k: int) -> Group:
    if k < 1:
        raise SpecParseError("elementary abelian rank must be >= 1")
    n = 1 << k
    table = [[a ^ b for b in range(n)] for a in range(n)]
    return Group(table, [1 << i for i in range(k)], name=f"C2^{k}")


def symmetric_group(n: int) -> Group:
    if not 1 <= n <= 6:
        raise UnsupportedSpecError(f"symmetric preset supports n <= 6, got {n}")
    elems = list(permutations(range(n)))

    def mul(p, q):  # (p*q)(x) = p(q(x))
        return tuple(p[q[x]] for x in range(n))

    gens = []
    if n >= 2:
        gens.append(tuple([1, 0] + list(range(2, n))))
    if n >= 3:
        gens.append(tuple(list(range(1, n)) + [0]))
    return _group_from_pairs(elems, mul, gens or [elems[0]], name=f"S{n}")


def alternating_group(n: int) -> Group:
    if not 1 <= n <= 6:
        raise UnsupportedSpecError(f"alternating preset supports n <= 6, got {n}")

    def parity(p):
        seen, par = set(), 0
        for i in range(len(p)):
            if i in seen:
                continue
            j, ln = i, 0
            while j not in seen:
                seen.add(j)
                j = p[j]
                ln += 1
            par ^= (ln - 1) & 1
        return par

    elems = [p for p in permutations(range(n)) if parity(p) == 0]

    def mul(p, q):
        return tuple(p[q[x]] for x in range(n))

    gens = []
    if n >= 3:
        gens.append(tuple([1, 2, 0] + list(range(3, n))))
    if n >= 4:
        if n % 2:
            gens.append(tuple(list(range(1, n)) + [0]))
        else:
            gens.append(tuple([0] + list(range(2, n)) + [1]))
    return _group_from_pairs(elems, mul, gens or [elems[0]], name=f"A{n}")


def product_group(G1: Group, G2: Group) -> Group:
    """Direct product; element (a, b) is encoded as a*|G2| + b."""
    n1, n2 = G1.order, G2.order
    table = []
    for a in range(n1 * n2):
        a1, a2 = divmod(a, n2)
        row1, row2 = G1.mul[a1], G2.mul[a2]
        table.append([row1[b // n2] * n2 + row2[b % n2] for b in range(n1 * n2)])
    gens = [g * n2 + G2.id for g in G1.generators] + [G1.id * n2 + g for g in G2.generators]
    G = Group(table, gens, name=f"{G1.name}x{G2.name}")
    G.factors = (G1, G2)
    return G


def build_from_permutations(
    degree: int,
    gens: Sequence[Sequence[Sequence[int]]],
    element_guard: int = DEFAULT_ELEMENT_GUARD,
    name: str = "",
) -> Group:
    """Close permutation generators (lists of cycles on points 1..degree).

    Example: degree 3, gens [[(1, 2)], [(1, 2, 3)]] builds S3.
    """
    if degree < 1:
        raise SpecParseError("degree must be positive")
    perms = []
    for cycles in gens:
        p = list(range(degree))
        for cyc in cycles:
            for pt in cyc:
                if not 1 <= pt <= degree:
                    raise SpecParseError(f"cycle point {pt} outside 1..{degree}")
            if len(set(cyc)) != len(cyc):
                raise SpecParseError("repeated point in cycle")
            for i, pt in enumerate(cyc):
                p[pt - 1] = cyc[(i + 1) % len(cyc)] - 1
        perms.append(tuple(p))
    ident = tuple(range(degree))
    elems = [ident]
    index = {ident: 0}
    i = 0
    while i < len(elems):
        p = elems[i]
        i += 1
        for q in perms:
            r = tuple(p[q[x]] for x in range(degree))
            if r not in index:
                if len(elems) >= element_guard:
                    raise GuardExceeded(
                        f"permutation closure exceeded {element_guard} elements"
                    )
                index[r] = len(elems)
                elems.append(r)
            r2 = tuple(q[p[x]] for x in range(degree))
            if r2 not in index:
                if len(elems) >= element_guard:
                    raise GuardExceeded(
                        f"permutation closure exceeded {element_guard} elements"
                    )
                index[r2] = len(elems)
                elems.append(r2)

    def mul(p, q):
        return tuple(p[q[x]] for x in range(degree))

    return _group_from_pairs(
        elems, mul, [tuple(p) for p in perms] or [ident], name=name or f"perm{degree}"
    )


# ---------------------------------------------------------------------------
# Spec-string parsing.
#
# Grammar: C<n> | D<n> | SD<n> | Q<n> | C2^<k> | S<n> | A<n>, products joined
# by `x` (left-associative), or perm:<degree>:<cycles;semicolon-separated>.

_ATOM_RE = re.compile(r"^(C2\^|C|D|SD|Q|S|A)(\d+)$")
_CYCLE_RE = re.compile(r"\(([^()]*)\)")


def _build_atom(spec: str, element_guard: int) -> Group:
    m = _ATOM_RE.match(spec)
    if not m:
        raise SpecParseError(f"unrecognized group spec {spec!r}")
    kind, n = m.group(1), int(m.group(2))
    if kind == "C":
        G = cyclic_group(n)
    elif kind == "C2^":
        G = elementary_abelian_group(n)
    elif kind == "D":
        G = dihedral_group(n)
    elif kind == "SD":
        G = semidihedral_group(n)
    elif kind == "Q":
        G = quaternion_group(n)
    elif kind == "S":
        G = symmetric_group(n)
    else:
        G = alternating_group(n)
    if G.order > element_guard:
        raise GuardExceeded(f"group {spec} exceeds element guard {element_guard}")
    return G


def _parse_perm_spec(spec: str, element_guard: int) -> Group:
    parts = spec.split(":", 2)
    if len(parts) != 3:
        raise SpecParseError("perm spec must look like perm:<degree>:<cycles;...>")
    try:
        degree = int(parts[1])
    except ValueError as exc:
        raise SpecParseError(f"bad degree {parts[1]!r}") from exc
    gens = []
    for chunk in parts[2].split(";"):
        chunk = chunk.strip()
        if not chunk:
            continue
        cycles = []
        for m in _CYCLE_RE.finditer(chunk):
            pts = [p for p in re.split(r"[,\s]+", m.group(1).strip()) if p]
            try:
                cycles.append(tuple(int(p) for p in pts))
            except ValueError as exc:
                raise SpecParseError(f"bad cycle {m.group(0)!r}") from exc
        if _CYCLE_RE.sub("", chunk).strip():
            raise SpecParseError(f"unparsed characters in generator {chunk!r}")
        gens.append(cycles)
    if not gens:
        raise SpecParseError("perm spec has no generators")
    return build_from_permutations(degree, gens, element_guard=element_guard, name=spec)


def build_preset(spec: str, element_guard: int = DEFAULT_ELEMENT_GUARD) -> Group:
    """Build a group from its spec string (see module docstring grammar)."""
    s = spec.strip()
    if not s:
        raise SpecParseError("empty group spec")
    if s.startswith("perm:"):
        return _parse_perm_spec(s, element_guard)
    G = None
    for atom in s.split("x"):
        atom = atom.strip()
        if not atom:
            raise SpecParseError(f"empty factor in {spec!r}")
        H = _build_atom(atom, element_guard)
        G = H if G is None else product_group(G, H)
        if G.order > element_guard:
            raise GuardExceeded(f"group {spec} exceeds element guard {element_guard}")
    assert G is not None
    return G


# ---------------------------------------------------------------------------
# Quotients.


class NotNormalError(ValueError):
    pass


def subquotient_group(
    G: Group, member_elems: Sequence[int], normal_mask: int, name: str = ""
) -> tuple[Group, dict[int, int]]:
    """Quotient of the subgroup on `member_elems` by the subgroup `normal_mask`.

    Returns the quotient Group and the projection {member element -> index}.
    """
    mul = G.mul
    members = list(member_elems)
    member_mask = 0
    for x in members:
        member_mask |= 1 << x
    if normal_mask & ~member_mask:
        raise ValueError("normal subgroup not contained in the subgroup")
    n_elems = mask_bits(normal_mask)
    for t in members:
        ti = G.inv[t]
        for s in n_elems:
            if not (normal_mask >> mul[mul[t][s]][ti]) & 1:
                raise NotNormalError("subgroup is not normal")
    coset_key: dict[int, int] = {}
    keys = []
    for x in members:
        if x in coset_key:
            continue
        coset = sorted(mul[x][s] for s in n_elems)
        key = coset[0]
        keys.append(key)
        for y in coset:
            coset_key[y] = key
    keys.sort()
    key_index = {k: i for i, k in enumerate(keys)}
    proj = {x: key_index[coset_key[x]] for x in members}
    table = [[proj[mul[a][b]] for b in keys] for a in keys]
    # Generators: images of a greedy generating set of the subgroup.
    sub_gens = []
    seen_mask = normal_mask
    for x in members:
        if not (seen_mask >> x) & 1:
            sub_gens.append(x)
            seen_mask = close_under_mul(seen_mask | (1 << x), mul)
            if seen_mask == member_mask:
                break
    id_index = proj[n_elems[0]]  # the coset of the identity is the normal subgroup
    gens = sorted({proj[x] for x in sub_gens} - {id_index})
    Q = Group(table, gens, name=name)
    return Q, proj


def quotient_group(G: Group, normal_mask: int) -> tuple[Group, list[int]]:
    """Quotient of G by a normal subgroup given as an element bitmask.

    Returns the quotient and the projection as a list over all of G.
    """
    Q, proj = subquotient_group(G, list(range(G.order)), normal_mask, name=f"{G.name}/N")
    return Q, [proj[x] for x in range(G.order)]
