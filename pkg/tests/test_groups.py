import random

import pytest

from burnside_lab import groups as gr


def brute_involutions_semidihedral(order):
    # straight from the presentation: elements r^i s^j with s r s = r^(m/2 - 1)
    m = order // 2
    k = m // 2 - 1
    count = 0
    for i in range(m):
        if (2 * i) % m == 0 and i != 0:
            count += 1  # rotations
        if ((k + 1) * i) % m == 0:
            count += 1  # (s r^i)^2 = r^((k+1) i)
    return count


def test_preset_orders_and_families():
    cases = {
        "C1": 1,
        "C4": 4,
        "C15": 15,
        "D8": 8,
        "SD16": 16,
        "Q8": 8,
        "C2^3": 8,
        "S3": 6,
        "S4": 24,
        "A4": 12,
        "A5": 60,
        "D8xC3": 24,
        "C3xC3": 9,
    }
    for spec, order in cases.items():
        assert gr.build_preset(spec).order == order


def test_sd16_involution_count_matches_presentation():
    G = gr.build_preset("SD16")
    got = sum(1 for o in G.element_orders() if o == 2)
    assert got == brute_involutions_semidihedral(16) == 5


def test_quaternion_single_involution():
    for order in (8, 16, 32):
        G = gr.build_preset(f"Q{order}")
        assert sum(1 for o in G.element_orders() if o == 2) == 1


def test_cyclic_has_single_generator_of_full_order():
    G = gr.build_preset("C4")
    assert len(G.generators) == 1
    assert G.element_order(G.generators[0]) == 4


def test_group_axioms_exhaustive_small():
    for spec in ["C6", "D8", "Q8", "S3", "C2^3"]:
        G = gr.build_preset(spec)
        n = G.order
        for a in range(n):
            for b in range(n):
                assert G.mul[G.inv[a]][a] == G.id
                for c in range(n):
                    assert G.mul[G.mul[a][b]][c] == G.mul[a][G.mul[b][c]]


@pytest.mark.parametrize("spec", ["SD32", "D32", "S4", "A5", "C2^4", "D8xC3"])
def test_group_axioms_sampled(spec):
    G = gr.build_preset(spec)
    rng = random.Random(42)
    for _ in range(2000):
        a, b, c = (rng.randrange(G.order) for _ in range(3))
        assert G.mul[G.mul[a][b]][c] == G.mul[a][G.mul[b][c]]
        assert G.mul[a][G.id] == a
        assert G.mul[a][G.inv[a]] == G.id


def test_classify_round_trip_up_to_512():
    specs = (
        [f"C{n}" for n in range(1, 65)]
        + [f"D{1 << k}" for k in range(2, 10)]
        + [f"SD{1 << k}" for k in range(4, 10)]
        + [f"Q{1 << k}" for k in range(3, 10)]
        + [f"C2^{k}" for k in range(1, 10)]
    )
    for spec in specs:
        G = gr.build_preset(spec)
        if G.order > 512:
            continue
        label = gr.classify(G)
        if spec.startswith("C2^"):
            k = int(spec[3:])
            expected = {1: "C2", 2: "V4"}.get(k, spec)
        elif spec == "D4":
            expected = "V4"  # degenerate dihedral preset is the Klein group
        else:
            expected = spec
        assert label.short_name == expected, spec


def test_epsilon_and_limit_class_membership():
    in_r = ["C3", "C5", "C4", "C2^2", "D8", "D16", "SD16", "SD32"]
    not_in_r = ["C1", "C2", "C8", "C9", "C15", "Q8", "Q16", "C2^3", "S3"]
    for spec in in_r:
        assert gr.classify(gr.build_preset(spec)).in_epsilon_class(), spec
    for spec in not_in_r:
        assert not gr.classify(gr.build_preset(spec)).in_epsilon_class(), spec
    in_t = in_r + ["C1", "C2", "C8", "C16", "Q8", "Q16"]
    not_in_t = ["C6", "C9", "C15", "C2^3", "S3", "S4", "A4", "D8xC3"]
    for spec in in_t:
        assert gr.classify(gr.build_preset(spec)).in_limit_class(), spec
    for spec in not_in_t:
        assert not gr.classify(gr.build_preset(spec)).in_limit_class(), spec


def test_build_from_permutations_s3():
    G = gr.build_from_permutations(3, [[(1, 2)], [(1, 2, 3)]])
    assert G.order == 6
    assert not G.is_abelian()


def test_build_from_permutations_c4():
    G = gr.build_from_permutations(4, [[(1, 2, 3, 4)]])
    assert G.order == 4
    assert gr.classify(G).short_name == "C4"


def test_build_from_permutations_q8_regular():
    # regular representation on {1,-1,i,-i,j,-j,k,-k}
    left_i = [(1, 3, 2, 4), (5, 7, 6, 8)]
    left_j = [(1, 5, 2, 6), (3, 8, 4, 7)]
    G = gr.build_from_permutations(8, [left_i, left_j])
    assert G.order == 8
    assert sum(1 for o in G.element_orders() if o == 2) == 1
    assert gr.classify(G).short_name == "Q8"


def test_permutation_guard():
    with pytest.raises(gr.GuardExceeded):
        gr.build_from_permutations(9, [[(1, 2)], [(1, 2, 3, 4, 5, 6, 7, 8, 9)]], element_guard=100)


def test_spec_errors():
    for bad in ["", "Cx", "C", "foo", "C4x", "perm:3", "perm:x:(1 2)", "perm:3:(1 a)"]:
        with pytest.raises(gr.SpecParseError):
            gr.build_preset(bad)
    for unsupported in ["SD8", "Q4", "D6", "S7", "A9", "SD24"]:
        with pytest.raises(gr.UnsupportedSpecError):
            gr.build_preset(unsupported)


def test_quotient_c4_by_c2():
    G = gr.build_preset("C4")
    n_mask = (1 << 0) | (1 << 2)
    Q, proj = gr.quotient_group(G, n_mask)
    assert Q.order == 2
    for x in range(4):
        for y in range(4):
            assert proj[G.mul[x][y]] == Q.mul[proj[x]][proj[y]]


def test_quotient_d8_by_center_is_klein():
    G = gr.build_preset("D8")
    z = G.center_mask()
    Q, proj = gr.quotient_group(G, z)
    assert Q.order == 4
    # brute-force check on coset representatives: abelian with 3 involutions
    assert sum(1 for o in Q.element_orders() if o == 2) == 3
    assert gr.classify(Q).short_name == "V4"
    for x in range(8):
        for y in range(8):
            assert proj[G.mul[x][y]] == Q.mul[proj[x]][proj[y]]


def test_quotient_by_whole_group_is_trivial():
    for spec in ["C6", "D8"]:
        G = gr.build_preset(spec)
        Q, proj = gr.quotient_group(G, (1 << G.order) - 1)
        assert Q.order == 1
        assert set(proj) == {0}


def test_quotient_requires_normal():
    G = gr.build_preset("S3")
    # subgroup generated by a transposition is not normal
    t = next(x for x in range(6) if G.element_order(x) == 2)
    mask = (1 << G.id) | (1 << t)
    with pytest.raises(gr.NotNormalError):
        gr.quotient_group(G, mask)
