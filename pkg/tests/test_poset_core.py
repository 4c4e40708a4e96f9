import itertools

import pytest
from hypothesis import given, settings, strategies as st

from ordkit import (
    CycleError,
    ParseError,
    UnknownLabel,
    build_poset,
    enumerate_posets,
    format_poset_text,
    is_isomorphic,
    parse_poset_text,
    to_dot,
)
from ordkit.poset import bits


def chain(n):
    labels = [f"c{i}" for i in range(n)]
    return build_poset(labels, [(labels[i], labels[i + 1]) for i in range(n - 1)])


def antichain(n):
    return build_poset([f"a{i}" for i in range(n)], [])


class TestBuildPoset:
    def test_fig5_shape(self, figs):
        P = build_poset(["a", "b", "c", "1"], [("a", "1"), ("b", "1"), ("c", "1")])
        assert P.up == figs["fig5"].up

    def test_singleton(self):
        P = build_poset(["x"], [])
        assert P.size == 1 and P.top == 0 == P.bottom

    def test_cycle_raises(self):
        with pytest.raises(CycleError):
            build_poset(["a", "b"], [("a", "b"), ("b", "a")])

    def test_long_cycle_raises(self):
        with pytest.raises(CycleError):
            build_poset(["a", "b", "c"], [("a", "b"), ("b", "c"), ("c", "a")])

    def test_unknown_label(self):
        with pytest.raises(UnknownLabel):
            build_poset(["a"], [("a", "z")])

    def test_transitive_closure(self):
        P = chain(4)
        assert P.leq(0, 3)

    def test_duplicate_labels_rejected(self):
        with pytest.raises(ValueError):
            build_poset(["a", "a"], [])


class TestCones:
    def test_fig1_lower_cone_eg(self, figs):
        P = figs["fig1"]
        got = P.lower_cone(P.mask_of(["e", "g"]))
        assert set(P.names_of(got)) == {"a", "c"}

    def test_fig3_upper_cone_ab(self, figs):
        P = figs["fig3"]
        got = P.upper_cone(P.mask_of(["a", "b"]))
        assert set(P.names_of(got)) == {"d", "e", "1"}

    def test_empty_cones_are_everything(self, figs):
        for P in figs.values():
            assert P.lower_cone(0) == P.full
            assert P.upper_cone(0) == P.full

    def test_fig2_down_closure(self, figs):
        P = figs["fig2"]
        got = P.down_closure(P.mask_of(["a", "b"]))
        assert set(P.names_of(got)) == {"0", "a", "b"}

    def test_down_closure_empty(self, figs):
        assert figs["fig1"].down_closure(0) == 0

    def test_down_closure_of_top(self, figs):
        P = figs["fig3"]
        assert P.down_closure(1 << P.top) == P.full

    def test_galois_laws_exhaustive(self):
        # A <= LU(A), A <= UL(A), LUL = L, ULU = U over every subset
        for n in range(1, 6):
            for P in enumerate_posets(n):
                for mask in range(P.full + 1):
                    L = P.lower_cone(mask)
                    U = P.upper_cone(mask)
                    assert mask & ~P.lower_cone(U) == 0
                    assert mask & ~P.upper_cone(L) == 0
                    assert P.lower_cone(P.upper_cone(L)) == L
                    assert P.upper_cone(P.lower_cone(U)) == U

    @settings(deadline=None, max_examples=60)
    @given(st.integers(0, 2**7 - 1), st.integers(0, 10**6))
    def test_galois_laws_sampled_large(self, mask, pick):
        posets = enumerate_posets(6)
        P = posets[pick % len(posets)]
        mask &= P.full
        L = P.lower_cone(mask)
        assert mask & ~P.lower_cone(P.upper_cone(mask)) == 0
        assert P.lower_cone(P.upper_cone(L)) == L

    def test_antitone(self, figs):
        P = figs["fig4"]
        for small in range(P.full + 1):
            big = small | (1 << 2)
            assert P.lower_cone(big) & ~P.lower_cone(small) == 0


class TestBounds:
    def test_greatest_absent_fig1(self, figs):
        P = figs["fig1"]
        assert P.greatest(P.mask_of(["a", "c"])) is None

    def test_greatest_of_fig3_is_top(self, figs):
        P = figs["fig3"]
        assert P.names[P.greatest(P.full)] == "1"

    def test_greatest_singleton(self, figs):
        P = figs["fig2"]
        for x in range(P.size):
            assert P.greatest(1 << x) == x

    def test_greatest_agrees_with_scan(self):
        for n in range(1, 6):
            for P in enumerate_posets(n):
                for mask in range(P.full + 1):
                    got = P.greatest(mask)
                    dominators = [
                        g for g in bits(mask) if all(P.leq(a, g) for a in bits(mask))
                    ]
                    if dominators:
                        assert got == dominators[0] and len(dominators) == 1
                    else:
                        assert got is None

    def test_least_dual(self, figs):
        P = figs["fig2"]
        assert P.names[P.least(P.full)] == "0"
        assert P.least(0) is None


class TestLattice:
    def test_fig2_is_lattice(self, figs):
        assert figs["fig2"].is_lattice

    def test_fig3_not_lattice(self, figs):
        assert not figs["fig3"].is_lattice

    def test_join_idempotent(self, figs):
        P = figs["fig4"]
        for x in range(P.size):
            assert P.join(x, x) == x
            assert P.meet(x, x) == x

    def test_join_is_least_upper_bound(self, figs):
        P = figs["fig4"]
        for a in range(P.size):
            for b in range(P.size):
                j = P.join(a, b)
                ub = P.up[a] & P.up[b]
                assert j == P.least(ub)


class TestIsomorphism:
    def test_identity(self, figs):
        for P in figs.values():
            w = is_isomorphic(P, P)
            assert w is not None
            assert all(P.leq(x, y) == P.leq(w[x], w[y]) for x in range(P.size) for y in range(P.size))

    def test_fig5_vs_chain_absent(self, figs):
        assert is_isomorphic(figs["fig5"], chain(4)) is None

    def test_fig3_completion_shape(self, figs):
        # size mismatch is rejected immediately
        assert is_isomorphic(figs["fig3"], figs["fig7"]) is None

    def test_symmetry_and_witness_invertible(self, figs):
        P, Q = figs["fig2"], figs["fig2"].permuted((4, 3, 2, 1, 0))
        w = is_isomorphic(P, Q)
        v = is_isomorphic(Q, P)
        assert w is not None and v is not None
        assert all(v[w[x]] == x for x in range(P.size))

    def test_agrees_with_bruteforce_all_pairs_n4(self):
        posets = enumerate_posets(4)
        for P, Q in itertools.combinations_with_replacement(posets, 2):
            brute = any(
                all(
                    P.leq(x, y) == Q.leq(perm[x], perm[y])
                    for x in range(4)
                    for y in range(4)
                )
                for perm in itertools.permutations(range(4))
            )
            assert (is_isomorphic(P, Q) is not None) == brute

    @settings(deadline=None, max_examples=40)
    @given(st.permutations(list(range(6))), st.integers(0, 10**6))
    def test_random_relabelings_detected(self, perm, pick):
        posets = enumerate_posets(6)
        P = posets[pick % len(posets)]
        Q = P.permuted(perm)
        w = is_isomorphic(P, Q)
        assert w is not None

    @settings(deadline=None, max_examples=40)
    @given(st.integers(0, 10**6), st.integers(0, 10**6), st.integers(5, 6))
    def test_distinct_classes_rejected(self, i, j, n):
        posets = enumerate_posets(n)
        P = posets[i % len(posets)]
        Q = posets[j % len(posets)]
        if P is Q:
            assert is_isomorphic(P, Q) is not None
        else:
            assert is_isomorphic(P, Q) is None

    def test_pinned_restricts(self, figs):
        P = figs["fig5"]
        # pin a to b's position: an isomorphism still exists (atoms swap)
        assert is_isomorphic(P, P, pinned={0: 1}) is not None
        # pinning an atom onto the top is impossible
        assert is_isomorphic(P, P, pinned={0: 3}) is None


class TestHasseCovers:
    def test_two_chain(self):
        assert chain(2).hasse_covers() == ((0, 1),)

    def test_antichain_empty(self):
        assert antichain(3).hasse_covers() == ()

    def test_fig2_covers(self, figs):
        P = figs["fig2"]
        got = {(P.names[a], P.names[b]) for a, b in P.hasse_covers()}
        assert got == {("0", "a"), ("0", "b"), ("a", "c"), ("c", "1"), ("b", "1")}

    def test_round_trip_covers(self, figs):
        for P in figs.values():
            covers = [(P.names[a], P.names[b]) for a, b in P.hasse_covers()]
            Q = build_poset(P.names, covers)
            assert Q.up == P.up

    def test_round_trip_census(self):
        for n in range(1, 6):
            for P in enumerate_posets(n):
                covers = [(P.names[a], P.names[b]) for a, b in P.hasse_covers()]
                assert build_poset(P.names, covers).up == P.up


class TestTextFormat:
    def test_round_trip(self, figs):
        for name, P in figs.items():
            parsed_name, Q = parse_poset_text(format_poset_text(P, name))
            assert parsed_name == name and Q == P

    def test_comments_and_blanks(self):
        text = "# heading\nposet t # trailing\n\nelements: a b\ncovers: a<b\n"
        name, P = parse_poset_text(text)
        assert name == "t" and P.leq(0, 1)

    def test_multiple_cover_lines(self):
        text = "poset t\nelements: a b c\ncovers: a<b\ncovers: b<c\n"
        _, P = parse_poset_text(text)
        assert P.leq(0, 2)

    def test_empty_covers_line(self):
        _, P = parse_poset_text("poset t\nelements: a b\ncovers:\n")
        assert not P.leq(0, 1) and not P.leq(1, 0)

    @pytest.mark.parametrize(
        "text",
        [
            "",
            "poset\nelements: a\ncovers:\n",
            "poset t\nelements: a-b\ncovers:\n",
            "poset t\nelements: a a\ncovers:\n",
            "poset t\nelements: a b\ncovers: a<b<c\n",
            "poset t\nelements: a b\ncovers: a<z\n",
            "poset t\nelements: a b\n",
            "poset t\nelements: a b\nstuff\n",
        ],
    )
    def test_parse_errors(self, text):
        with pytest.raises(ParseError):
            parse_poset_text(text)

    @settings(deadline=None, max_examples=60)
    @given(
        st.lists(
            st.tuples(st.integers(0, 4), st.integers(0, 4)), max_size=8
        )
    )
    def test_random_covers_close_or_cycle(self, pairs):
        labels = [f"n{i}" for i in range(5)]
        covers = [(labels[a], labels[b]) for a, b in pairs]
        try:
            P = build_poset(labels, covers)
        except CycleError:
            return
        for a, b in pairs:
            assert P.leq(a, b)


class TestDot:
    def test_edges_present(self, figs):
        P = figs["fig2"]
        dot = to_dot(P, "fig2")
        assert dot.startswith("digraph fig2 {")
        assert '"0" -> "a";' in dot and '"c" -> "1";' in dot

    def test_isolated_nodes_listed(self):
        dot = to_dot(antichain(2), "pair")
        assert '"a0";' in dot and '"a1";' in dot
        assert "->" not in dot
