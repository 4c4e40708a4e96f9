import pytest

from ordkit import (
    PreconditionError,
    build_poset,
    classify,
    completion_sidecar,
    cut_closure,
    dm_completion,
    dm_cuts,
    dm_cuts_bruteforce,
    dm_preserves_secpc,
    enumerate_posets,
    is_isomorphic,
    rel_pc,
    sec_pc,
)


class TestCutSets:
    def test_matches_bruteforce_small(self):
        for n in range(1, 6):
            for P in enumerate_posets(n):
                assert dm_cuts(P) == dm_cuts_bruteforce(P)

    def test_closure_idempotent(self, figs):
        P = figs["fig3"]
        for mask in range(P.full + 1):
            c = cut_closure(P, mask)
            assert cut_closure(P, c) == c
            assert mask & ~c == 0

    def test_fig5_cut_set(self, figs):
        P = figs["fig5"]
        cuts = dm_cuts(P)
        named = sorted(tuple(sorted(P.names_of(m))) for m in cuts)
        assert named == sorted(
            [(), ("a",), ("b",), ("c",), ("1", "a", "b", "c")]
        )

    def test_lattice_cuts_all_principal(self, figs):
        P = figs["fig2"]
        dm = dm_completion(P)
        assert all(dm.principal)
        assert dm.lattice.size == P.size


class TestCompletion:
    def test_fig5_gives_fig6(self, figs):
        dm = dm_completion(figs["fig5"])
        assert dm.lattice.size == 5
        assert is_isomorphic(dm.lattice, figs["fig6"]) is not None

    def test_fig3_gives_fig7(self, figs):
        dm = dm_completion(figs["fig3"])
        assert dm.lattice.size == 8
        assert is_isomorphic(dm.lattice, figs["fig7"]) is not None

    def test_fig3_new_cut_label_and_members(self, figs):
        P = figs["fig3"]
        dm = dm_completion(P)
        new = [i for i in range(len(dm.cuts)) if not dm.principal[i]]
        assert len(new) == 1
        i = new[0]
        assert dm.lattice.names[i] == "L_d_e"
        assert set(P.names_of(dm.cuts[i])) == {"0", "a", "b", "c"}
        gens = P.minimal_elements(P.upper_cone(dm.cuts[i]))
        assert {P.names[g] for g in gens} == {"d", "e"}

    def test_lattice_identity_completion(self):
        for n in range(1, 6):
            for P in enumerate_posets(n):
                if P.is_lattice:
                    dm = dm_completion(P)
                    assert dm.lattice.size == P.size
                    assert is_isomorphic(dm.lattice, P) is not None

    def test_embedding_order(self, figs):
        for P in figs.values():
            dm = dm_completion(P)
            for x in range(P.size):
                for y in range(P.size):
                    assert P.leq(x, y) == dm.lattice.leq(dm.embed[x], dm.embed[y])

    def test_principal_labels_reused(self, figs):
        P = figs["fig3"]
        dm = dm_completion(P)
        for x in range(P.size):
            assert dm.lattice.names[dm.embed[x]] == P.names[x]

    def test_joins_meets_preserved(self):
        for n in range(1, 6):
            for P in enumerate_posets(n):
                dm = dm_completion(P)
                L = dm.lattice
                for a in range(P.size):
                    for b in range(P.size):
                        j = P.join(a, b)
                        if j is not None:
                            assert L.join(dm.embed[a], dm.embed[b]) == dm.embed[j]
                        m = P.meet(a, b)
                        if m is not None:
                            assert L.meet(dm.embed[a], dm.embed[b]) == dm.embed[m]

    def test_idempotent_up_to_iso(self):
        for n in range(1, 6):
            for P in enumerate_posets(n):
                dm = dm_completion(P)
                again = dm_completion(dm.lattice)
                assert is_isomorphic(again.lattice, dm.lattice) is not None

    def test_completion_is_complete_lattice(self):
        for n in range(1, 6):
            for P in enumerate_posets(n):
                L = dm_completion(P).lattice
                assert L.is_lattice and L.top is not None and L.bottom is not None


class TestPreservation:
    def test_fig5_lost_at_bottom(self, figs):
        rep = dm_preserves_secpc(figs["fig5"])
        assert not rep.preserved
        L = rep.completion.lattice
        a = L.index("a")
        bottom = L.bottom
        assert sec_pc(L, a, bottom) is None
        assert rep.witness is not None

    def test_fig3_preserved(self, figs):
        rep = dm_preserves_secpc(figs["fig3"])
        assert rep.preserved and rep.witness is None
        assert rep.classification.is_sec_pc

    def test_lattice_preserved_trivially(self, figs):
        rep = dm_preserves_secpc(figs["fig2"])
        assert rep.preserved

    def test_requires_secpc(self, figs):
        with pytest.raises(PreconditionError):
            dm_preserves_secpc(figs["fig6"])

    def test_pawar_relative_complements_extend(self):
        # completions of relatively pseudocomplemented posets stay relatively
        # pseudocomplemented and agree on embedded elements
        seen = 0
        for n in range(1, 6):
            for P in enumerate_posets(n):
                if not classify(P).is_rel_pc:
                    continue
                seen += 1
                dm = dm_completion(P)
                assert classify(dm.lattice).is_rel_pc
                for a in range(P.size):
                    for b in range(P.size):
                        r = rel_pc(P, a, b)
                        if r is not None:
                            got = rel_pc(dm.lattice, dm.embed[a], dm.embed[b])
                            assert got == dm.embed[r]
        assert seen > 0


class TestSidecar:
    def test_fig3_sidecar(self, figs):
        dm = dm_completion(figs["fig3"])
        data = completion_sidecar(dm)
        assert data["base_elements"] == list(figs["fig3"].names)
        by_label = {c["label"]: c for c in data["cuts"]}
        assert by_label["L_d_e"]["principal"] is False
        assert sorted(by_label["L_d_e"]["members"]) == ["0", "a", "b", "c"]
        assert by_label["1"]["principal"] is True

    def test_label_collision_suffix(self):
        # an element already named like a generated cut label
        P = build_poset(["L_a_b", "a", "b"], [("a", "L_a_b")])
        dm = dm_completion(P)
        assert len(set(dm.lattice.names)) == dm.lattice.size
