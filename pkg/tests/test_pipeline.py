import random
import warnings

import pytest

from cyclesplit.graphs import CoverError, CycleCover, Graph, Params, validate_cover
from cyclesplit.instances import gen_planted, gen_triangles_biclique
from cyclesplit.pipeline import merge_cover, protected_for_merge, solve, unmerge
from cyclesplit.switching import count_h_edges

from conftest import complete_graph, cycle_graph, ham_cover, random_factor_instance


@pytest.fixture(autouse=True)
def _quiet():
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", UserWarning)
        yield


def two_triangles():
    g = Graph(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)])
    return g, CycleCover([[0, 1, 2], [3, 4, 5]])


def three_squares():
    g = Graph(12, [(i + o, (i + 1) % 4 + o) for o in (0, 4, 8) for i in range(4)])
    return g, CycleCover([[0, 1, 2, 3], [4, 5, 6, 7], [8, 9, 10, 11]])


class TestMergeCover:
    def test_single_cycle_identity(self):
        g = complete_graph(5)
        aug, merged, rec = merge_cover(g, ham_cover(5))
        assert merged == ham_cover(5)
        assert rec.e_plus == () and rec.e_minus == () and aug == g

    def test_two_triangles(self):
        g, cover = two_triangles()
        aug, merged, rec = merge_cover(g, cover)
        assert set(rec.e_minus) == {(0, 1), (3, 4)}
        assert set(rec.e_plus) == {(0, 3), (1, 4)}
        assert merged.cycles == ((0, 2, 1, 4, 5, 3),)
        assert validate_cover(aug, merged) == 1

    def test_three_squares(self):
        g, cover = three_squares()
        aug, merged, rec = merge_cover(g, cover)
        assert len(rec.e_plus) == 4 and len(rec.e_minus) == 4
        assert validate_cover(aug, merged) == 1
        prot = protected_for_merge(merged, rec)
        assert len(prot) <= 8 * 2
        assert set(rec.e_plus) <= prot

    def test_bridges_recorded_when_present_in_graph(self):
        g, cover = two_triangles()
        g2 = g.with_extra_edges([(0, 3)])
        aug, merged, rec = merge_cover(g2, cover)
        assert rec.added <= set(rec.e_plus)
        assert (0, 3) not in rec.added or not g2.has_edge(0, 3)

    def test_random_merges_are_hamilton(self, rng):
        for _ in range(25):
            g, cover = random_factor_instance(rng, rng.randint(9, 24), 0.2)
            aug, merged, rec = merge_cover(g, cover)
            assert validate_cover(aug, merged) == 1
            assert len(rec.e_plus) == 2 * (cover.num_components - 1)
            assert len(protected_for_merge(merged, rec)) <= 8 * (cover.num_components - 1)


class TestUnmerge:
    def test_inverse_without_enrichment(self, rng):
        for _ in range(25):
            g, cover = random_factor_instance(rng, rng.randint(9, 24), 0.25)
            aug, merged, rec = merge_cover(g, cover)
            assert unmerge(merged, rec) == cover

    def test_missing_bridge_rejected(self):
        g, cover = two_triangles()
        aug, merged, rec = merge_cover(g, cover)
        tampered = CycleCover([[0, 1, 2, 3, 4, 5]])  # contains no bridge (0,3)? it does; build another
        other = CycleCover([[0, 2, 1, 5, 4, 3]])
        if (0, 3) in other.edge_set():
            other = CycleCover([[0, 1, 4, 5, 3, 2]])
        with pytest.raises(CoverError, match="bridge"):
            unmerge(other, rec)


class TestSolve:
    def test_complete_graphs(self):
        for n in (6, 10, 15, 21):
            for k in (1, 2, n // 3):
                res = solve(complete_graph(n), ham_cover(n), k)
                assert res.cover is not None
                assert validate_cover(complete_graph(n), res.cover) == k
                assert res.stats.success

    def test_identity_when_k_matches(self):
        g, cover = two_triangles()
        res = solve(g, cover, 2)
        assert res.cover == cover and res.stats.switch_log == []

    def test_k_below_components_rejected(self):
        g, cover = gen_triangles_biclique(3, 4, 0)
        with pytest.raises(ValueError, match="out of scope"):
            solve(g, cover, 2)

    def test_k_above_capacity_rejected(self):
        with pytest.raises(ValueError, match="infeasible"):
            solve(complete_graph(8), ham_cover(8), 3)

    def test_honest_failure_exit(self):
        res = solve(
            cycle_graph(9),
            ham_cover(9),
            2,
            Params(thomassen_degree_floor=1, enrich_rounds=3),
        )
        assert res.cover is None and not res.stats.success
        assert res.stats.diagnostics

    def test_input_not_corrupted(self):
        g = cycle_graph(9)
        cover = ham_cover(9)
        before = cover.cycles
        solve(g, cover, 2, Params(thomassen_degree_floor=1, enrich_rounds=3))
        assert cover.cycles == before

    def test_switch_log_deltas_sum(self, rng):
        for _ in range(10):
            n = rng.randint(12, 30)
            g, cover = gen_planted(n, 0.5, rng.randrange(1 << 20))
            k = rng.randint(1, n // 3)
            res = solve(g, cover, k)
            if res.cover is None:
                continue
            total = sum(entry["delta"] for entry in res.stats.switch_log)
            assert total == k - res.stats.ell_presplit

    def test_stats_fields(self):
        res = solve(complete_graph(9), ham_cover(9), 2, Params(seed=4))
        st = res.stats
        assert st.n == 9 and st.m == 36 and st.min_degree == 8
        assert st.ell_initial == 1 and st.k_target == 2
        assert st.h_edges_initial == count_h_edges(complete_graph(9), ham_cover(9))
        assert st.seed == 4
        payload = st.to_json(drop_timing=True)
        assert "wall_time" not in payload and '"success": true' in payload

    def test_strict_mode_runs_pipeline(self):
        g, cover = gen_planted(24, 0.5, 5)
        params = Params(thomassen_degree_floor=1, h_edge_target=20, seed=5)
        res = solve(g, cover, 3, params, random.Random(5), strict=True)
        assert res.stats.used_enrichment
        assert res.cover is not None
        assert validate_cover(g, res.cover) == 3

    def test_full_pipeline_with_enrichment_rewiring(self):
        """merge -> enrich (with a real rewire) -> unmerge -> split, end to end."""
        from conftest import two_cycle_instance

        g, cover = two_cycle_instance(60, 0.2, 0)
        aug, merged, rec = merge_cover(g, cover)
        h0 = count_h_edges(aug, merged)
        params = Params(
            thomassen_degree_floor=1,
            h_edge_target=h0 + 4,
            common_nbr_threshold=2,
            m_set_threshold=1,
            coverage_slack=6,
            enrich_rounds=40,
            seed=0,
        )
        res = solve(g, cover, 4, params, random.Random(0), strict=True)
        assert res.cover is not None
        assert validate_cover(g, res.cover) == 4
        assert res.stats.thomassen_calls >= 1
        assert res.stats.h_edges_enriched >= h0 + 4
        assert res.stats.merge_bridges == 2

    def test_h_edge_drop_bound_after_unmerge(self, rng):
        """e(H) after unmerge stays within 2(l-1)n of the enriched count."""
        for seed in range(5):
            g, cover = random_factor_instance(random.Random(seed), 18, 0.45)
            if cover.num_components == 1:
                continue
            aug, merged, rec = merge_cover(g, cover)
            restored = unmerge(merged, rec)
            before = count_h_edges(aug, merged)
            after = count_h_edges(g, restored)
            assert after >= before - 2 * (rec.ell - 1) * g.n
