import random

import pytest

from poifair.sequential import TransitionGraph, amc_score, amc_scores, build_l2tg

from conftest import make_checkin

H = 3600


def seq(user, path):
    """path: [(poi, ts_hours), ...]"""
    return [make_checkin(user, p, int(t * H)) for p, t in path]


class TestBuild:
    def test_simple_chain(self):
        train = {"u": seq("u", [("A", 1), ("B", 2), ("C", 3)])}
        g = build_l2tg(train)
        assert g.count("A", "B") == 1
        assert g.count("B", "C") == 1
        assert g.out_totals["A"] == 1

    def test_session_gap_cut(self):
        train = {"u": seq("u", [("A", 1), ("B", 2), ("C", 33)])}
        g = build_l2tg(train, session_gap_hours=24)
        assert g.count("A", "B") == 1
        assert g.count("B", "C") == 0

    def test_empty_graph_legal(self):
        g = build_l2tg({})
        assert g.counts == {}

    def test_random_sequences_match_pair_scan(self):
        rnd = random.Random(31)
        train = {}
        for i in range(100):
            t = 0.0
            path = []
            for _ in range(rnd.randrange(2, 12)):
                t += rnd.uniform(0.5, 40.0)
                path.append((f"p{rnd.randrange(10)}", t))
            train[f"u{i}"] = seq(f"u{i}", path)
        g = build_l2tg(train, session_gap_hours=24)
        expected = {}
        for u, checkins in train.items():
            for a, b in zip(checkins, checkins[1:]):
                if b.timestamp - a.timestamp <= 24 * H:
                    key = (a.poi_id, b.poi_id)
                    expected[key] = expected.get(key, 0) + 1
        assert g.counts == expected

    def test_user_permutation_invariance(self):
        paths = {
            "u1": [("A", 1), ("B", 2)],
            "u2": [("B", 1), ("C", 2)],
            "u3": [("A", 5), ("C", 6)],
        }
        g1 = build_l2tg({u: seq(u, p) for u, p in paths.items()})
        g2 = build_l2tg({u: seq(u, paths[u]) for u in reversed(sorted(paths))})
        assert g1.counts == g2.counts


class TestScore:
    def test_single_deterministic_transition(self):
        g = TransitionGraph()
        g.add("A", "B")
        assert amc_score(g, ["A"], "B") == pytest.approx(1.0)

    def test_absent_edge(self):
        g = TransitionGraph()
        g.add("A", "B")
        assert amc_score(g, ["A"], "C") == 0.0

    def test_worked_two_step_example(self):
        # weights for k=2 at alpha=0.5: (2/3, 1/3); X has no out-edges
        g = TransitionGraph()
        g.add("A", "B", 3)
        g.add("A", "C", 1)
        score = amc_score(g, ["X", "A"], "B", alpha=0.5, memory=5)
        assert score == pytest.approx(0.5)

    def test_empty_history(self):
        g = TransitionGraph()
        assert amc_score(g, [], "A") == 0.0

    def test_parameter_validation(self):
        g = TransitionGraph()
        with pytest.raises(ValueError):
            amc_score(g, ["A"], "B", alpha=1.5)
        with pytest.raises(ValueError):
            amc_score(g, ["A"], "B", memory=0)

    def test_rows_sum_to_one(self):
        rnd = random.Random(5)
        g = TransitionGraph()
        for _ in range(200):
            g.add(f"p{rnd.randrange(15)}", f"p{rnd.randrange(15)}", rnd.randrange(1, 4))
        for src in g.out_totals:
            total = sum(g.out_edges(src).values())
            assert total == pytest.approx(1.0, abs=1e-9)

    def test_score_mass_bounded_by_one(self):
        rnd = random.Random(6)
        g = TransitionGraph()
        nodes = [f"p{i}" for i in range(12)]
        for _ in range(300):
            g.add(rnd.choice(nodes), rnd.choice(nodes))
        history = [rnd.choice(nodes) for _ in range(8)]
        total = sum(amc_score(g, history, p) for p in nodes)
        assert total <= 1.0 + 1e-9
        # every history node has out-edges here -> equality
        assert total == pytest.approx(1.0, abs=1e-9)

    def test_vectorized_matches_scalar(self):
        rnd = random.Random(8)
        g = TransitionGraph()
        nodes = [f"p{i}" for i in range(10)]
        for _ in range(100):
            g.add(rnd.choice(nodes), rnd.choice(nodes))
        history = [rnd.choice(nodes) for _ in range(7)]
        batch = amc_scores(g, history, nodes)
        for p, s in zip(nodes, batch):
            assert s == pytest.approx(amc_score(g, history, p), abs=1e-12)

    def test_dump_tsv(self):
        g = TransitionGraph()
        g.add("A", "B", 2)
        g.add("A", "C")
        assert g.dump_tsv() == "A\tB\t2\nA\tC\t1\n"
