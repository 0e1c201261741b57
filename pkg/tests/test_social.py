import math
import random
from collections import Counter

import numpy as np
import pytest

from poifair.data import SocialGraph
from poifair.geo import distance_km
from poifair.social import (
    PowerLawFit,
    fcf_score,
    fit_power_law,
    power_law_score,
    residence,
    social_frequency,
    visit_counts,
)

from conftest import make_checkin


class TestSocialFrequency:
    def test_direct_sum(self):
        counts = {"v1": Counter({"p": 3}), "v2": Counter()}
        g = SocialGraph([("u", "v1"), ("u", "v2")])
        assert social_frequency("u", "p", counts, g) == 3

    def test_no_friends(self):
        assert social_frequency("u", "p", {}, SocialGraph()) == 0

    def test_random_graph_matches_double_loop(self):
        rnd = random.Random(9)
        users = [f"u{i}" for i in range(20)]
        train = {
            u: [
                make_checkin(u, f"p{rnd.randrange(8)}", rnd.randrange(1, 10**6))
                for _ in range(rnd.randrange(0, 15))
            ]
            for u in users
        }
        counts = visit_counts(train)
        edges = set()
        while len(edges) < 30:
            a, b = rnd.sample(users, 2)
            edges.add((min(a, b), max(a, b)))
        g = SocialGraph(edges)
        for u in users:
            for p in [f"p{i}" for i in range(8)]:
                expected = 0
                for v in users:
                    if g.has_edge(u, v):
                        expected += sum(
                            1 for c in train[v] if c.poi_id == p
                        )
                assert social_frequency(u, p, counts, g) == expected


class TestPowerLawFit:
    def test_closed_form_beta_two(self):
        # n copies of e: beta = 1 + n / n = 2 by hand
        fit = fit_power_law([math.e] * 12)
        assert fit.beta == pytest.approx(2.0)

    def test_all_ones_clamps(self):
        fit = fit_power_law([1.0] * 12)
        assert fit.beta == 10.0

    def test_too_few_observations(self):
        with pytest.raises(ValueError):
            fit_power_law([2.0] * 9)

    def test_recovery_at_beta_2_5(self):
        rng = np.random.default_rng(42)
        beta = 2.5
        u = rng.random(10_000)
        xs = (1 - u) ** (-1.0 / (beta - 1.0))  # inverse-CDF Pareto sampling
        fit = fit_power_law(xs)
        assert abs(fit.beta - beta) < 0.1
        # independent closed-form oracle on the same sample
        oracle = 1.0 + len(xs) / float(np.log(xs).sum())
        assert fit.beta == pytest.approx(oracle, rel=1e-12)


class TestPowerLawScore:
    def test_below_threshold(self):
        assert power_law_score(PowerLawFit(beta=2.0), 0) == 0.0

    def test_direct_formula(self):
        assert power_law_score(PowerLawFit(beta=2.0), 2) == pytest.approx(0.5)

    def test_limit_and_monotone(self):
        fit = PowerLawFit(beta=2.5)
        xs = [1, 2, 5, 10, 100, 10**6]
        scores = [power_law_score(fit, x) for x in xs]
        assert all(0 <= s < 1 for s in scores)
        assert scores == sorted(scores)
        assert scores[-1] > 0.999


class TestResidence:
    def test_max_count(self):
        counts = {"u": Counter({"A": 3, "B": 1})}
        assert residence("u", counts) == "A"

    def test_tie_smallest_id(self):
        counts = {"u": Counter({"B": 2, "A": 2})}
        assert residence("u", counts) == "A"

    def test_empty_profile(self):
        with pytest.raises(ValueError):
            residence("u", {})

    def test_random_argmax(self):
        rnd = random.Random(13)
        profile = Counter({f"p{i}": rnd.randrange(1, 50) for i in range(30)})
        r = residence("u", {"u": profile})
        best = max(profile.values())
        assert profile[r] == best
        assert r == min(p for p, n in profile.items() if n == best)


class TestFcf:
    def poi_coords(self):
        return {
            "h0": (40.0, -100.0),
            "h1": (40.0, -100.0),
            "h2": (40.5, -100.0),
            "h3": (41.0, -100.5),
            "p": (40.2, -100.2),
        }

    def test_single_friend_same_residence(self):
        counts = {"u": Counter({"h0": 2}), "v": Counter({"h1": 1, "p": 4})}
        g = SocialGraph([("u", "v")])
        residences = {"u": "h0", "v": "h1"}
        score = fcf_score("u", "p", counts, g, residences, self.poi_coords())
        assert score == pytest.approx(4.0)

    def test_no_friends(self):
        counts = {"u": Counter({"h0": 2})}
        assert fcf_score("u", "p", counts, SocialGraph(), {"u": "h0"}, self.poi_coords()) == 0.0

    def test_weighted_mean_oracle(self):
        coords = self.poi_coords()
        counts = {
            "u": Counter({"h0": 2}),
            "v1": Counter({"h1": 1, "p": 3}),
            "v2": Counter({"h2": 1, "p": 5}),
            "v3": Counter({"h3": 1}),
        }
        g = SocialGraph([("u", "v1"), ("u", "v2"), ("u", "v3")])
        residences = {"u": "h0", "v1": "h1", "v2": "h2", "v3": "h3"}
        sims = {
            v: 1.0 / (1.0 + distance_km(*coords["h0"], *coords[residences[v]]))
            for v in ("v1", "v2", "v3")
        }
        expected = (sims["v1"] * 3 + sims["v2"] * 5 + sims["v3"] * 0) / sum(sims.values())
        score = fcf_score("u", "p", counts, g, residences, coords)
        assert score == pytest.approx(expected, abs=1e-12)

    def test_friend_order_invariance(self):
        coords = self.poi_coords()
        counts = {
            "u": Counter({"h0": 1}),
            "v1": Counter({"h1": 1, "p": 3}),
            "v2": Counter({"h2": 2, "p": 5}),
        }
        residences = {"u": "h0", "v1": "h1", "v2": "h2"}
        g1 = SocialGraph([("u", "v1"), ("u", "v2")])
        g2 = SocialGraph([("u", "v2"), ("u", "v1")])
        s1 = fcf_score("u", "p", counts, g1, residences, coords)
        s2 = fcf_score("u", "p", counts, g2, residences, coords)
        assert s1 == s2
