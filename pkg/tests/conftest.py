import pytest

from poifair.data import CheckIn, Dataset, Poi, SocialGraph


def make_checkin(user, poi, ts, lat=40.0, lon=-100.0):
    return CheckIn(user, poi, ts, lat, lon)


def make_dataset(checkins, pois=None, edges=()):
    if pois is None:
        pois = {}
        for c in checkins:
            pois.setdefault(c.poi_id, Poi(c.poi_id, c.latitude, c.longitude))
    users = {c.user_id for c in checkins}
    return Dataset(list(checkins), pois, SocialGraph(edges), users)


@pytest.fixture
def tiny_dataset():
    checkins = [
        make_checkin("u1", "pA", 1000),
        make_checkin("u1", "pB", 2000),
        make_checkin("u2", "pA", 1500),
    ]
    return make_dataset(checkins)
