import math
import random

import pytest

from techmarket.market import Lattice, MarketState


def build_market(lx=6, ly=6, firms=(), sweep=0, sigma=0.01):
    """Hand-placed market: firms is a list of ((x, y), tech, share)."""
    state = MarketState(Lattice(lx, ly))
    for site, tech, share in firms:
        state.add_firm(tech, share, state.lattice.index(site))
    state.sweep = sweep
    state.frontier_value = math.exp(sigma * sweep)
    state.resync_sums()
    return state


def random_market(rng: random.Random, lx=6, ly=6, n_min=2, n_max=20):
    """Randomized small market with normalized shares on distinct sites."""
    n = rng.randint(n_min, min(n_max, lx * ly))
    sites = rng.sample(range(lx * ly), n)
    raw = [rng.random() + 0.05 for _ in range(n)]
    total = sum(raw)
    state = MarketState(Lattice(lx, ly))
    for site, w in zip(sites, raw):
        state.add_firm(rng.random(), w / total, site)
    state.resync_sums()
    return state


@pytest.fixture
def rng():
    return random.Random(12345)
