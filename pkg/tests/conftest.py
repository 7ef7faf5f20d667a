"""Shared corpora. All generation is seeded, so every run sees the same
instances; sizes stay at n <= 12 where the exact oracle is instant.
"""

import pytest

import rangeassign as ra


def make_corpus(n_geometric, n_abstract, seed_limit=4000):
    """Deterministic mixed corpus: first seeds whose generation connects."""
    out = []
    seed = 0
    while len(out) < n_geometric and seed < seed_limit:
        n = 4 + (seed % 9)
        try:
            out.append(ra.gen_geometric(
                n, 0.15 + 0.05 * (seed % 7), 0.5 + 0.05 * (seed % 5),
                seed=seed, max_retries=4))
        except ra.GenerationError:
            pass
        seed += 1
    count = len(out)
    seed = 0
    while len(out) - count < n_abstract and seed < seed_limit:
        n = 4 + (seed % 9)
        try:
            out.append(ra.gen_random_abstract(
                n, 0.05 + 0.03 * (seed % 8), 0.35 + 0.06 * (seed % 9),
                seed=seed, max_retries=4))
        except ra.GenerationError:
            pass
        seed += 1
    assert len(out) == n_geometric + n_abstract, "seed budget too small"
    return out


@pytest.fixture(scope="session")
def small_corpus():
    """120 mixed instances for module-level property tests."""
    return make_corpus(60, 60)


@pytest.fixture(scope="session")
def worst_case_t1():
    return ra.gen_worst_case(3, 1)
