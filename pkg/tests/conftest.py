"""Shared randomized populations, generated once per session."""

import pytest

from lambeknbe.gen import GenConfig, gen_derivation, gen_nf


@pytest.fixture(scope="session")
def small_derivations():
    """2000 searched derivations, up to 20 nodes."""
    return [gen_derivation(GenConfig(seed=s, max_nodes=20)) for s in range(2000)]


@pytest.fixture(scope="session")
def many_nfs():
    """10000 normal forms, mixed sizes."""
    return [gen_nf(GenConfig(seed=s, max_nodes=8 + s % 13)) for s in range(10_000)]


@pytest.fixture(scope="session")
def medium_derivations():
    """300 derivations at the acceptance-suite size."""
    return [gen_derivation(GenConfig(seed=s, max_nodes=30)) for s in range(300)]
