import os
import tempfile

import pytest

# Share the on-disk basis cache across the whole test session so expensive
# Gram constructions run once.
_CACHE = tempfile.mkdtemp(prefix="supnorm_test_cache_")
os.environ.setdefault("SUPNORM_CACHE_DIR", _CACHE)


@pytest.fixture(scope="session")
def basis_cache():
    """Session-wide memo of orthonormal bases keyed by weight."""
    from supnorm import orthonormal_basis

    memo = {}

    def get(weight: int):
        if weight not in memo:
            memo[weight] = orthonormal_basis(weight)
        return memo[weight]

    return get
