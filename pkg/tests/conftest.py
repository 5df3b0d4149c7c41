import pytest

from char2lie import liesuper as ls


@pytest.fixture(scope="session")
def built():
    """Cache of built families shared across the session."""
    cache = {}

    def get(kind, form="", a=0, b=0, n=0):
        key = (kind, form, a, b, n)
        if key not in cache:
            fam = ls.family(kind, form, a, b, n=n)
            cache[key] = (fam,) + ls.build_algebra(fam)
        return cache[key]

    return get
