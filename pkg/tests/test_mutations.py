import pytest

from pcfv import sheaf as sh
from pcfv.mutations import MUTATIONS, mutated, run_mutation


@pytest.mark.parametrize("name", sorted(MUTATIONS))
def test_mutation_is_detected(name):
    res = run_mutation(name)
    assert res.detected, res


def test_mutation_is_undone():
    before = sh._mu
    with mutated("broken-mu"):
        assert sh._mu is not before
    assert sh._mu is before
