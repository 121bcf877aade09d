import pytest

from lbgames.repro import REPRO_ITEMS, run_repro


@pytest.mark.parametrize("item", list(REPRO_ITEMS))
def test_item_passes(item):
    (result,) = run_repro([item])
    assert result.basis in ("published", "derived")
    assert result.passed, (result.expected, result.observed)


def test_unknown_item():
    with pytest.raises(KeyError):
        run_repro(["nope"])
