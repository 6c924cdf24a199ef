import itertools

import numpy as np
import pytest

from mooreca.errors import CAError
from mooreca.errors import CAErrorCode
from mooreca.gfp import make_field
from mooreca.grid import Configuration
from mooreca.grid import LatticeDims
from mooreca.grid import StateVector
from mooreca.grid import flatten
from mooreca.grid import format_grid
from mooreca.grid import parse_grid
from mooreca.grid import unflatten

F5 = make_field(5)


@pytest.mark.parametrize(("m", "n"), [(2, 3), (3, 2), (1, 1)])
def test_lattice_too_small(m, n):
    with pytest.raises(CAError) as exc:
        LatticeDims(m, n)
    assert exc.value.code is CAErrorCode.TOO_SMALL


def test_index_is_row_major():
    dims = LatticeDims(3, 4)
    assert dims.index(1, 1) == 0
    assert dims.index(2, 1) == 4
    assert dims.index(3, 4) == 11
    assert dims.cell(5) == (2, 2)
    with pytest.raises(CAError):
        dims.index(4, 1)


def test_flatten_order():
    c = Configuration.from_rows(F5, [[1, 2, 3], [4, 0, 1], [2, 3, 4]])
    assert flatten(c).entries.tolist() == [1, 2, 3, 4, 0, 1, 2, 3, 4]
    assert unflatten(flatten(c), c.dims) == c


@pytest.mark.parametrize("p", [2, 3, 5, 7919])
def test_unflatten_inverts_flatten(p):
    f = make_field(p)
    rng = np.random.default_rng(p)
    for m, n in itertools.product((3, 4, 5), repeat=2):
        dims = LatticeDims(m, n)
        for _ in range(100):
            c = Configuration.random(f, dims, rng)
            assert unflatten(flatten(c), dims) == c


@pytest.mark.parametrize("p", [2, 3, 5, 7919])
def test_flatten_inverts_unflatten(p):
    f = make_field(p)
    rng = np.random.default_rng(p + 1)
    for m, n in itertools.product((3, 4, 5), repeat=2):
        dims = LatticeDims(m, n)
        for _ in range(100):
            v = StateVector(f, rng.integers(0, p, size=m * n))
            back = flatten(unflatten(v, dims))
            assert back.entries.tolist() == v.entries.tolist()
            assert back.field == f


def test_unflatten_length_mismatch():
    v = StateVector(F5, np.arange(8))
    with pytest.raises(CAError) as exc:
        unflatten(v, LatticeDims(3, 3))
    assert exc.value.code is CAErrorCode.DIMENSION_MISMATCH


def test_configuration_validates_values():
    with pytest.raises(CAError) as exc:
        Configuration.from_rows(F5, [[5, 0, 0], [0, 0, 0], [0, 0, 0]])
    assert exc.value.code is CAErrorCode.OUT_OF_RANGE


def test_configuration_is_immutable():
    c = Configuration.zeros(F5, LatticeDims(3, 3))
    with pytest.raises(ValueError):
        c.cells[0, 0] = 1


def test_indicator_and_getitem():
    dims = LatticeDims(3, 4)
    c = Configuration.indicator(F5, dims, 2, 3)
    assert int(c[2, 3]) == 1
    assert int(c.cells.sum()) == 1
    assert not c.is_zero()


def test_addition_and_scaling():
    dims = LatticeDims(3, 3)
    c = Configuration.indicator(F5, dims, 1, 1)
    assert int((c + c.scale(4))[1, 1]) == 0
    assert (c + c.scale(4)).is_zero()


def test_equal_configurations_hash_alike():
    rng = np.random.default_rng(7)
    c = Configuration.random(F5, LatticeDims(4, 5), rng)
    d = Configuration(F5, c.dims, c.cells.copy())
    assert c == d
    assert len({c, d}) == 1


def test_grid_text_format():
    c = Configuration.from_rows(F5, [[1, 2, 3], [4, 0, 1], [2, 3, 4]])
    text = format_grid(c)
    assert text.splitlines()[0] == "5 3 3"
    assert parse_grid(text) == c


def test_grid_parse_errors():
    with pytest.raises(CAError) as exc:
        parse_grid("")
    assert exc.value.code is CAErrorCode.INVALID_FORMAT
    with pytest.raises(CAError) as exc:
        parse_grid("5 3 3\n1 2 3\n")
    assert exc.value.code is CAErrorCode.DIMENSION_MISMATCH
    with pytest.raises(CAError) as exc:
        parse_grid("5 3 x\n")
    assert exc.value.code is CAErrorCode.INVALID_FORMAT
