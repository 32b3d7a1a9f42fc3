import math

import numpy as np
import pytest

import atlas

QUARTIC = {
    "system": {
        "type": "normalized",
        "exponents": [4, 1],
        "blocks": [[[0, 0.25], [0, 1]], [[0, 0.25], 0], [[0, -0.25], 0]],
    },
    "domain": {"window": [-2 * math.pi, 2 * math.pi], "rank": 4},
}


def test_sectors_of_the_quartic_system():
    rep = atlas.run("sectors", QUARTIC)
    assert rep["schema"] == atlas.report_schema
    lows = sorted(round(e["sector"]["arg_min"] / math.pi + 0.25) for e in rep["sectors"])
    assert lows == [-2, -1, 0, 1, 2]


def test_stokes_directions_are_multiples_of_quarter_pi():
    dirs = atlas.stokes_directions([4, 1], [[0.25j, 1j], [0.25j, 0], [-0.25j, 0]], -math.pi, math.pi)
    ks = {round(d / (math.pi / 4)) for d, _ in dirs}
    assert ks == set(range(-4, 5))
    for d, _ in dirs:
        assert abs(d / (math.pi / 4) - round(d / (math.pi / 4))) < 1e-12


def test_formal_reduction():
    A0 = np.diag([1.0, -1.0]).astype(complex)
    A1 = np.array([[0, 1], [1, 0]], dtype=complex)
    out = atlas.formal_reduce(1, [A0, A1], 1)
    assert np.allclose(out["F"][1], [[0, -0.5], [0.5, 0]], atol=1e-14)
    assert np.allclose(out["J"], 0)
    assert out["identity_error"] < 1e-10


def test_solve_at_zero_perturbation():
    spec = {
        "system": {"type": "normalized", "exponents": [1], "blocks": [[1], [-1]]},
        "domain": {"a": 10, "sector": [-math.pi / 2, 3 * math.pi / 2]},
        "outputs": {"radii": [20, 40], "arguments": [0.5]},
    }
    rep = atlas.run("solve", spec)
    assert rep["command"] == "solve"


def test_errors_map_to_exception_types():
    with pytest.raises(atlas.InputError):
        atlas.run("sectors", {"system": {"type": "banana"}})
    with pytest.raises(atlas.AtlasError):
        atlas.run("sectors", "{not json")
    with pytest.raises(atlas.DomainError):
        atlas.formal_reduce(1, [np.eye(2, dtype=complex), np.zeros((2, 2), dtype=complex)], 2)
