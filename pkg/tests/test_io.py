from __future__ import annotations

import json

import numpy as np
import pytest

from gramdeform import io
from gramdeform.deform import deform_theorem2
from gramdeform.errors import InvalidEnsemble, InvalidInput
from helpers import staircase, random_ensemble


def test_ensemble_roundtrip(tmp_path):
    ens = random_ensemble(np.random.default_rng(0), 3, 4)
    io.save_ensemble(ens, tmp_path / "e.json")
    back = io.load_ensemble(tmp_path / "e.json")
    np.testing.assert_array_equal(back.states, ens.states)
    np.testing.assert_array_equal(back.probs, ens.probs)


def test_plain_real_components_accepted():
    ens = io.ensemble_from_dict({"dim": 2, "probs": [1, 0], "states": [[1, 0], [0, [1, 0]]]})
    np.testing.assert_array_equal(ens.states, np.eye(2))


@pytest.mark.parametrize(
    "data, match",
    [
        ({"dim": 2, "probs": [0.6, 0.6], "states": [[1, 0], [0, 1]]}, "sum"),
        ({"dim": 2, "probs": [0.5, 0.5], "states": [[1, 0], [1, 1]]}, "state 1 has norm"),
        ({"dim": 2, "probs": [1.5, -0.5], "states": [[1, 0], [0, 1]]}, "probability 1"),
        ({"dim": 2, "probs": [1.0], "states": [[1, 0, 0]]}, "state 0 must have 2"),
        ({"dim": 2, "probs": [0.5, 0.5]}, "missing 'states'"),
    ],
)
def test_invalid_ensembles(data, match):
    with pytest.raises(InvalidEnsemble, match=match):
        io.ensemble_from_dict(data)


def test_bad_component_and_file(tmp_path):
    with pytest.raises(InvalidInput, match="component 1"):
        io.ensemble_from_dict({"dim": 2, "probs": [1.0], "states": [[1, "x"]]})
    (tmp_path / "bad.json").write_text("{")
    with pytest.raises(InvalidInput):
        io.load_json(tmp_path / "bad.json")


def test_gram_files():
    m = [[0.5, [0.1, 0.2]], [[0.1, -0.2], 0.5]]
    (g,) = io.grams_from_dict({"matrix": m})
    assert g[0, 1] == 0.1 + 0.2j
    assert io.matrix_to_list(g) == [[[0.5, 0.0], [0.1, 0.2]], [[0.1, -0.2], [0.5, 0.0]]]
    with pytest.raises(InvalidInput):
        io.grams_from_dict({"matrix": [[1, 2]]})
    with pytest.raises(InvalidInput):
        io.grams_from_dict([])


def test_report_roundtrip():
    rep = deform_theorem2(staircase(0.3), "D1")
    data = json.loads(io.dumps(io.report_to_dict(rep)))
    back = io.report_from_dict(data)
    assert back.kind == "D1" and back.is_valid()
    assert back.entropy_after == rep.entropy_after
