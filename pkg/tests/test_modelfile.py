import json

import numpy as np
import pytest

from kmu_verify.errors import ModelFormatError
from kmu_verify.generators import equality_case, random_submanifold
from kmu_verify.modelfile import ModelFile


def test_round_trip_is_bitwise(structure, tmp_path):
    sub = random_submanifold(structure, 4, seed=3)
    path = tmp_path / "m.json"
    ModelFile(structure, sub, {"name": "x", "seed": 3}).save(path)
    back = ModelFile.load(path)
    for name in ("phi", "xi", "h"):
        assert getattr(back.structure, name).tobytes() == getattr(structure, name).tobytes()
    assert back.structure.c == structure.c and back.structure.mu == structure.mu
    for name in ("tangent", "normal", "sigma"):
        assert getattr(back.submanifold, name).tobytes() == getattr(sub, name).tobytes()
    assert back.submanifold.mode == "contact"


def test_normal_frame_is_optional(structure):
    sub = random_submanifold(structure, 3, seed=0)
    data = ModelFile(structure, sub).to_dict()
    del data["submanifold"]["normal"]
    data["submanifold"]["sigma"] = np.zeros((structure.d - 3, 3, 3)).tolist()
    back = ModelFile.from_dict(data)
    frame = np.vstack([back.submanifold.tangent, back.submanifold.normal])
    np.testing.assert_allclose(frame @ frame.T, np.eye(structure.d), atol=1e-14)


def test_raw_mode_survives(structure):
    sub = equality_case(structure, 4, seed=0, a=1.0, b=2.0)
    back = ModelFile.from_json(ModelFile(structure, sub).to_json())
    assert back.submanifold.mode == "raw"


@pytest.mark.parametrize(
    "text",
    ["not json", "[]", json.dumps({"meta": {}}), json.dumps({"ambient": {"m": 1}})],
)
def test_malformed(text):
    with pytest.raises(ModelFormatError):
        ModelFile.from_json(text)


def test_unknown_claims(structure):
    data = ModelFile(structure).to_dict()
    data["claims"] = {"volume": 1.0}
    with pytest.raises(ModelFormatError):
        ModelFile.from_dict(data)
