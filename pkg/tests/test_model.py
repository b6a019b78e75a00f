import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from floqpol import (
    FieldConfig,
    ModelParseError,
    ModelValidationError,
    MolecularModel,
    TruncationConfig,
    builtin_model,
    load_model,
    save_model,
    two_level_model,
)
from floqpol.model import BUILTIN_MODELS


def write(tmp_path, doc, name="m.json"):
    p = tmp_path / name
    p.write_text(json.dumps(doc) if not isinstance(doc, str) else doc)
    return p


def test_load_two_level_file(tmp_path):
    p = write(tmp_path, {"name": "x", "energies": [0.0, 0.1299], "dipole": [[1.0, 0.5], [0.5, 0.2]]})
    m = load_model(p)
    assert m.n_levels == 2
    assert m.energies.tolist() == [0.0, 0.1299]
    assert m.dipole.tolist() == [[1.0, 0.5], [0.5, 0.2]]


def test_asymmetric_dipole_rejected(tmp_path):
    p = write(tmp_path, {"name": "x", "energies": [0.0, 1.0], "dipole": [[0, 1], [0.9, 0]]})
    with pytest.raises(ModelValidationError, match="symmetric"):
        load_model(p)


def test_tiny_asymmetry_is_symmetrized():
    m = MolecularModel("x", [0.0, 1.0], [[0.0, 1.0], [1.0 + 5e-13, 0.0]])
    assert m.dipole[0, 1] == m.dipole[1, 0]


def test_reordering_permutes_dipole(tmp_path):
    a, b, c = 0.3, -0.7, 0.25
    p = write(tmp_path, {"name": "x", "energies": [0.1, 0.0], "dipole": [[a, c], [c, b]]})
    m = load_model(p)
    assert m.energies.tolist() == [0.0, 0.1]
    assert m.dipole.tolist() == [[b, c], [c, a]]


@pytest.mark.parametrize("doc, err", [
    ("{not json", ModelParseError),
    ({"name": "x", "energies": [0.0, 1.0]}, ModelParseError),
    ({"name": "x", "energies": ["a", 1.0], "dipole": [[0, 1], [1, 0]]}, ModelParseError),
    ({"name": "x", "energies": [0.0, 1.0], "dipole": [[0, 1], [1]]}, ModelParseError),
    ({"name": "x", "energies": [0.0], "dipole": [[0.0]]}, ModelValidationError),
    ({"name": "x", "energies": [0.0, 1.0, 2.0], "dipole": [[0, 1], [1, 0]]}, ModelValidationError),
    ('{"name": "x", "energies": [0.0, NaN], "dipole": [[0, 1], [1, 0]]}', ModelValidationError),
    ('{"name": "x", "energies": [0.0, 1.0], "dipole": [[0, Infinity], [Infinity, 0]]}', ModelValidationError),
])
def test_load_errors(tmp_path, doc, err):
    with pytest.raises(err):
        load_model(write(tmp_path, doc))


def test_missing_file_is_parse_error(tmp_path):
    with pytest.raises(ModelParseError):
        load_model(tmp_path / "nope.json")


@pytest.mark.parametrize("args, energies, dipole", [
    ((1.0, 1.0, 0.0, 0.0), [0, 1], [[0, 1], [1, 0]]),
    ((0.5, 0.2, 1.0, 0.3), [0, 0.5], [[1.0, 0.2], [0.2, 0.3]]),
])
def test_two_level_model(args, energies, dipole):
    m = two_level_model(*args)
    assert m.energies.tolist() == energies
    assert m.dipole.tolist() == dipole


def test_two_level_model_precondition():
    with pytest.raises(ValueError):
        two_level_model(-1.0, 1.0, 0, 0)


def test_model_is_immutable(two_level):
    with pytest.raises(ValueError):
        two_level.energies[0] = 3.0
    with pytest.raises(AttributeError):
        two_level.name = "other"


@pytest.mark.parametrize("name", BUILTIN_MODELS)
def test_builtin_models_load(name):
    m = builtin_model(name)
    assert m.n_levels >= 2
    assert load_model(name) == m


def test_field_and_truncation_validation():
    with pytest.raises(ValueError):
        FieldConfig(0.1, 0.0)
    with pytest.raises(ValueError):
        FieldConfig(-0.1, 1.0)
    with pytest.raises(ValueError):
        TruncationConfig(0)
    with pytest.raises(ValueError):
        TruncationConfig(4, tol=0.0)
    assert FieldConfig(0.0, 2.0).period == pytest.approx(math.pi)


finite = st.floats(-1e6, 1e6, allow_nan=False, allow_subnormal=False)


@st.composite
def models(draw, max_levels=5):
    s = draw(st.integers(2, max_levels))
    energies = draw(st.lists(finite, min_size=s, max_size=s))
    raw = np.array(draw(st.lists(finite, min_size=s * s, max_size=s * s))).reshape(s, s)
    upper = np.triu(raw)
    return MolecularModel("h", energies, upper + np.triu(raw, 1).T)


@settings(max_examples=60, deadline=None)
@given(models())
def test_save_load_roundtrip_bit_exact(tmp_path_factory, m):
    p = tmp_path_factory.mktemp("rt") / "m.json"
    save_model(m, p)
    back = load_model(p)
    assert back == m
    assert back.energies.tobytes() == m.energies.tobytes()
    assert back.dipole.tobytes() == m.dipole.tobytes()


@settings(max_examples=60, deadline=None)
@given(models())
def test_reordering_preserves_dipole_spectrum(m):
    perm = np.random.default_rng(0).permutation(m.n_levels)
    shuffled = MolecularModel("p", m.energies[perm], m.dipole[np.ix_(perm, perm)])
    assert np.all(np.diff(shuffled.energies) >= 0)
    assert np.allclose(np.linalg.eigvalsh(shuffled.dipole), np.linalg.eigvalsh(m.dipole),
                       atol=1e-9 * max(1.0, np.abs(m.dipole).max()))
