"""Model file parsing: schema acceptance, exact priors, and rejection paths."""
import json
import math
from fractions import Fraction
from pathlib import Path

import numpy as np
import pytest

from softcover.errors import ValidationError
from softcover.modelfile import load_model, parse_model
from softcover.sources import mutual_information

MODELS = Path(__file__).resolve().parent.parent / "models"


def _doc(prior, states, **extra):
    def mat(m):
        return [[[float(np.real(c)), float(np.imag(c))] for c in row] for row in np.asarray(m)]

    return dict({"prior": prior, "states": [mat(s) for s in states]}, **extra)


def test_bundled_models_parse():
    bo = load_model(MODELS / "binary_orthogonal.json")
    assert bo.size == 2 and bo.dim == 2
    assert bo.prior_fractions == (Fraction(1, 2), Fraction(1, 2))
    assert mutual_information(bo) == pytest.approx(math.log(2.0), abs=1e-12)

    pm = load_model(MODELS / "pure_mixed.json")
    assert pm.size == 2 and pm.dim == 2

    tt = load_model(MODELS / "tilted_triple.json")
    assert tt.size == 3 and tt.dim == 2
    assert tt.prior_fractions == (Fraction(1, 2), Fraction(1, 4), Fraction(1, 4))


def test_parse_rational_and_decimal_strings():
    cq = parse_model(_doc(["1/3", "2/3"], [np.diag([1.0, 0.0]), np.diag([0.0, 1.0])]))
    assert cq.prior_fractions == (Fraction(1, 3), Fraction(2, 3))
    cq = parse_model(_doc(["0.5", "0.5"], [np.diag([1.0, 0.0]), np.diag([0.0, 1.0])]))
    assert cq.prior_fractions == (Fraction(1, 2), Fraction(1, 2))


def test_parse_float_prior_rationalizes_on_construction():
    cq = parse_model(_doc([0.5, 0.25, 0.25], [np.eye(2) / 2] * 3))
    assert cq.prior_fractions == (Fraction(1, 2), Fraction(1, 4), Fraction(1, 4))


def test_parse_complex_entries_round_trip():
    m = np.array([[0.5, 0.5j], [-0.5j, 0.5]])
    cq = parse_model(_doc(["1"], [m]))
    assert np.allclose(cq.states[0].matrix, m, atol=1e-12)


def test_optional_alphabet_and_metadata():
    states = [np.diag([1.0, 0.0]), np.diag([0.0, 1.0])]
    doc = _doc(["1/2", "1/2"], states, alphabet=["a", "b"], metadata={"k": 1}, name="x")
    assert parse_model(doc).size == 2
    with pytest.raises(ValidationError, match="alphabet"):
        parse_model(_doc(["1/2", "1/2"], states, alphabet=["a"]))
    with pytest.raises(ValidationError, match="metadata"):
        parse_model(_doc(["1/2", "1/2"], states, metadata=[1, 2]))


@pytest.mark.parametrize(
    "doc,needle",
    [
        ([1, 2, 3], "JSON object"),
        ({"prior": ["1/2", "1/2"]}, "needs 'prior' and 'states'"),
        ({"states": []}, "needs 'prior' and 'states'"),
        ({"prior": [], "states": []}, "non-empty"),
        ({"prior": ["1/2", "nope"], "states": [[], []]}, "prior\\[1\\]"),
        ({"prior": ["1/2", "-1/2"], "states": [[], []]}, "negative"),
        ({"prior": [True, False], "states": [[], []]}, "prior\\[0\\]"),
        ({"prior": [None, 1.0], "states": [[], []]}, "prior\\[0\\]"),
        ({"prior": ["1/2", "1/2"], "states": [[]]}, "one matrix per prior entry"),
        ({"prior": ["1/2", "1/2"], "states": "nope"}, "one matrix per prior entry"),
    ],
)
def test_document_rejections(doc, needle):
    with pytest.raises(ValidationError, match=needle):
        parse_model(doc)


def test_matrix_rejections():
    good = [[[1.0, 0.0], [0.0, 0.0]], [[0.0, 0.0], [0.0, 0.0]]]
    with pytest.raises(ValidationError, match="states\\[0\\]"):
        parse_model({"prior": ["1"], "states": [5]})
    ragged = [[[1.0, 0.0]], [[0.0, 0.0], [0.0, 0.0]]]
    with pytest.raises(ValidationError, match="states\\[0\\]\\[0\\]"):
        parse_model({"prior": ["1"], "states": [ragged]})
    bad_cell = [[[1.0, 0.0], [0.0]], [[0.0, 0.0], [0.0, 0.0]]]
    with pytest.raises(ValidationError, match="re, im"):
        parse_model({"prior": ["1"], "states": [bad_cell]})
    # a matrix that parses but fails density validation
    not_density = [[[2.0, 0.0], [0.0, 0.0]], [[0.0, 0.0], [0.0, 0.0]]]
    with pytest.raises(ValidationError, match="trace"):
        parse_model({"prior": ["1"], "states": [not_density]})
    assert parse_model({"prior": ["1"], "states": [good]}).dim == 2


def test_load_model_file_errors(tmp_path):
    with pytest.raises(ValidationError, match="not found"):
        load_model(tmp_path / "missing.json")
    bad = tmp_path / "bad.json"
    bad.write_text("{not json", encoding="utf-8")
    with pytest.raises(ValidationError, match="not valid JSON"):
        load_model(bad)
    ok = tmp_path / "ok.json"
    ok.write_text(
        json.dumps({"prior": ["1/2", "1/2"], "states": [
            [[[1.0, 0.0], [0.0, 0.0]], [[0.0, 0.0], [0.0, 0.0]]],
            [[[0.0, 0.0], [0.0, 0.0]], [[0.0, 0.0], [1.0, 0.0]]],
        ]}),
        encoding="utf-8",
    )
    assert load_model(ok).size == 2
