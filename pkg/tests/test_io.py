import json
import os

import pytest
from hypothesis import given

from equigpd.core import bz2, free_double, interval, point, validate
from equigpd.io import (
    ParseError,
    load,
    parse_document,
    parse_functor,
    parse_groupoid,
    report_doc,
    serialize_functor,
    serialize_groupoid,
    serialize_report,
)
from equigpd.modelstructure import S1, generating_acyclic_cofibration
from equigpd.ttfc import dependent_product
from equigpd.universe import funext_instance

from strategies import functors, groupoids

GOLDEN = os.path.join(os.path.dirname(__file__), "golden", "funext_pi.json")


@given(groupoids(4, 3))
def test_groupoid_round_trip(G):
    text = serialize_groupoid(G)
    H = parse_groupoid(text)
    assert H == G
    assert serialize_groupoid(H) == text
    assert validate(H).ok


@given(functors(3, 2))
def test_functor_round_trip(F):
    text = serialize_functor(F)
    assert parse_functor(text) == F
    assert serialize_functor(parse_functor(text)) == text


def test_unit_rows_are_completed():
    text = serialize_groupoid(S1)
    doc = json.loads(text)
    assert doc["compose"] == []
    assert validate(parse_groupoid(text)).ok


def test_omitted_involution_is_trivial():
    doc = json.loads(serialize_groupoid(bz2()))
    del doc["involution"]
    G = parse_groupoid(json.dumps(doc))
    assert G.invol_mor == {"1_*": "1_*", "g1": "g1"}


def test_syntax_error_has_position():
    with pytest.raises(ParseError) as e:
        parse_groupoid('{\n  "objects": [1,\n}')
    assert (e.value.line, e.value.column) == (3, 1)


def test_shape_errors_name_the_path():
    with pytest.raises(ParseError, match="missing key 'inverse'"):
        parse_groupoid('{"kind": "groupoid", "objects": [], "morphisms": [], "identity": {}, "compose": []}')
    with pytest.raises(ParseError, match=r"morphisms\[0\]"):
        parse_groupoid('{"objects": [], "morphisms": [{"id": 1}], "identity": {}, "inverse": {}, "compose": []}')


def test_dangling_source_is_left_to_validate():
    doc = json.loads(serialize_groupoid(free_double(interval())))
    doc["morphisms"][0]["src"] = "nowhere"
    G = parse_groupoid(json.dumps(doc))
    assert "src" in validate(G).laws()


def test_functor_by_file_reference(tmp_path):
    f = generating_acyclic_cofibration()
    (tmp_path / "dom.json").write_text(serialize_groupoid(f.dom))
    doc = json.loads(serialize_functor(f))
    doc["dom"] = "dom.json"
    path = tmp_path / "f.json"
    path.write_text(json.dumps(doc))
    assert load(str(path)) == f


def test_missing_reference_is_a_parse_error(tmp_path):
    doc = json.loads(serialize_functor(generating_acyclic_cofibration()))
    doc["cod"] = "absent.json"
    with pytest.raises(ParseError, match="cannot read"):
        parse_functor(json.dumps(doc), str(tmp_path))


def test_documents_dispatch_on_kind():
    assert parse_document(serialize_groupoid(point())).objects == ("*",)
    rep = report_doc("demo", True, n=1)
    assert parse_document(serialize_report(rep)) == rep
    with pytest.raises(ParseError):
        parse_document('{"kind": "nonsense"}')


def test_funext_product_matches_golden_file():
    g, f = funext_instance()
    text = serialize_groupoid(dependent_product(g, f).dom)
    with open(GOLDEN, encoding="utf-8") as fh:
        assert text == fh.read()


def test_reversed_cleavage_matches_golden_file():
    g, f = funext_instance()
    with open(GOLDEN, encoding="utf-8") as fh:
        assert serialize_groupoid(dependent_product(g, f, reverse=True).dom) == fh.read()
