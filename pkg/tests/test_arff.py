import pytest

from metaselect.arff import (
    MISSING,
    NOMINAL,
    NUMERIC,
    STRING,
    Attribute,
    RawArffTable,
    dump_arff,
    parse_arff,
)
from metaselect.errors import MalformedArff

SIMPLE = """\
% a comment before anything
@RELATION demo

@ATTRIBUTE instance_id STRING
@ATTRIBUTE cost NUMERIC
@ATTRIBUTE status {ok, timeout}

@DATA
a, 1.5, ok
b, ?, timeout
% trailing comment
"""


def test_parse_roundtrip_fields():
    table = parse_arff(SIMPLE)
    assert table.relation_name == "demo"
    assert [a.name for a in table.attributes] == ["instance_id", "cost", "status"]
    assert [a.kind for a in table.attributes] == [STRING, NUMERIC, NOMINAL]
    assert table.attributes[2].values == ("ok", "timeout")
    assert table.rows == [("a", 1.5, "ok"), ("b", MISSING, "timeout")]


def test_numeric_synonyms_and_case():
    table = parse_arff(
        "@relation r\n@attribute a REAL\n@attribute b InTeGeR\n@data\n1,2\n"
    )
    assert all(attr.kind == NUMERIC for attr in table.attributes)
    assert table.rows == [(1.0, 2.0)]


def test_quoted_identifiers_and_cells():
    text = (
        "@RELATION 'has space'\n"
        "@ATTRIBUTE 'instance id' STRING\n"
        '@ATTRIBUTE kind {"a b", c}\n'
        "@DATA\n"
        "'x, y', \"a b\"\n"
    )
    table = parse_arff(text)
    assert table.relation_name == "has space"
    assert table.attributes[0].name == "instance id"
    assert table.rows == [("x, y", "a b")]


def test_column_index_is_case_insensitive():
    table = parse_arff(SIMPLE)
    assert table.column_index("INSTANCE_ID") == 0
    assert table.has_column("Cost")
    assert not table.has_column("nope")
    with pytest.raises(KeyError):
        table.column_index("nope")


@pytest.mark.parametrize(
    "text",
    [
        "@RELATION r\n@ATTRIBUTE a NUMERIC\n1\n",  # data before @DATA
        "@RELATION r\n@ATTRIBUTE a NUMERIC\n",  # no @DATA at all
        "@RELATION r\n@ATTRIBUTE a NUMERIC\n@DATA\n1,2\n",  # arity
        "@RELATION r\n@ATTRIBUTE a NUMERIC\n@DATA\nnot_a_number\n",
        "@RELATION r\n@ATTRIBUTE a {x,y}\n@DATA\nz\n",  # undeclared nominal
        "@RELATION r\n@ATTRIBUTE a STRING\n@DATA\n'unterminated\n",
    ],
)
def test_malformed_documents_raise(text):
    with pytest.raises(MalformedArff):
        parse_arff(text)


def test_malformed_error_carries_line_number():
    with pytest.raises(MalformedArff) as err:
        parse_arff("@RELATION r\n@ATTRIBUTE a NUMERIC\n@DATA\n1\n1,2\n")
    assert "line 5" in str(err.value)


def test_dump_then_parse_is_identity():
    table = RawArffTable(
        relation_name="round trip",
        attributes=[
            Attribute("id", STRING),
            Attribute("v", NUMERIC),
            Attribute("s", NOMINAL, ("ok", "bad value")),
        ],
        rows=[("plain", 0.125, "ok"), ("needs, quote", MISSING, "bad value")],
    )
    again = parse_arff(dump_arff(table))
    assert again.relation_name == table.relation_name
    assert again.attributes == table.attributes
    assert again.rows == table.rows
