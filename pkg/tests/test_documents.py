"""Document format: canonical bytes, roundtrips, and error reporting."""

import json
import random

import pytest

from polyspan.documents import (
    KINDS,
    Document,
    ParseError,
    document,
    parse,
    serialize,
)
from polyspan.errors import InvariantViolation
from polyspan.gen import (
    rand_family,
    rand_fincat,
    rand_finset,
    rand_functor,
    rand_map,
    rand_modpoly,
    rand_poly,
    rand_profunctor,
    rand_relation,
    rand_relpoly,
    rand_span,
)


def sample_documents(seed, rounds=4):
    rng = random.Random(seed)
    out = []
    for _ in range(rounds):
        a, b = rand_finset(rng, 1, 4), rand_finset(rng, 1, 4)
        out.append(document("finset-map", rand_map(rng, a, b)))
        out.append(document("span", rand_span(rng, a, b)))
        out.append(document("polynomial", rand_poly(rng, a, b)))
        out.append(document("relation", rand_relation(rng, a, b)))
        out.append(document("rel-polynomial", rand_relpoly(rng, a, b)))
        out.append(document("family", rand_family(rng, a)))
        x = rand_fincat(rng, max_mors=8)
        y = rand_fincat(rng, max_mors=8)
        out.append(document("fincat", x))
        f = rand_functor(rng, x, y)
        if f is not None:
            out.append(document("functor", f))
        out.append(document("profunctor",
                            rand_profunctor(rng, x, y, max_cell=3)))
        out.append(document("mod-polynomial",
                            rand_modpoly(rng, x, y, max_cell=3)))
    return out


class TestRoundtrip:
    def test_parse_after_serialize_is_identity(self):
        docs = sample_documents(7)
        assert {d.kind for d in docs} == set(KINDS)
        for doc in docs:
            assert parse(serialize(doc)) == doc

    def test_serialize_after_parse_fixes_canonical_text(self):
        for doc in sample_documents(8):
            text = serialize(doc)
            assert serialize(parse(text)) == text

    def test_key_order_in_input_is_irrelevant(self):
        doc = sample_documents(9, rounds=1)[0]
        scrambled = json.dumps(json.loads(serialize(doc)), sort_keys=False)
        assert parse(scrambled) == doc

    def test_serialized_form_is_versioned(self):
        doc = sample_documents(10, rounds=1)[0]
        assert json.loads(serialize(doc))["version"] == "1"


class TestParseErrors:
    def test_syntax_error_carries_line_and_column(self):
        with pytest.raises(ParseError) as e:
            parse('{\n  "version": "1",\n  nope\n}')
        assert e.value.line == 3 and e.value.col == 3

    def test_unsupported_version(self):
        with pytest.raises(ParseError, match="unsupported version"):
            parse('{"version": "9", "kind": "family", "payload": {}}')

    def test_unknown_kind(self):
        with pytest.raises(ParseError, match="unknown document kind"):
            parse('{"version": "1", "kind": "tensor", "payload": {}}')

    def test_missing_field(self):
        with pytest.raises(ParseError, match="missing field 'proj'"):
            parse('{"version": "1", "kind": "family", '
                  '"payload": {"base": 1, "total": 0}}')

    def test_extra_field_rejected(self):
        with pytest.raises(ParseError, match="unknown field 'color'"):
            parse('{"version": "1", "kind": "family", "payload": '
                  '{"base": 1, "total": 0, "proj": [], "color": 3}}')

    def test_non_integer_entry(self):
        with pytest.raises(ParseError, match="nonnegative integer"):
            parse('{"version": "1", "kind": "finset-map", "payload": '
                  '{"dom": 1, "cod": 1, "table": ["a"]}}')

    def test_top_level_must_be_object(self):
        with pytest.raises(ParseError, match="expected an object"):
            parse('[1, 2]')


class TestInvariantSurfacing:
    def test_violations_name_their_clause(self):
        bad = ('{"version": "1", "kind": "relation", "payload": '
               '{"src": 2, "tgt": 2, "pairs": [[1, 1], [0, 0]]}}')
        with pytest.raises(InvariantViolation) as e:
            parse(bad)
        assert e.value.clause == "relation-order"

    def test_map_out_of_range(self):
        bad = ('{"version": "1", "kind": "finset-map", "payload": '
               '{"dom": 2, "cod": 1, "table": [0, 5]}}')
        with pytest.raises(InvariantViolation) as e:
            parse(bad)
        assert e.value.clause == "map-range"

    def test_category_laws_checked_on_load(self):
        # identity row of the composition table corrupted
        bad = {"version": "1", "kind": "fincat",
               "payload": {"objects": 1, "morphisms": 1, "src": [0],
                           "tgt": [0], "ident": [0], "comp": [[-1]]}}
        with pytest.raises(InvariantViolation):
            parse(json.dumps(bad))

    def test_wrong_payload_type_for_document(self):
        fam = sample_documents(11, rounds=1)[5].payload
        with pytest.raises(ParseError, match="payload is not a polynomial"):
            document("polynomial", fam)

    def test_serialize_rejects_foreign_versions(self):
        doc = sample_documents(12, rounds=1)[0]
        with pytest.raises(ParseError, match="unsupported version"):
            serialize(Document("0", doc.kind, doc.payload))
