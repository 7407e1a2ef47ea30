"""Rubric schema: weight parsing, JSON round trips, and invariant validation."""

import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from cardaudit.builtin import BUILTIN_VERSION, builtin_framework
from cardaudit.schema import (
    CreditPolicy,
    Framework,
    FrameworkParseError,
    FrameworkValidationError,
    Section,
    Subsection,
    format_tenths,
    load_framework,
    parse_framework,
    parse_weight_tenths,
    serialize_framework,
    validate_framework,
)


def section(sec_id: str, weight: int, subs: list[tuple[str, int]]) -> Section:
    return Section(
        id=sec_id,
        title=sec_id.replace("_", " ").title(),
        weight_tenths=weight,
        subsections=tuple(
            Subsection(id=sid, title=sid, weight_tenths=w) for sid, w in subs
        ),
    )


def tiny_framework() -> Framework:
    return Framework(
        version="t1",
        sections=(
            section("alpha", 600, [("alpha.x", 400), ("alpha.y", 200)]),
            section("beta", 400, [("beta.z", 400)]),
        ),
    )


class TestParseWeightTenths:
    def test_int(self):
        assert parse_weight_tenths(15) == 150

    def test_half_point_string(self):
        assert parse_weight_tenths("0.5") == 5

    def test_float(self):
        assert parse_weight_tenths(2.5) == 25

    def test_trailing_zeros_ok(self):
        assert parse_weight_tenths("3.000") == 30

    def test_two_decimals_rejected(self):
        with pytest.raises(FrameworkParseError):
            parse_weight_tenths("3.25")

    def test_bool_rejected(self):
        with pytest.raises(FrameworkParseError):
            parse_weight_tenths(True)

    def test_garbage_rejected(self):
        with pytest.raises(FrameworkParseError):
            parse_weight_tenths("four")

    def test_negative(self):
        assert parse_weight_tenths("-0.5") == -5
        assert parse_weight_tenths(-3) == -30


@given(st.integers(min_value=-5000, max_value=5000))
def test_tenths_round_trip(tenths):
    assert parse_weight_tenths(format_tenths(tenths)) == tenths


def test_format_tenths():
    assert format_tenths(150) == "15.0"
    assert format_tenths(5) == "0.5"
    assert format_tenths(0) == "0.0"
    assert format_tenths(-25) == "-2.5"


class TestRoundTrip:
    def test_serialize_parse_identity(self):
        fw = tiny_framework()
        assert parse_framework(serialize_framework(fw)) == fw

    def test_builtin_round_trip(self):
        fw = builtin_framework()
        assert parse_framework(serialize_framework(fw)) == fw

    def test_unknown_keys_survive(self):
        doc = {
            "version": "t1",
            "notes": "kept",
            "sections": [
                {
                    "id": "a",
                    "title": "A",
                    "weight": "100.0",
                    "origin": "manual",
                    "subsections": [
                        {"id": "a.x", "title": "X", "weight": "100.0", "criteria": "", "hint": 7}
                    ],
                }
            ],
        }
        fw = parse_framework(json.dumps(doc))
        assert ("notes", "kept") in fw.extras
        assert ("origin", "manual") in fw.sections[0].extras
        assert ("hint", 7) in fw.sections[0].subsections[0].extras
        out = json.loads(serialize_framework(fw))
        assert out["notes"] == "kept"
        assert out["sections"][0]["origin"] == "manual"
        assert out["sections"][0]["subsections"][0]["hint"] == 7

    def test_not_json(self):
        with pytest.raises(FrameworkParseError):
            parse_framework("{nope")

    def test_not_object(self):
        with pytest.raises(FrameworkParseError):
            parse_framework("[1, 2]")

    def test_sections_not_list(self):
        with pytest.raises(FrameworkParseError):
            parse_framework('{"version": "v", "sections": {}}')

    def test_default_credits(self):
        fw = parse_framework('{"version": "v", "sections": []}')
        assert fw.credits == CreditPolicy(0, 5, 10)


class TestValidate:
    def test_tiny_is_clean(self):
        assert validate_framework(tiny_framework()) == []

    def test_builtin_is_clean(self):
        assert validate_framework(builtin_framework()) == []

    def test_empty_version(self):
        fw = Framework(version="", sections=tiny_framework().sections)
        messages = [v.message for v in validate_framework(fw)]
        assert any("version" in m for m in messages)

    def test_no_sections(self):
        out = validate_framework(Framework(version="v", sections=()))
        assert any("at least one section" in v.message for v in out)

    def test_duplicate_section_id(self):
        fw = Framework(
            version="v",
            sections=(
                section("a", 500, [("a.x", 500)]),
                section("a", 500, [("b.x", 500)]),
            ),
        )
        assert any("duplicate section id 'a'" in v.message for v in validate_framework(fw))

    def test_duplicate_subsection_id(self):
        fw = Framework(
            version="v",
            sections=(
                section("a", 500, [("same", 500)]),
                section("b", 500, [("same", 500)]),
            ),
        )
        assert any("duplicate subsection id 'same'" in v.message for v in validate_framework(fw))

    def test_subsection_sum_mismatch(self):
        fw = Framework(version="v", sections=(section("a", 1000, [("a.x", 999)]),))
        out = validate_framework(fw)
        assert any("sum to 99.9, expected 100.0" in v.message for v in out)

    def test_total_not_100(self):
        fw = Framework(version="v", sections=(section("a", 900, [("a.x", 900)]),))
        assert any(
            "sum to 90.0, expected 100.0" in v.message for v in validate_framework(fw)
        )

    def test_nonpositive_weight(self):
        fw = Framework(version="v", sections=(section("a", 1000, [("a.x", 1000), ("a.y", 0)]),))
        out = validate_framework(fw)
        assert any("must be positive" in v.message for v in out)

    def test_bad_credit_ordering(self):
        fw = Framework(
            version="v",
            sections=tiny_framework().sections,
            credits=CreditPolicy(absent_tenths=6, mentioned_tenths=5, detailed_tenths=10),
        )
        assert any(v.path == "credits" for v in validate_framework(fw))

    def test_credit_above_one(self):
        fw = Framework(
            version="v",
            sections=tiny_framework().sections,
            credits=CreditPolicy(0, 5, 11),
        )
        assert any(v.path == "credits" for v in validate_framework(fw))

    def test_load_raises_on_first_violation(self):
        text = serialize_framework(
            Framework(version="v", sections=(section("a", 900, [("a.x", 900)]),))
        )
        with pytest.raises(FrameworkValidationError):
            load_framework(text)

    def test_load_clean(self):
        fw = load_framework(serialize_framework(tiny_framework()))
        assert fw == tiny_framework()


class TestBuiltin:
    def test_version(self, framework):
        assert framework.version == BUILTIN_VERSION

    def test_shape(self, framework):
        assert len(framework.sections) == 8
        assert len(framework.subsections()) == 36

    def test_find_subsection(self, framework):
        sub = framework.find_subsection("risk_mitigations.risk_mitigation")
        assert sub.weight_tenths == 40
        with pytest.raises(KeyError):
            framework.find_subsection("nope")

    def test_every_subsection_has_criteria(self, framework):
        for sub in framework.subsections():
            assert sub.criteria_prompt.strip()

    def test_stable_serialization(self, framework):
        a = serialize_framework(framework)
        b = serialize_framework(builtin_framework())
        assert a == b
