import io
import json
from fractions import Fraction

import pytest
from jsonschema import validate

from ci_errors import EmptyInput, ParseError, RaggedRows, ZeroRow
from cone_tool import SumType
from directsum_tool import RayLeaf, bipyramid
from generator_set import GeneratorSet
from gluing_tool import is_complete_intersection
from instance_utils import (build_analysis_report, canonical_json, direct_sum_to_dict, format_instance_text, parse_instance, parse_text, ray_tree_to_dict,
                            to_canonical, to_generator_set, tree_to_dict)


def test_parse_text_takes_name_from_leading_comment():
    instance = parse_text("# demo\n# 第二条注释\n4\n6\n\n9\n")
    assert instance.name == "demo"
    assert instance.generators == [[4], [6], [9]]


def test_parse_text_ignores_trailing_comments_and_keeps_duplicates():
    instance = parse_text("1 0  # 第一条\n\n0 1\n1 0\n")
    assert instance.name is None
    assert instance.generators == [[1, 0], [0, 1], [1, 0]]
    assert to_generator_set(instance).vectors == ((1, 0), (0, 1), (1, 0))


def test_parse_json():
    instance = parse_text('{"name": "b", "generators": [[1, 0], [0, 1]]}')
    assert instance.name == "b"
    assert instance.generators == [[1, 0], [0, 1]]
    assert parse_text('  {"generators": [[3]]}').name is None


@pytest.mark.parametrize("text, error", [
    ("1 0\n1\n", RaggedRows),
    ('{"generators": [[1, 0], [1]]}', RaggedRows),
    ("1 0\n0 0\n", ZeroRow),
    ('{"generators": [[0]]}', ZeroRow),
    ("# 只有注释\n", EmptyInput),
    ("", EmptyInput),
    ('{"generators": []}', EmptyInput),
    ('{"generators": [[1, 2.5]]}', ParseError),
    ('{"generators": [[true]]}', ParseError),
    ('{"generators": [[1]], "extra": 1}', ParseError),
    ('{"name": 3, "generators": [[1]]}', ParseError),
])
def test_parse_errors(text, error):
    with pytest.raises(error):
        parse_text(text)


def test_parse_error_position():
    with pytest.raises(ParseError) as excinfo:
        parse_text("1 0\n2 x\n")
    assert (excinfo.value.line, excinfo.value.column) == (2, 3)

    with pytest.raises(ParseError) as excinfo:
        parse_text('{"generators": [\n')
    assert excinfo.value.line == 2


def test_parse_instance_sources(tmp_path, instance_dir, monkeypatch):
    path = tmp_path / "unnamed.txt"
    path.write_text("3\n5\n", encoding="utf-8")
    assert parse_instance(path).name == "unnamed"
    assert parse_instance(str(instance_dir / "4_6_9.txt")).name == "4_6_9"
    assert parse_instance(instance_dir / "bipyramid3.json").generators == [[1, 0, 1], [-1, 0, 1], [0, 1, 1], [0, -1, 1]]
    assert parse_instance(io.StringIO("7\n")).name is None

    monkeypatch.setattr("sys.stdin", io.StringIO("# 标准输入\n2\n3\n"))
    assert parse_instance("-").generators == [[2], [3]]


def test_format_instance_text():
    A = GeneratorSet(((1, 0), (0, -1)), name="x")
    text = format_instance_text(A)
    assert text == "# x\n1 0\n0 -1\n"
    assert to_generator_set(parse_text(text)) == A
    assert format_instance_text(GeneratorSet(((2,),))) == "2\n"


def test_to_canonical():
    assert to_canonical(2**53 - 1) == 2**53 - 1
    assert to_canonical(2**53) == "9007199254740992"
    assert to_canonical(-(2**60)) == str(-(2**60))
    assert to_canonical(Fraction(3, 4)) == "3/4"
    assert to_canonical(Fraction(4, 2)) == 2
    assert to_canonical(True) is True
    assert to_canonical(SumType.INTERNAL) == "internal"
    assert to_canonical({1: (1, 2)}) == {"1": [1, 2]}
    with pytest.raises(TypeError):
        to_canonical(1.5)


def test_canonical_json_sorts_keys():
    text = canonical_json({"b": 1, "a": [Fraction(1, 2), 2**70]})
    assert text.endswith("\n")
    assert text.index('"a"') < text.index('"b"')
    assert json.loads(text) == {"a": ["1/2", str(2**70)], "b": 1}


def test_tree_to_dict(numerical_469):
    _, tree = is_complete_intersection(numerical_469)
    data = tree_to_dict(tree)
    assert data["kind"] == "gluing"
    assert (data["E1"], data["E2"], data["a"], data["t"]) == ([0], [1, 2], [12], 1)
    assert (data["cert1"], data["cert2"]) == ([3], [2, 0])
    assert data["sum_type"] == "external"
    assert data["left"] == {"leaf": [0]}
    assert data["right"]["a"] == [18]
    assert tree_to_dict(None) is None


def test_small_serialisers():
    assert ray_tree_to_dict(RayLeaf(((0, 1), (1, 0)))) == {"rays": [[0, 1], [1, 0]]}
    assert direct_sum_to_dict(None) == {"exists": False}


def test_report_for_non_pointed_instance():
    report = build_analysis_report(GeneratorSet(((1, 0), (-1, 0), (0, 1)), name="half-plane"))
    assert not report.pointed
    assert report.dim == 2
    assert report.lineality_witness is not None
    assert report.is_ci is None and report.extreme_rays is None


def test_report_for_469(numerical_469):
    report = build_analysis_report(numerical_469, oracle=True)
    assert report.is_ci and report.is_ci_cone
    assert report.extreme_rays == [[1]]
    assert report.bipyramidal is False
    assert report.bound is None
    assert report.oracle["mu"] == 2
    assert report.ci_chain["d_values"] == [0, 0, 0]
    assert "timings" not in report.canonical()
    assert set(report.timings) == {"cone", "is_ci", "is_ci_cone", "bound", "oracle"}


def test_report_records_skipped_oracle(numerical_345):
    report = build_analysis_report(numerical_345, oracle=True, budget=1)
    assert not report.is_ci
    assert report.is_ci_cone
    assert "skipped" in report.oracle


def test_reports_match_schema(schema, numerical_345, bipyramid3, pentagon):
    for A in (numerical_345, bipyramid3, pentagon, bipyramid(4), GeneratorSet(((1, 0), (-1, 0)))):
        validate(report_json(A), schema)


def test_bipyramid_report_hits_the_bound(bipyramid3):
    report = build_analysis_report(bipyramid3)
    assert report.bipyramidal
    assert report.bound == {"n": 3, "k": 4, "bound_holds": True, "equality": True, "bipyramidal": True, "violations": []}


def report_json(A):
    return json.loads(canonical_json(build_analysis_report(A, oracle=True).canonical()))
