import pytest

from conftest import Q
from modules.cli import (
    FORMAT_VERSION, dumps, load_file, loads, parse, parse_expression, run_suite, run_text, same_structure,
    save_file, serialization_fixtures, tokenize,
)
from modules.cli.dsl import Call, IndColim, Query
from modules.common import DslSyntaxError, FormatError, IndSheafError, RunConfig
from modules.indcat import SeqSystem
from modules.sheaf import constant_sheaf, identity_morphism
from modules.space import point


def test_tokenize_hyphenated_names():
    kinds = [t.kind for t in tokenize("is-exact(f, g); n-1")]
    assert kinds == ["ident", "(", "ident", ",", "ident", ")", ";", "ident", "-", "number", "eof"]


def test_tokenize_tracks_lines_and_skips_comments():
    tokens = tokenize("# heading\nlet X = 1;")
    assert tokens[0].kind == "let"
    assert (tokens[0].line, tokens[0].column) == (2, 1)


def test_empty_script():
    assert parse("").statements == []
    assert parse("  # nothing here\n").statements == []
    report = run_text("")
    assert not report.failed
    assert report.text().endswith("# PASS: 0 records, 0 failed\n")


def test_parse_statements():
    script = parse('let G = indcolim n: k_on(closed_ray(n));\ndim-hom(constant(line), G);')
    let, query = script.statements
    assert isinstance(let.expr, IndColim)
    assert isinstance(let.expr.body, Call)
    assert isinstance(query, Query)
    assert query.source == "dim-hom(constant(line), G);"


@pytest.mark.parametrize("text, line, column", [
    ("let X = k_on(closed_ray(0);", 1, 27),
    ("emit \"ok\";\nlet = 3;", 2, 5),
    ("show Y;", 1, 6),
    ("show closed_ray(1, 2);", 1, 6),
    ("let X = 3 $ 4;", 1, 11),
])
def test_syntax_errors_carry_positions(text, line, column):
    with pytest.raises(DslSyntaxError) as info:
        parse(text)
    assert (info.value.line, info.value.column) == (line, column)


def test_indcolim_variable_is_scoped():
    with pytest.raises(DslSyntaxError):
        parse("let G = indcolim n: k_on(closed_ray(n));\nshow n;")
    expr = parse_expression("closed_ray(n)", bound=["n"])
    assert isinstance(expr, Call)
    assert expr.args[0].name == "n"


def test_rays_get_a_shift_certificate():
    report = run_text("let G = indcolim n: k_on(closed_ray(n));\nshow G;\ndim-hom(constant(line), G);")
    assert not report.failed
    shown, query = report.records
    assert "shift" in shown.lines[0]
    assert query.lines == ["dim = 1 [exact]"]


def test_constant_rule_only_for_bodies_without_the_variable():
    report = run_text("let X = indcolim n: constant(pt);\nis-zero(X);\n"
                      "let Y = indcolim n: constant(pt, 1 + 0 * n);\nis-zero(Y);")
    fixed, varying = report.records
    assert fixed.lines[0].startswith("false [exact]")
    assert varying.lines[0].startswith("false [truncated@")


def test_powers_of_k_are_infinite():
    report = run_text("let X = indcolim n: constant(pt, n);\ndim-hom(constant(pt), X);\nrepresentable(X);")
    assert report.records[0].lines[0].startswith("dim = inf [certified:block(")
    assert report.records[1].lines[0].startswith("false")


def test_expectations_mark_failures():
    report = run_text("dim-hom(constant(pt), constant(pt), expect = 2);")
    assert report.failed
    assert report.records[0].lines == ["dim = 1 [exact] expected 2"]


def test_report_header_and_footer():
    config = RunConfig(field="fp:5", truncation=8, seed=3)
    text = run_text('emit "hello";', config).text()
    lines = text.splitlines()
    assert lines[0] == "# report field=fp:5 trunc=8 seed=3"
    assert lines[1] == '[0] emit "hello";'
    assert lines[2] == "  hello"
    assert lines[-1] == "# PASS: 1 records, 0 failed"


def test_runtime_error_stops_the_script():
    report = run_text('emit "a";\nshow load("/nonexistent/sheaf.txt");\nemit "b";')
    assert report.failed
    assert report.error.statement_index == 1
    assert len(report.records) == 1
    assert "error: statement 1" in report.text()


def test_reports_are_deterministic():
    script = "let X = random_sheaf(line);\nshow X;\ncheck-mv(all_cell_functions(line), pairs = 4);"
    config = RunConfig(seed=11)
    assert run_text(script, config).text() == run_text(script, config).text()


def test_save_and_load(tmp_path):
    target = tmp_path / "rays.txt"
    report = run_text(f'let G = indcolim n: k_on(closed_ray(n));\nsave G "{target}";\nshow load("{target}");')
    assert not report.failed
    assert target.read_text(encoding="utf-8").startswith(f"(indsheaf-format {FORMAT_VERSION})")


@pytest.mark.parametrize("label", ["5-cell sheaf", "shift system", "exhausting system", "open interval"])
def test_round_trip_fixtures(label):
    value = serialization_fixtures(Q, 7)[label]
    assert same_structure(loads(dumps(value, Q)), value)


def test_shift_fixture_keeps_its_certificate(tmp_path):
    rays = serialization_fixtures(Q, 0)["shift system"]
    assert rays.cert.cert_id == "shift(n0=2,p=1,units=1)"
    path = save_file(rays, tmp_path / "nested" / "rays.txt")
    loaded = load_file(path)
    assert loaded.cert == rays.cert
    assert same_structure(loaded, rays)


def test_uncertified_systems_are_not_saved():
    pt = point()
    k = constant_sheaf(pt, Q)
    bare = SeqSystem(pt, Q, lambda n: k, lambda n: identity_morphism(k))
    with pytest.raises(FormatError):
        dumps(bare)


def test_format_errors():
    text = dumps(constant_sheaf(point(), Q))
    with pytest.raises(FormatError):
        loads(text.replace(f"(indsheaf-format {FORMAT_VERSION})", "(indsheaf-format 99)"))
    with pytest.raises(FormatError):
        loads(text.splitlines()[0])
    with pytest.raises(FormatError):
        load_file("/nonexistent/sheaf.txt")


def test_determinism_suite():
    result = run_suite("determinism", RunConfig(seed=5))
    assert result.passed
    assert result.text().startswith("suite determinism seed=")


def test_unknown_suite():
    with pytest.raises(IndSheafError):
        run_suite("nonsense")
