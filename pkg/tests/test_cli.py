import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from rewritelab import cli
from rewritelab.core import Genome, Kind, MultiSetObject, Rule, canonicalize, ins, sub
from rewritelab.formats import (
    FormatError,
    format_genome_file,
    format_object_file,
    parse_genome_file,
    parse_object_file,
    render_sweep_csv,
)
from rewritelab.statmech import SweepRow

# --- genome files -----------------------------------------------------------------


def test_parse_sub_line():
    assert parse_genome_file("g1 SUB ab cd 1.5\n") == Genome((sub("g1", "ab", "cd", 1.5),))


def test_parse_ins_with_empty_anchors():
    assert parse_genome_file("g1 INS _ w _ 2") == Genome((ins("g1", "", "w", "", 2.0),))


def test_parse_skips_comments_and_blanks():
    text = "# header\n\n  g1 SUB a b 1\n   # indented comment\ng2 DUP [ ] 0.25\n"
    g = parse_genome_file(text)
    assert [r.name for r in g] == ["g1", "g2"]
    assert g[1].kind is Kind.DUP and g[1].weight == 0.25


@pytest.mark.parametrize("text,line,column,fragment", [
    ("g1 SUB ab 1.5", 1, 1, "takes 2 parameters"),
    ("# c\ng1 SUB a b 1\ng1 SUB b a 1", 3, 1, "duplicate rule name"),
    ("g1 SUB a b 0", 1, 12, "positive"),
    ("g1 SUB a b -2", 1, 12, "weight"),
    ("g1 SUB a b one", 1, 12, "weight"),
    ("g1 FOO a b 1", 1, 4, "unknown rule kind"),
    ("g1", 1, 1, "expected"),
    ("g1 INS a b 1", 1, 1, "takes 3 parameters"),
    ("g1 SUB _ b 1", 1, 1, "nonempty pattern"),
    ("g1 SUB a b c 1", 1, 14, "takes 2 parameters"),
])
def test_genome_errors(text, line, column, fragment):
    with pytest.raises(FormatError) as info:
        parse_genome_file(text)
    assert info.value.line == line and info.value.column == column
    assert fragment in str(info.value)
    assert str(info.value).startswith(f"line {line}, column {column}:")


rule_params = st.text(alphabet="abcXY[].", max_size=3)


@st.composite
def genomes(draw):
    rules = []
    for i in range(draw(st.integers(0, 5))):
        kind = draw(st.sampled_from(list(Kind)))
        params = [draw(rule_params) for _ in range(kind.arity)]
        if kind is Kind.SUB:
            params[0] = params[0] or "a"
        if kind is Kind.INS:
            params[1] = params[1] or "b"
        rules.append(Rule(f"r{i}", kind, tuple(params), draw(st.floats(1e-9, 1e9))))
    return Genome(tuple(rules))


@given(genomes())
def test_genome_file_roundtrip(g):
    assert parse_genome_file(format_genome_file(g)) == g


# --- object files ----------------------------------------------------------------


def test_parse_object():
    assert parse_object_file("ab 2") == canonicalize([("ab", 2)])


def test_object_accumulates():
    assert parse_object_file("a 1\na 2\n") == canonicalize([("a", 3)])


@pytest.mark.parametrize("text,line", [("a 0", 1), ("a", 1), ("a 1\nb x", 2), ("a -1", 1), ("a 1 2", 1)])
def test_object_errors(text, line):
    with pytest.raises(FormatError) as info:
        parse_object_file(text)
    assert info.value.line == line


@given(st.dictionaries(st.text("abc", min_size=1, max_size=4), st.integers(1, 5)))
def test_object_file_roundtrip(d):
    o = canonicalize(d)
    assert parse_object_file(format_object_file(o)) == o


def test_empty_word_in_object_file_dropped():
    assert parse_object_file("_ 3\nx 1") == MultiSetObject.of("x")


# --- rendering ---------------------------------------------------------------------


def test_sweep_csv():
    text = render_sweep_csv([SweepRow(1.0, 2.0, -0.6931471805599453, False)])
    assert text.splitlines() == ["beta,Z,free_energy", "1.0,2.0,-0.6931471805599453"]


# --- command line ------------------------------------------------------------------


@pytest.fixture
def files(tmp_path):
    (tmp_path / "g.txt").write_text("g1 SUB a b 1\n")
    (tmp_path / "cycle.txt").write_text("f SUB a b 0.6931471805599453\nr SUB b a 0.6931471805599453\n")
    (tmp_path / "v0.txt").write_text("a 1\n")
    (tmp_path / "target.txt").write_text("b 1\n")
    (tmp_path / "e.txt").write_text("e1 SUB 1 2 1\n")
    (tmp_path / "dup.txt").write_text("d DUP [ ] 1\n")
    (tmp_path / "dup0.txt").write_text("[ab] 1\n")
    (tmp_path / "bad.txt").write_text("g1 SUB a 1\n")
    return tmp_path


def run(capsys, *argv):
    code = cli.main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_cli_z_json(files, capsys):
    code, out, _ = run(capsys, "z", "--genome", files / "g.txt", "--object", files / "v0.txt", "--format", "json")
    assert code == 0
    payload = json.loads(out)
    assert set(payload) == {"Z", "log_Z", "num_vertices", "truncated", "diverged"}
    assert abs(payload["Z"] - 1.3678794411714423) < 1e-12
    assert payload["num_vertices"] == 2


def test_cli_z_text_and_modes(files, capsys):
    code, out, _ = run(capsys, "z", "--genome", files / "cycle.txt", "--object", files / "v0.txt",
                       "--mode", "trunc:40")
    assert code == 0
    z = float(out.splitlines()[0].split(": ")[1])
    assert abs(z - 2.0) < 1e-9  # 4/3 + 2/3


def test_cli_fitness_variants(files, capsys):
    for fit in ("const:2", "count:b:1.5", f"dist:{files / 'target.txt'}:1"):
        code, out, _ = run(capsys, "z", "--genome", files / "g.txt", "--object", files / "v0.txt",
                           "--fitness", fit, "--format", "json")
        assert code == 0, fit
    payload = json.loads(out)
    # dist to {b}: F(a) = 2, F(b) = 0
    assert abs(payload["Z"] - (2.718281828459045 ** -2 + 2.718281828459045 ** -1)) < 1e-12


def test_cli_sweep(files, capsys):
    code, out, _ = run(capsys, "sweep", "--genome", files / "g.txt", "--object", files / "v0.txt",
                       "--betas", "0.5,1,2")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "beta,Z,free_energy" and len(lines) == 4


def test_cli_sweep_single_beta(files, capsys):
    _, out, _ = run(capsys, "sweep", "--genome", files / "g.txt", "--object", files / "v0.txt", "--betas", "1")
    assert len(out.splitlines()) == 2


def test_cli_mincost(files, capsys):
    code, out, _ = run(capsys, "mincost", "--genome", files / "g.txt", "--object", files / "v0.txt",
                       "--fitness", "count:a:-10", "--format", "json")
    payload = json.loads(out)
    assert code == 0 and payload["best_vertex"] == 1 and payload["best_value"] == 1.0


def test_cli_graph_with_dot(files, capsys):
    dot = files / "g.dot"
    code, out, _ = run(capsys, "graph", "--genome", files / "g.txt", "--object", files / "v0.txt", "--dot", dot)
    assert code == 0
    assert "num_vertices: 2" in out
    assert 'v0 -> v1 [label="g1 (K=1)"];' in dot.read_text()


def test_cli_align(capsys):
    code, out, _ = run(capsys, "align", "--v", "ATC", "--w", "AC", "--brute-check")
    assert code == 0
    assert out.splitlines() == ["ATC", "A-C", "score: 1.0", "brute-force: 1.0"]


def test_cli_align_json(capsys):
    code, out, _ = run(capsys, "align", "--v", "A", "--w", "", "--mu", "1", "--sigma", "2", "--format", "json")
    assert code == 0 and json.loads(out) == {"top": "A", "bottom": "-", "score": 2.0}


def test_cli_evolve(files, capsys):
    (files / "g15.txt").write_text("g1 SUB a b 1.5\n")
    (files / "e15.txt").write_text("e1 SUB 1.5 0.5 1\n")
    code, out, _ = run(capsys, "evolve", "--genome", files / "g15.txt", "--object", files / "v0.txt",
                       "--egenome", files / "e15.txt", "--max-depth", "1", "--format", "json")
    assert code == 0
    payload = json.loads(out)
    assert {"Z", "log_Z", "num_vertices", "truncated", "diverged", "per_genome"} <= set(payload)
    assert len(payload["per_genome"]) == 2
    expected = (1 + 2.718281828459045 ** -1.5) + 2.718281828459045 ** -1 * (1 + 2.718281828459045 ** -0.5)
    assert abs(payload["Z"] - expected) < 1e-10


def test_cli_input_errors(files, capsys):
    code, _, err = run(capsys, "z", "--genome", files / "bad.txt", "--object", files / "v0.txt")
    assert code == 1 and "line 1" in err
    code, _, err = run(capsys, "z", "--genome", files / "missing.txt", "--object", files / "v0.txt")
    assert code == 1
    code, _, _ = run(capsys, "z", "--genome", files / "g.txt", "--object", files / "v0.txt", "--mode", "bogus")
    assert code == 1
    code, _, _ = run(capsys, "z", "--genome", files / "g.txt", "--object", files / "v0.txt", "--beta", "0")
    assert code == 1
    code, _, _ = run(capsys, "z", "--genome", files / "g.txt")
    assert code == 1
    code, _, _ = run(capsys, "graph", "--genome", files / "g.txt", "--object", files / "dup0.txt",
                     "--max-word-len", "2")
    assert code == 1


def test_cli_strict(files, capsys):
    args = ["graph", "--genome", files / "dup.txt", "--object", files / "dup0.txt",
            "--max-depth", "6", "--max-word-len", "32"]
    assert run(capsys, *args)[0] == 0
    assert run(capsys, *args, "--strict")[0] == 2
    code, _, err = run(capsys, "z", "--genome", files / "cycle.txt", "--object", files / "v0.txt",
                       "--beta", "1e-300", "--strict")
    assert code == 2


def test_cli_output_file(files, capsys):
    out = files / "z.json"
    code, stdout, _ = run(capsys, "z", "--genome", files / "g.txt", "--object", files / "v0.txt",
                          "--format", "json", "--output", out)
    assert code == 0 and stdout == ""
    assert json.loads(out.read_text())["num_vertices"] == 2
