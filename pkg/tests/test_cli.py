import io
import json

from poincount.cli import run


def capture(argv, env_format=None, monkeypatch=None):
    out, err = io.StringIO(), io.StringIO()
    code = run(argv, stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def run_json(argv):
    code, out, err = capture(argv + ["--format"] if False else ["--format", "json"] + argv)
    assert code in (0, 1), err
    return code, json.loads(out)


def test_list_exit_zero_and_count():
    code, payload = run_json(["list"])
    assert code == 0
    assert payload["fields"]["entries"] == 22
    assert payload["schema"] == "poincount.output/1"


def test_show_almost_complex_table_row():
    code, payload = run_json(["show", "almost-complex", "--n", "4", "--kmax", "6"])
    assert code == 0
    table = payload["tables"][0]
    h_row = [row[1] for row in table["rows"]]
    assert h_row == [0, 16, 272, 1320, 4392, 11840, 27744]


def test_verify_single_entry_exit_zero():
    code, payload = run_json(["verify", "--id", "fedosov", "--nmax", "4", "--kmax", "50"])
    assert code == 0
    assert payload["fields"]["mismatch"] == 0
    assert payload["fields"]["match"] == 4


def test_analyze_exact_rational_sigma():
    code, payload = run_json(["analyze", "--expr", "1/(1-z^2)^3"])
    assert code == 0
    fields = payload["fields"]
    assert fields["functional_dimension_d"] == 3
    assert fields["functional_rank_sigma"] == {"num": "1", "den": "8"}
    assert fields["single_pole_form"] is False
    assert fields["other_unit_poles"] == [["1 + z", 3]]


def test_no_floats_anywhere_in_json():
    def walk(node):
        if isinstance(node, float):
            raise AssertionError("float leaked into JSON payload")
        if isinstance(node, dict):
            for v in node.values():
                walk(v)
        elif isinstance(node, list):
            for v in node:
                walk(v)

    for argv in (
        ["show", "kaehler", "--n", "2", "--kmax", "8"],
        ["analyze", "--expr", "(1+z)/(1-z)^2"],
        ["metric2d", "--kmax", "2"],
    ):
        _, payload = run_json(argv)
        walk(payload)


def test_exit_codes_for_errors():
    code, out, err = capture(["show", "nonsense"])
    assert code == 2 and "error" in err
    code, out, err = capture(["show", "riemannian", "--n", "1"])
    assert code == 2
    code, out, err = capture(["analyze", "--expr", "1/(1-w)"])
    assert code == 2
    code, out, err = capture(["analyze", "--expr", "2z"])  # implicit product
    assert code == 2
    code, out, err = capture(["no-such-command"])
    assert code == 2


def test_rederive_match_exit_zero():
    code, payload = run_json(["rederive", "--id", "einstein", "--n", "4", "--kmax", "12"])
    assert code == 0
    assert payload["fields"]["match"] is True


def test_metric2d_output():
    code, payload = run_json(["metric2d", "--kmax", "3"])
    assert code == 0
    rows = payload["tables"][0]["rows"]
    assert [r[1] for r in rows] == [0, 0, 1, 1]


def test_strata_demo_deterministic_bytes():
    argv = ["--format", "markdown", "strata-demo", "--kmax", "6", "--seed", "7"]
    first = capture(argv)
    second = capture(argv)
    assert first == second
    assert first[0] == 0
    assert "sigma3" in first[1]


def test_strata_demo_short_horizon_is_a_clean_error():
    # constant-tail fitting needs 3 equal trailing values; k_max = 4 cannot
    # show them for every stratum and must exit with a usage-style error
    code, out, err = capture(["strata-demo", "--kmax", "4", "--seed", "7"])
    assert code == 2 and "extend k_max" in err


def test_formats_agree_on_data():
    _, payload = run_json(["show", "riemannian", "--n", "2", "--kmax", "5"])
    h_json = [row[1] for row in payload["tables"][0]["rows"]]
    code, md, _ = capture(["--format", "markdown", "show", "riemannian", "--n", "2", "--kmax", "5"])
    md_rows = [
        line.split("|")[2].strip()
        for line in md.splitlines()
        if line.startswith("|") and "---" not in line and "h_k" not in line
    ]
    assert [str(v) for v in h_json] == md_rows
    code, csv_text, _ = capture(["--format", "csv", "show", "riemannian", "--n", "2", "--kmax", "5"])
    assert code == 0
    csv_rows = [
        line.split(",")[1]
        for line in csv_text.splitlines()
        if line and line[0].isdigit()
    ]
    assert csv_rows == [str(v) for v in h_json]


def test_env_var_default_format(monkeypatch):
    monkeypatch.setenv("POINCOUNT_FORMAT", "json")
    out = io.StringIO()
    code = run(["list"], stdout=out)
    assert code == 0
    json.loads(out.getvalue())


def test_show_hilbert_flag_and_notes():
    _, payload = run_json(["show", "takens-bogdanov", "--kmax", "8"])
    assert any("closed form only" in n for n in payload["notes"])
    h_row = [row[1] for row in payload["tables"][0]["rows"]]
    # series of the closed form: gaps at k = 1 mod 3 starting from k = 6
    assert h_row == [0, 0, 1, 1, 1, 1, 0, 1, 1]


def test_show_with_extra_params():
    _, payload = run_json(
        ["show", "poincare-dulac-saddle", "--param", "p=1", "--param", "q=1", "--kmax", "6"]
    )
    h_row = [row[1] for row in payload["tables"][0]["rows"]]
    assert h_row == [0, 1, 0, 1, 0, 1, 0]


def test_verify_mismatch_exit_one(monkeypatch):
    from poincount import catalog as cat
    from poincount import cli as cli_mod

    fake = [cat.VerificationReport("riemannian", {"n": 2}, "mismatch", {"k": 3})]
    monkeypatch.setattr(cli_mod.catalog, "verify_all", lambda k, n: fake)
    out = io.StringIO()
    code = run(["--format", "json", "verify"], stdout=out)
    assert code == 1
    payload = json.loads(out.getvalue())
    assert payload["fields"]["mismatch"] == 1


def test_verify_alias_filters_family_samples():
    code, payload = run_json(["verify", "--id", "takens-bogdanov"])
    assert code == 0
    rows = payload["tables"][0]["rows"]
    assert len(rows) == 1
    assert "takens-bogdanov" in rows[0][1]
