import json

from newton_cocenter.cli import main


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out


def test_describe(capsys):
    code, out = run_cli(capsys, "--group", "A1", "describe")
    assert code == 0
    assert "A1:sc" in out and "S0" in out


def test_newton_gl5_anchor_element(capsys):
    code, out = run_cli(capsys, "--group", "GL5", "newton",
                        "t[1,1,0,1,0]*s2*s1*s4")
    assert code == 0
    payload = json.loads(out)
    assert payload["nu"] == ["2/3", "2/3", "2/3", "1/2", "1/2"]
    assert payload["straight"] is False


def test_newton_encoding_independent(capsys):
    # two different words for the same finite part must print the same nu
    _, out1 = run_cli(capsys, "--group", "GL5", "newton",
                      "t[1,1,0,1,0]*s2*s1*s4")
    _, out2 = run_cli(capsys, "--group", "GL5", "newton",
                      "t[1,1,0,1,0]*s2*s1*s4*s4*s4")
    assert json.loads(out1)["nu"] == json.loads(out2)["nu"]


def test_strata_tsv(capsys):
    code, out = run_cli(capsys, "--group", "A1", "strata", "--length", "4")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "nu_bar\tkappa\tcount\tmin_length_in_fiber"
    counts = sorted(int(l.split("\t")[2]) for l in lines[1:])
    assert counts == [2, 2, 5]


def test_strata_omega_filter(capsys):
    code, out = run_cli(capsys, "--group", "GL2", "strata", "--length", "2",
                        "--omega", "[0,1]")
    assert code == 0
    lines = out.strip().splitlines()[1:]
    assert lines
    assert all(l.split("\t")[1] == "0,1" for l in lines)


def test_strata_json_lines(capsys):
    code, out = run_cli(capsys, "--group", "A1", "--json", "strata",
                        "--length", "2")
    assert code == 0
    records = [json.loads(l) for l in out.strip().splitlines()]
    assert len(records) == 5
    assert all({"elem", "length", "kappa", "newton"} <= set(r) for r in records)


def test_reduce_path(capsys):
    code, out = run_cli(capsys, "--group", "A1", "reduce", "S1*S0*S1")
    assert code == 0
    assert "conj-down S1" in out
    assert "min t[1]*s1 length 1" in out
    assert "triple" in out


def test_triple(capsys):
    code, out = run_cli(capsys, "--group", "A1", "--json", "triple", "S0")
    assert code == 0
    payload = json.loads(out)
    assert payload == {"x": "t[0]", "K": ["S0"], "u": "t[1]*s1"}


def test_alcove_test(capsys):
    code, out = run_cli(capsys, "--group", "GL5", "alcove-test",
                        "t[1,1,0,1,0]*s2*s1*s4", "--v",
                        '["2/3","2/3","2/3","1/2","1/2"]')
    assert code == 0
    payload = json.loads(out)
    assert payload["fixes_v"] is True
    assert payload["v_alcove"] is False


def test_positivity(capsys):
    code, out = run_cli(capsys, "--group", "GL5", "positivity",
                        "t[1,1,0,1,0]*s2*s1*s4", "--v",
                        '["2/3","2/3","2/3","1/2","1/2"]')
    assert code == 0
    payload = json.loads(out)
    assert payload["exponent"] == 6
    assert payload["exponent"] <= payload["bound"]


def test_levi_describe(capsys):
    code, out = run_cli(capsys, "--group", "GL5", "--json", "levi", "--v",
                        '["2/3","2/3","2/3","1/2","1/2"]', "describe")
    assert code == 0
    payload = json.loads(out)
    assert payload["w_m_order"] == 12
    assert len(payload["affine_simple_reflections"]) == 5


def test_cocenter_reduce(capsys):
    code, out = run_cli(capsys, "--group", "A1", "--json", "cocenter-reduce",
                        "T[S1*S0*S1]")
    assert code == 0
    payload = json.loads(out)
    comps = {tuple(c["nu"]): c["terms"] for c in payload["components"]}
    assert comps[("0",)] == [{"elem": "t[1]*s1", "poly": "q"}]
    assert comps[("1",)] == [{"elem": "t[1]", "poly": "q-1"}]


def test_cocenter_reduce_expr_with_poly(capsys):
    code, out = run_cli(capsys, "--group", "A1", "--json", "cocenter-reduce",
                        "q^2-1*T[E]+2*T[S1]-T[S1]")
    assert code == 0
    payload = json.loads(out)
    terms = [t for c in payload["components"] for t in c["terms"]]
    assert {"elem": "t[0]", "poly": "q^2-1"} in terms
    assert {"elem": "t[0]*s1", "poly": "1"} in terms


def test_induce(capsys):
    code, out = run_cli(capsys, "--group", "A1", "--json", "induce",
                        "--v", '["1"]', "T[t[-1]]")
    assert code == 0
    payload = json.loads(out)
    assert payload["components"] == [
        {"nu": ["1"], "omega": [0],
         "terms": [{"elem": "t[1]", "poly": "1"}]}]


def test_rigid(capsys):
    code, out = run_cli(capsys, "--group", "A1", "rigid", "--length", "4")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "nu_bar\tkappa\tlevi\tcount\tcovered"
    assert lines[1:] == ["0\t0\tG\t3\ttrue", "1\t0\tT\t1\ttrue",
                         "2\t0\tT\t1\ttrue"]


def test_verify_pass_and_exit_codes(capsys):
    code, out = run_cli(capsys, "--group", "A1", "verify", "newton",
                        "--length", "4")
    assert code == 0
    assert "sizes=5/2/2" in out
    assert out.rstrip().endswith("PASS")


def test_verify_unknown_suite(capsys):
    code, _ = run_cli(capsys, "--group", "A1", "verify", "nope")
    assert code == 2


def test_verify_tsv_output(capsys):
    code, out = run_cli(capsys, "--group", "A1", "--tsv", "verify", "newton",
                        "--length", "4")
    assert code == 0
    rows = [l.split("\t") for l in out.strip().splitlines()]
    assert all(r[0] == "newton" and r[3] == "0" for r in rows)


def test_ball_cap_flag(capsys):
    code, _ = run_cli(capsys, "--group", "A1", "--ball-cap", "3",
                      "strata", "--length", "4")
    assert code == 2


def test_parse_error_exit_code(capsys):
    code, _ = run_cli(capsys, "--group", "A1", "newton", "t[1,2,3]")
    assert code == 2
    code, _ = run_cli(capsys, "--group", "E8", "describe")
    assert code == 2


def test_config_file(tmp_path, capsys):
    cfg = tmp_path / "group.cfg"
    cfg.write_text("# sample\ntype = GL\nrank = 2\n")
    code, out = run_cli(capsys, "--config", str(cfg), "describe")
    assert code == 0
    assert "GL2" in out


def test_jobs_determinism(capsys):
    code1, out1 = run_cli(capsys, "--group", "A1", "--jobs", "1",
                          "verify", "all")
    code2, out2 = run_cli(capsys, "--group", "A1", "--jobs", "8",
                          "verify", "all")
    assert code1 == code2 == 0
    assert out1 == out2


def test_nf_cache_round_trip(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("NEWTON_COCENTER_CACHE", str(tmp_path))
    code, out1 = run_cli(capsys, "--group", "A1", "--json",
                         "cocenter-reduce", "T[S1*S0*S1]")
    assert code == 0
    files = list(tmp_path.iterdir())
    assert len(files) == 1 and files[0].name.startswith("nf-v1-")
    code, out2 = run_cli(capsys, "--group", "A1", "--json",
                         "cocenter-reduce", "T[S1*S0*S1]")
    assert code == 0
    assert out1 == out2
