import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from rssw.cli import EXIT_HYPOTHESIS, EXIT_OK, EXIT_PARSE, main
from rssw.report import CONCLUSION, ManifoldParseError, Report, analyze, parse_manifold
from rssw.topology import ManifoldData


class TestParser:
    @pytest.mark.parametrize(
        "text,ab",
        [
            ("2E8 # 3H", (2, 3)),
            ("K3bar # S2xS2", (2, 4)),
            ("k3BAR#s2xs2", (2, 4)),
            ("  3 H ", (0, 3)),
            ("K3", (-2, 3)),
            ("-E8 # 2H", (-1, 2)),
            ("E8 # -E8", (0, 8)),
            ("3E8 # 2-E8 # H", (1, 17)),
        ],
    )
    def test_accepts(self, text, ab):
        M = parse_manifold(text).to_manifold()
        assert (M.e8_count, M.h_count) == ab

    @pytest.mark.parametrize(
        "text,offset",
        [("2Q8", 1), ("", 0), ("   ", 3), ("0H", 0), ("H #", 3), ("H H", 2), ("2", 1), ("é # Q", 0), ("H # é", 4)],
    )
    def test_rejects_with_offset(self, text, offset):
        with pytest.raises(ManifoldParseError) as exc:
            parse_manifold(text)
        assert exc.value.offset == offset

    def test_offset_counts_bytes(self):
        with pytest.raises(ManifoldParseError) as exc:
            parse_manifold("é#Q")
        assert exc.value.offset == 0
        with pytest.raises(ManifoldParseError) as exc:
            parse_manifold("H#éQ")
        assert exc.value.offset == 2

    def test_canonical_print(self):
        assert str(parse_manifold("2e8  #3h")) == "2E8 # 3H"

    @given(st.lists(st.tuples(st.integers(1, 5), st.sampled_from(["E8", "-E8", "H", "K3", "K3bar", "S2xS2"])), min_size=1, max_size=5))
    def test_signature_is_additive(self, terms):
        text = " # ".join(f"{c}{a}" for c, a in terms)
        total = sum(c * parse_manifold(a).to_manifold().sigma for c, a in terms)
        assert parse_manifold(text).to_manifold().sigma == total


class TestAnalyze:
    def test_golden(self):
        r = analyze("2E8 # 3H")
        assert (r.b2, r.sigma, r.b2plus, r.k, r.m) == (22, 16, 19, 19, 19)
        assert r.index_rs == "38" and r.index_dirac == "-2" and r.virtual_dim == "56"
        assert r.feasibility == "Excluded(trace_fraction)" and r.required_trace == "1/524288"
        assert r.compactness_margin == "-40" and not r.vacuous and r.furuta_margin == "0"
        assert r.slope_window == (False, True) and r.conclusion == CONCLUSION

    def test_k3bar_sum(self):
        r = analyze("K3bar # S2xS2")
        assert (r.e8_count, r.h_count, r.compactness_margin, r.furuta_margin) == (2, 4, "-38", "2")

    def test_family(self):
        for n in (1, 2, 3):
            r = analyze(f"{2 * n}E8 # {3 * n - 1}H")
            assert r.exact("compactness_margin") == -38 * n - 4
            assert r.feasibility.startswith("Excluded")

    def test_vacuous(self):
        r = analyze("3H")
        assert r.feasibility == "NotExcluded(k=0)" and r.vacuous and r.conclusion is None

    def test_negative_signature(self):
        r = analyze("K3")
        assert r.sigma == -16 and r.vacuous and r.conclusion is None

    def test_definite_is_a_violation(self):
        from rssw.topology import HypothesisViolation

        with pytest.raises(HypothesisViolation):
            analyze("2E8")

    def test_json_roundtrip(self):
        r = analyze("4E8 # 5H")
        back = Report.from_json(r.to_json())
        assert back == r
        assert json.loads(r.to_json()) == json.loads(back.to_json())

    def test_json_rejects_unknown_fields(self):
        d = analyze("H").to_dict()
        d["extra"] = 1
        with pytest.raises(ValueError):
            Report.from_json(json.dumps(d))

    def test_text(self):
        text = analyze("2E8 # 3H").to_text()
        assert "Excluded(trace_fraction)" in text and "-40" in text


@given(st.integers(1, 6), st.integers(1, 20))
def test_report_consistent_with_topology(half_a, b):
    r = analyze(f"{2 * half_a}E8 # {b}H")
    M = ManifoldData(2 * half_a, b)
    assert r.b2 == M.b2 and r.k == 19 * half_a and r.m == M.b2plus
    assert r.feasibility.startswith("Excluded") == (r.exact("compactness_margin") < 0)


def _run(capsys, argv):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


class TestCli:
    def test_analyze_json(self, capsys):
        code, out, _ = _run(capsys, ["analyze", "2E8 # 3H"])
        assert code == EXIT_OK and json.loads(out)["compactness_margin"] == "-40"

    def test_analyze_text(self, capsys):
        code, out, _ = _run(capsys, ["--format", "text", "analyze", "2E8 # 3H"])
        assert code == EXIT_OK and "compactness margin" in out

    def test_format_after_subcommand(self, capsys):
        code, out, _ = _run(capsys, ["analyze", "3H", "--format", "text"])
        assert code == EXIT_OK and "NotExcluded(k=0)" in out

    def test_parse_error(self, capsys):
        code, _, err = _run(capsys, ["analyze", "2Q8"])
        assert code == EXIT_PARSE and "offset 1" in err

    def test_hypothesis_violation(self, capsys):
        code, _, err = _run(capsys, ["analyze", "E8 # H"])
        assert code == EXIT_HYPOTHESIS and "spin" in err
        assert _run(capsys, ["analyze", "2E8"])[0] == EXIT_HYPOTHESIS

    def test_usage_error(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["frobnicate"])
        assert exc.value.code == EXIT_PARSE

    def test_index(self, capsys):
        code, out, _ = _run(capsys, ["index", "--sigma", "16", "--chi", "24"])
        d = json.loads(out)
        assert code == EXIT_OK and d["index_rs"] == "38" and d["index_dirac"] == "-2"

    def test_feasibility(self, capsys):
        code, out, _ = _run(capsys, ["feasibility", "--k", "19", "--m", "19"])
        d = json.loads(out)
        assert code == EXIT_OK and d["excluded"] and d["required_trace"] == "1/524288"
        d = json.loads(_run(capsys, ["feasibility", "--k", "-2", "--m", "3"])[1])
        assert d["r"] == 2 and d["required_trace"] == "128"

    def test_feasibility_bad_counts(self, capsys):
        assert _run(capsys, ["feasibility", "--k", "-3", "--m", "1", "--r", "1"])[0] == EXIT_PARSE

    def test_repring(self, capsys):
        code, out, _ = _run(capsys, ["repring", "eval", "(2-h)^3*(1-d)"])
        d = json.loads(out)
        assert code == EXIT_OK and d["normal_form"] == "8 - 8*d" and d["char_at_j"] == 16
        assert _run(capsys, ["repring", "eval", "(1-d"])[0] == EXIT_PARSE

    def test_repring_text(self, capsys):
        code, out, _ = _run(capsys, ["--format", "text", "repring", "eval", "h"])
        assert code == EXIT_OK and "1*c^1" in out

    def test_equivariance(self, capsys):
        code, out, _ = _run(capsys, ["verify-equivariance", "--elements", "2", "--samples", "3"])
        d = json.loads(out)
        assert code == EXIT_OK and all(r["ok"] for r in d["results"].values())

    def test_seed_from_environment(self, capsys, monkeypatch):
        monkeypatch.setenv("RSSW_SEED", "17")
        d = json.loads(_run(capsys, ["verify-equivariance", "--elements", "1", "--samples", "1"])[1])
        assert d["seed"] == 17
        d = json.loads(_run(capsys, ["verify-equivariance", "--elements", "1", "--samples", "1", "--seed", "4"])[1])
        assert d["seed"] == 4

    def test_kuranishi_demo(self, capsys):
        code, out, _ = _run(capsys, ["kuranishi", "demo", "--seed", "2", "--dim-c", "16", "--dim-r", "14"])
        d = json.loads(out)
        assert code == EXIT_OK and d["planted"]["holds"] and d["sandwich_ok"]

    def test_kuranishi_collision(self, capsys):
        code, _, err = _run(capsys, ["kuranishi", "demo", "--dim-c", "16", "--dim-r", "14", "--cutoff", "0"])
        assert code == EXIT_PARSE and "cutoff" in err.lower()
