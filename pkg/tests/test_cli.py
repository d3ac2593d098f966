import json
import subprocess
import sys
from fractions import Fraction

import pytest

from quantcurve.algebra import QQ, RatFunc
from quantcurve.cli import analyze_report, emit_plotdata, main, toprec_report, wkb_report
from quantcurve.curvespec import (
    BUILTIN_NAMES,
    CurveSpecError,
    load_curve,
    parse_curve_spec,
    parse_report,
    serialize_report,
)


def rf(num, den=(1,)):
    return RatFunc.from_coeffs(QQ, num, den)


def test_builtin_airy_coefficients():
    spec = load_curve("airy")
    assert spec.sd.a1.f.is_zero()
    assert spec.sd.a2.f == rf([0, -1])


def test_higgs_matrix_mode_hermite():
    spec = parse_curve_spec({
        "name": "h",
        "higgs": [[["0"], ["1"]], [["-1"], ["0", "-1"]]],
    })
    assert spec.sd.a1.f == rf([0, 1])
    assert spec.sd.a2.f == rf([1])


def test_both_modes_rejected():
    with pytest.raises(CurveSpecError, match="exactly one"):
        parse_curve_spec({
            "higgs": [[["0"], ["1"]], [["0", "1"], ["0"]]],
            "coefficients": {"a1": ["0"], "a2": ["0", "-1"]},
        })


def test_zero_denominator_rejected():
    with pytest.raises(CurveSpecError, match="zero denominator"):
        parse_curve_spec({"coefficients": {"a1": ["0"], "a2": [["1"], ["0"]]}})


def test_square_extension_rejected():
    with pytest.raises(ValueError):
        parse_curve_spec({
            "coefficients": {"a1": ["0"], "a2": ["0", "-1"]},
            "extensions": ["4"],
        })


def test_syntax_error_diagnostics():
    with pytest.raises(CurveSpecError, match="line"):
        parse_curve_spec("{not json")


def test_builtin_names():
    assert set(BUILTIN_NAMES) == {"airy", "catalan", "gauss", "hermite", "mixed", "smooth"}


def test_analyze_report_golden():
    rep = analyze_report(load_curve("airy"))
    assert rep["ns_class"] == "2C0+5F"
    assert rep["p_a"] == 2 and rep["p_g"] == 0
    prof = {p["place"]: p for p in rep["pole_profiles"]}
    assert prof["inf"]["l"] == 5 and prof["inf"]["r"] == "5/2"
    assert prof["inf"]["class"] == "irregular 3/2"
    assert prof["inf"]["blowups_full"] == 3
    assert rep["lattice_check"]["genus"] == 0


def test_report_roundtrip():
    rep = {"report": analyze_report(load_curve("gauss"))}
    text = serialize_report(rep)
    assert parse_report(text) == rep
    assert serialize_report(parse_report(text)) == text


def test_reports_are_deterministic():
    a = serialize_report({"report": analyze_report(load_curve("hermite"))})
    b = serialize_report({"report": analyze_report(load_curve("hermite"))})
    assert a == b
    wa, _ = wkb_report(load_curve("gauss"), order=6, depth=2)
    wb, _ = wkb_report(load_curve("gauss"), order=6, depth=2)
    assert serialize_report(wa) == serialize_report(wb)


def test_wkb_report_gauss():
    rep, _ = wkb_report(load_curve("gauss"), order=8, depth=2)
    assert rep["place"] == "0" and rep["ramification_index"] == 1
    s1 = rep["series"][1]["terms"]
    assert s1["2"] == "-7/32" and s1["3"] == "-53/96"
    s2 = rep["series"][2]["terms"]
    assert s2["2"] == "7/32" and s2["3"] == "113/96"
    assert rep["operator_annihilation"]["ok"]


def test_toprec_report_airy():
    rep = toprec_report(load_curve("airy"), level=2)
    entries = {(e["g"], e["n"]): e["terms"] for e in rep["differentials"]}
    assert entries[(1, 1)] == [{"key": [["inf", 4]], "coeff": "-1/128"}]
    assert entries[(0, 3)] == [{"key": [["inf", 2]] * 3, "coeff": "-1/16"}]


def test_toprec_requires_parametrization():
    with pytest.raises(ValueError, match="parametrization"):
        toprec_report(load_curve("gauss"), level=1)


def test_plotdata_hermite_real_locus():
    csv = emit_plotdata(load_curve("hermite"), -4.0, 4.0, 80)
    lines = csv.strip().split("\n")
    assert lines[0] == "x,y,branch"
    xs = [float(l.split(",")[0]) for l in lines[1:]]
    assert xs and all(abs(x) >= 2 - 1e-9 for x in xs)


def test_plotdata_airy_symmetric_branches():
    csv = emit_plotdata(load_curve("airy"), 0.0, 4.0, 40)
    rows = [l.split(",") for l in csv.strip().split("\n")[1:]]
    by_x = {}
    for x, y, br in rows:
        by_x.setdefault(x, []).append(float(y))
    for x, ys in by_x.items():
        assert len(ys) == 2 and abs(ys[0] + ys[1]) < 1e-9


def test_plotdata_gauss_unit_interval():
    csv = emit_plotdata(load_curve("gauss"), 0.05, 0.95, 30)
    rows = csv.strip().split("\n")[1:]
    assert len(rows) >= 60  # two real branches everywhere on (0,1)


def test_plotdata_empty_locus_header_only():
    spec = parse_curve_spec({"coefficients": {"a1": ["0"], "a2": ["1"]}})  # y^2 = -1
    csv = emit_plotdata(spec, -2.0, 2.0, 20)
    assert csv == "x,y,branch\n"


def test_cli_analyze_exit_and_determinism(tmp_path):
    out1 = tmp_path / "a.json"
    out2 = tmp_path / "b.json"
    assert main(["analyze", "--curve", "smooth", "--out", str(out1)]) == 0
    assert main(["analyze", "--curve", "smooth", "--out", str(out2)]) == 0
    assert out1.read_bytes() == out2.read_bytes()


def test_cli_unknown_curve_exit_code():
    assert main(["analyze", "--curve", "nonexistent"]) == 2


def test_cli_wkb_guards():
    assert main(["wkb", "--curve", "gauss", "--order", "999"]) == 2
    assert main(["wkb", "--curve", "gauss", "--depth", "999"]) == 2


def test_cli_verify_suite_exit(tmp_path):
    out = tmp_path / "verify.json"
    code = main(["verify", "--suite", "table1", "--out", str(out)])
    assert code == 0
    data = json.loads(out.read_text())
    assert data["report"]["all_passed"] is True
    assert all(c["passed"] for c in data["report"]["checks"])


def test_cli_file_spec_roundtrip(tmp_path):
    spec_file = tmp_path / "curve.json"
    spec_file.write_text(json.dumps({
        "name": "custom",
        "coefficients": {"a1": ["0", "1"], "a2": ["1"]},
    }))
    out = tmp_path / "rep.json"
    assert main(["analyze", "--curve", str(spec_file), "--out", str(out)]) == 0
    rep = json.loads(out.read_text())["report"]
    assert rep["ns_class"] == "2C0+4F"


def test_cli_subprocess_entry():
    proc = subprocess.run(
        [sys.executable, "-m", "quantcurve.cli", "analyze", "--curve", "airy"],
        capture_output=True, text=True, timeout=120,
    )
    assert proc.returncode == 0
    rep = json.loads(proc.stdout)["report"]
    assert rep["ns_class"] == "2C0+5F"



def test_toprec_and_verify_reports_deterministic(tmp_path):
    outs = []
    for i in range(2):
        out = tmp_path / f"t{i}.json"
        assert main(["toprec", "--curve", "airy", "--depth", "3", "--out", str(out)]) == 0
        outs.append(out.read_bytes())
    assert outs[0] == outs[1]
    outs = []
    for i in range(2):
        out = tmp_path / f"v{i}.json"
        assert main(["verify", "--suite", "table1", "--out", str(out)]) == 0
        outs.append(out.read_bytes())
    assert outs[0] == outs[1]
