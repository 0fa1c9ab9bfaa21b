import json
from fractions import Fraction

import pytest

from bpbp.certificates import (
    SCHEMA,
    CorrectionCertificate,
    all_ok,
    certificate_from_json,
    certificate_to_json,
    verify,
    verify_any,
)
from bpbp.cli import main
from bpbp.generators import ExperimentSpec, gen_near_attaining
from bpbp.harness import evaluate, instances_from_json, instances_to_json, report_to_csv, report_to_json, run_batch
from bpbp.moduli import rho
from bpbp.operators import OperatorTuple
from bpbp.sequence import TargetVector, oracle_ambient, u_star

F = Fraction


def test_generator_count_and_determinism():
    spec = ExperimentSpec(n=3, m=4, eps=(F(1, 2), F(1, 8)), trials=7, seed=11, kind="ahsp")
    a, b = gen_near_attaining(spec), gen_near_attaining(spec)
    assert len(a) == 14
    assert json.dumps(instances_to_json(a)) == json.dumps(instances_to_json(b))


def test_generated_ahsp_instances_satisfy_hypothesis():
    spec = ExperimentSpec(n=3, m=5, eps=(F(1, 4),), trials=20, seed=3, kind="ahsp")
    for inst in gen_near_attaining(spec):
        r = rho(3, inst.eps)
        assert inst.meta["theta"] < r / 2
        assert all(u_star(inst.data["ys"][i]) > 1 - r for i in range(inst.data["n0"]))


@pytest.mark.parametrize("kind", ["ahsp", "functional", "convex", "roundtrip", "bpbp", "auxiliar"])
def test_batches_pass(kind):
    spec = ExperimentSpec(n=2, m=3, eps=(F(1, 2),), trials=5, seed=1, kind=kind)
    rows = run_batch(gen_near_attaining(spec))
    assert all(r.ok for r in rows), [r.failed for r in rows]


def test_instances_roundtrip_through_json():
    spec = ExperimentSpec(n=2, m=3, eps=(F(1, 4),), trials=3, seed=5, kind="functional")
    insts = gen_near_attaining(spec)
    back = instances_from_json(json.loads(json.dumps(instances_to_json(insts, spec))))
    assert [evaluate(i).max_dist for i in back] == [evaluate(i).max_dist for i in insts]


def test_parallel_matches_serial():
    spec = ExperimentSpec(n=2, m=2, eps=(F(1, 2),), trials=6, seed=2, kind="convex")
    insts = gen_near_attaining(spec)
    assert report_to_csv(run_batch(insts, jobs=2)) == report_to_csv(run_batch(insts))


def test_report_rows_reverify_from_certificates():
    spec = ExperimentSpec(n=2, m=3, eps=(F(1, 2),), trials=2, seed=4, kind="bpbp")
    rows = run_batch(gen_near_attaining(spec), keep_certificates=True)
    doc = json.loads(report_to_json(rows, "correct-bpbp"))
    assert doc["schema"] == "bpbp-report/1" and doc["summary"]["failures"] == 0
    for r in doc["rows"]:
        assert all_ok(verify_any(certificate_from_json(r["certificate"])))


def test_certificate_json_roundtrip_and_tamper():
    spec = ExperimentSpec(n=3, m=3, eps=(F(1, 2),), trials=1, seed=9, kind="ahsp", n0=3)
    [row] = run_batch(gen_near_attaining(spec), keep_certificates=True)
    raw = json.loads(json.dumps(certificate_to_json(row.certificate)))
    assert raw["schema"] == SCHEMA
    assert all_ok(verify_any(certificate_from_json(raw)))
    # a negative entry in z_1 breaks positivity, and the recorded evidence no longer matches
    raw["outputs"]["images"][0]["entries"]["2"] = "-1/1000"
    failed = {c.name for c in verify_any(certificate_from_json(raw)) if not c.ok}
    assert "positivity" in failed and "evidence" in failed


def test_recorded_booleans_are_ignored():
    spec = ExperimentSpec(n=1, m=2, eps=(F(1, 2),), trials=1, seed=0, kind="ahsp")
    [row] = run_batch(gen_near_attaining(spec), keep_certificates=True)
    raw = certificate_to_json(row.certificate)
    raw["outputs"]["images"][0]["entries"] = {"1": "1/1", "2": "1/1"}
    raw["ok"] = True
    failed = {c.name for c in verify_any(certificate_from_json(raw)) if not c.ok}
    assert "output_in_M" in failed and "unit_mass" in failed


def test_oracle_ambient_certificate_is_tagged():
    amb = oracle_ambient("l2")
    y = TargetVector({1: F(3, 5), 2: F(4, 5)}, amb)
    ys = OperatorTuple([y])
    cert = CorrectionCertificate(kind="convex", eps=F(1, 2), inputs=ys, outputs=ys, attain=(1,),
                                 threshold=F(1, 100), alphas=(F(1),))
    clauses = verify(cert)
    assert all_ok(clauses)
    tagged = {c.name for c in clauses if c.approx}
    assert {"hypothesis", "input_in_M", "output_in_M", "attainment"} <= tagged
    assert all("[approx]" in c.line() for c in clauses if c.approx)
    back = certificate_from_json(json.loads(json.dumps(certificate_to_json(cert))))
    assert back.inputs.ambient == amb and all_ok(verify(back))


# --- CLI --------------------------------------------------------------

def run_cli(args, capsys):
    code = main(args)
    return code, capsys.readouterr().out


def test_cli_report_is_byte_stable(capsys):
    args = ["correct-ahsp", "--n", "2", "--m", "3", "--eps", "1/4", "--trials", "4", "--seed", "7"]
    code1, out1 = run_cli(args, capsys)
    code2, out2 = run_cli(args, capsys)
    assert code1 == code2 == 0 and out1 == out2
    assert json.loads(out1)["schema"] == "bpbp-report/1"


def test_cli_csv_has_approx_columns(capsys):
    code, out = run_cli(["correct-bpbp", "--n", "2", "--m", "2", "--trials", "2", "--format", "csv"], capsys)
    header = out.splitlines()[0].split(",")
    assert code == 0 and "approx_eps" in header and "eps" in header


def test_cli_gen_then_run(tmp_path, capsys):
    inst = tmp_path / "inst.json"
    assert main(["gen", "--kind", "roundtrip", "--n", "2", "--m", "2", "--trials", "2", "--out", str(inst)]) == 0
    code, out = run_cli(["roundtrip", "--input", str(inst)], capsys)
    assert code == 0 and json.loads(out)["summary"] == {"failures": 0, "instances": 2}


def test_cli_verify_exit_codes(tmp_path, capsys):
    rep = tmp_path / "rep.json"
    assert main(["correct-ahsp", "--n", "2", "--m", "2", "--trials", "1", "--certificates", "--out", str(rep)]) == 0
    code, out = run_cli(["verify", "--input", str(rep)], capsys)
    assert code == 0 and "FAIL" not in out
    doc = json.loads(rep.read_text())
    doc["rows"][0]["certificate"]["outputs"]["images"][0]["entries"]["1"] = "2/1"
    rep.write_text(json.dumps(doc))
    code, out = run_cli(["verify", "--input", str(rep)], capsys)
    assert code == 1 and "FAIL output_in_M" in out


def test_cli_small_commands(tmp_path, capsys):
    code, out = run_cli(["enumerate", "--n", "3"], capsys)
    assert code == 0 and json.loads(out)["even"] == [[], [1, 2], [1, 3], [2, 3]]
    code, out = run_cli(["moduli", "--n", "3", "--eps", "1/2"], capsys)
    assert [r["rho"] for r in json.loads(out)["rows"]] == ["1/4", "1/96", "1/6144"]
    code, out = run_cli(["norm", "--n", "4", "--m", "3"], capsys)
    assert code == 0 and json.loads(out)["agree"] is True
    op = tmp_path / "op.json"
    op.write_text(json.dumps({"n": 1, "images": [{"ambient": "l1", "entries": {"1": "2/1"}}]}))
    code, out = run_cli(["check-m", "--input", str(op)], capsys)
    assert json.loads(out)["in_M"] is False
    code, out = run_cli(["bench", "--n", "3", "--trials", "3"], capsys)
    assert code == 0 and out.startswith("n,m,trials")


def test_cli_rejects_float_eps():
    with pytest.raises(SystemExit):
        main(["moduli", "--eps", "0.5"])
