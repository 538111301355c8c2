import json
import math
import subprocess
import sys

import pytest

from nssl import cli

LAPLACE_CFG = """\
[problem]
p = 1
q = 0
w = 1
a = 0
b = 2
alpha = 0
right_bc = dirichlet

[schedule]
points = 1.0

[solve]
box = 5, 45, -1, 1

[mfunc]
box = 1, 3, 1, 2
re_points = 3
im_points = 2

[output]
format = table
path = -
"""

VERIFY_CFG = """\
[problem]
p = 1
q = 0
w = 1
a = 0
b = 1
alpha = 0
right_bc = dirichlet

[schedule]
points = 0.9999999, 0.99999999

[verify]
box = 5, 45, -1, 1
abs_tol = 1e-11
rel_tol = 1e-11
tau_conv = 1e-5
"""

CLASSIFY_CFG = """\
[problem]
p = 1
q = c^2*x^2
w = 1
param.c = 1.4426157+1.0397783i
a = 0
b = inf
alpha = 0
right_bc = dirichlet

[schedule]
points = 5, 10, 15, 20

[classify]
lambda0 = -5
lambda_test = -5
abs_tol = 1e-8
rel_tol = 1e-8
"""


def write(tmp_path, text, name="run.cfg"):
    path = tmp_path / name
    path.write_text(text)
    return str(path)


def test_solve_table(tmp_path, capsys):
    cfg = write(tmp_path, LAPLACE_CFG)
    assert cli.main(["solve", "--config", cfg]) == 0
    out = capsys.readouterr().out
    assert "9.869604401" in out
    assert "39.4784176" in out


def test_solve_csv_columns(tmp_path, capsys):
    cfg = write(tmp_path, LAPLACE_CFG)
    assert cli.main(["solve", "--config", cfg, "--format", "csv"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines[0] == "re_lambda,im_lambda,multiplicity,residual,b_n,verdict"
    assert len(lines) == 3
    first = lines[1].split(",")
    assert abs(float(first[0]) - math.pi ** 2) < 1e-7
    assert first[2] == "1"


def test_solve_json_roundtrip_and_determinism(tmp_path):
    cfg = write(tmp_path, LAPLACE_CFG)
    out1 = tmp_path / "a.json"
    out2 = tmp_path / "b.json"
    assert cli.main(["solve", "--config", cfg, "--format", "json",
                     "--output", str(out1)]) == 0
    assert cli.main(["solve", "--config", cfg, "--format", "json",
                     "--output", str(out2)]) == 0
    assert out1.read_bytes() == out2.read_bytes()
    doc = json.loads(out1.read_text())
    assert doc["b_n"] == 1.0
    lams = [complex(e["lambda"]["re"], e["lambda"]["im"]) for e in doc["estimates"]]
    assert len(lams) == 2
    assert abs(lams[0] - math.pi ** 2) < 1e-7
    assert all(e["multiplicity"] == 1 and e["refined"] for e in doc["estimates"])


def test_missing_required_key_names_it(tmp_path, capsys):
    bad = LAPLACE_CFG.replace("q = 0\n", "")
    cfg = write(tmp_path, bad)
    assert cli.main(["solve", "--config", cfg]) == 1
    assert "problem.q" in capsys.readouterr().err


def test_unknown_key_rejected(tmp_path, capsys):
    cfg = write(tmp_path, LAPLACE_CFG.replace("box = 5, 45, -1, 1",
                                              "box = 5, 45, -1, 1\nbogus = 1"))
    assert cli.main(["solve", "--config", cfg]) == 1
    err = capsys.readouterr().err
    assert "bogus" in err


def test_unknown_section_rejected(tmp_path, capsys):
    cfg = write(tmp_path, LAPLACE_CFG + "\n[mystery]\nkey = 1\n")
    assert cli.main(["solve", "--config", cfg]) == 1
    assert "mystery" in capsys.readouterr().err


def test_syntax_error_in_expression(tmp_path, capsys):
    cfg = write(tmp_path, LAPLACE_CFG.replace("q = 0", "q = exp("))
    assert cli.main(["solve", "--config", cfg]) == 1
    assert "problem.q" in capsys.readouterr().err


def test_verify_table_has_verdicts(tmp_path, capsys):
    cfg = write(tmp_path, VERIFY_CFG)
    assert cli.main(["verify", "--config", cfg]) == 0
    out = capsys.readouterr().out
    assert "exact-certified" in out
    assert not any(line.startswith("*") for line in out.splitlines())


def test_verify_json_shape(tmp_path, capsys):
    cfg = write(tmp_path, VERIFY_CFG)
    assert cli.main(["verify", "--config", cfg, "--format", "json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert set(doc) == {"box", "schedule", "mTracks", "lTracks", "verdicts",
                        "lVerdicts", "missingEigenvalueWarnings"}
    assert len(doc["mTracks"]) == 2
    assert all(t["converged"] for t in doc["mTracks"])
    assert [v["verdict"] for v in doc["verdicts"]] == ["exact-certified"] * 2
    assert doc["missingEigenvalueWarnings"] == []
    limit = complex(doc["mTracks"][0]["limitEstimate"]["re"],
                    doc["mTracks"][0]["limitEstimate"]["im"])
    assert abs(limit - math.pi ** 2) < 1e-5


def test_mfunc_csv_grid(tmp_path, capsys):
    cfg = write(tmp_path, LAPLACE_CFG)
    assert cli.main(["mfunc", "--config", cfg, "--format", "csv"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines[0] == "re_lambda,im_lambda,re_m,im_m"
    assert len(lines) == 1 + 6
    import cmath
    for row in lines[1:]:
        re_l, im_l, re_m, im_m = map(float, row.split(","))
        lam = complex(re_l, im_l)
        r = cmath.sqrt(lam)
        want = r * cmath.cos(r) / cmath.sin(r)
        assert abs(complex(re_m, im_m) - want) < 1e-6 * max(1.0, abs(want))


def test_classify_json(tmp_path, capsys):
    cfg = write(tmp_path, CLASSIFY_CFG)
    assert cli.main(["classify", "--config", cfg, "--format", "json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["caseDiagnostic"]["suggestedCase"] == "I"
    assert doc["admissiblePair"]["separationOk"] is True


def test_classify_samples_csv(tmp_path, capsys):
    target = tmp_path / "cloud.csv"
    cfg = write(tmp_path, CLASSIFY_CFG + f"samples_csv = {target}\n")
    assert cli.main(["classify", "--config", cfg, "--format", "json"]) == 0
    lines = target.read_text().strip().splitlines()
    assert lines[0] == "re,im"
    assert len(lines) > 1000


def test_numerical_failure_exit_code(tmp_path, capsys):
    cfg = write(tmp_path, CLASSIFY_CFG.replace("lambda0 = -5", "lambda0 = 10+5*i"))
    assert cli.main(["classify", "--config", cfg]) == 2
    assert "numerical failure" in capsys.readouterr().err


def test_module_entry_point(tmp_path):
    cfg = write(tmp_path, LAPLACE_CFG)
    proc = subprocess.run([sys.executable, "-m", "nssl", "solve",
                           "--config", cfg, "--format", "csv"],
                          capture_output=True, text=True, timeout=300)
    assert proc.returncode == 0
    assert proc.stdout.startswith("re_lambda,")


def test_verify_table_marks_suspects():
    # the aligned-table writer flags suspect rows with a leading asterisk
    from nssl import exactness as xa
    from nssl.locate import ComplexBox, EigenvalueEstimate

    def est(lam, b):
        return EigenvalueEstimate(lam, 1, 1e-10, b, True)

    mt = xa.ConvergenceTrack("M", [(5.0, est(3 + 1j, 5.0)),
                                   (10.0, est(3.000001 + 1j, 10.0))]).finish(1e-4)
    lt = xa.ConvergenceTrack("L", [(5.0, est(3.0000012 + 1j, 5.0)),
                                   (10.0, est(3.0000011 + 1j, 10.0))]).finish(1e-4)
    verdicts = xa.classify([mt], [lt], tau_conv=1e-4)
    l_verdicts = xa.classify([lt], [mt], tau_conv=1e-4)
    report = xa.ExactnessReport(ComplexBox(0, 10, 0, 5), (5.0, 10.0),
                                [mt], [lt], verdicts, l_verdicts,
                                [xa.InclusionWarning("M", 5.0, 10.0, 3, 2)])
    text = cli._verify_table(report)
    starred = [line for line in text.splitlines() if line.startswith("*")]
    assert len(starred) == 2  # one per family view
    assert "suspect-spurious" in text
    assert "3 at b_n = 5 -> 2 at b_n = 10" in text


def test_fallback_kernel_end_to_end(tmp_path):
    # the pure-Python kernel build must produce the same eigenvalues
    import os
    cfg = write(tmp_path, LAPLACE_CFG)
    env = dict(os.environ, NSSL_DISABLE_NUMBA="1")
    proc = subprocess.run([sys.executable, "-m", "nssl", "solve",
                           "--config", cfg, "--format", "csv"],
                          capture_output=True, text=True, timeout=600, env=env)
    assert proc.returncode == 0
    rows = proc.stdout.strip().splitlines()[1:]
    lams = [float(r.split(",")[0]) for r in rows]
    assert len(lams) == 2
    assert abs(lams[0] - math.pi ** 2) < 1e-7
    assert abs(lams[1] - 4 * math.pi ** 2) < 1e-7
