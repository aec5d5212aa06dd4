import json
import subprocess
import sys

import pytest

from conftest import sieve_file
from sievelab import errors
from sievelab.cli import COMMANDS, main

SQ = str(sieve_file("squarefree"))


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_density(capsys):
    code, out, _ = run(["density", "--spec", SQ, "--L", "1000"], capsys)
    assert code == 0
    header, row = [l for l in out.splitlines() if not l.startswith("#")][:2]
    cols = dict(zip(header.split("\t"), row.split("\t")))
    lower, upper = float(cols["lower"]), float(cols["upper"])
    assert lower <= 6 / 3.14159265358979**2 <= upper


def test_no_common_basis(capsys):
    code, _, err = run(["union", "--spec", str(sieve_file("chain_left")),
                        "--spec2", str(sieve_file("chain_right")), "--L", "50"], capsys)
    assert code == 1 and err.startswith("error\tNoCommonBasisUpTo(50)")


def test_unknown_subcommand():
    p = subprocess.run([sys.executable, "-m", "sievelab", "frobnicate"], capture_output=True, text=True)
    assert p.returncode == 2 and "usage" in p.stderr


def test_full_class_is_domain_error(tmp_path, capsys):
    f = tmp_path / "full.sieve"
    f.write_text("ring Z\nclass modulus 4 residues {0,1,2,3}\n")
    code, _, err = run(["density", "--spec", str(f)], capsys)
    assert code == 1 and "FullClass" in err


def test_syntax_error_exit_2(tmp_path, capsys):
    f = tmp_path / "bad.sieve"
    f.write_text("ring Z\nclass modulus 4 residues {0,\n")
    assert run(["density", "--spec", str(f)], capsys)[0] == 2


def test_json_output(capsys):
    code, out, _ = run(["enumerate", "--spec", SQ, "--pmax", "31", "--window", "1..30", "--json"], capsys)
    obj = json.loads(out)
    assert code == 0 and set(obj) == {"meta", "rows"}


def test_certificate_roundtrip(tmp_path, capsys):
    spec = str(sieve_file("shared_index"))
    cert = tmp_path / "c.json"
    code, out, _ = run(["xr-test", "--spec", spec, "--L", "20", "--A", "0,3", "--B", "1,2",
                        "--cert", str(cert)], capsys)
    assert code == 0 and "Certificate\t1,1\t1:2" in out
    code, out, _ = run(["verify-cert", "--cert", str(cert), "--spec", spec, "--L", "20"], capsys)
    assert code == 0 and out.splitlines()[-1].startswith("1\t")


@pytest.mark.parametrize("argv", [
    ["mirsky", "--spec", SQ, "--L", "6", "--pattern", "0|", "--pattern", "0|1", "--n", "5000", "--seed", "3"],
    ["sumset", "--spec", SQ, "--pmax", "50", "--A", "1,4", "--window", "1..2000", "--strategy", "uniform",
     "--n", "3"],
    ["cylinder", "--spec", str(sieve_file("x_neq_omega")), "--L", "50", "--pattern", "2,4|3"],
    ["poly-density", "--poly", "1,0,1", "--poly", "2,0,1", "--pmax", "300"],
    ["pnt-average", "--N", "20000", "--q", "3", "--f", "2/3,-1/3,-1/3"],
])
def test_deterministic_output(argv, capsys):
    a = run(argv, capsys)
    b = run(argv, capsys)
    assert a[0] == 0 and a == b


def test_every_subcommand_registered():
    want = {"enumerate", "density", "tails", "admissible", "pattern", "stabilizer", "minimal", "contract",
            "equiv", "union", "lambda", "mirsky", "cylinder", "xr-test", "spectrum", "sumset", "poly-sieve",
            "poly-density", "poly-count", "resultant", "omega", "pnt-average", "besicovitch", "verify-cert"}
    assert set(COMMANDS) == want


def test_reason_tokens_distinct():
    classes = [c for c in vars(errors).values() if isinstance(c, type) and issubclass(c, errors.SieveError)]
    from sievelab.model import ResidueBoundViolation

    tokens = [c.reason for c in classes + [ResidueBoundViolation]]
    assert len(tokens) == len(set(tokens))
