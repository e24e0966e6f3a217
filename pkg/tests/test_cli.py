"""Command-line behaviour: outputs, exit codes and determinism."""
import io
import json
import subprocess
import sys

from bracketwords.cli import main

FIB_56 = "10101101011011010110101101101011011010110101101101011010"


def run(argv):
    out = io.StringIO()
    rc = main(argv, out)
    return rc, out.getvalue()


def test_gen_fibonacci():
    assert run(["gen", "--word", "fib_sturmian", "--range", "56"]) == (0, FIB_56 + "\n")


def test_eval():
    rc, text = run(["eval", "--expr", "floor(phi*n)", "--n", "4"])
    assert rc == 0 and text.strip().endswith("6")


def test_parse_round_trip():
    rc, text = run(["parse", "--expr", "floor(2*frac(sqrt(2)*n*floor(sqrt(3)*n)))"])
    assert rc == 0
    rec = json.loads(text)
    rc2, text2 = run(["parse", "--expr", rec["expr"]])
    assert rc2 == 0 and text2 == text


def test_exit_codes(capsys):
    rc, _ = run(["eval", "--expr", "floor(sqrt(2)*n", "--n", "1"])
    assert rc == 2
    err = json.loads(capsys.readouterr().err.strip().splitlines()[-1])
    assert err["error"] == "GPSyntaxError"
    rc, _ = run(["gen", "--word", "no_such_word", "--range", "5"])
    assert rc == 2
    rc, _ = run(["pisot", "--a", "0", "--b", "3", "--test", "5"])
    assert rc == 4


def test_defs_file(tmp_path, capsys):
    defs = tmp_path / "w.defs"
    defs.write_text(
        "field K : x^4-10*x^2+1 in [3,4]\n"
        "word k = expr floor(K*n) code {0:0,3:3,6:6,9:9}\n"
        "const g = (sqrt(5) - 1)/2\n"
        "word w = sturmian g\n"
        "word c = expr floor(2*frac(sqrt(2)*n)) code {0:a,1:b}\n"
        "word bad = expr floor(2*frac(sqrt(2)*n)) code {0:a}\n"
        "word d = dilute w 2 *\n"
        "word m = morphism w {0:01,1:10}\n"
    )
    assert run(["--defs", str(defs), "gen", "--word", "w", "--range", "56"]) == (0, FIB_56 + "\n")
    assert run(["--defs", str(defs), "gen", "--word", "c", "--range", "10"]) == (0, "aababaabab\n")
    assert run(["--defs", str(defs), "gen", "--word", "d", "--range", "6"]) == (0, "1*0*1*\n")
    assert run(["--defs", str(defs), "gen", "--word", "k", "--range", "4"]) == (0, "0369\n")
    assert run(["--defs", str(defs), "gen", "--word", "m", "--range", "8"]) == (0, "10011001\n")
    rc, _ = run(["--defs", str(defs), "gen", "--word", "bad", "--range", "10"])
    assert rc == 4
    assert "UncodedValue" in capsys.readouterr().err


def test_pisot_commands():
    rc, text = run(["pisot", "--a", "1", "--b", "1", "--test", "21"])
    assert rc == 0 and "true" in text.lower()
    rc, text = run(["pisot", "--a", "1", "--b", "1", "--word", "25"])
    assert rc == 0 and text.strip() == "0111001000010000000001000"


def test_analyze_complexity():
    rc, text = run(["analyze", "--word", "fib_sturmian", "--measure", "complexity", "--N", "1-5",
                    "--horizon", "2000"])
    assert rc == 0
    recs = [json.loads(line) for line in text.strip().splitlines()]
    assert [r["value"] for r in recs if r.get("measure") == "complexity"] == [2, 3, 4, 5, 6]


def test_lattice_approx():
    rc, text = run(["lattice", "approx", "--alpha", "1,1", "--eps", "1/2", "--N", "2"])
    assert rc == 0 and "[1, -1]" in text.replace("(", "[").replace(")", "]")


def test_verify_suite():
    assert run(["verify", "--suite", "sturmian"])[0] == 0


def test_byte_identical_output():
    argv = [sys.executable, "-m", "bracketwords.cli", "analyze", "--word", "poly_example",
            "--measure", "complexity", "--N", "1-8", "--horizon", "5000"]
    a = subprocess.run(argv, capture_output=True, check=True).stdout
    b = subprocess.run(argv, capture_output=True, check=True).stdout
    assert a == b and a
