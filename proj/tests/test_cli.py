#!/usr/bin/env python3
"""CLI integration tests: run the binary end-to-end over the fixtures."""
import json
import subprocess
import sys
import tempfile
import os

CLI = sys.argv[1]
DATA = sys.argv[2]

failures = 0


def run(args, expect_code=0, env_extra=None):
    global failures
    env = dict(os.environ)
    if env_extra:
        env.update(env_extra)
    proc = subprocess.run([CLI] + args, capture_output=True, text=True, env=env)
    if proc.returncode != expect_code:
        print("FAIL:", args, "->", proc.returncode, "expected", expect_code)
        print(proc.stdout[-500:], proc.stderr[-500:])
        failures += 1
    return proc


def check(cond, label):
    global failures
    if not cond:
        print("FAIL:", label)
        failures += 1
    else:
        print("ok:", label)


# dilog: real argument gives zero, the maximal shape gives the known volume
out = run(["dilog", "--z", "0.5"]).stdout.strip()
check(float(out) == 0.0, "dilog 0.5 -> 0")

out = run(["--precision", "30", "dilog", "--z", "0.5+0.8660254037844386467637232i"]).stdout
check(out.strip().startswith("1.0149416064096536"), "dilog at the regular shape")

# determinism: identical runs produce identical bytes
o1 = run(["--precision", "40", "dilog", "--z", "0.3+1.7i"]).stdout
o2 = run(["--precision", "40", "dilog", "--z", "0.3+1.7i"]).stdout
check(o1 == o2, "dilog determinism")

# env var override for precision
env_out = run(["dilog", "--z", "0.5+0.5i"], env_extra={"BLOCH_LATTICE_PRECISION": "25"}).stdout
check(len(env_out.strip().split("e")[0].replace("-", "").replace(".", "")) <= 26,
      "env var precision override")

# lindep
out = run(["lindep", "2.7182818284590", "5.4365636569180"]).stdout.strip()
check(out == "2 -1", "lindep printed pair")
out = run(["--precision", "60", "lindep",
           "1.6180339887498948482045868343656381177203091798057628621354486227",
           "1.0",
           "2.6180339887498948482045868343656381177203091798057628621354486227"]).stdout.strip()
check(out in ("1 1 -1",), "lindep golden ratio triple")
out = run(["--precision", "60", "lindep",
           "1.7320508075688772935274463415058723669428052538103806280558069794",
           "1.4142135623730950488016887242096980785696718753769480731766797379"]).stdout.strip()
check(out == "independent", "lindep independent pair")

# parse errors exit 2
run(["dilog", "--z", "zzz"], expect_code=2)
run(["lindep", "1.0", "abc"], expect_code=2)

with tempfile.TemporaryDirectory() as tmp:
    # solve the m004 fixture and feed the shapes to `volume`
    seed = os.path.join(tmp, "seed.json")
    with open(seed, "w") as f:
        json.dump({"shapes": ["0.5+0.8i", "0.5+0.8i"]}, f)
    proc = run(["--precision", "60", "--format", "json", "solve",
                os.path.join(DATA, "m004.json"), "--seed-shapes", seed])
    solved = json.loads(proc.stdout)
    check(solved["geometric"] is True, "solve reports geometric")
    check(solved["volume"].startswith("2.029883212819307250"), "solve volume")

    shapes = os.path.join(tmp, "solved.json")
    with open(shapes, "w") as f:
        json.dump({"shapes": solved["shapes"]}, f)
    out = run(["--precision", "60", "volume", shapes]).stdout.strip()
    check(out.startswith("2.029883212819307250"), "volume of solved shapes")

    # bad seed: solver failure exits 1
    bad = os.path.join(tmp, "bad.json")
    with open(bad, "w") as f:
        json.dump({"shapes": ["5.0+0.001i", "-4.0+0.001i"]}, f)
    run(["--precision", "60", "solve", os.path.join(DATA, "m004.json"),
         "--seed-shapes", bad], expect_code=1)

    # fit the published-table fixture; json and csv encode the same data
    fit_json = os.path.join(tmp, "fit.json")
    proc = run(["--precision", "14", "--allow-low-precision", "--format", "json", "fit",
                os.path.join(DATA, "fig13.csv"), "--field", "4,0,-3,0,1:1",
                "--output", fit_json])
    with open(fit_json) as f:
        fit = json.load(f)
    check(fit["dimension"] == 2, "fit dimension")
    basis_names = {b["name"] for b in fit["basis"]}
    check(basis_names == {"v1859(-1,3)", "t07828"}, "fit basis names")

    proc = run(["--precision", "14", "--allow-low-precision", "fit",
                os.path.join(DATA, "fig13.csv"), "--field", "4,0,-3,0,1:1"])
    check("fit_ratio" in proc.stdout.splitlines()[0], "fit csv header")

    # lincomb over the fitted basis reproduces integer coefficient pairs
    proc = run(["--precision", "14", "--allow-low-precision", "lincomb",
                os.path.join(DATA, "fig13.csv"), fit_json])
    body = proc.stdout
    check("m306,2.6667,exotic,2 -1" in body.replace('"', ""), "lincomb row for m306")

    # grid emits lattice points plus labeled samples
    proc = run(["--precision", "14", "--allow-low-precision", "grid", fit_json,
                "--x", "0,10", "--y", "0,7"])
    lines = proc.stdout.strip().splitlines()
    check(lines[0] == "kind,x,y,label", "grid header")
    check(any(l.startswith("geometric,8.997") for l in lines), "grid sample row")

    # stats over a tiny synthetic pair of files
    obs = os.path.join(tmp, "obs.csv")
    comp = os.path.join(tmp, "complete.csv")
    with open(obs, "w") as f:
        f.write("name,kind,volume,poly_degree,poly_coeffs,root_re,root_im,root_index\n")
        f.write("a,geometric,1.5,2,2 0 1,0,1.4142135,1\n")
    with open(comp, "w") as f:
        f.write("poly_coeffs,discriminant\n")
        f.write("2 0 1,-8\n")
        f.write("3 0 1,-12\n")
    proc = run(["--precision", "30", "stats", obs, comp, "--degree", "2",
                "--disc-bound", "4", "--r2", "1"])
    check("2,4,1,1,2,50.0" in proc.stdout, "stats row 1/2 -> 50.0")

    # check-weeks flags the counterexample pair
    proc = run(["--precision", "12", "--allow-low-precision", "check-weeks",
                os.path.join(DATA, "weeks_pair.csv")])
    check("STRENGTHENED-CONJECTURE-VIOLATION" in proc.stdout, "weeks violation flagged")

print("cli tests:", "FAILED" if failures else "all passed")
sys.exit(1 if failures else 0)
