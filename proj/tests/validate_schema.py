"""Runs the command line tool on the files in tests/data and validates every
document against the schema it prints, using jsonschema."""

import json
import math
import subprocess
import sys
import tempfile
from pathlib import Path

import jsonschema

exe, data = sys.argv[1], Path(sys.argv[2])


def d(name):
    return str(data / name)


def run(args):
    p = subprocess.run([exe, *args], capture_output=True, text=True, timeout=300)
    return p.returncode, p.stdout, p.stderr


CASES = [
    (["factor", "--series", d("one_minus_t_plus_t2.json")], 0),
    (["admissible", "--alpha", d("alpha_one_minus_t.json"), "--strong"], 0),
    (["admissible", "--alpha", d("alpha_skew.json"), "--strong"], 1),
    (["member", "--matrix", d("nilpotent.json"), "--alpha", d("alpha_one_minus_t2.json")], 0),
    (["member", "--matrix", d("nilpotent.json"), "--alpha", d("alpha_one_minus_t.json")], 1),
    (["renorm", "--matrix", d("nilpotent.json"), "--alpha", d("alpha_one_minus_t2.json")], 0),
    (["renorm", "--matrix", d("skew_diagonal.json"), "--alpha", d("alpha_skew.json")], 0),
    (["decompose", "--matrix", d("half.json"), "--alpha", d("alpha_one_minus_t.json")], 0),
    (["model", "--matrix", d("half.json"), "--alpha", d("alpha_one_minus_t.json"), "--grid", "16"], 0),
    (["model", "--matrix", d("nilpotent.json"), "--alpha", d("alpha_one_minus_t2.json"), "--grid", "16"], 0),
    (["include", "--alpha", d("alpha_one_minus_t.json"), "--tau", d("tau_quarter.json")], 0),
    (["include", "--alpha", d("alpha_one_minus_t.json"), "--tau", d("tau_half.json"), "--counterexample"], 1),
    (["include", "--alpha", d("alpha_tilde_third.json"), "--tau", d("tau_cubic.json"), "--counterexample"], 1),
    (["limits", "--alpha", d("alpha_skew.json"), "--matrix", d("skew_diagonal.json"), "--vector", d("h2.json"),
      "--horizon", "1024"], 1),
    (["limits", "--alpha", d("alpha_strong.json"), "--shift", d("shift_quarter.json"), "--vector",
      d("h_shift.json"), "--horizon", "1024"], 0),
]

failures = []
code, out, err = run(["schema"])
schema = json.loads(out)
jsonschema.Draft7Validator.check_schema(schema)
validator = jsonschema.Draft7Validator(schema)

docs = {}
for args, want in CASES:
    code, out, err = run(args)
    tag = " ".join(a if "/" not in a else Path(a).name for a in args)
    if code != want:
        failures.append(f"{tag}: exit {code}, expected {want}: {err.strip()}")
        continue
    doc = json.loads(out)
    errors = sorted(validator.iter_errors(doc), key=lambda e: list(e.path))
    for e in errors:
        failures.append(f"{tag}: {'/'.join(map(str, e.path))}: {e.message}")
    if doc["exit_code"] != code:
        failures.append(f"{tag}: exit_code field {doc['exit_code']} but process exited {code}")
    docs[tag] = doc
    print(f"ok  {tag}  status={doc['status']}")

# a few values against hand-computed results
g = docs.get("renorm --matrix nilpotent.json --alpha alpha_one_minus_t2.json")
if g:
    G = g["result"]["G"]["re"]
    if max(abs(a - b) for a, b in zip(G, [1, 0, 0, 5])) > 1e-9:
        failures.append(f"renorm G = {G}")
    if abs(g["result"]["contraction_norm"] - 2 / math.sqrt(5)) > 1e-12:
        failures.append("renorm contraction norm")
c = docs.get("include --alpha alpha_one_minus_t.json --tau tau_half.json --counterexample")
if c:
    lam = c["result"]["counterexample"]["Lambda"]
    if lam["prefix"] != ["2", "2"] or lam["eventual"] != "1":
        failures.append(f"counterexample Lambda = {lam}")

# malformed input: exit 3, nothing on stdout
with tempfile.NamedTemporaryFile("w", suffix=".json", delete=False) as f:
    f.write('{"coeffs": [1,')
code, out, err = run(["member", "--matrix", d("nilpotent.json"), "--alpha", f.name])
Path(f.name).unlink()
if code != 3 or out.strip():
    failures.append(f"malformed input: exit {code}, stdout {out!r}")

for f in failures:
    print("FAIL", f)
sys.exit(1 if failures else 0)
