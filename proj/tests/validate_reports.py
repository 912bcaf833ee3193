"""Run each CLI command with JSON output and validate against the schemas."""
import json
import subprocess
import sys
import tempfile
from pathlib import Path

import jsonschema

cli, schema_dir = Path(sys.argv[1]), Path(sys.argv[2])
report_schema = json.loads((schema_dir / "report.schema.json").read_text())
model_schema = json.loads((schema_dir / "model.schema.json").read_text())

failures = 0


def check(name, doc, schema):
    global failures
    try:
        jsonschema.validate(doc, schema)
        print(f"ok   {name}")
    except jsonschema.ValidationError as e:
        failures += 1
        print(f"FAIL {name}: {e.message} at {list(e.absolute_path)}")


with tempfile.TemporaryDirectory() as tmp:
    tmp = Path(tmp)
    for mode in ("classical", "quantum"):
        out = subprocess.run([cli, "reason", "--dim", "16", "--mode", mode, "--out", "json"],
                             capture_output=True, text=True)
        check(f"reason {mode}", json.loads(out.stdout), report_schema)

    runs = {
        "classify": ["classify", "--data", "synthetic", "--dim", "64", "--mode", "quantum-sampled",
                     "--shots", "200", "--out", str(tmp / "classify.json"), "--save-model", str(tmp / "model.json")],
        "sweep": ["sweep", "--data", "synthetic", "--dims", "16,32", "--out", str(tmp / "sweep.json")],
        "resources": ["resources", "--qubits", "4..5", "--mode", "both", "--out", str(tmp / "resources.json")],
    }
    for name, args in runs.items():
        subprocess.run([cli, *args], check=True, capture_output=True)
        check(name, json.loads((tmp / f"{name}.json").read_text()), report_schema)
    check("model", json.loads((tmp / "model.json").read_text()), model_schema)

sys.exit(1 if failures else 0)
