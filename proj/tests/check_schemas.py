"""Runs each CLI command and validates its JSON output against docs/schemas."""

import json
import pathlib
import subprocess
import sys
import tempfile

import jsonschema
from referencing import Registry, Resource

cli, schema_dir = sys.argv[1], pathlib.Path(sys.argv[2])

registry = Registry()
schemas = {}
for path in schema_dir.glob("*.schema.json"):
    doc = json.loads(path.read_text())
    schemas[path.name] = doc
    registry = registry.with_resource(path.name, Resource.from_contents(doc))


def check(name, instance):
    cls = jsonschema.validators.validator_for(schemas[name])
    cls(schemas[name], registry=registry).validate(instance)
    print(f"ok {name}")


def run(*args, ok=(0,)):
    proc = subprocess.run([cli, *args], capture_output=True, text=True)
    if proc.returncode not in ok:
        sys.exit(f"{' '.join(args)} exited {proc.returncode}: {proc.stderr}")
    return json.loads(proc.stdout)


check("report.schema.json", run("analyze", "--solid", "3,4"))
check("enumeration.schema.json", run("enumerate-graphs", "--solid", "4,3"))
check("verify.schema.json", run("verify", "--solid", "3,5", "--state", "canonical"))

with tempfile.TemporaryDirectory() as tmp:
    out = pathlib.Path(tmp)
    state = out / "start.json"
    state.write_text(json.dumps([[0, 0, 1], [1, 0, 0], [0, 1, 0], [1, 1, 1]]))
    check("state.schema.json", json.loads(state.read_text()))
    graph = out / "graph.json"
    graph.write_text(json.dumps({"n": 4, "edges": [[1, 2], [2, 3], [3, 4], [1, 4]]}))
    check("graph.schema.json", json.loads(graph.read_text()))

    summary = run("simulate", "--solid", "3,3", "--t-final", "1", "--ensemble", "2",
                  "--start", str(state), "--graph", str(graph), "--out", str(out))
    check("summary.schema.json", summary)
    check("summary.schema.json", json.loads((out / "summary.json").read_text()))
    check("manifest.schema.json", json.loads((out / "manifest.json").read_text()))
    for f in sorted(out.glob("outcome_seed*.json")):
        check("outcome.schema.json", json.loads(f.read_text()))
