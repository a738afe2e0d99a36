"""Run the CLI on small inputs and validate every JSON it writes against schemas/."""

import json
import pathlib
import subprocess
import sys
import tempfile

import jsonschema
from referencing import Registry, Resource


def load_registry(schema_dir):
    schemas = {}
    resources = []
    for path in sorted(schema_dir.glob("*.schema.json")):
        doc = json.loads(path.read_text())
        schemas[path.name] = doc
        resources.append((doc["$id"], Resource.from_contents(doc)))
    return schemas, Registry().with_resources(resources)


def main():
    cli, schema_dir = pathlib.Path(sys.argv[1]), pathlib.Path(sys.argv[2])
    schemas, registry = load_registry(schema_dir)
    checked = 0

    def validate(doc_path, schema_name):
        nonlocal checked
        doc = json.loads(pathlib.Path(doc_path).read_text())
        validator = jsonschema.Draft202012Validator(schemas[schema_name], registry=registry)
        errors = sorted(validator.iter_errors(doc), key=lambda e: list(e.path))
        if errors:
            raise SystemExit(f"{doc_path} fails {schema_name}: {errors[0].message} at {list(errors[0].path)}")
        checked += 1

    def run(*args):
        subprocess.run([str(cli), *map(str, args)], check=True, stdout=subprocess.DEVNULL)

    with tempfile.TemporaryDirectory() as tmp:
        t = pathlib.Path(tmp)
        graph = t / "g.txt"
        run("graph", "--rule", "i", "--nodes", 60, "--alpha", 0.4, "--seed", 1, "--out", graph)
        validate(f"{graph}.manifest.json", "manifest.schema.json")

        ring = t / "ring.txt"
        run("graph", "--rule", "iv", "--nodes", 30, "--alpha", 0.2, "--seed", 1, "--out", ring)
        (t / "labels.txt").write_text("\n".join("1" if i % 3 else "2" for i in range(60)) + "\n")

        run("test", "--graph-file", graph, "--labels", t / "labels.txt", "--out", t / "one.json")
        validate(t / "one.json", "test_result.schema.json")
        validate(t / "one.json.manifest.json", "manifest.schema.json")
        run("test", "--graph-file", graph, "--labels", t / "labels.txt", "--all", "--pvalue", "perm",
            "--perms", 200, "--seed", 2, "--out", t / "all.json")
        validate(t / "all.json", "test_result.schema.json")
        validate(t / "all.json.manifest.json", "manifest.schema.json")

        run("diagnose", "--graph-file", graph, "--induced-squares", "--out", t / "diag.json")
        validate(t / "diag.json", "condition_report.schema.json")
        run("diagnose", "--graph-file", ring, "--out", t / "ring.json")
        validate(t / "ring.json", "condition_report.schema.json")
        validate(t / "ring.json.manifest.json", "manifest.schema.json")

        run("stein", "--nodes", "40", "--d", 5, "--k", 2, "--samples", 1000, "--replicates", 1, "--seed", 3,
            "--out", t / "stein.csv")
        validate(t / "stein.csv.manifest.json", "manifest.schema.json")

        configs = [
            {"experiment": "size", "dims": [5], "m": 10, "n": 10, "alphas": [0.5, 1.0], "trials": 100},
            {"experiment": "power", "scenarios": [0, 1], "d": 10, "m": 10, "n": 10, "ks": [1, 2], "trials": 100},
            {"experiment": "validity", "rules": ["ii"], "alphas": [0.3], "nodes": 40, "graphs": 20,
             "permutations": 1000},
            {"experiment": "max_degree", "d": 3, "nodes": 60, "k_grid": [1, 2, 4]},
            {"experiment": "stein", "nodes": [30], "d": "N", "k": "sqrt", "samples": 1000, "replicates": 2},
        ]
        for i, cfg in enumerate(configs):
            jsonschema.Draft202012Validator(schemas["config.schema.json"], registry=registry).validate(cfg)
            cfg_path = t / f"cfg{i}.json"
            cfg_path.write_text(json.dumps(cfg))
            out = t / f"sim{i}"
            run("simulate", cfg_path, "--out", out)
            validate(out / "summary.json", "summary.schema.json")
            validate(out / "manifest.json", "manifest.schema.json")

    print(f"validated {checked} JSON documents against {len(schemas)} schemas")


if __name__ == "__main__":
    main()
