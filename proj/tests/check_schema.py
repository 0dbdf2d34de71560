"""Checks every output shape of the tool against the published JSON schema."""
import json
import subprocess
import sys

import jsonschema

COMMANDS = [
    ["bare", "--drive", "coherent", "--points", "11"],
    ["noise", "--xi", "0.5", "--points", "11"],
    ["jitter", "--kind", "laplace", "--points", "11"],
    ["filter", "--drive", "incoherent", "--method", "both", "--points", "11"],
    ["scan", "--figure", "fig5c", "--Gamma-points", "5"],
    ["validate"],
    ["validate", "--inject-fault", "filter/heitler"],
]


def main():
    tool, schema_path = sys.argv[1], sys.argv[2]
    with open(schema_path) as f:
        schema = json.load(f)
    failed = 0
    for args in COMMANDS:
        argv = [tool] + args
        if args[0] != "validate":
            argv += ["--format", "json"]
        proc = subprocess.run(argv, capture_output=True, text=True)
        try:
            jsonschema.validate(json.loads(proc.stdout), schema)
            print("ok  ", " ".join(args))
        except (ValueError, jsonschema.ValidationError) as e:
            failed += 1
            print("FAIL", " ".join(args), str(e).splitlines()[0])
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
