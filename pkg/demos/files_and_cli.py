"""File formats and the command-line front end.

Every artifact is deterministic: CSV cells are shortest round-trip floats,
rows are sorted, and each run directory gets a manifest.json with sha256
checksums, so re-running a job reproduces the bytes exactly.
"""

import json
import pathlib
import tempfile

import numpy as np

from eigenapprox import (
    Torus,
    TorusStokes,
    random_field,
    spectral_field_from_csv,
    spectral_field_to_csv,
    subtract,
)
from eigenapprox.cli import run


def spectral_csv_round_trip(tmp: pathlib.Path):
    rng = np.random.default_rng(0)
    f = random_field(TorusStokes(Torus(2)), 16.0, rng)
    path = tmp / "field.csv"
    spectral_field_to_csv(f, path)
    lines = path.read_text().splitlines()
    print("spectral CSV (divergence-free fields carry a polarization column):")
    for line in lines[:4]:
        print(f"  {line}")
    print(f"  ... {len(lines) - 1} rows total")
    back = spectral_field_from_csv(path, f.operator)
    print(f"  round-trip drift: {subtract(f, back).l2():.3e}\n")


def cli_session(tmp: pathlib.Path):
    jobs = [
        ["modes", "--op", "dirichlet-interval", "--L", "1.0", "--lambda-max", "60"],
        ["approx", "--op", "torus", "--d", "2", "--lambda-max", "30",
         "--seed", "1", "--theta", "0.2,0.4", "--transform", "semigroup",
         "--alpha", "1.0", "--beta", "0.5"],
        ["interp", "--check-itheta", "--theta", "0.5"],
    ]
    for i, args in enumerate(jobs):
        out = tmp / f"job{i}"
        code = run(args + ["--out-dir", str(out)])
        manifest = json.loads((out / "manifest.json").read_text())
        print(f"$ eigenapprox {' '.join(args)}   -> exit {code}")
        for name, digest in manifest["outputs"].items():
            print(f"  wrote {name}  sha256 {digest[:16]}...")
        csv_name = next(n for n in manifest["outputs"] if n.endswith(".csv"))
        body = (out / csv_name).read_text().splitlines()
        for line in body[: min(4, len(body))]:
            print(f"    {line}")
        print()

    # bad input: one diagnostic line on stderr, exit code 2
    code = run(["approx", "--op", "torus", "--theta", "-1"])
    print(f"$ eigenapprox approx --op torus --theta -1   -> exit {code} (config error)")


if __name__ == "__main__":
    with tempfile.TemporaryDirectory() as d:
        tmp = pathlib.Path(d)
        spectral_csv_round_trip(tmp)
        cli_session(tmp)
