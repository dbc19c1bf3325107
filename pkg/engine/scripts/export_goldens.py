"""Regenerate the golden JSON files used by the CLI tests."""
import contextlib
import io
import json
import os
import sys
sys.path.insert(0, os.path.join(os.path.dirname(__file__), ".."))

from app.main import main

GOLDEN_DIR = os.path.join(os.path.dirname(__file__), "..", "app", "tests", "golden")

GOLDENS = {
    "betti_plane_n2.json": ["betti", "--n", "2"],
    "enumerate_n1_normal.json": ["enumerate", "1", "--filter", "normal"],
    "reduce_b0b0.json": ["reduce", "b0^1[1]*b0^2[1]"],
    "reduce_a0_2.json": ["reduce", "a0[2]"],
}


def run():
    os.environ.setdefault("RELHILB_EXPANSION", "binomial")
    os.environ.setdefault("RELHILB_TRUNCATION_PADDING", "2")
    for name, argv in GOLDENS.items():
        buffer = io.StringIO()
        with contextlib.redirect_stdout(buffer):
            code = main(argv + ["--format", "json"])
        if code != 0:
            print(f"{name}: relhilb {' '.join(argv)} exited with {code}")
            sys.exit(code)
        report = json.loads(buffer.getvalue())
        with open(os.path.join(GOLDEN_DIR, name), "w") as handle:
            json.dump(report, handle, indent=2)
            handle.write("\n")
        print(f"wrote {name}")


if __name__ == "__main__":
    run()
