#!/usr/bin/env python3
"""Smoke test for the bandit_kmedoids_py extension module.

Builds the cdylib if needed, loads it straight out of the cargo target
directory, and exercises every exported name. Run from anywhere:

    python3 python/smoke_test.py
"""

import json
import shutil
import subprocess
import sys
import tempfile
from pathlib import Path

REPO = Path(__file__).resolve().parent.parent
LIB = "libbandit_kmedoids_py.so"
MODULE = "bandit_kmedoids_py"


def locate_or_build():
    candidates = [
        REPO / "target" / profile / LIB for profile in ("release", "debug")
    ]
    built = [p for p in candidates if p.exists()]
    if not built:
        subprocess.run(
            ["cargo", "build", "-p", "bandit-kmedoids-python"],
            cwd=REPO,
            check=True,
        )
        built = [p for p in candidates if p.exists()]
    return max(built, key=lambda p: p.stat().st_mtime)


def main():
    src = locate_or_build()
    stage = Path(tempfile.mkdtemp(prefix="bandit_kmedoids_py_"))
    shutil.copy2(src, stage / f"{MODULE}.so")
    sys.path.insert(0, str(stage))
    import bandit_kmedoids_py as bk

    print(f"loaded {src} (version {bk.__version__})")

    # Metric arithmetic on known vectors.
    assert bk.distance("l1", [0.0, 0.0], [3.0, 4.0]) == 7.0
    assert bk.distance("l2", [0.0, 0.0], [3.0, 4.0]) == 5.0
    assert bk.distance("sql2", [0.0, 0.0], [3.0, 4.0]) == 25.0
    assert bk.distance("cosine", [1.0, 0.0], [1.0, 0.0]) == 0.0
    print("distance: ok")

    # Dataset construction, both from rows and synthetic.
    square = bk.Dataset([[0.0, 0.0], [0.0, 1.0], [1.0, 0.0], [1.0, 1.0]])
    assert len(square) == 4 and square.dim == 2
    assert square.row(3) == [1.0, 1.0]
    assert square.to_rows()[0] == [0.0, 0.0]

    data = bk.Dataset.synthetic(3, 100, 2, 3.0, seed=7)
    assert data.n == 300 and data.dim == 2
    print(f"datasets: ok ({data!r})")

    # The exact solver and the accelerated one agree on an easy mixture.
    exact = bk.fit(data, k=3, algorithm="pam")
    fast = bk.fit(data, k=3, algorithm="bp++", seed=7)
    assert exact.medoids == fast.medoids, (exact.medoids, fast.medoids)
    assert exact.loss == fast.loss
    assert fast.build_distance_count + fast.swap_distance_count < (
        exact.build_distance_count + exact.swap_distance_count
    )
    assert fast.cache_hits > 0
    print(
        f"fit: ok (loss {fast.loss:.4f}, medoids {fast.medoids}, "
        f"{fast.swap_iterations} swaps, trace {fast.trace})"
    )

    # Reported loss is recomputable from the medoids alone.
    assert bk.clustering_loss(data, "l2", fast.medoids) == fast.loss
    print("clustering_loss: ok")

    # JSON mirrors the CLI document and the run is deterministic.
    doc = json.loads(fast.to_json())
    assert doc["algorithm"] == "bp++" and doc["medoids"] == fast.medoids
    again = bk.fit(data, k=3, algorithm="bp++", seed=7)
    assert again.to_json().replace(f'"wall_ms": {again.wall_ms}', "") == (
        fast.to_json().replace(f'"wall_ms": {fast.wall_ms}', "")
    )
    print("json + determinism: ok")

    # CSV round trip through a temp file.
    csv_path = stage / "square.csv"
    csv_path.write_text("".join(f"{r[0]},{r[1]}\n" for r in square.to_rows()))
    reloaded = bk.Dataset.from_csv(str(csv_path))
    assert reloaded.to_rows() == square.to_rows()
    print("csv: ok")

    # Errors surface as the right Python exceptions.
    for bad in (
        lambda: bk.fit(data, k=0),
        lambda: bk.fit(data, k=3, algorithm="kmeans"),
        lambda: bk.fit(data, k=3, metric="euclidean"),
        lambda: bk.distance("l2", [1.0], [1.0, 2.0]),
        lambda: bk.Dataset([[1.0], [2.0, 3.0]]),
    ):
        try:
            bad()
        except ValueError:
            pass
        else:
            raise AssertionError("expected ValueError")
    try:
        bk.Dataset.from_csv(str(stage / "missing.csv"))
    except IOError:
        pass
    else:
        raise AssertionError("expected IOError")
    try:
        square.row(99)
    except IndexError:
        pass
    else:
        raise AssertionError("expected IndexError")
    print("errors: ok")

    print("smoke test passed")


if __name__ == "__main__":
    main()
