#!/usr/bin/env python3
"""Smoke test for the snapmc Python extension module.

Builds nothing itself: it locates the cdylib produced by
`cargo build -p snapmc-py` (release preferred), copies it into a temp
directory under the importable name, and exercises the main types and
operations end to end.
"""

import math
import pathlib
import shutil
import sys
import tempfile

ROOT = pathlib.Path(__file__).resolve().parent.parent


def load_module():
    candidates = [
        ROOT / "target" / "release" / "libsnapmc_py.so",
        ROOT / "target" / "debug" / "libsnapmc_py.so",
    ]
    lib = next((p for p in candidates if p.exists()), None)
    if lib is None:
        sys.exit(
            "libsnapmc_py.so not found; run `cargo build -p snapmc-py --release` first"
        )
    tmp = tempfile.mkdtemp(prefix="snapmc_py_")
    shutil.copy(lib, pathlib.Path(tmp) / "snapmc.so")
    sys.path.insert(0, tmp)
    import snapmc

    return snapmc


def approx(a, b, rel):
    return abs(a - b) <= rel * abs(b)


def main():
    sm = load_module()
    print(f"loaded snapmc {sm.__version__}")

    # theoretical K: Poisson degeneracy and clustering
    assert approx(sm.theoretical_k(10.0, 20.0, 0.0), math.pi * 100.0, 1e-9)
    assert sm.theoretical_k(10.0, 20.0, 2.0) > math.pi * 100.0

    # rules
    w = sm.Window.rect(0.0, 810.0, 0.0, 810.0)
    assert sm.rmax_rule(w) == 202.5
    for area, expect in [(30.0**2, 11), (45.0**2, 17), (54.0**2, 20)]:
        assert round(sm.delta_rule(area)) == expect
    assert sm.red(20.0, 2.0, 20.0, 2.0) == 0.0

    # simulate a small LGCP and corrupt it on a grid
    mean = math.log(600.0 / w.area())
    pattern = sm.simulate_lgcp(w, 20.0, 2.0, seed=7, nx=128, ny=128, mean_const=mean)
    n = len(pattern)
    assert 100 < n < 3000, n
    grid = sm.Partition.regular_grid(w, 18, 18)
    assert len(grid) == 324
    assert approx(grid.mean_cell_area(), 45.0**2, 1e-9)

    corrupted = sm.corrupt(pattern, grid, fraction=0.6, seed=11)
    assert len(corrupted) == n
    dups = corrupted.find_duplicates()
    dup_points = sum(c for _, c in dups if c > 1)
    assert dup_points > 0.3 * n, dup_points

    # duplicates create a positive K at the origin; dedup removes it
    k_corrupt = sm.k_hom(corrupted)
    assert k_corrupt.khat[0] > 0.0
    deduped = sm.dedup(corrupted)
    assert sm.k_hom(deduped).khat[0] == 0.0
    assert len(deduped) < n

    # the other remedies keep zero duplicates too
    jittered = sm.jitter(corrupted, d=25.0, seed=3)
    assert max(c for _, c in jittered.find_duplicates(tol=0.0)) == 1
    redist = sm.redistribute(corrupted, grid, seed=4)
    assert len(redist) == n

    # inhomogeneous estimate with a constant plug-in equals the homogeneous one
    lam = (n - 1) / w.area()
    ki = sm.k_inhom_const(pattern, lam)
    kh = sm.k_hom(pattern)
    assert all(
        abs(a - b) <= 1e-9 * max(1.0, abs(b)) for a, b in zip(ki.khat, kh.khat)
    )

    # noiseless MC inversion through the bindings
    fit_clean = sm.fit(kh)
    assert fit_clean.converged
    # MMC on the corrupted pattern should sit closer to the truth than MC
    fit_mc = sm.fit(k_corrupt)
    fit_mmc = sm.fit(k_corrupt, delta=17.0)
    assert fit_mmc.method == "MMC" and fit_mc.method == "MC"
    print(
        f"fits on corrupted data: MC phi={fit_mc.phi_hat:.2f} sigma2={fit_mc.sigma2_hat:.2f}; "
        f"MMC phi={fit_mmc.phi_hat:.2f} sigma2={fit_mmc.sigma2_hat:.2f}"
    )

    # contrast is zero-ish at its own minimizer and larger elsewhere
    u_best = sm.contrast(kh, fit_clean.phi_hat, fit_clean.sigma2_hat)
    assert sm.contrast(kh, 2.0, 8.0) > u_best

    # a tiny study through the bindings: row-count contract and determinism
    rows1, summary1 = sm.run_study(
        "H.2", reps=2, seed=99, workers=1, fractions=[0.0, 0.6], methods=["MC", "MMC"]
    )
    rows2, _ = sm.run_study(
        "H.2", reps=2, seed=99, workers=4, fractions=[0.0, 0.6], methods=["MC", "MMC"]
    )
    assert rows1 == rows2
    data_rows = [
        l for l in rows1.splitlines() if l and not l.startswith(("#", "scenario,"))
    ]
    assert len(data_rows) == 2 * 2 * 2
    assert "method,corruption" in summary1

    print("smoke test passed")


if __name__ == "__main__":
    main()
