"""Acceptance criteria for the toolkit, one test (and one verdict line) each.

Run with ``pytest tests/test_acceptance.py -v`` for per-criterion pass/fail
lines; add ``-s`` to also see the quantitative verdict printed by each test.
The preset CSVs consumed by criteria 5-7 and 9-10 are produced once per
session through the real command-line entry point.
"""

import cmath
import csv
import math
import time
import warnings

import numpy as np
import pytest

from camscat.cli import main
from camscat.cylinder import bessel_j, hankel, hankel_pair
from camscat.errors import NearIntegerOrderWarning
from camscat.model import PotentialParams, s_matrix
from camscat.poles import (
    KIND_BOUND,
    KIND_METASTABLE,
    classify_trajectory,
)
from camscat.verify import (
    deformed_contour_sigma1_oracle,
    highprec_bessel_j,
    highprec_hankel,
    relative_error,
    residue_contour_oracle,
    s_matrix_ode_oracle,
)
from camscat.xsec import relevant_poles, sigma1, sigma_res_n

FIG2 = PotentialParams(V=165.0, R=1.0, d=0.29, Omega=0.5)
FIG3 = PotentialParams(V=165.0, R=1.0, d=0.29, Omega=32.5)

E_GRID = (0.5, 2.0, 8.0, 20.0, 50.0)
LAM_GRID = tuple(j + 0.5 for j in range(40))


def _verdict(num: int, ok: bool, detail: str) -> None:
    print(f"criterion {num:2d}: {'PASS' if ok else 'FAIL'} - {detail}")
    assert ok, f"criterion {num} failed: {detail}"


def _load(path):
    with open(path) as fh:
        return list(csv.DictReader(fh))


@pytest.fixture(scope="module")
def preset_outputs(tmp_path_factory):
    """All four preset CSVs, produced through the real CLI once per session."""
    base = tmp_path_factory.mktemp("presets")
    paths = {}
    for name, command, threads in (("fig2", "trajectory", "1"),
                                   ("fig3", "trajectory", "1"),
                                   ("fig4", "decompose", "4"),
                                   ("fig5", "decompose", "4")):
        out = base / f"{name}_{command}.csv"
        rc = main([command, "--preset", name, "--threads", threads,
                   "--out", str(out)])
        assert rc == 0, f"{command} --preset {name} exited {rc}"
        paths[name] = str(out)
    return paths


def test_criterion_01_cylinder_functions():
    t0 = time.perf_counter()
    # 100 random points across the admissible (order, argument) box
    rng = np.random.default_rng(2026)
    worst_rand = 0.0
    n = 0
    while n < 100:
        order = complex(rng.uniform(-49.0, 49.0), rng.uniform(-19.0, 19.0))
        z = complex(rng.uniform(-40.0, 40.0), rng.uniform(-40.0, 40.0))
        if abs(z) < 0.5 or abs(z) > 59.0:
            continue
        n += 1
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", NearIntegerOrderWarning)
            j = bessel_j(order, z)
            h = hankel(1, order, z).value
        worst_rand = max(worst_rand,
                         relative_error(j, highprec_bessel_j(order, z)),
                         relative_error(h, highprec_hankel(1, order, z)))
    # Wronskian and order-reflection identities
    worst_id = 0.0
    for order, z in ((0.7 + 0.2j, 3.0), (12.5, 9.0 - 4.0j), (4.0 + 6.0j, 25.0)):
        h1, h2 = hankel_pair(order, z)
        wr = h1.value * h2.deriv_arg - h1.deriv_arg * h2.value
        worst_id = max(worst_id, abs(wr - (-4j / (math.pi * z))) / abs(wr))
        refl = hankel(1, -order, z).value
        expect = cmath.exp(1j * math.pi * order) * h1.value
        worst_id = max(worst_id, abs(refl - expect) / abs(expect))
    # half-integer closed forms
    worst_half = 0.0
    for z in (0.7, 3.0, 25.0, 2.0 + 1.5j):
        ref_j = cmath.sqrt(2.0 / (math.pi * z)) * cmath.sin(z)
        ref_h = -1j * cmath.sqrt(2.0 / (math.pi * z)) * cmath.exp(1j * z)
        worst_half = max(worst_half,
                         abs(bessel_j(0.5, z) - ref_j) / abs(ref_j),
                         abs(hankel(1, 0.5, z).value - ref_h) / abs(ref_h))
    elapsed = time.perf_counter() - t0
    ok = (worst_rand < 1e-10 and worst_id < 1e-10 and worst_half < 1e-12
          and elapsed < 10.0)
    _verdict(1, ok, f"100 random pts vs 50-digit oracle worst {worst_rand:.2e} "
                    f"(<1e-10), identities {worst_id:.2e} (<1e-10), "
                    f"half-integer {worst_half:.2e} (<1e-12), {elapsed:.1f}s (<10s)")


def test_criterion_02_unitarity():
    t0 = time.perf_counter()
    worst = 0.0
    for params in (FIG2, FIG3):
        for E in E_GRID:
            for lam in LAM_GRID:
                worst = max(worst, abs(abs(s_matrix(params, E, lam)) - 1.0))
    elapsed = time.perf_counter() - t0
    ok = worst < 1e-9 and elapsed < 30.0
    _verdict(2, ok, f"||S|-1| worst {worst:.2e} (<1e-9) over "
                    f"{2 * len(E_GRID) * len(LAM_GRID)} points, "
                    f"{elapsed:.1f}s (<30s)")


def test_criterion_03_hard_sphere_limits():
    bare = PotentialParams(V=0.0, R=1.0, d=0.29, Omega=0.0)
    sealed = PotentialParams(V=165.0, R=1.0, d=0.29, Omega=1e8)
    worst_bare = worst_sealed = 0.0
    for E in E_GRID:
        k = math.sqrt(2.0 * E)
        for lam in LAM_GRID:
            for params, radius in ((bare, bare.core_radius), (sealed, 1.0)):
                h1, h2 = hankel_pair(lam, k * radius)
                ref = -h2.value / h1.value
                rel = abs(s_matrix(params, E, lam) - ref) / abs(ref)
                if params is bare:
                    worst_bare = max(worst_bare, rel)
                else:
                    worst_sealed = max(worst_sealed, rel)
    ok = worst_bare < 1e-6 and worst_sealed < 1e-4
    _verdict(3, ok, f"V=0,Omega=0 vs hard sphere r=0.71: {worst_bare:.2e} "
                    f"(<1e-6); Omega=1e8 vs hard sphere r=1: "
                    f"{worst_sealed:.2e} (<1e-4)")


def test_criterion_04_ode_oracle():
    worst = 0.0
    for params in (FIG2, FIG3):
        for E in (2.0, 8.0, 20.0, 50.0):
            for lam in (0.5, 3.5, 7.5, 12.5, 18.5):
                s = s_matrix(params, E, lam)
                ref = s_matrix_ode_oracle(params, E, lam)
                worst = max(worst, relative_error(s, ref))
    ok = worst < 1e-8
    _verdict(4, ok, f"S vs radial-ODE oracle worst {worst:.2e} (<1e-8) "
                    f"at 20 (E, lambda) points per parameter set")


def test_criterion_05_residues_vs_contour(preset_outputs):
    picks = {
        "fig2": (FIG2, [2.25 + 2.0 * i for i in range(10)]),
        "fig3": (FIG3, [50.0 + 10.0 * i for i in range(10)]),
    }
    worst = 0.0
    for name, (params, energies) in picks.items():
        rows = {float(r["E"]): r for r in _load(preset_outputs[name])}
        for E in energies:
            row = rows[E]
            lam = complex(float(row["Re_lambda"]), float(row["Im_lambda"]))
            rho = complex(float(row["Re_rho"]), float(row["Im_rho"]))
            oracle = residue_contour_oracle(params, E, lam)
            worst = max(worst, relative_error(rho, oracle))
    ok = worst < 1e-8
    _verdict(5, ok, f"traced residues vs contour-integral oracle worst "
                    f"{worst:.2e} (<1e-8) at 10 energies per trajectory")


def test_criterion_06_closure(preset_outputs):
    worst, count = 0.0, {}
    for name in ("fig4", "fig5"):
        rows = _load(preset_outputs[name])
        count[name] = len(rows)
        for r in rows:
            rel = abs(float(r["closure_defect"])) / abs(float(r["sigma_total"]))
            worst = max(worst, rel)
    ok = worst < 1e-5 and min(count.values()) >= 25
    _verdict(6, ok, f"Mulholland closure |sigma - sum|/sigma worst {worst:.2e} "
                    f"(<1e-5) over {count['fig4']}+{count['fig5']} energies")


def test_criterion_07_modified_identities(preset_outputs):
    # (i) the two splits are exact rearrangements, row by row
    worst_id = 0.0
    for name in ("fig4", "fig5"):
        for r in _load(preset_outputs[name]):
            s1, sres = float(r["sigma1"]), float(r["sigma_res"])
            s1m, sresm = float(r["sigma1_mod"]), float(r["sigma_res_mod"])
            n0 = float(r["sigma_res_n0"])
            scale = max(1.0, abs(s1) + abs(sres))
            worst_id = max(worst_id,
                           abs(sresm - sres - n0) / scale,
                           abs((s1m + sresm) - (s1 + sres)) / scale)
    # (ii) the deformed-contour oracle reproduces the modified background
    worst_bg = 0.0
    for E in (55.0, 65.0, 75.0, 85.0, 110.0):
        poles = relevant_poles(FIG3, E)
        k = math.sqrt(2.0 * E)
        target = sigma1(FIG3, E, poles) - sum(sigma_res_n(k, p, 0) for p in poles)
        oracle = deformed_contour_sigma1_oracle(FIG3, E, poles)
        worst_bg = max(worst_bg, abs(target - oracle) / abs(oracle))
    ok = worst_id < 1e-12 and worst_bg < 1e-6
    _verdict(7, ok, f"split rearrangement identities worst {worst_id:.2e} "
                    f"(<1e-12); sigma1' vs deformed-contour oracle worst "
                    f"{worst_bg:.2e} (<1e-6) at 5 resonance-window energies")


def test_criterion_08_classification():
    cls2 = classify_trajectory(FIG2)
    cls3 = classify_trajectory(FIG3)
    ok = (cls2.kind == KIND_BOUND and cls2.type_label == "I"
          and cls2.E0 < 0.0 and abs(cls2.gamma) < 1e-9
          and cls3.kind == KIND_METASTABLE and cls3.type_label == "II"
          and cls3.E0 > 0.0 and cls3.gamma > 0.0)
    _verdict(8, ok, f"Omega=0.5 -> type {cls2.type_label} ({cls2.kind}, "
                    f"E0={cls2.E0:.4f}, gamma={cls2.gamma:.1e}); "
                    f"Omega=32.5 -> type {cls3.type_label} ({cls3.kind}, "
                    f"E0={cls3.E0:.4f}, gamma={cls3.gamma:.4f})")


def test_criterion_09_estimate_tracks_bound_branch(preset_outputs):
    cls = classify_trajectory(FIG2)
    worst = 0.0
    rows = 0
    for r in _load(preset_outputs["fig2"]):
        E = float(r["E"])
        if not (cls.E0 < E < 0.0):
            continue
        rows += 1
        est = float(r["est_Re_lambda"])
        worst = max(worst, abs(float(r["Re_lambda"]) - est) / est)
    # Tolerance frozen from the first full run of this comparison (max 8.7%).
    ok = rows >= 20 and worst < 0.10
    _verdict(9, ok, f"|Re lambda - estimate|/estimate worst {worst:.3f} "
                    f"(<0.10) over {rows} energies in (E0, 0)")


def test_criterion_10_figure_reproduction(preset_outputs):
    def tv(vals):
        return float(sum(abs(b - a) for a, b in zip(vals, vals[1:])))

    dec4 = _load(preset_outputs["fig4"])
    dec5 = _load(preset_outputs["fig5"])
    # (a) metastable case: the modified background carries no resonance
    # structure; bound case: the original split underestimates the
    # resonance contribution (sigma'_res - sigma_res = n0 sum > 0).
    tv_orig = tv([float(r["direct_orig"]) for r in dec4])
    tv_mod = tv([float(r["direct_mod"]) for r in dec4])
    n0_min = min(float(r["sigma_res_n0"]) for r in dec5)
    ok_a = tv_mod < tv_orig and n0_min > 0.0

    # (b) the n = 1, 2 rotation terms concentrate where the trajectory
    # approaches the real axis, migrating toward the Im-minimum with n.
    ok_b = True
    detail_b = []
    for dec, traj_name in ((dec4, "fig3"), (dec5, "fig2")):
        traj = _load(preset_outputs[traj_name])
        tE = np.array([float(r["E"]) for r in traj])
        tIm = np.array([float(r["Im_lambda"]) for r in traj])
        E = np.array([float(r["E"]) for r in dec])
        window = (tE >= E[0]) & (tE <= E[-1])
        E_min = float(tE[window][np.argmin(tIm[window])])
        im_mid = 0.5 * (tIm[window].min() + tIm[window].max())
        stars = []
        for col in ("sigma_res_n1", "sigma_res_n2"):
            vals = np.abs([float(r[col]) for r in dec])
            E_star = float(E[np.argmax(vals)])
            stars.append((E_star, float(np.interp(E_star, tE, tIm))))
        (e1, im1), (e2, im2) = stars
        ok_b = ok_b and im1 < im_mid and im2 < im_mid
        ok_b = ok_b and abs(e2 - E_min) < abs(e1 - E_min) and im2 < im1
        detail_b.append(f"{traj_name}: max|n1|@{e1:g}, max|n2|@{e2:g}, "
                        f"Im-min@{E_min:g}")
    _verdict(10, ok_a and ok_b,
             f"(a) fig4 TV mod {tv_mod:.3f} < orig {tv_orig:.3f}; fig5 "
             f"min n0 {n0_min:.3f} > 0; (b) {'; '.join(detail_b)}")
