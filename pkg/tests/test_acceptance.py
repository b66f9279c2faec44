"""Acceptance criteria for the default configuration.

Seed (1, 0), gamma = 1, a = 1, alpha = 1/2, lam = -1/12, standard grid 50 x 20
on (0, 0.9 x_pole) x [0, 2]. Each test prints one PASS/FAIL line; the
thresholds below are pinned here and do not follow the library's own.
"""

import json
import time

import pytest

from ep2stefan import cli, suites

LIMITS = {
    1: {"constants_at_zero": 1e-12, "maclaurin_oracle": 1e-9, "ode_oracle": 1e-9, "wronskian": 1e-9},
    2: {"pii_residual": 1e-13, "p34_residual": 1e-9, "verbatim_profile_fd_residual": 1e-6},
    3: {"ep2_residual": 1e-9, "mkdv_analytic": 1e-9, "mkdv_fd_h1e-3_interior": 1e-5},
    4: {"front_flux": 1e-9, "front_value": 1e-9, "origin_flux": 1e-9, "initial_front": 1e-9,
        "H0_computed": 1e-9, "reduced_flux_spread": 1e-10},
    5: {"two_path_over_2tol": 1.0, "casimir_residual": 1e-4, "origin_constancy": 1e-8,
        "s_star_coefficient": 1e-10},
    6: {"superposition_constraint": 1e-12, "ermakov_free": 1e-10, "ermakov_harmonic": 1e-10,
        "involution_t": 1e-9, "involution_u": 1e-9},
    7: {"residual_identity": 1e-12, "gardner_residual": 1e-9},
}
MIN_ORDER = 3.7
SUITE_OF = {1: "airy", 2: "painleve", 3: "central", 4: "stefan", 5: "reciprocal", 6: "ermakov", 7: "gardner"}
TITLES = {1: "airy kernel", 2: "painleve chain", 3: "central oracle", 4: "stefan suite",
          5: "reciprocal suite", 6: "ermakov suite", 7: "gardner suite", 8: "cli"}

_START = {}


@pytest.fixture(scope="module")
def results():
    _START["t"] = time.perf_counter()
    cfg = suites.Config()
    return {n: suites.SUITES[name](cfg) for n, name in SUITE_OF.items()}


def _values(suite):
    return {c.name: c.value for c in suite.checks}


def _report(capsys, n, failures, detail):
    line = f"[{'FAIL' if failures else 'PASS'}] {n} {TITLES[n]}: {detail}"
    with capsys.disabled():
        print("\n" + line)
    assert not failures, line + " | " + "; ".join(failures)


def _bounded(vals, limits):
    return [f"{k}={vals[k]:.3e} > {lim:g}" for k, lim in limits.items() if not vals[k] <= lim]


def test_1_airy_kernel(results, capsys):
    v = _values(results[1])
    fails = _bounded(v, LIMITS[1])
    _report(capsys, 1, fails, f"wronskian {v['wronskian']:.1e}, series {v['maclaurin_oracle']:.1e}, "
                              f"ode {v['ode_oracle']:.1e}, constants {v['constants_at_zero']:.1e}")


def test_2_painleve_chain(results, capsys):
    v = _values(results[2])
    fails = _bounded(v, LIMITS[2])
    # the displayed radicand must be measurably wrong for the discrepancy to count as documented
    shown = v.get("displayed_profile_fd_residual")
    if shown is None or not shown >= 1e-3:
        fails.append(f"displayed radicand residual {shown} not >= 1e-3")
    _report(capsys, 2, fails, f"PII {v['pii_residual']:.1e}, XXXIV {v['p34_residual']:.1e}, "
                              f"verbatim profile FD {v['verbatim_profile_fd_residual']:.1e} vs displayed {shown:.2f}")


def test_3_central_oracle(results, capsys):
    v = _values(results[3])
    fails = _bounded(v, LIMITS[3])
    if not v["mkdv_fd_order"] >= MIN_ORDER:
        fails.append(f"FD order {v['mkdv_fd_order']:.2f} < {MIN_ORDER}")
    _report(capsys, 3, fails, f"EP-II {v['ep2_residual']:.1e}, mKdV {v['mkdv_analytic']:.1e}, "
                              f"FD {v['mkdv_fd_h1e-3_interior']:.1e}, order {v['mkdv_fd_order']:.2f}")


def test_4_stefan(results, capsys):
    v = _values(results[4])
    fails = _bounded(v, LIMITS[4])
    slopes = results[4].info["exponent_slopes"]
    wrong = min(abs(s) for c in "ijk" for e, s in slopes[c].items() if e != -1)
    if not wrong > 0.1:
        fails.append(f"smallest wrong-exponent slope {wrong:.3e}")
    worst = max(v[k] for k in ("front_flux", "front_value", "origin_flux", "initial_front"))
    _report(capsys, 4, fails, f"boundary {worst:.1e}, |H0| {v['H0_computed']:.1e}, "
                              f"flux spread {v['reduced_flux_spread']:.1e}, wrong-exponent slope >= {wrong:.3f}")


def test_5_reciprocal(results, capsys):
    v = _values(results[5])
    fails = _bounded(v, LIMITS[5])
    if not v["casimir_order"] >= MIN_ORDER:
        fails.append(f"Casimir order {v['casimir_order']:.2f} < {MIN_ORDER}")
    _report(capsys, 5, fails, f"two-path/2tol {v['two_path_over_2tol']:.1e}, Casimir {v['casimir_residual']:.1e} "
                              f"order {v['casimir_order']:.2f}, x*(0) drift {v['origin_constancy']:.1e}, "
                              f"S* coefficient {v['s_star_coefficient']:.1e}")


def test_6_ermakov(results, capsys):
    v = _values(results[6])
    fails = _bounded(v, LIMITS[6])
    rep = results[6].info["discrimination"]
    if len(rep["consistent"]) != 1:
        fails.append(f"consistent variants {rep['consistent']}")
    _report(capsys, 6, fails, f"constraint {v['superposition_constraint']:.1e}, Ermakov "
                              f"{max(v['ermakov_free'], v['ermakov_harmonic']):.1e}, involution "
                              f"{max(v['involution_t'], v['involution_u']):.1e}, consistent {rep['consistent']}")


def test_7_gardner(results, capsys):
    v = _values(results[7])
    fails = _bounded(v, LIMITS[7])
    _report(capsys, 7, fails, f"identity {v['residual_identity']:.1e}, residual {v['gardner_residual']:.1e}")


def test_8_cli(tmp_path, capsys):
    runs = []
    for d in ("a", "b"):
        out = tmp_path / d
        status = cli.main(["verify", "--out", str(out)])
        cli.main(["solve", "--out", str(out)])
        runs.append((status, out))
    capsys.readouterr()
    fails = []
    if runs[0][0] != 0:
        fails.append(f"verify exit status {runs[0][0]}")
    report = json.loads((runs[0][1] / "verify_report.json").read_text())
    names = [s["name"] for s in report["suites"]]
    if names != list(SUITE_OF.values()) or not report["passed"]:
        fails.append(f"report suites {names}, passed={report['passed']}")
    for name in ("verify_report.json", "solution.csv", "manifest.json"):
        if (runs[0][1] / name).read_bytes() != (runs[1][1] / name).read_bytes():
            fails.append(f"{name} differs between runs")
    _report(capsys, 8, fails, f"verify exit {runs[0][0]}, {len(names)} suites, byte-identical reruns")


def test_runtime_budget(results, capsys):
    # runs last in this module; covers the suites and both CLI runs above
    elapsed = time.perf_counter() - _START["t"]
    with capsys.disabled():
        print(f"\nacceptance runtime {elapsed:.1f} s (budget 60 s)")
    assert elapsed < 60.0
