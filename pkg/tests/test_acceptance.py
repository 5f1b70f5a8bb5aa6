"""Acceptance battery: one test per criterion, every tolerance exact.

Run with -s to see the per-criterion pass lines.  The heavy computations are
shared through module-scope fixtures so the battery stays inside its stated
time budgets.
"""

import time


from reductions import acceptance

SEED = 42


def _report(name, results, elapsed):
    worst = "pass"
    for r in results:
        if r.status == "fail":
            worst = "fail"
        elif r.status == "evidence" and worst == "pass":
            worst = "evidence"
    print(f"[{worst.upper():8s}] {name} ({elapsed:.1f}s): " + ", ".join(
        f"{r.name}={r.status}" for r in results
    ))
    return worst


def _run(fn, *args):
    t = time.time()
    results = fn(*args)
    return results, time.time() - t


def test_criterion_1_table1_exact():
    results, dt = _run(acceptance.criterion_1_table)
    assert _report("1 table", results, dt) == "pass"
    assert dt < 1.0


def test_criterion_2_structure_suite():
    results, dt = _run(acceptance.criterion_2_structure)
    assert _report("2 structure", results, dt) == "pass"
    dims = {r.name: r.details["dim_reduction_variety"] for r in results}
    assert dims == {
        "structure.square(sl2)": 2,
        "structure.square(sl3)": 6,
        "structure.square(sp4)": 8,
        "structure.square(g2)": 12,
        "structure.transpose3": 3,
        "structure.transpose4": 6,
    }
    assert dt < 30


def test_criterion_3_quadric_equivalence():
    results, dt = _run(acceptance.criterion_3_quadric, SEED)
    assert _report("3 quadric", results, dt) == "pass"
    assert all(r.details["planes"] >= 1000 for r in results)
    assert dt < 60


def test_criterion_4_jacobian_proportionality():
    results, dt = _run(acceptance.criterion_4_jacobian, SEED)
    assert _report("4 jacobian", results, dt) == "pass"
    assert all(r.details["samples"] >= 100 for r in results)
    assert dt < 60


def test_criterion_5_tempered_limits():
    results, dt = _run(acceptance.criterion_5_limits, SEED)
    assert _report("5 limits", results, dt) == "pass"
    assert all(r.details["instances"] >= 100 for r in results)
    # the negative control fired on every nontrivial flag
    for r in results:
        assert r.details["negative_controls"] == r.details["nontrivial_flags"]
    assert dt < 120


def test_criterion_6_rigidity():
    results, dt = _run(acceptance.criterion_6_rigidity, SEED)
    assert _report("6 rigidity", results, dt) == "pass"
    assert all(r.details["degenerations"] >= 50 for r in results)
    assert dt < 120


def test_criterion_7_subvarieties():
    results, dt = _run(acceptance.criterion_7_subvarieties, SEED)
    assert _report("7 subvarieties", results, dt) == "pass"
    assert dt < 60


def test_criterion_8_linear_families():
    results, dt = _run(acceptance.criterion_8_families, SEED)
    assert _report("8 families", results, dt) == "pass"
    counts = {r.name: r.details["families"] for r in results}
    assert counts == {
        "families.square(sl3)": 3,
        "families.square(sp4)": 4,
        "families.square(g2)": 6,
        "families.transpose3": 3,
    }
    assert dt < 60


def test_criterion_9_anisotropic_suite():
    results, dt = _run(acceptance.criterion_9_anisotropic, SEED)
    assert _report("9 anisotropic", results, dt) == "pass"
    values = next(r for r in results if r.name == "anisotropic.maximal-abelian")
    assert values.details["values"] == {"G2": 3, "C2": 3, "B3": 5, "A2": 2, "A3": 4}
    assert dt < 300


def test_criterion_10_evidence():
    results, dt = _run(acceptance.criterion_10_evidence, SEED)
    worst = _report("10 evidence", results, dt)
    assert worst in ("pass", "evidence")
    assert all(r.status != "fail" for r in results)
    closure = next(r for r in results if "class-closure" in r.name)
    assert closure.details["rule_violations"] == []
    assert closure.details["antisymmetric"] and closure.details["transitive"]
    assert dt < 300
