"""Acceptance gate: each committed criterion runs at its stated tolerance.

One test per criterion; each prints its PASS/FAIL line with the measured
detail so a verbose run reads as a report. The suite uses the default seed,
so the numbers are reproducible run to run.
"""

from conicmirror import acceptance


def _run(fn):
    result = fn(seed=0)
    print(("PASS" if result.passed else "FAIL") + f" {result.name}: {result.detail}")
    assert result.passed, result.detail
    return result


def test_criterion_1_mirror_isomorphism():
    result = _run(acceptance.criterion_mirror_iso)
    assert "0 failures" in result.detail


def test_criterion_2_ring_associativity_commutativity():
    result = _run(acceptance.criterion_associativity)
    assert "0 violations" in result.detail


def test_criterion_3_ell2_cocycle():
    _run(acceptance.criterion_ell2_cocycle)


def test_criterion_4_tropical_example_facts():
    _run(acceptance.criterion_tropical_facts)


def test_criterion_5_tropical_localization():
    _run(acceptance.criterion_localization)


def test_criterion_6_amoeba_hausdorff_convergence():
    _run(acceptance.criterion_amoeba_convergence)


def test_criterion_7_framed_sections():
    _run(acceptance.criterion_sections)


def test_criterion_8_mckay_covers():
    _run(acceptance.criterion_mckay)


def test_criterion_9_moment_map():
    _run(acceptance.criterion_moment_map)


def test_criteria_table_is_complete():
    labels = [label for label, _ in acceptance.CRITERIA]
    assert labels == [str(k) for k in range(1, 10)]
    fns = [fn for _, fn in acceptance.CRITERIA]
    assert len(set(fns)) == 9
