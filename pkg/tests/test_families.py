import pytest
from hypothesis import given, settings, strategies as st

from circzf.families import (
    CONFIRMED,
    CONTRADICTED,
    PROVED_EQUAL,
    UNKNOWN,
    Prediction,
    combined_interval,
    connected_specs,
    predict,
    sweep,
    torus_cc_params,
    torus_kn_params,
    verify,
)
from circzf.graphs import CirculantSpec, build_circulant, decompose, multiply
from oracles import all_connected_circulants, naive_z


def C(n, *S):
    return CirculantSpec(n, S)


def by_family(spec):
    out = {}
    for p in predict(spec):
        out.setdefault(p.family, []).append(p)
    return out


def exact_values(spec):
    return {p.z_lower for p in predict(spec) if p.exact}


# --- catalog -------------------------------------------------------------------------

@pytest.mark.parametrize("spec,family,z", [
    (C(8, 1, 2), "consecutive", 4),
    (C(14, 3, 5, 7), "bipartite-odd-run", 8),
    (C(12, 3, 6), "cubic", 9),
    (C(10, 2, 5), "prism", 4),
    (C(10, 2, 5), "cubic", 4),
    (C(8, 1, 3), "bipartite-initial-odd", 6),
    (C(10, 1, 5), "mobius-ladder", 4),
    (C(12, 1, 6), "mobius-ladder", 4),
    (C(9, 1, 3), "c9-13", 5),
    (C(15, 1, 3), "c3m-13", 6),
    (C(10, 1, 2, 4), "torus-kn", 6),
    (C(12, 1, 4), "torus-kn", 6),
    (C(18, 1, 6), "torus-kn", 6),
    (C(4, 1, 2), "complete", 3),
    (C(5, 1), "cycle", 2),
    (C(7, 1, 2), "cycle-complement", 4),
])
def test_family_values(spec, family, z):
    preds = by_family(spec)[family]
    assert any(p.exact and p.z_lower == z for p in preds)


def test_c16_14_interval_and_status():
    preds = predict(C(16, 1, 4))
    assert combined_interval(preds) == (6, 7)
    assert all(p.m_status == UNKNOWN for p in preds)


def test_c9_13_is_proved_equal():
    (p,) = by_family(C(9, 1, 3))["c9-13"]
    assert p.m_status == PROVED_EQUAL


def test_m_status_for_torus_family():
    assert by_family(C(12, 1, 4))["torus-kn"][0].m_status == PROVED_EQUAL
    assert by_family(C(18, 1, 6))["torus-kn"][0].m_status == PROVED_EQUAL
    assert by_family(C(9, 1, 3))["torus-kn"][0].m_status == UNKNOWN
    assert by_family(C(20, 1, 5, 10))["torus-kn"][0].m_status == UNKNOWN
    assert by_family(C(15, 1, 3))["c3m-13"][0].m_status == UNKNOWN


def test_boundary_flag_for_even_n_and_m2():
    p = by_family(C(8, 1, 2, 4))["torus-kn"][0]
    assert p.parameters["n"] == 4 and "note" in p.parameters


def test_multiplier_rewrite_recorded():
    # 3 * {2, 3} = {6, 9} = {1, 2} mod 7, the least unit giving a consecutive set
    preds = by_family(C(7, 2, 3))
    p = preds["consecutive"][0]
    assert p.multiplier == 3 and p.z_lower == 4
    assert multiply(C(7, 2, 3), 3) == C(7, 1, 2)
    assert p.parameters["rewritten"] == "C7(1,2)"


def test_disconnected_scaled_by_copies():
    preds = predict(C(12, 3, 6))
    scaled = [p for p in preds if p.copies == 3]
    assert scaled and all(p.z_lower == 9 for p in scaled)


def test_hypothesis_boundaries_respected():
    # consecutive needs 2d < n; C_4(1,2) is K_4 with Z = 3, not 4
    assert "consecutive" not in by_family(C(4, 1, 2))
    # odd-run family needs N >= 2l + 2
    assert "bipartite-odd-run" not in by_family(C(6, 1, 3))
    # torus family needs n >= 3
    assert torus_kn_params(C(8, 1, 4)) is None
    assert torus_cc_params(C(8, 1, 4)) is None
    # the perfect matching case of the sequential form never predicts Z = 0
    assert "bipartite-sequential" not in by_family(C(2, 1))


def test_prediction_validation():
    with pytest.raises(ValueError):
        Prediction("x", 3, 2, UNKNOWN, "")
    with pytest.raises(ValueError):
        Prediction("x", 2, 3, PROVED_EQUAL, "")


def test_predictions_against_oracle_small():
    for n, S in all_connected_circulants(10):
        spec = CirculantSpec(n, S)
        z = naive_z(build_circulant(spec))
        for p in predict(spec):
            assert p.z_lower <= z <= p.z_upper, (spec, p)


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 20), st.data())
def test_decomposition_coherence(n, data):
    half = n // 2
    S = data.draw(st.sets(st.integers(1, half), min_size=1, max_size=half))
    spec = CirculantSpec(n, tuple(S))
    d = decompose(spec)
    if d.copies == 1:
        return
    reduced = {p.z_lower for p in predict(d.reduced) if p.exact}
    mine = exact_values(spec)
    assert {d.copies * z for z in reduced} <= mine


# --- verification pipeline ---------------------------------------------------------------

def test_verify_c913():
    r = verify(C(9, 1, 3))
    assert r.ok and r.z_search == 5
    mats = [c for c in r.checks if c.kind == "witness-matrix"]
    assert mats and all(c.verdict == CONFIRMED and c.parameters["nullity"] == 5 for c in mats)


def test_verify_c12_14():
    r = verify(C(12, 1, 4))
    assert r.ok and r.z_search == 6
    (mat,) = [c for c in r.checks if c.kind == "witness-matrix"]
    assert mat.parameters == {"witness": "k4:3", "nullity": 6, "pattern": True}


def test_verify_c15_13():
    r = verify(C(15, 1, 3))
    assert r.ok and r.z_search == 6
    assert any(c.family == "c3m-13" and c.verdict == CONFIRMED for c in r.checks)


def test_verify_through_multiplier():
    # C_16(3,4,8) is C_16(1,4,8) scaled by 11
    spec = C(16, 3, 4, 8)
    r = verify(spec)
    assert r.ok and r.z_search == 8
    (mat,) = [c for c in r.checks if c.kind == "witness-matrix"]
    assert mat.verdict == CONFIRMED


def test_verify_incomplete_search():
    r = verify(C(30, 1, 2), ceiling=20)
    assert not r.complete and r.z_search is None
    assert r.ok


def test_wrong_prediction_is_contradicted(monkeypatch):
    import circzf.families as fam

    def bogus(spec):
        yield Prediction("bogus", 99, 99, UNKNOWN, "deliberately wrong")

    monkeypatch.setattr(fam, "CONNECTED_MATCHERS", fam.CONNECTED_MATCHERS + (bogus,))
    r = fam.verify(C(9, 1, 3))
    assert not r.ok
    assert {c.family for c in r.contradicted} >= {"bogus", "all"}


def test_report_serialization_is_deterministic():
    a = verify(C(12, 1, 4)).to_dict()
    b = verify(C(12, 1, 4)).to_dict()
    assert a == b
    assert "seconds" not in a["checks"][0]
    assert "verdict" in verify(C(12, 1, 4)).to_table()


def test_small_sweep_clean():
    rep = sweep(11)
    assert rep.ok
    assert len(rep.reports) == len(list(connected_specs(11)))
    assert rep.summary()["verdicts"].get(CONTRADICTED, 0) == 0


def test_overlapping_families_agree():
    rep = sweep(14)
    for r in rep.reports:
        exact = {p.z_lower for p in r.predictions if p.exact}
        assert len(exact) <= 1, r.spec


def test_c12_135_two_families_agree():
    fams = by_family(C(12, 1, 3, 5))
    assert fams["bipartite-odd-run"][0].z_lower == fams["bipartite-initial-odd"][0].z_lower == 10
