from __future__ import annotations

import copy
import json
from dataclasses import replace
from fractions import Fraction
from pathlib import Path

import pytest
from hypothesis import given, settings, strategies as st

from fftc.audit import (
    DatasetError,
    ModularDataSet,
    full_audit,
    hopf_link_check,
    hopf_link_value,
    load_dataset,
    m1_cartan_check,
    product_rule_check,
    rank_check,
    rescale_solver,
    s_squared_check,
    synthetic_dataset,
    toric_code_dataset,
    verlinde_check,
)
from fftc.cli import emit
from fftc.exact import QQ_I, Matrix
from fftc.sfcat import sf_fusion_closed_form, sf_modular_data

FIX = Path(__file__).resolve().parent.parent / "fixtures"


def sf_dataset(N: int, t0=1) -> ModularDataSet:
    # the computed fusion equals the closed form for N = 1, 2 (tested in test_sfcat)
    return ModularDataSet.from_json(sf_modular_data(N).to_dataset_json(sf_fusion_closed_form(N), t0))


def toric() -> ModularDataSet:
    return load_dataset(FIX / "toric.json")


def witness(section, **where):
    return next(w for w in section["witnesses"] if all(w[k] == v for k, v in where.items()))


def test_fixture_datasets_match_generators():
    assert json.loads((FIX / "toric.json").read_text()) == toric_code_dataset()
    assert load_dataset(FIX / "sf_n1.json").to_json() == sf_dataset(1).to_json()


# --------------------------------------------------------------------------
# toric code


def test_toric_verlinde_and_witness_free():
    d = toric()
    sec = verlinde_check(d)
    assert sec["verdict"] == "pass" and sec["checked"] == 64 and sec["witnesses"] == []


def test_toric_verlinde_values():
    # LHS Σ_W M_{UV}^W B̃_{WX} and the S̃-side sum, evaluated independently
    d = toric()
    half = Fraction(1, 2)
    s = {u: {v: d.Stilde[d.j(u), d.j(v)] for v in d.J} for u in d.J}
    for u, v, x in [("1", "1", "1"), ("e", "m", "f")]:
        rhs = sum(2 * s[u][q] * s[v][q] * s[q][x] for q in d.J)
        assert rhs == 1
        assert s["e"]["m"] == -half


def test_toric_sections():
    d = toric()
    assert s_squared_check(d)["square"] == Matrix.identity(4, QQ_I).to_strings()
    pr = product_rule_check(d)
    assert pr["verdict"] == "pass" and pr["checked"] == 16
    assert m1_cartan_check(d)["verdict"] == "pass"
    assert d.M("e", "e") == {"1": 1} and d.cartan[d.i("e"), d.i("e")] == 1
    assert full_audit(d)["summary"]["all_pass"]
    assert "rescale" not in full_audit(d)


def test_toric_hopf_link_follows_bilinear_form():
    d = toric()
    assert hopf_link_check(d)["verdict"] == "pass"
    assert hopf_link_value(d, "e", "m") == -1 and hopf_link_value(d, "e", "e") == 1
    # every reference Q gives the same values because all b_Q agree
    for q in d.irrproj:
        assert hopf_link_value(d, "m", "f", Q=q) == hopf_link_value(d, "m", "f")


# --------------------------------------------------------------------------
# SF modular data


def test_sf_verlinde_witness():
    sec = verlinde_check(sf_dataset(1))
    assert sec["verdict"] == "fail"
    w = witness(sec, U="T", V="T", X="1")
    assert (w["lhs"], w["rhs"]) == ("1", "1/4")


def test_sf_s_squared():
    sec = s_squared_check(sf_dataset(1))
    assert sec["verdict"] == "fail"
    assert sec["square"] == [["4", "0", "0"], ["0", "5/2", "-3/2"], ["0", "-3/2", "5/2"]]


def test_sf_product_rule_witness():
    sec = product_rule_check(sf_dataset(1))
    w = witness(sec, U="T", V="T")
    assert w["lhs"] == {"T": "1/16", "PiT": "-1/16"}
    assert w["rhs"] == {"T": "1", "PiT": "-1"}


@pytest.mark.parametrize("N", [1, 2, 3, 4])
def test_sf_hopf_link_t_1(N):
    t0 = Fraction(3, 7)
    assert hopf_link_value(sf_dataset(N, t0), "T", "1") == 4 ** (N - 1) * t0


def test_sf_hopf_link_t_t():
    assert hopf_link_value(sf_dataset(1, 8), "T", "T") == 1


def test_hopf_link_zero_overlap():
    # Ĉ column of T meets only the T row, and S̃_{1,T} = 2^{N-1}; make it vanish
    d = sf_dataset(1)
    s = [list(r) for r in d.Stilde.data]
    s[0][1] = 0
    assert hopf_link_value(replace(d, Stilde=Matrix(s, QQ_I)), "1", "T") == 0


def test_sf_reference_independence():
    d = sf_dataset(2)
    sec = hopf_link_check(d)
    assert sec["reference_ratios"]["T"] == sec["reference_ratios"]["PiT"]
    # b_Q t_Q(id) is the same for every Q, so the link value is too
    for q in d.irrproj:
        for x in d.irr:
            assert hopf_link_value(d, "T", x, Q=q) == hopf_link_value(d, "T", x)


def test_sf_m1_cartan():
    d = sf_dataset(1)
    assert m1_cartan_check(d)["verdict"] == "pass"
    assert d.M("T", "T")["1"] == 1 == d.cartan[d.i("T"), d.i("T")]
    assert d.M("1", "1")["1"] == 2 == d.cartan[d.i("1"), d.i("1")]


def test_sf_rank_section():
    sec = rank_check(sf_dataset(1))
    assert sec["verdict"] == "pass" and sec["cartan_rank"] == 3 == sec["btilde_rank"]


def test_sf_full_audit_verdicts():
    rep = full_audit(sf_dataset(1))
    assert rep["verdicts"] == {"s_squared": "fail", "product_rule": "fail", "verlinde": "fail",
                               "hopf_link": "pass", "m1_cartan": "pass", "rank": "pass"}
    for name, verdict in rep["verdicts"].items():
        if verdict == "fail":
            assert rep["sections"][name]["witnesses"]


@pytest.mark.parametrize("N", [1, 2, 3, 4])
def test_sf_rescale(N):
    res = rescale_solver(sf_dataset(N))
    assert res["solvable"] and res["multiplier"] == str(2 ** (2 * N + 2))
    assert res["rerun"]["product_rule"] == "pass"
    assert res["rerun"]["hopf_link"] == "fail" and "hopf_link" in res["broke"]
    (conflict,) = res["hopf_link_conflicts"]
    assert (conflict["A"], conflict["X"]) == ("T", "1")
    assert conflict["rescaled"] == str(2 ** (4 * N)) and conflict["expected"] == str(4 ** (N - 1))
    # with S̃ in place of S̃^{-1} the identity still fails; the inverse form holds
    assert res["rerun"]["verlinde"] == "fail" and res["verlinde_inverse_form"] == "pass"


def test_rescale_is_separate_from_verdicts():
    rep = full_audit(sf_dataset(1))
    assert rep["verdicts"]["product_rule"] == "fail"
    assert rep["rescale"]["rerun"]["product_rule"] == "pass"


def test_rescale_reports_inconsistent_pair():
    d = toric_code_dataset()
    d["fusion"]["e,e"] = {"m": 1}
    res = rescale_solver(ModularDataSet.from_json(d))
    assert not res["solvable"] and res["inconsistent"]


def test_exchange_diagnostic_is_not_a_verdict():
    rep = full_audit(sf_dataset(1))
    asym = rep["diagnostics"]["hopf_link_exchange_asymmetric"]
    assert {(w["A"], w["X"]) for w in asym} == {("1", "T"), ("1", "PiT")}
    assert "diagnostics" not in rep["verdicts"]


# --------------------------------------------------------------------------
# small datasets and validation


def unit_only() -> dict:
    return {"irr": ["1"], "J": ["1"], "irrproj": ["1"], "cartan": [["1"]], "Btilde": [["1"]],
            "Stilde": [["1"]], "Ctilde": [["1"]], "b": {"1": "1"}, "fusion": {"1,1": {"1": 1}},
            "t0": "1"}


def test_unit_only_passes():
    assert full_audit(ModularDataSet.from_json(unit_only()))["summary"]["all_pass"]


def test_diagonal_fusion_with_matching_b_passes():
    # two labels, S̃ = C̃ = 1, φ_A φ_B = δ b_A φ_A, M_{AA}^A = b_A
    d = unit_only()
    d.update(irr=["1", "x"], J=["1", "x"], irrproj=["1", "x"], cartan=[["1", "0"], ["0", "1"]],
             Btilde=[["1", "0"], ["0", "1"]], Stilde=[["1", "0"], ["0", "1"]],
             Ctilde=[["1", "0"], ["0", "1"]], b={"1": "1", "x": "3"},
             fusion={"1,1": {"1": 1}, "1,x": {}, "x,1": {}, "x,x": {"x": 3}})
    assert product_rule_check(ModularDataSet.from_json(d))["verdict"] == "pass"


@pytest.mark.parametrize("mutate, message", [
    (lambda d: d.pop("fusion"), "missing key"),
    (lambda d: d.update(b={"1": "0"}), "nonzero"),
    (lambda d: d.update(Ctilde=[["2"]]), "Ctilde"),
    (lambda d: d.update(fusion={"1,1": {"1": "1/2"}}), "nonnegative integer"),
    (lambda d: d.update(Stilde=[["1", "0"]]), "Stilde"),
    (lambda d: d.update(irrproj=["2"]), "irrproj"),
])
def test_validation_errors(mutate, message):
    d = unit_only()
    mutate(d)
    with pytest.raises(DatasetError, match=message):
        ModularDataSet.from_json(d)


def test_missing_fusion_pair_is_reported():
    d = copy.deepcopy(toric_code_dataset())
    del d["fusion"]["e,m"]
    with pytest.raises(DatasetError, match="missing fusion"):
        verlinde_check(ModularDataSet.from_json(d))


def test_empty_irrproj_rejected_by_hopf_link():
    d = unit_only()
    d.update(irrproj=[], b={})
    with pytest.raises(DatasetError):
        hopf_link_value(ModularDataSet.from_json(d), "1", "1")


def test_full_audit_is_deterministic():
    raw = (FIX / "sf_n1.json").read_bytes()
    a = emit(full_audit(ModularDataSet.from_json(json.loads(raw))))
    b = emit(full_audit(ModularDataSet.from_json(json.loads(raw))))
    assert a == b


# --------------------------------------------------------------------------
# properties


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_conditional_soundness(seed):
    d = ModularDataSet.from_json(synthetic_dataset(seed))
    if s_squared_check(d)["verdict"] == "pass" and product_rule_check(d)["verdict"] == "pass":
        assert verlinde_check(d)["verdict"] == "pass"


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_synthetic_datasets_are_consistent_and_checks_are_sharp(seed):
    raw = synthetic_dataset(seed)
    d = ModularDataSet.from_json(raw)
    assert s_squared_check(d)["verdict"] == "pass"
    assert product_rule_check(d)["verdict"] == "pass"
    # perturbing a single fusion coefficient breaks the product rule
    u = d.irr[0]
    key = f"{u},{u}"
    row = dict(raw["fusion"][key])
    target = d.J[0]
    row[target] = str(Fraction(row.get(target, "0")) + 1)
    raw["fusion"][key] = row
    assert product_rule_check(ModularDataSet.from_json(raw))["verdict"] == "fail"


@settings(max_examples=30, deadline=None)
@given(st.lists(st.integers(-3, 3), min_size=18, max_size=18), st.integers(-3, 3))
def test_hopf_link_value_is_bilinear(entries, c):
    d = sf_dataset(1)
    s1 = Matrix([entries[0:3], entries[3:6], entries[6:9]], QQ_I)
    s2 = Matrix([entries[9:12], entries[12:15], entries[15:18]], QQ_I)
    for a in d.J:
        for x in d.irr:
            v1 = hopf_link_value(replace(d, Stilde=s1), a, x)
            v2 = hopf_link_value(replace(d, Stilde=s2), a, x)
            assert hopf_link_value(replace(d, Stilde=s1 + s2.scale(c)), a, x) == v1 + c * v2
    # linear in the Cartan column of X
    c1 = d.cartan
    c2 = Matrix([[entries[k % 18] for k in range(4 * r, 4 * r + 4)] for r in range(4)], QQ_I)
    for a in d.J:
        for x in d.irr:
            v1 = hopf_link_value(replace(d, cartan=c1), a, x)
            v2 = hopf_link_value(replace(d, cartan=c2), a, x)
            assert hopf_link_value(replace(d, cartan=c1 + c2.scale(c)), a, x) == v1 + c * v2
