from __future__ import annotations

import json
from pathlib import Path

import pytest
from hypothesis import given, settings, strategies as st

from fftc.assoc import (
    ideal_module,
    load_algebra,
    primitive_idempotents,
    radical_char0,
    regular_module,
    simple_module,
)
from fftc.exact import QQ, QQ_I, Matrix, rank, same_span
from fftc.frobform import (
    CentralForm,
    DegenerateFormError,
    TraceAssignment,
    central_forms,
    character_form,
    check_central_form,
    copairing,
    extend_trace,
    find_symmetric_form,
    higman_basis,
    ideal_report,
    reynolds_basis,
    tau,
    zeta,
)

FIX = Path(__file__).resolve().parent.parent / "fixtures"


def load(name):
    return load_algebra(FIX / f"{name}.json")


def form(name, alg):
    with open(FIX / f"{name}.json") as fh:
        return CentralForm.from_json(json.load(fh), alg)


def modules(a):
    idems = primitive_idempotents(a)
    rad = radical_char0(a)
    reps = idems.representatives
    return [simple_module(a, e, rad) for e in reps], [ideal_module(a, e, "left") for e in reps]


def test_check_central_form_examples():
    kx2 = load("kx2")
    good = check_central_form(CentralForm(kx2, (0, 1)))
    assert good["central"] and good["nondegenerate"]
    bad = check_central_form(CentralForm(kx2, (1, 0)))
    assert bad["central"] and not bad["nondegenerate"]
    assert bad["gram"] == Matrix([[1, 0], [0, 0]])
    m2 = check_central_form(form("m2_trace", load("m2")))
    assert m2["central"] and m2["nondegenerate"]


def test_non_central_form_detected():
    m2 = load("m2")
    # ε(E12) = 1 breaks ε(E11 E12) = ε(E12 E11)
    assert not check_central_form(CentralForm(m2, (0, 1, 0, 0)))["central"]


def test_copairing_examples():
    kx2 = load("kx2")
    g = copairing(CentralForm(kx2, (0, 1)))
    assert g.matrix == Matrix([[0, 1], [1, 0]])  # 1⊗X + X⊗1
    m2 = load("m2")
    g = copairing(form("m2_trace", m2))
    # basis E11, E12, E21, E22: γ = Σ E_ij ⊗ E_ji
    expected = Matrix([[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]])
    assert g.matrix == expected and g.is_symmetric()


def test_copairing_rejects_degenerate():
    with pytest.raises(DegenerateFormError):
        copairing(CentralForm(load("kx2"), (1, 0)))


def test_tau_examples():
    kx2 = load("kx2")
    f = CentralForm(kx2, (0, 1))
    assert tau(f, (1, 0)) == (0, 2)
    assert tau(f, (0, 1)) == (0, 0)
    m2 = load("m2")
    assert tau(form("m2_trace", m2), (1, 0, 0, 0)) == (1, 0, 0, 1)


def test_higman_examples():
    kx2 = load("kx2")
    assert same_span(higman_basis(kx2, CentralForm(kx2, (0, 1))), [(0, 1)], QQ)
    m2 = load("m2")
    assert same_span(higman_basis(m2, form("m2_trace", m2)), [(1, 0, 0, 1)], QQ)


def test_reynolds_examples():
    assert same_span(reynolds_basis(load("kx2")), [(0, 1)], QQ)
    assert same_span(reynolds_basis(load("m2")), [(1, 0, 0, 1)], QQ)
    assert reynolds_basis(load("t2")) == []


@pytest.mark.parametrize("name", ["kx2", "m2", "t2", "qxq", "grassmann2"])
def test_reynolds_one_sided_equals_two_sided(name):
    a = load(name)
    rad = radical_char0(a)
    for z in reynolds_basis(a, rad):
        for r in rad:
            assert not any(a.mul(z, r)) and not any(a.mul(r, z))


def test_character_form_examples():
    kx2 = load("kx2")
    assert character_form(regular_module(kx2)).coords == (2, 0)
    m2 = load("m2")
    natural = ideal_module(m2, primitive_idempotents(m2).elements[0], "left")
    chi = character_form(natural)
    assert chi.coords == (1, 0, 0, 1)
    assert check_central_form(chi)["central"]


def test_regular_character_is_twice_simple_for_dual_numbers():
    kx2 = load("kx2")
    (simple,), _ = modules(kx2)
    assert character_form(regular_module(kx2)).coords == tuple(2 * x for x in character_form(simple).coords)


def test_ideal_report_dual_numbers():
    kx2 = load("kx2")
    simples, projectives = modules(kx2)
    r = ideal_report(kx2, form("kx2_form", kx2), simples, projectives)
    assert r["dims"] == {"Z": 2, "Rey": 1, "Hig": 1, "Jac": 1}
    assert r["I_equals_R"] and not r["semisimple"]
    assert r["chain_holds"] and r["zeta_hig_equals_I"] and r["zeta_rey_equals_R"]
    assert r["cartan_rank"] == 1 and r["hig_dim_equals_cartan_rank"]


def test_ideal_report_matrix_algebra():
    m2 = load("m2")
    simples, projectives = modules(m2)
    r = ideal_report(m2, form("m2_trace", m2), simples, projectives)
    assert r["dims"]["Z"] == r["dims"]["Rey"] == r["dims"]["Hig"] == 1
    assert r["semisimple"]


def test_grassmann_without_grading_has_no_symmetric_form():
    # a1a2 = -a2a1 forces ε(a1a2) = 0 for every central ε
    g = load("grassmann2")
    assert find_symmetric_form(g)["form"] is None
    assert all(v[3] == 0 for v in central_forms(g))


def test_upper_triangular_has_no_symmetric_form():
    t2 = load("t2")
    found = find_symmetric_form(t2)
    assert found["form"] is None
    for v in central_forms(t2):
        assert not check_central_form(CentralForm(t2, tuple(v)))["nondegenerate"]
    with pytest.raises(DegenerateFormError):
        simples, projectives = modules(t2)
        ideal_report(t2, CentralForm(t2, tuple(central_forms(t2)[0])), simples, projectives)


@pytest.mark.parametrize("name", ["kx2", "m2", "qxq"])
def test_symmetric_fixture_properties(name):
    a = load(name)
    found = find_symmetric_form(a)
    f = found["form"]
    assert f is not None
    simples, projectives = modules(a)
    r = ideal_report(a, f, simples, projectives)
    assert r["chain_holds"] and r["hig_dim_equals_cartan_rank"]
    # Cartan matrix symmetric when a symmetric form exists
    from fftc.assoc import cartan_matrix

    c = cartan_matrix(a, primitive_idempotents(a))
    assert c == c.transpose()
    # ζ(Hig) inside the span of projective characters, coordinate by coordinate
    proj = [character_form(p).coords for p in projectives]
    for h in higman_basis(a, f):
        assert same_span(proj + [zeta(f, h)], proj, a.field)


@settings(max_examples=40, deadline=None)
@given(st.integers(-5, 5).filter(bool), st.integers(-5, 5), st.integers(-5, 5), st.integers(-5, 5))
def test_tau_ideal_property_and_form_independence(z0, z1, x0, x1):
    kx2 = load("kx2")
    f = CentralForm(kx2, (0, 1))
    z, x = (z0, z1), (x0, x1)
    assert tau(f, kx2.mul(z, x)) == kx2.mul(z, tau(f, x))
    # ε' = ε(z·−) with z invertible has the same image of τ
    f2 = CentralForm(kx2, zeta(f, z))
    assert same_span(higman_basis(kx2, f2), higman_basis(kx2, f), QQ)


@settings(max_examples=25, deadline=None)
@given(st.integers(-4, 4).filter(bool), st.integers(-4, 4).filter(bool), st.integers(-4, 4).filter(bool))
def test_form_independence_product_algebra(z0, z1, c):
    q = load("qxq")
    f = find_symmetric_form(q)["form"]
    z = (z0, z1)  # every element with nonzero entries is central and invertible
    f2 = CentralForm(q, tuple(c * x for x in zeta(f, z)))
    assert same_span(higman_basis(q, f2), higman_basis(q, f), QQ)


# --------------------------------------------------------------------------
# trace extension


def _two_copies(t0):
    one = Matrix.identity(1)
    traces = TraceAssignment({"Q": lambda f: t0 * f[0, 0]})
    p1 = Matrix([[1, 0]])
    p2 = Matrix([[0, 1]])
    return traces, [("Q", p1, p1.transpose()), ("Q", p2, p2.transpose())], one


def test_extend_trace_identity_and_swap():
    traces, summands, _ = _two_copies(7)
    assert extend_trace(traces, summands, Matrix.identity(2)) == 14
    assert extend_trace(traces, summands, Matrix([[0, 1], [1, 0]])) == 0


def test_extend_trace_rejects_incomplete_or_unknown():
    traces, summands, _ = _two_copies(1)
    with pytest.raises(ValueError):
        extend_trace(traces, summands[:1], Matrix.identity(2))
    with pytest.raises(ValueError):
        extend_trace(traces, [("R", m, e) for _, m, e in summands], Matrix.identity(2))


@settings(max_examples=40)
@given(st.lists(st.integers(-3, 3), min_size=8, max_size=8))
def test_extend_trace_decomposition_independent(vals):
    traces, summands, _ = _two_copies(3)
    f = Matrix([vals[:2], vals[2:4]])
    # a second decomposition of Q⊕Q: conjugate by an invertible block map
    g = Matrix([[1, vals[4]], [0, 1]])
    gi = Matrix([[1, -vals[4]], [0, 1]])
    other = [(lab, p @ gi, g @ e) for lab, p, e in summands]
    assert extend_trace(traces, summands, f) == extend_trace(traces, other, f)


def test_extend_trace_on_sf_lambda_plus_t():
    from fftc.sfcat import lambda_algebra, right_multiplication, sf_modified_trace, sf_object

    lam = lambda_algebra(1, "i")
    big, t = sf_object(lam, "Lambda"), sf_object(lam, "T")
    traces = TraceAssignment({
        "Lambda": lambda f: sf_modified_trace(big, f, 5),
        "T": lambda f: sf_modified_trace(t, f, 5),
    })
    d = big.dim
    p1 = Matrix.from_sparse(d, d + 1, [(k, k, 1) for k in range(d)], QQ_I)
    p2 = Matrix.from_sparse(1, d + 1, [(0, d, 1)], QQ_I)
    summands = [("Lambda", p1, p1.transpose()), ("T", p2, p2.transpose())]
    # t_Λ(id) = t0 λ(1) = 0, t_T(id) = t0
    assert extend_trace(traces, summands, Matrix.identity(d + 1, QQ_I)) == 5
    assert sf_modified_trace(big, right_multiplication(big, lam.counit()), 5) == 0


def test_end_of_sf_generator_is_symmetric_with_three_dim_higman():
    from fftc.sfcat import sf_cartan, sf_end_algebra

    e, f = sf_end_algebra(1, 1)
    chk = check_central_form(f)
    assert e.dim == 10 and chk["central"] and chk["nondegenerate"]
    assert len(higman_basis(e, f)) == 3 == rank(sf_cartan(1))
    assert len(reynolds_basis(e)) == 4
