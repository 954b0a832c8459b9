from __future__ import annotations

from pathlib import Path

import pytest
from hypothesis import given, settings, strategies as st

from fftc.assoc import algebra_from_products
from fftc.exact import QQ, Matrix, inverse
from fftc.grring import (
    CommRing,
    condition_p,
    load_ring,
    nilpotent_witness,
    ring_element_power_nilpotent,
    ring_semisimple,
    validate_ring,
)
from fftc.sfcat import sf_grothendieck_ring

FIX = Path(__file__).resolve().parent.parent / "fixtures"


@pytest.mark.parametrize("name", ["sf_gr_n1", "fp_zp", "z2_ring", "dual_numbers_ring"])
def test_ring_fixtures_valid(name):
    assert validate_ring(load_ring(FIX / f"{name}.json")) == []


def test_unit_is_not_nilpotent():
    for name in ["sf_gr_n1", "z2_ring", "dual_numbers_ring"]:
        r = load_ring(FIX / f"{name}.json")
        assert not ring_element_power_nilpotent(r, r.algebra.unit)


def test_sf_t_minus_pit_squares_to_zero():
    r = sf_grothendieck_ring(1)
    x = r.element({"T": 1, "PiT": -1})
    assert r.mul(x, x) == r.algebra.zero()
    assert ring_element_power_nilpotent(r, x)


def test_fp_projective_class_is_zero():
    r = load_ring(FIX / "fp_zp.json")
    assert not any(r.projectives["P"])  # 3·[k] = 0 in characteristic 3
    assert ring_element_power_nilpotent(r, r.projectives["P"])


def test_condition_p_examples():
    assert condition_p(sf_grothendieck_ring(1)) == "P1"
    assert condition_p(load_ring(FIX / "fp_zp.json")) is None
    assert condition_p(load_ring(FIX / "z2_ring.json")) == "1"
    assert condition_p(load_ring(FIX / "dual_numbers_ring.json")) is None


def test_semisimple_examples():
    assert ring_semisimple(load_ring(FIX / "z2_ring.json"))
    assert not ring_semisimple(sf_grothendieck_ring(1))
    assert not ring_semisimple(load_ring(FIX / "dual_numbers_ring.json"))


def test_semisimple_rejects_char_p():
    with pytest.raises(ValueError):
        ring_semisimple(load_ring(FIX / "fp_zp.json"))


def test_nilpotent_witness_is_t_minus_pit():
    r = sf_grothendieck_ring(1)
    assert r.render(nilpotent_witness(r)) == {"T": "1", "PiT": "-1"}
    assert nilpotent_witness(load_ring(FIX / "z2_ring.json")) is None


@pytest.mark.parametrize("N", [1, 2, 3])
def test_sf_ring_relations(N):
    r = sf_grothendieck_ring(N)
    c = 2 ** (2 * N - 1)
    t = r.element({"T": 1})
    assert r.mul(t, t) == r.element({"1": c, "Pi1": c})
    assert condition_p(r) is not None and not ring_semisimple(r)


def test_from_json_rejects_unknown_projective_label():
    d = load_ring(FIX / "z2_ring.json").to_json()
    d["projectives"] = ["h"]
    with pytest.raises(ValueError):
        CommRing.from_json(d)


def test_validate_reports_non_commutative():
    m2 = CommRing.from_json({**_matrix_ring(), "projectives": []})
    assert any("commutative" in p for p in validate_ring(m2))


def _matrix_ring():
    from fftc.assoc import load_algebra

    return load_algebra(FIX / "m2.json").to_json()


# --------------------------------------------------------------------------
# basis independence: conjugate the structure constants of a random
# commutative ring (a product of truncated polynomial rings) by an
# invertible change of basis


def _truncated_product(sizes):
    """``Q[x]/x^{n1} × Q[x]/x^{n2} × ...`` in the monomial basis."""
    offs, basis = [], []
    for b, n in enumerate(sizes):
        offs.append(len(basis))
        basis += [(b, k) for k in range(n)]

    def product(i, j):
        (b1, k1), (b2, k2) = basis[i], basis[j]
        v = [0] * len(basis)
        if b1 == b2 and k1 + k2 < sizes[b1]:
            v[offs[b1] + k1 + k2] = 1
        return v

    unit = [1 if k == 0 else 0 for _, k in basis]
    return algebra_from_products(QQ, [f"f{b}_{k}" for b, k in basis], product, unit)


@st.composite
def rings_with_change_of_basis(draw):
    sizes = draw(st.lists(st.integers(1, 3), min_size=1, max_size=3))
    a = _truncated_product(sizes)
    n = a.dim
    low = [[1 if i == j else (draw(st.integers(-2, 2)) if i > j else 0) for j in range(n)] for i in range(n)]
    up = [[1 if i == j else (draw(st.integers(-2, 2)) if i < j else 0) for j in range(n)] for i in range(n)]
    p = Matrix(low) @ Matrix(up)  # columns: new basis in old coordinates
    x = tuple(draw(st.integers(-2, 2)) for _ in range(n))
    return a, p, x


@settings(max_examples=40, deadline=None)
@given(rings_with_change_of_basis())
def test_nilpotency_verdict_is_basis_independent(data):
    a, p, x = data
    pinv = inverse(p)
    cols = p.columns()

    def product(i, j):
        return pinv.apply(a.mul(cols[i], cols[j]))

    b = algebra_from_products(QQ, [f"g{k}" for k in range(a.dim)], product, pinv.apply(a.unit))
    ra, rb = CommRing(a, {}), CommRing(b, {})
    assert validate_ring(rb) == []
    assert ring_element_power_nilpotent(ra, x) == ring_element_power_nilpotent(rb, pinv.apply(x))
    assert ring_semisimple(ra) == ring_semisimple(rb)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(1, 3), min_size=1, max_size=3))
def test_nilpotent_element_forbids_semisimplicity(sizes):
    r = CommRing(_truncated_product(sizes), {})
    has_nilpotent = any(n > 1 for n in sizes)
    assert ring_semisimple(r) == (not has_nilpotent)
    assert (nilpotent_witness(r) is not None) == has_nilpotent
