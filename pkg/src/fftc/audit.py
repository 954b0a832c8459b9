"""Identity auditor over modular datasets.

A dataset carries the K_0 structure constants ``M_{UV}^W`` together with the
matrices ``B~`` (Irr x J), ``S~`` and ``C~`` (J x J), the Cartan matrix ``C^``
and the scalars ``b_Q`` on the projective simples.  Every check is exact; a
failing check always carries witnesses with both sides rendered as strings.

Rescaling is reported in its own block and never feeds back into the
verdicts of the original data.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, replace
from fractions import Fraction
from pathlib import Path
from typing import Mapping, Sequence

from .exact import QQ_I, Matrix, inverse, parse_scalar, rank, render_scalar

__all__ = [
    "DatasetError",
    "ModularDataSet",
    "load_dataset",
    "verlinde_check",
    "s_squared_check",
    "product_rule_check",
    "hopf_link_value",
    "hopf_link_check",
    "m1_cartan_check",
    "rank_check",
    "rescale_solver",
    "full_audit",
    "toric_code_dataset",
    "synthetic_dataset",
    "SECTIONS",
]

FIELD = QQ_I
SECTIONS = ("s_squared", "product_rule", "verlinde", "hopf_link", "m1_cartan", "rank")
MAX_WITNESSES = 256


class DatasetError(ValueError):
    """Malformed or incomplete modular dataset."""


def _s(x) -> str:
    return render_scalar(x)


def _scalar(x):
    if isinstance(x, str):
        return parse_scalar(x, FIELD)
    return FIELD.convert(x)


def _matrix(raw, rows: int, cols: int, what: str) -> Matrix:
    if len(raw) != rows or any(len(r) != cols for r in raw):
        raise DatasetError(f"{what} must be {rows}x{cols}")
    return Matrix([[_scalar(x) for x in r] for r in raw], FIELD, cols=cols)


@dataclass(frozen=True, eq=False)
class ModularDataSet:
    irr: tuple[str, ...]
    dual: Mapping[str, str]
    cartan: Matrix
    J: tuple[str, ...]
    irrproj: tuple[str, ...]
    Btilde: Matrix
    Stilde: Matrix
    Ctilde: Matrix
    b: Mapping[str, object]
    fusion: Mapping[tuple[str, str], Mapping[str, object]]
    t0: object
    unit: str
    name: str = ""
    trace_id: Mapping[str, object] | None = None
    hopf_link_expected: Mapping[tuple[str, str], object] | None = None
    integral_fusion: bool = True

    # index helpers -------------------------------------------------------
    def i(self, label: str) -> int:
        return self.irr.index(label)

    def j(self, label: str) -> int:
        return self.J.index(label)

    def M(self, u: str, v: str) -> Mapping[str, object]:
        try:
            return self.fusion[(u, v)]
        except KeyError:
            raise DatasetError(f"missing fusion data for {u},{v}") from None

    # serialization ------------------------------------------------------
    @classmethod
    def from_json(cls, d: Mapping) -> ModularDataSet:
        try:
            irr = tuple(d["irr"])
            J = tuple(d["J"])
            irrproj = tuple(d["irrproj"])
            raw_b = d["b"]
            raw_fusion = d["fusion"]
            t0 = _scalar(d["t0"])
            dual = dict(d.get("dual") or {u: u for u in irr})
            cartan = _matrix(d["cartan"], len(irr), len(irr), "cartan")
            B = _matrix(d["Btilde"], len(irr), len(J), "Btilde")
            S = _matrix(d["Stilde"], len(J), len(J), "Stilde")
            C = _matrix(d["Ctilde"], len(J), len(J), "Ctilde")
        except KeyError as exc:
            raise DatasetError(f"missing key {exc.args[0]!r}") from None
        if len(set(irr)) != len(irr) or not set(J) <= set(irr) or not set(irrproj) <= set(J):
            raise DatasetError("labels must satisfy irrproj ⊆ J ⊆ irr without repeats")
        if set(dual) != set(irr) or any(dual[dual[u]] != u for u in irr):
            raise DatasetError("dual must be an involution on irr")
        if set(raw_b) != set(irrproj):
            raise DatasetError("b must be given exactly on irrproj")
        b = {q: _scalar(raw_b[q]) for q in irrproj}
        if any(not v for v in b.values()):
            raise DatasetError("b values must be nonzero")
        for a in J:
            for c in J:
                want = 1 if dual[a] == c else 0
                if C[J.index(a), J.index(c)] != want:
                    raise DatasetError("Ctilde must be the dual permutation restricted to J")
        integral = bool(d.get("integral_fusion", True))
        fusion: dict = {}
        for key, res in raw_fusion.items():
            u, v = (x.strip() for x in key.split(","))
            if u not in irr or v not in irr:
                raise DatasetError(f"fusion key {key!r} uses unknown labels")
            row = {}
            for w, m in res.items():
                if w not in irr:
                    raise DatasetError(f"fusion target {w!r} is not a label")
                m = _scalar(m)
                if integral and not (isinstance(m, int) and m >= 0):
                    raise DatasetError(f"fusion entry {key}->{w} is not a nonnegative integer")
                if m:
                    row[w] = m
            fusion[(u, v)] = row
        if not all(isinstance(x, int) for x in cartan.flat()):
            raise DatasetError("cartan entries must be integers")
        unit = d.get("unit", irr[0])
        if unit not in irr:
            raise DatasetError("unit must be a label in irr")
        trace_id = d.get("trace_id")
        if trace_id is not None:
            if not set(trace_id) <= set(irrproj):
                raise DatasetError("trace_id keys must lie in irrproj")
            trace_id = {q: _scalar(v) for q, v in trace_id.items()}
        expected = d.get("hopf_link_expected")
        if expected is not None:
            parsed = {}
            for key, v in expected.items():
                a, x = (s.strip() for s in key.split(","))
                if a not in J or x not in irr:
                    raise DatasetError(f"hopf_link_expected key {key!r} must be 'A,X' with A in J")
                parsed[(a, x)] = _scalar(v)
            expected = parsed
        return cls(irr, dual, cartan, J, irrproj, B, S, C, b, fusion, t0, unit,
                   d.get("name", ""), trace_id, expected, integral)

    def to_json(self) -> dict:
        d = {
            "name": self.name,
            "irr": list(self.irr),
            "dual": dict(self.dual),
            "cartan": self.cartan.to_strings(),
            "J": list(self.J),
            "irrproj": list(self.irrproj),
            "Btilde": self.Btilde.to_strings(),
            "Stilde": self.Stilde.to_strings(),
            "Ctilde": self.Ctilde.to_strings(),
            "b": {q: _s(v) for q, v in self.b.items()},
            "fusion": {f"{u},{v}": {w: _s(m) for w, m in res.items()}
                       for (u, v), res in self.fusion.items()},
            "t0": _s(self.t0),
            "unit": self.unit,
            "integral_fusion": self.integral_fusion,
        }
        if self.trace_id is not None:
            d["trace_id"] = {q: _s(v) for q, v in self.trace_id.items()}
        if self.hopf_link_expected is not None:
            d["hopf_link_expected"] = {f"{a},{x}": _s(v)
                                       for (a, x), v in self.hopf_link_expected.items()}
        return d


def load_dataset(path: str | Path) -> ModularDataSet:
    with open(path) as fh:
        try:
            return ModularDataSet.from_json(json.load(fh))
        except json.JSONDecodeError as exc:
            raise DatasetError(f"invalid JSON: {exc}") from None


# --------------------------------------------------------------------------
# shared pieces


def _bs(d: ModularDataSet) -> Matrix:
    """``B~ S~`` (Irr x J): the row of U is sigma([U]) in the phi basis."""
    return d.Btilde @ d.Stilde


def _fusion_combination(d: ModularDataSet, u: str, v: str, m: Matrix) -> list:
    """``Σ_W M_{UV}^W m[W, ·]`` for a matrix with rows indexed by irr."""
    out = [FIELD.zero] * m.cols
    for w, mult in d.M(u, v).items():
        row = m.row(d.i(w))
        for k in range(m.cols):
            out[k] = out[k] + mult * row[k]
    return out


def _section(checked: int, failures: list[dict], **extra) -> dict:
    sec = {
        "verdict": "fail" if failures else "pass",
        "checked": checked,
        "failures": len(failures),
        "witnesses": failures[:MAX_WITNESSES],
    }
    sec.update(extra)
    return sec


# --------------------------------------------------------------------------
# checks


def verlinde_check(d: ModularDataSet, s_right: Matrix | None = None) -> dict:
    """``Σ_W M_{UV}^W B~_{WX}`` against ``Σ_Q b_Q (B~S~)_{UQ}(B~S~)_{VQ}(S~C~)_{QX}``.

    ``s_right`` replaces ``S~C~`` (used by the rescaling diagnostics for the
    form with ``S~^{-1}``).
    """
    bs = _bs(d)
    right = s_right if s_right is not None else d.Stilde @ d.Ctilde
    failures = []
    checked = 0
    for u in d.irr:
        for v in d.irr:
            lhs_row = _fusion_combination(d, u, v, d.Btilde)
            for x in d.J:
                lhs = lhs_row[d.j(x)]
                rhs = FIELD.zero
                for q in d.irrproj:
                    qi = d.j(q)
                    rhs = rhs + d.b[q] * bs[d.i(u), qi] * bs[d.i(v), qi] * right[qi, d.j(x)]
                checked += 1
                if lhs != rhs:
                    failures.append({"U": u, "V": v, "X": x, "lhs": _s(lhs), "rhs": _s(rhs)})
    return _section(checked, failures)


def s_squared_check(d: ModularDataSet) -> dict:
    sq = d.Stilde @ d.Stilde
    failures = []
    for a in d.J:
        for c in d.J:
            got, want = sq[d.j(a), d.j(c)], d.Ctilde[d.j(a), d.j(c)]
            if got != want:
                failures.append({"A": a, "B": c, "lhs": _s(got), "rhs": _s(want)})
    return _section(len(d.J) ** 2, failures, square=sq.to_strings())


def _phi_vector(d: ModularDataSet, coeffs: Sequence) -> dict:
    return {a: _s(c) for a, c in zip(d.J, coeffs) if c}


def _sigma_product(d: ModularDataSet, bs: Matrix, u: str, v: str, b: Mapping) -> list:
    ru, rv = bs.row(d.i(u)), bs.row(d.i(v))
    return [
        b[a] * ru[k] * rv[k] if a in b else FIELD.zero
        for k, a in enumerate(d.J)
    ]


def product_rule_check(d: ModularDataSet) -> dict:
    """In the algebra with ``φ_A φ_B = δ_AB [A ∈ irrproj] b_A φ_A`` check
    ``σ(U)σ(V) = Σ_W M_{UV}^W σ(W)`` for all pairs."""
    return _product_rule(d, d.b)


def _product_rule(d: ModularDataSet, b: Mapping) -> dict:
    bs = _bs(d)
    failures = []
    for u in d.irr:
        for v in d.irr:
            lhs = _sigma_product(d, bs, u, v, b)
            rhs = _fusion_combination(d, u, v, bs)
            if lhs != rhs:
                failures.append({"U": u, "V": v, "lhs": _phi_vector(d, lhs),
                                 "rhs": _phi_vector(d, rhs)})
    return _section(len(d.irr) ** 2, failures)


def hopf_link_value(d: ModularDataSet, A: str, X: str, Q: str | None = None, b=None):
    """``b_Q Σ_B S~_{AB} C^_{BX} t_Q(id)`` with ``Q`` the first projective simple by default.

    ``t_Q(id)`` is ``trace_id[Q]`` when trace values are declared, else ``t0``.
    """
    if not d.irrproj:
        raise DatasetError("hopf_link_value needs a nonempty irrproj")
    q = Q if Q is not None else d.irrproj[0]
    b = d.b if b is None else b
    total = FIELD.zero
    for k, c in enumerate(d.J):
        total = total + d.Stilde[d.j(A), k] * d.cartan[d.i(c), d.i(X)]
    t_q = d.trace_id[q] if d.trace_id and q in d.trace_id else d.t0
    return b[q] * total * t_q


def hopf_link_check(d: ModularDataSet, b=None) -> dict:
    """Compare against declared expectations and test that ``b_Q t_Q(id)``
    does not depend on the reference ``Q`` (when trace values are declared)."""
    b = d.b if b is None else b
    values = {f"{a},{x}": _s(hopf_link_value(d, a, x, b=b)) for a in d.J for x in d.irr}
    failures = []
    compared = 0
    for (a, x), want in (d.hopf_link_expected or {}).items():
        got = hopf_link_value(d, a, x, b=b)
        compared += 1
        if got != want:
            failures.append({"A": a, "X": x, "lhs": _s(got), "rhs": _s(want)})
    ratios = {}
    if d.trace_id:
        ratios = {q: b[q] * t for q, t in d.trace_id.items()}
        ref = d.irrproj[0]
        if ref in ratios:
            for q, val in ratios.items():
                compared += 1
                if val != ratios[ref]:
                    failures.append({"Q": q, "lhs": _s(val), "rhs": _s(ratios[ref]),
                                     "identity": "b_Q t_Q(id) independent of Q"})
    return _section(compared, failures, reference=d.irrproj[0], values=values,
                    reference_ratios={q: _s(v) for q, v in ratios.items()})


def m1_cartan_check(d: ModularDataSet) -> dict:
    failures = []
    for u in d.irr:
        for v in d.irr:
            got = d.M(u, v).get(d.unit, FIELD.zero)
            want = d.cartan[d.i(d.dual[v]), d.i(u)]
            if got != want:
                failures.append({"U": u, "V": v, "lhs": _s(got), "rhs": _s(want)})
    return _section(len(d.irr) ** 2, failures, unit=d.unit)


def rank_check(d: ModularDataSet) -> dict:
    """rank C^ = rank B~ (independent columns) = |J| = dim of the phi span."""
    rc, rb = rank(d.cartan), rank(d.Btilde)
    failures = []
    if not rc == rb == len(d.J):
        failures.append({"lhs": str(rc), "rhs": str(rb), "J": str(len(d.J)),
                         "identity": "rank C^ = rank B~ = |J|"})
    return _section(1, failures, cartan_rank=rc, btilde_rank=rb, higman_span_dim=len(d.J))


# --------------------------------------------------------------------------
# diagnostics and rescaling


def _exchange_diagnostic(d: ModularDataSet) -> dict:
    """Pairs ``A, X ∈ J`` where the Hopf-link value is not exchange symmetric
    (``(A, X)`` versus ``(X*, A*)``).  Informational only."""
    asym = []
    for a in d.J:
        for x in d.J:
            xa, aa = d.dual[x], d.dual[a]
            if xa not in d.J or (a, x) >= (xa, aa):
                continue
            left, right = hopf_link_value(d, a, x), hopf_link_value(d, xa, aa)
            if left != right:
                asym.append({"A": a, "X": x, "value": _s(left), "exchanged": _s(right)})
    return {"hopf_link_exchange_asymmetric": asym}


def rescale_solver(d: ModularDataSet) -> dict:
    """Solve for a single multiplier ``μ`` on all ``b_Q`` making the product rule hold.

    Each (U, V, B) gives ``μ·a = p`` with ``a = [B ∈ irrproj] b_B r_UB r_VB`` and
    ``p = Σ_W M_{UV}^W r_WB``.  Reports the solution or an inconsistent pair of
    constraints, then re-runs every section under the rescaled ``b``.
    """
    bs = _bs(d)
    mu = None
    first = None
    for u in d.irr:
        for v in d.irr:
            coeff = _sigma_product(d, bs, u, v, d.b)
            target = _fusion_combination(d, u, v, bs)
            for k, c in enumerate(d.J):
                a, p = coeff[k], target[k]
                here = {"U": u, "V": v, "B": c, "coefficient": _s(a), "value": _s(p)}
                if not a:
                    if p:
                        return {"solvable": False, "reason": "constraint independent of b fails",
                                "inconsistent": [here]}
                    continue
                cand = p / a
                if mu is None:
                    mu, first = cand, here
                elif cand != mu:
                    return {"solvable": False, "reason": "multipliers disagree",
                            "inconsistent": [first, here]}
    if mu is None:
        return {"solvable": False, "reason": "no constraint involves b", "inconsistent": []}
    if not mu:
        return {"solvable": False, "reason": "multiplier forced to zero", "inconsistent": [first]}
    b2 = {q: mu * v for q, v in d.b.items()}
    d2 = replace(d, b=b2)
    rerun = {
        "s_squared": s_squared_check(d2)["verdict"],
        "product_rule": product_rule_check(d2)["verdict"],
        "verlinde": verlinde_check(d2)["verdict"],
        "hopf_link": hopf_link_check(d2)["verdict"],
        "m1_cartan": m1_cartan_check(d2)["verdict"],
        "rank": rank_check(d2)["verdict"],
    }
    try:
        inv_form = verlinde_check(d2, s_right=inverse(d.Stilde))["verdict"]
    except ValueError:
        inv_form = "singular"
    before = full_audit(d, rescale=False)["verdicts"]
    conflicts = []
    for (a, x), want in (d.hopf_link_expected or {}).items():
        got = hopf_link_value(d, a, x, b=b2)
        if got != want:
            conflicts.append({"A": a, "X": x, "rescaled": _s(got), "expected": _s(want)})
    return {
        "solvable": True,
        "multiplier": _s(mu),
        "rescaled_b": {q: _s(v) for q, v in b2.items()},
        "rerun": rerun,
        "verlinde_inverse_form": inv_form,
        "became_consistent": [s for s in SECTIONS if before[s] == "fail" and rerun[s] == "pass"],
        "broke": [s for s in SECTIONS if before[s] == "pass" and rerun[s] == "fail"],
        "hopf_link_conflicts": conflicts,
    }


def full_audit(d: ModularDataSet, rescale: bool = True) -> dict:
    """All sections plus (when an identity fails) the separated rescaling block."""
    sections = {
        "s_squared": s_squared_check(d),
        "product_rule": product_rule_check(d),
        "verlinde": verlinde_check(d),
        "hopf_link": hopf_link_check(d) if d.irrproj else _section(0, []),
        "m1_cartan": m1_cartan_check(d),
        "rank": rank_check(d),
    }
    verdicts = {k: sections[k]["verdict"] for k in SECTIONS}
    report = {
        "dataset": d.name,
        "sections": sections,
        "verdicts": verdicts,
        "summary": {
            "passed": sum(v == "pass" for v in verdicts.values()),
            "failed": sum(v == "fail" for v in verdicts.values()),
            "all_pass": all(v == "pass" for v in verdicts.values()),
        },
    }
    if d.irrproj:
        report["diagnostics"] = _exchange_diagnostic(d)
    if rescale and "fail" in (verdicts["product_rule"], verdicts["verlinde"]):
        report["rescale"] = rescale_solver(d)
    return report


# --------------------------------------------------------------------------
# datasets


def toric_code_dataset(t0="1") -> dict:
    """Z/2 x Z/2 fusion with S~ = (1/2)(±1), B~ = C~ = C^ = identity and b_Q = 2.

    Hopf-link expectations come from the bilinear form ``(-1)^{a1 b2 + a2 b1}``
    on labels 1=(0,0), e=(1,0), m=(0,1), f=(1,1).
    """
    labels = ("1", "e", "m", "f")
    coords = {"1": (0, 0), "e": (1, 0), "m": (0, 1), "f": (1, 1)}
    by_coord = {v: k for k, v in coords.items()}

    def pairing(x, y):
        (a1, a2), (b1, b2) = coords[x], coords[y]
        return -1 if (a1 * b2 + a2 * b1) % 2 else 1

    half = Fraction(1, 2)
    ident = [["1" if i == j else "0" for j in range(4)] for i in range(4)]
    fusion = {}
    for u in labels:
        for v in labels:
            w = by_coord[tuple((p + q) % 2 for p, q in zip(coords[u], coords[v]))]
            fusion[f"{u},{v}"] = {w: 1}
    t = _scalar(t0)
    return {
        "name": "toric code",
        "irr": list(labels),
        "dual": {u: u for u in labels},
        "cartan": ident,
        "J": list(labels),
        "irrproj": list(labels),
        "Btilde": ident,
        "Stilde": [[_s(half * pairing(x, y)) for y in labels] for x in labels],
        "Ctilde": ident,
        "b": {u: "2" for u in labels},
        "fusion": fusion,
        "t0": _s(t),
        "unit": "1",
        "trace_id": {u: _s(t) for u in labels},
        "hopf_link_expected": {f"{x},{y}": _s(pairing(x, y) * t) for x in labels for y in labels},
    }


def _unimodular(rng: random.Random, n: int) -> Matrix:
    low = [[1 if i == j else (rng.randint(-2, 2) if i > j else 0) for j in range(n)] for i in range(n)]
    up = [[1 if i == j else (rng.randint(-2, 2) if i < j else 0) for j in range(n)] for i in range(n)]
    return Matrix(low, FIELD) @ Matrix(up, FIELD)


def synthetic_dataset(seed: int) -> dict:
    """A dataset built to satisfy ``S~² = C~`` and the product rule.

    ``S~ = P D P^{-1}`` with ``D = diag(±1)`` and ``C~ = 1``; ``b`` is random and
    nonzero on a random nonempty ``irrproj``; fusion into labels outside ``J`` is
    random and the coefficients on ``J`` are then solved from the product rule,
    so they are rational in general (flagged by ``integral_fusion = false``).
    """
    rng = random.Random(seed)
    nj = rng.randint(1, 4)
    extra = rng.randint(0, 2)
    J = [f"A{k}" for k in range(nj)]
    irr = J + [f"X{k}" for k in range(extra)]
    P = _unimodular(rng, nj)
    D = Matrix([[rng.choice((1, -1)) if i == j else 0 for j in range(nj)] for i in range(nj)], FIELD)
    S = P @ D @ inverse(P)
    irrproj = [a for a in J if rng.random() < 0.6] or [rng.choice(J)]
    b = {q: Fraction(rng.choice((-1, 1)) * rng.randint(1, 5), rng.randint(1, 4)) for q in irrproj}
    brows = [[1 if k == i else 0 for k in range(nj)] for i in range(nj)]
    brows += [[rng.randint(-1, 2) for _ in range(nj)] for _ in range(extra)]
    B = Matrix(brows, FIELD)
    R = B @ S
    s_inv = inverse(S)
    fusion = {}
    for ui, u in enumerate(irr):
        for vi, v in enumerate(irr):
            ext = {x: rng.randint(0, 2) for x in irr[nj:]}
            target = [b[a] * R[ui, k] * R[vi, k] if a in b else 0 for k, a in enumerate(J)]
            for x, m in ext.items():
                row = R.row(irr.index(x))
                target = [t - m * r for t, r in zip(target, row)]
            mj = Matrix([target], FIELD) @ s_inv
            res = {a: _s(mj[0, k]) for k, a in enumerate(J) if mj[0, k]}
            res.update({x: str(m) for x, m in ext.items() if m})
            fusion[f"{u},{v}"] = res
    ident = [["1" if i == j else "0" for j in range(len(irr))] for i in range(len(irr))]
    return {
        "name": f"synthetic seed {seed}",
        "irr": irr,
        "dual": {u: u for u in irr},
        "cartan": ident,
        "J": J,
        "irrproj": irrproj,
        "Btilde": B.to_strings(),
        "Stilde": S.to_strings(),
        "Ctilde": Matrix.identity(nj, FIELD).to_strings(),
        "b": {q: _s(v) for q, v in b.items()},
        "fusion": fusion,
        "t0": "1",
        "unit": irr[0],
        "integral_fusion": False,
    }
