import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from telesigma import CurveSpec
from telesigma.curve import (CurveSpecError, build_equations, check_nonsingular,
                             jacobian_minors, normal_form, order_at_infinity,
                             random_order_normal_form, valuation_at_infinity)
from telesigma.polyring import NEG_INF, LambdaKey
from telesigma.semigroup import SequenceError, TelescopicSequence, basis_B, in_basis

from conftest import hyperelliptic

SEQ465 = TelescopicSequence((4, 6, 5))


def test_example_two_supports():
    eqs = build_equations(CurveSpec(SEQ465))
    R = eqs.ring
    F2, F3 = (R.to_text(f) for f in eqs.F)
    assert F2 == ("X2^2 - X1^3 - X2*X3*l2_0,1,1 - X1*X2*l2_1,1,0 - X1*X3*l2_1,0,1"
                  " - X1^2*l2_2,0,0 - X2*l2_0,1,0 - X3*l2_0,0,1 - X1*l2_1,0,0 - l2_0,0,0")
    assert F3 == ("X3^2 - X1*X2 - X1*X3*l3_1,0,1 - X1^2*l3_2,0,0 - X2*l3_0,1,0"
                  " - X3*l3_0,0,1 - X1*l3_1,0,0 - l3_0,0,0")


@pytest.mark.parametrize("n, s", [(2, 3), (2, 5), (3, 4), (3, 5), (4, 7)])
def test_ns_curve_shape(n, s):
    seq = TelescopicSequence((n, s))
    (F,) = build_equations(CurveSpec(seq)).F
    R = CurveSpec(seq).ring
    expected = R.X(2) ** n - R.X(1) ** s
    for j1 in range(s):
        for j2 in range(n):
            if n * j1 + s * j2 < n * s:
                expected -= R.lam(LambdaKey(2, (j1, j2))) * R.monomial((j1, j2))
    assert F == expected
    assert R.weighted_degree(F) == (n * s, True)


def test_concrete_substitution(elliptic_square):
    (F,) = build_equations(elliptic_square).F
    assert elliptic_square.ring.to_text(F) == "X2^2 - X1^3 + X1"


def test_jacobian_minors():
    spec = CurveSpec(TelescopicSequence((2, 3)), {}, "zero")
    eqs = build_equations(spec)
    R = eqs.ring
    G, minors = jacobian_minors(eqs)
    assert G == [[-3 * R.X(1) ** 2, 2 * R.X(2)]]
    assert eqs.det_G[0] == 2 * R.X(2)
    G, minors = jacobian_minors(build_equations(CurveSpec(SEQ465)))
    assert len(G) == 2 and all(len(r) == 3 for r in G)
    assert minors[0] == [row[1:] for row in G]


def test_normal_form_examples():
    spec = CurveSpec(TelescopicSequence((2, 3)))
    eqs = build_equations(spec)
    R = eqs.ring
    lam = {k.j: R.lam(k) for k in R.keys}
    expected = (R.X(1) ** 3 + lam[(1, 1)] * R.X(1) * R.X(2) + lam[(2, 0)] * R.X(1) ** 2
                + lam[(0, 1)] * R.X(2) + lam[(1, 0)] * R.X(1) + lam[(0, 0)])
    assert normal_form(R.X(2) ** 2, eqs) == expected
    p = R.X(1) ** 4 * R.X(2) + 3 * R.X(1)
    assert normal_form(p, eqs) == p


def _random_lambda_spec(seq, rng):
    keys = CurveSpec(seq).ring.keys
    vals = {k: Fraction(rng.randint(-5, 5), rng.randint(1, 3)) for k in keys}
    return CurveSpec(seq, vals)


def _random_x_poly(R, seq, rng, terms=4, top=3):
    p = R.zero
    for _ in range(terms):
        exp = tuple(rng.randint(0, top) for _ in range(seq.t))
        p += R.const(Fraction(rng.randint(-9, 9), rng.randint(1, 4))) * R.monomial(exp)
    return p


def test_confluence_cubic_example():
    rng = random.Random(1)
    eqs = build_equations(_random_lambda_spec(SEQ465, rng))
    R = eqs.ring
    p = R.X(3) ** 2 * R.X(3)
    assert normal_form(p, eqs) == random_order_normal_form(p, eqs, rng)


@pytest.mark.parametrize("a", [(2, 3), (3, 4), (4, 6, 5)])
def test_confluence_symbolic_lambda(a):
    rng = random.Random(7)
    seq = TelescopicSequence(a)
    eqs = build_equations(CurveSpec(seq))
    for _ in range(15):
        p = _random_x_poly(eqs.ring, seq, rng, top=2)
        assert normal_form(p, eqs) == random_order_normal_form(p, eqs, rng)


@pytest.mark.parametrize("a", [(2, 3), (2, 5), (3, 4), (4, 6, 5)])
def test_normal_form_idempotent_linear_supported(a):
    rng = random.Random(3)
    seq = TelescopicSequence(a)
    eqs = build_equations(_random_lambda_spec(seq, rng))
    R = eqs.ring
    for _ in range(20):
        p, q = _random_x_poly(R, seq, rng), _random_x_poly(R, seq, rng)
        c = R.const(Fraction(rng.randint(-4, 4), 3))
        np_ = normal_form(p, eqs)
        assert normal_form(np_, eqs) == np_
        assert normal_form(p + c * q, eqs) == np_ + c * normal_form(q, eqs)
        assert all(in_basis(seq, R.x_exp(m)) for m in np_.itermonoms())


def test_order_examples():
    rng = random.Random(11)
    eqs = build_equations(_random_lambda_spec(SEQ465, rng))
    R = eqs.ring
    for k in range(1, 4):
        assert order_at_infinity(R.X(k), eqs) == SEQ465.a[k - 1]
        assert valuation_at_infinity(R.X(k), eqs) == -SEQ465.a[k - 1]
    assert order_at_infinity(R.const(5), eqs) == 0
    assert order_at_infinity(R.zero, eqs) == NEG_INF
    for _ in range(50):
        T = tuple(rng.randint(0, 4) for _ in range(3))
        assert order_at_infinity(R.monomial(T), eqs) == SEQ465.psi(T)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_order_is_additive(seed):
    rng = random.Random(seed)
    eqs = build_equations(_random_lambda_spec(SEQ465, random.Random(99)))
    R = eqs.ring
    p = normal_form(_random_x_poly(R, SEQ465, rng, 3, 2), eqs)
    q = normal_form(_random_x_poly(R, SEQ465, rng, 3, 2), eqs)
    op, oq = order_at_infinity(p, eqs), order_at_infinity(q, eqs)
    assert order_at_infinity(p * q, eqs) == op + oq
    assert order_at_infinity(p + q, eqs) <= max(op, oq)


def test_leading_monomials_are_pure_powers():
    for a in [(2, 3), (4, 6, 5), (6, 10, 15), (4, 6, 10, 15)]:
        try:
            seq = TelescopicSequence(a)
        except SequenceError:
            continue
        eqs = build_equations(CurveSpec(seq))
        vars_used = [next(k for k, e in enumerate(v) if e) for v in eqs.leading]
        assert all(sum(1 for e in v if e) == 1 for v in eqs.leading)
        assert len(set(vars_used)) == len(vars_used)


def test_nonsingular_examples(elliptic_square, genus_two):
    assert check_nonsingular(elliptic_square).nonsingular
    assert check_nonsingular(genus_two).nonsingular
    rep = check_nonsingular(CurveSpec(TelescopicSequence((2, 3)), {}, "zero"))
    assert not rep.nonsingular
    assert rep.witness == (0, 0)


def test_nonsingular_space_curve():
    rep = check_nonsingular(CurveSpec(SEQ465, {}, "zero"))
    assert not rep.nonsingular and rep.witness == (0, 0, 0)
    # X2^2 = X1^3 + 1, X3^2 = X1 X2 + X1: singular at (0, -1, 0)
    lam = {LambdaKey(2, (0, 0, 0)): Fraction(1), LambdaKey(3, (1, 0, 0)): Fraction(1)}
    rep = check_nonsingular(CurveSpec(SEQ465, lam, "zero"))
    assert not rep.nonsingular and rep.witness == (0, -1, 0)
    # adding 2 to F3: a singular point needs x3 = 0, which forces both
    # x1^4 = 4/5 and x1^3 = -16/25, impossible
    lam[LambdaKey(3, (0, 0, 0))] = Fraction(2)
    assert check_nonsingular(CurveSpec(SEQ465, lam, "zero")).nonsingular
    with pytest.raises(CurveSpecError):
        check_nonsingular(CurveSpec(SEQ465))


@pytest.mark.parametrize("text, fragment", [
    ('{"sequence": [2, 3], "bogus": 1}', "unknown keys"),
    ('{"lambda": {}}', "sequence"),
    ('{"sequence": [2, 3], "lambda": {"2:5,0": "1"}}', "inadmissible"),
    ('{"sequence": [2, 3], "lambda": {"2:1,0": "x"}}', "bad lambda"),
    ('{"sequence": [2, "3"]}', "integers"),
    ('{"sequence": [2, 3],\n  "lambda": }', "line 2"),
])
def test_spec_json_errors(text, fragment):
    with pytest.raises(CurveSpecError, match=fragment):
        CurveSpec.from_json(text)


def test_spec_json_non_telescopic():
    with pytest.raises(SequenceError, match="index 3"):
        CurveSpec.from_json('{"sequence": [3, 4, 5]}')


def test_spec_round_trip():
    spec = hyperelliptic(5)
    assert CurveSpec.from_dict(spec.to_dict()) == spec
    assert not spec.symbolic
    assert CurveSpec(SEQ465).symbolic
    assert basis_B(SEQ465, 0) == [(0, 0, 0)]
