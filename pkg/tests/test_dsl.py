from fractions import Fraction

import pytest

import oracles
from qbailey import BiSeries, corpus
from qbailey.bailey import FamilyParams, q_direct
from qbailey.dsl import (
    BaileyDoc,
    IdentityDoc,
    eval_expr,
    format_doc,
    format_expr,
    parse,
    parse_expr,
    verify,
)
from qbailey.dsl.ast import Literal, Monomial, PochFactor, Sum, TripleProd, uses_a
from qbailey.dsl.poly import Poly
from qbailey.errors import (
    BadParameters,
    DSLSyntaxError,
    DuplicateName,
    NonIntegerExponent,
    UnboundVariable,
)

RR1 = """
identity rr1 mod 5 family 1 1 2 2 {
  lhs = sum(n>=0) { q^(n^2) / poch(q; q; n) };
  rhs = triple(2, 5) / poch(q; q; inf);
}
"""


# -- polynomials ----------------------------------------------------------------

def test_poly_arithmetic_and_printing():
    n, r = Poly.var("n"), Poly.var("r")
    p = n * n * Poly.const(Fraction(5, 2)) + n * r * Poly.const(4) - Poly.const(1)
    assert p.degree == 2
    assert str(p) == "5/2*n^2 + 4*n*r - 1"
    assert p.evaluate({"n": 1, "r": 2}) == Fraction(19, 2)
    with pytest.raises(NonIntegerExponent):
        p.evaluate_int({"n": 1, "r": 0})


# -- parsing ----------------------------------------------------------------------

def test_trivial_identity():
    (doc,) = parse("identity t { lhs = 1; rhs = 1; }")
    assert doc.name == "t"
    assert doc.lhs == Literal(1) and doc.rhs == Literal(1)
    assert doc.params is None and doc.default_order == 50


def test_rr1_structure():
    (doc,) = parse(RR1)
    assert doc.modulus == 5 and doc.member == 2
    assert doc.params == FamilyParams(1, 1, 2)
    assert isinstance(doc.lhs, Sum) and doc.lhs.bounds == (("n", 0),)
    body = doc.lhs.body
    assert body.left == Monomial(q_exp=Poly.var("n") * Poly.var("n"))
    assert body.right == PochFactor(1, 0, Poly.const(1), 1, Poly.var("n"))
    assert doc.rhs.left == TripleProd(2, 5)


def test_header_options():
    (doc,) = parse("identity x order 30 mod 7 { lhs = q; rhs = q^1; }")
    assert doc.default_order == 30 and doc.modulus == 7


def test_comments_and_whitespace():
    text = "# leading\nidentity c { # here\n lhs = 1 ;\n\n rhs=1;}  # trailing"
    assert len(parse(text)) == 1


def test_unbound_variable():
    with pytest.raises(UnboundVariable):
        parse("identity u { lhs = q^(n); rhs = 1; }")
    with pytest.raises(UnboundVariable):
        parse_expr("poch(q; q; m)")


def test_duplicate_name():
    with pytest.raises(DuplicateName):
        parse("identity d { lhs = 1; rhs = 1; } identity d { lhs = 1; rhs = 1; }")


@pytest.mark.parametrize(
    "text, line, col",
    [
        ("identity e { lhs = 1 rhs = 1; }", 1, 22),
        ("identity e {\n  lhs = poch(q; q);\n  rhs = 1; }", 2, 18),
        ("identity e { lhs = triple(5, 5); rhs = 1; }", 1, 32),
        ("identity e { lhs = 1; rhs = 1; } garbage", 1, 34),
        ("identity e { lhs = 1 $ 2; rhs = 1; }", 1, 22),
    ],
)
def test_syntax_errors_carry_position(text, line, col):
    with pytest.raises(DSLSyntaxError) as info:
        parse(text)
    assert (info.value.line, info.value.column) == (line, col)


def test_exponent_degree_limit():
    with pytest.raises(DSLSyntaxError):
        parse_expr("sum(n>=0) { q^(n^3) }")


def test_pochhammer_length_must_be_integral_linear():
    with pytest.raises(DSLSyntaxError):
        parse_expr("sum(n>=0) { poch(q; q; n/2) }")
    with pytest.raises(DSLSyntaxError):
        parse_expr("sum(n>=0) { poch(q; q; n^2) }")


def test_family_member_range_checked():
    with pytest.raises(DSLSyntaxError):
        parse("identity f family 1 2 4 6 { lhs = 1; rhs = 1; }")


def test_bailey_doc():
    (doc,) = parse("bailey b family 1 1 2 { beta(n) = 1 / poch(q; q; n); }")
    assert isinstance(doc, BaileyDoc)
    assert doc.var == "n" and doc.params == FamilyParams(1, 1, 2)


def test_uses_a():
    assert uses_a(parse_expr("poch(a*q; q; inf)"))
    assert not uses_a(parse_expr("poch(-q^2; q^2; inf)"))


# -- printer ----------------------------------------------------------------------

@pytest.mark.parametrize(
    "text",
    [
        "1 - 2 - 3",
        "1 - (2 - 3)",
        "2 * (3 + q)",
        "q / (q * q)",
        "-q * q",
        "-(q * q)",
        "1 - -q",
        "poch(-a^2*q^2; q^2; inf)",
        "sum(n>=0, r>=1) { (-1)^(n + r) * a^(2*n) * q^(5/2*n^2 - 1/2*n) / poch(a*q; q; 2*n - r) }",
    ],
)
def test_expression_round_trip(text):
    node = parse_expr(text)
    assert parse_expr(format_expr(node)) == node


def test_corpus_round_trip():
    for f in corpus.FILES:
        for doc in corpus.load(f):
            assert parse(format_doc(doc)) == [doc]


# -- evaluation ---------------------------------------------------------------------

def test_literal():
    assert eval_expr(Literal(1), 5) == BiSeries.one(5)


def test_rr1_sum_counts_gap_partitions():
    (doc,) = parse(RR1)
    N = 40
    assert eval_expr(doc.lhs, N).q_coeffs() == oracles.difference_two_partitions(N)


def test_partition_function():
    s = eval_expr(parse_expr("1/poch(q;q;inf)"), 30)
    assert s.q_coeffs() == oracles.partitions_with_parts(30, lambda part: True)


def test_fractional_exponent_rejected():
    with pytest.raises(NonIntegerExponent):
        eval_expr(parse_expr("q^(1/2)"), 5)
    with pytest.raises(NonIntegerExponent):
        eval_expr(parse_expr("sum(n>=0) { q^(1/2*n^2) }"), 5)


def test_half_integer_forms_that_are_integral():
    s = eval_expr(parse_expr("sum(n>=0) { q^(5/2*n^2 + 3/2*n) }"), 30)
    assert s.terms == {(0, 0): 1, (0, 4): 1, (0, 13): 1, (0, 27): 1}


def test_negative_length_reciprocal_vanishes():
    # 1/(q;q)_{n-r} kills r > n, so this sum over r has n + 1 terms
    s = eval_expr(parse_expr("sum(r>=0) { 1 / poch(q; q; 3 - r) }"), 10)
    ref = BiSeries.zero(10)
    for r in range(4):
        ref = ref + eval_expr(parse_expr(f"1 / poch(q; q; {3 - r})"), 10)
    assert s == ref


def test_negative_length_convention():
    # (x; q)_{-1} = 1 / (1 - x q^{-1}) with x = q^2 gives 1/(1 - q)
    s = eval_expr(parse_expr("poch(q^2; q; 0 - 1)"), 8)
    assert s.q_coeffs() == [1] * 9


def test_laurent_intermediates_cancel():
    doc = [d for d in corpus.load("family_2_2_3.qs") if d.name.endswith("member_3")][0]
    s = eval_expr(doc.lhs, 30)
    assert s.min_q == 0 and s.N == 30


def test_division_by_sum_rejected():
    with pytest.raises(BadParameters):
        eval_expr(parse_expr("1 / (1 + q + q^2 + poch(q; q; inf))"), 5)


def test_bivariate_expansion():
    s = eval_expr(parse_expr("1 / poch(a*q; q; inf)"), 6, 3)
    assert s[1, 1] == 1 and s[2, 3] == 1 and s[3, 6] == 3
    assert s.a_overflow


# -- verification -------------------------------------------------------------------

def test_verify_rr1():
    (doc,) = parse(RR1)
    rep = verify(doc, 50)
    assert rep.verdict == "equal" and rep.integral
    assert rep.to_dict()["verdict"] == "equal"


def test_verify_a_generalization():
    doc = [d for d in corpus.identities() if d.name == "a_rogers_ramanujan_2"][0]
    assert doc.bivariate
    rep = verify(doc, 30, 30)
    assert rep.passed and rep.M == 30


def test_verify_perturbed_kernel():
    (doc,) = parse(RR1.replace("q^(n^2)", "q^(n^2 + 1)"))
    rep = verify(doc, 50)
    assert rep.verdict == "mismatch"
    assert rep.mismatch["q_exponent"] == 0


def test_verify_negative_order_is_error():
    (doc,) = parse("identity neg { lhs = q^(0 - 1); rhs = q^(0 - 1); }")
    rep = verify(doc, 10)
    assert rep.verdict == "error"
    assert rep.error["kind"] == "NegativeExponent"


def test_verify_wraps_evaluator_errors():
    (doc,) = parse("identity bad { lhs = q^(1/2); rhs = 1; }")
    rep = verify(doc, 10)
    assert rep.verdict == "error" and rep.error["kind"] == "NonIntegerExponent"


def test_manifest_shape():
    m = corpus.manifest()
    assert len(m) == 42
    counts = {}
    for e in m:
        if e.family and e.family[:3] != (1, 1, 2):
            counts.setdefault(e.family[:3], set()).add(e.family[3])
            assert corpus.FAMILY_SIZES[e.family[:3]][1] == e.modulus
    for fam, (size, _) in corpus.FAMILY_SIZES.items():
        assert counts[fam] == set(range(1, size + 1))
    assert sum(e.bivariate for e in m) == 2
    assert len(corpus.bailey_forms()) == 8


@pytest.mark.parametrize("doc", [d for d in corpus.identities() if d.params is not None], ids=lambda d: d.name)
def test_corpus_lhs_agrees_with_engine(doc):
    # the family series at a = 1, in the family's own q
    N = 30
    k = doc.q_scale
    family = q_direct(doc.params, doc.member, N, N).eval_a(1)
    lhs = eval_expr(doc.lhs, N // k).dilate_q(k)
    assert family.first_mismatch(lhs, N) is None
