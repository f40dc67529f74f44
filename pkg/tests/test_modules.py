from fractions import Fraction
import random

import pytest
import sympy

from loopsv.elements import BasisId, Combination, G, L
from loopsv.modules import (
    FamilyTag, MissingPattern, ModuleError, NoMatch, OutOfWindow, Pattern, WindowRequired, act,
    check_module_axioms, classify_clv, classify_rank2, make_clv, make_module, mutate,
    rescale_odd, restrict_to_clv, table_module,
)
from loopsv.poly import A, B, C, D, LAM, MU, ONE, ZeroParameterC

HALF = Fraction(1, 2)
X, Y = BasisId("x"), BasisId("y")


def xg(j):
    return BasisId("x", j)


def yg(j):
    return BasisId("y", j)


# -- constructors ---------------------------------------------------------------

def test_ungraded_m_action():
    spec = make_module(FamilyTag("M", a=A, b=B, c=C))
    assert spec.entry(G(0), X) == (Y, ONE)
    assert spec.entry(L(2), Y) == (Y, C**2 * (D + (A + HALF) * LAM + B))
    assert spec.entry(G(-1), Y) == (X, C**-1 * (D + 2 * A * LAM + B))


def test_ma_entry_for_pattern_01():
    spec = make_module(FamilyTag("MA", b=B, pattern=Pattern(0, (0, 1))))
    assert spec.entry(L(1), yg(0)) == (yg(1), ONE)
    assert spec.entry(L(-1), yg(1)) == (yg(0), (D + B) * (D + LAM + B))


def test_constant_zero_pattern_is_v0():
    va = make_clv(FamilyTag("VA", b=B, pattern=Pattern(-2, (0, 0, 0, 0))))
    v0 = make_clv(FamilyTag("V", a=0, b=B), window=(-2, 1))
    assert all(va.entry(t - j, j) == v0.entry(t - j, j)
               for j in range(-2, 2) for t in range(-2, 2))


def test_windows_are_enforced():
    spec = make_module(FamilyTag("MA", b=2, pattern=Pattern(0, (0, 1, 1))))
    with pytest.raises(OutOfWindow):
        spec.entry(L(1), xg(2))
    graded = make_module(FamilyTag("Mg", a=1, b=2))
    with pytest.raises(WindowRequired):
        graded.basis()
    with pytest.raises(ModuleError):
        graded.entry(L(0), X)


def test_tag_validation():
    with pytest.raises(MissingPattern):
        FamilyTag("MA", b=1)
    with pytest.raises(ModuleError):
        FamilyTag("M", a=1, b=1)
    with pytest.raises(ZeroParameterC):
        FamilyTag("M", a=1, b=1, c=0)
    with pytest.raises(ModuleError):
        FamilyTag("Mg", a=1, b=1, pattern=Pattern(0, (1,)))
    with pytest.raises(ValueError):
        Pattern.from_string("012")


# -- action -----------------------------------------------------------------------

def test_act_examples():
    m = make_module(FamilyTag("M", a=A, b=B, c=C))
    v = Combination({Y: D + B})
    assert act(m, G(1), v) == Combination({X: C * (D + LAM + B) * (D + 2 * A * LAM + B)})
    mp = make_module(FamilyTag("Mprime", a=HALF, b=B, c=C))
    assert act(mp, G(0), v) == Combination({X: D + LAM + B})
    vab = make_clv(FamilyTag("V", a=A, b=B), window=(0, 5))
    assert vab.entry(0, 3) == D + A * LAM + B


def test_act_rejects_variable_collision():
    m = make_module(FamilyTag("M", a=1, b=1, c=1))
    with pytest.raises(ModuleError):
        act(m, L(0), Combination({X: LAM}))


# -- axioms -----------------------------------------------------------------------

def test_g0_g0_on_x_by_hand():
    m = make_module(FamilyTag("M", a=A, b=B, c=C))
    inner = act(m, G(0), act(m, G(0), X, MU), LAM)
    assert inner == Combination({X: D + 2 * A * LAM + B})



@pytest.mark.parametrize("family", ["M", "Mprime"])
def test_ungraded_axioms_symbolic(family):
    report = check_module_axioms(make_module(FamilyTag(family, a=A, b=B, c=C)), (-1, 1))
    assert report.ok and report.checked == 72


def test_mutated_table_fails():
    m = make_module(FamilyTag("M", a=A, b=B, c=C))
    bad = mutate(m, "G", "y", lambda g, v, p: C**g.grade * (D + 2 * A * LAM - B))
    report = check_module_axioms(bad, (0, 0))
    assert not report.ok


def test_graded_axioms_count_skips():
    spec = make_module(FamilyTag("MAprime", b=2, pattern=Pattern(-2, (0, 1, 1, 0))))
    report = check_module_axioms(spec)
    assert report.ok and report.skipped > 0


def _sympy_residual(polys, k1, i1, k2, i2, vkind):
    """Module identity for an ungraded table, written out independently in sympy."""
    d, l, m, c = sympy.symbols("d l m c")
    br = {("L", "L"): (lambda dd, ll: dd + 2 * ll, "L"),
          ("L", "G"): (lambda dd, ll: dd + sympy.Rational(3, 2) * ll, "G"),
          ("G", "L"): (lambda dd, ll: dd / 2 + sympy.Rational(3, 2) * ll, "G"),
          ("G", "G"): (lambda dd, ll: 2, "L")}

    def flip(gk, vk):
        return vk if gk == "L" else ("y" if vk == "x" else "x")

    def action(gk, i, vk, dd, ll):
        return c**i * polys[gk, vk](dd, ll), flip(gk, vk)

    f, kind = br[k1, k2]
    t1, w1 = action(kind, i1 + i2, vkind, d, l + m)
    lhs = {w1: f(-l - m, l) * t1}
    sgn = -1 if (k1 == "G" and k2 == "G") else 1
    inner2, w2 = action(k2, i2, vkind, d, m)
    out1, w3 = action(k1, i1, w2, d, l)
    inner1, w4 = action(k1, i1, vkind, d, l)
    out2, w5 = action(k2, i2, w4, d, m)
    res = dict(lhs)
    res[w3] = res.get(w3, 0) - inner2.subs(d, d + l) * out1
    res[w5] = res.get(w5, 0) + sgn * inner1.subs(d, d + m) * out2
    return [sympy.expand(v) for v in res.values()]


def test_module_tables_against_sympy_oracle():
    a, b = sympy.symbols("a b")
    half = sympy.Rational(1, 2)
    tables = {
        "M": {("L", "x"): lambda dd, ll: dd + a * ll + b,
              ("L", "y"): lambda dd, ll: dd + (a + half) * ll + b,
              ("G", "x"): lambda dd, ll: sympy.Integer(1),
              ("G", "y"): lambda dd, ll: dd + 2 * a * ll + b},
        "Mprime": {("L", "x"): lambda dd, ll: dd + a * ll + b,
                   ("L", "y"): lambda dd, ll: dd + (a - half) * ll + b,
                   ("G", "x"): lambda dd, ll: dd + (2 * a - 1) * ll + b,
                   ("G", "y"): lambda dd, ll: sympy.Integer(1)},
    }
    for name, polys in tables.items():
        for k1 in "LG":
            for k2 in "LG":
                for v in "xy":
                    res = _sympy_residual(polys, k1, 1, k2, -2, v)
                    assert not any(res), (name, k1, k2, v)
    # and a wrong table is caught by the same oracle
    bad = dict(tables["M"])
    bad["G", "y"] = lambda dd, ll: dd + a * ll + b
    assert any(_sympy_residual(bad, "G", 0, "G", 0, "x"))


# -- restriction and classification -------------------------------------------------

def test_restrictions():
    m = make_module(FamilyTag("M", a=A, b=B, c=C))
    even = restrict_to_clv(m, 0)
    assert even.entry(3, None) == C**3 * (D + A * LAM + B)
    mg = make_module(FamilyTag("Mg", a=2, b=1))
    odd = classify_clv(restrict_to_clv(mg, 1, (-2, 2)))
    assert odd == FamilyTag("V", a=Fraction(3, 2), b=1)
    pat = Pattern(-1, (0, 1, 1))
    even_a = classify_clv(restrict_to_clv(make_module(FamilyTag("MAprime", b=2, pattern=pat)), 0))
    assert even_a == FamilyTag("VA", b=2, pattern=pat)


@pytest.mark.parametrize("tag", [
    FamilyTag("Mprime", a=3, b=HALF, c=2),
    FamilyTag("M", a=0, b=B, c=C),
    FamilyTag("M", a=A, b=B, c=C),
    FamilyTag("Mg", a=Fraction(1, 3), b=2),
    FamilyTag("Mgprime", a=A, b=B),
    FamilyTag("MA", b=1, pattern=Pattern(-2, (0, 1, 1, 0))),
    FamilyTag("MAprime", b=1, pattern=Pattern(-1, (1, 0, 0, 1))),
])
def test_classify_roundtrip(tag):
    spec = make_module(tag)
    assert classify_rank2(spec) == tag
    assert classify_rank2(rescale_odd(spec, 5)) == tag


def test_m_and_mprime_never_confused():
    rng = random.Random(3)
    for _ in range(5):
        a, b, c = (Fraction(rng.randint(-4, 4), rng.randint(1, 3)) for _ in range(3))
        c = c or 1
        for fam, other in (("M", "Mprime"), ("Mprime", "M")):
            got = classify_rank2(make_module(FamilyTag(fam, a=a, b=b, c=c)))
            assert got.family == fam != other


def test_classify_untagged_table():
    table = table_module({("L", "x"): D + 3 * LAM + HALF,
                          ("L", "y"): D + Fraction(5, 2) * LAM + HALF,
                          ("G", "x"): D + 5 * LAM + HALF,
                          ("G", "y"): ONE}, c=2)
    assert classify_rank2(table) == FamilyTag("Mprime", a=3, b=HALF, c=2)


def test_classify_rejects_non_modules():
    table = table_module({("L", "x"): D + LAM, ("L", "y"): D + 3 * LAM,
                          ("G", "x"): ONE, ("G", "y"): ONE}, c=1)
    with pytest.raises(NoMatch):
        classify_rank2(table)


@pytest.mark.parametrize("family,bit,expected,a", [
    ("MA", 0, "Mg", HALF), ("MA", 1, "Mgprime", HALF),
    ("MAprime", 0, "Mgprime", 0), ("MAprime", 1, "Mg", 1),
])
def test_constant_patterns_coincide_with_mg(family, bit, expected, a):
    spec = make_module(FamilyTag(family, b=3, pattern=Pattern(-1, (bit,) * 4)))
    assert classify_rank2(spec) == FamilyTag(expected, a=a, b=3)
