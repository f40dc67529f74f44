from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from loopsv.elements import BasisId
from loopsv.expr import parse_element, print_canonical
from loopsv.modules import FamilyTag, ModuleSpec, Pattern, WindowRequired, make_module
from loopsv.poly import Poly, from_dense, to_dense
from loopsv.submodules import (
    LayoutMismatch, NonTermination, RowVector, SymbolicParameters, WindowTooSmall, action_closed,
    canonicalize, close_under_actions, expected_graded_submodule, full_basis,
    irreducibility_probe, reduce,
)

from strategies import SYMS, to_sympy, univariate

HALF = Fraction(1, 2)
LAYOUT = (BasisId("x"), BasisId("y"))


def row(text, layout=LAYOUT):
    return RowVector.from_element(parse_element(text, "module"), layout)


def basis_text(rows):
    return print_canonical(canonicalize([row(r) for r in rows], LAYOUT))


def windowed(tag, window):
    spec = make_module(tag)
    return ModuleSpec(spec.tag, spec.rule, graded=True, window=window)


# -- canonical form ---------------------------------------------------------------

def test_canonicalize_examples():
    assert basis_text(["(d+2)*x", "y", "(d+2)^2*x"]) == "{(d + 2)*x, y}"
    assert basis_text(["x", "y"]) == "{x, y}"
    assert basis_text(["3*x"]) == "{x}"
    assert basis_text([]) == "0"


def test_entries_above_pivots_are_reduced():
    assert basis_text(["x + d^3*y", "(d+1)*y"]) == "{x - y, (d + 1)*y}"


def test_reduce_examples():
    basis = canonicalize([row("(d+2)*x"), row("y")])
    assert reduce(row("(d+2)^3*x"), basis).is_zero()
    assert reduce(row("x"), basis) == row("x")
    assert reduce(RowVector.zero(LAYOUT), basis).is_zero()


def test_layouts_must_agree():
    basis = canonicalize([row("x")])
    other = RowVector.zero((BasisId("x", 0), BasisId("y", 0)))
    with pytest.raises(LayoutMismatch):
        reduce(other, basis)
    with pytest.raises(LayoutMismatch):
        RowVector.from_element(parse_element("x(3)", "module"), LAYOUT)


def test_symbolic_coefficients_rejected():
    with pytest.raises(SymbolicParameters):
        row("(d+b)*x")


rows2 = st.tuples(univariate(3), univariate(3))


def _row(pair):
    return RowVector(LAYOUT, tuple(to_dense(p) for p in pair))


@settings(max_examples=80)
@given(st.lists(rows2, min_size=1, max_size=4),
       st.lists(st.tuples(st.integers(0, 3), st.integers(0, 3), univariate(2)), max_size=4))
def test_canonical_form_is_invariant_under_row_operations(pairs, ops):
    rows = [_row(p) for p in pairs]
    shuffled = list(rows)
    for i, j, q in ops:
        i, j = i % len(shuffled), j % len(shuffled)
        if i != j:  # row_i += q * row_j is unimodular
            shuffled[i] = RowVector(LAYOUT, tuple(
                to_dense(from_dense(a) + q * from_dense(b))
                for a, b in zip(shuffled[i].entries, shuffled[j].entries)))
    shuffled.reverse()
    base = canonicalize(rows, LAYOUT)
    assert canonicalize(shuffled, LAYOUT) == base
    assert canonicalize(base.rows, LAYOUT) == base
    assert all(base.contains(r) for r in rows)


def _monic(expr, d):
    if expr == 0:
        return sympy.Integer(0)
    return sympy.Poly(expr, d).monic().as_expr()


@settings(max_examples=80)
@given(st.lists(rows2, min_size=1, max_size=4))
def test_pivots_match_determinantal_divisors(pairs):
    d = SYMS[0]
    base = canonicalize([_row(p) for p in pairs], LAYOUT)
    xs = [to_sympy(p[0]) for p in pairs]
    ys = [to_sympy(p[1]) for p in pairs]
    gx = _monic(sympy.gcd_list(xs) if any(xs) else 0, d)
    minors = [sympy.expand(xs[i] * ys[j] - xs[j] * ys[i])
              for i in range(len(pairs)) for j in range(i + 1, len(pairs))]
    g2 = _monic(sympy.gcd_list(minors), d) if any(minors) else sympy.Integer(0)
    polys = [[to_sympy(from_dense(e)) for e in r.entries] for r in base.rows]
    pivots = base.pivots()
    if gx != 0:
        assert pivots[0] == 0 and sympy.expand(polys[0][0] - gx) == 0
        if g2 != 0:
            assert sympy.expand(polys[0][0] * polys[1][1] - g2) == 0
        else:
            assert len(base) == 1
    elif any(ys):
        assert pivots == [1]
        assert sympy.expand(polys[0][1] - _monic(sympy.gcd_list(ys), d)) == 0


# -- closures ---------------------------------------------------------------------

def test_closure_examples():
    m = make_module(FamilyTag("M", a=0, b=2, c=3))
    got = close_under_actions(m, [parse_element("(d+2)*x", "module")])
    assert print_canonical(got.basis) == "{(d + 2)*x, y}"
    mp = make_module(FamilyTag("Mprime", a=HALF, b=2, c=3))
    got = close_under_actions(mp, [parse_element("(d+2)*y", "module")])
    assert print_canonical(got.basis) == "{x, (d + 2)*y}"
    full = close_under_actions(make_module(FamilyTag("M", a=1, b=0, c=1)), [parse_element("x", "module")])
    assert full.basis == full_basis(LAYOUT)


def test_closure_needs_numeric_parameters():
    m = make_module(FamilyTag("M", a=Poly.var(4), b=2, c=3))
    with pytest.raises(SymbolicParameters):
        close_under_actions(m, [parse_element("x", "module")])


def test_graded_closure_needs_window():
    with pytest.raises(WindowRequired):
        close_under_actions(make_module(FamilyTag("Mg", a=1, b=2)),
                            [parse_element("x(0)", "module")])


def test_pass_cap():
    m = make_module(FamilyTag("M", a=1, b=0, c=1))
    with pytest.raises(NonTermination):
        close_under_actions(m, [parse_element("x", "module")], max_passes=0)


def test_probe_examples():
    assert irreducibility_probe(make_module(FamilyTag("M", a=1, b=0, c=1))).all_full
    assert irreducibility_probe(make_module(FamilyTag("Mprime", a=-HALF, b=1, c=2))).all_full
    res = irreducibility_probe(make_module(FamilyTag("M", a=0, b=2, c=3)), rng_seed=1)
    assert [print_canonical(b) for b in res.proper] in ([], ["{(d + 2)*x, y}"])


def test_probe_within_a_submodule_stays_inside():
    m = make_module(FamilyTag("M", a=0, b=2, c=3))
    sub = close_under_actions(m, [parse_element("(d+2)*x", "module")]).basis
    res = irreducibility_probe(m, trials=5, within=sub)
    assert res.verdict == "FoundProper" and res.proper == [sub]


# -- graded submodules -------------------------------------------------------------

def test_expected_rows_generic_case():
    spec = windowed(FamilyTag("Mg", a=1, b=2), (-2, 2))
    got = expected_graded_submodule(spec, [0, 1], [1, 2])
    assert len(got) == 8
    for k in range(-2, 2):
        for kind in "xy":
            assert got.contains(parse_element(f"{kind}({k}) + 2*{kind}({k + 1})", "module"))
    assert not got.contains(parse_element("x(0)", "module"))


def test_expected_rows_need_room():
    spec = windowed(FamilyTag("Mg", a=1, b=2), (0, 0))
    with pytest.raises(WindowTooSmall):
        expected_graded_submodule(spec, [0, 1], [1, 1])


def test_ma_rows_carry_delta_factors():
    spec = make_module(FamilyTag("MA", b=2, pattern=Pattern(0, (0, 1))))
    got = expected_graded_submodule(spec, [0], [1])
    assert print_canonical(got) == "{x(0), (d + 2)*y(0), x(1), y(1)}"


@pytest.mark.parametrize("family,a,closed", [
    ("Mg", HALF, True), ("Mg", 0, False), ("Mgprime", 0, True), ("Mgprime", -HALF, False),
])
def test_exceptional_graded_cases(family, a, closed):
    # the G-action maps y_j to x_{i+j} with coefficient 1 in Mg (and x_j to y_{i+j} in
    # Mgprime), so a (d+b) factor on the image side cannot be closed; see the README
    spec = windowed(FamilyTag(family, a=a, b=2), (-2, 2))
    got = expected_graded_submodule(spec, [0], [1])
    assert action_closed(spec, got).closed is closed
