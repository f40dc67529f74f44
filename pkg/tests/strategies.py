"""Hypothesis strategies shared by the test modules."""

from fractions import Fraction

import sympy
from hypothesis import strategies as st

from loopsv.poly import NVARS, VAR_NAMES, Poly, Var

SYMS = sympy.symbols(" ".join(VAR_NAMES))

small_fractions = st.builds(Fraction, st.integers(-6, 6), st.integers(1, 4))


def monomials(vars_=(Var.DEL, Var.LAM1, Var.PAR_A, Var.PAR_B, Var.PAR_C), max_exp=2):
    def build(exps):
        m = [0] * NVARS
        for v, e in zip(vars_, exps):
            m[v] = e
        return tuple(m)

    exps = []
    for v in vars_:
        lo = -max_exp if v == Var.PAR_C else 0
        exps.append(st.integers(lo, max_exp))
    return st.tuples(*exps).map(build)


def polys(max_terms=4, **kw):
    return st.dictionaries(monomials(**kw), small_fractions, max_size=max_terms).map(Poly)


def univariate(max_deg=4):
    return st.lists(st.integers(-3, 3), max_size=max_deg + 1).map(
        lambda cs: Poly({tuple([k] + [0] * (NVARS - 1)): c for k, c in enumerate(cs)}))


def to_sympy(p: Poly):
    expr = sympy.Integer(0)
    for m, coef in p.items():
        term = sympy.Rational(coef.numerator, coef.denominator)
        for sym, e in zip(SYMS, m):
            term *= sym ** e
        expr += term
    return sympy.expand(expr)
