"""The loop super-Virasoro conformal superalgebra and its lambda-bracket.

Generators ``L_i`` (even) and ``G_i`` (odd), ``i`` any integer, form a basis
over ``Q[d]``.  The bracket table is

    [L_i _u L_j] = (d + 2u) L_{i+j}        [L_i _u G_j] = (d + 3/2 u) G_{i+j}
    [G_i _u L_j] = (1/2 d + 3/2 u) G_{i+j} [G_i _u G_j] = 2 L_{i+j}

and extends sesquilinearly: a coefficient ``f(d)`` on the left becomes
``f(-u)``, one on the right becomes ``f(d + u)``.  The bracket variable may be
a sum such as ``u + v`` (nested brackets); lambda variables already present
in the left argument are then carried along unchanged.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product
from typing import Iterable, Union

from .elements import Combination, GenId, LoopGenId
from .poly import D, LAM, MU, ONE, Poly, Var, substitute

HALF = Fraction(1, 2)

AlgebraElement = Combination
LambdaValued = Combination


class VariableCollision(ValueError):
    pass


class NotHomogeneous(ValueError):
    pass


def sign(p: int, q: int) -> int:
    """``(-1)^(p*q)`` for parities ``p``, ``q``."""
    return -1 if (p & q) else 1


def _table(x: GenId, y: GenId) -> Poly:
    """Table polynomial for ``[x _u y]`` in the variables ``d`` and ``u``."""
    if x.kind == "L" and y.kind == "L":
        return D + 2 * LAM
    if x.kind == "L":
        return D + Fraction(3, 2) * LAM
    if y.kind == "L":
        return HALF * D + Fraction(3, 2) * LAM
    return Poly.const(2)


def bracket_kind(x: GenId, y: GenId) -> str:
    return "L" if x.parity == y.parity else "G"


def bracket_basis(x: GenId, y: GenId, lam: Union[Var, Poly] = Var.LAM1) -> LambdaValued:
    """``[x _lam y]`` for basis generators."""
    lam = _as_poly(lam)
    poly = _table(x, y)
    if lam != LAM:
        poly = substitute(poly, {Var.LAM1: lam})
    return Combination({GenId(bracket_kind(x, y), x.grade + y.grade): poly})


def _as_poly(lam) -> Poly:
    if isinstance(lam, Poly):
        return lam
    return Poly.var(Var(lam))


def as_element(x) -> Combination:
    if isinstance(x, Combination):
        return x
    if isinstance(x, GenId):
        return Combination({x: ONE})
    raise TypeError(f"expected a generator or element, got {type(x).__name__}")


def check_bracket_variable(left: Combination, right: Combination, lam: Poly) -> None:
    """Raise :class:`VariableCollision` if ``lam`` clashes with the arguments.

    A single-variable ``lam`` must be fresh for both arguments.  A compound
    ``lam`` such as ``u + v`` may reuse variables of the left argument (those
    ride along as inert scalars) but must be fresh for the right one.
    """
    lam_vars = lam.variables() - {Var.DEL}
    if Var.DEL in lam.variables():
        raise VariableCollision("bracket variable must not involve d")
    if lam_vars & right.variables():
        raise VariableCollision(f"bracket variable {lam} already occurs in the right argument")
    if len(lam_vars) == 1 and lam_vars & left.variables() and len(lam.terms) == 1:
        raise VariableCollision(f"bracket variable {lam} already occurs in the left argument")


def bracket(x, y, lam: Union[Var, Poly] = Var.LAM1) -> LambdaValued:
    """Sesquilinear extension of the bracket table to elements."""
    left, right = as_element(x), as_element(y)
    lam = _as_poly(lam)
    check_bracket_variable(left, right, lam)
    left_shift = {Var.DEL: -lam}
    right_shift = {Var.DEL: D + lam}
    out: dict = {}
    tables: dict = {}
    for gx, fx in left.items():
        fl = substitute(fx, left_shift)
        for gy, fy in right.items():
            fr = substitute(fy, right_shift)
            key = (gx.kind, gy.kind)
            t = tables.get(key)
            if t is None:
                t = _table(gx, gy)
                if lam != LAM:
                    t = substitute(t, {Var.LAM1: lam})
                tables[key] = t
            target = GenId(bracket_kind(gx, gy), gx.grade + gy.grade)
            term = fl * fr * t
            out[target] = out[target] + term if target in out else term
    return Combination(out)


def generators(window: tuple) -> list:
    lo, hi = window
    return [GenId(k, i) for i in range(lo, hi + 1) for k in ("L", "G")]


def check_skew(x: GenId, y: GenId) -> LambdaValued:
    """Residual of ``[x_u y] = -(-1)^{|x||y|} [y_{-u-d} x]``; zero for this algebra."""
    lhs = bracket_basis(x, y, Var.LAM1)
    swapped = bracket_basis(y, x, Var.LAM2)
    flip = {Var.LAM2: -LAM - D}
    return lhs + swapped.map_coeffs(lambda p: substitute(p, flip)).scale(sign(x.parity, y.parity))


def check_jacobi(x, y, z) -> LambdaValued:
    """Residual of the conformal Jacobi identity in the variables ``u``, ``v``."""
    x, y, z = as_element(x), as_element(y), as_element(z)
    px, py = _parity(x), _parity(y)
    lhs = bracket(x, bracket(y, z, MU), LAM)
    first = bracket(bracket(x, y, LAM), z, LAM + MU)
    second = bracket(y, bracket(x, z, LAM), MU)
    return lhs - first - second.scale(sign(px, py))


def _parity(elem: Combination) -> int:
    parities = {k.parity for k in elem}
    if len(parities) > 1:
        raise NotHomogeneous("element is not parity-homogeneous")
    return parities.pop() if parities else 0


def check_grading(x: GenId, y: GenId) -> bool:
    """True iff ``[x _u y]`` lives in grade ``i+j`` with parity ``|x|+|y|``."""
    out = bracket_basis(x, y)
    want_parity = (x.parity + y.parity) % 2
    return all(k.grade == x.grade + y.grade and k.parity == want_parity for k in out)


def verify_axioms(window: tuple):
    """Yield ``(kind, generators, residual)`` for every skew pair and Jacobi triple."""
    gens = generators(window)
    for x, y in product(gens, repeat=2):
        yield "skew", (x, y), check_skew(x, y)
    for x, y, z in product(gens, repeat=3):
        yield "jacobi", (x, y, z), check_jacobi(x, y, z)


# -- the loop super-Virasoro Lie superalgebra ----------------------------------

LoopElement = Combination


def loop_bracket_basis(x: LoopGenId, y: LoopGenId) -> LoopElement:
    i = x.loop + y.loop
    w = x.weight + y.weight
    if x.kind == "L" and y.kind == "L":
        return Combination({LoopGenId("L", w, i): x.weight - y.weight})
    if x.kind == "L":
        return Combination({LoopGenId("G", w, i): x.weight / 2 - y.weight})
    if y.kind == "L":
        # super skew-symmetry with an even argument
        return Combination({LoopGenId("G", w, i): -(y.weight / 2 - x.weight)})
    return Combination({LoopGenId("L", w, i): Fraction(2)})


def loop_bracket(x, y) -> LoopElement:
    x, y = _loop_element(x), _loop_element(y)
    out = Combination()
    for gx, cx in x.items():
        for gy, cy in y.items():
            out = out + loop_bracket_basis(gx, gy).scale(cx * cy)
    return out


def _loop_element(x) -> LoopElement:
    if isinstance(x, LoopGenId):
        return Combination({x: Fraction(1)})
    return x


def check_loop_super_jacobi(x: LoopGenId, y: LoopGenId, z: LoopGenId) -> LoopElement:
    """Residual ``[x,[y,z]] - [[x,y],z] - (-1)^{|x||y|}[y,[x,z]]``."""
    lhs = loop_bracket(x, loop_bracket(y, z))
    rhs1 = loop_bracket(loop_bracket(x, y), z)
    rhs2 = loop_bracket(y, loop_bracket(x, z)).scale(sign(x.parity, y.parity))
    return lhs - rhs1 - rhs2


def loop_generators(l_weights: Iterable, g_weights: Iterable, loops: Iterable) -> list:
    loops = list(loops)
    gens = [LoopGenId("L", w, i) for w in l_weights for i in loops]
    gens += [LoopGenId("G", w, i) for w in g_weights for i in loops]
    return gens
