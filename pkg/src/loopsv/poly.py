"""Sparse multivariate polynomials with rational coefficients.

The variables are fixed: ``d`` (the derivation), three lambda variables
``u``, ``v``, ``w`` and the module parameters ``a``, ``b``, ``c``.  Only ``c``
may carry negative exponents, so a :class:`Poly` is an element of
``Q[d, u, v, w, a, b, c, c^-1]``.

Besides the ring operations the module provides simultaneous substitution,
exact division, coefficient extraction and a dense univariate toolkit
(division with remainder, extended gcd) used by the submodule code.
"""

from __future__ import annotations

from enum import IntEnum
from fractions import Fraction
from typing import Iterable, Mapping, Sequence, Union


class PolyError(ValueError):
    """Base class for polynomial errors."""


class IllegalLaurentSubstitution(PolyError):
    pass


class NotDivisible(PolyError):
    pass


class ZeroParameterC(PolyError):
    pass


class NotUnivariate(PolyError):
    pass


class Var(IntEnum):
    DEL = 0
    LAM1 = 1
    LAM2 = 2
    LAM3 = 3
    PAR_A = 4
    PAR_B = 5
    PAR_C = 6

    @property
    def symbol(self) -> str:
        return VAR_NAMES[self]


NVARS = 7
VAR_NAMES = ("d", "u", "v", "w", "a", "b", "c")
LAMBDA_VARS = (Var.LAM1, Var.LAM2, Var.LAM3)
PARAM_VARS = (Var.PAR_A, Var.PAR_B, Var.PAR_C)

Monomial = tuple  # length NVARS tuple of ints
ONE_MONO: Monomial = (0,) * NVARS

Scalar = Fraction
Coercible = Union["Poly", Fraction, int]


def _mono_mul(m1: Monomial, m2: Monomial) -> Monomial:
    return tuple(x + y for x, y in zip(m1, m2))


def _unit(var: int, exp: int = 1) -> Monomial:
    m = [0] * NVARS
    m[var] = exp
    return tuple(m)


def _order_key(m: Monomial):
    # degree in the non-Laurent variables, then lexicographic d > u > ... > c
    return (sum(m[:Var.PAR_C]), m)


class Poly:
    """Immutable sparse polynomial.

    ``terms`` maps exponent tuples to nonzero :class:`Fraction` coefficients.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[Monomial, Coercible] | None = None):
        clean = {}
        if terms:
            for m, coef in terms.items():
                coef = Fraction(coef)
                if coef:
                    if len(m) != NVARS:
                        raise PolyError(f"bad monomial {m!r}")
                    if any(e < 0 for e in m[:Var.PAR_C]):
                        raise PolyError("only c may have a negative exponent")
                    clean[tuple(m)] = coef
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, terms: dict) -> "Poly":
        # terms already canonical (no zeros, proper tuples)
        p = object.__new__(cls)
        p._terms = terms
        p._hash = None
        return p

    # -- constructors ---------------------------------------------------
    @classmethod
    def const(cls, value: Coercible) -> "Poly":
        if isinstance(value, Poly):
            return value
        value = Fraction(value)
        return cls._raw({ONE_MONO: value} if value else {})

    @classmethod
    def var(cls, v: Var, exp: int = 1) -> "Poly":
        if exp < 0 and v != Var.PAR_C:
            raise PolyError("only c may have a negative exponent")
        return cls._raw({_unit(v, exp): Fraction(1)})

    @classmethod
    def coerce(cls, value: Coercible) -> "Poly":
        if isinstance(value, Poly):
            return value
        return cls.const(value)

    # -- basic queries --------------------------------------------------
    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_constant(self) -> bool:
        return not self._terms or (len(self._terms) == 1 and ONE_MONO in self._terms)

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise PolyError(f"{self} is not a constant")
        return self._terms.get(ONE_MONO, Fraction(0))

    def variables(self) -> set:
        found = set()
        for m in self._terms:
            for i, e in enumerate(m):
                if e:
                    found.add(Var(i))
        return found

    def degree(self, v: Var) -> int:
        """Degree in ``v``; -1 for the zero polynomial."""
        if not self._terms:
            return -1
        return max(m[v] for m in self._terms)

    def min_degree(self, v: Var) -> int:
        if not self._terms:
            return 0
        return min(m[v] for m in self._terms)

    def sorted_terms(self):
        return sorted(self._terms.items(), key=lambda t: _order_key(t[0]), reverse=True)

    def leading_term(self):
        if not self._terms:
            raise PolyError("zero polynomial has no leading term")
        m = max(self._terms, key=_order_key)
        return m, self._terms[m]

    # -- ring operations ------------------------------------------------
    def __add__(self, other: Coercible) -> "Poly":
        other = Poly.coerce(other)
        if not other._terms:
            return self
        out = dict(self._terms)
        for m, c in other._terms.items():
            s = out.get(m)
            if s is None:
                out[m] = c
            else:
                s += c
                if s:
                    out[m] = s
                else:
                    del out[m]
        return Poly._raw(out)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly._raw({m: -c for m, c in self._terms.items()})

    def __sub__(self, other: Coercible) -> "Poly":
        return self + (-Poly.coerce(other))

    def __rsub__(self, other: Coercible) -> "Poly":
        return Poly.coerce(other) - self

    def __mul__(self, other: Coercible) -> "Poly":
        if not isinstance(other, Poly):
            other = Fraction(other)
            if not other:
                return ZERO
            return Poly._raw({m: c * other for m, c in self._terms.items()})
        if not self._terms or not other._terms:
            return ZERO
        out: dict = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                m = _mono_mul(m1, m2)
                s = out.get(m)
                out[m] = c1 * c2 if s is None else s + c1 * c2
        return Poly._raw({m: c for m, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "Poly":
        if n < 0:
            if len(self._terms) == 1:
                (m, c), = self._terms.items()
                if all(e == 0 for e in m[:Var.PAR_C]):
                    return Poly._raw({tuple(-e for e in m): 1 / c}) ** (-n)
            raise PolyError("negative power of a non-unit")
        result = ONE
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __truediv__(self, other: Coercible) -> "Poly":
        if isinstance(other, Poly):
            return div_exact(self, other)
        other = Fraction(other)
        if not other:
            raise ZeroDivisionError("division by zero")
        return self * (1 / other)

    def __eq__(self, other) -> bool:
        if isinstance(other, Poly):
            return self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self._terms == Poly.const(other)._terms
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __repr__(self) -> str:
        return f"Poly({format_poly(self)!r})"

    def __str__(self) -> str:
        return format_poly(self)


ZERO = Poly._raw({})
ONE = Poly._raw({ONE_MONO: Fraction(1)})

D = Poly.var(Var.DEL)
LAM = Poly.var(Var.LAM1)
MU = Poly.var(Var.LAM2)
NU = Poly.var(Var.LAM3)
A = Poly.var(Var.PAR_A)
B = Poly.var(Var.PAR_B)
C = Poly.var(Var.PAR_C)


def arith(p: Coercible, q: Coercible, op: str) -> Poly:
    """Dispatch helper mirroring the four ring operations by name."""
    p, q = Poly.coerce(p), Poly.coerce(q)
    if op == "add":
        return p + q
    if op == "sub":
        return p - q
    if op == "mul":
        return p * q
    if op == "neg":
        return -p
    raise ValueError(f"unknown operation {op!r}")


def substitute(p: Poly, sigma: Mapping[Var, Coercible]) -> Poly:
    """Simultaneously replace variables by polynomials.

    ``c`` may only be mapped to a nonzero rational constant.
    """
    if not sigma:
        return p
    images = {}
    for v, img in sigma.items():
        img = Poly.coerce(img)
        if v == Var.PAR_C and (not img.is_constant() or img.is_zero()):
            raise IllegalLaurentSubstitution(
                f"c may only be evaluated at a nonzero rational, got {img}")
        images[Var(v)] = img
    powers: dict = {}

    def power(v, e):
        key = (v, e)
        r = powers.get(key)
        if r is None:
            r = images[v] ** e
            powers[key] = r
        return r

    out: dict = {}
    for m, coef in p._terms.items():
        rest = list(m)
        factor = None
        for v in images:
            e = m[v]
            if e:
                rest[v] = 0
                pw = power(v, e)
                factor = pw if factor is None else factor * pw
        rest = tuple(rest)
        if factor is None:
            s = out.get(rest)
            out[rest] = coef if s is None else s + coef
            continue
        for fm, fc in factor._terms.items():
            nm = _mono_mul(rest, fm)
            s = out.get(nm)
            out[nm] = coef * fc if s is None else s + coef * fc
    return Poly._raw({m: c for m, c in out.items() if c})


def coeffs_in(p: Poly, v: Var) -> list:
    """Split ``p`` as ``sum_k q_k v^k``; returns ``[(k, q_k)]`` ascending."""
    if v == Var.PAR_C:
        raise PolyError("coefficient extraction in c is not supported")
    groups: dict = {}
    for m, coef in p._terms.items():
        k = m[v]
        rest = m[:v] + (0,) + m[v + 1:]
        groups.setdefault(k, {})[rest] = coef
    return [(k, Poly._raw(groups[k])) for k in sorted(groups)]


def from_coeffs(pairs: Iterable, v: Var) -> Poly:
    out = ZERO
    x = Poly.var(v)
    for k, q in pairs:
        out = out + q * x ** k
    return out


def _shift_c(p: Poly, k: int) -> Poly:
    if not k:
        return p
    return Poly._raw({m[:Var.PAR_C] + (m[Var.PAR_C] + k,): c for m, c in p._terms.items()})


def div_exact(p: Poly, q: Poly) -> Poly:
    """Return ``r`` with ``p == q * r`` or raise :class:`NotDivisible`."""
    if q.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    if p.is_zero():
        return ZERO
    # move to the polynomial ring: c does not divide the shifted divisor, so
    # Laurent divisibility equals ordinary divisibility of the shifted pair
    sp, sq = -p.min_degree(Var.PAR_C), -q.min_degree(Var.PAR_C)
    rem = dict(_shift_c(p, sp)._terms)
    qq = _shift_c(q, sq)
    lm, lc = qq.leading_term()
    quot: dict = {}
    while rem:
        m = max(rem, key=_order_key)
        diff = tuple(x - y for x, y in zip(m, lm))
        if any(e < 0 for e in diff):
            raise NotDivisible(f"{p} is not divisible by {q}")
        coef = rem[m] / lc
        quot[diff] = coef
        for m2, c2 in qq._terms.items():
            nm = _mono_mul(diff, m2)
            s = rem.get(nm, 0) - coef * c2
            if s:
                rem[nm] = s
            else:
                rem.pop(nm, None)
    return _shift_c(Poly._raw(quot), sq - sp)


def eval_params(p: Poly, a: Coercible, b: Coercible, c: Coercible) -> Poly:
    """Evaluate the parameters ``a``, ``b``, ``c`` at rationals."""
    c = Fraction(c) if not isinstance(c, Poly) else c.constant_value()
    if not c:
        raise ZeroParameterC("parameter c must be nonzero")
    return substitute(p, {Var.PAR_A: a, Var.PAR_B: b, Var.PAR_C: c})


# -- dense univariate helpers (variable d, rational coefficients) ---------

Dense = tuple  # coefficients, lowest degree first, no trailing zeros


def to_dense(p: Poly) -> Dense:
    if p.is_zero():
        return ()
    for m in p._terms:
        if any(m[1:]):
            raise NotUnivariate(f"{p} is not univariate in d")
    n = p.degree(Var.DEL)
    coeffs = [Fraction(0)] * (n + 1)
    for m, c in p._terms.items():
        coeffs[m[0]] = c
    return tuple(coeffs)


def from_dense(coeffs: Sequence[Fraction]) -> Poly:
    return Poly._raw({_unit(Var.DEL, k): Fraction(c) for k, c in enumerate(coeffs) if c})


def _trim(coeffs: list) -> Dense:
    while coeffs and not coeffs[-1]:
        coeffs.pop()
    return tuple(coeffs)


def dense_add(p: Dense, q: Dense) -> Dense:
    if len(p) < len(q):
        p, q = q, p
    out = list(p)
    for i, c in enumerate(q):
        out[i] += c
    return _trim(out)


def dense_scale(p: Dense, s: Fraction) -> Dense:
    if not s:
        return ()
    return tuple(c * s for c in p)


def dense_sub(p: Dense, q: Dense) -> Dense:
    return dense_add(p, dense_scale(q, Fraction(-1)))


def dense_mul(p: Dense, q: Dense) -> Dense:
    if not p or not q:
        return ()
    out = [Fraction(0)] * (len(p) + len(q) - 1)
    for i, x in enumerate(p):
        if x:
            for j, y in enumerate(q):
                out[i + j] += x * y
    return _trim(out)


def dense_divmod(p: Dense, q: Dense) -> tuple:
    if not q:
        raise ZeroDivisionError("division by the zero polynomial")
    rem = list(p)
    dq, lc = len(q) - 1, q[-1]
    quot = [Fraction(0)] * max(len(p) - dq, 0)
    while len(rem) - 1 >= dq and rem:
        k = len(rem) - 1 - dq
        coef = rem[-1] / lc
        quot[k] = coef
        for i, c in enumerate(q):
            rem[k + i] -= coef * c
        rem.pop()
        while rem and not rem[-1]:
            rem.pop()
    return _trim(quot), tuple(rem)


def dense_monic(p: Dense) -> Dense:
    if not p:
        return p
    return dense_scale(p, 1 / p[-1])


def dense_gcdex(p: Dense, q: Dense) -> tuple:
    """Extended Euclid: ``(g, s, t)`` with ``g = s*p + t*q`` and ``g`` monic."""
    r0, r1 = p, q
    s0, s1 = (Fraction(1),), ()
    t0, t1 = (), (Fraction(1),)
    while r1:
        quo, rem = dense_divmod(r0, r1)
        r0, r1 = r1, rem
        s0, s1 = s1, dense_sub(s0, dense_mul(quo, s1))
        t0, t1 = t1, dense_sub(t0, dense_mul(quo, t1))
    if not r0:
        return (), (), ()
    inv = 1 / r0[-1]
    return dense_scale(r0, inv), dense_scale(s0, inv), dense_scale(t0, inv)


def gcd_ext_univar(p: Poly, q: Poly) -> tuple:
    """Monic gcd of two polynomials in ``d`` with Bezout cofactors."""
    g, s, t = dense_gcdex(to_dense(p), to_dense(q))
    return from_dense(g), from_dense(s), from_dense(t)


# -- printing ---------------------------------------------------------------

def format_scalar(x: Fraction) -> str:
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def format_monomial(m: Monomial) -> str:
    parts = []
    for i, e in enumerate(m):
        if e == 1:
            parts.append(VAR_NAMES[i])
        elif e:
            parts.append(f"{VAR_NAMES[i]}^{e}")
    return "*".join(parts)


def format_poly(p: Poly) -> str:
    """Canonical text form, e.g. ``d + 2*u`` or ``-d - 3/2*u``."""
    if p.is_zero():
        return "0"
    out = []
    for idx, (m, coef) in enumerate(p.sorted_terms()):
        neg = coef < 0
        mag = -coef if neg else coef
        mono = format_monomial(m)
        if not mono:
            body = format_scalar(mag)
        elif mag == 1:
            body = mono
        else:
            body = f"{format_scalar(mag)}*{mono}"
        if idx == 0:
            out.append(f"-{body}" if neg else body)
        else:
            out.append(f" - {body}" if neg else f" + {body}")
    return "".join(out)
