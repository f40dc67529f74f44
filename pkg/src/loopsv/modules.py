"""Conformal modules of rank two over the loop super-Virasoro conformal superalgebra.

Families
--------
``M``, ``Mprime``
    Ungraded: ``V = Q[d]x + Q[d]y``; every ``L_i``, ``G_i`` acts as ``c^i`` times
    ``L_0``, ``G_0``.
``Mg``, ``Mgprime``
    Graded with parameters ``a``, ``b``; basis ``x_j``, ``y_j``.
``MA``, ``MAprime``
    Graded with a 0/1 pattern ``A = (a_j)`` on a finite window.
``V``, ``VA``
    Rank-one modules over the even subalgebra spanned by the ``L_i``; these
    are what the two parity parts restrict to.

Parameters are :class:`~loopsv.poly.Poly` values, so ``a``, ``b`` and the
Laurent ``c`` can be symbolic.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Callable, Optional, Union

from .core import HALF, bracket, generators, sign
from .elements import BasisId, Combination, GenId, L, G
from .poly import (
    D, LAM, MU, ONE, Poly, PolyError, NotDivisible,
    Var, ZeroParameterC, div_exact, substitute,
)

UNGRADED = ("M", "Mprime")
GRADED = ("Mg", "Mgprime")
PATTERNED = ("MA", "MAprime")
RANK_TWO = UNGRADED + GRADED + PATTERNED
RANK_ONE = ("V", "VA")

ModuleElement = Combination


class ModuleError(ValueError):
    pass


class MissingPattern(ModuleError):
    pass


class OutOfWindow(ModuleError):
    pass


class NoMatch(ModuleError):
    pass


class WindowRequired(ModuleError):
    pass


@dataclass(frozen=True)
class Pattern:
    """Bits ``a_j`` for ``j`` in ``[lo, lo + len(bits) - 1]``; nothing outside."""

    lo: int
    bits: tuple

    def __post_init__(self):
        bits = tuple(int(b) for b in self.bits)
        if not bits:
            raise MissingPattern("pattern window is empty")
        if any(b not in (0, 1) for b in bits):
            raise ValueError("pattern bits must be 0 or 1")
        object.__setattr__(self, "bits", bits)

    @classmethod
    def from_string(cls, text: str, lo: int = 0) -> "Pattern":
        text = text.strip()
        if not text or set(text) - {"0", "1"}:
            raise ValueError(f"pattern must be a nonempty 0/1 string, got {text!r}")
        return cls(lo, tuple(int(ch) for ch in text))

    @property
    def hi(self) -> int:
        return self.lo + len(self.bits) - 1

    @property
    def window(self) -> tuple:
        return (self.lo, self.hi)

    def __getitem__(self, j: int) -> int:
        if not self.lo <= j <= self.hi:
            raise OutOfWindow(f"grade {j} outside pattern window [{self.lo}, {self.hi}]")
        return self.bits[j - self.lo]

    def is_constant(self) -> bool:
        return len(set(self.bits)) == 1

    def __str__(self) -> str:
        return "".join(map(str, self.bits))


def _param(value) -> Optional[Poly]:
    if value is None:
        return None
    return Poly.coerce(value)


@dataclass(frozen=True)
class FamilyTag:
    family: str
    a: Optional[Poly] = None
    b: Optional[Poly] = None
    c: Optional[Poly] = None
    pattern: Optional[Pattern] = None

    def __post_init__(self):
        if self.family not in RANK_TWO + RANK_ONE:
            raise ModuleError(f"unknown module family {self.family!r}")
        for name in ("a", "b", "c"):
            object.__setattr__(self, name, _param(getattr(self, name)))
        if self.c is not None and self.c.is_zero():
            raise ZeroParameterC("parameter c must be nonzero")
        needs_pattern = self.family in PATTERNED or self.family == "VA"
        if needs_pattern and self.pattern is None:
            raise MissingPattern(f"family {self.family} needs a pattern")
        if not needs_pattern and self.pattern is not None:
            raise ModuleError(f"family {self.family} takes no pattern")
        if self.family in UNGRADED and self.c is None:
            raise ModuleError(f"family {self.family} needs a parameter c")
        if self.b is None:
            raise ModuleError("parameter b is required")
        if self.family in UNGRADED + GRADED + ("V",) and self.a is None:
            raise ModuleError(f"family {self.family} needs a parameter a")

    @property
    def graded(self) -> bool:
        if self.family == "V":
            return self.c is None
        return self.family not in UNGRADED

    def is_numeric(self) -> bool:
        return all(p is None or p.is_constant() for p in (self.a, self.b, self.c))

    def __str__(self) -> str:
        parts = [self.family]
        for name in ("a", "b", "c"):
            value = getattr(self, name)
            if value is not None:
                text = str(value)
                parts.append(f"{name}={text}" if " " not in text else f"{name}=({text})")
        if self.pattern is not None:
            parts.append(f"pattern={self.pattern} pattern_lo={self.pattern.lo}")
        return " ".join(parts)


Rule = Callable[[GenId, BasisId], tuple]


@dataclass(frozen=True)
class ModuleSpec:
    """A rank-two action table ``(generator, basis vector) -> (basis vector, poly)``.

    Table polynomials use ``d`` and ``u``; graded tables are only defined for
    basis grades inside ``window`` (when one is set).
    """

    tag: Optional[FamilyTag]
    rule: Rule = field(compare=False)
    graded: bool = False
    window: Optional[tuple] = None

    def basis(self, window: Optional[tuple] = None) -> list:
        if not self.graded:
            return [BasisId("x"), BasisId("y")]
        lo, hi = window or self.require_window()
        return [BasisId(k, j) for j in range(lo, hi + 1) for k in ("x", "y")]

    def require_window(self) -> tuple:
        if self.window is None:
            raise WindowRequired("graded module without a window")
        return self.window

    def in_window(self, grade: int) -> bool:
        return self.window is None or self.window[0] <= grade <= self.window[1]

    def entry(self, g: GenId, v: BasisId) -> tuple:
        if self.graded:
            if v.grade is None:
                raise ModuleError("graded module needs graded basis vectors")
            for j in (v.grade, v.grade + g.grade):
                if not self.in_window(j):
                    raise OutOfWindow(f"grade {j} outside window {self.window}")
        elif v.grade is not None:
            raise ModuleError("ungraded module takes the basis vectors x, y")
        return self.rule(g, v)

    def action_poly(self, g: GenId, v: BasisId) -> Poly:
        return self.entry(g, v)[1]


def _flip(v: BasisId, g: GenId) -> BasisId:
    kind = v.kind if g.kind == "L" else ("y" if v.kind == "x" else "x")
    return BasisId(kind, None if v.grade is None else v.grade + g.grade)


def _uniform_rule(polys: dict, scale: Optional[Poly] = None) -> Rule:
    """Rule with one polynomial per (generator kind, basis kind), times ``scale^i``."""

    def rule(g: GenId, v: BasisId):
        p = polys[g.kind, v.kind]
        if scale is not None and g.grade:
            p = p * scale ** g.grade
        return _flip(v, g), p

    return rule


def va_poly(s: int, t: int, b: Poly) -> Poly:
    """``L_i`` on ``v_j`` in ``V_{A,b}`` for ``(a_j, a_{i+j}) = (s, t)``."""
    if (s, t) == (0, 0):
        return D + b
    if (s, t) == (1, 1):
        return D + LAM + b
    if (s, t) == (0, 1):
        return ONE
    return (D + b) * (D + LAM + b)


def make_module(tag: FamilyTag) -> ModuleSpec:
    """Build the action table of a rank-two family."""
    fam, a, b = tag.family, tag.a, tag.b
    if fam not in RANK_TWO:
        raise ModuleError(f"{fam} is not a rank-two family; use make_clv")
    if fam in ("M", "Mgprime"):
        polys = {
            ("L", "x"): D + a * LAM + b,
            ("L", "y"): D + (a + HALF) * LAM + b,
            ("G", "x"): ONE,
            ("G", "y"): D + 2 * a * LAM + b,
        }
    elif fam in ("Mprime", "Mg"):
        polys = {
            ("L", "x"): D + a * LAM + b,
            ("L", "y"): D + (a - HALF) * LAM + b,
            ("G", "x"): D + (2 * a - 1) * LAM + b,
            ("G", "y"): ONE,
        }
    if fam in UNGRADED:
        return ModuleSpec(tag, _uniform_rule(polys, tag.c), graded=False)
    if fam in GRADED:
        return ModuleSpec(tag, _uniform_rule(polys), graded=True)

    pat = tag.pattern
    half = D + HALF * LAM + b
    shift = D + LAM + b
    plain = D + b

    if fam == "MA":
        def rule(g: GenId, v: BasisId):
            j, t = v.grade, v.grade + g.grade
            if g.kind == "L":
                p = half if v.kind == "x" else va_poly(pat[j], pat[t], b)
            elif v.kind == "x":
                p = plain if pat[t] == 0 else ONE
            else:
                p = shift if pat[j] == 1 else ONE
            return _flip(v, g), p
    else:
        def rule(g: GenId, v: BasisId):
            j, t = v.grade, v.grade + g.grade
            if g.kind == "L":
                p = va_poly(pat[j], pat[t], b) if v.kind == "x" else half
            elif v.kind == "x":
                p = shift if pat[j] == 1 else ONE
            else:
                p = plain if pat[t] == 0 else ONE
            return _flip(v, g), p
    return ModuleSpec(tag, rule, graded=True, window=pat.window)


def table_module(polys: dict, c=1, graded: bool = False, window=None) -> ModuleSpec:
    """Untagged table from ``{(gen kind, basis kind): poly}`` at generator grade 0.

    Ungraded tables scale the grade-``i`` action by ``c^i``.
    """
    missing = {(k, v) for k in "LG" for v in "xy"} - set(polys)
    if missing:
        raise ModuleError(f"table is missing entries {sorted(missing)}")
    scale = None if graded else Poly.coerce(c)
    if scale is not None and scale.is_zero():
        raise ZeroParameterC("parameter c must be nonzero")
    return ModuleSpec(None, _uniform_rule(dict(polys), scale), graded=graded, window=window)


def mutate(spec: ModuleSpec, gen_kind: str, basis_kind: str,
           fn: Callable[[GenId, BasisId, Poly], Poly]) -> ModuleSpec:
    """Replace every table entry for ``(gen_kind, basis_kind)`` by ``fn(g, v, poly)``."""

    def rule(g: GenId, v: BasisId):
        out, p = spec.rule(g, v)
        if g.kind == gen_kind and v.kind == basis_kind:
            p = fn(g, v, p)
        return out, p

    return ModuleSpec(None, rule, graded=spec.graded, window=spec.window)


def rescale_odd(spec: ModuleSpec, gamma) -> ModuleSpec:
    """The same module written in the odd basis ``y' = gamma * y``."""
    gamma = Poly.coerce(gamma)
    if gamma.is_zero():
        raise ModuleError("rescaling factor must be nonzero")

    def rule(g: GenId, v: BasisId):
        out, p = spec.rule(g, v)
        if v.kind == "y":
            p = p * gamma
        if out.kind == "y":
            p = div_exact(p, gamma)
        return out, p

    return ModuleSpec(None, rule, graded=spec.graded, window=spec.window)


# -- action -------------------------------------------------------------------

def _as_module_element(v) -> ModuleElement:
    if isinstance(v, BasisId):
        return Combination({v: ONE})
    return v


def _as_algebra_element(g) -> Combination:
    if isinstance(g, GenId):
        return Combination({g: ONE})
    return g


def act(spec: ModuleSpec, g, v, lam: Union[Var, Poly] = Var.LAM1) -> ModuleElement:
    """``g _lam v`` extended sesquilinearly.

    ``g`` may be a generator, an algebra element or a lambda-valued bracket
    (whose coefficients get ``d -> -lam``); a coefficient ``f(d)`` of ``v``
    becomes ``f(d + lam)``.
    """
    x, w = _as_algebra_element(g), _as_module_element(v)
    lam = lam if isinstance(lam, Poly) else Poly.var(Var(lam))
    lam_vars = lam.variables()
    if lam_vars & w.variables():
        raise ModuleError(f"variable collision: {lam} already occurs in {w}")
    left_shift = {Var.DEL: -lam}
    right_shift = {Var.DEL: D + lam}
    out: dict = {}
    for gen, fg in x.items():
        fl = substitute(fg, left_shift)
        for b, fb in w.items():
            target, p = spec.entry(gen, b)
            if lam != LAM:
                p = substitute(p, {Var.LAM1: lam})
            term = fl * substitute(fb, right_shift) * p
            out[target] = out[target] + term if target in out else term
    return Combination(out)


# -- module axioms ------------------------------------------------------------

@dataclass
class AxiomReport:
    checked: int = 0
    skipped: int = 0
    failures: list = field(default_factory=list)  # (g1, g2, v, residual)

    @property
    def ok(self) -> bool:
        return not self.failures


def module_axiom_residual(spec: ModuleSpec, g1: GenId, g2: GenId, v: BasisId) -> ModuleElement:
    """``[g1_u g2]_{u+v} x - g1_u (g2_v x) + (-1)^{|g1||g2|} g2_v (g1_u x)``."""
    lhs = act(spec, bracket(g1, g2, LAM), v, LAM + MU)
    first = act(spec, g1, act(spec, g2, v, MU), LAM)
    second = act(spec, g2, act(spec, g1, v, LAM), MU)
    return lhs - first + second.scale(sign(g1.parity, g2.parity))


def check_module_axioms(spec: ModuleSpec, window: Optional[tuple] = None) -> AxiomReport:
    """Check the compatibility identity for generator pairs and basis vectors.

    Ungraded modules: ``window`` is the generator grade range (default
    ``[-2, 2]``).  Graded modules: ``window`` bounds basis grades (default the
    module's own window); generator grades run over every shift that fits and
    combinations leaving the window are counted as skipped.
    """
    report = AxiomReport()
    if not spec.graded:
        gens = generators(window or (-2, 2))
        for g1, g2, v in product(gens, gens, spec.basis()):
            _record(report, spec, g1, g2, v)
        return report
    lo, hi = window or spec.require_window()
    gens = generators((lo - hi, hi - lo))
    for g1, g2, v in product(gens, gens, spec.basis((lo, hi))):
        j = v.grade
        grades = (j + g2.grade, j + g1.grade, j + g1.grade + g2.grade)
        if not all(lo <= t <= hi for t in grades):
            report.skipped += 1
            continue
        _record(report, spec, g1, g2, v)
    return report


def _record(report: AxiomReport, spec, g1, g2, v) -> None:
    report.checked += 1
    res = module_axiom_residual(spec, g1, g2, v)
    if res:
        report.failures.append((g1, g2, v, res))


# -- rank-one tables over the even subalgebra -----------------------------------

@dataclass(frozen=True)
class ClvTable:
    """``L_i _u v_j = entry(i, j) v_{i+j}`` (``j`` is ``None`` when ungraded)."""

    entry: Callable[[int, Optional[int]], Poly] = field(compare=False)
    graded: bool = True
    window: Optional[tuple] = None
    tag: Optional[FamilyTag] = None


def make_clv(tag: FamilyTag, window: Optional[tuple] = None) -> ClvTable:
    if tag.family == "VA":
        pat = tag.pattern
        return ClvTable(lambda i, j: va_poly(pat[j], pat[i + j], tag.b), True, pat.window, tag)
    if tag.family != "V":
        raise ModuleError(f"{tag.family} is not a rank-one family")
    base = D + tag.a * LAM + tag.b
    if tag.c is not None:
        return ClvTable(lambda i, j: base * tag.c ** i, False, None, tag)
    return ClvTable(lambda i, j: base, True, window, tag)


def restrict_to_clv(spec: ModuleSpec, part: int, window: Optional[tuple] = None) -> ClvTable:
    """Restrict to the ``L_i``-action on the even (``0``) or odd (``1``) part."""
    kind = "x" if part == 0 else "y"
    if not spec.graded:
        return ClvTable(lambda i, j: spec.entry(L(i), BasisId(kind))[1], False, None)
    win = window or spec.window
    return ClvTable(lambda i, j: spec.entry(L(i), BasisId(kind, j))[1], True, win)


def _linear_form(p: Poly) -> tuple:
    """Split ``d + alpha*u + beta`` into ``(alpha, beta)``; raise NoMatch otherwise."""
    rest = p - D
    if Var.DEL in rest.variables() or rest.degree(Var.LAM1) > 1:
        raise NoMatch(f"{p} is not of the form d + alpha*u + beta")
    alpha = beta = Poly.const(0)
    for m, coef in rest.items():
        term = Poly({m: coef})
        if m[Var.LAM1]:
            alpha = alpha + substitute(term, {Var.LAM1: 1})
        else:
            beta = beta + term
    if alpha.variables() & {Var.LAM2, Var.LAM3}:
        raise NoMatch(f"{p} involves unexpected variables")
    return alpha, beta


def classify_clv(table: ClvTable, gen_window: tuple = (-2, 2)) -> FamilyTag:
    """Identify a rank-one table as ``V`` (with ``c`` when ungraded) or ``VA``."""
    if not table.graded:
        base = table.entry(0, None)
        alpha, beta = _linear_form(base)
        try:
            c = div_exact(table.entry(1, None), base)
        except NotDivisible:
            raise NoMatch("L_1 is not a scalar multiple of L_0") from None
        if c.variables() - {Var.PAR_A, Var.PAR_B, Var.PAR_C} or c.is_zero():
            raise NoMatch(f"ratio L_1 / L_0 = {c} is not a parameter scalar")
        tag = FamilyTag("V", a=alpha, b=beta, c=c)
        _verify_clv(table, make_clv(tag), gen_window)
        return tag
    if table.window is None:
        raise WindowRequired("graded rank-one table without a window")
    lo, hi = table.window
    forms = [_linear_form(table.entry(0, j)) for j in range(lo, hi + 1)]
    betas = {beta for _, beta in forms}
    if len(betas) != 1:
        raise NoMatch("constant terms differ across grades")
    beta = betas.pop()
    alphas = [alpha for alpha, _ in forms]
    if len(set(alphas)) == 1:
        tag = FamilyTag("V", a=alphas[0], b=beta)
        try:
            _verify_clv(table, make_clv(tag, table.window))
            return tag
        except NoMatch:
            pass
    if all(al.is_constant() and al.constant_value() in (0, 1) for al in alphas):
        pat = Pattern(lo, tuple(int(al.constant_value()) for al in alphas))
        tag = FamilyTag("VA", b=beta, pattern=pat)
        _verify_clv(table, make_clv(tag))
        return tag
    raise NoMatch("table matches neither V_{a,b} nor V_{A,b}")


def _verify_clv(table: ClvTable, expected: ClvTable, gen_window=(-2, 2)) -> None:
    if not table.graded:
        for i in range(gen_window[0], gen_window[1] + 1):
            if table.entry(i, None) != expected.entry(i, None):
                raise NoMatch(f"L_{i} entry differs from {expected.tag}")
        return
    lo, hi = table.window
    for j in range(lo, hi + 1):
        for t in range(lo, hi + 1):
            if table.entry(t - j, j) != expected.entry(t - j, j):
                raise NoMatch(f"L_{t - j} on v_{j} differs from {expected.tag}")


# -- rank-two classification ------------------------------------------------------

def _candidates(even: FamilyTag, odd: FamilyTag, graded: bool) -> list:
    out = []
    if even.family == "V" and odd.family == "V":
        if even.b != odd.b or even.c != odd.c:
            return out
        if odd.a == even.a + HALF:
            out.append(FamilyTag("M" if not graded else "Mgprime", a=even.a, b=even.b, c=even.c))
        if odd.a == even.a - HALF:
            out.append(FamilyTag("Mprime" if not graded else "Mg", a=even.a, b=even.b, c=even.c))
    elif graded and even.family == "V" and odd.family == "VA":
        if even.a == HALF and even.b == odd.b:
            out.append(FamilyTag("MA", b=odd.b, pattern=odd.pattern))
    elif graded and even.family == "VA" and odd.family == "V":
        if odd.a == HALF and even.b == odd.b:
            out.append(FamilyTag("MAprime", b=even.b, pattern=even.pattern))
    return out


def comparison_grid(spec: ModuleSpec, gen_window: tuple = (-2, 2), window=None):
    """Generator/basis pairs on which two tables are compared."""
    if not spec.graded:
        return [(g, v) for g in generators(gen_window) for v in spec.basis()]
    lo, hi = window or spec.require_window()
    pairs = []
    for g in generators((lo - hi, hi - lo)):
        for v in spec.basis((lo, hi)):
            if lo <= v.grade + g.grade <= hi:
                pairs.append((g, v))
    return pairs


def tables_equal(s1: ModuleSpec, s2: ModuleSpec, gen_window=(-2, 2), window=None) -> bool:
    return all(s1.entry(g, v) == s2.entry(g, v)
               for g, v in comparison_grid(s1, gen_window, window))


def classify_rank2(spec: ModuleSpec, gen_window: tuple = (-2, 2),
                   window: Optional[tuple] = None) -> FamilyTag:
    """Family tag of a rank-two table, up to rescaling the odd basis by a constant.

    Parameters are read off the restrictions to the two parity parts; the
    candidate family is then compared entry by entry.
    """
    if spec.graded:
        window = window or spec.window or (-2, 2)
        spec = ModuleSpec(spec.tag, spec.rule, graded=True, window=window)
    even = classify_clv(restrict_to_clv(spec, 0, window), gen_window)
    odd = classify_clv(restrict_to_clv(spec, 1, window), gen_window)
    probe = BasisId("x", window[0] if spec.graded else None)
    for tag in _candidates(even, odd, spec.graded):
        expected = make_module(tag)
        got = spec.entry(G(0), probe)[1]
        want = expected.entry(G(0), probe)[1]
        try:
            gamma = div_exact(got, want)
        except NotDivisible:
            continue
        if not gamma.is_constant() or gamma.is_zero():
            continue
        try:
            if tables_equal(rescale_odd(spec, gamma), expected, gen_window, window):
                return tag
        except (NotDivisible, PolyError):
            continue
    raise NoMatch(f"no rank-two family matches (even part {even}, odd part {odd})")
