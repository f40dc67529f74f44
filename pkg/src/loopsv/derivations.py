"""Conformal superderivations of the loop super-Virasoro conformal superalgebra.

A homogeneous derivation of degree ``c`` sends grade ``i`` to grade ``i + c``:

    even:  D(L_i) = f_i L_{i+c},   D(G_i) = g_i G_{i+c}
    odd:   D(L_i) = g_i G_{i+c},   D(G_i) = f_i L_{i+c}

so ``f`` always holds the coefficients landing on ``L`` and ``g`` those landing
on ``G``.  Coefficients are polynomials in ``d`` and ``u`` (the bracket
variable of ``D_u``).  The identity checked is

    D_u [a_v b] = [[D_u a]_{u+v} b] + (-1)^{p|a|} [a_v [D_u b]].
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Optional

from .core import HALF, NotHomogeneous, as_element, bracket, generators, sign
from .elements import Combination, GenId
from .poly import D, LAM, MU, NotDivisible, Poly, Var, div_exact, substitute


class DerivationError(ValueError):
    pass


class SeedNotDivisible(DerivationError):
    pass


class NotInner(DerivationError):
    pass


class OutsideWindow(DerivationError):
    pass


def _parity_name(p: int) -> str:
    return "odd" if p else "even"


def parse_parity(value) -> int:
    if value in (0, 1):
        return int(value)
    text = str(value).strip().lower()
    if text in ("even", "0"):
        return 0
    if text in ("odd", "1"):
        return 1
    raise DerivationError(f"parity must be even or odd, got {value!r}")


@dataclass(frozen=True)
class DerivationSpec:
    """A homogeneous derivation stored on the source grades ``window``."""

    degree: int
    parity: int
    window: tuple
    f: dict  # grade -> Poly, coefficient of the L-image
    g: dict  # grade -> Poly, coefficient of the G-image

    def __post_init__(self):
        lo, hi = self.window
        for name in ("f", "g"):
            table = getattr(self, name)
            missing = [i for i in range(lo, hi + 1) if i not in table]
            if missing:
                raise DerivationError(f"{name} has no entry for grades {missing}")

    def image(self, x: GenId) -> Combination:
        lo, hi = self.window
        if not lo <= x.grade <= hi:
            raise OutsideWindow(f"{x} outside derivation window [{lo}, {hi}]")
        target_parity = x.parity ^ self.parity
        kind = "G" if target_parity else "L"
        coef = (self.g if kind == "G" else self.f)[x.grade]
        return Combination({GenId(kind, x.grade + self.degree): coef})

    def to_map(self) -> "ImageMap":
        lo, hi = self.window
        return ImageMap({x: self.image(x) for x in generators((lo, hi))}, self.window)

    def __str__(self) -> str:
        return f"{_parity_name(self.parity)} derivation of degree {self.degree} on {list(self.window)}"


@dataclass(frozen=True)
class ImageMap:
    """A not necessarily homogeneous derivation, given by its generator images."""

    images: dict  # GenId -> Combination with coefficients in d, u
    window: tuple

    def image(self, x: GenId) -> Combination:
        if x not in self.images:
            raise OutsideWindow(f"{x} outside derivation window {list(self.window)}")
        return self.images[x]

    def __add__(self, other: "ImageMap") -> "ImageMap":
        if self.window != other.window:
            raise DerivationError("cannot add derivations stored on different windows")
        return ImageMap({x: self.images[x] + other.images[x] for x in self.images}, self.window)

    def components(self) -> dict:
        """Split into homogeneous pieces keyed by ``(degree, parity)``."""
        parts: dict = {}
        for x, img in self.images.items():
            for target, coef in img.items():
                key = (target.grade - x.grade, target.parity ^ x.parity)
                parts.setdefault(key, {})[x] = (target, coef)
        out = {}
        zero = Poly.const(0)
        lo, hi = self.window
        for (deg, par), entries in sorted(parts.items()):
            f, g = {}, {}
            for x in generators((lo, hi)):
                target_kind = "G" if x.parity ^ par else "L"
                coef = entries[x][1] if x in entries else zero
                (g if target_kind == "G" else f)[x.grade] = coef
            out[deg, par] = DerivationSpec(deg, par, self.window, f, g)
        return out


def ad(x, window: tuple = (-2, 2)) -> DerivationSpec:
    """Inner derivation ``b -> [x_u b]`` of a grade- and parity-homogeneous ``x``."""
    elem = as_element(x)
    if not elem:
        raise NotHomogeneous("zero element has no degree")
    grades = {k.grade for k in elem}
    parities = {k.parity for k in elem}
    if len(grades) > 1 or len(parities) > 1:
        raise NotHomogeneous(f"{elem} is not homogeneous in grade and parity")
    m = ad_map(elem, window)
    (key, spec), = m.components().items()
    return spec


def ad_map(x, window: tuple = (-2, 2)) -> ImageMap:
    elem = as_element(x)
    return ImageMap({y: bracket(elem, y, LAM) for y in generators(window)}, tuple(window))


def apply(D_, elem: Combination) -> Combination:
    """``D_u`` on an element, using ``D_u(h(d) a) = h(d + u) D_u(a)``."""
    out = Combination()
    shift = {Var.DEL: D + LAM}
    for x, h in elem.items():
        out = out + D_.image(x).map_coeffs(lambda p, h=substitute(h, shift): h * p)
    return out


@dataclass
class DerivationReport:
    checked: int = 0
    skipped: int = 0
    failures: list = field(default_factory=list)  # (a, b, residual)

    @property
    def ok(self) -> bool:
        return not self.failures


def derivation_residual(D_, a: GenId, b: GenId, parity: int) -> Combination:
    lhs = apply(D_, bracket(a, b, MU))
    first = bracket(D_.image(a), b, LAM + MU)
    second = bracket(a, D_.image(b), MU)
    return lhs - first - second.scale(sign(parity, a.parity))


def check_derivation(D_, window: Optional[tuple] = None) -> DerivationReport:
    """Residuals for basis pairs with grades in ``window``.

    Pairs whose bracket lands outside the stored window are skipped.  A
    non-homogeneous :class:`ImageMap` is checked one parity part at a time.
    """
    if isinstance(D_, ImageMap):
        report = DerivationReport()
        by_parity: dict = {}
        for (deg, par), spec in D_.components().items():
            by_parity.setdefault(par, []).append(spec.to_map())
        for par, maps in sorted(by_parity.items()):
            total = maps[0]
            for m in maps[1:]:
                total = total + m
            _check_into(report, total, par, window or D_.window, D_.window)
        return report
    report = DerivationReport()
    _check_into(report, D_, D_.parity, window or D_.window, D_.window)
    return report


def _check_into(report, D_, parity, window, stored) -> None:
    lo, hi = stored
    for a, b in product(generators(window), repeat=2):
        if not all(lo <= t <= hi for t in (a.grade, b.grade, a.grade + b.grade)):
            report.skipped += 1
            continue
        report.checked += 1
        res = derivation_residual(D_, a, b, parity)
        if res:
            report.failures.append((a, b, res))


def extend_from_seed(parity, degree: int, seed: Poly, window: tuple = (-2, 2)) -> DerivationSpec:
    """The derivation forced by its grade-0 coefficient (``f_0`` even, ``g_0`` odd)."""
    parity = parse_parity(parity)
    at_diag = substitute(Poly.coerce(seed), {Var.DEL: -LAM})
    try:
        q = div_exact(at_diag, LAM)
    except NotDivisible:
        raise SeedNotDivisible(
            f"seed evaluated at d = -u is {at_diag}, which is not divisible by u") from None
    if parity == 0:
        f_all, g_all = (D + 2 * LAM) * q, (D + 3 * HALF * LAM) * q
    else:
        g_all, f_all = (HALF * D + 3 * HALF * LAM) * q, 2 * q
    lo, hi = window
    grades = range(lo, hi + 1)
    return DerivationSpec(degree, parity, tuple(window),
                          {i: f_all for i in grades}, {i: g_all for i in grades})


def inner_generator(D_: DerivationSpec) -> Combination:
    """``x`` with ``ad(x) = D`` on the window, read off the grade-0 coefficient."""
    lo, hi = D_.window
    i0 = 0 if lo <= 0 <= hi else lo
    seed = D_.f[i0] if D_.parity == 0 else D_.g[i0]
    at_anti = substitute(seed, {Var.LAM1: -D})
    try:
        p = div_exact(at_anti, -D)
    except NotDivisible:
        raise NotInner(f"{at_anti} is not divisible by -d") from None
    if Var.LAM1 in p.variables():
        raise NotInner("recovered coefficient still involves u")
    if p.is_zero():
        raise NotInner("recovered generator is zero")
    x = Combination({GenId("G" if D_.parity else "L", D_.degree): p})
    got = ad(x, D_.window)
    if got.f != D_.f or got.g != D_.g:
        raise NotInner(f"ad({x}) differs from the given derivation on {list(D_.window)}")
    return x
