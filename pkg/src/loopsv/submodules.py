"""Submodules of free rank-two modules over ``Q[d]``.

A submodule is stored by its Hermite-style canonical basis: rows in echelon
form over the column layout ``(x, y)`` (ungraded) or
``(x_lo, y_lo, ..., x_hi, y_hi)`` (graded), monic pivots, and entries above
each pivot reduced modulo it.  Two generating sets of the same submodule give
identical canonical bases, so submodule equality is a plain ``==``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .core import generators as generator_range
from .elements import BasisId, Combination, GenId, L, G
from .modules import ModuleError, ModuleSpec, OutOfWindow, WindowRequired, act
from .poly import (
    D, NotDivisible, NotUnivariate, Poly, Var, coeffs_in, dense_add, dense_divmod,
    dense_gcdex, dense_mul, dense_scale, dense_sub, div_exact, from_dense, to_dense,
)

MAX_PASSES = 1000


class SubmoduleError(ValueError):
    pass


class LayoutMismatch(SubmoduleError):
    pass


class NonTermination(SubmoduleError):
    pass


class SymbolicParameters(SubmoduleError):
    pass


class WindowTooSmall(SubmoduleError):
    pass


def layout_for(spec: ModuleSpec, window: Optional[tuple] = None) -> tuple:
    if not spec.graded:
        return (BasisId("x"), BasisId("y"))
    if window is None:
        window = spec.window
    if window is None:
        raise WindowRequired("graded module needs a window")
    lo, hi = window
    return tuple(BasisId(k, j) for j in range(lo, hi + 1) for k in ("x", "y"))


def _dense(p: Poly) -> tuple:
    try:
        return to_dense(p)
    except NotUnivariate:
        raise SymbolicParameters(
            f"coefficient {p} is not a rational polynomial in d; evaluate parameters first"
        ) from None


@dataclass(frozen=True)
class RowVector:
    """One element ``sum_k f_k(d) e_k`` in a fixed column layout."""

    layout: tuple
    entries: tuple  # dense coefficient tuples, lowest degree first

    @classmethod
    def from_element(cls, elem: Combination, layout: Sequence[BasisId]) -> "RowVector":
        layout = tuple(layout)
        index = {b: k for k, b in enumerate(layout)}
        entries = [()] * len(layout)
        for key, coef in elem.items():
            if key not in index:
                raise LayoutMismatch(f"{key} is not a column of this layout")
            entries[index[key]] = _dense(coef)
        return cls(layout, tuple(entries))

    @classmethod
    def zero(cls, layout: Sequence[BasisId]) -> "RowVector":
        return cls(tuple(layout), ((),) * len(layout))

    def is_zero(self) -> bool:
        return not any(self.entries)

    def polys(self) -> list:
        return [from_dense(e) for e in self.entries]

    def to_element(self) -> Combination:
        return Combination({b: from_dense(e) for b, e in zip(self.layout, self.entries) if e})

    def __str__(self) -> str:
        return str(self.to_element())


def _check_layout(layout, other) -> None:
    if tuple(layout) != tuple(other):
        raise LayoutMismatch("rows use different column layouts")


def _row_combine(r1: list, s: tuple, r2: list, t: tuple) -> list:
    return [dense_add(dense_mul(s, a), dense_mul(t, b)) for a, b in zip(r1, r2)]


def _row_submul(r: list, q: tuple, pivot_row: list) -> list:
    return [dense_sub(a, dense_mul(q, b)) for a, b in zip(r, pivot_row)]


@dataclass(frozen=True)
class CanonicalBasis:
    layout: tuple
    rows: tuple  # RowVector, echelon with strictly increasing pivot columns

    def pivots(self) -> list:
        return [next(k for k, e in enumerate(r.entries) if e) for r in self.rows]

    def to_elements(self) -> list:
        return [r.to_element() for r in self.rows]

    def __len__(self) -> int:
        return len(self.rows)

    def contains(self, v) -> bool:
        return reduce(v, self).is_zero()

    def is_full(self) -> bool:
        """True iff the rows span the whole free module."""
        n = len(self.layout)
        return len(self.rows) == n and all(r.entries[k] == (Fraction(1),)
                                           for k, r in enumerate(self.rows))

    def __str__(self) -> str:
        if not self.rows:
            return "0"
        return "{" + ", ".join(str(r) for r in self.rows) + "}"


def full_basis(layout: Sequence[BasisId]) -> CanonicalBasis:
    layout = tuple(layout)
    n = len(layout)
    rows = tuple(RowVector(layout, tuple((Fraction(1),) if k == i else () for k in range(n)))
                 for i in range(n))
    return CanonicalBasis(layout, rows)


def canonicalize(rows: Iterable, layout: Optional[Sequence[BasisId]] = None) -> CanonicalBasis:
    """Echelon form over ``Q[d]`` by gcd row operations (unimodular steps only)."""
    rows = list(rows)
    if layout is None:
        if not rows:
            raise LayoutMismatch("cannot infer the layout of an empty row list")
        layout = rows[0].layout
    layout = tuple(layout)
    work = []
    for r in rows:
        _check_layout(layout, r.layout)
        if not r.is_zero():
            work.append(list(r.entries))
    result = []
    for col in range(len(layout)):
        active = [r for r in work if r[col]]
        rest = [r for r in work if not r[col]]
        if not active:
            continue
        pivot = active[0]
        for other in active[1:]:
            p, q = pivot[col], other[col]
            g, s, t = dense_gcdex(p, q)
            pg, _ = dense_divmod(p, g)
            qg, _ = dense_divmod(q, g)
            new_pivot = _row_combine(pivot, s, other, t)
            leftover = _row_combine(other, pg, pivot, dense_scale(qg, Fraction(-1)))
            pivot = new_pivot
            if any(leftover):
                rest.append(leftover)
        lead = pivot[col][-1]
        if lead != 1:
            pivot = [dense_scale(e, 1 / lead) for e in pivot]
        result.append((col, pivot))
        work = rest
    for k, (col, prow) in enumerate(result):
        for i in range(k):
            other = result[i][1]
            if other[col]:
                quo, _ = dense_divmod(other[col], prow[col])
                if quo:
                    result[i] = (result[i][0], _row_submul(other, quo, prow))
    return CanonicalBasis(layout, tuple(RowVector(layout, tuple(r)) for _, r in result))


def reduce(v, basis: CanonicalBasis) -> RowVector:
    """Remainder of ``v`` modulo the rows; zero exactly when ``v`` is in the submodule."""
    if isinstance(v, Combination):
        v = RowVector.from_element(v, basis.layout)
    _check_layout(basis.layout, v.layout)
    entries = list(v.entries)
    for row, col in zip(basis.rows, basis.pivots()):
        if entries[col]:
            quo, _ = dense_divmod(entries[col], row.entries[col])
            if quo:
                entries = _row_submul(entries, quo, list(row.entries))
    return RowVector(basis.layout, tuple(entries))


# -- closure under the action -------------------------------------------------------

@dataclass
class Closure:
    basis: CanonicalBasis
    skipped: int = 0
    passes: int = 0

    @property
    def truncated(self) -> bool:
        return self.skipped > 0


def lambda_rows(elem: Combination, layout: tuple) -> list:
    """Split a ``u``-valued element into its ``u^k`` coefficient rows."""
    by_degree: dict = {}
    for key, coef in elem.items():
        for k, q in coeffs_in(coef, Var.LAM1):
            by_degree.setdefault(k, {})[key] = q
    return [RowVector.from_element(Combination(by_degree[k]), layout) for k in sorted(by_degree)]


def default_generators(spec: ModuleSpec, window: Optional[tuple] = None) -> list:
    if not spec.graded:
        return [L(0), G(0)]
    lo, hi = window or spec.require_window()
    return generator_range((lo - hi, hi - lo))


def check_scalar_multiples(spec: ModuleSpec, grades: Iterable[int] = range(-2, 3)) -> None:
    """Ungraded tables: every ``L_i``/``G_i`` must be a scalar times ``L_0``/``G_0``.

    This is what makes ``{L_0, G_0}`` enough for closure computations.
    """
    for kind in ("L", "G"):
        for v in spec.basis():
            out0, p0 = spec.entry(GenId(kind, 0), v)
            for i in grades:
                out, p = spec.entry(GenId(kind, i), v)
                if out != out0:
                    raise ModuleError(f"{kind}_{i} on {v} changes target basis vector")
                if p0.is_zero() and p.is_zero():
                    continue
                ratio = None
                try:
                    ratio = div_exact(p, p0)
                except NotDivisible:
                    pass
                if ratio is None or not ratio.is_constant() or ratio.is_zero():
                    raise ModuleError(f"{kind}_{i} on {v} is not a nonzero multiple of {kind}_0")


def _act_rows(spec, g, v: RowVector, layout) -> list:
    return lambda_rows(act(spec, g, v.to_element()), layout)


def close_under_actions(spec: ModuleSpec, seeds: Iterable, generators: Optional[list] = None,
                        window: Optional[tuple] = None, max_passes: int = MAX_PASSES) -> Closure:
    """Smallest submodule containing ``seeds`` and closed under the generators.

    For graded modules, actions whose output would leave ``window`` are
    skipped and counted; the result is then only a window-truncated closure.
    """
    if spec.graded:
        window = window or spec.window
        if window is None:
            raise WindowRequired("graded closure needs a window")
    layout = layout_for(spec, window)
    if generators is None:
        if not spec.graded:
            check_scalar_multiples(spec)
        generators = default_generators(spec, window)
    queue = [s if isinstance(s, RowVector) else RowVector.from_element(s, layout) for s in seeds]
    for s in queue:
        _check_layout(layout, s.layout)
    basis = canonicalize(queue, layout)
    queue = [s for s in queue if not s.is_zero()]
    skipped = passes = 0
    while queue:
        passes += 1
        if passes > max_passes:
            raise NonTermination(f"closure did not stabilise after {max_passes} passes")
        fresh = []
        for v in queue:
            for g in generators:
                try:
                    rows = _act_rows(spec, g, v, layout)
                except OutOfWindow:
                    skipped += 1
                    continue
                except LayoutMismatch:
                    skipped += 1
                    continue
                for row in rows:
                    if not reduce(row, basis).is_zero():
                        basis = canonicalize(list(basis.rows) + [row], layout)
                        fresh.append(row)
        queue = fresh
    return Closure(basis, skipped, passes)


@dataclass
class ClosedCheck:
    closed: bool
    checked: int = 0
    skipped: int = 0
    witness: Optional[tuple] = None  # (generator, row, escaping row)


def action_closed(spec: ModuleSpec, basis: CanonicalBasis, generators: Optional[list] = None,
                  window: Optional[tuple] = None) -> ClosedCheck:
    """Check that every generator maps every row back into the submodule."""
    layout = basis.layout
    if generators is None:
        generators = default_generators(spec, window or (spec.window if spec.graded else None))
    report = ClosedCheck(True)
    for row in basis.rows:
        for g in generators:
            try:
                rows = _act_rows(spec, g, row, layout)
            except (OutOfWindow, LayoutMismatch):
                report.skipped += 1
                continue
            report.checked += 1
            for out in rows:
                if not reduce(out, basis).is_zero():
                    report.closed = False
                    if report.witness is None:
                        report.witness = (g, row, out)
    return report


# -- irreducibility probe ------------------------------------------------------------

@dataclass
class ProbeResult:
    verdict: str  # "AllFull" or "FoundProper"
    trials: int
    proper: list = field(default_factory=list)  # distinct proper closures
    rng_seed: int = 0

    @property
    def all_full(self) -> bool:
        return self.verdict == "AllFull"


def random_dense(rng: random.Random, max_deg: int) -> tuple:
    coeffs = [Fraction(rng.randint(-3, 3)) for _ in range(rng.randint(0, max_deg) + 1)]
    while coeffs and not coeffs[-1]:
        coeffs.pop()
    return tuple(coeffs)


def random_row(rng: random.Random, layout: tuple, max_deg: int,
               within: Optional[CanonicalBasis] = None) -> RowVector:
    """Random nonzero row; drawn from ``within`` when given."""
    while True:
        if within is None:
            entries = tuple(random_dense(rng, max_deg) for _ in layout)
        else:
            acc = [()] * len(layout)
            for row in within.rows:
                acc = [dense_add(a, dense_mul(random_dense(rng, max_deg), e))
                       for a, e in zip(acc, row.entries)]
            entries = tuple(acc)
        if any(entries):
            return RowVector(tuple(layout), entries)


def irreducibility_probe(spec: ModuleSpec, trials: int = 20, max_deg: int = 3, rng_seed: int = 0,
                         within: Optional[CanonicalBasis] = None) -> ProbeResult:
    """Close random nonzero seeds; ``AllFull`` iff every closure is the whole module."""
    if spec.graded:
        raise SubmoduleError("the irreducibility probe handles ungraded modules only")
    rng = random.Random(rng_seed)
    layout = layout_for(spec)
    full = full_basis(layout)
    proper = []
    for _ in range(trials):
        seed = random_row(rng, layout, max_deg, within)
        closure = close_under_actions(spec, [seed]).basis
        if closure != full and closure not in proper:
            proper.append(closure)
    return ProbeResult("AllFull" if not proper else "FoundProper", trials, proper, rng_seed)


# -- claimed graded submodules ------------------------------------------------------

def delta(pattern, j: int, b: Poly) -> Poly:
    """``d + b`` where the pattern bit is 0, ``1`` where it is 1."""
    return D + b if pattern[j] == 0 else Poly.const(1)


def expected_graded_submodule(spec: ModuleSpec, index_set: Sequence[int], coeffs: Sequence,
                              window: Optional[tuple] = None) -> CanonicalBasis:
    """Rows ``sum_i c_i e_{i+k}`` (with the family's factors) for every shift ``k`` in the window.

    ``Mg``: factor ``d + b`` on the x-row when ``a = 0``, on the y-row when ``a = 1/2``.
    ``Mgprime``: on the x-row when ``a = 0``, on the y-row when ``a = -1/2``.
    ``MA``: plain x-row, y-row weighted by ``delta_{i+k}``.
    ``MAprime``: x-row weighted by ``delta_{i+k}``, plain y-row.
    """
    tag = spec.tag
    if tag is None or tag.family not in ("Mg", "Mgprime", "MA", "MAprime"):
        raise SubmoduleError("expected a tagged graded family")
    if not tag.is_numeric():
        raise SymbolicParameters("parameters must be rational")
    index_set = list(index_set)
    coeffs = [Fraction(c) for c in coeffs]
    if len(index_set) != len(coeffs) or not index_set:
        raise SubmoduleError("index set and coefficients must be nonempty and of equal length")
    window = window or spec.window
    if window is None:
        raise WindowRequired("graded submodule needs a window")
    lo, hi = window
    layout = layout_for(spec, window)
    b = tag.b
    ks = [k for k in range(lo - min(index_set), hi - max(index_set) + 1)]
    if not ks:
        raise WindowTooSmall(f"no shifted copy of {index_set} fits in [{lo}, {hi}]")

    one = Poly.const(1)
    x_factor = y_factor = one
    if tag.family in ("Mg", "Mgprime"):
        a = tag.a.constant_value()
        if a == 0:
            x_factor = D + b
        elif a == (Fraction(1, 2) if tag.family == "Mg" else Fraction(-1, 2)):
            y_factor = D + b

    def weight(kind: str, j: int) -> Poly:
        if tag.family == "MA" and kind == "y":
            return delta(tag.pattern, j, b)
        if tag.family == "MAprime" and kind == "x":
            return delta(tag.pattern, j, b)
        return x_factor if kind == "x" else y_factor

    rows = []
    for k in ks:
        for kind in ("x", "y"):
            elem = Combination({BasisId(kind, i + k): ci * weight(kind, i + k)
                                for i, ci in zip(index_set, coeffs)})
            rows.append(RowVector.from_element(elem, layout))
    return canonicalize(rows, layout)
