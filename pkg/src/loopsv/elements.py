"""Basis symbols and finite linear combinations with polynomial coefficients."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Optional

from .poly import LAMBDA_VARS, Poly, format_poly, format_scalar


@dataclass(frozen=True)
class GenId:
    """Generator ``L_i`` or ``G_i`` of the conformal superalgebra."""

    kind: str
    grade: int

    def __post_init__(self):
        if self.kind not in ("L", "G"):
            raise ValueError(f"generator kind must be L or G, got {self.kind!r}")

    @property
    def parity(self) -> int:
        return 0 if self.kind == "L" else 1

    def sort_key(self):
        return (self.grade, self.parity)

    def __str__(self) -> str:
        return f"{self.kind}({self.grade})"


def L(i: int) -> GenId:
    return GenId("L", i)


def G(i: int) -> GenId:
    return GenId("G", i)


@dataclass(frozen=True)
class BasisId:
    """Module basis vector ``x``/``y`` (ungraded) or ``x_j``/``y_j`` (graded)."""

    kind: str
    grade: Optional[int] = None

    def __post_init__(self):
        if self.kind not in ("x", "y"):
            raise ValueError(f"basis kind must be x or y, got {self.kind!r}")

    @property
    def parity(self) -> int:
        return 0 if self.kind == "x" else 1

    def shifted(self, i: int) -> "BasisId":
        return self if self.grade is None else BasisId(self.kind, self.grade + i)

    def sort_key(self):
        return (self.grade if self.grade is not None else 0, self.parity)

    def __str__(self) -> str:
        return self.kind if self.grade is None else f"{self.kind}({self.grade})"


X = BasisId("x")
Y = BasisId("y")


@dataclass(frozen=True)
class LoopGenId:
    """Basis element ``L_{alpha,i}`` / ``G_{mu,i}`` of the loop superalgebra."""

    kind: str
    weight: Fraction
    loop: int
    _hash: int = field(init=False, repr=False, compare=False, default=0)

    def __post_init__(self):
        w = Fraction(self.weight)
        object.__setattr__(self, "weight", w)
        # Fraction hashing is slow and these keys are hashed constantly
        object.__setattr__(self, "_hash", hash((self.kind, w.numerator, w.denominator, self.loop)))
        if self.kind == "L":
            if w.denominator != 1:
                raise ValueError(f"L weights are integers, got {w}")
        elif self.kind == "G":
            if w.denominator != 2:
                raise ValueError(f"G weights lie in 1/2 + Z, got {w}")
        else:
            raise ValueError(f"loop generator kind must be L or G, got {self.kind!r}")

    def __hash__(self) -> int:
        return self._hash

    @property
    def parity(self) -> int:
        return 0 if self.kind == "L" else 1

    def sort_key(self):
        return (self.weight, self.loop, self.parity)

    def __str__(self) -> str:
        return f"{self.kind}({format_scalar(self.weight)}, {self.loop})"


class Combination:
    """Immutable finite sum ``sum_k coeff_k * key_k`` with nonzero coefficients.

    Keys are :class:`GenId`, :class:`BasisId` or :class:`LoopGenId`;
    coefficients are :class:`Poly` (or :class:`Fraction` for loop elements).
    """

    __slots__ = ("_data",)

    def __init__(self, data: Mapping | Iterable = ()):
        items = data.items() if isinstance(data, (dict, Mapping)) else data
        acc: dict = {}
        for key, coef in items:
            if key in acc:
                acc[key] = acc[key] + coef
            else:
                acc[key] = coef
        self._data = {k: v for k, v in acc.items() if v}

    @classmethod
    def single(cls, key, coef=None) -> "Combination":
        return cls({key: Poly.const(1) if coef is None else coef})

    def __getitem__(self, key):
        return self._data[key]

    def get(self, key, default=None):
        return self._data.get(key, default)

    def __contains__(self, key) -> bool:
        return key in self._data

    def __iter__(self):
        return iter(self._data)

    def __len__(self) -> int:
        return len(self._data)

    def __bool__(self) -> bool:
        return bool(self._data)

    def keys(self):
        return self._data.keys()

    def items(self):
        return self._data.items()

    def sorted_items(self):
        return sorted(self._data.items(), key=lambda kv: kv[0].sort_key())

    def __add__(self, other: "Combination") -> "Combination":
        acc = dict(self._data)
        for k, v in other._data.items():
            acc[k] = acc[k] + v if k in acc else v
        return Combination(acc)

    def __neg__(self) -> "Combination":
        return Combination({k: -v for k, v in self._data.items()})

    def __sub__(self, other: "Combination") -> "Combination":
        return self + (-other)

    def scale(self, s) -> "Combination":
        return Combination({k: s * v for k, v in self._data.items()})

    def map_coeffs(self, fn: Callable) -> "Combination":
        return Combination({k: fn(v) for k, v in self._data.items()})

    def __eq__(self, other) -> bool:
        if not isinstance(other, Combination):
            return NotImplemented
        return self._data == other._data

    def __hash__(self) -> int:
        return hash(frozenset(self._data.items()))

    def variables(self) -> set:
        found = set()
        for v in self._data.values():
            if isinstance(v, Poly):
                found |= v.variables()
        return found

    def is_lambda_free(self) -> bool:
        return not (self.variables() & set(LAMBDA_VARS))

    def __repr__(self) -> str:
        return f"Combination({format_combination(self)!r})"

    def __str__(self) -> str:
        return format_combination(self)


ZERO_COMBINATION = Combination()


def _needs_parens(coef: Poly) -> bool:
    return len(coef.terms) > 1


def format_combination(comb: Combination) -> str:
    """Render as ``(d + 2)*x - 3*G(2)``; the empty combination prints ``0``."""
    if not comb:
        return "0"
    out = []
    for idx, (key, coef) in enumerate(comb.sorted_items()):
        atom = str(key)
        if not isinstance(coef, Poly):
            coef = Poly.const(coef)
        neg = False
        if _needs_parens(coef):
            body = f"({format_poly(coef)})*{atom}"
        else:
            (m, c), = coef.items()
            neg = c < 0
            mag = Poly._raw({m: -c if neg else c})
            body = atom if mag == 1 else f"{format_poly(mag)}*{atom}"
        if idx == 0:
            out.append(f"-{body}" if neg else body)
        else:
            out.append(f" - {body}" if neg else f" + {body}")
    return "".join(out)
