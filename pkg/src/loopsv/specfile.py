"""INI-style input files for the command line.

Sections (all optional, at least one of ``module``/``table`` for module commands)::

    [module]
    family = Mprime
    a = 3            ; rational, or "sym" for a symbolic parameter
    b = 1/2
    c = 2
    pattern = 0110   ; MA / MAprime only
    pattern_lo = -2
    rescale_y = 5    ; optional: rewrite in the odd basis 5*y

    [override]       ; replace table entries of [module], e.g. a mutation
    L.x = "d + 2*u"

    [table]          ; an untagged table given at generator grade 0
    c = 2
    graded = no
    window = -2, 1
    L.x = "d + 3*u + 1/2"
    L.y = ...
    G.x = ...
    G.y = ...

    [seed]
    element = "(d+2)*x + y"

    [derivation]
    parity = even
    degree = 2
    f0 = "(-u+1)*(d+2*u)"    ; or f(<i>) / g(<i>) per grade
"""

from __future__ import annotations

import configparser
import re
from dataclasses import dataclass
from typing import Optional

from .derivations import DerivationSpec, extend_from_seed, parse_parity
from .elements import Combination
from .expr import ExprError, parse_element, parse_poly
from .modules import (
    FamilyTag, ModuleError, ModuleSpec, Pattern, make_module, mutate, rescale_odd, table_module,
)
from .poly import A, B, C, Poly, PolyError

SYMBOLS = {"a": A, "b": B, "c": C}
TABLE_KEYS = ("L.x", "L.y", "G.x", "G.y")


class SpecFileError(ValueError):
    """Malformed input file; the message names the file, section and key."""


@dataclass
class SpecFile:
    path: str
    parser: configparser.ConfigParser

    def has(self, section: str) -> bool:
        return self.parser.has_section(section)

    def get(self, section: str, key: str, default: Optional[str] = None) -> Optional[str]:
        if not self.parser.has_option(section, key):
            return default
        return _unquote(self.parser.get(section, key))

    def where(self, section: str, key: str) -> str:
        return f"{self.path}: [{section}] {key}"


def _unquote(text: str) -> str:
    text = text.strip()
    if len(text) >= 2 and text[0] == text[-1] and text[0] in "\"'":
        return text[1:-1]
    return text


def read_specfile(path: str) -> SpecFile:
    parser = configparser.ConfigParser(inline_comment_prefixes=(";",), interpolation=None)
    parser.optionxform = str
    try:
        with open(path, encoding="utf-8") as fh:
            parser.read_file(fh, source=path)
    except OSError as exc:
        raise SpecFileError(f"{path}: {exc.strerror}") from None
    except configparser.Error as exc:
        raise SpecFileError(str(exc)) from None
    return SpecFile(path, parser)


def _poly_at(sf: SpecFile, section: str, key: str) -> Poly:
    text = sf.get(section, key)
    try:
        return parse_poly(text)
    except ExprError as exc:
        raise SpecFileError(f"{sf.where(section, key)}: {exc}") from None


def parse_param(text: Optional[str], name: str) -> Optional[Poly]:
    """A parameter value: a rational expression, or ``sym`` for the variable itself."""
    if text is None:
        return None
    text = _unquote(text)
    if text == "sym":
        return SYMBOLS[name]
    value = parse_poly(text)
    if not value.is_constant():
        raise SpecFileError(f"parameter {name} must be rational or sym, got {text!r}")
    return value


def _parse_int(text: str, what: str) -> int:
    try:
        return int(text)
    except (TypeError, ValueError):
        raise SpecFileError(f"{what}: expected an integer, got {text!r}") from None


def parse_window(text: str, what: str = "window") -> tuple:
    parts = [p for p in re.split(r"[,\s]+", _unquote(text).strip()) if p]
    if len(parts) != 2:
        raise SpecFileError(f"{what}: expected two integers 'lo, hi', got {text!r}")
    lo, hi = (_parse_int(p, what) for p in parts)
    if lo > hi:
        raise SpecFileError(f"{what}: empty window [{lo}, {hi}]")
    return lo, hi


def make_tag(family: str, a=None, b=None, c=None, pattern: Optional[str] = None,
             pattern_lo: int = 0) -> FamilyTag:
    try:
        pat = Pattern.from_string(pattern, pattern_lo) if pattern is not None else None
        return FamilyTag(family, parse_param(a, "a"), parse_param(b, "b"),
                         parse_param(c, "c"), pat)
    except ExprError as exc:
        raise SpecFileError(f"parameter: {exc}") from None
    except (ModuleError, PolyError, ValueError) as exc:
        if isinstance(exc, SpecFileError):
            raise
        raise SpecFileError(str(exc)) from None


def load_module(sf: SpecFile) -> ModuleSpec:
    if sf.has("module"):
        family = sf.get("module", "family")
        if family is None:
            raise SpecFileError(f"{sf.where('module', 'family')}: missing")
        tag = make_tag(family, sf.get("module", "a"), sf.get("module", "b"), sf.get("module", "c"),
                       sf.get("module", "pattern"),
                       _parse_int(sf.get("module", "pattern_lo", "0"), sf.where("module", "pattern_lo")))
        try:
            spec = make_module(tag)
        except ModuleError as exc:
            raise SpecFileError(f"{sf.path}: {exc}") from None
        if sf.has("override"):
            for key in sf.parser.options("override"):
                if key not in TABLE_KEYS:
                    raise SpecFileError(f"{sf.where('override', key)}: unknown table entry")
                value = _poly_at(sf, "override", key)
                spec = mutate(spec, key[0], key[2], lambda g, v, p, value=value: value)
        rescale = sf.get("module", "rescale_y")
        if rescale is not None:
            try:
                gamma = parse_poly(rescale)
            except ExprError as exc:
                raise SpecFileError(f"{sf.where('module', 'rescale_y')}: {exc}") from None
            if not gamma.is_constant() or gamma.is_zero():
                raise SpecFileError(f"{sf.where('module', 'rescale_y')}: must be a nonzero rational")
            spec = rescale_odd(spec, gamma)
        return spec
    if sf.has("table"):
        polys = {}
        for key in TABLE_KEYS:
            if sf.get("table", key) is None:
                raise SpecFileError(f"{sf.where('table', key)}: missing")
            polys[key[0], key[2]] = _poly_at(sf, "table", key)
        graded = sf.get("table", "graded", "no").lower() in ("yes", "true", "1")
        window = sf.get("table", "window")
        window = parse_window(window, sf.where("table", "window")) if window else None
        c = parse_param(sf.get("table", "c", "1"), "c")
        try:
            return table_module(polys, c=c, graded=graded, window=window)
        except (ModuleError, PolyError) as exc:
            raise SpecFileError(f"{sf.path}: [table] {exc}") from None
    raise SpecFileError(f"{sf.path}: needs a [module] or [table] section")


def load_seed(sf: SpecFile) -> Combination:
    text = sf.get("seed", "element")
    if text is None:
        raise SpecFileError(f"{sf.where('seed', 'element')}: missing")
    try:
        return parse_element(text, "module")
    except ExprError as exc:
        raise SpecFileError(f"{sf.where('seed', 'element')}: {exc}") from None


_INDEXED = re.compile(r"^([fg])\((-?\d+)\)$")


def load_derivation(sf: SpecFile, window: tuple = (-2, 2)) -> DerivationSpec:
    section = "derivation"
    if not sf.has(section):
        raise SpecFileError(f"{sf.path}: needs a [derivation] section")
    try:
        parity = parse_parity(sf.get(section, "parity", "even"))
    except ValueError as exc:
        raise SpecFileError(f"{sf.where(section, 'parity')}: {exc}") from None
    degree = _parse_int(sf.get(section, "degree", "0"), sf.where(section, "degree"))
    seed_key = "f0" if parity == 0 else "g0"
    indexed = {}
    for key in sf.parser.options(section):
        m = _INDEXED.match(key)
        if m:
            indexed[m.group(1), int(m.group(2))] = _poly_at(sf, section, key)
        elif key not in ("parity", "degree", "f0", "g0"):
            raise SpecFileError(f"{sf.where(section, key)}: unknown key")
    if indexed:
        grades = sorted({i for _, i in indexed})
        win = (grades[0], grades[-1])
        zero = Poly.const(0)
        f = {i: indexed.get(("f", i), zero) for i in range(win[0], win[1] + 1)}
        g = {i: indexed.get(("g", i), zero) for i in range(win[0], win[1] + 1)}
        return DerivationSpec(degree, parity, win, f, g)
    if sf.get(section, seed_key) is None:
        raise SpecFileError(f"{sf.where(section, seed_key)}: missing (or give f(i)/g(i) lines)")
    return extend_from_seed(parity, degree, _poly_at(sf, section, seed_key), window)
