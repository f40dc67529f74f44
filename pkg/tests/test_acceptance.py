"""Acceptance criteria, one test each.

Every test prints a single ``ACCEPTANCE <n> PASS|FAIL`` line (outside pytest's
capture) with its timing, then asserts.  All comparisons are exact.
"""

import random
import time
from fractions import Fraction
from itertools import product

import pytest

from loopsv.core import check_loop_super_jacobi, loop_generators, verify_axioms
from loopsv.derivations import (
    DerivationSpec, ad, check_derivation, extend_from_seed, inner_generator,
)
from loopsv.elements import Combination, GenId
from loopsv.expr import parse_element, print_canonical
from loopsv.modules import (
    FamilyTag, ModuleSpec, Pattern, check_module_axioms, classify_rank2, make_module, mutate,
    rescale_odd,
)
from loopsv.poly import A, B, C, D, Poly
from loopsv.submodules import (
    action_closed, close_under_actions, expected_graded_submodule, irreducibility_probe,
)

HALF = Fraction(1, 2)
RNG_SEED = 20240601


@pytest.fixture
def report(capsys):
    def emit(n, ok, elapsed, limit, detail=""):
        ok_time = elapsed < limit
        status = "PASS" if ok and ok_time else "FAIL"
        line = f"ACCEPTANCE {n:>2} {status}  {elapsed:6.2f}s (limit {limit}s)  {detail}"
        with capsys.disabled():
            print("\n" + line)
        assert ok, detail
        assert ok_time, f"took {elapsed:.2f}s, limit {limit}s"
    return emit


def windowed(tag, window):
    spec = make_module(tag)
    return ModuleSpec(spec.tag, spec.rule, graded=True, window=window)


def test_01_algebra_axioms(report):
    t0 = time.perf_counter()
    counts = {"skew": 0, "jacobi": 0}
    bad = []
    for kind, gens, res in verify_axioms((-3, 3)):
        counts[kind] += 1
        if res:
            bad.append((kind, gens))
    ok = not bad and counts == {"skew": 14**2, "jacobi": 14**3}
    report(1, ok, time.perf_counter() - t0, 10,
           f"skew {counts['skew']} pairs, jacobi {counts['jacobi']} triples, {len(bad)} nonzero")


def test_02_loop_super_jacobi(report):
    t0 = time.perf_counter()
    gens = loop_generators(range(-2, 3), [-3 * HALF, -HALF, HALF, 3 * HALF], range(-1, 2))
    bad = sum(1 for x, y, z in product(gens, repeat=3) if check_loop_super_jacobi(x, y, z))
    report(2, bad == 0 and len(gens) == 27, time.perf_counter() - t0, 5,
           f"{len(gens) ** 3} triples, {bad} nonzero")


def test_03_ungraded_module_axioms_symbolic(report):
    t0 = time.perf_counter()
    details, ok = [], True
    for fam in ("M", "Mprime"):
        res = check_module_axioms(make_module(FamilyTag(fam, a=A, b=B, c=C)), (-2, 2))
        ok &= res.ok and res.checked == 10 * 10 * 2
        details.append(f"{fam}: {res.checked} checked, {len(res.failures)} nonzero")
    report(3, ok, time.perf_counter() - t0, 10, "; ".join(details))


def test_04_graded_module_axioms(report):
    t0 = time.perf_counter()
    specs = [
        windowed(FamilyTag("Mg", a=A, b=B), (-2, 1)),
        windowed(FamilyTag("Mgprime", a=A, b=B), (-2, 1)),
        make_module(FamilyTag("MA", b=2, pattern=Pattern.from_string("0110", -2))),
        make_module(FamilyTag("MAprime", b=2, pattern=Pattern.from_string("0110", -2))),
    ]
    details, ok = [], True
    for spec in specs:
        res = check_module_axioms(spec)
        ok &= res.ok and res.checked > 0
        details.append(f"{spec.tag.family}: {res.checked} ok/{len(res.failures)} bad/"
                       f"{res.skipped} skipped")
    report(4, ok, time.perf_counter() - t0, 20, "; ".join(details))


def test_05_reducible_ungraded_cases(report):
    t0 = time.perf_counter()
    cases = [(FamilyTag("M", a=0, b=2, c=3), "(d+2)*x", "{(d + 2)*x, y}"),
             (FamilyTag("Mprime", a=HALF, b=2, c=3), "(d+2)*y", "{x, (d + 2)*y}")]
    ok, details = True, []
    for tag, seed, want in cases:
        spec = make_module(tag)
        got = print_canonical(close_under_actions(spec, [parse_element(seed, "module")]).basis)
        probe = irreducibility_probe(spec, trials=20, max_deg=3, rng_seed=RNG_SEED)
        others = [print_canonical(b) for b in probe.proper if print_canonical(b) != want]
        ok &= got == want and not others
        details.append(f"{tag.family}: closure {got}, probe proper {len(probe.proper)}, "
                       f"unexpected {len(others)}")
    report(5, ok, time.perf_counter() - t0, 10, "; ".join(details))


def test_06_irreducible_ungraded_cases(report):
    t0 = time.perf_counter()
    tags = [FamilyTag("M", a=1, b=0, c=1), FamilyTag("M", a=-HALF, b=2, c=3),
            FamilyTag("M", a=2, b=-1, c=HALF)]
    tags += [FamilyTag("Mprime", a=a, b=1, c=2) for a in (0, 1, -HALF)]
    verdicts = [irreducibility_probe(make_module(t), trials=20, max_deg=3,
                                     rng_seed=RNG_SEED).verdict for t in tags]
    report(6, all(v == "AllFull" for v in verdicts), time.perf_counter() - t0, 30,
           ", ".join(f"{t.family}(a={t.a}): {v}" for t, v in zip(tags, verdicts)))


def test_07_derivation_roundtrip(report):
    t0 = time.perf_counter()
    rng = random.Random(RNG_SEED)
    checked, bad = 0, []
    for _ in range(10):
        p = Poly.const(0)
        while p.is_zero():
            p = sum((rng.randint(-5, 5) * D**k for k in range(rng.randint(0, 4) + 1)),
                    Poly.const(0))
        for c, kind in product((-2, 0, 5), "LG"):
            x = Combination({GenId(kind, c): p})
            spec = ad(x, (-4, 4))
            res = check_derivation(spec, (-2, 2))
            back = inner_generator(spec)
            seed = spec.f[0] if kind == "L" else spec.g[0]
            again = extend_from_seed(spec.parity, c, seed, (-4, 4))
            checked += 1
            if not res.ok or res.skipped or back != x or (again.f, again.g) != (spec.f, spec.g):
                bad.append(print_canonical(x))
    report(7, not bad, time.perf_counter() - t0, 10,
           f"{checked} generators, {len(bad)} mismatches {bad[:3]}")


def _random_tag(rng, family):
    def q(nonzero=False):
        while True:
            v = Fraction(rng.randint(-6, 6), rng.randint(1, 4))
            if v or not nonzero:
                return v
    if family in ("M", "Mprime"):
        return FamilyTag(family, a=q(), b=q(), c=q(nonzero=True))
    if family in ("Mg", "Mgprime"):
        return FamilyTag(family, a=q(), b=q())
    # constant patterns give Mg / Mgprime with a = 1/2, so they are excluded here
    bits = [0, 0]
    while len(set(bits)) == 1:
        bits = [rng.randint(0, 1) for _ in range(4)]
    return FamilyTag(family, b=q(), pattern=Pattern(rng.randint(-3, 0), tuple(bits)))


def test_08_classifier_roundtrips(report):
    t0 = time.perf_counter()
    rng = random.Random(RNG_SEED)
    total, bad = 0, []
    for family in ("M", "Mprime", "Mg", "Mgprime", "MA", "MAprime"):
        for _ in range(5):
            tag = _random_tag(rng, family)
            spec = make_module(tag)
            if tag.graded and spec.window is None:
                spec = windowed(tag, (-2, 2))
            gamma = Fraction(rng.choice([-1, 1]) * rng.randint(1, 7), rng.randint(1, 5))
            for table in (spec, rescale_odd(spec, gamma)):
                total += 1
                if classify_rank2(table) != tag:
                    bad.append(str(tag))
    report(8, not bad, time.perf_counter() - t0, 10, f"{total} roundtrips, {len(bad)} wrong {bad[:2]}")


def _graded_case(spec, index_set, coeffs, seed_text):
    expected = expected_graded_submodule(spec, index_set, coeffs)
    closed = action_closed(spec, expected)
    closure = close_under_actions(spec, [parse_element(seed_text, "module")])
    return closed.closed, closure.basis == expected, closed


def test_09_graded_submodule_forms(report):
    t0 = time.perf_counter()
    pattern = Pattern.from_string("010101010", -4)
    cases = [
        ("M_{1,2}", windowed(FamilyTag("Mg", a=1, b=2), (-4, 4)), [0, 1], [1, 2], "x(0) + 2*x(1)"),
        ("M_{0,2}", windowed(FamilyTag("Mg", a=0, b=2), (-4, 4)), [0], [1], "(d+2)*x(0)"),
        ("M_{A,2}", make_module(FamilyTag("MA", b=2, pattern=pattern)), [0], [1], "x(0)"),
    ]
    ok, details = True, []
    for name, spec, index_set, coeffs, seed in cases:
        closed, reproduced, check = _graded_case(spec, index_set, coeffs, seed)
        ok &= closed and reproduced
        note = f"{name}: closed={closed} reproduced={reproduced}"
        if check.witness is not None:
            g, _, escaping = check.witness
            note += f" (escapes under {g}: {print_canonical(escaping.to_element())})"
        details.append(note)
    report(9, ok, time.perf_counter() - t0, 30, "; ".join(details))


def _bump(spec, gen_kind, basis_kind):
    return mutate(spec, gen_kind, basis_kind, lambda g, v, p: p + 1)


def test_10_negative_controls(report):
    t0 = time.perf_counter()
    pat = Pattern.from_string("0110", -2)
    bases = [
        (make_module(FamilyTag("M", a=A, b=B, c=C)), (-1, 1)),
        (make_module(FamilyTag("Mprime", a=A, b=B, c=C)), (-1, 1)),
        (windowed(FamilyTag("Mg", a=A, b=B), (-1, 1)), None),
        (windowed(FamilyTag("Mgprime", a=A, b=B), (-1, 1)), None),
        (make_module(FamilyTag("MA", b=2, pattern=pat)), None),
        (make_module(FamilyTag("MAprime", b=2, pattern=pat)), None),
    ]
    missed = []
    for spec, window in bases:
        for gk, bk in product("LG", "xy"):
            if check_module_axioms(_bump(spec, gk, bk), window).ok:
                missed.append(f"{spec.tag.family}:{gk}.{bk}")
    inner = ad(parse_element("(d+1)*L(1)"), (-3, 3))
    f = dict(inner.f)
    f[0] = f[0] + 1
    mutated = DerivationSpec(inner.degree, inner.parity, inner.window, f, inner.g)
    if check_derivation(mutated, (-1, 1)).ok:
        missed.append("derivation")
    report(10, not missed, time.perf_counter() - t0, 10,
           f"{len(bases) * 4 + 1} mutations, undetected: {missed or 'none'}")
