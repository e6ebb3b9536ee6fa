"""Verification suites run by ``gkmcrystal verify`` and the acceptance tests.

Every check is a dict ``{"check", "status", "witnesses"}`` with status
``pass``, ``fail`` or ``n/a``.  All fixtures are bundled, so the suites are
hermetic.
"""

from __future__ import annotations

import json
import random
from importlib import resources
from itertools import product

from .cartan import IndexWord, Weight, format_weight, lift_weight, ordered_index
from .crystal import (CharacterElement, branch, default_assoc, embed_path, generate, is_dominant,
                      prv_check, tensor_decompose, tensor_highest_check, weight_space)
from .demazure import (associated_shadow_check, demazure_real, demazure_recursion_check,
                       verify_theorem3_subset, verify_theorem4)
from .monoid import (MonoidWord, act, block_form, check_lemma_422, satisfies_condition_4,
                     satisfies_condition_5, to_minimal_dominant_reduced, weyl_group_elements)
from .pathmodel import e_op, eps, f_op, phi, wt

SUITES = ("thm1", "thm2", "thm3", "thm4", "prv", "paper-examples", "invariants")


def _fixture(name):
    from . import load_fixture
    return load_fixture(name)


def _expected(name: str):
    ref = resources.files(__package__).joinpath("fixtures", "expected", f"{name}.json")
    with ref.open() as fh:
        return json.load(fh)


def _check(name: str, ok: bool, witnesses=None) -> dict:
    return {"check": name, "status": "pass" if ok else "fail", "witnesses": witnesses or []}


def _report(r) -> dict:
    return r.to_json()


# Demazure fixtures shared by the subset and character suites.

def demazure_cases():
    """Yield ``(label, datum, lam, form)`` for every Demazure fixture."""
    imag = _fixture("imag1")
    lam = imag.weight("lam1")
    for a in range(1, 11):
        yield f"imag1 lam1 r1^{a}", imag, lam, block_form(imag, ("1",) * a)
    mixed = _fixture("mixed")
    lam = mixed.weight("lam01")
    for text in ("r2", "r1 r2", "r2^2", "r1 r2^2"):
        word = MonoidWord.parse(text)
        yield f"mixed lam01 {text}", mixed, lam, to_minimal_dominant_reduced(mixed, word, lam)
    for name in ("a2", "b2"):
        datum = _fixture(name)
        lam = datum.weight("lam11")
        for w in weyl_group_elements(datum):
            label = MonoidWord(w) if w else "1"
            yield f"{name} lam11 {label}", datum, lam, block_form(datum, w)


def suite_thm4(depth: int | None = None) -> list:
    return [_report(verify_theorem4(d, lam, form, label))
            for label, d, lam, form in demazure_cases()]


def extremal_cases():
    """Admissible words on the fixtures: rank 1 x10, mixed x4, A2 x6, B2 x8."""
    imag = _fixture("imag1")
    for a in range(1, 11):
        yield f"imag1 lam1 r1^{a}", imag, imag.weight("lam1"), ("1",) * a
    mixed = _fixture("mixed")
    for text in ("r2", "r1 r2", "r2^2", "r1 r2^2"):
        yield f"mixed lam01 {text}", mixed, mixed.weight("lam01"), MonoidWord.parse(text).letters
    for name in ("a2", "b2"):
        datum = _fixture(name)
        for w in weyl_group_elements(datum):
            yield f"{name} lam11 {MonoidWord(w) if w else '1'}", datum, datum.weight("lam11"), w


def suite_thm3(depth: int | None = None) -> list:
    out = [_report(verify_theorem3_subset(d, lam, form, label))
           for label, d, lam, form in demazure_cases()]
    for label, d, lam, word in extremal_cases():
        if not (satisfies_condition_4(d, word, lam) and satisfies_condition_5(d, word, lam)):
            out.append(_check(f"extremal weight space {label}", False, [{"reason": "word is not admissible"}]))
            continue
        low = act(d, word, lam)
        g = generate(d, lam, int(low.depth_below(lam)))
        n = len(weight_space(g, low))
        out.append(_check(f"extremal weight space {label}", n == 1, [] if n == 1 else [{"size": n}]))
    mixed = _fixture("mixed")
    lam = mixed.weight("lam01")
    for text in ("r1 r2", "r1 r2^2"):
        form = to_minimal_dominant_reduced(mixed, MonoidWord.parse(text), lam)
        out.extend(_report(r) for r in demazure_recursion_check(mixed, lam, form))
    out.extend(shadow_checks())
    return out


def shadow_checks() -> list:
    mixed = _fixture("mixed")
    lam = mixed.weight("lam01")
    form = to_minimal_dominant_reduced(mixed, MonoidWord.parse("r1 r2^2"), lam)
    rep = associated_shadow_check(mixed, lam, form)
    sizes = {"tilde": len(rep.tilde), "tilde0": len(rep.tilde0), "demazure": len(rep.demazure)}
    return [
        _check(f"shadow omega orbit w={form}", rep.omega_ok, [] if rep.omega_ok else [sizes]),
        _check(f"shadow copy collapse w={form}", rep.collapse_ok, [] if rep.collapse_ok else [sizes]),
        _check(f"shadow embedding w={form}", rep.embed_ok, [] if rep.embed_ok else [sizes]),
    ]


def _decomp_witness(datum, dec) -> list:
    return [{"components": [[format_weight(w), n] for w, n in dec.components]}]


def suite_thm1(depth: int | None = None) -> list:
    cases = [("mixed", 5, [("lam01", "lam01"), ("lam10", "lam01"), ("lam11", "lam01"),
                           ("lam11", "lam11")]),
             ("a1", 6, [("lam1", "lam1"), ("lam2", "lam2"), ("lam1", "lam2")]),
             ("a2", 6, [("lam10", "lam01"), ("lam11", "lam10"), ("lam11", "lam11")])]
    out = []
    for name, d, pairs in cases:
        datum = _fixture(name)
        d = depth if depth is not None else d
        for l, m in pairs:
            dec = tensor_decompose(datum, datum.weight(l), datum.weight(m), d, verify=True)
            out.append(_check(f"tensor identity {name} {l}x{m} depth {d}", dec.verified,
                              [] if dec.verified else _decomp_witness(datum, dec)))
    return out


def suite_thm2(depth: int | None = None) -> list:
    mixed = _fixture("mixed")
    d = depth if depth is not None else 4
    out = []
    for lam in ("lam01", "lam11"):
        for S in ((), ("1",), ("2",), ("1", "2")):
            dec = branch(mixed, mixed.weight(lam), S, d, verify=True)
            label = "{" + ",".join(S) + "}"
            out.append(_check(f"branching identity mixed {lam} S={label} depth {d}", dec.verified,
                              [] if dec.verified else _decomp_witness(mixed, dec)))
    return out


def suite_prv(depth: int | None = None) -> list:
    a2 = _fixture("a2")
    d = depth if depth is not None else 6
    out = []
    weyl = weyl_group_elements(a2)
    for l, m in (("lam11", "lam11"), ("lam10", "lam01")):
        lam, mu = a2.weight(l), a2.weight(m)
        dec = tensor_decompose(a2, lam, mu, d)
        for w1, w2 in product(weyl, weyl):
            nu = act(a2, w1, lam) + act(a2, w2, mu)
            if not is_dominant(a2, nu):
                continue
            # application order for the copy bookkeeping
            rep = prv_check(a2, lam, mu, IndexWord(tuple(reversed(w1))),
                            IndexWord(tuple(reversed(w2))), d, decomposition=dec)
            name = f"extremal tensor component a2 {l}x{m} w1={MonoidWord(w1) if w1 else 1} w2={MonoidWord(w2) if w2 else 1}"
            out.append(_check(name, rep.status == "pass", [] if rep.status == "pass" else [rep.to_json()]))
    for name, l, m, i in non_example_cases():
        datum = _fixture(name)
        rep = prv_check(datum, datum.weight(l), datum.weight(m), IndexWord(()), IndexWord((i,)), 4)
        ok = rep.status == "no-claim" and "counterexample reproduced" in rep.note
        out.append({"check": f"non-example {name} {l}x{m} r{i}", "status": "pass" if ok else "fail",
                    "witnesses": [rep.to_json()]})
    return out


def non_example_cases():
    return [("imag1", "lam0", "lam1", "1"), ("mixed", "lam10", "lam01", "2")]


def suite_examples(depth: int | None = None) -> list:
    out = []
    exp = _expected("ordered_index")
    datum = _fixture(exp["datum"])
    word = IndexWord.from_written(exp["word"])
    got = [[x, m] for x, m in ordered_index(datum, word).written()]
    out.append(_check("ordered index example", got == exp["ordered"],
                      [] if got == exp["ordered"] else [{"got": got, "expected": exp["ordered"]}]))
    for name, l, m, i in non_example_cases():
        datum = _fixture(name)
        rep = tensor_highest_check(datum, datum.weight(l), datum.weight(m), i)
        wit = {"nu": format_weight(rep.nu), "weight_space_size": len(rep.weight_space),
               "highest_nodes": len(rep.highest_nodes),
               "raised_is_top": rep.raised == rep.expected_raised,
               "nu_bar_pairing": str(rep.nu_bar_pairing)}
        ok = rep.reproduced and len(rep.weight_space) == 1
        out.append({"check": f"non-example {name} {l}x{m} i={i}",
                    "status": "pass" if ok else "fail", "witnesses": [wit]})
    return out


# Invariants

def _invariant_crystals():
    for name, lam, depth in (("a1", "lam2", 5), ("a2", "lam11", 5), ("b2", "lam11", 5),
                             ("mixed", "lam01", 5), ("mixed", "lam11", 4), ("imag1", "lam1", 5),
                             ("imag2", "lam11", 4), ("example222", "lam111", 3)):
        datum = _fixture(name)
        yield f"{name} {lam}", datum, generate(datum, datum.weight(lam), depth)


def _collapse(weight: Weight) -> Weight:
    roots: dict = {}
    for (i, _m), c in weight.roots:
        roots[i] = roots.get(i, 0) + c
    return Weight.make(None, roots) + Weight(weight.base, ())


def crystal_invariants(label, datum, g) -> list:
    inverse, grading, string = [], [], []
    for p in g.sorted_nodes():
        inner = g.node_depth(p) < g.depth
        for i in datum.indices:
            q = f_op(datum, p, i)
            if q is not None and inner:
                if q not in g:
                    inverse.append({"node": str(p), "index": i, "reason": "f leaves the crystal"})
                elif e_op(datum, q, i, g) != p:
                    inverse.append({"node": str(p), "index": i, "reason": "e f p != p"})
            r = e_op(datum, p, i, g)
            if r is not None and f_op(datum, r, i) != p:
                inverse.append({"node": str(p), "index": i, "reason": "f e p != p"})
            if phi(datum, p, i) - eps(datum, p, i) != datum.pairing(i, wt(p)):
                string.append({"node": str(p), "index": i})
    for a, i, b in g.edges:
        if wt(b) != wt(a).minus_root(i):
            grading.append({"source": str(a), "index": i})
    assoc = default_assoc(datum, g.depth)
    images: dict = {}
    books = []
    for p in g.sorted_nodes():
        q = embed_path(g, p, assoc)
        images.setdefault(q, []).append(str(p))
        lifted = lift_weight(wt(p), assoc, ordered_index(datum, g.word(p)))
        if wt(q) != lifted or _collapse(wt(q)) != wt(p):
            books.append({"node": str(p)})
    clashes = [v for v in images.values() if len(v) > 1]
    return [
        _check(f"e/f partial inverse {label}", not inverse, inverse[:5]),
        _check(f"edge grading {label}", not grading, grading[:5]),
        _check(f"phi minus eps {label}", not string, string[:5]),
        _check(f"embedding injective {label}", not clashes, clashes[:5]),
        _check(f"embedding weights {label}", not books, books[:5]),
    ]


def random_character(datum, rng: random.Random) -> CharacterElement:
    terms: dict = {}
    for _ in range(rng.randint(1, 4)):
        roots = {i: rng.randint(-3, 3) for i in datum.indices}
        w = Weight.make(None, roots)
        terms[w] = terms.get(w, 0) + rng.randint(-3, 3)
    return CharacterElement(terms)


def idempotence_checks(n: int = 200, seed: int = 20240601) -> list:
    rng = random.Random(seed)
    data = [_fixture(name) for name in ("a1", "a2", "b2", "mixed", "example222")]
    bad = []
    for k in range(n):
        datum = data[k % len(data)]
        ch = random_character(datum, rng)
        i = rng.choice(datum.real)
        once = demazure_real(datum, ch, i)
        if demazure_real(datum, once, i) != once:
            bad.append({"sample": k, "index": i, "character": repr(ch)})
    return [_check(f"demazure_real idempotent on {n} random characters", not bad, bad[:5])]


def produced_forms():
    """Minimal dominant reduced expressions produced from the fixtures.

    Covers the Demazure fixtures and every admissible word of length at most
    four for each fixture weight.
    """
    seen = set()
    for label, d, lam, form in demazure_cases():
        key = (label.split()[0], lam, form)
        if key not in seen:
            seen.add(key)
            yield label, d, lam, form
    for name in ("mixed", "imag1", "imag2", "example222", "a2", "b2"):
        datum = _fixture(name)
        for wname in sorted(datum.base_weights):
            lam = datum.weight(wname)
            for n in range(1, 5):
                for word in product(datum.indices, repeat=n):
                    if not (satisfies_condition_4(datum, word, lam)
                            and satisfies_condition_5(datum, word, lam)):
                        continue
                    form = to_minimal_dominant_reduced(datum, word, lam)
                    key = (name, lam, form)
                    if key not in seen:
                        seen.add(key)
                        yield f"{name} {wname} {form}", datum, lam, form


def chain_property_checks() -> list:
    bad = []
    count = 0
    for label, d, lam, form in produced_forms():
        count += 1
        for r in check_lemma_422(d, form, lam):
            if r.status == "fail":
                bad.append({"expression": label, "property": r.name, "witnesses": r.witnesses})
    return [_check(f"chain properties (a)-(g) on {count} produced expressions", not bad, bad[:5])]


def suite_invariants(depth: int | None = None) -> list:
    out = []
    for label, datum, g in _invariant_crystals():
        out.extend(crystal_invariants(label, datum, g))
    out.extend(idempotence_checks())
    out.extend(chain_property_checks())
    return out


RUNNERS = {
    "thm1": suite_thm1,
    "thm2": suite_thm2,
    "thm3": suite_thm3,
    "thm4": suite_thm4,
    "prv": suite_prv,
    "paper-examples": suite_examples,
    "invariants": suite_invariants,
}


def run_suite(name: str, depth: int | None = None) -> dict:
    if name not in RUNNERS:
        raise KeyError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    checks = RUNNERS[name](depth)
    return {"suite": name, "ok": all(c["status"] in ("pass", "n/a") for c in checks),
            "checks": checks}
