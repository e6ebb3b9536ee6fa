"""Demazure operators, Demazure crystals, and their character identity."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, permutations, product

from .cartan import IndexWord, Weight, associated_datum, lift_base, omega_weight, weight_to_json
from .crystal import CharacterElement, apply_word, embed_word, generate, weight_space
from .monoid import (AdmissibilityError, BlockForm, act, check_admissible, format_letters,
                     is_dominant_reduced)
from .pathmodel import Path, f_op, wt


def demazure_real(datum, ch: CharacterElement, i) -> CharacterElement:
    if not datum.is_real(i):
        raise ValueError(f"index {i} is imaginary")
    acc: dict = {}
    for mu, c in ch.terms.items():
        n = int(datum.pairing(i, mu))
        if n >= 0:
            for m in range(n + 1):
                w = mu.minus_root(i, m)
                acc[w] = acc.get(w, 0) + c
        elif n <= -2:
            for m in range(1, -n):
                w = mu.minus_root(i, -m)
                acc[w] = acc.get(w, 0) - c
    return CharacterElement(acc, ch.top, ch.depth)


def demazure_imaginary(datum, ch: CharacterElement, i, a: int) -> CharacterElement:
    if datum.is_real(i):
        raise ValueError(f"index {i} is real")
    if a < 1:
        raise ValueError("the power must be at least 1")
    acc: dict = {}
    for mu, c in ch.terms.items():
        steps = 0 if datum.pairing(i, mu) == 0 else a
        for m in range(steps + 1):
            w = mu.minus_root(i, m)
            acc[w] = acc.get(w, 0) + c
    return CharacterElement(acc, ch.top, ch.depth)


def check_form(datum, form: BlockForm, lam: Weight) -> None:
    check_admissible(datum, form.letters(), lam)
    if not is_dominant_reduced(datum, form):
        raise AdmissibilityError(f"expression {form} is not dominant reduced", condition="dominance")


def demazure_character(datum, lam: Weight, form: BlockForm, depth: int | None = None) -> CharacterElement:
    """Apply the block operators right to left, starting from ``e^lam``."""
    check_form(datum, form, lam)
    ch = CharacterElement.monomial(lam, depth)
    for s in range(form.k + 1):
        if s >= 1:
            i, a = form.imag[s - 1]
            ch = demazure_imaginary(datum, ch, i, a)
        for j in reversed(form.real[s]):
            ch = demazure_real(datum, ch, j)
    return ch


def _real_closure(datum, paths: dict, j) -> dict:
    out = dict(paths)
    for p, w in paths.items():
        q, word = p, w
        while True:
            q = f_op(datum, q, j)
            if q is None:
                break
            word = word.extend(j)
            out.setdefault(q, word)
    return out


def _imaginary_powers(datum, paths: dict, i, a: int) -> dict:
    out = dict(paths)
    for p, w in paths.items():
        q, word = p, w
        for _ in range(a):
            q = f_op(datum, q, i)
            if q is None:
                break
            word = word.extend(i)
            out.setdefault(q, word)
    return out


def demazure_crystal_words(datum, lam: Weight, form: BlockForm) -> dict:
    """Staged closure from ``pi_lam``; maps each path to one generating word."""
    check_form(datum, form, lam)
    paths = {Path.straight(lam): IndexWord(())}
    for s in range(form.k + 1):
        if s >= 1:
            i, a = form.imag[s - 1]
            paths = _imaginary_powers(datum, paths, i, a)
        for j in reversed(form.real[s]):
            paths = _real_closure(datum, paths, j)
    return paths


def demazure_crystal(datum, lam: Weight, form: BlockForm) -> frozenset:
    return frozenset(demazure_crystal_words(datum, lam, form))


def character_of(paths, top: Weight | None = None) -> CharacterElement:
    terms: dict = {}
    for p in paths:
        terms[wt(p)] = terms.get(wt(p), 0) + 1
    return CharacterElement(terms, top, None)


def _depth(p: Path, lam: Weight) -> int:
    return int(wt(p).depth_below(lam))


@dataclass
class Report:
    check: str
    status: str
    witnesses: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.status in ("pass", "n/a")

    def to_json(self) -> dict:
        return {"check": self.check, "status": self.status, "witnesses": self.witnesses}


def _diff(datum, a: CharacterElement, b: CharacterElement) -> list:
    d = a - b
    return [{"weight": weight_to_json(w), "difference": c} for w, c in d.sorted_terms(datum)]


def verify_theorem4(datum, lam: Weight, form: BlockForm, label: str = "") -> Report:
    crystal = demazure_crystal(datum, lam, form)
    lhs = character_of(crystal, lam)
    rhs = demazure_character(datum, lam, form)
    ok = lhs == rhs
    name = f"demazure character {label} w={form}".strip()
    return Report(name, "pass" if ok else "fail", [] if ok else _diff(datum, lhs, rhs))


def verify_theorem3_subset(datum, lam: Weight, form: BlockForm, label: str = "",
                           node_budget: int = 200_000) -> Report:
    crystal = demazure_crystal(datum, lam, form)
    low = act(datum, form.letters(), lam)
    depth = max([_depth(p, lam) for p in crystal] + [int(low.depth_below(lam))])
    g = generate(datum, lam, depth, node_budget=node_budget)
    missing = [str(p) for p in crystal if p not in g]
    space = weight_space(g, low)
    witnesses = []
    if missing:
        witnesses.append({"not_in_crystal": missing})
    if len(space) != 1:
        witnesses.append({"lowest_weight_space_size": len(space)})
    elif space[0] not in crystal:
        witnesses.append({"lowest_path_outside_demazure_crystal": str(space[0])})
    name = f"demazure subset {label} w={form}".strip()
    return Report(name, "fail" if witnesses else "pass", witnesses)


def demazure_recursion_check(datum, lam: Weight, form: BlockForm) -> list:
    """Compare the two inductive steps of the character recursion for the last block."""
    if form.k < 1:
        raise ValueError("the recursion check needs at least one imaginary block")
    k = form.k
    head = BlockForm(form.real[:k], form.imag[:k - 1])
    b1 = demazure_crystal_words(datum, lam, head)
    i, a = form.imag[k - 1]
    b2 = _imaginary_powers(datum, b1, i, a)
    bw = dict(b2)
    for j in reversed(form.real[k]):
        bw = _real_closure(datum, bw, j)
    ch1, ch2, chw = (character_of(x, lam) for x in (b1, b2, bw))
    step1 = demazure_imaginary(datum, ch1, i, a)
    step2 = ch2
    for j in reversed(form.real[k]):
        step2 = demazure_real(datum, step2, j)
    full = demazure_crystal(datum, lam, form)
    return [
        Report(f"recursion imaginary step w={form}", "pass" if ch2 == step1 else "fail",
               [] if ch2 == step1 else _diff(datum, ch2, step1)),
        Report(f"recursion real step w={form}", "pass" if chw == step2 else "fail",
               [] if chw == step2 else _diff(datum, chw, step2)),
        Report(f"recursion crystal w={form}", "pass" if frozenset(bw) == full else "fail"),
    ]


def _staged_associated(assoc, lam: Weight, form: BlockForm, subsets) -> dict:
    """Staged closure in the associated model; ``subsets(t)`` lists the copy sets at block t."""
    paths = {Path.straight(lift_base(lam)): IndexWord(())}
    for s in range(form.k + 1):
        if s >= 1:
            i, a = form.imag[s - 1]
            nxt: dict = {}
            for p, w in paths.items():
                for copies in subsets(a):
                    letters = tuple((i, m) for m in copies)
                    q = apply_word(assoc, p, letters)
                    if q is not None:
                        nxt.setdefault(q, IndexWord(w.letters + letters))
            paths = nxt
        for j in reversed(form.real[s]):
            paths = _real_closure(assoc, paths, (j, 1))
    return paths


def omega_group(form: BlockForm):
    """All relabelings permuting copies ``1..a_s`` of each ``i_s``."""
    blocks = [(i, a) for i, a in form.imag]
    for perms in product(*[permutations(range(1, a + 1)) for _, a in blocks]):
        yield {i: {m: p[m - 1] for m in range(1, a + 1)} for (i, a), p in zip(blocks, perms)}


def omega_path(perms, path: Path) -> Path:
    return Path.make((omega_weight(perms, d), tau) for d, tau in path.segments)


@dataclass
class ShadowReport:
    tilde: frozenset
    tilde0: frozenset
    demazure: frozenset
    omega_orbit: frozenset
    collapsed: frozenset
    embedded: frozenset

    @property
    def omega_ok(self) -> bool:
        return self.omega_orbit == self.tilde

    @property
    def collapse_ok(self) -> bool:
        return self.collapsed == self.demazure

    @property
    def embed_ok(self) -> bool:
        return self.embedded == self.tilde0


def associated_shadow_check(datum, lam: Weight, form: BlockForm) -> ShadowReport:
    """Compare the Demazure crystal with its image in the associated model."""
    check_form(datum, form, lam)
    copies = {i: 1 for i in datum.imaginary}
    for i, a in form.imag:
        copies[i] = max(copies[i], a)
    assoc = associated_datum(datum, copies)

    def all_subsets(a):
        return [c for r in range(a + 1) for c in combinations(range(1, a + 1), r)]

    def initial_segments(a):
        return [tuple(range(1, e + 1)) for e in range(a + 1)]

    tilde = _staged_associated(assoc, lam, form, all_subsets)
    tilde0 = _staged_associated(assoc, lam, form, initial_segments)
    dem = demazure_crystal_words(datum, lam, form)
    orbit = frozenset(omega_path(perms, p) for perms in omega_group(form) for p in tilde0)
    start = Path.straight(lam)
    collapsed = frozenset(apply_word(datum, start, w.erase_copies().letters) for w in tilde0.values())
    embedded = frozenset(embed_word(assoc, lam, w) for w in dem.values())
    return ShadowReport(frozenset(tilde), frozenset(tilde0), frozenset(dem), orbit, collapsed, embedded)


def braid_independence_report(datum, lam: Weight, form: BlockForm, other: BlockForm) -> dict:
    """Compare two expressions for the same element; reported, never asserted."""
    a = demazure_crystal(datum, lam, form)
    b = demazure_crystal(datum, lam, other)
    ca = demazure_character(datum, lam, form)
    cb = demazure_character(datum, lam, other)
    return {"first": format_letters(form.letters()), "second": format_letters(other.letters()),
            "same_crystal": a == b, "same_character": ca == cb}
