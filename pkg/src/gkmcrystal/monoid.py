"""Expressions in the monoid generated by simple reflections.

Words are tuples of index labels in *written* order: the rightmost letter
acts first on a weight, as in ``r1 r2^2 r1``.  Equality of monoid elements
is decided only by bounded rewriting with the defining relations; inside the
real Weyl group it is decided exactly through the action on a regular
weight.
"""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .cartan import BorcherdsCartanDatum, Weight

DEFAULT_REWRITE_BUDGET = 10_000
IMAGINARY_PAIRING = "imaginary-pairing"
POSITIVE_PAIRING = "positive-pairing"


class WordSyntaxError(ValueError):
    pass


class AdmissibilityError(ValueError):
    """An expression fails an admissibility condition.

    ``condition`` is ``"imaginary-pairing"`` (each imaginary letter must see
    pairing exactly 1), ``"positive-pairing"`` (every letter must see a
    positive pairing) or ``"dominance"``.
    """

    def __init__(self, message: str, condition: str, position: int | None = None):
        super().__init__(message)
        self.condition = condition
        self.position = position


class BudgetExceeded(RuntimeError):
    pass


class InternalContradiction(AssertionError):
    pass


_TOKEN = re.compile(r"^r([^\s^]+)(?:\^(\d+))?$")


@dataclass(frozen=True)
class MonoidWord:
    letters: tuple = ()

    @classmethod
    def parse(cls, text: str) -> "MonoidWord":
        letters: list = []
        for token in text.split():
            m = _TOKEN.match(token)
            if not m:
                raise WordSyntaxError(f"cannot parse token {token!r}; expected r<label> or r<label>^<n>")
            power = int(m.group(2)) if m.group(2) is not None else 1
            letters.extend([m.group(1)] * power)
        return cls(tuple(letters))

    def application_order(self) -> tuple:
        return tuple(reversed(self.letters))

    def __len__(self) -> int:
        return len(self.letters)

    def __str__(self) -> str:
        return format_letters(self.letters)


def format_letters(letters: Sequence) -> str:
    out = []
    k = 0
    while k < len(letters):
        j = k
        while j < len(letters) and letters[j] == letters[k]:
            j += 1
        n = j - k
        out.append(f"r{letters[k]}" + (f"^{n}" if n > 1 else ""))
        k = j
    return " ".join(out)


@dataclass(frozen=True)
class BlockForm:
    """``w_k r_{i_k}^{a_k} ... w_1 r_{i_1}^{a_1} w_0``.

    ``real[s]`` is the written-order word of ``w_s`` and ``imag[t-1]`` is the
    pair ``(i_t, a_t)``.
    """

    real: tuple = ((),)
    imag: tuple = ()

    def __post_init__(self):
        if len(self.real) != len(self.imag) + 1:
            raise ValueError("a block form needs exactly one more real block than imaginary blocks")

    @property
    def k(self) -> int:
        return len(self.imag)

    def letters(self) -> tuple:
        out: list = []
        for s in range(self.k, -1, -1):
            out.extend(self.real[s])
            if s >= 1:
                i, a = self.imag[s - 1]
                out.extend([i] * a)
        return tuple(out)

    def word(self) -> MonoidWord:
        return MonoidWord(self.letters())

    def length(self) -> int:
        return sum(len(w) for w in self.real) + sum(a for _, a in self.imag)

    def real_lengths(self) -> tuple:
        return tuple(len(w) for w in self.real)

    def to_json(self) -> dict:
        return {"word": format_letters(self.letters()),
                "real_blocks": [format_letters(w) for w in self.real],
                "imaginary_blocks": [{"index": i, "power": a} for i, a in self.imag]}

    def __str__(self) -> str:
        return format_letters(self.letters())


def block_form(datum: BorcherdsCartanDatum, word: MonoidWord | Sequence) -> BlockForm:
    """Split a word at its maximal runs of equal imaginary letters."""
    letters = word.letters if isinstance(word, MonoidWord) else tuple(word)
    real_blocks: list = [[]]
    imag: list = []
    for x in reversed(letters):
        if datum.is_real(x):
            real_blocks[-1].append(x)
        elif imag and imag[-1][0] == x and not real_blocks[-1]:
            imag[-1][1] += 1
        else:
            imag.append([x, 1])
            real_blocks.append([])
    return BlockForm(tuple(tuple(reversed(b)) for b in real_blocks),
                     tuple((i, a) for i, a in imag))


def _letters(word) -> tuple:
    if isinstance(word, MonoidWord):
        return word.letters
    if isinstance(word, BlockForm):
        return word.letters()
    return tuple(word)


def reflect(datum, i, weight: Weight) -> Weight:
    return weight.minus_root(i, datum.pairing(i, weight))


def act(datum, word, weight: Weight) -> Weight:
    for i in reversed(_letters(word)):
        weight = reflect(datum, i, weight)
    return weight


def act_inverse(datum, i, weight: Weight) -> Weight:
    """Inverse of the reflection ``r_i``; rational coefficients may appear."""
    c = datum.pairing(i, weight) / (1 - datum.a(i, i))
    return weight.minus_root(i, -c)


def pairing_matrix(datum, word) -> tuple:
    """Matrix ``M`` with ``pairings(w mu) = M @ pairings(mu)``."""
    idx = datum.indices
    n = len(idx)
    M = [[Fraction(int(r == c)) for c in range(n)] for r in range(n)]
    for x in _letters(word):
        # the leftmost letter acts last, so it is the outermost factor
        c = idx.index(x)
        R = [[Fraction(int(r == cc)) for cc in range(n)] for r in range(n)]
        for r in range(n):
            R[r][c] -= datum.a(idx[r], x)
        M = [[sum(M[r][t] * R[t][cc] for t in range(n)) for cc in range(n)] for r in range(n)]
    return tuple(tuple(row) for row in M)


def apply_matrix(M, vec) -> tuple:
    return tuple(sum(a * b for a, b in zip(row, vec)) for row in M)


def _rho_action(datum, letters, start=None) -> tuple:
    real = datum.real
    pos = {i: k for k, i in enumerate(real)}
    q = list(start) if start is not None else [Fraction(1)] * len(real)
    for x in reversed(letters):
        if x not in pos:
            raise ValueError(f"letter {x} is not a real index")
        px = q[pos[x]]
        for j in real:
            q[pos[j]] -= px * datum.a(j, x)
    return tuple(q)


def coxeter_reduced(datum, word) -> tuple:
    """Canonical reduced written-order word of a real Weyl group element."""
    letters = _letters(word)
    for x in letters:
        if not datum.is_real(x):
            raise ValueError(f"letter {x} is not a real index")
    real = datum.real
    q = list(_rho_action(datum, letters))
    out = []
    while True:
        for k, i in enumerate(real):
            if q[k] < 0:
                break
        else:
            return tuple(out)
        out.append(i)
        pi = q[k]
        for kk, j in enumerate(real):
            q[kk] -= pi * datum.a(j, i)


def coxeter_length(datum, word) -> int:
    return len(coxeter_reduced(datum, word))


def real_equal(datum, u, v) -> bool:
    return _rho_action(datum, _letters(u)) == _rho_action(datum, _letters(v))


def weyl_group_elements(datum, max_length: int | None = None, limit: int = 100_000) -> list:
    """Canonical reduced words of real Weyl group elements, by length then letters."""
    seen = {_rho_action(datum, ()): ()}
    frontier = [()]
    length = 0
    while frontier and (max_length is None or length < max_length):
        nxt = []
        for w in frontier:
            for i in datum.real:
                cand = (i,) + w
                key = _rho_action(datum, cand)
                if key not in seen:
                    red = coxeter_reduced(datum, cand)
                    if len(red) == length + 1:
                        seen[key] = red
                        nxt.append(red)
                if len(seen) > limit:
                    raise BudgetExceeded("Weyl group enumeration exceeded its limit")
        frontier = nxt
        length += 1
    return sorted(seen.values(), key=lambda w: (len(w), w))


def satisfies_condition_4(datum, word, lam: Weight) -> bool:
    return _condition_failure(datum, word, lam, IMAGINARY_PAIRING) is None


def satisfies_condition_5(datum, word, lam: Weight) -> bool:
    return _condition_failure(datum, word, lam, POSITIVE_PAIRING) is None


def _condition_failure(datum, word, lam, which):
    mu = lam
    for pos, x in enumerate(reversed(_letters(word)), start=1):
        p = datum.pairing(x, mu)
        if which == IMAGINARY_PAIRING and not datum.is_real(x) and p != 1:
            return pos, x, p
        if which == POSITIVE_PAIRING and p <= 0:
            return pos, x, p
        mu = reflect(datum, x, mu)
    return None


def check_admissible(datum, word, lam: Weight) -> None:
    for which in (IMAGINARY_PAIRING, POSITIVE_PAIRING):
        fail = _condition_failure(datum, word, lam, which)
        if fail is not None:
            pos, x, p = fail
            need = "= 1" if which == IMAGINARY_PAIRING else "> 0"
            raise AdmissibilityError(
                f"{which} condition fails at letter {pos} (r{x}) in application order: "
                f"pairing is {p}, needs {need}", condition=which, position=pos)


def is_dominant_reduced(datum, form: BlockForm) -> bool:
    for w in form.real:
        if coxeter_length(datum, w) != len(w):
            return False
    prefix: tuple = ()
    for x in reversed(form.letters()):
        prefix = (x,) + prefix
        if not datum.is_real(x):
            M = pairing_matrix(datum, prefix)
            if any(v < 0 for row in M for v in row):
                return False
    return True


def _rewrites(datum, word: tuple, delete: bool):
    n = len(word)
    for k in range(n - 1):
        x, y = word[k], word[k + 1]
        if x != y and datum.a(x, y) == 0:
            yield word[:k] + (y, x) + word[k + 2:]
        elif x == y and delete and datum.is_real(x):
            yield word[:k] + word[k + 2:]
    for k in range(n - 2):
        x, y = word[k], word[k + 1]
        if x == y or not (datum.is_real(x) and datum.is_real(y)):
            continue
        prod = datum.a(x, y) * datum.a(y, x)
        m = {1: 3, 2: 4, 3: 6}.get(prod)
        if m is None or k + m > n:
            continue
        seg = word[k:k + m]
        if all(seg[t] == (x if t % 2 == 0 else y) for t in range(m)):
            swapped = tuple(y if t % 2 == 0 else x for t in range(m))
            yield word[:k] + swapped + word[k + m:]


def rewrite_class(datum, word, delete: bool = True, budget: int = DEFAULT_REWRITE_BUDGET) -> set:
    """All words reachable by the defining relations (without inserting ``r_i r_i``)."""
    start = _letters(word)
    seen = {start}
    queue = deque([start])
    while queue:
        w = queue.popleft()
        for v in _rewrites(datum, w, delete):
            if v not in seen:
                seen.add(v)
                if len(seen) > budget:
                    raise BudgetExceeded(f"rewrite search exceeded {budget} words")
                queue.append(v)
    return seen


def reduced_words(datum, word, budget: int = DEFAULT_REWRITE_BUDGET) -> frozenset:
    cls = rewrite_class(datum, word, True, budget)
    n = min(len(w) for w in cls)
    return frozenset(w for w in cls if len(w) == n)


def monoid_length(datum, word, budget: int = DEFAULT_REWRITE_BUDGET) -> int:
    return len(next(iter(reduced_words(datum, word, budget))))


def canonical_word(datum, word, budget: int = DEFAULT_REWRITE_BUDGET) -> tuple:
    return min(reduced_words(datum, word, budget))


def words_equal(datum, u, v, budget: int = DEFAULT_REWRITE_BUDGET) -> bool:
    return canonical_word(datum, u, budget) == canonical_word(datum, v, budget)


def _merged(datum, word: tuple) -> bool:
    seen = set()
    prev = None
    for x in word:
        if not datum.is_real(x):
            if x != prev and x in seen:
                return False
            seen.add(x)
        prev = x
    return True


def to_minimal_dominant_reduced(datum, word, lam: Weight,
                                budget: int = DEFAULT_REWRITE_BUDGET) -> BlockForm:
    """Merge imaginary letters and minimize the real block lengths lexicographically."""
    letters = _letters(word)
    check_admissible(datum, letters, lam)
    counts: dict = {}
    for x in letters:
        if not datum.is_real(x):
            counts[x] = counts.get(x, 0) + 1
    for x, c in counts.items():
        if c > 1 and datum.a(x, x) != 0:
            raise InternalContradiction(
                f"imaginary letter {x} repeats but a_{x}{x} = {datum.a(x, x)} is nonzero")
    if not counts:
        return BlockForm((coxeter_reduced(datum, letters),), ())
    rank: dict = {}
    for x in reversed(letters):
        if not datum.is_real(x) and x not in rank:
            rank[x] = len(rank)
    best = None
    for cand in rewrite_class(datum, letters, delete=False, budget=budget):
        if not _merged(datum, cand):
            continue
        form = block_form(datum, cand)
        form = BlockForm(tuple(coxeter_reduced(datum, w) for w in form.real), form.imag)
        key = (form.real_lengths(), tuple(rank[i] for i, _ in form.imag), form.letters())
        if best is None or key < best[0]:
            best = (key, form)
    if best is None:
        raise InternalContradiction("no expression with merged imaginary letters was reachable")
    return best[1]


@dataclass
class PropertyResult:
    name: str
    status: str
    witnesses: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {"property": self.name, "status": self.status, "witnesses": self.witnesses}


def check_lemma_422(datum, form: BlockForm, lam: Weight) -> list:
    """Evaluate properties (a)-(g) of the chain structure of a minimal expression.

    Positions: the real letter ``alpha_{s,p}`` is the ``p``-th letter of
    ``w_s`` in application order and sits at ``(s, p)``; the imaginary letter
    ``i_t`` sits at ``(t, 0)``.
    """
    k = form.k
    blocks = [tuple(reversed(w)) for w in form.real]  # application order
    imag = [None] + [i for i, _ in form.imag]
    results = []

    # weights seen by each real letter
    seen_by: dict = {}
    mu = lam
    for s in range(k + 1):
        if s >= 1:
            i, a = form.imag[s - 1]
            for _ in range(a):
                mu = reflect(datum, i, mu)
        for p, x in enumerate(blocks[s], start=1):
            seen_by[(s, p)] = mu
            mu = reflect(datum, x, mu)

    def letter(s, p):
        return blocks[s][p - 1]

    real_positions = [(s, p) for s in range(k + 1) for p in range(1, len(blocks[s]) + 1)]
    low = [(s, p) for (s, p) in real_positions if s <= k - 1]

    def run(name, checks):
        if not checks:
            results.append(PropertyResult(name, "n/a"))
            return
        bad = [w for ok, w in checks if not ok]
        results.append(PropertyResult(name, "fail" if bad else "pass", bad))

    run("a", [(datum.pairing(letter(s, p), seen_by[(s, p)]) == 1,
               {"position": [s, p], "pairing": str(datum.pairing(letter(s, p), seen_by[(s, p)]))})
              for s, p in low])
    run("b", [(datum.a(letter(s, p), letter(s, p - 1)) == -1,
               {"position": [s, p], "value": datum.a(letter(s, p), letter(s, p - 1))})
              for s, p in low if p > 1])
    checks = []
    for s, p in low:
        x = letter(s, p)
        for t, q in real_positions:
            if (t, q) < (s, p - 1):
                checks.append((datum.a(x, letter(t, q)) == 0,
                               {"position": [s, p], "other": [t, q]}))
        for t in range(1, k + 1):
            if (t, 0) < (s, p - 1):
                checks.append((datum.a(x, imag[t]) == 0,
                               {"position": [s, p], "imaginary": [t, 0]}))
    run("c", checks)
    checks = []
    for s in range(1, k + 1):
        prev = blocks[s - 1]
        if prev:
            last = (s - 1, len(prev))
            checks.append((datum.a(imag[s], letter(*last)) == -1,
                           {"imaginary": s, "neighbour": list(last)}))
        else:
            last = (s - 1, 1)
        for t, q in real_positions:
            if (t, q) < last:
                checks.append((datum.a(imag[s], letter(t, q)) == 0,
                               {"imaginary": s, "other": [t, q]}))
    run("d", checks)
    checks = []
    if k >= 1:
        for s, p in low:
            want = 1 if (s, p) == (0, 1) else 0
            val = datum.pairing(letter(s, p), lam)
            checks.append((val == want, {"position": [s, p], "pairing": str(val)}))
    run("e", checks)
    checks = []
    for s in range(1, k):
        if s != 1 or blocks[0]:
            val = datum.pairing(imag[s], lam)
            checks.append((val == 0, {"imaginary": s, "pairing": str(val)}))
    run("f", checks)
    checks = []
    if k >= 1 and not blocks[0]:
        val = datum.pairing(imag[1], lam)
        checks.append((val == 1, {"imaginary": 1, "pairing": str(val)}))
    run("g", checks)
    return results


@dataclass(frozen=True)
class Root:
    """A positive root ``beta = u alpha_i`` with ``u`` a real written-order word."""

    coeffs: tuple
    u: tuple
    i: object
    real: bool

    def weight(self) -> Weight:
        return Weight((), tuple((j, -c) for j, c in self.coeffs))

    def height(self) -> int:
        return sum(c for _, c in self.coeffs)

    def coroot_pairing(self, datum, mu: Weight) -> Fraction:
        return datum.pairing(self.i, act(datum, tuple(reversed(self.u)), mu))

    def reflection_word(self) -> tuple:
        return self.u + (self.i,) + tuple(reversed(self.u))

    def reflect(self, datum, mu: Weight) -> Weight:
        return act(datum, self.reflection_word(), mu)


def positive_roots(datum, height: int) -> tuple:
    """Real positive and imaginary roots up to ``height``; returns ``(roots, complete)``."""
    if height < 1:
        raise ValueError("height bound must be at least 1")
    found: dict = {}
    queue = deque()
    complete = True
    for i in datum.indices:
        r = Root(((i, 1),), (), i, datum.is_real(i))
        found[(r.coeffs, r.real)] = r
        queue.append(r)
    while queue:
        r = queue.popleft()
        base = dict(r.coeffs)
        for j in datum.real:
            # r_j beta = beta - <alpha_j^vee, beta> alpha_j
            pair = sum(c * datum.a(j, x) for x, c in base.items())
            new = dict(base)
            new[j] = new.get(j, 0) - pair
            new = {x: c for x, c in new.items() if c != 0}
            if any(c < 0 for c in new.values()) or not new:
                continue
            coeffs = tuple(sorted(new.items()))
            if sum(new.values()) > height:
                complete = False
                continue
            key = (coeffs, r.real)
            if key not in found:
                nr = Root(coeffs, (j,) + r.u, r.i, r.real)
                found[key] = nr
                queue.append(nr)
    roots = sorted(found.values(), key=lambda r: (r.height(), not r.real, r.coeffs))
    return tuple(roots), complete


def bounded_order_leq(datum, v, w, height: int = 12, budget: int = DEFAULT_REWRITE_BUDGET):
    """Decide ``v <= w`` by searching length-increasing reflection chains.

    Returns True, False, or None when the bounded search cannot decide.
    """
    v, w = _letters(v), _letters(w)
    target = canonical_word(datum, w, budget)
    start = canonical_word(datum, v, budget)
    if start == target:
        return True
    lw, lv = len(target), len(start)
    if lv >= lw:
        return False
    roots, complete = positive_roots(datum, height)
    frontier = {start}
    for _ in range(lw - lv):
        nxt = set()
        for x in frontier:
            for r in roots:
                y = canonical_word(datum, r.reflection_word() + x, budget)
                if len(x) < len(y) <= lw:
                    if y == target:
                        return True
                    nxt.add(y)
        frontier = nxt
        if not frontier:
            break
    return False if complete else None
