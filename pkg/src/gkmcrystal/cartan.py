"""Borcherds-Cartan data, weights, and the associated (truncated) Cartan datum.

Weights are never materialized in an abstract lattice.  A weight is a
rational combination of named base weights minus a rational combination of
simple roots; every pairing with a simple coroot is derived from the base
weights' declared pairing vectors and the Cartan matrix.
"""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass
from fractions import Fraction
from itertools import chain
from typing import Hashable, Iterable, Mapping, Sequence

Label = Hashable


class DatumError(ValueError):
    """Raised for invalid Cartan data. ``entry`` names the offending position."""

    def __init__(self, message: str, entry=None):
        super().__init__(message)
        self.entry = entry


class UnknownWeight(KeyError):
    pass


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return Fraction(x)
    return Fraction(x)


def _normalize(items: Iterable) -> tuple:
    acc: dict = {}
    for key, value in items:
        acc[key] = acc.get(key, 0) + value
    return tuple(sorted((k, _frac(v)) for k, v in acc.items() if v != 0))


@dataclass(frozen=True)
class Weight:
    """``sum(n_b * b for b in base) - sum(c_i * alpha_i)``.

    ``base`` and ``roots`` are sorted tuples of ``(key, Fraction)`` with no
    zero entries, so equality is structural.  Note the sign convention: a
    positive entry in ``roots`` *subtracts* that simple root.
    """

    base: tuple = ()
    roots: tuple = ()

    @classmethod
    def make(cls, base=None, roots: Mapping | None = None) -> "Weight":
        if base is None:
            base_items = ()
        elif isinstance(base, str):
            base_items = ((base, 1),)
        elif isinstance(base, Mapping):
            base_items = tuple(base.items())
        else:
            base_items = tuple(base)
        return cls(_normalize(base_items), _normalize((roots or {}).items()))

    @classmethod
    def simple_root(cls, i: Label) -> "Weight":
        return cls((), ((i, Fraction(-1)),))

    @property
    def root_map(self) -> dict:
        return dict(self.roots)

    @property
    def base_map(self) -> dict:
        return dict(self.base)

    def coefficient(self, i: Label) -> Fraction:
        for k, v in self.roots:
            if k == i:
                return v
        return Fraction(0)

    def minus_root(self, i: Label, c=1) -> "Weight":
        """Return ``self - c * alpha_i``."""
        if c == 0:
            return self
        return Weight(self.base, _normalize(chain(self.roots, ((i, c),))))

    def __add__(self, other: "Weight") -> "Weight":
        return Weight(_normalize(chain(self.base, other.base)),
                      _normalize(chain(self.roots, other.roots)))

    def __neg__(self) -> "Weight":
        return Weight(tuple((k, -v) for k, v in self.base),
                      tuple((k, -v) for k, v in self.roots))

    def __sub__(self, other: "Weight") -> "Weight":
        return self + (-other)

    def scale(self, c) -> "Weight":
        c = _frac(c)
        if c == 0:
            return Weight()
        return Weight(tuple((k, v * c) for k, v in self.base),
                      tuple((k, v * c) for k, v in self.roots))

    def __rmul__(self, c) -> "Weight":
        return self.scale(c)

    def height(self) -> Fraction:
        """Sum of the root coefficients (of the subtracted simple roots)."""
        return sum((v for _, v in self.roots), Fraction(0))

    def depth_below(self, top: "Weight") -> Fraction:
        """Height of ``top - self``; both must share the same base part."""
        if self.base != top.base:
            raise ValueError(f"weights {self} and {top} have different base parts")
        return self.height() - top.height()

    def is_root_integral(self) -> bool:
        return all(v.denominator == 1 for _, v in self.roots)

    def __str__(self) -> str:
        return format_weight(self)


def format_base(base: tuple) -> str | None:
    if not base:
        return None
    parts = []
    for name, n in base:
        parts.append(name if n == 1 else f"{n}*{name}")
    return "+".join(parts)


def parse_base(text: str | None) -> tuple:
    if text is None or text == "":
        return ()
    items = []
    for part in text.split("+"):
        if "*" in part:
            n, name = part.split("*", 1)
            items.append((name, Fraction(n)))
        else:
            items.append((part, Fraction(1)))
    return _normalize(items)


def format_label(label: Label) -> str:
    if isinstance(label, tuple):
        return f"({label[0]},{label[1]})"
    return str(label)


_PAIR_LABEL = re.compile(r"^\((.+),(\d+)\)$")


def parse_label(text: str) -> Label:
    m = _PAIR_LABEL.match(text)
    if m:
        return (m.group(1), int(m.group(2)))
    return text


def format_weight(w: Weight) -> str:
    base = format_base(w.base) or "0"
    terms = []
    for k, v in w.roots:
        sign = "-" if v > 0 else "+"
        mag = abs(v)
        coeff = "" if mag == 1 else f"{mag}*"
        terms.append(f" {sign} {coeff}a{format_label(k)}")
    return base + "".join(terms)


def weight_to_json(w: Weight) -> dict:
    return {"base": format_base(w.base),
            "roots": {format_label(k): str(v) for k, v in w.roots}}


def weight_from_json(obj: Mapping) -> Weight:
    roots = {parse_label(k): Fraction(v) for k, v in obj.get("roots", {}).items()}
    return Weight(parse_base(obj.get("base")), _normalize(roots.items()))


class CartanData:
    """Shared pairing machinery for a datum and its associated datum.

    Subclasses provide ``indices``, ``a(i, j)`` (= pairing of coroot i with
    root j), ``is_real(i)``, ``base_pairing(name, j)`` and ``has_base(name)``.
    """

    indices: tuple

    def __init__(self):
        self._pairing_cache: dict = {}

    def a(self, i: Label, j: Label) -> int:
        raise NotImplementedError

    def is_real(self, i: Label) -> bool:
        raise NotImplementedError

    def base_pairing(self, name: str, j: Label) -> int:
        raise NotImplementedError

    def has_base(self, name: str) -> bool:
        raise NotImplementedError

    def pairing(self, j: Label, weight: Weight) -> Fraction:
        key = (j, weight)
        cached = self._pairing_cache.get(key)
        if cached is not None:
            return cached
        total = Fraction(0)
        for name, n in weight.base:
            if not self.has_base(name):
                raise UnknownWeight(name)
            total += n * self.base_pairing(name, j)
        for i, c in weight.roots:
            total -= c * self.a(j, i)
        self._pairing_cache[key] = total
        return total

    def pairing_vector(self, weight: Weight) -> tuple:
        return tuple(self.pairing(j, weight) for j in self.indices)

    def alpha(self, i: Label) -> Weight:
        return Weight.simple_root(i)

    @property
    def real(self) -> tuple:
        return tuple(i for i in self.indices if self.is_real(i))

    @property
    def imaginary(self) -> tuple:
        return tuple(i for i in self.indices if not self.is_real(i))

    def index_position(self, i: Label) -> int:
        return self.indices.index(i)

    def root_vector(self, weight: Weight) -> tuple:
        m = weight.root_map
        return tuple(m.get(i, Fraction(0)) for i in self.indices)


class BorcherdsCartanDatum(CartanData):
    """A validated symmetrizable, even Borcherds-Cartan datum.

    Build instances with :func:`validate_datum` or :func:`load_datum`.
    """

    def __init__(self, indices: Sequence[str], matrix: Sequence[Sequence[int]],
                 symmetrizer: Sequence[int], base_weights: Mapping[str, Sequence[int]]):
        super().__init__()
        self.indices = tuple(indices)
        self.matrix = tuple(tuple(int(x) for x in row) for row in matrix)
        self.symmetrizer = tuple(int(d) for d in symmetrizer)
        self.base_weights = {name: tuple(int(p) for p in vec)
                             for name, vec in base_weights.items()}
        self._pos = {label: k for k, label in enumerate(self.indices)}

    def a(self, i, j) -> int:
        return self.matrix[self._pos[i]][self._pos[j]]

    def is_real(self, i) -> bool:
        return self.a(i, i) == 2

    def d(self, i) -> int:
        return self.symmetrizer[self._pos[i]]

    def has_base(self, name: str) -> bool:
        return name in self.base_weights

    def base_pairing(self, name: str, j) -> int:
        try:
            return self.base_weights[name][self._pos[j]]
        except KeyError:
            raise UnknownWeight(name) from None

    def weight(self, name: str) -> Weight:
        if name not in self.base_weights:
            raise UnknownWeight(name)
        return Weight.make(name)

    def index_position(self, i) -> int:
        return self._pos[i]

    def subdatum_real(self) -> tuple:
        return self.real

    def __repr__(self) -> str:
        return f"BorcherdsCartanDatum(indices={self.indices}, matrix={self.matrix})"


def _compute_symmetrizer(indices, matrix) -> list[int]:
    n = len(indices)
    ratio: list[Fraction | None] = [None] * n
    for start in range(n):
        if ratio[start] is not None:
            continue
        ratio[start] = Fraction(1)
        stack = [start]
        component = [start]
        while stack:
            i = stack.pop()
            for j in range(n):
                if i == j or matrix[i][j] == 0:
                    continue
                # d_i a_ij = d_j a_ji
                want = ratio[i] * matrix[i][j] / matrix[j][i]
                if ratio[j] is None:
                    ratio[j] = want
                    stack.append(j)
                    component.append(j)
                elif ratio[j] != want:
                    raise DatumError(
                        f"matrix is not symmetrizable (entries ({indices[i]},{indices[j]}))",
                        entry=(indices[i], indices[j]))
        denom = math.lcm(*(ratio[k].denominator for k in component))
        ints = [int(ratio[k] * denom) for k in component]
        g = math.gcd(*ints)
        for k, v in zip(component, ints):
            ratio[k] = Fraction(v // g)
    return [int(r) for r in ratio]


def validate_datum(indices: Sequence, matrix: Sequence[Sequence[int]],
                   symmetrizer: Sequence[int] | None = None,
                   weights: Mapping[str, Sequence[int]] | None = None) -> BorcherdsCartanDatum:
    """Check the Borcherds-Cartan conditions and return a datum."""
    indices = [str(i) for i in indices]
    n = len(indices)
    if len(set(indices)) != n:
        raise DatumError("index labels must be unique")
    if len(matrix) != n or any(len(row) != n for row in matrix):
        raise DatumError("matrix must be square and match the index list")
    for r, row in enumerate(matrix):
        for c, x in enumerate(row):
            if isinstance(x, bool) or int(x) != x:
                raise DatumError(f"entry ({indices[r]},{indices[c]}) is not an integer",
                                 entry=(indices[r], indices[c]))
    A = [[int(x) for x in row] for row in matrix]
    for k, i in enumerate(indices):
        aii = A[k][k]
        if not (aii == 2 or aii <= 0):
            raise DatumError(f"diagonal entry a_{i}{i} = {aii} is neither 2 nor <= 0",
                             entry=(i, i))
        if aii % 2:
            raise DatumError(f"diagonal entry a_{i}{i} = {aii} is odd", entry=(i, i))
    for r in range(n):
        for c in range(n):
            if r == c:
                continue
            if A[r][c] > 0:
                raise DatumError(f"off-diagonal entry a_{indices[r]}{indices[c]} = {A[r][c]} is positive",
                                 entry=(indices[r], indices[c]))
            if (A[r][c] == 0) != (A[c][r] == 0):
                raise DatumError(
                    f"a_{indices[r]}{indices[c]} = {A[r][c]} but a_{indices[c]}{indices[r]} = {A[c][r]}",
                    entry=(indices[r], indices[c]))
    if symmetrizer is None:
        sym = _compute_symmetrizer(indices, A)
    else:
        sym = [int(d) for d in symmetrizer]
        if len(sym) != n or any(d <= 0 for d in sym):
            raise DatumError("symmetrizer must list one positive integer per index")
        for r in range(n):
            for c in range(n):
                if sym[r] * A[r][c] != sym[c] * A[c][r]:
                    raise DatumError(
                        f"d_i a_ij != d_j a_ji at ({indices[r]},{indices[c]})",
                        entry=(indices[r], indices[c]))
    weights = dict(weights or {})
    for name, vec in weights.items():
        if len(vec) != n:
            raise DatumError(f"weight {name!r} needs {n} pairings", entry=name)
        if any(int(p) != p or p < 0 for p in vec):
            raise DatumError(f"weight {name!r} must have nonnegative integer pairings", entry=name)
    return BorcherdsCartanDatum(indices, A, sym, weights)


class AssociatedDatum(CartanData):
    """The Cartan datum obtained by replacing each imaginary index with copies.

    Indices are pairs ``(i, m)``; real indices get the single copy 1 and an
    imaginary ``i`` gets copies ``1..copies[i]``.  Pairings are defined for
    every copy number, so a "fresh" copy beyond the budget can still be used
    as a coroot.  Base weights are shared with the parent: the lift of a base
    weight pairs with ``(i, m)`` exactly as the original pairs with ``i``.
    """

    def __init__(self, parent: BorcherdsCartanDatum, copies: Mapping[str, int]):
        super().__init__()
        self.parent = parent
        self.copies = {}
        for i in parent.imaginary:
            m = int(copies.get(i, 1))
            if m < 1:
                raise DatumError(f"copies for imaginary index {i} must be >= 1", entry=i)
            self.copies[i] = m
        idx = []
        for i in parent.indices:
            if parent.is_real(i):
                idx.append((i, 1))
            else:
                idx.extend((i, m) for m in range(1, self.copies[i] + 1))
        self.indices = tuple(idx)

    def a(self, i, j) -> int:
        if i == j:
            return 2
        return self.parent.a(i[0], j[0])

    def is_real(self, i) -> bool:
        return True

    def d(self, i) -> int:
        return self.parent.d(i[0])

    def has_base(self, name: str) -> bool:
        return self.parent.has_base(name)

    def base_pairing(self, name: str, j) -> int:
        return self.parent.base_pairing(name, j[0])

    def fresh(self, i: str) -> tuple:
        """A copy of imaginary ``i`` outside the truncated index set."""
        return (i, self.copies[i] + 1)

    def coroots_with_fresh(self, subset: Iterable[str] | None = None) -> tuple:
        keep = set(self.parent.indices if subset is None else subset)
        out = [k for k in self.indices if k[0] in keep]
        out.extend(self.fresh(i) for i in self.parent.imaginary if i in keep)
        return tuple(out)

    def matrix(self) -> list[list[int]]:
        return [[self.a(i, j) for j in self.indices] for i in self.indices]

    def to_raw(self) -> dict:
        return {"indices": [format_label(k) for k in self.indices],
                "matrix": self.matrix(),
                "symmetrizer": [self.d(k) for k in self.indices]}


def associated_datum(datum: BorcherdsCartanDatum, copies: Mapping[str, int] | int) -> AssociatedDatum:
    if isinstance(copies, int):
        copies = {i: copies for i in datum.imaginary}
    return AssociatedDatum(datum, copies)


def lift_base(weight: Weight) -> Weight:
    """The canonical lift: same base part, no roots."""
    return Weight(weight.base, ())


@dataclass(frozen=True)
class IndexWord:
    """Letters stored in application order: ``letters[0]`` acts first.

    The written tuple ``(i_k, ..., i_1)`` is ``reversed(letters)``.
    """

    letters: tuple = ()

    @classmethod
    def from_written(cls, letters: Iterable) -> "IndexWord":
        return cls(tuple(reversed(tuple(letters))))

    def written(self) -> tuple:
        return tuple(reversed(self.letters))

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def extend(self, letter) -> "IndexWord":
        return IndexWord(self.letters + (letter,))

    def erase_copies(self) -> "IndexWord":
        return IndexWord(tuple(x[0] if isinstance(x, tuple) else x for x in self.letters))


def ordered_index(datum: BorcherdsCartanDatum, word: IndexWord) -> IndexWord:
    """Attach copy numbers: real letters get 1, imaginary ones count occurrences."""
    seen: dict = {}
    out = []
    for i in word.letters:
        if datum.is_real(i):
            out.append((i, 1))
        else:
            seen[i] = seen.get(i, 0) + 1
            out.append((i, seen[i]))
    return IndexWord(tuple(out))


def is_ordered(datum: BorcherdsCartanDatum, word: IndexWord) -> bool:
    return ordered_index(datum, word.erase_copies()) == word


def is_generic(datum: BorcherdsCartanDatum, word: IndexWord) -> bool:
    used = set()
    for i, m in word.letters:
        if datum.is_real(i):
            continue
        if (i, m) in used:
            return False
        used.add((i, m))
    return True


def omega_apply(perms: Mapping[str, Mapping[int, int]], word: IndexWord) -> IndexWord:
    """Relabel copies letterwise; ``perms[i]`` permutes copy numbers of ``i``."""
    out = []
    for i, m in word.letters:
        p = perms.get(i)
        out.append((i, p.get(m, m) if p else m))
    return IndexWord(tuple(out))


def omega_weight(perms: Mapping[str, Mapping[int, int]], weight: Weight) -> Weight:
    roots = []
    for (i, m), c in weight.roots:
        p = perms.get(i)
        roots.append(((i, p.get(m, m) if p else m), c))
    return Weight(weight.base, _normalize(roots))


def lift_weight(weight: Weight, assoc: AssociatedDatum, word: IndexWord) -> Weight:
    """Distribute the root coefficients of ``weight`` onto copies as ``word`` dictates."""
    counts: dict = {}
    for letter in word.letters:
        counts[letter] = counts.get(letter, 0) + 1
    totals: dict = {}
    for (i, _m), n in counts.items():
        totals[i] = totals.get(i, 0) + n
    if totals != {k: int(v) for k, v in weight.roots} or not weight.is_root_integral():
        raise ValueError(f"word {word.letters} does not account for the roots of {weight}")
    if not is_generic(assoc.parent, word):
        raise ValueError("lift requires a generic index word")
    return Weight(weight.base, _normalize(counts.items()))


def datum_to_json(datum: BorcherdsCartanDatum) -> dict:
    return {"indices": list(datum.indices),
            "matrix": [list(row) for row in datum.matrix],
            "symmetrizer": list(datum.symmetrizer),
            "weights": {name: list(datum.base_weights[name]) for name in sorted(datum.base_weights)}}


def datum_from_json(obj: Mapping) -> BorcherdsCartanDatum:
    try:
        return validate_datum(obj["indices"], obj["matrix"], obj.get("symmetrizer"),
                              obj.get("weights", {}))
    except KeyError as exc:
        raise DatumError(f"datum document is missing field {exc}") from None


def load_datum(path) -> BorcherdsCartanDatum:
    with open(path) as fh:
        return datum_from_json(json.load(fh))


def dumps_datum(datum: BorcherdsCartanDatum) -> str:
    return json.dumps(datum_to_json(datum), indent=2) + "\n"
