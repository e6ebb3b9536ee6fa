"""Truncated path crystals, characters, and the decomposition rules.

Everything is truncated by depth: the height of ``top - wt``.  A crystal
generated to depth ``d`` contains every element of depth at most ``d``
because each ``f_i`` adds exactly one to the depth.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .cartan import (AssociatedDatum, IndexWord, Weight, associated_datum, format_label,
                     lift_base, ordered_index, weight_to_json)
from .monoid import IMAGINARY_PAIRING, AdmissibilityError, BudgetExceeded, act
from .pathmodel import (Path, concat, e_op_cutoff, e_op_real, f_op, wt)

DEFAULT_NODE_BUDGET = 200_000


class CopiesExceeded(ValueError):
    pass


@dataclass
class NodeInfo:
    depth: int
    words: list = field(default_factory=list)

    @property
    def word(self) -> IndexWord:
        return self.words[0]


class CrystalGraph:
    """A crystal generated from ``pi_top`` by the lowering operators, truncated at ``depth``."""

    def __init__(self, datum, top: Weight, depth: int, indices: tuple):
        self.datum = datum
        self.top = top
        self.depth = depth
        self.indices = indices
        self.highest = Path.straight(top)
        self.nodes: dict = {}
        self.edges: list = []

    def contains(self, path: Path) -> bool:
        return path in self.nodes

    def __contains__(self, path) -> bool:
        return path in self.nodes

    def __len__(self) -> int:
        return len(self.nodes)

    def sorted_nodes(self) -> list:
        return sorted(self.nodes, key=lambda p: (self.nodes[p].depth, p.key))

    def word(self, path: Path) -> IndexWord:
        return self.nodes[path].word

    def node_depth(self, path: Path) -> int:
        return self.nodes[path].depth

    def to_json(self) -> dict:
        order = self.sorted_nodes()
        ids = {p: k for k, p in enumerate(order)}
        return {
            "top": weight_to_json(self.top),
            "depth": self.depth,
            "nodes": [{"id": ids[p], "depth": self.nodes[p].depth,
                       "weight": weight_to_json(wt(p)),
                       "word": [format_label(x) for x in self.nodes[p].word.letters],
                       "path": p.to_json()} for p in order],
            "edges": [{"source": ids[a], "index": format_label(i), "target": ids[b]}
                      for a, i, b in sorted(self.edges, key=lambda e: (ids[e[0]], str(e[1])))],
        }


def is_dominant(datum, weight: Weight, indices: Iterable | None = None) -> bool:
    idx = datum.indices if indices is None else indices
    return all(datum.pairing(i, weight) >= 0 for i in idx)


def generate(datum, lam: Weight, depth: int, indices: Sequence | None = None,
             node_budget: int = DEFAULT_NODE_BUDGET) -> CrystalGraph:
    """Breadth-first closure of ``pi_lam`` under ``f_i`` for ``i`` in ``indices``."""
    idx = tuple(datum.indices if indices is None else indices)
    if not is_dominant(datum, lam, idx):
        raise ValueError(f"weight {lam} is not dominant")
    if depth < 0:
        raise ValueError("depth must be nonnegative")
    g = CrystalGraph(datum, lam, depth, idx)
    g.nodes[g.highest] = NodeInfo(0, [IndexWord(())])
    level = [g.highest]
    for d in range(depth):
        found: dict = {}
        for p in sorted(level):
            base_word = g.nodes[p].word
            for i in idx:
                q = f_op(datum, p, i)
                if q is None:
                    continue
                g.edges.append((p, i, q))
                w = base_word.extend(i)
                if q in found:
                    found[q].append(w)
                else:
                    found[q] = [w]
        for q in sorted(found):
            g.nodes[q] = NodeInfo(d + 1, found[q])
        if len(g.nodes) > node_budget:
            raise BudgetExceeded(f"crystal generation exceeded {node_budget} nodes")
        level = list(found)
        if not level:
            break
    return g


class CharacterElement:
    """A finitely supported integer combination of ``e^mu``, truncated below ``top``."""

    def __init__(self, terms: Mapping | Iterable = (), top: Weight | None = None,
                 depth: int | None = None):
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict = {}
        for w, c in items:
            acc[w] = acc.get(w, 0) + c
        self.top = top
        self.depth = depth
        self.terms = {w: c for w, c in acc.items() if c != 0 and self._keep(w)}

    def _keep(self, w: Weight) -> bool:
        if self.depth is None or self.top is None:
            return True
        return w.depth_below(self.top) <= self.depth

    @classmethod
    def monomial(cls, w: Weight, depth: int | None = None) -> "CharacterElement":
        return cls({w: 1}, top=w, depth=depth)

    def retop(self, top: Weight) -> "CharacterElement":
        """Express the truncation relative to a higher ``top``."""
        if self.top is None or self.depth is None:
            return CharacterElement(self.terms, top, self.depth if self.top is None else None)
        shift = self.top.depth_below(top)
        if shift < 0:
            raise ValueError("new top must lie above the old one")
        return CharacterElement(self.terms, top, int(self.depth + shift))

    def _align(self, other: "CharacterElement"):
        a, b = self, other
        if a.top is not None and b.top is not None and a.top != b.top:
            if b.top.depth_below(a.top) >= 0:
                b = b.retop(a.top)
            else:
                a = a.retop(b.top)
        top = a.top if a.top is not None else b.top
        depths = [d for d in (a.depth, b.depth) if d is not None]
        return a, b, top, (min(depths) if depths else None)

    def __add__(self, other: "CharacterElement") -> "CharacterElement":
        a, b, top, depth = self._align(other)
        return CharacterElement(list(a.terms.items()) + list(b.terms.items()), top, depth)

    def __neg__(self) -> "CharacterElement":
        return CharacterElement({w: -c for w, c in self.terms.items()}, self.top, self.depth)

    def __sub__(self, other: "CharacterElement") -> "CharacterElement":
        return self + (-other)

    def __mul__(self, other: "CharacterElement") -> "CharacterElement":
        top = None
        if self.top is not None and other.top is not None:
            top = self.top + other.top
        depths = [d for d in (self.depth, other.depth) if d is not None]
        depth = min(depths) if depths else None
        acc: dict = {}
        for w1, c1 in self.terms.items():
            for w2, c2 in other.terms.items():
                w = w1 + w2
                acc[w] = acc.get(w, 0) + c1 * c2
        return CharacterElement(acc, top, depth)

    def truncate(self, depth: int) -> "CharacterElement":
        d = depth if self.depth is None else min(depth, self.depth)
        return CharacterElement(self.terms, self.top, d)

    def same_as(self, other: "CharacterElement") -> bool:
        a, b, top, depth = self._align(other)
        a = CharacterElement(a.terms, top, depth)
        b = CharacterElement(b.terms, top, depth)
        return a.terms == b.terms

    def __eq__(self, other) -> bool:
        if not isinstance(other, CharacterElement):
            return NotImplemented
        return self.same_as(other)

    def total(self) -> int:
        return sum(self.terms.values())

    def sorted_terms(self, datum) -> list:
        def key(item):
            w = item[0]
            return (str(w.base), datum.root_vector(w))
        return sorted(self.terms.items(), key=key)

    def to_json(self, datum) -> list:
        return [{"weight": weight_to_json(w), "coefficient": c} for w, c in self.sorted_terms(datum)]

    def __repr__(self) -> str:
        body = " + ".join(f"{c}*e^({w})" for w, c in self.terms.items()) or "0"
        return f"CharacterElement({body}, depth={self.depth})"


def truncated_character(graph: CrystalGraph) -> CharacterElement:
    terms: dict = {}
    for p in graph.nodes:
        w = wt(p)
        terms[w] = terms.get(w, 0) + 1
    return CharacterElement(terms, graph.top, graph.depth)


def character(datum, lam: Weight, depth: int, indices=None,
              node_budget: int = DEFAULT_NODE_BUDGET) -> CharacterElement:
    return truncated_character(generate(datum, lam, depth, indices, node_budget))


def weight_space(graph: CrystalGraph, weight: Weight) -> list:
    return sorted(p for p in graph.nodes if wt(p) == weight)


def default_assoc(datum, depth: int) -> AssociatedDatum:
    return associated_datum(datum, max(1, depth + 1))


def apply_word(datum, path: Path | None, letters: Iterable) -> Path | None:
    for x in letters:
        if path is None:
            return None
        path = f_op(datum, path, x)
    return path


def embed_word(assoc: AssociatedDatum, lam: Weight, word: IndexWord) -> Path:
    """``F_{(i,m)} pi_lam~`` for the ordered index of ``word``."""
    if lam.roots:
        raise ValueError("the canonical lift is only defined for sums of named base weights")
    oi = ordered_index(assoc.parent, word)
    for i, m in oi.letters:
        if not assoc.parent.is_real(i) and m > assoc.copies[i]:
            raise CopiesExceeded(f"copy ({i},{m}) exceeds the budget {assoc.copies[i]}")
    out = apply_word(assoc, Path.straight(lift_base(lam)), oi.letters)
    if out is None:
        raise ValueError(f"the lifted monomial {oi.letters} vanishes")
    return out


def embed_path(graph: CrystalGraph, path: Path, assoc: AssociatedDatum) -> Path:
    return embed_word(assoc, graph.top, graph.word(path))


def is_dominant_shifted(datum, path: Path, shift: Weight, coroots: Iterable) -> bool:
    """Pairings of ``shift + path(t)`` with every listed coroot stay nonnegative."""
    for c in coroots:
        h = datum.pairing(c, shift)
        if h < 0:
            return False
        for d, tau in path.segments:
            h += tau * datum.pairing(c, d)
            if h < 0:
                return False
    return True


@dataclass
class Decomposition:
    components: list  # (highest weight, multiplicity) in first-seen order
    witnesses: list   # (path, highest weight)
    verified: bool | None = None
    lhs: CharacterElement | None = None
    rhs: CharacterElement | None = None

    def multiset(self) -> dict:
        return dict(self.components)

    def to_json(self, datum) -> dict:
        out = {"components": [{"weight": weight_to_json(w), "multiplicity": n,
                               "pairings": [str(v) for v in datum.pairing_vector(w)]}
                              for w, n in self.components]}
        if self.verified is not None:
            out["verified"] = self.verified
        return out


def _collect(weights: list) -> list:
    counts: dict = {}
    for w in weights:
        counts[w] = counts.get(w, 0) + 1
    return list(counts.items())


def tensor_decompose(datum, lam: Weight, mu: Weight, depth: int, verify: bool = False,
                     node_budget: int = DEFAULT_NODE_BUDGET) -> Decomposition:
    """Highest weights of the tensor product down to ``depth`` below ``lam + mu``."""
    g = generate(datum, mu, depth, node_budget=node_budget)
    assoc = default_assoc(datum, depth)
    coroots = assoc.coroots_with_fresh()
    shift = lift_base(lam)
    witnesses = []
    for p in g.sorted_nodes():
        if is_dominant_shifted(assoc, embed_path(g, p, assoc), shift, coroots):
            witnesses.append((p, lam + wt(p)))
    comps = _collect([nu for _, nu in witnesses])
    dec = Decomposition(comps, witnesses)
    if verify:
        top = lam + mu
        lhs = character(datum, lam, depth, node_budget=node_budget) * truncated_character(g)
        rhs = CharacterElement({}, top, depth)
        for nu, n in comps:
            d = int(nu.depth_below(top))
            ch = character(datum, nu, depth - d, node_budget=node_budget)
            for _ in range(n):
                rhs = rhs + ch
        dec.lhs, dec.rhs, dec.verified = lhs, rhs, lhs == rhs
    return dec


def levi_coroots(assoc: AssociatedDatum, subset: Iterable) -> tuple:
    return assoc.coroots_with_fresh(subset)


def branch(datum, lam: Weight, subset: Iterable, depth: int, verify: bool = False,
           node_budget: int = DEFAULT_NODE_BUDGET) -> Decomposition:
    """Highest weights for the Levi subalgebra on ``subset``."""
    S = tuple(i for i in datum.indices if i in set(subset))
    g = generate(datum, lam, depth, node_budget=node_budget)
    assoc = default_assoc(datum, depth)
    coroots = levi_coroots(assoc, S)
    zero = Weight()
    witnesses = []
    for p in g.sorted_nodes():
        if is_dominant_shifted(assoc, embed_path(g, p, assoc), zero, coroots):
            witnesses.append((p, wt(p)))
    comps = _collect([nu for _, nu in witnesses])
    dec = Decomposition(comps, witnesses)
    if verify:
        lhs = truncated_character(g)
        rhs = CharacterElement({}, lam, depth)
        for nu, n in comps:
            d = int(nu.depth_below(lam))
            ch = character(datum, nu, depth - d, indices=S, node_budget=node_budget)
            for _ in range(n):
                rhs = rhs + ch
        dec.lhs, dec.rhs, dec.verified = lhs, rhs, lhs == rhs
    return dec


def reorder_generic(assoc: AssociatedDatum, lam: Weight, word: IndexWord) -> Path:
    """Given a generic word with ``F_(i,m) pi_lam~`` nonzero, return the ordered relabeling."""
    start = Path.straight(lift_base(lam))
    eta = apply_word(assoc, start, word.letters)
    if eta is None:
        raise ValueError("the generic monomial vanishes; the relabeling is only defined for nonzero paths")
    ordered = ordered_index(assoc.parent, word.erase_copies())
    out = apply_word(assoc, start, ordered.letters)
    if out is None:
        raise AssertionError("ordered relabeling vanished although the generic monomial did not")
    return out


def _check_pairing_one(datum, letters: Sequence, weight: Weight, which: str) -> None:
    mu = weight
    for pos, x in enumerate(letters, start=1):
        if not datum.is_real(x) and datum.pairing(x, mu) != 1:
            raise AdmissibilityError(
                f"word {which}: imaginary letter {pos} (r{x}) sees pairing {datum.pairing(x, mu)}, needs 1",
                condition=IMAGINARY_PAIRING, position=pos)
        mu = mu.minus_root(x, datum.pairing(x, mu))


@dataclass
class PRVReport:
    nu: Weight
    nu_bar_pairings: dict
    nu_bar_dominant: bool
    nu_dominant: bool
    occurs: bool | None
    status: str
    note: str

    def to_json(self) -> dict:
        return {"nu": weight_to_json(self.nu),
                "nu_bar_pairings": {format_label(k): str(v) for k, v in self.nu_bar_pairings.items()},
                "nu_bar_dominant": self.nu_bar_dominant,
                "nu_dominant": self.nu_dominant,
                "occurs": self.occurs,
                "status": self.status,
                "note": self.note}


def prv_check(datum, lam: Weight, mu: Weight, word_i: IndexWord, word_j: IndexWord, depth: int,
              decomposition: Decomposition | None = None,
              node_budget: int = DEFAULT_NODE_BUDGET) -> PRVReport:
    """Check the dominance criterion in the associated algebra against the tensor decomposition.

    Words are in application order.  Copies for ``word_j`` are shifted past
    those used by ``word_i`` so the two never share a copy.
    """
    _check_pairing_one(datum, word_i.letters, lam, "i")
    _check_pairing_one(datum, word_j.letters, mu, "j")
    m = ordered_index(datum, word_i)
    used: dict = {}
    for i, c in m.letters:
        if not datum.is_real(i):
            used[i] = max(used.get(i, 0), c)
    n = IndexWord(tuple((j, c + (0 if datum.is_real(j) else used.get(j, 0)))
                        for j, c in ordered_index(datum, word_j).letters))
    need = dict(used)
    for j, c in n.letters:
        if not datum.is_real(j):
            need[j] = max(need.get(j, 0), c)
    assoc = associated_datum(datum, {i: max(1, need.get(i, 0)) for i in datum.imaginary})
    nu = act(datum, tuple(reversed(word_i.letters)), lam) + act(datum, tuple(reversed(word_j.letters)), mu)
    nu_bar = (act(assoc, tuple(reversed(m.letters)), lift_base(lam))
              + act(assoc, tuple(reversed(n.letters)), lift_base(mu)))
    pairings = {c: assoc.pairing(c, nu_bar) for c in assoc.coroots_with_fresh()}
    bar_dom = all(v >= 0 for v in pairings.values())
    nu_dom = is_dominant(datum, nu)
    top = lam + mu
    occurs = None
    if nu_dom:
        d = nu.depth_below(top)
        if d <= depth:
            dec = decomposition or tensor_decompose(datum, lam, mu, depth, node_budget=node_budget)
            occurs = nu in dec.multiset()
    if bar_dom:
        if occurs is None:
            status, note = "inconclusive", "depth too small to witness nu"
        elif occurs:
            status, note = "pass", "nu occurs as predicted"
        else:
            status, note = "fail", "nu-bar dominant but nu does not occur"
    else:
        status = "no-claim"
        if nu_dom and occurs is False:
            note = "nu-bar non-dominant; counterexample reproduced (nu dominant but absent)"
        else:
            note = "nu-bar non-dominant; no prediction"
    return PRVReport(nu, pairings, bar_dom, nu_dom, occurs, status, note)


def tensor_nodes(datum, lam: Weight, mu: Weight, depth: int,
                 node_budget: int = DEFAULT_NODE_BUDGET) -> dict:
    """Concatenations ``p * q`` of depth at most ``depth``, mapped to their factors."""
    g1 = generate(datum, lam, depth, node_budget=node_budget)
    g2 = generate(datum, mu, depth, node_budget=node_budget)
    out = {}
    for p in g1.sorted_nodes():
        for q in g2.sorted_nodes():
            if g1.node_depth(p) + g2.node_depth(q) <= depth:
                out[concat(p, q)] = (p, q)
    return out


def is_highest_weight(datum, path: Path, members) -> bool:
    for i in datum.indices:
        if datum.is_real(i):
            if e_op_real(datum, path, i) is not None:
                return False
        elif e_op_cutoff(datum, path, i, members) is not None:
            return False
    return True


@dataclass
class TensorHighestReport:
    nu: Weight
    weight_space: list
    raised: Path | None
    expected_raised: Path
    highest_nodes: list
    nu_bar_pairing: Fraction

    @property
    def reproduced(self) -> bool:
        return (not self.highest_nodes and self.raised is not None
                and self.raised == self.expected_raised and self.nu_bar_pairing == -1)


def tensor_highest_check(datum, lam: Weight, mu: Weight, i, depth: int = 2) -> TensorHighestReport:
    """Inspect the weight ``lam + mu - alpha_i`` in the concatenation crystal."""
    nodes = tensor_nodes(datum, lam, mu, depth)
    members = frozenset(nodes)
    nu = (lam + mu).minus_root(i)
    space = sorted(p for p in nodes if wt(p) == nu)
    pl, pm = Path.straight(lam), Path.straight(mu)
    fm = f_op(datum, pm, i)
    target = concat(pl, fm) if fm is not None else None
    raised = None
    if target is not None and target in members:
        raised = e_op_cutoff(datum, target, i, members) if not datum.is_real(i) \
            else e_op_real(datum, target, i)
    highest = [p for p in space if is_highest_weight(datum, p, members)]
    assoc = associated_datum(datum, 1)
    nu_bar = lift_base(lam) + act(assoc, ((i, 1),), lift_base(mu))
    return TensorHighestReport(nu, space, raised, concat(pl, pm), highest,
                               assoc.pairing((i, 1), nu_bar))
