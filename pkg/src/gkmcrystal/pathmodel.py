"""Piecewise-linear paths with rational breakpoints and their root operators.

A path is stored as segments ``(direction, duration)``: on a segment of
duration ``tau`` the path moves by ``tau * direction``.  ``H_i`` is then
linear on each segment and every level set can be solved exactly.
"""

from __future__ import annotations

import json
import math
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Callable, Iterable

from .cartan import Weight, weight_from_json, weight_to_json
from .monoid import act, act_inverse, positive_roots, reflect


class OperatorUndefined(ArithmeticError):
    """``f_i`` cannot be applied: level ``m + 1`` is never reached after ``f_+``."""


class NotAMember(ValueError):
    pass


def _canonical(segments: Iterable) -> tuple:
    out: list = []
    for d, tau in segments:
        tau = Fraction(tau)
        if tau == 0:
            continue
        if tau < 0:
            raise ValueError("segment durations must be positive")
        if out and out[-1][0] == d:
            out[-1] = (d, out[-1][1] + tau)
        else:
            out.append((d, tau))
    return tuple(out)


@dataclass(frozen=True)
class Path:
    segments: tuple

    @classmethod
    def make(cls, segments: Iterable) -> "Path":
        segs = _canonical(segments)
        if not segs:
            raise ValueError("a path needs at least one segment")
        if sum(t for _, t in segs) != 1:
            raise ValueError("segment durations must sum to 1")
        return cls(segs)

    @classmethod
    def straight(cls, weight: Weight) -> "Path":
        return cls(((weight, Fraction(1)),))

    def endpoint(self) -> Weight:
        total = Weight()
        for d, tau in self.segments:
            total = total + d.scale(tau)
        return total

    def at(self, t) -> Weight:
        t = Fraction(t)
        total = Weight()
        start = Fraction(0)
        for d, tau in self.segments:
            if t <= start:
                break
            total = total + d.scale(min(tau, t - start))
            start += tau
        return total

    def cuts(self) -> tuple:
        out = [Fraction(0)]
        for _, tau in self.segments:
            out.append(out[-1] + tau)
        return tuple(out)

    def to_json(self) -> list:
        return [{"direction": weight_to_json(d), "duration": str(tau)} for d, tau in self.segments]

    @classmethod
    def from_json(cls, data) -> "Path":
        return cls.make((weight_from_json(s["direction"]), Fraction(s["duration"])) for s in data)

    @cached_property
    def key(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, separators=(",", ":"))

    def __lt__(self, other: "Path") -> bool:
        return self.key < other.key

    def __str__(self) -> str:
        return " | ".join(f"{d} x{tau}" for d, tau in self.segments)


def wt(path: Path) -> Weight:
    return path.endpoint()


def h_profile(datum, path: Path, i) -> tuple:
    """Vertices ``(t, H_i(t))`` of the piecewise-linear function ``H_i``."""
    verts = [(Fraction(0), Fraction(0))]
    t = h = Fraction(0)
    for d, tau in path.segments:
        t += tau
        h += tau * datum.pairing(i, d)
        verts.append((t, h))
    return tuple(verts)


def min_integer_level(datum, path: Path, i) -> int:
    return math.ceil(min(h for _, h in h_profile(datum, path, i)))


def _level_points(verts, level, lo, hi) -> list:
    pts = []
    for (t0, h0), (t1, h1) in zip(verts, verts[1:]):
        a, b = max(t0, lo), min(t1, hi)
        if a > b:
            continue
        if h0 == h1:
            if h0 == level:
                pts.extend((a, b))
            continue
        if min(h0, h1) <= level <= max(h0, h1):
            t = t0 + (level - h0) / (h1 - h0) * (t1 - t0)
            if a <= t <= b:
                pts.append(t)
    return pts


def _first(verts, level, lo=Fraction(0), hi=Fraction(1)):
    pts = _level_points(verts, level, lo, hi)
    return min(pts) if pts else None


def _last(verts, level, lo=Fraction(0), hi=Fraction(1)):
    pts = _level_points(verts, level, lo, hi)
    return max(pts) if pts else None


def _value(verts, t):
    for (t0, h0), (t1, h1) in zip(verts, verts[1:]):
        if t0 <= t <= t1:
            return h0 if t1 == t0 else h0 + (h1 - h0) * (t - t0) / (t1 - t0)
    raise ValueError(f"t = {t} is outside [0, 1]")


def _range_values(verts, lo, hi) -> list:
    vals = [_value(verts, lo), _value(verts, hi)]
    vals.extend(h for t, h in verts if lo <= t <= hi)
    return vals


def _transform(path: Path, a, b, fn: Callable[[Weight], Weight]) -> Path:
    """Apply ``fn`` to every direction on ``[a, b]``, splitting segments as needed."""
    out = []
    start = Fraction(0)
    for d, tau in path.segments:
        end = start + tau
        pieces = [start]
        for c in (a, b):
            if start < c < end:
                pieces.append(c)
        pieces.append(end)
        for p0, p1 in zip(pieces, pieces[1:]):
            inside = a <= p0 and p1 <= b
            out.append((fn(d) if inside else d, p1 - p0))
        start = end
    return Path.make(out)


def f_op(datum, path: Path, i) -> Path | None:
    verts = h_profile(datum, path, i)
    m = math.ceil(min(h for _, h in verts))
    fp = _last(verts, m)
    if fp == 1:
        return None
    fm = _first(verts, m + 1, lo=fp)
    if fm is None:
        raise OperatorUndefined(f"f_{i} is undefined: H never reaches {m + 1} after t = {fp}")
    return _transform(path, fp, fm, lambda d: reflect(datum, i, d))


def e_op_real(datum, path: Path, i) -> Path | None:
    if not datum.is_real(i):
        raise ValueError(f"index {i} is imaginary")
    verts = h_profile(datum, path, i)
    m = math.ceil(min(h for _, h in verts))
    ep = _first(verts, m)
    if ep == 0:
        return None
    em = _last(verts, m + 1, hi=ep)
    return _transform(path, em, ep, lambda d: reflect(datum, i, d))


def e_op_imaginary_raw(datum, path: Path, i) -> Path | None:
    """The imaginary raising operator on all paths, before the cutoff."""
    if datum.is_real(i):
        raise ValueError(f"index {i} is real")
    aii = datum.a(i, i)
    verts = h_profile(datum, path, i)
    m = math.ceil(min(h for _, h in verts))
    em = _last(verts, m)
    if em == 1:
        return None
    threshold = m + 1 - aii
    if max(_range_values(verts, em, Fraction(1))) < threshold:
        return None
    ep = _first(verts, threshold, lo=em)
    if min(_range_values(verts, ep, Fraction(1))) <= m - aii:
        return None
    return _transform(path, em, ep, lambda d: act_inverse(datum, i, d))


def _contains(members, path: Path) -> bool:
    if hasattr(members, "contains"):
        return members.contains(path)
    return path in members


def e_op_cutoff(datum, path: Path, i, members) -> Path | None:
    """Imaginary raising operator cut off to a generated crystal (or any path set)."""
    if not _contains(members, path):
        raise NotAMember("the path is not a member of the supplied crystal")
    out = e_op_imaginary_raw(datum, path, i)
    if out is None or not _contains(members, out):
        return None
    return out


def e_op(datum, path: Path, i, members=None) -> Path | None:
    if datum.is_real(i):
        return e_op_real(datum, path, i)
    if members is None:
        raise ValueError("imaginary raising operators need the ambient crystal for the cutoff")
    return e_op_cutoff(datum, path, i, members)


def eps(datum, path: Path, i) -> int:
    if not datum.is_real(i):
        return 0
    return -min_integer_level(datum, path, i)


def phi(datum, path: Path, i):
    if not datum.is_real(i):
        return datum.pairing(i, wt(path))
    verts = h_profile(datum, path, i)
    return verts[-1][1] - math.ceil(min(h for _, h in verts))


def concat(p1: Path, p2: Path) -> Path:
    """The path ``p1 * p2``: each factor is run at double speed on half the interval."""
    half = Fraction(1, 2)
    return Path.make([(d.scale(2), tau * half) for d, tau in p1.segments]
                     + [(d.scale(2), tau * half) for d, tau in p2.segments])


def s_action(datum, path: Path, word) -> Path:
    """Act by a real Weyl group word through powers of ``f_i`` or ``e_i``."""
    letters = tuple(word.letters if hasattr(word, "letters") else word)
    target = act(datum, letters, wt(path))
    for x in reversed(letters):
        if not datum.is_real(x):
            raise ValueError(f"letter {x} is not real")
        n = datum.pairing(x, wt(path))
        step = f_op if n >= 0 else e_op_real
        for _ in range(int(abs(n))):
            path = step(datum, path, x)
            if path is None:
                raise NotAMember(f"a power of the operator for r{x} left the crystal")
    assert wt(path) == target
    return path


@dataclass(frozen=True)
class GLSView:
    """``(lambda_1 > ... > lambda_s ; 0 = a_0 < ... < a_s = 1)``."""

    weights: tuple
    cuts: tuple

    @classmethod
    def from_path(cls, path: Path) -> "GLSView":
        return cls(tuple(d for d, _ in path.segments), path.cuts())

    def to_path(self) -> Path:
        return Path.make((w, b - a) for w, a, b in zip(self.weights, self.cuts, self.cuts[1:]))


def weyl_orbit(datum, lam: Weight, height: int = 12) -> tuple:
    """Orbit of ``lam`` under all simple reflections, down to depth ``height``.

    Returns ``(elements, complete)``.
    """
    seen = {lam}
    queue = deque([lam])
    complete = True
    while queue:
        mu = queue.popleft()
        for j in datum.indices:
            nu = reflect(datum, j, mu)
            if nu == mu or nu in seen:
                continue
            if nu.depth_below(lam) > height:
                complete = False
                continue
            if nu.depth_below(lam) < 0:
                continue
            seen.add(nu)
            queue.append(nu)
    return frozenset(seen), complete


class OrbitPoset:
    """The order on a truncated orbit with single reflection steps as edges."""

    def __init__(self, datum, lam: Weight, height: int = 12):
        self.datum = datum
        self.lam = lam
        self.elements, orbit_complete = weyl_orbit(datum, lam, height)
        self.roots, roots_complete = positive_roots(datum, height)
        self.complete = orbit_complete and roots_complete
        # up[nu] = list of (mu, root) with mu = r_beta nu and beta^vee(nu) > 0
        self.up: dict = {nu: [] for nu in self.elements}
        for nu in self.elements:
            for beta in self.roots:
                c = beta.coroot_pairing(datum, nu)
                if c <= 0:
                    continue
                mu = nu - beta.weight().scale(c)
                if mu in self.elements:
                    self.up[nu].append((mu, beta, c))
        self._above: dict = {}

    def above(self, nu) -> frozenset:
        """Elements strictly greater than ``nu``."""
        if nu not in self._above:
            out = set()
            stack = [nu]
            while stack:
                x = stack.pop()
                for mu, _, _ in self.up[x]:
                    if mu not in out:
                        out.add(mu)
                        stack.append(mu)
            self._above[nu] = frozenset(out)
        return self._above[nu]

    def covers(self, nu) -> list:
        above = self.above(nu)
        out = []
        for mu, beta, c in self.up[nu]:
            if not any(mu in self.above(xi) for xi in above if xi != mu):
                out.append((mu, beta, c))
        return out


def a_chain_exists(datum, mu: Weight, nu: Weight, a, lam: Weight | None = None,
                   height: int = 12, max_length: int = 8, poset: OrbitPoset | None = None):
    """Search an ``a``-chain for ``(mu, nu)``; returns True, False or None."""
    a = Fraction(a)
    if mu == nu:
        return True
    if poset is None:
        poset = OrbitPoset(datum, lam if lam is not None else nu, height)
    if mu not in poset.elements or nu not in poset.elements:
        return None
    truncated = False
    stack = [(nu, 0)]
    visited = set()
    while stack:
        x, depth = stack.pop()
        if depth >= max_length:
            truncated = True
            continue
        for y, beta, c in poset.covers(x):
            v = a * c
            ok = (v == 1) if not beta.real else (v > 0 and v.denominator == 1)
            if not ok:
                continue
            if y == mu:
                return True
            if (y, depth + 1) not in visited:
                visited.add((y, depth + 1))
                stack.append((y, depth + 1))
    return False if (poset.complete and not truncated) else None


def validate_gls(datum, view: GLSView, lam: Weight, height: int = 12, max_length: int = 8):
    poset = OrbitPoset(datum, lam, height)
    verdicts = []
    for k in range(len(view.weights) - 1):
        verdicts.append(a_chain_exists(datum, view.weights[k], view.weights[k + 1], view.cuts[k + 1],
                                       height=height, max_length=max_length, poset=poset))
    verdicts.append(a_chain_exists(datum, view.weights[-1], lam, 1,
                                   height=height, max_length=max_length, poset=poset))
    if all(v is True for v in verdicts):
        return True
    if any(v is False for v in verdicts):
        return False
    return None
