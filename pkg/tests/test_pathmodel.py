from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from gkmcrystal import load_fixture
from gkmcrystal.cartan import Weight
from gkmcrystal.crystal import generate
from gkmcrystal.monoid import act, reflect
from gkmcrystal.pathmodel import (GLSView, NotAMember, Path, a_chain_exists, concat, e_op,
                                  e_op_cutoff, e_op_imaginary_raw, e_op_real, eps, f_op,
                                  h_profile, min_integer_level, phi, s_action, validate_gls, wt)

F = Fraction


def test_canonical_form_merges_segments():
    lam = Weight.make("lam")
    p = Path.make([(lam, F(1, 3)), (lam, F(2, 3))])
    assert p == Path.straight(lam)
    assert Path.from_json(p.to_json()) == p


def test_profile_of_straight_path(fx):
    a1 = fx("a1")
    p = Path.straight(a1.weight("lam2"))
    assert h_profile(a1, p, "1") == ((0, 0), (1, 2))
    assert min_integer_level(a1, p, "1") == 0


def test_level_is_ceiling_of_minimum(fx):
    a1 = fx("a1")
    lam = a1.weight("lam1")
    # H goes 0 -> -3/2 -> -1/2
    p = Path.make([(lam.minus_root("1", 2), F(1, 2)), (lam, F(1, 2))])
    verts = h_profile(a1, p, "1")
    assert min(h for _, h in verts) == F(-3, 2)
    assert min_integer_level(a1, p, "1") == -1


def test_a1_lowering(fx):
    a1 = fx("a1")
    lam = a1.weight("lam2")
    q = f_op(a1, Path.straight(lam), "1")
    view = GLSView.from_path(q)
    assert view.weights == (lam.minus_root("1", 2), lam)
    assert view.cuts == (0, F(1, 2), 1)
    assert q.endpoint() == lam.minus_root("1")
    assert h_profile(a1, q, "1") == ((0, 0), (F(1, 2), -1), (1, 0))
    assert min_integer_level(a1, q, "1") == -1
    assert (eps(a1, q, "1"), phi(a1, q, "1")) == (1, 1)
    assert e_op_real(a1, q, "1") == Path.straight(lam)
    assert f_op(a1, f_op(a1, q, "1"), "1") is None


def test_imaginary_lowering_is_straight(fx):
    m = fx("mixed")
    lam = m.weight("lam01")
    p = Path.straight(lam)
    for n in range(1, 6):
        p = f_op(m, p, "2")
        assert p == Path.straight(lam.minus_root("2", n))


def test_imaginary_raising(fx):
    m = fx("mixed")
    lam = m.weight("lam01")
    top = Path.straight(lam)
    low = f_op(m, top, "2")
    assert e_op_imaginary_raw(m, low, "2") == top
    g = generate(m, lam, 3)
    assert e_op_cutoff(m, low, "2", g) == top
    raw = e_op_imaginary_raw(m, top, "2")
    assert raw is None or wt(raw) == lam + Weight.make(None, {"2": -1})
    assert e_op_cutoff(m, top, "2", g) is None
    assert eps(m, top, "2") == 0


def test_cutoff_needs_membership(fx):
    m = fx("mixed")
    g = generate(m, m.weight("lam01"), 1)
    stranger = Path.straight(m.weight("lam10"))
    with pytest.raises(NotAMember):
        e_op_cutoff(m, stranger, "2", g)
    with pytest.raises(ValueError):
        e_op(m, stranger, "2")


@pytest.mark.parametrize("aii", [0, -2])
def test_rank_one_imaginary_string(aii):
    from gkmcrystal.cartan import validate_datum
    d = validate_datum(["1"], [[aii]], None, {"lam": [1]})
    g = generate(d, d.weight("lam"), 10)
    chain = [Path.straight(d.weight("lam"))]
    for _ in range(10):
        chain.append(f_op(d, chain[-1], "1"))
    assert set(chain) == set(g.nodes)
    for n in range(1, 11):
        assert e_op_cutoff(d, chain[n], "1", g) == chain[n - 1]


def test_real_fphi_zero_case(fx):
    a1 = fx("a1")
    low = f_op(a1, f_op(a1, Path.straight(a1.weight("lam2")), "1"), "1")
    assert phi(a1, low, "1") == 0
    assert f_op(a1, low, "1") is None


def test_chains_and_gls(fx):
    m = fx("mixed")
    lam = m.weight("lam01")
    assert a_chain_exists(m, reflect(m, "2", lam), lam, 1, lam=lam) is True
    assert a_chain_exists(m, lam, lam, F(1, 3), lam=lam) is True
    assert validate_gls(m, GLSView.from_path(Path.straight(lam)), lam) is True
    a1 = fx("a1")
    q = f_op(a1, Path.straight(a1.weight("lam2")), "1")
    assert validate_gls(a1, GLSView.from_path(q), a1.weight("lam2")) is True


def test_gls_rejects_bad_cut(fx):
    a1 = fx("a1")
    lam = a1.weight("lam2")
    bad = GLSView((lam.minus_root("1", 2), lam), (F(0), F(1, 3), F(1)))
    assert validate_gls(a1, bad, lam) is False


def test_concat_endpoint(fx):
    a1 = fx("a1")
    p = Path.straight(a1.weight("lam1"))
    q = f_op(a1, Path.straight(a1.weight("lam2")), "1")
    assert concat(p, q).endpoint() == p.endpoint() + q.endpoint()


def test_s_action_matches_weyl_action(fx):
    a2 = fx("a2")
    lam = a2.weight("lam11")
    g = generate(a2, lam, 4)
    for p in g.nodes:
        for word in (("1",), ("2", "1"), ("1", "2", "1")):
            assert wt(s_action(a2, p, word)) == act(a2, word, wt(p))


def _random_walk(name, lam_name, steps):
    d = load_fixture(name)
    p = Path.straight(d.weight(lam_name))
    for i in steps:
        q = f_op(d, p, d.indices[i % len(d.indices)])
        if q is not None:
            p = q
    return d, p


walks = st.tuples(st.sampled_from([("a2", "lam11"), ("b2", "lam11"), ("mixed", "lam11"),
                                   ("example222", "lam111"), ("a1", "lam2")]),
                  st.lists(st.integers(0, 5), max_size=6))


@settings(max_examples=60, deadline=None)
@given(walks)
def test_string_identity_on_random_paths(walk):
    (name, lam), steps = walk
    d, p = _random_walk(name, lam, steps)
    for i in d.indices:
        assert phi(d, p, i) - eps(d, p, i) == d.pairing(i, wt(p))
        if not d.is_real(i):
            assert eps(d, p, i) == 0


@settings(max_examples=60, deadline=None)
@given(walks)
def test_real_raising_inverts_lowering(walk):
    (name, lam), steps = walk
    d, p = _random_walk(name, lam, steps)
    for i in d.real:
        q = f_op(d, p, i)
        if q is not None:
            assert e_op_real(d, q, i) == p
            assert wt(q) == wt(p).minus_root(i)
        r = e_op_real(d, p, i)
        if r is not None:
            assert f_op(d, r, i) == p
