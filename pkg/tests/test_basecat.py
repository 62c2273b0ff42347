import numpy as np
import pytest

from catbundle.basecat import (
    PathCategory,
    QuiverCategory,
    SampledPath,
    compose_paths,
    constant_path,
)
from catbundle.crossed import CompositionUndefined

CHAIN = QuiverCategory(["a", "b", "c"], [("f", "a", "b"), ("g", "b", "c")], word_bound=3)


def test_single_arrow_enumeration():
    q = QuiverCategory(["a", "b"], [("f", "a", "b")])
    ms = q.morphisms_upto(1)
    assert len(ms) == 3  # id_a, id_b, f
    assert sum(m.is_identity for m in ms) == 2


def test_chain_enumeration_hand_count():
    # hand enumeration: id_a, id_b, id_c, f, g, g∘f
    ms = CHAIN.morphisms_upto(2)
    assert len(ms) == 6
    words = sorted(m.word for m in ms)
    assert words == [(), (), (), ("f",), ("f", "g"), ("g",)]


def test_zero_length_bound_gives_identities_only():
    ms = CHAIN.morphisms_upto(0)
    assert all(m.is_identity for m in ms) and len(ms) == 3


def test_quiver_composition_and_guards():
    f, g = CHAIN.arrow("f"), CHAIN.arrow("g")
    gf = CHAIN.compose(g, f)
    assert gf.word == ("f", "g") and gf.source == "a" and gf.target == "c"
    assert CHAIN.compose(gf, CHAIN.identity("a")) == gf
    assert CHAIN.compose(CHAIN.identity("c"), gf) == gf
    with pytest.raises(CompositionUndefined):
        CHAIN.compose(f, g)


def test_quiver_word_associativity_is_exact():
    q = QuiverCategory(["a", "b", "c", "d"],
                       [("f", "a", "b"), ("g", "b", "c"), ("h", "c", "d")])
    f, g, h = q.arrow("f"), q.arrow("g"), q.arrow("h")
    assert q.compose(q.compose(h, g), f) == q.compose(h, q.compose(g, f))


def test_paths_need_two_samples():
    with pytest.raises(ValueError):
        SampledPath([[0.0]])


def test_compose_paths_concatenates():
    p1 = SampledPath([[0.0], [1.0]])
    p2 = SampledPath([[1.0], [2.0]])
    whole = compose_paths(p2, p1)
    assert np.array_equal(whole.samples, np.array([[0.0], [1.0], [2.0]]))
    assert whole.pieces == (p1, p2)


def test_compose_with_constant_path_is_identity_up_to_dedup():
    seg = SampledPath([[0.0], [1.0]])
    idp = constant_path([0.0])
    whole = compose_paths(seg, idp)
    assert np.array_equal(whole.dedup(), seg.samples)
    other = compose_paths(constant_path([1.0]), seg)
    assert np.array_equal(other.dedup(), seg.samples)


def test_path_composition_associative_on_samples():
    a = SampledPath([[0.0, 0.0], [1.0, 0.0]])
    b = SampledPath([[1.0, 0.0], [1.0, 1.0]])
    c = SampledPath([[1.0, 1.0], [2.0, 1.0]])
    left = compose_paths(c, compose_paths(b, a))
    right = compose_paths(compose_paths(c, b), a)
    assert np.array_equal(left.samples, right.samples)


def test_compose_paths_endpoint_guard():
    p1 = SampledPath([[0.0], [1.0]])
    p2 = SampledPath([[1.5], [2.0]])
    with pytest.raises(CompositionUndefined):
        compose_paths(p2, p1)


def test_path_category_basics():
    cat = PathCategory(2)
    p = cat.identity([0.5, 0.5])
    assert np.array_equal(p.start, p.end)
    assert cat.point_eq(cat.source(p), cat.target(p))
    q = cat.random_path(np.random.default_rng(3), n_segments=2)
    assert q.dim == 2 and len(q.samples) == 3


def test_path_reverse():
    p = SampledPath([[0.0], [1.0], [3.0]])
    r = p.reverse()
    assert np.array_equal(r.samples, p.samples[::-1])
    comp = compose_paths(SampledPath([[3.0], [4.0]]), p)
    rev = comp.reverse()
    assert np.array_equal(rev.samples[0], [4.0]) and np.array_equal(rev.samples[-1], [0.0])


def test_leaves_order():
    a = SampledPath([[0.0], [1.0]])
    b = SampledPath([[1.0], [2.0]])
    c = SampledPath([[2.0], [3.0]])
    tree = compose_paths(c, compose_paths(b, a))
    assert [leaf.samples[0, 0] for leaf in tree.leaves()] == [0.0, 1.0, 2.0]
