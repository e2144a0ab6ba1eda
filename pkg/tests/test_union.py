import random

import pytest

from handlenu.catalog import genus_one_trace, solid_torus_trace, sphere_trace
from handlenu.homology import Explicit, HomologyVector, Sphere, Surface
from handlenu.nu import nu_of_ordering
from handlenu.trace import (
    Declared,
    Dim3One,
    Dim3Zero,
    HandleRecord,
    OrderedHandleDecomposition,
    dualize,
    replay,
)
from handlenu.union import (
    GlueError,
    GlueSpec,
    check_chain,
    check_key_inequality,
    compose,
)
from gen import random_composable_pair


def torus_glue():
    return GlueSpec((("h:2", "base:0"),))


def test_compose_two_solid_tori_closes_up():
    first = solid_torus_trace()
    second = dualize(first)
    composite = compose(first, second, torus_glue())
    assert composite.base == ()
    assert composite.delta == 4
    assert [s.descriptors() for s in replay(composite)] == [
        (), (Sphere(2),), (Surface(1),), (Sphere(2),), ()
    ]
    assert nu_of_ordering(composite).nu == 4


def test_compose_preserves_handle_count():
    rng = random.Random(8301)
    for _ in range(30):
        dm, dn, glue = random_composable_pair(rng)
        composite = compose(dm, dn, glue)
        assert composite.delta == dm.delta + dn.delta


def test_compose_with_collar_is_identity_on_states():
    first = solid_torus_trace()
    collar = OrderedHandleDecomposition(3, (Surface(1),), ())
    composite = compose(first, collar, torus_glue())
    assert [s.descriptors() for s in replay(composite)] == [
        s.descriptors() for s in replay(first)
    ]
    report = check_key_inequality(first, collar, torus_glue())
    assert report.holds
    assert report.case == "first-prefix"
    assert report.lhs == nu_of_ordering(first).nu


def test_compose_prefix_and_suffix_reproduce_the_parts():
    rng = random.Random(8302)
    for _ in range(30):
        dm, dn, glue = random_composable_pair(rng)
        alpha = dm.delta
        states = replay(compose(dm, dn, glue))
        m_states = replay(dm)
        n_states = replay(dn)
        glued = {a for a, _ in glue.pairs}
        remainder = sorted(
            (c.desc for c in m_states[-1].components if c.id not in glued),
            key=repr,
        )
        b_descs = sorted(
            (dn.base[i] for i in range(len(dn.base))
             if f"base:{i}" not in {b for _, b in glue.pairs}),
            key=repr,
        )
        for mu in range(alpha + 1):
            expect = sorted(list(m_states[mu].descriptors()) + list(b_descs), key=repr)
            assert sorted(states[mu].descriptors(), key=repr) == expect
        for j in range(dn.delta + 1):
            expect = sorted(list(n_states[j].descriptors()) + list(remainder), key=repr)
            assert sorted(states[alpha + j].descriptors(), key=repr) == expect


def test_compose_rejects_descriptor_mismatch():
    first = solid_torus_trace()
    wrong = OrderedHandleDecomposition(3, (Surface(2),), ())
    with pytest.raises(GlueError):
        compose(first, wrong, torus_glue())


def test_compose_rejects_unknown_ids():
    first = solid_torus_trace()
    second = dualize(first)
    with pytest.raises(GlueError):
        compose(first, second, GlueSpec((("h:9", "base:0"),)))
    with pytest.raises(GlueError):
        compose(first, second, GlueSpec((("h:2", "base:7"),)))


def test_glue_spec_must_be_injective():
    with pytest.raises(GlueError):
        GlueSpec((("h:1", "base:0"), ("h:1", "base:1")))
    with pytest.raises(GlueError):
        GlueSpec(())


def test_compose_keeps_unglued_remainder():
    # First part ends with two boundary spheres; glue only one of them.
    first = OrderedHandleDecomposition(
        3, (), (HandleRecord(0, Dim3Zero()), HandleRecord(0, Dim3Zero()))
    )
    second = OrderedHandleDecomposition(
        3,
        (Sphere(2),),
        (HandleRecord(1, Dim3One("base:0", "base:0")),),
    )
    composite = compose(first, second, GlueSpec((("h:1", "base:0"),)))
    final = replay(composite)[-1]
    assert sorted(final.descriptors(), key=repr) == [Sphere(2), Surface(1)]


def test_compose_rewrites_declared_suffix():
    first = OrderedHandleDecomposition(
        3, (), (HandleRecord(0, Dim3Zero()), HandleRecord(0, Dim3Zero()))
    )
    piece = Explicit(2, HomologyVector(2, (1, 2, 1)), "declared torus")
    second = OrderedHandleDecomposition(
        3, (Sphere(2),), (HandleRecord(2, Declared((piece,))),)
    )
    composite = compose(first, second, GlueSpec((("h:1", "base:0"),)))
    final = replay(composite)[-1]
    # The declared list replaces the glued sphere but carries the remainder along.
    assert sorted(final.descriptors(), key=repr) == sorted([piece, Sphere(2)], key=repr)


def test_inequality_base_component_case():
    # A high-genus preserved base component of the second part dominates.
    first = solid_torus_trace()
    second = OrderedHandleDecomposition(3, (Surface(3), Surface(1)), ())
    glue = GlueSpec((("h:2", "base:1"),))
    report = check_key_inequality(first, second, glue)
    assert report.holds
    assert report.case == "base-component"
    assert report.lhs == 8 and report.nu_second == 8


def test_inequality_second_suffix_case():
    first = OrderedHandleDecomposition(3, (), (HandleRecord(0, Dim3Zero()),))
    second = OrderedHandleDecomposition(
        3,
        (Sphere(2),),
        (
            HandleRecord(1, Dim3One("base:0", "base:0")),
            HandleRecord(1, Dim3One("h:1", "h:1")),
        ),
    )
    report = check_key_inequality(first, second, GlueSpec((("h:1", "base:0"),)))
    assert report.holds
    assert report.case == "second-suffix"
    assert report.lhs == 6


def test_inequality_on_random_pairs():
    rng = random.Random(8303)
    for _ in range(60):
        dm, dn, glue = random_composable_pair(rng)
        report = check_key_inequality(dm, dn, glue)
        assert report.holds, report.steps


def test_chain_single_part():
    report = check_chain([genus_one_trace()], [])
    assert report.lhs == 4 and report.rhs == 4 and report.holds


def test_chain_two_parts_delegates():
    first = solid_torus_trace()
    second = dualize(first)
    chain = check_chain([first, second], [torus_glue()])
    direct = check_key_inequality(first, second, torus_glue())
    assert chain.lhs == direct.lhs and chain.rhs == direct.rhs and chain.holds


def test_chain_three_parts():
    # Solid torus, a torus collar, then the dual solid torus: still the
    # genus-one closed pattern, now built in three stages.
    first = solid_torus_trace()
    collar = OrderedHandleDecomposition(3, (Surface(1),), ())
    last = dualize(first)
    # Gluing the collar leaves the composite's final boundary id at h:2.
    glues = [torus_glue(), torus_glue()]
    report = check_chain([first, collar, last], glues)
    assert report.holds
    assert report.part_values == (4, 4, 4)
    assert report.lhs == 4
    assert report.composite.delta == 4


def test_chain_errors_name_the_stage():
    first = solid_torus_trace()
    wrong = OrderedHandleDecomposition(3, (Surface(2),), ())
    with pytest.raises(GlueError, match="stage 2"):
        check_chain([first, wrong], [torus_glue()])
    with pytest.raises(GlueError):
        check_chain([], [])
    with pytest.raises(GlueError):
        check_chain([first], [torus_glue()])


def test_sphere_union_strict_drop_numbers():
    first = solid_torus_trace()
    second = dualize(first)
    report = check_key_inequality(first, second, torus_glue())
    assert report.lhs == 4 == report.rhs
    # The closed-up union is a sphere, whose own certificate is 2: the
    # ordering-level number and the manifold-level number stay distinct.
    assert nu_of_ordering(sphere_trace(3)).nu == 2 < report.lhs
