import random

import pytest

from handlenu.homology import (
    ConnectedSum,
    DescriptorError,
    Explicit,
    HomologyVector,
    Product,
    RationalChainComplex,
    Sphere,
    Surface,
    betti,
    chain_betti,
    chain_complex_from_json,
    chain_complex_to_json,
    desc_equal,
    descriptor_from_json,
    descriptor_to_json,
    dimension,
    normalize,
    pretty,
    total_betti,
)
from gen import random_descriptor


def test_sphere_betti():
    assert betti(Sphere(2)).betti == (1, 0, 1)
    assert betti(Sphere(1)).betti == (1, 1)
    assert betti(Sphere(5)).betti == (1, 0, 0, 0, 0, 1)


def test_surface_betti_and_total():
    assert betti(Surface(3)).betti == (1, 6, 1)
    assert total_betti(Surface(3)) == 8
    assert total_betti(Surface(0)) == 2
    for g in range(5):
        assert total_betti(Surface(g)) == 2 + 2 * g


def test_torus_as_product_of_circles():
    torus = Product(Sphere(1), Sphere(1))
    assert betti(torus).betti == (1, 2, 1)
    assert total_betti(torus) == 4


def test_connected_sum_betti():
    two_tori = ConnectedSum((Surface(1), Surface(1)))
    assert betti(two_tori).betti == betti(Surface(2)).betti
    three_spheres = ConnectedSum((Sphere(3), Sphere(3)))
    assert betti(three_spheres).betti == (1, 0, 0, 1)


def test_total_betti_of_rational_homology_sphere():
    qhs = Explicit(3, HomologyVector(3, (1, 0, 0, 1)), "qhs")
    assert total_betti(qhs) == 2


def test_dimension():
    assert dimension(Product(Sphere(1), Sphere(2))) == 3
    assert dimension(Surface(2)) == 2
    assert dimension(ConnectedSum((Sphere(4),))) == 4


def test_descriptor_constructor_errors():
    with pytest.raises(DescriptorError):
        Sphere(0)
    with pytest.raises(DescriptorError):
        Surface(-1)
    with pytest.raises(DescriptorError):
        Surface(2, orientable=False)
    with pytest.raises(DescriptorError):
        ConnectedSum(())
    with pytest.raises(DescriptorError):
        ConnectedSum((Sphere(2), Sphere(3)))
    with pytest.raises(DescriptorError):
        ConnectedSum((Sphere(1), Sphere(1)))
    with pytest.raises(DescriptorError):
        # Klein-bottle Betti data is not palindromic, so it cannot be a summand.
        ConnectedSum((Explicit(2, HomologyVector(2, (1, 1, 0)), "klein"),))
    with pytest.raises(DescriptorError):
        Explicit(3, HomologyVector(2, (1, 0, 1)))
    with pytest.raises(DescriptorError):
        HomologyVector(2, (1, -1, 1))


def test_normalize_orders_products_and_sums():
    a, b = Sphere(1), Surface(2)
    assert normalize(Product(b, a)) == normalize(Product(a, b))
    left = ConnectedSum((Surface(2), Surface(1)))
    right = ConnectedSum((Surface(1), Surface(2)))
    assert normalize(left) == normalize(right)


def test_normalize_collapses_trivial_shapes():
    assert normalize(Surface(0)) == Sphere(2)
    assert desc_equal(ConnectedSum((Surface(1), Sphere(2))), Surface(1))
    assert desc_equal(ConnectedSum((Sphere(3), Sphere(3))), Sphere(3))


def test_desc_equal_is_structural():
    # Same manifold, different spellings: not equal by design.
    assert not desc_equal(Product(Sphere(1), Sphere(1)), Surface(1))


def test_pretty():
    assert pretty(Surface(1)) == "T^2"
    assert pretty(Surface(2)) == "Sigma_2"
    assert pretty(Product(Sphere(1), Sphere(2))) == "S^1 x S^2"
    assert pretty(ConnectedSum((Surface(1), Surface(1)))) == "T^2 # T^2"


def test_descriptor_json_round_trip():
    samples = [
        Sphere(4),
        Surface(2),
        Product(Sphere(1), Surface(3)),
        ConnectedSum((Surface(1), Surface(2))),
        Explicit(3, HomologyVector(3, (1, 0, 0, 1)), "qhs"),
    ]
    for desc in samples:
        assert descriptor_from_json(descriptor_to_json(desc)) == desc
    with pytest.raises(DescriptorError):
        descriptor_from_json({"type": "klein-bottle"})
    with pytest.raises(DescriptorError):
        descriptor_from_json({"no": "tag"})
    with pytest.raises(DescriptorError):
        descriptor_from_json({"type": "sphere", "n": "two"})
    with pytest.raises(DescriptorError):
        descriptor_from_json({"type": "connected-sum", "parts": "oops"})


def test_kunneth_commutes_on_random_pairs():
    rng = random.Random(8101)
    for _ in range(60):
        a = random_descriptor(rng)
        b = random_descriptor(rng)
        assert betti(Product(a, b)) == betti(Product(b, a))


def test_orientable_descriptors_are_palindromic():
    rng = random.Random(8102)
    for _ in range(60):
        assert betti(random_descriptor(rng)).palindromic


def test_connected_sum_with_sphere_is_identity():
    rng = random.Random(8103)
    for _ in range(60):
        desc = random_descriptor(rng)
        n = dimension(desc)
        if n < 2:
            continue
        assert betti(ConnectedSum((desc, Sphere(n)))) == betti(desc)


# --- explicit cell structures ----------------------------------------------
#
# Hand-checked ranks are noted next to each fixture; for example the two-disc
# sphere has rank(d1) = 2 and rank(d2) = 1, giving (3, 3, 2) cells -> (1, 0, 1).

CIRCLE_D1 = (
    (-1, 0, -1),
    (1, -1, 0),
    (0, 1, 1),
)

TWO_DISC_SPHERE_D2 = (
    (1, -1),
    (1, -1),
    (-1, 1),
)

TETRA_D1 = (
    (-1, -1, -1, 0, 0, 0),
    (1, 0, 0, -1, -1, 0),
    (0, 1, 0, 1, 0, -1),
    (0, 0, 1, 0, 1, 1),
)

TETRA_D2 = (
    (1, 1, 0, 0),
    (-1, 0, 1, 0),
    (0, -1, -1, 0),
    (1, 0, 0, 1),
    (0, 1, 0, -1),
    (0, 0, 1, 1),
)


def _zeros(rows, cols):
    return tuple((0,) * cols for _ in range(rows))


def circle_complex():
    return RationalChainComplex(1, (3, 3), (CIRCLE_D1,))


def two_disc_sphere_complex():
    return RationalChainComplex(2, (3, 3, 2), (CIRCLE_D1, TWO_DISC_SPHERE_D2))


def tetrahedron_complex():
    return RationalChainComplex(2, (4, 6, 4), (TETRA_D1, TETRA_D2))


def one_vertex_surface_complex(genus):
    return RationalChainComplex(
        2, (1, 2 * genus, 1), (_zeros(1, 2 * genus), _zeros(2 * genus, 1))
    )


def circle_times_sphere_complex():
    return RationalChainComplex(
        3, (1, 1, 1, 1), (_zeros(1, 1), _zeros(1, 1), _zeros(1, 1))
    )


FIXTURES = [
    (circle_complex, Sphere(1)),
    (two_disc_sphere_complex, Sphere(2)),
    (tetrahedron_complex, Sphere(2)),
    (lambda: one_vertex_surface_complex(1), Surface(1)),
    (lambda: one_vertex_surface_complex(2), Surface(2)),
    (lambda: one_vertex_surface_complex(3), Surface(3)),
    (circle_times_sphere_complex, Product(Sphere(1), Sphere(2))),
]


@pytest.mark.parametrize("make_complex,symbolic", FIXTURES)
def test_chain_betti_matches_symbolic(make_complex, symbolic):
    assert chain_betti(make_complex()) == betti(symbolic)


def test_chain_betti_frozen_values():
    assert chain_betti(circle_complex()).betti == (1, 1)
    assert chain_betti(two_disc_sphere_complex()).betti == (1, 0, 1)
    assert chain_betti(circle_times_sphere_complex()).betti == (1, 1, 1, 1)


def test_product_cross_check_against_cells():
    # Kunneth result for the product equals the cell computation for the same space.
    assert betti(Product(Sphere(1), Sphere(2))).betti == (1, 1, 1, 1)
    assert chain_betti(circle_times_sphere_complex()).betti == (1, 1, 1, 1)


def test_malformed_complex_rejected():
    with pytest.raises(DescriptorError):
        RationalChainComplex(2, (1, 1, 1), (((1,),), ((1,),)))
    with pytest.raises(DescriptorError):
        RationalChainComplex(1, (2, 2), (((1, 0),),))  # wrong shape


def test_chain_complex_json_round_trip():
    cc = tetrahedron_complex()
    again = chain_complex_from_json(chain_complex_to_json(cc))
    assert again == cc
    assert chain_betti(again) == chain_betti(cc)
