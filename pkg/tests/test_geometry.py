from bubbleflow import (Cluster, ElementGeometry, Region, SurfacePatch, TripleJunction, circle_tangent,
                        contact_area_change, contact_area_change_oracle, geometric_volume_change_oracle, lumped_volume_change,
                        make_double_bubble_2d, make_double_bubble_3d, make_drop_on_substrate,
                        make_standard_bubble_2d, measure_angles, orientation_vector, quadratic_tangents,
                        region_volume, weighted_normal, weighted_xi, DegenerateSimplexError)
import numpy as np
import pytest


def tetrahedron_cluster():
    vertices = [(0., 0., 0.), (1., 0., 0.), (0., 1., 0.), (0., 0., 1.)]
    faces = [(0, 2, 1), (0, 1, 3), (0, 3, 2), (1, 2, 3)]
    return Cluster([SurfacePatch(0, vertices, faces)], regions=[Region(0, [0], [1], (), (0.1, 0.1, 0.1))])


def square_cluster():
    vertices = [(0., 0.), (1., 0.), (1., 1.), (0., 1.)]
    segments = [(0, 1), (1, 2), (2, 3), (3, 0)]
    return Cluster([SurfacePatch(0, vertices, segments)], regions=[Region(0, [0], [1], (), (0.5, 0.5))])


test_clusters = {'tetrahedron': tetrahedron_cluster,
                 'square': square_cluster,
                 'double_bubble_2d': lambda: make_double_bubble_2d(40),
                 'quadruple_bubble_2d': lambda: make_standard_bubble_2d(4, 80),
                 'double_bubble_3d': lambda: make_double_bubble_3d(75)}


def perturb(c, amplitude, rng):
    """Random displacement of every identified node, moving junction copies together"""
    X = c.positions()
    nodes = c.node_ids()
    R = rng.uniform(-1., 1., size=(nodes.max() + 1, c.dim))
    return X + amplitude * R[nodes]


def test_orientation_vector_2d():
    A = orientation_vector([[0., 0.], [2., 1.]])
    assert np.allclose(A, [1., -2.])


def test_orientation_vector_3d():
    A = orientation_vector([[0., 0., 0.], [1., 0., 0.], [0., 1., 0.]])
    assert np.allclose(A, [0., 0., 1.])
    assert np.isclose(ElementGeometry([[0., 0., 0.], [1., 0., 0.], [0., 1., 0.]]).measure, 0.5)


def test_orientation_vector_bad_shape():
    with pytest.raises(ValueError):
        orientation_vector(np.zeros((4, 4)))


@pytest.mark.parametrize('d', [2, 3])
def test_weighted_normal_unchanged(d):
    coords = np.random.RandomState(3).rand(5, d, d)
    geom = ElementGeometry(coords)
    assert np.array_equal(weighted_normal(geom, coords), geom.unit_normal)


def test_weighted_normal_degenerate():
    with pytest.raises(DegenerateSimplexError):
        weighted_normal(np.zeros((2, 2)), np.ones((2, 2)))


def test_weighted_xi_3d():
    old = np.array([[0., 0., 0.], [1., 0., 0.]])
    xi = weighted_xi(old, old, [0., 0., 1.])
    assert np.allclose(xi, [0., 1., 0.])


@pytest.mark.parametrize('name', sorted(test_clusters))
def test_volume_change_identity(name):
    c = test_clusters[name]()
    rng = np.random.RandomState(1234)
    X = c.positions()
    for trial in range(20):
        Y = perturb(c, 0.02, rng)
        for l in range(len(c.regions)):
            volume = abs(region_volume(c, l))
            lumped = lumped_volume_change(c, Y, l)
            exact = geometric_volume_change_oracle(c, Y, l)
            assert abs(exact - lumped) <= 1e-12 * volume
            assert abs(region_volume(c, l, Y) - region_volume(c, l, X) - lumped) <= 1e-12 * volume


def test_volume_change_identity_with_plane():
    c = make_drop_on_substrate(3, 150, 0.5)
    rng = np.random.RandomState(99)
    X = c.positions()
    chain = c.offsets[0] + c.boundaries[0].chain_vertices()
    for trial in range(10):
        Y = perturb(c, 0.01, rng)
        Y[chain, 2] = 0.
        volume = region_volume(c, 0)
        assert abs(region_volume(c, 0, Y) - volume - lumped_volume_change(c, Y, 0)) <= 1e-12 * volume


def test_region_volume_tetrahedron():
    assert np.isclose(region_volume(tetrahedron_cluster(), 0), 1. / 6, rtol=1e-14)
    assert np.isclose(region_volume(square_cluster(), 0), 1., rtol=1e-14)


def test_contact_area_change_identity_3d():
    c = make_drop_on_substrate(3, 150, 0.5)
    bl = c.boundaries[0]
    chain = c.offsets[bl.surface] + bl.chain
    rng = np.random.RandomState(2)
    X = c.positions()
    for trial in range(50):
        Y = perturb(c, 0.02, rng)
        Y[chain, 2] = 0.
        _, exact = contact_area_change_oracle(X[chain], Y[chain], bl.point, bl.normal)
        assert abs(contact_area_change(c, 0, Y) - exact) <= 1e-12 * max(1., abs(exact))


def test_contact_area_change_wetted_length_2d():
    c = make_drop_on_substrate(2, 33, 0.5)
    rng = np.random.RandomState(5)
    X = c.positions()
    points = [c.offsets[bl.surface] + bl.chain[0] for bl in c.boundaries]
    for trial in range(25):
        Y = perturb(c, 0.02, rng)
        Y[points, 1] = 0.
        for k, v in enumerate(points):
            # the wetted interval lies between the two contact points, around x = 0
            grown = (Y[v, 0] - X[v, 0]) * np.sign(X[v, 0])
            assert abs(contact_area_change(c, k, Y) - grown) <= 1e-13
        wetted = np.ptp(Y[points, 0]) - np.ptp(X[points, 0])
        assert np.isclose(sum(contact_area_change(c, k, Y) for k in range(len(points))), wetted, atol=1e-13)


def test_contact_area_oracle_rejects_offplane_chains():
    with pytest.raises(ValueError):
        contact_area_change_oracle([[0., 0., 0.], [1., 0., 0.]], [[0., 0., 1.], [1., 0., 0.]],
                                   np.zeros(3), [0., 0., 1.])


@pytest.mark.parametrize('d, K, atol', [(2, 65, 1e-2), (3, 150, 2.)])
def test_drop_initial_contact_angle(d, K, atol):
    angles = measure_angles(make_drop_on_substrate(d, K, 0.5)).all_contact_angles()
    assert len(angles) > 0
    assert np.allclose(angles, 90., atol=atol)


def arc(direction, curvature, n=11, h=0.1):
    """Points of a circular arc leaving the origin in the given direction (degrees)"""
    t = np.radians(direction)
    T = np.array([np.cos(t), np.sin(t)])
    N = np.array([-T[1], T[0]])
    s = h * np.arange(n)
    return np.outer(np.sin(curvature * s) / curvature, T) + np.outer((1. - np.cos(curvature * s)) / curvature, N)


def test_junction_angles_of_circular_arcs():
    segments = [(i, i + 1) for i in range(10)]
    patches = [SurfacePatch(i, arc(direction, curvature), segments)
               for i, (direction, curvature) in enumerate([(0., 0.7), (100., -1.2), (230., 2.)])]
    c = Cluster(patches, [TripleJunction(0, [(0, 0), (1, 0), (2, 0)], [1, 1, 1], [[0], [0], [0]])])
    angles = measure_angles(c).junctions[0][0]
    assert np.allclose(angles, [100., 130., 130.], atol=1e-8)


def test_circle_tangent():
    center, radius = np.array([0.3, -0.2, 0.1]), 1.7
    e1, e2 = np.array([1., 2., 2.]) / 3., np.array([2., 1., -2.]) / 3.
    point = lambda t: center + radius * (np.cos(t) * e1 + np.sin(t) * e2)
    t = circle_tangent(point(0.4), point(0.55), point(0.9))
    expected = -np.sin(0.4) * e1 + np.cos(0.4) * e2
    assert np.isclose(abs(t.dot(expected)), 1., atol=1e-12)
    assert np.allclose(circle_tangent(np.zeros(2), [1., 0.], [3., 0.]) ** 2, [1., 0.])
    assert circle_tangent(np.zeros(2), np.zeros(2), [1., 0.]) is None


def test_quadratic_tangents_of_paraboloid():
    rng = np.random.RandomState(3)
    uv = rng.uniform(-0.2, 0.2, size=(12, 2))
    points = np.column_stack([uv, 0.3 * uv[:, 0] - 0.1 * uv[:, 1] + uv[:, 0] ** 2 - 2. * uv[:, 0] * uv[:, 1]])
    t1, t2 = quadratic_tangents(np.zeros(3), points, np.array([1., 0., 0.]), np.array([0., 1., 0.]))
    assert np.allclose(t1, [1., 0., 0.3])
    assert np.allclose(t2, [0., 1., -0.1])
