from bubbleflow import (Cluster, ClusterValidationError, DegenerateSimplexError, Region, SurfacePatch,
                        make_double_bubble_2d, make_double_bubble_3d, make_drop_on_substrate, mesh_ratio,
                        validate_cluster)
import numpy as np
import pytest


def tetrahedron(flip=False):
    vertices = [(0., 0., 0.), (1., 0., 0.), (0., 1., 0.), (0., 0., 1.)]
    faces = np.array([(0, 2, 1), (0, 1, 3), (0, 3, 2), (1, 2, 3)])
    if flip:
        faces = faces[:, [0, 2, 1]]
    return Cluster([SurfacePatch(0, vertices, faces)], regions=[Region(0, [0], [1], (), (0.1, 0.1, 0.1))])


@pytest.mark.parametrize('maker', [tetrahedron, lambda: make_double_bubble_2d(60),
                                   lambda: make_double_bubble_3d(75), lambda: make_drop_on_substrate(3, 100)])
def test_valid_clusters(maker):
    report = validate_cluster(maker())
    assert report.passed, str(report)
    assert str(report) == "pass"


def test_inverted_region_orientation():
    report = validate_cluster(tetrahedron(flip=True))
    assert not report
    assert any("bad orientation of region 0" in v for v in report.violations)
    with pytest.raises(ClusterValidationError):
        tetrahedron(flip=True).check()


def test_offplane_boundary_vertex():
    c = make_drop_on_substrate(3, 100)
    v = c.boundaries[0].chain[3]
    c.patches[0].vertices[v, 2] += 1e-3
    report = validate_cluster(c)
    assert any("off-plane boundary vertex" in msg for msg in report.violations)


def test_correspondence_mismatch():
    c = make_double_bubble_2d(60)
    tj = c.junctions[0]
    s, v = tj.surfaces[1], tj.correspondence[1][0]
    c.patches[s].vertices[v] += 1e-6
    report = validate_cluster(c)
    assert "correspondence mismatch at (k=0, l=0)" in report.violations


def test_mismatched_junction_sizes():
    c = make_double_bubble_2d(60)
    tj = c.junctions[0]
    tj.correspondence[2] = np.concatenate([tj.correspondence[2], tj.correspondence[2]])
    assert "mismatched Z_k at junction 0" in validate_cluster(c).violations


def test_bad_junction_orientation():
    c = make_double_bubble_2d(60)
    c.junctions[1].orientation[0] *= -1
    assert "bad orientation at junction 1" in validate_cluster(c).violations


def test_non_manifold_curve():
    vertices = [(0., 0.), (1., 0.), (0., 1.), (-1., 0.)]
    c = Cluster([SurfacePatch(0, vertices, [(0, 1), (0, 2), (0, 3)])])
    assert "non-manifold face in surface 0" in validate_cluster(c).violations


def test_zero_orientation_vector():
    c = Cluster([SurfacePatch(0, [(0., 0.), (1., 0.), (1., 0.)], [(0, 1), (1, 2)])])
    assert any("zero orientation vector" in v for v in validate_cluster(c).violations)


def test_mesh_ratio():
    assert np.isclose(mesh_ratio(tetrahedron()), np.sqrt(3.))


def test_mesh_ratio_degenerate():
    c = make_double_bubble_2d(60)
    X = c.positions()
    X[1] = X[0]
    with pytest.raises(DegenerateSimplexError) as e:
        mesh_ratio(c, X)
    assert "degenerate simplex" in str(e.value)


def test_node_ids_identify_junction_copies():
    c = make_double_bubble_2d(60)
    nodes = c.node_ids()
    assert nodes.max() + 1 == c.n_vertices_total - 4
    for tj in c.junctions:
        ids = set(nodes[c.offsets[s] + corr[0]] for s, corr in zip(tj.surfaces, tj.correspondence))
        assert len(ids) == 1


def test_with_positions_keeps_original():
    c = make_double_bubble_3d(75)
    X = c.positions()
    other = c.with_positions(2. * X)
    assert np.array_equal(c.positions(), X)
    assert np.array_equal(other.positions(), 2. * X)
    assert other.junctions[0] is c.junctions[0]


@pytest.mark.parametrize('maker', [lambda: make_double_bubble_2d(60), lambda: make_drop_on_substrate(3, 100)])
def test_cluster_dict_roundtrip(maker):
    c = maker()
    other = Cluster.from_dict(c.to_dict())
    assert np.array_equal(other.positions(), c.positions())
    assert len(other.junctions) == len(c.junctions)
    assert len(other.boundaries) == len(c.boundaries)
    assert validate_cluster(other).passed


def test_cluster_needs_patches():
    with pytest.raises(ValueError):
        Cluster([])


def test_patch_shape_checks():
    with pytest.raises(ValueError):
        SurfacePatch(0, np.zeros((3, 4)), [(0, 1)])
    with pytest.raises(ValueError):
        SurfacePatch(0, np.zeros((3, 2)), [(0, 1, 2)])
