from bubbleflow import (assemble, build_dof_maps, make_double_bubble_2d,
                        make_double_bubble_3d, make_drop_on_substrate, make_flat_sheet, make_quadruple_bubble_3d,
                        plane_frame)
import numpy as np
import pytest


@pytest.mark.parametrize('normals', [[[0., 0., 1.]], [[0.6, 0., -0.8]], [[1., 0.]], [[1., 0., 0.], [0., 1., 0.]]])
def test_plane_frame(normals):
    frame = plane_frame(normals)
    d = len(normals[0])
    assert frame.shape == (d, d - len(normals))
    assert np.allclose(frame.T.dot(frame), np.eye(frame.shape[1]))
    assert np.allclose(np.array(normals).dot(frame), 0.)


def test_dof_counts_double_bubble_2d():
    c = make_double_bubble_2d(60)
    dofs = build_dof_maps(c)
    N = c.n_vertices_total
    assert dofs.n_kappa == N - 2
    assert dofs.n_x == 2 * (N - 4)


def test_dof_counts_drop():
    c = make_drop_on_substrate(3, 100)
    dofs = build_dof_maps(c)
    n_chain = len(c.boundaries[0].chain_vertices())
    assert dofs.n_kappa == c.n_vertices_total
    assert dofs.n_x == 3 * c.n_vertices_total - n_chain
    normal = c.boundaries[0].normal
    for v in c.boundaries[0].chain_vertices():
        rows = dofs.Px[3 * v:3 * v + 3].toarray()
        assert np.allclose(normal.dot(rows), 0.)


@pytest.mark.parametrize('maker', [lambda: make_double_bubble_2d(60), lambda: make_double_bubble_3d(75),
                                   lambda: make_quadruple_bubble_3d(60)])
def test_kappa_junction_constraint(maker):
    c = maker()
    dofs = build_dof_maps(c)
    Pk = dofs.Pk.toarray()
    for tj in c.junctions:
        for l in range(tj.size):
            rows = [c.offsets[s] + corr[l] for s, corr in zip(tj.surfaces, tj.correspondence)]
            assert np.allclose(tj.orientation.dot(Pk[rows]), 0.)
    assert np.linalg.matrix_rank(Pk) == dofs.n_kappa


def test_displacement_moves_junction_copies_together():
    c = make_double_bubble_3d(75)
    dofs = build_dof_maps(c)
    u = dofs.displacement(np.random.RandomState(0).rand(dofs.n_x), 3)
    nodes = c.node_ids()
    for v in range(c.n_vertices_total):
        assert np.array_equal(u[v], u[np.nonzero(nodes == nodes[v])[0][0]])


def test_corner_nodes_use_multiple_planes():
    c = make_flat_sheet(3, 49)
    dofs = build_dof_maps(c)
    assert any(frame.shape[1] == 1 for frame in dofs.frames.values())


@pytest.mark.parametrize('maker', [lambda: make_double_bubble_2d(60), lambda: make_double_bubble_3d(75),
                                   lambda: make_drop_on_substrate(3, 100)])
def test_system_is_symmetric(maker):
    c = maker()
    Y = c.positions() + 1e-3 * np.random.RandomState(1).rand(*c.positions().shape)
    system = assemble(c, Y, 1e-3)
    M = system.matrix()
    assert abs(M - M.T).max() <= 1e-12 * abs(M).max()
    assert system.shape == M.shape
    assert len(system.rhs()) == M.shape[0]


def test_rhs_vanishes_for_flat_sheet():
    c = make_flat_sheet(3, 49)
    system = assemble(c, c.positions(), 1e-3)
    assert np.abs(system.g).max() <= 1e-12


def test_assemble_rejects_bad_input():
    c = make_double_bubble_2d(60)
    with pytest.raises(ValueError):
        assemble(c, c.positions(), 0.)
    with pytest.raises(ValueError):
        assemble(c, c.positions()[:-1], 1e-3)


def test_mass_sums_to_area():
    c = make_double_bubble_3d(75)
    system = assemble(c, c.positions(), 1e-3)
    area = sum(np.sum(p.geometry().measure) for p in c.patches)
    assert np.isclose(system.blocks['mass'].sum(), area)
