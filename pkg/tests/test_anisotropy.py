from bubbleflow import (Anisotropy, ElementGeometry, Isotropic, SolverConfig, anisotropic_element_stiffness, assemble,
                        energy_model_from_dict, gtilde_tangent_basis, make_cusp_anisotropy, make_double_bubble_2d,
                        make_double_bubble_3d, make_rotation_anisotropy_2d, orientation_vector, step,
                        surface_energy, weighted_normal)
import numpy as np
import pytest


def random_unit_vectors(d, n=20, seed=0):
    p = np.random.RandomState(seed).randn(n, d)
    return p / np.linalg.norm(p, axis=1)[:, None]


@pytest.mark.parametrize('d', [2, 3])
def test_isotropic_reduction_matrices(d):
    rng = np.random.RandomState(42)
    for trial in range(5):
        c = make_double_bubble_2d(40) if d == 2 else make_double_bubble_3d(39)
        X = c.positions()
        c.set_positions(X + 0.01 * rng.uniform(-1., 1., size=(c.node_ids().max() + 1, d))[c.node_ids()])
        Y = c.positions() + 0.01 * rng.uniform(-1., 1., size=X.shape)
        iso = assemble(c, Y, 1e-3).blocks['S'].toarray()
        aniso = assemble(c, Y, 1e-3, energy_model=Anisotropy(np.eye(d))).blocks['S'].toarray()
        assert np.abs(iso - aniso).max() <= 1e-13 * np.abs(iso).max()


@pytest.mark.parametrize('d', [2, 3])
def test_gamma_isotropic(d):
    p = random_unit_vectors(d) * 3.
    assert np.allclose(Anisotropy(np.eye(d)).gamma(p), 3.)


@pytest.mark.parametrize('model', [make_cusp_anisotropy(3, r=1.), make_cusp_anisotropy(3, r=30.),
                                   make_cusp_anisotropy(2, r=4.), make_rotation_anisotropy_2d(3)])
def test_gamma_homogeneity_and_euler(model):
    p = random_unit_vectors(model.dim)
    assert np.allclose(model.gamma(2.5 * p), 2.5 * model.gamma(p))
    assert np.allclose(np.einsum('ji,ji->j', model.gamma_prime(p), p), model.gamma(p))
    assert np.allclose(model.weights(7. * p), model.weights(p))


def test_weights_r1_are_ones():
    model = make_cusp_anisotropy(3, r=1.)
    assert np.array_equal(model.weights(random_unit_vectors(3)), np.ones((20, 3)))


def test_gamma_large_r_does_not_overflow():
    model = make_cusp_anisotropy(3, r=300.)
    g = model.gamma(random_unit_vectors(3))
    assert np.all(np.isfinite(g))
    assert np.all(g > 0)


def test_gamma_zero_vector():
    with pytest.raises(ValueError):
        make_cusp_anisotropy(2).gamma(np.zeros(2))


@pytest.mark.parametrize('matrices, r', [([[1., 0.5], [0., 1.]], 1.), ([[1., 0.], [0., -1.]], 1.),
                                         (np.eye(2), 0.5)])
def test_anisotropy_rejects(matrices, r):
    with pytest.raises(ValueError):
        Anisotropy(matrices, r)


@pytest.mark.parametrize('model', [make_cusp_anisotropy(3, eps=0.3), make_rotation_anisotropy_2d(2)])
def test_gtilde_tangent_basis_orthonormal(model):
    d = model.dim
    coords = np.random.RandomState(7).rand(6, d, d)
    for gt in model.gtilde:
        t = gtilde_tangent_basis(coords, gt)
        gram = np.einsum('jai,ik,jbk->jab', t, gt, t)
        assert np.allclose(gram, np.eye(d - 1)[None])
        normal = np.cross(coords[:, 1] - coords[:, 0], coords[:, 2] - coords[:, 0]) if d == 3 else \
            np.stack([coords[:, 1, 1] - coords[:, 0, 1], coords[:, 0, 0] - coords[:, 1, 0]], axis=1)
        assert np.allclose(np.einsum('jai,ji->ja', t, normal), 0.)


def test_rotation_anisotropy_matrices():
    model = make_rotation_anisotropy_2d(2, eps=0.01)
    assert model.L == 2
    assert np.allclose(model.matrices[0], np.diag([1., 1e-4]))
    assert np.allclose(model.matrices[1], np.diag([1e-4, 1.]))


def test_energy_model_from_dict():
    assert isinstance(energy_model_from_dict({'kind': 'isotropic'}, 2), Isotropic)
    assert energy_model_from_dict({'kind': 'cusp', 'r': 30.}, 3).r == 30.
    assert energy_model_from_dict({'kind': 'rotation2d', 'L': 3}, 2).L == 3
    model = energy_model_from_dict({'kind': 'matrices', 'matrices': [np.eye(3).tolist()], 'r': 2.}, 3)
    assert model.to_dict()['kind'] == 'matrices'
    for bad in [{'kind': 'wulff'}, {'kind': 'rotation2d'}, {'kind': 'matrices'}]:
        with pytest.raises(ValueError):
            energy_model_from_dict(bad, 3)


def test_isotropic_sigma_override():
    c = make_double_bubble_2d(40)
    plain = surface_energy(c)
    weighted = surface_energy(c, Isotropic([1., 1., 2.]))
    length = np.sum(c.patches[2].geometry().measure)
    assert np.isclose(weighted, plain + length)


def dense_stiffness(c, normals_of):
    """Vector stiffness of c's energy model, with the weights taken from normals_of(elems)"""
    X = c.positions()
    N, d = X.shape
    S = np.zeros((N * d, N * d))
    for i in range(len(c.patches)):
        elems = c.elements_of(i)
        blocks = anisotropic_element_stiffness(ElementGeometry(X[elems]), normals_of(elems), c.energy_model)
        for j, el in enumerate(elems):
            for a, va in enumerate(el):
                for b, vb in enumerate(el):
                    S[va * d:(va + 1) * d, vb * d:(vb + 1) * d] += blocks[j, a, b]
    return S


@pytest.mark.parametrize('maker, K', [(make_double_bubble_2d, 40), (make_double_bubble_3d, 39)])
def test_stiffness_weights_use_iterate_normal(maker, K):
    c = maker(K)
    c.energy_model = make_cusp_anisotropy(c.dim, r=4., eps=0.1)
    X = c.positions()
    Y = step(c, SolverConfig(1e-2, mode='bgn')).cluster.positions()
    S = assemble(c, Y, 1e-2).blocks['S'].toarray()
    expected = dense_stiffness(c, lambda elems: orientation_vector(Y[elems]))
    assert np.abs(S - expected).max() <= 1e-12 * np.abs(expected).max()
    midpoint = dense_stiffness(c, lambda elems: weighted_normal(ElementGeometry(X[elems]), Y[elems]))
    assert np.abs(S - midpoint).max() > 1e-6 * np.abs(expected).max()

    S0 = assemble(c, X, 1e-2).blocks['S'].toarray()
    old = dense_stiffness(c, lambda elems: orientation_vector(X[elems]))
    assert np.abs(S0 - old).max() <= 1e-12 * np.abs(old).max()
