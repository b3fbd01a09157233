from bubbleflow import (SimulationConfig, UnsupportedConfigurationError, get_preset, list_scenarios,
                        make_cylinder_cluster, make_double_bubble_2d, make_double_bubble_3d, make_drop_on_substrate,
                        make_flat_sheet, make_quadruple_bubble_3d, make_scenario, make_standard_bubble_2d,
                        make_triple_bubble_3d, presets, validate_cluster)
import numpy as np
import pytest


@pytest.mark.parametrize('n_bubbles, K', [(2, 129), (3, 1029), (4, 1029), (5, 1032), (6, 1025), (7, 1032)])
def test_standard_bubble_2d(n_bubbles, K):
    c = make_standard_bubble_2d(n_bubbles, K)
    assert validate_cluster(c).passed
    assert len(c.regions) == n_bubbles
    assert abs(c.n_vertices_total - K) <= 0.05 * K
    assert np.all(np.array([np.sum(c.patches[i].geometry().measure) for i in range(c.n_surfaces)]) > 0)


@pytest.mark.parametrize('maker, K, n_regions', [(make_double_bubble_3d, 3267, 2), (make_triple_bubble_3d, 6534, 3),
                                                 (make_quadruple_bubble_3d, 8378, 4)])
def test_bubbles_3d_vertex_counts(maker, K, n_regions):
    c = maker(K)
    assert abs(c.n_vertices_total - K) <= 0.05 * K
    assert len(c.regions) == n_regions


@pytest.mark.parametrize('maker, K', [(make_double_bubble_3d, 200), (make_triple_bubble_3d, 300),
                                      (make_quadruple_bubble_3d, 400)])
def test_bubbles_3d_valid(maker, K):
    c = maker(K)
    report = validate_cluster(c)
    assert report.passed, str(report)
    nodes = c.node_ids()
    assert nodes.max() + 1 < c.n_vertices_total


def test_drop_on_substrate():
    c = make_drop_on_substrate(3, 4225, rho=0.5)
    assert abs(c.n_vertices_total - 4225) <= 0.05 * 4225
    assert len(c.boundaries) == 1
    assert c.boundaries[0].contact_param == 0.5
    assert c.boundaries[0].closed
    assert validate_cluster(make_drop_on_substrate(2, 65, rho=-0.5)).passed


def test_cylinder_cluster():
    c = make_cylinder_cluster(4802, rho=0.75)
    assert abs(c.n_vertices_total - 4802) <= 0.05 * 4802
    assert len(c.boundaries) == 4
    assert all(bl.contact_param == 0.75 for bl in c.boundaries)
    small = make_cylinder_cluster(300)
    assert validate_cluster(small).passed
    assert len(small.junctions) == 1


@pytest.mark.parametrize('d', [2, 3])
def test_flat_sheet(d):
    c = make_flat_sheet(d, 49)
    assert validate_cluster(c).passed
    assert len(c.boundaries) == 2 * (d - 1)


def test_standard_bubble_out_of_range():
    with pytest.raises(UnsupportedConfigurationError):
        make_standard_bubble_2d(8)


def test_weighted_double_bubble():
    c = make_double_bubble_2d(129, sigma=(1., 1., 2.))
    assert [p.sigma for p in c.patches] == [1., 1., 2.]


def test_make_scenario():
    c = make_scenario('double_bubble_2d', K=60)
    assert abs(c.n_vertices_total - 60) <= 3
    with pytest.raises(UnsupportedConfigurationError):
        make_scenario('soap_film')
    with pytest.raises(UnsupportedConfigurationError):
        make_scenario('double_bubble_2d', radius=2.)


def test_list_scenarios():
    names = [name for name, _, _ in list_scenarios()]
    assert 'double_bubble_2d' in names
    assert 'drop_on_substrate' in names
    assert all(description for _, _, description in list_scenarios())


@pytest.mark.parametrize('name', sorted(presets))
def test_presets_are_valid_configs(name):
    config = SimulationConfig.from_dict(get_preset(name))
    assert config.dt in (1e-2, 1e-3)
    assert config.frames[0] == 0.
    assert config.scenario['name'] in [n for n, _, _ in list_scenarios()]


@pytest.mark.parametrize('name, n_bubbles, K, L', [('anisotropic_sextuple_bubble_2d_L2', 6, 1025, 2),
                                                   ('anisotropic_sextuple_bubble_2d_L3', 6, 1025, 3),
                                                   ('anisotropic_septuple_bubble_2d_L2', 7, 1032, 2),
                                                   ('anisotropic_septuple_bubble_2d_L3', 7, 1032, 3)])
def test_anisotropic_planar_presets(name, n_bubbles, K, L):
    preset = get_preset(name)
    assert preset['scenario'] == {'name': 'standard_bubble_2d', 'n_bubbles': n_bubbles, 'K': K}
    assert preset['energy'] == {'kind': 'rotation2d', 'L': L, 'eps': 0.01}


@pytest.mark.parametrize('name, sigma', [('double_bubble_2d_sigma_1_1_1.5', [1., 1., 1.5]),
                                         ('double_bubble_2d_sigma_1_1_2', [1., 1., 2.]),
                                         ('double_bubble_2d_sigma_1_1.5_1', [1., 1.5, 1.]),
                                         ('double_bubble_2d_sigma_1_2_1', [1., 2., 1.]),
                                         ('double_bubble_3d_sigma_1.5_1_1', [1.5, 1., 1.]),
                                         ('double_bubble_3d_sigma_1_1_1.5', [1., 1., 1.5])])
def test_weighted_double_bubble_presets(name, sigma):
    assert get_preset(name)['scenario']['sigma'] == sigma


def test_weighted_double_bubble_3d_disk_is_last():
    c = make_scenario('double_bubble_3d', K=150, sigma=[1., 1., 1.5])
    assert [p.sigma for p in c.patches] == [1., 1., 1.5]
    disk = c.patches[2].vertices
    assert np.allclose(disk[:, 2], 0.)


def test_get_preset_returns_copy():
    first = get_preset('double_bubble_2d')
    first['dt'] = 1.
    assert get_preset('double_bubble_2d')['dt'] == 1e-2
    with pytest.raises(UnsupportedConfigurationError):
        get_preset('no_such_preset')
