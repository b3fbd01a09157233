from bubbleflow import (SolverConfig, lagged_weight_step_limit, make_cusp_anisotropy, make_cylinder_cluster,
                        make_drop_on_substrate, make_flat_sheet, measure_angles, run)
from bubbleflow import timer
from argparse import ArgumentParser
import math
import numpy as np
import pytest


def drop_example(d=3, K=4225, rho=0.5, dt=1e-3, T_final=1., anisotropic=False, progress=False):
    """Drop on a flat substrate relaxing from a hemisphere (semicircle in 2D)
    towards the contact angle arccos(rho)"""
    c = make_drop_on_substrate(d, K, rho)
    if anisotropic:
        c.energy_model = make_cusp_anisotropy(d, r=30., eps=0.1)
    return run(c, T_final, SolverConfig(dt), progress=progress)


def cylinder_example(K=4802, rho=0.75, dt=1e-3, T_final=1., progress=False):
    """Cube split by a sheet that wets the walls of a square cylinder"""
    c = make_cylinder_cluster(K, rho)
    return run(c, T_final, SolverConfig(dt), progress=progress)


@pytest.mark.parametrize('rho', [0.5, -0.5])
def test_drop_2d_contact_angle(rho):
    history = drop_example(d=2, K=65, rho=rho, dt=1e-2, T_final=2.)
    assert max(h.v_delta for h in history) <= 1e-9
    energies = np.array([h.total_energy for h in history])
    assert np.all(np.diff(energies) <= 1e-12)
    angles = measure_angles(history.cluster).all_contact_angles()
    assert np.allclose(angles, math.degrees(math.acos(rho)), atol=3.)


@pytest.mark.parametrize('rho', [0.5, -0.5])
def test_drop_3d(rho):
    history = drop_example(K=150, rho=rho, dt=1e-3, T_final=1e-2)
    assert max(h.v_delta for h in history) <= 1e-9
    energies = np.array([h.total_energy for h in history])
    assert np.all(np.diff(energies) <= 1e-12)


@pytest.mark.parametrize('d, K', [(2, 33), (3, 150)])
@pytest.mark.parametrize('rho', [0.5, -0.5])
def test_anisotropic_drop(d, K, rho):
    c = make_drop_on_substrate(d, K, rho)
    c.energy_model = make_cusp_anisotropy(d, r=30., eps=0.1)
    dt = 0.5 * lagged_weight_step_limit(c)
    history = drop_example(d, K, rho, dt=dt, T_final=5 * dt, anisotropic=True)
    assert max(h.v_delta for h in history) <= 1e-9
    energies = np.array([h.total_energy for h in history])
    assert np.all(np.diff(energies) <= 1e-12)


def test_cylinder_contact_area_grows():
    history = cylinder_example(K=300, rho=0.75, T_final=0.05)
    assert max(h.v_delta for h in history) <= 1e-9
    energies = np.array([h.total_energy for h in history])
    assert np.all(np.diff(energies) <= 1e-12)
    assert np.sum(history[-1].contact_areas) > 0


@pytest.mark.parametrize('d, K', [(2, 21), (3, 81)])
def test_flat_sheet_is_stationary(d, K):
    c = make_flat_sheet(d, K, rho=0.)
    dt = 1e-3
    history = run(c, 10 * dt, SolverConfig(dt))
    assert history[-1].max_speed <= 1e-3
    assert np.allclose(history.cluster.positions(), c.positions(), atol=1e-12)


if __name__ == "__main__":
    timer.root = timer.Timer('Main')
    p = ArgumentParser(description="""
Example of drops on a substrate and of a cylinder cluster with contact lines""")
    p.add_argument('case', choices=('drop', 'cylinder'), nargs='?', default='drop', help='Which problem to run')
    p.add_argument('-d', type=int, default=3, help='Dimension of the drop')
    p.add_argument('-K', type=int, default=None, help='Number of vertices')
    p.add_argument('--rho', type=float, default=0.5, help='Contact parameter')
    p.add_argument('--dt', type=float, default=1e-3, help='Time step')
    p.add_argument('-T', '--T-final', dest='T_final', type=float, default=1., help='End time')
    p.add_argument('-a', '--anisotropic', action='store_true', default=False,
                   help='Use the cusp anisotropy with r=30 for the drop')
    args = p.parse_args()

    if args.case == 'drop':
        history = drop_example(args.d, args.K or 4225, args.rho, args.dt, args.T_final, args.anisotropic,
                               progress=True)
        angles = measure_angles(history.cluster).all_contact_angles()
        print("Contact angle %.2f +- %.2f degrees" % (np.mean(angles), np.std(angles)))
    else:
        history = cylinder_example(args.K or 4802, args.rho, args.dt, args.T_final, progress=True)
        print("Swept contact areas: %s" % history[-1].contact_areas)
    print("Final energy %.10g, max relative volume error %.3e" % (history[-1].total_energy,
                                                                   max(h.v_delta for h in history)))
    timer.root.stop()
    timer.root.log_tree()
