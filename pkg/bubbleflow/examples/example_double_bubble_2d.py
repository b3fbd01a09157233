from bubbleflow import (SolverConfig, make_double_bubble_2d, measure_angles, run)
from bubbleflow import timer
from argparse import ArgumentParser
import numpy as np
import pytest


def double_bubble_example(K=129, dt=1e-2, T_final=2., mode='sp', sigma=(1., 1., 1.), progress=False):
    """Standard double bubble in the plane, relaxing from two semi-ellipses
    towards three circular arcs meeting at 120 degree angles"""
    c = make_double_bubble_2d(K, sigma)
    cfg = SolverConfig(dt, mode=mode)
    return run(c, T_final, cfg, progress=progress)


def test_double_bubble_volume_conservation():
    history = double_bubble_example(T_final=0.5)
    assert max(h.v_delta for h in history) <= 1e-9
    energies = np.array([h.total_energy for h in history])
    assert np.all(np.diff(energies) <= 1e-12)
    assert max(h.mesh_ratio for h in history) <= 5.


def test_double_bubble_bgn_loses_volume():
    sp = double_bubble_example(T_final=0.5)
    bgn = double_bubble_example(T_final=0.5, mode='bgn')
    assert max(h.v_delta for h in bgn) >= 1e-5
    assert max(h.v_delta for h in bgn) > 1e3 * max(h.v_delta for h in sp)
    assert all(h.picard_iters == 1 for h in bgn[1:])


def test_double_bubble_junction_angles():
    history = double_bubble_example()
    angles = measure_angles(history.cluster).all_junction_angles()
    assert len(angles) == 6
    assert np.allclose(angles, 120., atol=1.)


@pytest.mark.parametrize('sigma', [(1., 1., 2.), (1., 1., 0.5)])
def test_weighted_double_bubble(sigma):
    history = double_bubble_example(T_final=0.2, sigma=sigma)
    assert max(h.v_delta for h in history) <= 1e-9
    energies = np.array([h.total_energy for h in history])
    assert np.all(np.diff(energies) <= 1e-12)


if __name__ == "__main__":
    timer.root = timer.Timer('Main')
    p = ArgumentParser(description="""
Example of a planar double bubble evolving by surface diffusion""")
    p.add_argument('-K', type=int, default=129, help='Number of vertices')
    p.add_argument('--dt', type=float, default=1e-2, help='Time step')
    p.add_argument('-T', '--T-final', dest='T_final', type=float, default=2., help='End time')
    p.add_argument('-m', '--mode', choices=('sp', 'bgn'), default='sp',
                   help='Structure-preserving Picard iteration or a single BGN iterate')
    p.add_argument('--sigma', type=float, nargs=3, default=(1., 1., 1.), help='Surface energy densities')
    args = p.parse_args()

    history = double_bubble_example(args.K, args.dt, args.T_final, args.mode, args.sigma, progress=True)
    print("Final energy %.10g, max relative volume error %.3e" % (history[-1].total_energy,
                                                                   max(h.v_delta for h in history)))
    print("Junction angles: %s" % measure_angles(history.cluster).all_junction_angles())
    timer.root.stop()
    timer.root.log_tree()
