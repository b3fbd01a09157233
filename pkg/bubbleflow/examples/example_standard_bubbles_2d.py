from bubbleflow import (SolverConfig, make_rotation_anisotropy_2d, make_standard_bubble_2d, run)
from bubbleflow import timer
from argparse import ArgumentParser
import numpy as np
import pytest


def standard_bubble_example(n_bubbles=6, K=1025, dt=1e-2, T_final=2., mode='sp', L=None, eps=0.01,
                            progress=False):
    """Planar cluster of ``n_bubbles`` bubbles, optionally with the rotated
    ellipse anisotropy of ``L`` matrices"""
    c = make_standard_bubble_2d(n_bubbles, K)
    if L is not None:
        c.energy_model = make_rotation_anisotropy_2d(L, eps)
    return run(c, T_final, SolverConfig(dt, mode=mode), progress=progress)


@pytest.mark.parametrize('n_bubbles', [3, 4, 5, 6, 7])
def test_standard_bubbles(n_bubbles):
    history = standard_bubble_example(n_bubbles, K=240, T_final=0.1)
    assert len(history[-1].volumes) == n_bubbles
    assert max(h.v_delta for h in history) <= 1e-9
    energies = np.array([h.total_energy for h in history])
    assert np.all(np.diff(energies) <= 1e-12)
    assert energies[-1] < energies[0]


def test_sextuple_bubble_bgn_loses_volume():
    sp = standard_bubble_example(6, K=240, T_final=2.)
    bgn = standard_bubble_example(6, K=240, T_final=2., mode='bgn')
    assert max(h.v_delta for h in bgn) >= 1e-2
    assert max(h.v_delta for h in sp) <= 1e-9


@pytest.mark.parametrize('n_bubbles', [6, 7])
@pytest.mark.parametrize('L', [2, 3])
def test_anisotropic_standard_bubbles(n_bubbles, L):
    history = standard_bubble_example(n_bubbles, K=240, T_final=0.1, L=L)
    assert len(history[-1].volumes) == n_bubbles
    assert max(h.v_delta for h in history) <= 1e-9
    energies = np.array([h.total_energy for h in history])
    assert np.all(np.diff(energies) <= 1e-12)


if __name__ == "__main__":
    timer.root = timer.Timer('Main')
    p = ArgumentParser(description="""
Example of planar clusters of two to seven bubbles evolving by (an)isotropic surface diffusion""")
    p.add_argument('-n', '--bubbles', type=int, default=6, help='Number of bubbles')
    p.add_argument('-K', type=int, default=1025, help='Number of vertices')
    p.add_argument('--dt', type=float, default=1e-2, help='Time step')
    p.add_argument('-T', '--T-final', dest='T_final', type=float, default=2., help='End time')
    p.add_argument('-m', '--mode', choices=('sp', 'bgn'), default='sp',
                   help='Structure-preserving Picard iteration or a single BGN iterate')
    p.add_argument('-L', type=int, default=None, help='Number of matrices of the rotated anisotropy')
    args = p.parse_args()

    history = standard_bubble_example(args.bubbles, args.K, args.dt, args.T_final, args.mode, args.L,
                                      progress=True)
    print("Final energy %.10g, max relative volume error %.3e" % (history[-1].total_energy,
                                                                   max(h.v_delta for h in history)))
    timer.root.stop()
    timer.root.log_tree()
