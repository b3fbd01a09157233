from bubbleflow import (SolverConfig, make_cusp_anisotropy, make_double_bubble_3d, make_quadruple_bubble_3d,
                        make_triple_bubble_3d, run)
from bubbleflow import timer
from argparse import ArgumentParser
import numpy as np
import pytest


generators = {'double': make_double_bubble_3d, 'triple': make_triple_bubble_3d,
              'quadruple': make_quadruple_bubble_3d}


def bubbles_3d_example(cluster='double', K=3267, dt=1e-3, T_final=1., mode='sp', anisotropic=False,
                       progress=False):
    """Double, triple or quadruple bubble in space, optionally with the regularised cusp anisotropy"""
    c = generators[cluster](K)
    if anisotropic:
        c.energy_model = make_cusp_anisotropy(3, r=1., eps=0.1)
    return run(c, T_final, SolverConfig(dt, mode=mode), progress=progress)


@pytest.mark.parametrize('cluster, K', [('double', 200), ('triple', 300), ('quadruple', 400)])
def test_bubbles_3d(cluster, K):
    history = bubbles_3d_example(cluster, K, T_final=5e-3)
    assert max(h.v_delta for h in history) <= 1e-9
    energies = np.array([h.total_energy for h in history])
    assert np.all(np.diff(energies) <= 1e-12)


def test_anisotropic_quadruple_bubble():
    history = bubbles_3d_example('quadruple', 400, T_final=3e-3, anisotropic=True)
    assert max(h.v_delta for h in history) <= 1e-9
    energies = np.array([h.total_energy for h in history])
    assert np.all(np.diff(energies) <= 1e-12)


def test_double_bubble_3d_bgn_loses_volume():
    history = bubbles_3d_example('double', 200, T_final=5e-3, mode='bgn')
    assert max(h.v_delta for h in history) > 1e-12


if __name__ == "__main__":
    timer.root = timer.Timer('Main')
    p = ArgumentParser(description="""
Example of double, triple and quadruple bubbles in space""")
    p.add_argument('cluster', choices=sorted(generators), nargs='?', default='double',
                   help='Which cluster to evolve')
    p.add_argument('-K', type=int, default=3267, help='Number of vertices')
    p.add_argument('--dt', type=float, default=1e-3, help='Time step')
    p.add_argument('-T', '--T-final', dest='T_final', type=float, default=1., help='End time')
    p.add_argument('-m', '--mode', choices=('sp', 'bgn'), default='sp',
                   help='Structure-preserving Picard iteration or a single BGN iterate')
    p.add_argument('-a', '--anisotropic', action='store_true', default=False,
                   help='Use the regularised cusp anisotropy')
    args = p.parse_args()

    history = bubbles_3d_example(args.cluster, args.K, args.dt, args.T_final, args.mode, args.anisotropic,
                                 progress=True)
    print("Final energy %.10g, max relative volume error %.3e" % (history[-1].total_energy,
                                                                   max(h.v_delta for h in history)))
    timer.root.stop()
    timer.root.log_tree()
