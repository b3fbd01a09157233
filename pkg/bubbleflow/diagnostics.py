"""Discrete energies, volumes and per-step diagnostic records"""
import csv

import numpy as np

from bubbleflow.cluster import mesh_ratio
from bubbleflow.kernels.geometry import ElementGeometry, contact_area_change, region_volume
from bubbleflow.loggers import logger

__all__ = ['StepDiagnostics', 'surface_energy', 'relative_volume_error', 'region_volumes',
           'DiagnosticsTracker', 'DiagnosticsFile']

energy_slack = 1e-12


def surface_energy(c, model=None, positions=None):
    """sum_i sigma_i |Gamma_i| (isotropic) or sum_i int gamma(nu) (anisotropic)"""
    X = c.positions() if positions is None else positions
    model = model or c.energy_model
    total = 0.
    for i, patch in enumerate(c.patches):
        geom = ElementGeometry(X[c.elements_of(i)])
        if model.is_isotropic:
            total += model.surface_sigma(patch) * np.sum(geom.measure)
        else:
            total += np.sum(geom.measure * model.gamma(geom.unit_normal))
    return float(total)


def region_volumes(c, positions=None):
    return np.array([region_volume(c, l, positions) for l in range(len(c.regions))])


def relative_volume_error(current, initial):
    """max_l |vol_l - vol_l^0| / |vol_l^0|"""
    current = np.asarray(current, dtype=np.float64)
    initial = np.asarray(initial, dtype=np.float64)
    if current.shape != initial.shape:
        raise ValueError("Volume arrays differ in shape: %s vs %s" % (current.shape, initial.shape))
    if initial.size == 0:
        return 0.
    if np.any(initial == 0):
        raise ValueError("Relative volume error is undefined for regions of zero initial volume")
    return float(np.max(np.abs(current - initial) / np.abs(initial)))


class StepDiagnostics(object):
    """Diagnostics of one time level.

    :param t: Time
    :param surface_energy: Surface energy of the cluster
    :param contact_energy: Accumulated contact energy, zero at t=0
    :param volumes: Per-region volumes
    :param v_delta: Relative volume error
    :param mesh_ratio: Max-to-min element measure ratio
    :param picard_iters: Picard iterations of the step leading to this state (0 at t=0)
    :param residual: Linear-solve residual of the last iterate
    :param max_speed: Maximum vertex displacement of the step divided by dt
    :param contact_areas: Per boundary line, the accumulated swept area on the xi side
    """

    def __init__(self, t, surface_energy, contact_energy, volumes, v_delta, mesh_ratio, picard_iters=0,
                 residual=0., max_speed=0., contact_areas=()):
        self.t = t
        self.surface_energy = surface_energy
        self.contact_energy = contact_energy
        self.total_energy = surface_energy + contact_energy
        self.volumes = np.asarray(volumes, dtype=np.float64)
        self.v_delta = v_delta
        self.mesh_ratio = mesh_ratio
        self.picard_iters = picard_iters
        self.residual = residual
        self.max_speed = max_speed
        self.contact_areas = np.asarray(contact_areas, dtype=np.float64)

    @staticmethod
    def header(n_regions):
        return (['t', 'energy_surface', 'energy_contact', 'energy_total'] +
                ['vol_%d' % (l + 1) for l in range(n_regions)] + ['v_delta', 'mesh_ratio', 'picard_iters'])

    def row(self):
        floats = [self.t, self.surface_energy, self.contact_energy, self.total_energy] + list(self.volumes) + \
            [self.v_delta, self.mesh_ratio]
        return ['%.17g' % v for v in floats] + ['%d' % self.picard_iters]

    def __repr__(self):
        return "StepDiagnostics(t=%g, energy=%.10g, v_delta=%.3e, mesh_ratio=%.3f, picard_iters=%d)" % (
            self.t, self.total_energy, self.v_delta, self.mesh_ratio, self.picard_iters)


class DiagnosticsTracker(object):
    """Running diagnostics of a simulation.

    The contact energy is accumulated from the exact per-step change of the
    wetted areas, starting from zero at the initial state.

    :param c: Initial cluster
    :param rho: Optional contact parameters overriding those of the boundary lines
    """

    def __init__(self, c, rho=None):
        self.rho = np.array([bl.contact_param for bl in c.boundaries] if rho is None else rho, dtype=np.float64)
        self.initial_volumes = region_volumes(c)
        self.contact_areas = np.zeros(len(c.boundaries))
        self.last = None

    @property
    def contact_energy(self):
        return -float(np.dot(self.rho, self.contact_areas))

    def _record(self, c, t, **kwargs):
        volumes = region_volumes(c)
        diag = StepDiagnostics(t, surface_energy(c), self.contact_energy, volumes,
                               relative_volume_error(volumes, self.initial_volumes), mesh_ratio(c),
                               contact_areas=self.contact_areas.copy(), **kwargs)
        if self.last is not None and diag.total_energy > self.last.total_energy + energy_slack:
            logger.warning("Energy increased by %g at t=%g" % (diag.total_energy - self.last.total_energy, t))
        self.last = diag
        return diag

    def initial(self, c, t=0.):
        return self._record(c, t)

    def update(self, old, new, t, dt, picard_iters=0, residual=0.):
        """Diagnostics of ``new`` reached from ``old`` in one step"""
        Y = new.positions()
        X = old.positions()
        for k in range(len(old.boundaries)):
            self.contact_areas[k] += contact_area_change(old, k, Y, X)
        speed = float(np.max(np.linalg.norm(Y - X, axis=1))) / dt if len(X) else 0.
        return self._record(new, t, picard_iters=picard_iters, residual=residual, max_speed=speed)


class DiagnosticsFile(object):
    """CSV time series of :class:`StepDiagnostics`, one row per step.

    :param path: Output file name
    :param n_regions: Number of regions (columns vol_1 .. vol_IR)
    """

    def __init__(self, path, n_regions):
        self.path = str(path)
        self.n_regions = n_regions
        self._file = open(self.path, 'w', newline='')
        self._writer = csv.writer(self._file, lineterminator='\n')
        self._writer.writerow(StepDiagnostics.header(n_regions))
        self.rows = 0

    def write(self, diag):
        if len(diag.volumes) != self.n_regions:
            raise ValueError("Expected %d volumes, got %d" % (self.n_regions, len(diag.volumes)))
        self._writer.writerow(diag.row())
        self.rows += 1

    def close(self):
        if not self._file.closed:
            if self.rows == 0:
                logger.warning("Diagnostics file %s is empty on closing" % self.path)
            self._file.close()

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()
        return False

    def __del__(self):
        if hasattr(self, '_file'):
            self.close()
