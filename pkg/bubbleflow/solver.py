"""Time stepping of clusters by the lagged Picard iteration"""
import numpy as np
import progressbar
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from bubbleflow.diagnostics import DiagnosticsTracker
from bubbleflow.discretization import assemble, build_dof_maps
from bubbleflow.kernels.error import ConfigError, PicardConvergenceError, SingularSystemError
from bubbleflow.kernels.geometry import ElementGeometry
from bubbleflow.loggers import logger, reset_warnings
from bubbleflow.tools.timer import Timer

__all__ = ['SolverConfig', 'StepResult', 'Trajectory', 'solve_linear', 'step', 'run', 'lagged_weight_step_limit']

modes = ['sp', 'bgn']
linear_solvers = ['direct', 'schur']


class SolverConfig(object):
    """Time stepping parameters.

    :param dt: Uniform time step
    :param picard_tol: Absolute tolerance on the maximum vertex displacement between iterates
    :param picard_max: Maximum number of Picard iterations per step
    :param mode: 'sp' iterates to convergence, 'bgn' takes exactly one iteration
    :param linear_solver: 'direct' sparse LU, or 'schur' for preconditioned MINRES
    """

    def __init__(self, dt, picard_tol=1e-10, picard_max=100, mode='sp', linear_solver='direct',
                 linear_tol=1e-13):
        if not dt > 0:
            raise ConfigError("dt must be positive, got %s" % dt)
        if int(picard_max) < 1:
            raise ConfigError("picard_max must be at least 1, got %s" % picard_max)
        if not picard_tol > 0:
            raise ConfigError("picard_tol must be positive, got %s" % picard_tol)
        if mode not in modes:
            raise ConfigError("mode must be one of %s, got '%s'" % (modes, mode))
        if linear_solver not in linear_solvers:
            raise ConfigError("linear_solver must be one of %s, got '%s'" % (linear_solvers, linear_solver))
        self.dt = float(dt)
        self.picard_tol = float(picard_tol)
        self.picard_max = int(picard_max)
        self.mode = mode
        self.linear_solver = linear_solver
        self.linear_tol = float(linear_tol)

    @property
    def iterations(self):
        return 1 if self.mode == 'bgn' else self.picard_max

    def __repr__(self):
        return "SolverConfig(dt=%g, mode=%s, picard_tol=%g, picard_max=%d, linear_solver=%s)" % (
            self.dt, self.mode, self.picard_tol, self.picard_max, self.linear_solver)


class StepResult(object):
    """Outcome of one time step: the new cluster, its curvature and iteration data"""

    def __init__(self, cluster, kappa, iterations, residual, displacement):
        self.cluster = cluster
        self.kappa = kappa
        self.iterations = iterations
        self.residual = residual
        self.displacement = displacement


def _splu(matrix):
    try:
        return spla.splu(sp.csc_matrix(matrix))
    except RuntimeError as e:
        raise SingularSystemError(str(e))


def _schur_solve(system, tol):
    """MINRES with the block-diagonal preconditioner diag(dt Ak + B D^-1 B^T, Sx), both shifted by lumped masses"""
    mass = system.blocks['mass']
    dofs = system.dofs
    Mk = dofs.Pk.T.dot(sp.diags(mass)).dot(dofs.Pk)
    Mx = dofs.Px.T.dot(sp.diags(np.repeat(mass, system.dim))).dot(dofs.Px)
    shift = 1e-8
    Dinv = sp.diags(1. / (system.Sx.diagonal() + shift * Mx.diagonal()))
    schur = _splu(system.dt * system.Ak + system.B.dot(Dinv).dot(system.B.T) + shift * Mk)
    stiff = _splu(system.Sx + shift * Mx)
    nk = dofs.n_kappa

    def apply(v):
        return np.concatenate([schur.solve(v[:nk]), stiff.solve(v[nk:])])

    n = system.shape[0]
    precond = spla.LinearOperator((n, n), matvec=apply)
    solution, info = spla.minres(system.matrix(), system.rhs(), M=precond, rtol=tol, maxiter=20 * n)
    if info != 0:
        raise SingularSystemError("MINRES did not converge (info=%d)" % info)
    return solution


def solve_linear(system, method='direct', tol=1e-13):
    """Solve an :class:`AssembledSystem`; returns the solution vector"""
    if method == 'schur':
        solution = _schur_solve(system, tol)
    else:
        solution = _splu(system.matrix()).solve(system.rhs())
    if not np.all(np.isfinite(solution)):
        raise SingularSystemError("non-finite solution")
    return solution


def step(c, cfg, dofs=None, timer=None, index=None, time=None):
    """Advance a cluster by one time step.

    Starting from the identity, each iterate assembles the system with the
    previous iterate's positions as lagged geometry and solves it; the
    iteration stops once successive displacements differ by less than
    ``picard_tol``. BGN mode (and ``picard_max=1``) takes the first iterate.

    :returns: :class:`StepResult`
    """
    dofs = dofs or build_dof_maps(c)
    X = c.positions()
    delta = np.zeros_like(X)
    limit = cfg.iterations
    change = np.inf
    iterations = 0
    residual = 0.
    kappa = None
    while iterations < limit:
        if timer:
            timer['assembly'].start()
        system = assemble(c, X + delta, cfg.dt, dofs)
        if timer:
            timer['assembly'].stop()
            timer['solve'].start()
        solution = solve_linear(system, cfg.linear_solver, cfg.linear_tol)
        if timer:
            timer['solve'].stop()
        kappa, new_delta = system.split(solution)
        change = float(np.max(np.linalg.norm(new_delta - delta, axis=1)))
        delta = new_delta
        iterations += 1
        residual = system.residual(solution)
        logger.debug("Picard iterate %d: change %.3e, residual %.3e" % (iterations, change, residual))
        if not np.isfinite(change):
            break
        if change < cfg.picard_tol:
            break
    if limit > 1 and not change < cfg.picard_tol:
        raise PicardConvergenceError(iterations, change, cfg.picard_tol, step=index, time=time, dt=cfg.dt)
    if limit > 1 and iterations > 0.8 * limit:
        logger.warning_once("Picard iteration needs more than 80%% of picard_max=%d iterations" % limit)
    return StepResult(c.with_positions(X + delta), kappa, iterations, residual, delta)


def lagged_weight_step_limit(c):
    """Largest time step at which the Picard iteration is expected to contract
    for anisotropies with r > 1, or None when the weights do not depend on
    the iterate.

    The update of the weights [gamma_l / gamma]^(r-1) amplifies a change of
    the normals by about r - 1, and the normal displacement responds to it
    with a gain of dt / h^4 for the smallest element size h.
    """
    r = getattr(c.energy_model, 'r', 1.)
    if r <= 1.:
        return None
    X = c.positions()
    h = min(ElementGeometry(X[c.elements_of(i)]).measure.min() ** (1. / (c.dim - 1)) for i in range(c.n_surfaces))
    return h ** 4 / (10. * (r - 1.))


class Trajectory(list):
    """List of :class:`StepDiagnostics` that also holds the final cluster"""

    def __init__(self, items=(), cluster=None):
        super(Trajectory, self).__init__(items)
        self.cluster = cluster


def _frame_steps(frame_times, dt, nsteps):
    steps = set()
    for ft in frame_times or ():
        m = int(round(ft / dt))
        if abs(m * dt - ft) > 1e-9 * max(dt, abs(ft)):
            logger.warning_once("Frame times are rounded to the nearest time step")
        if 0 <= m <= nsteps:
            steps.add(m)
    return steps


def run(c, T_final, cfg, sinks=(), frame_sinks=(), frame_times=None, progress=False, rho=None):
    """Run a simulation to ``T_final``.

    :param c: Initial (validated) cluster
    :param T_final: End time, an integer multiple of ``cfg.dt``
    :param cfg: :class:`SolverConfig`
    :param sinks: Objects with a ``write(diagnostics)`` method, called at t=0 and after each step
    :param frame_sinks: Objects with a ``write(cluster, time)`` method, called at the frame times
    :param frame_times: Times at which frames are written
    :param progress: Show a progress bar
    :param rho: Optional contact parameters overriding those of the boundary lines
    :returns: :class:`Trajectory` of :class:`StepDiagnostics`, including the initial state
    """
    nsteps = int(round(T_final / cfg.dt))
    if nsteps < 0 or abs(nsteps * cfg.dt - T_final) > 1e-9 * max(cfg.dt, abs(T_final)):
        raise ConfigError("T_final=%g is not a non-negative multiple of dt=%g" % (T_final, cfg.dt))
    reset_warnings()
    if rho is not None:
        try:
            c = c.with_contact_params(rho)
        except ValueError as e:
            raise ConfigError(str(e))
    frames = _frame_steps(frame_times, cfg.dt, nsteps)

    timers = {'run': Timer('run')}
    timers['assembly'] = Timer('assembly', parent=timers['run'], start=False)
    timers['solve'] = Timer('solve', parent=timers['run'], start=False)
    dofs = build_dof_maps(c)
    logger.info("Running %s with %s for %d steps" % (c, cfg, nsteps))
    limit = lagged_weight_step_limit(c)
    if limit is not None and cfg.iterations > 1 and cfg.dt > limit:
        logger.warning_once("dt=%g exceeds %.1e, above which the Picard iteration for r=%g is not expected to "
                            "converge" % (cfg.dt, limit, c.energy_model.r))

    tracker = DiagnosticsTracker(c, rho)
    history = Trajectory([tracker.initial(c)], c)

    def emit(cluster, m):
        for sink in sinks:
            sink.write(history[-1])
        if m in frames:
            for sink in frame_sinks:
                sink.write(cluster, m * cfg.dt)

    emit(c, 0)
    pbar = progressbar.ProgressBar(max_value=max(nsteps, 1)).start() if progress and nsteps > 0 else None
    for m in range(1, nsteps + 1):
        result = step(c, cfg, dofs, timers, index=m, time=(m - 1) * cfg.dt)
        history.append(tracker.update(c, result.cluster, m * cfg.dt, cfg.dt, result.iterations, result.residual))
        c = result.cluster
        history.cluster = c
        emit(c, m)
        if pbar:
            pbar.update(m)
    if pbar:
        pbar.finish()
    timers['run'].stop()
    last = history[-1]
    logger.info("Finished at t=%g: energy %.10g, v_delta %.3e, mesh ratio %.3f" % (
        last.t, last.total_energy, last.v_delta, last.mesh_ratio))
    timers['run'].log_tree()
    return history
