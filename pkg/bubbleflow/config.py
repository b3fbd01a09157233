"""Simulation configuration read from JSON documents"""
import json
from os import path

from bubbleflow.clusterfile import read_cluster
from bubbleflow.kernels.anisotropy import energy_model_from_dict
from bubbleflow.kernels.error import ClusterValidationError, ConfigError, UnsupportedConfigurationError
from bubbleflow.scenarios import get_preset, make_scenario
from bubbleflow.solver import SolverConfig

__all__ = ['SimulationConfig']

known_keys = {'scenario', 'cluster_file', 'dt', 'T_final', 'mode', 'energy', 'rho', 'output', 'picard',
              'linear_solver'}
output_keys = {'directory', 'csv', 'frames', 'netcdf'}


class SimulationConfig(object):
    """One simulation: initial cluster, energy, contact parameters, time stepping and outputs.

    :param d: Configuration dict with keys ``scenario`` (``{"name": ..., params}``) or
              ``cluster_file``, ``dt``, ``T_final`` and optional ``mode``, ``energy``,
              ``rho``, ``output``, ``picard`` and ``linear_solver``
    :param base_dir: Directory against which relative paths are resolved
    """

    def __init__(self, d, base_dir='.'):
        if not isinstance(d, dict):
            raise ConfigError("Configuration must be a JSON object")
        unknown = set(d) - known_keys
        if unknown:
            raise ConfigError("Unknown configuration keys %s" % sorted(unknown))
        if ('scenario' in d) == ('cluster_file' in d):
            raise ConfigError("Configuration needs exactly one of 'scenario' and 'cluster_file'")
        for key in ('dt', 'T_final'):
            if key not in d:
                raise ConfigError("Configuration is missing '%s'" % key)
        self.base_dir = base_dir
        self.scenario = d.get('scenario')
        if self.scenario is not None and (not isinstance(self.scenario, dict) or 'name' not in self.scenario):
            raise ConfigError("'scenario' must be an object with a 'name'")
        self.cluster_file = d.get('cluster_file')
        try:
            self.dt = float(d['dt'])
            self.T_final = float(d['T_final'])
        except (TypeError, ValueError):
            raise ConfigError("'dt' and 'T_final' must be numbers")
        self.mode = d.get('mode', 'sp')
        self.energy = d.get('energy')
        self.rho = d.get('rho')
        picard = d.get('picard', {})
        self.picard_tol = picard.get('tol', 1e-10)
        self.picard_max = picard.get('max', 100)
        self.linear_solver = d.get('linear_solver', 'direct')
        output = d.get('output', {})
        if set(output) - output_keys:
            raise ConfigError("Unknown output keys %s" % sorted(set(output) - output_keys))
        self.directory = output.get('directory', '.')
        self.csv = output.get('csv', 'diagnostics.csv')
        self.frames = [float(t) for t in output.get('frames', [])]
        self.netcdf = output.get('netcdf')
        self.solver = SolverConfig(self.dt, self.picard_tol, self.picard_max, self.mode, self.linear_solver)

    @classmethod
    def from_dict(cls, d, base_dir='.'):
        return cls(d, base_dir)

    @classmethod
    def from_json(cls, filename):
        try:
            with open(str(filename), 'r') as f:
                d = json.load(f)
        except (IOError, OSError) as e:
            raise ConfigError("Cannot read configuration %s: %s" % (filename, e))
        except ValueError as e:
            raise ConfigError("Malformed JSON in %s: %s" % (filename, e))
        return cls(d, path.dirname(path.abspath(str(filename))))

    @classmethod
    def from_preset(cls, name, **overrides):
        try:
            d = get_preset(name)
        except UnsupportedConfigurationError as e:
            raise ConfigError(str(e))
        for key, value in overrides.items():
            if isinstance(value, dict) and isinstance(d.get(key), dict):
                d[key].update(value)
            elif value is not None:
                d[key] = value
        return cls(d)

    def resolve(self, filename):
        return filename if path.isabs(filename) else path.join(self.base_dir, filename)

    def output_path(self, filename):
        return path.join(self.resolve(self.directory), filename)

    def build_cluster(self):
        """Initial cluster with the configured energy model and contact parameters"""
        try:
            if self.scenario is not None:
                params = dict(self.scenario)
                c = make_scenario(params.pop('name'), **params)
            else:
                c = read_cluster(self.resolve(self.cluster_file)).check()
            if self.energy is not None:
                c.energy_model = energy_model_from_dict(self.energy, c.dim)
                sigma = getattr(c.energy_model, 'sigma', None)
                if sigma is not None and len(sigma) != c.n_surfaces:
                    raise ConfigError("'sigma' needs %d entries, got %d" % (c.n_surfaces, len(sigma)))
        except (ClusterValidationError, ConfigError):
            raise
        except (ValueError, TypeError, KeyError, UnsupportedConfigurationError, IOError, OSError) as e:
            raise ConfigError("Cannot build the initial cluster: %s" % e)
        if self.rho is not None:
            rho = self.rho if isinstance(self.rho, list) else [self.rho] * len(c.boundaries)
            if len(rho) != len(c.boundaries):
                raise ConfigError("'rho' needs %d entries, got %d" % (len(c.boundaries), len(rho)))
            for bl, r in zip(c.boundaries, rho):
                bl.contact_param = float(r)
        return c

    def __repr__(self):
        source = self.scenario['name'] if self.scenario else self.cluster_file
        return "SimulationConfig(%s, dt=%g, T_final=%g, mode=%s)" % (source, self.dt, self.T_final, self.mode)
