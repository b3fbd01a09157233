"""Command-line front end: run simulations, list scenarios, validate cluster files"""
import argparse
import os
import sys
from os import path

from bubbleflow.clusterfile import ClusterFile, FrameWriter, read_cluster
from bubbleflow.cluster import validate_cluster
from bubbleflow.config import SimulationConfig
from bubbleflow.diagnostics import DiagnosticsFile
from bubbleflow.kernels.error import (ClusterValidationError, ConfigError, ErrorCode, StepError,
                                     UnsupportedConfigurationError)
from bubbleflow.loggers import logger, set_verbosity
from bubbleflow.scenarios import list_scenarios, presets
from bubbleflow.solver import run

__all__ = ['main', 'run_config']


class ArgumentParser(argparse.ArgumentParser):
    """Parser that reports usage errors with the configuration exit code"""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(int(ErrorCode.ConfigError), '%s: error: %s\n' % (self.prog, message))


def run_config(config, progress=False):
    """Run one :class:`SimulationConfig`, writing the diagnostics CSV, frames and
    optional NetCDF trajectory into the configured output directory.

    :returns: :class:`bubbleflow.solver.Trajectory`
    """
    c = config.build_cluster()
    directory = config.resolve(config.directory)
    if not path.isdir(directory):
        os.makedirs(directory)
    frame_sinks = [FrameWriter(directory)]
    ncfile = None
    if config.netcdf:
        ncfile = ClusterFile(config.output_path(config.netcdf), c)
        frame_sinks.append(ncfile)
    try:
        with DiagnosticsFile(config.output_path(config.csv), len(c.regions)) as diagnostics:
            trajectory = run(c, config.T_final, config.solver, sinks=[diagnostics], frame_sinks=frame_sinks,
                             frame_times=config.frames, progress=progress)
    finally:
        if ncfile is not None:
            ncfile.close()
    for bl, area in zip(c.boundaries, trajectory[-1].contact_areas):
        logger.info("Boundary line %d swept a contact area of %.6g" % (bl.bl_id, area))
    return trajectory


def _run(args):
    if (args.config is None) == (args.preset is None):
        raise ConfigError("'run' needs exactly one of --config and --preset")
    if args.config is not None:
        config = SimulationConfig.from_json(args.config)
        if args.T_final is not None:
            config.T_final = args.T_final
        if args.output is not None:
            config.directory = args.output
    else:
        output = {'directory': args.output} if args.output is not None else None
        config = SimulationConfig.from_preset(args.preset, T_final=args.T_final, output=output)
    progress = not args.quiet and sys.stdout.isatty()
    trajectory = run_config(config, progress)
    last = trajectory[-1]
    print("t=%g energy=%.10g v_delta=%.3e mesh_ratio=%.3f" % (last.t, last.total_energy, last.v_delta,
                                                               last.mesh_ratio))


def _scenarios(args):
    print("Scenarios:")
    for name, defaults, description in list_scenarios():
        params = ', '.join('%s=%s' % kv for kv in sorted(defaults.items()))
        print("  %-22s %s\n  %-22s   defaults: %s" % (name, description, '', params))
    print("Presets:")
    for name in sorted(presets):
        p = presets[name]
        print("  %-34s %s, dt=%g, T_final=%g, mode=%s" % (name, p['scenario']['name'], p['dt'], p['T_final'],
                                                          p['mode']))


def _validate(args):
    try:
        c = read_cluster(args.cluster)
    except (IOError, OSError, ValueError, KeyError, TypeError, IndexError) as e:
        raise ConfigError("Cannot read cluster %s: %s" % (args.cluster, e))
    report = validate_cluster(c)
    if not report.passed:
        raise ClusterValidationError(report)
    print("%s: pass" % c)


def main(argv=None):
    """Entry point of the ``bubbleflow`` command; returns the exit code"""
    parser = ArgumentParser(prog='bubbleflow', description="Surface diffusion of curve networks and surface clusters")
    parser.add_argument('-v', '--verbose', action='store_true', help="Log at DEBUG level")
    sub = parser.add_subparsers(dest='command', parser_class=ArgumentParser)
    p = sub.add_parser('run', help="Execute a simulation")
    p.add_argument('--config', help="Simulation configuration JSON file")
    p.add_argument('--preset', help="Named preset configuration (see 'scenarios')")
    p.add_argument('--T-final', dest='T_final', type=float, help="Override the end time")
    p.add_argument('--output', help="Override the output directory")
    p.add_argument('--quiet', action='store_true', help="No progress bar")
    p.set_defaults(func=_run)
    p = sub.add_parser('scenarios', help="List scenario generators and presets")
    p.set_defaults(func=_scenarios)
    p = sub.add_parser('validate', help="Validate a cluster JSON file")
    p.add_argument('cluster', help="Cluster JSON file")
    p.set_defaults(func=_validate)

    args = parser.parse_args(argv)
    set_verbosity(args.verbose)
    if getattr(args, 'func', None) is None:
        parser.print_usage(sys.stderr)
        return int(ErrorCode.ConfigError)
    try:
        args.func(args)
    except ClusterValidationError as e:
        logger.error("Validation failed")
        print(str(e.report))
        return int(ErrorCode.ConfigError)
    except ConfigError as e:
        logger.error(str(e))
        return int(ErrorCode.ConfigError)
    except (StepError, UnsupportedConfigurationError) as e:
        logger.error(str(e))
        return int(ErrorCode.SolverFailure)
    return int(ErrorCode.Success)


if __name__ == "__main__":
    sys.exit(main())
