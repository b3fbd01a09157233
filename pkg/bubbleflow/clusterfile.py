"""Module controlling the reading and writing of clusters: JSON cluster files,
per-time frames (CSV polylines or OBJ meshes) and NetCDF trajectories"""
import json
from os import path

import netCDF4
import numpy as np

from bubbleflow.cluster import Cluster
from bubbleflow.diagnostics import region_volumes, surface_energy
from bubbleflow.loggers import logger

__all__ = ['write_cluster', 'read_cluster', 'write_frame', 'FrameWriter', 'ClusterFile']


def _dumps(obj):
    """JSON text with every float written to 17 significant digits"""
    if isinstance(obj, dict):
        return '{' + ', '.join('%s: %s' % (json.dumps(str(k)), _dumps(v)) for k, v in obj.items()) + '}'
    if isinstance(obj, np.ndarray):
        return _dumps(obj.tolist())
    if isinstance(obj, (list, tuple)):
        return '[' + ', '.join(_dumps(v) for v in obj) + ']'
    if obj is None or isinstance(obj, (bool, np.bool_)):
        return json.dumps(None if obj is None else bool(obj))
    if isinstance(obj, (int, np.integer)):
        return '%d' % obj
    if isinstance(obj, (float, np.floating)):
        text = '%.17g' % obj
        return text if any(ch in text for ch in '.en') else text + '.0'
    return json.dumps(obj)


def write_cluster(c, filename):
    """Write a cluster to a JSON file that reproduces all coordinates bitwise"""
    with open(str(filename), 'w') as f:
        f.write(_dumps(c.to_dict()))
        f.write('\n')


def read_cluster(filename):
    with open(str(filename), 'r') as f:
        return Cluster.from_dict(json.load(f))


def _curve_order(patch):
    """Vertex sequence of a polyline whose simplices are consecutive"""
    S = patch.simplices
    order = [S[0, 0]] + list(S[:, 1])
    return order


def write_frame(c, filename):
    """Write the cluster geometry.

    2D: CSV with one ``x,y`` row per vertex, curves separated by a blank line.
    3D: OBJ with one object ``surface_<i>`` per patch and 1-based global
    vertex indices, plus a JSON sidecar with the junction and boundary chains.
    """
    filename = str(filename)
    if c.dim == 2:
        with open(filename, 'w') as f:
            for i, patch in enumerate(c.patches):
                if i > 0:
                    f.write('\n')
                for v in _curve_order(patch):
                    f.write('%.17g,%.17g\n' % tuple(patch.vertices[v]))
        return filename
    with open(filename, 'w') as f:
        for i, patch in enumerate(c.patches):
            f.write('o surface_%d\n' % i)
            for x in patch.vertices:
                f.write('v %.17g %.17g %.17g\n' % tuple(x))
            for s in patch.simplices + c.offsets[i] + 1:
                f.write('f %d %d %d\n' % tuple(s))
    sidecar = {'junctions': [{'surfaces': tj.surfaces, 'orientation': tj.orientation,
                              'correspondence': tj.correspondence} for tj in c.junctions],
               'boundaries': [{'surface': bl.surface, 'chain': bl.chain} for bl in c.boundaries]}
    with open(path.splitext(filename)[0] + '.json', 'w') as f:
        f.write(_dumps(sidecar))
        f.write('\n')
    return filename


class FrameWriter(object):
    """Run sink writing one frame file per requested time.

    :param directory: Output directory
    :param prefix: File name prefix; files are ``<prefix>_<time>.csv`` (2D) or ``.obj`` (3D)
    """

    def __init__(self, directory, prefix='frame'):
        self.directory = str(directory)
        self.prefix = prefix
        self.written = []

    def filename(self, c, time):
        return path.join(self.directory, '%s_%.6f.%s' % (self.prefix, time, 'csv' if c.dim == 2 else 'obj'))

    def write(self, c, time):
        self.written.append(write_frame(c, self.filename(c, time)))


class ClusterFile(object):
    """Initialise netCDF4.Dataset for cluster trajectory output.

    Vertex coordinates of every patch are stored per observation in a
    variable ``surface_<i>(obs, vertex_<i>, dim)`` next to ``time``,
    ``energy_surface`` and per-region ``volume``.

    :param name: Basename of the output file
    :param cluster: Cluster whose topology is written
    """

    def __init__(self, name, cluster):
        self.name = name
        extension = path.splitext(str(name))[1]
        fname = name if extension in ['.nc', '.nc4'] else "%s.nc" % name
        self.fname = fname
        self.lasttime_written = None
        self.dataset = netCDF4.Dataset(fname, "w", format="NETCDF4")
        self.dataset.createDimension("obs", None)
        self.dataset.createDimension("dim", cluster.dim)
        self.dataset.createDimension("region", max(len(cluster.regions), 1))
        self.dataset.n_surfaces = cluster.n_surfaces

        self.time = self.dataset.createVariable("time", "f8", ("obs",), fill_value=np.nan)
        self.time.standard_name = "time"
        self.energy = self.dataset.createVariable("energy_surface", "f8", ("obs",), fill_value=np.nan)
        self.volume = self.dataset.createVariable("volume", "f8", ("obs", "region"), fill_value=np.nan)
        self.surfaces = []
        for i, patch in enumerate(cluster.patches):
            self.dataset.createDimension("vertex_%d" % i, patch.n_vertices)
            self.dataset.createDimension("simplex_%d" % i, patch.n_elements)
            self.dataset.createDimension("corner_%d" % i, patch.dim)
            simplices = self.dataset.createVariable("simplices_%d" % i, "i4", ("simplex_%d" % i, "corner_%d" % i))
            simplices[:] = patch.simplices
            self.surfaces.append(self.dataset.createVariable("surface_%d" % i, "f8", ("obs", "vertex_%d" % i, "dim")))
        self.idx = 0

    def __del__(self):
        self.close()

    def close(self):
        if hasattr(self, 'dataset') and self.dataset.isopen():
            if self.idx == 0:
                logger.warning("ClusterFile %s is closed without any output" % self.fname)
            self.dataset.close()

    def sync(self):
        """Write all buffered data to disk"""
        self.dataset.sync()

    def write(self, c, time, sync=True):
        """Write the cluster state at ``time``; repeated times are skipped"""
        if self.lasttime_written == time:
            return
        self.lasttime_written = time
        self.time[self.idx] = time
        self.energy[self.idx] = surface_energy(c)
        if c.regions:
            self.volume[self.idx, :] = region_volumes(c)
        for var, patch in zip(self.surfaces, c.patches):
            var[self.idx, :, :] = patch.vertices
        self.idx += 1
        if sync:
            self.sync()
