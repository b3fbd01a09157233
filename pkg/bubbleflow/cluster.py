"""Simplicial surface clusters: patches, triple junctions, boundary lines and regions"""
import copy

import numpy as np

from bubbleflow.kernels.anisotropy import Isotropic, energy_model_from_dict
from bubbleflow.kernels.error import ClusterValidationError, DegenerateSimplexError
from bubbleflow.kernels.geometry import (ElementGeometry, circle_tangent, degenerate_tolerance, orientation_vector,
                                         quadratic_tangents, region_volume)

__all__ = ['SurfacePatch', 'TripleJunction', 'BoundaryLine', 'Region', 'Cluster',
           'ValidationReport', 'validate_cluster', 'mesh_ratio']

coincidence_tol = 1e-12
plane_tol = 1e-12


class SurfacePatch(object):
    """One oriented simplicial hypersurface: a polyline (d=2) or a triangle mesh (d=3).

    :param surface_id: Index of the surface within its cluster
    :param vertices: Array of shape (K, d) with the vertex coordinates
    :param simplices: Integer array of shape (J, d); all simplices ordered with the same orientation
    :param sigma: Surface energy density (isotropic mode only)
    """

    def __init__(self, surface_id, vertices, simplices, sigma=1.):
        self.surface_id = int(surface_id)
        self.vertices = np.array(vertices, dtype=np.float64)
        self.simplices = np.array(simplices, dtype=np.int64)
        if self.vertices.ndim != 2 or self.vertices.shape[1] not in (2, 3):
            raise ValueError("Patch %d: vertices must have shape (K, d) with d in (2, 3)" % self.surface_id)
        if self.simplices.ndim != 2 or self.simplices.shape[1] != self.dim:
            raise ValueError("Patch %d: simplices must have shape (J, %d)" % (self.surface_id, self.dim))
        self.sigma = float(sigma)
        self._vertex_elements = None
        self._edge_elements = None

    @property
    def dim(self):
        return self.vertices.shape[1]

    @property
    def n_vertices(self):
        return self.vertices.shape[0]

    @property
    def n_elements(self):
        return self.simplices.shape[0]

    def copy(self, vertices=None):
        patch = SurfacePatch(self.surface_id, self.vertices if vertices is None else vertices,
                             self.simplices, self.sigma)
        patch._vertex_elements = self._vertex_elements
        patch._edge_elements = self._edge_elements
        return patch

    def geometry(self, vertices=None):
        V = self.vertices if vertices is None else vertices
        return ElementGeometry(V[self.simplices])

    def vertex_elements(self, v):
        """Indices of the elements containing vertex v"""
        if self._vertex_elements is None:
            table = [[] for _ in range(self.n_vertices)]
            for j, simplex in enumerate(self.simplices):
                for a in simplex:
                    table[a].append(j)
            self._vertex_elements = table
        return self._vertex_elements[v]

    def edge_elements(self):
        """Map from sorted vertex pairs to the elements containing that edge (d=3)"""
        if self._edge_elements is None:
            table = {}
            for j, (a, b, c) in enumerate(self.simplices):
                for e in ((a, b), (b, c), (c, a)):
                    table.setdefault((min(e), max(e)), []).append(j)
            self._edge_elements = table
        return self._edge_elements

    def boundary_element(self, v):
        """Element ending at curve endpoint v and the local index of v in it (d=2)"""
        elems = self.vertex_elements(v)
        if len(elems) != 1:
            raise ValueError("Vertex %d of patch %d is not a curve endpoint" % (v, self.surface_id))
        j = elems[0]
        return j, int(np.nonzero(self.simplices[j] == v)[0][0])

    def edge_element(self, a, b):
        """The single element containing the boundary edge (a, b), with its third vertex (d=3)"""
        elems = self.edge_elements().get((min(a, b), max(a, b)), [])
        if len(elems) != 1:
            raise ValueError("Edge (%d, %d) of patch %d is not a boundary edge" % (a, b, self.surface_id))
        j = elems[0]
        third = [w for w in self.simplices[j] if w != a and w != b][0]
        return j, int(third)

    def curve_from(self, v, n=2):
        """Up to n vertices along the curve from its endpoint v, v excluded (d=2)"""
        j, at = self.boundary_element(v)
        prev, cur = v, int(self.simplices[j][1 - at])
        out = []
        while len(out) < n:
            out.append(cur)
            ahead = [int(w) for e in self.vertex_elements(cur) for w in self.simplices[e] if w != cur and w != prev]
            if not ahead:
                break
            prev, cur = cur, ahead[0]
        return out

    def vertex_ring(self, v, depth=2):
        """Sorted vertices within ``depth`` edges of v, v excluded"""
        ring = frontier = {int(v)}
        for _ in range(depth):
            frontier = set(int(w) for u in frontier for e in self.vertex_elements(u) for w in self.simplices[e]) - ring
            ring = ring | frontier
        return sorted(ring - {int(v)})

    def boundary_vertices(self):
        """Sorted indices of the vertices on the patch boundary"""
        if self.dim == 2:
            return np.array([v for v in range(self.n_vertices) if len(self.vertex_elements(v)) == 1], dtype=np.int64)
        verts = set()
        for e, elems in self.edge_elements().items():
            if len(elems) == 1:
                verts.update(e)
        return np.array(sorted(verts), dtype=np.int64)

    def to_dict(self):
        return {'surface_id': self.surface_id, 'dim': self.dim, 'vertices': self.vertices,
                'simplices': self.simplices, 'sigma': self.sigma}

    @classmethod
    def from_dict(cls, d):
        patch = cls(d['surface_id'], d['vertices'], d['simplices'], d.get('sigma', 1.))
        if 'dim' in d and int(d['dim']) != patch.dim:
            raise ValueError("Patch %d: dim %s does not match its vertices" % (patch.surface_id, d['dim']))
        return patch


class TripleJunction(object):
    """Point (d=2) or line (d=3) where three surfaces meet.

    :param tj_id: Junction index
    :param incident: Three (surface, boundary_part) pairs with increasing surface index
    :param orientation: Three signs o^k
    :param correspondence: Three equal-length vertex lists (one per incident surface),
                           entry l of each naming the same spatial junction point
    """

    def __init__(self, tj_id, incident, orientation, correspondence):
        self.tj_id = int(tj_id)
        self.incident = [(int(s), int(p)) for s, p in incident]
        self.orientation = np.array(orientation, dtype=np.int64)
        self.correspondence = [np.array(c, dtype=np.int64) for c in correspondence]

    @property
    def surfaces(self):
        return [s for s, _ in self.incident]

    @property
    def size(self):
        return len(self.correspondence[0])

    def to_dict(self):
        return {'tj_id': self.tj_id, 'incident': [list(i) for i in self.incident],
                'orientation': self.orientation, 'correspondence': self.correspondence}

    @classmethod
    def from_dict(cls, d):
        return cls(d['tj_id'], d['incident'], d['orientation'], d['correspondence'])


class BoundaryLine(object):
    """Part of a surface boundary constrained to a fixed external plane.

    :param bl_id: Boundary line index
    :param incident: (surface, boundary_part) pair
    :param point: A point q_k on the plane
    :param normal: Unit normal n_k of the plane, pointing towards the cluster
    :param contact_param: Contact energy density difference rho_k
    :param chain: Ordered vertex list (a single vertex in 2D); closed chains repeat their first vertex
    """

    def __init__(self, bl_id, incident, point, normal, contact_param=0., chain=()):
        self.bl_id = int(bl_id)
        self.incident = (int(incident[0]), int(incident[1]))
        self.point = np.array(point, dtype=np.float64)
        self.normal = np.array(normal, dtype=np.float64)
        self.contact_param = float(contact_param)
        self.chain = np.array(chain, dtype=np.int64)

    @property
    def surface(self):
        return self.incident[0]

    @property
    def closed(self):
        return len(self.chain) > 2 and self.chain[0] == self.chain[-1]

    def chain_vertices(self):
        """Distinct chain vertices in chain order"""
        return self.chain[:-1] if self.closed else self.chain

    def to_dict(self):
        return {'bl_id': self.bl_id, 'incident': list(self.incident),
                'plane': {'point': self.point, 'normal': self.normal},
                'contact_param': self.contact_param, 'chain': self.chain}

    @classmethod
    def from_dict(cls, d):
        plane = d['plane']
        return cls(d['bl_id'], d['incident'], plane['point'], plane['normal'],
                   d.get('contact_param', 0.), d['chain'])


class Region(object):
    """Bounded region (bubble) enclosed by surfaces and, possibly, external planes.

    :param region_id: Region index
    :param surface_set: Indices of the bounding surfaces
    :param orientation: Signs o_i (one per surface of the cluster, or a dict
                        surface -> sign) making o_i nu_i the outer normal
    :param plane_set: Indices of the boundary lines whose planes close the region
    :param reference_point: Cone point of the volume computation
    """

    def __init__(self, region_id, surface_set, orientation, plane_set=(), reference_point=None, n_surfaces=None):
        self.region_id = int(region_id)
        self.surface_set = [int(i) for i in surface_set]
        if isinstance(orientation, dict):
            size = n_surfaces or (max(orientation) + 1)
            signs = np.ones(size, dtype=np.int64)
            for i, o in orientation.items():
                signs[int(i)] = o
            orientation = signs
        self.orientation = np.array(orientation, dtype=np.int64)
        self.plane_set = [int(k) for k in plane_set]
        self.reference_point = None if reference_point is None else np.array(reference_point, dtype=np.float64)

    def to_dict(self):
        return {'region_id': self.region_id, 'surface_set': self.surface_set, 'orientation': self.orientation,
                'plane_set': self.plane_set, 'reference_point': self.reference_point}

    @classmethod
    def from_dict(cls, d):
        return cls(d['region_id'], d['surface_set'], d['orientation'], d.get('plane_set', ()),
                   d.get('reference_point'))


class Cluster(object):
    """The full simplicial cluster.

    Vertex positions live in the patches; :meth:`positions` concatenates
    them into one (N, d) array with patch offsets :attr:`offsets`, which
    is the layout used by the geometry kernels, the assembly and the
    solver.

    :param patches: List of :class:`SurfacePatch`
    :param junctions: List of :class:`TripleJunction`
    :param boundaries: List of :class:`BoundaryLine`
    :param regions: List of :class:`Region`
    :param energy_model: :class:`Isotropic` (default) or :class:`Anisotropy`
    """

    def __init__(self, patches, junctions=(), boundaries=(), regions=(), energy_model=None):
        self.patches = list(patches)
        if len(self.patches) == 0:
            raise ValueError("A cluster needs at least one surface patch")
        dims = set(p.dim for p in self.patches)
        if len(dims) != 1:
            raise ValueError("All patches of a cluster must have the same dimension")
        self.junctions = list(junctions)
        self.boundaries = list(boundaries)
        self.regions = list(regions)
        for region in self.regions:
            if region.reference_point is None:
                region.reference_point = np.zeros(self.dim)
            if len(region.orientation) < len(self.patches):
                region.orientation = np.concatenate(
                    [region.orientation, np.ones(len(self.patches) - len(region.orientation), dtype=np.int64)])
        self.energy_model = energy_model if energy_model is not None else Isotropic()
        counts = [p.n_vertices for p in self.patches]
        self.offsets = np.concatenate([[0], np.cumsum(counts)[:-1]]).astype(np.int64)
        self.n_vertices_total = int(np.sum(counts))
        self._elements = None
        self._node_ids = None

    @property
    def dim(self):
        return self.patches[0].dim

    @property
    def n_surfaces(self):
        return len(self.patches)

    def positions(self):
        """All vertex coordinates as one (N, d) array"""
        return np.concatenate([p.vertices for p in self.patches])

    def set_positions(self, X):
        for i, patch in enumerate(self.patches):
            patch.vertices = np.array(X[self.offsets[i]:self.offsets[i] + patch.n_vertices], dtype=np.float64)

    def with_positions(self, X):
        """Copy of the cluster with new vertex positions and shared topology"""
        patches = [p.copy(X[self.offsets[i]:self.offsets[i] + p.n_vertices]) for i, p in enumerate(self.patches)]
        other = Cluster(patches, self.junctions, self.boundaries, self.regions, self.energy_model)
        other._elements = self._elements
        other._node_ids = self._node_ids
        return other

    def with_contact_params(self, rho):
        """Copy of the cluster whose boundary lines carry the contact parameters ``rho``"""
        rho = [float(r) for r in rho]
        if len(rho) != len(self.boundaries):
            raise ValueError("Expected %d contact parameters, got %d" % (len(self.boundaries), len(rho)))
        other = self.with_positions(self.positions())
        other.boundaries = [copy.copy(bl) for bl in self.boundaries]
        for bl, r in zip(other.boundaries, rho):
            bl.contact_param = r
        return other

    def global_index(self, surface, vertex):
        return self.offsets[surface] + np.asarray(vertex)

    def elements_of(self, i):
        """Global vertex indices of the elements of patch i, shape (J_i, d)"""
        return self.elements()[1][i]

    def elements(self):
        """All elements as global vertex indices, and the per-patch views"""
        if self._elements is None:
            per_patch = [self.offsets[i] + p.simplices for i, p in enumerate(self.patches)]
            self._elements = (np.concatenate(per_patch), per_patch)
        return self._elements

    def element_patch(self):
        return np.concatenate([np.full(p.n_elements, i, dtype=np.int64) for i, p in enumerate(self.patches)])

    def node_ids(self):
        """Node number of every global vertex after identifying junction copies"""
        if self._node_ids is None:
            parent = np.arange(self.n_vertices_total)

            def find(a):
                while parent[a] != a:
                    parent[a] = parent[parent[a]]
                    a = parent[a]
                return a

            for tj in self.junctions:
                for l in range(tj.size):
                    copies = [self.offsets[s] + tj.correspondence[j][l] for j, s in enumerate(tj.surfaces)]
                    roots = sorted(find(c) for c in copies)
                    for r in roots[1:]:
                        parent[r] = roots[0]
            ids = np.empty(self.n_vertices_total, dtype=np.int64)
            numbering = {}
            for v in range(self.n_vertices_total):
                root = find(v)
                if root not in numbering:
                    numbering[root] = len(numbering)
                ids[v] = numbering[root]
            self._node_ids = ids
        return self._node_ids

    def junction_edges(self, k):
        """Consecutive vertex pairs (l, l') along junction k, closing the loop for closed chains (d=3)"""
        tj = self.junctions[k]
        pairs = [(l, l + 1) for l in range(tj.size - 1)]
        if tj.size > 2:
            patch = self.patches[tj.surfaces[0]]
            a, b = tj.correspondence[0][-1], tj.correspondence[0][0]
            if (min(a, b), max(a, b)) in patch.edge_elements():
                pairs.append((tj.size - 1, 0))
        return pairs

    def junction_edge_frames(self, k, X=None):
        """Per junction edge (per junction point in 2D): unit tangent tau (None in 2D)
        and, per incident surface, the unit conormal and unit normal of the adjacent element"""
        X = self.positions() if X is None else X
        tj = self.junctions[k]
        frames = []
        if self.dim == 2:
            for l in range(tj.size):
                per_surface = []
                for j, s in enumerate(tj.surfaces):
                    patch = self.patches[s]
                    e, at = patch.boundary_element(tj.correspondence[j][l])
                    coords = X[self.offsets[s] + patch.simplices[e]]
                    per_surface.append(_conormal_frame(coords, at))
                frames.append((None, per_surface))
            return frames
        for l0, l1 in self.junction_edges(k):
            ref = tj.correspondence[0]
            tau = X[self.offsets[tj.surfaces[0]] + ref[l1]] - X[self.offsets[tj.surfaces[0]] + ref[l0]]
            norm = np.linalg.norm(tau)
            tau = tau / norm if norm > 0 else None
            per_surface = []
            for j, s in enumerate(tj.surfaces):
                a, b = tj.correspondence[j][l0], tj.correspondence[j][l1]
                e, w = self.patches[s].edge_element(a, b)
                q = X[self.offsets[s] + np.array([a, b, w])]
                per_surface.append(_edge_conormal_frame(q, X[self.offsets[s] + self.patches[s].simplices[e]]))
            frames.append((tau, per_surface))
        return frames

    def _curve_tangent(self, s, v, X):
        """Unit tangent at endpoint v of curve s, pointing into the curve, from the circle
        through v and its next two vertices; None if degenerate"""
        patch = self.patches[s]
        off = self.offsets[s]
        p = X[off + v]
        ahead = patch.curve_from(v, 2)
        q = X[off + ahead[0]]
        if len(ahead) == 2:
            t = circle_tangent(p, q, X[off + ahead[1]])
        else:
            norm = np.linalg.norm(q - p)
            t = (q - p) / norm if norm > 0 else None
        if t is None:
            return None
        return t if t.dot(q - p) > 0 else -t

    def _junction_tangent(self, k, l, X):
        """Unit tangent of junction line k at vertex l from the circle through l and two
        chain neighbours; None at isolated or degenerate vertices"""
        tj = self.junctions[k]
        pairs = self.junction_edges(k)

        def neighbours(m):
            return [b if a == m else a for a, b in pairs if m in (a, b)]

        near = neighbours(l)
        if len(near) == 1:
            near += [m for m in neighbours(near[0]) if m != l][:1]
        if len(near) < 2:
            return None
        ref = self.offsets[tj.surfaces[0]] + np.asarray(tj.correspondence[0])
        return circle_tangent(X[ref[l]], X[ref[near[0]]], X[ref[near[1]]])

    def junction_conormals(self, k, l, X=None):
        """Unit tangent (None in 2D) and the three outward unit conormals at vertex l of
        junction k from second-order fits, or None next to degenerate elements"""
        X = self.positions() if X is None else X
        tj = self.junctions[k]
        if self.dim == 2:
            mus = []
            for j, s in enumerate(tj.surfaces):
                t = self._curve_tangent(s, tj.correspondence[j][l], X)
                if t is None:
                    return None
                mus.append(-t)
            return None, mus
        frames = self.junction_edge_frames(k, X)
        edges = self.junction_edges(k)
        touching = [n for n, (l0, l1) in enumerate(edges) if l in (l0, l1)]
        if not touching or any(frames[n][0] is None or any(f is None for f in frames[n][1]) for n in touching):
            return None
        tau = np.sum([frames[n][0] for n in touching], axis=0)
        tau /= np.linalg.norm(tau)
        fitted = self._junction_tangent(k, l, X)
        if fitted is not None:
            tau = fitted if fitted.dot(tau) > 0 else -fitted
        mus = []
        for j, s in enumerate(tj.surfaces):
            rough = np.sum([frames[n][1][j][0] for n in touching], axis=0)
            e2 = rough - rough.dot(tau) * tau
            norm = np.linalg.norm(e2)
            if norm == 0:
                return None
            e2 /= norm
            a = tj.correspondence[j][l]
            off = self.offsets[s]
            fit = quadratic_tangents(X[off + a], X[off + np.asarray(self.patches[s].vertex_ring(a))], tau, e2)
            if fit is None:
                return None
            along = fit[0] / np.linalg.norm(fit[0])
            mu = fit[1] - fit[1].dot(along) * along
            mu /= np.linalg.norm(mu)
            mus.append(mu if mu.dot(e2) > 0 else -mu)
        return tau, mus

    def boundary_normal(self, k, v, X=None):
        """Unit normal of the surface at boundary vertex v of boundary line k from a
        second-order fit, oriented like the adjacent elements; None next to degenerate elements"""
        X = self.positions() if X is None else X
        bl = self.boundaries[k]
        patch = self.patches[bl.surface]
        offset = self.offsets[bl.surface]
        if self.dim == 2:
            elems = [patch.boundary_element(v)[0]]
        else:
            chain = list(bl.chain)
            pairs = [(chain[n], chain[n + 1]) for n in range(len(chain) - 1) if v in (chain[n], chain[n + 1])]
            elems = [patch.edge_element(a, b)[0] for a, b in pairs]
        A = orientation_vector(X[offset + patch.simplices[elems]])
        norms = np.linalg.norm(A, axis=-1)
        if len(elems) == 0 or np.any(norms == 0):
            return None
        rough = np.sum(A / norms[:, None], axis=0)
        rough /= np.linalg.norm(rough)
        p = X[offset + v]
        if self.dim == 2:
            t = self._curve_tangent(bl.surface, v, X)
            if t is None:
                return None
            nu = np.array([t[1], -t[0]])
            return nu if nu.dot(rough) > 0 else -nu
        near = [b if a == v else a for a, b in pairs]
        if len(near) == 2:
            t = circle_tangent(p, X[offset + near[0]], X[offset + near[1]])
        else:
            t = X[offset + near[0]] - p
        if t is None:
            return None
        e1 = t - t.dot(rough) * rough
        norm = np.linalg.norm(e1)
        if norm == 0:
            return None
        e1 /= norm
        fit = quadratic_tangents(p, X[offset + np.asarray(patch.vertex_ring(v))], e1, np.cross(rough, e1))
        if fit is None:
            return None
        nu = np.cross(fit[0], fit[1])
        nu /= np.linalg.norm(nu)
        return nu if nu.dot(rough) > 0 else -nu

    def check(self):
        """Raise :class:`ClusterValidationError` unless :func:`validate_cluster` passes"""
        report = validate_cluster(self)
        if not report.passed:
            raise ClusterValidationError(report)
        return self

    def __repr__(self):
        return "Cluster(d=%d, surfaces=%d, junctions=%d, boundaries=%d, regions=%d, vertices=%d)" % (
            self.dim, self.n_surfaces, len(self.junctions), len(self.boundaries), len(self.regions),
            self.n_vertices_total)

    def to_dict(self):
        return {'patches': [p.to_dict() for p in self.patches],
                'junctions': [t.to_dict() for t in self.junctions],
                'boundaries': [b.to_dict() for b in self.boundaries],
                'regions': [r.to_dict() for r in self.regions],
                'energy_model': self.energy_model.to_dict()}

    @classmethod
    def from_dict(cls, d):
        patches = [SurfacePatch.from_dict(p) for p in d['patches']]
        energy = energy_model_from_dict(d.get('energy_model', {'kind': 'isotropic'}), patches[0].dim)
        return cls(patches,
                   [TripleJunction.from_dict(t) for t in d.get('junctions', [])],
                   [BoundaryLine.from_dict(b) for b in d.get('boundaries', [])],
                   [Region.from_dict(r) for r in d.get('regions', [])],
                   energy)


def _conormal_frame(coords, at):
    """(mu, nu) of a curve element at its endpoint ``at``; None if degenerate"""
    mu = coords[at] - coords[1 - at]
    norm = np.linalg.norm(mu)
    if norm == 0:
        return None
    A = orientation_vector(coords)
    return mu / norm, A / norm


def _edge_conormal_frame(q, coords):
    """(mu, nu) of a triangle with boundary edge q[0]-q[1] and third vertex q[2]"""
    edge = q[1] - q[0]
    w = q[0] - q[2]
    ee = edge.dot(edge)
    A = orientation_vector(coords)
    nA = np.linalg.norm(A)
    if ee == 0 or nA == 0:
        return None
    mu = w - w.dot(edge) / ee * edge
    return mu / np.linalg.norm(mu), A / nA


class ValidationReport(object):
    """Result of :func:`validate_cluster`: passes when there are no violations"""

    def __init__(self, violations=None):
        self.violations = list(violations or [])

    @property
    def passed(self):
        return len(self.violations) == 0

    def __bool__(self):
        return self.passed

    __nonzero__ = __bool__

    def __str__(self):
        return "pass" if self.passed else "\n".join(self.violations)


def _check_patches(c, out):
    for i, patch in enumerate(c.patches):
        S = patch.simplices
        if S.size and (S.min() < 0 or S.max() >= patch.n_vertices):
            out.append("invalid simplex index in surface %d" % i)
            continue
        repeated = [j for j, s in enumerate(S) if len(set(s)) != len(s)]
        if repeated:
            out.append("repeated vertex in simplex (surface %d, element %d)" % (i, repeated[0]))
            continue
        if patch.sigma <= 0:
            out.append("non-positive surface energy density on surface %d" % i)
        measure = patch.geometry().measure
        zero = np.nonzero(measure <= degenerate_tolerance(patch.vertices))[0]
        if len(zero):
            out.append("zero orientation vector (surface %d, element %d)" % (i, zero[0]))
        if patch.dim == 2:
            counts = np.bincount(S.ravel(), minlength=patch.n_vertices)
            bad = np.nonzero(counts > 2)[0]
        else:
            bad = [e for e, elems in patch.edge_elements().items() if len(elems) > 2]
        if len(bad):
            out.append("non-manifold face in surface %d" % i)


def _frame_sign(tau, frame, o):
    mu, nu = frame
    if tau is None:
        return o * (nu[0] * mu[1] - nu[1] * mu[0])
    return o * np.cross(nu, mu).dot(tau)


def _check_junctions(c, X, out):
    junction_vertices = set()
    for k, tj in enumerate(c.junctions):
        surfaces = tj.surfaces
        if len(surfaces) != 3 or any(s < 0 or s >= c.n_surfaces for s in surfaces):
            out.append("junction %d: invalid incident surfaces" % k)
            continue
        if not surfaces[0] < surfaces[1] < surfaces[2]:
            out.append("junction %d: incident surfaces not increasing" % k)
        sizes = set(len(corr) for corr in tj.correspondence)
        if len(tj.correspondence) != 3 or len(sizes) != 1 or 0 in sizes:
            out.append("mismatched Z_k at junction %d" % k)
            continue
        if any(corr.min() < 0 or corr.max() >= c.patches[s].n_vertices for s, corr in zip(surfaces, tj.correspondence)):
            out.append("junction %d: vertex index out of range" % k)
            continue
        ok = True
        for l in range(tj.size):
            points = [X[c.offsets[s] + corr[l]] for s, corr in zip(surfaces, tj.correspondence)]
            if max(np.abs(points[1] - points[0]).max(), np.abs(points[2] - points[0]).max()) > coincidence_tol:
                out.append("correspondence mismatch at (k=%d, l=%d)" % (k, l))
                ok = False
                break
        for s, corr in zip(surfaces, tj.correspondence):
            junction_vertices.update((s, int(v)) for v in corr)
        if not ok:
            continue
        try:
            frames = c.junction_edge_frames(k, X)
        except ValueError as e:
            out.append("junction %d: %s" % (k, e))
            continue
        for tau, per_surface in frames:
            if (c.dim == 3 and tau is None) or any(f is None for f in per_surface):
                continue
            signs = [np.sign(_frame_sign(tau, f, o)) for f, o in zip(per_surface, tj.orientation)]
            if len(set(signs)) != 1 or signs[0] == 0:
                out.append("bad orientation at junction %d" % k)
                break
    return junction_vertices


def _check_boundaries(c, X, junction_vertices, out):
    for k, bl in enumerate(c.boundaries):
        s = bl.surface
        if s < 0 or s >= c.n_surfaces:
            out.append("boundary %d: invalid surface" % k)
            continue
        if abs(np.linalg.norm(bl.normal) - 1.) > plane_tol:
            out.append("non-unit plane normal at boundary %d" % k)
        if len(bl.chain) == 0 or bl.chain.min() < 0 or bl.chain.max() >= c.patches[s].n_vertices:
            out.append("boundary %d: chain index out of range" % k)
            continue
        if c.dim == 2 and len(bl.chain) != 1:
            out.append("boundary %d: a 2D boundary chain is a single vertex" % k)
            continue
        dist = np.abs((X[c.offsets[s] + bl.chain] - bl.point).dot(bl.normal))
        off = np.nonzero(dist > plane_tol)[0]
        if len(off):
            out.append("off-plane boundary vertex (boundary %d, vertex %d)" % (k, bl.chain[off[0]]))
        shared = [v for v in bl.chain if (s, int(v)) in junction_vertices]
        if shared:
            out.append("boundary vertex in triple junction (boundary %d, vertex %d)" % (k, shared[0]))
        if c.dim == 3:
            try:
                a, b = bl.chain[0], bl.chain[1]
                e, w = c.patches[s].edge_element(a, b)
                q = X[c.offsets[s] + np.array([a, b, w])]
                mu, nu = _edge_conormal_frame(q, X[c.offsets[s] + c.patches[s].simplices[e]])
                if np.cross(mu, nu).dot(q[1] - q[0]) <= 0:
                    out.append("bad chain orientation at boundary %d" % k)
            except (ValueError, IndexError, TypeError):
                out.append("boundary %d: chain does not follow the patch boundary" % k)
        else:
            try:
                c.patches[s].boundary_element(bl.chain[0])
            except ValueError as e:
                out.append("boundary %d: %s" % (k, e))


_ray = np.array([0.5773502691896258, 0.6154797086703873, 0.5366563145999495])


def _ray_crossings(point, coords):
    """Number of simplices crossed by a ray from ``point`` in a fixed generic direction"""
    d = coords.shape[-1]
    if d == 2:
        r = _ray[:2] / np.linalg.norm(_ray[:2])
        a, b = coords[:, 0], coords[:, 1]
        e = b - a
        w = a - point
        denom = r[0] * e[:, 1] - r[1] * e[:, 0]
        with np.errstate(divide='ignore', invalid='ignore'):
            t = (w[:, 0] * e[:, 1] - w[:, 1] * e[:, 0]) / denom
            s = (w[:, 0] * r[1] - w[:, 1] * r[0]) / denom
        return int(np.sum((denom != 0) & (t > 0) & (s >= 0) & (s < 1)))
    r = _ray / np.linalg.norm(_ray)
    v0, e1, e2 = coords[:, 0], coords[:, 1] - coords[:, 0], coords[:, 2] - coords[:, 0]
    pvec = np.cross(r, e2)
    det = np.einsum('ji,ji->j', e1, pvec)
    with np.errstate(divide='ignore', invalid='ignore'):
        inv = 1. / det
        tvec = point - v0
        u = np.einsum('ji,ji->j', tvec, pvec) * inv
        qvec = np.cross(tvec, e1)
        v = qvec.dot(r) * inv
        t = np.einsum('ji,ji->j', e2, qvec) * inv
    return int(np.sum((det != 0) & (u >= 0) & (v >= 0) & (u + v <= 1) & (t > 0)))


def _check_regions(c, X, out):
    for l, region in enumerate(c.regions):
        if any(i < 0 or i >= c.n_surfaces for i in region.surface_set) or \
           any(k < 0 or k >= len(c.boundaries) for k in region.plane_set) or len(region.surface_set) == 0:
            out.append("region %d: invalid surface or plane index" % l)
            continue
        if len(region.orientation) != c.n_surfaces or not np.all(np.abs(region.orientation) == 1):
            out.append("region %d: orientation must hold one sign per surface" % l)
            continue
        if region.plane_set:
            if region_volume(c, l, X) <= 0:
                out.append("bad orientation of region %d" % l)
            continue
        coords = np.concatenate([X[c.elements_of(i)] for i in region.surface_set])
        first = region.surface_set[0]
        geom = ElementGeometry(X[c.elements_of(first)])
        j = int(np.argmax(geom.measure))
        size = geom.measure[j] ** (1. / (c.dim - 1))
        inside = geom.coords[j].mean(axis=0) - 1e-3 * size * region.orientation[first] * geom.unit_normal[j]
        if _ray_crossings(inside, coords) % 2 != 1:
            out.append("bad orientation of region %d" % l)


def validate_cluster(c):
    """Check the mesh-compatibility assumptions of a cluster.

    Report-style: never raises, returns a :class:`ValidationReport` listing
    violations (invalid or repeated simplex indices, zero orientation
    vectors, non-manifold faces, mismatched or non-coincident junction
    correspondences, inconsistent junction orientations, off-plane or
    junction-sharing boundary vertices, wrong region orientations).
    """
    out = []
    _check_patches(c, out)
    if out:
        return ValidationReport(out)
    X = c.positions()
    junction_vertices = _check_junctions(c, X, out)
    _check_boundaries(c, X, junction_vertices, out)
    if not out:
        _check_regions(c, X, out)
    return ValidationReport(out)


def mesh_ratio(c, positions=None):
    """Max over surfaces of the ratio of largest to smallest element measure"""
    X = c.positions() if positions is None else positions
    tol = degenerate_tolerance(X)
    ratio = 1.
    for i, patch in enumerate(c.patches):
        measure = ElementGeometry(X[c.elements_of(i)]).measure
        if measure.min() <= tol:
            j = int(np.argmin(measure))
            raise DegenerateSimplexError(i, j, float(measure[j]))
        ratio = max(ratio, measure.max() / measure.min())
    return ratio