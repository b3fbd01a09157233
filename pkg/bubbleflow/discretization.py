"""Constrained P1 spaces and assembly of the coupled curvature/position system"""
import numpy as np
import scipy.linalg
import scipy.sparse as sp

from bubbleflow.kernels.anisotropy import anisotropic_element_stiffness
from bubbleflow.kernels.error import UnsupportedConfigurationError
from bubbleflow.kernels.geometry import (ElementGeometry, boundary_xi, degenerate_tolerance, orientation_vector, p1_stiffness,
                                         weighted_normal)
from bubbleflow.loggers import logger

__all__ = ['DofMap', 'build_dof_maps', 'AssembledSystem', 'assemble', 'plane_frame']


def plane_frame(normals):
    """Orthonormal basis (columns) of the directions orthogonal to all given plane normals.

    A single normal uses the Householder reflection mapping the closest
    coordinate axis onto it; several normals use an SVD null space.
    """
    normals = np.atleast_2d(np.asarray(normals, dtype=np.float64))
    d = normals.shape[1]
    if normals.shape[0] == 1:
        n = normals[0] / np.linalg.norm(normals[0])
        i = int(np.argmax(np.abs(n)))
        w = n.copy()
        w[i] -= np.sign(n[i])
        ww = w.dot(w)
        H = np.eye(d) if ww == 0 else np.eye(d) - 2. * np.outer(w, w) / ww
        return np.delete(H, i, axis=1)
    frame = scipy.linalg.null_space(normals, rcond=1e-12)
    frame[np.abs(frame) < 1e-15] = 0.
    return frame


class DofMap(object):
    """Reduced bases of the constrained spaces.

    Unknowns are kappa (one column per free curvature value) and the
    displacement u of the vertices (``X = id + Px u``). Both maps act on
    vectors laid out per global vertex copy: row ``v`` of ``Pk`` and rows
    ``v*d + c`` of ``Px`` belong to global vertex ``v``.

    :ivar Pk: Sparse (N, n_kappa) prolongation of the curvature values
    :ivar Px: Sparse (N*d, n_x) prolongation of the displacements
    :ivar node_ids: Identified node number of every global vertex
    :ivar frames: Dict node -> (d, r) tangent frame of plane-constrained nodes
    """

    def __init__(self, Pk, Px, node_ids, frames, n_nodes):
        self.Pk = Pk
        self.Px = Px
        self.node_ids = node_ids
        self.frames = frames
        self.n_nodes = n_nodes

    @property
    def n_kappa(self):
        return self.Pk.shape[1]

    @property
    def n_x(self):
        return self.Px.shape[1]

    def kappa(self, values):
        """Nodal curvature per global vertex copy"""
        return self.Pk.dot(values)

    def displacement(self, values, d):
        """Nodal displacement per global vertex, shape (N, d)"""
        return self.Px.dot(values).reshape(-1, d)

    def __repr__(self):
        return "DofMap(n_kappa=%d, n_x=%d, nodes=%d)" % (self.n_kappa, self.n_x, self.n_nodes)


def _kappa_constraints(c):
    """One (copies, orientations) pair per junction vertex"""
    out = []
    for tj in c.junctions:
        for l in range(tj.size):
            copies = [int(c.offsets[s] + tj.correspondence[j][l]) for j, s in enumerate(tj.surfaces)]
            out.append((copies, [int(o) for o in tj.orientation]))
    return out


def _kappa_prolongation(c):
    N = c.n_vertices_total
    constraints = _kappa_constraints(c)
    parent = list(range(len(constraints)))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    owner = {}
    for n, (copies, _) in enumerate(constraints):
        for v in copies:
            if v in owner:
                parent[find(n)] = find(owner[v])
            else:
                owner[v] = n
    groups = {}
    for n in range(len(constraints)):
        groups.setdefault(find(n), []).append(n)
    group_of = {v: find(n) for v, n in owner.items()}

    rows, cols, vals = [], [], []
    ncol = 0
    done = set()
    for v in range(N):
        if v not in group_of:
            rows.append(v)
            cols.append(ncol)
            vals.append(1.)
            ncol += 1
            continue
        g = group_of[v]
        if g in done:
            continue
        done.add(g)
        members = groups[g]
        if len(members) == 1:
            (v1, v2, v3), (o1, o2, o3) = constraints[members[0]]
            rows += [v1, v2, v3, v3]
            cols += [ncol, ncol + 1, ncol, ncol + 1]
            vals += [1., 1., -o3 * o1, -o3 * o2]
            ncol += 2
            continue
        copies = sorted(set(u for n in members for u in constraints[n][0]))
        index = {u: a for a, u in enumerate(copies)}
        C = np.zeros((len(members), len(copies)))
        for row, n in enumerate(members):
            for u, o in zip(*constraints[n]):
                C[row, index[u]] = o
        basis = scipy.linalg.null_space(C)
        basis[np.abs(basis) < 1e-15] = 0.
        for a, u in enumerate(copies):
            for b in np.nonzero(basis[a])[0]:
                rows.append(u)
                cols.append(ncol + b)
                vals.append(basis[a, b])
        ncol += basis.shape[1]
    return sp.csr_matrix((vals, (rows, cols)), shape=(N, ncol))


def build_dof_maps(c):
    """Degrees of freedom of a validated cluster.

    Curvature: one value per vertex copy, minus one per junction vertex,
    where the copy on the highest-numbered incident surface is expressed
    by the other two. Position: one d-vector per identified node, reduced
    to the plane tangent frame at boundary vertices.
    """
    d = c.dim
    N = c.n_vertices_total
    node_ids = c.node_ids()
    n_nodes = int(node_ids.max()) + 1
    copies = np.bincount(node_ids, minlength=n_nodes)

    plane_normals = {}
    for bl in c.boundaries:
        for v in bl.chain_vertices():
            plane_normals.setdefault(int(node_ids[c.offsets[bl.surface] + v]), []).append(bl.normal)
    frames = {}
    for node, normals in plane_normals.items():
        if copies[node] > 1:
            raise UnsupportedConfigurationError(
                "Node %d lies on a triple junction and on an external plane" % node)
        frames[node] = plane_frame(normals)
        if len(normals) > 1:
            logger.debug("Node %d is constrained by %d planes" % (node, len(normals)))

    eye = np.eye(d)
    first_col = np.zeros(n_nodes + 1, dtype=np.int64)
    first_col[1:] = np.cumsum([frames[n].shape[1] if n in frames else d for n in range(n_nodes)])
    rows, cols, vals = [], [], []
    for v in range(N):
        node = node_ids[v]
        frame = frames.get(node, eye)
        for a in range(d):
            for b in range(frame.shape[1]):
                if frame[a, b] != 0:
                    rows.append(v * d + a)
                    cols.append(first_col[node] + b)
                    vals.append(frame[a, b])
    Px = sp.csr_matrix((vals, (rows, cols)), shape=(N * d, int(first_col[-1])))
    return DofMap(_kappa_prolongation(c), Px, node_ids, frames, n_nodes)


class AssembledSystem(object):
    """The reduced linear system of one Picard iterate.

    Unknowns ``(kappa, u)``; the symmetric saddle-point matrix is
    ``[[-dt Ak, B], [B^T, Sx]]`` with right-hand side ``[0, g]``.

    :ivar B: Reduced lumped coupling <kappa nu^{m+1/2}, eta>^h, shape (n_kappa, n_x)
    :ivar Ak: Reduced scalar Laplace-Beltrami stiffness on the old surfaces
    :ivar Sx: Reduced (isotropic or anisotropic) vector stiffness
    :ivar g: Reduced right-hand side (boundary terms minus the stiffness applied to id)
    """

    def __init__(self, dofs, B, Ak, Sx, g, dt, dim, blocks=None):
        self.dofs = dofs
        self.B = B
        self.Ak = Ak
        self.Sx = Sx
        self.g = g
        self.dt = dt
        self.dim = dim
        self.blocks = blocks or {}

    @property
    def shape(self):
        n = self.dofs.n_kappa + self.dofs.n_x
        return (n, n)

    def matrix(self):
        return sp.bmat([[-self.dt * self.Ak, self.B], [self.B.T, self.Sx]], format='csc')

    def rhs(self):
        return np.concatenate([np.zeros(self.dofs.n_kappa), self.g])

    def split(self, solution):
        """Nodal curvature per vertex copy and displacement per vertex from a solution vector"""
        nk = self.dofs.n_kappa
        return self.dofs.kappa(solution[:nk]), self.dofs.displacement(solution[nk:], self.dim)

    def residual(self, solution):
        return np.linalg.norm(self.matrix().dot(solution) - self.rhs())


def _local_to_global(blocks, elems, d):
    """COO triplets of per-element (a, b, c, c') blocks for the vertex*d + component layout"""
    J = elems.shape[0]
    rows = (elems[:, :, None, None, None] * d + np.arange(d)[None, None, None, :, None])
    cols = (elems[:, None, :, None, None] * d + np.arange(d)[None, None, None, None, :])
    shape = (J, d, d, d, d)
    return np.broadcast_to(rows, shape).ravel(), np.broadcast_to(cols, shape).ravel(), blocks.ravel()


def assemble(c, lagged_positions, dt, dofs=None, energy_model=None, rho=None):
    """Assemble the reduced system for the iterate with lagged positions.

    All integrals are on the old surfaces (the positions stored in ``c``).

    :param c: Cluster at the old time level
    :param lagged_positions: Global (N, d) positions of the current Picard iterate
    :param dt: Time step
    :param dofs: Optional precomputed :class:`DofMap`
    :param energy_model: Overrides ``c.energy_model``
    :param rho: Optional list of contact parameters overriding those of the boundary lines
    """
    if dt <= 0:
        raise ValueError("Time step must be positive, got %g" % dt)
    dofs = dofs or build_dof_maps(c)
    model = energy_model or c.energy_model
    X = c.positions()
    Y = np.asarray(lagged_positions, dtype=np.float64)
    if Y.shape != X.shape:
        raise ValueError("Lagged positions have shape %s, expected %s" % (Y.shape, X.shape))
    N, d = X.shape
    tol = degenerate_tolerance(X)

    n_rows, n_cols, n_vals = [], [], []
    a_rows, a_cols, a_vals = [], [], []
    s_rows, s_cols, s_vals = [], [], []
    mass = np.zeros(N)
    for i, patch in enumerate(c.patches):
        elems = c.elements_of(i)
        geom = ElementGeometry(X[elems]).check(tol, surface=i)
        nu = weighted_normal(geom, Y[elems])
        weight = geom.measure / d
        np.add.at(mass, elems, weight[:, None] * np.ones((1, d)))
        n_rows.append(np.repeat(elems, d, axis=1).ravel())
        n_cols.append((elems[:, :, None] * d + np.arange(d)).ravel())
        n_vals.append((weight[:, None, None] * nu[:, None, :] * np.ones((1, d, 1))).ravel())

        local = p1_stiffness(geom)
        a_rows.append(np.repeat(elems, d, axis=1).ravel())
        a_cols.append(np.tile(elems, (1, d)).ravel())
        a_vals.append(local.ravel())

        if model.is_isotropic:
            blocks = np.einsum('jab,cd->jabcd', model.surface_sigma(patch) * local, np.eye(d))
        else:
            blocks = anisotropic_element_stiffness(geom, orientation_vector(Y[elems]), model)
        r, cc, v = _local_to_global(blocks, elems, d)
        s_rows.append(r)
        s_cols.append(cc)
        s_vals.append(v)

    Nmat = sp.csr_matrix((np.concatenate(n_vals), (np.concatenate(n_rows), np.concatenate(n_cols))),
                         shape=(N, N * d))
    A = sp.csr_matrix((np.concatenate(a_vals), (np.concatenate(a_rows), np.concatenate(a_cols))), shape=(N, N))
    S = sp.csr_matrix((np.concatenate(s_vals), (np.concatenate(s_rows), np.concatenate(s_cols))),
                      shape=(N * d, N * d))

    f = np.zeros(N * d)
    for k, bl in enumerate(c.boundaries):
        rho_k = bl.contact_param if rho is None else rho[k]
        if rho_k == 0:
            continue
        xi, weights, seg = boundary_xi(c, k, X, Y)
        share = rho_k * weights[:, None] * xi / seg.shape[1]
        for end in range(seg.shape[1]):
            np.add.at(f, (seg[:, end, None] * d + np.arange(d)), share)

    Pk, Px = dofs.Pk, dofs.Px
    B = (Pk.T.dot(Nmat).dot(Px)).tocsr()
    Ak = (Pk.T.dot(A).dot(Pk)).tocsr()
    Sx = (Px.T.dot(S).dot(Px)).tocsr()
    g = Px.T.dot(f - S.dot(X.ravel()))
    return AssembledSystem(dofs, B, Ak, Sx, g, dt, d, blocks={'N': Nmat, 'A': A, 'S': S, 'f': f, 'mass': mass})
