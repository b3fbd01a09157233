"""Element-level geometric kernels for polylines (d=2) and triangle meshes (d=3).

All kernels are vectorised over leading axes: an array of element
coordinates has shape ``(..., d, d)`` with the vertex axis before the
component axis.
"""
import math

import numpy as np

from bubbleflow.kernels.error import DegenerateSimplexError
from bubbleflow.loggers import logger

__all__ = ['orientation_vector', 'ElementGeometry', 'basis_gradients', 'weighted_normal',
           'weighted_xi', 'PerElement', 'lumped_inner_product', 'region_volume',
           'lumped_volume_change', 'geometric_volume_change_oracle', 'boundary_xi',
           'contact_area_change', 'contact_area_change_oracle', 'measure_angles',
           'JunctionAngles', 'degenerate_tolerance', 'p1_stiffness', 'circle_tangent', 'quadratic_tangents']


def orientation_vector(coords):
    """Orientation vector A of one or more simplices.

    d=2: the clockwise rotation ``(b, -a)`` of the edge vector ``(a, b) = q_1 - q_0``;
    d=3: the cross product ``(q_1 - q_0) x (q_2 - q_0)``.
    """
    coords = np.asarray(coords, dtype=np.float64)
    d = coords.shape[-1]
    if d not in (2, 3) or coords.shape[-2] != d:
        raise ValueError("Expected simplex coordinates of shape (..., d, d) with d in (2, 3), got %s" % (coords.shape,))
    if d == 2:
        e = coords[..., 1, :] - coords[..., 0, :]
        return np.stack([e[..., 1], -e[..., 0]], axis=-1)
    return np.cross(coords[..., 1, :] - coords[..., 0, :], coords[..., 2, :] - coords[..., 0, :])


def basis_gradients(coords):
    """Tangential gradients of the P1 nodal basis, shape (..., d, d) as [vertex, component]"""
    coords = np.asarray(coords, dtype=np.float64)
    edges = coords[..., 1:, :] - coords[..., :1, :]
    gram = np.einsum('...ik,...jk->...ij', edges, edges)
    rest = np.linalg.solve(gram, edges)
    first = -rest.sum(axis=-2, keepdims=True)
    return np.concatenate([first, rest], axis=-2)


def degenerate_tolerance(vertices):
    """Measure below which a simplex counts as degenerate: 1e-14 (bbox diameter)^(d-1)"""
    vertices = np.asarray(vertices)
    d = vertices.shape[-1]
    diam = np.linalg.norm(vertices.max(axis=0) - vertices.min(axis=0)) if len(vertices) else 1.
    return 1e-14 * max(diam, 1e-300) ** (d - 1)


class ElementGeometry(object):
    """Orientation vector, measure, unit normal and P1 gradients of simplices.

    :param coords: Vertex coordinates of shape (d, d) or (J, d, d)
    """

    def __init__(self, coords):
        self.coords = np.asarray(coords, dtype=np.float64)
        self.dim = self.coords.shape[-1]
        self.orientation_vector = orientation_vector(self.coords)
        self.norm = np.linalg.norm(self.orientation_vector, axis=-1)
        self.measure = self.norm / math.factorial(self.dim - 1)
        with np.errstate(invalid='ignore', divide='ignore'):
            self.unit_normal = self.orientation_vector / self.norm[..., None]
        self._gradients = None

    @property
    def basis_gradients(self):
        if self._gradients is None:
            self._gradients = basis_gradients(self.coords)
        return self._gradients

    def check(self, tol=0., surface=None):
        """Raise :class:`DegenerateSimplexError` for elements with measure <= tol"""
        bad = np.nonzero(np.atleast_1d(self.measure) <= tol)[0]
        if len(bad) > 0:
            j = int(bad[0])
            if surface is None:
                raise DegenerateSimplexError()
            raise DegenerateSimplexError(surface, j, float(np.atleast_1d(self.measure)[j]))
        return self


def p1_stiffness(geometry, weight=1.):
    """Local Laplace-Beltrami stiffness ``weight |sigma| grad phi_a . grad phi_b``, shape (J, d, d)"""
    grads = geometry.basis_gradients
    weight = np.asarray(weight, dtype=np.float64)
    scale = geometry.measure * weight if weight.ndim else geometry.measure * float(weight)
    return np.einsum('j,jak,jbk->jab', scale, grads, grads)


def weighted_normal(old, new_coords, d=None):
    """Time-weighted normal: the exact time average of A over the linear
    interpolation from the old to the new simplex, divided by |A^m|.

    Trapezoidal rule for d=2, Simpson's rule for d=3. Elements whose
    coordinates did not change return the old unit normal exactly.
    """
    if not isinstance(old, ElementGeometry):
        old = ElementGeometry(old)
    new_coords = np.asarray(new_coords, dtype=np.float64)
    d = d or old.dim
    if np.any(old.norm == 0):
        raise DegenerateSimplexError()
    a_old = old.orientation_vector
    a_new = orientation_vector(new_coords)
    norm = old.norm[..., None]
    if d == 2:
        nu = (a_old + a_new) / (2. * norm)
    else:
        a_mid = orientation_vector(0.5 * (old.coords + new_coords))
        nu = (a_old + 4. * a_mid + a_new) / (6. * norm)
    unchanged = np.all(new_coords == old.coords, axis=(-2, -1))
    return np.where(unchanged[..., None], old.unit_normal, nu)


def _rotate_2d(n):
    n = np.asarray(n, dtype=np.float64)
    return np.stack([-n[..., 1], n[..., 0]], axis=-1)


def weighted_xi(old_segment, new_segment, normal, d=3, at=1):
    """Time-weighted in-plane conormal xi of a boundary line.

    d=3: ``old_segment``/``new_segment`` hold chain segment endpoints of
    shape (..., 2, 3); returns ``n x (f^m + f^{m+1}) / (2 |f^m|)``.

    d=2: ``old_segment`` is the curve element touching the boundary point
    (shape (2, 2), vertex ``at`` is the boundary point) and
    ``new_segment`` is unused; returns the 90 degree rotation of n
    oriented like the frame (nu, mu) of the curve at that point.
    """
    normal = np.asarray(normal, dtype=np.float64)
    old_segment = np.asarray(old_segment, dtype=np.float64)
    if d == 3:
        new_segment = np.asarray(new_segment, dtype=np.float64)
        f_old = old_segment[..., 1, :] - old_segment[..., 0, :]
        f_new = new_segment[..., 1, :] - new_segment[..., 0, :]
        length = np.linalg.norm(f_old, axis=-1)
        if np.any(length == 0):
            raise DegenerateSimplexError()
        return np.cross(normal, f_old + f_new) / (2. * length[..., None])
    nu = orientation_vector(old_segment)
    mu = old_segment[..., at, :] - old_segment[..., 1 - at, :]
    if np.any(np.linalg.norm(mu, axis=-1) == 0):
        raise DegenerateSimplexError()
    side = np.sign(nu[..., 0] * mu[..., 1] - nu[..., 1] * mu[..., 0])
    return side[..., None] * _rotate_2d(normal)


class PerElement(object):
    """Element-side values of a discontinuous field on one patch, shape (J, d, ...)"""

    def __init__(self, values):
        self.values = np.asarray(values, dtype=np.float64)


def _element_side(field, patch):
    if isinstance(field, PerElement):
        return field.values
    field = np.asarray(field, dtype=np.float64)
    if field.ndim == 0:
        return np.full(patch.simplices.shape, float(field))
    return field[patch.simplices]


def lumped_inner_product(u, v, cluster, positions=None):
    """Vertex-quadrature inner product summed over all patches.

    :param u: Scalar, or list with one entry per patch: nodal values of
              shape (K_i, ...) or :class:`PerElement` values
    :param v: As ``u``
    """
    X = cluster.positions() if positions is None else positions
    total = 0.
    for i, patch in enumerate(cluster.patches):
        ui = _element_side(u if np.isscalar(u) else u[i], patch)
        vi = _element_side(v if np.isscalar(v) else v[i], patch)
        prod = ui * vi
        if prod.ndim > 2:
            prod = prod.reshape(prod.shape[0], prod.shape[1], -1).sum(axis=-1)
        measure = ElementGeometry(X[cluster.elements_of(i)]).measure
        total += np.sum(measure / patch.dim * prod.sum(axis=1))
    return total


def boundary_xi(cluster, k, old_positions=None, new_positions=None):
    """Weighted xi of boundary line k with its quadrature weights.

    Returns ``(xi, weights, vertices)``: per segment (d=3) or per point
    (d=2) xi vectors, segment lengths |f^m| (ones in 2D) and the global
    vertex indices each entry acts on, shape (n, 2) in 3D, (n, 1) in 2D.
    """
    X = cluster.positions() if old_positions is None else old_positions
    Y = X if new_positions is None else new_positions
    bl = cluster.boundaries[k]
    offset = cluster.offsets[bl.surface]
    normal = bl.normal
    if cluster.dim == 3:
        chain = offset + np.asarray(bl.chain)
        seg = np.stack([chain[:-1], chain[1:]], axis=1)
        xi = weighted_xi(X[seg], Y[seg], normal, d=3)
        weights = np.linalg.norm(X[seg[:, 1]] - X[seg[:, 0]], axis=-1)
        return xi, weights, seg
    patch = cluster.patches[bl.surface]
    v = bl.chain[0]
    j, at = patch.boundary_element(v)
    elem = offset + patch.simplices[j]
    xi = weighted_xi(X[elem], None, normal, d=2, at=at)
    return xi[None, :], np.ones(1), np.array([[offset + v]])


def contact_area_change(cluster, k, new_positions, old_positions=None):
    """Change of |G_k^-| by the xi formula: the integral of xi . (X^{m+1} - id) over B_k^m"""
    X = cluster.positions() if old_positions is None else old_positions
    xi, weights, seg = boundary_xi(cluster, k, X, new_positions)
    delta = new_positions[seg] - X[seg]
    return float(np.sum(weights * np.einsum('si,si->s', xi, delta.mean(axis=1))))


def contact_area_change_oracle(old_chain, new_chain, plane_point, normal, xi=None, tol=1e-10):
    """Exact in-plane area (length in 2D) swept by a boundary chain.

    Returns ``(dG_plus, dG_minus)``; motion along xi enlarges G^-. In 2D
    the unit direction ``xi`` of the boundary point must be given.
    """
    old_chain = np.atleast_2d(np.asarray(old_chain, dtype=np.float64))
    new_chain = np.atleast_2d(np.asarray(new_chain, dtype=np.float64))
    normal = np.asarray(normal, dtype=np.float64)
    points = np.concatenate([old_chain, new_chain])
    offplane = np.abs((points - plane_point).dot(normal))
    scale = max(1., np.abs(points).max())
    if np.any(offplane > tol * scale):
        raise ValueError("Boundary chains are not coplanar (max distance %g)" % offplane.max())
    if old_chain.shape[-1] == 2:
        if xi is None:
            raise ValueError("The direction xi is required for 2D boundary points")
        minus = float(np.sum((new_chain - old_chain).dot(xi)))
        return -minus, minus
    a, b = old_chain[:-1], old_chain[1:]
    a1, b1 = new_chain[:-1], new_chain[1:]
    area = 0.5 * (np.cross(b - a, b1 - a) + np.cross(b1 - a, a1 - a))
    minus = float(np.sum(area.dot(normal)))
    return -minus, minus


def _plane_cone(cluster, region, k, X):
    """Signed contribution of the plane piece of region ``region`` on D_k to d * volume"""
    bl = cluster.boundaries[k]
    x_ref = region.reference_point
    height = (x_ref - bl.point).dot(bl.normal)
    if height == 0.:
        return 0.
    foot = x_ref - height * bl.normal
    sign = region.orientation[bl.surface]
    if cluster.dim == 2:
        xi, _, seg = boundary_xi(cluster, k, X)
        area = (X[seg[0, 0]] - foot).dot(xi[0])
    else:
        chain = X[cluster.offsets[bl.surface] + np.asarray(bl.chain)]
        f = chain[1:] - chain[:-1]
        mid = 0.5 * (chain[1:] + chain[:-1])
        area = 0.5 * np.sum(np.einsum('si,si->s', mid - foot, np.cross(bl.normal, f)))
    return height * sign * area


def region_volume(cluster, l, positions=None):
    """Volume of region l by coning its boundary to the region's reference point"""
    X = cluster.positions() if positions is None else positions
    region = cluster.regions[l]
    d = cluster.dim
    total = 0.
    for i in region.surface_set:
        coords = X[cluster.elements_of(i)]
        A = orientation_vector(coords)
        centroid = coords.mean(axis=1)
        total += region.orientation[i] * np.sum(np.einsum('ji,ji->j', centroid - region.reference_point, A))
    total /= math.factorial(d - 1)
    for k in region.plane_set:
        total += _plane_cone(cluster, region, k, X)
    return total / d


def lumped_volume_change(cluster, new_positions, l, old_positions=None):
    """``<(X^{m+1} - id) . nu^{m+1/2}, chi_l>^h`` with chi_l the orientation pattern of region l"""
    X = cluster.positions() if old_positions is None else old_positions
    region = cluster.regions[l]
    total = 0.
    for i in region.surface_set:
        elems = cluster.elements_of(i)
        old = ElementGeometry(X[elems])
        nu = weighted_normal(old, new_positions[elems])
        delta = new_positions[elems] - X[elems]
        total += region.orientation[i] * np.sum(old.measure / cluster.dim * np.einsum('jki,ji->j', delta, nu))
    return total


def _tet_volume(p0, p1, p2, p3):
    return np.einsum('ji,ji->j', np.cross(p1 - p0, p2 - p0), p3 - p0) / 6.


def geometric_volume_change_oracle(cluster, new_positions, l, old_positions=None):
    """Exact volume change of region l from swept quadrilaterals (2D) or prisms (3D).

    3D prisms are split into three tetrahedra after sorting the element
    vertices by identified node number, so that neighbouring prisms (also
    across triple junctions) split their shared side faces identically.
    """
    X = cluster.positions() if old_positions is None else old_positions
    Y = new_positions
    region = cluster.regions[l]
    nodes = cluster.node_ids()
    total = 0.
    for i in region.surface_set:
        elems = cluster.elements_of(i)
        if cluster.dim == 2:
            poly = [X[elems[:, 0]], Y[elems[:, 0]], Y[elems[:, 1]], X[elems[:, 1]]]
            twice = sum(poly[n][:, 0] * poly[(n + 1) % 4][:, 1] - poly[(n + 1) % 4][:, 0] * poly[n][:, 1]
                        for n in range(4))
            total += region.orientation[i] * 0.5 * np.sum(twice)
            continue
        order = np.argsort(nodes[elems], axis=1)
        inversions = ((order[:, 0] > order[:, 1]).astype(int) + (order[:, 0] > order[:, 2]) +
                      (order[:, 1] > order[:, 2]))
        parity = 1. - 2. * (inversions % 2)
        srt = np.take_along_axis(elems, order, axis=1)
        v0, v1, v2 = X[srt[:, 0]], X[srt[:, 1]], X[srt[:, 2]]
        w0, w1, w2 = Y[srt[:, 0]], Y[srt[:, 1]], Y[srt[:, 2]]
        prism = _tet_volume(v0, v1, v2, w0) + _tet_volume(v1, v2, w0, w1) + _tet_volume(v2, w0, w1, w2)
        total += region.orientation[i] * np.sum(parity * prism)
    return total


def circle_tangent(p, a, b):
    """Unit tangent at p of the circle through p, a and b (the line when they are collinear).

    Inversion about p maps the circle to a line through a/|a|^2 and b/|b|^2
    (positions relative to p) that is parallel to the tangent at p. The sign
    is arbitrary; None if a or b coincides with p or a == b.
    """
    p = np.asarray(p, dtype=np.float64)
    u = np.asarray(a, dtype=np.float64) - p
    w = np.asarray(b, dtype=np.float64) - p
    uu, ww = u.dot(u), w.dot(w)
    if uu == 0 or ww == 0:
        return None
    t = u / uu - w / ww
    norm = np.linalg.norm(t)
    if norm <= 1e-14 * (1. / math.sqrt(uu) + 1. / math.sqrt(ww)):
        return None
    return t / norm


def quadratic_tangents(p, points, e1, e2):
    """Tangent vectors at p of the least-squares quadratic height function
    ``h(u, v) = a u + b v + c u^2 + d uv + e v^2`` over the plane spanned by
    the orthonormal vectors e1, e2 through p, fitted to ``points``.

    Returns ``(e1 + a n, e2 + b n)`` with ``n = e1 x e2``; with fewer than
    five points only the linear terms are fitted. None without two points.
    """
    n = np.cross(e1, e2)
    rel = np.asarray(points, dtype=np.float64) - p
    if len(rel) < 2:
        return None
    u, v, h = rel.dot(e1), rel.dot(e2), rel.dot(n)
    if len(rel) >= 5:
        design = np.stack([u, v, u * u, u * v, v * v], axis=1)
    else:
        design = np.stack([u, v], axis=1)
    coef, _, rank, _ = np.linalg.lstsq(design, h, rcond=None)
    if rank < 2:
        return None
    return e1 + coef[0] * n, e2 + coef[1] * n


class JunctionAngles(object):
    """Measured angles in degrees.

    :ivar junctions: per triple junction an array (Z_k, 3) with the angles
                     between surfaces (s_1, s_2), (s_2, s_3), (s_3, s_1)
    :ivar contacts: per boundary line an array with one contact angle per
                    chain vertex (NaN where skipped)
    """

    def __init__(self, junctions, contacts):
        self.junctions = junctions
        self.contacts = contacts

    def all_junction_angles(self):
        vals = [a.ravel() for a in self.junctions]
        vals = np.concatenate(vals) if vals else np.zeros(0)
        return vals[~np.isnan(vals)]

    def all_contact_angles(self):
        vals = [a.ravel() for a in self.contacts]
        vals = np.concatenate(vals) if vals else np.zeros(0)
        return vals[~np.isnan(vals)]


def _angle(a, b):
    return np.degrees(np.arccos(np.clip(np.dot(a, b), -1., 1.)))


def measure_angles(cluster, positions=None):
    """Triple-junction angles and contact angles of a cluster state.

    Conormals and normals come from second-order fits: in 2D the circle
    through a curve endpoint and its next two vertices, in 3D a quadratic
    height function over the two-ring of the vertex. Vertices next to
    degenerate elements are skipped.
    """
    X = cluster.positions() if positions is None else positions
    junction_angles = []
    for k, tj in enumerate(cluster.junctions):
        angles = np.full((len(tj.correspondence[0]), 3), np.nan)
        for l in range(len(tj.correspondence[0])):
            frames = cluster.junction_conormals(k, l, X)
            if frames is None:
                logger.warning_once("Skipping junction vertices next to degenerate elements in angle measurement")
                continue
            tau, mus = frames
            if tau is not None:
                mus = [m - m.dot(tau) * tau for m in mus]
            mus = [m / np.linalg.norm(m) for m in mus]
            angles[l] = [_angle(mus[0], mus[1]), _angle(mus[1], mus[2]), _angle(mus[2], mus[0])]
        junction_angles.append(angles)
    contact_angles = []
    for k, bl in enumerate(cluster.boundaries):
        verts = bl.chain_vertices()
        angles = np.full(len(verts), np.nan)
        for n, v in enumerate(verts):
            nu = cluster.boundary_normal(k, v, X)
            if nu is None:
                logger.warning_once("Skipping boundary vertices next to degenerate elements in angle measurement")
                continue
            angles[n] = _angle(bl.normal, nu)
        contact_angles.append(angles)
    return JunctionAngles(junction_angles, contact_angles)
