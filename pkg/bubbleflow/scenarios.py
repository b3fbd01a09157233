"""Generators for the initial clusters of the standard experiments.

2D networks are built from circular arcs, ellipse arcs and straight
segments; 3D clusters from a flat polyhedron whose faces are grouped into
bubbles, refined, and projected to the unit sphere, with the internal
walls formed by cones from the origin over the shared polyhedron edges.
"""
import copy
import math
from collections import Counter

import numpy as np
from scipy.spatial import cKDTree

from bubbleflow.cluster import BoundaryLine, Cluster, Region, SurfacePatch, TripleJunction, _edge_conormal_frame, _frame_sign
from bubbleflow.kernels.error import UnsupportedConfigurationError

__all__ = ['make_double_bubble_2d', 'make_standard_bubble_2d', 'make_double_bubble_3d',
           'make_triple_bubble_3d', 'make_quadruple_bubble_3d', 'make_drop_on_substrate',
           'make_cylinder_cluster', 'make_flat_sheet', 'make_scenario', 'list_scenarios',
           'presets', 'get_preset']

merge_tol = 1e-9
plane_tol = 1e-9


def _merge_points(points, tol=merge_tol):
    """Representatives of points closer than tol, and the index of each point's representative"""
    parent = np.arange(len(points))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for a, b in cKDTree(points).query_pairs(tol, output_type='ndarray'):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)
    roots = np.array([find(a) for a in range(len(points))], dtype=np.int64)
    unique, inverse = np.unique(roots, return_inverse=True)
    return points[unique], inverse


def _patch_from_triangles(surface_id, points, tris, sigma=1.):
    points, inverse = _merge_points(np.asarray(points, dtype=np.float64))
    simplices = inverse[np.asarray(tris)]
    used, compact = np.unique(simplices, return_inverse=True)
    return SurfacePatch(surface_id, points[used], compact.reshape(simplices.shape), sigma)


def _curve_patch(surface_id, points, sigma=1., closed=False):
    n = len(points)
    simplices = np.stack([np.arange(n - 1), np.arange(1, n)], axis=1)
    if closed:
        simplices = np.vstack([simplices, [n - 1, 0]])
    return SurfacePatch(surface_id, points, simplices, sigma)


def _chains(edges):
    """Split an edge list into maximal chains; returns (node list, closed) pairs"""
    adjacency = {}
    for a, b in edges:
        adjacency.setdefault(a, []).append(b)
        adjacency.setdefault(b, []).append(a)
    if any(len(nb) > 2 for nb in adjacency.values()):
        raise ValueError("Boundary edges branch; cannot order them into chains")
    used = set()
    chains = []
    starts = sorted(a for a, nb in adjacency.items() if len(nb) == 1) + sorted(adjacency)
    for start in starts:
        if all(frozenset((start, b)) in used for b in adjacency[start]):
            continue
        chain = [start]
        current = start
        while True:
            nxt = [b for b in sorted(adjacency[current]) if frozenset((current, b)) not in used]
            if not nxt:
                break
            used.add(frozenset((current, nxt[0])))
            current = nxt[0]
            chain.append(current)
        closed = len(chain) > 2 and chain[-1] == chain[0]
        chains.append((chain[:-1] if closed else chain, closed))
    return chains


def _on_plane(point, plane):
    return abs(np.dot(point - plane[0], plane[1])) < plane_tol


def _make_cluster(patches, regions=(), planes=(), energy_model=None):
    """Assemble a validated cluster from patches whose boundaries meet by coordinates.

    Boundary pieces shared by three patches become triple junctions, those
    of one patch lying on one of ``planes`` become boundary lines.

    :param regions: Sequence of (orientation dict surface -> sign, plane indices, reference point)
    :param planes: Sequence of (point, unit normal, contact parameter)
    """
    d = patches[0].dim
    planes = [(np.asarray(p, dtype=np.float64), np.asarray(n, dtype=np.float64), float(r)) for p, n, r in planes]
    owners = [(i, int(v)) for i, p in enumerate(patches) for v in p.boundary_vertices()]
    if owners:
        _, keys = _merge_points(np.array([patches[i].vertices[v] for i, v in owners]))
    else:
        keys = np.zeros(0, dtype=np.int64)
    key_of = {o: int(k) for o, k in zip(owners, keys)}
    vertex_of = {(i, key_of[(i, v)]): v for i, v in owners}

    junction_chains = []
    plane_chains = []
    if d == 2:
        groups = {}
        for o in owners:
            groups.setdefault(key_of[o], []).append(o)
        for key in sorted(groups):
            members = sorted(groups[key])
            if len(members) == 3:
                junction_chains.append(([s for s, _ in members], [key], False))
            elif len(members) == 1:
                s, v = members[0]
                plane = [n for n, pl in enumerate(planes) if _on_plane(patches[s].vertices[v], pl)]
                if not plane:
                    raise ValueError("Curve end (surface %d, vertex %d) is neither a junction nor on a plane" % (s, v))
                plane_chains.append((s, plane[0], [v], False))
            else:
                raise ValueError("%d curve ends meet at one point" % len(members))
    else:
        edge_map = {}
        for i, patch in enumerate(patches):
            for (a, b), elems in sorted(patch.edge_elements().items()):
                if len(elems) == 1:
                    ka, kb = key_of[(i, a)], key_of[(i, b)]
                    edge_map.setdefault((min(ka, kb), max(ka, kb)), []).append((i, a, b))
        by_triple = {}
        by_plane = {}
        for key in sorted(edge_map):
            members = edge_map[key]
            if len(members) == 3:
                by_triple.setdefault(tuple(sorted(m[0] for m in members)), []).append(key)
            elif len(members) == 1:
                s, a, b = members[0]
                V = patches[s].vertices
                plane = [n for n, pl in enumerate(planes) if _on_plane(V[a], pl) and _on_plane(V[b], pl)]
                if not plane:
                    raise ValueError("Boundary edge (%d, %d) of surface %d is neither a junction nor on a plane" % (a, b, s))
                by_plane.setdefault((s, plane[0]), []).append((a, b))
            else:
                raise ValueError("%d surfaces share one boundary edge" % len(members))
        for triple in sorted(by_triple):
            for chain, closed in _chains(by_triple[triple]):
                junction_chains.append((list(triple), chain, closed))
        for s, plane in sorted(by_plane):
            for chain, closed in _chains(by_plane[(s, plane)]):
                plane_chains.append((s, plane, chain, closed))

    parts = Counter()
    junctions = []
    for surfaces, chain, closed in junction_chains:
        incident = []
        for s in surfaces:
            incident.append((s, parts[s]))
            parts[s] += 1
        corr = [[vertex_of[(s, key)] for key in chain] for s in surfaces]
        for l in range(len(chain)):
            x = patches[surfaces[0]].vertices[corr[0][l]]
            for j in (1, 2):
                patches[surfaces[j]].vertices[corr[j][l]] = x
        junctions.append(TripleJunction(len(junctions), incident, [1, 1, 1], corr))

    boundaries = []
    plane_of = []
    for s, plane, chain, closed in plane_chains:
        if d == 3:
            a, b = chain[0], chain[1]
            e, w = patches[s].edge_element(a, b)
            V = patches[s].vertices
            mu, nu = _edge_conormal_frame(V[[a, b, w]], V[patches[s].simplices[e]])
            if np.cross(mu, nu).dot(V[b] - V[a]) < 0:
                chain = chain[::-1]
            if closed:
                chain = chain + chain[:1]
        point, normal, rho = planes[plane]
        boundaries.append(BoundaryLine(len(boundaries), (s, parts[s]), point, normal, rho, chain))
        parts[s] += 1
        plane_of.append(plane)

    region_list = []
    for orientation, plane_set, reference in regions:
        region_list.append(Region(len(region_list), sorted(orientation), orientation,
                                  [k for k, p in enumerate(plane_of) if p in plane_set],
                                  reference, n_surfaces=len(patches)))
    c = Cluster(patches, junctions, boundaries, region_list, energy_model)
    for k, tj in enumerate(junctions):
        tau, frames = c.junction_edge_frames(k)[0]
        tj.orientation = np.array([int(np.sign(_frame_sign(tau, f, 1))) for f in frames], dtype=np.int64)
    return c.check()


def _split(K, weights, minimum=3):
    """Distribute K vertices over curves proportionally to weights, at least ``minimum`` each"""
    weights = np.asarray(weights, dtype=np.float64)
    if K < minimum * len(weights):
        raise ValueError("K=%d is too small for %d curves" % (K, len(weights)))
    exact = K * weights / weights.sum()
    counts = np.maximum(np.floor(exact).astype(int), minimum)
    order = np.argsort(-(exact - np.floor(exact)), kind='stable')
    n = 0
    while counts.sum() < K:
        counts[order[n % len(order)]] += 1
        n += 1
    while counts.sum() > K:
        counts[int(np.argmax(counts))] -= 1
    return counts


def _resample(dense, n, start, end):
    """n points equidistributed in arc length along a dense polyline, with exact end points"""
    seg = np.linalg.norm(np.diff(dense, axis=0), axis=1)
    s = np.concatenate([[0.], np.cumsum(seg)])
    target = np.linspace(0., s[-1], n)
    points = np.stack([np.interp(target, s, dense[:, c]) for c in range(dense.shape[1])], axis=1)
    points[0] = start
    points[-1] = end
    return points


def _sigmas(sigma, n):
    if sigma is None:
        return [1.] * n
    if len(sigma) != n:
        raise ValueError("Expected %d surface energy densities, got %d" % (n, len(sigma)))
    return [float(s) for s in sigma]


def _arc(center, radius, phi0, phi1, m=2001):
    phi = np.linspace(phi0, phi1, m)
    return center + radius * np.stack([np.cos(phi), np.sin(phi)], axis=1)


def _network_2d(curves, regions, K, sigma, planes=()):
    """Cluster from (dense polyline, start, end) curves, resampled to K vertices in total"""
    lengths = [np.sum(np.linalg.norm(np.diff(dense, axis=0), axis=1)) for dense, _, _ in curves]
    counts = _split(K, lengths)
    sigmas = _sigmas(sigma, len(curves))
    patches = [_curve_patch(i, _resample(dense, n, start, end), sigmas[i])
               for i, ((dense, start, end), n) in enumerate(zip(curves, counts))]
    return _make_cluster(patches, regions, planes)


def make_double_bubble_2d(K=129, sigma=(1., 1., 1.)):
    """Two 2:1 semi-ellipses and a straight segment meeting at (+-1, 0)"""
    t = np.linspace(0., math.pi, 4001)
    right, left = np.array([1., 0.]), np.array([-1., 0.])
    upper = np.stack([np.cos(t), 0.5 * np.sin(t)], axis=1)
    lower = np.stack([-np.cos(t), -0.5 * np.sin(t)], axis=1)
    chord = np.stack([np.linspace(-1., 1., 2001), np.zeros(2001)], axis=1)
    curves = [(upper, right, left), (lower, left, right), (chord, left, right)]
    regions = [({0: 1, 2: 1}, (), [0., 0.2]), ({1: 1, 2: -1}, (), [0., -0.2])]
    return _network_2d(curves, regions, K, sigma)


def _pie_2d(K, sigma):
    phi = [math.pi / 2 + 2 * math.pi * j / 3 for j in range(3)]
    center = np.zeros(2)
    Q = [np.array([math.cos(p), math.sin(p)]) for p in phi]
    curves = [(np.array([center, q]), center, q) for q in Q]
    for j in range(3):
        curves.append((_arc(center, 1., phi[j], phi[j] + 2 * math.pi / 3), Q[j], Q[(j + 1) % 3]))
    regions = [({j: 1, 3 + j: 1, (j + 1) % 3: -1}, (), 0.5 * (Q[j] + Q[(j + 1) % 3]) * 0.7) for j in range(3)]
    return _network_2d(curves, regions, K, sigma)


def make_standard_bubble_2d(n_bubbles=3, K=1029, sigma=None):
    """Planar clusters of 2 to 7 bubbles.

    Three bubbles form a pie; four and more surround a central polygonal
    bubble, with spokes and outer circular arcs perturbed to generic position.
    """
    if n_bubbles == 2:
        return make_double_bubble_2d(K, sigma if sigma is not None else (1., 1., 1.))
    if n_bubbles == 3:
        return _pie_2d(K, sigma)
    if not 4 <= n_bubbles <= 7:
        raise UnsupportedConfigurationError("Standard 2D clusters exist for 2 to 7 bubbles, not %s" % n_bubbles)
    m = n_bubbles - 1
    phi = [math.pi / 2 + 2 * math.pi * j / m + 0.15 * math.sin(2.3 * j + 0.7) for j in range(m)]
    r = [0.5 * (1. + 0.1 * math.cos(1.9 * j)) for j in range(m)]
    R = 1.5
    P = [r[j] * np.array([math.cos(phi[j]), math.sin(phi[j])]) for j in range(m)]
    Q = [R * np.array([math.cos(phi[j]), math.sin(phi[j])]) for j in range(m)]
    curves = [(np.array([P[j], P[(j + 1) % m]]), P[j], P[(j + 1) % m]) for j in range(m)]
    curves += [(np.array([P[j], Q[j]]), P[j], Q[j]) for j in range(m)]
    for j in range(m):
        end = phi[(j + 1) % m] + (2 * math.pi if j == m - 1 else 0.)
        curves.append((_arc(np.zeros(2), R, phi[j], end), Q[j], Q[(j + 1) % m]))
    regions = [({j: 1 for j in range(m)}, (), np.mean(P, axis=0))]
    for j in range(m):
        k = (j + 1) % m
        regions.append(({m + j: 1, 2 * m + j: 1, m + k: -1, j: -1}, (), 0.25 * (P[j] + P[k] + Q[j] + Q[k])))
    return _network_2d(curves, regions, K, sigma)


def _subdivide(corners, n):
    """Barycentric grid of a triangle refined n times; returns (barycentric coordinates, triangles)"""
    index = {}
    bary = []
    for j in range(n + 1):
        for k in range(n + 1 - j):
            index[(j, k)] = len(bary)
            bary.append((n - j - k, j, k))
    tris = []
    for j in range(n):
        for k in range(n - j):
            tris.append((index[(j, k)], index[(j + 1, k)], index[(j, k + 1)]))
            if k < n - j - 1:
                tris.append((index[(j + 1, k)], index[(j + 1, k + 1)], index[(j, k + 1)]))
    return np.array(bary, dtype=np.float64) / n, np.array(tris, dtype=np.int64)


def _sphere_patch(surface_id, faces, n, sigma):
    points, tris = [], []
    for corners in faces:
        bary, t = _subdivide(corners, n)
        p = bary.dot(corners)
        tris.append(t + sum(len(q) for q in points))
        points.append(p / np.linalg.norm(p, axis=1)[:, None])
    return _patch_from_triangles(surface_id, np.concatenate(points), np.concatenate(tris), sigma)


def _cone_patch(surface_id, edges, n, sigma):
    """Cones from the origin over polyhedron edges, rims mapped to the sphere and radii kept linear"""
    points, tris = [], []
    for p, q in edges:
        bary, t = _subdivide(np.array([np.zeros(3), p, q]), n)
        w = bary[:, 1:2] * p + bary[:, 2:3] * q
        norm = np.linalg.norm(w, axis=1)
        scale = np.where(norm > 0, (bary[:, 1] + bary[:, 2]) / np.where(norm > 0, norm, 1.), 0.)
        tris.append(t + sum(len(x) for x in points))
        points.append(w * scale[:, None])
    return _patch_from_triangles(surface_id, np.concatenate(points), np.concatenate(tris), sigma)


def _disk_vertices(n_faces, n_boundary, n):
    return 1 + (n_faces * n * n + n_boundary * n) // 2


def _boundary_edge_count(triangles):
    counts = Counter(frozenset(e) for t in triangles for e in ((t[0], t[1]), (t[1], t[2]), (t[2], t[0])))
    return sum(1 for v in counts.values() if v == 1)


def _cone_cluster(vertices, faces, groups, K, sigma):
    """Bubble cluster from a polyhedron with outward oriented faces grouped into bubbles"""
    vertices = np.asarray(vertices, dtype=np.float64)
    n_groups = max(groups) + 1
    walls = {}
    owner = {}
    for f, g in zip(faces, groups):
        for a, b in ((f[0], f[1]), (f[1], f[2]), (f[2], f[0])):
            owner[(a, b)] = g
    for (a, b), g in sorted(owner.items()):
        h = owner.get((b, a))
        if h is not None and g < h:
            walls.setdefault((g, h), []).append((a, b))
    outer_tris = [[f for f, g in zip(faces, groups) if g == k] for k in range(n_groups)]
    wall_tris = [[(-1, a, b) for a, b in walls[key]] for key in sorted(walls)]
    sizes = [(len(t), _boundary_edge_count(t)) for t in outer_tris + wall_tris]

    def count(n):
        return sum(_disk_vertices(f, b, n) for f, b in sizes)

    n = min(range(1, 200), key=lambda m: abs(count(m) - K))
    sigmas = _sigmas(sigma, len(sizes))
    patches = [_sphere_patch(k, [vertices[list(f)] for f in outer_tris[k]], n, sigmas[k]) for k in range(n_groups)]
    for i, key in enumerate(sorted(walls)):
        patches.append(_cone_patch(n_groups + i, [(vertices[a], vertices[b]) for a, b in walls[key]], n,
                                   sigmas[n_groups + i]))
    regions = []
    for k in range(n_groups):
        orientation = {k: 1}
        for i, (a, b) in enumerate(sorted(walls)):
            if k in (a, b):
                orientation[n_groups + i] = -1 if k == a else 1
        centre = np.mean([vertices[list(f)].mean(axis=0) for f in outer_tris[k]], axis=0)
        regions.append((orientation, (), 0.5 * centre))
    return _make_cluster(patches, regions)


def _octahedron():
    ring = [(1., 0., 0.), (0., 1., 0.), (-1., 0., 0.), (0., -1., 0.)]
    vertices = ring + [(0., 0., 1.), (0., 0., -1.)]
    upper = [(j, (j + 1) % 4, 4) for j in range(4)]
    lower = [((j + 1) % 4, j, 5) for j in range(4)]
    return vertices, upper, lower


def make_double_bubble_3d(K=3267, sigma=None):
    """Two hemispheres and the equatorial disk, meeting along the equator"""
    vertices, upper, lower = _octahedron()
    return _cone_cluster(vertices, upper + lower, [0] * 4 + [1] * 4, K, sigma)


def make_triple_bubble_3d(K=6534, sigma=None):
    """Three spherical lunes separated by three half-disks through the z-axis"""
    ring = [(math.cos(2 * math.pi * j / 3), math.sin(2 * math.pi * j / 3), 0.) for j in range(3)]
    vertices = ring + [(0., 0., 1.), (0., 0., -1.)]
    faces, groups = [], []
    for j in range(3):
        faces += [(j, (j + 1) % 3, 3), ((j + 1) % 3, j, 4)]
        groups += [j, j]
    return _cone_cluster(vertices, faces, groups, K, sigma)


def make_quadruple_bubble_3d(K=8378, sigma=None):
    """Four spherical triangles over a tetrahedron, separated by six flat walls"""
    vertices = np.array([(1., 1., 1.), (1., -1., -1.), (-1., 1., -1.), (-1., -1., 1.)]) / math.sqrt(3.)
    faces = []
    for skip in range(4):
        f = [v for v in range(4) if v != skip]
        if np.linalg.det(vertices[f]) < 0:
            f = [f[0], f[2], f[1]]
        faces.append(tuple(f))
    return _cone_cluster(vertices, faces, list(range(4)), K, sigma)


def make_drop_on_substrate(d=3, K=4225, rho=0.5, sigma=1.):
    """Unit semicircle (d=2) or hemisphere (d=3) resting on the plane through the origin with normal e_d"""
    if d == 2:
        t = np.linspace(0., math.pi, 4001)
        dense = np.stack([np.cos(t), np.sin(t)], axis=1)
        patch = _curve_patch(0, _resample(dense, K, [1., 0.], [-1., 0.]), sigma)
        planes = [(np.zeros(2), [0., 1.], rho)]
        return _make_cluster([patch], [({0: 1}, (0,), np.zeros(2))], planes)
    if d != 3:
        raise UnsupportedConfigurationError("Drops exist in 2 and 3 dimensions, not %s" % d)
    vertices, upper, _ = _octahedron()
    vertices = np.array(vertices)
    n = min(range(1, 200), key=lambda m: abs(_disk_vertices(4, 4, m) - K))
    patch = _sphere_patch(0, [vertices[list(f)] for f in upper], n, sigma)
    planes = [(np.zeros(3), [0., 0., 1.], rho)]
    return _make_cluster([patch], [({0: 1}, (0,), np.zeros(3))], planes)


def _grid(a_values, b_values, position, skip=None):
    """Points and triangles of a quad grid; normals follow d(position)/da x d(position)/db"""
    na, nb = len(a_values), len(b_values)
    points = np.array([position(a, b) for a in a_values for b in b_values])
    tris = []
    for i in range(na - 1):
        for j in range(nb - 1):
            if skip is not None and skip(0.5 * (a_values[i] + a_values[i + 1]), 0.5 * (b_values[j] + b_values[j + 1])):
                continue
            p00, p10, p11, p01 = i * nb + j, (i + 1) * nb + j, (i + 1) * nb + j + 1, i * nb + j + 1
            tris += [(p00, p10, p11), (p00, p11, p01)]
    return points, np.array(tris, dtype=np.int64)


def _half_box(q):
    """Upper half of the surface of the unit cube centred at the origin, outward oriented"""
    u = np.linspace(-0.5, 0.5, 2 * q + 1)
    z = np.linspace(0., 0.5, q + 1)
    faces = [_grid(u, u, lambda a, b: (a, b, 0.5)),
             _grid(u, z, lambda a, b: (0.5, a, b)),
             _grid(z, u, lambda a, b: (-0.5, b, a)),
             _grid(z, u, lambda a, b: (b, 0.5, a)),
             _grid(u, z, lambda a, b: (a, -0.5, b))]
    points, tris, offset = [], [], 0
    for p, t in faces:
        points.append(p)
        tris.append(t + offset)
        offset += len(p)
    return np.concatenate(points), np.concatenate(tris)


def make_cylinder_cluster(K=4802, rho=0., sigma=None):
    """Unit cube split by a horizontal sheet that extends to the walls of the cylinder [-3/2, 3/2]^2 x R"""
    q = min(range(1, 100), key=lambda m: abs(56 * m * m + 24 * m + 2 - K))
    sigmas = _sigmas(sigma, 3)
    points, tris = _half_box(q)
    upper = _patch_from_triangles(0, points, tris, sigmas[0])
    lower = _patch_from_triangles(1, points * np.array([1., 1., -1.]), tris[:, [0, 2, 1]], sigmas[1])
    w = np.linspace(-1.5, 1.5, 6 * q + 1)
    sheet_points, sheet_tris = _grid(w, w, lambda a, b: (a, b, 0.),
                                     skip=lambda a, b: abs(a) < 0.5 and abs(b) < 0.5)
    sheet = _patch_from_triangles(2, sheet_points, sheet_tris, sigmas[2])
    planes = [((1.5, 0., 0.), (-1., 0., 0.), rho), ((-1.5, 0., 0.), (1., 0., 0.), rho),
              ((0., 1.5, 0.), (0., -1., 0.), rho), ((0., -1.5, 0.), (0., 1., 0.), rho)]
    return _make_cluster([upper, lower, sheet], [({0: 1, 1: 1}, (), np.zeros(3))], planes)


def make_flat_sheet(d=3, K=441, rho=0., sigma=1.):
    """Flat segment (d=2) or square (d=3) spanning [-1, 1]^(d-1) between walls at +-1"""
    if d == 2:
        points = np.stack([np.linspace(-1., 1., K), np.zeros(K)], axis=1)
        planes = [((1., 0.), (-1., 0.), rho), ((-1., 0.), (1., 0.), rho)]
        return _make_cluster([_curve_patch(0, points, sigma)], planes=planes)
    m = max(3, int(round(math.sqrt(K))))
    s = np.linspace(-1., 1., m)
    points, tris = _grid(s, s, lambda a, b: (a, b, 0.))
    planes = [((1., 0., 0.), (-1., 0., 0.), rho), ((-1., 0., 0.), (1., 0., 0.), rho),
              ((0., 1., 0.), (0., -1., 0.), rho), ((0., -1., 0.), (0., 1., 0.), rho)]
    return _make_cluster([_patch_from_triangles(0, points, tris, sigma)], planes=planes)


scenarios = {
    'double_bubble_2d': (make_double_bubble_2d, {'K': 129, 'sigma': [1., 1., 1.]}),
    'standard_bubble_2d': (make_standard_bubble_2d, {'n_bubbles': 3, 'K': 1029}),
    'double_bubble_3d': (make_double_bubble_3d, {'K': 3267}),
    'triple_bubble_3d': (make_triple_bubble_3d, {'K': 6534}),
    'quadruple_bubble_3d': (make_quadruple_bubble_3d, {'K': 8378}),
    'drop_on_substrate': (make_drop_on_substrate, {'d': 3, 'K': 4225, 'rho': 0.5}),
    'cylinder_cluster': (make_cylinder_cluster, {'K': 4802, 'rho': 0.}),
    'flat_sheet': (make_flat_sheet, {'d': 3, 'K': 441, 'rho': 0.}),
}


def make_scenario(name, **params):
    """Cluster of a named scenario; unspecified parameters take their defaults"""
    if name not in scenarios:
        raise UnsupportedConfigurationError("Unknown scenario '%s'; choose from %s" % (name, sorted(scenarios)))
    generator, defaults = scenarios[name]
    unknown = set(params) - set(defaults) - {'sigma'}
    if unknown:
        raise UnsupportedConfigurationError("Scenario '%s' has no parameter(s) %s" % (name, sorted(unknown)))
    kwargs = dict(defaults)
    kwargs.update(params)
    return generator(**kwargs)


def list_scenarios():
    """(name, default parameters, description) of every scenario"""
    return [(name, dict(defaults), generator.__doc__.strip().splitlines()[0])
            for name, (generator, defaults) in sorted(scenarios.items())]


def _preset(name, dt, T_final, frames, energy=None, mode='sp', **params):
    config = {'scenario': dict(name=name, **params), 'dt': dt, 'T_final': T_final, 'mode': mode,
              'output': {'frames': frames}}
    if energy is not None:
        config['energy'] = energy
    return config


_frames_2d = [0., 0.1, 2.]
_frames_3d = [0., 0.1, 1.]
_cusp3d = {'kind': 'cusp', 'r': 1., 'eps': 0.1}

presets = {
    'double_bubble_2d': _preset('double_bubble_2d', 1e-2, 2., _frames_2d),
    'double_bubble_2d_bgn': _preset('double_bubble_2d', 1e-2, 2., _frames_2d, mode='bgn'),
    'double_bubble_2d_sigma_1_1_1.5': _preset('double_bubble_2d', 1e-2, 2., _frames_2d, sigma=[1., 1., 1.5]),
    'double_bubble_2d_sigma_1_1_2': _preset('double_bubble_2d', 1e-2, 2., _frames_2d, sigma=[1., 1., 2.]),
    'double_bubble_2d_sigma_1_1.5_1': _preset('double_bubble_2d', 1e-2, 2., _frames_2d, sigma=[1., 1.5, 1.]),
    'double_bubble_2d_sigma_1_2_1': _preset('double_bubble_2d', 1e-2, 2., _frames_2d, sigma=[1., 2., 1.]),
    'triple_bubble_2d': _preset('standard_bubble_2d', 1e-2, 2., _frames_2d, n_bubbles=3, K=1029),
    'quadruple_bubble_2d': _preset('standard_bubble_2d', 1e-2, 2., _frames_2d, n_bubbles=4, K=1029),
    'quintuple_bubble_2d': _preset('standard_bubble_2d', 1e-2, 2., _frames_2d, n_bubbles=5, K=1032),
    'sextuple_bubble_2d': _preset('standard_bubble_2d', 1e-2, 2., _frames_2d, n_bubbles=6, K=1025),
    'sextuple_bubble_2d_bgn': _preset('standard_bubble_2d', 1e-2, 2., _frames_2d, mode='bgn', n_bubbles=6, K=1025),
    'septuple_bubble_2d': _preset('standard_bubble_2d', 1e-2, 2., _frames_2d, n_bubbles=7, K=1032),
    'anisotropic_sextuple_bubble_2d_L2': _preset('standard_bubble_2d', 1e-2, 2., _frames_2d,
                                                 {'kind': 'rotation2d', 'L': 2, 'eps': 0.01}, n_bubbles=6, K=1025),
    'anisotropic_sextuple_bubble_2d_L3': _preset('standard_bubble_2d', 1e-2, 2., _frames_2d,
                                                 {'kind': 'rotation2d', 'L': 3, 'eps': 0.01}, n_bubbles=6, K=1025),
    'anisotropic_septuple_bubble_2d_L2': _preset('standard_bubble_2d', 1e-2, 2., _frames_2d,
                                                 {'kind': 'rotation2d', 'L': 2, 'eps': 0.01}, n_bubbles=7, K=1032),
    'anisotropic_septuple_bubble_2d_L3': _preset('standard_bubble_2d', 1e-2, 2., _frames_2d,
                                                 {'kind': 'rotation2d', 'L': 3, 'eps': 0.01}, n_bubbles=7, K=1032),
    'double_bubble_3d': _preset('double_bubble_3d', 1e-3, 1., _frames_3d),
    # the equatorial disk is the third surface
    'double_bubble_3d_sigma_1.5_1_1': _preset('double_bubble_3d', 1e-3, 1., _frames_3d, sigma=[1.5, 1., 1.]),
    'double_bubble_3d_sigma_1_1_1.5': _preset('double_bubble_3d', 1e-3, 1., _frames_3d, sigma=[1., 1., 1.5]),
    'triple_bubble_3d': _preset('triple_bubble_3d', 1e-3, 1., _frames_3d),
    'quadruple_bubble_3d': _preset('quadruple_bubble_3d', 1e-3, 1., _frames_3d),
    'anisotropic_quadruple_bubble_3d': _preset('quadruple_bubble_3d', 1e-3, 1., _frames_3d, _cusp3d),
    'drop_3d_rho_0.5': _preset('drop_on_substrate', 1e-3, 1., [0., 1.], rho=0.5),
    'drop_3d_rho_-0.5': _preset('drop_on_substrate', 1e-3, 1., [0., 1.], rho=-0.5),
    # r=30 needs dt below lagged_weight_step_limit, far under 1e-3 at K=4225
    'anisotropic_drop_3d_rho_0.5': _preset('drop_on_substrate', 1e-3, 1., [0., 1.],
                                           {'kind': 'cusp', 'r': 30., 'eps': 0.1}, rho=0.5),
    'anisotropic_drop_3d_rho_-0.5': _preset('drop_on_substrate', 1e-3, 1., [0., 1.],
                                            {'kind': 'cusp', 'r': 30., 'eps': 0.1}, rho=-0.5),
    'cylinder_rho_0': _preset('cylinder_cluster', 1e-3, 1., [0., 1.], rho=0.),
    # started from the cuboid, not from the rho = 0 steady state
    'cylinder_rho_0.5': _preset('cylinder_cluster', 1e-3, 1., [0., 1.], rho=0.5),
    'cylinder_rho_0.75': _preset('cylinder_cluster', 1e-3, 1., [0., 1.], rho=0.75),
}


def get_preset(name):
    """Deep copy of a preset configuration dict"""
    if name not in presets:
        raise UnsupportedConfigurationError("Unknown preset '%s'; choose from %s" % (name, sorted(presets)))
    return copy.deepcopy(presets[name])
