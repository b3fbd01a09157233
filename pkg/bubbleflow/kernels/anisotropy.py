"""Surface energy densities: isotropic sigma_i |p| and the anisotropic family
gamma(p) = (sum_l gamma_l(p)^r)^(1/r) with gamma_l(p) = sqrt(p . G_l p)"""
import math

import numpy as np

from bubbleflow.kernels.error import DegenerateSimplexError

__all__ = ['Isotropic', 'Anisotropy', 'make_cusp_anisotropy', 'make_rotation_anisotropy_2d',
           'energy_model_from_dict', 'gtilde_tangent_basis', 'anisotropic_element_stiffness']

ratio_floor = 1e-300
symmetry_tol = 1e-14


class Isotropic(object):
    """Isotropic energy sigma_i |p|.

    :param sigma: Optional list of per-surface densities overriding the patch values
    """
    kind = 'isotropic'
    is_isotropic = True

    def __init__(self, sigma=None):
        self.sigma = None if sigma is None else [float(s) for s in sigma]
        if self.sigma is not None and any(s <= 0 for s in self.sigma):
            raise ValueError("Surface energy densities must be positive")

    def surface_sigma(self, patch):
        return patch.sigma if self.sigma is None else self.sigma[patch.surface_id]

    def to_dict(self):
        d = {'kind': 'isotropic'}
        if self.sigma is not None:
            d['sigma'] = self.sigma
        return d

    def __repr__(self):
        return "Isotropic(sigma=%s)" % self.sigma


class Anisotropy(object):
    """Anisotropy built from L symmetric positive definite matrices.

    :param matrices: Sequence of L matrices G_l of shape (d, d)
    :param r: Exponent r >= 1
    :param description: Dict describing how the anisotropy was built (kind and parameters)
    """
    is_isotropic = False

    def __init__(self, matrices, r=1., description=None):
        G = np.array(matrices, dtype=np.float64)
        if G.ndim == 2:
            G = G[None]
        if G.ndim != 3 or G.shape[1] != G.shape[2] or G.shape[1] not in (2, 3):
            raise ValueError("Anisotropy matrices must have shape (L, d, d) with d in (2, 3)")
        scale = np.abs(G).max(axis=(1, 2))
        if np.any(np.abs(G - G.transpose(0, 2, 1)).max(axis=(1, 2)) > symmetry_tol * scale):
            raise ValueError("Anisotropy matrices must be symmetric")
        if np.any(np.linalg.eigvalsh(G)[:, 0] <= 0):
            raise ValueError("Anisotropy matrices must be positive definite")
        if r < 1:
            raise ValueError("Anisotropy exponent r must be >= 1, got %g" % r)
        self.matrices = G
        self.r = float(r)
        self.dim = G.shape[1]
        self.gtilde = np.linalg.det(G)[:, None, None] ** (1. / (self.dim - 1)) * np.linalg.inv(G)
        self.description = description or {'kind': 'matrices'}

    @property
    def kind(self):
        return self.description['kind']

    @property
    def L(self):
        return self.matrices.shape[0]

    def gamma_l(self, p):
        """gamma_l(p) for all l, shape (..., L)"""
        p = np.asarray(p, dtype=np.float64)
        return np.sqrt(np.einsum('...i,lij,...j->...l', p, self.matrices, p))

    def _check(self, p):
        p = np.asarray(p, dtype=np.float64)
        if np.any(np.linalg.norm(p, axis=-1) == 0):
            raise ValueError("gamma is undefined for the zero vector")
        return p

    def gamma(self, p):
        p = self._check(p)
        gl = self.gamma_l(p)
        top = gl.max(axis=-1)
        ratio = np.maximum(gl / top[..., None], ratio_floor)
        return top * np.sum(ratio ** self.r, axis=-1) ** (1. / self.r)

    def weights(self, p):
        """Lagged weights (gamma_l(p) / gamma(p))^(r-1), shape (..., L); zero-homogeneous in p"""
        p = self._check(p)
        p = p / np.linalg.norm(p, axis=-1)[..., None]
        if self.r == 1.:
            return np.ones(p.shape[:-1] + (self.L,))
        ratio = np.maximum(self.gamma_l(p) / self.gamma(p)[..., None], ratio_floor)
        return ratio ** (self.r - 1.)

    def gamma_prime(self, p):
        p = self._check(p)
        w = self.weights(p)
        gl = self.gamma_l(p)
        Gp = np.einsum('lij,...j->...li', self.matrices, p)
        return np.einsum('...l,...li->...i', w / gl, Gp)

    def to_dict(self):
        d = dict(self.description)
        if d['kind'] == 'matrices':
            d['matrices'] = self.matrices
            d['r'] = self.r
        return d

    def __repr__(self):
        return "Anisotropy(%s)" % ", ".join("%s=%s" % kv for kv in sorted(self.description.items()))


def make_cusp_anisotropy(d, r=1., eps=0.1):
    """G_l = (1 - eps^2) e_l e_l^T + eps^2 Id for l = 1..d; a smooth regularisation of l^1-type cusps"""
    if not 0 < eps < 1:
        raise ValueError("eps must lie in (0, 1), got %g" % eps)
    eye = np.eye(d)
    matrices = [(1 - eps ** 2) * np.outer(eye[l], eye[l]) + eps ** 2 * eye for l in range(d)]
    return Anisotropy(matrices, r, {'kind': 'cusp', 'r': float(r), 'eps': float(eps)})


def _rotation(theta):
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[c, s], [-s, c]])


def make_rotation_anisotropy_2d(L, eps=0.01):
    """G_l = R(-theta_l) diag(1, eps^2) R(theta_l), theta_l = (l - 1) pi / L, with r = 1"""
    if not 0 < eps < 1:
        raise ValueError("eps must lie in (0, 1), got %g" % eps)
    if L < 1:
        raise ValueError("L must be >= 1, got %d" % L)
    D = np.diag([1., eps ** 2])
    matrices = [_rotation(-l * math.pi / L).dot(D).dot(_rotation(l * math.pi / L)) for l in range(L)]
    return Anisotropy(matrices, 1., {'kind': 'rotation2d', 'L': int(L), 'eps': float(eps)})


def energy_model_from_dict(d, dim):
    """Energy model from its JSON description"""
    kind = d.get('kind', 'isotropic')
    if kind == 'isotropic':
        return Isotropic(d.get('sigma'))
    elif kind == 'cusp':
        return make_cusp_anisotropy(dim, d.get('r', 1.), d.get('eps', 0.1))
    elif kind == 'rotation2d':
        if dim != 2:
            raise ValueError("The rotation anisotropy is two-dimensional")
        return make_rotation_anisotropy_2d(int(d.get('L', 2)), d.get('eps', 0.01))
    elif kind == 'matrices':
        if 'matrices' not in d:
            raise ValueError("Energy kind 'matrices' needs a 'matrices' entry")
        model = Anisotropy(d['matrices'], d.get('r', 1.))
        if model.dim != dim:
            raise ValueError("Anisotropy matrices are %dD, the cluster is %dD" % (model.dim, dim))
        return model
    raise ValueError("Unknown energy kind '%s'" % kind)


def gtilde_tangent_basis(coords, gtilde):
    """Tangent vectors of the element(s) that are orthonormal in the gtilde inner product.

    Gram-Schmidt over the element edges from vertex 0, starting with the
    longer edge (the first on ties). Returns shape (..., d-1, d).
    """
    coords = np.asarray(coords, dtype=np.float64)
    gtilde = np.asarray(gtilde, dtype=np.float64)
    edges = coords[..., 1:, :] - coords[..., :1, :]

    def gnorm(v):
        return np.sqrt(np.einsum('...i,ij,...j->...', v, gtilde, v))

    if coords.shape[-1] == 2:
        n = gnorm(edges[..., 0, :])
        if np.any(n == 0):
            raise DegenerateSimplexError()
        return edges / n[..., None, None]
    swap = np.linalg.norm(edges[..., 1, :], axis=-1) > np.linalg.norm(edges[..., 0, :], axis=-1)
    first = np.where(swap[..., None], edges[..., 1, :], edges[..., 0, :])
    other = np.where(swap[..., None], edges[..., 0, :], edges[..., 1, :])
    n1 = gnorm(first)
    if np.any(n1 == 0):
        raise DegenerateSimplexError()
    t1 = first / n1[..., None]
    t2 = other - np.einsum('...i,ij,...j->...', other, gtilde, t1)[..., None] * t1
    n2 = gnorm(t2)
    if np.any(n2 <= 1e-14 * n1):
        raise DegenerateSimplexError()
    return np.stack([t1, t2 / n2[..., None]], axis=-2)


def anisotropic_element_stiffness(geometry, nu_iterate, anisotropy):
    """Element blocks of the anisotropic vector stiffness on the old elements.

    block(a, b) = sum_l w_l gamma_l(nu^m) |sigma^m| sum_j (grad phi_a . t_j^l)(grad phi_b . t_j^l) Gtilde_l

    :param geometry: :class:`ElementGeometry` of the old elements
    :param nu_iterate: Normals of the elements of the current Picard iterate (any positive
        scaling), shape (J, d); only the weights w_l depend on them
    :returns: Array of shape (J, d, d, d, d) indexed [element, a, b, component, component]
    """
    grads = geometry.basis_gradients
    if np.any(np.linalg.norm(nu_iterate, axis=-1) == 0):
        raise DegenerateSimplexError()
    w = anisotropy.weights(nu_iterate)
    gl = anisotropy.gamma_l(geometry.unit_normal)
    coef = w * gl * geometry.measure[:, None]
    J, d = geometry.coords.shape[0], geometry.dim
    out = np.zeros((J, d, d, d, d))
    for l in range(anisotropy.L):
        t = gtilde_tangent_basis(geometry.coords, anisotropy.gtilde[l])
        proj = np.einsum('jak,jtk->jat', grads, t)
        scalar = np.einsum('j,jat,jbt->jab', coef[:, l], proj, proj)
        out += np.einsum('jab,cd->jabcd', scalar, anisotropy.gtilde[l])
    return out
