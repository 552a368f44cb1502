"""Independent reference computations used to freeze derived values.

Nothing here calls into the package's products: the Clifford oracle uses a
faithful complex matrix representation, the Haar oracle is plain
quadrature, and the frame oracle evaluates coordinate 1- and 2-forms on the
coordinate vector fields of SU(2).
"""

from __future__ import annotations

import itertools
import math
from functools import reduce

import numpy as np

# ---------------------------------------------------------------------------
# Clifford algebra as matrices
# ---------------------------------------------------------------------------
_SX = np.array([[0, 1], [1, 0]], dtype=complex)
_SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
_SZ = np.array([[1, 0], [0, -1]], dtype=complex)
_ID = np.eye(2, dtype=complex)


def _kron(*ms):
    return reduce(np.kron, ms)


def clifford_generators(signs: list[int]) -> list[np.ndarray]:
    """Matrices with G_a G_b + G_b G_a = 2 signs[a] delta_ab.

    Jordan-Wigner generators of Cl(2k) with 2k > N restricted to the first N,
    which keeps the representation of Cl(N) faithful also for odd N.
    """
    n = len(signs)
    k = n // 2 + 1
    gens = []
    for q in range(k):
        for s in (_SX, _SY):
            gens.append(_kron(*([_SZ] * q + [s] + [_ID] * (k - q - 1))))
    out = []
    for a, sg in enumerate(signs):
        out.append(gens[a] if sg > 0 else 1j * gens[a])
    return out


def multivector_matrix(coeffs: dict[int, complex], signs: list[int]) -> np.ndarray:
    """For a diagonal metric the blade e_{a1}^...^e_{ak} equals the ordered product."""
    gens = clifford_generators(signs)
    size = gens[0].shape[0]
    out = np.zeros((size, size), dtype=complex)
    for mask, c in coeffs.items():
        m = np.eye(size, dtype=complex)
        for a in range(len(signs)):
            if mask >> a & 1:
                m = m @ gens[a]
        out += complex(c) * m
    return out


# ---------------------------------------------------------------------------
# Haar integral on SU(2) by quadrature
# ---------------------------------------------------------------------------
def haar_monomial(a: int, b: int, c: int, d: int, nodes: int = 40) -> complex:
    """Integral of u^a v^b ub^c vb^d over SU(2), normalised to 1.

    u = cos(eta) e^{i alpha}, v = sin(eta) e^{i beta}, measure proportional to
    sin(eta) cos(eta) d eta d alpha d beta on [0, pi/2] x [0, 2 pi)^2. The
    angular part is a trigonometric polynomial, so the equally spaced rule is
    exact; eta uses Gauss-Legendre.
    """
    x, w = np.polynomial.legendre.leggauss(nodes)
    eta = (x + 1) * math.pi / 4
    weta = w * math.pi / 4
    k = max(a, b, c, d) * 2 + 3
    ang = np.arange(k) * 2 * math.pi / k
    total = 0j
    for e, we in zip(eta, weta):
        radial = math.cos(e) ** (a + c) * math.sin(e) ** (b + d) * math.sin(e) * math.cos(e)
        phase = 0j
        for al in ang:
            for be in ang:
                phase += np.exp(1j * ((a - c) * al + (b - d) * be))
        total += we * radial * phase / (k * k)
    # normalisation: integral of sin cos over [0, pi/2] is 1/2
    return complex(total * 2)


# ---------------------------------------------------------------------------
# coordinate calculus on SU(2)
# ---------------------------------------------------------------------------
# coordinates (u, v, ub, vb); a 1-form is four coefficient callables, a vector
# field is its four components; everything is evaluated at sample points.

def theta_coordinates(p):
    """Left-invariant coframe in the coordinate basis (du, dv, dub, dvb) at point p."""
    u, v, ub, vb = p
    tx = (-1j * v, 1j * u, 1j * vb, -1j * ub)
    ty = (-v, u, -vb, ub)
    tz = (2j * ub, 2j * vb, 0, 0)
    return tx, ty, tz


def left_fields(p):
    """Components (X^u, X^v, X^ub, X^vb) of L_x, L_y, L_z at p."""
    u, v, ub, vb = p
    lx = (0.5j * vb, -0.5j * ub, -0.5j * v, 0.5j * u)
    ly = (-0.5 * vb, 0.5 * ub, -0.5 * v, 0.5 * u)
    lz = (-0.5j * u, -0.5j * v, 0.5j * ub, 0.5j * vb)
    return lx, ly, lz


def d_theta_coordinates():
    """Constant 2-forms dtheta^a as {(mu, nu): coefficient} on coordinate pairs."""
    # coordinate index: u=0, v=1, ub=2, vb=3
    dx = {(0, 1): 2j, (3, 2): 2j}
    dy = {(0, 1): 2, (3, 2): -2}
    dz = {(2, 0): 2j, (3, 1): 2j}
    return dx, dy, dz


def eval_two_form(form: dict, X, Y) -> complex:
    return sum(c * (X[m] * Y[n] - X[n] * Y[m]) for (m, n), c in form.items())


def eval_one_form(form, X) -> complex:
    return sum(f * x for f, x in zip(form, X))


def random_su2_points(rng: np.random.Generator, count: int):
    pts = []
    for _ in range(count):
        z = rng.normal(size=4)
        z /= np.linalg.norm(z)
        u, v = complex(z[0], z[1]), complex(z[2], z[3])
        pts.append((u, v, u.conjugate(), v.conjugate()))
    return pts


def frame_d_structure(points) -> np.ndarray:
    """S[c][a][b] = dtheta^c(L_a, L_b), averaged over the sample points.

    Also checks that the values are point independent.
    """
    S = np.zeros((3, 3, 3), dtype=complex)
    first = None
    for p in points:
        L = left_fields(p)
        vals = np.array([[[eval_two_form(f, L[a], L[b]) for b in range(3)] for a in range(3)] for f in d_theta_coordinates()])
        if first is None:
            first = vals
        elif np.max(np.abs(vals - first)) > 1e-12:
            raise AssertionError("structure is not left-invariant")
        S = vals
    return S


def all_exponents(deg: int):
    for e in itertools.product(range(deg + 1), repeat=4):
        if sum(e) <= deg:
            yield e
