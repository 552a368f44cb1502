"""Function algebra and left-invariant frame calculus on S^3 = SU(2).

Functions are polynomials in ``u, v, ub, vb`` (``ub`` is the conjugate of
``u``) modulo ``ub*u + vb*v = 1``. The normal form never stores a monomial
containing both ``u`` and ``ub``; such products are rewritten with
``ub*u -> 1 - vb*v``.

The group element is ``((u, -vb), (v, ub))``. Left-invariant vector fields
generate right translations, right-invariant ones left translations.
Frame forms are multivectors over the coframe ``(theta_x, theta_y,
theta_z)`` whose coefficients are :class:`PolyFun` values; the ladder
coframe ``(theta_-, theta_+, theta_z)`` is reached by change of basis.

Example:
    >>> u = PolyFun.var("u")
    >>> left_derivation("z", u) == u * Num(0, Fraction(-1, 2))
    True
    >>> casimir(u * u) == u * u * (-2)
    True
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterable, Sequence

import numpy as np
from gmpy2 import mpq

from .kahler_atiyah import Metric, Multivector, _bits, dual_contract, reorder_sign, wedge
from .numbers import I, ONE, SQRT2, ZERO, Num, num

Exp = tuple[int, int, int, int]
VARS = ("u", "v", "ub", "vb")
_U, _V, _UB, _VB = range(4)


# ---------------------------------------------------------------------------
# polynomial normal form
# ---------------------------------------------------------------------------
def _reduce_into(out: dict[Exp, Num], e: Exp, c: Num) -> None:
    a, b, cc, d = e
    k = min(a, cc)
    if k == 0:
        if e in out:
            s = out[e] + c
            if s:
                out[e] = s
            else:
                del out[e]
        elif c:
            out[e] = c
        return
    # (u ub)^k = (1 - v vb)^k
    base = (a - k, b, cc - k, d)
    binom = 1
    for r in range(k + 1):
        term = c * (binom if r % 2 == 0 else -binom)
        _reduce_into(out, (base[0], base[1] + r, base[2], base[3] + r), term)
        binom = binom * (k - r) // (r + 1)


class PolyFun:
    """Polynomial on S^3 in normal form with :class:`Num` coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms: dict | None = None):
        out: dict[Exp, Num] = {}
        for e, c in (terms or {}).items():
            _reduce_into(out, tuple(e), num(c))
        self.terms = out

    @classmethod
    def _from_normal(cls, terms: dict[Exp, Num]) -> PolyFun:
        p = cls.__new__(cls)
        p.terms = terms
        return p

    @classmethod
    def const(cls, c=1) -> PolyFun:
        c = num(c)
        return cls._from_normal({(0, 0, 0, 0): c} if c else {})

    @classmethod
    def var(cls, name: str) -> PolyFun:
        key = [0, 0, 0, 0]
        key[VARS.index(name)] = 1
        return cls._from_normal({tuple(key): ONE})

    @classmethod
    def monomial(cls, a: int, b: int, c: int, d: int, coeff=1) -> PolyFun:
        return cls({(a, b, c, d): coeff})

    # -- algebra --------------------------------------------------------
    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, PolyFun):
            return self.terms == other.terms
        if isinstance(other, (int, Fraction, Num)):
            return self.terms == PolyFun.const(other).terms
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __add__(self, other) -> PolyFun:
        if not isinstance(other, PolyFun):
            other = PolyFun.const(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = out.get(e)
            s = c if s is None else s + c
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return PolyFun._from_normal(out)

    __radd__ = __add__

    def __neg__(self) -> PolyFun:
        return PolyFun._from_normal({e: -c for e, c in self.terms.items()})

    def __sub__(self, other) -> PolyFun:
        if not isinstance(other, PolyFun):
            other = PolyFun.const(other)
        return self + (-other)

    def __rsub__(self, other) -> PolyFun:
        return (-self) + other

    def __mul__(self, other) -> PolyFun:
        if not isinstance(other, PolyFun):
            if isinstance(other, Multivector):
                return NotImplemented
            c = num(other)
            if not c:
                return PolyFun()
            return PolyFun._from_normal({e: x * c for e, x in self.terms.items()})
        out: dict[Exp, Num] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                _reduce_into(out, (e1[0] + e2[0], e1[1] + e2[1], e1[2] + e2[2], e1[3] + e2[3]), c1 * c2)
        return PolyFun._from_normal(out)

    def __rmul__(self, other) -> PolyFun:
        return self * other

    def __truediv__(self, c) -> PolyFun:
        return self * num(c).inverse()

    def __pow__(self, k: int) -> PolyFun:
        out = PolyFun.const(1)
        for _ in range(k):
            out = out * self
        return out

    def conjugate(self) -> PolyFun:
        """Complex conjugate: swaps u <-> ub, v <-> vb and conjugates coefficients."""
        return PolyFun({(e[2], e[3], e[0], e[1]): c.conjugate() for e, c in self.terms.items()})

    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=0)

    def leading(self) -> tuple[Exp, Num]:
        e = max(self.terms)
        return e, self.terms[e]

    def evaluate(self, u, v):
        """Numerical evaluation at arrays of (u, v) on the sphere."""
        u = np.asarray(u, dtype=complex)
        v = np.asarray(v, dtype=complex)
        ub, vb = np.conj(u), np.conj(v)
        acc = np.zeros(np.broadcast(u, v).shape, dtype=complex)
        for (a, b, c, d), k in self.terms.items():
            acc = acc + complex(k) * u**a * v**b * ub**c * vb**d
        return acc

    def __repr__(self) -> str:
        return f"PolyFun({self})"

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e in sorted(self.terms, reverse=True):
            mono = "*".join(f"{VARS[k]}^{p}" if p > 1 else VARS[k] for k, p in enumerate(e) if p)
            c = str(self.terms[e])
            if not mono:
                parts.append(c)
            elif c == "1":
                parts.append(mono)
            elif c == "-1":
                parts.append("-" + mono)
            else:
                parts.append(f"({c})*{mono}")
        return " + ".join(parts)


def weight(e: Exp) -> tuple[int, int]:
    """Doubled (m, n) weights of a monomial under (R_z, L_z)."""
    a, b, c, d = e
    return b + c - a - d, c + d - a - b


# ---------------------------------------------------------------------------
# first-order operators
# ---------------------------------------------------------------------------
FieldTerms = tuple[tuple[Num, int, int], ...]  # (coefficient, multiplied var, differentiated var)


def apply_field(terms: FieldTerms, f: PolyFun) -> PolyFun:
    out: dict[Exp, Num] = {}
    for e, c in f.terms.items():
        for k, mul, der in terms:
            p = e[der]
            if not p:
                continue
            e2 = list(e)
            e2[der] -= 1
            e2[mul] += 1
            _reduce_into(out, (e2[0], e2[1], e2[2], e2[3]), c * k * p)
    return PolyFun._from_normal(out)


def _diag(f: PolyFun, scale: Num, weights: tuple[int, int, int, int]) -> PolyFun:
    out = {}
    for e, c in f.terms.items():
        w = sum(wi * ei for wi, ei in zip(weights, e))
        if w:
            out[e] = c * scale * w
    return PolyFun._from_normal(out)


_HI = Num(0, mpq(1, 2))
_HALF = Num(mpq(1, 2))
_I_OVER_R2 = Num(0, 0, 0, mpq(1, 2))

L_X: FieldTerms = ((_HI, _VB, _U), (-_HI, _V, _UB), (-_HI, _UB, _V), (_HI, _U, _VB))
L_Y: FieldTerms = ((-_HALF, _VB, _U), (-_HALF, _V, _UB), (_HALF, _UB, _V), (_HALF, _U, _VB))
L_MINUS: FieldTerms = ((_I_OVER_R2, _VB, _U), (-_I_OVER_R2, _UB, _V))
L_PLUS: FieldTerms = ((_I_OVER_R2, _U, _VB), (-_I_OVER_R2, _V, _UB))
# sqrt(2) L_- and sqrt(2) L_+: Gaussian coefficients only
ELL_MINUS: FieldTerms = ((I, _VB, _U), (-I, _UB, _V))
ELL_PLUS: FieldTerms = ((I, _U, _VB), (-I, _V, _UB))
# right-invariant fields from the left action of exp(-i t sigma_a / 2)
R_X: FieldTerms = ((-_HI, _V, _U), (-_HI, _U, _V), (_HI, _VB, _UB), (_HI, _UB, _VB))
R_Y: FieldTerms = ((-_HALF, _V, _U), (_HALF, _U, _V), (-_HALF, _VB, _UB), (_HALF, _UB, _VB))
# raising ladders with the constant factor dropped (integer coefficients)
_RAISE_N: FieldTerms = ((ONE, _VB, _U), (-ONE, _UB, _V))  # proportional to L_-
_RAISE_M: FieldTerms = ((ONE, _V, _U), (-ONE, _UB, _VB))  # proportional to R_x + i R_y


def lz(f: PolyFun) -> PolyFun:
    return _diag(f, Num(0, mpq(-1, 2)), (1, 1, -1, -1))


def rz(f: PolyFun) -> PolyFun:
    return _diag(f, Num(0, mpq(-1, 2)), (1, -1, -1, 1))


def right_derivation_z(f: PolyFun) -> PolyFun:
    """R_z = -(i/2)(u d_u - ub d_ub - v d_v + vb d_vb)."""
    return rz(f)


def right_derivation(which: str, f: PolyFun) -> PolyFun:
    if which == "z":
        return rz(f)
    return apply_field({"x": R_X, "y": R_Y}[which], f)


_MINUS_NAMES = ("-", "−", "minus")
_PLUS_NAMES = ("+", "plus")


def left_derivation(which: str, f: PolyFun) -> PolyFun:
    """Apply L_x, L_y, L_z, L_+ or L_- to a polynomial."""
    if which == "z":
        return lz(f)
    if which == "x":
        return apply_field(L_X, f)
    if which == "y":
        return apply_field(L_Y, f)
    if which in _PLUS_NAMES:
        return apply_field(L_PLUS, f)
    if which in _MINUS_NAMES:
        return apply_field(L_MINUS, f)
    raise ValueError(f"unknown direction {which!r}")


def ell_minus(f: PolyFun) -> PolyFun:
    """sqrt(2) L_-, which keeps Gaussian coefficients Gaussian."""
    return apply_field(ELL_MINUS, f)


def ell_plus(f: PolyFun) -> PolyFun:
    """sqrt(2) L_+."""
    return apply_field(ELL_PLUS, f)


def casimir(f: PolyFun) -> PolyFun:
    """L^2 = sum_a L_a L_a."""
    out = PolyFun()
    for a in "xyz":
        out = out + left_derivation(a, left_derivation(a, f))
    return out


# ---------------------------------------------------------------------------
# Wigner functions
# ---------------------------------------------------------------------------
def _half(x) -> Fraction:
    q = Fraction(x)
    if (2 * q).denominator != 1:
        raise ValueError(f"{x} is not a half-integer")
    return q


@dataclass(frozen=True, order=True)
class WignerLabel:
    j: Fraction
    m: Fraction
    n: Fraction

    def __post_init__(self):
        j, m, n = (_half(x) for x in (self.j, self.m, self.n))
        object.__setattr__(self, "j", j)
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "n", n)
        if j < 0 or abs(m) > j or abs(n) > j or (j - m).denominator != 1 or (j - n).denominator != 1:
            raise ValueError(f"inadmissible Wigner label (j, m, n) = ({j}, {m}, {n})")


def half_range(j) -> list[Fraction]:
    j = _half(j)
    return [Fraction(-j + k) for k in range(int(2 * j) + 1)]


def j_values(j_max, step=Fraction(1, 2)) -> list[Fraction]:
    j_max = _half(j_max)
    out, j = [], Fraction(0)
    while j <= j_max:
        out.append(j)
        j += Fraction(step)
    return out


@lru_cache(maxsize=None)
def _wigner(j2: int, m2: int, n2: int) -> PolyFun:
    f = PolyFun.monomial(j2, 0, 0, 0)
    for _ in range((n2 + j2) // 2):
        f = apply_field(_RAISE_N, f)
    for _ in range((m2 + j2) // 2):
        f = apply_field(_RAISE_M, f)
    _, lead = f.leading()
    return f * lead.inverse()


def wigner(j, m=None, n=None) -> PolyFun:
    """D^j_{mn}: joint eigenfunction of L^2, L_z (eigenvalue i n) and R_z (i m).

    Built by raising the corner u^{2j} (m = n = -j) along both ladders and
    scaling the lexicographically largest monomial to coefficient 1.
    """
    label = j if isinstance(j, WignerLabel) else WignerLabel(j, m, n)
    return _wigner(int(2 * label.j), int(2 * label.m), int(2 * label.n))


def wigner_labels(j) -> list[WignerLabel]:
    return [WignerLabel(j, m, n) for m in half_range(j) for n in half_range(j)]


def wigner_coordinates(f: PolyFun, j) -> dict[tuple[Fraction, Fraction], Num]:
    """Coefficients of f along the D^j_{mn}; raises if f is not in W_j."""
    j = _half(j)
    groups: dict[tuple[int, int], dict[Exp, Num]] = {}
    for e, c in f.terms.items():
        groups.setdefault(weight(e), {})[e] = c
    out = {}
    for (m2, n2), terms in groups.items():
        m, n = Fraction(m2, 2), Fraction(n2, 2)
        try:
            d = wigner(j, m, n)
        except ValueError:
            raise ValueError(f"component of weight ({m}, {n}) is not in W_{j}") from None
        e0, c0 = d.leading()
        coeff = terms.get(e0, ZERO) * c0.inverse()
        if PolyFun._from_normal(terms) != d * coeff:
            raise ValueError(f"component of weight ({m}, {n}) is not in W_{j}")
        out[(m, n)] = coeff
    return out


# ---------------------------------------------------------------------------
# Haar integral
# ---------------------------------------------------------------------------
def monomial_integral(a: int, b: int, c: int, d: int) -> Fraction:
    if a != c or b != d:
        return Fraction(0)
    return Fraction(math.factorial(a) * math.factorial(b), math.factorial(a + b + 1))


def peter_weyl_integral(f: PolyFun) -> Num:
    """Normalized Haar integral of a polynomial."""
    acc = ZERO
    for e, c in f.terms.items():
        w = monomial_integral(*e)
        if w:
            acc = acc + c * w
    return acc


def inner(f: PolyFun, g: PolyFun) -> Num:
    """<f|g> = integral of conj(f) g."""
    return peter_weyl_integral(f.conjugate() * g)


def haar_quadrature(f: PolyFun, order: int | None = None) -> complex:
    """Numerical Haar integral over Hopf coordinates.

    With u = cos(t/2) e^{i a}, v = sin(t/2) e^{i b}, the Haar measure makes
    |u|^2 uniform on [0, 1] and both phases uniform.
    """
    deg = max(f.degree(), 1)
    order = order or deg + 2
    nodes, wts = np.polynomial.legendre.leggauss(order)
    eta = 0.5 * (nodes + 1.0)
    wts = 0.5 * wts
    nphi = 2 * deg + 3
    phases = 2 * np.pi * np.arange(nphi) / nphi
    E, A, B = np.meshgrid(eta, phases, phases, indexing="ij")
    W = np.broadcast_to(wts[:, None, None], E.shape) / nphi**2
    u = np.sqrt(E) * np.exp(1j * A)
    v = np.sqrt(1.0 - E) * np.exp(1j * B)
    return complex(np.sum(W * f.evaluate(u, v)))


# ---------------------------------------------------------------------------
# left-invariant frame calculus
# ---------------------------------------------------------------------------
CK_METRIC = Metric.euclidean(3)
LADDER_METRIC = Metric(((0, 1, 0), (1, 0, 0), (0, 0, 1)))
CARTESIAN = "cartesian"
LADDER = "ladder"
X, Y, Z = 0, 1, 2


def levi_civita_symbol(a: int, b: int, c: int) -> int:
    if len({a, b, c}) < 3:
        return 0
    return 1 if (a, b, c) in ((0, 1, 2), (1, 2, 0), (2, 0, 1)) else -1


def form(coeffs: dict[int, PolyFun | int | Num], dim: int = 3) -> Multivector:
    """Frame form from mask -> coefficient, constants promoted to PolyFun."""
    return Multivector(dim, {m: c if isinstance(c, PolyFun) else PolyFun.const(c) for m, c in coeffs.items()})


def theta(which: str) -> Multivector:
    """A single coframe element."""
    if which in ("x", "y", "z"):
        return form({1 << "xyz".index(which): 1})
    if which in _MINUS_NAMES:
        return form({1: 1})
    if which in _PLUS_NAMES:
        return form({2: 1})
    raise ValueError(f"unknown coframe element {which!r}")


def const_form(m: Multivector) -> Multivector:
    return form({k: PolyFun.const(c) for k, c in m.coeffs.items()}, m.dim)


def substitute(phi: Multivector, images: Sequence[Multivector]) -> Multivector:
    """Replace generator k by images[k] (constant-coefficient 1-forms)."""
    out = Multivector(phi.dim)
    cache: dict[int, Multivector] = {}
    for mask, c in phi.coeffs.items():
        if mask not in cache:
            acc = Multivector.scalar(phi.dim, 1)
            for b in _bits(mask):
                acc = wedge(acc, images[b])
            cache[mask] = acc
        out = out + cache[mask].map_coeffs(lambda k, c=c: c * k)
    return out


_R = SQRT2.inverse()
# ladder generators (theta_-, theta_+, theta_z) written in the Cartesian coframe
LADDER_IN_CARTESIAN = (
    Multivector.vector(3, [_R, I * _R, ZERO]),
    Multivector.vector(3, [_R, -I * _R, ZERO]),
    Multivector.vector(3, [ZERO, ZERO, ONE]),
)
CARTESIAN_IN_LADDER = (
    Multivector.vector(3, [_R, _R, ZERO]),
    Multivector.vector(3, [-I * _R, I * _R, ZERO]),
    Multivector.vector(3, [ZERO, ZERO, ONE]),
)


def to_cartesian(phi: Multivector, frame: str) -> Multivector:
    return phi if frame == CARTESIAN else substitute(phi, LADDER_IN_CARTESIAN)


def from_cartesian(phi: Multivector, frame: str) -> Multivector:
    return phi if frame == CARTESIAN else substitute(phi, CARTESIAN_IN_LADDER)


def _d_generator(a: int) -> Multivector:
    # d theta^a = -(1/2) eps_{bc}^a theta^b ^ theta^c
    out = {}
    for b in range(3):
        for c in range(b + 1, 3):
            s = levi_civita_symbol(b, c, a)
            if s:
                out[(1 << b) | (1 << c)] = Num(-s)
    return Multivector(3, out)


@lru_cache(maxsize=None)
def _d_blade(mask: int) -> Multivector:
    # graded Leibniz on a constant blade
    out = Multivector(3)
    bits = list(_bits(mask))
    for pos, a in enumerate(bits):
        left = mask & ((1 << a) - 1)
        right = mask & ~((1 << (a + 1)) - 1)
        piece = wedge(wedge(Multivector.blade(3, left), _d_generator(a)), Multivector.blade(3, right))
        out = out + (piece if pos % 2 == 0 else -piece)
    return out


def frame_d(phi: Multivector, frame: str = CARTESIAN) -> Multivector:
    """Exterior derivative of a frame form.

    d(f theta^I) = sum_a (L_a f) theta^a ^ theta^I + f d(theta^I), with the
    structure equations d theta^a = -(1/2) eps_{bc}^a theta^b ^ theta^c.
    """
    phi = to_cartesian(phi, frame)
    out: dict[int, PolyFun] = {}
    for mask, f in phi.coeffs.items():
        for a in range(3):
            if mask >> a & 1:
                continue
            df = left_derivation("xyz"[a], f)
            if df:
                key = mask | (1 << a)
                term = df if reorder_sign(1 << a, mask) == 1 else -df
                out[key] = out[key] + term if key in out else term
        for m2, k in _d_blade(mask).coeffs.items():
            term = f * k
            out[m2] = out[m2] + term if m2 in out else term
    return from_cartesian(Multivector(3, out), frame)


def _direction(a) -> int | str:
    if isinstance(a, int):
        return a
    if a in ("x", "y", "z"):
        return "xyz".index(a)
    if a in _MINUS_NAMES:
        return "-"
    if a in _PLUS_NAMES:
        return "+"
    raise ValueError(f"unknown direction {a!r}")


def _nabla_generator(a: int, b: int) -> Multivector:
    # nabla_a theta^b = (1/2) f_{sa}^b theta^s with f_{sa}^b = eps_{sab}
    out = {}
    for s in range(3):
        k = levi_civita_symbol(s, a, b)
        if k:
            out[1 << s] = Num(mpq(k, 2))
    return Multivector(3, out)


@lru_cache(maxsize=None)
def _nabla_blade(a: int, mask: int) -> Multivector:
    out = Multivector(3)
    for b in _bits(mask):
        left = mask & ((1 << b) - 1)
        right = mask & ~((1 << (b + 1)) - 1)
        piece = wedge(wedge(Multivector.blade(3, left), _nabla_generator(a, b)), Multivector.blade(3, right))
        out = out + piece
    return out


def _cartesian_derivation(a: int, phi: Multivector, coeff_op: Callable, blade_op: Callable) -> Multivector:
    out: dict[int, PolyFun] = {}
    for mask, f in phi.coeffs.items():
        df = coeff_op("xyz"[a], f)
        if df:
            out[mask] = out[mask] + df if mask in out else df
        for m2, k in blade_op(a, mask).coeffs.items():
            term = f * k
            out[m2] = out[m2] + term if m2 in out else term
    return Multivector(3, out)


def _ladder_combination(a, phi: Multivector, op: Callable[[int, Multivector], Multivector]) -> Multivector:
    d = _direction(a)
    if isinstance(d, int):
        return op(d, phi)
    sgn = -1 if d == "-" else 1
    # L_- = (L_x - i L_y)/sqrt 2, L_+ = (L_x + i L_y)/sqrt 2
    return (op(X, phi) + op(Y, phi).map_coeffs(lambda c: c * (I * sgn))).map_coeffs(lambda c: c * _R)


def levi_civita(a, phi: Multivector, frame: str = CARTESIAN) -> Multivector:
    """Covariant derivative along L_a of a frame form (Leibniz over wedge)."""
    cart = to_cartesian(phi, frame)
    out = _ladder_combination(a, cart, lambda k, p: _cartesian_derivation(k, p, left_derivation, _nabla_blade))
    return from_cartesian(out, frame)


def _lie_generator(a: int, b: int) -> Multivector:
    # L_a theta^b = -f_{ac}^b theta^c
    out = {}
    for c in range(3):
        k = levi_civita_symbol(a, c, b)
        if k:
            out[1 << c] = Num(-k)
    return Multivector(3, out)


@lru_cache(maxsize=None)
def _lie_blade(a: int, mask: int) -> Multivector:
    out = Multivector(3)
    for b in _bits(mask):
        left = mask & ((1 << b) - 1)
        right = mask & ~((1 << (b + 1)) - 1)
        out = out + wedge(wedge(Multivector.blade(3, left), _lie_generator(a, b)), Multivector.blade(3, right))
    return out


def lie_derivative(a, phi: Multivector, frame: str = CARTESIAN) -> Multivector:
    """Lie derivative along the left-invariant field L_a."""
    cart = to_cartesian(phi, frame)
    out = _ladder_combination(a, cart, lambda k, p: _cartesian_derivation(k, p, left_derivation, _lie_blade))
    return from_cartesian(out, frame)


def interior(a, phi: Multivector, frame: str = CARTESIAN) -> Multivector:
    """i_{L_a} phi using the duality theta^b(L_a) = delta."""
    d = _direction(a)
    if frame == LADDER:
        bit = {"-": 0, "+": 1, Z: 2}.get(d)
        if bit is None:
            raise ValueError("ladder frame directions are -, + and z")
        return dual_contract(bit, phi)
    if not isinstance(d, int):
        cart = interior(X, phi).map_coeffs(lambda c: c * _R)
        y = interior(Y, phi).map_coeffs(lambda c: c * (I * (-1 if d == "-" else 1) * _R))
        return cart + y
    return dual_contract(d, phi)


def kahler_operator(phi: Multivector) -> Multivector:
    """theta^a v nabla_a on Cartesian frame forms (the Hodge-de Rham Dirac operator)."""
    from .kahler_atiyah import clifford

    out = Multivector(3)
    for a in range(3):
        out = out + clifford(theta("xyz"[a]), levi_civita(a, phi), CK_METRIC)
    return out


def frame_hodge(phi: Multivector, orientation=1) -> Multivector:
    from .kahler_atiyah import hodge_star

    return hodge_star(phi, CK_METRIC, orientation)


def tau() -> Multivector:
    return form({7: 1})


def random_polyfun(rng, max_degree: int = 3, terms: int = 4, gaussian: bool = True) -> PolyFun:
    out = PolyFun()
    for _ in range(terms):
        e = [0, 0, 0, 0]
        for _ in range(rng.randint(0, max_degree)):
            e[rng.randrange(4)] += 1
        c = Num(rng.randint(-3, 3), rng.randint(-3, 3))
        out = out + PolyFun({tuple(e): c})
    return out


def monomials_up_to(degree: int) -> Iterable[PolyFun]:
    for a in range(degree + 1):
        for b in range(degree + 1 - a):
            for c in range(degree + 1 - a - b):
                for d in range(degree + 1 - a - b - c):
                    if a and c:
                        continue
                    yield PolyFun._from_normal({(a, b, c, d): ONE})
