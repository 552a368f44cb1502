"""Pin elements, idempotents, minimal left ideals and their gamma matrices.

An algebraic spinor module is ``I_P = {psi : psi v P = psi}`` for an
idempotent ``P``. Left Clifford multiplication by the frame generators on a
basis of ``I_P`` gives gamma matrices; the matrix convention throughout is
``gamma[a][row][col]`` = coefficient of ``w_row`` in ``e_a v w_col``.

Example:
    >>> from kahler_dirac.kahler_atiyah import Metric, Multivector
    >>> g = Metric.euclidean(3)
    >>> tau = Multivector.blade(3, 7)
    >>> P = (Multivector.scalar(3, 1) - tau * I) * HALF
    >>> is_idempotent(P, g), ideal_basis(P, g).rank
    (True, 4)
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Callable, Iterable, Sequence

from . import exact_linalg as la
from .kahler_atiyah import Metric, Multivector, clifford, clifford_chain
from .numbers import ONE, ZERO, Num

Matrix = list[list[Num]]


# ---------------------------------------------------------------------------
# Pin group
# ---------------------------------------------------------------------------
def _vector_components(v: Multivector) -> list[Num]:
    if any(mask & (mask - 1) for mask in v.coeffs) or 0 in v.coeffs:
        raise ValueError("expected a grade-1 multivector")
    return [v.coeffs.get(1 << a, ZERO) for a in range(v.dim)]


def quadratic(v: Multivector, g: Metric) -> Num:
    x = _vector_components(v)
    return g.bilinear(x, x)


@dataclass(frozen=True)
class PinElement:
    """Ordered Clifford product of unit vectors."""

    factors: tuple[Multivector, ...]
    metric: Metric
    product: Multivector = field(init=False, compare=False)

    def __post_init__(self):
        if not self.factors:
            raise ValueError("a Pin element needs at least one factor")
        for v in self.factors:
            q = quadratic(v, self.metric)
            if q != ONE and q != -ONE:
                raise ValueError(f"factor {v} has g(v,v) = {q}, expected +1 or -1")
        object.__setattr__(self, "product", clifford_chain(self.metric, *self.factors))

    @property
    def is_even(self) -> bool:
        """Membership in Spin."""
        return len(self.factors) % 2 == 0

    def inverse(self) -> Multivector:
        # (v1 ... vk)^-1 = vk^-1 ... v1^-1 and v^-1 = v / g(v,v)
        invs = [v * quadratic(v, self.metric).inverse() for v in reversed(self.factors)]
        return clifford_chain(self.metric, *invs)


def adjoint_reflect(v: Multivector, x: Multivector, g: Metric) -> Multivector:
    """-v x v^{-1}, the reflection of x in the hyperplane orthogonal to v."""
    q = quadratic(v, g)
    if not q:
        raise ValueError("cannot reflect in a null vector")
    return -clifford_chain(g, v, x, v * q.inverse())


def adjoint(eps: PinElement, x: Multivector) -> Multivector:
    """Twisted adjoint action of a Pin element: composition of reflections."""
    out = x
    for v in reversed(eps.factors):
        out = adjoint_reflect(v, out, eps.metric)
    return out


# ---------------------------------------------------------------------------
# idempotents and ideals
# ---------------------------------------------------------------------------
def is_idempotent(P: Multivector, g: Metric) -> bool:
    return clifford(P, P, g) == P


def _flatten(m: Multivector) -> list:
    return [m.coeffs.get(k, ZERO) for k in range(1 << m.dim)]


def right_multiplication_matrix(P: Multivector, g: Metric) -> Matrix:
    """Column k holds blade_k v P."""
    n = 1 << P.dim
    cols = [_flatten(clifford(Multivector.blade(P.dim, k), P, g)) for k in range(n)]
    return la.transpose(cols)


@dataclass(frozen=True)
class IdempotentModule:
    P: Multivector
    metric: Metric
    basis: tuple[Multivector, ...]
    gamma: tuple[Matrix, ...] = field(init=False, compare=False)
    _pivots: tuple[int, ...] = field(init=False, compare=False, repr=False)
    _pivot_inverse: Matrix = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        cols = [_flatten(w) for w in self.basis]
        rows = la.transpose(cols)
        _, piv = la.rref(cols)  # pivots of the transposed system are blade indices
        if len(piv) != len(self.basis):
            raise ValueError("module basis is linearly dependent")
        sub = [rows[p] for p in piv]
        object.__setattr__(self, "_pivots", tuple(piv))
        object.__setattr__(self, "_pivot_inverse", la.inverse(sub))
        object.__setattr__(self, "gamma", tuple(gamma_rep(self, self.metric)))

    @property
    def rank(self) -> int:
        return len(self.basis)

    def coordinates(self, psi: Multivector) -> list:
        """Coordinates of psi along the basis; coefficients may be any ring.

        Raises ValueError when psi is not in the span.
        """
        picked = [psi.coeffs.get(p, ZERO) for p in self._pivots]
        coords = []
        for row in self._pivot_inverse:
            acc = None
            for k, x in zip(row, picked):
                if not k or not x:
                    continue
                term = x * k
                acc = term if acc is None else acc + term
            coords.append(acc if acc is not None else ZERO)
        if self.combine(coords) != psi:
            raise ValueError("element does not lie in the module")
        return coords

    def combine(self, coords: Sequence) -> Multivector:
        out = Multivector(self.P.dim)
        for c, w in zip(coords, self.basis):
            if not c:
                continue
            out = out + w.map_coeffs(lambda k, c=c: c * k)
        return out


def _fixed_space(P: Multivector, g: Metric) -> Matrix:
    R = right_multiplication_matrix(P, g)
    n = len(R)
    shifted = [[R[i][k] - (ONE if i == k else ZERO) for k in range(n)] for i in range(n)]
    return la.nullspace(shifted)


def ideal_basis(P: Multivector, g: Metric, basis: Sequence[Multivector] | None = None) -> IdempotentModule:
    """Module I_P with an echelon basis, or with a caller-supplied basis.

    The echelon basis is the reduced row echelon form of the fixed space of
    psi -> psi v P, pivots taken in canonical blade order. A supplied basis
    is checked to span exactly the same space.
    """
    if not is_idempotent(P, g):
        raise ValueError("P is not idempotent")
    fixed = _fixed_space(P, g)
    red, piv = la.rref(fixed)
    echelon = [Multivector(P.dim, dict(enumerate(red[r]))) for r in range(len(piv))]
    if basis is None:
        return IdempotentModule(P, g, tuple(echelon))
    basis = tuple(basis)
    for w in basis:
        if clifford(w, P, g) != w:
            raise ValueError(f"{w} is not fixed by right multiplication with P")
    if len(basis) != len(echelon) or la.rank([_flatten(w) for w in basis]) != len(echelon):
        raise ValueError("supplied basis does not span I_P")
    return IdempotentModule(P, g, basis)


def gamma_rep(mod: IdempotentModule, g: Metric) -> list[Matrix]:
    out = []
    for a in range(mod.P.dim):
        gen = Multivector.blade(mod.P.dim, 1 << a)
        cols = []
        for w in mod.basis:
            try:
                cols.append(mod.coordinates(clifford(gen, w, g)))
            except ValueError:
                raise ValueError("not a left ideal") from None
        out.append(la.transpose(cols))
    return out


def anticommutation_holds(gammas: Sequence[Matrix], g: Metric) -> bool:
    """gamma_a gamma_b + gamma_b gamma_a == 2 g_ab Id for all pairs."""
    n = len(gammas[0])
    for a in range(len(gammas)):
        for b in range(a, len(gammas)):
            ab = la.matmul(gammas[a], gammas[b])
            ba = la.matmul(gammas[b], gammas[a])
            target = g.g[a][b] * 2
            for i in range(n):
                for k in range(n):
                    want = target if i == k else ZERO
                    if ab[i][k] + ba[i][k] != want:
                        return False
    return True


def idempotent_conjugate(P: Multivector, eps: PinElement, g: Metric, strong: bool = False) -> Multivector:
    """eps v P v eps^{-1}; with ``strong`` only Spin elements are accepted."""
    if strong and not eps.is_even:
        raise ValueError("strong equivalence requires an even (Spin) element")
    return clifford_chain(g, eps.product, P, eps.inverse())


def integrability_check(
    P: Multivector,
    nabla: Callable[[Any, Multivector], Multivector],
    g: Metric,
    directions: Iterable | None = None,
    simplify: Callable[[Multivector], Multivector] | None = None,
) -> bool:
    """True iff P v nabla_a P vanishes for every frame direction a."""
    directions = range(P.dim) if directions is None else directions
    for a in directions:
        r = clifford(P, nabla(a, P), g)
        if simplify is not None:
            r = simplify(r)
        if r:
            return False
    return True


# ---------------------------------------------------------------------------
# search for parallel rank-2 idempotents on the S^3 frame
# ---------------------------------------------------------------------------
@dataclass
class SearchResult:
    family: str
    rank: int
    unknowns: tuple[str, ...]
    groebner: list
    solutions_exist: bool


def parallel_idempotent_search(scalar_part=None, rank: int = 2) -> SearchResult:
    """Groebner-basis search for constant-coefficient idempotents of a given rank.

    The family is ``c0 + c_a theta^a + c_ab theta^a^theta^b + c_t tau`` on the
    left-invariant frame of S^3 with ``c0`` fixed: the trace of right
    multiplication by P equals ``8*c0``, so ``c0 = rank/8`` (1/4 for rank 2).
    Passing ``scalar_part=1/2`` reproduces the one-half normalised family,
    which can only ever contain rank-4 idempotents. Conditions imposed:
    ``P v P = P`` and ``P v nabla_a P = 0`` for the Levi-Civita connection.
    """
    import sympy as sp

    from .su2_harmonics import CK_METRIC, _nabla_blade

    c0 = sp.Rational(rank, 8) if scalar_part is None else sp.nsimplify(scalar_part)
    names = ("c1", "c2", "c3", "c12", "c13", "c23", "ct")
    syms = sp.symbols(names)
    masks = (1, 2, 4, 3, 5, 6, 7)
    P = Multivector(3, {0: c0, **{m: s for m, s in zip(masks, syms)}})
    g = CK_METRIC

    def nabla_const(a: int, m: Multivector) -> Multivector:
        out = Multivector(3)
        for mask, c in m.coeffs.items():
            out = out + _nabla_blade(a, mask).map_coeffs(lambda k, c=c: c * k)
        return out

    eqs = list((clifford(P, P, g) - P).coeffs.values())
    for a in range(3):
        eqs += list(clifford(P, nabla_const(a, P), g).coeffs.values())
    eqs = [sp.expand(e) for e in eqs]
    eqs = [e for e in eqs if e != 0]
    G = sp.groebner(eqs, *syms, order="grevlex", domain=sp.QQ_I) if eqs else []
    basis = list(G) if eqs else []
    empty = len(basis) == 1 and basis[0].is_number and basis[0] != 0
    family = f"scalar part {c0}"
    return SearchResult(family, rank, names, [str(b) for b in basis], not empty)
