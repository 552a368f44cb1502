"""Dirac operators on S^3: spin Dirac on C^2, Hodge-de Rham and spin Dirac on I_P.

Spinor bases:

* ``c2``: two-component spinors, sigma matrices along the CK frame.
* ``ip``: the ideal of ``P = (1 - i tau)/2`` along ``w_0 = 1 - i tau`` and
  ``w_a = theta^a - i *theta^a``.
* ``ip_ladder``: the same ideal along ``(w_0, w_-, w_z, w_+)`` with
  ``psi_-+ = (psi^x -+ i psi^y)/sqrt 2``.

Operators are returned without the constant ``-3i/4`` shift of the spin
connection unless the function name says otherwise; reports add it back.

Eigenvalues of the form ``+-i sqrt(j(j+1))`` are generally irrational. Such
eigenspinors are stored as ``A + lam*B`` with ``lam^2 = r`` rational, and the
eigen-equation is checked through ``D A = r B`` and ``D B = A``.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Sequence

from . import exact_linalg as la
from .kahler_atiyah import Multivector
from .numbers import HALF, I, ONE, SQRT2, ZERO, Num, num
from .spectral import (
    BlockOperator,
    assemble,
    eigensolve,
    expand_components,
    sector_labels,
    unit_element,
    wigner_norm,
)
from .spin_modules import IdempotentModule, ideal_basis
from .su2_harmonics import (
    CK_METRIC,
    PolyFun,
    _nabla_blade,
    casimir,
    ell_plus,
    half_range,
    inner,
    left_derivation,
    levi_civita,
    levi_civita_symbol,
    kahler_operator,
    lz,
    wigner,
)

C2 = "c2"
IP = "ip"
IP_LADDER = "ip_ladder"
_NCOMP = {C2: 2, IP: 4, IP_LADDER: 4}
_R = SQRT2.inverse()
SHIFT = Num(0, Fraction(-3, 4))


@dataclass(frozen=True)
class SpinorField:
    components: tuple[PolyFun, ...]
    basis_tag: str

    def __post_init__(self):
        comps = tuple(c if isinstance(c, PolyFun) else PolyFun.const(c) for c in self.components)
        if self.basis_tag not in _NCOMP:
            raise ValueError(f"unknown spinor basis {self.basis_tag!r}")
        if len(comps) != _NCOMP[self.basis_tag]:
            raise ValueError(f"{self.basis_tag} spinors have {_NCOMP[self.basis_tag]} components")
        object.__setattr__(self, "components", comps)

    def __add__(self, other: SpinorField) -> SpinorField:
        self._same(other)
        return SpinorField(tuple(a + b for a, b in zip(self.components, other.components)), self.basis_tag)

    def __sub__(self, other: SpinorField) -> SpinorField:
        self._same(other)
        return SpinorField(tuple(a - b for a, b in zip(self.components, other.components)), self.basis_tag)

    def __neg__(self) -> SpinorField:
        return SpinorField(tuple(-a for a in self.components), self.basis_tag)

    def scale(self, c) -> SpinorField:
        return SpinorField(tuple(a * c for a in self.components), self.basis_tag)

    def times(self, f: PolyFun) -> SpinorField:
        return SpinorField(tuple(f * a for a in self.components), self.basis_tag)

    def __bool__(self) -> bool:
        return any(self.components)

    def _same(self, other: SpinorField) -> None:
        if other.basis_tag != self.basis_tag:
            raise ValueError("spinor bases differ")


def _require(psi: SpinorField, tag: str) -> None:
    if psi.basis_tag != tag:
        raise ValueError(f"expected a {tag} spinor, got {psi.basis_tag}")


def spinor_inner(a: SpinorField, b: SpinorField) -> Num:
    a._same(b)
    acc = ZERO
    for x, y in zip(a.components, b.components):
        acc = acc + inner(x, y)
    return acc


# ---------------------------------------------------------------------------
# operator matrices with first-order entries
# ---------------------------------------------------------------------------
# an entry is a tuple of (coefficient, op) with op in "1", "z", "+", "-"
OpMatrix = Sequence[Sequence[Sequence[tuple[Num, str]]]]


def _op(op: str, f: PolyFun) -> PolyFun:
    if op == "1":
        return f
    return left_derivation(op, f)


def apply_op_matrix(matrix: OpMatrix, comps: Sequence[PolyFun]) -> tuple[PolyFun, ...]:
    out = []
    cache: dict[tuple[int, str], PolyFun] = {}
    for row in matrix:
        acc = PolyFun()
        for k, entry in enumerate(row):
            if not comps[k]:
                continue
            for c, op in entry:
                key = (k, op)
                if key not in cache:
                    cache[key] = _op(op, comps[k])
                acc = acc + cache[key] * c
        out.append(acc)
    return tuple(out)


_Z = ((ONE, "z"),)
_NZ = ((-ONE, "z"),)
_P = ((ONE, "+"),)
_M = ((ONE, "-"),)
_NP = ((-ONE, "+"),)
_NM = ((-ONE, "-"),)
_O: tuple = ()
_MI = ((-I, "1"),)

SIGMA_L = (
    (_Z, ((SQRT2, "-"),)),
    (((SQRT2, "+"),), _NZ),
)

HDR_LADDER = (
    (_O, _P, _Z, _M),
    (_M, ((ONE, "z"), (-I, "1")), _NM, _O),
    (_Z, _NP, _MI, _M),
    (_P, _O, _P, ((-I, "1"), (-ONE, "z"))),
)

GAMMA_L_LADDER = (
    (_O, _P, _Z, _M),
    (_M, _Z, _NM, _O),
    (_Z, _NP, _O, _M),
    (_P, _O, _P, _NZ),
)


# ---------------------------------------------------------------------------
# spin Dirac operator on C^2
# ---------------------------------------------------------------------------
PAULI = (
    ((ZERO, ONE), (ONE, ZERO)),
    ((ZERO, -I), (I, ZERO)),
    ((ONE, ZERO), (ZERO, -ONE)),
)


def sigma_dot_l(psi: SpinorField) -> SpinorField:
    """sigma^a L_a in the ladder form with entries L_z, sqrt2 L_-, sqrt2 L_+, -L_z."""
    _require(psi, C2)
    return SpinorField(apply_op_matrix(SIGMA_L, psi.components), C2)


def sigma_dot_l_cartesian(psi: SpinorField) -> SpinorField:
    _require(psi, C2)
    out = [PolyFun(), PolyFun()]
    for a, s in enumerate(PAULI):
        d = [left_derivation("xyz"[a], c) for c in psi.components]
        for r in range(2):
            for k in range(2):
                if s[r][k]:
                    out[r] = out[r] + d[k] * s[r][k]
    return SpinorField(tuple(out), C2)


def spin_dirac_apply(psi: SpinorField) -> SpinorField:
    """The spin Dirac operator sigma^b L_b - 3i/4 on C^2 spinors."""
    return sigma_dot_l(psi) + psi.scale(SHIFT)


def _block(operator: str, j, ncomp: int, apply, weight=None) -> BlockOperator:
    j = Fraction(j)
    labels = sector_labels(j, ncomp)
    if weight is None:
        weight = lambda lab: wigner_norm(j, lab[0], lab[1])  # noqa: E731
    return assemble(
        operator,
        j,
        labels,
        unit_element(j, ncomp),
        lambda comps: expand_components(comps, j),
        apply,
        weight,
    )


def spin_dirac_block(j) -> BlockOperator:
    """sigma^a L_a on W_j (x) C^2 (no shift)."""
    return _block("spin_s3", j, 2, lambda comps: apply_op_matrix(SIGMA_L, comps))


def spin_closed_form(j) -> list[tuple[complex, int]]:
    j = Fraction(j)
    d = int(2 * j + 1)
    return [(complex(0, j + 1), int(2 * j) * d), (complex(0, -j), int(2 * j) * d + 2 * d)]


def shifted_spin_spectrum(j) -> list[tuple[complex, int]]:
    """Full spectrum of the spin Dirac operator including the -3i/4 shift."""
    return [(v - 0.75j, k) for v, k in spin_closed_form(j)]


@dataclass(frozen=True)
class EigenSpinor:
    """Closed-form eigenspinor ``A`` (rational eigenvalue) or ``A + lam B``."""

    family: str
    label: tuple
    value: complex
    A: SpinorField
    lam: Num | None = None  # eigenvalue when it lies in the exact field
    lam_squared: Num | None = None  # used when B is present
    B: SpinorField | None = None

    def residual_zero(self, op: Callable[[SpinorField], SpinorField]) -> bool:
        if self.B is None:
            return not (op(self.A) - self.A.scale(self.lam))
        return not (op(self.A) - self.B.scale(self.lam_squared)) and not (op(self.B) - self.A)

    def numeric_components(self) -> list:
        """Components as (A, B, lam) triples for numeric inner products."""
        return [self.A, self.B, self.value]


def _spinor(tag: str, *comps) -> SpinorField:
    return SpinorField(tuple(c if isinstance(c, PolyFun) else PolyFun.const(c) for c in comps), tag)


def spin_eigenspinor_basis(j) -> list[EigenSpinor]:
    """Closed-form eigenspinors of sigma^a L_a spanning W_j (x) C^2."""
    j = Fraction(j)
    lp, lm = Num(0, j + 1), Num(0, -j)
    out = []
    for m in half_range(j):
        for n in half_range(j):
            D = wigner(j, m, n)
            if n != -j:
                # -(i sqrt2/(j+n)) L_+ = -(i/(j+n)) ell_+
                up = ell_plus(D) * Num(0, -1 / (j + n))
                out.append(EigenSpinor("plus", (m, n), complex(lp), _spinor(C2, D, up), lam=lp))
                dn = ell_plus(D) * Num(0, 1 / (j + 1 - n))
                out.append(EigenSpinor("minus", (m, n), complex(lm), _spinor(C2, D, dn), lam=lm))
            else:
                out.append(EigenSpinor("lowest", (m, n), complex(lm), _spinor(C2, D, 0), lam=lm))
            if n == j:
                out.append(EigenSpinor("top", (m, n), complex(lm), _spinor(C2, 0, D), lam=lm))
    return out


def ansatz_reduction(j, n) -> list[list[Num]]:
    """2x2 matrix acting on (1, xi) for psi = (D, xi L_+ D), n != -j.

    Entries use 2 L_- L_+ = L^2 - L_z^2 + i L_z evaluated on D^j_{mn}.
    """
    j, n = Fraction(j), Fraction(n)
    if n == -j:
        raise ValueError("the ansatz degenerates at n = -j")
    # L_- L_+ D = (1/2)(-j(j+1) + n^2 - n) D
    c = (n * n - n - j * (j + 1)) / 2
    # sigma L (D, xi L_+ D) = (i n D + sqrt2 xi L_- L_+ D, sqrt2 L_+ D - xi L_z L_+ D)
    # and L_z L_+ D = i (n - 1) L_+ D
    return [[Num(0, n), SQRT2 * c], [SQRT2, Num(0, 1 - n)]]


# ---------------------------------------------------------------------------
# Killing spinors
# ---------------------------------------------------------------------------
def killing_check(phi: SpinorField, alpha) -> bool:
    """L_a phi == alpha sigma_a phi for a = x, y, z."""
    _require(phi, C2)
    alpha = num(alpha)
    for a, s in enumerate(PAULI):
        lhs = [left_derivation("xyz"[a], c) for c in phi.components]
        for r in range(2):
            rhs = PolyFun()
            for k in range(2):
                if s[r][k]:
                    rhs = rhs + phi.components[k] * (s[r][k] * alpha)
            if lhs[r] != rhs:
                return False
    return True


KILLING_PHI = (PolyFun.var("vb"), PolyFun.var("u"))
KILLING_PHI_PRIME = (PolyFun.var("ub"), -PolyFun.var("v"))


def killing_spinors() -> tuple[SpinorField, SpinorField]:
    return SpinorField(KILLING_PHI, C2), SpinorField(KILLING_PHI_PRIME, C2)


def casimir_level(f: PolyFun) -> Fraction | None:
    """k with L^2 f = -k(k+1) f, or None when f is not a Casimir eigenfunction."""
    if not f:
        return None
    Lf = casimir(f)
    e, c = f.leading()
    ratio = Lf.terms.get(e, ZERO) * c.inverse()
    if not ratio.is_rational or Lf != f * ratio:
        return None
    q = -Fraction(int(ratio.re.numerator), int(ratio.re.denominator))
    # k^2 + k - q = 0
    disc = 1 + 4 * q
    num_, den = disc.numerator, disc.denominator
    import math

    rn, rd = math.isqrt(num_), math.isqrt(den)
    if rn * rn != num_ or rd * rd != den:
        return None
    return (Fraction(rn, rd) - 1) / 2


def _pauli_apply(a: int, psi: SpinorField) -> SpinorField:
    s = PAULI[a]
    out = []
    for r in range(2):
        acc = PolyFun()
        for k in range(2):
            if s[r][k]:
                acc = acc + psi.components[k] * s[r][k]
        out.append(acc)
    return SpinorField(tuple(out), C2)


@dataclass
class KillingRecord:
    k: Fraction
    leibniz: bool
    second_order: bool
    shifted_square: bool
    eigenvalues: list[complex]
    in_predicted_set: bool

    @property
    def ok(self) -> bool:
        return self.leibniz and self.second_order and self.shifted_square and self.in_predicted_set


def killing_identities(f: PolyFun, phi: SpinorField, alpha=Num(0, HALF.re)) -> KillingRecord:
    """First- and second-order Leibniz identities for D = sigma^a L_a on f*phi."""
    alpha = num(alpha)
    if not killing_check(phi, alpha):
        raise ValueError("phi is not a Killing spinor with the given factor")
    D = sigma_dot_l
    fphi = phi.times(f)
    La_f = [left_derivation(a, f) for a in "xyz"]
    first = SpinorField((PolyFun(), PolyFun()), C2)
    for a in range(3):
        first = first + _pauli_apply(a, phi).times(La_f[a])
    leibniz = D(fphi) == first + D(phi).times(f)

    second = first.scale(I) + phi.times(casimir(f)) + D(D(phi)).times(f)
    for a in range(3):
        La_phi = SpinorField(tuple(left_derivation("xyz"[a], c) for c in phi.components), C2)
        second = second + La_phi.times(La_f[a]).scale(2)
    second_order = D(D(fphi)) == second

    k = casimir_level(f)
    if k is None:
        raise ValueError("f is not in a single W_k")
    mu = alpha + Num(0, HALF.re)
    const = mu * mu - alpha * 3 * (alpha * 2 + I) + alpha * alpha * 9 - Num(k * (k + 1))

    def shifted(x: SpinorField) -> SpinorField:
        return D(x) - x.scale(mu)

    shifted_square = shifted(shifted(fphi)) == fphi.scale(const)

    # D on span{f phi, D f phi}
    Dx = D(fphi)
    e_, c_ = _leading_component(fphi)
    ratio = _coeff(Dx, e_) * c_.inverse()
    if Dx == fphi.scale(ratio):
        evals = [complex(ratio)]
    else:
        # D^2 x = 2 mu D x + (const - mu^2) x
        b, cc = complex(mu * 2), complex(const - mu * mu)
        disc = cmath.sqrt(b * b + 4 * cc)
        evals = [(b + disc) / 2, (b - disc) / 2]
    predicted = [complex(0, 1 + (k + Fraction(1, 2))), complex(0, 1 - (k + Fraction(1, 2)))]
    in_set = all(min(abs(ev - p) for p in predicted) < 1e-12 for ev in evals)
    return KillingRecord(k, leibniz, second_order, shifted_square, evals, in_set)


def _leading_component(psi: SpinorField):
    for idx, c in enumerate(psi.components):
        if c:
            e, k = c.leading()
            return (idx, e), k
    raise ValueError("zero spinor")


def _coeff(psi: SpinorField, key) -> Num:
    idx, e = key
    return psi.components[idx].terms.get(e, ZERO)


def killing_decompositions() -> list[tuple[str, bool]]:
    """The four products f phi + g phi' reproducing (u,0), (v,0), (0,ub), (0,vb)."""
    u, v, ub, vb = (PolyFun.var(x) for x in ("u", "v", "ub", "vb"))
    phi, phip = killing_spinors()
    cases = [
        ("(u,0)", (u, PolyFun()), v * u, u * u),
        ("(v,0)", (v, PolyFun()), v * v, u * v),
        ("(0,ub)", (PolyFun(), ub), ub * ub, -(ub * vb)),
        ("(0,vb)", (PolyFun(), vb), ub * vb, -(vb * vb)),
    ]
    out = []
    for name, target, f, g in cases:
        ok = phi.times(f) + phip.times(g) == SpinorField(target, C2)
        ok = ok and not (sigma_dot_l(SpinorField(target, C2)) - SpinorField(target, C2).scale(Num(0, -HALF.re)))
        out.append((name, ok))
    return out


# ---------------------------------------------------------------------------
# the ideal I_P on S^3
# ---------------------------------------------------------------------------
TAU = Multivector.blade(3, 7)
P_S3 = (Multivector.scalar(3, 1) - TAU * I) * HALF


@lru_cache(maxsize=None)
def s3_module() -> IdempotentModule:
    """Module of P = (1 - i tau)/2 along w_0 = 1 - i tau, w_a = theta^a - i *theta^a."""
    from .kahler_atiyah import hodge_star

    w0 = Multivector.scalar(3, 1) - TAU * I
    ws = [Multivector.blade(3, 1 << a) - hodge_star(Multivector.blade(3, 1 << a), CK_METRIC) * I for a in range(3)]
    return ideal_basis(P_S3, CK_METRIC, [w0, *ws])


def to_ladder(psi: SpinorField) -> SpinorField:
    _require(psi, IP)
    p0, px, py, pz = psi.components
    minus = (px - py * I) * _R
    plus = (px + py * I) * _R
    return SpinorField((p0, minus, pz, plus), IP_LADDER)


def from_ladder(psi: SpinorField) -> SpinorField:
    _require(psi, IP_LADDER)
    p0, pm, pz, pp = psi.components
    return SpinorField((p0, (pm + pp) * _R, (pm - pp) * (I * _R), pz), IP)


def as_form(psi: SpinorField) -> Multivector:
    """The frame form psi^0 w_0 + psi^a w_a."""
    if psi.basis_tag == IP_LADDER:
        psi = from_ladder(psi)
    _require(psi, IP)
    mod = s3_module()
    out = Multivector(3)
    for c, w in zip(psi.components, mod.basis):
        if c:
            out = out + w.map_coeffs(lambda k, c=c: c * k)
    return out


def from_form(phi: Multivector) -> SpinorField:
    return SpinorField(tuple(s3_module().coordinates(phi)), IP)


def _eps(s: int, k: int, a: int) -> int:
    return levi_civita_symbol(s, k, a)


def hdr_dirac_apply(psi: SpinorField) -> SpinorField:
    """Hodge-de Rham Dirac operator on I_P by its component formula.

    psi^0 w_0 -> (L_a psi^0) w_a and
    psi^a w_a -> (L_k psi^k) w_0 + i(eps_{ska} L_k psi^a - psi^s) w_s.
    """
    if psi.basis_tag == IP_LADDER:
        return to_ladder(hdr_dirac_apply(from_ladder(psi)))
    _require(psi, IP)
    p0, *pa = psi.components
    d0 = [left_derivation(x, p0) for x in "xyz"]
    d = [[left_derivation(x, pa[a]) for a in range(3)] for x in "xyz"]  # d[k][a] = L_k psi^a
    out0 = d[0][0] + d[1][1] + d[2][2]
    outs = []
    for s in range(3):
        acc = PolyFun()
        for k in range(3):
            for a in range(3):
                e = _eps(s, k, a)
                if e:
                    acc = acc + d[k][a] * e
        outs.append(d0[s] + (acc - pa[s]) * I)
    return SpinorField((out0, *outs), IP)


def hdr_dirac_ladder(psi: SpinorField) -> SpinorField:
    """The 4x4 ladder matrix form along (w_0, w_-, w_z, w_+)."""
    _require(psi, IP_LADDER)
    return SpinorField(apply_op_matrix(HDR_LADDER, psi.components), IP_LADDER)


def hdr_dirac_engine(psi: SpinorField) -> SpinorField:
    """theta^a v nabla_a evaluated with the generic Clifford kernel."""
    tag = psi.basis_tag
    out = from_form(kahler_operator(as_form(psi)))
    return to_ladder(out) if tag == IP_LADDER else out


def hdr_dirac_block(j) -> BlockOperator:
    return _block("kahler_s3", j, 4, lambda comps: apply_op_matrix(HDR_LADDER, comps))


def _lam_sq(j) -> Num:
    return Num(-Fraction(j) * (Fraction(j) + 1))


def hdr_spectrum_closed_form(j) -> list[tuple[complex, int]]:
    """Multiplicities counted sector by sector from the closed-form lists."""
    j = Fraction(j)
    if j == 0:
        return [(0j, 1), (complex(0, -1), 3)]
    counts: dict[complex, int] = {}
    root = complex(0, float(j * (j + 1)) ** 0.5)

    def add(v: complex, k: int = 1):
        counts[v] = counts.get(v, 0) + k

    for m in half_range(j):
        for n in half_range(j):
            add(root)
            add(-root)
            if n not in (j, -j):
                add(complex(0, j))
                add(complex(0, -(j + 1)))
            else:
                add(complex(0, -(j + 1)), 2)
    return sorted(counts.items(), key=lambda kv: kv[0].imag)


def hdr_multiplicity_formula(j) -> list[tuple[complex, int]]:
    j = Fraction(j)
    d = int(2 * j + 1)
    root = complex(0, float(j * (j + 1)) ** 0.5)
    if j == 0:
        return [(0j, 1), (complex(0, -1), 3)]
    return [(root, d * d), (-root, d * d), (complex(0, j), int(2 * j - 1) * d), (complex(0, -(j + 1)), int(2 * j + 3) * d)]


def _l(op: str, f: PolyFun) -> PolyFun:
    return left_derivation(op, f)


def hdr_eigenspinors(j, alternate: bool = False) -> list[EigenSpinor]:
    """Closed-form eigenspinors of the Hodge-de Rham operator in the ladder basis.

    With ``alternate`` the n = -j companion of the w_z-type spinor carries
    ``-i D`` in the w_z slot; the eigen-equation needs ``+i D`` there, which is
    the default.
    """
    j = Fraction(j)
    lam2 = _lam_sq(j)
    root = float(-lam2.re) ** 0.5
    out: list[EigenSpinor] = []
    Z = PolyFun()
    if j == 0:
        D = wigner(0, 0, 0)
        return [
            EigenSpinor("j0-scalar", (0, 0), 0j, _spinor(IP_LADDER, D, Z, Z, Z), lam=ZERO),
            EigenSpinor("j0-minus-1", (0, 0), -1j, _spinor(IP_LADDER, Z, D, Z, Z), lam=-I),
            EigenSpinor("j0-minus-2", (0, 0), -1j, _spinor(IP_LADDER, Z, Z, D * (-I), Z), lam=-I),
            EigenSpinor("j0-minus-3", (0, 0), -1j, _spinor(IP_LADDER, Z, Z, Z, D), lam=-I),
        ]
    mu = Num(0, -(j + 1))
    for m in half_range(j):
        for n in half_range(j):
            D = wigner(j, m, n)
            Lm, Lz_, Lp = _l("-", D), lz(D), _l("+", D)
            lab = (m, n)
            if n == j:
                A = _spinor(IP_LADDER, Z, Z, Lz_, Lp)
                fam = "pair-top"
            elif n == -j:
                A = _spinor(IP_LADDER, Z, Lm, Lz_, Z)
                fam = "pair-bottom"
            else:
                A = _spinor(IP_LADDER, Z, Lm, Lz_, Lp)
                fam = "pair"
            B = _spinor(IP_LADDER, D, Z, Z, Z)
            for sgn in (1, -1):
                out.append(EigenSpinor(fam, lab, complex(0, sgn * root), A, lam_squared=lam2, B=B))
            if n not in (j, -j):
                psi = _spinor(IP_LADDER, Z, Lm * Num(0, 1 / (j - n)), D, Lp * Num(0, -1 / (j + n)))
                out.append(EigenSpinor("plus-ij", lab, complex(0, j), psi, lam=Num(0, j)))
                psi = _spinor(IP_LADDER, Z, Lm * Num(0, -1 / (j + n + 1)), D, Lp * Num(0, 1 / (j + 1 - n)))
                out.append(EigenSpinor("minus", lab, complex(mu), psi, lam=mu))
            elif n == j:
                out.append(EigenSpinor("minus-top-1", lab, complex(mu), _spinor(IP_LADDER, Z, Z, D * (-I), Lp), lam=mu))
                out.append(EigenSpinor("minus-top-2", lab, complex(mu), _spinor(IP_LADDER, Z, Z, Z, D), lam=mu))
            else:
                cz = -I if alternate else I
                out.append(EigenSpinor("minus-bottom-1", lab, complex(mu), _spinor(IP_LADDER, Z, Lm, D * cz, Z), lam=mu))
                out.append(EigenSpinor("minus-bottom-2", lab, complex(mu), _spinor(IP_LADDER, Z, D, Z, Z), lam=mu))
    return out


def hdr_laplacian_apply(psi: SpinorField) -> SpinorField:
    """psi^0 -> L^2 psi^0 and psi^j -> L^2 psi^j + eps_{jbs} L_b psi^s - psi^j."""
    if psi.basis_tag == IP_LADDER:
        return to_ladder(hdr_laplacian_apply(from_ladder(psi)))
    _require(psi, IP)
    p0, *pa = psi.components
    outs = []
    for jj in range(3):
        acc = casimir(pa[jj]) - pa[jj]
        for b in range(3):
            for s in range(3):
                e = _eps(jj, b, s)
                if e:
                    acc = acc + left_derivation("xyz"[b], pa[s]) * e
        outs.append(acc)
    return SpinorField((casimir(p0), *outs), IP)


# ---------------------------------------------------------------------------
# spin Dirac operator on I_P
# ---------------------------------------------------------------------------
def gamma_matrices() -> tuple:
    return s3_module().gamma


def gamma_dot_l(psi: SpinorField) -> SpinorField:
    """gamma^a L_a with the gamma matrices of the ideal (Cartesian basis)."""
    if psi.basis_tag == IP_LADDER:
        return to_ladder(gamma_dot_l(from_ladder(psi)))
    _require(psi, IP)
    out = [PolyFun() for _ in range(4)]
    for a, G in enumerate(gamma_matrices()):
        d = [left_derivation("xyz"[a], c) for c in psi.components]
        for r in range(4):
            for k in range(4):
                if G[r][k] and d[k]:
                    out[r] = out[r] + d[k] * G[r][k]
    return SpinorField(tuple(out), IP)


def spin_on_ideal_apply(psi: SpinorField) -> SpinorField:
    """gamma^a L_a on I_P, the spin Dirac operator with its -3i/4 shift removed."""
    if psi.basis_tag == IP_LADDER:
        return SpinorField(apply_op_matrix(GAMMA_L_LADDER, psi.components), IP_LADDER)
    return gamma_dot_l(psi)


def slashed_d_ideal(psi: SpinorField) -> SpinorField:
    """Component formula for the full spin Dirac operator on I_P (shift included)."""
    if psi.basis_tag == IP_LADDER:
        return to_ladder(slashed_d_ideal(from_ladder(psi)))
    _require(psi, IP)
    p0, *pa = psi.components
    d = [[left_derivation(x, pa[a]) for a in range(3)] for x in "xyz"]
    out0 = p0 * SHIFT + d[0][0] + d[1][1] + d[2][2]
    outs = []
    for b in range(3):
        acc = PolyFun()
        for k in range(3):
            for a in range(3):
                e = _eps(b, k, a)
                if e:
                    acc = acc + d[k][a] * e
        outs.append(left_derivation("xyz"[b], p0) + (acc - pa[b] * Fraction(3, 4)) * I)
    return SpinorField((out0, *outs), IP)


def spin_on_ideal_block(j) -> BlockOperator:
    return _block("spin_ideal_s3", j, 4, lambda comps: apply_op_matrix(GAMMA_L_LADDER, comps))


def spin_ideal_closed_form(j) -> list[tuple[complex, int]]:
    j = Fraction(j)
    d = int(2 * j + 1)
    return [(complex(0, j + 1), int(4 * j) * d), (complex(0, -j), int(4 * j + 4) * d)]


def slashed_laplacian_apply(psi: SpinorField) -> SpinorField:
    """Square of the shifted spin operator on I_P by its component formula."""
    if psi.basis_tag == IP_LADDER:
        return to_ladder(slashed_laplacian_apply(from_ladder(psi)))
    _require(psi, IP)
    p0, *pa = psi.components
    nine = Fraction(9, 16)
    hi = Num(0, Fraction(-1, 2))
    out0 = casimir(p0) - p0 * nine
    for k in range(3):
        out0 = out0 + left_derivation("xyz"[k], pa[k]) * hi
    outs = []
    for jj in range(3):
        acc = casimir(pa[jj]) - pa[jj] * nine + left_derivation("xyz"[jj], p0) * hi
        for s in range(3):
            for a in range(3):
                e = _eps(jj, s, a)
                if e:
                    acc = acc + left_derivation("xyz"[s], pa[a]) * Fraction(e, 2)
        outs.append(acc)
    return SpinorField((out0, *outs), IP)


def spin_ideal_eigenspinors(j, alternate: bool = False) -> list[EigenSpinor]:
    """Closed-form eigenspinors of gamma^a L_a on I_P (ladder basis).

    ``alternate=True`` returns a contrasting set of edge-sector spinors: the
    n = -j, lambda_+ spinor has ``D`` instead of ``L_- D`` in the w_- slot,
    the n = j, lambda_+ spinor has ``D`` instead of ``L_+ D`` in the w_+ slot
    and the second n = j, lambda_- spinor has the opposite sign in the w_+
    slot. None of those three satisfy the eigen-equation; the default list
    carries the correct forms.
    """
    j = Fraction(j)
    Z = PolyFun()
    lp, lm = Num(0, j + 1), Num(0, -j)
    out = []
    for m in half_range(j):
        for n in half_range(j):
            D = wigner(j, m, n)
            Lm, Lp = _l("-", D), _l("+", D)
            lab = (m, n)
            if n not in (j, -j):
                for lam in (lp, lm):
                    a = (lam - I).inverse()
                    b = -Num(n) * (ONE + I * lam).inverse()
                    out.append(EigenSpinor("generic", lab, complex(lam), _spinor(IP_LADDER, D, Lm * a, D * b, Lp * a), lam=lam))
                    out.append(EigenSpinor("generic-dual", lab, complex(lam), _spinor(IP_LADDER, D * b, Lm * (-a), D, Lp * a), lam=lam))
            if n == -j:
                out.append(EigenSpinor("bottom-minus-1", lab, complex(lm), _spinor(IP_LADDER, D, Z, D, Z), lam=lm))
                out.append(EigenSpinor("bottom-minus-2", lab, complex(lm), _spinor(IP_LADDER, D, Lm * I, Z, Z), lam=lm))
                out.append(EigenSpinor("bottom-minus-3", lab, complex(lm), _spinor(IP_LADDER, Z, D, Z, Z), lam=lm))
                if j:
                    mid = D if alternate else Lm
                    out.append(EigenSpinor("bottom-plus", lab, complex(lp), _spinor(IP_LADDER, D, mid * Num(0, -1 / j), -D, Z), lam=lp))
            if n == j:
                out.append(EigenSpinor("top-minus-1", lab, complex(lm), _spinor(IP_LADDER, D, Z, -D, Z), lam=lm))
                cp = -I if alternate else I
                out.append(EigenSpinor("top-minus-2", lab, complex(lm), _spinor(IP_LADDER, D, Z, Z, Lp * cp), lam=lm))
                out.append(EigenSpinor("top-minus-3", lab, complex(lm), _spinor(IP_LADDER, Z, Z, Z, D), lam=lm))
                if j:
                    top = D if alternate else Lp
                    out.append(EigenSpinor("top-plus", lab, complex(lp), _spinor(IP_LADDER, D, Z, D, top * Num(0, -1 / j)), lam=lp))
    return out


# ---------------------------------------------------------------------------
# connection forms
# ---------------------------------------------------------------------------
@dataclass(frozen=True)
class ConnectionForm:
    """Matrix-valued 1-form A = theta^a A_a on I_P (Cartesian basis)."""

    components: tuple  # three 4x4 matrices, (A_a)[q][s] = coefficient of w_q in the action on w_s

    def as_forms(self) -> list[list[Multivector]]:
        out = []
        for q in range(4):
            row = []
            for s in range(4):
                row.append(Multivector.vector(3, [self.components[a][q][s] for a in range(3)]))
            out.append(row)
        return out

    def __sub__(self, other: ConnectionForm) -> ConnectionForm:
        return ConnectionForm(
            tuple([[x - y for x, y in zip(ra, rb)] for ra, rb in zip(A, B)] for A, B in zip(self.components, other.components))
        )

    def is_zero(self) -> bool:
        return all(not x for A in self.components for r in A for x in r)


def _frame_connection(a: int) -> list[list[Num]]:
    # C[b][c]: nabla_a theta^b = C[b][c] theta^c
    C = [[ZERO] * 3 for _ in range(3)]
    for b in range(3):
        for mask, k in _nabla_blade(a, 1 << b).coeffs.items():
            C[b][mask.bit_length() - 1] = k
    return C


def spin_lift(C: Sequence[Sequence[Num]], gammas: Sequence) -> list[list[Num]]:
    """Spinor lift -1/4 sum_{b,c} C[b][c] gamma^b gamma^c of a frame connection matrix."""
    size = len(gammas[0])
    out = [[ZERO] * size for _ in range(size)]
    for b in range(len(C)):
        for c in range(len(C)):
            if not C[b][c]:
                continue
            prod = la.matmul(gammas[b], gammas[c])
            k = C[b][c] * Num(Fraction(-1, 4))
            out = [[x + k * y for x, y in zip(r1, r2)] for r1, r2 in zip(out, prod)]
    return out


def connection_forms() -> tuple[ConnectionForm, ConnectionForm]:
    """(A_hdr, A_spin): the Levi-Civita action on the ideal basis and the spin lift."""
    mod = s3_module()
    hdr = []
    for a in range(3):
        cols = []
        for w in mod.basis:
            cw = w.map_coeffs(PolyFun.const)
            coords = mod.coordinates(levi_civita(a, cw))
            cols.append([_constant(c) for c in coords])
        hdr.append(la.transpose(cols))
    spin = [spin_lift(_frame_connection(a), mod.gamma) for a in range(3)]
    return ConnectionForm(tuple(hdr)), ConnectionForm(tuple(spin))


def _constant(c) -> Num:
    if isinstance(c, Num):
        return c
    if not c:
        return ZERO
    if set(c.terms) != {(0, 0, 0, 0)}:
        raise ValueError("connection coefficient is not constant")
    return c.terms[(0, 0, 0, 0)]


def covariant_dirac(conn: ConnectionForm, psi: SpinorField) -> SpinorField:
    """gamma^a (L_a + A_a) psi on I_P (Cartesian basis)."""
    if psi.basis_tag == IP_LADDER:
        return to_ladder(covariant_dirac(conn, from_ladder(psi)))
    _require(psi, IP)
    out = [PolyFun() for _ in range(4)]
    for a, G in enumerate(gamma_matrices()):
        d = [left_derivation("xyz"[a], c) for c in psi.components]
        A = conn.components[a]
        inner_ = [d[q] + sum((psi.components[s] * A[q][s] for s in range(4) if A[q][s]), PolyFun()) for q in range(4)]
        for r in range(4):
            for k in range(4):
                if G[r][k] and inner_[k]:
                    out[r] = out[r] + inner_[k] * G[r][k]
    return SpinorField(tuple(out), IP)


def connection_difference() -> ConnectionForm:
    hdr, spin = connection_forms()
    return hdr - spin


# ---------------------------------------------------------------------------
# squares of blocks against the component Laplacians
# ---------------------------------------------------------------------------
@dataclass
class LaplacianCheck:
    operator: str
    j: Fraction
    exact: bool
    numeric: bool

    @property
    def ok(self) -> bool:
        return self.exact and self.numeric


def laplacian_check(j) -> list[LaplacianCheck]:
    from .spectral import block_square, exact_equal, numeric_close

    j = Fraction(j)
    out = []
    lam2 = Num(-j * (j + 1))

    B = spin_dirac_block(j)
    sq = block_square(B)
    rhs = [[(lam2 if r == c else ZERO) + I * B.matrix[r][c] for c in range(B.dim)] for r in range(B.dim)]
    out.append(LaplacianCheck("spin_s3", j, exact_equal(sq, rhs), numeric_close(sq, rhs)))

    H = hdr_dirac_block(j)
    L = _block("kahler_s3_laplacian", j, 4, lambda comps: hdr_laplacian_apply(SpinorField(tuple(comps), IP_LADDER)).components)
    sq = block_square(H)
    out.append(LaplacianCheck("kahler_s3", j, exact_equal(sq, L.matrix), numeric_close(sq, L.matrix)))

    S = spin_on_ideal_block(j)
    shifted = [[x + (SHIFT if r == c else ZERO) for c, x in enumerate(row)] for r, row in enumerate(S.matrix)]
    sq = la.matmul(shifted, shifted)
    L = _block(
        "spin_ideal_s3_laplacian", j, 4, lambda comps: slashed_laplacian_apply(SpinorField(tuple(comps), IP_LADDER)).components
    )
    out.append(LaplacianCheck("spin_ideal_s3", j, exact_equal(sq, L.matrix), numeric_close(sq, L.matrix)))
    return out


def spectrum(operator: str, j):
    """Assemble, solve and compare one (operator, j) block."""
    j = Fraction(j)
    if operator == "spin_s3":
        return eigensolve(spin_dirac_block(j), spin_closed_form(j))
    if operator == "kahler_s3":
        return eigensolve(hdr_dirac_block(j), hdr_spectrum_closed_form(j))
    if operator == "spin_ideal_s3":
        return eigensolve(spin_on_ideal_block(j), spin_ideal_closed_form(j))
    raise ValueError(f"unknown S^3 operator {operator!r}")


def eigenspinor_matrix(eigs: Sequence[EigenSpinor], j, ncomp: int):
    """Columns: Wigner coordinates of each eigenspinor, orthonormalised, as floats."""
    import numpy as np

    j = Fraction(j)
    labels = sector_labels(j, ncomp)
    index = {lab: k for k, lab in enumerate(labels)}
    scale = np.sqrt([float(wigner_norm(j, m, n)) for m, n, _ in labels])
    M = np.zeros((len(labels), len(eigs)), dtype=complex)
    for col, e in enumerate(eigs):
        for lab, c in expand_components(e.A.components, j).items():
            M[index[lab], col] += complex(c)
        if e.B is not None:
            for lab, c in expand_components(e.B.components, j).items():
                M[index[lab], col] += e.value * complex(c)
    return scale[:, None] * M
