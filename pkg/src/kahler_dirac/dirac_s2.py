"""S^2 as the base of the Hopf fibration, and a local chart picture.

Forms on S^2 are the frame forms on S^3 (ladder coframe ``theta^-, theta^+,
theta^z``; mask bits 0, 1, 2) that are horizontal and invariant under
``L_z``. They are written ``f + c_- theta^- + c_+ theta^+ + i h theta^-^theta^+``
with ``L_z f = L_z h = 0`` and ``L_z c_-+ = +-i c_-+``.

The ideal of ``P = (1 - theta^-^theta^+)/2`` consists of the spinors
``f psi_1 + c_- theta^-`` with ``psi_1 = P``; ``c_-`` is stored through the
module coordinates ``alpha_j`` with ``c_- = sum_j alpha_j conj(phi_j)``.

The local chart part uses sympy: the zweibein ``dtheta, sin(theta) dphi`` on
``(0, pi) x [0, 2 pi)`` and trigonometric coefficient functions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .kahler_atiyah import Metric, Multivector, clifford
from .numbers import HALF, I, ONE, SQRT2, ZERO, Num
from .spectral import BlockOperator, assemble, eigensolve, expand_components, wigner_norm
from .su2_harmonics import (
    LADDER,
    LADDER_METRIC,
    PolyFun,
    form,
    frame_d,
    from_cartesian,
    half_range,
    interior,
    kahler_operator,
    left_derivation,
    lie_derivative,
    lz,
    to_cartesian,
    wigner,
)

MINUS, PLUS, ZBIT = 1, 2, 4
MP = MINUS | PLUS

_u, _v, _ub, _vb = (PolyFun.var(x) for x in ("u", "v", "ub", "vb"))
PHI = (_u * _u, _u * _v * SQRT2, _v * _v)
PHI_BAR = (_ub * _ub, _ub * _vb * SQRT2, _vb * _vb)


def _pf(x) -> PolyFun:
    return x if isinstance(x, PolyFun) else PolyFun.const(x)


# ---------------------------------------------------------------------------
# forms on S^2
# ---------------------------------------------------------------------------
@dataclass(frozen=True)
class EquivariantForm:
    f: PolyFun
    c_minus: PolyFun
    c_plus: PolyFun
    h: PolyFun

    def __post_init__(self):
        for name in ("f", "c_minus", "c_plus", "h"):
            object.__setattr__(self, name, _pf(getattr(self, name)))

    def is_equivariant(self) -> bool:
        f, cm, cp, h = self.f, self.c_minus, self.c_plus, self.h
        return not lz(f) and not lz(h) and lz(cm) == cm * I and lz(cp) == cp * (-I)

    def to_form(self) -> Multivector:
        return form({0: self.f, MINUS: self.c_minus, PLUS: self.c_plus, MP: self.h * I})

    @classmethod
    def from_form(cls, phi: Multivector) -> EquivariantForm:
        extra = [m for m in phi.coeffs if m & ZBIT]
        if extra:
            raise ValueError("form has theta^z components")
        c = phi.coeffs
        z = PolyFun()
        return cls(c.get(0, z), c.get(MINUS, z), c.get(PLUS, z), c.get(MP, z) * (-I))

    def parts(self) -> tuple[PolyFun, PolyFun, PolyFun, PolyFun]:
        return self.f, self.c_minus, self.c_plus, self.h


def is_s2_form(phi: Multivector) -> bool:
    """L_z phi == 0 and i_{L_z} phi == 0 for a ladder-frame form."""
    return not lie_derivative("z", phi, LADDER) and not interior("z", phi, LADDER)


def projection_completeness() -> PolyFun:
    """sum_j phi_j conj(phi_j), which reduces to 1."""
    out = PolyFun()
    for a, b in zip(PHI, PHI_BAR):
        out = out + a * b
    return out


def module_decompose(c: PolyFun, sign: int) -> tuple[PolyFun, PolyFun, PolyFun]:
    """Coefficients alpha (sign=-1) or beta (sign=+1) with c = sum alpha_j conj(phi_j) or sum beta_j phi_j.

    ``sign=-1`` is the c_- case (L_z c = i c), ``sign=+1`` the c_+ case.
    """
    want = c * (I if sign < 0 else -I)
    if lz(c) != want:
        raise ValueError("coefficient does not have the required L_z weight")
    partner = PHI if sign < 0 else PHI_BAR
    return tuple(c * p for p in partner)


def module_combine(coeffs: Sequence[PolyFun], sign: int) -> PolyFun:
    basis = PHI_BAR if sign < 0 else PHI
    out = PolyFun()
    for a, b in zip(coeffs, basis):
        out = out + a * b
    return out


def cl2s_product(a: EquivariantForm, b: EquivariantForm) -> EquivariantForm:
    """Clifford product of two S^2 forms by the closed component rule."""
    f, cm, cp, h = a.parts()
    f2, cm2, cp2, h2 = b.parts()
    return EquivariantForm(
        f * f2 + cm * cp2 + cm2 * cp - h * h2,
        f * cm2 + f2 * cm + (h * cm2 - h2 * cm) * I,
        f * cp2 + f2 * cp - (h * cp2 - h2 * cp) * I,
        f * h2 + f2 * h + (cp * cm2 - cm * cp2) * I,
    )


def s2_projector() -> Multivector:
    return form({0: HALF, MP: -HALF})


@dataclass
class ProjectorRecord:
    idempotent_rule: bool
    idempotent_engine: bool
    rule_matches_engine: bool
    minus_absorbed: bool
    plus_killed: bool
    pair_killed: bool
    general_solution: bool

    @property
    def ok(self) -> bool:
        return all(vars(self).values())


def s2_projector_check() -> ProjectorRecord:
    P = s2_projector()
    Pe = EquivariantForm.from_form(P)
    rule = cl2s_product(Pe, Pe).to_form() == P
    engine = clifford(P, P, LADDER_METRIC) == P

    # the component rule against the engine on equivariant polynomial data
    a = EquivariantForm(_u * _ub, _ub * _vb, _u * _v, _v * _vb - 1)
    b = EquivariantForm(_v * _vb, _ub * _ub, _u * _u * 2, _u * _ub * I)
    match = cl2s_product(a, b).to_form() == clifford(a.to_form(), b.to_form(), LADDER_METRIC)

    cm = _ub * _vb
    tm = form({MINUS: cm})
    tp = form({PLUS: _u * _v})
    minus_ok = clifford(tm, P, LADDER_METRIC) == tm
    plus_ok = not clifford(tp, P, LADDER_METRIC)
    pair = clifford(clifford(form({MINUS: 1}), form({PLUS: 1}), LADDER_METRIC), P, LADDER_METRIC)
    return ProjectorRecord(rule, engine, match, minus_ok, plus_ok, not pair, _general_projector_solution())


def _general_projector_solution() -> bool:
    # every non-scalar idempotent with constant parts has f = 1/2 and 2 c_- c_+ = 1/4 + h^2
    import sympy as sp

    f, cm, cp, h = sp.symbols("f c_m c_p h")
    F, CM, CP, H = f, cm, cp, h
    sq = (
        F * F + CM * CP + CM * CP - H * H - F,
        2 * F * CM - CM,
        2 * F * CP - CP,
        2 * F * H - H,
    )
    sols = sp.solve(sq, [f, cm, cp, h], dict=True)
    ok = True
    for s in sols:
        nonscalar = any(s.get(x, x) != 0 for x in (cm, cp, h))
        if not nonscalar:
            continue
        fv = s.get(f, f)
        rel = sp.simplify(2 * s.get(cm, cm) * s.get(cp, cp) - sp.Rational(1, 4) - s.get(h, h) ** 2)
        ok = ok and fv == sp.Rational(1, 2) and rel == 0
    return ok and bool(sols)


def hodge_s2(phi: EquivariantForm) -> EquivariantForm:
    """Hodge star on S^2: f -> i f theta^-^theta^+, c_-+ -> -+i c_-+, i h theta^-^theta^+ -> h."""
    f, cm, cp, h = phi.parts()
    return EquivariantForm(h, cm * (-I), cp * I, f)


# ---------------------------------------------------------------------------
# Dirac operator on the ideal
# ---------------------------------------------------------------------------
@dataclass(frozen=True)
class S2Spinor:
    psi0: PolyFun
    alpha: tuple[PolyFun, PolyFun, PolyFun]

    def __post_init__(self):
        object.__setattr__(self, "psi0", _pf(self.psi0))
        object.__setattr__(self, "alpha", tuple(_pf(a) for a in self.alpha))
        if len(self.alpha) != 3:
            raise ValueError("alpha needs three components")

    @property
    def c_minus(self) -> PolyFun:
        return module_combine(self.alpha, -1)

    @classmethod
    def from_parts(cls, f: PolyFun, c_minus: PolyFun) -> S2Spinor:
        return cls(f, module_decompose(c_minus, -1) if c_minus else (PolyFun(),) * 3)

    def is_equivariant(self) -> bool:
        return not lz(self.psi0) and all(not lz(a) for a in self.alpha)

    def to_form(self) -> Multivector:
        return form({0: self.psi0 * HALF, MP: self.psi0 * (-HALF), MINUS: self.c_minus})

    def __eq__(self, other) -> bool:
        if not isinstance(other, S2Spinor):
            return NotImplemented
        return self.psi0 == other.psi0 and self.c_minus == other.c_minus

    def __hash__(self):
        return hash((self.psi0, self.c_minus))

    def __add__(self, other: S2Spinor) -> S2Spinor:
        return S2Spinor(self.psi0 + other.psi0, tuple(a + b for a, b in zip(self.alpha, other.alpha)))

    def __sub__(self, other: S2Spinor) -> S2Spinor:
        return S2Spinor(self.psi0 - other.psi0, tuple(a - b for a, b in zip(self.alpha, other.alpha)))

    def scale(self, c) -> S2Spinor:
        return S2Spinor(self.psi0 * c, tuple(a * c for a in self.alpha))

    def __bool__(self) -> bool:
        return bool(self.psi0) or bool(self.c_minus)


def dirac_s2_apply(psi: S2Spinor) -> S2Spinor:
    """D(f psi_1) = sum_j (phi_j L_- f) conj(phi_j) theta^- and D(c_- theta^-) = 2 (L_+ c_-) psi_1."""
    Lf = left_derivation("-", psi.psi0)
    alpha = tuple(p * Lf for p in PHI)
    psi0 = left_derivation("+", psi.c_minus) * 2
    return S2Spinor(psi0, alpha)


def dirac_s2_matrix_apply(psi: S2Spinor) -> S2Spinor:
    """The same operator through the 4x4 matrix with entries 2(conj(phi_k) L_+ + (L_+ conj(phi_k))) and phi_k L_-."""
    psi0 = PolyFun()
    for a, pb in zip(psi.alpha, PHI_BAR):
        psi0 = psi0 + (pb * left_derivation("+", a) + left_derivation("+", pb) * a) * 2
    Lf = left_derivation("-", psi.psi0)
    return S2Spinor(psi0, tuple(p * Lf for p in PHI))


def dirac_s2_forms(psi: S2Spinor) -> Multivector:
    """d + *d* on the underlying S^2 form, with the exterior derivative of S^3."""
    phi = psi.to_form()

    def star(x: Multivector) -> Multivector:
        return hodge_s2(EquivariantForm.from_form(x)).to_form()

    return frame_d(phi, LADDER) + star(frame_d(star(phi), LADDER))


def equivariant_sector(j) -> list[tuple[Fraction, Fraction]]:
    """Labels (m, 0) of L_z-invariant Wigner functions in W_j; empty for half-integer j."""
    j = Fraction(j)
    return [(m, Fraction(0)) for m in half_range(j) if Fraction(0) in half_range(j)]


def _check_integer(j) -> Fraction:
    j = Fraction(j)
    if j.denominator != 1 or j < 0:
        raise ValueError(f"no equivariant sector for j = {j}: S^2 spinors need integer j")
    return j


def dirac_s2_block(j) -> BlockOperator:
    """The operator on span{D^j_{m,0} psi_1} + span{D^j_{m,1} theta^-}.

    Labels are (m, n, component) with component 0 for f and 1 for c_-.
    Squared norms: |f psi_1|^2 = |f|^2/2 and |c theta^-|^2 = |c|^2.
    """
    j = _check_integer(j)
    labels = [(m, Fraction(0), 0) for m in half_range(j)]
    if j >= 1:
        labels += [(m, Fraction(1), 1) for m in half_range(j)]
    labels.sort()

    def element(lab):
        m, n, comp = lab
        D = wigner(j, m, n)
        return (D, PolyFun()) if comp == 0 else (PolyFun(), D)

    def apply(comps):
        f, c = comps
        return (left_derivation("+", c) * 2, left_derivation("-", f))

    def weight(lab):
        m, n, comp = lab
        w = wigner_norm(j, m, n)
        return w / 2 if comp == 0 else w

    return assemble("kahler_s2", j, labels, element, lambda comps: expand_components(comps, j), apply, weight)


def s2_closed_form(j) -> list[tuple[complex, int]]:
    j = _check_integer(j)
    if j == 0:
        return [(0j, 1)]
    r = math.sqrt(float(j * (j + 1)))
    d = int(2 * j + 1)
    return [(complex(0, -r), d), (complex(0, r), d)]


def s2_spectrum(j):
    return eigensolve(dirac_s2_block(j), s2_closed_form(j))


@dataclass(frozen=True)
class S2EigenSpinor:
    label: tuple
    value: complex
    A: S2Spinor
    B: S2Spinor
    lam_squared: Num

    def residual_zero(self) -> bool:
        return dirac_s2_apply(self.A) == self.B.scale(self.lam_squared) and dirac_s2_apply(self.B) == self.A


def s2_eigenspinors(j) -> list[S2EigenSpinor]:
    """psi_0 = D^j_{m,0}, alpha_k = lam^{-1} phi_k L_- psi_0, written as A + lam B."""
    j = _check_integer(j)
    if j == 0:
        return []
    lam2 = Num(-j * (j + 1))
    r = math.sqrt(float(j * (j + 1)))
    out = []
    for m in half_range(j):
        D = wigner(j, m, 0)
        Lm = left_derivation("-", D)
        A = S2Spinor(D, (PolyFun(),) * 3)
        # lam^{-1} = lam / lam^2
        B = S2Spinor(PolyFun(), tuple(p * Lm * lam2.inverse() for p in PHI))
        for sgn in (1, -1):
            out.append(S2EigenSpinor((m, 0), complex(0, sgn * r), A, B, lam2))
    return out


def nonrestriction_witness(f: PolyFun) -> Multivector:
    """Part of theta^a v nabla_a (f theta^-^theta^+) that leaves the S^2 forms.

    Returns the theta^z components together with any L_z-non-invariant part;
    both vanish for a genuine S^2 form.
    """
    if not f or lz(f):
        raise ValueError("f must be nonzero and L_z-invariant")
    phi = form({MP: f})
    out = from_cartesian(kahler_operator(to_cartesian(phi, LADDER)), LADDER)
    vertical = Multivector(3, {m: c for m, c in out.coeffs.items() if m & ZBIT})
    horizontal = out - vertical
    return vertical + lie_derivative("z", horizontal, LADDER)


# ---------------------------------------------------------------------------
# local chart
# ---------------------------------------------------------------------------
@dataclass
class LocalChartRecord:
    projectors_idempotent: bool
    projectors_integrable: bool
    ideal_basis_fixed: bool
    ideal_independent_of_beta: bool
    gamma_is_pauli: bool
    pin_conjugation_derived: bool
    pin_conjugation_alternate: bool
    kahler_matrix: bool
    kahler_on_basis: bool
    spin_matrix: bool
    spin_minus_kahler: bool
    gamma_anticommute: bool

    def failures(self) -> list[str]:
        return [k for k, v in vars(self).items() if not v]


def _local_symbols():
    import sympy as sp

    th, ph = sp.symbols("theta phi", real=True)
    return sp, th, ph


def _simplify_mv(m: Multivector) -> Multivector:
    import sympy as sp

    return Multivector(m.dim, {k: sp.simplify(sp.sympify(c)) for k, c in m.coeffs.items()})


def local_projector(sign: int, beta):
    """P_+-(beta) = (1 +- i tau)/2 + beta (theta_hat +- i phi_hat)."""
    import sympy as sp

    s = sp.I * sign
    return Multivector(2, {0: sp.Rational(1, 2), 3: s / 2, 1: sp.sympify(beta), 2: beta * s})


def _local_nabla(a: int, m: Multivector, th) -> Multivector:
    """Levi-Civita derivative along e_theta (a=0) or e_phi (a=1) of a local form."""
    import sympy as sp

    cot = sp.cos(th) / sp.sin(th)
    ph = sp.Symbol("phi", real=True)
    out: dict = {}

    def add(mask, c):
        out[mask] = out.get(mask, 0) + c

    for mask, c in m.coeffs.items():
        c = sp.sympify(c)
        dc = sp.diff(c, th) if a == 0 else sp.diff(c, ph) / sp.sin(th)
        add(mask, dc)
        if a == 1:
            # nabla_phi theta_hat = cot phi_hat, nabla_phi phi_hat = -cot theta_hat; tau is parallel
            if mask == 1:
                add(2, c * cot)
            elif mask == 2:
                add(1, -c * cot)
    return Multivector(2, {k: sp.simplify(v) for k, v in out.items()})


def local_kahler(m: Multivector, th) -> Multivector:
    g = Metric.euclidean(2)
    out = Multivector(2)
    for a in range(2):
        out = out + clifford(Multivector.blade(2, 1 << a, 1), _local_nabla(a, m, th), g)
    return _simplify_mv(out)


def _local_basis(sign: int):
    import sympy as sp

    s = sp.I * sign
    return Multivector(2, {0: sp.Integer(1), 3: s}), Multivector(2, {1: sp.Integer(1), 2: s})


def _local_coords(m: Multivector, sign: int):
    """(c1, c2) with m = c1 psi_1 + c2 psi_2 in I_+-; raises if m is outside."""
    import sympy as sp

    b1, b2 = _local_basis(sign)
    c1 = sp.sympify(m.coeffs.get(0, 0))
    c2 = sp.sympify(m.coeffs.get(1, 0))
    rest = _simplify_mv(m - b1 * c1 - b2 * c2)
    if rest:
        raise ValueError("form is not in the local ideal")
    return sp.simplify(c1), sp.simplify(c2)


def local_chart_suite() -> LocalChartRecord:
    import sympy as sp

    from . import exact_linalg as la
    from .dirac_s3 import spin_lift
    from .spin_modules import anticommutation_holds, ideal_basis

    _, th, ph = _local_symbols()
    g = Metric.euclidean(2)
    beta = sp.Symbol("beta")
    cot = sp.cos(th) / sp.sin(th)

    idem = True
    integ = True
    fixed = True
    for sign in (1, -1):
        P = local_projector(sign, beta)
        idem = idem and not _simplify_mv(clifford(P, P, g) - P)
        for a in range(2):
            integ = integ and not _simplify_mv(clifford(P, _local_nabla(a, P, th), g))
        for w in _local_basis(sign):
            fixed = fixed and not _simplify_mv(clifford(w, P, g) - w)

    # span of I_+-(beta) for exact beta values
    independent = True
    for sign in (1, -1):
        spans = []
        for b in (ZERO, HALF, Num(1, 1)):
            s = I * sign
            P = Multivector(2, {0: HALF, 3: s * HALF, 1: b, 2: b * s})
            mod = ideal_basis(P, g)
            spans.append([[w.coeffs.get(k, ZERO) for k in range(4)] for w in mod.basis])
        ref = la.rref(spans[0])[0]
        independent = independent and all(la.rref(x)[0] == ref for x in spans[1:]) and len(spans[0]) == 2

    P0 = Multivector(2, {0: HALF, 3: -I * HALF})
    b1 = Multivector(2, {0: ONE, 3: -I})
    b2 = Multivector(2, {1: ONE, 2: -I})
    mod = ideal_basis(P0, g, [b1, b2])
    sx = [[ZERO, ONE], [ONE, ZERO]]
    sy = [[ZERO, -I], [I, ZERO]]
    pauli = mod.gamma[0] == sx and mod.gamma[1] == sy
    anti = anticommutation_holds(mod.gamma, g)

    derived, alternate = _pin_conjugation_checks(g, beta)

    # Kahler operator on I_- against the expected 2x2 matrix
    fa = sp.Function("a")(th, ph)
    fb = sp.Function("b")(th, ph)
    B1, B2 = _local_basis(-1)
    psi = _simplify_mv(B1 * fa + B2 * fb)
    c1, c2 = _local_coords(local_kahler(psi, th), -1)
    want1 = cot * fb + sp.diff(fb, th) - sp.I / sp.sin(th) * sp.diff(fb, ph)
    want2 = sp.diff(fa, th) + sp.I / sp.sin(th) * sp.diff(fa, ph)
    kahler = sp.simplify(c1 - want1) == 0 and sp.simplify(c2 - want2) == 0
    d1 = _local_coords(local_kahler(B1, th), -1)
    d2 = _local_coords(local_kahler(B2, th), -1)
    on_basis = d1 == (0, 0) and sp.simplify(d2[0] - cot) == 0 and d2[1] == 0

    # spin operator gamma^a (e_a + A_a) with the spinor lift of the frame connection
    C_phi = [[0, cot], [-cot, 0]]
    A_phi = spin_lift(C_phi, mod.gamma)
    e_ops = (lambda f: sp.diff(f, th), lambda f: sp.diff(f, ph) / sp.sin(th))
    comps = (fa, fb)
    out = [0, 0]
    for a, G in enumerate(mod.gamma):
        A = A_phi if a == 1 else [[0, 0], [0, 0]]
        inner_ = [e_ops[a](comps[q]) + sum(sp.sympify(A[q][s_]) * comps[s_] for s_ in range(2)) for q in range(2)]
        for r in range(2):
            for k in range(2):
                out[r] += sp.sympify(G[r][k]) * inner_[k]
    spin_want = (
        cot / 2 * fb + sp.diff(fb, th) - sp.I / sp.sin(th) * sp.diff(fb, ph),
        cot / 2 * fa + sp.diff(fa, th) + sp.I / sp.sin(th) * sp.diff(fa, ph),
    )
    spin = all(sp.simplify(x - y) == 0 for x, y in zip(out, spin_want))
    diff = (sp.simplify(spin_want[0] - want1), sp.simplify(spin_want[1] - want2))
    spin_minus = sp.simplify(diff[0] + cot / 2 * fb) == 0 and sp.simplify(diff[1] - cot / 2 * fa) == 0

    return LocalChartRecord(
        idem, integ, fixed, independent, pauli, derived, alternate, kahler, on_basis, spin, spin_minus, anti
    )


def _pin_conjugation_checks(g: Metric, beta) -> tuple[bool, bool]:
    """eps P_+-(beta) eps^{-1} for eps = A theta_hat + B phi_hat, both signs of eps v eps.

    Returns (derived rule holds, alternate rule holds). Derived rule: for
    eps v eps = 1 the image is P_-+((A +- iB)^2 beta); for eps v eps = -1 it
    is P_-+(-(A +- iB)^2 beta). The alternate rule pairs the signs the other
    way, (A -+ iB)^2 and (+-iA + B)^2; it is kept so its failure stays visible.
    """
    import sympy as sp

    t = sp.Symbol("t", real=True)
    A0 = (1 - t**2) / (1 + t**2)
    B0 = 2 * t / (1 + t**2)
    derived = alternate = True
    for norm, (A, B) in ((1, (A0, B0)), (-1, (sp.I * A0, sp.I * B0))):
        eps = Multivector(2, {1: A, 2: B})
        inv = Multivector(2, {1: A / norm, 2: B / norm})
        for sign in (1, -1):
            P = local_projector(sign, beta)
            img = _simplify_mv(clifford(clifford(eps, P, g), inv, g))
            k = (A + sp.I * sign * B) ** 2
            ours = k * norm
            if norm == 1:
                theirs = (A - sp.I * sign * B) ** 2
            else:
                theirs = (sp.I * sign * A + B) ** 2
            derived = derived and not _simplify_mv(img - local_projector(-sign, ours * beta))
            alternate = alternate and not _simplify_mv(img - local_projector(-sign, theirs * beta))
    return derived, alternate
