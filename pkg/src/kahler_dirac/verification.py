"""Invariant suites behind ``kahler-dirac verify``.

Every suite is a function of a seeded :class:`random.Random` and returns a
:class:`SuiteResult`. Randomized suites draw exact Gaussian-rational data, so
verdicts do not depend on the seed; only the sample changes.

``inject_fault`` flips the sign of one gamma-matrix entry before the
anticommutation suite runs. It exists to prove the suite can fail.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable

import numpy as np

from . import exact_linalg as la
from .kahler_atiyah import (
    Metric,
    Multivector,
    clifford,
    clifford_via_phi,
    contract,
    grade_of,
    hodge_star,
    scalar_product_ext,
    wedge,
)
from .numbers import HALF, I, ONE, ZERO, Num

# ---------------------------------------------------------------------------
# plumbing
# ---------------------------------------------------------------------------


@dataclass
class SuiteResult:
    name: str
    passed: bool
    detail: str = ""
    seconds: float = 0.0


Suite = Callable[[random.Random, bool], SuiteResult]
_SUITES: list[tuple[str, str, Suite]] = []


def suite(module: str, name: str):
    def register(fn):
        _SUITES.append((module, f"{module}.{name}", fn))
        return fn

    return register


def suite_names() -> list[str]:
    return [n for _, n, _ in _SUITES]


def run_suites(seed: int = 0, inject_fault: bool = False, only: Iterable[str] | None = None) -> list[SuiteResult]:
    wanted = set(only) if only else None
    out = []
    for module, name, fn in _SUITES:
        if wanted and name not in wanted and module not in wanted:
            continue
        # one stream per suite so adding a suite never reshuffles the others
        rng = random.Random(f"{seed}:{name}")
        t = time.perf_counter()
        try:
            res = fn(rng, inject_fault)
        except Exception as exc:  # a crashing suite is a failing suite
            res = SuiteResult(name, False, f"{type(exc).__name__}: {exc}")
        res.name = name
        res.seconds = time.perf_counter() - t
        out.append(res)
    return out


def _result(ok: bool, detail: str = "") -> SuiteResult:
    return SuiteResult("", bool(ok), detail)


# ---------------------------------------------------------------------------
# random exact data
# ---------------------------------------------------------------------------
def random_num(rng: random.Random, span: int = 3) -> Num:
    return Num(Fraction(rng.randint(-span, span), rng.randint(1, 3)), Fraction(rng.randint(-span, span), rng.randint(1, 3)))


def random_multivector(rng: random.Random, dim: int, density: float = 0.5, real: bool = False) -> Multivector:
    coeffs = {}
    for mask in range(1 << dim):
        if rng.random() < density:
            c = random_num(rng)
            if real:
                c = Num(c.re)
            coeffs[mask] = c
    return Multivector(dim, coeffs)


def random_vector(rng: random.Random, dim: int) -> Multivector:
    return Multivector.vector(dim, [random_num(rng) for _ in range(dim)])


def signature_metrics(dims: Iterable[int]) -> list[Metric]:
    """Diagonal metrics with every count of negative entries."""
    out = []
    for n in dims:
        for neg in range(n + 1):
            out.append(Metric.diagonal([1] * (n - neg) + [-1] * neg))
    return out


# ---------------------------------------------------------------------------
# kahler_atiyah
# ---------------------------------------------------------------------------
@suite("kahler_atiyah", "anticommutation")
def _ka_anticommutation(rng, fault):
    for g in signature_metrics(range(1, 6)):
        n = g.dim
        for a in range(n):
            for b in range(n):
                ea, eb = Multivector.blade(n, 1 << a), Multivector.blade(n, 1 << b)
                if clifford(ea, eb, g) + clifford(eb, ea, g) != Multivector.scalar(n, g.g[a][b] * 2):
                    return _result(False, f"generators {a},{b} in {g.g}")
        for _ in range(10):
            x, y = random_vector(rng, n), random_vector(rng, n)
            xc = [x.coeffs.get(1 << k, ZERO) for k in range(n)]
            yc = [y.coeffs.get(1 << k, ZERO) for k in range(n)]
            if clifford(x, y, g) + clifford(y, x, g) != Multivector.scalar(n, g.bilinear(xc, yc) * 2):
                return _result(False, "random vectors")
    return _result(True)


@suite("kahler_atiyah", "associativity")
def _ka_associativity(rng, fault):
    for g in signature_metrics(range(1, 6)):
        for _ in range(6):
            a, b, c = (random_multivector(rng, g.dim, 0.4) for _ in range(3))
            if clifford(clifford(a, b, g), c, g) != clifford(a, clifford(b, c, g), g):
                return _result(False, f"dim {g.dim}")
    return _result(True)


@suite("kahler_atiyah", "phi_map_cross_check")
def _ka_phi(rng, fault, pairs: int = 200):
    count = 0
    for g in signature_metrics(range(2, 6)):
        for _ in range(pairs):
            a = random_multivector(rng, g.dim, 0.3)
            b = random_multivector(rng, g.dim, 0.3)
            if clifford(a, b, g) != clifford_via_phi(a, b, g):
                return _result(False, f"dim {g.dim}")
            count += 1
    return _result(True, f"{count} pairs")


@suite("kahler_atiyah", "grades")
def _ka_grades(rng, fault):
    for g in signature_metrics(range(1, 6)):
        n = g.dim
        for _ in range(10):
            ja, jb = rng.randint(0, n), rng.randint(0, n)
            a = _random_homogeneous(rng, n, ja)
            b = _random_homogeneous(rng, n, jb)
            w = wedge(a, b)
            if not w.grades() <= {ja + jb}:
                return _result(False, "wedge grade")
            allowed = set(range(abs(ja - jb), ja + jb + 1, 2))
            if not clifford(a, b, g).grades() <= allowed:
                return _result(False, "clifford grades")
    return _result(True)


def _random_homogeneous(rng, n: int, k: int) -> Multivector:
    masks = [m for m in range(1 << n) if grade_of(m) == k]
    return Multivector(n, {m: random_num(rng) for m in masks if rng.random() < 0.7} or {masks[0]: ONE})


@suite("kahler_atiyah", "hodge_sign_rule")
def _ka_hodge(rng, fault):
    for g in signature_metrics(range(1, 6)):
        n = g.dim
        for mask in range(1 << n):
            k = grade_of(mask)
            b = Multivector.blade(n, mask)
            sign = (-1) ** (k * (n - k)) * g.signature
            if hodge_star(hodge_star(b, g), g) != b * sign:
                return _result(False, f"blade {mask} dim {n}")
    return _result(True)


@suite("kahler_atiyah", "contraction_anticommutes")
def _ka_contract(rng, fault):
    for g in signature_metrics(range(1, 6)):
        n = g.dim
        for _ in range(8):
            v = [random_num(rng) for _ in range(n)]
            w = [random_num(rng) for _ in range(n)]
            m = random_multivector(rng, n)
            if contract(v, contract(w, m, g), g) != -contract(w, contract(v, m, g), g):
                return _result(False, f"dim {n}")
    return _result(True)


@suite("kahler_atiyah", "scalar_product_positive")
def _ka_positive(rng, fault):
    for n in range(1, 6):
        g = Metric.euclidean(n)
        for _ in range(10):
            m = random_multivector(rng, n, real=True)
            if not m:
                continue
            q = scalar_product_ext(m, m, g)
            if not q.is_rational or q.re <= 0:
                return _result(False, f"dim {n}")
    return _result(True)


# ---------------------------------------------------------------------------
# spin_modules
# ---------------------------------------------------------------------------
def _flip_gamma(gammas):
    # fault injection: one gamma entry changes sign
    G = [la.copy_matrix(x) for x in gammas]
    r, c = next((r, c) for r in range(len(G[0])) for c in range(len(G[0])) if G[0][r][c])
    G[0][r][c] = -G[0][r][c]
    return G


@suite("spin_modules", "gamma_anticommutation")
def _sm_anticommutation(rng, fault):
    from .dirac_s3 import s3_module
    from .spin_modules import anticommutation_holds, ideal_basis

    g2 = Metric.euclidean(2)
    P2 = Multivector(2, {0: HALF, 3: -I * HALF})
    modules = [(s3_module().gamma, s3_module().metric), (ideal_basis(P2, g2).gamma, g2)]
    for g in signature_metrics([3, 4]):
        P = _random_primitive_idempotent(rng, g)
        if P is not None:
            modules.append((ideal_basis(P, g).gamma, g))
    for k, (gam, g) in enumerate(modules):
        if fault:
            gam = _flip_gamma(gam)
        if not anticommutation_holds(gam, g):
            return _result(False, f"module {k}")
    return _result(True, f"{len(modules)} modules")


def _random_primitive_idempotent(rng, g: Metric) -> Multivector | None:
    """(1 + e)/2 for a generator or generator pair squaring to +1, randomly conjugated."""
    from .spin_modules import PinElement, idempotent_conjugate

    n = g.dim
    cands = []
    for a in range(n):
        if g.g[a][a] == ONE:
            cands.append(Multivector.blade(n, 1 << a))
    for a in range(n):
        for b in range(a + 1, n):
            if g.g[a][a] * g.g[b][b] == -ONE:
                cands.append(Multivector.blade(n, (1 << a) | (1 << b)))
    if not cands:
        return None
    u = rng.choice(cands)
    P = (Multivector.scalar(n, 1) + u) * HALF
    eps = PinElement((_random_unit_vector(rng, g), _random_unit_vector(rng, g)), g)
    return idempotent_conjugate(P, eps, g)


def _random_unit_vector(rng, g: Metric) -> Multivector:
    """A generator with g(e,e) = +-1 moved by random reflections; stays exactly unit."""
    from .spin_modules import adjoint_reflect, quadratic

    n = g.dim
    x = Multivector.blade(n, 1 << rng.randrange(n))
    for _ in range(2):
        v = random_vector(rng, n)
        if quadratic(v, g):
            # -v x v^-1 keeps g(x, x)
            x = adjoint_reflect(v, x, g)
    return x


@suite("spin_modules", "adjoint_isometry")
def _sm_isometry(rng, fault):
    from .spin_modules import adjoint_reflect, quadratic

    for g in signature_metrics([2, 3, 4]):
        n = g.dim
        for _ in range(50):
            v = _random_unit_vector(rng, g)
            if quadratic(v, g) not in (ONE, -ONE):
                return _result(False, "unit vector generator drifted")
            x, y = random_vector(rng, n), random_vector(rng, n)
            xs = [adjoint_reflect(v, x, g).coeffs.get(1 << k, ZERO) for k in range(n)]
            ys = [adjoint_reflect(v, y, g).coeffs.get(1 << k, ZERO) for k in range(n)]
            x0 = [x.coeffs.get(1 << k, ZERO) for k in range(n)]
            y0 = [y.coeffs.get(1 << k, ZERO) for k in range(n)]
            if g.bilinear(xs, ys) != g.bilinear(x0, y0):
                return _result(False, f"dim {n}")
    return _result(True)


@suite("spin_modules", "conjugation_preserves_rank")
def _sm_conjugation(rng, fault):
    from .dirac_s3 import P_S3
    from .spin_modules import PinElement, ideal_basis, idempotent_conjugate, is_idempotent
    from .su2_harmonics import CK_METRIC

    base = ideal_basis(P_S3, CK_METRIC).rank
    for k in range(6):
        factors = tuple(_random_unit_vector(rng, CK_METRIC) for _ in range(1 + k % 3))
        eps = PinElement(factors, CK_METRIC)
        Q = idempotent_conjugate(P_S3, eps, CK_METRIC)
        if not is_idempotent(Q, CK_METRIC) or ideal_basis(Q, CK_METRIC).rank != base:
            return _result(False, f"{len(factors)} factors")
    return _result(True)


@suite("spin_modules", "s3_ideal_relations")
def _sm_geclis(rng, fault):
    from .dirac_s3 import s3_module
    from .su2_harmonics import levi_civita_symbol

    mod = s3_module()
    g = mod.metric
    w0, *w = mod.basis
    for a in range(3):
        th = Multivector.blade(3, 1 << a)
        if clifford(th, w0, g) != w[a]:
            return _result(False, f"theta^{a} w_0")
        for b in range(3):
            want = w0 if a == b else Multivector(3)
            for s in range(3):
                eps = levi_civita_symbol(s, a, b)
                if eps:
                    want = want + w[s] * (I * eps)
            if clifford(th, w[b], g) != want:
                return _result(False, f"theta^{a} w_{b}")
    return _result(True)


@suite("spin_modules", "no_parallel_rank2_idempotent")
def _sm_search(rng, fault):
    from .spin_modules import parallel_idempotent_search

    res = parallel_idempotent_search()
    half = parallel_idempotent_search(scalar_part=Fraction(1, 2))
    return _result(not res.solutions_exist, f"groebner {res.groebner}; one-half family {len(half.groebner)} generators")


# ---------------------------------------------------------------------------
# su2_harmonics
# ---------------------------------------------------------------------------
@suite("su2_harmonics", "normal_form_confluence")
def _su_confluence(rng, fault):
    from .su2_harmonics import PolyFun, random_polyfun

    for _ in range(20):
        a, b, c = (random_polyfun(rng) for _ in range(3))
        if (a * b) * c != a * (b * c) or a * b != b * a:
            return _result(False, "product order")
        # build the same product monomial by monomial in shuffled order
        terms = list(a.terms.items())
        rng.shuffle(terms)
        acc = PolyFun()
        for e, k in terms:
            acc = acc + PolyFun.monomial(*e, k) * b
        if acc != a * b:
            return _result(False, "shuffled expansion")
    # a raw monomial containing u ub, reduced directly and as a shuffled product of variables
    names = ("u", "v", "ub", "vb")
    for _ in range(20):
        e = [rng.randint(0, 3) for _ in range(4)]
        letters = [n for n, k in zip(names, e) for _ in range(k)]
        rng.shuffle(letters)
        prod = PolyFun.const(1)
        for x in letters:
            prod = prod * PolyFun.var(x)
        if prod != PolyFun({tuple(e): 1}):
            return _result(False, f"monomial {e}")
    return _result(True)


def _commutator(A, B, f):
    return A(B(f)) - B(A(f))


@suite("su2_harmonics", "ladder_commutators")
def _su_commutators(rng, fault):
    from .su2_harmonics import left_derivation, monomials_up_to

    L = {k: (lambda f, k=k: left_derivation(k, f)) for k in ("x", "y", "z", "+", "-")}
    for f in monomials_up_to(6):
        if _commutator(L["-"], L["+"], f) != L["z"](f) * I:
            return _result(False, f"[L-,L+] on {f}")
        if _commutator(L["-"], L["z"], f) != L["-"](f) * (-I):
            return _result(False, f"[L-,Lz] on {f}")
        if _commutator(L["+"], L["z"], f) != L["+"](f) * I:
            return _result(False, f"[L+,Lz] on {f}")
        for a, b, c in (("x", "y", "z"), ("y", "z", "x"), ("z", "x", "y")):
            if _commutator(L[a], L[b], f) != L[c](f):
                return _result(False, f"[L{a},L{b}] on {f}")
    return _result(True)


@suite("su2_harmonics", "casimir_identities")
def _su_icomsu(rng, fault):
    from .su2_harmonics import casimir, left_derivation, lz, monomials_up_to

    for f in monomials_up_to(6):
        base = casimir(f) - lz(lz(f))
        if left_derivation("-", left_derivation("+", f)) * 2 != base + lz(f) * I:
            return _result(False, f"2L-L+ on {f}")
        if left_derivation("+", left_derivation("-", f)) * 2 != base - lz(f) * I:
            return _result(False, f"2L+L- on {f}")
    return _result(True)


@suite("su2_harmonics", "wigner_eigenrelations")
def _su_wigner(rng, fault):
    from .su2_harmonics import casimir, j_values, lz, right_derivation_z, wigner_labels, wigner

    for j in j_values(4):
        for lab in wigner_labels(j):
            D = wigner(lab)
            if casimir(D) != D * Num(-j * (j + 1)):
                return _result(False, f"L^2 {lab}")
            if lz(D) != D * Num(0, lab.n) or right_derivation_z(D) != D * Num(0, lab.m):
                return _result(False, f"L_z/R_z {lab}")
    return _result(True)


@suite("su2_harmonics", "wigner_span_orthogonality")
def _su_span(rng, fault):
    from .su2_harmonics import inner, j_values, wigner, wigner_labels

    for j in j_values(3):
        labs = wigner_labels(j)
        fs = [wigner(lab) for lab in labs]
        keys = sorted({e for f in fs for e in f.terms})
        rows = [[f.terms.get(e, ZERO) for e in keys] for f in fs]
        if la.rank(rows) != (2 * j + 1) ** 2:
            return _result(False, f"span at j={j}")
        for a in range(len(fs)):
            for b in range(a + 1, len(fs)):
                if inner(fs[a], fs[b]):
                    return _result(False, f"{labs[a]} vs {labs[b]}")
    # distinct j are orthogonal as well
    if inner(wigner(1, 0, 0), wigner(0, 0, 0)) or inner(wigner(2, 1, 1), wigner(1, 1, 1)):
        return _result(False, "across j")
    return _result(True)


@suite("su2_harmonics", "haar_antisymmetry")
def _su_antisym(rng, fault):
    from .su2_harmonics import inner, left_derivation, random_polyfun

    for _ in range(20):
        f, h = random_polyfun(rng), random_polyfun(rng)
        for a in ("x", "y", "z"):
            if inner(left_derivation(a, f), h) + inner(f, left_derivation(a, h)):
                return _result(False, a)
    return _result(True)


@suite("su2_harmonics", "frame_calculus")
def _su_frame(rng, fault):
    from .su2_harmonics import (
        CARTESIAN,
        form,
        frame_d,
        left_derivation,
        levi_civita,
        levi_civita_symbol,
        random_polyfun,
        theta,
    )

    # Maurer-Cartan: d theta^a = -1/2 eps_abc theta^b ^ theta^c
    for a in range(3):
        want = Multivector(3)
        for b in range(3):
            for c in range(3):
                e = levi_civita_symbol(a, b, c)
                if e:
                    want = want + wedge(theta("xyz"[b]), theta("xyz"[c])) * Fraction(-e, 2)
        if frame_d(theta("xyz"[a]), CARTESIAN) != want:
            return _result(False, f"Maurer-Cartan {a}")
    for _ in range(6):
        f = random_polyfun(rng)
        df = frame_d(form({0: f}))
        if df != form({1: left_derivation("x", f), 2: left_derivation("y", f), 4: left_derivation("z", f)}):
            return _result(False, "df")
        phi = form({1: random_polyfun(rng), 2: random_polyfun(rng), 4: random_polyfun(rng)})
        if frame_d(frame_d(phi)):
            return _result(False, "d^2")
        # torsion free: d = theta^a ^ nabla_a ; metric compatible: L_a g(x, y) = g(nabla x, y) + g(x, nabla y)
        alt = Multivector(3)
        for k in range(3):
            alt = alt + wedge(theta("xyz"[k]), levi_civita(k, phi))
        if alt != frame_d(phi):
            return _result(False, "torsion")
        psi = form({1: random_polyfun(rng), 2: random_polyfun(rng), 4: random_polyfun(rng)})
        for k in range(3):
            lhs = left_derivation("xyz"[k], _frame_dot(phi, psi))
            rhs = _frame_dot(levi_civita(k, phi), psi) + _frame_dot(phi, levi_civita(k, psi))
            if lhs != rhs:
                return _result(False, "metric compatibility")
    return _result(True)


def _frame_dot(a: Multivector, b: Multivector):
    from .su2_harmonics import PolyFun

    out = PolyFun()
    for m in (1, 2, 4):
        x, y = a.coeffs.get(m), b.coeffs.get(m)
        if x and y:
            out = out + x * y
    return out


# ---------------------------------------------------------------------------
# dirac_s3
# ---------------------------------------------------------------------------
_S3_OPERATORS = ("spin_s3", "kahler_s3", "spin_ideal_s3")
_J_MAX = Fraction(9, 2)


@suite("dirac_s3", "anti_hermitian")
def _ds_antiherm(rng, fault):
    from .dirac_s3 import hdr_dirac_block, spin_dirac_block, spin_on_ideal_block
    from .su2_harmonics import j_values

    worst = 0.0
    for j in j_values(_J_MAX):
        for build in (spin_dirac_block, hdr_dirac_block, spin_on_ideal_block):
            M = build(j).numeric()
            dev = float(np.linalg.norm(M + M.conj().T)) / max(1.0, float(np.linalg.norm(M)))
            worst = max(worst, dev)
    return _result(worst <= 1e-12, f"max relative deviation {worst:.2e}")


@suite("dirac_s3", "completeness")
def _ds_complete(rng, fault):
    from .dirac_s3 import hdr_spectrum_closed_form, spin_closed_form, spin_ideal_closed_form
    from .su2_harmonics import j_values

    for j in j_values(_J_MAX):
        d = int(2 * j + 1) ** 2
        for cf, s in ((spin_closed_form, 2), (hdr_spectrum_closed_form, 4), (spin_ideal_closed_form, 4)):
            if sum(k for _, k in cf(j)) != s * d:
                return _result(False, f"{cf.__name__} at j={j}")
    return _result(True)


@suite("dirac_s3", "eigenspinor_exactness")
def _ds_exact(rng, fault):
    from . import dirac_s3 as d
    from .su2_harmonics import j_values

    fams = (
        ("spin", d.spin_eigenspinor_basis, d.sigma_dot_l),
        ("kahler", d.hdr_eigenspinors, d.hdr_dirac_ladder),
        ("spin_ideal", d.spin_ideal_eigenspinors, d.spin_on_ideal_apply),
    )
    n = 0
    for name, fam, op in fams:
        for j in j_values(_J_MAX):
            for e in fam(j):
                n += 1
                if not e.residual_zero(op):
                    return _result(False, f"{name} {e.family} {e.label} j={j}")
    return _result(True, f"{n} eigenspinors")


@suite("dirac_s3", "spectra_match_closed_form")
def _ds_spectra(rng, fault):
    from .dirac_s3 import spectrum
    from .su2_harmonics import j_values

    for op in _S3_OPERATORS:
        for j in j_values(_J_MAX):
            if not spectrum(op, j).matched:
                return _result(False, f"{op} j={j}")
    return _result(True)


@suite("dirac_s3", "eigenspinor_orthogonality")
def _ds_orth(rng, fault):
    from . import dirac_s3 as d
    from .su2_harmonics import j_values

    worst = 0.0
    for fam, ncomp in ((d.spin_eigenspinor_basis, 2), (d.hdr_eigenspinors, 4), (d.spin_ideal_eigenspinors, 4)):
        for j in j_values(2):
            eigs = fam(j)
            M = d.eigenspinor_matrix(eigs, j, ncomp)
            M = M / np.maximum(np.linalg.norm(M, axis=0), 1e-300)
            G = np.abs(M.conj().T @ M)
            for a in range(len(eigs)):
                for b in range(len(eigs)):
                    if abs(eigs[a].value - eigs[b].value) > 1e-9:
                        worst = max(worst, float(G[a, b]))
    return _result(worst < 1e-10, f"max overlap {worst:.2e}")


@suite("dirac_s3", "ansatz_reduction")
def _ds_ansatz(rng, fault):
    from .dirac_s3 import SIGMA_L, ansatz_reduction, apply_op_matrix
    from .su2_harmonics import PolyFun, half_range, left_derivation, wigner

    for _ in range(8):
        j = Fraction(rng.randint(1, 8), 2)
        n = rng.choice([x for x in half_range(j) if x != -j])
        m = rng.choice(half_range(j))
        D = wigner(j, m, n)
        LpD = left_derivation("+", D)
        M = ansatz_reduction(j, n)
        # columns: images of (D, 0) and (0, L_+ D) in the (D, L_+ D) coordinates
        for col, comps in enumerate(((D, PolyFun()), (PolyFun(), LpD))):
            top, bot = apply_op_matrix(SIGMA_L, comps)
            if top != D * M[0][col] or bot != LpD * M[1][col]:
                return _result(False, f"j={j} n={n}")
        # lam^2 - i lam - j(j+1) = 0 for the eigenvalues i(j+1) and -ij
        tr = M[0][0] + M[1][1]
        det = M[0][0] * M[1][1] - M[0][1] * M[1][0]
        if tr != I or det != Num(j * (j + 1)):
            return _result(False, f"characteristic polynomial at j={j} n={n}")
    return _result(True)


@suite("dirac_s3", "killing_spinors")
def _ds_killing(rng, fault):
    from .dirac_s3 import KILLING_PHI, KILLING_PHI_PRIME, C2, SpinorField, killing_check, killing_decompositions

    alpha = Num(0, HALF.re)
    ok = killing_check(SpinorField(KILLING_PHI, C2), alpha) and killing_check(SpinorField(KILLING_PHI_PRIME, C2), alpha)
    ok = ok and all(v for _, v in killing_decompositions())
    return _result(ok)


@suite("dirac_s3", "laplacians")
def _ds_lap(rng, fault):
    from .dirac_s3 import laplacian_check
    from .su2_harmonics import j_values

    for j in j_values(2):
        for rec in laplacian_check(j):
            if not rec.ok:
                return _result(False, f"{rec.operator} j={j}")
    return _result(True)


@suite("dirac_s3", "connections")
def _ds_conn(rng, fault):
    from .dirac_s3 import IP, SpinorField, connection_forms, covariant_dirac, hdr_dirac_apply, slashed_d_ideal
    from .su2_harmonics import random_polyfun

    A_hdr, A_spin = connection_forms()
    for _ in range(4):
        psi = SpinorField(tuple(random_polyfun(rng) for _ in range(4)), IP)
        if covariant_dirac(A_hdr, psi) != hdr_dirac_apply(psi) or covariant_dirac(A_spin, psi) != slashed_d_ideal(psi):
            return _result(False)
    return _result(not (A_hdr - A_spin).is_zero())


# ---------------------------------------------------------------------------
# dirac_s2
# ---------------------------------------------------------------------------
@suite("dirac_s2", "equivariance")
def _d2_equiv(rng, fault):
    from .dirac_s2 import S2Spinor, dirac_s2_apply, module_decompose
    from .su2_harmonics import wigner

    for _ in range(6):
        j = rng.randint(1, 3)
        m = rng.randint(-j, j)
        m2 = rng.randint(-j, j)
        psi = S2Spinor(wigner(j, m, 0) * random_num(rng), module_decompose(wigner(j, m2, 1) * random_num(rng), -1))
        out = dirac_s2_apply(psi)
        if not out.is_equivariant():
            return _result(False, f"j={j}")
    return _result(True)


@suite("dirac_s2", "hodge_square")
def _d2_star(rng, fault):
    from .dirac_s2 import EquivariantForm, hodge_s2
    from .su2_harmonics import PolyFun, wigner

    z = PolyFun()
    f = wigner(1, 0, 0)
    c = wigner(1, 1, 1)
    cp = wigner(1, -1, -1)
    for phi, sign in (
        (EquivariantForm(f, z, z, z), 1),
        (EquivariantForm(z, z, z, f), 1),
        (EquivariantForm(z, c, z, z), -1),
        (EquivariantForm(z, z, cp, z), -1),
    ):
        twice = hodge_s2(hodge_s2(phi))
        want = EquivariantForm(*(x * sign for x in phi.parts()))
        if twice != want:
            return _result(False, str(phi))
    return _result(True, "star^2 = +1 on degrees 0, 2 and -1 on degree 1")


@suite("dirac_s2", "spectrum")
def _d2_spectrum(rng, fault):
    from .dirac_s2 import s2_eigenspinors, s2_spectrum

    for j in range(5):
        if not s2_spectrum(j).matched:
            return _result(False, f"j={j}")
        if not all(e.residual_zero() for e in s2_eigenspinors(j)):
            return _result(False, f"eigenspinor j={j}")
    return _result(True)


@suite("dirac_s2", "no_half_integer_sector")
def _d2_half(rng, fault):
    from .dirac_s2 import dirac_s2_block, equivariant_sector

    for k in (1, 3, 5, 7):
        j = Fraction(k, 2)
        if equivariant_sector(j):
            return _result(False, f"j={j}")
        try:
            dirac_s2_block(j)
            return _result(False, f"block built at j={j}")
        except ValueError:
            pass
    return _result(True)


@suite("dirac_s2", "projector")
def _d2_proj(rng, fault):
    from .dirac_s2 import s2_projector_check

    rec = s2_projector_check()
    return _result(rec.ok, str(rec))


@suite("dirac_s2", "local_chart")
def _d2_local(rng, fault):
    from .dirac_s2 import local_chart_suite

    rec = local_chart_suite()
    # the alternate pin-conjugation rule is expected to fail; only the derived one counts
    bad = [f for f in rec.failures() if f != "pin_conjugation_alternate"]
    return _result(not bad, ", ".join(bad) or "derived pin-conjugation rule holds")
