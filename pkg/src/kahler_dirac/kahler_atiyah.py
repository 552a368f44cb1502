"""Exterior and Clifford algebra over a finite-dimensional metric space.

Multivectors are sparse maps from blade bitmasks to coefficients. Bit ``a``
(0-based) of a mask stands for the generator ``e_{a+1}``; user-facing frame
indices are 1-based, matching the display names ``e1, e2, ...``.

The metric ``g`` is the bilinear form on the generators themselves, so
``e_a v e_b + e_b v e_a = 2 g[a][b]``. When the generators are coframe
covectors this is the inverse metric of the underlying manifold.

Coefficients are usually :class:`~kahler_dirac.numbers.Num`, but every
operation here only needs ``+``, ``*``, negation and truthiness, so
multivectors with polynomial coefficients (frame forms on S^3) reuse the
same kernel.

Example:
    >>> g = Metric.euclidean(3)
    >>> str(clifford(e(3, 1), e(3, 2), g))
    'e1^e2'
    >>> str(hodge_star(e(3, 1, 2), g))
    'e3'
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Any, Iterable, Iterator, Sequence

from gmpy2 import mpq

from . import exact_linalg as la
from .numbers import ONE, ZERO, Num, num

MAX_DIM = 8


class DimensionMismatch(ValueError):
    """Operands (or operand and metric) live in different dimensions."""


# ---------------------------------------------------------------------------
# metric
# ---------------------------------------------------------------------------
@dataclass(frozen=True)
class Metric:
    """Symmetric non-degenerate bilinear form on the generators."""

    g: tuple[tuple[Num, ...], ...]
    g_inv: tuple[tuple[Num, ...], ...] = field(init=False, compare=False, repr=False)
    signature: int = field(init=False, compare=False)

    def __post_init__(self):
        rows = tuple(tuple(num(x) for x in r) for r in self.g)
        n = len(rows)
        if not 1 <= n <= MAX_DIM or any(len(r) != n for r in rows):
            raise ValueError(f"metric must be square with 1 <= N <= {MAX_DIM}")
        for a in range(n):
            for b in range(n):
                if rows[a][b] != rows[b][a]:
                    raise ValueError("metric is not symmetric")
        try:
            inv = la.inverse(rows)
        except ZeroDivisionError:
            raise ValueError("metric is degenerate") from None
        object.__setattr__(self, "g", rows)
        object.__setattr__(self, "g_inv", tuple(tuple(r) for r in inv))
        object.__setattr__(self, "signature", _sign_of_det(rows))

    @property
    def dim(self) -> int:
        return len(self.g)

    @classmethod
    def euclidean(cls, n: int) -> Metric:
        return cls.diagonal([1] * n)

    @classmethod
    def diagonal(cls, entries: Sequence) -> Metric:
        n = len(entries)
        return cls(tuple(tuple(num(entries[a]) if a == b else ZERO for b in range(n)) for a in range(n)))

    def det(self) -> Num:
        return _det(self.g)

    def bilinear(self, x: Sequence[Num], y: Sequence[Num]) -> Num:
        acc = ZERO
        for a, xa in enumerate(x):
            if not xa:
                continue
            for b, yb in enumerate(y):
                if yb and self.g[a][b]:
                    acc = acc + xa * self.g[a][b] * yb
        return acc


def _det(rows) -> Num:
    m = la.copy_matrix(rows)
    n = len(m)
    det = ONE
    for c in range(n):
        piv = next((k for k in range(c, n) if m[k][c]), None)
        if piv is None:
            return ZERO
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            det = -det
        det = det * m[c][c]
        inv = m[c][c].inverse()
        for k in range(c + 1, n):
            if m[k][c]:
                f = m[k][c] * inv
                m[k] = [a - f * b for a, b in zip(m[k], m[c])]
    return det


def _sign_of_det(rows) -> int:
    d = _det(rows)
    if not d.is_rational:
        return 1
    return 1 if d.re > 0 else -1


# ---------------------------------------------------------------------------
# bit helpers
# ---------------------------------------------------------------------------
def grade_of(mask: int) -> int:
    return bin(mask).count("1")


def _bits(mask: int) -> Iterator[int]:
    a = 0
    while mask:
        if mask & 1:
            yield a
        mask >>= 1
        a += 1


def reorder_sign(a: int, b: int) -> int:
    """Sign of sorting the concatenated factors of blades a and b."""
    a >>= 1
    swaps = 0
    while a:
        swaps += bin(a & b).count("1")
        a >>= 1
    return -1 if swaps & 1 else 1


def _strip_sign(mask: int, bit: int) -> int:
    # sign picked up by moving generator `bit` to the front of the blade
    return -1 if bin(mask & ((1 << bit) - 1)).count("1") & 1 else 1


def _mul_sign(c, s: int):
    return c if s == 1 else -c


def _add_into(out: dict, key, term) -> None:
    if key in out:
        out[key] = out[key] + term
    else:
        out[key] = term


# ---------------------------------------------------------------------------
# multivector
# ---------------------------------------------------------------------------
class Multivector:
    """Sparse element of the exterior algebra; zero coefficients are dropped."""

    __slots__ = ("dim", "coeffs")

    def __init__(self, dim: int, coeffs: dict[int, Any] | None = None):
        if not 1 <= dim <= MAX_DIM:
            raise ValueError(f"dimension must be in 1..{MAX_DIM}")
        self.dim = dim
        clean = {}
        for mask, c in (coeffs or {}).items():
            if mask >= 1 << dim or mask < 0:
                raise ValueError(f"blade mask {mask} out of range for dim {dim}")
            if isinstance(c, (int, Fraction, mpq)):
                c = num(c)
            if c:
                clean[mask] = c
        self.coeffs = clean

    @classmethod
    def scalar(cls, dim: int, c=1) -> Multivector:
        return cls(dim, {0: c})

    @classmethod
    def blade(cls, dim: int, mask: int, c=1) -> Multivector:
        return cls(dim, {mask: c})

    @classmethod
    def vector(cls, dim: int, comps: Sequence) -> Multivector:
        return cls(dim, {1 << a: c for a, c in enumerate(comps)})

    # -- structure ------------------------------------------------------
    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Num)):
            other = Multivector.scalar(self.dim, other)
        if not isinstance(other, Multivector):
            return NotImplemented
        return self.dim == other.dim and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.dim, tuple(sorted(self.coeffs.items(), key=lambda kv: kv[0]))))

    def grades(self) -> set[int]:
        return {grade_of(m) for m in self.coeffs}

    def grade_part(self, k: int) -> Multivector:
        return Multivector(self.dim, {m: c for m, c in self.coeffs.items() if grade_of(m) == k})

    def scalar_part(self):
        return self.coeffs.get(0, ZERO)

    def map_coeffs(self, fn) -> Multivector:
        return Multivector(self.dim, {m: fn(c) for m, c in self.coeffs.items()})

    def involution(self) -> Multivector:
        """Degree involution: (-1)^k on grade k."""
        return Multivector(self.dim, {m: _mul_sign(c, -1 if grade_of(m) & 1 else 1) for m, c in self.coeffs.items()})

    def reverse(self) -> Multivector:
        return Multivector(
            self.dim,
            {m: _mul_sign(c, -1 if (grade_of(m) * (grade_of(m) - 1) // 2) & 1 else 1) for m, c in self.coeffs.items()},
        )

    def conjugate(self) -> Multivector:
        """Complex conjugation of the coefficients."""
        return self.map_coeffs(lambda c: c.conjugate())

    # -- linear structure -----------------------------------------------
    def _check(self, other: Multivector) -> None:
        if other.dim != self.dim:
            raise DimensionMismatch(f"dimension mismatch: {self.dim} vs {other.dim}")

    def __add__(self, other) -> Multivector:
        if not isinstance(other, Multivector):
            other = Multivector.scalar(self.dim, other)
        self._check(other)
        out = dict(self.coeffs)
        for m, c in other.coeffs.items():
            _add_into(out, m, c)
        return Multivector(self.dim, out)

    __radd__ = __add__

    def __neg__(self) -> Multivector:
        return Multivector(self.dim, {m: -c for m, c in self.coeffs.items()})

    def __sub__(self, other) -> Multivector:
        if not isinstance(other, Multivector):
            other = Multivector.scalar(self.dim, other)
        return self + (-other)

    def __rsub__(self, other) -> Multivector:
        return (-self) + other

    def __mul__(self, c) -> Multivector:
        """Scalar multiplication only; use :func:`clifford` or ``^`` otherwise."""
        if isinstance(c, Multivector):
            raise TypeError("use clifford(a, b, g) or a ^ b for products of multivectors")
        if isinstance(c, (int, Fraction, mpq)):
            c = num(c)
        return Multivector(self.dim, {m: x * c for m, x in self.coeffs.items()})

    def __rmul__(self, c) -> Multivector:
        if isinstance(c, (int, Fraction, mpq)):
            c = num(c)
        return Multivector(self.dim, {m: c * x for m, x in self.coeffs.items()})

    def __truediv__(self, c) -> Multivector:
        inv = num(c).inverse()
        return self * inv

    def __xor__(self, other: Multivector) -> Multivector:
        return wedge(self, other)

    # -- printing -------------------------------------------------------
    def __str__(self) -> str:
        return format_multivector(self)

    def __repr__(self) -> str:
        return f"Multivector({self.dim}, {self})"

    # -- serialization --------------------------------------------------
    def to_json(self) -> dict:
        terms = []
        for m in sorted(self.coeffs):
            re, im = num(self.coeffs[m]).gaussian_parts()
            terms.append(
                {"mask": m, "re_num": re.numerator, "re_den": re.denominator, "im_num": im.numerator, "im_den": im.denominator}
            )
        return {"dim": self.dim, "terms": terms}

    @classmethod
    def from_json(cls, data: dict) -> Multivector:
        coeffs = {}
        for t in data["terms"]:
            coeffs[int(t["mask"])] = Num(Fraction(t["re_num"], t["re_den"]), Fraction(t["im_num"], t["im_den"]))
        return cls(int(data["dim"]), coeffs)


def blade_name(mask: int) -> str:
    if mask == 0:
        return "1"
    return "^".join(f"e{a + 1}" for a in _bits(mask))


def format_multivector(m: Multivector) -> str:
    if not m.coeffs:
        return "0"
    pieces = []
    for mask in sorted(m.coeffs, key=lambda k: (grade_of(k), k)):
        c = m.coeffs[mask]
        txt = str(c)
        name = blade_name(mask)
        if mask == 0:
            piece = txt
        elif txt == "1":
            piece = name
        elif txt == "-1":
            piece = "-" + name
        elif any(ch in txt[1:] for ch in "+-") or "*" in txt:
            piece = f"({txt})*{name}"
        else:
            piece = f"{txt}*{name}"
        pieces.append(piece)
    out = pieces[0]
    for p in pieces[1:]:
        out += " - " + p[1:] if p.startswith("-") else " + " + p
    return out


def e(dim: int, *indices: int) -> Multivector:
    """Wedge of generators with 1-based indices, e.g. ``e(3, 1, 2)`` is e1^e2."""
    out = Multivector.scalar(dim, 1)
    for a in indices:
        if not 1 <= a <= dim:
            raise DimensionMismatch(f"generator e{a} does not exist in dimension {dim}")
        out = wedge(out, Multivector.blade(dim, 1 << (a - 1)))
    return out


def ensure_same_dim(*ms: Multivector) -> int:
    dims = {m.dim for m in ms}
    if len(dims) != 1:
        raise DimensionMismatch(f"dimension mismatch: {sorted(dims)}")
    return dims.pop()


# ---------------------------------------------------------------------------
# wedge and contractions
# ---------------------------------------------------------------------------
def wedge(a: Multivector, b: Multivector) -> Multivector:
    dim = ensure_same_dim(a, b)
    out: dict[int, Any] = {}
    for ma, ca in a.coeffs.items():
        for mb, cb in b.coeffs.items():
            if ma & mb:
                continue
            _add_into(out, ma | mb, _mul_sign(ca * cb, reorder_sign(ma, mb)))
    return Multivector(dim, out)


def dual_contract(bit: int, m: Multivector) -> Multivector:
    """Interior product with the dual basis vector of generator ``bit`` (0-based)."""
    out = {}
    for mask, c in m.coeffs.items():
        if mask >> bit & 1:
            out[mask ^ (1 << bit)] = _mul_sign(c, _strip_sign(mask, bit))
    return Multivector(m.dim, out)


def contract(v: Sequence, m: Multivector, g: Metric) -> Multivector:
    """Metric contraction i_v with i_v(w) = g(v, w) on grade one."""
    if len(v) != m.dim or g.dim != m.dim:
        raise DimensionMismatch("dimension mismatch in contraction")
    comps = [ZERO] * m.dim
    for a, va in enumerate(v):
        va = num(va)
        if not va:
            continue
        for b in range(m.dim):
            if g.g[a][b]:
                comps[b] = comps[b] + va * g.g[a][b]
    out = Multivector(m.dim)
    for b, cb in enumerate(comps):
        if cb:
            out = out + dual_contract(b, m) * cb
    return out


def _generator_contract(a: int, m: Multivector, g: Metric) -> Multivector:
    out: dict[int, Any] = {}
    for b in range(m.dim):
        gab = g.g[a][b]
        if not gab:
            continue
        for mask, c in dual_contract(b, m).coeffs.items():
            _add_into(out, mask, c * gab)
    return Multivector(m.dim, out)


# ---------------------------------------------------------------------------
# Clifford product: closed finite sum over iterated contractions
# ---------------------------------------------------------------------------
@lru_cache(maxsize=None)
def _clifford_blades(g: Metric, ma: int, mb: int) -> tuple[tuple[int, Num], ...]:
    n = g.dim
    result: dict[int, Num] = {}
    state: dict[tuple[int, int], Num] = {(ma, mb): ONE}
    s, fact = 0, 1
    while state:
        sgn = -1 if (s * (s - 1) // 2) & 1 else 1
        scale = Num(mpq(sgn, fact))
        for (a, b), c in state.items():
            if a & b:
                continue
            inv = -1 if (s * grade_of(a)) & 1 else 1
            term = c * scale
            _add_into(result, a | b, _mul_sign(term, inv * reorder_sign(a, b)))
        s += 1
        fact *= s
        nxt: dict[tuple[int, int], Num] = {}
        for (a, b), c in state.items():
            for x in _bits(a):
                sa = _strip_sign(a, x)
                for y in _bits(b):
                    gxy = g.g[x][y]
                    if not gxy:
                        continue
                    _add_into(nxt, (a ^ (1 << x), b ^ (1 << y)), _mul_sign(c * gxy, sa * _strip_sign(b, y)))
        state = {k: v for k, v in nxt.items() if v}
        if s > n:
            break
    return tuple((m, c) for m, c in sorted(result.items()) if c)


def clifford(a: Multivector, b: Multivector, g: Metric) -> Multivector:
    """Clifford product a v b via the finite contraction sum."""
    dim = ensure_same_dim(a, b)
    if g.dim != dim:
        raise DimensionMismatch("metric dimension mismatch")
    out: dict[int, Any] = {}
    for ma, ca in a.coeffs.items():
        for mb, cb in b.coeffs.items():
            prod = ca * cb
            for mask, k in _clifford_blades(g, ma, mb):
                if k == ONE:
                    term = prod
                elif k == -ONE:
                    term = -prod
                else:
                    term = prod * k
                _add_into(out, mask, term)
    return Multivector(dim, out)


def clifford_chain(g: Metric, *factors: Multivector) -> Multivector:
    out = factors[0]
    for f in factors[1:]:
        out = clifford(out, f, g)
    return out


# ---------------------------------------------------------------------------
# independent oracle: left multiplication operators built from generators
# ---------------------------------------------------------------------------
def phi_map(v_index: int, m: Multivector, g: Metric) -> Multivector:
    """Left action of generator ``e_{v_index}`` (1-based): e_a ^ m + i_{e_a} m."""
    if not 1 <= v_index <= m.dim:
        raise ValueError(f"frame index {v_index} out of range")
    a = v_index - 1
    return wedge(Multivector.blade(m.dim, 1 << a), m) + _generator_contract(a, m, g)


def _op_compose(p: dict, q: dict) -> dict:
    # (p o q)[col] = p applied to q[col]
    out = {}
    for col, vec in q.items():
        acc: dict[int, Num] = {}
        for row, c in vec.items():
            for r2, c2 in p.get(row, {}).items():
                _add_into(acc, r2, c2 * c)
        acc = {k: v for k, v in acc.items() if v}
        if acc:
            out[col] = acc
    return out


def _op_lincomb(p: dict, cp: Num, q: dict, cq: Num) -> dict:
    out: dict[int, dict] = {}
    for op, c in ((p, cp), (q, cq)):
        for col, vec in op.items():
            tgt = out.setdefault(col, {})
            for row, x in vec.items():
                _add_into(tgt, row, x * c)
    return {col: {r: x for r, x in vec.items() if x} for col, vec in out.items()}


@lru_cache(maxsize=None)
def _phi_operators(g: Metric) -> dict[int, dict]:
    n = g.dim
    gens = {}
    for a in range(n):
        op = {}
        for col in range(1 << n):
            img = phi_map(a + 1, Multivector.blade(n, col), g)
            if img:
                op[col] = dict(img.coeffs)
        gens[a] = op
    ops: dict[int, dict] = {0: {col: {col: ONE} for col in range(1 << n)}}
    half = Num(mpq(1, 2))
    for mask in sorted(range(1, 1 << n), key=grade_of):
        low = (mask & -mask).bit_length() - 1
        rest = mask ^ (1 << low)
        k = grade_of(rest)
        # e_low ^ X = (e_low v X + (-1)^k X v e_low) / 2
        left = _op_compose(gens[low], ops[rest])
        right = _op_compose(ops[rest], gens[low])
        ops[mask] = _op_lincomb(left, half, right, half if k % 2 == 0 else -half)
    return ops


def clifford_via_phi(a: Multivector, b: Multivector, g: Metric) -> Multivector:
    """Clifford product evaluated through the extended left-action homomorphism."""
    dim = ensure_same_dim(a, b)
    ops = _phi_operators(g)
    out: dict[int, Any] = {}
    for ma, ca in a.coeffs.items():
        op = ops[ma]
        for mb, cb in b.coeffs.items():
            for row, k in op.get(mb, {}).items():
                _add_into(out, row, ca * cb * k)
    return Multivector(dim, out)


# ---------------------------------------------------------------------------
# scalar products and Hodge duality
# ---------------------------------------------------------------------------
def _contract_chain(mask: int, target: Multivector, g: Metric) -> Multivector:
    # apply i_{e_a} for the generators of `mask` in ascending order
    out = target
    for a in _bits(mask):
        out = _generator_contract(a, out, g)
    return out


def scalar_product_ext(a: Multivector, b: Multivector, g: Metric):
    """Bilinear exterior scalar product; distinct grades are orthogonal.

    On blades of equal grade this is i_{e_{a_s}} ... i_{e_{a_1}} applied to
    the second blade, with the lowest index contracted first.
    """
    ensure_same_dim(a, b)
    acc = ZERO
    for ma, ca in a.coeffs.items():
        part = Multivector(b.dim, {mb: cb for mb, cb in b.coeffs.items() if grade_of(mb) == grade_of(ma)})
        if not part:
            continue
        val = _contract_chain(ma, part, g).scalar_part()
        if val:
            acc = acc + ca * val
    return acc


def scalar_product_cl(a: Multivector, b: Multivector, g: Metric):
    """Clifford scalar product: scalar part of reverse(a) v b."""
    return scalar_product_ext(Multivector.scalar(a.dim, 1), clifford(a.reverse(), b, g), g)


def hermitian_product(a: Multivector, b: Multivector, g: Metric):
    """Sesquilinear version of the exterior scalar product (conjugate-linear in a)."""
    return scalar_product_ext(a.conjugate(), b, g)


def _rational_sqrt(x: mpq) -> mpq | None:
    n, d = int(x.numerator), int(x.denominator)
    rn, rd = math.isqrt(n), math.isqrt(d)
    if rn * rn == n and rd * rd == d:
        return mpq(rn, rd)
    return None


def volume_form(g: Metric, orientation=1) -> Multivector:
    det = g.det()
    if not det.is_rational:
        raise ValueError("volume factor needs a real metric")
    root = _rational_sqrt(abs(det.re))
    if root is None:
        raise ValueError("|det g|^(1/2) is irrational; rescale the frame to an orthonormal one")
    return Multivector.blade(g.dim, (1 << g.dim) - 1, num(orientation) / Num(root))


def hodge_star(m: Multivector, g: Metric, orientation=1) -> Multivector:
    """Hodge dual built from iterated contractions of the volume form.

    ``orientation`` is normally +1 or -1. Complex frames such as the ladder
    coframe on S^3 need an imaginary unit here to recover the real volume form.
    """
    if g.dim != m.dim:
        raise DimensionMismatch("metric dimension mismatch")
    mu = volume_form(g, orientation)
    out = Multivector(m.dim)
    for mask, c in m.coeffs.items():
        out = out + _contract_chain(mask, mu, g) * c
    return out


def basis_blades(dim: int) -> Iterable[Multivector]:
    for mask in range(1 << dim):
        yield Multivector.blade(dim, mask)
