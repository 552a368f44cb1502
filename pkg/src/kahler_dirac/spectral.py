"""Block assembly on W_j sectors, numeric eigensolves and closed-form comparison.

Operators are assembled exactly in the Wigner basis: column ``k`` of a block
is the expansion of ``op(basis_k)``. Wigner functions are orthogonal but not
normalised, so the numeric matrix handed to the eigensolver is rescaled by
the square roots of the exact Gram diagonal, which makes the operators
anti-Hermitian.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from .numbers import ZERO, Num
from .su2_harmonics import PolyFun, half_range, inner, wigner, wigner_coordinates

ANTI_HERMITIAN_TOL = 1e-12
CLUSTER_TOL = 1e-9

Label = tuple  # (m, n, component)


@dataclass
class BlockOperator:
    operator: str
    j: Fraction
    matrix: list[list[Num]]
    basis_labels: list[Label]
    weights: list[Fraction]  # squared norms of the basis elements

    @property
    def dim(self) -> int:
        return len(self.basis_labels)

    def numeric(self) -> np.ndarray:
        """Matrix in the orthonormalised basis."""
        s = np.sqrt(np.array([float(w) for w in self.weights]))
        M = np.array([[complex(x) for x in row] for row in self.matrix], dtype=complex)
        return (s[:, None] * M) / s[None, :]


@dataclass
class SpectrumReport:
    operator: str
    j: Fraction
    basis_dim: int
    eigenvalues: list[tuple[complex, int]]
    closed_form: list[tuple[complex, int]]
    rows: list[dict] = field(default_factory=list)
    matched: bool = False

    def to_json(self) -> dict:
        return {
            "operator": self.operator,
            "j": _json_half(self.j),
            "basis_dim": self.basis_dim,
            "matched": self.matched,
            "eigenvalues": self.rows,
        }


def _json_half(j: Fraction):
    return int(j) if j.denominator == 1 else float(j)


def rounded(x: float) -> float:
    # 10 decimals keeps golden files bit-stable across BLAS builds
    r = round(x, 10)
    return 0.0 if r == 0 else r


def cluster(values: Sequence[complex], tol: float) -> list[tuple[complex, int]]:
    out: list[list] = []
    for v in sorted(values, key=lambda z: (z.imag, z.real)):
        if out and abs(v - out[-1][0] / out[-1][1]) <= tol:
            out[-1][0] += v
            out[-1][1] += 1
        else:
            out.append([v, 1])
    return [(s / k, k) for s, k in out]


def eigensolve(block: BlockOperator, closed_form: Sequence[tuple[complex, int]] = ()) -> SpectrumReport:
    """Hermitian eigensolve of i*B for an anti-Hermitian block B."""
    M = block.numeric()
    norm = max(np.linalg.norm(M), 1.0)
    dev = np.linalg.norm(M + M.conj().T)
    if dev > ANTI_HERMITIAN_TOL * norm:
        raise ValueError(f"block is not anti-Hermitian (deviation {dev:.3e}); basis normalisation is wrong")
    if block.dim:
        evals = np.linalg.eigvalsh(1j * M)
        values = [complex(0.0, -1.0) * complex(x) for x in evals]
    else:
        values = []
    # eigvalsh returns real x with i*M v = x v, so M v = -i x v
    clusters = cluster(values, CLUSTER_TOL * norm)
    predicted = [(complex(v), int(k)) for v, k in closed_form if k]
    report = SpectrumReport(block.operator, block.j, block.dim, clusters, predicted)
    report.rows, report.matched = compare(clusters, predicted, CLUSTER_TOL * norm)
    return report


def compare(found, predicted, tol) -> tuple[list[dict], bool]:
    rows = []
    remaining = list(predicted)
    ok = True
    for val, mult in found:
        hit = next((p for p in remaining if abs(p[0] - val) <= tol), None)
        row = {
            "im": rounded(val.imag),
            "re": rounded(val.real),
            "mult": mult,
            "predicted_im": rounded(hit[0].imag) if hit else None,
            "predicted_mult": hit[1] if hit else None,
            "matched": bool(hit and hit[1] == mult),
        }
        if hit:
            remaining.remove(hit)
        ok = ok and row["matched"] and abs(val.real) < 1e-12 * max(1.0, abs(val))
        rows.append(row)
    return rows, ok and not remaining


# ---------------------------------------------------------------------------
# assembly
# ---------------------------------------------------------------------------
def wigner_norm(j, m, n) -> Fraction:
    v = inner(wigner(j, m, n), wigner(j, m, n))
    re, im = v.gaussian_parts()
    if im or re <= 0:
        raise ValueError("Gram entry is not a positive rational")
    return re


def assemble(
    operator: str,
    j,
    labels: Sequence[Label],
    element: Callable[[Label], Sequence[PolyFun]],
    expand: Callable[[Sequence[PolyFun]], dict[Label, Num]],
    apply: Callable[[Sequence[PolyFun]], Sequence[PolyFun]],
    weight: Callable[[Label], Fraction],
) -> BlockOperator:
    index = {lab: k for k, lab in enumerate(labels)}
    n = len(labels)
    M = [[ZERO] * n for _ in range(n)]
    for col, lab in enumerate(labels):
        image = apply(element(lab))
        for lab2, c in expand(image).items():
            if lab2 not in index:
                raise ValueError(f"image leaves the block: component {lab2}")
            M[index[lab2]][col] = c
    return BlockOperator(operator, Fraction(j), M, list(labels), [weight(lab) for lab in labels])


def expand_components(comps: Sequence[PolyFun], j) -> dict[Label, Num]:
    """Wigner coordinates of every component, keyed by (m, n, component)."""
    out = {}
    for c, f in enumerate(comps):
        if not f:
            continue
        for (m, n), x in wigner_coordinates(f, j).items():
            if x:
                out[(m, n, c)] = x
    return out


def sector_labels(j, ncomp: int) -> list[Label]:
    return [(m, n, c) for m in half_range(j) for n in half_range(j) for c in range(ncomp)]


def unit_element(j, ncomp: int) -> Callable[[Label], list[PolyFun]]:
    def build(lab: Label) -> list[PolyFun]:
        m, n, c = lab
        comps = [PolyFun() for _ in range(ncomp)]
        comps[c] = wigner(j, m, n)
        return comps

    return build


def block_square(block: BlockOperator) -> list[list[Num]]:
    from .exact_linalg import matmul

    return matmul(block.matrix, block.matrix)


def exact_equal(a, b) -> bool:
    return all(x == y for ra, rb in zip(a, b) for x, y in zip(ra, rb))


def numeric_close(a, b, tol: float = 1e-10) -> bool:
    A = np.array([[complex(x) for x in r] for r in a])
    B = np.array([[complex(x) for x in r] for r in b])
    return bool(np.max(np.abs(A - B), initial=0.0) <= tol)


def sqrt_or_float(q: Fraction) -> float:
    return math.sqrt(float(q))
