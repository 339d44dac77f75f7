"""Exact-rational construction of harmonic and biharmonic coefficient tables.

A multi-homogeneous candidate of degrees (d_1, ..., d_m) is

    F = sum_k c_k * prod_i f_i**(d_i - k_i) * t_i**k_i,

where t_i is the (closed form) tension of f_i, k ranges over the box
0 <= k_i <= d_i, and the f_i come from one quadruple family with
conformality constant mu.  Applying the tension field to a single box
monomial stays inside the box, with coefficients given by the product
rules; collecting terms turns "F is harmonic" into the homogeneous
linear system

    -2*mu*c_k*(sigma^2 - sigma) =
        sum_j c_{k - e_j} * (d_j + 1 - k_j) * (sum_i (d_i + k_i) - 1),

with sigma = sum_i k_i.  Its solution space has dimension m, freely
parametrized by the coefficients at the unit multi-indices.

Biharmonicity is handled by rewriting tau(F) in the same monomial basis
(the ``tension_table`` map below) and demanding that *its* coefficients
solve the harmonic system; the solution space gains one dimension,
freely parametrized by c at the zero index (the proper direction) plus
the unit indices (the harmonic directions).

All systems are solved with exact Fraction arithmetic; tables are exact,
and the numerical operators only enter when a table is assembled into an
evaluable expression.
"""

from __future__ import annotations

import enum
import itertools
import json
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import DegenerateQuotient, DimensionMismatch, InconsistentSystem, ZeroVector
from .forms import (
    Const,
    FormExpr,
    LinearForm,
    Power,
    Product,
    QuadrupleFamily,
    Quotient,
    RationalExpr,
    Sum,
)
from .groups import GroupKind, GroupSpec

__all__ = [
    "CoeffTable",
    "FamilyKind",
    "SolutionFamily",
    "box_indices",
    "harmonic_coefficients",
    "biharmonic_coefficients",
    "harmonic_family",
    "biharmonic_family",
    "tension_table",
    "harmonic_residuals",
    "is_harmonic_table",
    "is_biharmonic_table",
    "build_expression",
    "tension_power_family",
    "eigenfamily_constants",
    "column_ratio_family",
    "rational_morphism",
]


def _frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


def box_indices(degrees: tuple[int, ...]):
    """Lexicographic multi-indices 0 <= k_i <= d_i."""
    return itertools.product(*(range(d + 1) for d in degrees))


def _dec(idx: tuple[int, ...], j: int) -> tuple[int, ...]:
    return idx[:j] + (idx[j] - 1,) + idx[j + 1 :]


class CoeffTable:
    """Exact multi-index coefficients of one multi-homogeneous candidate.

    Out-of-box indices are implicitly zero; zero entries are not stored.
    """

    __slots__ = ("degrees", "coeffs")

    def __init__(self, degrees, coeffs: dict):
        self.degrees = tuple(int(d) for d in degrees)
        clean = {}
        for idx, value in coeffs.items():
            idx = tuple(int(k) for k in idx)
            if len(idx) != len(self.degrees):
                raise DimensionMismatch(f"index {idx} does not match degrees {self.degrees}")
            value = _frac(value)
            if value != 0:
                clean[idx] = value
        self.coeffs = clean

    def get(self, idx) -> Fraction:
        return self.coeffs.get(tuple(idx), Fraction(0))

    def items(self):
        return sorted(self.coeffs.items())

    def is_zero(self) -> bool:
        return not self.coeffs

    def scale(self, factor) -> "CoeffTable":
        factor = _frac(factor)
        return CoeffTable(self.degrees, {k: v * factor for k, v in self.coeffs.items()})

    def __add__(self, other: "CoeffTable") -> "CoeffTable":
        if self.degrees != other.degrees:
            raise DimensionMismatch("cannot add tables of different degree boxes")
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out.get(k, Fraction(0)) + v
        return CoeffTable(self.degrees, out)

    def __eq__(self, other):
        if not isinstance(other, CoeffTable):
            return NotImplemented
        return self.degrees == other.degrees and self.coeffs == other.coeffs

    __hash__ = None

    def proportional_to(self, other: "CoeffTable") -> bool:
        """True iff the tables agree up to one overall rational scale."""
        if self.degrees != other.degrees:
            return False
        if self.is_zero() or other.is_zero():
            return self.is_zero() and other.is_zero()
        if set(self.coeffs) != set(other.coeffs):
            return False
        idx = next(iter(sorted(self.coeffs)))
        ratio = other.coeffs[idx] / self.coeffs[idx]
        return all(other.coeffs[k] == v * ratio for k, v in self.coeffs.items())

    def single_degree(self) -> tuple[Fraction, ...]:
        """The (c_0, ..., c_d) tuple for one-variable tables."""
        if len(self.degrees) != 1:
            raise DimensionMismatch("single_degree applies to one-variable tables")
        d = self.degrees[0]
        return tuple(self.get((k,)) for k in range(d + 1))

    def to_json(self) -> str:
        entries = [
            {"k": list(k), "num": str(v.numerator), "den": str(v.denominator)}
            for k, v in self.items()
        ]
        return json.dumps({"degrees": list(self.degrees), "coeffs": entries}, indent=2, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "CoeffTable":
        doc = json.loads(text)
        coeffs = {
            tuple(entry["k"]): Fraction(int(entry["num"]), int(entry["den"]))
            for entry in doc["coeffs"]
        }
        return cls(tuple(doc["degrees"]), coeffs)

    def __repr__(self):
        return f"CoeffTable(degrees={self.degrees}, nnz={len(self.coeffs)})"


class FamilyKind(enum.Enum):
    HARMONIC = "harmonic"
    BIHARMONIC = "biharmonic"


@dataclass(frozen=True)
class SolutionFamily:
    """Basis tables spanning a solution space of the defining system."""

    kind: FamilyKind
    degrees: tuple[int, ...]
    mu: Fraction
    tables: tuple[CoeffTable, ...]

    @property
    def dimension(self) -> int:
        return len(self.tables)

    @property
    def proper_member(self) -> CoeffTable:
        if self.kind is not FamilyKind.BIHARMONIC:
            raise ValueError("only biharmonic families have a proper member")
        return self.tables[0]

    @property
    def harmonic_members(self) -> tuple[CoeffTable, ...]:
        if self.kind is FamilyKind.BIHARMONIC:
            return self.tables[1:]
        return self.tables

    def combine(self, weights) -> CoeffTable:
        weights = [_frac(w) for w in weights]
        if len(weights) != len(self.tables):
            raise DimensionMismatch("one weight per basis table")
        out = CoeffTable(self.degrees, {})
        for w, t in zip(weights, self.tables):
            out = out + t.scale(w)
        return out


# ---------------------------------------------------------------------------
# the defining linear systems


def _harmonic_row(degrees, mu: Fraction, idx) -> dict:
    """Coefficients (by table index) of the harmonic equation at idx."""
    m = len(degrees)
    sigma = sum(idx)
    row: dict = {}
    lhs = -2 * mu * Fraction(sigma * sigma - sigma)
    if lhs != 0:
        row[idx] = lhs
    total = sum(degrees) + sigma - 1
    for j in range(m):
        if idx[j] >= 1:
            coeff = Fraction((degrees[j] + 1 - idx[j]) * total)
            if coeff != 0:
                prev = _dec(idx, j)
                row[prev] = row.get(prev, Fraction(0)) - coeff
    return row


def harmonic_residuals(table: CoeffTable, mu) -> dict:
    """Exact residual of the harmonic system at every box index."""
    mu = _frac(mu)
    out = {}
    for idx in box_indices(table.degrees):
        row = _harmonic_row(table.degrees, mu, idx)
        out[idx] = sum((coeff * table.get(k) for k, coeff in row.items()), Fraction(0))
    return out


def is_harmonic_table(table: CoeffTable, mu) -> bool:
    return all(v == 0 for v in harmonic_residuals(table, mu).values())


def _tilde_row(degrees, mu: Fraction, idx) -> dict:
    """The tension coefficient at idx as a linear map of the input table.

    Realizes: 2*mu*c_k*(sum_j k_j(k_j-1) + 2*sum_{i<j} k_i k_j)
              + sum_j c_{k-e_j} (d_j^2 - (k_j-1)^2)
              + sum_{i<j} c_{k-e_i} (d_i+1-k_i)(d_j+k_j)
              + sum_{i<j} c_{k-e_j} (d_j+1-k_j)(d_i+k_i).
    """
    m = len(degrees)
    row: dict = {}

    def bump(key, value):
        if value != 0:
            row[key] = row.get(key, Fraction(0)) + value

    pair_sum = sum(k * (k - 1) for k in idx) + 2 * sum(
        idx[i] * idx[j] for i in range(m) for j in range(i + 1, m)
    )
    bump(idx, 2 * mu * Fraction(pair_sum))
    for j in range(m):
        if idx[j] >= 1:
            bump(_dec(idx, j), Fraction(degrees[j] ** 2 - (idx[j] - 1) ** 2))
    for i in range(m):
        for j in range(i + 1, m):
            if idx[i] >= 1:
                bump(_dec(idx, i), Fraction((degrees[i] + 1 - idx[i]) * (degrees[j] + idx[j])))
            if idx[j] >= 1:
                bump(_dec(idx, j), Fraction((degrees[j] + 1 - idx[j]) * (degrees[i] + idx[i])))
    return row


def tension_table(table: CoeffTable, mu) -> CoeffTable:
    """Coefficients of tau(F) in the same monomial basis as F.

    The bookkeeping box extends to d_i + 1 in each direction, but every
    boundary entry vanishes identically (each contribution carries a
    zero factor or an out-of-box index), so the result lives on the
    original box; the boundary is asserted zero rather than trusted.
    """
    mu = _frac(mu)
    degrees = table.degrees
    out = {}
    for idx in itertools.product(*(range(d + 2) for d in degrees)):
        row = _tilde_row(degrees, mu, idx)
        value = sum((coeff * table.get(k) for k, coeff in row.items()), Fraction(0))
        if any(idx[i] > degrees[i] for i in range(len(degrees))):
            if value != 0:
                raise InconsistentSystem(
                    f"tension coefficient at boundary index {idx} is {value}, expected 0"
                )
            continue
        if value != 0:
            out[idx] = value
    return CoeffTable(degrees, out)


def is_biharmonic_table(table: CoeffTable, mu) -> bool:
    return is_harmonic_table(tension_table(table, mu), mu)


# ---------------------------------------------------------------------------
# exact solving


def _rref(rows: list[list[Fraction]]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form over Fraction; returns (rref, pivot columns)."""
    rows = [list(r) for r in rows]
    if not rows:
        return rows, []
    ncols = len(rows[0])
    pivots = []
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                factor = rows[i][c]
                rows[i] = [x - factor * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows[:r], pivots


def _solve_with_free_values(
    rows: list[dict],
    columns: list,
    free_columns: list,
    free_values: list[Fraction],
) -> dict:
    """Solve the homogeneous system with designated coordinates pinned.

    ``rows`` are sparse equations over ``columns``; the coordinates in
    ``free_columns`` are fixed to ``free_values`` and everything else must
    be uniquely determined, otherwise InconsistentSystem is raised.
    """
    free_set = set(free_columns)
    unknowns = [c for c in columns if c not in free_set]
    unknown_pos = {c: i for i, c in enumerate(unknowns)}
    fixed = dict(zip(free_columns, free_values))

    dense = []
    for row in rows:
        line = [Fraction(0)] * (len(unknowns) + 1)
        for col, coeff in row.items():
            if col in free_set:
                line[-1] -= coeff * fixed[col]
            else:
                line[unknown_pos[col]] += coeff
        if any(x != 0 for x in line):
            dense.append(line)

    if not unknowns:
        if any(line[-1] != 0 for line in dense):
            raise InconsistentSystem("pinned coordinates contradict the system")
        return dict(fixed)

    rref, pivots = _rref(dense)
    ncols = len(unknowns)
    for line in rref:
        if all(line[c] == 0 for c in range(ncols)) and line[-1] != 0:
            raise InconsistentSystem("system is inconsistent with the pinned coordinates")
    if len(pivots) < ncols or ncols in pivots:
        raise InconsistentSystem(
            "designated free coordinates do not determine the remaining ones"
        )
    solution = dict(fixed)
    for line, c in zip(rref, pivots):
        solution[unknowns[c]] = line[-1]
    return solution


def _nullity(rows: list[dict], columns: list) -> int:
    dense = []
    pos = {c: i for i, c in enumerate(columns)}
    for row in rows:
        line = [Fraction(0)] * len(columns)
        for col, coeff in row.items():
            line[pos[col]] += coeff
        if any(x != 0 for x in line):
            dense.append(line)
    if not dense:
        return len(columns)
    _, pivots = _rref(dense)
    return len(columns) - len(pivots)


def _unit_indices(m: int) -> list[tuple[int, ...]]:
    return [tuple(1 if j == i else 0 for j in range(m)) for i in range(m)]


def _validate_degrees(degrees) -> tuple[int, ...]:
    degrees = tuple(int(d) for d in degrees)
    if not degrees or any(d < 1 for d in degrees):
        raise DimensionMismatch("degrees must be a nonempty tuple of positive integers")
    return degrees


def harmonic_family(degrees, mu) -> SolutionFamily:
    """All harmonic coefficient tables on the degree box.

    Returns m basis tables, one per free unit multi-index; basis table i
    has coefficient 1 at e_i and 0 at the other unit indices.
    """
    degrees = _validate_degrees(degrees)
    mu = _frac(mu)
    if mu == 0:
        raise ZeroVector("mu must be nonzero")
    m = len(degrees)
    columns = list(box_indices(degrees))
    rows = [_harmonic_row(degrees, mu, idx) for idx in columns]
    if _nullity(rows, columns) != m:
        raise InconsistentSystem(
            f"harmonic solution space has unexpected dimension (expected {m})"
        )
    units = _unit_indices(m)
    tables = []
    for i in range(m):
        values = [Fraction(1) if j == i else Fraction(0) for j in range(m)]
        solution = _solve_with_free_values(rows, columns, units, values)
        tables.append(CoeffTable(degrees, solution))
    return SolutionFamily(FamilyKind.HARMONIC, degrees, mu, tuple(tables))


def biharmonic_family(degrees, mu) -> SolutionFamily:
    """All biharmonic tables: the harmonic family plus one proper direction.

    The proper member is normalized to coefficient 1 at the zero index
    and 0 at the unit indices; it is returned first.  The computed
    solution space dimension is asserted to be m + 1.
    """
    degrees = _validate_degrees(degrees)
    mu = _frac(mu)
    if mu == 0:
        raise ZeroVector("mu must be nonzero")
    m = len(degrees)
    columns = list(box_indices(degrees))
    tilde_rows = {idx: _tilde_row(degrees, mu, idx) for idx in columns}

    def compose(outer: dict) -> dict:
        row: dict = {}
        for mid, coeff in outer.items():
            for col, inner in tilde_rows[mid].items():
                key = col
                row[key] = row.get(key, Fraction(0)) + coeff * inner
        return row

    rows = [compose(_harmonic_row(degrees, mu, idx)) for idx in columns]
    if _nullity(rows, columns) != m + 1:
        raise InconsistentSystem(
            f"biharmonic solution space has unexpected dimension (expected {m + 1})"
        )
    zero = (0,) * m
    free = [zero, *_unit_indices(m)]
    tables = []
    for i in range(m + 1):
        values = [Fraction(1) if j == i else Fraction(0) for j in range(m + 1)]
        solution = _solve_with_free_values(rows, columns, free, values)
        tables.append(CoeffTable(degrees, solution))
    proper = tables[0]
    if tension_table(proper, mu).is_zero():
        raise InconsistentSystem("proper direction came out harmonic")
    return SolutionFamily(FamilyKind.BIHARMONIC, degrees, mu, tuple(tables))


def harmonic_coefficients(d: int, mu) -> CoeffTable:
    """One-variable harmonic table: c_0 = 0, c_1 = 1 and

        -2*mu*k*(k+1)*c_{k+1} = (d**2 - k**2) * c_k,   k = 1..d-1.
    """
    if d < 1:
        raise DimensionMismatch("degree must be positive")
    mu = _frac(mu)
    if mu == 0:
        raise ZeroVector("mu must be nonzero")
    coeffs = {(1,): Fraction(1)}
    value = Fraction(1)
    for k in range(1, d):
        value = value * Fraction(d * d - k * k) / (-2 * mu * Fraction(k * (k + 1)))
        coeffs[(k + 1,)] = value
    return CoeffTable((d,), coeffs)


def biharmonic_coefficients(d: int, mu, c0, c1) -> CoeffTable:
    """One-variable biharmonic table with prescribed leading pair (c0, c1).

    Solved through the tension-coefficient mechanism, which for mu = -1
    reduces to the second-order difference equation

        4(k-1)^2 k^2 c_k = 4(k-1)^2 (d^2-(k-1)^2) c_{k-1}
                           - (d^2-(k-2)^2)(d^2-(k-1)^2) c_{k-2}.

    The result is proper biharmonic iff c0 != 0.
    """
    family = biharmonic_family((d,), mu)
    return family.combine([c0, c1])


# ---------------------------------------------------------------------------
# assembling expressions


def build_expression(table: CoeffTable, pairs) -> RationalExpr:
    """Evaluable expression sum_k c_k prod_i f_i**(d_i-k_i) * t_i**k_i.

    ``pairs`` is one (f_i, tension_of_f_i) expression pair per variable.
    Power nodes are shared so evaluation caches subterms.
    """
    pairs = list(pairs)
    if len(pairs) != len(table.degrees):
        raise DimensionMismatch(
            f"need {len(table.degrees)} (f, tau f) pairs, got {len(pairs)}"
        )
    if table.is_zero():
        return Const(0.0)
    f_pows = []
    t_pows = []
    for (f, tf), d in zip(pairs, table.degrees):
        f_pows.append({e: Power(f, e) for e in range(1, d + 1)})
        t_pows.append({e: Power(tf, e) for e in range(1, d + 1)})
    terms = []
    for idx, coeff in table.items():
        factors = [Const(complex(coeff))]
        for i, d in enumerate(table.degrees):
            if d - idx[i] > 0:
                factors.append(f_pows[i][d - idx[i]])
            if idx[i] > 0:
                factors.append(t_pows[i][idx[i]])
        terms.append(Product(factors) if len(factors) > 1 else factors[0])
    return Sum(terms) if len(terms) > 1 else terms[0]


def tension_power_family(fam: QuadrupleFamily, k: int) -> list[RationalExpr]:
    """Eigenfamily of k-th powers of the member tensions (proper members).

    Members satisfy tau(phi) = 2*mu*k*(k-1)*phi and
    kappa(phi, psi) = 2*mu*k**2 * phi * psi.
    """
    if k < 1:
        raise DimensionMismatch("power must be a positive integer")
    if fam.n_proper < 1:
        raise ZeroVector("family has no proper members")
    return [Power(fam.member_tension(i), k) for i in fam.proper_indices]


def eigenfamily_constants(mu: float, k: int) -> tuple[float, float]:
    """(eigenvalue, conformality constant) of the k-th tension-power family."""
    return 2.0 * mu * k * (k - 1), 2.0 * mu * k * k


def column_ratio_family(q, spec: GroupSpec, beta: int = 0) -> list[RationalExpr]:
    """Orthogonal harmonic family of column-form ratios on U(n).

    With Q_col(z) = sum_j q_j z_{j,col}, returns the n-1 quotients
    Q_col / Q_beta for col != beta; each is harmonic and all pairwise
    conformality products vanish, so every member is a harmonic morphism.
    """
    if spec.kind is not GroupKind.UNITARY:
        raise DimensionMismatch("column-ratio families are built on the unitary group")
    q = np.asarray(q, dtype=complex).reshape(-1)
    if q.shape[0] != spec.n:
        raise DimensionMismatch(f"q must have length {spec.n}")
    if np.linalg.norm(q) == 0:
        raise ZeroVector("q must be nonzero")
    if not 0 <= beta < spec.n:
        raise DimensionMismatch(f"beta must be in [0, {spec.n})")
    den = FormExpr(LinearForm.column(spec, q, beta))
    return [
        Quotient(FormExpr(LinearForm.column(spec, q, col)), den)
        for col in range(spec.n)
        if col != beta
    ]


def _poly_degree(poly: dict) -> int:
    degrees = {sum(exp) for exp in poly}
    if len(degrees) != 1:
        raise DimensionMismatch("polynomial must be homogeneous")
    (degree,) = degrees
    return degree


def rational_morphism(family: list[RationalExpr], num_poly: dict, den_poly: dict) -> RationalExpr:
    """Quotient of two homogeneous polynomials evaluated on an eigenfamily.

    Polynomials are maps {exponent tuple: coefficient}; both must be
    homogeneous of the same positive degree and linearly independent,
    otherwise the quotient is constant (DegenerateQuotient).
    """
    n = len(family)
    if n == 0:
        raise ZeroVector("empty eigenfamily")
    for poly in (num_poly, den_poly):
        if not poly:
            raise ZeroVector("empty polynomial")
        for exp in poly:
            if len(exp) != n or any(e < 0 for e in exp):
                raise DimensionMismatch(f"exponent tuple {exp} does not fit {n} variables")
    deg_num = _poly_degree(num_poly)
    if deg_num != _poly_degree(den_poly) or deg_num < 1:
        raise DimensionMismatch("polynomials must share one positive degree")

    monomials = sorted(set(num_poly) | set(den_poly))
    u = np.array([complex(num_poly.get(mono, 0)) for mono in monomials])
    v = np.array([complex(den_poly.get(mono, 0)) for mono in monomials])
    minors = np.abs(np.outer(u, v) - np.outer(v, u))
    scale = max(np.max(np.abs(u)) * np.max(np.abs(v)), 1e-300)
    if np.max(minors) <= 1e-12 * scale:
        raise DegenerateQuotient("numerator and denominator polynomials are dependent")

    max_exp = [max(exp[i] for exp in monomials) for i in range(n)]
    pows = [{e: Power(family[i], e) for e in range(1, max_exp[i] + 1)} for i in range(n)]

    def poly_expr(poly: dict) -> RationalExpr:
        terms = []
        for exp in sorted(poly):
            coeff = complex(poly[exp])
            if coeff == 0:
                continue
            factors = [Const(coeff)]
            factors.extend(pows[i][e] for i, e in enumerate(exp) if e > 0)
            terms.append(Product(factors) if len(factors) > 1 else factors[0])
        if not terms:
            raise ZeroVector("polynomial has no nonzero coefficients")
        return Sum(terms) if len(terms) > 1 else terms[0]

    return Quotient(poly_expr(num_poly), poly_expr(den_poly))
