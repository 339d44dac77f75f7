"""Building-block functions on the groups and the expressions made of them.

A :class:`LinearForm` is a first-order polynomial in the matrix
coefficients of the standard representation.  Its coefficient array has
shape (n, coeff_columns): on U(n)/SO(n) that is the whole n-by-n matrix;
on Sp(n) the first n columns weight the z-block coefficients and the
last n columns the w-block, matching the ambient 2n-by-2n layout where
the z-block is the top-left n-by-n corner and the w-block the top-right.

:class:`RationalExpr` trees combine forms and complex constants through
sums, products, integer powers and quotients.  One tree evaluates over
any scalar tower (plain complex, jets, nested jets) with identical
traversal; quotient nodes guard their denominator and raise DomainError
near its zero set.

A :class:`QuadrupleFamily` packages the eigenfunction quadruples
(numerators P_i, common denominator Q, and the exchange forms R, S_i)
whose conformality products close up with a constant mu:

    kappa(P_i, Q) = mu * R * S_i,   kappa(Q, Q) = mu * Q**2,  ...

Those product rules are what make the rational quotients f_i = P_i / Q
proper biharmonic and drive every construction downstream.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field

import numpy as np

from .algebra import Jet2, JetMatrix, leading_value
from .errors import (
    DimensionMismatch,
    DomainError,
    IsotropyViolation,
    ZeroVector,
)
from .groups import GroupKind, GroupPoint, GroupSpec

__all__ = [
    "LinearForm",
    "RationalExpr",
    "Const",
    "FormExpr",
    "Sum",
    "Product",
    "Power",
    "Quotient",
    "const",
    "QuadrupleFamily",
    "make_quadruple",
    "quotient",
    "tau_closed_form",
    "columns_pairwise_dependent",
    "isotropic",
    "bilinear",
    "Classification",
    "classify",
]


# ---------------------------------------------------------------------------
# linear forms


@dataclass(frozen=True, eq=False)
class LinearForm:
    """Linear combination of matrix-coefficient functions."""

    spec: GroupSpec
    coeffs: np.ndarray

    def __post_init__(self):
        expected = (self.spec.n, self.spec.coeff_columns)
        if self.coeffs.shape != expected:
            raise DimensionMismatch(
                f"coefficient array must have shape {expected}, got {self.coeffs.shape}"
            )
        object.__setattr__(self, "coeffs", np.ascontiguousarray(self.coeffs, dtype=complex))

    @property
    def coeff_z(self) -> np.ndarray:
        return self.coeffs[:, : self.spec.n]

    @property
    def coeff_w(self) -> np.ndarray | None:
        if self.spec.kind is GroupKind.QUATERNIONIC_UNITARY:
            return self.coeffs[:, self.spec.n :]
        return None

    @classmethod
    def coordinate(cls, spec: GroupSpec, row: int, col: int) -> "LinearForm":
        """The single matrix-coefficient function at (row, col), 0-based.

        On Sp(n), columns 0..n-1 address the z-block and n..2n-1 the
        w-block.
        """
        c = np.zeros((spec.n, spec.coeff_columns), dtype=complex)
        c[row, col] = 1.0
        return cls(spec, c)

    @classmethod
    def column(cls, spec: GroupSpec, rows: np.ndarray, col: int, weight: complex = 1.0) -> "LinearForm":
        c = np.zeros((spec.n, spec.coeff_columns), dtype=complex)
        c[:, col] = np.asarray(rows, dtype=complex) * weight
        return cls(spec, c)

    @classmethod
    def rank_one(cls, spec: GroupSpec, rows: np.ndarray, cols: np.ndarray) -> "LinearForm":
        return cls(spec, np.outer(np.asarray(rows, dtype=complex), np.asarray(cols, dtype=complex)))

    def coeff_scale(self) -> float:
        return float(np.linalg.norm(self.coeffs))

    def is_zero(self, rel_tol: float = 1e-14) -> bool:
        return self.coeff_scale() <= rel_tol

    def evaluate(self, point):
        """Sum of coefficients times matrix entries; jets recurse layerwise."""
        if isinstance(point, GroupPoint):
            point = point.matrix
        if isinstance(point, JetMatrix):
            return Jet2(
                self.evaluate(point.a0),
                self.evaluate(point.a1),
                self.evaluate(point.a2),
            )
        n = self.spec.n
        block = point[:n, : self.spec.coeff_columns]
        return complex(np.dot(self.coeffs.ravel(), np.ascontiguousarray(block).ravel()))

    def __repr__(self):
        return f"LinearForm({self.spec.code}({self.spec.n}), nnz={int(np.count_nonzero(self.coeffs))})"


# ---------------------------------------------------------------------------
# expression trees

_MISSING = object()


class RationalExpr:
    """Evaluable expression tree over linear forms and complex constants."""

    __slots__ = ()

    def evaluate(self, point, cache: dict | None = None):
        if cache is None:
            cache = {}
        return self._eval(point, cache)

    def _eval(self, point, cache):
        value = cache.get(id(self), _MISSING)
        if value is _MISSING:
            value = self._compute(point, cache)
            cache[id(self)] = value
        return value

    def _compute(self, point, cache):
        raise NotImplementedError

    def coeff_scale(self) -> float:
        raise NotImplementedError

    def quotient_nodes(self):
        """All Quotient nodes in the tree (for domain reporting)."""
        seen = set()
        stack = [self]
        out = []
        while stack:
            node = stack.pop()
            if id(node) in seen:
                continue
            seen.add(id(node))
            if isinstance(node, Quotient):
                out.append(node)
            stack.extend(node._children())
        return out

    def _children(self):
        return ()

    # operator sugar, normalizing numbers to Const
    def __add__(self, other):
        return Sum((self, _as_expr(other)))

    def __radd__(self, other):
        return Sum((_as_expr(other), self))

    def __sub__(self, other):
        return Sum((self, Product((Const(-1.0), _as_expr(other)))))

    def __rsub__(self, other):
        return Sum((_as_expr(other), Product((Const(-1.0), self))))

    def __mul__(self, other):
        return Product((self, _as_expr(other)))

    def __rmul__(self, other):
        return Product((_as_expr(other), self))

    def __truediv__(self, other):
        return Quotient(self, _as_expr(other))

    def __pow__(self, k: int):
        return Power(self, k)

    def __neg__(self):
        return Product((Const(-1.0), self))


def _as_expr(x) -> RationalExpr:
    if isinstance(x, RationalExpr):
        return x
    if isinstance(x, LinearForm):
        return FormExpr(x)
    return Const(complex(x))


def const(value) -> "Const":
    return Const(complex(value))


class Const(RationalExpr):
    __slots__ = ("value",)

    def __init__(self, value):
        self.value = complex(value)

    def _compute(self, point, cache):
        return self.value

    def coeff_scale(self):
        return abs(self.value)

    def __repr__(self):
        return f"Const({self.value})"


class FormExpr(RationalExpr):
    __slots__ = ("form",)

    def __init__(self, form: LinearForm):
        self.form = form

    def _compute(self, point, cache):
        return self.form.evaluate(point)

    def coeff_scale(self):
        return self.form.coeff_scale()

    def __repr__(self):
        return f"FormExpr({self.form!r})"


class Sum(RationalExpr):
    __slots__ = ("terms",)

    def __init__(self, terms):
        self.terms = tuple(_as_expr(t) for t in terms)

    def _compute(self, point, cache):
        total = self.terms[0]._eval(point, cache)
        for term in self.terms[1:]:
            total = total + term._eval(point, cache)
        return total

    def coeff_scale(self):
        return max((t.coeff_scale() for t in self.terms), default=0.0)

    def _children(self):
        return self.terms


class Product(RationalExpr):
    __slots__ = ("factors",)

    def __init__(self, factors):
        self.factors = tuple(_as_expr(f) for f in factors)

    def _compute(self, point, cache):
        total = self.factors[0]._eval(point, cache)
        for factor in self.factors[1:]:
            total = total * factor._eval(point, cache)
        return total

    def coeff_scale(self):
        out = 1.0
        for f in self.factors:
            out *= f.coeff_scale()
        return out

    def _children(self):
        return self.factors


class Power(RationalExpr):
    __slots__ = ("base", "exponent")

    def __init__(self, base, exponent: int):
        if exponent < 0:
            raise ValueError("negative exponents are expressed through Quotient")
        self.base = _as_expr(base)
        self.exponent = int(exponent)

    def _compute(self, point, cache):
        if self.exponent == 0:
            return 1.0 + 0.0j
        value = self.base._eval(point, cache)
        out = value
        for _ in range(self.exponent - 1):
            out = out * value
        return out

    def coeff_scale(self):
        return self.base.coeff_scale() ** self.exponent

    def _children(self):
        return (self.base,)


class Quotient(RationalExpr):
    """Quotient node; records its denominator and guards its zero set."""

    __slots__ = ("numerator", "denominator", "den_scale", "rel_tol")

    def __init__(self, numerator, denominator, rel_tol: float = 1e-12):
        self.numerator = _as_expr(numerator)
        self.denominator = _as_expr(denominator)
        self.rel_tol = rel_tol
        self.den_scale = max(self.denominator.coeff_scale(), 1e-300)

    def _compute(self, point, cache):
        den = self.denominator._eval(point, cache)
        if abs(leading_value(den)) < self.rel_tol * self.den_scale:
            raise DomainError("evaluation point lies on (or too near) a denominator zero")
        num = self.numerator._eval(point, cache)
        return num / den

    def coeff_scale(self):
        return self.numerator.coeff_scale()

    def _children(self):
        return (self.numerator, self.denominator)


def quotient(num: LinearForm, den: LinearForm) -> Quotient:
    """The rational function num/den on the open set where den != 0."""
    if den.is_zero():
        raise ZeroVector("denominator form is identically zero")
    return Quotient(FormExpr(num), FormExpr(den))


# ---------------------------------------------------------------------------
# structural predicates

def _pairwise_dependent_exact(m) -> bool:
    rows, cols = m.shape
    for a in range(cols):
        for b in range(a + 1, cols):
            for i in range(rows):
                for j in range(i + 1, rows):
                    if m[i, a] * m[j, b] - m[j, a] * m[i, b] != 0:
                        return False
    return True


def columns_pairwise_dependent(m: np.ndarray, rel_tol: float = 1e-12) -> bool:
    """True iff every 2x2 minor across column pairs vanishes (rank <= 1).

    Float input is tested relative to the largest entry magnitude; exact
    (object dtype) input is tested exactly.
    """
    m = np.asarray(m)
    if m.size == 0:
        raise ZeroVector("empty matrix")
    if m.dtype == object:
        return _pairwise_dependent_exact(m)
    m = m.astype(complex)
    scale = np.max(np.abs(m))
    if scale == 0:
        raise ZeroVector("zero matrix has no dependence structure")
    rows, cols = m.shape
    for a in range(cols):
        for b in range(a + 1, cols):
            minors = np.abs(np.outer(m[:, a], m[:, b]) - np.outer(m[:, b], m[:, a]))
            if np.max(minors) > rel_tol * scale * scale:
                return False
    return True


def bilinear(u, v) -> complex:
    """Complex-bilinear pairing sum(u_k * v_k), not the hermitian product."""
    u = np.asarray(u)
    v = np.asarray(v)
    if u.shape != v.shape:
        raise DimensionMismatch(f"bilinear pairing of {u.shape} with {v.shape}")
    return complex(np.sum(np.asarray(u, dtype=complex) * np.asarray(v, dtype=complex)))


def isotropic(v, rel_tol: float = 1e-12) -> bool:
    """True iff sum(v_k**2) = 0 under the complex-bilinear square sum."""
    v = np.asarray(v)
    if v.dtype == object:
        return sum(x * x for x in v.ravel()) == 0
    v = v.astype(complex)
    scale = float(np.sum(np.abs(v) ** 2))
    if scale == 0:
        return True
    return abs(np.sum(v * v)) <= rel_tol * scale


# ---------------------------------------------------------------------------
# quadruple families


class SpChoice(enum.IntEnum):
    """Which coefficient blocks feed the Sp(n) quadruple."""

    Z_OVER_Z = 9
    W_OVER_Z = 10
    W_OVER_W = 11


@dataclass(frozen=True, eq=False)
class QuadrupleFamily:
    """Eigenfunction quadruples (P_i, Q, R, S_i) with constant-mu products.

    ``numerators[i] / denominator`` are the rational family members;
    ``exchange_denominator`` (R) and ``exchange_numerators[i]`` (S_i) are
    the swapped-row forms appearing in kappa(P_i, Q) = mu * R * S_i.
    ``proper[i]`` records whether member i is structurally proper
    biharmonic (nonzero tension).
    """

    spec: GroupSpec
    mu: float
    numerators: tuple[LinearForm, ...]
    exchange_numerators: tuple[LinearForm, ...]
    denominator: LinearForm
    exchange_denominator: LinearForm
    proper: tuple[bool, ...]
    member_columns: tuple[int, ...]
    row_p: np.ndarray
    row_q: np.ndarray
    col_a: np.ndarray
    col_b: np.ndarray
    beta: int
    sp_choice: SpChoice | None = None
    so_mode: str | None = None
    _expr_cache: dict = field(default_factory=dict, repr=False)

    @property
    def n_members(self) -> int:
        return len(self.numerators)

    @property
    def n_proper(self) -> int:
        return sum(self.proper)

    @property
    def proper_indices(self) -> tuple[int, ...]:
        return tuple(i for i, flag in enumerate(self.proper) if flag)

    def _expr(self, form: LinearForm) -> FormExpr:
        node = self._expr_cache.get(id(form))
        if node is None:
            node = FormExpr(form)
            self._expr_cache[id(form)] = node
        return node

    def member_quotient(self, i: int) -> RationalExpr:
        """The rational member f_i = P_i / Q."""
        key = ("quot", i)
        node = self._expr_cache.get(key)
        if node is None:
            node = Quotient(self._expr(self.numerators[i]), self._expr(self.denominator))
            self._expr_cache[key] = node
        return node

    def member_tension(self, i: int) -> RationalExpr:
        """Closed-form tension 2*mu*(P_i*Q - R*S_i)/Q**2 of member i."""
        key = ("tau", i)
        node = self._expr_cache.get(key)
        if node is None:
            p = self._expr(self.numerators[i])
            q = self._expr(self.denominator)
            r = self._expr(self.exchange_denominator)
            s = self._expr(self.exchange_numerators[i])
            numer = Product((Const(2 * self.mu), Sum((Product((p, q)), -Product((r, s))))))
            node = Quotient(numer, Power(q, 2))
            self._expr_cache[key] = node
        return node

    def all_forms(self) -> list[LinearForm]:
        return [*self.numerators, self.denominator, self.exchange_denominator, *self.exchange_numerators]

    def to_json(self) -> str:
        def vec(v):
            return [[float(x.real), float(x.imag)] for x in np.asarray(v, dtype=complex)]

        doc = {
            "group": self.spec.code,
            "n": self.spec.n,
            "p": vec(self.row_p),
            "q": vec(self.row_q),
            "a": vec(self.col_a),
            "b": vec(self.col_b),
            "beta": self.beta,
            "sp_choice": int(self.sp_choice) if self.sp_choice is not None else None,
            "so_mode": self.so_mode,
        }
        return json.dumps(doc, indent=2, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "QuadrupleFamily":
        doc = json.loads(text)

        def vec(pairs):
            return np.array([complex(re, im) for re, im in pairs])

        spec = GroupSpec.from_code(doc["group"], doc["n"])
        return make_quadruple(
            spec,
            vec(doc["p"]),
            vec(doc["q"]),
            vec(doc["a"]),
            vec(doc["b"]),
            beta=doc["beta"],
            sp_choice=doc["sp_choice"],
        )


def _check_vector(name: str, v, n: int) -> np.ndarray:
    arr = np.asarray(v, dtype=complex).reshape(-1)
    if arr.shape[0] != n:
        raise DimensionMismatch(f"vector {name} must have length {n}, got {arr.shape[0]}")
    if np.linalg.norm(arr) == 0:
        raise ZeroVector(f"vector {name} must be nonzero")
    return arr


def _rows_independent(p: np.ndarray, q: np.ndarray, rel_tol: float = 1e-12) -> bool:
    return not columns_pairwise_dependent(np.column_stack([p, q]), rel_tol)


def make_quadruple(
    spec: GroupSpec,
    p,
    q,
    a,
    b,
    *,
    beta: int = 0,
    sp_choice: int | None = None,
) -> QuadrupleFamily:
    """Build the quadruple family from generating vectors.

    * U(n) and Sp(n) (and SO(n) with isotropic rows): column family.
      Member j has numerator P_j = sum_k p_k * a_j * m_kj over column j
      and exchange form S_j = sum_k q_k * a_j * m_kj; the denominator is
      Q = sum_k q_k * b_beta * m_k,beta with exchange R using p.  Columns
      with zero weight a_j are skipped.  For Sp(n), ``sp_choice`` selects
      the blocks: 9 reads members and denominator from the z-block, 10
      members from the w-block over a z-block denominator (every column
      is then proper), 11 everything from the w-block.
    * SO(n) with isotropic columns ((a,a)=(b,b)=(a,b)=0, rows generic):
      the single full rank-one pair P = p (x) a over Q = q (x) b.

    On SO(n) the conformality product rules acquire delta corrections;
    one of the two isotropy alternatives must hold exactly so the
    corrections cancel, otherwise IsotropyViolation is raised.
    """
    n = spec.n
    p = _check_vector("p", p, n)
    q = _check_vector("q", q, n)
    a = _check_vector("a", a, n)
    b = _check_vector("b", b, n)
    if not 0 <= beta < n:
        raise DimensionMismatch(f"beta must be in [0, {n}), got {beta}")

    so_mode = None
    if spec.kind is GroupKind.SPECIAL_ORTHOGONAL:
        rows_iso = isotropic(p) and isotropic(q) and abs(bilinear(p, q)) <= 1e-12 * (
            np.linalg.norm(p) * np.linalg.norm(q)
        )
        cols_iso = isotropic(a) and isotropic(b) and abs(bilinear(a, b)) <= 1e-12 * (
            np.linalg.norm(a) * np.linalg.norm(b)
        )
        if rows_iso:
            so_mode = "isotropic_rows"
        elif cols_iso:
            so_mode = "isotropic_columns"
        else:
            raise IsotropyViolation(
                "SO(n) families need either (p,p)=(p,q)=(q,q)=0 or (a,a)=(b,b)=(a,b)=0"
            )

    choice = None
    if spec.kind is GroupKind.QUATERNIONIC_UNITARY:
        choice = SpChoice(9 if sp_choice is None else int(sp_choice))
    elif sp_choice is not None:
        raise DimensionMismatch("sp_choice only applies to the quaternionic group")

    independent = _rows_independent(p, q)

    if so_mode == "isotropic_columns":
        num = LinearForm.rank_one(spec, p, a)
        exch_num = LinearForm.rank_one(spec, q, a)
        den = LinearForm.rank_one(spec, q, b)
        exch_den = LinearForm.rank_one(spec, p, b)
        cols_independent = not columns_pairwise_dependent(np.column_stack([a, b]))
        proper = (independent and cols_independent,)
        return QuadrupleFamily(
            spec=spec,
            mu=spec.mu,
            numerators=(num,),
            exchange_numerators=(exch_num,),
            denominator=den,
            exchange_denominator=exch_den,
            proper=proper,
            member_columns=(0,),
            row_p=p,
            row_q=q,
            col_a=a,
            col_b=b,
            beta=beta,
            sp_choice=None,
            so_mode=so_mode,
        )

    # column family (U, Sp, SO with isotropic rows)
    if choice in (SpChoice.W_OVER_Z, SpChoice.W_OVER_W):
        member_offset = n
    else:
        member_offset = 0
    den_offset = n if choice is SpChoice.W_OVER_W else 0

    if abs(b[beta]) == 0:
        raise ZeroVector("denominator weight b[beta] must be nonzero")
    den_col = den_offset + beta
    den = LinearForm.column(spec, q, den_col, b[beta])
    exch_den = LinearForm.column(spec, p, den_col, b[beta])

    scale_a = float(np.max(np.abs(a)))
    numerators = []
    exchange = []
    proper_flags = []
    member_cols = []
    for j in range(n):
        if abs(a[j]) <= 1e-14 * scale_a:
            continue
        col = member_offset + j
        numerators.append(LinearForm.column(spec, p, col, a[j]))
        exchange.append(LinearForm.column(spec, q, col, a[j]))
        member_cols.append(col)
        # cross-block members (choice 10) never share the denominator column,
        # so every column is proper there; same-block members lose column beta.
        proper_flags.append(independent and col != den_col)
    if not numerators:
        raise ZeroVector("no nonzero column weights in a")

    return QuadrupleFamily(
        spec=spec,
        mu=spec.mu,
        numerators=tuple(numerators),
        exchange_numerators=tuple(exchange),
        denominator=den,
        exchange_denominator=exch_den,
        proper=tuple(proper_flags),
        member_columns=tuple(member_cols),
        row_p=p,
        row_q=q,
        col_a=a,
        col_b=b,
        beta=beta,
        sp_choice=choice,
        so_mode=so_mode,
    )


def tau_closed_form(fam: QuadrupleFamily, i: int) -> RationalExpr:
    """Symbolic tension of member i: 2*mu*(P_i*Q - R*S_i)/Q**2."""
    return fam.member_tension(i)


# ---------------------------------------------------------------------------
# classification


class Classification(enum.Enum):
    """Structural verdict for f = P/Q with rank-one Q = q (x) a."""

    HarmonicCaseI = "harmonic: denominator row vector spans every numerator column"
    HarmonicCaseII = "harmonic: single shared column"
    ProperBiharmonic = "proper biharmonic"


def classify(m_p: np.ndarray, q, a, spec: GroupSpec, rel_tol: float = 1e-12) -> Classification:
    """Classify the quotient of P (coefficients ``m_p``) by Q = q (x) a.

    Case I: q and every column of m_p are pairwise linearly dependent.
    Case II: a is supported on one index and m_p on that same column.
    Otherwise the quotient is proper biharmonic.

    On SO(n) the numeric dichotomy additionally relies on the delta-term
    cancellations ((q,q) = 0 and m_p^T q = 0 in the bilinear sense); the
    stated hypothesis (a,a) != 0 is enforced.
    """
    m_p = np.asarray(m_p, dtype=complex)
    q = _check_vector("q", q, spec.n)
    a = _check_vector("a", a, spec.coeff_columns)
    if m_p.shape != (spec.n, spec.coeff_columns):
        raise DimensionMismatch(
            f"m_p must have shape ({spec.n}, {spec.coeff_columns}), got {m_p.shape}"
        )
    if np.max(np.abs(m_p)) == 0:
        raise ZeroVector("m_p must be nonzero")
    if spec.kind is GroupKind.SPECIAL_ORTHOGONAL and isotropic(a):
        raise IsotropyViolation("SO(n) classification requires (a,a) != 0")

    if columns_pairwise_dependent(np.column_stack([q, m_p]), rel_tol):
        return Classification.HarmonicCaseI

    a_abs = np.abs(a)
    support = int(np.argmax(a_abs))
    a_single = np.all(np.delete(a_abs, support) <= rel_tol * a_abs[support])
    if a_single:
        col_norms = np.linalg.norm(m_p, axis=0)
        others = np.delete(col_norms, support)
        if np.all(others <= rel_tol * max(col_norms[support], 1e-300)):
            return Classification.HarmonicCaseII
    return Classification.ProperBiharmonic
