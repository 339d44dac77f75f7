"""Command-line front end.

Subcommands
-----------
construct   Build a quadruple family and the proper-biharmonic coefficient
            table for the requested degrees; write both as JSON.
verify      Re-run the numeric verification campaign for files written by
            ``construct`` (eigen checks, conformality product rules,
            tension/bitension residuals); write a report JSON.
reproduce   Regenerate the built-in exact fixtures (one-variable tables,
            the two-variable restriction matrix and coefficient
            conditions) and compare exactly.
morphism    Build and verify harmonic-morphism families (column ratios or
            rational combinations of a tension-power eigenfamily).

Exit codes: 0 success / verification pass, 1 verification or fixture
failure (reports are still written), 2 invalid configuration or input.

Random vectors are drawn from a seeded complex Gaussian; for SO(n) the
row vectors are built as u + i*v with |u| = |v|, u orthogonal to v (and
the two rows mutually orthogonal), so the isotropy conditions hold
exactly up to rounding.  Same configuration and seed give byte-identical
output files.  FORGE_THREADS caps per-point parallelism.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import numpy as np

from .construct import (
    CoeffTable,
    biharmonic_coefficients,
    biharmonic_family,
    build_expression,
    column_ratio_family,
    eigenfamily_constants,
    harmonic_coefficients,
    harmonic_family,
    rational_morphism,
    tension_power_family,
    tension_table,
)
from .errors import BiforgeError
from .forms import QuadrupleFamily, make_quadruple
from .groups import GroupKind, GroupSpec
from .operators import OperatorContext
from .verify import (
    assemble_report,
    candidate_checks,
    closed_form_tension_checks,
    eigenfamily_checks,
    morphism_checks,
    quadruple_checks,
    sample_domain_points,
)

__all__ = ["main", "RunConfig", "REFERENCE_FIXTURES"]


@dataclass
class RunConfig:
    """Validated run parameters shared by the subcommands."""

    group: str
    n: int
    degrees: tuple[int, ...] = (1,)
    mu: Fraction | None = None
    sp_choice: int | None = None
    beta: int = 0
    points: int = 20
    tol: float = 1e-7
    seed: int = 1
    out: Path = field(default_factory=lambda: Path("out"))
    as_json: bool = False

    def spec(self) -> GroupSpec:
        return GroupSpec.from_code(self.group, self.n)

    def mu_value(self) -> Fraction:
        if self.mu is not None:
            return self.mu
        return Fraction(self.spec().mu)


def _parse_degrees(text: str) -> tuple[int, ...]:
    try:
        degrees = tuple(int(part) for part in text.split(",") if part.strip())
    except ValueError as exc:
        raise BiforgeError(f"cannot parse degrees {text!r}") from exc
    if not degrees or any(d < 1 for d in degrees):
        raise BiforgeError("degrees must be positive integers, e.g. --degrees 2,1")
    return degrees


def _parse_mu(text: str | None) -> Fraction | None:
    if text is None:
        return None
    return Fraction(text)


def _orthonormal_rows(rng: np.random.Generator, n: int, count: int) -> list[np.ndarray]:
    while True:
        raw = rng.normal(size=(count, n))
        basis = []
        for row in raw:
            v = row.copy()
            for u in basis:
                v -= u * (u @ v)
            norm = np.linalg.norm(v)
            if norm < 1e-8:
                break
            basis.append(v / norm)
        if len(basis) == count:
            return basis


def _seeded_vectors(spec: GroupSpec, rng: np.random.Generator):
    n = spec.n
    if spec.kind is GroupKind.SPECIAL_ORTHOGONAL:
        u1, v1, u2, v2 = _orthonormal_rows(rng, n, 4)
        p = u1 + 1j * v1
        q = u2 + 1j * v2
    else:
        p = rng.normal(size=n) + 1j * rng.normal(size=n)
        q = rng.normal(size=n) + 1j * rng.normal(size=n)
    while True:
        a = rng.normal(size=n) + 1j * rng.normal(size=n)
        b = rng.normal(size=n) + 1j * rng.normal(size=n)
        if np.min(np.abs(a)) > 0.1 and np.min(np.abs(b)) > 0.1:
            return p, q, a, b


def _build_family(config: RunConfig) -> QuadrupleFamily:
    spec = config.spec()
    rng = np.random.default_rng(config.seed)
    p, q, a, b = _seeded_vectors(spec, rng)
    return make_quadruple(spec, p, q, a, b, beta=config.beta, sp_choice=config.sp_choice)


def _member_pairs(fam: QuadrupleFamily, m: int):
    indices = fam.proper_indices[:m]
    return [(fam.member_quotient(i), fam.member_tension(i)) for i in indices]


def cmd_construct(config: RunConfig) -> int:
    fam = _build_family(config)
    m = len(config.degrees)
    if m > fam.n_proper:
        raise BiforgeError(
            f"need {m} proper members but the family has {fam.n_proper}; "
            "use a larger n or, on sp, --choice 10"
        )
    family = biharmonic_family(config.degrees, config.mu_value())
    config.out.mkdir(parents=True, exist_ok=True)
    coeffs_path = config.out / "coeffs.json"
    quad_path = config.out / "quadruple.json"
    coeffs_path.write_text(family.proper_member.to_json() + "\n")
    quad_path.write_text(fam.to_json() + "\n")
    print(f"wrote {coeffs_path} and {quad_path}")
    print(
        f"group={config.group} n={config.n} degrees={config.degrees} "
        f"proper members available: {fam.n_proper}"
    )
    return 0


def cmd_verify(config: RunConfig, coeffs_file: Path, quadruple_file: Path, out_file: Path | None) -> int:
    try:
        table = CoeffTable.from_json(coeffs_file.read_text())
        fam = QuadrupleFamily.from_json(quadruple_file.read_text())
    except (OSError, KeyError, ValueError, json.JSONDecodeError) as exc:
        raise BiforgeError(f"cannot parse inputs: {exc}") from exc

    spec = fam.spec
    ctx = OperatorContext.for_spec(spec)
    m = len(table.degrees)
    if m > fam.n_proper:
        raise BiforgeError(
            f"table has {m} variables but the family has {fam.n_proper} proper members"
        )
    pairs = _member_pairs(fam, m)
    phi = build_expression(table, pairs)
    proper = table.get((0,) * m) != 0

    points = sample_domain_points(
        [phi, *(tf for _, tf in pairs)], spec, config.points, config.seed
    )
    checks = quadruple_checks(fam, ctx, points)
    checks += closed_form_tension_checks(fam, ctx, points)
    checks += candidate_checks(
        phi, ctx, points, proper=proper, tol_tau=config.tol / 10.0, tol_tau2=config.tol
    )
    report = assemble_report(
        subject=f"{'biharmonic' if proper else 'harmonic'} candidate, degrees {table.degrees}",
        spec=spec,
        points=points,
        seed=config.seed,
        checks=checks,
    )
    if out_file is not None:
        out_file.parent.mkdir(parents=True, exist_ok=True)
        out_file.write_text(report.to_json() + "\n")
    if config.as_json:
        print(report.to_json())
    else:
        print("\n".join(report.summary_lines()))
    return 0 if report.verdict else 1


# ---------------------------------------------------------------------------
# exact fixture reproduction

# One-variable tables are (c_0..c_d) up to overall scale; matrix fixtures are
# the restriction of the tension field to the degree-(1,1) monomial basis
# [f1 f2, f1 t2, t1 f2, t1 t2]; relation fixtures are integer rows that must
# annihilate every coefficient vector of the named family, with coordinates
# ordered lexicographically over the degree box.
REFERENCE_FIXTURES: dict = {
    "harmonic_d2": (0, 4, 3),
    "harmonic_d3": (0, 6, 12, 5),
    "harmonic_d4": (0, 32, 120, 120, 35),
    "biharmonic_d2": (4, 0, -3),
    "biharmonic_d3": (6, 0, -27, -15),
    "biharmonic_d4": (32, 0, -480, -640, -210),
    "tension_matrix_11": ((0, 0, 0, 0), (2, 0, 0, 0), (2, 0, 0, 0), (0, 3, 3, -4)),
    "tension_matrix_11_squared": (
        (0, 0, 0, 0),
        (0, 0, 0, 0),
        (0, 0, 0, 0),
        (12, -12, -12, 16),
    ),
    "harmonic_relations_11": ((1, 0, 0, 0), (0, 3, 3, -4)),
    "biharmonic_relations_11": ((-3, 3, 3, -4),),
    "harmonic_relations_21": (
        (1, 0, 0, 0, 0, 0),
        (0, 2, 1, -1, 0, 0),
        (0, 0, 1, 0, -1, 0),
        (0, 5, 5, 0, 0, -6),
    ),
    "biharmonic_relations_21": (
        (-3, 2, 1, -1, 0, 0),
        (-3, 0, 2, 0, -2, 0),
        (-15, 5, 5, 0, 0, -6),
    ),
}


def _table_vector(table: CoeffTable) -> list[Fraction]:
    from .construct import box_indices

    return [table.get(idx) for idx in box_indices(table.degrees)]


def _check_fixture(name: str) -> bool:
    expected = REFERENCE_FIXTURES[name]
    if name.startswith("harmonic_d"):
        d = int(name[-1])
        got = harmonic_coefficients(d, -1).single_degree()
        reference = CoeffTable((d,), {(k,): v for k, v in enumerate(expected)})
        return CoeffTable((d,), {(k,): v for k, v in enumerate(got)}).proportional_to(reference)
    if name.startswith("biharmonic_d"):
        d = int(name[-1])
        got = biharmonic_coefficients(d, -1, expected[0], 0).single_degree()
        return got == tuple(Fraction(c) for c in expected)
    if name == "tension_matrix_11":
        return _tension_matrix_11() == expected
    if name == "tension_matrix_11_squared":
        m = np.array(_tension_matrix_11(), dtype=object)
        return tuple(tuple(x for x in row) for row in (m @ m)) == expected
    if name.endswith("relations_11") or name.endswith("relations_21"):
        degrees = (1, 1) if name.endswith("_11") else (2, 1)
        if name.startswith("harmonic"):
            family = harmonic_family(degrees, -1)
            tables = list(family.tables) + [family.combine([2, -3][: len(family.tables)])]
        else:
            family = biharmonic_family(degrees, -1)
            tables = list(family.tables) + [family.combine([1, 2, -3][: len(family.tables)])]
        for table in tables:
            vec = _table_vector(table)
            for row in expected:
                if sum(Fraction(c) * v for c, v in zip(row, vec)) != 0:
                    return False
        return True
    raise BiforgeError(f"unknown fixture {name}")


def _tension_matrix_11() -> tuple:
    columns = []
    from .construct import box_indices

    index_list = list(box_indices((1, 1)))
    for idx in index_list:
        unit = CoeffTable((1, 1), {idx: 1})
        image = tension_table(unit, -1)
        columns.append([image.get(row_idx) for row_idx in index_list])
    matrix = tuple(
        tuple(int(columns[c][r]) for c in range(len(index_list))) for r in range(len(index_list))
    )
    return matrix


def cmd_reproduce(as_json: bool) -> int:
    results = {name: bool(_check_fixture(name)) for name in REFERENCE_FIXTURES}
    ok = all(results.values())
    if as_json:
        print(json.dumps({"fixtures": results, "pass": ok}, indent=2, sort_keys=True))
    else:
        width = max(len(name) for name in results)
        for name, good in results.items():
            print(f"{name:<{width}}  {'pass' if good else 'FAIL'}")
        print(f"overall: {'pass' if ok else 'FAIL'}")
    if not ok:
        failing = [name for name, good in results.items() if not good]
        print(f"mismatched fixtures: {', '.join(failing)}", file=sys.stderr)
        return 1
    return 0


def cmd_morphism(config: RunConfig, kind: str, k: int, out_file: Path | None) -> int:
    spec = config.spec()
    ctx = OperatorContext.for_spec(spec)
    rng = np.random.default_rng(config.seed)
    checks = []
    if kind == "orthogonal":
        if spec.kind is not GroupKind.UNITARY:
            raise BiforgeError("orthogonal column-ratio families live on the unitary group")
        q = rng.normal(size=spec.n) + 1j * rng.normal(size=spec.n)
        family = column_ratio_family(q, spec, beta=0)
        points = sample_domain_points(family, spec, config.points, config.seed)
        # eigenvalue 0 and kappa constant 0 are exactly the morphism conditions
        checks += eigenfamily_checks(family, 0.0, 0.0, ctx, points, tol=config.tol)
        checks += morphism_checks(family[0], ctx, points, tol=config.tol)
        subject = f"orthogonal column-ratio family, {len(family)} members"
    else:
        fam = _build_family(config)
        if fam.n_proper < 2:
            raise BiforgeError("need at least two proper members for a rational morphism")
        family = tension_power_family(fam, k)[:2]
        lam, kap = eigenfamily_constants(spec.mu, k)
        morphism = rational_morphism(family, {(1, 0): 1.0}, {(0, 1): 1.0})
        points = sample_domain_points([morphism, *family], spec, config.points, config.seed)
        checks += eigenfamily_checks(family, lam, kap, ctx, points, tol=1e-9)
        checks += morphism_checks(morphism, ctx, points, tol=config.tol)
        subject = f"rational morphism from the k={k} tension-power family"
    report = assemble_report(subject, spec, points, config.seed, checks)
    if out_file is not None:
        out_file.parent.mkdir(parents=True, exist_ok=True)
        out_file.write_text(report.to_json() + "\n")
    if config.as_json:
        print(report.to_json())
    else:
        print("\n".join(report.summary_lines()))
    return 0 if report.verdict else 1


# ---------------------------------------------------------------------------
# argument parsing


def _add_common(parser: argparse.ArgumentParser, need_group: bool = True):
    if need_group:
        parser.add_argument("--group", choices=["su", "so", "sp"], required=True)
        parser.add_argument("--n", type=int, required=True)
    parser.add_argument("--points", type=int, default=20)
    parser.add_argument("--tol", type=float, default=1e-7)
    parser.add_argument("--seed", type=int, default=1)
    parser.add_argument("--json", action="store_true", dest="as_json")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="biforge", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p_con = sub.add_parser("construct", help="build and write a biharmonic family")
    _add_common(p_con)
    p_con.add_argument("--degrees", default="1")
    p_con.add_argument("--choice", type=int, choices=[9, 10, 11], default=None)
    p_con.add_argument("--beta", type=int, default=0)
    p_con.add_argument("--mu", default=None, help="override, e.g. -1/2")
    p_con.add_argument("--out", type=Path, default=Path("out"))

    p_ver = sub.add_parser("verify", help="verify construct outputs numerically")
    p_ver.add_argument("--coeffs", type=Path, required=True)
    p_ver.add_argument("--quadruple", type=Path, required=True)
    p_ver.add_argument("--out", type=Path, default=None)
    _add_common(p_ver, need_group=False)

    p_rep = sub.add_parser("reproduce", help="regenerate and compare exact fixtures")
    p_rep.add_argument("--json", action="store_true", dest="as_json")

    p_mor = sub.add_parser("morphism", help="build and verify harmonic morphisms")
    _add_common(p_mor)
    p_mor.add_argument("--kind", choices=["orthogonal", "rational"], default="orthogonal")
    p_mor.add_argument("--k", type=int, default=1)
    p_mor.add_argument("--choice", type=int, choices=[9, 10, 11], default=None)
    p_mor.add_argument("--out", type=Path, default=None)
    p_mor.add_argument("--tol-morphism", type=float, default=1e-8)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "construct":
            config = RunConfig(
                group=args.group,
                n=args.n,
                degrees=_parse_degrees(args.degrees),
                mu=_parse_mu(args.mu),
                sp_choice=args.choice,
                beta=args.beta,
                points=args.points,
                tol=args.tol,
                seed=args.seed,
                out=args.out,
                as_json=args.as_json,
            )
            return cmd_construct(config)
        if args.command == "verify":
            config = RunConfig(
                group="su",
                n=2,
                points=args.points,
                tol=args.tol,
                seed=args.seed,
                as_json=args.as_json,
            )
            return cmd_verify(config, args.coeffs, args.quadruple, args.out)
        if args.command == "reproduce":
            return cmd_reproduce(args.as_json)
        if args.command == "morphism":
            config = RunConfig(
                group=args.group,
                n=args.n,
                sp_choice=args.choice,
                points=args.points,
                tol=args.tol_morphism,
                seed=args.seed,
                as_json=args.as_json,
            )
            return cmd_morphism(config, args.kind, args.k, args.out)
        parser.error(f"unknown command {args.command}")
    except BiforgeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 2


if __name__ == "__main__":
    sys.exit(main())
