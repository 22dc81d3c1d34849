"""Command line front end; every command prints a deterministic JSON report.

Exit codes: 0 no check failed, 1 some check failed, 2 validation error, 3 parse error.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any

from . import catalog
from .cones import (
    ConeError,
    ConeQuery,
    certify_span,
    check_u_characterization,
    in_cone,
    in_cone_interior,
    witness_3grading,
)
from .derivations import (
    CONDITION_NAMES,
    ConditionViolation,
    Derivation,
    DerivationError,
    NotADerivation,
    build_classified,
    check_conditions,
    classify_from_derivation,
    derivation_algebra,
    detect_3grading,
    inner_derivations,
    is_beta_compatible,
    rescaled_combinations,
    solvable_no_go_scan,
    tube_type_report,
    z_decomposition,
)
from .lie import LieAlgebra, LieError
from .linalg import LinAlgError, Mat, eigenspace, frac, span_rank, subspace_equal
from .spindler import (
    RankDeficientBeta,
    SpindlerData,
    SpindlerError,
    build,
    center_closed_form,
    check_effective_torus,
    derived_closed_form,
    forms_from_tensor,
)

SCHEMA = "liecones-report/1"
EXIT_OK, EXIT_VERDICT, EXIT_VALIDATION, EXIT_PARSE = 0, 1, 2, 3


class ParseError(Exception):
    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path


class ValidationError(Exception):
    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path


# --- parsing -----------------------------------------------------------------------

def _rat(x, path: str) -> Fraction:
    if isinstance(x, bool) or not isinstance(x, (int, str)):
        raise ParseError(path, f"expected an integer or a rational string, got {x!r}")
    try:
        return frac(x)
    except (ValueError, ZeroDivisionError, TypeError) as exc:
        raise ParseError(path, f"bad rational {x!r}") from exc


def _int(x, path: str) -> int:
    if isinstance(x, bool) or not isinstance(x, int) or x < 0:
        raise ParseError(path, f"expected a non-negative integer, got {x!r}")
    return x


def _vector(xs, path: str) -> tuple:
    if not isinstance(xs, list):
        raise ParseError(path, "expected a list")
    return tuple(_rat(x, f"{path}[{i}]") for i, x in enumerate(xs))


def _matrix(rows, path: str, shape: tuple[int, int] | None = None) -> Mat:
    if not isinstance(rows, list):
        raise ParseError(path, "expected a list of rows")
    parsed = [_vector(r, f"{path}[{i}]") for i, r in enumerate(rows)]
    ncols = len(parsed[0]) if parsed else (shape[1] if shape else 0)
    if any(len(r) != ncols for r in parsed):
        raise ParseError(path, "rows have different lengths")
    m = Mat(parsed, ncols=ncols)
    if shape is not None and m.shape != shape:
        raise ValidationError(path, f"expected shape {shape}, got {m.shape}")
    return m


def _fields(obj, path: str, required: set[str], optional: set[str] = frozenset()) -> dict:
    if not isinstance(obj, dict):
        raise ParseError(path, "expected an object")
    unknown = set(obj) - required - set(optional)
    if unknown:
        raise ParseError(path, f"unknown field(s) {sorted(unknown)}")
    missing = required - set(obj)
    if missing:
        raise ParseError(path, f"missing field(s) {sorted(missing)}")
    return obj


def parse_algebra(obj, path: str, validate: bool = True) -> LieAlgebra:
    obj = _fields(obj, path, {"dim", "structure"}, {"labels"})
    dim = _int(obj["dim"], f"{path}.dim")
    labels = obj.get("labels")
    if labels is not None and (not isinstance(labels, list) or not all(isinstance(x, str) for x in labels)):
        raise ParseError(f"{path}.labels", "expected a list of strings")
    structure: dict[tuple[int, int], dict[int, Fraction]] = {}
    if not isinstance(obj["structure"], list):
        raise ParseError(f"{path}.structure", "expected a list of [i, j, k, c] entries")
    seen: dict[tuple[int, int, int], Fraction] = {}
    for n, entry in enumerate(obj["structure"]):
        ep = f"{path}.structure[{n}]"
        if not isinstance(entry, list) or len(entry) != 4:
            raise ParseError(ep, "expected [i, j, k, c]")
        i, j, k = (_int(entry[t], ep) for t in range(3))
        c = _rat(entry[3], ep)
        if (i, j, k) in seen and seen[i, j, k] != c:
            raise ValidationError(ep, f"conflicting entries for c[{i}][{j}][{k}]")
        seen[i, j, k] = c
    # both orders of a pair may be given; the constructor checks they agree
    for (i, j, k), c in seen.items():
        structure.setdefault((i, j), {})[k] = c
    try:
        g = LieAlgebra(dim, structure, labels=labels, validate=False)
        if validate:
            g.check_jacobi()
    except LieError as exc:
        raise ValidationError(f"{path}.structure", str(exc)) from exc
    return g


def parse_spindler(obj, path: str, validate: bool = True) -> SpindlerData:
    obj = _fields(obj, path, {"l", "dim_v", "dim_z", "rho", "beta"}, {"v_labels", "z_labels"})
    l = parse_algebra(obj["l"], f"{path}.l", validate=validate)
    dv, dz = _int(obj["dim_v"], f"{path}.dim_v"), _int(obj["dim_z"], f"{path}.dim_z")
    if not isinstance(obj["rho"], list):
        raise ParseError(f"{path}.rho", "expected a list of matrices")
    rho = [_matrix(m, f"{path}.rho[{a}]", (dv, dv)) for a, m in enumerate(obj["rho"])]
    beta: dict[tuple[int, int], dict[int, Fraction]] = {}
    if not isinstance(obj["beta"], list):
        raise ParseError(f"{path}.beta", "expected a list of [p, q, r, c] entries")
    for n, entry in enumerate(obj["beta"]):
        ep = f"{path}.beta[{n}]"
        if not isinstance(entry, list) or len(entry) != 4:
            raise ParseError(ep, "expected [p, q, r, c]")
        p, q, r = (_int(entry[t], ep) for t in range(3))
        cs = beta.setdefault((p, q), {})
        c = _rat(entry[3], ep)
        if r in cs and cs[r] != c:
            raise ValidationError(ep, f"conflicting entries for beta[{p}][{q}][{r}]")
        cs[r] = c
    try:
        forms = forms_from_tensor(beta, dv, dz)
        return SpindlerData(l, tuple(rho), dv, dz, forms,
                            v_labels=obj.get("v_labels"), z_labels=obj.get("z_labels"))
    except SpindlerError as exc:
        triple = getattr(exc, "triple", None)
        raise ValidationError(f"{path}", f"{exc}" + (f" (triple {triple})" if triple else "")) from exc


@dataclass
class Problem:
    """Everything a pipeline may need, from a file or a catalog entry."""

    source: str
    algebra: LieAlgebra
    data: SpindlerData | None = None
    entry: catalog.CatalogEntry | None = None
    functional: tuple | None = None
    derivation: Mat | None = None
    classified: dict | None = None
    candidates: list | None = None
    witnesses: dict = field(default_factory=dict)


def _parse_witnesses(obj, path: str, data: SpindlerData | None) -> dict:
    obj = _fields(obj, path, set(), {"convex_type_x", "torus", "jordan_units", "central"})
    out: dict[str, Any] = {}
    if "convex_type_x" in obj:
        out["convex_type_x"] = _vector(obj["convex_type_x"], f"{path}.convex_type_x")
    if "torus" in obj:
        out["torus"] = [_vector(t, f"{path}.torus[{i}]") for i, t in enumerate(obj["torus"])]
    for key in ("jordan_units", "central"):
        if key in obj:
            sides = _fields(obj[key], f"{path}.{key}", set(), {"+1", "-1"})
            out[key] = {}
            for s, val in sides.items():
                side = 1 if s == "+1" else -1
                if key == "jordan_units":
                    out[key][side] = [_vector(x, f"{path}.{key}.{s}[{i}]") for i, x in enumerate(val)]
                else:
                    out[key][side] = None if val is None else _vector(val, f"{path}.{key}.{s}")
    return out


def _parse_classified(obj, path: str) -> dict:
    obj = _fields(obj, path, {"h", "D_V", "D_z"})
    return {
        "h": _vector(obj["h"], f"{path}.h"),
        "D_V": _matrix(obj["D_V"], f"{path}.D_V"),
        "D_z": _matrix(obj["D_z"], f"{path}.D_z"),
    }


def _parse_derivation_doc(obj, path: str, problem: Problem):
    obj = _fields(obj, path, set(), {"matrix", "classified", "candidates"})
    n = problem.algebra.dim
    if "matrix" in obj:
        problem.derivation = _matrix(obj["matrix"], f"{path}.matrix", (n, n))
        problem.classified = None  # an explicit matrix overrides a shipped triple
    if "classified" in obj:
        problem.classified = _parse_classified(obj["classified"], f"{path}.classified")
    if "candidates" in obj:
        if not isinstance(obj["candidates"], list):
            raise ParseError(f"{path}.candidates", "expected a list of matrices")
        problem.candidates = [
            _matrix(m, f"{path}.candidates[{i}]", (n, n)) for i, m in enumerate(obj["candidates"])
        ]


def load_json(path: str):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ParseError(path, f"cannot read file: {exc.strerror}") from exc
    try:
        return json.loads(text, parse_float=lambda s: float(s))
    except json.JSONDecodeError as exc:
        raise ParseError(path, f"invalid JSON: {exc.msg} at line {exc.lineno}") from exc


def load_problem(source: str, validate: bool = True) -> Problem:
    if source.startswith("catalog:"):
        name = source[len("catalog:"):]
        try:
            entry = catalog.get(name)
        except catalog.UnknownName as exc:
            raise ParseError(source, str(exc)) from exc
        except catalog.CatalogError as exc:
            raise ValidationError(source, str(exc)) from exc
        w = entry.witnesses
        problem = Problem(source, entry.algebra, entry.data, entry)
        problem.functional = w.f
        if entry.has_derivation:
            problem.classified = {"h": w.h, "D_V": w.d_v, "D_z": w.d_z}
        problem.witnesses = {
            "convex_type_x": w.convex_type_x,
            "torus": w.torus,
            "jordan_units": w.jordan_units,
            "central": w.central,
        }
        return problem
    doc = load_json(source)
    doc = _fields(doc, "$", set(), {"algebra", "spindler", "functional", "derivation", "classified", "witnesses"})
    if ("algebra" in doc) == ("spindler" in doc):
        raise ParseError("$", "exactly one of 'algebra' and 'spindler' is required")
    if "algebra" in doc:
        g = parse_algebra(doc["algebra"], "$.algebra", validate=validate)
        problem = Problem(source, g)
    else:
        data = parse_spindler(doc["spindler"], "$.spindler", validate=validate)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", RankDeficientBeta)
            try:
                g = build(data, validate=validate)
            except LieError as exc:
                raise ValidationError("$.spindler", str(exc)) from exc
        problem = Problem(source, g, data)
    if "functional" in doc:
        problem.functional = _vector(doc["functional"], "$.functional")
    if "derivation" in doc:
        n = problem.algebra.dim
        problem.derivation = _matrix(doc["derivation"], "$.derivation", (n, n))
    if "classified" in doc:
        problem.classified = _parse_classified(doc["classified"], "$.classified")
    if "witnesses" in doc:
        problem.witnesses = _parse_witnesses(doc["witnesses"], "$.witnesses", problem.data)
    return problem


def algebra_to_json(g: LieAlgebra) -> dict:
    structure = [[i, j, k, q(c)] for (i, j), cs in sorted(g.structure.items()) for k, c in sorted(cs.items())]
    return {"dim": g.dim, "structure": structure, "labels": list(g.labels)}


def spindler_to_json(data: SpindlerData) -> dict:
    beta = []
    for r, b in enumerate(data.forms):
        for p in range(data.dim_v):
            for s in range(p + 1, data.dim_v):
                if b[p, s]:
                    beta.append([p, s, r, q(b[p, s])])
    out = {
        "l": algebra_to_json(data.l),
        "dim_v": data.dim_v,
        "dim_z": data.dim_z,
        "rho": [qm(m) for m in data.rho],
        "beta": sorted(beta),
    }
    if data.v_labels:
        out["v_labels"] = list(data.v_labels)
    if data.z_labels:
        out["z_labels"] = list(data.z_labels)
    return out


def entry_to_json(entry: catalog.CatalogEntry) -> dict:
    """Input document equivalent to ``catalog:<name>``."""
    w = entry.witnesses
    doc: dict[str, Any] = {"spindler": spindler_to_json(entry.data)}
    if w.f is not None:
        doc["functional"] = qv(w.f)
    if entry.has_derivation:
        doc["classified"] = {"h": qv(w.h), "D_V": qm(w.d_v), "D_z": qm(w.d_z)}
    wit: dict[str, Any] = {}
    if w.convex_type_x is not None:
        wit["convex_type_x"] = qv(w.convex_type_x)
    if w.torus:
        wit["torus"] = [qv(t) for t in w.torus]
    if w.jordan_units:
        wit["jordan_units"] = {f"{s:+d}": [qv(x) for x in xs] for s, xs in w.jordan_units.items()}
    if w.central:
        wit["central"] = {f"{s:+d}": (qv(z) if z is not None else None) for s, z in w.central.items()}
    if wit:
        doc["witnesses"] = wit
    return doc


def parse_functional(text: str) -> tuple:
    parts = [p.strip() for p in text.replace(";", ",").split(",") if p.strip()]
    if not parts:
        raise ParseError("--functional", "empty functional")
    return tuple(_rat(p, "--functional") for p in parts)


# --- reports -----------------------------------------------------------------------

def q(x) -> str:
    return str(Fraction(x))


def qv(v) -> list[str]:
    return [q(x) for x in v]


def qm(m: Mat) -> list[list[str]]:
    return [qv(r) for r in m.rows]


class Report:
    def __init__(self, pipeline: str, source: str):
        self.pipeline = pipeline
        self.source = source
        self.checks: list[dict] = []
        self.data: dict[str, Any] = {}
        self.certificates: list[dict] = []
        self.warnings: list[str] = []

    def check(self, name: str, verdict, condition: str | None = None, **detail):
        if isinstance(verdict, bool):
            verdict = "pass" if verdict else "fail"
        entry = {"name": name, "verdict": verdict}
        if condition:
            entry["condition"] = condition
        if detail:
            entry["detail"] = detail
        self.checks.append(entry)
        return verdict

    @property
    def failed(self) -> bool:
        return any(c["verdict"] == "fail" for c in self.checks)

    def to_dict(self, seconds: float | None = None) -> dict:
        out = {
            "schema": SCHEMA,
            "pipeline": self.pipeline,
            "input": self.source,
            "status": "fail" if self.failed else "pass",
            "checks": self.checks,
            "data": self.data,
            "certificates": self.certificates,
            "warnings": self.warnings,
        }
        if seconds is not None:
            out["timing"] = {"seconds": round(seconds, 6)}
        return out


def dumps(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2, ensure_ascii=False)


# --- pipelines -----------------------------------------------------------------------

def _require_spindler(problem: Problem, what: str) -> SpindlerData:
    if problem.data is None:
        raise ValidationError("$", f"{what} needs Spindler data, not a bare structure-constant algebra")
    return problem.data


def cmd_build(problem: Problem, args) -> Report:
    rep = Report("build", problem.source)
    g = problem.algebra
    rep.check("jacobi_identity", "pass" if not getattr(args, "defer_jacobi_check", False) else "inconclusive")
    center = g.center()
    derived = g.derived_subalgebra()
    rep.data.update(
        dim=g.dim,
        labels=list(g.labels),
        center=[qv(v) for v in center],
        derived_dim=len(derived),
        lower_central_series_dims=[len(s) for s in g.lower_central_series()],
        derived_series_dims=[len(s) for s in g.derived_series()],
        solvable=g.is_solvable(),
        nilpotent=g.is_nilpotent(),
    )
    if problem.data is not None:
        data = problem.data
        rep.data["blocks"] = {"V": data.dim_v, "z": data.dim_z, "l": data.l.dim}
        rep.check("center_closed_form", subspace_equal(center, center_closed_form(data), g.dim))
        rep.check("derived_closed_form", subspace_equal(derived, derived_closed_form(data), g.dim))
        rep.check("u_is_ideal", g.subspace_is_ideal(data.block_basis("V") + data.block_basis("z")))
        if data.dim_z and len(data.beta_image()) < data.dim_z:
            rep.warnings.append("span beta(V, V) is a proper subspace of z; z(g) is not contained in [g, g]")
        torus = problem.witnesses.get("torus")
        if torus:
            rep.check("effective_torus", check_effective_torus(data, torus))
    return rep


def cmd_derivations(problem: Problem, args) -> Report:
    rep = Report("derivations", problem.source)
    g = problem.algebra
    basis = derivation_algebra(g)
    inner = inner_derivations(g)
    flat = [b.flatten() for b in basis]
    rep.check("basis_are_derivations", all(_is_derivation(g, b) for b in basis))
    rep.check("inner_contained", span_rank(flat + inner, g.dim ** 2) == len(flat))
    rep.data.update(
        dim=g.dim,
        der_dim=len(basis),
        inner_dim=len(inner),
        outer_dim=len(basis) - len(inner),
        basis=[qm(b) for b in basis],
    )
    return rep


def _is_derivation(g, m) -> bool:
    try:
        Derivation(m, g)
        return True
    except NotADerivation:
        return False


def _resolve_derivation(problem: Problem, rep: Report):
    """Returns (Derivation, ClassifiedDerivation | None), recording checks."""
    data = problem.data
    if problem.classified is not None and data is not None:
        c = problem.classified
        try:
            cd, d = build_classified(data, c["h"], c["D_V"], c["D_z"], algebra=problem.algebra)
        except ConditionViolation as exc:
            for n, msg in check_conditions(data, c["h"], c["D_V"], c["D_z"]):
                rep.check(f"condition_{n}", "fail", condition=f"classification condition {n}", reason=msg)
            rep.data["rejected_condition"] = exc.condition
            return None, None
        except NotADerivation as exc:
            rep.check("is_derivation", "fail", reason=str(exc))
            return None, None
        rep.check("built_from_triple", "pass")
        return d, cd
    if problem.derivation is not None:
        try:
            d = Derivation(problem.derivation, problem.algebra)
        except NotADerivation as exc:
            rep.check("is_derivation", "fail", reason=str(exc))
            return None, None
        return d, None
    raise ValidationError("$", "no derivation supplied (use --derivation or a catalog entry)")


def _classify_checks(problem: Problem, rep: Report, d: Derivation, cd=None):
    data = problem.data
    rep.check("is_derivation", "pass")
    gr = detect_3grading(d)
    rep.check("three_grading", gr is not None, dims=list(gr.dims) if gr else None)
    if gr is None:
        eig = {}
        for lam in (2, -2, Fraction(1, 2), Fraction(-1, 2)):
            if eigenspace(d.matrix, lam):
                eig[q(lam)] = len(eigenspace(d.matrix, lam))
        rep.data["offending_eigenvalues"] = eig
        return gr, None
    rep.data["grading_dims"] = {"-1": len(gr.minus), "0": len(gr.zero), "+1": len(gr.plus)}
    if data is None:
        return gr, None
    diag: list[str] = []
    back = classify_from_derivation(data, d, diagnostics=diag)
    if back is None:
        msg = diag[0] if diag else "classification failed"
        verdict = "inconclusive" if msg.startswith("presentation not adapted") else "fail"
        rep.check("classification", verdict, reason=msg)
        return gr, None
    for n in (1, 2, 3):
        rep.check(f"condition_{n}", "pass", condition=f"classification condition {n}", statement=CONDITION_NAMES[n])
    rep.check("beta_compatible", is_beta_compatible(back.d_v, back.d_z, data.forms))
    zd = z_decomposition(back)
    rep.check("z_decomposition", zd.holds, dims=[len(zd.plus), len(zd.minus), len(zd.middle)])
    if cd is not None:
        rep.check("round_trip", back.h == cd.h and back.d_v == cd.d_v and back.d_z == cd.d_z)
    else:
        rebuilt = build_classified(data, back.h, back.d_v, back.d_z, algebra=problem.algebra)[1]
        rep.check("round_trip", rebuilt.matrix == d.matrix)
    rep.data["classified"] = {"h": qv(back.h), "D_V": qm(back.d_v), "D_z": qm(back.d_z)}
    if problem.entry is not None:
        w = problem.entry.witnesses
        rep.data["tube_type"] = tube_type_report(back, w.ideals, w.tube_type)
    return gr, back


def cmd_classify(problem: Problem, args) -> Report:
    rep = Report("classify", problem.source)
    d, cd = _resolve_derivation(problem, rep)
    if d is not None:
        _classify_checks(problem, rep, d, cd)
    return rep


def _certificate_dict(side, cert, query, witness) -> dict:
    return {
        "side": side,
        "witness": qv(witness),
        "witness_polynomial": str(query.polynomial(witness)),
        "subspace": [qv(v) for v in cert.subspace],
        "epsilons": qv(cert.epsilons),
        "min_epsilon": q(cert.min_epsilon) if cert.epsilons else None,
        "points": len(cert.points),
    }


def cmd_cone_span(problem: Problem, args) -> Report:
    rep = Report("cone-span", problem.source)
    data = _require_spindler(problem, "cone-span")
    f = problem.functional
    if f is None:
        raise ValidationError("--functional", "a functional f on z is required")
    try:
        query = ConeQuery(data, f, algebra=problem.algebra, convex_witness=problem.witnesses.get("convex_type_x"))
    except (SpindlerError, ValueError) as exc:
        raise ValidationError("--functional", str(exc)) from exc
    ct = query.convex_type_ok()
    rep.check("convex_type", "inconclusive" if ct is None else ct)
    d, cd = _resolve_derivation(problem, rep)
    if d is None:
        return rep
    gr, back = _classify_checks(problem, rep, d, cd)
    if gr is None or back is None:
        return rep
    rep.check("u_characterization", check_u_characterization(query))
    units = problem.witnesses.get("jordan_units") or {}
    central = problem.witnesses.get("central") or {}
    budget = args.max_halvings
    for side in (1, -1):
        tag = f"{side:+d}"
        if side not in units:
            rep.check(f"witness_{tag}", "inconclusive", reason="no Jordan units supplied")
            continue
        try:
            wit = witness_3grading(query, gr, back, side, units[side], central.get(side))
        except (ConeError, ValueError) as exc:
            rep.check(f"witness_{tag}", "fail", reason=str(exc))
            continue
        member = in_cone(query, wit)
        rep.check(
            f"witness_{tag}",
            member,
            polynomial=str(query.polynomial(wit)),
            relative_interior=in_cone_interior(query, wit, gr.part(side)) if member else False,
        )
        if not member:
            continue
        diag: list[int] = []
        cert = certify_span(query, gr.part(side), wit, max_halvings=budget, diagnostics=diag)
        if cert is None:
            rep.check(f"span_{tag}", "inconclusive", reason=f"direction {diag[0]} exhausted the epsilon budget")
            continue
        rep.check(f"span_{tag}", "pass", min_epsilon=q(cert.min_epsilon) if cert.epsilons else None)
        rep.check(f"certificate_{tag}_revalidated", cert.revalidate(query))
        rep.certificates.append(_certificate_dict(side, cert, query, wit))
    return rep


def cmd_no_go(problem: Problem, args) -> Report:
    rep = Report("no-go", problem.source)
    data = _require_spindler(problem, "no-go")
    f = problem.functional
    if f is None:
        raise ValidationError("--functional", "a functional f on z is required")
    g = problem.algebra
    try:
        query = ConeQuery(data, f, algebra=g)
    except (SpindlerError, ValueError) as exc:
        raise ValidationError("--functional", str(exc)) from exc
    if problem.candidates is not None:
        cands = [(f"candidate[{i}]", m) for i, m in enumerate(problem.candidates)]
        rep.data["candidate_source"] = "file"
    else:
        basis = derivation_algebra(g)
        cands = [("coeffs(" + ",".join(q(c) for c in cs) + ")", m) for cs, m in rescaled_combinations(basis)]
        rep.data["candidate_source"] = "der(g) basis, coefficients in {0, +-1/2, +-1}"
        rep.data["der_dim"] = len(basis)
    try:
        result = solvable_no_go_scan(data, f, cands, g=g)
    except DerivationError as exc:
        rep.check("hypotheses", "fail", reason=str(exc))
        return rep
    rep.check("hypotheses", "pass", statement="l abelian, g solvable, z(g) in [g, g]")
    rep.check("u_characterization", check_u_characterization(query))
    survivors = result.survivors
    zero_only = len(survivors) == 1 and survivors[0].reason == "zero derivation"
    rep.check("unique_survivor_is_zero", zero_only, survivors=[s.label for s in survivors])
    counts: dict[str, int] = {}
    for c in result.candidates:
        key = f"{c.verdict}: {c.reason.split(':')[0]}"
        counts[key] = counts.get(key, 0) + 1
    rep.data.update(
        candidates=len(result.candidates),
        outcome_counts=dict(sorted(counts.items())),
        note=result.note,
        failures=[
            {"label": c.label, "reason": c.reason, "dims": list(c.dims) if c.dims else None}
            for c in result.candidates if c.verdict == "fails"
        ],
    )
    return rep


def cmd_catalog(problem: Problem, args) -> Report:
    rep = Report("catalog", problem.source)
    entry = problem.entry
    if entry is None:
        raise ValidationError("--input", "catalog command expects catalog:<name>")
    for name, ok in entry.self_checks().items():
        rep.check(name, ok)
    g, data = entry.algebra, entry.data
    rep.check("center_closed_form", subspace_equal(g.center(), center_closed_form(data), g.dim))
    rep.check("derived_closed_form", subspace_equal(g.derived_subalgebra(), derived_closed_form(data), g.dim))
    w = entry.witnesses
    rep.data.update(
        name=entry.name,
        description=entry.description,
        dim=g.dim,
        blocks={"V": data.dim_v, "z": data.dim_z, "l": data.l.dim},
        labels=list(g.labels),
        functional=qv(w.f) if w.f is not None else None,
        convex_type_x=qv(w.convex_type_x) if w.convex_type_x is not None else None,
        torus=[qv(t) for t in w.torus],
        h=qv(w.h) if w.h is not None else None,
        tube_type=dict(sorted(w.tube_type.items())),
    )
    if entry.has_derivation:
        cd, d = entry.classified()
        rep.data["grading_dims"] = list(detect_3grading(d).dims)
    return rep


COMMANDS = {
    "build": cmd_build,
    "derivations": cmd_derivations,
    "classify": cmd_classify,
    "cone-span": cmd_cone_span,
    "no-go": cmd_no_go,
    "catalog": cmd_catalog,
}


def make_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="liecones", description="Exact verification pipelines for admissible Lie algebras.")
    sub = p.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        s = sub.add_parser(name)
        if name == "catalog":
            s.add_argument("name", nargs="?", help="catalog entry, e.g. jacobi(1)")
            s.add_argument("--input", help="alternative form: catalog:<name>")
        else:
            s.add_argument("--input", required=True, help="JSON file or catalog:<name>")
        s.add_argument("--functional", help="comma separated rationals, e.g. 1,1")
        s.add_argument("--derivation", help="JSON file with matrix, classified or candidates")
        s.add_argument("--max-halvings", type=int, default=40)
        s.add_argument("--report", help="also write the report to this path")
        s.add_argument("--defer-jacobi-check", action="store_true", help="skip Jacobi validation (oracle use only)")
        s.add_argument("--no-timing", action="store_true", help="omit the timing field")
    return p


def run(argv=None, out=None) -> int:
    out = out if out is not None else sys.stdout
    args = make_parser().parse_args(argv)
    t0 = time.perf_counter()
    try:
        source = args.input
        if args.command == "catalog":
            if args.name and not source:
                source = f"catalog:{args.name}"
            if not source:
                raise ParseError("catalog", "an entry name is required")
        problem = load_problem(source, validate=not args.defer_jacobi_check)
        if args.functional:
            problem.functional = parse_functional(args.functional)
        if args.derivation:
            _parse_derivation_doc(load_json(args.derivation), args.derivation, problem)
        if args.max_halvings < 0:
            raise ParseError("--max-halvings", "must be non-negative")
        rep = COMMANDS[args.command](problem, args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (ValidationError, LieError, SpindlerError, DerivationError, LinAlgError, catalog.CatalogError) as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    seconds = None if args.no_timing else time.perf_counter() - t0
    text = dumps(rep.to_dict(seconds))
    print(text, file=out)
    if args.report:
        Path(args.report).write_text(text + "\n")
    return EXIT_VERDICT if rep.failed else EXIT_OK


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
