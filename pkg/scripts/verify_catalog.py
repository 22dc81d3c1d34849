"""Run every self-check, closed-form check and span certificate over the catalog.

    python3 scripts/verify_catalog.py [--entries jacobi(1),ex318] [--max-halvings 40]
"""

import argparse
import time
from dataclasses import dataclass, field

from liecones import catalog
from liecones.cones import ConeQuery, certify_span, check_u_characterization, witness_3grading
from liecones.derivations import derivation_algebra, detect_3grading, inner_derivations, z_decomposition
from liecones.linalg import subspace_equal
from liecones.spindler import center_closed_form, derived_closed_form


@dataclass
class VerifyConfig:
    entries: list[str] = field(default_factory=catalog.standard_entries)
    max_halvings: int = 40
    with_derivations: bool = True


def verify(name: str, cfg: VerifyConfig) -> dict:
    e = catalog.get(name, check=False)
    g = e.algebra
    row = {"name": name, "dim": g.dim}
    row.update(e.self_checks())
    row["center"] = subspace_equal(g.center(), center_closed_form(e.data), g.dim)
    row["derived"] = subspace_equal(g.derived_subalgebra(), derived_closed_form(e.data), g.dim)
    if cfg.with_derivations:
        row["der"] = len(derivation_algebra(g))
        row["inner"] = len(inner_derivations(g))
    if e.has_derivation:
        cd, d = e.classified()
        gr = detect_3grading(d)
        row["grading"] = gr.dims
        row["z_decomp"] = z_decomposition(cd).holds
        w = e.witnesses
        if w.f is not None and w.jordan_units:
            q = ConeQuery(e.data, w.f, algebra=g)
            row["u_char"] = check_u_characterization(q)
            for side in (1, -1):
                x = witness_3grading(q, gr, cd, side, w.jordan_units[side], w.central.get(side))
                cert = certify_span(q, gr.part(side), x, max_halvings=cfg.max_halvings)
                row[f"span{side:+d}"] = "none" if cert is None else f"eps>={cert.min_epsilon}"
    return row


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--entries", help="comma separated catalog names")
    ap.add_argument("--max-halvings", type=int, default=40)
    ap.add_argument("--skip-derivations", action="store_true")
    a = ap.parse_args()
    cfg = VerifyConfig(max_halvings=a.max_halvings, with_derivations=not a.skip_derivations)
    if a.entries:
        cfg.entries = [s.strip() for s in a.entries.split(",") if s.strip()]

    bad = 0
    for name in cfg.entries:
        t0 = time.perf_counter()
        row = verify(name, cfg)
        dt = time.perf_counter() - t0
        fails = [k for k, v in row.items() if v is False]
        bad += bool(fails)
        cells = " ".join(f"{k}={v}" for k, v in row.items() if k != "name")
        print(f"{name:<26} {cells}  ({dt:.1f}s){'  FAIL: ' + ','.join(fails) if fails else ''}")
    raise SystemExit(1 if bad else 0)


if __name__ == "__main__":
    main()
