"""Scan rescaled combinations of a der(g) basis for grading derivations with spanning cone parts.

Only meaningful for solvable entries with abelian l (the oscillator is the shipped one).

    python3 scripts/no_go_scan.py [--entry oscillator] [--coeffs 0,1/2,-1/2,1,-1]
"""

import argparse
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction

from liecones import catalog
from liecones.derivations import derivation_algebra, rescaled_combinations, solvable_no_go_scan


@dataclass
class ScanConfig:
    entry: str = "oscillator"
    coeffs: tuple = (Fraction(0), Fraction(1, 2), Fraction(-1, 2), Fraction(1), Fraction(-1))
    show_failures: int = 5


def run(cfg: ScanConfig):
    e = catalog.get(cfg.entry)
    g = e.algebra
    basis = derivation_algebra(g)
    print(f"{e.name}: dim g = {g.dim}, dim der(g) = {len(basis)}, {len(cfg.coeffs) ** len(basis)} candidates")
    cands = ((",".join(str(c) for c in cs), m) for cs, m in rescaled_combinations(basis, cfg.coeffs))
    report = solvable_no_go_scan(e.data, e.witnesses.f, cands, g=g)
    counts = Counter((c.verdict, c.reason.split(":")[0]) for c in report.candidates)
    for (verdict, reason), n in sorted(counts.items()):
        print(f"  {n:6d}  {verdict:<9} {reason}")
    fails = [c for c in report.candidates if c.verdict == "fails"]
    for c in fails[: cfg.show_failures]:
        print(f"  fails: {c.label} dims={c.dims} {c.reason}")
    print(f"survivors: {[c.label for c in report.survivors]}")
    print(report.note)
    return report


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--entry", default="oscillator")
    ap.add_argument("--coeffs", default="0,1/2,-1/2,1,-1")
    a = ap.parse_args()
    cfg = ScanConfig(entry=a.entry, coeffs=tuple(Fraction(s) for s in a.coeffs.split(",")))
    report = run(cfg)
    nonzero = [c for c in report.survivors if c.reason != "zero derivation"]
    raise SystemExit(1 if nonzero else 0)


if __name__ == "__main__":
    main()
