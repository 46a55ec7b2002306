#!/usr/bin/env python3
"""Construct the bundled verification corpus.

Candidate (curve, point, prime) triples come from parameterized families
built point-first: coordinates with prescribed valuations are chosen, every
a-invariant except a6 is taken from a small grid, and a6 is solved from the
curve equation so the point is on the curve by construction.  Each candidate
is then fully verified (Tate run, profile, closed form vs. oracle for
n <= 40, prediction checks) before being admitted, and pinned with an
``expect`` block.

Run from the repository root:  python scripts/build_corpus.py
"""

from __future__ import annotations

import sys
from fractions import Fraction
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from gcval.corpus import CorpusEntry, entry_to_json, verify_entry
from gcval.curve_core import Point, WeierstrassModel
from gcval.engine import classify_row
from gcval.errors import ToolkitError
from gcval.exact_numbers import format_rational
from gcval.profile import compute_profile
from gcval.tate import run_tate

OUT = Path(__file__).resolve().parent.parent / "src" / "gcval" / "data" / "corpus.jsonl"


def admit(label, a, point, prime, extra_flags=()):
    """Fully verify a candidate and return a pinned CorpusEntry, or None."""
    try:
        model = WeierstrassModel(*a)
        pt = Point(*point)
        tate = run_tate(model, prime)
        prof = compute_profile(tate, pt)
        row = classify_row(prof)
    except ToolkitError as exc:
        print(f"  reject {label}: {type(exc).__name__}: {exc}")
        return None
    entry = CorpusEntry(
        label=label,
        a=tuple(format_rational(x) for x in model.coefficients()),
        point=(format_rational(pt.x), format_rational(pt.y)),
        prime=prime,
        expect={"kodaira": str(tate.kodaira), "cv": tate.cv,
                "mP": prof.m_p, "row": row},
        flags=tuple(extra_flags),
    )
    report = verify_entry(entry, n_max=40)
    if not report.ok:
        print(f"  reject {label}: mismatches={report.mismatches[:2]} "
              f"failures={report.check_failures[:3]} error={report.error}")
        return None
    print(f"  admit {label:28s} {report.kodaira:5s} cv={report.cv} row={row}")
    return entry


def main():
    entries = []

    def take(entry):
        if entry is not None:
            entries.append(entry)
        return entry is not None

    print("additive families (point-first constructions):")
    take(admit("III-p5", (0, 0, 0, 5, -125), (5, 5), 5))
    take(admit("III-p7", (0, 0, 0, 7, -343), (7, 7), 7))
    take(admit("IV-p7", (0, 0, 0, 0, -147), (7, 14), 7))
    take(admit("III-p5-nonminimal-input",
               (0, 0, 0, 5 ** 5, -(5 ** 9)), (125, 625), 5))
    take(admit("IIIstar-p5", (0, 0, 0, 125, -3125), (25, 125), 5))
    take(admit("IV-p5", (0, 0, 0, 0, -25), (5, 10), 5))
    take(admit("IVstar-p5", (0, 0, 0, 0, 5 ** 4 * (1 - 25)), (25, 25), 5))
    take(admit("I1star-c4-deep-p3", (0, 3, 0, 27, -1134), (9, 9), 3))
    take(admit("I1star-c4-vx1-p3", (0, 3, 0, 81, 324), (-3, 9), 3))
    take(admit("I1star-c2-p3", (0, 3, 0, 27, 162), (-3, 9), 3))
    take(admit("I2star-c4-p3", (0, 3, 0, 81, -972), (9, 27), 3))
    # p = 2 with v(j) >= 0: the potential-good-reduction regime that only
    # exists at 2 for I_m* (and where v(delta) = m + 4 + v(c4) fails)
    take(admit("I1star-c4-p2-potgood", (0, 2, 0, 0, -92), (4, 2), 2,
               extra_flags=("potential-good-reduction",)))
    take(admit("I2star-c4-p2-potgood", (0, 2, 0, 8, -112), (4, 4), 2,
               extra_flags=("potential-good-reduction",)))

    print("multiplicative families:")
    take(admit("I2-split-a1-p5", (1, 0, 0, 0, -75), (5, 5), 5))
    take(admit("I5-split-a2-p3", (1, 0, 0, 0, -243), (9, 18), 3))
    take(admit("I4-split-a2-p5", (1, 0, 0, 0, -14375), (25, 25), 5))
    take(admit("I2-nonsplit-p3", (0, 2, 0, 0, 9), (0, 3), 3))
    take(admit("I4-nonsplit-p3", (0, 2, 0, 0, 81), (0, 9), 3))

    print("non-singular branches:")
    take(admit("37a-x5P-p2", (0, 0, 1, -1, 0),
               (Fraction(1, 4), Fraction(-5, 8)), 2))
    take(admit("37a-x10P-p2-s2", (0, 0, 1, -1, 0),
               (Fraction(161, 16), Fraction(-2065, 64)), 2,
               extra_flags=("staircase-s2",)))
    take(admit("37a-gen-p2", (0, 0, 1, -1, 0), (0, 0), 2))
    take(admit("37a-gen-p3", (0, 0, 1, -1, 0), (0, 0), 3))
    take(admit("53a-x4P-p2-wcase", (1, -1, 1, 0, 0),
               (Fraction(-1, 4), Fraction(-5, 8)), 2,
               extra_flags=("staircase-w-equality",)))
    take(admit("III-p5-nonsingular-point", (0, 0, 0, 5, -125), (54, -397), 5))

    print("beyond-table rows (flagged):")
    # I0* with a singular rational point: search y^2 = x^3 + a2 x^2 + p^2 A x + a6
    # with the cubic T^3 + (A mod p) T + (a6/p^3) separable.
    found_i0 = {"I0*-c2": False, "I0*-c4": False}
    for p in (3, 5, 7):
        for alpha in range(1, 2 * p):
            for beta in range(1, 2 * p):
                for A in range(1, p):
                    x, y = p * alpha, p * beta
                    a4 = p * p * A
                    a6 = y * y - x ** 3 - a4 * x
                    try:
                        model = WeierstrassModel(0, 0, 0, a4, a6)
                        tate = run_tate(model, p)
                        if str(tate.kodaira) != "I0*":
                            continue
                        prof = compute_profile(tate, Point(x, y))
                        row = classify_row(prof)
                    except ToolkitError:
                        continue
                    if row not in found_i0 or found_i0[row]:
                        continue
                    label = f"I0star-c{tate.cv}-p{p}"
                    if take(admit(label, (0, 0, 0, a4, a6), (x, y), p,
                                  extra_flags=("beyond-table-row",))):
                        found_i0[row] = True
                if all(found_i0.values()):
                    break
            if all(found_i0.values()):
                break
        if all(found_i0.values()):
            break

    rows = {}
    for e in entries:
        rows.setdefault(e.expect["row"], []).append(e.label)
    print(f"\n{len(entries)} entries; rows covered:")
    for row, labels in sorted(rows.items()):
        print(f"  {row:32s} {labels}")

    OUT.parent.mkdir(parents=True, exist_ok=True)
    with open(OUT, "w", encoding="utf-8") as handle:
        handle.write("# bundled verification corpus: one JSON entry per line\n")
        handle.write("# every expect block was pinned by the oracle sweep "
                     "(closed form == division-polynomial min for n <= 40)\n")
        for e in entries:
            handle.write(entry_to_json(e) + "\n")
    print(f"\nwrote {OUT}")


if __name__ == "__main__":
    main()
