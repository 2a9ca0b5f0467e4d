"""Rewrite the shipped scenario files from the catalog builders."""

from pathlib import Path

from wallcross.catalog import BUILDERS
from wallcross.scenario import SCENARIO_DIR, export_scenario

HEADERS = {
    "main": [
        "Toric model with four chambers (r1 <> 1, r2 <> 1).",
        "Every gluing is an exact identity of Laurent polynomials; the square",
        "cell is inconsistent at order qp*qpp, and the ledger w0/w1/w2 records",
        "the bivector that absorbs it.  Classes with n3 > 0 and n4 = m = 1 are",
        "assumed not to contribute.",
    ],
    "open": [
        "Mirror of the open complement: walls only, no superpotentials.",
        "The square cell closes up exactly.",
    ],
    "compact": [
        "Compactified model: extra terms q1/z1, q2/z2, q4/z4 and walls with",
        "inverse-coordinate corrections.  The gluings hold exactly as identities",
        "of formal series (their expansion needs the cutoff).  No ledger is",
        "shipped, so the curvature keeps the cell defect as its leading term.",
    ],
}


def main():
    for name, build in BUILDERS.items():
        path = Path(SCENARIO_DIR) / f"{name}.scn"
        path.write_text(export_scenario(build(), header=HEADERS[name]))
        print(f"wrote {path}")


if __name__ == "__main__":
    main()
