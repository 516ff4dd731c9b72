"""Regenerate the bundled P1/P2 gate layouts.

The shipped .maze files are the source of truth; this script records how the
tuned layouts were drawn.  Usage: python tools/make_gates.py [outdir]
"""

import sys
from pathlib import Path

N = 60


def blank():
    return [["#"] * N for _ in range(N)]


def carve(g, r0, r1, c0, c1, ch="."):
    for r in range(r0, r1 + 1):
        for c in range(c0, c1 + 1):
            g[r][c] = ch


def p2(width=5, cross_row=30, cross_col=30):
    """y (north) -> p (south) channel crossed by x (west) -> q (east)."""
    g = blank()
    h = width // 2
    carve(g, 1, N - 2, cross_col - h, cross_col + h)
    carve(g, cross_row - h, cross_row + h, 1, N - 2)
    carve(g, N - 4, N - 2, cross_col - h, cross_col + h, "P")
    carve(g, cross_row - h, cross_row + h, N - 4, N - 2, "Q")
    g[1][cross_col] = "Y"
    g[cross_row][1] = "X"
    return g


def p1(width=5, merge_row=30, merge_col=30, p_width=3):
    """x (west) and y (north) merge and run east to q; a side branch runs south to p."""
    g = blank()
    h = width // 2
    carve(g, 1, merge_row + h, merge_col - h, merge_col + h)
    carve(g, merge_row - h, merge_row + h, 1, N - 2)
    ph = p_width // 2
    carve(g, merge_row + h, N - 2, merge_col - ph, merge_col + ph)
    carve(g, N - 4, N - 2, merge_col - ph, merge_col + ph, "P")
    carve(g, merge_row - h, merge_row + h, N - 4, N - 2, "Q")
    g[1][merge_col] = "Y"
    g[merge_row][1] = "X"
    return g


def dump(g):
    return "".join("".join(row) + "\n" for row in g)


def main(argv):
    out = Path(argv[1] if len(argv) > 1 else "src/slimeca/data/gates")
    out.mkdir(parents=True, exist_ok=True)
    (out / "P1.maze").write_text(dump(p1()), encoding="ascii")
    (out / "P2.maze").write_text(dump(p2()), encoding="ascii")


if __name__ == "__main__":
    main(sys.argv)
