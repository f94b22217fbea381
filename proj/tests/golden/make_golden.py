"""Writes golden Betti data for hand-derived resolutions.

k[x]/(x^d): P_n = A(-delta(n)) with differentials alternating x and x^(d-1).
k[x,y]: Koszul complex A <- A(-1)^2 <- A(-2).
Each complex is built as explicit matrices per internal degree, checked for
exactness (below the truncation) and minimality, then its generator degrees
are written out.
"""

import json
import pathlib
import sys

from sympy import Matrix, zeros

N = 8


def delta(n, p, d):
    return (n // p) * d + n % p


def truncated_polynomial(d, D):
    # A_k has basis x^k for k < d. A free module A(-s) has basis x^k in degree s + k.
    shifts = [delta(n, 2, d) for n in range(N + 2)]
    # d_n : P_n -> P_{n-1} is multiplication by x^(shifts[n] - shifts[n-1])
    def block(n, deg):
        # matrix of d_n in internal degree deg
        src = 1 if 0 <= deg - shifts[n] < d else 0
        dst = 1 if 0 <= deg - shifts[n - 1] < d else 0
        m = zeros(dst, src)
        if src and dst:
            m[0, 0] = 1
        return m

    for n in range(1, N + 1):
        for deg in range(D + 1):
            a, b = block(n, deg), block(n + 1, deg)
            if a.shape[1] and b.shape[0] and b.shape[1] and a.shape[0]:
                assert (a * b).is_zero_matrix
            src_dim = a.shape[1]
            rank_a = a.rank() if a.shape[0] and a.shape[1] else 0
            rank_b = b.rank() if b.shape[0] and b.shape[1] else 0
            # exact at P_n: ker d_n = im d_{n+1}, checked where P_{n+1} is visible
            if deg + d <= D:
                assert src_dim - rank_a == rank_b, (d, n, deg)
        # minimality: the map is multiplication by a positive power of x
        assert shifts[n] > shifts[n - 1]
    return shifts[: N + 1]


def commuting_loops(D):
    # A_k has basis x^i y^(k-i). Koszul complex: d1(e_x, e_y) = (x, y), d2(f) = (y, -x).
    def basis(k):
        return [(i, k - i) for i in range(k + 1)] if k >= 0 else []

    def mult(k, var):
        # multiplication A_k -> A_{k+1} by var
        src, dst = basis(k), basis(k + 1)
        m = zeros(len(dst), len(src))
        for c, (i, j) in enumerate(src):
            m[dst.index((i + 1, j) if var == "x" else (i, j + 1)), c] = 1
        return m

    for deg in range(1, D + 1):
        d1 = Matrix.hstack(mult(deg - 1, "x"), mult(deg - 1, "y"))
        d2 = Matrix.vstack(mult(deg - 2, "y"), -mult(deg - 2, "x")) if deg >= 2 else zeros(2 * deg, 0)
        if d2.shape[1]:
            assert (d1 * d2).is_zero_matrix
        assert d1.rank() == len(basis(deg))  # augmentation onto the radical in degree deg
        r2 = d2.rank() if d2.shape[1] else 0
        assert d1.shape[1] - d1.rank() == r2, deg
        if d2.shape[1]:
            assert d2.shape[1] - r2 == 0
    return [0, 1, 2] + [None] * (N - 2)


def main(out_dir):
    out = pathlib.Path(out_dir)
    for d in (2, 3, 4):
        D = delta(N, 2, d) + d
        degs = truncated_polynomial(d, D)
        payload = {"algebra": f"x{d}.pk", "rows": [{"n": n, "degrees": [g], "counts": [1]} for n, g in enumerate(degs)]}
        (out / f"x{d}.json").write_text(json.dumps(payload, indent=1) + "\n")
    degs = commuting_loops(12)
    counts = [1, 2, 1]
    rows = [{"n": n, "degrees": [] if g is None else [g], "counts": [] if g is None else [counts[n]]} for n, g in enumerate(degs)]
    (out / "commuting_loops.json").write_text(json.dumps({"algebra": "commuting_loops.pk", "rows": rows}, indent=1) + "\n")


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else pathlib.Path(__file__).parent)
