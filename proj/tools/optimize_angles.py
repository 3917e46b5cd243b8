# Copyright 2026 The Iceberg Compiler Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Fit fixed QAOA angles for MaxCut on random 3-regular graphs.

Angles follow the circuit convention used by the C++ code: each edge applies
exp(-i g ZZ) and each mixer exp(-i b X). The mean expected cut over a handful
of random graphs is maximised for p = 1..P, warm-starting each depth from the
interpolated optimum of the previous one.
"""

import argparse
import pathlib

import networkx as nx
import numpy as np
from scipy.optimize import minimize


def cut_table(k, edges):
    x = np.arange(2**k)
    cut = np.zeros(2**k)
    for u, v in edges:
        cut += ((x >> u) ^ (x >> v)) & 1
    return cut


def expected_cut(angles, k, cut, zz):
    p = len(angles) // 2
    gammas, betas = angles[:p], angles[p:]
    psi = np.full(2**k, 2 ** (-k / 2), dtype=complex)
    c, s = None, None
    for g, b in zip(gammas, betas):
        psi *= np.exp(-1j * g * zz)
        c, s = np.cos(b), -1j * np.sin(b)
        for q in range(k):
            psi = psi.reshape(-1, 2, 2**q)
            a0, a1 = psi[:, 0, :].copy(), psi[:, 1, :].copy()
            psi[:, 0, :] = c * a0 + s * a1
            psi[:, 1, :] = s * a0 + c * a1
            psi = psi.reshape(-1)
    return float(np.sum(np.abs(psi) ** 2 * cut))


def interpolate(prev):
    p = len(prev)
    if p == 0:
        return np.array([0.3])
    grid = np.linspace(0, 1, p)
    return np.interp(np.linspace(0, 1, p + 1), grid, prev)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--k", type=int, default=10)
    ap.add_argument("--pmax", type=int, default=4)
    ap.add_argument("--graphs", type=int, default=5)
    ap.add_argument("--seed", type=int, default=7)
    ap.add_argument("--out", default="data")
    args = ap.parse_args()

    graphs = []
    for i in range(args.graphs):
        g = nx.random_regular_graph(3, args.k, seed=args.seed + i)
        edges = list(g.edges())
        cut = cut_table(args.k, edges)
        zz = len(edges) - 2 * cut
        graphs.append((cut, zz, cut.max()))

    def loss(a):
        return -np.mean([expected_cut(a, args.k, cut, zz) / fmax for cut, zz, fmax in graphs])

    out = pathlib.Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    gam, bet = np.array([]), np.array([])
    for p in range(1, args.pmax + 1):
        best = None
        starts = [np.concatenate([interpolate(gam), interpolate(bet[::-1])[::-1] if p > 1 else [0.4]])]
        rng = np.random.default_rng(args.seed + p)
        starts += [rng.uniform(0.05, 0.8, 2 * p) for _ in range(4)]
        for x0 in starts:
            res = minimize(loss, x0, method="BFGS")
            if best is None or res.fun < best.fun:
                best = res
        gam, bet = best.x[:p], best.x[p:]
        path = out / f"params_regular3_k{args.k}_p{p}.txt"
        path.write_text(
            f"# mean approximation ratio {-best.fun:.6f} over {args.graphs} random 3-regular graphs\n"
            f"p: {p}\n"
            f"gammas: [{', '.join(f'{v:.10f}' for v in gam)}]\n"
            f"betas: [{', '.join(f'{v:.10f}' for v in bet)}]\n"
        )
        print(f"p={p} ratio={-best.fun:.4f} gammas={np.round(gam, 4)} betas={np.round(bet, 4)}")


if __name__ == "__main__":
    main()
