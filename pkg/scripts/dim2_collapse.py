"""Ratio of the average log spectral radius to log sigma_1 in dimension 2.

Compares Monte Carlo over SO(2) and O(2) with the SO(2) quadrature
``log cosh t`` as ``diag(e^t, e^-t)`` approaches the identity.

    python3 scripts/dim2_collapse.py --samples 200000 --seed 1
"""
import argparse
import math
from dataclasses import dataclass

from meanineq.dim2 import exact_average_2d, exact_average_o2
from meanineq.linalg import DiagonalSpec
from meanineq.sampling import SeededStream
from meanineq.spectral import average_log_spectral_radius


@dataclass
class Config:
    scales: tuple = (2.0, 1.0, 0.3, 0.1, 0.03, 0.01)
    samples: int = 200_000
    seed: int = 1


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--scales", type=float, nargs="+", default=list(Config.scales))
    p.add_argument("--samples", type=int, default=Config.samples)
    p.add_argument("--seed", type=int, default=Config.seed)
    cfg = Config(**vars(p.parse_args()))
    stream = SeededStream(cfg.seed)
    print(f"{'t':>6} {'SO(2) quad':>11} {'SO(2) MC':>18} {'O(2) quad':>10} {'O(2) MC':>18}")
    for k, t in enumerate(cfg.scales):
        A = DiagonalSpec((1.0, -1.0), scale=t).matrix()
        cells = []
        for j, group in enumerate(("SO", "O")):
            res = average_log_spectral_radius(A, group, cfg.samples, stream.child(k).child(j))
            cells.append(f"{res.ratio:.5f}+-{res.estimate.std_error / t:.5f}")
        a = math.exp(t)
        print(f"{t:6.3f} {exact_average_2d(a) / t:11.5f} {cells[0]:>18} "
              f"{exact_average_o2(a) / t:10.5f} {cells[1]:>18}")


if __name__ == "__main__":
    main()
