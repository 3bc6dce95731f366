"""Estimate the dimensional constant on a grid of diagonal matrices.

    python3 scripts/estimate_cn.py --dim 3 --group O --directions 20 --samples 100000 --seed 1
"""
import argparse
import json
from dataclasses import asdict, dataclass

from meanineq.sampling import SeededStream, random_traceless_directions
from meanineq.spectral import DiagonalGrid, estimate_dimensional_constant


@dataclass
class Config:
    dim: int = 3
    group: str = "O"
    directions: int = 20
    scales: tuple = (0.1, 0.3, 1.0, 2.0)
    samples: int = 100_000
    seed: int = 1
    threads: int = 1


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    for name, value in asdict(Config()).items():
        if name == "scales":
            p.add_argument("--scales", type=float, nargs="+", default=list(value))
        else:
            p.add_argument(f"--{name}", type=type(value), default=value)
    cfg = Config(**vars(p.parse_args()))
    stream = SeededStream(cfg.seed)
    dirs = random_traceless_directions(cfg.dim, stream.child(0), cfg.directions)
    grid = DiagonalGrid(tuple(dirs), tuple(cfg.scales))
    est = estimate_dimensional_constant(cfg.dim, grid, cfg.group, cfg.samples, stream.child(1),
                                        cfg.threads)
    for row in sorted(est.rows, key=lambda r: r["ratio_lower"])[:5]:
        print(f"t={row['t']:<5} d={[round(x, 3) for x in row['d_vector']]} "
              f"ratio={row['ratio']:.4f} lower={row['ratio_lower']:.4f}")
    print(json.dumps({"config": asdict(cfg), "c_lower": est.c_lower,
                      "confidence": est.confidence}, indent=2))


if __name__ == "__main__":
    main()
