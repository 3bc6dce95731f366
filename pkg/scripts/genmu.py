"""Both sides of the integrated inequality for a bi-invariant law on SL(n).

    python3 scripts/genmu.py --dim 3 --measure loguniform:1 --matrices 50 --seed 1
"""
import argparse
import json
from dataclasses import asdict, dataclass

from meanineq.cli import parse_measure
from meanineq.sampling import SeededStream
from meanineq.spectral import genmu_experiment


@dataclass
class Config:
    dim: int = 3
    group: str = "O"
    measure: str = "loguniform:1"
    matrices: int = 50
    samples: int = 10_000
    c_lower: float = 0.25
    seed: int = 1


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    for name, value in asdict(Config()).items():
        p.add_argument(f"--{name.replace('_', '-')}", dest=name, type=type(value), default=value)
    cfg = Config(**vars(p.parse_args()))
    spec = parse_measure(cfg.measure, cfg.dim, "complex" if cfg.group == "U" else "real")
    res = genmu_experiment(spec, cfg.group, cfg.matrices, cfg.samples, SeededStream(cfg.seed),
                           c_lower=cfg.c_lower)
    print(json.dumps({"config": asdict(cfg), "result": res.to_dict()}, indent=2))


if __name__ == "__main__":
    main()
