"""Tabulate fundamental units and canonical monodromies of real quadratic fields."""
from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

from _config import parse_config
from solenoid_lab._arith import is_squarefree
from solenoid_lab.solv3 import eigen_data, format_surd, fundamental_unit, matrix_from_field


@dataclass
class Config:
    max_d: int = 200
    out: str = "solv3_fields.csv"


def main(cfg: Config) -> None:
    with Path(cfg.out).open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(("d", "unit", "norm", "matrix", "trace", "lambda"))
        for d in range(2, cfg.max_d + 1):
            if not is_squarefree(d):
                continue
            eps = fundamental_unit(d)
            M = matrix_from_field(d)
            w.writerow((d, format_surd(eps), int(eps.norm()), str(M), M.trace, format_surd(eigen_data(M).lam)))
    print(f"wrote {cfg.out}")


if __name__ == "__main__":
    main(parse_config(Config, __doc__.splitlines()[0]))
