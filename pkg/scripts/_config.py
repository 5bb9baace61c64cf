"""Turn a dataclass of experiment settings into command-line flags."""
from __future__ import annotations

import argparse
import dataclasses
from typing import TypeVar

T = TypeVar("T")


def parse_config(cls: type[T], description: str) -> T:
    parser = argparse.ArgumentParser(description=description)
    for f in dataclasses.fields(cls):
        kind = type(f.default)
        parser.add_argument(f"--{f.name.replace('_', '-')}", type=kind, default=f.default,
                            help=f"default: {f.default}")
    return cls(**vars(parser.parse_args()))
