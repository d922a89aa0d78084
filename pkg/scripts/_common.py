"""Shared helpers: parse a dataclass config from argv and pick an output dir."""

import argparse
import dataclasses
from pathlib import Path


def parse_config(cls, description: str):
    ap = argparse.ArgumentParser(description=description)
    for f in dataclasses.fields(cls):
        ap.add_argument(f"--{f.name.replace('_', '-')}", type=type(f.default), default=f.default)
    return cls(**vars(ap.parse_args()))


def out_dir(path: str) -> Path:
    p = Path(path)
    p.mkdir(parents=True, exist_ok=True)
    return p
