"""Shared setup for the demo scripts."""

import json
import os
from pathlib import Path

from qfs.config import load_config

HERE = Path(__file__).resolve().parent
CONFIG = HERE.parent / "configs" / "fig2.json"
OUT = Path(os.environ.get("QFS_DEMO_OUTPUT", HERE / "output"))


def fig2():
    return load_config(CONFIG)


def save(name, text):
    OUT.mkdir(exist_ok=True)
    path = OUT / name
    path.write_text(text)
    print(f"wrote {path}")


def raw_config():
    return json.loads(CONFIG.read_text())
