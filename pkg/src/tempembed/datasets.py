"""Locating public temporal datasets that must be downloaded by hand.

Nothing is fetched over the network.  The EU-institution email network is
the SNAP ``email-Eu-core-temporal`` file (lines ``src dst seconds``); place it
at ``data/email-Eu-core-temporal.txt`` under the working directory or point
``TEMPEMBED_EMAIL_EU`` at it.  Gzipped copies are accepted.
"""

from __future__ import annotations

import gzip
import os
from pathlib import Path

from .graph import SnapshotSpec, TemporalGraph, parse_edge_list

EMAIL_EU_ENV = "TEMPEMBED_EMAIL_EU"
EMAIL_EU_NAMES = ("email-Eu-core-temporal.txt", "email-Eu-core-temporal.txt.gz")
EMAIL_EU_URL = "https://snap.stanford.edu/data/email-Eu-core-temporal.txt.gz"


def find_email_eu(search: tuple[Path, ...] | None = None) -> Path | None:
    env = os.environ.get(EMAIL_EU_ENV)
    if env:
        return Path(env) if Path(env).exists() else None
    dirs = search if search is not None else (Path("data"), Path(__file__).resolve().parents[2] / "data")
    for d in dirs:
        for name in EMAIL_EU_NAMES:
            if (d / name).exists():
                return d / name
    return None


def load_email_eu(path=None, snapshots: int = 30) -> TemporalGraph:
    path = Path(path) if path is not None else find_email_eu()
    if path is None:
        raise FileNotFoundError(
            f"email-Eu-core-temporal not found; download {EMAIL_EU_URL} into ./data "
            f"or set {EMAIL_EU_ENV}")
    opener = gzip.open if path.suffix == ".gz" else open
    with opener(path, "rt", encoding="utf-8") as fh:
        return parse_edge_list(fh, SnapshotSpec.equal_width(snapshots))
