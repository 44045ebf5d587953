"""Bundled group and base-block files transcribed from the source tables."""

from __future__ import annotations

from importlib import resources
from pathlib import Path

GROUP_FILES = {
    "psl211": "g_psl211.grp",
    "m11": "g_m11.grp",
    "d38": "g_d38.grp",
    "a6": "g_a6.grp",
    "s6": "g_s6.grp",
    "z3s3": "g_z3s3.grp",
    "z15z4z2": "g_z15z4z2.grp",
    "e16a4": "g_e16a4.grp",
    "z17z16": "g_z17z16.grp",
}

BLOCK_FILES = {
    "t1_a": "t1_blocks_a.blk",
    "t1_b": "t1_blocks_b.blk",
    "t2_a": "t2_blocks_a.blk",
    "t2_b": "t2_blocks_b.blk",
    "t3": "t3_blocks.blk",
    "t4": "t4_blocks.blk",
    "t5": "t5_blocks.blk",
    "t6": "t6_blocks.blk",
}


def fixture_path(name: str) -> Path:
    """Filesystem path of a bundled fixture file (short key or filename)."""
    fname = GROUP_FILES.get(name) or BLOCK_FILES.get(name) or name
    path = Path(str(resources.files(__package__).joinpath(fname)))
    if not path.exists():
        raise FileNotFoundError(f"no bundled fixture {name!r}")
    return path
