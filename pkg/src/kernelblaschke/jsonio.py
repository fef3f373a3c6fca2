"""JSON helpers: complex <-> [re, im] pairs, canonical dumps, atomic file writes.

Reports must be byte-identical across runs for a fixed (config, seed), so all
serialization goes through `dumps_canonical` (sorted keys, fixed separators,
no timestamps) and files are written atomically (temp file + rename).
"""

from __future__ import annotations

import json
import os
import tempfile


def complex_pair(z: complex) -> list[float]:
    z = complex(z)
    return [z.real, z.imag]


def pair_complex(obj) -> complex:
    if isinstance(obj, (int, float)):
        return complex(obj)
    if isinstance(obj, (list, tuple)) and len(obj) == 2:
        return complex(float(obj[0]), float(obj[1]))
    raise ValueError(f"expected [re, im] pair, got {obj!r}")


def dumps_canonical(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), allow_nan=True)


def atomic_write_text(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path)) or "."
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=".part")
    try:
        with os.fdopen(fd, "w", newline="") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise
