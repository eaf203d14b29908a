"""
Utility functions for the NER Corpus Toolkit

Small shared helpers: percent formatting, name suggestions, checksums and
file input/output.
"""

import difflib
import hashlib
import sys
from decimal import ROUND_HALF_UP, Decimal
from pathlib import Path
from typing import Iterable, List, Optional, Union


def get_name_suggestions(name: str, candidates: Iterable[str], limit: int = 3) -> List[str]:
    """Close matches for a misspelled name (config keys, labels)"""
    return difflib.get_close_matches(name, sorted(candidates), n=limit, cutoff=0.6)


def format_percent(value: float, places: int = 2) -> str:
    """Half-up rounding for presentation only; 77.525 -> '77.53'"""
    quantum = Decimal(1).scaleb(-places)
    return str(Decimal(repr(float(value))).quantize(quantum, rounding=ROUND_HALF_UP))


def sha256_hex(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def write_output(data: Union[bytes, str], path: Optional[Union[str, Path]] = None):
    """Write to a file (creating parent directories) or to standard output"""
    if isinstance(data, str):
        data = data.encode("utf-8")
    if path is None or str(path) == "-":
        sys.stdout.buffer.write(data)
        sys.stdout.flush()
        return
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(data)


def read_input(path: Union[str, Path]) -> bytes:
    if str(path) == "-":
        return sys.stdin.buffer.read()
    return Path(path).read_bytes()
