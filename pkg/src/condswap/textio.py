"""Plain-text rendering and parsing of amplitudes and matrix files.

Matrix files hold one row per line, entries written ``re+imj`` and separated
by whitespace. Blank lines and ``#`` comments are ignored.
"""
from __future__ import annotations

from pathlib import Path
from typing import Sequence, Union

import numpy as np

from .statevec import Unitary

INT_TOL = 1e-12


def format_real(x: float) -> str:
    r = round(x)
    if abs(x - r) < INT_TOL:
        return str(int(r))
    return format(x, ".12g")


def format_pair(z: complex) -> str:
    """Always ``re+imj`` / ``re-imj``; reparses with :func:`complex`."""
    im = format_real(z.imag)
    if not im.startswith("-"):
        im = "+" + im
    return f"{format_real(z.real)}{im}j"


def format_amplitude(z: complex) -> str:
    """Compact form for tables: drops a vanishing real or imaginary part."""
    re_zero = abs(z.real) < INT_TOL
    im_zero = abs(z.imag) < INT_TOL
    if im_zero:
        return format_real(z.real)
    if re_zero:
        return format_real(z.imag) + "j"
    return f"({format_pair(z)})"


def ket(bits: Sequence[int]) -> str:
    return "|" + "".join(map(str, bits)) + ">"


def format_matrix(m: Union[Unitary, np.ndarray]) -> str:
    m = np.asarray(m)
    return "\n".join(" ".join(format_pair(complex(z)) for z in row) for row in m) + "\n"


def parse_matrix(text: str) -> np.ndarray:
    rows = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            rows.append([complex(tok) for tok in line.split()])
        except ValueError as exc:
            raise ValueError(f"line {lineno}: {exc}") from None
    if not rows:
        raise ValueError("matrix file is empty")
    width = {len(r) for r in rows}
    if len(width) != 1:
        raise ValueError(f"rows have differing lengths {sorted(width)}")
    return np.array(rows, dtype=complex)


def read_unitary(path: Union[str, Path]) -> Unitary:
    """Parse a matrix file; raises :class:`NonUnitaryResult` for a non-unitary matrix."""
    return Unitary(parse_matrix(Path(path).read_text()))
