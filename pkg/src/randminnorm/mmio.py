"""Dense complex Matrix Market files.

Only the ``array complex general`` variant is written: a header line, the
dimensions, then the entries in column-major order as ``real imag`` pairs
printed with 17 significant digits, which round-trips doubles exactly.
The reader also accepts ``array real general`` input. Vectors are stored as
``k x 1`` matrices.
"""

import numpy as np

from .exceptions import MatrixMarketError

HEADER = "%%MatrixMarket matrix array complex general"


def _fmt(v):
    return f"{v:.17g}"


def write_matrix(path, M, comment=None):
    """Write a 1-D or 2-D array as a complex dense Matrix Market file."""
    M = np.asarray(M, dtype=np.complex128)
    if M.ndim == 1:
        M = M[:, None]
    if M.ndim != 2:
        raise ValueError(f"expected a vector or matrix, got shape {M.shape}")
    lines = [HEADER]
    if comment:
        lines.extend(f"% {c}" for c in comment.splitlines())
    lines.append(f"{M.shape[0]} {M.shape[1]}")
    for z in M.ravel(order="F"):
        lines.append(f"{_fmt(z.real)} {_fmt(z.imag)}")
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def _parse_float(path, lineno, col, token):
    try:
        v = float(token)
    except ValueError:
        raise MatrixMarketError(path, lineno, col, f"not a number: {token!r}") from None
    if not np.isfinite(v):
        raise MatrixMarketError(path, lineno, col, f"non-finite value {token!r}")
    return v


def _tokens(line):
    # (1-based column, token) pairs
    out = []
    i = 0
    while i < len(line):
        if line[i].isspace():
            i += 1
            continue
        j = i
        while j < len(line) and not line[j].isspace():
            j += 1
        out.append((i + 1, line[i:j]))
        i = j
    return out


def _locate_bad_entry(path, data_lines, width):
    for lineno, ln in data_lines:
        toks = _tokens(ln)
        if len(toks) != width:
            raise MatrixMarketError(path, lineno, 1,
                                    f"expected {width} value(s) per line, got {len(toks)}")
        for col, tok in toks:
            _parse_float(path, lineno, col, tok)
    raise AssertionError("no malformed entry found")


def read_matrix(path):
    """Read a dense Matrix Market file into a complex ``(rows, cols)`` array.

    Raises
    ------
    MatrixMarketError
        With the 1-based line and column of the first problem found.
    """
    with open(path, encoding="ascii", errors="replace") as fh:
        lines = fh.read().splitlines()
    if not lines:
        raise MatrixMarketError(path, 1, 1, "empty file")
    head = lines[0].split()
    if len(head) != 5 or head[0] != "%%MatrixMarket" or head[1].lower() != "matrix":
        raise MatrixMarketError(path, 1, 1, "missing '%%MatrixMarket matrix' header")
    fmt, field, symmetry = (h.lower() for h in head[2:])
    if fmt != "array":
        raise MatrixMarketError(path, 1, lines[0].find(head[2]) + 1,
                                f"only dense 'array' format is supported, got {head[2]!r}")
    if field not in ("complex", "real", "double"):
        raise MatrixMarketError(path, 1, lines[0].find(head[3]) + 1,
                                f"unsupported field {head[3]!r}")
    if symmetry != "general":
        raise MatrixMarketError(path, 1, lines[0].find(head[4]) + 1,
                                f"unsupported symmetry {head[4]!r}")
    width = 2 if field == "complex" else 1

    body = [(k + 1, ln) for k, ln in enumerate(lines[1:], start=1)
            if ln.strip() and not ln.lstrip().startswith("%")]
    if not body:
        raise MatrixMarketError(path, len(lines), 1, "missing size line")
    lineno, size_line = body[0]
    toks = _tokens(size_line)
    if len(toks) != 2:
        raise MatrixMarketError(path, lineno, 1, "size line must hold two integers")
    dims = []
    for col, tok in toks:
        try:
            d = int(tok)
        except ValueError:
            raise MatrixMarketError(path, lineno, col, f"not an integer: {tok!r}") from None
        if d < 1:
            raise MatrixMarketError(path, lineno, col, f"dimension must be positive, got {d}")
        dims.append(d)
    rows, cols = dims

    data_lines = body[1:]
    split = [ln.split() for _, ln in data_lines]
    arr = None
    if all(len(t) == width for t in split):
        try:
            arr = np.array([tok for t in split for tok in t], dtype=np.float64).reshape(-1, width)
        except ValueError:
            pass
    if arr is None or not np.all(np.isfinite(arr)):
        _locate_bad_entry(path, data_lines, width)
    expected = rows * cols
    if arr.shape[0] != expected:
        where = data_lines[expected][0] if arr.shape[0] > expected else len(lines)
        raise MatrixMarketError(path, where, 1,
                                f"expected {expected} entries for {rows}x{cols}, got {arr.shape[0]}")
    data = arr[:, 0] + 1j * arr[:, 1] if width == 2 else arr[:, 0].astype(np.complex128)
    return data.reshape((rows, cols), order="F")


def read_vector(path):
    """Read a ``k x 1`` (or ``1 x k``) file as a length-``k`` vector."""
    M = read_matrix(path)
    if 1 not in M.shape:
        raise MatrixMarketError(path, 1, 1, f"expected a vector, got a {M.shape[0]}x{M.shape[1]} matrix")
    return M.ravel()
