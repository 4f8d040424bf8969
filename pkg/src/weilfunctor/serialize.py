"""Plain-text algebra files.

::

    dim 2
    unit 1 0
    aug 1 0
    labels 1 x
    sc 0 0 -> 0:1
    sc 0 1 -> 1:1

One ``sc i j -> k:v ...`` line per basis pair with ``i <= j`` lists the
nonzero coefficients of ``b_i * b_j``; pairs without a line multiply to zero
and the ``(j, i)`` products follow by commutativity.  A line with ``i > j``
is rejected, as is a repeated pair.  ``aug`` may be omitted for algebras
that are not local (inputs to the decomposition).
"""

from __future__ import annotations

import numpy as np

from .algebra import FiniteAlgebra, WeilAlgebra
from .errors import ParseError


def _num(v: float) -> str:
    v = float(v)
    if v.is_integer() and abs(v) < 1e15:
        return str(int(v))
    return repr(v)


def dumps_algebra(alg: FiniteAlgebra) -> str:
    lines = [f"dim {alg.dim}", "unit " + " ".join(_num(v) for v in alg.unit)]
    if isinstance(alg, WeilAlgebra):
        lines.append("aug " + " ".join(_num(v) for v in alg.aug))
    if alg.basis_labels is not None:
        lines.append("labels " + " ".join(alg.basis_labels))
    c = alg.structure_constants
    for i in range(alg.dim):
        for j in range(i, alg.dim):
            terms = [f"{k}:{_num(c[i, j, k])}" for k in range(alg.dim) if c[i, j, k] != 0.0]
            if terms:
                lines.append(f"sc {i} {j} -> " + " ".join(terms))
    return "\n".join(lines) + "\n"


def loads_algebra(text: str, check: bool = True, name: str | None = None) -> FiniteAlgebra:
    """Parse an algebra file; returns a :class:`WeilAlgebra` when ``aug`` is present."""
    dim = unit = aug = labels = None
    entries: dict[tuple[int, int], dict[int, float]] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, _, rest = line.partition(" ")
        try:
            if key == "dim":
                dim = int(rest)
                if dim < 1:
                    raise ParseError(f"line {lineno}: dim must be positive (the zero algebra is excluded)")
            elif key == "unit":
                unit = [float(v) for v in rest.split()]
            elif key == "aug":
                aug = [float(v) for v in rest.split()]
            elif key == "labels":
                labels = rest.split()
            elif key == "sc":
                pair, arrow, terms = rest.partition("->")
                if not arrow:
                    raise ParseError(f"line {lineno}: expected 'sc i j -> k:v ...'")
                i, j = (int(v) for v in pair.split())
                if i > j:
                    raise ParseError(
                        f"line {lineno}: sc {i} {j} has i > j; list each pair once with i <= j"
                    )
                if (i, j) in entries:
                    raise ParseError(f"line {lineno}: pair ({i}, {j}) listed twice")
                row = {}
                for t in terms.split():
                    k, _, v = t.partition(":")
                    row[int(k)] = float(v)
                entries[(i, j)] = row
            else:
                raise ParseError(f"line {lineno}: unknown field {key!r}")
        except ValueError as exc:
            if isinstance(exc, ParseError):
                raise
            raise ParseError(f"line {lineno}: {exc}") from None
    if dim is None or unit is None:
        raise ParseError("algebra file needs 'dim' and 'unit'")
    c = np.zeros((dim, dim, dim))
    for (i, j), row in entries.items():
        for k, v in row.items():
            if not (0 <= i < dim and 0 <= j < dim and 0 <= k < dim):
                raise ParseError(f"index out of range in sc {i} {j} -> {k}")
            c[i, j, k] = v
            c[j, i, k] = v
    if aug is None:
        return FiniteAlgebra(c, unit, labels=labels, name=name)
    return WeilAlgebra(c, unit, aug, labels=labels, name=name, check=check)


def load_algebra(path, check: bool = True) -> FiniteAlgebra:
    with open(path) as fh:
        return loads_algebra(fh.read(), check=check, name=str(path))


def save_algebra(alg: FiniteAlgebra, path) -> None:
    with open(path, "w") as fh:
        fh.write(dumps_algebra(alg))
