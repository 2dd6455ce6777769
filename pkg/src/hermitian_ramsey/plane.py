"""PG(2, q^2): canonical points and lines, incidence lists, the Hermitian form.

Points are stored as canonical triples of field codes (leftmost nonzero
coordinate equal to 1).  The stable point id follows the block order
``(0,0,1)``, ``(0,1,z)``, ``(1,y,z)``, each block ordered by code, so the id
of a canonical triple is computable in closed form (:func:`triple_index`).
Lines use the same enumeration on dual coordinates.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, TextIO

import numpy as np

from .field import FieldElement, FieldSpec

LINE_CHUNK = 4096


@dataclass(frozen=True)
class ProjPoint:
    id: int
    coords: tuple[int, int, int]

    def elements(self, spec: FieldSpec) -> tuple[FieldElement, ...]:
        return tuple(spec.element(c) for c in self.coords)


@dataclass(frozen=True)
class ProjLine:
    id: int
    coords: tuple[int, int, int]
    incident_points: tuple[int, ...]


def plane_size(q: int) -> int:
    return q**4 + q**2 + 1


def enumerate_points(spec: FieldSpec) -> np.ndarray:
    """All canonical triples in id order, shape ``(q^4+q^2+1, 3)``."""
    k = spec.q2
    codes = np.arange(k, dtype=np.int32)
    first = np.array([[0, 0, 1]], dtype=np.int32)
    second = np.stack([np.zeros(k, np.int32), np.ones(k, np.int32), codes], axis=1)
    y, z = np.meshgrid(codes, codes, indexing="ij")
    third = np.stack([np.ones(k * k, np.int32), y.ravel(), z.ravel()], axis=1)
    return np.concatenate([first, second, third])


def normalize(spec: FieldSpec, x, y, z):
    """Scale triples (arrays of codes) so the leftmost nonzero entry is 1."""
    x, y, z = (np.asarray(c, dtype=np.int32) for c in (x, y, z))
    lead = np.where(x != 0, x, np.where(y != 0, y, z))
    if np.any(lead == 0):
        raise ValueError("the zero vector is not a projective point")
    s = spec.inv_table[lead]
    m = spec.mul_table
    return m[s, x], m[s, y], m[s, z]


def triple_index(spec: FieldSpec, x, y, z):
    """Id of canonical triples; inputs must already be normalized."""
    k = spec.q2
    x, y, z = (np.asarray(c, dtype=np.int64) for c in (x, y, z))
    return np.where(x == 1, 1 + k + y * k + z, np.where(y == 1, 1 + z, 0))


def _kernel_basis(spec: FieldSpec, lines: np.ndarray):
    """Two vectors spanning ``{v : a*v_1 + b*v_2 + c*v_3 = 0}`` for each line."""
    neg = spec.neg_table
    a, b, c = lines[:, 0], lines[:, 1], lines[:, 2]
    n = len(lines)
    zeros, ones = np.zeros(n, np.int32), np.ones(n, np.int32)
    # shape (1,b,c): x = -b y - c z; shape (0,1,c): y = -c z; shape (0,0,1): z = 0
    u = np.where(
        (a == 1)[:, None],
        np.stack([neg[b], ones, zeros], axis=1),
        np.stack([ones, zeros, zeros], axis=1),
    )
    w = np.where(
        (a == 1)[:, None],
        np.stack([neg[c], zeros, ones], axis=1),
        np.where(
            (b == 1)[:, None],
            np.stack([zeros, neg[c], ones], axis=1),
            np.stack([zeros, ones, zeros], axis=1),
        ),
    )
    return u.astype(np.int32), w.astype(np.int32)


def enumerate_lines(spec: FieldSpec, points: np.ndarray | None = None) -> np.ndarray:
    """Sorted incident point ids for every line, shape ``(q^4+q^2+1, q^2+1)``.

    Line ``i`` has dual coordinates ``points[i]``.  The points of a line are
    generated from a basis ``u, w`` of its kernel as ``w`` and ``u + t*w``.
    """
    if points is None:
        points = enumerate_points(spec)
    k = spec.q2
    add, mul = spec.add_table, spec.mul_table
    t = np.arange(k, dtype=np.int32)
    out = np.empty((len(points), k + 1), dtype=np.int32)
    for start in range(0, len(points), LINE_CHUNK):
        block = points[start : start + LINE_CHUNK]
        u, w = _kernel_basis(spec, block)
        coords = []
        for j in range(3):
            span = add[u[:, j][:, None], mul[t[None, :], w[:, j][:, None]]]
            coords.append(np.concatenate([w[:, j][:, None], span], axis=1))
        nx, ny, nz = normalize(spec, *coords)
        ids = triple_index(spec, nx, ny, nz)
        ids.sort(axis=1)
        out[start : start + len(block)] = ids
    return out


def dot(spec: FieldSpec, a, b) -> int:
    """``a_1 b_1 + a_2 b_2 + a_3 b_3`` on code triples."""
    s = 0
    for x, y in zip(a, b):
        s = spec.add(s, spec.mul(x, y))
    return s


def cross(spec: FieldSpec, a, b) -> tuple[int, int, int]:
    """Cross product; joins two points or meets two lines."""
    def det(i, j):
        return spec.sub(spec.mul(a[i], b[j]), spec.mul(a[j], b[i]))
    return det(1, 2), det(2, 0), det(0, 1)


def sigma(spec: FieldSpec, a, b) -> int:
    """The Hermitian form ``sum a_i * b_i^q`` on code triples."""
    s = 0
    for x, y in zip(a, b):
        s = spec.add(s, spec.mul(x, spec.frobenius(y)))
    return s


def hermitian_form(a: Iterable[FieldElement], b: Iterable[FieldElement], spec: FieldSpec) -> FieldElement:
    ca = [spec.code(e.coeffs) for e in a]
    cb = [spec.code(e.coeffs) for e in b]
    return spec.element(sigma(spec, ca, cb))


class ProjectivePlane:
    """PG(2, q^2) with explicit incidence lists."""

    def __init__(self, spec: FieldSpec):
        self.spec = spec
        self.q = spec.q
        self.points = enumerate_points(spec)
        # dual coordinates run over the same canonical triples
        self.lines = self.points
        self.incidence = enumerate_lines(spec, self.points)

    def __len__(self) -> int:
        return len(self.points)

    @property
    def size(self) -> int:
        return len(self.points)

    def point(self, i: int) -> ProjPoint:
        return ProjPoint(int(i), tuple(int(c) for c in self.points[i]))

    def line(self, i: int) -> ProjLine:
        return ProjLine(
            int(i),
            tuple(int(c) for c in self.lines[i]),
            tuple(int(c) for c in self.incidence[i]),
        )

    def index_of(self, triple) -> int:
        x, y, z = normalize(self.spec, *([c] for c in triple))
        return int(triple_index(self.spec, x, y, z)[0])

    def point_line_counts(self) -> np.ndarray:
        """Number of lines through each point."""
        return np.bincount(self.incidence.ravel(), minlength=self.size)

    def line_through(self, i: int, j: int) -> int:
        if i == j:
            raise ValueError("a line needs two distinct points")
        return self.index_of(cross(self.spec, self.points[i], self.points[j]))

    def meet(self, i: int, j: int) -> int:
        if i == j:
            raise ValueError("two distinct lines are needed")
        return self.index_of(cross(self.spec, self.lines[i], self.lines[j]))

    def dump(self, fh: TextIO) -> None:
        for i, (x, y, z) in enumerate(self.points):
            fh.write(f"point {i} {x} {y} {z}\n")
        for i, (a, b, c) in enumerate(self.lines):
            ids = " ".join(map(str, self.incidence[i]))
            fh.write(f"line {i} {a} {b} {c} : {ids}\n")


def build_plane(spec: FieldSpec) -> ProjectivePlane:
    return ProjectivePlane(spec)
