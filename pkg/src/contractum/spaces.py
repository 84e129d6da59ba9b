"""Finite generalized metric spaces: representation, axiom validation,
and taxonomy.

A finite space is a labeled point set with an explicit symmetric distance
table. The central questions answered here are:

* does the table satisfy the relaxed quadrilateral inequality
  d(x, y) <= s * [d(x, u) + d(u, v) + d(v, y)] for a given coefficient
  s >= 1, quantified over every quadruple of pairwise-distinct points;
* what is the smallest admissible coefficient (by exhaustive enumeration);
* is the table an ordinary metric (triangle inequality) or a rectangular
  space (quadrilateral inequality with s = 1), and if not, which concrete
  tuple breaks it.

Distances are stored as floats and compared with an absolute tolerance
(default 1e-12); exact rational input such as ``"1/2"`` is accepted in
labels and table entries and converted once.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from .errors import ClosureError, MalformedSpaceError

DEFAULT_TOL = 1e-12

# Exhaustive quadruple enumeration is the default up to this many points
# (worst case ~1.5e9 ordered quadruples, handled vectorized); beyond it a
# caller must opt into sampling explicitly.
MAX_EXHAUSTIVE_POINTS = 200


def parse_number(value) -> float:
    """Parse a table entry: float, int, or an exact-rational/decimal string."""
    if isinstance(value, (int, float)):
        return float(value)
    if isinstance(value, str):
        try:
            return float(Fraction(value))
        except (ValueError, ZeroDivisionError):
            raise MalformedSpaceError(f"cannot parse distance entry {value!r}")
    raise MalformedSpaceError(f"cannot parse distance entry {value!r}")


def parse_label(label: str) -> float | None:
    """Numeric value of a point label, or None if the label is not numeric."""
    try:
        return float(Fraction(label))
    except (ValueError, ZeroDivisionError):
        return None


def _canonical_label(point) -> str:
    if isinstance(point, str):
        return point
    if isinstance(point, Fraction):
        return f"{point.numerator}/{point.denominator}" if point.denominator != 1 else str(point.numerator)
    if isinstance(point, int):
        return str(point)
    if isinstance(point, float):
        return repr(point)
    return str(point)


@dataclass(frozen=True, eq=False)
class FiniteSpace:
    """A labeled point set with a symmetric nonnegative distance table.

    Structural requirements (square shape, symmetry, nonnegative entries,
    zero diagonal) are enforced at construction and raise
    MalformedSpaceError naming the offending pair. The remaining axiom,
    "zero distance only between identical points", is *checked* by
    validate_space / classify_space and reported in-band rather than
    rejected here.
    """

    points: tuple[str, ...]
    dist: np.ndarray

    def __post_init__(self):
        points = tuple(_canonical_label(p) for p in self.points)
        object.__setattr__(self, "points", points)
        D = np.asarray(self.dist, dtype=float)
        n = len(points)
        if D.shape != (n, n):
            raise MalformedSpaceError(
                f"distance table shape {D.shape} does not match {n} points")
        if len(set(points)) != n:
            raise MalformedSpaceError("point labels must be unique")
        for i in range(n):
            if abs(D[i, i]) > DEFAULT_TOL:
                raise MalformedSpaceError(
                    f"nonzero self-distance {D[i, i]!r} at point {points[i]!r}",
                    pair=(points[i], points[i]))
        D[np.arange(n), np.arange(n)] = 0.0
        bad = np.argwhere(D != D.T)
        if bad.size:
            i, j = map(int, bad[0])
            raise MalformedSpaceError(
                f"asymmetric entries at ({points[i]!r}, {points[j]!r}): "
                f"{float(D[i, j])!r} vs {float(D[j, i])!r}",
                pair=(points[i], points[j]))
        neg = np.argwhere(D < 0)
        if neg.size:
            i, j = map(int, neg[0])
            raise MalformedSpaceError(
                f"negative distance {float(D[i, j])!r} at "
                f"({points[i]!r}, {points[j]!r})", pair=(points[i], points[j]))
        if np.isnan(D).any():
            i, j = map(int, np.argwhere(np.isnan(D))[0])
            raise MalformedSpaceError(
                f"NaN distance at ({points[i]!r}, {points[j]!r})",
                pair=(points[i], points[j]))
        D.flags.writeable = False
        object.__setattr__(self, "dist", D)
        object.__setattr__(self, "_index", {p: i for i, p in enumerate(points)})

    @classmethod
    def from_table(cls, points: Sequence, table: Sequence[Sequence]) -> "FiniteSpace":
        D = [[parse_number(v) for v in row] for row in table]
        return cls(tuple(points), np.array(D, dtype=float))

    @classmethod
    def from_metric(cls, values: Sequence[float],
                    metric: Callable[[float, float], float],
                    labels: Sequence[str] | None = None) -> "FiniteSpace":
        n = len(values)
        D = np.zeros((n, n))
        for i in range(n):
            for j in range(i + 1, n):
                D[i, j] = D[j, i] = metric(values[i], values[j])
        pts = tuple(labels) if labels is not None else tuple(_canonical_label(v) for v in values)
        return cls(pts, D)

    # -- lookups ----------------------------------------------------------

    def index(self, label: str) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise ClosureError(label) from None

    def contains(self, label) -> bool:
        return label in self._index

    def distance(self, a: str, b: str) -> float:
        return float(self.dist[self.index(a), self.index(b)])

    @property
    def values(self) -> tuple[float | None, ...]:
        return tuple(parse_label(p) for p in self.points)

    def permuted(self, order: Sequence[int]) -> "FiniteSpace":
        """Same space with points reordered; useful for invariance checks."""
        order = list(order)
        pts = tuple(self.points[i] for i in order)
        D = self.dist[np.ix_(order, order)].copy()
        return FiniteSpace(pts, D)

    # -- serialization ----------------------------------------------------

    def to_json_dict(self) -> dict:
        return {"points": list(self.points),
                "distances": [list(map(float, row)) for row in self.dist]}

    def save_json(self, path) -> None:
        Path(path).write_text(json.dumps(self.to_json_dict(), indent=2))


def _mirror_fill(points: Sequence[str], rows: list[list]) -> np.ndarray:
    """Assemble a full table from square or half (triangular / None-padded) input."""
    n = len(points)
    D = np.full((n, n), np.nan)
    for i, row in enumerate(rows):
        if i >= n:
            raise MalformedSpaceError(f"too many table rows ({len(rows)}) for {n} points")
        for j, cell in enumerate(row):
            if j >= n:
                raise MalformedSpaceError(f"row {i} has too many entries")
            if cell is None or (isinstance(cell, str) and not cell.strip()):
                continue
            D[i, j] = parse_number(cell)
    for i in range(n):
        for j in range(n):
            if np.isnan(D[i, j]) and not np.isnan(D[j, i]):
                D[i, j] = D[j, i]
    missing = np.argwhere(np.isnan(D))
    if missing.size:
        i, j = map(int, missing[0])
        raise MalformedSpaceError(
            f"missing distance for pair ({points[i]!r}, {points[j]!r})",
            pair=(points[i], points[j]))
    return D


def space_from_json(source) -> FiniteSpace:
    """Load { "points": [...], "distances": [[...]] }; half tables are mirrored."""
    obj = json.loads(Path(source).read_text()) if not isinstance(source, dict) else source
    if "points" not in obj or "distances" not in obj:
        raise MalformedSpaceError('space JSON needs "points" and "distances"')
    points = [(_canonical_label(p)) for p in obj["points"]]
    return FiniteSpace(tuple(points), _mirror_fill(points, [list(r) for r in obj["distances"]]))


def space_from_csv(path) -> FiniteSpace:
    """Load a CSV matrix with a header row of labels.

    Rows may carry an optional leading row-label cell; blank cells are
    mirrored from the transposed position.
    """
    with open(path, newline="") as fh:
        rows = [row for row in csv.reader(fh) if any(c.strip() for c in row)]
    if not rows:
        raise MalformedSpaceError(f"{path}: empty CSV")
    header = [c.strip() for c in rows[0]]
    body = [[c.strip() for c in row] for row in rows[1:]]
    # corner-cell layout: header[0] is filler and rows carry their label
    if len(header) > 1 and len(body) == len(header) - 1 and \
            all(row and row[0] == p for row, p in zip(body, header[1:])):
        points = header[1:]
        body = [row[1:] for row in body]
    else:
        points = [p for p in header if p]
    if len(body) != len(points):
        raise MalformedSpaceError(
            f"{path}: expected {len(points)} data rows, found {len(body)}")
    return FiniteSpace(tuple(points), _mirror_fill(points, body))


def load_space(path) -> FiniteSpace:
    p = Path(path)
    if p.suffix.lower() == ".csv":
        return space_from_csv(p)
    return space_from_json(p)


@dataclass(frozen=True)
class SampledSpace:
    """A finite sample of a continuous space whose metric stays evaluable
    off-sample. Points are numeric values; the metric is a callable."""

    points: tuple[float, ...]
    metric: Callable[[float, float], float]
    name: str = ""

    def distance(self, a: float, b: float) -> float:
        return float(self.metric(a, b))

    def contains(self, point) -> bool:  # continuum: membership is not checked
        return True


# ---------------------------------------------------------------------------
# witnesses and reports


@dataclass(frozen=True)
class QuadrilateralWitness:
    """A quadruple (x, u, v, y) with d(x, y) on the left and the three-hop
    sum d(x,u) + d(u,v) + d(v,y) on the right."""

    x: str
    u: str
    v: str
    y: str
    lhs: float
    rhs: float

    @property
    def ratio(self) -> float:
        return self.lhs / self.rhs if self.rhs > 0 else float("inf")

    def to_dict(self) -> dict:
        return {"x": self.x, "u": self.u, "v": self.v, "y": self.y,
                "lhs": self.lhs, "rhs": self.rhs, "ratio": self.ratio}


@dataclass(frozen=True)
class TriangleWitness:
    """A triple (x, z, y) with d(x, y) on the left and d(x,z) + d(z,y) on
    the right."""

    x: str
    z: str
    y: str
    lhs: float
    rhs: float

    def to_dict(self) -> dict:
        return {"x": self.x, "z": self.z, "y": self.y,
                "lhs": self.lhs, "rhs": self.rhs}


@dataclass(frozen=True)
class CoefficientReport:
    """Outcome of checking the relaxed quadrilateral inequality at a
    requested coefficient.

    minimal_s is the smallest admissible coefficient: the maximum ratio
    d(x,y) / [d(x,u)+d(u,v)+d(v,y)] over admissible quadruples, clamped
    below at 1 because the coefficient is defined to be >= 1. The raw
    maximum is kept in max_ratio. witness is filled only on violation;
    extremal always names a ratio-maximizing quadruple (lexicographically
    smallest among maximizers, by point index)."""

    requested_s: float
    holds: bool
    minimal_s: float
    witness: QuadrilateralWitness | None
    vacuous: bool = False
    exhaustive: bool = True
    max_ratio: float = float("nan")
    extremal: QuadrilateralWitness | None = None
    axiom1_failures: tuple[tuple[str, str], ...] = ()

    def to_dict(self) -> dict:
        return {
            "requested_s": self.requested_s,
            "holds": self.holds,
            "minimal_s": self.minimal_s,
            "max_ratio": self.max_ratio,
            "vacuous": self.vacuous,
            "exhaustive": self.exhaustive,
            "witness": self.witness.to_dict() if self.witness else None,
            "extremal": self.extremal.to_dict() if self.extremal else None,
            "axiom1_failures": [list(p) for p in self.axiom1_failures],
        }


@dataclass(frozen=True)
class TaxonomyFlags:
    """Classification of a finite table: ordinary metric, rectangular
    (s = 1 quadrilateral), and the minimal relaxation coefficients for
    both shapes. Witness lists are sorted lexicographically by point
    index and truncated."""

    is_metric: bool
    is_rectangular: bool
    b_metric_s: float | None
    b_rectangular_s: float | None
    triangle_witnesses: tuple[TriangleWitness, ...] = ()
    quadrilateral_witnesses: tuple[QuadrilateralWitness, ...] = ()

    @property
    def witnesses(self) -> tuple:
        return self.triangle_witnesses + self.quadrilateral_witnesses

    def to_dict(self) -> dict:
        return {
            "is_metric": self.is_metric,
            "is_rectangular": self.is_rectangular,
            "b_metric_s": self.b_metric_s,
            "b_rectangular_s": self.b_rectangular_s,
            "triangle_witnesses": [w.to_dict() for w in self.triangle_witnesses],
            "quadrilateral_witnesses": [w.to_dict() for w in self.quadrilateral_witnesses],
        }


# ---------------------------------------------------------------------------
# quadruple enumeration (vectorized, exact)


def _axiom1_failures(space: FiniteSpace, tol: float) -> tuple[tuple[str, str], ...]:
    D = space.dist
    n = len(space.points)
    out = []
    for i in range(n):
        for j in range(i + 1, n):
            if D[i, j] <= tol:
                out.append((space.points[i], space.points[j]))
    return tuple(out)


def _pair_denominator_minima(D: np.ndarray) -> np.ndarray:
    """For every ordered pair (i, j): the minimum of
    D[i,u] + D[u,v] + D[v,j] over u != v, both outside {i, j}.

    O(n^3 log n) time, O(n^2) memory. The float associativity matches the
    scalar rescan in _argmin_quadruples, so minima can be recovered
    bit-exactly.
    """
    n = D.shape[0]
    idx = np.arange(n)
    denom = np.full((n, n), np.inf)
    for i in range(n):
        B = D[i][:, None] + D                 # B[u, v] = D[i,u] + D[u,v]
        B[idx, idx] = np.inf                  # u == v
        B[i, :] = np.inf                      # u == i
        B[:, i] = np.inf                      # v == i
        order = np.argsort(B, axis=0)
        u1 = order[0]
        m1 = B[u1, idx]
        m2 = B[order[1], idx]
        # min over u excluding u == j: runner-up where the argmin is j itself
        best_u = np.where(u1[:, None] == idx[None, :], m2[:, None], m1[:, None])
        E = best_u + D                        # E[v, j] = min_u(...) + D[v, j]
        E[idx, idx] = np.inf                  # v == j
        row = E.min(axis=0)
        row[i] = np.inf
        denom[i] = row
    return denom


def _argmin_quadruples(D: np.ndarray, i: int, j: int) -> list[tuple[int, int, int, int]]:
    """All (i, u, v, j) quadruples achieving the minimal denominator for
    the ordered pair (i, j)."""
    n = D.shape[0]
    best = np.inf
    quads: list[tuple[int, int, int, int]] = []
    for u in range(n):
        if u == i or u == j:
            continue
        a = D[i, u]
        for v in range(n):
            if v == i or v == j or v == u:
                continue
            total = a + D[u, v] + D[v, j]
            if total < best:
                best = total
                quads = [(i, u, v, j)]
            elif total == best:
                quads.append((i, u, v, j))
    return quads


def _extremal_quadruple(space: FiniteSpace, D: np.ndarray, ratios: np.ndarray,
                        target: float) -> QuadrilateralWitness | None:
    """Lexicographically smallest quadruple (by point index) among those
    achieving ratio == target."""
    pairs = np.argwhere(ratios == target)
    if pairs.size == 0:
        return None
    i_min = int(pairs[:, 0].min())
    candidates: list[tuple[int, int, int, int]] = []
    for i, j in pairs[pairs[:, 0] == i_min]:
        candidates.extend(_argmin_quadruples(D, int(i), int(j)))
    qi, qu, qv, qj = min(candidates)
    pts = space.points
    lhs = float(D[qi, qj])
    rhs = float(D[qi, qu] + D[qu, qv] + D[qv, qj])
    return QuadrilateralWitness(pts[qi], pts[qu], pts[qv], pts[qj], lhs, rhs)


def _ratio_matrix(D: np.ndarray) -> np.ndarray:
    denom = _pair_denominator_minima(D)
    with np.errstate(divide="ignore", invalid="ignore"):
        R = np.where(np.isfinite(denom), D / denom, 0.0)
    return R


def validate_space(space: FiniteSpace, s: float, *, tol: float = DEFAULT_TOL,
                   sample: int | None = None, seed: int = 0) -> CoefficientReport:
    """Check all three axioms at coefficient ``s``.

    holds is true iff no distinct pair has zero distance and every
    admissible quadruple satisfies d(x,y) <= s * sum + tol. minimal_s is
    filled by exhaustive enumeration (or by sampling when ``sample`` is
    given, mandatory above MAX_EXHAUSTIVE_POINTS). Spaces with fewer than
    4 points have no admissible quadruple; they report minimal_s = 1 with
    the vacuous flag set.
    """
    if s < 1:
        raise ValueError(f"coefficient s must be >= 1, got {s}")
    n = len(space.points)
    if n < 1:
        raise ValueError("space must have at least one point")
    axiom1 = _axiom1_failures(space, tol)

    if n < 4:
        return CoefficientReport(requested_s=s, holds=not axiom1, minimal_s=1.0,
                                 witness=None, vacuous=True, max_ratio=1.0,
                                 axiom1_failures=axiom1)
    if axiom1:
        # zero distances make denominators degenerate; no coefficient helps
        return CoefficientReport(requested_s=s, holds=False, minimal_s=float("inf"),
                                 witness=None, max_ratio=float("inf"),
                                 axiom1_failures=axiom1)

    if sample is None and n > MAX_EXHAUSTIVE_POINTS:
        raise ValueError(
            f"{n} points exceeds the exhaustive limit ({MAX_EXHAUSTIVE_POINTS}); "
            f"pass sample=<count> to check a random subset of quadruples")

    D = space.dist
    if sample is None:
        ratios = _ratio_matrix(D)
        max_ratio = float(ratios.max())
        extremal = _extremal_quadruple(space, D, ratios, max_ratio)
        exhaustive = True
    else:
        if sample < 1:
            raise ValueError("sample count must be >= 1")
        rng = np.random.default_rng(seed)
        max_ratio = 0.0
        extremal = None
        pts = space.points
        for _ in range(sample):
            i, u, v, j = (int(k) for k in rng.choice(n, size=4, replace=False))
            denom = D[i, u] + D[u, v] + D[v, j]
            ratio = D[i, j] / denom
            if ratio > max_ratio:
                max_ratio = ratio
                extremal = QuadrilateralWitness(pts[i], pts[u], pts[v], pts[j],
                                                float(D[i, j]), float(denom))
        exhaustive = False

    holds = max_ratio <= s + tol
    return CoefficientReport(
        requested_s=s, holds=holds, minimal_s=max(1.0, max_ratio),
        witness=None if holds else extremal,
        exhaustive=exhaustive, max_ratio=max_ratio, extremal=extremal,
        axiom1_failures=axiom1)


def minimal_coefficient(space: FiniteSpace, *, tol: float = DEFAULT_TOL) -> float:
    """Smallest admissible coefficient, by exhaustive enumeration.

    Spaces with fewer than 4 points report 1 (the inequality is vacuous).
    A zero distance between distinct points makes denominators degenerate
    and is rejected as malformed input.
    """
    n = len(space.points)
    if n < 4:
        return 1.0
    axiom1 = _axiom1_failures(space, tol)
    if axiom1:
        raise MalformedSpaceError(
            f"zero distance between distinct points {axiom1[0][0]!r} and "
            f"{axiom1[0][1]!r} makes quadruple denominators vanish", pair=axiom1[0])
    if n > MAX_EXHAUSTIVE_POINTS:
        raise ValueError(
            f"{n} points exceeds the exhaustive limit ({MAX_EXHAUSTIVE_POINTS})")
    return max(1.0, float(_ratio_matrix(space.dist).max()))


# ---------------------------------------------------------------------------
# taxonomy


def _triangle_violations(D: np.ndarray, tol: float, limit: int):
    """Ordered triples (x, z, y) with d(x,y) > d(x,z) + d(z,y) + tol, in
    lexicographic index order, truncated at ``limit``. Also returns the
    maximum ratio d(x,y) / (d(x,z) + d(z,y))."""
    n = D.shape[0]
    idx = np.arange(n)
    found: list[tuple[int, int, int]] = []
    max_ratio = 0.0
    for x in range(n):
        S = D[x][:, None] + D                 # S[z, y] = d(x,z) + d(z,y)
        mask = np.ones((n, n), dtype=bool)
        mask[x, :] = False                    # z == x
        mask[:, x] = False                    # y == x
        mask[idx, idx] = False                # z == y
        lhs = np.broadcast_to(D[x][None, :], (n, n))
        if (mask & (S == 0) & (lhs > 0)).any():
            max_ratio = float("inf")
        pos = mask & (S > 0)
        if pos.any():
            max_ratio = max(max_ratio, float((lhs[pos] / S[pos]).max()))
        V = mask & (lhs > S + tol)
        if len(found) < limit and V.any():
            for z, y in np.argwhere(V):
                found.append((x, int(z), int(y)))
                if len(found) >= limit:
                    break
    return found, max_ratio


def _quadrilateral_violations(D: np.ndarray, s: float, tol: float, limit: int):
    """Ordered quadruples (x, u, v, y) violating the s-relaxed inequality,
    in lexicographic index order, truncated at ``limit``."""
    n = D.shape[0]
    idx = np.arange(n)
    found: list[tuple[int, int, int, int]] = []
    for x in range(n):
        B = D[x][:, None] + D                       # B[u, v]
        T3 = B[:, :, None] + D[None, :, :]          # T3[u, v, y]
        V = D[x][None, None, :] > s * T3 + tol
        V[idx, idx, :] = False                      # u == v
        V[x, :, :] = False                          # u == x
        V[:, x, :] = False                          # v == x
        V[:, :, x] = False                          # y == x
        V[idx, :, idx] = False                      # y == u
        V[:, idx, idx] = False                      # y == v
        if V.any():
            for u, v, y in np.argwhere(V):
                found.append((x, int(u), int(v), int(y)))
                if len(found) >= limit:
                    return found
    return found


def classify_space(space: FiniteSpace, *, tol: float = DEFAULT_TOL,
                   max_witnesses: int = 8) -> TaxonomyFlags:
    """Test the triangle inequality over all triples and the quadrilateral
    inequality (s = 1) over all quadruples; report minimal relaxation
    coefficients for both and the violating tuples with both sides."""
    D = space.dist
    n = len(space.points)
    pts = space.points

    tri, tri_ratio = _triangle_violations(D, tol, max_witnesses)
    tri_witnesses = tuple(
        TriangleWitness(pts[x], pts[z], pts[y],
                        float(D[x, y]), float(D[x, z] + D[z, y]))
        for x, z, y in tri)

    if n >= 4:
        if n > MAX_EXHAUSTIVE_POINTS:
            raise ValueError(
                f"{n} points exceeds the exhaustive limit ({MAX_EXHAUSTIVE_POINTS})")
        quad = _quadrilateral_violations(D, 1.0, tol, max_witnesses)
        quad_witnesses = tuple(
            QuadrilateralWitness(pts[x], pts[u], pts[v], pts[y],
                                 float(D[x, y]),
                                 float(D[x, u] + D[u, v] + D[v, y]))
            for x, u, v, y in quad)
        b_rect = max(1.0, float(_ratio_matrix(D).max()))
        is_rect = not quad
    else:
        quad_witnesses = ()
        b_rect = None
        is_rect = True

    return TaxonomyFlags(
        is_metric=not tri_witnesses,
        is_rectangular=is_rect,
        b_metric_s=(max(1.0, tri_ratio) if n >= 3 else None),
        b_rectangular_s=b_rect,
        triangle_witnesses=tri_witnesses,
        quadrilateral_witnesses=quad_witnesses)
