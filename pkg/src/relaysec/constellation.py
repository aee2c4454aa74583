"""Constellation geometry, bit labelings, and balanced-label (E-map) construction.

Supported kinds: qpsk, psk8, qam16, qam32, qam64, qam128, qam256.
All constellations are normalized to unit average power. 8-PSK uses the
pi/8-offset ring so that every real coordinate is shared by exactly two
points; 32/128-QAM use the standard cross shapes, whose outermost real
coordinates carry 4 resp. 8 points and all others |S_I| points.

An E-map is a labeling such that, for every real coordinate, the matrix of
labels of the points sharing that coordinate has exactly half ones in each
bit column. This makes the real coordinate alone carry zero information
about every bit.
"""

from dataclasses import dataclass

import numpy as np

KINDS = ("qpsk", "psk8", "qam16", "qam32", "qam64", "qam128", "qam256")
MAPPINGS = ("emap", "gray")

_COORD_TOL = 1e-9  # dedup tolerance; generation is closed-form so this is slack


@dataclass(frozen=True)
class Constellation:
    """An M-ary 2D signal set with one q-bit label per point."""

    kind: str
    mapping: str
    points: np.ndarray  # (M,) complex, unit average power
    labels: np.ndarray  # (M, q) uint8

    @property
    def m(self) -> int:
        return self.points.shape[0]

    @property
    def q(self) -> int:
        return self.labels.shape[1]


@dataclass(frozen=True)
class RealProjection:
    """Per-real-coordinate view of a constellation.

    b_mats[c] stacks the labels of the points whose real part equals s_r[c]
    (rows ordered by increasing imaginary part), row_to_imag[c] holds the
    matching imaginary coordinates and row_points[c] the originating point
    indices. d[c] is the row count of b_mats[c].
    """

    s_r: np.ndarray          # (C,) sorted distinct real coordinates
    s_i: np.ndarray          # (K,) sorted distinct imaginary coordinates
    b_mats: tuple            # C matrices, each (d[c], q) uint8
    row_to_imag: tuple       # C vectors, each (d[c],) float
    row_points: tuple        # C vectors, each (d[c],) int point indices
    d: np.ndarray            # (C,) int row counts
    point_coord: np.ndarray  # (M,) real-coordinate index of each point


@dataclass(frozen=True)
class BitSubsets:
    """Bit-conditional subsets used by the bitwise demodulators.

    real_counts[j, k, c] is the number of points at real coordinate c whose
    label has bit j equal to k (the multiplicity weight of that coordinate
    in the 1D demodulator sums). point_masks[j, k] flags the constellation
    points whose label has bit j equal to k.
    """

    real_counts: np.ndarray  # (q, 2, C) int
    point_masks: np.ndarray  # (q, 2, M) bool


class EmapSearchError(Exception):
    """No balanced labeling exists for the requested point set."""


# ---------------------------------------------------------------------------
# geometry
# ---------------------------------------------------------------------------

def _psk_points(m: int) -> np.ndarray:
    # pi/M offset keeps real coordinates paired (two points per coordinate)
    angles = np.pi / m + 2.0 * np.pi * np.arange(m) / m
    return np.exp(1j * angles)

def _pam_gray(bits: np.ndarray) -> int:
    """Reflected-Gray PAM point for a bit vector, in {±1, ±3, ...}."""
    if len(bits) > 1:
        return (1 - 2 * int(bits[0])) * (2 ** len(bits[1:]) - _pam_gray(bits[1:]))
    return 1 - 2 * int(bits[0])

def _square_qam_gray(q: int):
    """Square QAM points with per-axis reflected-Gray labels (even bits I, odd bits Q)."""
    m = 2 ** q
    points = np.empty(m, dtype=complex)
    labels = np.empty((m, q), dtype=np.uint8)
    for n in range(m):
        b = np.array([(n >> (q - 1 - j)) & 1 for j in range(q)], dtype=np.uint8)
        points[n] = _pam_gray(b[0::2]) + 1j * _pam_gray(b[1::2])
        labels[n] = b
    return points, labels

def _gray_seq(nbits: int) -> np.ndarray:
    i = np.arange(1 << nbits)
    return i ^ (i >> 1)

def _cross_qam_gray(q: int):
    """Cross QAM (odd q) with the usual wing-folded quasi-Gray labels."""
    n_i = (q + 1) // 2
    n_q = q // 2
    width, height = 1 << n_i, 1 << n_q
    shift = 1 << (n_i - 3)  # wing width folded onto the caps
    inv_i = np.zeros(width, dtype=int)
    inv_i[_gray_seq(n_i)] = np.arange(width)
    inv_q = np.zeros(height, dtype=int)
    inv_q[_gray_seq(n_q)] = np.arange(height)

    m = 1 << q
    points = np.empty(m, dtype=complex)
    labels = np.empty((m, q), dtype=np.uint8)
    center = (width - height) // 2
    for n in range(m):
        gi = inv_i[n >> n_q]
        gq = inv_q[n & (height - 1)]
        if gi < shift:                      # left wing -> top cap
            gi, gq = gq + center, height + (shift - 1 - gi)
        elif gi >= width - shift:           # right wing -> bottom cap
            gi, gq = gq + center, -1 - (gi - (width - shift))
        points[n] = (2 * gi - width + 1) + 1j * (2 * gq - height + 1)
        labels[n] = [(n >> (q - 1 - j)) & 1 for j in range(q)]
    return points, labels

def _geometry_and_gray(kind: str):
    if kind == "qpsk":
        return _square_qam_gray(2)
    if kind == "psk8":
        points = _psk_points(8)
        g = _gray_seq(3)
        labels = np.array([[(g[k] >> (2 - j)) & 1 for j in range(3)]
                           for k in range(8)], dtype=np.uint8)
        return points, labels
    q = {"qam16": 4, "qam32": 5, "qam64": 6, "qam128": 7, "qam256": 8}[kind]
    if q % 2 == 0:
        return _square_qam_gray(q)
    return _cross_qam_gray(q)

def _canonical_order(points: np.ndarray) -> np.ndarray:
    # sort by (real, imag); rounding guards against representation jitter
    return np.lexsort((np.round(points.imag, 12), np.round(points.real, 12)))

def _normalize(points: np.ndarray) -> np.ndarray:
    return points / np.sqrt(np.mean(np.abs(points) ** 2))


# ---------------------------------------------------------------------------
# projections and subsets
# ---------------------------------------------------------------------------

def _dedup_coords(values: np.ndarray, tol: float = _COORD_TOL):
    """Sorted distinct coordinates and, per input value, its coordinate index."""
    order = np.argsort(values)
    coords = []
    idx = np.empty(len(values), dtype=int)
    for pos in order:
        if coords and values[pos] - coords[-1][-1] <= tol:
            coords[-1].append(values[pos])
        else:
            coords.append([values[pos]])
        idx[pos] = len(coords) - 1
    return np.array([np.mean(g) for g in coords]), idx


def project(c: Constellation) -> RealProjection:
    """Real/imaginary alphabets and the per-real-coordinate label matrices."""
    s_r, r_idx = _dedup_coords(c.points.real)
    s_i, _ = _dedup_coords(c.points.imag)
    b_mats, row_imag, row_pts = [], [], []
    for ci in range(len(s_r)):
        members = np.flatnonzero(r_idx == ci)
        members = members[np.argsort(c.points.imag[members])]
        b_mats.append(c.labels[members].copy())
        row_imag.append(c.points.imag[members].copy())
        row_pts.append(members)
    d = np.array([len(p) for p in row_pts])
    return RealProjection(s_r=s_r, s_i=s_i, b_mats=tuple(b_mats),
                          row_to_imag=tuple(row_imag), row_points=tuple(row_pts),
                          d=d, point_coord=r_idx)


def bit_subsets(c: Constellation, proj: RealProjection | None = None) -> BitSubsets:
    """Multiplicity weights over S_R and point masks for each (bit, value)."""
    if proj is None:
        proj = project(c)
    q, m, n_c = c.q, c.m, len(proj.s_r)
    counts = np.zeros((q, 2, n_c), dtype=int)
    for ci, b in enumerate(proj.b_mats):
        ones = b.sum(axis=0)
        counts[:, 1, ci] = ones
        counts[:, 0, ci] = b.shape[0] - ones
    masks = np.zeros((q, 2, m), dtype=bool)
    for j in range(q):
        masks[j, 1] = c.labels[:, j] == 1
        masks[j, 0] = ~masks[j, 1]
    if (counts.sum(axis=2) == 0).any():
        raise ValueError("a bit value is used by no constellation point")
    return BitSubsets(real_counts=counts, point_masks=masks)


# ---------------------------------------------------------------------------
# validation and search
# ---------------------------------------------------------------------------

def validate_emap(c: Constellation):
    """Check the balanced-column property at every real coordinate.

    Returns (ok, report); report lists (coordinate_index, column, message)
    for each violation, with column None when the row count itself is odd.
    """
    proj = project(c)
    report = []
    for ci, b in enumerate(proj.b_mats):
        d = b.shape[0]
        if d % 2:
            report.append((ci, None, "odd row count"))
            continue
        sums = b.sum(axis=0)
        for j in range(c.q):
            if sums[j] != d // 2:
                report.append((ci, j, f"column sum {sums[j]} != {d // 2}"))
    return len(report) == 0, report


def search_emap(kind: str) -> Constellation:
    """Find a balanced labeling for the kind's point set.

    Labels are assigned to (real coordinate, imaginary coordinate) slots by a
    backtracking search over complementary label pairs, taken in numeric
    order. A complementary pair contributes exactly one 1 to every bit
    column, so any full assignment of pairs is balanced and the search is
    deterministic. Canonical assignment: coordinates in ascending order each
    consume the lowest unused pairs; within a coordinate, pair members are
    interleaved (a, ~a, b, ~b, ...) against increasing imaginary parts,
    which keeps the labeling strongly anti-Gray in both directions.
    """
    if kind not in KINDS:
        raise ValueError(f"unsupported constellation kind: {kind!r}")
    points, _ = _geometry_and_gray(kind)
    points = _normalize(points[_canonical_order(points)])
    m = len(points)
    q = int(np.log2(m))
    blank = np.zeros((m, q), dtype=np.uint8)
    proj = project(Constellation(kind, "emap", points, blank))
    if (proj.d % 2).any():
        bad = proj.s_r[np.flatnonzero(proj.d % 2)]
        raise EmapSearchError(f"odd row count at real coordinate(s) {bad}")

    pairs = [(i, i ^ (m - 1)) for i in range(m // 2)]
    labels = np.empty((m, q), dtype=np.uint8)

    def place(group: int, free: list) -> bool:
        if group == len(proj.d):
            return True
        need = proj.d[group] // 2
        if len(free) < need:
            return False
        chosen, rest = free[:need], free[need:]
        rows = proj.row_points[group]
        vals = [v for pi in chosen for v in pairs[pi]]
        for row, val in zip(rows, vals):
            labels[row] = [(val >> (q - 1 - j)) & 1 for j in range(q)]
        return place(group + 1, rest)

    if not place(0, list(range(len(pairs)))):
        raise EmapSearchError(f"search exhausted for {kind}")
    return Constellation(kind=kind, mapping="emap", points=points, labels=labels)


# ---------------------------------------------------------------------------
# construction and mapping
# ---------------------------------------------------------------------------

def build_constellation(kind: str, mapping: str) -> Constellation:
    """Build a unit-power constellation with the requested labeling.

    mapping="gray" uses per-axis reflected Gray for QAM (wing-folded
    quasi-Gray for the 32/128 crosses) and circular Gray for PSK;
    mapping="emap" uses the canonical balanced labeling from search_emap.
    """
    if kind not in KINDS:
        raise ValueError(f"unsupported constellation kind: {kind!r}")
    if mapping not in MAPPINGS:
        raise ValueError(f"unsupported mapping: {mapping!r}")
    if mapping == "emap":
        return search_emap(kind)
    points, labels = _geometry_and_gray(kind)
    order = _canonical_order(points)
    return Constellation(kind=kind, mapping="gray",
                         points=_normalize(points[order]), labels=labels[order])


def label_lut(c: Constellation) -> np.ndarray:
    """lut[label_as_int] = point index, with bit 0 the most significant."""
    weights = 1 << np.arange(c.q - 1, -1, -1)
    ints = (c.labels.astype(int) * weights).sum(axis=1)
    lut = np.empty(c.m, dtype=int)
    lut[ints] = np.arange(c.m)
    return lut


def map_bits(bits, c: Constellation) -> complex:
    """Point carrying the given length-q label."""
    bits = np.asarray(bits, dtype=int)
    if bits.shape != (c.q,):
        raise ValueError(f"expected {c.q} bits, got shape {bits.shape}")
    val = int((bits * (1 << np.arange(c.q - 1, -1, -1))).sum())
    return complex(c.points[label_lut(c)[val]])


def demap_point(point: complex, c: Constellation) -> np.ndarray:
    """Label of the nearest constellation point."""
    return c.labels[int(np.argmin(np.abs(c.points - point)))].copy()


def export_text(c: Constellation) -> str:
    """One line per point: 're im label'."""
    lines = []
    for p, b in zip(c.points, c.labels):
        lines.append(f"{float(p.real)!r} {float(p.imag)!r} "
                     f"{''.join(str(int(x)) for x in b)}")
    return "\n".join(lines) + "\n"
