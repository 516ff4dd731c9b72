"""Gate and maze geometries.

Maze text format, one character per cell and newline-terminated rows::

    #  wall
    .  corridor
    X  corridor, input site x        Y  corridor, input site y
    P  corridor, output region p     Q  corridor, output region q

Coordinates are ``(row, col)`` with row 0 at the top (north).
"""

import os
from collections import deque
from dataclasses import dataclass
from importlib import resources

import numpy as np

from .errors import (
    ConfigurationError,
    DuplicateMarkerError,
    IsolatedInputError,
    MissingMarkerError,
    RaggedRowsError,
    UnknownCharacterError,
)

WALL, CORRIDOR = "#", "."
MARKERS = "XYPQ"
_ALLOWED = set(WALL + CORRIDOR + MARKERS)

MOORE = ((-1, -1), (-1, 0), (-1, 1), (0, -1), (0, 1), (1, -1), (1, 0), (1, 1))

BUNDLED_GATES = ("P1", "P2")


@dataclass(frozen=True, eq=False)
class GateGeometry:
    mask: np.ndarray
    input_x: tuple
    input_y: tuple
    output_p: frozenset
    output_q: frozenset
    name: str = "maze"

    def __post_init__(self):
        mask = np.array(self.mask, dtype=bool)
        mask.setflags(write=False)
        object.__setattr__(self, "mask", mask)
        object.__setattr__(self, "input_x", tuple(int(c) for c in self.input_x))
        object.__setattr__(self, "input_y", tuple(int(c) for c in self.input_y))
        object.__setattr__(self, "output_p", frozenset(map(tuple, self.output_p)))
        object.__setattr__(self, "output_q", frozenset(map(tuple, self.output_q)))
        self.validate()

    @property
    def height(self):
        return self.mask.shape[0]

    @property
    def width(self):
        return self.mask.shape[1]

    @property
    def shape(self):
        return self.mask.shape

    def accessible(self, cell):
        i, j = cell
        return 0 <= i < self.height and 0 <= j < self.width and bool(self.mask[i, j])

    def validate(self):
        if self.mask.ndim != 2 or 0 in self.mask.shape:
            raise ConfigurationError("geometry mask must be a non-empty 2D array")
        if self.input_x == self.input_y:
            raise ConfigurationError("input sites x and y coincide")
        for label, cell in (("x", self.input_x), ("y", self.input_y)):
            if not self.accessible(cell):
                raise ConfigurationError(f"input site {label} at {cell} is not accessible")
            i, j = cell
            if not any(self.accessible((i + di, j + dj)) for di, dj in MOORE):
                raise IsolatedInputError(f"input site {label} has no accessible neighbour", i, j)
        for label, region in (("p", self.output_p), ("q", self.output_q)):
            if not region:
                raise ConfigurationError(f"output region {label} is empty")
            bad = [c for c in region if not self.accessible(c)]
            if bad:
                raise ConfigurationError(f"output region {label} has inaccessible cell {min(bad)}")
        if self.output_p & self.output_q:
            raise ConfigurationError("output regions p and q overlap")

    def region(self, label):
        return {"p": self.output_p, "q": self.output_q}[label]

    def input_site(self, label):
        return {"x": self.input_x, "y": self.input_y}[label]

    def __eq__(self, other):
        if not isinstance(other, GateGeometry):
            return NotImplemented
        return (
            self.name == other.name
            and self.mask.shape == other.mask.shape
            and bool(np.array_equal(self.mask, other.mask))
            and self.input_x == other.input_x
            and self.input_y == other.input_y
            and self.output_p == other.output_p
            and self.output_q == other.output_q
        )

    __hash__ = None


def parse_maze(text, name="maze"):
    """Parse a maze document into a :class:`GateGeometry`.

    Raises a :class:`~slimeca.errors.MazeParseError` subclass naming the
    offending row (and column for unknown characters).
    """
    rows = text.split("\n")
    if rows and rows[-1] == "":
        rows.pop()
    if not rows:
        raise RaggedRowsError("empty maze document")
    width = len(rows[0])
    for r, line in enumerate(rows):
        for c, ch in enumerate(line):
            if ch not in _ALLOWED:
                raise UnknownCharacterError(f"unknown character {ch!r}", r, c)
    for r, line in enumerate(rows):
        if len(line) != width:
            raise RaggedRowsError(
                f"row has length {len(line)}, expected {width}", r)
    if width == 0:
        raise RaggedRowsError("maze rows are empty", 0)

    mask = np.array([[ch != WALL for ch in line] for line in rows], dtype=bool)
    found = {m: [] for m in MARKERS}
    for r, line in enumerate(rows):
        for c, ch in enumerate(line):
            if ch in found:
                found[ch].append((r, c))
    missing = [m for m in MARKERS if not found[m]]
    if missing:
        raise MissingMarkerError(missing)
    for m in "XY":
        if len(found[m]) > 1:
            r, c = found[m][1]
            raise DuplicateMarkerError(f"more than one {m} marker", r, c)
    return GateGeometry(
        mask=mask,
        input_x=found["X"][0],
        input_y=found["Y"][0],
        output_p=frozenset(found["P"]),
        output_q=frozenset(found["Q"]),
        name=name,
    )


def serialize_maze(geometry):
    """Inverse of :func:`parse_maze`; the name is not part of the format."""
    grid = [[CORRIDOR if a else WALL for a in row] for row in geometry.mask]
    for (i, j) in geometry.output_p:
        grid[i][j] = "P"
    for (i, j) in geometry.output_q:
        grid[i][j] = "Q"
    grid[geometry.input_x[0]][geometry.input_x[1]] = "X"
    grid[geometry.input_y[0]][geometry.input_y[1]] = "Y"
    return "".join("".join(row) + "\n" for row in grid)


def load_maze(path, name=None):
    with open(path, encoding="ascii") as fh:
        text = fh.read()
    if name is None:
        name = os.path.splitext(os.path.basename(path))[0]
    return parse_maze(text, name=name)


def bundled_gate(name):
    """Return the shipped 60x60 layout for gate ``"P1"`` or ``"P2"``."""
    if name not in BUNDLED_GATES:
        raise ConfigurationError(
            f"unknown gate {name!r}; expected one of {', '.join(BUNDLED_GATES)}")
    text = resources.files("slimeca").joinpath(f"data/gates/{name}.maze").read_text("ascii")
    return parse_maze(text, name=name)


def open_geometry(height=60, width=60, name="open"):
    """Wall-free rectangle with placeholder markers in the corners.

    Used for free-medium runs; the inputs sit at the centre so a seeded blob has
    room to spread.
    """
    mask = np.ones((height, width), dtype=bool)
    ci, cj = height // 2, width // 2
    return GateGeometry(
        mask=mask,
        input_x=(ci, cj),
        input_y=(ci, cj + 1 if cj + 1 < width else cj - 1),
        output_p=frozenset({(height - 1, 0)}),
        output_q=frozenset({(0, width - 1)}),
        name=name,
    )


def geodesic_distance(mask, sources, sentinel=-1):
    """8-connected unit-cost distance from the nearest source through ``mask``.

    Unreachable and wall cells receive ``sentinel``.
    """
    mask = np.asarray(mask, dtype=bool)
    h, w = mask.shape
    dist = np.full((h, w), sentinel, dtype=np.int64)
    queue = deque()
    for (i, j) in sources:
        if mask[i, j] and dist[i, j] != 0:
            dist[i, j] = 0
            queue.append((i, j))
    while queue:
        i, j = queue.popleft()
        d = dist[i, j] + 1
        for di, dj in MOORE:
            a, b = i + di, j + dj
            if 0 <= a < h and 0 <= b < w and mask[a, b] and dist[a, b] == sentinel:
                dist[a, b] = d
                queue.append((a, b))
    return dist


def channel_cells(geometry, label, depth):
    """Accessible cells within ``depth`` geodesic steps of output region ``label``."""
    dist = geodesic_distance(geometry.mask, geometry.region(label))
    return (dist >= 0) & (dist <= depth)
