"""Instance representation, TSPLIB-subset I/O and random instance generation.

Random generation uses ``random.Random`` (MT19937), one fresh generator per
call seeded with the caller-supplied integer, so instances reproduce
bit-identically across platforms and CPython versions.
"""

import math
import random
from dataclasses import dataclass
from enum import Enum

from .geometry import Orientation, Point, orient

__all__ = [
    "DistanceMode",
    "Instance",
    "TsplibParseError",
    "UnsupportedFormatError",
    "DimensionMismatchError",
    "parse_tsplib",
    "write_tsplib",
    "gen_uniform",
    "gen_clustered",
]

GEN_BOX = 1000.0
CLUSTER_SIGMA = 25.0


class DistanceMode(Enum):
    """Distance convention applied uniformly to one instance."""

    EXACT = "exact"
    TSPLIB_ROUND = "tsplib-round"


class TsplibParseError(ValueError):
    """Malformed TSPLIB header or coordinate section."""


class UnsupportedFormatError(TsplibParseError):
    """File is valid TSPLIB but outside the supported EUC_2D subset."""


class DimensionMismatchError(TsplibParseError):
    """Coordinate count disagrees with the DIMENSION header."""


def _all_collinear(points: list[Point]) -> bool:
    a = points[0]
    b = next((p for p in points[1:] if p != a), None)
    if b is None:
        return True
    return all(orient(a, b, p) is Orientation.COLLINEAR for p in points)


@dataclass(frozen=True)
class Instance:
    """A named planar point set; vertex i corresponds to points[i]."""

    name: str
    points: tuple[Point, ...]
    distance_mode: DistanceMode = DistanceMode.EXACT

    def __post_init__(self) -> None:
        if len(self.points) < 3:
            raise ValueError("an instance needs at least 3 points")
        if len(set(self.points)) != len(self.points):
            raise ValueError("instance points must be pairwise distinct")
        if _all_collinear(list(self.points)):
            raise ValueError("instance points must not all be collinear")

    @property
    def n(self) -> int:
        return len(self.points)

    def distance(self, i: int, j: int) -> float:
        """Distance between vertices i and j under this instance's mode."""
        a = self.points[i]
        b = self.points[j]
        d = math.hypot(a.x - b.x, a.y - b.y)
        if self.distance_mode is DistanceMode.TSPLIB_ROUND:
            return float(int(d + 0.5))
        return d

    def distance_matrix(self) -> list[list[float]]:
        n = self.n
        m = [[0.0] * n for _ in range(n)]
        for i in range(n):
            for j in range(i + 1, n):
                d = self.distance(i, j)
                m[i][j] = d
                m[j][i] = d
        return m


def parse_tsplib(data: str | bytes, distance_mode: DistanceMode = DistanceMode.EXACT) -> Instance:
    """Parse the EUC_2D TSPLIB subset (NAME/TYPE/DIMENSION/EDGE_WEIGHT_TYPE/NODE_COORD_SECTION)."""
    text = data.decode("utf-8") if isinstance(data, bytes) else data
    headers: dict[str, str] = {}
    coords: dict[int, Point] = {}
    in_coords = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line == "EOF":
            break
        if not in_coords:
            if line == "NODE_COORD_SECTION":
                in_coords = True
                continue
            if ":" not in line:
                raise TsplibParseError(f"line {lineno}: expected 'KEY : VALUE', got {line!r}")
            key, value = (part.strip() for part in line.split(":", 1))
            headers[key.upper()] = value
        else:
            parts = line.split()
            if len(parts) != 3:
                raise TsplibParseError(f"line {lineno}: expected 'index x y', got {line!r}")
            try:
                idx = int(parts[0])
                x = float(parts[1])
                y = float(parts[2])
            except ValueError as exc:
                raise TsplibParseError(f"line {lineno}: bad coordinate line {line!r}") from exc
            if idx in coords:
                raise TsplibParseError(f"line {lineno}: duplicate node index {idx}")
            coords[idx] = Point(x, y)

    file_type = headers.get("TYPE", "TSP").upper()
    if file_type != "TSP":
        raise UnsupportedFormatError(f"unsupported TYPE {file_type!r}, only TSP is handled")
    weight_type = headers.get("EDGE_WEIGHT_TYPE")
    if weight_type is None:
        raise TsplibParseError("missing EDGE_WEIGHT_TYPE header")
    if weight_type.upper() != "EUC_2D":
        raise UnsupportedFormatError(f"unsupported EDGE_WEIGHT_TYPE {weight_type!r}, only EUC_2D is handled")
    if "DIMENSION" not in headers:
        raise TsplibParseError("missing DIMENSION header")
    try:
        dimension = int(headers["DIMENSION"])
    except ValueError as exc:
        raise TsplibParseError(f"bad DIMENSION value {headers['DIMENSION']!r}") from exc
    if len(coords) != dimension:
        raise DimensionMismatchError(f"DIMENSION is {dimension} but {len(coords)} coordinate lines found")
    missing = [k for k in range(1, dimension + 1) if k not in coords]
    if missing:
        raise TsplibParseError(f"missing node indices {missing[:5]} (1..{dimension} expected)")

    points = tuple(coords[k] for k in range(1, dimension + 1))
    name = headers.get("NAME", "unnamed") or "unnamed"
    return Instance(name=name, points=points, distance_mode=distance_mode)


def write_tsplib(inst: Instance) -> str:
    """Emit the instance in the same EUC_2D subset; parse(write(x)) == x."""
    name = inst.name or "unnamed"
    lines = [
        f"NAME : {name}",
        "TYPE : TSP",
        f"DIMENSION : {inst.n}",
        "EDGE_WEIGHT_TYPE : EUC_2D",
        "NODE_COORD_SECTION",
    ]
    for k, p in enumerate(inst.points, start=1):
        lines.append(f"{k} {p.x!r} {p.y!r}")
    lines.append("EOF")
    return "\n".join(lines) + "\n"


def _draw_until_valid(draw, name: str, distance_mode: DistanceMode) -> Instance:
    while True:
        points = draw()
        if len(set(points)) == len(points) and not _all_collinear(points):
            return Instance(name=name, points=tuple(points), distance_mode=distance_mode)


def gen_uniform(n: int, seed: int, distance_mode: DistanceMode = DistanceMode.EXACT) -> Instance:
    """n points uniform in [0, 1000]^2, deterministic per seed."""
    if n < 3:
        raise ValueError("n must be at least 3")
    rng = random.Random(seed)

    def draw() -> list[Point]:
        return [Point(rng.uniform(0.0, GEN_BOX), rng.uniform(0.0, GEN_BOX)) for _ in range(n)]

    return _draw_until_valid(draw, f"uniform_{n}_{seed}", distance_mode)


def gen_clustered(
    n: int, clusters: int, seed: int, distance_mode: DistanceMode = DistanceMode.EXACT
) -> Instance:
    """n points in `clusters` Gaussian blobs (sigma 25) around uniform centers."""
    if n < 3:
        raise ValueError("n must be at least 3")
    if not 1 <= clusters <= n:
        raise ValueError("clusters must be between 1 and n")
    rng = random.Random(seed)

    def draw() -> list[Point]:
        centers = [(rng.uniform(0.0, GEN_BOX), rng.uniform(0.0, GEN_BOX)) for _ in range(clusters)]
        pts = []
        for k in range(n):
            cx, cy = centers[k % clusters]
            pts.append(Point(cx + rng.gauss(0.0, CLUSTER_SIGMA), cy + rng.gauss(0.0, CLUSTER_SIGMA)))
        return pts

    return _draw_until_valid(draw, f"clustered_{n}_{seed}", distance_mode)
