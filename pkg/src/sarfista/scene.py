"""The four synthetic test scenes on a centered, flat, row-major grid.

Each scene is generated directly from a fixed list of edgelet segments,
so its exact sparse representation in the paired dictionary exists by
construction and the ideal coefficient counts (4, 8, 5, 5) are ground
truth rather than the result of a search.
"""

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .dictionary import EdgeletParams, rasterize_edgelet

_HALF_PI = 0.5 * math.pi


class SceneId(Enum):
    SCENE1 = "scene1"
    SCENE2 = "scene2"
    SCENE3 = "scene3"
    SCENE4 = "scene4"


IDEAL_COEFF_COUNTS = {
    SceneId.SCENE1: 4,
    SceneId.SCENE2: 8,
    SceneId.SCENE3: 5,
    SceneId.SCENE4: 5,
}


def parse_scene_id(text) -> SceneId:
    t = str(text).strip().lower()
    if t in ("1", "2", "3", "4"):
        t = "scene" + t
    for sid in SceneId:
        if sid.value == t:
            return sid
    raise ValueError(f"unknown scene id: {text!r}")


@dataclass
class SceneGrid:
    """Flat imaging grid plus its real, nonnegative reflectivity vector.

    Pixel 0 is the top-left corner; x grows rightward, y downward in
    image coordinates, and world y therefore decreases with row index.
    Treated as immutable after construction.
    """

    side_pixels: int
    pixel_spacing: float = 1.0
    center: tuple = (0.0, 0.0, 0.0)
    reflectivity: np.ndarray = None

    def __post_init__(self):
        self.side_pixels = int(self.side_pixels)
        if self.side_pixels < 2:
            raise ValueError("side_pixels must be at least 2")
        self.pixel_spacing = float(self.pixel_spacing)
        if self.pixel_spacing <= 0.0:
            raise ValueError("pixel_spacing must be positive")
        if len(self.center) != 3:
            raise ValueError("center must be a 3-vector")
        self.center = tuple(float(v) for v in self.center)
        n = self.side_pixels * self.side_pixels
        if self.reflectivity is None:
            self.reflectivity = np.zeros(n)
        else:
            self.reflectivity = np.asarray(self.reflectivity, dtype=np.float64)
            if self.reflectivity.shape != (n,):
                raise ValueError("reflectivity length must equal side_pixels squared")

    @property
    def n_pixels(self) -> int:
        return self.side_pixels * self.side_pixels


def pixel_position(grid, index):
    """World coordinates of one pixel center; index 0 is top-left."""
    if not 0 <= index < grid.n_pixels:
        raise ValueError("pixel index out of range")
    row, col = divmod(int(index), grid.side_pixels)
    half = 0.5 * (grid.side_pixels - 1)
    cx, cy, cz = grid.center
    sp = grid.pixel_spacing
    return np.array([cx + (col - half) * sp, cy + (half - row) * sp, cz])


def pixel_positions(grid):
    """All pixel centers as an (N, 3) array in row-major order."""
    side = grid.side_pixels
    half = 0.5 * (side - 1)
    cx, cy, cz = grid.center
    sp = grid.pixel_spacing
    cols = np.tile(np.arange(side), side)
    rows = np.repeat(np.arange(side), side)
    out = np.empty((side * side, 3))
    out[:, 0] = cx + (cols - half) * sp
    out[:, 1] = cy + (half - rows) * sp
    out[:, 2] = cz
    return out


def _square(x0, y0):
    # four disjoint length-4 edges of a 6x6 square outline with open corners;
    # the corner gaps make this the unique exact 4-atom cover of the support
    return [
        (EdgeletParams(0.0, 4, (x0 + 1, y0)), 1.0),
        (EdgeletParams(_HALF_PI, 4, (x0 + 5, y0 + 1)), 1.0),
        (EdgeletParams(0.0, 4, (x0 + 1, y0 + 5)), 1.0),
        (EdgeletParams(_HALF_PI, 4, (x0, y0 + 1)), 1.0),
    ]


def ideal_components(scene_id, side_pixels):
    """Edgelet decomposition (params, intensity) generating each scene.

    The scenes are rasterized from exactly these components, so the
    returned list doubles as the ground-truth sparse support.
    """
    side = int(side_pixels)
    if side < 16:
        raise ValueError("side_pixels must be at least 16 to host the scenes")
    half = side // 2
    if scene_id == SceneId.SCENE1:
        return _square(5, 5)
    if scene_id == SceneId.SCENE2:
        return _square(2, 2) + _square(side - 7, side - 7)
    lengths = (2, 4, 6, 4, 2)
    intensities = (1.0, 0.8, 0.6, 0.8, 1.0)
    if scene_id == SceneId.SCENE3:
        rows = [half - 6 + 3 * k for k in range(5)]
    elif scene_id == SceneId.SCENE4:
        rows = [half - 2 + k for k in range(5)]
    else:
        raise ValueError(f"unknown scene id: {scene_id!r}")
    comps = []
    for row, length, amp in zip(rows, lengths, intensities):
        comps.append((EdgeletParams(0.0, length, ((side - length) // 2, row)), amp))
    return comps


def make_scene(scene_id, side_pixels, pixel_spacing=1.0, center=(0.0, 0.0, 0.0)):
    """Build the SceneGrid whose reflectivity is the exact edgelet sum."""
    side = int(side_pixels)
    comps = ideal_components(scene_id, side)
    rho = np.zeros(side * side)
    for params, amp in comps:
        atom = rasterize_edgelet(params, side)
        if atom is None or int(atom.sum()) != params.length:
            raise RuntimeError("scene component fell off the grid")
        rho += amp * atom
    return SceneGrid(side, pixel_spacing, center, rho)
