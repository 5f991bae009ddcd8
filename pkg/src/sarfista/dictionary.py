"""Binary edgelet dictionary generation and per-pulse operator composition."""

import math
from dataclasses import dataclass

import numpy as np

_TWO_PI = 2.0 * math.pi


@dataclass
class EdgeletParams:
    """One atom: a 1-pixel-wide segment with rotation, length, start pixel."""

    rotation: float
    length: int
    origin: tuple

    def __post_init__(self):
        self.rotation = float(self.rotation) % _TWO_PI
        self.length = int(self.length)
        self.origin = (int(self.origin[0]), int(self.origin[1]))
        if self.length < 1:
            raise ValueError("edgelet length must be at least 1")


@dataclass
class DictionarySpec:
    """Enumeration request: which lengths and rotations to rasterize."""

    lengths: tuple
    rotations: tuple
    side_pixels: int

    def __post_init__(self):
        side = int(self.side_pixels)
        if side < 2:
            raise ValueError("side_pixels must be at least 2")
        lengths = tuple(sorted({int(v) for v in self.lengths}))
        rotations = tuple(sorted({float(r) % _TWO_PI for r in self.rotations}))
        if not lengths or not rotations:
            raise ValueError("dictionary spec needs at least one length and one rotation")
        for l in lengths:
            if l < 1 or l >= side:
                raise ValueError(f"edgelet length {l} outside [1, {side - 1}]")
        self.lengths = lengths
        self.rotations = rotations
        self.side_pixels = side


@dataclass
class EdgeletDictionary:
    atoms: np.ndarray
    params: list
    side_pixels: int

    @property
    def n_pixels(self):
        return self.atoms.shape[0]

    @property
    def m_atoms(self):
        return self.atoms.shape[1]


def rasterize_edgelet(params, side_pixels):
    """Rasterize one edgelet onto a side x side grid, row-major vector.

    Steps along the dominant axis so each of the `length` steps lands on
    a distinct pixel; the off-axis coordinate rounds half up (y grows
    downward). Pixels outside the grid are clipped. Returns None when
    clipping removes every pixel; the caller skips such atoms.
    """
    side = int(side_pixels)
    if side < 2:
        raise ValueError("side_pixels must be at least 2")
    if params.length >= side:
        raise ValueError("edgelet length must be below side_pixels")
    x0, y0 = params.origin
    if not (0 <= x0 < side and 0 <= y0 < side):
        raise ValueError("edgelet origin lies outside the grid")
    dx = math.cos(params.rotation)
    dy = math.sin(params.rotation)
    img = np.zeros(side * side, dtype=np.float64)
    hit = False
    if abs(dx) >= abs(dy):
        step = 1 if dx >= 0.0 else -1
        slope = dy / dx
        for k in range(params.length):
            x = x0 + step * k
            y = math.floor(y0 + step * k * slope + 0.5)
            if 0 <= x < side and 0 <= y < side:
                img[y * side + x] = 1.0
                hit = True
    else:
        step = 1 if dy >= 0.0 else -1
        slope = dx / dy
        for k in range(params.length):
            y = y0 + step * k
            x = math.floor(x0 + step * k * slope + 0.5)
            if 0 <= x < side and 0 <= y < side:
                img[y * side + x] = 1.0
                hit = True
    if not hit:
        return None
    return img


def build_dictionary(spec, require_overcomplete=False):
    """Enumerate, rasterize, and deduplicate all atoms for `spec`.

    Column order is deterministic: rotation-major, then length, then
    origin in row-major pixel order. Atoms that lose pixels to the grid
    boundary are dropped entirely (a clipped long atom would alias a
    shorter one), as are exact duplicate rasterizations.
    """
    side = spec.side_pixels
    cols = []
    kept = []
    seen = set()
    for rot in spec.rotations:
        for length in spec.lengths:
            for y in range(side):
                for x in range(side):
                    p = EdgeletParams(rot, length, (x, y))
                    v = rasterize_edgelet(p, side)
                    if v is None or int(v.sum()) != length:
                        continue
                    key = v.astype(np.uint8).tobytes()
                    if key in seen:
                        continue
                    seen.add(key)
                    cols.append(v)
                    kept.append(p)
    if not cols:
        raise ValueError("dictionary spec produced no atoms")
    atoms = np.column_stack(cols)
    if require_overcomplete and atoms.shape[1] <= atoms.shape[0]:
        raise ValueError(
            f"dictionary is not over-complete: M={atoms.shape[1]} <= N={atoms.shape[0]}"
        )
    return EdgeletDictionary(atoms, kept, side)


def _atom_matrix(dictionary):
    if isinstance(dictionary, EdgeletDictionary):
        return dictionary.atoms
    return np.asarray(dictionary)


def compose(forward, dictionary):
    """Per-pulse operator G = F H."""
    F = np.asarray(forward)
    H = _atom_matrix(dictionary)
    if F.ndim != 2 or H.ndim != 2 or F.shape[1] != H.shape[0]:
        raise ValueError("incompatible operator shapes for compose")
    return F @ H


def synthesize(dictionary, coeffs):
    """Image synthesis H c."""
    H = _atom_matrix(dictionary)
    c = np.asarray(coeffs)
    if c.ndim != 1 or c.shape[0] != H.shape[1]:
        raise ValueError("coefficient vector does not match atom count")
    return H @ c
