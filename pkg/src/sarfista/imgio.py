"""Plain-file exports: binary PGM images, CSV matrices, trace files."""

import math

import numpy as np

TRACE_HEADER = "pulse_index,n_large,snr_online_db,snr_bp_db,gain_db,memory_online,memory_batch"


def fmt_float(x) -> str:
    """Shortest exact decimal for a float; 'inf' and 'nan' pass through."""
    return repr(float(x))


def write_pgm(path, image):
    """8-bit binary PGM of |image|, peak-normalized (all-zero stays black)."""
    img = np.abs(np.asarray(image)).astype(np.float64)
    if img.ndim != 2:
        raise ValueError("expected a 2-d image")
    peak = float(img.max())
    if peak > 0.0:
        scaled = np.rint(img / peak * 255.0).astype(np.uint8)
    else:
        scaled = np.zeros(img.shape, dtype=np.uint8)
    h, w = img.shape
    with open(path, "wb") as fh:
        fh.write(f"P5\n{w} {h}\n255\n".encode("ascii"))
        fh.write(scaled.tobytes())


def write_matrix_csv(path, matrix):
    mat = np.asarray(matrix, dtype=np.float64)
    if mat.ndim != 2:
        raise ValueError("expected a 2-d matrix")
    with open(path, "w") as fh:
        for row in mat:
            fh.write(",".join(fmt_float(v) for v in row) + "\n")


def write_trace_csv(path, rows):
    """Per-pulse metric rows under the fixed header; ints plain, floats repr."""
    with open(path, "w") as fh:
        fh.write(TRACE_HEADER + "\n")
        for r in rows:
            fh.write(
                ",".join(
                    (
                        str(int(r.pulse_index)),
                        str(int(r.n_large)),
                        fmt_float(r.snr_online_db),
                        fmt_float(r.snr_bp_db),
                        fmt_float(r.gain_db),
                        str(int(r.memory_online)),
                        str(int(r.memory_batch)),
                    )
                )
                + "\n"
            )


def write_schedule_csv(path, schedule):
    with open(path, "w") as fh:
        fh.write("position_index\n")
        for k in schedule.selected_indices:
            fh.write(f"{k}\n")


def atom_gallery(path, dictionary):
    """Montage PGM of every atom as a tile, 1-pixel separators between tiles."""
    side = dictionary.side_pixels
    m = dictionary.m_atoms
    cols = max(1, math.ceil(math.sqrt(m)))
    rows = math.ceil(m / cols)
    canvas = np.zeros((rows * (side + 1) + 1, cols * (side + 1) + 1))
    for j in range(m):
        r, c = divmod(j, cols)
        tile = dictionary.atoms[:, j].reshape(side, side)
        y0 = r * (side + 1) + 1
        x0 = c * (side + 1) + 1
        canvas[y0 : y0 + side, x0 : x0 + side] = tile
    write_pgm(path, canvas)
