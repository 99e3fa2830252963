# Plot a 2D grid snapshot: determinant sign and rotation angle.
# usage: python3 tools/plot_snapshot.py out/star/final.mbof star.png
import struct
import sys

import matplotlib
import numpy as np

matplotlib.use("Agg")
import matplotlib.pyplot as plt


def read_mbof(path):
    b = open(path, "rb").read()
    if b[:4] != b"MBOF":
        raise ValueError("not a snapshot")
    _, n = struct.unpack_from("<II", b, 4)
    layout, off = b[12], 13
    if layout == 0:
        (d,) = struct.unpack_from("<I", b, off)
        off += 4
        sizes = struct.unpack_from(f"<{d}Q", b, off)
        off += 16 * d
        a = np.frombuffer(b, "<f8", offset=off).reshape(-1, n * n).T
        return a.reshape(n, n, *sizes), None
    (count,) = struct.unpack_from("<Q", b, off)
    off += 8
    pw = np.frombuffer(b, "<f8", count=4 * count, offset=off).reshape(count, 4)
    off += 32 * count
    a = np.frombuffer(b, "<f8", offset=off).reshape(count, n * n).T
    return a.reshape(n, n, count), pw


a, cloud = read_mbof(sys.argv[1])
if cloud is not None or a.ndim != 4:
    sys.exit("only 2D grid snapshots are plotted")
det = np.linalg.det(np.moveaxis(a, (0, 1), (-2, -1)))
fig, ax = plt.subplots(1, 2, figsize=(9, 4))
ax[0].imshow(np.sign(det).T, origin="lower", cmap="coolwarm")
ax[0].set_title("sign det")
if a.shape[0] == 2:
    ax[1].imshow(np.arctan2(a[1, 0], a[0, 0]).T, origin="lower", cmap="twilight")
    ax[1].set_title("angle of first column")
fig.savefig(sys.argv[2] if len(sys.argv) > 2 else "snapshot.png")
