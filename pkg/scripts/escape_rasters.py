#!/usr/bin/env python3
"""Render escape-time rasters on the z=0 plane for the three parameter
sets whose escape sets show fractal banding, plus one extinction time
series per set.

Writes PGM images (pixel = escape step, 251+ = converged codes, 255 =
undetermined) with CSV legends, via the trichain CLI conventions.
"""

import argparse
import pathlib

from trichain.cli import PIXEL_UNDETERMINED
from trichain.escape import PlaneSlice, raster_slice
from trichain.map_core import Params, iterate

CASES = [
    ("a", Params(3.0, 4.5, 7.5), (0.25, 0.39, 0.0)),
    ("b", Params(3.5, 4.5, 7.5), (0.25, 0.39, 0.0)),
    ("c", Params(2.5, 5.0, 7.5), (0.215, 0.24, 0.0)),
]


def write_pgm(path, raster):
    nx, ny = raster.resolution
    pixels = bytearray()
    for j in range(ny):
        for i in range(nx):
            code = int(raster.codes[j, i])
            if code >= 0:
                pixels.append(min(code, 250))
            elif code == -9:
                pixels.append(PIXEL_UNDETERMINED)
            else:
                pixels.append(250 - code)
    path.write_bytes(b"P5\n%d %d\n255\n" % (nx, ny) + bytes(pixels))


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--res", type=int, default=300, help="pixels per side")
    ap.add_argument("--max-iter", type=int, default=50)
    ap.add_argument("--threads", type=int, default=4)
    ap.add_argument("--out-dir", default="out")
    args = ap.parse_args()

    out = pathlib.Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)

    for tag, params, s0 in CASES:
        raster = raster_slice(
            PlaneSlice("z", 0.0),
            (0.0, 1.0, 0.0, 1.0),
            (args.res, args.res),
            params,
            max_iter=args.max_iter,
            threads=args.threads,
        )
        pgm = out / f"escape_z0_{tag}.pgm"
        write_pgm(pgm, raster)

        tr = iterate(s0, params, 200)
        csv = out / f"extinction_series_{tag}.csv"
        lines = [f"# mu={params.mu} beta={params.beta} gamma={params.gamma} s0={s0}"]
        lines.append("n,x,y,z")
        lines += [f"{k},{s.x!r},{s.y!r},{s.z!r}" for k, s in enumerate(tr.states)]
        if tr.escaped:
            lines.append(f"# escaped index={tr.escape_index}")
        csv.write_text("\n".join(lines) + "\n")
        print(f"{tag}: {pgm}  escaped_at={tr.escape_index}")


if __name__ == "__main__":
    main()
