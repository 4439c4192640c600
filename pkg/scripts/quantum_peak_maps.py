#!/usr/bin/env python3
"""Sequential-pulse mixing spectra: the quantized peak patterns.

Produces the two-level spectrum (three peaks, lone side peak above the
second tone), its mirror under reversed pulse order, and the three-level
spectrum (five peaks), plus an optional 2D map of each peak's photon
number over the (theta1, theta2) pulse-area plane.
"""

import argparse
import math
import sys

import numpy as np

from qwmix import (AtomSpec, detect_peaks, phase_grid_spectrum, preset_quantum,
                   spectrum_to_csv)
from qwmix.atom import GAMMA1_DEFAULT


def one_spectrum(atom, th1, th2, first_tone, dt, d_omega):
    seq = preset_quantum(th1 / dt, th2 / dt, dt, dt, 0.0, 100e-9, d_omega,
                         first_tone)
    return phase_grid_spectrum(atom, seq, 32, 9)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--theta1", type=float, default=0.5, help="in units of pi")
    ap.add_argument("--theta2", type=float, default=0.5, help="in units of pi")
    ap.add_argument("--map-points", type=int, default=0,
                    help="if > 0, also write an NxN (theta1, theta2) map")
    ap.add_argument("--prefix", default="quantum")
    args = ap.parse_args()

    dt = 2e-9
    d_omega = GAMMA1_DEFAULT / 20
    th1, th2 = args.theta1 * math.pi, args.theta2 * math.pi

    cases = [
        ("two_level", AtomSpec.two_level(), -1),
        ("two_level_reversed", AtomSpec.two_level(), +1),
        ("three_level", AtomSpec.three_level(), -1),
    ]
    for label, atom, first in cases:
        spec = one_spectrum(atom, th1, th2, first, dt, d_omega)
        peaks = detect_peaks(spec, 1e-3)
        path = f"{args.prefix}_{label}.csv"
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(spectrum_to_csv(spec))
        print(f"{label}: peaks at modes {peaks} -> {path}")

    if args.map_points > 0:
        n = args.map_points
        thetas = np.linspace(0.05 * math.pi, 0.95 * math.pi, n)
        atom = AtomSpec.two_level()
        path = f"{args.prefix}_two_level_map.csv"
        with open(path, "w", encoding="utf-8") as fh:
            fh.write("theta1,theta2,N_minus1,N_plus1,N_plus3\n")
            for t1 in thetas:
                for t2 in thetas:
                    spec = one_spectrum(atom, t1, t2, -1, dt, d_omega)
                    fh.write(",".join(format(v, ".17g") for v in (
                        t1, t2, spec.photons(-1), spec.photons(1),
                        spec.photons(3))) + "\n")
        print(f"[done] wrote {path}")


if __name__ == "__main__":
    sys.exit(main())
