"""Counting sign changes by watching a phase climb a lattice.

The positive-frequency half h of a gapped signal has an argument that climbs
on average like a*x and drops by pi at each real zero.  Sign changes of the
signal are exactly the transversal crossings of the lines pi/2 + k*pi, so
counting crossings equals counting sign changes; the demo checks the
identity at a spread of radii, then draws the staircase.
"""

import numpy as np

from gapwave import (
    GapSpec,
    Grid,
    Lattice,
    decompose,
    lattice_crossings,
    phase_curve,
    random_highpass,
    s_count,
    sign_change_places,
    synth_trig,
)


def main() -> None:
    n = 8192
    g = Grid(-16 * np.pi, 32 * np.pi / n, n)
    poly = random_highpass(GapSpec(2.0, 6.0), (1, 6), seed=7)
    s = synth_trig(poly, g)
    d = decompose(s, band=GapSpec(2.0, 6.0))
    curve = phase_curve(d)
    rep = sign_change_places(s)
    print("r      lattice crossings   sign changes")
    for r in np.linspace(5.0, float(g.x_last), 8):
        lc = lattice_crossings(curve, float(r), Lattice())
        sc = s_count(rep, float(r))
        print(f"{r:6.2f}  {lc:17d}   {sc:12d}")
        assert lc == sc

    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(7.5, 4.5))
    for seg in curve.segments:
        ax.plot(seg.x, seg.phi, "C0", lw=0.9)
    phis = np.concatenate([seg.phi for seg in curve.segments])
    for k in np.arange(
        np.floor((phis.min() - np.pi / 2) / np.pi),
        np.ceil((phis.max() - np.pi / 2) / np.pi) + 1,
    ):
        ax.axhline(np.pi / 2 + k * np.pi, color="gray", lw=0.4)
    ax.plot(curve.jump_positions, [j.phi_before for j in curve.jumps], "rv", ms=4)
    ax.set_xlim(0, float(g.x_last))
    ax.set_xlabel("x")
    ax.set_ylabel("phase of h")
    ax.set_title("phase staircase; markers are the -pi drops at real zeros")
    fig.tight_layout()
    fig.savefig("phase_staircase.svg")
    print("wrote phase_staircase.svg")


if __name__ == "__main__":
    main()
