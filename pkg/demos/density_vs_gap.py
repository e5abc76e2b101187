"""Sign-change density against the spectral gap.

High-pass signals with gap (-a, a) oscillate with density at least a/pi.
On a 100-period window the running ratio s(r)/r settles visibly above the
line for every gap; widening the gap raises the floor.
"""

import numpy as np

from gapwave import GapSpec, Grid, density_profile, random_highpass, sign_change_places, synth_trig


def main() -> None:
    window = 100 * 2 * np.pi
    dx = 0.01
    g = Grid(-1.0, dx, int(round((window + 2.0) / dx)))
    profiles = {}
    for a in (1, 2, 3):
        poly = random_highpass(GapSpec(float(a)), (1, 16), seed=42 + a)
        rep = sign_change_places(synth_trig(poly, g))
        prof = density_profile(rep, np.linspace(window / 100, window, 400))
        profiles[a] = prof
        print(
            f"gap a={a}: tail-min of s(r)/r = {prof.tail_min:.4f}, "
            f"floor a/pi = {a / np.pi:.4f}"
        )

    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(7, 4))
    for a, prof in profiles.items():
        (ln,) = ax.plot(prof.r, prof.ratio, lw=1.0, label=f"a={a}")
        ax.axhline(a / np.pi, color=ln.get_color(), ls="--", lw=0.8)
    ax.set_xlabel("r")
    ax.set_ylabel("s(r) / r")
    ax.set_title("density of sign changes vs the gap floor a/pi (dashed)")
    ax.legend()
    fig.tight_layout()
    fig.savefig("density_vs_gap.svg")
    print("wrote density_vs_gap.svg")


if __name__ == "__main__":
    main()
