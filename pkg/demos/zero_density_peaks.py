"""Two constructions that pin down how far the density bounds can stretch.

Build one: a band signal (gap just under pi) that never changes sign on a
chosen family of integer intervals, showing the gap bound cannot force
oscillation everywhere at once.

Build two: an entire-function zero set whose counting density surges past
m + eta on scheduled blocks while the sampled function's sign-change
density stays below 1 - m, separating zero density from sign-change density.
"""

import numpy as np

from gapwave import example1_build, example2_build, find_constants


def main() -> None:
    res1 = example1_build([(10, 13), (40, 46)], 0.75, 0.05 * np.pi, (-500.0, 500.0))
    r1 = res1.report
    print("build one: quiet intervals")
    for iv, c, lo in zip([(10, 13), (40, 46)], r1.sign_changes, r1.min_abs):
        print(f"  interval {iv}: {c} sign changes, min |f| = {lo:.2e} > 0")
    print(f"  in-gap spectral energy ratio: {r1.gap_energy_ratio:.2e}")
    print(f"  reference density far from the quiet zones: {r1.reference_density:.3f}")

    k = 0.1
    c = find_constants(k)
    print(f"\nbuild two: scheduled peaks (k={k})")
    print(f"  m = {c.m:.6f}, eta = {c.eta:.6f}, target m + eta = {c.m + c.eta:.6f}")
    res2 = example2_build(k, [5 * 4**j for j in range(6)])
    r2 = res2.report
    lo, hi = r2.peak_block
    print(f"  peak block ({lo:.0f}, {hi:.0f}): zero density / (m + eta) = {r2.peak_ratio:.4f}")
    print(
        f"  sign-change density {r2.sign_change_density:.4f} <= "
        f"{r2.sign_density_bound:.4f} and < 1 - m = {r2.one_minus_m:.4f}"
    )

    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, axes = plt.subplots(1, 2, figsize=(10, 4))
    ax = axes[0]
    ax.plot(res1.f.x, res1.f.values, lw=0.4)
    for a, b in [(10, 13), (40, 46)]:
        ax.axvspan(a, b, color="orange", alpha=0.3)
    ax.set_xlim(-60, 60)
    ax.set_xlabel("x")
    ax.set_title("quiet intervals (shaded): no sign change inside")
    ax = axes[1]
    zs = np.asarray(res2.zeros.positions, dtype=float)
    ax.step(zs, np.arange(1, zs.size + 1), where="post", lw=1.0, label="zeros up to x")
    ax.plot(zs, (c.m + c.eta) * zs, "k--", lw=0.8, label="slope m + eta")
    ax.axvspan(lo, hi, color="orange", alpha=0.2, label="peak block")
    ax.set_xscale("log")
    ax.set_yscale("log")
    ax.set_xlabel("x")
    ax.legend()
    ax.set_title("scheduled density peaks")
    fig.tight_layout()
    fig.savefig("zero_density_peaks.svg")
    print("wrote zero_density_peaks.svg")


if __name__ == "__main__":
    main()
