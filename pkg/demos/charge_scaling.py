"""The charge picture behind the scheduled construction.

The negative bump u0 on [0, 2] is the boundary value of a harmonic extension
whose line charge is exactly q / pi^2, with q the closed-form density.  A
cone term adds uniform charge.  The rescaling that shrinks profiles by t
moves interval masses the compatible way: measuring charge then scaling
equals scaling then measuring, up to quadrature error.
"""

import numpy as np

from gapwave import (
    Grid,
    SampledSignal,
    boundary_charge,
    find_constants,
    q_closed,
    scale_u,
    split_check,
    u0_profile,
)


def main() -> None:
    k = 0.1
    n = 1 << 16
    g = Grid(-80.0, 160.0 / n, n)
    u = SampledSignal(g, u0_profile(g.points, k))
    rho = boundary_charge(u)
    x = u.x
    smooth = (x > -3) & (x < 5) & (np.abs(x) > 0.05) & (np.abs(x - 2) > 0.05)
    err = np.max(np.abs(rho.values[smooth] - q_closed(x[smooth], k) / np.pi**2))
    print(f"charge density vs closed form q/pi^2 (away from kinks): {err:.2e}")

    m = find_constants(k).m
    z = SampledSignal(g, np.zeros(n))
    cone_rho = boundary_charge(z, cone=np.pi * m)
    print(f"cone charge is uniform: spread {np.ptp(cone_rho.values):.2e} around m={m:.5f}")

    for t in (0.5, 2.0):
        res = split_check(u, t, cone=np.pi * m / np.pi**2)
        print(f"scale t={t}: commuting-square residual {res:.2e}")

    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, axes = plt.subplots(1, 2, figsize=(10, 4))
    ax = axes[0]
    ax.plot(x, u.values, label="u0")
    for t in (0.5, 2.0):
        ax.plot(x, scale_u(u, t).values, lw=0.9, label=f"scaled t={t}")
    ax.set_xlim(-3, 7)
    ax.set_xlabel("x")
    ax.legend()
    ax.set_title("the bump and two rescalings")
    ax = axes[1]
    ax.plot(x, rho.values, lw=0.9, label="measured charge")
    ax.plot(x, q_closed(x, k) / np.pi**2, "k--", lw=0.8, label="q / pi^2")
    ax.set_xlim(-3, 5)
    ax.set_xlabel("x")
    ax.legend()
    ax.set_title("line charge of the extension")
    fig.tight_layout()
    fig.savefig("charge_scaling.svg")
    print("wrote charge_scaling.svg")


if __name__ == "__main__":
    main()
