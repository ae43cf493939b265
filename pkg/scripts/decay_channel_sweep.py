#!/usr/bin/env python3
"""Critical coupling vs the mixing parameter t of the channel s- + t s+.

Emits g_c(t)/g_0 for both closed-form variants at several damping
strengths, to visualize how the symmetric-decay approximation (the
"literature" mode) deviates from the exact susceptibility: the exact curve
is monotone in t, while the approximation dips before diverging at t -> 1.
"""

import argparse
from pathlib import Path

import numpy as np

from dicke_critic import CavityParams, GcMode, Generalized, Transition, closed_form_gc
from dicke_critic.cli import HEADER, fmt
from dicke_critic.critical import fully_polarized_gc


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--gamma-ratios", default="0.25,0.5,1.0",
                    help="comma list of gamma_t / omega_z values")
    ap.add_argument("--kappa", type=float, default=0.0)
    ap.add_argument("--points", type=int, default=100)
    ap.add_argument("--output", default="decay_channel_sweep.csv")
    args = ap.parse_args()

    omega_z = 1.0
    cavity = CavityParams(omega0=1.0, kappa=args.kappa)
    g0 = fully_polarized_gc(omega_z, cavity)
    ratios = [float(r) for r in args.gamma_ratios.split(",")]
    ts = np.linspace(0.0, 0.99, args.points)

    cols = ["t"]
    for r in ratios:
        cols += [f"gc_exact_gamma{r}", f"gc_quoted_gamma{r}"]
    lines = [",".join(cols)]
    for t in ts:
        row = [fmt(t)]
        for r in ratios:
            bath = Generalized(gamma=r * omega_z, t=float(t))
            for mode in (GcMode.SELF_CONSISTENT, GcMode.LITERATURE):
                result = closed_form_gc(bath, omega_z, cavity, mode)
                row.append(fmt(result.g_c / g0) if isinstance(result, Transition) else "inf")
        lines.append(",".join(row))

    out = Path(args.output)
    out.write_text("\n".join([HEADER, *lines]) + "\n", encoding="utf-8")
    print(f"wrote {out} ({len(ts)} rows, {len(ratios)} damping strengths)")


if __name__ == "__main__":
    main()
