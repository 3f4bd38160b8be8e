#!/usr/bin/env python3
"""Convergence study of the evolution integrator against the closed-form qubit.

Prints the per-halving error ratios and the least-squares order estimate;
the one-step scheme should sit at 4.
"""

import numpy as np

from clifbundle.transport import HamiltonianSpec, evolve


def main():
    h = HamiltonianSpec.constant(np.diag([1.0, -1.0]).astype(complex))
    exact_u = np.diag([np.exp(-1j), np.exp(1j)])
    dts = [2e-2, 1e-2, 5e-3, 2.5e-3, 1.25e-3]
    errs = []
    print(f"{'dt':>10}  {'max error':>12}  {'ratio':>7}")
    for i, dt in enumerate(dts):
        err = float(np.max(np.abs(evolve(h, 1.0, 0.0, dt) - exact_u)))
        errs.append(err)
        ratio = errs[i - 1] / err if i else float("nan")
        print(f"{dt:10.2e}  {err:12.4e}  {ratio:7.2f}")
    slope = np.polyfit(np.log(dts), np.log(errs), 1)[0]
    print(f"\nfitted order: {slope:.3f}")


if __name__ == "__main__":
    main()
