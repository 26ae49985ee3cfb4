#!/usr/bin/env python3
"""A tour of the weight hypotheses on instructive pairs.

Highlights:
* the three-piece pair (rmk23 preset) passes the exterior integrability pair
  (W1) while BOTH one-sided sigma integrals diverge, so neither product
  alternative of the classical two-weight criterion can tend to zero;
* w = (r-1)^beta with beta in (-p, -1] (rmk22 preset) is integrable against
  (r-1)^{p-1} but not against the global r^{p-1} weighting near the inner
  boundary -- the gap between the two exterior-embedding conditions;
* the critical tails w ~ r^{-p} vs r^{-p-0.1} sit on opposite sides of the
  capacity integral's convergence: the integrand decays exactly like 1/r at
  the critical exponent.
"""

from radial_plap import conditions
from radial_plap import presets
from radial_plap.weights import INF, PowerLogPiece, ProblemSpec, WeightModel


def show(title, reports):
    print(title)
    for rep in reports:
        extra = f"  -- {rep.notes}" if rep.notes else ""
        print(f"  {rep.condition_id:8s} {rep.verdict:8s}{extra}")
    print()


def main():
    for name in ("rmk22", "rmk23"):
        ps = presets.get_preset(name).problem
        show(f"preset {name}: {presets.get_preset(name).description}",
             conditions.check_all(ps))

    one = WeightModel.constant(1.0, 1.0, INF)
    for p, N in ((2.0, 3), (3.0, 4)):
        for bump in (0.0, 0.1):
            w = WeightModel((PowerLogPiece(1.0, INF, 1.0, 0.0, -p - bump),), 1.0)
            ps = ProblemSpec(N=N, p=p, R1=1.0, R2=INF, v=one, w=w)
            rep = conditions.check_A(ps)
            val = rep.witnesses.get("integral_P_sigma")
            print(f"p={p}, N={N}, w ~ r^{-p - bump:+.1f}: condition (A) "
                  f"{rep.verdict} (capacity integral = {val})")
    print()

    ps = presets.get_preset("ex61").problem
    eps_inf = conditions.search_eps_L(ps)
    print("ex61 admissible endpoint exponents: every eps in "
          f"({eps_inf}, p-1) works for the left estimate")
    rep = conditions.check_A_eps_L(ps, eps=0.5)
    print(f"  probe sup at eps = 0.5: {rep.witnesses['sup_F']:.6f} "
          f"attained near r = {rep.witnesses['argmax_r']:.4f}")


if __name__ == "__main__":
    main()
