"""Sampled norm experiments.

Lower bounds on L^p operator norms by coordinate ascent over random field
families, convergence studies for the two approximation methods, the
Sobolev-surrogate equivalence brackets, and the spherical-vs-cubic
truncation comparison.  Everything here is seeded, so re-running the script
reproduces the numbers exactly.
"""

import numpy as np

from eigenapprox import (
    DirichletLaplacian,
    ExperimentConfig,
    Interval,
    Torus,
    TorusLaplacian,
    convergence_study,
    operator_norm_lower_bound,
    random_field,
    sobolev_equivalence_study,
    truncation_experiment,
)


def lower_bounds():
    print("L^4 operator-norm lower bounds on the 2-torus (coordinate ascent)")
    config = ExperimentConfig(
        operator=TorusLaplacian(Torus(2)),
        lambda_max=36.0,
        family="near-extremal",
        n_samples=3,
        seed=5,
        ascent_iters=60,
    )
    for name, param in [("pi_theta", 0.4), ("semigroup", 0.2), ("cubic", 3)]:
        rep, witness = operator_norm_lower_bound(name, 4.0, config, param=param)
        print(f"  {name:10s} param={param:<5} ||T||_4 >= {rep.value:.6f} "
              f"(witness has {len(witness.coefficients)} modes)")


def study():
    print("\nconvergence of pi_theta on a fixed torus field")
    rng = np.random.default_rng(1)
    f = random_field(TorusLaplacian(Torus(2)), 64.0, rng, decay=0.5)
    reports = convergence_study(
        f, "pi_theta", norms=[("DA", 0.0), ("Lp", 2.0)], theta_grid=(0.4, 0.2, 0.1, 0.05)
    )
    print(f"  {'theta':>6s} {'norm':>10s} {'error':>12s}")
    for rep in reports:
        tag = f"{rep.params['space']}({rep.params['exponent']})"
        print(f"  {rep.params['theta']:6.2f} {tag:>10s} {rep.value:12.4e}")


def sobolev_brackets():
    print("\nSobolev surrogate vs fractional norm on the interval")
    config = ExperimentConfig(
        operator=DirichletLaplacian(Interval(1.0)),
        lambda_max=900.0,
        family="random-smooth",
        n_samples=12,
        seed=2,
    )
    for rep in sobolev_equivalence_study((0.0, 0.25, 0.5), config):
        note = rep.meta["note"]
        print(f"  theta={rep.params['theta']:<5} ratio in [{rep.reference:.6f}, {rep.value:.6f}]"
              + (f"  ({note})" if note else ""))


def truncation_trend():
    print("\nspherical vs cubic truncation, L^4 ratio by cutoff n")
    reports = truncation_experiment(n_list=(2, 4, 6, 8), kmax=12, n_samples=2, ascent_iters=40, seed=9)
    by_name = {}
    for rep in reports:
        by_name.setdefault(rep.params["transform"], []).append((rep.params["n"], rep.value))
    for name, rows in by_name.items():
        seq = "  ".join(f"n={n}: {v:.4f}" for n, v in rows)
        print(f"  {name:9s} {seq}")
    print("  (the cubic sequence stays bounded; the spherical one is the open question)")


if __name__ == "__main__":
    lower_bounds()
    study()
    sobolev_brackets()
    truncation_trend()
