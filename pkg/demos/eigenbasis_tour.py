"""Tour of the three operator eigenbases: build fields mode by mode,
round-trip them through grid samples, and check the invariants that the
rest of the toolkit leans on (Parseval, Leray projection, boundary zeros).
"""

import numpy as np

from eigenapprox import (
    DirichletLaplacian,
    Interval,
    SpectralField,
    Torus,
    TorusLaplacian,
    TorusStokes,
    analyze,
    divergence_residual,
    enumerate_modes,
    leray_project,
    lp_norm,
    random_field,
    subtract,
    synthesize,
)


def section(title):
    print()
    print(title)
    print("-" * len(title))


def main():
    rng = np.random.default_rng(7)

    section("mode counts below a spectral cutoff")
    for op, lam in [
        (DirichletLaplacian(Interval(1.0)), 200.0),
        (TorusLaplacian(Torus(2)), 10.0),
        (TorusStokes(Torus(2)), 10.0),
    ]:
        modes = enumerate_modes(op, lam)
        lams = sorted({round(m.eigenvalue, 12) for m in modes})
        print(f"{type(op).__name__:18s} lambda <= {lam:6.1f}: {len(modes):3d} modes, "
              f"smallest eigenvalues {lams[:4]}")

    section("synthesis / analysis round trip")
    op = TorusLaplacian(Torus(2))
    f = random_field(op, 30.0, rng)
    grid = synthesize(f, 24)
    back = analyze(grid, enumerate_modes(op, 30.0), op)
    worst = max(
        abs(complex(f.coefficients[k]) - complex(back.coefficients.get(k, 0.0)))
        for k in f.coefficients
    )
    print(f"{len(f.coefficients)} torus modes -> 24^2 grid -> coefficients, "
          f"max coefficient error {worst:.3e}")

    # Parseval: the L^2 norm computed from coefficients must match the grid
    section("Parseval on all three bases")
    for op in (DirichletLaplacian(Interval(1.0)), TorusLaplacian(Torus(2)), TorusStokes(Torus(2))):
        f = random_field(op, 40.0, rng)
        spectral = f.l2()
        grid_norm = lp_norm(synthesize(f, 32), 2.0)
        print(f"{type(op).__name__:18s} ||f||_2 spectral {spectral:.12f} "
              f"grid {grid_norm:.12f}  (rel diff {abs(spectral - grid_norm) / spectral:.2e})")

    section("Leray projection")
    lap = TorusLaplacian(Torus(2))
    raw = {
        k: rng.standard_normal(2) + 1j * rng.standard_normal(2)
        for k in [(1, 0), (0, 1), (1, 1), (2, -1), (3, 2)]
    }
    vec = SpectralField(lap, raw)
    projected = leray_project(vec)
    print(f"raw vector field divergence residual:       {divergence_residual(vec):.3e}")
    print(f"after projection:                           {divergence_residual(projected):.3e}")
    twice = leray_project(SpectralField(lap, {i.k: v for i, v in projected.coefficients.items()}))
    print(f"idempotence ||P^2 v - P v||:                {subtract(projected, twice).l2():.3e}")

    section("Dirichlet fields vanish on the boundary")
    f = random_field(DirichletLaplacian(Interval(1.0)), 300.0, rng)
    g = synthesize(f, 64)
    print(f"|u(0)| = {abs(g.values[0]):.3e}, |u(L)| = {abs(g.values[-1]):.3e}")


if __name__ == "__main__":
    main()
