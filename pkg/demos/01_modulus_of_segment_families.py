"""Discrete p-modulus of curve families.

The modulus of a family of curves is the cheapest L^p budget of a density
that gives every curve of the family unit line integral. For the family of
horizontal unit segments filling the unit square the value is known in
closed form, which makes it a good first check of the solver.
"""

import numpy as np

from modlab import (
    CurveFamily,
    Grid,
    Polyline,
    analytic_parallel_segments,
    assemble_problem,
    solve_modulus,
)

res = 32
grid = Grid(box_min=[0.0, 0.0], box_max=[1.0, 1.0], resolution=[res, res])
spacing = 1.0 / res

print("== horizontal unit segments at every cell-row height ==")
rows = [Polyline([[0.0, (j + 0.5) * spacing], [1.0, (j + 0.5) * spacing]]) for j in range(res)]
family = CurveFamily(curves=rows, label="all rows")

for p in (1.5, 2.0, 3.0):
    problem = assemble_problem(family, grid, p)
    result = solve_modulus(problem, tol=1e-9)
    exact = analytic_parallel_segments(1.0, 1.0, p)
    print(
        f"p={p}: solver={result.value:.8f} analytic={exact:.8f} "
        f"gap={result.gap:.2e} feasibility={result.max_constraint_violation:.2e}"
    )

print()
print("== halving the measure of heights halves the modulus ==")
half_family = CurveFamily(curves=rows[: res // 2], label="lower half")
value = solve_modulus(assemble_problem(half_family, grid, 2.0), tol=1e-9).value
print(f"p=2, E=[0,1/2]: solver={value:.8f} analytic={analytic_parallel_segments(0.5, 1.0, 2.0):.8f}")

print()
print("== the modulus behaves like an outer measure ==")
rng = np.random.default_rng(0)
gamma1 = CurveFamily(curves=[Polyline(rng.uniform(0.1, 0.9, size=(3, 2))) for _ in range(2)])
gamma2 = CurveFamily(curves=gamma1.curves + [Polyline(rng.uniform(0.1, 0.9, size=(3, 2)))])
union = CurveFamily(curves=gamma1.curves + gamma2.curves)

v0 = solve_modulus(assemble_problem(CurveFamily(curves=[]), grid, 2.0)).value
v1 = solve_modulus(assemble_problem(gamma1, grid, 2.0), tol=1e-9).value
v2 = solve_modulus(assemble_problem(gamma2, grid, 2.0), tol=1e-9).value
vu = solve_modulus(assemble_problem(union, grid, 2.0), tol=1e-9).value
print(f"empty family:        {v0}")
print(f"monotonicity:        {v1:.6f} <= {v2:.6f} (Gamma1 inside Gamma2)")
print(f"subadditivity:       {vu:.6f} <= {v1 + v2:.6f} (union vs sum)")
