"""Vector-valued fields, their integral, and dual pairings.

Cell-constant fields are exactly the simple functions of the discrete
model, so the vector-valued integral is a volume-weighted sum. Bounded
functionals commute with it, and the norm of the integral never exceeds
the integral of the norm.
"""

import numpy as np

from modlab import (
    Grid,
    NormTag,
    VectorField,
    bochner_integral,
    dual_ball_extreme_points,
    lp_norm,
    sampled_dual_functionals,
    scalarize,
    value_norm,
)

grid = Grid(box_min=[0.0, 0.0], box_max=[1.0, 1.0], resolution=[8, 8])
rng = np.random.default_rng(1)

print("== value norms on R^3 ==")
v = np.array([3.0, -4.0, 1.0])
for tag in (NormTag.L1, NormTag.L2, NormTag.LINF):
    print(f"||(3,-4,1)||_{tag.value}: {value_norm(v, tag)}")

print()
print("== the integral of a simple function ==")
field = VectorField(grid=grid, values=rng.normal(size=(grid.num_cells, 3)), norm=NormTag.L2)
integral = bochner_integral(field)
print(f"integral = {integral}")
print(f"||integral|| = {value_norm(integral, field.norm):.6f}"
      f" <= {lp_norm(field, 1.0):.6f} = integral of ||f||")

print()
print("== functionals commute with the integral ==")
for tag in (NormTag.L1, NormTag.L2, NormTag.LINF):
    f = VectorField(grid=grid, values=rng.normal(size=(grid.num_cells, 3)), norm=tag)
    # the l2 ball has no finite extreme set; sample a functional instead
    functionals = dual_ball_extreme_points(tag, 3)[:2] or sampled_dual_functionals(tag, 3, 2, seed=4)
    for functional in functionals:
        lhs = float(np.dot(functional.coeffs, bochner_integral(f)))
        rhs = float(np.sum(scalarize(f, functional).values) * grid.cell_volume)
        print(f"{tag.value}: <v*, int f> = {lhs:+.10f}   int <v*, f> = {rhs:+.10f}")

print()
print("== extreme points realize the dual pairing norm ==")
w = rng.normal(size=3)
for tag in (NormTag.L1, NormTag.LINF):
    sup = max(float(np.dot(v.coeffs, w)) for v in dual_ball_extreme_points(tag, 3))
    print(f"{tag.value}: sup over dual extreme points = {sup:.6f}, ||w|| = {value_norm(w, tag):.6f}")
