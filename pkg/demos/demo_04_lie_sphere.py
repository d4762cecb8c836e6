#!/usr/bin/env python3
"""Lie sphere geometry: pencils of oriented spheres, Legendre maps, the best
frame order conditions, and the six-dimensional Dupin distribution.
"""
import numpy as np

from dupin import liesphere as ls
from dupin import metrics as mt
from dupin.frames import pullback_mc

print("=" * 64)
print("Lines on the Lie quadric and Legendre immersions")
print("=" * 64)

# A pencil: point sphere + great sphere through it
e = np.eye(6)
line = ls.make_line(e[0] + e[4], e[1] + e[5])
print(f"\npencil [eps0+eps4, eps1+eps5] residuals: {line.residuals()}")

lm = ls.example_lambda()
print("\nthe homogeneous Legendre immersion [S0(u), S1(v)]:")
print(f"  contact residual:          {ls.contact_residual(lm):.2e}")
print(f"  quadric residuals:         {max(lm.line_residuals().values()):.2e}")
rep = ls.sigma_rank_report(lm)
print(f"  spherical projection rank: second singular value "
      f"{rep['max_second_singular_value']:.2e} (singular everywhere: a curve)")
dup = ls.legendre_dupin_test(lm)
print(f"  Dupin: {dup['dupin']} (curvature sphere drift {dup['max_derivative']:.2e})")

ff = ls.example_frame()
coeffs, res = ls.best_lie_frame_check(ff)
print("\nbest Lie frame along it:")
print(f"  order residuals: {res['order1']:.2e} / {res['order2']:.2e} / {res['order3']:.2e}")
print(f"  contact form:    {res['contact']:.2e}")
print(f"  coefficients: p = q = 0, c-coefficients "
      f"({np.mean(coeffs.c2):.3f}, {np.mean(coeffs.c3):.3f}), "
      f"d-coefficients ({np.mean(coeffs.d2):.3f}, {np.mean(coeffs.d3):.3f})")
print(f"  frame stays in one right coset: log-residual "
      f"{ls.coset_membership_residual(ff):.2e}")

sub = ls.h_basis()
print(f"\nDupin distribution subalgebra: dim {sub.dim}, "
      f"closure residual {sub.closure_residual:.2e}")
X2, X3 = ls.slice_generators()
print(f"slice generators dual to theta^2, theta^3 at entries (2,1), (3,0)")

B = ls.boost(0.9)
print(f"\nboost(0.9) is diagonal in the lambda basis: {np.diag(B.round(6))}")
print(f"  group residual: {mt.group_residual(B, mt.LIE):.2e}")

s = np.linspace(-3, 3, 25)
lm_id, _ = ls.coset_orbit(np.eye(6), s, s)
rep = ls.sigma_rank_report(lm_id)
print(f"\nidentity coset: spherical projection is a great circle "
      f"(rank <= 1 everywhere, sv2 = {rep['max_second_singular_value']:.2e})")
out = ls.fig7_pipeline(1.0)
print(f"boost(1) coset: projection is a pinched surface of revolution with "
      f"{out['singular_count']} singular grid points")
