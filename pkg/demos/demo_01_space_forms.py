#!/usr/bin/env python3
"""Tour of the three space forms and the conformal charts between them.

Shows the stereographic charts, the Poincare ball factor, the null lifts into
Moebius space, and the equivariance of the group embeddings.
"""
import numpy as np

from dupin import metrics as mt
from dupin import spaceforms as sf

rng = np.random.default_rng(1)

print("=" * 64)
print("Space forms and conformal charts")
print("=" * 64)

# Round trips through the spherical chart
x = rng.normal(size=(5, 4))
x /= np.linalg.norm(x, axis=-1, keepdims=True)
y = sf.stereo(x)
back = sf.stereo_inv(y)
print(f"\nstereo round trip on 5 random S^3 points: "
      f"max error {np.max(np.abs(back - x)):.2e}")

# Hyperbolic chart onto the Poincare ball
ball = rng.normal(size=(5, 3))
ball = 0.8 * ball / np.linalg.norm(ball, axis=-1, keepdims=True)
xh = sf.hyp_stereo_inv(ball)
print(f"hyperboloid constraint <x,x>+1 on lifted ball points: "
      f"max {np.max(np.abs(mt.inner(xh, xh, mt.R31) + 1)):.2e}")
print(f"conformal factor at |y| = 0.5: {sf.poincare_factor(np.array([0.5, 0, 0])):.6f}"
      f"  (2/(1-1/4) = {8 / 3:.6f})")

# Null lifts: all three space forms land on the light cone of R^{4,1}
print("\nnull lifts <q,q> (should vanish):")
for form, pts in [("sphere", x), ("euclidean", y), ("hyperbolic", xh)]:
    q = sf.embed_moebius(pts, form)
    print(f"  f from {form:<10}: max |<q,q>| = {np.max(np.abs(mt.inner(q, q, mt.R41))):.2e}")

# Equivariance of the group embeddings
A = np.linalg.qr(rng.normal(size=(4, 4)))[0]
if np.linalg.det(A) < 0:
    A[:, 0] = -A[:, 0]
G = sf.group_embed(A, "sphere")
lifted = mt.projective_normalize(
    np.einsum("ij,...j->...i", G, sf.embed_moebius_delta(x, "sphere"))
)
target = mt.projective_normalize(
    sf.embed_moebius_delta(np.einsum("ij,...j->...i", A, x), "sphere")
)
print(f"\nSO(4) embedding: group residual {mt.group_residual(G, mt.MOEB):.2e}, "
      f"equivariance {np.max(np.abs(lifted - target)):.2e}")

g = mt.e3_matrix([0.3, -1.0, 0.2], np.eye(3))
T = sf.group_embed(g, "euclidean")
print(f"translation embedding is lower triangular with |y|^2 corner: "
      f"T[4,0] = {T[4, 0]:.4f} = |y|^2 = {0.3**2 + 1 + 0.04:.4f}")
