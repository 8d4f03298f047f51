"""Wigner rotation of a moving spin-1/2 particle.

A particle moves along +z with speed beta_v. We look at it from a frame
boosted with speed beta along (-sin alpha, 0, cos alpha) and ask how much
its spin gets rotated.
"""
import math

import numpy as np

from pairboost import BoostParams, FourVector, wigner_angle, wigner_cos_closed_form, wigner_transform

# %% Build W = L^-1(Lambda p) Lambda L(p) numerically for one configuration.
bp = BoostParams(beta=0.8, beta_v=0.6, alpha=math.pi / 3)
p = FourVector(bp.gamma_v, 0.0, 0.0, bp.gamma_v * bp.beta_v)
W = wigner_transform(bp.boost(), p)
np.set_printoptions(precision=6, suppress=True)
print("W =")
print(W.matrix)

# The t row/column and the y row/column are trivial: W is a rotation about y.
rot = wigner_angle(bp.boost(), p)
print(f"omega = {rot.omega:.6f} rad, cos = {rot.cos:.12f}")
print(f"closed form cos  = {wigner_cos_closed_form(bp):.12f}")

# %% Boosting along the motion leaves the spin alone.
print("alpha = 0:", wigner_cos_closed_form(BoostParams(0.8, 0.6, 0.0)))

# %% Perpendicular boosts reproduce (g + g_v) / (1 + g g_v).
g = BoostParams(0.6, 0.6, math.pi / 2)
print("alpha = pi/2, beta = beta_v = 0.6:", wigner_cos_closed_form(g), "vs 40/41 =", 40 / 41)

# %% Close to the speed of light the angle creeps toward alpha, slowly.
for k in (3, 6, 9, 12):
    b = 1 - 10.0**-k
    c = wigner_cos_closed_form(BoostParams(b, b, math.pi / 3))
    print(f"beta = 1 - 1e-{k:<2d}  cos Omega - cos alpha = {c - 0.5:.3e}")
