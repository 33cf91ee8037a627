# Walk through the rotating-frame transform at r = 1, Omega = 0.6.
#
# Coordinates are (phi, z, t) at a fixed radius; the tangential speed r*Omega
# must stay below 1 (the speed of light in these units).
import numpy as np

from spinrotor.frame import (
    CylEvent,
    FrameParams,
    apply,
    build_transform,
    frame_spinor_operators,
    kinematic_map,
    quadratic_invariant,
    time_dilation_ratios,
)

params = FrameParams(r=1.0, Omega=0.6)
tf = build_transform(params)
np.set_printoptions(precision=4, suppress=True)
print("transform matrix acting on (phi, z, t):")
print(tf.a)
print("det =", tf.det)

# A lab event at the origin one time unit later
e = CylEvent(phi=0.0, z=0.0, t=1.0, r=1.0)
e_rot = apply(tf, e)
print("\nevent", e.vector(), "->", e_rot.vector())
print("interval r^2 phi^2 + z^2 - t^2:", quadratic_invariant(e), "->", quadratic_invariant(e_rot))

# A light ray along z stays a light ray
ray = apply(tf, CylEvent(phi=0.3, z=2.0, t=2.0, r=1.0))
print("light ray z/t after transform:", ray.z / ray.t)

print("\nclock ratios (fixed rotating point, fixed lab point):", time_dilation_ratios(params))

# A particle co-rotating with the frame is at rest there; a lab-static one is not
print("co-rotating particle  ->", kinematic_map(0.6, 0.0, params))
print("lab-static particle   ->", kinematic_map(0.0, 0.0, params))

# Approaching the light cylinder, the rotating frequency of a lab-static
# particle collapses while its apparent speed tends to 1
for rw in (0.9, 0.99, 0.999, 0.99999):
    w, v = kinematic_map(0.0, 0.0, FrameParams(1.0, rw))
    print(f"  r*Omega = {rw:<8} omega~ = {w:+.3e}  v~ = {v:.8f}")

ops = frame_spinor_operators(params)
print("\nspinor boost rapidity Phi =", ops.Phi, " rotation angle Phi1 =", ops.Phi1)
print("det P =", np.linalg.det(ops.P).real)
print("|beta P beta - exp(sum of generators)| =", ops.exp_sum_discrepancy)
