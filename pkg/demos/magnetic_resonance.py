# Spin flip at magnetic resonance.
#
# g = 2, constant field Hz = -0.5 and a rotating field of amplitude H = 0.1.
# Resonance sits at Omega = -g Hz = 1, where the spin turns over completely
# with angular rate g H.
import math

import numpy as np

from spinrotor.pauli import (
    PauliConfig,
    SpinVector,
    analytic_resonant_solution,
    integrate_spin,
    max_flip_depth,
    resonance_frequency,
    to_lab_frame,
)

cfg = PauliConfig(g=2.0, H=0.1, Hz=-0.5, Omega=1.0)
print("resonance frequency:", resonance_frequency(cfg))

half_period = math.pi / cfg.rabi
run = integrate_spin(SpinVector(0, 0, 1), cfg, 2 * half_period, dt=0.01)
exact = analytic_resonant_solution(run.t, cfg)
print(f"s3 at t = pi/(gH) = {half_period:.4f}:", run.s[np.argmin(abs(run.t - half_period)), 2])
print("max deviation from the analytic solution:", np.abs(run.s - exact.s).max())
print("max norm drift:", np.abs(run.norms - 1).max())

# In the lab the transverse spin also precesses with the field
lab = to_lab_frame(run, cfg.Omega)
for k in range(0, len(lab), len(lab) // 8):
    t, (s1, s2, s3) = lab.t[k], lab.s[k]
    print(f"  t={t:7.3f}  s=({s1:+.3f}, {s2:+.3f}, {s3:+.3f})")

# Detuning reduces the swing: scan Omega around resonance
print("\nflip depth 1 - min s3 versus Omega:")
for w in np.linspace(0.8, 1.2, 9):
    depth = max_flip_depth(PauliConfig(2.0, 0.1, -0.5, w), 10 * math.pi, 0.05)
    print(f"  Omega={w:.2f}  depth={depth:.4f}  " + "#" * int(20 * depth))
