# From tesla and hertz to normalized units, and why the spin oscillation of
# the singular pair is invisible in practice.
from spinrotor import dirac_wave as dw

f = 100e9
electron = dw.get_particle("electron")
print(f"reduced Compton wavelength: {electron.reduced_compton:.5e} m")
print(f"field unit m^2c^2/(hbar e): {electron.critical_field:.4e} T")

# resonance for g = 2 means E0 = -Hz/Omega = 1
probe = dw.si_to_normalized(0.0, 0.0, f)
B_res = probe.Omega * electron.critical_field
print(f"Omega at {f:.0e} Hz: {probe.Omega:.4e};  resonant B_z: {B_res:.4f} T")

for B_wave in (1e-4, 1e-3, 1e-2, 1.0):
    cfg = dw.si_to_normalized(B_res, B_wave, f)
    dp = dw.derived_params(cfg)
    print(f"  B_wave={B_wave:<7g} T  ->  E0={dp.E0:.6f}  h={dp.h:.3e}")

lam = dw.lambda_ratio(f)
print(f"\nwavelength / reduced Compton wavelength = {lam:.4e}")
print(f"suppression exponent at E0=1: {dw.suppression_exponent(1.0, lam):.4e}")
print("suppression factor:", dw.suppression_factor(1.0, lam))
