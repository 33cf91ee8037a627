# How the open conventions get fixed.
#
# The closed-form mode leaves a few choices open: the matrix representation,
# whether the shift d2 carries a 1/Omega, its sign, a factor 2 in the
# normalization and the sign of the spinor rotation in the rotating frame.
# Each is settled by putting candidates in front of a numerical referee.
from spinrotor import oracles

cal = oracles.calibrate()

print("Dirac residual for each (representation, d2 convention, sign):")
for row in cal.residual_table:
    print(f"  {row['representation']:12s} {row['d2_convention']:11s} {row['d2_sign']:+d}  {row['residual']:.3e}")
print(f"winner beats runner-up by {cal.margin:.2e}")

print("\nquadrature norm error for each normalization factor:", cal.norm_factor_errors)
print("branch -> sign of s1 at t = z = 0:", cal.branch_signs)
print("frame covariance defect for each rotation sign:", cal.rotation_sign_residuals)
print("\nselected:", cal.conventions)
