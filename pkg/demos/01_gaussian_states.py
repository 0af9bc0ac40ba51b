"""States, registers, and scalar diagnostics.

Walks through building Gaussian states over polarization/OAM-labeled
modes, checking physicality, and reading off photon numbers, purity,
marginals, and reorderings.
"""

import numpy as np

from cvmodes import (
    GaussianState,
    ModeLabel,
    ModeRegister,
    StandardFormParams,
    make_standard_form,
    mean_photon_number,
    purity,
    reduce,
    reorder,
    total_photon_number,
    vacuum_state,
    validate,
)

np.set_printoptions(precision=4, suppress=True)

# Every mode carries a polarization (H/V linear, L/R circular), an OAM
# order, and a tag.  The register fixes the phase-space ordering
# (X1, Y1, X2, Y2, ...).
register = ModeRegister((
    ModeLabel("H", 0, "a"),
    ModeLabel("V", 0, "b"),
))
print("register:", ", ".join(str(m) for m in register))

vac = vacuum_state(register)
print("\nvacuum covariance (shot noise 1/2 per quadrature):")
print(vac.cov)
print("vacuum purity:", purity(vac), " photons:", total_photon_number(vac))

# A two-mode squeezed state in standard form: diagonal variances a, b and
# cross-correlations c1, c2.  These numbers are the bundled source matrix.
params = StandardFormParams(a=0.72, b=0.72, c1=0.51, c2=-0.51)
state = make_standard_form(params)
print("\nstandard-form state:")
print(state.cov)

report = validate(state)
print("symmetric:", report.symmetric, " physical:", report.physical)
print("min eigenvalue of cov + (i/2) Omega:",
      f"{report.min_heisenberg_eigenvalue:+.3e}")
print("purity:", round(purity(state), 6))
print("photons per mode:",
      [round(mean_photon_number(state, k), 6) for k in range(2)],
      " total:", round(total_photon_number(state), 6))

# Pushing the correlations past what the variances allow violates the
# uncertainty relation; make_standard_form refuses to build the state.
try:
    make_standard_form(StandardFormParams(0.7, 0.7, 0.5, -0.5))
except Exception as exc:
    print("\nrejected unphysical parameters:", exc)

# Marginals and reorderings are pure bookkeeping on the matrix.
single = reduce(state, [0])
print("\nmarginal of mode a (a thermal state):")
print(single.cov)

swapped = reorder(state, [1, 0])
print("swapped register:", swapped.register.tags)
print("swap preserves purity:", np.isclose(purity(swapped), purity(state)))

# Any symmetric matrix can be wrapped and inspected, physical or not.
zero = GaussianState(register, np.zeros(4), np.zeros((4, 4)))
print("\nzero matrix physical?", validate(zero).physical,
      "(min eig", validate(zero).min_heisenberg_eigenvalue, ")")
