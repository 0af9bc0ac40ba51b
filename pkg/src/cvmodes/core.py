"""Covariance-matrix representation of multimode Gaussian optical states.

A state lives on an ordered register of modes, each identified by a
polarization (linear H/V or circular L/R), an integer number of orbital
angular momentum quanta, and a free-form tag.  Phase space is ordered
interleaved, ``(X1, Y1, X2, Y2, ...)``, with the quadrature convention
``X = (k + k^dag)/sqrt(2)``, ``Y = (k - k^dag)/(sqrt(2) i)`` so that the
vacuum variance is 1/2 per quadrature (the shot-noise unit ``SHOT_NOISE``).

All values are immutable after construction and every operation is a pure
function of its inputs, so everything here is safe to share across
concurrent workers.
"""

from dataclasses import dataclass

import numpy as np

from .errors import (
    DimensionMismatch,
    DuplicateIndex,
    DuplicateLabel,
    IndexOutOfRange,
    NonPositiveDeterminant,
    NotAPermutation,
    PhysicalityViolation,
)

SHOT_NOISE = 0.5
"""Vacuum variance per quadrature (sn)."""

TOL_SYMMETRY = 1e-10
"""Maximum tolerated absolute asymmetry of a covariance matrix."""

TOL_PHYSICALITY = 1e-9
"""Eigenvalue floor for the Heisenberg matrix cov + (i/2) Omega."""

POLARIZATIONS = ("H", "V", "L", "R")
LINEAR_POLARIZATIONS = frozenset({"H", "V"})
CIRCULAR_POLARIZATIONS = frozenset({"L", "R"})


# ---------------------------------------------------------------------------
# mode labels and registers
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ModeLabel:
    """Identity of one optical mode: polarization, OAM quanta, and a tag."""

    polarization: str
    oam: int
    tag: str

    def __post_init__(self):
        if self.polarization not in POLARIZATIONS:
            raise ValueError(
                f"polarization must be one of {POLARIZATIONS}, "
                f"got {self.polarization!r}"
            )
        if not isinstance(self.oam, (int, np.integer)) or isinstance(self.oam, bool):
            raise ValueError(f"oam must be an integer, got {self.oam!r}")
        object.__setattr__(self, "oam", int(self.oam))
        if not self.tag:
            raise ValueError("tag must be a nonempty string")

    @property
    def is_circular(self):
        return self.polarization in CIRCULAR_POLARIZATIONS

    def __str__(self):
        return f"{self.tag}[{self.polarization},{self.oam}]"


@dataclass(frozen=True)
class ModeRegister:
    """Ordered mode list; position k owns quadratures (2k, 2k+1)."""

    modes: tuple

    def __post_init__(self):
        modes = tuple(self.modes)
        object.__setattr__(self, "modes", modes)
        if len(modes) < 1:
            raise ValueError("register needs at least one mode")
        triples = [(m.polarization, m.oam, m.tag) for m in modes]
        if len(set(triples)) != len(triples):
            raise DuplicateLabel(f"register labels are not distinct: {triples}")

    def __len__(self):
        return len(self.modes)

    def __iter__(self):
        return iter(self.modes)

    def __getitem__(self, k):
        return self.modes[k]

    @property
    def tags(self):
        return tuple(m.tag for m in self.modes)

    def index(self, tag):
        """Position of the mode carrying ``tag``."""
        for k, m in enumerate(self.modes):
            if m.tag == tag:
                return k
        raise IndexOutOfRange(f"no mode tagged {tag!r} in register {self.tags}")


def two_mode_register():
    """Default register of a two-mode source: a[H,0] and b[V,0]."""
    return ModeRegister((ModeLabel("H", 0, "a"), ModeLabel("V", 0, "b")))


def symplectic_form(n):
    """Symplectic form Omega for n modes: direct sum of [[0, 1], [-1, 0]]."""
    block = np.array([[0.0, 1.0], [-1.0, 0.0]])
    out = np.zeros((2 * n, 2 * n))
    for k in range(n):
        out[2 * k: 2 * k + 2, 2 * k: 2 * k + 2] = block
    return out


# ---------------------------------------------------------------------------
# states
# ---------------------------------------------------------------------------

def _frozen_array(values, shape, what):
    arr = np.array(values, dtype=float)
    if arr.shape != shape:
        raise DimensionMismatch(f"{what} must have shape {shape}, got {arr.shape}")
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True, eq=False)
class GaussianState:
    """Gaussian state: register, quadrature mean vector, covariance matrix.

    Construction checks dimensions only.  Physicality and symmetry are
    checked by :func:`validate` (and enforced by the constructors that
    promise physical output), so that diagnostic code can still hold and
    inspect invalid matrices.
    """

    register: ModeRegister
    mean: np.ndarray
    cov: np.ndarray

    def __post_init__(self):
        n = len(self.register)
        object.__setattr__(self, "mean", _frozen_array(self.mean, (2 * n,), "mean"))
        object.__setattr__(self, "cov", _frozen_array(self.cov, (2 * n, 2 * n), "cov"))

    @property
    def n_modes(self):
        return len(self.register)

    def __eq__(self, other):
        if not isinstance(other, GaussianState):
            return NotImplemented
        return (
            self.register == other.register
            and np.array_equal(self.mean, other.mean)
            and np.array_equal(self.cov, other.cov)
        )


@dataclass(frozen=True)
class StandardFormParams:
    """Two-mode standard-form parameters (a, b, c1, c2) in shot-noise units."""

    a: float
    b: float
    c1: float
    c2: float


@dataclass(frozen=True)
class ValidityReport:
    symmetric: bool
    physical: bool
    min_heisenberg_eigenvalue: float


def vacuum_state(register):
    """Vacuum over ``register``: zero mean, cov = SHOT_NOISE * identity."""
    n = len(register)
    return GaussianState(register, np.zeros(2 * n), SHOT_NOISE * np.eye(2 * n))


def standard_form_matrix(params):
    """4x4 standard-form covariance matrix for the given parameters."""
    a, b, c1, c2 = params.a, params.b, params.c1, params.c2
    return np.array(
        [
            [a, 0.0, c1, 0.0],
            [0.0, a, 0.0, c2],
            [c1, 0.0, b, 0.0],
            [0.0, c2, 0.0, b],
        ]
    )


def make_standard_form(params, register=None):
    """Build the two-mode state with covariance in standard form.

    Parameters
    ----------
    params : StandardFormParams
        Diagonal variances ``a``, ``b`` and cross-correlations ``c1``, ``c2``.
    register : ModeRegister, optional
        Two-mode register; defaults to a[H,0], b[V,0].

    Returns
    -------
    GaussianState
        Zero-mean state with cov ``[[a,0,c1,0],[0,a,0,c2],[c1,0,b,0],[0,c2,0,b]]``.

    Raises
    ------
    PhysicalityViolation
        If the matrix violates the Heisenberg bound.
    """
    if register is None:
        register = two_mode_register()
    if len(register) != 2:
        raise DimensionMismatch("standard form is a two-mode constructor")
    cov = standard_form_matrix(params)
    state = GaussianState(register, np.zeros(4), cov)
    report = validate(state)
    if not report.physical:
        raise PhysicalityViolation(
            f"standard-form parameters {params} give an unphysical matrix "
            f"(min Heisenberg eigenvalue {report.min_heisenberg_eigenvalue:.3e})",
            min_eigenvalue=report.min_heisenberg_eigenvalue,
        )
    return state


def min_heisenberg_eigenvalue(cov):
    """Smallest eigenvalue of the Hermitian matrix cov + (i/2) Omega."""
    n = cov.shape[0] // 2
    herm = 0.5 * (cov + cov.T) + 0.5j * symplectic_form(n)
    return float(np.linalg.eigvalsh(herm)[0])


def validate(state):
    """Check symmetry and physicality of a state's covariance matrix.

    Returns a :class:`ValidityReport`; never raises on an invalid matrix
    (that is the point of the report).  ``min_heisenberg_eigenvalue`` is
    computed on the symmetrized matrix when the input is asymmetric.
    """
    n = state.n_modes
    if state.cov.shape != (2 * n, 2 * n):
        raise DimensionMismatch("cov does not match register")
    asym = float(np.abs(state.cov - state.cov.T).max())
    symmetric = asym <= TOL_SYMMETRY
    min_eig = min_heisenberg_eigenvalue(state.cov)
    physical = symmetric and min_eig >= -TOL_PHYSICALITY
    return ValidityReport(symmetric, physical, min_eig)


def _quadrature_indices(subset):
    out = []
    for m in subset:
        out.extend((2 * m, 2 * m + 1))
    return out


def _check_subset(subset, n):
    subset = [int(k) for k in subset]
    if not subset:
        raise IndexOutOfRange("mode subset is empty")
    for k in subset:
        if not 0 <= k < n:
            raise IndexOutOfRange(f"mode index {k} outside register of {n} modes")
    if len(set(subset)) != len(subset):
        raise DuplicateIndex(f"repeated mode index in {subset}")
    return subset


def reduce(state, subset):
    """Marginal state on ``subset`` of mode indices (register order kept)."""
    subset = sorted(_check_subset(subset, state.n_modes))
    idx = _quadrature_indices(subset)
    return GaussianState(
        ModeRegister(tuple(state.register[k] for k in subset)),
        state.mean[idx],
        state.cov[np.ix_(idx, idx)],
    )


def reorder(state, permutation):
    """Permute modes: position k of the result is mode ``permutation[k]``.

    Pure index shuffling, so applying the inverse permutation afterwards
    restores the input bit-exactly.
    """
    perm = [int(k) for k in permutation]
    if sorted(perm) != list(range(state.n_modes)):
        raise NotAPermutation(
            f"{permutation} is not a permutation of 0..{state.n_modes - 1}"
        )
    idx = _quadrature_indices(perm)
    return GaussianState(
        ModeRegister(tuple(state.register[k] for k in perm)),
        state.mean[idx],
        state.cov[np.ix_(idx, idx)],
    )


def mean_photon_number(state, mode_index):
    """Mean photon number of one mode.

    n_k = (Var X + Var Y + <X>^2 + <Y>^2 - 1) / 2 in shot-noise units.
    """
    k = _check_subset([mode_index], state.n_modes)[0]
    vx = state.cov[2 * k, 2 * k]
    vy = state.cov[2 * k + 1, 2 * k + 1]
    mx = state.mean[2 * k]
    my = state.mean[2 * k + 1]
    return float((vx + vy + mx * mx + my * my - 1.0) / 2.0)


def total_photon_number(state):
    """Sum of mean photon numbers over all modes."""
    return float(sum(mean_photon_number(state, k) for k in range(state.n_modes)))


def purity(state):
    """Purity mu = 1 / (2^n sqrt(det cov)), in (0, 1] for physical states."""
    sign, logdet = np.linalg.slogdet(state.cov)
    if sign <= 0:
        raise NonPositiveDeterminant(
            f"det(cov) is not positive (sign {sign}); matrix is unphysical"
        )
    n = state.n_modes
    return float(np.exp(-(n * np.log(2.0) + 0.5 * logdet)))
