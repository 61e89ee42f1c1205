"""Single-atom lambda-system model.

Two routes to the same physics live here: the analytic weak-signal coherence
of the driven three-level atom, and a full master-equation steady state that
serves as its numerical oracle (and as the forward model whenever ground-state
population exchange makes the analytic route unavailable).

Level ordering is (a, b, c) = (excited, signal ground, pump ground).
All rates and detunings are angular frequencies in rad/s.
"""

import dataclasses
from dataclasses import dataclass, field

import numpy as np

from .errors import PoleError, SingularLiouvillian, ValidityError

#: |i*gamma_bc + delta2| below this is treated as an exact pole of the
#: analytic coherence.
POLE_THRESHOLD = 1e-30

#: Relative singular-value cutoff for declaring the steady state degenerate.
_DEGENERACY_RTOL = 1e-12

_HERMITICITY_TOL = 1e-12
_TRACE_TOL = 1e-12
_POPULATION_SLACK = 1e-9


@dataclass(frozen=True)
class LambdaSystem:
    """All rates, detunings and couplings of the three-level atom.

    omega_b / omega_c are the signal / pump Rabi frequencies (real,
    non-negative; only |omega_c|^2 enters the response).  delta_pump is the
    pump detuning and delta2 the two-photon detuning, so the signal detuning
    is delta_pump - delta2.  gamma_b_decay / gamma_c_decay are spontaneous
    emission rates from the excited state into b and c, gamma_bc is pure
    dephasing of the ground-state coherence and gamma_pe the symmetric
    population-exchange rate between the ground states.
    """

    omega_b: float
    omega_c: float
    delta_pump: float = 0.0
    delta2: float = 0.0
    gamma_b_decay: float = 0.0
    gamma_c_decay: float = 0.0
    gamma_bc: float = 0.0
    gamma_pe: float = 0.0
    #: Explicit override of the weak-signal validity check.
    allow_strong_signal: bool = field(default=False, compare=False)

    def __post_init__(self):
        for name in ("omega_b", "omega_c", "gamma_b_decay", "gamma_c_decay",
                     "gamma_bc", "gamma_pe"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be non-negative")
        if self.gamma_total <= 0:
            raise ValueError("gamma_b_decay + gamma_c_decay must be positive")

    @property
    def gamma_total(self):
        """Excited-state decay rate Gamma = Gamma_b + Gamma_c."""
        return self.gamma_b_decay + self.gamma_c_decay

    def check_weak_signal(self):
        """Reject signals too strong for linear response, unless overridden."""
        if self.allow_strong_signal:
            return
        if abs(self.omega_b) > abs(self.omega_c) / 5.0:
            raise ValidityError(
                "weak-signal precondition |omega_b| <= |omega_c|/5 violated "
                f"(omega_b={self.omega_b:.4g}, omega_c={self.omega_c:.4g}); "
                "set allow_strong_signal to override"
            )


@dataclass(frozen=True)
class DensityMatrix3:
    """Validated 3x3 density matrix over the basis (a, b, c)."""

    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        if m.shape != (3, 3):
            raise ValueError("density matrix must be 3x3")
        object.__setattr__(self, "matrix", m)
        scale = max(np.abs(m).max(), 1.0)
        if np.abs(m - m.conj().T).max() > _HERMITICITY_TOL * scale:
            raise ValueError("density matrix is not Hermitian")
        if abs(np.trace(m) - 1.0) > _TRACE_TOL:
            raise ValueError("density matrix trace is not 1")
        pops = np.real(np.diag(m))
        if pops.min() < -_POPULATION_SLACK or pops.max() > 1.0 + _POPULATION_SLACK:
            raise ValueError("populations outside [0, 1]")

    @property
    def rho_ab(self):
        return self.matrix[0, 1]

    @property
    def rho_bc(self):
        return self.matrix[1, 2]

    @property
    def populations(self):
        return np.real(np.diag(self.matrix))


def linear_coherence(sys: LambdaSystem) -> complex:
    """Weak-signal optical coherence rho_ab of the driven lambda system.

    rho_ab = omega_b / (Delta - delta2 + |omega_c|^2/(i*gamma_bc + delta2)
             - i*Gamma/2)

    Raises PoleError at the dark-resonance pole (gamma_bc = delta2 = 0) and
    ValidityError when the weak-signal precondition fails.
    """
    sys.check_weak_signal()
    inner = 1j * sys.gamma_bc + sys.delta2
    if abs(inner) < POLE_THRESHOLD:
        raise PoleError("i*gamma_bc + delta2 is numerically zero")
    denom = (sys.delta_pump - sys.delta2 + sys.omega_c**2 / inner
             - 0.5j * sys.gamma_total)
    value = sys.omega_b / denom
    if not np.isfinite(value):
        raise PoleError("coherence evaluated at a pole")
    return complex(value)


def _hamiltonian(sys: LambdaSystem, delta_pump: float) -> np.ndarray:
    """Rotating-frame Hamiltonian (units of rad/s, hbar = 1)."""
    delta_signal = delta_pump - sys.delta2
    h = np.zeros((3, 3), dtype=complex)
    h[0, 0] = delta_signal
    h[2, 2] = -sys.delta2
    h[0, 1] = h[1, 0] = -sys.omega_b
    h[0, 2] = h[2, 0] = -sys.omega_c
    return h


def _collapse_operators(sys: LambdaSystem):
    ops = [
        np.sqrt(sys.gamma_b_decay) * np.array([[0, 0, 0], [1, 0, 0], [0, 0, 0]], complex),
        np.sqrt(sys.gamma_c_decay) * np.array([[0, 0, 0], [0, 0, 0], [1, 0, 0]], complex),
    ]
    if sys.gamma_pe > 0:
        # Symmetric incoherent exchange b <-> c; the Lindblad terms also damp
        # rho_bc at gamma_pe in total.
        ops.append(np.sqrt(sys.gamma_pe) * np.array([[0, 0, 0], [0, 0, 1], [0, 0, 0]], complex))
        ops.append(np.sqrt(sys.gamma_pe) * np.array([[0, 0, 0], [0, 0, 0], [0, 1, 0]], complex))
    return ops


def liouvillian_parts(sys: LambdaSystem):
    """Split the 9x9 Liouvillian as L(Delta) = L0 + Delta * L1.

    The pump detuning enters the Hamiltonian linearly (through the signal
    detuning Delta - delta2), so velocity averaging can reuse a single
    decomposition for every velocity class.
    """
    eye = np.eye(3)

    def ham_super(h):
        return -1j * (np.kron(h, eye) - np.kron(eye, h.T))

    l0 = ham_super(_hamiltonian(sys, 0.0))
    for op in _collapse_operators(sys):
        op_dag = op.conj().T
        anti = op_dag @ op
        l0 += (np.kron(op, op.conj())
               - 0.5 * (np.kron(anti, eye) + np.kron(eye, anti.T)))
    if sys.gamma_bc > 0:
        # Pure dephasing acts on rho_bc alone; modelling it as a projector
        # Lindbladian would leak extra damping onto the optical coherences
        # and break agreement with the analytic weak-signal formula.
        damp = np.zeros((9, 9), dtype=complex)
        damp[1 * 3 + 2, 1 * 3 + 2] = -sys.gamma_bc
        damp[2 * 3 + 1, 2 * 3 + 1] = -sys.gamma_bc
        l0 += damp

    l1 = np.zeros((9, 9), dtype=complex)
    # d/dDelta of the Hamiltonian term: only H[0,0] moves.
    l1[0:3, 0:3] -= 1j * np.eye(3)
    for j in range(3):
        l1[j * 3, j * 3] += 1j
    return l0, l1


_TRACE_ROW = np.zeros(9, dtype=complex)
_TRACE_ROW[[0, 4, 8]] = 1.0


def _solve_steady(matrix):
    a = matrix.copy()
    a[..., 0, :] = _TRACE_ROW
    rhs = np.zeros(matrix.shape[:-2] + (9, 1), dtype=complex)
    rhs[..., 0, 0] = 1.0
    try:
        rho = np.linalg.solve(a, rhs)
    except np.linalg.LinAlgError as exc:
        raise SingularLiouvillian(str(exc)) from None
    return rho[..., 0].reshape(matrix.shape[:-2] + (3, 3))


def bloch_steady_state(sys: LambdaSystem) -> DensityMatrix3:
    """Unique stationary state of the master equation.

    Solves the dense 9x9 system with the trace condition replacing one row.
    Raises SingularLiouvillian when the stationary manifold is degenerate
    (e.g. no field and no relaxation connecting the ground states).
    """
    l0, l1 = liouvillian_parts(sys)
    a = l0 + sys.delta_pump * l1
    a_mod = a.copy()
    a_mod[0, :] = _TRACE_ROW
    sv = np.linalg.svd(a_mod, compute_uv=False)
    if sv[-1] < _DEGENERACY_RTOL * sv[0]:
        raise SingularLiouvillian(
            "stationary state is degenerate for these parameters"
        )
    rho = _solve_steady(a)
    rho = 0.5 * (rho + rho.conj().T)
    rho /= np.trace(rho).real
    return DensityMatrix3(rho)


#: Target size of the quadratic corrections controlled by the probe choice
#: in extrapolated_coherence_ratio.
_PROBE_EPSILON = 1e-6


def extrapolated_coherence_ratio(sys: LambdaSystem) -> complex:
    """Weak-probe limit of rho_ab/omega_b from the steady-state solver.

    Evaluates the full steady state at two small probe amplitudes and
    Richardson-extrapolates the O(omega_b^2) correction away.  The probe is
    chosen so that both quadratic error scales stay below ~1e-6: the
    optical-pumping ratio (omega_b/omega_c)^2 * Gamma_c/Gamma_b (population
    leaked into |c> by the probe) and the probe saturation
    omega_b^2 / (delta_signal^2 + Gamma^2/4).
    """
    if sys.omega_c <= 0 or sys.gamma_b_decay <= 0 or sys.gamma_c_decay <= 0:
        raise ValueError("needs omega_c, gamma_b_decay and gamma_c_decay > 0")
    delta_signal = sys.delta_pump - sys.delta2
    probe = min(
        sys.omega_c / 100.0,
        np.sqrt(_PROBE_EPSILON * sys.gamma_b_decay / sys.gamma_c_decay)
        * sys.omega_c,
        np.sqrt(_PROBE_EPSILON * (delta_signal**2 + 0.25 * sys.gamma_total**2)),
    )
    ratios = []
    for omega_b in (probe, 0.5 * probe):
        point = dataclasses.replace(
            sys, omega_b=omega_b, allow_strong_signal=True
        )
        ratios.append(
            steady_coherence_ab(point, np.array([sys.delta_pump]))[0] / omega_b
        )
    return complex((4.0 * ratios[1] - ratios[0]) / 3.0)


def steady_coherence_ab(sys: LambdaSystem, delta_pump: np.ndarray) -> np.ndarray:
    """rho_ab of the steady state for a batch of pump detunings.

    Vectorized path used by velocity averaging; uniqueness of the steady
    state is the caller's responsibility (gamma_bc, gamma_pe or omega_b
    positive).
    """
    delta_pump = np.atleast_1d(np.asarray(delta_pump, dtype=float))
    l0, l1 = liouvillian_parts(sys)
    stack = l0[None, :, :] + delta_pump[:, None, None] * l1[None, :, :]
    rho = _solve_steady(stack)
    return rho[:, 0, 1]
