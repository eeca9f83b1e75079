"""Phase-error estimation chain and the secret-key rate.

The pipeline receives observed (or simulated) yields for the nine setting
pairs plus a per-pair side-channel budget eps, and produces:

1. omega_ref, the singlet-error weight of the X-outcome virtual ensemble
   evaluated on reference states, via the matrix identity
   Omega_ref = f_obj . Y with f_obj = P_vir S_vir S^-1;
2. an upper bound omega_ref_upper that replaces each yield by its
   deviation bound, since the actually emitted states only promise
   fidelity sqrt(1 - eps) to the reference states;
3. omega_upper, lifting the reference-ensemble bound to the actual
   virtual ensemble through the same deviation machinery;
4. the error rates e_ZZ (announced-bit errors) and e_XX (virtual X-basis
   errors), and the key rate R = Y_ZZ [1 - h(e_XX) - f_EC h(e_ZZ)].

Normalization conventions. Yield tables hold probabilities conditioned
on the setting pair. The virtual picture draws each Z bit pair with
probability 1/4, so the phase-error denominator zeta_obs is the joint
quantity (1/4) * sum of the four ZZ yields, and Y_ZZ := zeta_obs up to
the optional sifting prefactor. A certified error rate at or beyond 1/2
carries no key; the entropy arguments are capped at 1/2, which can only
lower R.
"""

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .gbound import g_lower, g_upper
from .pauli_core import SETTING_PAIRS, ZZ_PAIR_INDICES, build_S_matrix, build_virtual

__all__ = [
    "EstimationError",
    "IllConditionedError",
    "NoSignalError",
    "SideChannelParams",
    "EstimationInputs",
    "EstimationResult",
    "build_estimation_inputs",
    "omega_ref_direct",
    "omega_ref_matrix",
    "omega_ref_upper",
    "delta_vir_lower",
    "omega_upper",
    "bit_error_rate",
    "phase_error_rate",
    "key_rate",
    "binary_entropy",
    "estimate",
]

DEFAULT_COND_CEILING = 1e8

_PAULI = {
    "I": np.eye(2),
    "X": np.array([[0.0, 1.0], [1.0, 0.0]]),
    "Z": np.array([[1.0, 0.0], [0.0, -1.0]]),
}
_AXES = ("I", "X", "Z")


class EstimationError(Exception):
    """Base class for failures of the estimation chain."""


class IllConditionedError(EstimationError):
    """The setting tomography matrix amplifies noise beyond the ceiling."""

    def __init__(self, condition_number, ceiling):
        self.condition_number = condition_number
        self.ceiling = ceiling
        super().__init__(
            f"cond(S) = {condition_number:.3e} exceeds ceiling {ceiling:.3e}"
        )


class NoSignalError(EstimationError):
    """All relevant yields vanish; error rates are undefined."""


@dataclass(frozen=True, slots=True)
class SideChannelParams:
    """Fidelity budget eps per setting pair, SETTING_PAIRS order."""

    eps: np.ndarray

    def __post_init__(self):
        eps = np.asarray(self.eps, dtype=float)
        if eps.shape != (9,):
            raise ValueError("expected 9 side-channel entries")
        if eps.min() < 0.0 or eps.max() > 1.0:
            raise ValueError("side-channel weights must lie in [0, 1]")
        object.__setattr__(self, "eps", eps)

    @classmethod
    def uniform(cls, value):
        return cls(np.full(9, float(value)))

    def anchor(self, pair_index):
        # fidelity anchor delta^L = sqrt(1 - eps) for one setting pair
        return math.sqrt(1.0 - self.eps[pair_index])


@dataclass(frozen=True, slots=True)
class EstimationInputs:
    """Everything the bound of the estimation chain consumes."""

    yields: object
    eps: SideChannelParams
    f_obj: np.ndarray
    p_vir_ensemble: object
    s_matrix: np.ndarray
    s_matrix_inverse: np.ndarray
    cond_s: float

    def __post_init__(self):
        object.__setattr__(self, "f_obj", np.asarray(self.f_obj, dtype=float))
        recomputed = (
            self.p_vir_ensemble.p_vir
            @ self.p_vir_ensemble.s_vir
            @ self.s_matrix_inverse
        )
        if np.abs(recomputed - self.f_obj).max() > 1e-10:
            raise ValueError("f_obj inconsistent with its stored factors")


@dataclass(frozen=True, slots=True)
class EstimationResult:
    omega_ref: float
    omega_ref_upper: float
    delta_vir_lower: float
    omega_upper: float
    zeta_obs: float
    e_zz: float
    e_xx: float
    key_rate: float

    def __post_init__(self):
        if self.omega_ref > self.omega_ref_upper + 1e-12:
            raise ValueError("omega_ref exceeds its upper bound")
        if self.key_rate < 0.0:
            raise ValueError("key rate must be floored at 0")


def build_estimation_inputs(ref_a, ref_b, yields, eps,
                            cond_ceiling=DEFAULT_COND_CEILING):
    """Assemble the tomography matrices and f_obj for one parameter point.

    ref_a, ref_b: the three reference states per side in SETTINGS order.
    Raises IllConditionedError when cond(S) exceeds the ceiling; the
    linear inversion amplifies yield noise by that factor.
    """
    s_matrix = build_S_matrix(ref_a, ref_b)
    cond = float(np.linalg.cond(s_matrix))
    if not math.isfinite(cond) or cond > cond_ceiling:
        raise IllConditionedError(cond, cond_ceiling)
    s_inv = np.linalg.inv(s_matrix)
    ensemble = build_virtual(ref_a[:2], ref_b[:2])
    f_obj = ensemble.p_vir @ ensemble.s_vir @ s_inv
    return EstimationInputs(yields, eps, f_obj, ensemble, s_matrix, s_inv, cond)


def _bloch_to_density(row):
    rho = np.zeros((4, 4))
    for k, (l, lp) in enumerate(((a, b) for a in _AXES for b in _AXES)):
        rho += row[k] * np.kron(_PAULI[l], _PAULI[lp])
    return rho / 4.0


def omega_ref_direct(ensemble, povm):
    """Singlet-error weight by direct trace against the virtual states.

    Oracle route: reconstructs each kept virtual state as a density
    matrix and sums p_vir * Tr[M rho].
    """
    total = 0.0
    for p, row in zip(ensemble.p_vir, ensemble.s_vir):
        total += p * float(np.trace(povm.m @ _bloch_to_density(row)))
    return total


def omega_ref_matrix(inputs, yields=None):
    """Singlet-error weight via the tomography identity f_obj . Y."""
    table = inputs.yields if yields is None else yields
    return float(inputs.f_obj @ table.y)


def omega_ref_upper(f_obj, yields, eps):
    """Worst-case omega_ref once each yield is only known up to fidelity.

    Positive coefficients take the upper deviation bound, negative ones
    the lower bound, with anchors delta^L = sqrt(1 - eps) per pair; terms
    with a zero coefficient are skipped. Floored at 0.
    """
    total = 0.0
    for k, f in enumerate(f_obj):
        if f == 0.0:
            continue
        anchor = eps.anchor(k)
        bound = g_upper(yields.y[k], anchor) if f > 0 else g_lower(yields.y[k], anchor)
        total += f * bound
    return max(total, 0.0)


def delta_vir_lower(eps):
    """Fidelity floor of the virtual source state: (1/4) sum sqrt(1 - eps_ZZ)."""
    return 0.25 * sum(eps.anchor(k) for k in ZZ_PAIR_INDICES)


def omega_upper(omega_ref_up, delta_vir_low):
    """Lift the reference-ensemble bound to the actual virtual ensemble."""
    if not 0.0 <= delta_vir_low <= 1.0:
        raise ValueError("delta_vir_lower must lie in [0, 1]")
    if omega_ref_up < 0.0:
        raise ValueError("omega_ref_upper must be >= 0")
    if omega_ref_up > 1.0:
        warnings.warn(f"omega_ref_upper = {omega_ref_up!r} clamped to 1")
        omega_ref_up = 1.0
    return g_upper(omega_ref_up, delta_vir_low)


def bit_error_rate(zz_yields):
    """Share of equal-bit announcements among the four ZZ setting pairs.

    Equal bits are errors: the kept announcement anti-correlates the raw
    bits, and Bob flips his afterwards.
    """
    zz = np.asarray(zz_yields, dtype=float)
    if zz.shape != (4,) or zz.min() < 0.0:
        raise ValueError("expected 4 nonnegative ZZ yields")
    denom = zz.sum()
    if denom <= 0.0:
        raise NoSignalError("all ZZ yields vanish")
    # order follows SETTING_PAIRS restricted to ZZ: (00, 01, 10, 11)
    return float((zz[0] + zz[3]) / denom)


def phase_error_rate(omega_up, zeta_obs):
    """Virtual X-basis error rate Omega^U / zeta_obs, clamped to [0, 1]."""
    if zeta_obs <= 0.0:
        raise NoSignalError("zeta_obs must be positive")
    return min(max(omega_up / zeta_obs, 0.0), 1.0)


def binary_entropy(p):
    """Shannon entropy of a bit, with h(0) = h(1) = 0 by continuity."""
    if not 0.0 <= p <= 1.0:
        raise ValueError("binary_entropy argument must lie in [0, 1]")
    if p == 0.0 or p == 1.0:
        return 0.0
    return -p * math.log2(p) - (1.0 - p) * math.log2(1.0 - p)


def key_rate(y_zz, e_zz, e_xx, f_ec):
    """Distillable-key lower bound Y_ZZ [1 - h(e_XX) - f_EC h(e_ZZ)], floored at 0.

    Error rates certified at or beyond 1/2 yield nothing; the entropy
    arguments are capped there, which can only lower the bound.
    """
    for name, v in (("e_zz", e_zz), ("e_xx", e_xx)):
        if not 0.0 <= v <= 1.0:
            raise ValueError(f"{name} must lie in [0, 1]")
    if y_zz < 0.0:
        raise ValueError("y_zz must be >= 0")
    if f_ec < 1.0:
        raise ValueError("f_ec must be >= 1")
    bracket = (
        1.0
        - binary_entropy(min(e_xx, 0.5))
        - f_ec * binary_entropy(min(e_zz, 0.5))
    )
    return y_zz * max(bracket, 0.0)


def estimate(inputs, f_ec=1.16, sifting_prefactor=None):
    """Run the full chain on assembled inputs and return an EstimationResult.

    sifting_prefactor: optional p_ZA * p_ZB factor on Y_ZZ; excluded by
    default since the key-rate bound is stated per ZZ-tagged pair.
    """
    omega_ref = omega_ref_matrix(inputs)
    om_ref_up = omega_ref_upper(inputs.f_obj, inputs.yields, inputs.eps)
    dv_low = delta_vir_lower(inputs.eps)
    om_up = omega_upper(om_ref_up, dv_low)

    zz = inputs.yields.y[list(ZZ_PAIR_INDICES)]
    e_zz = bit_error_rate(zz)
    zeta_obs = 0.25 * float(zz.sum())  # joint over the uniform bit pairs
    e_xx = phase_error_rate(om_up, zeta_obs)

    y_zz = zeta_obs if sifting_prefactor is None else zeta_obs * sifting_prefactor
    rate = key_rate(y_zz, e_zz, e_xx, f_ec)
    return EstimationResult(
        omega_ref=omega_ref,
        omega_ref_upper=om_ref_up,
        delta_vir_lower=dv_low,
        omega_upper=om_up,
        zeta_obs=zeta_obs,
        e_zz=e_zz,
        e_xx=e_xx,
        key_rate=rate,
    )
