"""Relay model: the POVM element of a successful singlet announcement.

Time-bin qubits (|0> = early, |1> = late) from both senders interfere at
a 50:50 beam splitter watched by two threshold detectors D1, D2, giving
four detector-slot channels (D1-early, D1-late, D2-early, D2-late). The
announcement kept by the protocol is the click pattern {D1-early and
D2-late, nothing else}; any click outside it discards the event. Each
channel dark-fires independently with probability p_d per slot.

Loss and detector efficiency enter as one per-arm survival probability
eta_arm = eta_d * 10^(-loss_db/20): the configured loss_db is the total
sender-to-sender budget, split evenly between the two arms, with the
detector efficiency folded in. Misalignment rotates Bob's qubit by theta
with sin^2(theta) = e_d before interference.

With p_d = 0, e_d = 0 the construction reduces to
M = (eta_arm^2 / 2) |psi-><psi-|, the lossy singlet filter.
"""

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .pauli_core import PAULI_PAIRS

__all__ = [
    "ChannelParams",
    "BsmPovm",
    "TransmissionRates",
    "YieldTable",
    "PSI_MINUS",
    "build_bsm_povm",
    "transmission_rates",
    "reference_yields",
]

_ATOL = 1e-12

PSI_MINUS = np.array([0.0, 1.0, -1.0, 0.0]) / math.sqrt(2.0)

_PAULI = {
    "I": np.eye(2),
    "X": np.array([[0.0, 1.0], [1.0, 0.0]]),
    "Z": np.array([[1.0, 0.0], [0.0, -1.0]]),
}

# channel indices: 0 = D1-early, 1 = D1-late, 2 = D2-early, 3 = D2-late
_PATTERN = frozenset((0, 3))
_NON_PATTERN = frozenset((1, 2))


@dataclass(frozen=True, slots=True)
class ChannelParams:
    """Detector and line parameters of the relay link."""

    eta_d: float = 0.145
    p_d: float = 6.02e-6
    e_d: float = 0.015
    loss_db: float = 0.0
    p_za: float = 2.0 / 3.0
    p_zb: float = 2.0 / 3.0

    def __post_init__(self):
        for name in ("eta_d", "p_d", "e_d"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {v!r}")
        if self.loss_db < 0.0:
            raise ValueError("loss_db must be >= 0")
        for name in ("p_za", "p_zb"):
            v = getattr(self, name)
            if not 0.0 < v < 1.0:
                raise ValueError(f"{name} must lie in (0, 1), got {v!r}")

    @property
    def eta_arm(self):
        return self.eta_d * 10.0 ** (-self.loss_db / 20.0)


@dataclass(frozen=True, slots=True)
class BsmPovm:
    """4x4 POVM element in the |00>,|01>,|10>,|11> basis (Alice first)."""

    m: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.m, dtype=float)
        if m.shape != (4, 4):
            raise ValueError("expected a 4x4 matrix")
        if np.abs(m - m.T).max() > _ATOL:
            raise ValueError("POVM element must be Hermitian")
        eig = np.linalg.eigvalsh(m)
        if eig.min() < -_ATOL or eig.max() > 1.0 + _ATOL:
            raise ValueError(f"POVM eigenvalues out of [0, 1]: {eig}")
        object.__setattr__(self, "m", m)


@dataclass(frozen=True, slots=True)
class TransmissionRates:
    """Pauli overlaps q_{l,l'} = Tr[M sigma_l x sigma_l']/4 in PAULI_PAIRS order."""

    q: np.ndarray

    def __post_init__(self):
        q = np.asarray(self.q, dtype=float)
        if q.shape != (9,):
            raise ValueError("expected 9 transmission rates")
        # M >= 0 forces |q_{l,l'}| <= q_{I,I}
        if np.abs(q).max() > q[0] + _ATOL:
            raise ValueError("transmission rates exceed the q_II envelope")
        object.__setattr__(self, "q", q)


@dataclass(frozen=True, slots=True)
class YieldTable:
    """Announcement probabilities per setting pair, SETTING_PAIRS order."""

    y: np.ndarray

    def __post_init__(self):
        y = np.asarray(self.y, dtype=float)
        if y.shape != (9,):
            raise ValueError("expected 9 yields")
        if y.min() < 0.0 or y.max() > 1.0:
            raise ValueError("yields must lie in [0, 1]")
        object.__setattr__(self, "y", y)


def _accept_weight(occupied, p_d):
    # probability that exactly the accepted pattern clicks, given the set
    # of channels holding at least one photon
    if not occupied <= _PATTERN:
        return 0.0
    missing = len(_PATTERN - occupied)
    return p_d**missing * (1.0 - p_d) ** 2


def _two_photon_map():
    # isometry from |t_A, t_B> to the 10 symmetric two-photon mode states
    pairs = [(m, n) for m in range(4) for n in range(m, 4)]
    amp_a = np.zeros((2, 4))
    amp_b = np.zeros((2, 4))
    for t in range(2):
        amp_a[t, t] = 1.0 / math.sqrt(2.0)       # D1 port
        amp_a[t, 2 + t] = 1.0 / math.sqrt(2.0)   # D2 port
        amp_b[t, t] = 1.0 / math.sqrt(2.0)
        amp_b[t, 2 + t] = -1.0 / math.sqrt(2.0)  # beam-splitter sign
    iso = np.zeros((10, 4))
    for col, (ta, tb) in enumerate(((0, 0), (0, 1), (1, 0), (1, 1))):
        for row, (m, n) in enumerate(pairs):
            if m == n:
                iso[row, col] = math.sqrt(2.0) * amp_a[ta, m] * amp_b[tb, m]
            else:
                iso[row, col] = amp_a[ta, m] * amp_b[tb, n] + amp_a[ta, n] * amp_b[tb, m]
    return pairs, iso, amp_a, amp_b


def build_bsm_povm(params):
    """Assemble the 4x4 singlet-announcement POVM element for given params."""
    eta = params.eta_arm
    p_d = params.p_d

    pairs, iso, amp_a, amp_b = _two_photon_map()
    w2 = np.array(
        [_accept_weight(frozenset((m, n)), p_d) for m, n in pairs]
    )
    m_both = iso.T @ (w2[:, None] * iso)

    w1 = np.array([_accept_weight(frozenset((c,)), p_d) for c in range(4)])
    m_alice = amp_a @ (w1[:, None] * amp_a.T)
    m_bob = amp_b @ (w1[:, None] * amp_b.T)

    p_vac = p_d * p_d * (1.0 - p_d) ** 2

    m = (
        eta * eta * m_both
        + eta * (1.0 - eta) * np.kron(m_alice, np.eye(2))
        + (1.0 - eta) * eta * np.kron(np.eye(2), m_bob)
        + (1.0 - eta) ** 2 * p_vac * np.eye(4)
    )

    s = math.sqrt(params.e_d)
    c = math.sqrt(1.0 - params.e_d)
    rot = np.array([[c, -s], [s, c]])
    iu = np.kron(np.eye(2), rot)
    return BsmPovm(iu.T @ m @ iu)


def transmission_rates(povm):
    """Project the POVM element onto the 9 two-qubit Pauli operators."""
    q = np.array(
        [np.trace(povm.m @ np.kron(_PAULI[l], _PAULI[lp])).real / 4.0
         for l, lp in PAULI_PAIRS]
    )
    return TransmissionRates(q)


def reference_yields(s_matrix, rates):
    """Yields of the reference setting pairs, Y = S q, clamped to [0, 1]."""
    raw = s_matrix @ rates.q
    clamped = np.clip(raw, 0.0, 1.0)
    worst = np.abs(raw - clamped).max()
    if worst > 1e-9:
        warnings.warn(f"yield clamped by {worst:.3e}, exceeds 1e-9 dust")
    return YieldTable(clamped)
