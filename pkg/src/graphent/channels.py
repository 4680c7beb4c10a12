"""Single-qubit noise channels and independent product maps.

Two per-qubit descriptions are supported: a Pauli channel given by its
probability 4-vector ``(p_I, p_X, p_Y, p_Z)``, and a general channel given by
an explicit list of 2x2 Kraus matrices.  A ``ProductChannel`` applies one of
these independently to every qubit; the strength parameter ``p`` of the
constructors plays the role of time, ``p=0`` being the initial instant and
``p=1`` the asymptotic limit.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Iterable, Sequence, Union

import numpy as np

from .exceptions import ConfigError
from .graphs import PAULI_2x2

COMPLETENESS_TOL = 1e-12

#: Kraus operators with squared Frobenius norm below this are treated as absent.
ZERO_OP_TOL = 1e-30


def _check_prob(p: float, name: str = "p") -> float:
    p = float(p)
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"{name} must lie in [0, 1], got {p}")
    return p


@dataclass(frozen=True)
class PauliQubitChannel:
    """Single-qubit Pauli channel with probabilities ``(p_I, p_X, p_Y, p_Z)``."""

    probs: tuple[float, float, float, float]

    def __post_init__(self) -> None:
        probs = tuple(float(p) for p in self.probs)
        if len(probs) != 4:
            raise ValueError(f"need 4 probabilities, got {len(probs)}")
        if min(probs) < -1e-12:
            raise ValueError(f"negative probability in {probs}")
        if abs(sum(probs) - 1.0) > 1e-12:
            raise ValueError(f"probabilities must sum to 1, got {sum(probs)!r}")
        object.__setattr__(self, "probs", probs)


class KrausQubitChannel:
    """Single-qubit channel given by explicit 2x2 Kraus matrices.

    Trace preservation is not enforced at construction so that deliberately
    broken operator sets can be fed to :func:`check_completeness`.
    """

    def __init__(self, kraus: Iterable[np.ndarray]) -> None:
        ops = tuple(np.array(k, dtype=complex) for k in kraus)
        if not ops:
            raise ValueError("need at least one Kraus operator")
        for k in ops:
            if k.shape != (2, 2):
                raise ValueError(f"Kraus operators must be 2x2, got shape {k.shape}")
        for k in ops:
            k.setflags(write=False)
        self.kraus = ops

    def __repr__(self) -> str:
        return f"KrausQubitChannel({len(self.kraus)} ops)"


QubitChannel = Union[PauliQubitChannel, KrausQubitChannel]


class ProductChannel:
    """Independent per-qubit map: one qubit channel per vertex."""

    def __init__(self, per_qubit: Iterable[QubitChannel]) -> None:
        chans = tuple(per_qubit)
        if not chans:
            raise ValueError("product channel needs at least one qubit")
        for ch in chans:
            if not isinstance(ch, (PauliQubitChannel, KrausQubitChannel)):
                raise TypeError(f"unsupported qubit channel {type(ch).__name__}")
        self.per_qubit = chans

    @classmethod
    def uniform(cls, channel: QubitChannel, n: int) -> "ProductChannel":
        return cls((channel,) * n)

    @property
    def n(self) -> int:
        return len(self.per_qubit)

    @property
    def all_pauli(self) -> bool:
        return all(isinstance(ch, PauliQubitChannel) for ch in self.per_qubit)

    def __repr__(self) -> str:
        kind = "pauli" if self.all_pauli else "general"
        return f"ProductChannel(n={self.n}, kind={kind})"


def identity_channel() -> PauliQubitChannel:
    return PauliQubitChannel((1.0, 0.0, 0.0, 0.0))


def depolarizing(p: float) -> PauliQubitChannel:
    """With probability ``p`` the qubit is replaced by the maximally mixed state."""
    p = _check_prob(p)
    return PauliQubitChannel((1.0 - p, p / 3.0, p / 3.0, p / 3.0))


def dephasing(p: float) -> PauliQubitChannel:
    """Coherence is fully lost with probability ``p``; populations untouched."""
    p = _check_prob(p)
    return PauliQubitChannel((1.0 - p / 2.0, 0.0, 0.0, p / 2.0))


def bit_flip(p: float) -> PauliQubitChannel:
    p = _check_prob(p)
    return PauliQubitChannel((1.0 - p, p, 0.0, 0.0))


def bit_phase_flip(p: float) -> PauliQubitChannel:
    p = _check_prob(p)
    return PauliQubitChannel((1.0 - p, 0.0, p, 0.0))


def diffusive_pauli(p: float) -> PauliQubitChannel:
    """Pauli form of the infinite-temperature (purely diffusive) thermal channel."""
    p = _check_prob(p)
    root = math.sqrt(1.0 - p)
    return PauliQubitChannel(
        (0.5 * (1.0 - p / 2.0 + root), p / 4.0, p / 4.0, 0.5 * (1.0 - p / 2.0 - root))
    )


def gad(nbar: float, p: float) -> KrausQubitChannel:
    """Thermal-bath (generalized amplitude damping) channel.

    ``nbar`` is the mean number of quanta in the bath and ``p`` the
    probability of exchanging a quantum with it.  ``nbar = 0`` reduces to pure
    amplitude damping, where the two heating operators vanish identically.
    """
    nbar = float(nbar)
    if nbar < 0.0:
        raise ValueError(f"mean occupation must be >= 0, got {nbar}")
    p = _check_prob(p)
    cold = math.sqrt((nbar + 1.0) / (2.0 * nbar + 1.0))
    hot = math.sqrt(nbar / (2.0 * nbar + 1.0))
    sq = math.sqrt(1.0 - p)
    sp = math.sqrt(p)
    k0 = cold * np.array([[1.0, 0.0], [0.0, sq]], dtype=complex)
    k1 = cold * sp * np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex)
    k2 = hot * np.array([[sq, 0.0], [0.0, 1.0]], dtype=complex)
    k3 = hot * sp * np.array([[0.0, 0.0], [1.0, 0.0]], dtype=complex)
    return KrausQubitChannel((k0, k1, k2, k3))


def amplitude_damping(p: float) -> KrausQubitChannel:
    """Zero-temperature dissipation: ``gad(0, p)``."""
    return gad(0.0, p)


def kraus_terms(channel: QubitChannel) -> list[tuple[int, np.ndarray]]:
    """Kraus operators of a qubit channel as ``(label, 2x2 matrix)`` pairs.

    Pauli channels yield ``sqrt(p_k) * sigma_k``.  Operators with negligible
    norm (exactly vanishing branches) are dropped.
    """
    if isinstance(channel, PauliQubitChannel):
        ops = [(k, math.sqrt(pk) * PAULI_2x2[k]) for k, pk in enumerate(channel.probs)]
    else:
        ops = list(enumerate(channel.kraus))
    return [(k, op) for k, op in ops if np.vdot(op, op).real > ZERO_OP_TOL]


def completeness_residual(channel) -> float:
    """Frobenius norm of ``sum(K^dag K) - 1`` for a channel or operator list.

    Accepts a qubit channel, a ``ProductChannel`` (worst qubit is reported),
    or a bare iterable of matrices.
    """
    if isinstance(channel, ProductChannel):
        return max(completeness_residual(ch) for ch in channel.per_qubit)
    if isinstance(channel, PauliQubitChannel):
        ops: Sequence[np.ndarray] = [op for _, op in kraus_terms(channel)]
    elif isinstance(channel, KrausQubitChannel):
        ops = channel.kraus
    else:
        ops = [np.asarray(k, dtype=complex) for k in channel]
    dim = ops[0].shape[0]
    acc = np.zeros((dim, dim), dtype=complex)
    for k in ops:
        acc += k.conj().T @ k
    return float(np.linalg.norm(acc - np.eye(dim)))


def check_completeness(channel, tol: float = COMPLETENESS_TOL) -> tuple[bool, float]:
    """Whether the Kraus set decomposes the identity, plus the residual norm."""
    residual = completeness_residual(channel)
    return residual <= tol, residual


_PAULI_KINDS = {
    "depol": depolarizing,
    "dephase": dephasing,
    "bitflip": bit_flip,
    "bitphaseflip": bit_phase_flip,
    "diffusive": diffusive_pauli,
}

_SPEC_RE = re.compile(r"^([a-z]+)((?::(?:[0-9.eE+-]+|p))+)$")


@dataclass(frozen=True)
class ChannelSpec:
    """Parsed channel spec string, e.g. ``depol:p`` or ``gad:0.5:p``.

    The literal argument ``p`` marks the strength parameter to be substituted
    at instantiation time (the swept variable of an experiment).
    """

    kind: str
    args: tuple[object, ...]  # floats or the placeholder string "p"

    @property
    def has_placeholder(self) -> bool:
        return any(a == "p" for a in self.args)

    @property
    def is_pauli(self) -> bool:
        return self.kind in _PAULI_KINDS

    def qubit_channel(self, p: float) -> QubitChannel:
        args = [p if a == "p" else a for a in self.args]
        if self.kind in _PAULI_KINDS:
            return _PAULI_KINDS[self.kind](*args)
        if self.kind == "ad":
            return amplitude_damping(*args)
        return gad(*args)

    def instantiate(self, p: float, n: int) -> ProductChannel:
        return ProductChannel.uniform(self.qubit_channel(p), n)

    def __str__(self) -> str:
        return ":".join([self.kind] + [a if a == "p" else repr(a) for a in self.args])


def parse_channel_spec(text: str) -> ChannelSpec:
    """Parse a channel spec string.

    Known kinds: ``depol:p``, ``dephase:p``, ``bitflip:p``, ``bitphaseflip:p``,
    ``diffusive:p``, ``ad:p``, ``gad:nbar:p``.  Each argument is a float or
    the placeholder letter ``p``.
    """
    m = _SPEC_RE.match(text.strip())
    if not m:
        raise ConfigError(f"malformed channel spec {text!r}")
    kind = m.group(1)
    raw = m.group(2).lstrip(":").split(":")
    args: list[object] = []
    for tok in raw:
        if tok == "p":
            args.append("p")
        else:
            try:
                args.append(float(tok))
            except ValueError:
                raise ConfigError(f"bad channel argument {tok!r} in {text!r}") from None
    expected = 2 if kind == "gad" else 1
    if kind not in _PAULI_KINDS and kind not in ("ad", "gad"):
        raise ConfigError(f"unknown channel kind {kind!r}")
    if len(args) != expected:
        raise ConfigError(f"channel {kind!r} takes {expected} argument(s), got {len(args)}")
    return ChannelSpec(kind, tuple(args))
