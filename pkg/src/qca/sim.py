"""Exact propagation under piecewise-constant controls."""

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .matcore import ShapeError, as_state

#: Default amplitude bound and maximal segment duration of the reach probe.
U_MAX = 10.0
T_MAX = 1.0


@dataclass(frozen=True, eq=False)
class PulseSequence:
    """Segments of constant control: ``durations[s]`` and ``amplitudes[s, k]``."""

    durations: np.ndarray
    amplitudes: np.ndarray

    def __post_init__(self):
        dts = np.asarray(self.durations, dtype=float).reshape(-1)
        amps = np.asarray(self.amplitudes, dtype=float)
        if dts.size == 0:
            amps = amps.reshape(0, amps.shape[-1] if amps.ndim == 2 else 0)
        if amps.ndim != 2 or amps.shape[0] != dts.size:
            raise ShapeError("amplitudes must have one row per segment")
        if np.any(dts <= 0) or not np.all(np.isfinite(dts)):
            raise ValueError("segment durations must be positive and finite")
        if not np.all(np.isfinite(amps)):
            raise ValueError("control amplitudes must be finite")
        object.__setattr__(self, "durations", dts)
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def empty(cls, m):
        return cls(np.zeros(0), np.zeros((0, m)))

    @classmethod
    def from_segments(cls, segments, m):
        """From ``[(dt, [u_1..u_m]), ...]``."""
        if not segments:
            return cls.empty(m)
        dts, amps = zip(*segments)
        return cls(np.array(dts, dtype=float), np.array(amps, dtype=float).reshape(len(dts), -1))

    def __len__(self):
        return self.durations.size

    def __add__(self, other):
        return PulseSequence(
            np.concatenate([self.durations, other.durations]),
            np.concatenate([self.amplitudes, other.amplitudes]),
        )


def _check(model, pulses):
    if len(pulses) and pulses.amplitudes.shape[1] != model.m:
        raise ShapeError(f"pulses drive {pulses.amplitudes.shape[1]} controls, model has {model.m}")


def propagate_operator(model, pulses):
    """Propagator ``X(t)`` from ``X(0) = I``: later segments multiply on the left."""
    _check(model, pulses)
    if len(pulses) == 0:
        return np.eye(model.n, dtype=complex)
    return _kernels.propagate(model.drift, np.stack(model.controls), pulses.amplitudes, pulses.durations)


def propagate_state(model, pulses, psi0):
    psi0 = as_state(psi0, model.n)
    return propagate_operator(model, pulses) @ psi0


def random_pulses(rng, m, segments, u_max=U_MAX, t_max=T_MAX):
    amps = rng.uniform(-u_max, u_max, size=(segments, m))
    # uniform on (0, t_max]
    dts = t_max * (1.0 - rng.random(segments))
    return PulseSequence(dts, amps)


def random_reach_probe(model, target, trials=1000, segments_per_trial=4, seed=0,
                       u_max=U_MAX, t_max=T_MAX, include_identity=False):
    """Best ``|<target|X e_1>|`` over random pulse sequences.

    Trial ``k`` draws from ``default_rng([seed, k])``, so results do not
    depend on the order trials run in. A low value does not refute
    pure-state controllability; sampling is not exhaustive.
    """
    if trials < 1:
        raise ValueError("trials must be at least 1")
    target = as_state(target, model.n)
    e1 = np.zeros(model.n, complex)
    e1[0] = 1.0
    best = abs(np.vdot(target, e1)) if include_identity else 0.0
    drift, controls = model.drift, np.stack(model.controls)
    for k in range(trials):
        rng = np.random.default_rng([seed, k])
        p = random_pulses(rng, model.m, segments_per_trial, u_max, t_max)
        psi = _kernels.propagate(drift, controls, p.amplitudes, p.durations)[:, 0]
        best = max(best, abs(np.vdot(target, psi)))
    return float(min(best, 1.0))


def equivalent_state_check(psi_out, target, tol=1e-9):
    """``(match, phase)`` with ``psi_out = e^{i phase} target`` when ``match``."""
    psi_out = np.asarray(psi_out, dtype=complex)
    target = np.asarray(target, dtype=complex)
    if psi_out.shape != target.shape:
        raise ShapeError("states have different dimensions")
    c = np.vdot(target, psi_out)
    match = abs(abs(c) - 1.0) <= tol
    return bool(match), float(np.angle(c)) if match else 0.0
