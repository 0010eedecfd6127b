"""Lattice model definition and dense Hamiltonian assembly.

The model is a 1D chain with asymmetric nearest-neighbour hopping
t +- gamma/2, real p-wave pairing delta, and an optional period-3 onsite
potential V_n = V sin(2 pi n / 3 + theta).  Matrices are built in the
doubled (Nambu) representation

    [[ h,      dm     ],
     [ -dm,   -h^dag  ]]

acting on the component order (a_1 ... a_L, b_1 ... b_L), with

    h[n, n+1]  = -(t + gamma/2)      dm[n, n+1] = -delta
    h[n+1, n]  = -(t - gamma/2)      dm[n+1, n] = +delta

and the onsite potential entering the particle block as +V_n and the
hole block as -V_n.  Under periodic boundaries the same amplitudes wrap
the (L, 1) bond.  Storage is dense; the target sizes (L up to a few
hundred) are dominated by dense eigensolver cost anyway.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, NonFinite, NonPositiveSize, PbcPeriodMismatch

OBC = "obc"
PBC = "pbc"


@dataclass(frozen=True)
class ModelSpec:
    """Full parameterization of the chain.

    t, gamma, delta, big_v are energies; theta is a phase in radians;
    num_sites is the number of lattice sites; boundary is "obc" or "pbc".
    """

    t: float = 1.0
    gamma: float = 0.0
    delta: float = 0.0
    big_v: float = 0.0
    theta: float = 0.0
    num_sites: int = 2
    boundary: str = OBC

    def replace(self, **kwargs) -> "ModelSpec":
        alias = {"V": "big_v", "L": "num_sites"}
        kwargs = {alias.get(k, k): v for k, v in kwargs.items()}
        return dataclasses.replace(self, **kwargs)

    def to_dict(self) -> dict:
        return {
            "t": self.t, "gamma": self.gamma, "delta": self.delta,
            "V": self.big_v, "theta": self.theta,
            "L": self.num_sites, "boundary": self.boundary,
        }

    @staticmethod
    def from_dict(d: dict) -> "ModelSpec":
        return ModelSpec(
            t=float(d.get("t", 1.0)),
            gamma=float(d.get("gamma", 0.0)),
            delta=float(d.get("delta", 0.0)),
            big_v=float(d.get("V", 0.0)),
            theta=float(d.get("theta", 0.0)),
            num_sites=int(d.get("L", 2)),
            boundary=str(d.get("boundary", OBC)).lower(),
        )


def validate_spec(spec: ModelSpec) -> ModelSpec:
    """Check the model invariants and return the spec unchanged.

    Raises NonFinite for NaN/Inf parameters, NonPositiveSize for chains
    shorter than two sites, and PbcPeriodMismatch when a periodic ring
    with V != 0 has a length that is not a multiple of 3 (the potential
    period).
    """
    for name in ("t", "gamma", "delta", "big_v", "theta"):
        x = getattr(spec, name)
        if not math.isfinite(x):
            raise NonFinite(f"parameter {name} is not finite: {x!r}")
    if spec.num_sites < 2:
        raise NonPositiveSize(f"num_sites must be >= 2, got {spec.num_sites}")
    if spec.boundary not in (OBC, PBC):
        raise ConfigError(f"boundary must be 'obc' or 'pbc', got {spec.boundary!r}")
    if spec.boundary == PBC and spec.big_v != 0.0 and spec.num_sites % 3 != 0:
        raise PbcPeriodMismatch(
            f"PBC with V != 0 requires num_sites divisible by 3, got {spec.num_sites}"
        )
    return spec


def onsite_potential(spec: ModelSpec) -> np.ndarray:
    """V_n = V sin(2 pi n / 3 + theta) on sites n = 1..L."""
    n = np.arange(1, spec.num_sites + 1)
    return spec.big_v * np.sin(2.0 * np.pi * n / 3.0 + spec.theta)


def build_single_particle(spec: ModelSpec) -> np.ndarray:
    """The L x L hopping block h (plus the onsite potential), no doubling.

    This isolates the asymmetric-hopping chain, the standard control
    system whose open-chain eigenstates all pile up at one end.
    """
    validate_spec(spec)
    L = spec.num_sites
    h = np.zeros((L, L), dtype=complex)
    fwd = -(spec.t + spec.gamma / 2.0)
    bwd = -(spec.t - spec.gamma / 2.0)
    for i in range(L - 1):
        h[i, i + 1] = fwd
        h[i + 1, i] = bwd
    if spec.boundary == PBC:
        h[L - 1, 0] += fwd
        h[0, L - 1] += bwd
    h += np.diag(onsite_potential(spec).astype(complex))
    return h


def _pairing_block(spec: ModelSpec) -> np.ndarray:
    L = spec.num_sites
    dm = np.zeros((L, L), dtype=complex)
    for i in range(L - 1):
        dm[i, i + 1] = -spec.delta
        dm[i + 1, i] = +spec.delta
    if spec.boundary == PBC:
        dm[L - 1, 0] += -spec.delta
        dm[0, L - 1] += +spec.delta
    return dm


def build_bdg(spec: ModelSpec) -> np.ndarray:
    """The 2L x 2L doubled matrix [[h, dm], [-dm, -h^dag]].

    The scalar constant produced by normal-ordering the onsite term is
    dropped; it shifts the many-body energy, not this matrix.
    """
    validate_spec(spec)
    h = build_single_particle(spec)
    dm = _pairing_block(spec)
    return np.block([[h, dm], [-dm, -h.conj().T]])
