"""Drive-renormalized lower band: Stark and Bloch-Siegert shifts, effective hopping.

The dressed band is eps_1(k) - |g_l|^2/Delta_k - |g_l|^2/Delta_bs_k with the
screened detunings of :mod:`floqex.screening`; both shifts scale exactly as
|g_l|^2 and are negative whenever the detunings are positive, so driving
lowers the occupied band. Comparators treating the exciton line as a
two-level emitter are provided for reference.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import ResonantDenominator
from .lattice import BZGrid, ModelParams, Occupation, dispersion
from .screening import screened_detuning, screened_detuning_bs, screened_detunings

# Square-lattice sanity bound: kx- and ky-curvatures of the dressed band must agree.
_CURVATURE_SYMMETRY_TOL = 1e-10


@dataclass(frozen=True)
class EffectiveBand:
    """Dressed lower-band energies and their two drive-induced components."""

    energies: np.ndarray
    stark: np.ndarray
    bs: np.ndarray

    def __post_init__(self):
        for arr in (self.energies, self.stark, self.bs):
            arr.setflags(write=False)


def effective_band(params: ModelParams, grid: BZGrid, occ: Occupation) -> EffectiveBand:
    """Dressed band over the grid; the chemical potential (a constant) is omitted."""
    g2 = params.g_l * params.g_l
    dets = screened_detunings(params, grid, occ)
    eps1 = dispersion(params, 1, (grid.kx, grid.ky))
    stark = -g2 / dets.delta
    bs = -g2 / dets.delta_bs
    return EffectiveBand(energies=eps1 + stark + bs, stark=stark, bs=bs)


def effective_hopping(band: EffectiveBand, grid: BZGrid) -> float:
    """Hopping rate extracted from the dressed-band curvature at Gamma.

    Identifies eps(k) = 2*t*(cos kx + cos ky) + const and returns
    t = -(1/2) d^2 eps / dkx^2 at Gamma via a second-order central difference
    with the mesh spacing h = 2*pi/l.
    """
    if grid.l < 16:
        raise ValueError(f"hopping extraction needs l >= 16, got l={grid.l}")
    h = 2.0 * np.pi / grid.l
    e = band.energies
    center = e[grid.gamma_index]
    curv_x = (e[grid.index(1, 0)] - 2.0 * center + e[grid.index(-1, 0)]) / (h * h)
    curv_y = (e[grid.index(0, 1)] - 2.0 * center + e[grid.index(0, -1)]) / (h * h)
    if abs(curv_x - curv_y) > _CURVATURE_SYMMETRY_TOL:
        raise ValueError(
            f"kx/ky curvature mismatch {curv_x - curv_y:.3e} exceeds "
            f"{_CURVATURE_SYMMETRY_TOL}; band is not square-symmetric"
        )
    return -0.5 * curv_x


def tla_shifts(params: ModelParams, omega_ex: float):
    """Stark and Bloch-Siegert shifts of a two-level emitter at omega_ex.

    Returns (|g_l|^2/(omega_l - omega_ex), |g_l|^2/(omega_l + omega_ex)).
    """
    g2 = params.g_l * params.g_l
    if abs(params.omega_l - omega_ex) < 1e-12:
        raise ResonantDenominator("two-level Stark shift diverges at omega_l = omega_ex")
    return g2 / (params.omega_l - omega_ex), g2 / (params.omega_l + omega_ex)


def stark_bs_ratio(params: ModelParams, grid: BZGrid, occ: Occupation, k,
                   signed: bool = False) -> float:
    """Stark-to-Bloch-Siegert shift ratio Delta_bs_k / Delta_k at momentum ``k``.

    Magnitude by default; pass ``signed=True`` for the raw value.
    """
    ratio = screened_detuning_bs(params, grid, occ, k) / screened_detuning(params, grid, occ, k)
    return ratio if signed else abs(ratio)
