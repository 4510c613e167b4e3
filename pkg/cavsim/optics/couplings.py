# file: cavsim/optics/couplings.py
"""
Funções de acoplamento em forma normalizada por g.

- η(ω): átomo–contínuo exato, via resposta T(ω) do espelho de camada única
- η̂(ω): aproximação Lorentziana de modo único
- κ_c(ω): cavidade–reservatório no limite de baixa transmissão

Convenção de fase: η e κ_c carregam o fator −i; fases globais constantes
não têm efeito observável.
"""

import math
from typing import Literal, Sequence, Union

import numpy as np
import pandas as pd
from pydantic import BaseModel, ConfigDict, model_validator

from core.continuum_grid import FrequencyGrid
from core.units_and_setup import C_LUZ, CavitySpec, ScenarioConfig
from optics.mirror_response import response_T
from utils.cavsim_logger import log_warning
from utils.excecoes import ErroConfiguracao

Frequencia = Union[float, np.ndarray]

ModoAcoplamento = Literal["exact", "lorentzian"]


class CouplingSet(BaseModel):
    """Entradas das funções de acoplamento."""

    model_config = ConfigDict(frozen=True, extra="forbid", allow_inf_nan=False)

    g: float
    cavity: CavitySpec
    x_A: float
    mode: ModoAcoplamento = "exact"

    @model_validator(mode="after")
    def _exigir_espelho_no_exato(self):
        if self.mode == "exact" and self.cavity.mirror is None:
            raise ValueError("o modo 'exact' exige cavity.mirror")
        return self

    @classmethod
    def do_cenario(cls, cenario: ScenarioConfig, mode: ModoAcoplamento = "exact") -> "CouplingSet":
        if mode == "exact" and cenario.cavity.mirror is None:
            raise ErroConfiguracao(
                f"cenário '{cenario.name}' sem cavity.mirror: use o acoplamento 'lorentzian'", campo="cavity.mirror"
            )
        return cls(g=cenario.atom.g, cavity=cenario.cavity, x_A=cenario.x_atomo, mode=mode)

    def avaliar(self, omega: Frequencia) -> Frequencia:
        """η(ω) no modo configurado."""
        if self.mode == "exact":
            return eta_exact(omega, self)
        return eta_lorentzian(omega, self)


def _escalar_ou_array(valor: np.ndarray, referencia) -> Frequencia:
    if np.ndim(referencia) == 0:
        return complex(valor)
    return valor


def eta_exact(omega: Frequencia, c: CouplingSet) -> Frequencia:
    """η(ω) = −i g √(ω/ω_c) √(L/πc) e^{iωL/c} sin(ω(x_A+L)/c) T(ω)."""
    cavidade = c.cavity
    omegas = np.asarray(omega, dtype=float)
    valor = (
        -1j * c.g
        * np.sqrt(omegas / cavidade.omega_c)
        * math.sqrt(cavidade.L / (math.pi * C_LUZ))
        * np.exp(1j * omegas * cavidade.L / C_LUZ)
        * np.sin(omegas * (c.x_A + cavidade.L) / C_LUZ)
        * response_T(omegas, cavidade)
    )
    return _escalar_ou_array(valor, omega)


def eta_lorentzian(omega: Frequencia, c: CouplingSet) -> Frequencia:
    """η̂(ω) = −i g √(Γ_c/2π) / (ω − ω_c + iΓ_c/2)."""
    cavidade = c.cavity
    omegas = np.asarray(omega, dtype=float)
    valor = -1j * c.g * math.sqrt(cavidade.Gamma_c / (2.0 * math.pi)) / (
        omegas - cavidade.omega_c + 0.5j * cavidade.Gamma_c
    )
    return _escalar_ou_array(valor, omega)


def kappa_c(omega: Frequencia, cavity: CavitySpec) -> Frequencia:
    """κ_c(ω) = −i √(Γ_c/2π) e^{−iωL/c} sinc((ω − ω_c)L/c)."""
    omegas = np.asarray(omega, dtype=float)
    argumento = (omegas - cavity.omega_c) * cavity.L / C_LUZ
    # np.sinc(x) = sin(πx)/(πx)
    valor = (
        -1j * math.sqrt(cavity.Gamma_c / (2.0 * math.pi))
        * np.exp(-1j * omegas * cavity.L / C_LUZ)
        * np.sinc(argumento / math.pi)
    )
    return _escalar_ou_array(valor, omega)


def eta_discreto(grid: FrequencyGrid, c: CouplingSet) -> np.ndarray:
    """η̃_i = √dω · η(ω_i) na grade."""
    return math.sqrt(grid.d_omega) * np.asarray(c.avaliar(grid.points))


def kappa_discreto(grid: FrequencyGrid, cavity: CavitySpec) -> np.ndarray:
    """κ̃_i = √dω · κ_c(ω_i) na grade."""
    return math.sqrt(grid.d_omega) * np.asarray(kappa_c(grid.points, cavity))


def coupling_mismatch(c: CouplingSet, span: float = 10.0, pontos: int = 4001) -> float:
    """
    Distância L² relativa entre η exato e η̂ sobre |ω − ω_c| ≤ span·Γ_c,
    após remover a fase global de cada um em ω_c.
    """
    cavidade = c.cavity
    omegas = np.linspace(cavidade.omega_c - span * cavidade.Gamma_c, cavidade.omega_c + span * cavidade.Gamma_c, pontos)
    exato_set = c.model_copy(update={"mode": "exact"})
    exato = eta_exact(omegas, exato_set)
    lorentz = eta_lorentzian(omegas, c)
    exato = exato * np.conj(_fase(eta_exact(cavidade.omega_c, exato_set)))
    lorentz = lorentz * np.conj(_fase(eta_lorentzian(cavidade.omega_c, c)))
    return float(np.linalg.norm(exato - lorentz) / np.linalg.norm(lorentz))


def _fase(valor: complex) -> complex:
    modulo = abs(valor)
    return valor / modulo if modulo > 0 else 1.0


def markov_condition(c: CouplingSet) -> float:
    """(Γ_c (x_A + L)/c)²; apenas informativo."""
    return (c.cavity.Gamma_c * (c.x_A + c.cavity.L) / C_LUZ) ** 2


def tabela_acoplamentos(c: CouplingSet, band: Sequence[float], count: int = 2001) -> pd.DataFrame:
    """Varredura para a CLI: omega, abs_eta_exact, abs_eta_lorentzian, abs_kappa."""
    omegas = np.linspace(band[0], band[1], count)
    if c.cavity.mirror is not None:
        exato = np.abs(eta_exact(omegas, c.model_copy(update={"mode": "exact"})))
    else:
        log_warning("[ACOPLAMENTO] cavidade sem espelho: coluna abs_eta_exact vazia")
        exato = np.full(count, np.nan)
    return pd.DataFrame({
        "omega": omegas,
        "abs_eta_exact": exato,
        "abs_eta_lorentzian": np.abs(eta_lorentzian(omegas, c)),
        "abs_kappa": np.abs(kappa_c(omegas, c.cavity)),
    })
