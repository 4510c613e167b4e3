# file: cavsim/core/continuum_grid.py
"""
Discretização do contínuo do reservatório.

As amplitudes discretas são adimensionais: 𝐜_i = √dω · c(ω_i, t). A densidade
espectral P(ω_i) = |𝐜_i|²/dω não depende da grade; |𝐜_i|² é a probabilidade
nativa da grade.
"""

import math
from dataclasses import dataclass, field
from typing import List, Sequence, Tuple

import numpy as np
import pandas as pd
from scipy.integrate import trapezoid

from utils.excecoes import ErroDominio

# Critério de regime estacionário: |d/dt Σ|𝐜_i|²| abaixo do limiar no último T
LIMIAR_ESTACIONARIO = 1e-6
JANELA_ESTACIONARIO = 1.0


@dataclass(frozen=True)
class FrequencyGrid:
    """Grade uniforme ω_i = centro − hw + i·dω, i = 0..count−1."""

    center: float
    half_width: float
    count: int
    points: np.ndarray = field(repr=False, compare=False)

    @property
    def d_omega(self) -> float:
        return 2.0 * self.half_width / (self.count - 1)

    @property
    def detunings(self) -> np.ndarray:
        """ω_i − centro."""
        return self.points - self.center


@dataclass(frozen=True)
class SpectralAmplitudes:
    """Amplitudes adimensionais 𝐜_i alinhadas com os pontos da grade."""

    values: np.ndarray

    @property
    def norma(self) -> float:
        return float(np.sum(np.abs(self.values) ** 2))


@dataclass(frozen=True)
class Spectrum:
    """Densidade P(ω) e probabilidade nativa |𝐜_i|²."""

    omega: np.ndarray
    density: np.ndarray
    grid_native: np.ndarray
    avisos: Tuple[str, ...] = ()

    @property
    def vazio(self) -> bool:
        return self.omega.size == 0

    @property
    def integral(self) -> float:
        """∫P dω (soma de |𝐜_i|²)."""
        return float(np.sum(self.grid_native))

    def com_avisos(self, *avisos: str) -> "Spectrum":
        return Spectrum(self.omega, self.density, self.grid_native, self.avisos + tuple(avisos))

    def para_dataframe(self) -> pd.DataFrame:
        return pd.DataFrame({
            "omega": self.omega,
            "density": self.density,
            "grid_native_prob": self.grid_native,
        })


def build_grid(center: float, half_width: float, count: int) -> FrequencyGrid:
    """
    Constrói a grade uniforme.

    Raises:
        ErroDominio: count < 3, largura não positiva ou frequências não positivas.
    """
    if count < 3:
        raise ErroDominio(f"count={count}: a grade exige ao menos 3 pontos")
    if half_width <= 0:
        raise ErroDominio(f"half_width={half_width} deve ser positivo")
    if center - half_width <= 0:
        raise ErroDominio(
            f"grade [{center - half_width:.6g}, {center + half_width:.6g}] inclui frequências não positivas"
        )
    pontos = np.linspace(center - half_width, center + half_width, count)
    return FrequencyGrid(center=float(center), half_width=float(half_width), count=int(count), points=pontos)


def grade_do_cenario(cenario) -> FrequencyGrid:
    """Grade descrita por um ScenarioConfig."""
    return build_grid(cenario.centro_grade, cenario.grid.half_width, cenario.grid.count)


def avisos_resolucao(d_omega: float, gamma_c: float, janela: float) -> List[str]:
    """Guardas de resolução: dω < Γ_c/20 e dω < 2π/(t_f − t_0)."""
    avisos = []
    if gamma_c > 0 and d_omega >= gamma_c / 20.0:
        avisos.append(
            f"d_omega={d_omega:.4g} não resolve a Lorentziana (exige < Gamma_c/20={gamma_c / 20:.4g})"
        )
    if janela > 0 and d_omega >= 2.0 * math.pi / janela:
        avisos.append(
            f"d_omega={d_omega:.4g} >= 2π/(tf−t0)={2 * math.pi / janela:.4g}: "
            f"risco de recorrência da discretização"
        )
    return avisos


def spectral_density(amps: SpectralAmplitudes, grid: FrequencyGrid) -> Spectrum:
    """Converte amplitudes discretas em densidade espectral."""
    valores = np.asarray(amps.values)
    if valores.shape != grid.points.shape:
        raise ErroDominio(
            f"amplitudes com {valores.size} pontos não alinhadas à grade de {grid.count} pontos"
        )
    nativa = np.abs(valores) ** 2
    return Spectrum(omega=grid.points.copy(), density=nativa / grid.d_omega, grid_native=nativa)


def espectro_vazio() -> Spectrum:
    vazio = np.zeros(0)
    return Spectrum(omega=vazio, density=vazio.copy(), grid_native=vazio.copy())


def estado_estacionario(
    tempos: Sequence[float],
    norma_reservatorio: Sequence[float],
    janela: float = JANELA_ESTACIONARIO,
    limiar: float = LIMIAR_ESTACIONARIO,
) -> Tuple[bool, float]:
    """
    Verifica |d/dt Σ|𝐜_i|²| < limiar sobre a última janela.

    Returns:
        (atingido, maior taxa observada na janela)
    """
    tempos = np.asarray(tempos, dtype=float)
    norma = np.asarray(norma_reservatorio, dtype=float)
    if tempos.size < 2:
        return False, math.inf
    selecao = tempos >= tempos[-1] - janela
    if np.count_nonzero(selecao) < 2:
        selecao[-2:] = True
    taxa = np.gradient(norma[selecao], tempos[selecao])
    maior = float(np.max(np.abs(taxa)))
    return maior < limiar, maior


def integral_espectral(espectro: Spectrum) -> float:
    """∫P dω pela regra do trapézio (compara com a soma nativa)."""
    if espectro.vazio:
        return 0.0
    return float(trapezoid(espectro.density, espectro.omega))
