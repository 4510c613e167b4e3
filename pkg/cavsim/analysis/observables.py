# file: cavsim/analysis/observables.py
"""
Observáveis físicos das trajetórias.

Fluxo de fótons a partir da população da cavidade, fluxo espectral (projeção
de Poynting das amplitudes do reservatório), espectro de saída e as métricas
de descasamento usadas nas comparações entre representações.
"""

import itertools
import math
from dataclasses import dataclass
from typing import Dict, Literal, Optional, Sequence, Union

import numpy as np
import pandas as pd
from scipy.integrate import cumulative_trapezoid

from core.continuum_grid import Spectrum, espectro_vazio, estado_estacionario, spectral_density
from core.units_and_setup import C_LUZ, ScenarioConfig
from dynamics.master_equation import F0, integrar_mestra
from dynamics.representations import Trajectory, integrate
from optics.couplings import kappa_discreto
from utils.cavsim_logger import log_info, log_warning
from utils.excecoes import ErroDominio

__all__ = [
    "FluxSeries",
    "Spectrum",
    "flux_from_population",
    "spectral_flux",
    "outgoing_spectrum",
    "relative_l2",
    "peak_shift",
    "photon_number_three_ways",
]

Normalizacao = Literal["area", "pico"]


@dataclass(frozen=True)
class FluxSeries:
    """Fluxo Φ(t) e número acumulado n(t) = ∫Φ."""

    t: np.ndarray
    flux: np.ndarray
    n: np.ndarray

    @property
    def n_final(self) -> float:
        return float(self.n[-1]) if self.n.size else 0.0

    def para_dataframe(self) -> pd.DataFrame:
        return pd.DataFrame({"t": self.t, "flux": self.flux, "n": self.n})


def flux_from_population(trajectory: Trajectory) -> FluxSeries:
    """Φ(t) = Γ_c P_{f,1}(t); n(t) pela integral cumulativa do trapézio."""
    populacao = trajectory.P_photon
    if populacao is None:
        raise ErroDominio(f"o modelo '{trajectory.modelo}' não possui população de fóton na cavidade")
    fluxo = trajectory.cenario.cavity.Gamma_c * populacao
    if trajectory.vazia:
        return FluxSeries(np.zeros(0), np.zeros(0), np.zeros(0))
    numero = cumulative_trapezoid(fluxo, trajectory.tempos, initial=0.0)
    return FluxSeries(t=trajectory.tempos.copy(), flux=fluxo, n=numero)


def _indices_registrados(trajectory: Trajectory, t: Optional[Union[float, Sequence[float]]]) -> np.ndarray:
    if t is None:
        return np.arange(trajectory.tempos.size)
    alvos = np.atleast_1d(np.asarray(t, dtype=float))
    return np.array([int(np.argmin(np.abs(trajectory.tempos - alvo))) for alvo in alvos], dtype=int)


def spectral_flux(
    trajectory: Trajectory,
    x: float,
    t: Optional[Union[float, Sequence[float]]] = None,
) -> np.ndarray:
    """
    Fluxo no ponto x fora da cavidade a partir das amplitudes do reservatório.

    Φ(x, t) = |(1/√Γ_c) Σ_i κ̃*_i e^{iν_i x/c} 𝐜_i(t)|², com ν_i a frequência
    do modo i no referencial girante. Para x além do alcance do núcleo
    reproduz Γ_c P_{f,1}(t − x/c).

    Args:
        trajectory: trajetória da representação dentro–fora.
        x: posição de observação (> 0).
        t: instantes (usa o registro mais próximo); padrão, todos.

    Raises:
        ErroDominio: x ≤ 0, modelo diferente de "inout" ou Γ_c = 0.
    """
    if x <= 0:
        raise ErroDominio(f"x={x}: a expressão do campo externo só vale fora da cavidade (x > 0)")
    if trajectory.modelo != "inout":
        raise ErroDominio("o fluxo espectral exige a trajetória dentro–fora")
    cenario = trajectory.cenario
    gamma = cenario.cavity.Gamma_c
    if gamma <= 0:
        raise ErroDominio("Gamma_c = 0: o fluxo espectral não está definido")
    if trajectory.vazia:
        return np.zeros(0)

    grid = trajectory.grid
    frequencias = cenario.atom.Delta - cenario.atom.Delta_c + grid.detunings
    projecao = np.conj(kappa_discreto(grid, cenario.cavity)) * np.exp(1j * frequencias * x / C_LUZ)
    indices = _indices_registrados(trajectory, t)
    amplitudes = trajectory.estados[indices, 3:]
    campo = amplitudes @ projecao / math.sqrt(gamma)
    return np.abs(campo) ** 2


def comparar_fluxo_poynting(trajectory: Trajectory, x: float = 1.0, margem: float = 1.0) -> float:
    """
    Distância L² relativa entre Φ(x, t) e Γ_c P_{f,1}(t − x/c) em t ∈ [x/c + margem, t_f].
    """
    fluxo = spectral_flux(trajectory, x)
    tempos = trajectory.tempos
    retardado = trajectory.cenario.cavity.Gamma_c * np.interp(
        tempos - x / C_LUZ, tempos, trajectory.P_photon, left=0.0, right=0.0
    )
    selecao = tempos >= trajectory.cenario.t0 + x / C_LUZ + margem
    if np.count_nonzero(selecao) < 2:
        raise ErroDominio(f"janela sem pontos após o transiente para x={x}")
    referencia = np.linalg.norm(retardado[selecao])
    if referencia == 0:
        return float(np.linalg.norm(fluxo[selecao]))
    return float(np.linalg.norm(fluxo[selecao] - retardado[selecao]) / referencia)


def outgoing_spectrum(trajectory: Trajectory, t_f: Optional[float] = None) -> Spectrum:
    """
    Espectro |𝐜(ω, t_f)|² do contínuo (modos verdadeiros ou reservatório externo).

    O aviso de regime estacionário é anexado quando |d/dt Σ|𝐜|²| não cai abaixo
    do limiar no último intervalo antes de t_f.
    """
    if trajectory.modelo not in ("true", "inout"):
        raise ErroDominio(f"o modelo '{trajectory.modelo}' não possui amplitudes de contínuo")
    if trajectory.vazia:
        return espectro_vazio()
    indice = int(_indices_registrados(trajectory, t_f)[-1]) if t_f is not None else trajectory.tempos.size - 1
    espectro = spectral_density(trajectory.amplitudes(indice), trajectory.grid)
    atingido, taxa = estado_estacionario(
        trajectory.tempos[: indice + 1], trajectory.reservoir_norm[: indice + 1]
    )
    if not atingido:
        aviso = f"regime estacionário não atingido em t={trajectory.tempos[indice]:.4g} (taxa {taxa:.2e})"
        log_warning(f"[OBSERVAVEIS] {trajectory.cenario.name}/{trajectory.modelo}: {aviso}")
        espectro = espectro.com_avisos(aviso)
    return espectro


def _valores(espectro: Union[Spectrum, np.ndarray]) -> np.ndarray:
    if isinstance(espectro, Spectrum):
        return np.asarray(espectro.density, dtype=float)
    return np.asarray(espectro, dtype=float)


def _normalizar(valores: np.ndarray, normalizacao: Normalizacao) -> np.ndarray:
    escala = np.sum(valores) if normalizacao == "area" else np.max(valores)
    if escala <= 0:
        raise ErroDominio("espectro nulo não pode ser normalizado")
    return valores / escala


def relative_l2(
    a: Union[Spectrum, np.ndarray],
    b: Union[Spectrum, np.ndarray],
    normalizacao: Normalizacao = "area",
) -> float:
    """‖â − b̂‖₂/‖b̂‖₂ após normalizar cada curva por área unitária ou pelo pico."""
    if isinstance(a, Spectrum) and isinstance(b, Spectrum) and not np.array_equal(a.omega, b.omega):
        raise ErroDominio("espectros em grades diferentes não podem ser comparados")
    va, vb = _valores(a), _valores(b)
    if va.shape != vb.shape:
        raise ErroDominio(f"tamanhos incompatíveis: {va.shape} e {vb.shape}")
    na, nb = _normalizar(va, normalizacao), _normalizar(vb, normalizacao)
    return float(np.linalg.norm(na - nb) / np.linalg.norm(nb))


def peak_shift(spectrum: Spectrum, omega_c: float) -> float:
    """Posição do pico (ajuste parabólico de três pontos em torno do máximo) menos ω_c."""
    if spectrum.vazio:
        raise ErroDominio("espectro vazio não possui pico")
    densidade = spectrum.density
    indice = int(np.argmax(densidade))
    pico = float(spectrum.omega[indice])
    if 0 < indice < densidade.size - 1:
        esquerda, centro, direita = densidade[indice - 1: indice + 2]
        curvatura = esquerda - 2.0 * centro + direita
        if curvatura < 0:
            passo = spectrum.omega[indice + 1] - spectrum.omega[indice]
            pico += 0.5 * (esquerda - direita) / curvatura * passo
    return pico - omega_c


def metricas_descasamento(espectros: Dict[str, Spectrum], omega_c: float) -> pd.DataFrame:
    """Linhas por par de modelos (L² por área e por pico) e por modelo (deslocamento do pico)."""
    linhas = []
    for (nome_a, a), (nome_b, b) in itertools.combinations(espectros.items(), 2):
        linhas.append({"metric": "l2_area", "a": nome_a, "b": nome_b, "value": relative_l2(a, b, "area")})
        linhas.append({"metric": "l2_peak", "a": nome_a, "b": nome_b, "value": relative_l2(a, b, "pico")})
    for nome, espectro in espectros.items():
        linhas.append({"metric": "peak_shift", "a": nome, "b": "", "value": peak_shift(espectro, omega_c)})
    return pd.DataFrame(linhas, columns=["metric", "a", "b", "value"])


def perfil_temporal(referencia: Trajectory, outra: Trajectory) -> float:
    """L² relativa entre os perfis P_{f,1}(t), interpolando `outra` nos instantes de `referencia`."""
    if referencia.P_photon is None or outra.P_photon is None:
        raise ErroDominio("ambas as trajetórias devem ter população de fóton na cavidade")
    if referencia.vazia or outra.vazia:
        return 0.0
    interpolada = np.interp(referencia.tempos, outra.tempos, outra.P_photon)
    norma = np.linalg.norm(referencia.P_photon)
    if norma == 0:
        return float(np.linalg.norm(interpolada))
    return float(np.linalg.norm(interpolada - referencia.P_photon) / norma)


def balanco_espectral(trajectory: Trajectory, espectro: Spectrum) -> float:
    """∫P dω − (1 − P_g − P_e − P_{f,1}) no instante final."""
    restante = 1.0 - trajectory.P_g[-1] - trajectory.P_e[-1]
    if trajectory.P_photon is not None:
        restante -= trajectory.P_photon[-1]
    return espectro.integral - float(restante)


@dataclass(frozen=True)
class NumeroFotons:
    """n(t) por três caminhos independentes, nos instantes do pseudo-modo."""

    t: np.ndarray
    pseudo: np.ndarray
    mestra: np.ndarray
    dentro_fora: np.ndarray

    @property
    def maior_diferenca(self) -> float:
        if self.t.size == 0:
            return 0.0
        pares = ((self.pseudo, self.mestra), (self.pseudo, self.dentro_fora), (self.mestra, self.dentro_fora))
        return float(max(np.max(np.abs(a - b)) for a, b in pares))

    def para_dataframe(self) -> pd.DataFrame:
        return pd.DataFrame({"t": self.t, "n_pseudo": self.pseudo, "n_master": self.mestra, "n_inout": self.dentro_fora})


def photon_number_three_ways(cenario: ScenarioConfig) -> NumeroFotons:
    """
    n(t) pelo fluxo do pseudo-modo (Γ_c∫P_{f,1}), por ρ₄₄ da equação mestra e
    pela norma do reservatório da representação dentro–fora.
    """
    pseudo = integrate("pseudo", cenario)
    if pseudo.vazia:
        vazio = np.zeros(0)
        return NumeroFotons(vazio, vazio, vazio.copy(), vazio.copy())
    mestra = integrar_mestra(cenario)
    dentro_fora = integrate("inout", cenario)

    numero_pseudo = flux_from_population(pseudo).n
    numero_mestra = np.interp(pseudo.tempos, mestra.tempos, mestra.populacoes[:, F0])
    numero_reservatorio = np.interp(pseudo.tempos, dentro_fora.tempos, dentro_fora.reservoir_norm)
    resultado = NumeroFotons(pseudo.tempos.copy(), numero_pseudo, numero_mestra, numero_reservatorio)
    log_info(
        f"[OBSERVAVEIS] {cenario.name}: n(∞) pseudo={numero_pseudo[-1]:.6f}, "
        f"mestra={numero_mestra[-1]:.6f}, dentro–fora={numero_reservatorio[-1]:.6f}"
    )
    return resultado

