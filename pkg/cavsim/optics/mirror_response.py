# file: cavsim/optics/mirror_response.py
"""
Resposta espectral do espelho de camada única e da cavidade unilateral.

Convenção: espelho perfeito em x = −L, camada dielétrica de índice n e
espessura δ em x = 0. As fórmulas aceitam escalares ou arrays de ω.
"""

import math
from dataclasses import dataclass
from typing import Iterable, List, Sequence, Tuple, Union

import numpy as np
import pandas as pd

from core.units_and_setup import C_LUZ, CavitySpec, MirrorSpec
from utils.cavsim_logger import log_debug, log_warning
from utils.excecoes import ErroConfiguracao, ErroConvergencia, ErroDominio

__all__ = [
    "MirrorSpec",
    "CavitySpec",
    "LorentzianMode",
    "fresnel_r",
    "layer_coefficients",
    "response_T",
    "lorentzian_modes",
    "finesse_and_Q",
    "reflectivity_identity",
    "lorentzian_sum_T2",
    "lorentzian_error",
    "tabela_resposta",
]

MAX_ITERACOES_PONTO_FIXO = 100
AMORTECIMENTO_PONTO_FIXO = 0.5
TOLERANCIA_PONTO_FIXO = 1e-13

Frequencia = Union[float, np.ndarray]


@dataclass(frozen=True)
class LorentzianMode:
    """Modo Lorentziano de índice m com centro ω_m e largura Γ_m."""

    m: int
    omega_m: float
    Gamma_m: float

    def __post_init__(self):
        if not self.Gamma_m > 0:
            raise ErroDominio(f"Gamma_m={self.Gamma_m} do modo {self.m} deve ser positivo")


def fresnel_r(n: float) -> float:
    """Amplitude de Fresnel r = (n−1)/(n+1)."""
    if n < 1:
        raise ErroDominio(f"índice de refração n={n} < 1")
    return (n - 1.0) / (n + 1.0)


def _exigir_positivo(omega: Frequencia):
    if np.any(np.asarray(omega) <= 0):
        raise ErroDominio("a resposta do espelho só é definida para ω > 0")


def _exigir_espelho(cavidade: CavitySpec) -> MirrorSpec:
    if cavidade.mirror is None:
        raise ErroConfiguracao(
            "a resposta exata exige o espelho da cavidade (cavity.mirror)", campo="cavity.mirror"
        )
    return cavidade.mirror


def layer_coefficients(omega: Frequencia, mirror: MirrorSpec) -> Tuple[Frequencia, Frequencia]:
    """
    Coeficientes espectrais t(ω), r(ω) da camada.

    t = (1−r²)e^{i(n−1)ωδ/c} / (1 − r²e^{2inωδ/c})
    r(ω) = e^{−iωδ/c} r(e^{2inωδ/c} − 1) / (1 − r²e^{2inωδ/c})
    """
    _exigir_positivo(omega)
    omega = np.asarray(omega, dtype=float)
    r0 = mirror.r0
    fase_dupla = np.exp(2j * mirror.n * omega * mirror.delta / C_LUZ)
    denominador = 1.0 - r0 ** 2 * fase_dupla
    t_amp = (1.0 - r0 ** 2) * np.exp(1j * (mirror.n - 1.0) * omega * mirror.delta / C_LUZ) / denominador
    r_amp = np.exp(-1j * omega * mirror.delta / C_LUZ) * r0 * (fase_dupla - 1.0) / denominador
    if t_amp.ndim == 0:
        return complex(t_amp), complex(r_amp)
    return t_amp, r_amp


def _fase_meio_camada(omega: Frequencia, mirror: MirrorSpec) -> Frequencia:
    """Fase de reflexão referida ao plano médio da camada, em [0, 2π)."""
    _, r_amp = layer_coefficients(omega, mirror)
    return np.mod(np.angle(r_amp * np.exp(1j * np.asarray(omega) * mirror.delta / C_LUZ)), 2.0 * math.pi)


def response_T(omega: Frequencia, cavity: CavitySpec) -> Frequencia:
    """Resposta exata T(ω) = t(ω) / (1 + r(ω)e^{2i(ω/c)(L+δ/2)})."""
    espelho = _exigir_espelho(cavity)
    t_amp, r_amp = layer_coefficients(omega, espelho)
    omega = np.asarray(omega, dtype=float)
    ida_e_volta = np.exp(2j * omega * (cavity.L + espelho.delta / 2.0) / C_LUZ)
    resposta = t_amp / (1.0 + r_amp * ida_e_volta)
    if np.ndim(resposta) == 0:
        return complex(resposta)
    return resposta


def _resolver_modo(cavidade: CavitySpec, m: int) -> LorentzianMode:
    """Ponto fixo amortecido de ω_m = mπc/L + (c/2L)(π − φ(ω_m))."""
    espelho = cavidade.mirror
    base = m * math.pi * C_LUZ / cavidade.L
    omega = base
    for _ in range(MAX_ITERACOES_PONTO_FIXO):
        alvo = base + C_LUZ / (2.0 * cavidade.L) * (math.pi - float(_fase_meio_camada(omega, espelho)))
        proximo = omega + AMORTECIMENTO_PONTO_FIXO * (alvo - omega)
        if abs(proximo - omega) <= TOLERANCIA_PONTO_FIXO * base:
            omega = proximo
            break
        omega = proximo
    else:
        raise ErroConvergencia(
            f"ponto fixo de omega_m não convergiu em {MAX_ITERACOES_PONTO_FIXO} iterações (modo m={m})",
            indice_modo=m,
        )
    _, r_amp = layer_coefficients(omega, espelho)
    modulo = abs(r_amp)
    if not 1e-12 < modulo < 1.0:
        raise ErroDominio(f"modo m={m}: |r(ω_m)|={modulo:.3g} não define uma ressonância")
    gamma = -C_LUZ / cavidade.L * math.log(modulo)
    return LorentzianMode(m=m, omega_m=omega, Gamma_m=gamma)


def lorentzian_modes(cavity: CavitySpec, band: Tuple[float, float]) -> List[LorentzianMode]:
    """Modos Lorentzianos com ω_m dentro da banda (ω_min, ω_max)."""
    _exigir_espelho(cavity)
    inicio, fim = band
    if inicio <= 0 or fim <= inicio:
        raise ErroDominio(f"banda inválida {band}: exige 0 < ω_min < ω_max")
    intervalo = math.pi * C_LUZ / cavity.L
    primeiro = max(1, int(math.floor(inicio / intervalo)) - 1)
    ultimo = int(math.ceil(fim / intervalo)) + 1
    modos = _modos_por_indice(cavity, range(primeiro, ultimo + 1))
    selecionados = [modo for modo in modos if inicio <= modo.omega_m <= fim]
    log_debug(f"[ESPELHO] {len(selecionados)} modos em [{inicio:.6g}, {fim:.6g}]")
    return selecionados


def finesse_and_Q(cavity: CavitySpec) -> Tuple[float, float]:
    """Finesse (πc/L)/Γ_c e fator de qualidade ω_c/Γ_c."""
    if cavity.Gamma_c <= 0:
        return math.inf, math.inf
    return cavity.free_spectral_range / cavity.Gamma_c, cavity.omega_c / cavity.Gamma_c


def reflectivity_identity(cavity: CavitySpec) -> dict:
    """
    Refletividade efetiva R = e^{−2LΓ_c/c} e transmissão |t|² = 1 − R.

    Com espelho definido, reporta também |r(ω_c)| e |t(ω_c)|² da camada.
    """
    refletividade = math.exp(-2.0 * cavity.L * cavity.Gamma_c / C_LUZ)
    resultado = {
        "R": refletividade,
        "t2": 1.0 - refletividade,
    }
    if cavity.mirror is not None:
        t_amp, r_amp = layer_coefficients(cavity.omega_c, cavity.mirror)
        resultado["abs_r_omega_c"] = abs(r_amp)
        resultado["R_espelho"] = abs(r_amp) ** 2
        resultado["t2_espelho"] = abs(t_amp) ** 2
    return resultado


def _modos_por_indice(cavidade: CavitySpec, indices: Iterable[int]) -> List[LorentzianMode]:
    """Modos resolvidos; índices onde a camada fica transparente são ignorados."""
    modos = []
    for m in indices:
        if m < 1:
            continue
        try:
            modos.append(_resolver_modo(cavidade, m))
        except (ErroConvergencia, ErroDominio) as e:
            log_debug(f"[ESPELHO] Modo m={m} ignorado: {e}")
    return modos


def lorentzian_sum_T2(omega: Frequencia, cavity: CavitySpec, neighbours: int = 5) -> Frequencia:
    """
    Soma de Lorentzianas (c/2L)Σ Γ_m/((ω−ω_m)² + Γ_m²/4).

    Para cada ω entram o modo mais próximo e `neighbours` modos de cada lado.
    """
    _exigir_espelho(cavity)
    _exigir_positivo(omega)
    omegas = np.atleast_1d(np.asarray(omega, dtype=float))
    intervalo = cavity.free_spectral_range
    mais_proximo = np.maximum(1, np.rint(omegas / intervalo).astype(int))
    indices = range(int(mais_proximo.min()) - neighbours, int(mais_proximo.max()) + neighbours + 1)

    soma = np.zeros_like(omegas)
    for modo in _modos_por_indice(cavity, indices):
        vizinho = np.abs(mais_proximo - modo.m) <= neighbours
        termo = (C_LUZ / (2.0 * cavity.L)) * modo.Gamma_m / ((omegas - modo.omega_m) ** 2 + modo.Gamma_m ** 2 / 4.0)
        soma += np.where(vizinho, termo, 0.0)

    if np.ndim(omega) == 0:
        return float(soma[0])
    return soma


def lorentzian_error(cavity: CavitySpec, span: float = 5.0, pontos: int = 2001) -> float:
    """
    Maior erro relativo entre |T(ω)|² e a Lorentziana do modo m da cavidade
    sobre |ω − ω_c| ≤ span·Γ_c.
    """
    _exigir_espelho(cavity)
    modo = _resolver_modo(cavity, cavity.m)
    omegas = np.linspace(cavity.omega_c - span * cavity.Gamma_c, cavity.omega_c + span * cavity.Gamma_c, pontos)
    exato = np.abs(response_T(omegas, cavity)) ** 2
    lorentziana = (C_LUZ / (2.0 * cavity.L)) * modo.Gamma_m / ((omegas - modo.omega_m) ** 2 + modo.Gamma_m ** 2 / 4.0)
    erro = float(np.max(np.abs(lorentziana - exato) / exato))
    if erro > 0.05:
        log_warning(f"[ESPELHO] Lorentziana única difere de |T|² em até {erro:.1%} (finesse baixa)")
    return erro


def tabela_resposta(cavity: CavitySpec, band: Sequence[float], count: int = 2001, neighbours: int = 5) -> pd.DataFrame:
    """Varredura de T(ω) para a CLI: omega, re_T, im_T, abs_T2, lorentzian_T2."""
    omegas = np.linspace(band[0], band[1], count)
    resposta = response_T(omegas, cavity)
    return pd.DataFrame({
        "omega": omegas,
        "re_T": resposta.real,
        "im_T": resposta.imag,
        "abs_T2": np.abs(resposta) ** 2,
        "lorentzian_T2": lorentzian_sum_T2(omegas, cavity, neighbours),
    })
