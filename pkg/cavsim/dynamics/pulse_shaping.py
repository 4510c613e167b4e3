# file: cavsim/dynamics/pulse_shaping.py
"""
Modelagem do fóton por eliminação adiabática.

Mapa direto (Ω → Φ) e desenho inverso (Φ alvo → Ω) no regime de grande
dessintonia Δ ≫ Ω, g e acoplamento efetivo fraco Γ_c ≫ G, g²/Δ, com
G = −gΩ/Δ o acoplamento Raman efetivo.
"""

import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd
from pydantic import BaseModel, ConfigDict, Field, model_validator
from scipy.integrate import cumulative_trapezoid, trapezoid

from core.units_and_setup import DriveEnvelope, ScenarioConfig
from dynamics.representations import Trajectory, integrate
from utils.cavsim_logger import log_info, log_warning
from utils.excecoes import ErroDominio

# Janela padrão do alvo em unidades de T: [−2T, 3T] com 4000 amostras
JANELA_ALVO = (-2.0, 3.0)
PONTOS_ALVO = 4000

Tempos = Union[float, Sequence[float], np.ndarray]


class ShapingParams(BaseModel):
    """Parâmetros do desenho inverso; o alvo é renormalizado para ∫Φ = eta_eff."""

    model_config = ConfigDict(frozen=True, extra="forbid", allow_inf_nan=False)

    g: float
    Delta: float
    Gamma_c: float = Field(gt=0.0)
    eta_eff: float = Field(default=0.99, gt=0.0, lt=1.0)
    target_t: Optional[List[float]] = None
    target_flux: Optional[List[float]] = None

    @model_validator(mode="before")
    @classmethod
    def _renormalizar_alvo(cls, dados):
        if not isinstance(dados, dict) or dados.get("target_flux") is None:
            return dados
        tempos = np.asarray(dados.get("target_t"), dtype=float)
        fluxo = np.asarray(dados["target_flux"], dtype=float)
        if tempos.shape != fluxo.shape or tempos.size < 2:
            raise ValueError("target_t e target_flux devem ter o mesmo tamanho (>= 2)")
        if np.any(np.diff(tempos) <= 0):
            raise ValueError("target_t deve ser estritamente crescente")
        if np.any(fluxo < 0):
            raise ValueError("target_flux deve ser não negativo")
        area = trapezoid(fluxo, tempos)
        eta = dados.get("eta_eff", 0.99)
        if area > 0 and isinstance(eta, (int, float)) and 0 < eta < 1:
            fluxo = fluxo * (eta / area)
        return {**dados, "target_t": tempos.tolist(), "target_flux": fluxo.tolist()}

    @classmethod
    def do_cenario(cls, cenario: ScenarioConfig, **extras) -> "ShapingParams":
        atomo = cenario.atom
        return cls(g=atomo.g, Delta=atomo.Delta, Gamma_c=cenario.cavity.Gamma_c, **extras)

    def alvo(self) -> Tuple[np.ndarray, np.ndarray]:
        if self.target_flux is None:
            raise ErroDominio("ShapingParams sem fluxo alvo")
        return np.asarray(self.target_t), np.asarray(self.target_flux)


def _valores_bombeio(t: Tempos, drive: Union[DriveEnvelope, np.ndarray]) -> np.ndarray:
    if isinstance(drive, DriveEnvelope):
        return np.asarray(drive.avaliar(np.asarray(t, dtype=float)), dtype=float)
    return np.asarray(drive, dtype=float)


def effective_coupling(t: Tempos, params: ShapingParams, drive) -> np.ndarray:
    """G(t) = −gΩ(t)/Δ."""
    if params.Delta == 0:
        raise ErroDominio("Delta = 0: o acoplamento Raman efetivo G = −gΩ/Δ não está definido")
    return -params.g * _valores_bombeio(t, drive) / params.Delta


def theta_zeta(t: Tempos, params: ShapingParams, drive) -> Tuple[np.ndarray, np.ndarray]:
    """
    θ(t) = ∫ 4G²/Γ_c dt′ e ζ(t) = ∫ Ω²/Δ dt′ desde a borda esquerda da grade.

    Integração cumulativa pelo trapézio nas amostras dadas.
    """
    tempos = np.atleast_1d(np.asarray(t, dtype=float))
    acoplamento = effective_coupling(tempos, params, drive)
    omega = _valores_bombeio(tempos, drive)
    theta = cumulative_trapezoid(4.0 * acoplamento ** 2 / params.Gamma_c, tempos, initial=0.0)
    zeta = cumulative_trapezoid(omega ** 2 / params.Delta, tempos, initial=0.0)
    return theta, zeta


def flux_forward(t: Tempos, params: ShapingParams, drive) -> np.ndarray:
    """Fluxo previsto Φ = θ̇ e^{−θ}."""
    tempos = np.atleast_1d(np.asarray(t, dtype=float))
    theta, _ = theta_zeta(tempos, params, drive)
    taxa = 4.0 * effective_coupling(tempos, params, drive) ** 2 / params.Gamma_c
    return taxa * np.exp(-theta)


def cumulative_photon_number(t: Tempos, params: ShapingParams, drive) -> np.ndarray:
    """n(t) = 1 − e^{−θ(t)} do mapa direto."""
    theta, _ = theta_zeta(t, params, drive)
    return 1.0 - np.exp(-theta)


def design_rabi(params: ShapingParams) -> DriveEnvelope:
    """
    Ω(t) = −sign(g/Δ) |Δ|√Γ_c/(2|g|) · √(Φ/(1 − ∫Φ)), tabulado na grade do alvo.

    O sinal escolhido mantém G ≥ 0.

    Raises:
        ErroDominio: Δ = 0, g = 0, ou ∫Φ atinge 1.
    """
    if params.Delta == 0 or params.g == 0:
        raise ErroDominio("o desenho inverso exige Delta ≠ 0 e g ≠ 0")
    tempos, fluxo = params.alvo()
    acumulado = cumulative_trapezoid(fluxo, tempos, initial=0.0)
    restante = 1.0 - acumulado
    if np.any(restante <= 0):
        raise ErroDominio(
            f"a integral do fluxo alvo atinge 1 (eta_eff={params.eta_eff}); exige eta_eff < 1"
        )
    sinal = -math.copysign(1.0, params.g / params.Delta)
    prefator = sinal * abs(params.Delta) * math.sqrt(params.Gamma_c) / (2.0 * abs(params.g))
    omega = prefator * np.sqrt(fluxo / restante)
    log_info(
        f"[MODELAGEM] Bombeio desenhado: max|Ω|={np.max(np.abs(omega)):.4g}, "
        f"{tempos.size} amostras em [{tempos[0]:.3g}, {tempos[-1]:.3g}]"
    )
    return DriveEnvelope.tabulado(tempos, omega)


def gaussian_target(
    T: float,
    eta_eff: float,
    janela: Tuple[float, float] = JANELA_ALVO,
    pontos: int = PONTOS_ALVO,
) -> Tuple[np.ndarray, np.ndarray]:
    """Φ(t) = (η√π/T) e^{−(πt/T)²}, amostrado em [janela[0]·T, janela[1]·T]."""
    if not 0 < eta_eff < 1:
        raise ErroDominio(f"eta_eff={eta_eff} fora de (0, 1)")
    if T <= 0:
        raise ErroDominio(f"T={T} deve ser positivo")
    tempos = np.linspace(janela[0] * T, janela[1] * T, pontos)
    fluxo = eta_eff * math.sqrt(math.pi) / T * np.exp(-(math.pi * tempos / T) ** 2)
    return tempos, fluxo


@dataclass(frozen=True)
class DiagnosticoRegime:
    """Razões do regime de validade; valores < 1 são sinalizados."""

    razoes: Dict[str, float]
    max_G: float
    max_Omega: float
    alertas: Tuple[str, ...] = field(default=())

    @property
    def valido(self) -> bool:
        return not self.alertas


_DESCRICAO_RAZOES = {
    "Delta/maxOmega": "grande dessintonia Δ ≫ Ω não satisfeita: a eliminação de |e⟩ não pode ser feita",
    "Delta/|g|": "grande dessintonia Δ ≫ g não satisfeita: a eliminação de |e⟩ não pode ser feita",
    "Gamma_c/maxG": "Γ_c < max G: a segunda eliminação adiabática não pode ser feita",
    "Gamma_c*Delta/g^2": "Γ_c < g²/Δ: a segunda eliminação adiabática não pode ser feita",
}


def regime_report(params: ShapingParams, drive: DriveEnvelope, tempos: Optional[Tempos] = None) -> DiagnosticoRegime:
    """Razões {Δ/max Ω, Δ/|g|, Γ_c/max G, Γ_c·Δ/g²}; apenas informativo."""
    if tempos is None:
        if drive.kind == "tabulated":
            tempos = np.asarray(drive.samples_t)
        else:
            tempos = drive.t_on + drive.duration * np.linspace(JANELA_ALVO[0], JANELA_ALVO[1], PONTOS_ALVO)
    omega = np.abs(_valores_bombeio(tempos, drive))
    max_omega = float(np.max(omega)) if omega.size else 0.0
    max_g_efetivo = float(np.max(np.abs(effective_coupling(tempos, params, drive)))) if omega.size else 0.0

    def razao(numerador: float, denominador: float) -> float:
        return math.inf if denominador == 0 else numerador / denominador

    razoes = {
        "Delta/maxOmega": razao(abs(params.Delta), max_omega),
        "Delta/|g|": razao(abs(params.Delta), abs(params.g)),
        "Gamma_c/maxG": razao(params.Gamma_c, max_g_efetivo),
        "Gamma_c*Delta/g^2": razao(params.Gamma_c * abs(params.Delta), params.g ** 2),
    }
    alertas = tuple(_DESCRICAO_RAZOES[nome] for nome, valor in razoes.items() if valor < 1.0)
    for alerta in alertas:
        log_warning(f"[MODELAGEM] REGIME: {alerta}")
    return DiagnosticoRegime(razoes=razoes, max_G=max_g_efetivo, max_Omega=max_omega, alertas=alertas)


@dataclass(frozen=True)
class ComparacaoFluxo:
    """Fluxo realizado pelo modelo completo contra o alvo."""

    tempos: np.ndarray
    realizado: np.ndarray
    alvo: np.ndarray
    alvo_retardado: np.ndarray
    l1: float
    l1_retardado: float
    n_final: float
    atraso: float

    def para_dataframe(self) -> pd.DataFrame:
        return pd.DataFrame({
            "t": self.tempos,
            "flux_realized": self.realizado,
            "flux_target": self.alvo,
            "flux_target_retarded": self.alvo_retardado,
        })


def comparar_fluxo(trajetoria: Trajectory, alvo_t: np.ndarray, alvo_fluxo: np.ndarray) -> ComparacaoFluxo:
    """
    Compara Γ_c|c_f1|² do pseudo-modo com o alvo.

    Reporta L¹ direto e L¹ com o alvo atrasado pelo tempo de memória da
    cavidade 2/Γ_c.
    """
    if trajetoria.modelo != "pseudo":
        raise ErroDominio("a validação do desenho usa a trajetória de pseudo-modo")
    gamma = trajetoria.cenario.cavity.Gamma_c
    tempos = trajetoria.tempos
    realizado = gamma * trajetoria.P_photon
    atraso = 2.0 / gamma if gamma > 0 else 0.0
    alvo = np.interp(tempos, alvo_t, alvo_fluxo, left=0.0, right=0.0)
    alvo_retardado = np.interp(tempos - atraso, alvo_t, alvo_fluxo, left=0.0, right=0.0)
    if tempos.size < 2:
        l1 = l1_retardado = 0.0
    else:
        l1 = float(trapezoid(np.abs(realizado - alvo), tempos))
        l1_retardado = float(trapezoid(np.abs(realizado - alvo_retardado), tempos))
    n_final = float(trajetoria.n_leaked[-1]) if tempos.size else 0.0
    return ComparacaoFluxo(
        tempos=tempos,
        realizado=realizado,
        alvo=alvo,
        alvo_retardado=alvo_retardado,
        l1=l1,
        l1_retardado=l1_retardado,
        n_final=n_final,
        atraso=atraso,
    )


def validar_desenho(cenario: ScenarioConfig, alvo_t: np.ndarray, alvo_fluxo: np.ndarray) -> ComparacaoFluxo:
    """Integra o pseudo-modo completo com o bombeio do cenário e compara ao alvo."""
    trajetoria = integrate("pseudo", cenario)
    comparacao = comparar_fluxo(trajetoria, alvo_t, alvo_fluxo)
    log_info(
        f"[MODELAGEM] {cenario.name}: L1={comparacao.l1:.4f}, "
        f"L1 retardado={comparacao.l1_retardado:.4f}, n(∞)={comparacao.n_final:.4f}"
    )
    return comparacao


def validar_previsao_direta(cenario: ScenarioConfig) -> ComparacaoFluxo:
    """Compara o modelo completo com a previsão adiabática do próprio bombeio."""
    params = ShapingParams.do_cenario(cenario)
    tempos = np.linspace(cenario.t0, cenario.tf, PONTOS_ALVO)
    previsto = flux_forward(tempos, params, cenario.atom.drive)
    return validar_desenho(cenario, tempos, previsto)


def tabela_desenho(params: ShapingParams, drive: DriveEnvelope) -> pd.DataFrame:
    """CSV do desenho: t, omega_drive, theta, flux_predicted."""
    tempos, _ = params.alvo()
    theta, _ = theta_zeta(tempos, params, drive)
    return pd.DataFrame({
        "t": tempos,
        "omega_drive": _valores_bombeio(tempos, drive),
        "theta": theta,
        "flux_predicted": flux_forward(tempos, params, drive),
    })
