# file: cavsim/dynamics/representations.py
"""
Dinâmica de uma excitação nas três representações.

Todas as frequências diagonais são dessintonias em relação a ω_c (referencial
girante); os acoplamentos são avaliados nas frequências absolutas ω_i.

Layouts do vetor de estado (complexo):
    true:   [c_g0, c_e0, 𝐜_{f,1,0}, ..., 𝐜_{f,1,N−1}]
    inout:  [c_g0, c_e0, c_{f,1,0}, 𝐜_{f,0,1,0}, ..., 𝐜_{f,0,1,N−1}]
    pseudo: [c_g0, c_e0, c_f1, n_vazado]
"""

from dataclasses import dataclass, field, replace
from functools import cached_property
from typing import Callable, Dict, Optional, Tuple

import numpy as np
import pandas as pd

from core.continuum_grid import (
    FrequencyGrid,
    SpectralAmplitudes,
    Spectrum,
    espectro_vazio,
    estado_estacionario,
    grade_do_cenario,
    spectral_density,
)
from core.units_and_setup import DriveEnvelope, ScenarioConfig
from dynamics.integrator import escolher_passo, integrar_rk4
from optics.couplings import CouplingSet, eta_discreto, kappa_discreto
from utils.cavsim_logger import log_info, log_performance, log_warning
from utils.excecoes import ErroConfiguracao, ErroDominio

TOLERANCIA_NORMA = 1e-6

MODELOS = ("true", "inout", "pseudo")


class BombeioAmostrado:
    """Ω(t) pré-calculado nos instantes t0 + k·dt/2 visitados pelo RK4."""

    def __init__(self, drive: DriveEnvelope, t0: float, dt: float, passos: int):
        self._drive = drive
        self._t0 = t0
        self._meio_passo = 0.5 * dt
        self._valores = np.asarray(drive.avaliar(t0 + self._meio_passo * np.arange(2 * passos + 1)))

    def __call__(self, t: float) -> float:
        if self._meio_passo > 0:
            posicao = (t - self._t0) / self._meio_passo
            indice = int(round(posicao))
            if abs(posicao - indice) < 1e-6 and 0 <= indice < self._valores.size:
                return float(self._valores[indice])
        return self._drive.avaliar(t)


@dataclass(frozen=True)
class ParametrosDinamica:
    """Parâmetros do lado direito: dessintonias, acoplamentos discretos e Ω(t)."""

    Delta: float
    Delta_c: float
    g: float
    Gamma_c: float
    bombeio: Callable[[float], float]
    acoplamentos: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=complex))
    detunings: np.ndarray = field(default_factory=lambda: np.zeros(0))

    @cached_property
    def fase_reservatorio(self) -> np.ndarray:
        """−i(Δ − Δ_c + ω_i − ω_c)."""
        return -1j * (self.Delta - self.Delta_c + self.detunings)

    @cached_property
    def acoplamentos_conj(self) -> np.ndarray:
        return np.conj(self.acoplamentos)


def rhs_truemode(state: np.ndarray, t: float, params: ParametrosDinamica) -> np.ndarray:
    """
    iċ_g = Ωc_e
    iċ_e = Δc_e + Ωc_g + iΣ η̃_m 𝐜_m
    i𝐜̇_m = (Δ − Δ_c + ω_m − ω_c)𝐜_m − iη̃*_m c_e
    """
    omega = params.bombeio(t)
    c_g, c_e = state[0], state[1]
    fotons = state[2:]
    derivada = np.empty_like(state)
    derivada[0] = -1j * omega * c_e
    derivada[1] = -1j * params.Delta * c_e - 1j * omega * c_g + np.dot(params.acoplamentos, fotons)
    derivada[2:] = params.fase_reservatorio * fotons - params.acoplamentos_conj * c_e
    return derivada


def rhs_inside_outside(state: np.ndarray, t: float, params: ParametrosDinamica) -> np.ndarray:
    """
    iċ_g = Ωc_e
    iċ_e = Δc_e + Ωc_g + g c_{f,1,0}
    iċ_{f,1,0} = (Δ − Δ_c)c_{f,1,0} + g c_e − iΣ κ̃*_m 𝐜_m
    i𝐜̇_m = (Δ − Δ_c + ω_m − ω_c)𝐜_m + iκ̃_m c_{f,1,0}
    """
    omega = params.bombeio(t)
    c_g, c_e, c_cav = state[0], state[1], state[2]
    fotons = state[3:]
    derivada = np.empty_like(state)
    derivada[0] = -1j * omega * c_e
    derivada[1] = -1j * params.Delta * c_e - 1j * omega * c_g - 1j * params.g * c_cav
    derivada[2] = (
        -1j * (params.Delta - params.Delta_c) * c_cav
        - 1j * params.g * c_e
        - np.dot(params.acoplamentos_conj, fotons)
    )
    derivada[3:] = params.fase_reservatorio * fotons + params.acoplamentos * c_cav
    return derivada


def rhs_pseudomode(state: np.ndarray, t: float, params: ParametrosDinamica) -> np.ndarray:
    """Sistema não hermitiano de 3 níveis com −iΓ_c/2 no fóton; ṅ = Γ_c|c_f1|²."""
    omega = params.bombeio(t)
    c_g, c_e, c_f1 = state[0], state[1], state[2]
    derivada = np.empty_like(state)
    derivada[0] = -1j * omega * c_e
    derivada[1] = -1j * params.Delta * c_e - 1j * omega * c_g - 1j * params.g * c_f1
    derivada[2] = (-1j * (params.Delta - params.Delta_c) - 0.5 * params.Gamma_c) * c_f1 - 1j * params.g * c_e
    derivada[3] = params.Gamma_c * abs(c_f1) ** 2
    return derivada


@dataclass(frozen=True)
class TrueModeState:
    c_g0: complex
    c_e0: complex
    c_f1: SpectralAmplitudes

    @classmethod
    def de_vetor(cls, vetor: np.ndarray) -> "TrueModeState":
        return cls(complex(vetor[0]), complex(vetor[1]), SpectralAmplitudes(np.array(vetor[2:])))

    def para_vetor(self) -> np.ndarray:
        return np.concatenate(([self.c_g0, self.c_e0], self.c_f1.values)).astype(complex)

    @property
    def norma(self) -> float:
        return abs(self.c_g0) ** 2 + abs(self.c_e0) ** 2 + self.c_f1.norma


@dataclass(frozen=True)
class InsideOutsideState:
    c_g0: complex
    c_e0: complex
    c_f10: complex
    c_f01: SpectralAmplitudes

    @classmethod
    def de_vetor(cls, vetor: np.ndarray) -> "InsideOutsideState":
        return cls(complex(vetor[0]), complex(vetor[1]), complex(vetor[2]), SpectralAmplitudes(np.array(vetor[3:])))

    def para_vetor(self) -> np.ndarray:
        return np.concatenate(([self.c_g0, self.c_e0, self.c_f10], self.c_f01.values)).astype(complex)

    @property
    def norma(self) -> float:
        return abs(self.c_g0) ** 2 + abs(self.c_e0) ** 2 + abs(self.c_f10) ** 2 + self.c_f01.norma


@dataclass(frozen=True)
class PseudoModeState:
    c_g0: complex
    c_e0: complex
    c_f1: complex
    n_leaked: float

    @classmethod
    def de_vetor(cls, vetor: np.ndarray) -> "PseudoModeState":
        return cls(complex(vetor[0]), complex(vetor[1]), complex(vetor[2]), float(vetor[3].real))

    def para_vetor(self) -> np.ndarray:
        return np.array([self.c_g0, self.c_e0, self.c_f1, self.n_leaked], dtype=complex)

    @property
    def soma_dilatada(self) -> float:
        return abs(self.c_g0) ** 2 + abs(self.c_e0) ** 2 + abs(self.c_f1) ** 2 + self.n_leaked


_TIPOS_ESTADO = {"true": TrueModeState, "inout": InsideOutsideState, "pseudo": PseudoModeState}
_INICIO_RESERVATORIO = {"true": 2, "inout": 3}


@dataclass(frozen=True)
class Trajectory:
    """Série temporal dos estados registrados de uma representação."""

    modelo: str
    tempos: np.ndarray
    estados: np.ndarray
    cenario: ScenarioConfig
    dt: float
    passos: int
    grid: Optional[FrequencyGrid] = None
    acoplamento: Optional[str] = None
    avisos: Tuple[str, ...] = ()

    @property
    def vazia(self) -> bool:
        return self.tempos.size == 0

    @property
    def P_g(self) -> np.ndarray:
        return np.abs(self.estados[:, 0]) ** 2 if not self.vazia else np.zeros(0)

    @property
    def P_e(self) -> np.ndarray:
        return np.abs(self.estados[:, 1]) ** 2 if not self.vazia else np.zeros(0)

    @property
    def P_photon(self) -> Optional[np.ndarray]:
        """População do fóton na cavidade; None na representação de modos verdadeiros."""
        if self.modelo == "true":
            return None
        return np.abs(self.estados[:, 2]) ** 2 if not self.vazia else np.zeros(0)

    @property
    def n_leaked(self) -> Optional[np.ndarray]:
        if self.modelo != "pseudo":
            return None
        return self.estados[:, 3].real.copy() if not self.vazia else np.zeros(0)

    @property
    def reservoir_norm(self) -> Optional[np.ndarray]:
        """Σ|𝐜_i|² ao longo do tempo (modelos com contínuo)."""
        inicio = _INICIO_RESERVATORIO.get(self.modelo)
        if inicio is None:
            return None
        if self.vazia:
            return np.zeros(0)
        return np.sum(np.abs(self.estados[:, inicio:]) ** 2, axis=1)

    @property
    def norma_total(self) -> np.ndarray:
        """Norma fechada (true, inout) ou soma dilatada (pseudo)."""
        if self.vazia:
            return np.zeros(0)
        if self.modelo == "pseudo":
            return self.P_g + self.P_e + self.P_photon + self.n_leaked
        return np.sum(np.abs(self.estados) ** 2, axis=1)

    def estado(self, indice: int = -1):
        return _TIPOS_ESTADO[self.modelo].de_vetor(self.estados[indice])

    def amplitudes(self, indice: int = -1) -> SpectralAmplitudes:
        inicio = _INICIO_RESERVATORIO.get(self.modelo)
        if inicio is None:
            raise ErroDominio(f"o modelo '{self.modelo}' não possui amplitudes de reservatório")
        return SpectralAmplitudes(np.array(self.estados[indice, inicio:]))

    def para_dataframe(self) -> pd.DataFrame:
        colunas = {"t": self.tempos, "P_g": self.P_g, "P_e": self.P_e}
        if self.P_photon is not None:
            colunas["P_photon"] = self.P_photon
        if self.n_leaked is not None:
            colunas["n_leaked"] = self.n_leaked
        if self.reservoir_norm is not None:
            colunas["P_reservoir"] = self.reservoir_norm
        return pd.DataFrame(colunas)


def _estado_inicial(modelo: str, inicial: str, dimensao: int) -> np.ndarray:
    estado = np.zeros(dimensao, dtype=complex)
    if inicial == "ground":
        estado[0] = 1.0
    elif inicial == "excited":
        estado[1] = 1.0
    elif modelo == "true":
        raise ErroConfiguracao(
            "initial_state 'photon' não existe na representação de modos verdadeiros",
            campo="initial_state",
        )
    else:
        estado[2] = 1.0
    return estado


def construir_parametros(
    modelo: str,
    cenario: ScenarioConfig,
    grid: Optional[FrequencyGrid] = None,
    acoplamento: str = "exact",
    bombeio: Optional[Callable[[float], float]] = None,
) -> ParametrosDinamica:
    """Parâmetros do lado direito para um modelo e cenário."""
    atomo = cenario.atom
    base = dict(
        Delta=atomo.Delta,
        Delta_c=atomo.Delta_c,
        g=atomo.g,
        Gamma_c=cenario.cavity.Gamma_c,
        bombeio=bombeio or atomo.drive.avaliar,
    )
    if modelo == "pseudo":
        return ParametrosDinamica(**base)
    grid = grid or grade_do_cenario(cenario)
    if modelo == "true":
        conjunto = CouplingSet.do_cenario(cenario, mode=acoplamento)
        coeficientes = eta_discreto(grid, conjunto)
    else:
        coeficientes = kappa_discreto(grid, cenario.cavity)
    return ParametrosDinamica(**base, acoplamentos=coeficientes, detunings=grid.detunings)


_RHS: Dict[str, Callable] = {
    "true": rhs_truemode,
    "inout": rhs_inside_outside,
    "pseudo": rhs_pseudomode,
}


def _frequencia_maxima(modelo: str, cenario: ScenarioConfig, grid: Optional[FrequencyGrid]) -> float:
    atomo = cenario.atom
    candidatas = [
        abs(atomo.Delta),
        abs(atomo.Delta - atomo.Delta_c),
        atomo.drive.amplitude_maxima(),
        abs(atomo.g),
        cenario.cavity.Gamma_c,
    ]
    if grid is not None:
        candidatas.append(float(np.max(np.abs(atomo.Delta - atomo.Delta_c + grid.detunings))))
    return max(candidatas)


@log_performance
def integrate(
    model: str,
    config: ScenarioConfig,
    acoplamento: str = "exact",
    grid: Optional[FrequencyGrid] = None,
) -> Trajectory:
    """
    Integra uma representação sobre a janela do cenário.

    Args:
        model: "true", "inout" ou "pseudo".
        config: cenário.
        acoplamento: "exact" ou "lorentzian" (só para "true").
        grid: grade explícita; padrão, a do cenário.

    Raises:
        ErroConfiguracao: modelo desconhecido ou cenário incompatível.
        ErroNumerico: estado não finito durante a integração.
    """
    if model not in _RHS:
        raise ErroConfiguracao.com_opcoes(f"Modelo desconhecido: '{model}'", MODELOS, campo="model")

    if model != "pseudo":
        grid = grid or grade_do_cenario(config)
    else:
        grid = None

    avisos = list(config.avisos())
    janela = config.tf - config.t0
    dt, passos, avisos_passo = escolher_passo(config.integrator, janela, _frequencia_maxima(model, config, grid))
    avisos.extend(avisos_passo)

    bombeio = BombeioAmostrado(config.atom.drive, config.t0, dt, passos)
    params = construir_parametros(model, config, grid, acoplamento, bombeio)
    dimensao = {"true": 2, "inout": 3, "pseudo": 4}[model] + (grid.count if grid is not None else 0)
    estado0 = _estado_inicial(model, config.initial_state, dimensao)
    rhs = _RHS[model]

    log_info(
        f"[DINAMICA] Modelo {model} ({config.name}): {passos} passos de dt={dt:.3e}, {dimensao} amplitudes",
        modelo=model,
        passos=passos,
        pontos_grade=grid.count if grid is not None else 0,
    )
    resultado = integrar_rk4(
        lambda y, t: rhs(y, t, params),
        estado0,
        config.t0,
        dt,
        passos,
        registrar_cada=config.integrator.record_every,
    )

    for aviso in avisos:
        if aviso not in avisos_passo:
            log_warning(f"[DINAMICA] {config.name}: {aviso}")

    trajetoria = Trajectory(
        modelo=model,
        tempos=resultado.tempos,
        estados=resultado.estados,
        cenario=config,
        dt=dt,
        passos=passos,
        grid=grid,
        acoplamento=acoplamento if model == "true" else None,
        avisos=tuple(avisos),
    )

    if not trajetoria.vazia:
        deriva = float(np.max(np.abs(trajetoria.norma_total - 1.0)))
        if deriva > TOLERANCIA_NORMA * max(1.0, janela / 10.0):
            aviso = f"deriva de norma {deriva:.2e} acima da tolerância"
            log_warning(f"[DINAMICA] {config.name}: {aviso}")
            trajetoria = _com_aviso(trajetoria, aviso)
    return trajetoria


def _com_aviso(trajetoria: Trajectory, aviso: str) -> Trajectory:
    return replace(trajetoria, avisos=trajetoria.avisos + (aviso,))


def verificar_estacionario(trajetoria: Trajectory) -> Tuple[bool, float]:
    """Critério de regime estacionário sobre a norma do reservatório."""
    norma = trajetoria.reservoir_norm
    if norma is None:
        norma = trajetoria.n_leaked
    return estado_estacionario(trajetoria.tempos, norma)


def espectro_final(trajetoria: Trajectory) -> Spectrum:
    """Espectro das amplitudes do reservatório no instante final."""
    if trajetoria.vazia:
        return espectro_vazio()
    espectro = spectral_density(trajetoria.amplitudes(-1), trajetoria.grid)
    atingido, taxa = verificar_estacionario(trajetoria)
    if not atingido:
        aviso = f"regime estacionário não atingido (|d/dt Σ|c|²| = {taxa:.2e})"
        log_warning(f"[DINAMICA] {trajetoria.cenario.name}/{trajetoria.modelo}: {aviso}")
        espectro = espectro.com_avisos(aviso)
    return espectro


def pseudo_mode_spectrum(trajectory: Trajectory) -> Spectrum:
    """
    Espectro do fóton sob o acoplamento Lorentziano η̂.

    Exige a trajetória da representação de modos verdadeiros integrada com η̂.
    """
    if trajectory.modelo != "true" or trajectory.acoplamento != "lorentzian":
        raise ErroDominio("o espectro de pseudo-modo exige a trajetória 'true' com acoplamento Lorentziano")
    return espectro_final(trajectory)


def fit_decay_rate(tempos: np.ndarray, valores: np.ndarray, janela: Tuple[float, float]) -> float:
    """Taxa γ do ajuste log-linear valores ≈ A e^{−γt} dentro da janela."""
    tempos = np.asarray(tempos, dtype=float)
    valores = np.asarray(valores, dtype=float)
    selecao = (tempos >= janela[0]) & (tempos <= janela[1]) & (valores > 0)
    if np.count_nonzero(selecao) < 3:
        raise ErroDominio(f"pontos insuficientes para ajustar decaimento em {janela}")
    inclinacao, _ = np.polyfit(tempos[selecao], np.log(valores[selecao]), 1)
    return float(-inclinacao)
