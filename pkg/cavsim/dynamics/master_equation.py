# file: cavsim/dynamics/master_equation.py
"""
Equação mestra de Lindblad do sistema átomo+cavidade com 4 níveis.

Base ordenada: {|g,∅⟩, |e,∅⟩, |f,1⟩, |f,∅⟩}. O operador de salto é
c = |f,∅⟩⟨f,1| com taxa Γ_c. A entrada −ω_c do canto |f,∅⟩ é omitida: é uma
fase global desacoplada e não altera populações nem o bloco A.
"""

from dataclasses import dataclass
from typing import Callable, Optional, Tuple

import numpy as np
import pandas as pd
from scipy.linalg import eigvalsh

from core.units_and_setup import ScenarioConfig
from dynamics.integrator import escolher_passo, integrar_rk4
from dynamics.representations import BombeioAmostrado
from utils.cavsim_logger import log_info, log_performance, log_warning
from utils.excecoes import ErroConfiguracao, ErroDominio

G0, E0, F1, F0 = 0, 1, 2, 3

OPERADOR_SALTO = np.zeros((4, 4), dtype=complex)
OPERADOR_SALTO[F0, F1] = 1.0

# Projetor D = [0, 0, 1] do bloco A no estado |f,1⟩
PROJETOR_D = np.array([[0.0, 0.0, 1.0]])

TOLERANCIA_HERMITICIDADE = 1e-10
TOLERANCIA_TRACO = 1e-8
PISO_POSITIVIDADE = -1e-8


@dataclass(frozen=True)
class DensityMatrix4:
    """Matriz densidade 4×4 na base {|g,∅⟩, |e,∅⟩, |f,1⟩, |f,∅⟩}."""

    rho: np.ndarray

    def __post_init__(self):
        if np.shape(self.rho) != (4, 4):
            raise ErroDominio(f"matriz densidade deve ser 4×4, recebida {np.shape(self.rho)}")

    @classmethod
    def pura(cls, vetor) -> "DensityMatrix4":
        """|ψ⟩⟨ψ| a partir de 3 (bloco A) ou 4 amplitudes."""
        psi = np.zeros(4, dtype=complex)
        vetor = np.asarray(vetor, dtype=complex)
        psi[:vetor.size] = vetor
        return cls(np.outer(psi, psi.conj()))

    @property
    def erro_hermiticidade(self) -> float:
        return float(np.max(np.abs(self.rho - self.rho.conj().T)))

    @property
    def traco(self) -> float:
        return float(np.trace(self.rho).real)

    def violacoes(self) -> list:
        """Invariantes violados (lista vazia se a matriz é válida)."""
        problemas = []
        if self.erro_hermiticidade > TOLERANCIA_HERMITICIDADE:
            problemas.append(f"não hermitiana ({self.erro_hermiticidade:.2e})")
        if abs(self.traco - 1.0) > TOLERANCIA_TRACO:
            problemas.append(f"traço {self.traco:.10f}")
        piso = positivity_floor(self.rho)
        if piso < PISO_POSITIVIDADE:
            problemas.append(f"autovalor mínimo {piso:.2e}")
        return problemas


def purity(rho) -> float:
    """Tr ρ²."""
    rho = _matriz(rho)
    return float(np.trace(rho @ rho).real)


def positivity_floor(rho) -> float:
    """Menor autovalor de ρ (parte hermitiana)."""
    rho = _matriz(rho)
    return float(eigvalsh(0.5 * (rho + rho.conj().T))[0])


def _matriz(rho) -> np.ndarray:
    return rho.rho if isinstance(rho, DensityMatrix4) else np.asarray(rho)


@dataclass(frozen=True)
class SystemHamiltonian4:
    """H_S em um instante: bloco A 3×3 real simétrico e canto desacoplado."""

    Omega: float
    Delta: float
    Delta_c: float
    g: float

    def bloco_A(self) -> np.ndarray:
        return np.array([
            [0.0, self.Omega, 0.0],
            [self.Omega, self.Delta, self.g],
            [0.0, self.g, self.Delta - self.Delta_c],
        ])

    def matriz(self) -> np.ndarray:
        h = np.zeros((4, 4), dtype=complex)
        h[:3, :3] = self.bloco_A()
        return h


@dataclass(frozen=True)
class ParametrosMestra:
    Delta: float
    Delta_c: float
    g: float
    Gamma_c: float
    bombeio: Callable[[float], float]

    @classmethod
    def do_cenario(cls, cenario: ScenarioConfig, bombeio: Optional[Callable[[float], float]] = None) -> "ParametrosMestra":
        atomo = cenario.atom
        return cls(
            Delta=atomo.Delta,
            Delta_c=atomo.Delta_c,
            g=atomo.g,
            Gamma_c=cenario.cavity.Gamma_c,
            bombeio=bombeio or atomo.drive.avaliar,
        )

    def hamiltoniano(self, t: float) -> SystemHamiltonian4:
        return SystemHamiltonian4(Omega=self.bombeio(t), Delta=self.Delta, Delta_c=self.Delta_c, g=self.g)


def lindblad_rhs(rho, t: float, params: ParametrosMestra) -> np.ndarray:
    """ρ̇ = −i[H_S, ρ] + Γ_c(cρc† − ½{c†c, ρ})."""
    rho = _matriz(rho)
    h = params.hamiltoniano(t).matriz()
    c = OPERADOR_SALTO
    c_dag = c.conj().T
    c_dag_c = c_dag @ c
    return (
        -1j * (h @ rho - rho @ h)
        + params.Gamma_c * (c @ rho @ c_dag - 0.5 * (c_dag_c @ rho + rho @ c_dag_c))
    )


@dataclass(frozen=True)
class TrajetoriaMestra:
    tempos: np.ndarray
    rhos: np.ndarray
    dt: float
    avisos: Tuple[str, ...] = ()

    @property
    def populacoes(self) -> np.ndarray:
        """Diagonal real de cada ρ (linhas: instantes)."""
        if self.tempos.size == 0:
            return np.zeros((0, 4))
        return np.real(np.diagonal(self.rhos, axis1=1, axis2=2))

    @property
    def pureza(self) -> np.ndarray:
        return np.array([purity(rho) for rho in self.rhos])

    def para_dataframe(self) -> pd.DataFrame:
        populacoes = self.populacoes
        return pd.DataFrame({
            "t": self.tempos,
            "rho11": populacoes[:, G0],
            "rho22": populacoes[:, E0],
            "rho33": populacoes[:, F1],
            "rho44": populacoes[:, F0],
            "purity": self.pureza,
        })


_INDICE_INICIAL = {"ground": G0, "excited": E0, "photon": F1}


def _frequencia_maxima(cenario: ScenarioConfig) -> float:
    atomo = cenario.atom
    return max(
        abs(atomo.Delta),
        abs(atomo.Delta - atomo.Delta_c),
        atomo.drive.amplitude_maxima(),
        abs(atomo.g),
        cenario.cavity.Gamma_c,
    )


def _preparar(cenario: ScenarioConfig):
    janela = cenario.tf - cenario.t0
    dt, passos, avisos = escolher_passo(cenario.integrator, janela, _frequencia_maxima(cenario))
    bombeio = BombeioAmostrado(cenario.atom.drive, cenario.t0, dt, passos)
    return dt, passos, avisos, ParametrosMestra.do_cenario(cenario, bombeio)


@log_performance
def integrar_mestra(cenario: ScenarioConfig, rho0: Optional[DensityMatrix4] = None) -> TrajetoriaMestra:
    """Integra a equação de Lindblad completa na janela do cenário."""
    if rho0 is None:
        if cenario.initial_state not in _INDICE_INICIAL:
            raise ErroConfiguracao.com_opcoes(
                f"Estado inicial desconhecido: '{cenario.initial_state}'", _INDICE_INICIAL, campo="initial_state"
            )
        inicial = np.zeros(4)
        inicial[_INDICE_INICIAL[cenario.initial_state]] = 1.0
        rho0 = DensityMatrix4.pura(inicial)

    dt, passos, avisos, params = _preparar(cenario)
    log_info(f"[MESTRA] {cenario.name}: {passos} passos de dt={dt:.3e}", passos=passos, modelo="master")
    resultado = integrar_rk4(
        lambda y, t: lindblad_rhs(y.reshape(4, 4), t, params).ravel(),
        rho0.rho.astype(complex).ravel(),
        cenario.t0,
        dt,
        passos,
        registrar_cada=cenario.integrator.record_every,
    )
    trajetoria = TrajetoriaMestra(
        tempos=resultado.tempos,
        rhos=resultado.estados.reshape(-1, 4, 4),
        dt=dt,
        avisos=tuple(list(cenario.avisos()) + avisos),
    )
    if resultado.passos:
        problemas = DensityMatrix4(trajetoria.rhos[-1]).violacoes()
        for problema in problemas:
            log_warning(f"[MESTRA] {cenario.name}: matriz densidade final {problema}")
        if problemas:
            trajetoria = TrajetoriaMestra(
                trajetoria.tempos, trajetoria.rhos, dt, trajetoria.avisos + tuple(problemas)
            )
    return trajetoria


@dataclass(frozen=True)
class EvolucaoBloco:
    tempos: np.ndarray
    rho_AA: np.ndarray
    P_f0: np.ndarray

    @property
    def traco_total(self) -> np.ndarray:
        """Tr ρ_AA + ρ₀₀."""
        return np.real(np.trace(self.rho_AA, axis1=1, axis2=2)) + self.P_f0


def block_evolution(initial, params: ScenarioConfig) -> EvolucaoBloco:
    """
    Evolui o bloco A com Ã = A − (i/2)Γ_c D†D e acumula ρ₀₀ (= n(t)).

    ρ̇_AA = −i(Ãρ_AA − ρ_AAÃ†),  ρ̇₀₀ = Γ_c Dρ_AA D†
    """
    psi = np.asarray(initial, dtype=complex)
    if psi.shape != (3,):
        raise ErroDominio(f"o estado inicial do bloco A deve ter 3 amplitudes, recebido {psi.shape}")

    dt, passos, _, parametros = _preparar(params)
    perda = 0.5j * parametros.Gamma_c * (PROJETOR_D.T @ PROJETOR_D)

    def derivada(y: np.ndarray, t: float) -> np.ndarray:
        rho_aa = y[:9].reshape(3, 3)
        a_til = parametros.hamiltoniano(t).bloco_A() - perda
        d_rho = -1j * (a_til @ rho_aa - rho_aa @ a_til.conj().T)
        d_vazado = parametros.Gamma_c * rho_aa[F1, F1]
        return np.concatenate((d_rho.ravel(), [d_vazado]))

    y0 = np.concatenate((np.outer(psi, psi.conj()).ravel(), [0.0])).astype(complex)
    resultado = integrar_rk4(derivada, y0, params.t0, dt, passos, registrar_cada=params.integrator.record_every)
    if resultado.passos == 0:
        return EvolucaoBloco(np.zeros(0), np.zeros((0, 3, 3), dtype=complex), np.zeros(0))
    return EvolucaoBloco(
        tempos=resultado.tempos,
        rho_AA=resultado.estados[:, :9].reshape(-1, 3, 3),
        P_f0=resultado.estados[:, 9].real.copy(),
    )
