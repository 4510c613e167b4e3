# file: cavsim/dynamics/integrator.py
"""
Runge–Kutta clássico de 4ª ordem com passo fixo.

Usado tanto pelas amplitudes de estado puro quanto pela matriz densidade.
Passo fixo mantém a sequência de operações idêntica entre execuções, de
modo que a mesma configuração produz o mesmo fluxo de bits.
"""

import math
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Tuple

import numpy as np

from core.units_and_setup import IntegratorSpec
from utils.cavsim_logger import log_error, log_warning
from utils.excecoes import ErroNumerico

# Fator da guarda de estabilidade: dt ≤ FATOR / (maior frequência do sistema)
FATOR_GUARDA = 0.1


@dataclass(frozen=True)
class ResultadoIntegracao:
    """Instantes registrados e estados correspondentes (linhas)."""

    tempos: np.ndarray
    estados: np.ndarray
    passos: int
    dt: float
    avisos: Tuple[str, ...] = field(default=())


def dt_da_guarda(frequencia_maxima: float) -> float:
    if frequencia_maxima <= 0:
        return math.inf
    return FATOR_GUARDA / frequencia_maxima


def escolher_passo(spec: IntegratorSpec, janela: float, frequencia_maxima: float) -> Tuple[float, int, List[str]]:
    """
    Define dt e número de passos cobrindo exatamente a janela.

    Sem dt explícito usa a guarda; com dt explícito acima da guarda emite aviso.
    """
    if janela <= 0:
        return 0.0, 0, []
    guarda = dt_da_guarda(frequencia_maxima)
    avisos = []
    if spec.dt is None:
        alvo = guarda if math.isfinite(guarda) else janela / 100.0
        passos = max(1, math.ceil(janela / alvo - 1e-9))
    else:
        passos = max(1, int(round(janela / spec.dt)))
    dt = janela / passos
    if dt > guarda * (1.0 + 1e-9):
        aviso = f"dt={dt:.3e} acima da guarda de estabilidade {guarda:.3e}"
        log_warning(f"[INTEGRADOR] {aviso}")
        avisos.append(aviso)
    return dt, passos, avisos


def passo_rk4(rhs: Callable, y: np.ndarray, t: float, dt: float) -> np.ndarray:
    k1 = rhs(y, t)
    k2 = rhs(y + 0.5 * dt * k1, t + 0.5 * dt)
    k3 = rhs(y + 0.5 * dt * k2, t + 0.5 * dt)
    k4 = rhs(y + dt * k3, t + dt)
    return y + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def integrar_rk4(
    rhs: Callable[[np.ndarray, float], np.ndarray],
    y0: np.ndarray,
    t0: float,
    dt: float,
    passos: int,
    registrar_cada: int = 1,
    pos_passo: Optional[Callable[[np.ndarray], np.ndarray]] = None,
) -> ResultadoIntegracao:
    """
    Integra y' = rhs(y, t) por `passos` passos de tamanho dt.

    Registra o estado inicial, cada `registrar_cada` passos e sempre o final.
    `pos_passo` permite projetar o estado após cada passo (ex.: hermitização).

    Raises:
        ErroNumerico: estado com NaN/inf, informando o instante.
    """
    y = np.array(y0, copy=True)
    if passos == 0:
        return ResultadoIntegracao(
            tempos=np.zeros(0), estados=np.zeros((0,) + y.shape, dtype=y.dtype), passos=0, dt=dt
        )

    tempos = [t0]
    estados = [y.copy()]
    for k in range(1, passos + 1):
        t_anterior = t0 + (k - 1) * dt
        y = passo_rk4(rhs, y, t_anterior, dt)
        if pos_passo is not None:
            y = pos_passo(y)
        if not np.all(np.isfinite(y)):
            t_falha = t0 + k * dt
            log_error(f"ABORTO_NUMERICO: estado não finito em t={t_falha:.6g} (passo {k})")
            raise ErroNumerico(f"estado não finito em t={t_falha:.6g}", tempo=t_falha)
        if k % registrar_cada == 0 or k == passos:
            tempos.append(t0 + k * dt)
            estados.append(y.copy())

    return ResultadoIntegracao(
        tempos=np.asarray(tempos), estados=np.asarray(estados), passos=passos, dt=dt
    )
