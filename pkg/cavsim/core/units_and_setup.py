# file: cavsim/core/units_and_setup.py
"""
Unidades escaladas e registros de cenário do cavsim.

Todas as taxas (g, Γ_c, Ω, Δ, Δ_c, ω_c) são guardadas como produtos
adimensionais taxa×T_ref e todos os comprimentos como L/(c·T_ref), com
T_ref = 1 e c = 1. Nenhuma constante SI aparece em tempo de execução.
"""

import hashlib
import json
import math
from pathlib import Path
from typing import Callable, Dict, List, Literal, Optional, Union

import numpy as np
from pydantic import (
    BaseModel,
    ConfigDict,
    Field,
    PrivateAttr,
    ValidationError,
    field_validator,
    model_validator,
)
from scipy.interpolate import PchipInterpolator

from core.continuum_grid import avisos_resolucao
from utils.cavsim_logger import log_debug, log_warning
from utils.excecoes import ErroConfiguracao


class UnitSystem(BaseModel):
    """Sistema de unidades escaladas: tempo em T_ref, comprimento em c·T_ref."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    T_ref: float = 1.0
    c: float = 1.0

    @field_validator("T_ref", "c")
    @classmethod
    def _unidade_fixa(cls, valor: float) -> float:
        if valor != 1.0:
            raise ValueError("unidades escaladas exigem T_ref = 1 e c = 1")
        return valor


UNIDADES = UnitSystem()
C_LUZ = UNIDADES.c

# Frequência de ressonância comum aos cenários de referência
OMEGA_C_REFERENCIA = 2416.0

# Razão ω_c/Γ_c abaixo da qual a hipótese de alto Q deixa de ser razoável
Q_MINIMO_ALTO = 100.0

_CONFIG_REGISTRO = ConfigDict(frozen=True, extra="forbid", allow_inf_nan=False)


class MirrorSpec(BaseModel):
    """Espelho de camada única: índice n e espessura δ."""

    model_config = _CONFIG_REGISTRO

    n: float = Field(ge=1.0)
    delta: float = Field(gt=0.0)

    @property
    def r0(self) -> float:
        """Amplitude de Fresnel (n−1)/(n+1)."""
        return (self.n - 1.0) / (self.n + 1.0)

    @classmethod
    def quarto_de_onda(cls, n: float, omega_c: float) -> "MirrorSpec":
        """Camada de quarto de onda em ω_c: δ = λ_c/(4n)."""
        lambda_c = 2.0 * math.pi * C_LUZ / omega_c
        return cls(n=n, delta=lambda_c / (4.0 * n))


class CavitySpec(BaseModel):
    """Cavidade unilateral: comprimento, índice do modo, ressonância, perda e espelho."""

    model_config = _CONFIG_REGISTRO

    L: float = Field(gt=0.0)
    m: int = Field(ge=1)
    omega_c: float = Field(gt=0.0)
    Gamma_c: float = Field(ge=0.0)
    mirror: Optional[MirrorSpec] = None

    @property
    def free_spectral_range(self) -> float:
        return math.pi * C_LUZ / self.L

    @property
    def round_trip(self) -> float:
        return 2.0 * self.L / C_LUZ

    def avisos(self) -> List[str]:
        """Avisos de plausibilidade física (nunca bloqueiam a execução)."""
        avisos = []
        nominal = self.m * self.free_spectral_range
        desvio = abs(self.omega_c - nominal) / nominal
        if desvio > 1e-3:
            avisos.append(
                f"omega_c={self.omega_c:.6g} difere de m·πc/L={nominal:.6g} "
                f"em {desvio:.2%}"
            )
        if self.Gamma_c > 0 and self.omega_c / self.Gamma_c < Q_MINIMO_ALTO:
            avisos.append(
                f"Q = omega_c/Gamma_c = {self.omega_c / self.Gamma_c:.1f} "
                f"não satisfaz Gamma_c << omega_c"
            )
        return avisos


TipoEnvelope = Literal["zero", "sin2", "gaussian", "tabulated"]


class DriveEnvelope(BaseModel):
    """
    Envelope real Ω(t) do laser de bombeio.

    Tipos:
        zero: Ω ≡ 0
        sin2: Ω₀ sin²(π(t−t_on)/T) em [t_on, t_on+T], zero fora
        gaussian: Ω₀ exp(−(π(t−t_on)/T)²)
        tabulated: interpolação monotônica (PCHIP) da tabela, zero fora do intervalo
    """

    model_config = _CONFIG_REGISTRO

    kind: TipoEnvelope = "zero"
    amplitude: float = 0.0
    duration: float = Field(default=1.0, gt=0.0)
    t_on: float = 0.0
    samples_t: Optional[List[float]] = None
    samples_omega: Optional[List[float]] = None

    _interpolador: Optional[PchipInterpolator] = PrivateAttr(default=None)

    @model_validator(mode="after")
    def _validar_tabela(self):
        if self.kind != "tabulated":
            return self
        if self.samples_t is None or self.samples_omega is None:
            raise ValueError("envelope 'tabulated' exige samples_t e samples_omega")
        if len(self.samples_t) != len(self.samples_omega) or len(self.samples_t) < 2:
            raise ValueError("samples_t e samples_omega devem ter o mesmo tamanho (>= 2)")
        if np.any(np.diff(self.samples_t) <= 0):
            raise ValueError("samples_t deve ser estritamente crescente")
        return self

    def model_post_init(self, __context) -> None:
        if self.kind == "tabulated":
            self._interpolador = PchipInterpolator(
                np.asarray(self.samples_t), np.asarray(self.samples_omega), extrapolate=False
            )

    @classmethod
    def tabulado(cls, t, omega) -> "DriveEnvelope":
        return cls(
            kind="tabulated",
            samples_t=[float(v) for v in np.asarray(t)],
            samples_omega=[float(v) for v in np.asarray(omega)],
        )

    def avaliar(self, t: Union[float, np.ndarray]) -> Union[float, np.ndarray]:
        """Avalia Ω(t); aceita escalar ou array."""
        tempos = np.asarray(t, dtype=float)
        if self.kind == "zero":
            valores = np.zeros_like(tempos)
        elif self.kind == "sin2":
            fase = (tempos - self.t_on) / self.duration
            dentro = (fase >= 0.0) & (fase <= 1.0)
            valores = np.where(dentro, self.amplitude * np.sin(np.pi * fase) ** 2, 0.0)
        elif self.kind == "gaussian":
            valores = self.amplitude * np.exp(-(np.pi * (tempos - self.t_on) / self.duration) ** 2)
        else:
            valores = np.nan_to_num(self._interpolador(tempos), nan=0.0)

        if np.ndim(t) == 0:
            return float(valores)
        return valores

    __call__ = avaliar

    def amplitude_maxima(self) -> float:
        """max |Ω(t)| do envelope."""
        if self.kind == "zero":
            return 0.0
        if self.kind == "tabulated":
            return float(np.max(np.abs(self.samples_omega)))
        return abs(self.amplitude)


class AtomDriveSpec(BaseModel):
    """Átomo Λ: acoplamento g, dessintonias Δ e Δ_c, bombeio e posição x_A."""

    model_config = _CONFIG_REGISTRO

    g: float
    Delta: float = 0.0
    Delta_c: float = 0.0
    drive: DriveEnvelope = Field(default_factory=DriveEnvelope)
    x_A: Optional[float] = None


class GridSpec(BaseModel):
    """Parâmetros da grade de frequências do reservatório (centro padrão: ω_c)."""

    model_config = _CONFIG_REGISTRO

    half_width: float = Field(default=40.0, gt=0.0)
    count: int = Field(default=4001, ge=3)
    center: Optional[float] = None


class IntegratorSpec(BaseModel):
    """Passo fixo de Runge–Kutta clássico de 4ª ordem."""

    model_config = _CONFIG_REGISTRO

    method: Literal["rk4"] = "rk4"
    dt: Optional[float] = Field(default=None, gt=0.0)
    record_every: int = Field(default=10, ge=1)


EstadoInicial = Literal["ground", "excited", "photon"]


class ScenarioConfig(BaseModel):
    """Cenário completo de uma simulação."""

    model_config = _CONFIG_REGISTRO

    name: str = "personalizado"
    cavity: CavitySpec
    atom: AtomDriveSpec
    grid: GridSpec = Field(default_factory=GridSpec)
    integrator: IntegratorSpec = Field(default_factory=IntegratorSpec)
    initial_state: EstadoInicial = "excited"
    t0: float = 0.0
    tf: float = 10.0

    @model_validator(mode="after")
    def _validar_janela_e_grade(self):
        if self.tf < self.t0:
            raise ValueError(f"tf={self.tf} anterior a t0={self.t0}")
        centro = self.centro_grade
        if centro - self.grid.half_width <= 0:
            raise ValueError("a grade de frequências inclui frequências não positivas")
        if abs(centro - self.cavity.omega_c) >= self.grid.half_width:
            raise ValueError("a grade de frequências não cobre omega_c")
        return self

    @property
    def x_atomo(self) -> float:
        """Posição do átomo; padrão no centro da cavidade, x_A = −L/2."""
        if self.atom.x_A is not None:
            return self.atom.x_A
        return -self.cavity.L / 2.0

    @property
    def centro_grade(self) -> float:
        if self.grid.center is not None:
            return self.grid.center
        return self.cavity.omega_c

    @property
    def d_omega(self) -> float:
        return 2.0 * self.grid.half_width / (self.grid.count - 1)

    def avisos(self) -> List[str]:
        """Avisos da cavidade e de resolução da grade."""
        avisos = list(self.cavity.avisos())
        avisos.extend(avisos_resolucao(self.d_omega, self.cavity.Gamma_c, self.tf - self.t0))
        if self.tf == self.t0:
            avisos.append("janela de tempo vazia (tf = t0)")
        return avisos

    def hash_configuracao(self) -> str:
        """SHA-256 do JSON canônico, 16 primeiros hex."""
        canonico = json.dumps(self.model_dump(mode="json"), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canonico.encode("utf-8")).hexdigest()[:16]

    def com_ajustes(self, **ajustes) -> "ScenarioConfig":
        """
        Cópia validada com campos alterados.

        As chaves aceitam caminho com ponto, por exemplo
        ``{"grid.count": 8001, "integrator.dt": 1e-3, "tf": 5.0}``.
        """
        dados = self.model_dump()
        for caminho, valor in ajustes.items():
            alvo = dados
            partes = caminho.split(".")
            for parte in partes[:-1]:
                alvo = alvo[parte]
            alvo[partes[-1]] = valor
        return validar_cenario(dados)


def erro_de_validacao(erro: ValidationError) -> ErroConfiguracao:
    """Converte o primeiro erro do pydantic em ErroConfiguracao nomeando o campo."""
    primeiro = erro.errors()[0]
    campo = ".".join(str(parte) for parte in primeiro["loc"]) or "<raiz>"
    return ErroConfiguracao(f"Campo inválido '{campo}': {primeiro['msg']}", campo=campo)


def validar_cenario(dados: dict) -> ScenarioConfig:
    """Valida um dicionário de cenário convertendo erros do pydantic."""
    try:
        return ScenarioConfig.model_validate(dados)
    except ValidationError as e:
        raise erro_de_validacao(e) from e


def carregar_cenario(caminho: Union[str, Path]) -> ScenarioConfig:
    """Lê um ScenarioConfig de um documento JSON."""
    caminho = Path(caminho)
    try:
        texto = caminho.read_text(encoding="utf-8")
    except OSError as e:
        raise ErroConfiguracao(f"Não foi possível ler o cenário {caminho}: {e}", campo="config") from e
    try:
        cenario = ScenarioConfig.model_validate_json(texto)
    except ValidationError as e:
        raise erro_de_validacao(e) from e
    log_debug(f"[CENARIO] Cenário '{cenario.name}' carregado de {caminho}")
    return cenario


def salvar_cenario(cenario: ScenarioConfig, caminho: Union[str, Path]) -> Path:
    caminho = Path(caminho)
    caminho.write_text(cenario.model_dump_json(indent=2), encoding="utf-8")
    return caminho


# ---------------------------------------------------------------------------
# Presets dos cenários de referência
# ---------------------------------------------------------------------------

def _cavidade_camada_unica(m: int, n: float, gamma_c: float = 2.0) -> CavitySpec:
    comprimento = m * math.pi * C_LUZ / OMEGA_C_REFERENCIA
    return CavitySpec(
        L=comprimento,
        m=m,
        omega_c=OMEGA_C_REFERENCIA,
        Gamma_c=gamma_c,
        mirror=MirrorSpec.quarto_de_onda(n, OMEGA_C_REFERENCIA),
    )


def _cavidade_lorentziana(gamma_c: float) -> CavitySpec:
    return CavitySpec(
        L=math.pi * C_LUZ / OMEGA_C_REFERENCIA,
        m=1,
        omega_c=OMEGA_C_REFERENCIA,
        Gamma_c=gamma_c,
    )


def _preset_fig3a() -> ScenarioConfig:
    return ScenarioConfig(
        name="fig3a",
        cavity=_cavidade_camada_unica(m=1, n=27.735),
        atom=AtomDriveSpec(g=-0.6),
        grid=GridSpec(half_width=40.0, count=4001),
        initial_state="excited",
        t0=0.0,
        tf=10.0,
    )


def _preset_fig3b() -> ScenarioConfig:
    return ScenarioConfig(
        name="fig3b",
        cavity=_cavidade_camada_unica(m=165, n=2.1756),
        atom=AtomDriveSpec(g=-0.6),
        grid=GridSpec(half_width=40.0, count=4001),
        initial_state="excited",
        t0=0.0,
        tf=20.0,
    )


def _grade_para(gamma_c: float) -> GridSpec:
    # Largura ≈ 15Γ_c e dω ≤ Γ_c/40 para Γ_c ≥ 10; Γ_c pequeno usa a grade da fig3
    if gamma_c <= 2.0:
        return GridSpec(half_width=40.0, count=1601)
    return GridSpec(half_width=15.0 * gamma_c, count=1201)


def _cenario_bombeado(nome: str, gamma_c: float) -> ScenarioConfig:
    return ScenarioConfig(
        name=nome,
        cavity=_cavidade_lorentziana(gamma_c),
        atom=AtomDriveSpec(
            g=-60.0,
            Delta=150.0,
            Delta_c=150.0,
            drive=DriveEnvelope(kind="sin2", amplitude=60.0, duration=1.0),
        ),
        grid=_grade_para(gamma_c),
        initial_state="ground",
        t0=0.0,
        tf=max(1.5, 1.0 + 8.0 / gamma_c),
    )


def _preset_fig6a() -> ScenarioConfig:
    # Import tardio: pulse_shaping depende deste módulo
    from dynamics.pulse_shaping import ShapingParams, design_rabi, gaussian_target

    alvo_t, alvo_fluxo = gaussian_target(1.0, 0.99)
    parametros = ShapingParams(
        g=-60.0,
        Delta=300.0,
        Gamma_c=90.0,
        eta_eff=0.99,
        target_t=list(alvo_t),
        target_flux=list(alvo_fluxo),
    )
    return ScenarioConfig(
        name="fig6a",
        cavity=_cavidade_lorentziana(90.0),
        atom=AtomDriveSpec(g=-60.0, Delta=300.0, Delta_c=300.0, drive=design_rabi(parametros)),
        grid=GridSpec(half_width=1350.0, count=2701),
        initial_state="ground",
        t0=float(alvo_t[0]),
        tf=float(alvo_t[-1]),
    )


def _preset_fig6b() -> ScenarioConfig:
    return ScenarioConfig(
        name="fig6b",
        cavity=_cavidade_lorentziana(10.0),
        atom=AtomDriveSpec(
            g=-60.0,
            Delta=300.0,
            Delta_c=300.0,
            drive=DriveEnvelope(kind="gaussian", amplitude=60.0, duration=1.0),
        ),
        grid=GridSpec(half_width=150.0, count=1201),
        initial_state="ground",
        t0=-2.0,
        tf=3.0,
    )


PRESETS: Dict[str, Callable[[], ScenarioConfig]] = {
    "fig3a": _preset_fig3a,
    "fig3b": _preset_fig3b,
    "fig4_G60": lambda: _cenario_bombeado("fig4_G60", 60.0),
    "fig4_G10": lambda: _cenario_bombeado("fig4_G10", 10.0),
    "fig4_G2": lambda: _cenario_bombeado("fig4_G2", 2.0),
    "fig6a": _preset_fig6a,
    "fig6b": _preset_fig6b,
}

# Famílias de varredura: fig4 no modelo de pseudo-modo, fig5 no dentro–fora
FAMILIAS: Dict[str, List[str]] = {
    "fig3": ["fig3a", "fig3b"],
    "fig4": ["fig4_G2", "fig4_G10", "fig4_G60"],
    "fig5": ["fig4_G2", "fig4_G10", "fig4_G60"],
    "fig6": ["fig6a", "fig6b"],
}


def preset(nome: str) -> ScenarioConfig:
    """Retorna o cenário de referência pelo nome."""
    construtor = PRESETS.get(nome)
    if construtor is None:
        raise ErroConfiguracao.com_opcoes(f"Preset desconhecido: '{nome}'", PRESETS, campo="preset")
    cenario = construtor()
    for aviso in cenario.avisos():
        log_warning(f"[CENARIO] {nome}: {aviso}")
    return cenario


def preset_family(nome: str) -> List[ScenarioConfig]:
    """Cenários de uma família de presets; os da fig5 são renomeados."""
    membros = FAMILIAS.get(nome)
    if membros is None:
        raise ErroConfiguracao.com_opcoes(f"Família desconhecida: '{nome}'", FAMILIAS, campo="familia")
    cenarios = [preset(membro) for membro in membros]
    if nome == "fig5":
        cenarios = [c.model_copy(update={"name": c.name.replace("fig4", "fig5")}) for c in cenarios]
    return cenarios
