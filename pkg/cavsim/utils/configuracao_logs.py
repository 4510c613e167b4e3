# file: cavsim/utils/configuracao_logs.py
"""
Configuração do sistema de logging do cavsim.

Recursos:
- Console colorido em stderr (stdout fica livre para as tabelas da CLI)
- Arquivos rotativos principal, de erros e de performance (JSON)
- Agrupamento de avisos de varredura que só diferem nos números
"""

import json
import logging
import logging.handlers
import os
import re
import sys
import threading
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, Tuple

from colorama import Fore, Style, just_fix_windows_console

# Configurações padrão
NIVEL_LOG_PADRAO = os.getenv("LOG_LEVEL", "INFO").upper()
DIRETORIO_LOGS = Path(os.getenv("CAVSIM_LOG_DIR", "logs"))
SALVAR_ARQUIVO_PADRAO = os.getenv("CAVSIM_LOG_ARQUIVO", "true").lower() == "true"
TAMANHO_MAX_LOG = 5 * 1024 * 1024  # 5MB
QUANTIDADE_BACKUP = 3
FORMATO_LOG = "%(asctime)s [%(levelname)s] [%(name)s] %(message)s"
FORMATO_DETALHADO = "%(asctime)s [%(levelname)s] [%(name)s:%(lineno)d] [%(funcName)s] %(message)s"

# Agrupamento de avisos
DEDUPLICACAO_HABILITADA = True
JANELA_DEDUPLICACAO = 300.0  # segundos
MAX_MENSAGENS_IDENTICAS = 3

# Avisos que nunca são agrupados
MARCADORES_SEMPRE_VISIVEIS = ("[MANIFESTO]", "[VERIFICACAO]", "ABORTO_NUMERICO")

_NUMERO = re.compile(r"[-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?")


@dataclass
class _Ocorrencias:
    inicio: float
    total: int = 0


class DeduplicadorLogs:
    """
    Agrupa avisos repetidos de uma varredura.

    Uma varredura de Γ_c, dt ou tamanho de grade repete o mesmo aviso com
    valores diferentes. O molde da mensagem (números trocados por '#') junto
    com o logger identifica a repetição; depois de `limite` ocorrências dentro
    da janela sai uma linha de resumo e o restante é suprimido.
    """

    def __init__(self, janela: float = JANELA_DEDUPLICACAO, limite: int = MAX_MENSAGENS_IDENTICAS):
        self.janela = janela
        self.limite = limite
        self._ocorrencias: Dict[Tuple[str, str], _Ocorrencias] = {}
        self._trava = threading.Lock()

    @staticmethod
    def molde(mensagem: str) -> str:
        return _NUMERO.sub("#", mensagem)

    def deve_registrar(self, record: logging.LogRecord) -> Tuple[bool, str]:
        """Devolve (registrar?, mensagem a exibir)."""
        mensagem = record.getMessage()
        if not DEDUPLICACAO_HABILITADA or record.levelno != logging.WARNING:
            return True, mensagem
        if any(marcador in mensagem for marcador in MARCADORES_SEMPRE_VISIVEIS):
            return True, mensagem

        agora = time.monotonic()
        chave = (record.name, self.molde(mensagem))
        with self._trava:
            self._descartar_expiradas(agora)
            ocorrencia = self._ocorrencias.setdefault(chave, _Ocorrencias(inicio=agora))
            ocorrencia.total += 1
            if ocorrencia.total <= self.limite:
                return True, mensagem
            if ocorrencia.total == self.limite + 1:
                return True, (
                    f"[DEDUPLICADO] Aviso repetido {self.limite}x em {record.name}: '{chave[1]}'. "
                    f"Novas ocorrências suprimidas por {int(self.janela)}s."
                )
            return False, ""

    def _descartar_expiradas(self, agora: float):
        expiradas = [chave for chave, o in self._ocorrencias.items() if agora - o.inicio > self.janela]
        for chave in expiradas:
            del self._ocorrencias[chave]

    def estatisticas(self) -> Dict:
        with self._trava:
            return {
                'moldes_ativos': len(self._ocorrencias),
                'total_suprimidas': sum(max(0, o.total - self.limite - 1) for o in self._ocorrencias.values()),
                'configuracao': {
                    'habilitada': DEDUPLICACAO_HABILITADA,
                    'janela_segundos': self.janela,
                    'limite_por_molde': self.limite,
                },
            }

    def limpar(self):
        with self._trava:
            self._ocorrencias.clear()


_deduplicador_global = DeduplicadorLogs()


def _garantir_contexto(record: logging.LogRecord):
    for campo in ('execucao_id', 'cenario'):
        if not hasattr(record, campo):
            setattr(record, campo, 'N/A')


def _prefixo_contexto(record: logging.LogRecord) -> str:
    prefixo = ""
    if record.execucao_id != 'N/A':
        prefixo += f"[R:{record.execucao_id}]"
    if record.cenario != 'N/A':
        prefixo += f"[C:{record.cenario}]"
    return prefixo


class FormatadorContextual(logging.Formatter):
    """Insere [R:<execução>][C:<cenário>] depois do nível e anexa a duração quando houver."""

    def format(self, record):
        _garantir_contexto(record)
        texto = super().format(record)
        prefixo = _prefixo_contexto(record)
        if prefixo:
            texto = texto.replace(f"[{record.levelname}]", f"[{record.levelname}] {prefixo}", 1)
        if hasattr(record, 'tempo_execucao'):
            texto += f" | TEMPO={record.tempo_execucao:.3f}s"
        return texto


class FormatadorColorido(FormatadorContextual):
    """Cores por nível, só quando stderr é um terminal."""

    CORES = {
        'DEBUG': Fore.CYAN,
        'INFO': Fore.GREEN,
        'WARNING': Fore.YELLOW,
        'ERROR': Fore.RED,
        'CRITICAL': Fore.MAGENTA,
    }

    def format(self, record):
        texto = super().format(record)
        if not getattr(sys.stderr, 'isatty', lambda: False)():
            return texto
        return f"{self.CORES.get(record.levelname, '')}{texto}{Style.RESET_ALL}"


class FormatadorJSON(logging.Formatter):
    """Uma linha JSON por registro, com os campos numéricos das integrações."""

    CAMPOS_EXTRAS = (
        'tempo_execucao', 'funcao', 'sucesso', 'erro', 'modelo', 'passos',
        'pontos_grade', 'categoria',
    )

    def format(self, record):
        _garantir_contexto(record)
        entrada = {
            'instante': self.formatTime(record, "%Y-%m-%dT%H:%M:%S"),
            'nivel': record.levelname,
            'origem': f"{record.name}:{record.funcName}:{record.lineno}",
            'mensagem': record.getMessage(),
            'execucao_id': record.execucao_id,
            'cenario': record.cenario,
        }
        entrada.update({campo: getattr(record, campo) for campo in self.CAMPOS_EXTRAS if hasattr(record, campo)})
        if record.exc_info:
            entrada['excecao'] = self.formatException(record.exc_info)
        return json.dumps(entrada, ensure_ascii=False, default=str)


class FiltroPerformance(logging.Filter):
    """Só registros do decorator log_performance."""

    def filter(self, record):
        return hasattr(record, 'tempo_execucao')


class FiltroDeduplicacao(logging.Filter):
    """Aplica o deduplicador global e troca a mensagem pela linha de resumo."""

    def filter(self, record):
        registrar, mensagem = _deduplicador_global.deve_registrar(record)
        if registrar and mensagem != record.getMessage():
            record.msg, record.args = mensagem, ()
        return registrar


def _manipulador_rotativo(nome_arquivo: str, nivel: int, formatador: logging.Formatter) -> logging.Handler:
    manipulador = logging.handlers.RotatingFileHandler(
        DIRETORIO_LOGS / nome_arquivo,
        maxBytes=TAMANHO_MAX_LOG,
        backupCount=QUANTIDADE_BACKUP,
        encoding='utf-8',
    )
    manipulador.setLevel(nivel)
    manipulador.setFormatter(formatador)
    return manipulador


def configurar_logging_principal(
    nivel: str = None,
    salvar_arquivo: bool = None,
) -> logging.Logger:
    """
    Configura o logger raiz "cavsim".

    Args:
        nivel (str, optional): Nível do console (DEBUG, INFO, WARNING, ERROR). Padrão: LOG_LEVEL.
        salvar_arquivo (bool, optional): Se grava os arquivos rotativos. Padrão: CAVSIM_LOG_ARQUIVO.

    Returns:
        logging.Logger: Logger "cavsim" configurado.
    """
    nivel = (nivel or NIVEL_LOG_PADRAO).upper()
    if salvar_arquivo is None:
        salvar_arquivo = SALVAR_ARQUIVO_PADRAO

    just_fix_windows_console()

    raiz = logging.getLogger("cavsim")
    raiz.setLevel(logging.DEBUG)
    raiz.propagate = False
    for manipulador in list(raiz.handlers):
        raiz.removeHandler(manipulador)
        manipulador.close()

    console = logging.StreamHandler(sys.stderr)
    console.setLevel(getattr(logging, nivel, logging.INFO))
    console.setFormatter(FormatadorColorido(FORMATO_LOG))
    console.addFilter(FiltroDeduplicacao())
    raiz.addHandler(console)

    if salvar_arquivo:
        DIRETORIO_LOGS.mkdir(parents=True, exist_ok=True)

        principal = _manipulador_rotativo("cavsim_main.log", logging.DEBUG, FormatadorContextual(FORMATO_DETALHADO))
        principal.addFilter(FiltroDeduplicacao())
        raiz.addHandler(principal)

        raiz.addHandler(
            _manipulador_rotativo("cavsim_errors.log", logging.ERROR, FormatadorContextual(FORMATO_DETALHADO))
        )

        performance = _manipulador_rotativo("cavsim_performance.log", logging.INFO, FormatadorJSON())
        performance.addFilter(FiltroPerformance())
        raiz.addHandler(performance)

    raiz.debug(f"Logging cavsim inicializado (console={nivel}, arquivos={'sim' if salvar_arquivo else 'não'})")
    return raiz


def obter_estatisticas_deduplicacao() -> Dict:
    """Estatísticas do agrupamento de avisos."""
    return _deduplicador_global.estatisticas()


def limpar_cache_deduplicacao():
    """Esquece todas as ocorrências registradas."""
    _deduplicador_global.limpar()
