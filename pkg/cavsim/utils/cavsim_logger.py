# file: cavsim/utils/cavsim_logger.py
"""
Logging centralizado do cavsim.

Cada módulo registra em "cavsim.<módulo>". Os registros carregam o id da
execução da CLI e, dentro de um ContextoLog, o nome do cenário.
"""

import functools
import inspect
import logging
import threading
import time
import uuid
from typing import Optional

from .configuracao_logs import (
    configurar_logging_principal,
    obter_estatisticas_deduplicacao,
)


_logger_principal = None

# Id de execução por thread
_execucao_storage = threading.local()

# Atributos que o LogRecord já possui e que `extra` não pode sobrescrever
_CAMPOS_RESERVADOS = frozenset(vars(logging.makeLogRecord({}))) | {'message', 'asctime', 'execucao_id', 'cenario'}


def gerar_id_execucao() -> str:
    """Id curto (8 hex) para uma execução."""
    return uuid.uuid4().hex[:8]


def obter_id_execucao() -> str:
    """Id da execução da thread atual, criado sob demanda."""
    execucao_id = getattr(_execucao_storage, 'execucao_id', None)
    if execucao_id is None:
        execucao_id = _execucao_storage.execucao_id = gerar_id_execucao()
    return execucao_id


def definir_id_execucao(execucao_id: str):
    _execucao_storage.execucao_id = execucao_id


def limpar_id_execucao():
    _execucao_storage.__dict__.pop('execucao_id', None)


def inicializar_logging(nivel: str = None, salvar_arquivo: bool = None):
    """Inicializa o logging; com argumentos explícitos reconfigura os manipuladores."""
    global _logger_principal
    if _logger_principal is None or nivel is not None or salvar_arquivo is not None:
        _logger_principal = configurar_logging_principal(nivel=nivel, salvar_arquivo=salvar_arquivo)
    return _logger_principal


def obter_logger(nome_modulo: str = None) -> logging.Logger:
    """Logger "cavsim.<módulo>"; sem nome usa o módulo de quem chama."""
    if _logger_principal is None:
        inicializar_logging()
    if nome_modulo is None:
        nome_modulo = inspect.currentframe().f_back.f_globals.get('__name__', 'desconhecido')
    return logging.getLogger(f"cavsim.{nome_modulo}")


class ContextoLog:
    """Anexa execucao_id, cenario e outros campos a todo registro criado dentro do bloco."""

    def __init__(self, execucao_id: str = None, cenario: str = None, **campos):
        self.campos = {
            'execucao_id': execucao_id or obter_id_execucao(),
            'cenario': cenario or 'N/A',
            **campos,
        }
        self._fabrica_externa = None

    def _fabrica(self, *args, **kwargs) -> logging.LogRecord:
        registro = self._fabrica_externa(*args, **kwargs)
        registro.__dict__.update(self.campos)
        return registro

    def __enter__(self):
        self._fabrica_externa = logging.getLogRecordFactory()
        logging.setLogRecordFactory(self._fabrica)
        return self

    def __exit__(self, exc_type, exc_val, exc_tb):
        if self._fabrica_externa is not None:
            logging.setLogRecordFactory(self._fabrica_externa)
        return False


def log_performance(func):
    """Registra a duração de cada chamada; o arquivo cavsim_performance.log guarda só esses registros."""
    nome_funcao = f"{func.__module__}.{func.__name__}"

    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        logger = obter_logger(func.__module__)
        inicio = time.perf_counter()
        try:
            resultado = func(*args, **kwargs)
        except Exception as e:
            duracao = time.perf_counter() - inicio
            logger.error(
                f"ERRO_PERFORMANCE: {nome_funcao} falhou após {duracao:.3f}s: {e}",
                extra={'tempo_execucao': duracao, 'funcao': nome_funcao, 'sucesso': False, 'erro': str(e)},
            )
            raise
        duracao = time.perf_counter() - inicio
        logger.info(
            f"PERFORMANCE: {nome_funcao} em {duracao:.3f}s",
            extra={'tempo_execucao': duracao, 'funcao': nome_funcao, 'sucesso': True},
        )
        return resultado

    return wrapper


def _preparar_contexto_seguro(**extras) -> dict:
    """Monta o `extra` descartando chaves reservadas do LogRecord."""
    extra = {chave: valor for chave, valor in extras.items() if chave not in _CAMPOS_RESERVADOS}
    if logging.getLogRecordFactory() is logging.LogRecord:
        extra['execucao_id'] = obter_id_execucao()
    return extra


def _registrar(nivel: int, mensagem: str, exception: Optional[Exception] = None, **extras):
    # dois quadros acima: o módulo que chamou log_info/log_warning/...
    modulo = inspect.currentframe().f_back.f_back.f_globals.get('__name__', 'desconhecido')
    obter_logger(modulo).log(
        nivel, mensagem, exc_info=exception, extra=_preparar_contexto_seguro(**extras), stacklevel=3
    )


def log_debug(message: str, **extras):
    _registrar(logging.DEBUG, message, **extras)


def log_info(message: str, **extras):
    _registrar(logging.INFO, message, **extras)


def log_warning(message: str, **extras):
    _registrar(logging.WARNING, message, **extras)


def log_error(message: str, exception: Optional[Exception] = None, **extras):
    _registrar(logging.ERROR, message, exception, **extras)


def obter_status_logs() -> dict:
    """Estado do logging: deduplicação, inicialização e nível do logger raiz."""
    return {
        'deduplicacao': obter_estatisticas_deduplicacao(),
        'logger_principal_ativo': _logger_principal is not None,
        'nivel': logging.getLevelName(logging.getLogger("cavsim").level),
    }
