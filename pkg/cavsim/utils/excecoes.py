# file: cavsim/utils/excecoes.py
"""Exceções do cavsim e seus códigos de saída na CLI."""

from typing import Iterable, Optional


class ErroCavsim(Exception):
    """Base de todos os erros do simulador."""

    codigo_saida = 1


class ErroConfiguracao(ErroCavsim, ValueError):
    """Configuração inválida: campo errado, preset desconhecido, arquivo ilegível."""

    codigo_saida = 2

    def __init__(self, mensagem: str, campo: Optional[str] = None):
        super().__init__(mensagem)
        self.campo = campo

    @classmethod
    def com_opcoes(cls, mensagem: str, validos: Iterable[str], campo: Optional[str] = None):
        """Monta a mensagem listando os valores aceitos, um por linha."""
        lista = "\n- ".join(sorted(validos))
        return cls(f"{mensagem}\nValores válidos:\n- {lista}", campo=campo)


class ErroDominio(ErroCavsim, ValueError):
    """Argumento fora do domínio físico da operação."""

    codigo_saida = 2


class ErroConvergencia(ErroCavsim, RuntimeError):
    """Iteração de ponto fixo sem convergência."""

    codigo_saida = 3

    def __init__(self, mensagem: str, indice_modo: Optional[int] = None):
        super().__init__(mensagem)
        self.indice_modo = indice_modo


class ErroNumerico(ErroCavsim, RuntimeError):
    """Estado não finito durante a integração."""

    codigo_saida = 3

    def __init__(self, mensagem: str, tempo: Optional[float] = None):
        super().__init__(mensagem)
        self.tempo = tempo


class ErroVerificacao(ErroCavsim):
    """Algum oráculo numérico ficou fora da tolerância."""

    codigo_saida = 4
