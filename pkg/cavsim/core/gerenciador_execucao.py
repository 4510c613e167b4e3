# file: cavsim/core/gerenciador_execucao.py
"""
Gerenciador de Execuções do cavsim.

Cada comando grava suas tabelas em um diretório de saída e termina com o
manifesto JSON, sempre o último arquivo escrito.
"""

import os
import threading
import time
from pathlib import Path
from typing import List, Optional, Union

import pandas as pd
from pydantic import BaseModel, ConfigDict, Field

from core import __version__
from utils.cavsim_logger import (
    definir_id_execucao,
    gerar_id_execucao,
    limpar_id_execucao,
    log_debug,
    log_info,
    obter_status_logs,
)
from utils.configuracao_logs import limpar_cache_deduplicacao

# Configurações
DIRETORIO_SAIDA_PADRAO = os.getenv("CAVSIM_SAIDA", "saida")
FORMATO_NUMERICO = "%.12e"
NOME_MANIFESTO = "manifest.json"


class RunManifest(BaseModel):
    """Registro de uma execução: comando, hash da configuração, versão, tempo e arquivos."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    command: str
    config_hash: Optional[str] = None
    code_version: str = __version__
    wall_time: float = Field(ge=0.0)
    outputs: List[str] = Field(default_factory=list)
    warnings: List[str] = Field(default_factory=list)
    run_id: Optional[str] = None


class GerenciadorExecucao:
    """Acumula arquivos e avisos de uma execução e escreve o manifesto ao final."""

    def __init__(self, comando: str, diretorio: Union[str, Path, None] = None, config_hash: Optional[str] = None):
        self.comando = comando
        self.diretorio = Path(diretorio or DIRETORIO_SAIDA_PADRAO)
        self.config_hash = config_hash
        self._inicio = time.perf_counter()
        self._arquivos: List[str] = []
        self._avisos: List[str] = []
        self._trava = threading.Lock()
        self.execucao_id = (config_hash or gerar_id_execucao())[:8]
        definir_id_execucao(self.execucao_id)
        limpar_cache_deduplicacao()
        self._finalizado = False
        self.diretorio.mkdir(parents=True, exist_ok=True)
        log_debug(f"[MANIFESTO] Diretório de saída: {self.diretorio}")

    def salvar_tabela(self, nome: str, tabela: pd.DataFrame) -> Path:
        """Grava `nome`.csv com cabeçalho de uma linha e formato numérico fixo."""
        if self._finalizado:
            raise RuntimeError("execução já finalizada; o manifesto é sempre o último arquivo")
        caminho = self.diretorio / f"{nome}.csv"
        tabela.to_csv(caminho, index=False, float_format=FORMATO_NUMERICO, lineterminator="\n")
        with self._trava:
            if caminho.name not in self._arquivos:
                self._arquivos.append(caminho.name)
        log_debug(f"[MANIFESTO] Tabela gravada: {caminho} ({len(tabela)} linhas)")
        return caminho

    def registrar_avisos(self, avisos, origem: str = ""):
        prefixo = f"{origem}: " if origem else ""
        with self._trava:
            for aviso in avisos:
                texto = f"{prefixo}{aviso}"
                if texto not in self._avisos:
                    self._avisos.append(texto)

    @property
    def arquivos(self) -> List[str]:
        return list(self._arquivos)

    @property
    def avisos(self) -> List[str]:
        return list(self._avisos)

    def finalizar(self) -> RunManifest:
        """Escreve manifest.json (último arquivo da execução) e devolve o manifesto."""
        manifesto = RunManifest(
            command=self.comando,
            config_hash=self.config_hash,
            wall_time=time.perf_counter() - self._inicio,
            outputs=sorted(self._arquivos),
            warnings=list(self._avisos),
            run_id=self.execucao_id,
        )
        caminho = self.diretorio / NOME_MANIFESTO
        caminho.write_text(manifesto.model_dump_json(indent=2), encoding="utf-8")
        self._finalizado = True
        log_info(
            f"[MANIFESTO] {self.comando}: {len(manifesto.outputs)} arquivos, "
            f"{len(manifesto.warnings)} avisos, {manifesto.wall_time:.2f}s"
        )
        suprimidos = obter_status_logs()["deduplicacao"]["total_suprimidas"]
        if suprimidos:
            log_info(f"[MANIFESTO] {suprimidos} avisos repetidos suprimidos no log desta execução")
        limpar_id_execucao()
        return manifesto


def carregar_manifesto(diretorio: Union[str, Path]) -> RunManifest:
    caminho = Path(diretorio) / NOME_MANIFESTO
    return RunManifest.model_validate_json(caminho.read_text(encoding="utf-8"))
