#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""Testes do sistema de logging do cavsim."""

import json
import logging
import sys
import unittest
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent.parent))

from utils.cavsim_logger import (
    ContextoLog,
    definir_id_execucao,
    inicializar_logging,
    limpar_id_execucao,
    log_performance,
    obter_id_execucao,
    obter_status_logs,
)
from utils.configuracao_logs import (
    FORMATO_LOG,
    MAX_MENSAGENS_IDENTICAS,
    DeduplicadorLogs,
    FormatadorContextual,
    FormatadorJSON,
    limpar_cache_deduplicacao,
)


def _registro(mensagem, nivel=logging.WARNING):
    return logging.LogRecord("cavsim.teste", nivel, __file__, 1, mensagem, (), None, func="varredura")


class TestDeduplicador(unittest.TestCase):
    """Supressão de avisos repetidos."""

    def test_suprime_depois_do_limite(self):
        deduplicador = DeduplicadorLogs()
        resultados = [deduplicador.deve_registrar(_registro("grade grossa")) for _ in range(MAX_MENSAGENS_IDENTICAS + 2)]

        for registrar, mensagem in resultados[:MAX_MENSAGENS_IDENTICAS]:
            self.assertTrue(registrar)
            self.assertEqual(mensagem, "grade grossa")
        registrar, mensagem = resultados[MAX_MENSAGENS_IDENTICAS]
        self.assertTrue(registrar)
        self.assertIn("[DEDUPLICADO]", mensagem)
        self.assertFalse(resultados[-1][0])

    def test_agrupa_mensagens_que_so_diferem_nos_numeros(self):
        deduplicador = DeduplicadorLogs()
        for k in range(MAX_MENSAGENS_IDENTICAS):
            registrar, _ = deduplicador.deve_registrar(_registro(f"dt={1e-3 * (k + 1):.3e} acima da guarda 2.5e-04"))
            self.assertTrue(registrar)
        _, resumo = deduplicador.deve_registrar(_registro("dt=9.000e-03 acima da guarda 2.5e-04"))
        self.assertIn("[DEDUPLICADO]", resumo)
        self.assertIn("dt=# acima da guarda #", resumo)

    def test_info_nunca_agrupado(self):
        deduplicador = DeduplicadorLogs()
        for _ in range(MAX_MENSAGENS_IDENTICAS + 3):
            registrar, mensagem = deduplicador.deve_registrar(_registro("PERFORMANCE: integrate em 0.1s", nivel=logging.INFO))
            self.assertTrue(registrar)
            self.assertEqual(mensagem, "PERFORMANCE: integrate em 0.1s")

    def test_marcadores_sempre_visiveis(self):
        deduplicador = DeduplicadorLogs()
        for _ in range(MAX_MENSAGENS_IDENTICAS + 3):
            registrar, _ = deduplicador.deve_registrar(_registro("[MANIFESTO] gravado"))
            self.assertTrue(registrar)

    def test_status_apos_limpeza(self):
        limpar_cache_deduplicacao()
        status = obter_status_logs()
        self.assertEqual(status["deduplicacao"]["moldes_ativos"], 0)
        self.assertEqual(status["deduplicacao"]["total_suprimidas"], 0)
        self.assertIn("logger_principal_ativo", status)


class TestFormatadores(unittest.TestCase):
    """Prefixo de contexto e saída JSON."""

    def test_prefixo_com_execucao_e_cenario(self):
        registro = _registro("passo reduzido")
        registro.execucao_id = "abc12345"
        registro.cenario = "fig3a"
        formatado = FormatadorContextual(FORMATO_LOG).format(registro)
        self.assertIn("[WARNING] [R:abc12345][C:fig3a]", formatado)

    def test_sem_contexto_nao_tem_prefixo(self):
        formatado = FormatadorContextual(FORMATO_LOG).format(_registro("passo reduzido"))
        self.assertNotIn("[R:", formatado)
        self.assertNotIn("[C:", formatado)

    def test_json_com_campos_extras(self):
        registro = _registro("integração concluída", nivel=logging.INFO)
        registro.tempo_execucao = 0.25
        registro.modelo = "inout"
        entrada = json.loads(FormatadorJSON().format(registro))
        self.assertEqual(entrada["nivel"], "INFO")
        self.assertEqual(entrada["execucao_id"], "N/A")
        self.assertEqual(entrada["modelo"], "inout")
        self.assertAlmostEqual(entrada["tempo_execucao"], 0.25)


class TestContexto(unittest.TestCase):
    """Id de execução e gerenciador de contexto."""

    def tearDown(self):
        limpar_id_execucao()

    def test_id_de_execucao(self):
        definir_id_execucao("fixo0001")
        self.assertEqual(obter_id_execucao(), "fixo0001")
        limpar_id_execucao()
        novo = obter_id_execucao()
        self.assertNotEqual(novo, "fixo0001")
        self.assertEqual(len(novo), 8)

    def test_contexto_anexa_campos_e_restaura_fabrica(self):
        fabrica_original = logging.getLogRecordFactory()
        with ContextoLog(execucao_id="r1", cenario="fig6b"):
            registro = logging.getLogRecordFactory()("cavsim.x", logging.INFO, __file__, 1, "m", (), None)
            self.assertEqual(registro.execucao_id, "r1")
            self.assertEqual(registro.cenario, "fig6b")
        self.assertIs(logging.getLogRecordFactory(), fabrica_original)


class TestLogPerformance(unittest.TestCase):
    """Decorator de tempo de execução."""

    @classmethod
    def setUpClass(cls):
        inicializar_logging(nivel="WARNING", salvar_arquivo=False)

    def test_registra_tempo(self):
        @log_performance
        def soma(a, b):
            return a + b

        with self.assertLogs("cavsim", level="INFO") as cm:
            self.assertEqual(soma(2, 3), 5)
        registro = cm.records[-1]
        self.assertTrue(registro.sucesso)
        self.assertGreaterEqual(registro.tempo_execucao, 0.0)

    def test_registra_falha_e_propaga(self):
        @log_performance
        def falha():
            raise ValueError("estado não finito")

        with self.assertLogs("cavsim", level="ERROR") as cm:
            with self.assertRaises(ValueError):
                falha()
        self.assertFalse(cm.records[-1].sucesso)
        self.assertIn("estado não finito", cm.records[-1].erro)


if __name__ == "__main__":
    unittest.main()
