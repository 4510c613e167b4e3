#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""Testes das unidades, registros de cenário e presets."""

import json
import math
import sys
import tempfile
import unittest
from pathlib import Path

import numpy as np

# Adiciona diretório cavsim ao path para permitir importações
sys.path.insert(0, str(Path(__file__).parent.parent))

from core.units_and_setup import (
    FAMILIAS,
    PRESETS,
    CavitySpec,
    DriveEnvelope,
    MirrorSpec,
    ScenarioConfig,
    UnitSystem,
    carregar_cenario,
    preset,
    preset_family,
    salvar_cenario,
    validar_cenario,
)
from utils.excecoes import ErroConfiguracao


def _cenario_minimo(**extras) -> dict:
    dados = {
        "name": "teste",
        "cavity": {"L": math.pi / 2416.0, "m": 1, "omega_c": 2416.0, "Gamma_c": 2.0},
        "atom": {"g": -0.6},
        "grid": {"half_width": 40.0, "count": 101},
        "t0": 0.0,
        "tf": 1.0,
    }
    dados.update(extras)
    return dados


class TestUnidades(unittest.TestCase):
    """Sistema de unidades escaladas."""

    def test_unidades_fixas(self):
        self.assertEqual(UnitSystem().c, 1.0)
        with self.assertRaises(Exception):
            UnitSystem(c=3e8)


class TestRegistros(unittest.TestCase):
    """Validação dos registros pydantic."""

    def test_espelho_quarto_de_onda(self):
        espelho = MirrorSpec.quarto_de_onda(27.735, 2416.0)
        self.assertAlmostEqual(espelho.n * espelho.delta * 2416.0, math.pi / 2, places=12)
        self.assertAlmostEqual(espelho.r0, 0.9304, places=4)

    def test_indice_menor_que_um_rejeitado(self):
        with self.assertRaises(Exception):
            MirrorSpec(n=0.5, delta=1e-3)

    def test_campos_extras_rejeitados(self):
        with self.assertRaises(ErroConfiguracao) as ctx:
            validar_cenario(_cenario_minimo(cor="azul"))
        self.assertEqual(ctx.exception.campo, "cor")

    def test_erro_nomeia_campo_aninhado(self):
        dados = _cenario_minimo()
        dados["cavity"]["L"] = -1.0
        with self.assertRaises(ErroConfiguracao) as ctx:
            validar_cenario(dados)
        self.assertEqual(ctx.exception.campo, "cavity.L")

    def test_janela_invertida(self):
        with self.assertRaises(ErroConfiguracao):
            validar_cenario(_cenario_minimo(t0=2.0, tf=1.0))

    def test_grade_com_frequencia_negativa(self):
        with self.assertRaises(ErroConfiguracao):
            validar_cenario(_cenario_minimo(grid={"half_width": 3000.0, "count": 11}))

    def test_infinito_rejeitado(self):
        dados = _cenario_minimo()
        dados["atom"]["g"] = float("inf")
        with self.assertRaises(ErroConfiguracao):
            validar_cenario(dados)

    def test_posicao_padrao_do_atomo(self):
        cenario = validar_cenario(_cenario_minimo())
        self.assertAlmostEqual(cenario.x_atomo, -cenario.cavity.L / 2)

    def test_avisos_de_alto_q(self):
        cavidade = CavitySpec(L=math.pi / 2416.0, m=1, omega_c=2416.0, Gamma_c=100.0)
        self.assertTrue(any("Q" in aviso for aviso in cavidade.avisos()))

    def test_aviso_de_ressonancia(self):
        cavidade = CavitySpec(L=0.01, m=1, omega_c=2416.0, Gamma_c=2.0)
        self.assertTrue(any("difere" in aviso for aviso in cavidade.avisos()))


class TestEnvelope(unittest.TestCase):
    """Envelopes de bombeio."""

    def test_sin2_zero_fora_da_janela(self):
        drive = DriveEnvelope(kind="sin2", amplitude=60.0, duration=1.0)
        self.assertEqual(drive(-0.1), 0.0)
        self.assertEqual(drive(1.1), 0.0)
        self.assertAlmostEqual(drive(0.5), 60.0)

    def test_gaussiana(self):
        drive = DriveEnvelope(kind="gaussian", amplitude=60.0, duration=1.0)
        self.assertAlmostEqual(drive(0.0), 60.0)
        self.assertAlmostEqual(drive(1.0), 60.0 * math.exp(-math.pi ** 2))

    def test_tabulado_interpola_e_zera_fora(self):
        t = np.linspace(0.0, 1.0, 11)
        drive = DriveEnvelope.tabulado(t, t ** 2)
        self.assertAlmostEqual(drive(0.5), 0.25, places=3)
        self.assertEqual(drive(2.0), 0.0)
        np.testing.assert_allclose(drive(np.array([0.0, 1.0])), [0.0, 1.0])
        self.assertAlmostEqual(drive.amplitude_maxima(), 1.0)

    def test_tabela_nao_crescente(self):
        with self.assertRaises(Exception):
            DriveEnvelope(kind="tabulated", samples_t=[0.0, 0.0], samples_omega=[1.0, 2.0])


class TestPresets(unittest.TestCase):
    """Presets de referência."""

    def test_todos_os_presets_validam(self):
        for nome in PRESETS:
            with self.subTest(preset=nome):
                cenario = preset(nome)
                self.assertIsInstance(cenario, ScenarioConfig)
                self.assertEqual(cenario.name, nome)

    def test_fig3a(self):
        cenario = preset("fig3a")
        self.assertAlmostEqual(cenario.cavity.L, 0.0013, places=4)
        self.assertAlmostEqual(cenario.cavity.round_trip, 2 * cenario.cavity.L)
        self.assertEqual(cenario.initial_state, "excited")
        self.assertEqual(cenario.atom.drive.kind, "zero")
        self.assertEqual(cenario.cavity.avisos(), [])

    def test_fig4_janela_cobre_o_decaimento(self):
        self.assertAlmostEqual(preset("fig4_G60").tf, 1.5)
        self.assertAlmostEqual(preset("fig4_G10").tf, 1.8)
        self.assertAlmostEqual(preset("fig4_G2").tf, 5.0)

    def test_fig6a_usa_bombeio_desenhado(self):
        cenario = preset("fig6a")
        self.assertEqual(cenario.atom.drive.kind, "tabulated")
        self.assertAlmostEqual(cenario.t0, -2.0)
        self.assertAlmostEqual(cenario.tf, 3.0)

    def test_preset_desconhecido_lista_validos(self):
        with self.assertRaises(ErroConfiguracao) as ctx:
            preset("fig99")
        self.assertIn("fig3a", str(ctx.exception))

    def test_familia_fig5_renomeada(self):
        nomes = [c.name for c in preset_family("fig5")]
        self.assertEqual(nomes, ["fig5_G2", "fig5_G10", "fig5_G60"])
        self.assertEqual(len(preset_family("fig4")), len(FAMILIAS["fig4"]))


class TestSerializacao(unittest.TestCase):
    """JSON, hash e ajustes."""

    def test_ida_e_volta_em_arquivo(self):
        cenario = preset("fig3b")
        with tempfile.TemporaryDirectory() as pasta:
            caminho = salvar_cenario(cenario, Path(pasta) / "cenario.json")
            lido = carregar_cenario(caminho)
        self.assertEqual(lido, cenario)
        self.assertEqual(lido.hash_configuracao(), cenario.hash_configuracao())

    def test_hash_muda_com_parametro(self):
        cenario = preset("fig3a")
        ajustado = cenario.com_ajustes(**{"grid.count": 8001})
        self.assertEqual(ajustado.grid.count, 8001)
        self.assertNotEqual(ajustado.hash_configuracao(), cenario.hash_configuracao())
        self.assertEqual(len(cenario.hash_configuracao()), 16)

    def test_arquivo_inexistente(self):
        with self.assertRaises(ErroConfiguracao):
            carregar_cenario("/caminho/que/nao/existe.json")

    def test_json_invalido_nomeia_campo(self):
        with tempfile.TemporaryDirectory() as pasta:
            caminho = Path(pasta) / "ruim.json"
            dados = _cenario_minimo()
            dados["grid"] = {"count": 1}
            caminho.write_text(json.dumps(dados), encoding="utf-8")
            with self.assertRaises(ErroConfiguracao) as ctx:
                carregar_cenario(caminho)
        self.assertEqual(ctx.exception.campo, "grid.count")


if __name__ == "__main__":
    unittest.main()
