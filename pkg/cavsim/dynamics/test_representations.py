#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""Testes das três representações da dinâmica."""

import math
import sys
import unittest
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).parent.parent))

from core.units_and_setup import preset
from dynamics.representations import (
    PseudoModeState,
    espectro_final,
    fit_decay_rate,
    integrate,
    pseudo_mode_spectrum,
)
from utils.excecoes import ErroConfiguracao, ErroDominio


def _decaimento_livre(**ajustes):
    """Cavidade Lorentziana Γ_c = 10 sem bombeio."""
    base = {"atom.drive.kind": "zero", "atom.Delta": 0.0, "atom.Delta_c": 0.0, "tf": 2.0}
    base.update(ajustes)
    return preset("fig4_G10").com_ajustes(**base)


class TestPseudoModo(unittest.TestCase):
    """Modelo não hermitiano de três níveis."""

    def test_decaimento_do_foton(self):
        cenario = _decaimento_livre(**{"atom.g": 0.0, "initial_state": "photon"})
        trajetoria = integrate("pseudo", cenario)
        np.testing.assert_allclose(trajetoria.P_photon, np.exp(-10.0 * trajetoria.tempos), atol=1e-6)
        self.assertAlmostEqual(trajetoria.n_leaked[-1], 1.0, delta=1e-4)
        np.testing.assert_allclose(trajetoria.norma_total, 1.0, atol=1e-6)
        self.assertAlmostEqual(fit_decay_rate(trajetoria.tempos, trajetoria.P_photon, (0.2, 1.5)), 10.0, delta=1e-3)

    def test_rabi_de_vacuo_sem_perda(self):
        cenario = _decaimento_livre(**{"atom.g": -0.6, "cavity.Gamma_c": 0.0, "initial_state": "excited"})
        trajetoria = integrate("pseudo", cenario)
        np.testing.assert_allclose(trajetoria.P_e, np.cos(0.6 * trajetoria.tempos) ** 2, atol=1e-5)
        np.testing.assert_allclose(trajetoria.n_leaked, 0.0, atol=1e-15)

    def test_rabi_de_vacuo_dentro_fora_sem_perda(self):
        cenario = _decaimento_livre(
            **{"atom.g": -0.6, "cavity.Gamma_c": 0.0, "initial_state": "excited", "grid.count": 101, "tf": 6.0}
        )
        trajetoria = integrate("inout", cenario)
        np.testing.assert_allclose(trajetoria.P_e, np.cos(0.6 * trajetoria.tempos) ** 2, atol=1e-5)
        np.testing.assert_allclose(trajetoria.P_photon, np.sin(0.6 * trajetoria.tempos) ** 2, atol=1e-5)
        np.testing.assert_allclose(trajetoria.reservoir_norm, 0.0, atol=1e-12)

    def test_ordem_qualitativa_da_fig4(self):
        """Quanto maior Γ_c, menos |f,1⟩ é populado."""
        maximos = {nome: float(np.max(integrate("pseudo", preset(nome)).P_photon)) for nome in ("fig4_G2", "fig4_G10", "fig4_G60")}
        self.assertGreater(maximos["fig4_G2"], maximos["fig4_G10"])
        self.assertGreater(maximos["fig4_G10"], maximos["fig4_G60"])

    def test_estado_tipado(self):
        trajetoria = integrate("pseudo", _decaimento_livre(**{"atom.g": 0.0, "initial_state": "photon"}))
        estado = trajetoria.estado(-1)
        self.assertIsInstance(estado, PseudoModeState)
        self.assertAlmostEqual(estado.soma_dilatada, 1.0, delta=1e-6)
        self.assertEqual(list(trajetoria.para_dataframe().columns), ["t", "P_g", "P_e", "P_photon", "n_leaked"])


class TestContinuo(unittest.TestCase):
    """Modos verdadeiros e dentro–fora contra o pseudo-modo na cavidade de alta finesse."""

    @classmethod
    def setUpClass(cls):
        cls.cenario = preset("fig3a").com_ajustes(**{"grid.count": 1601, "tf": 5.0})
        cls.pseudo = integrate("pseudo", cls.cenario)
        cls.lorentz = integrate("true", cls.cenario, acoplamento="lorentzian")
        cls.dentro_fora = integrate("inout", cls.cenario)

    def test_norma_conservada(self):
        for trajetoria in (self.lorentz, self.dentro_fora):
            with self.subTest(modelo=trajetoria.modelo):
                np.testing.assert_allclose(trajetoria.norma_total, 1.0, atol=1e-6)

    def test_populacao_excitada_coincide(self):
        for trajetoria in (self.lorentz, self.dentro_fora):
            with self.subTest(modelo=trajetoria.modelo):
                interpolada = np.interp(self.pseudo.tempos, trajetoria.tempos, trajetoria.P_e)
                np.testing.assert_allclose(interpolada, self.pseudo.P_e, atol=1e-2)

    def test_foton_na_cavidade(self):
        self.assertIsNone(self.lorentz.P_photon)
        interpolada = np.interp(self.pseudo.tempos, self.dentro_fora.tempos, self.dentro_fora.P_photon)
        np.testing.assert_allclose(interpolada, self.pseudo.P_photon, atol=1e-2)

    def test_balanco_do_reservatorio(self):
        espectro = espectro_final(self.dentro_fora)
        restante = 1.0 - self.dentro_fora.P_g[-1] - self.dentro_fora.P_e[-1] - self.dentro_fora.P_photon[-1]
        self.assertAlmostEqual(espectro.integral, restante, delta=1e-5)

    def test_espectro_de_pseudo_modo(self):
        espectro = pseudo_mode_spectrum(self.lorentz)
        self.assertEqual(espectro.omega.size, 1601)
        with self.assertRaises(ErroDominio):
            pseudo_mode_spectrum(self.dentro_fora)

    def test_taxa_de_decaimento_do_foton_dentro_fora(self):
        cenario = preset("fig3a").com_ajustes(**{"atom.g": 0.0, "initial_state": "photon", "grid.count": 1601, "tf": 5.0})
        trajetoria = integrate("inout", cenario)
        self.assertAlmostEqual(fit_decay_rate(trajetoria.tempos, trajetoria.P_photon, (0.5, 3.0)), 2.0, delta=0.06)

    def test_colunas(self):
        self.assertIn("P_reservoir", self.dentro_fora.para_dataframe().columns)
        self.assertNotIn("P_photon", self.lorentz.para_dataframe().columns)


class TestErros(unittest.TestCase):
    """Configurações incompatíveis."""

    def test_modelo_desconhecido(self):
        with self.assertRaises(ErroConfiguracao):
            integrate("quantico", preset("fig3a"))

    def test_foton_inicial_nos_modos_verdadeiros(self):
        cenario = preset("fig3a").com_ajustes(**{"initial_state": "photon", "grid.count": 101, "tf": 0.1})
        with self.assertRaises(ErroConfiguracao):
            integrate("true", cenario)

    def test_acoplamento_exato_sem_espelho(self):
        with self.assertRaises(ErroConfiguracao):
            integrate("true", _decaimento_livre(**{"grid.count": 101, "tf": 0.1}))

    def test_janela_vazia(self):
        cenario = preset("fig3a").com_ajustes(**{"tf": 0.0, "grid.count": 101})
        for modelo in ("true", "inout", "pseudo"):
            with self.subTest(modelo=modelo):
                trajetoria = integrate(modelo, cenario)
                self.assertTrue(trajetoria.vazia)
                self.assertEqual(trajetoria.P_g.size, 0)
        self.assertTrue(espectro_final(integrate("inout", cenario)).vazio)

    def test_ajuste_com_poucos_pontos(self):
        with self.assertRaises(ErroDominio):
            fit_decay_rate(np.array([0.0, 1.0]), np.array([1.0, math.exp(-1.0)]), (0.0, 1.0))


if __name__ == "__main__":
    unittest.main()
