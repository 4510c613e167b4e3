#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""Testes das funções de acoplamento."""

import math
import sys
import unittest
from pathlib import Path

import numpy as np
from scipy.integrate import quad

sys.path.insert(0, str(Path(__file__).parent.parent))

from core.continuum_grid import build_grid
from core.units_and_setup import preset
from optics.couplings import (
    CouplingSet,
    coupling_mismatch,
    eta_discreto,
    eta_exact,
    eta_lorentzian,
    kappa_c,
    kappa_discreto,
    markov_condition,
    tabela_acoplamentos,
)
from utils.excecoes import ErroConfiguracao


class TestAcoplamentos(unittest.TestCase):
    """η exato, η̂ Lorentziano e κ_c."""

    @classmethod
    def setUpClass(cls):
        cls.fig3a = preset("fig3a")
        cls.fig3b = preset("fig3b")
        cls.exato_a = CouplingSet.do_cenario(cls.fig3a)
        cls.exato_b = CouplingSet.do_cenario(cls.fig3b)

    def test_lorentziana_normalizada(self):
        """∫|η̂|² dω = g²."""
        c = self.exato_a.model_copy(update={"mode": "lorentzian"})
        omega_c = self.fig3a.cavity.omega_c
        integral, _ = quad(lambda w: abs(eta_lorentzian(w, c)) ** 2, omega_c - 2000, omega_c + 2000, points=[omega_c], limit=500)
        self.assertAlmostEqual(integral / c.g ** 2, 1.0, delta=0.01)

    def test_pico_da_lorentziana(self):
        c = self.exato_a
        valor = abs(eta_lorentzian(self.fig3a.cavity.omega_c, c)) ** 2
        self.assertAlmostEqual(valor, 2 * c.g ** 2 / (math.pi * self.fig3a.cavity.Gamma_c), places=12)

    def test_kappa_no_centro(self):
        cavidade = self.fig3a.cavity
        self.assertAlmostEqual(abs(kappa_c(cavidade.omega_c, cavidade)) ** 2, cavidade.Gamma_c / (2 * math.pi), places=12)

    def test_exato_e_lorentziano_coincidem_na_ressonancia(self):
        omega_c = self.fig3a.cavity.omega_c
        esperado = abs(self.exato_a.g) * math.sqrt(2.0 / (math.pi * self.fig3a.cavity.Gamma_c))
        lorentz = self.exato_a.model_copy(update={"mode": "lorentzian"})
        self.assertAlmostEqual(abs(eta_lorentzian(omega_c, lorentz)), esperado, places=12)
        self.assertAlmostEqual(abs(eta_exact(omega_c, self.exato_a)) / esperado, 1.0, delta=0.02)

    def test_escala_linear_dos_acoplamentos(self):
        omegas = np.linspace(2396.0, 2436.0, 41)
        for modo in ("exact", "lorentzian"):
            with self.subTest(modo=modo):
                c = self.exato_a.model_copy(update={"mode": modo})
                dobro = c.model_copy(update={"g": 2.0 * c.g})
                np.testing.assert_allclose(dobro.avaliar(omegas), 2.0 * c.avaliar(omegas), rtol=1e-12)
        cavidade = self.fig3a.cavity
        quadruplo = cavidade.model_copy(update={"Gamma_c": 4.0 * cavidade.Gamma_c})
        np.testing.assert_allclose(kappa_c(omegas, quadruplo), 2.0 * kappa_c(omegas, cavidade), rtol=1e-12)

    def test_escalar_e_vetor(self):
        omegas = np.array([2410.0, 2416.0, 2420.0])
        vetor = eta_exact(omegas, self.exato_a)
        for i, w in enumerate(omegas):
            with self.subTest(omega=w):
                self.assertAlmostEqual(eta_exact(float(w), self.exato_a), vetor[i])

    def test_exato_proximo_da_lorentziana_em_alta_finesse(self):
        self.assertLess(coupling_mismatch(self.exato_a), 0.05)

    def test_descasamento_maior_em_baixa_finesse(self):
        self.assertGreater(coupling_mismatch(self.exato_b), coupling_mismatch(self.exato_a))

    def test_modo_exato_exige_espelho(self):
        with self.assertRaises(ErroConfiguracao) as contexto:
            CouplingSet.do_cenario(preset("fig4_G60"), mode="exact")
        self.assertEqual(contexto.exception.campo, "cavity.mirror")
        self.assertNotIn("\n", str(contexto.exception))
        self.assertEqual(CouplingSet.do_cenario(preset("fig4_G60"), mode="lorentzian").mode, "lorentzian")

    def test_discretizacao_na_grade(self):
        grade = build_grid(self.fig3a.cavity.omega_c, 40.0, 401)
        eta = eta_discreto(grade, self.exato_a)
        kappa = kappa_discreto(grade, self.fig3a.cavity)
        self.assertEqual(eta.shape, (401,))
        np.testing.assert_allclose(np.abs(kappa) ** 2 / grade.d_omega, np.abs(kappa_c(grade.points, self.fig3a.cavity)) ** 2)

    def test_condicao_de_markov(self):
        valor = markov_condition(self.exato_a)
        self.assertAlmostEqual(valor, (2.0 * self.fig3a.cavity.L / 2) ** 2)
        self.assertLess(valor, 1e-4)

    def test_tabela_sem_espelho(self):
        c = CouplingSet.do_cenario(preset("fig4_G10"), mode="lorentzian")
        tabela = tabela_acoplamentos(c, (2400.0, 2430.0), count=11)
        self.assertTrue(tabela["abs_eta_exact"].isna().all())
        self.assertEqual(list(tabela.columns), ["omega", "abs_eta_exact", "abs_eta_lorentzian", "abs_kappa"])


if __name__ == "__main__":
    unittest.main()
