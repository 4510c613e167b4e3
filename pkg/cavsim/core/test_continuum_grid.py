#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""Testes da discretização do contínuo."""

import math
import sys
import unittest
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).parent.parent))

from core.continuum_grid import (
    SpectralAmplitudes,
    avisos_resolucao,
    build_grid,
    espectro_vazio,
    estado_estacionario,
    grade_do_cenario,
    integral_espectral,
    spectral_density,
)
from core.units_and_setup import preset
from utils.excecoes import ErroDominio


class TestGrade(unittest.TestCase):
    """Construção da grade uniforme."""

    def test_pontos_e_espacamento(self):
        grade = build_grid(2416.0, 40.0, 4001)
        self.assertAlmostEqual(grade.d_omega, 0.02)
        self.assertAlmostEqual(grade.points[0], 2376.0)
        self.assertAlmostEqual(grade.points[-1], 2456.0)
        self.assertAlmostEqual(grade.detunings[2000], 0.0)

    def test_entradas_invalidas(self):
        casos = [(2416.0, 40.0, 2), (2416.0, 0.0, 11), (10.0, 40.0, 11)]
        for centro, largura, pontos in casos:
            with self.subTest(centro=centro, largura=largura, pontos=pontos):
                with self.assertRaises(ErroDominio):
                    build_grid(centro, largura, pontos)

    def test_grade_do_cenario(self):
        grade = grade_do_cenario(preset("fig3a"))
        self.assertEqual(grade.count, 4001)
        self.assertAlmostEqual(grade.center, 2416.0)

    def test_avisos_de_resolucao(self):
        self.assertEqual(avisos_resolucao(0.02, 2.0, 10.0), [])
        avisos = avisos_resolucao(0.5, 2.0, 20.0)
        self.assertEqual(len(avisos), 2)
        self.assertIn("Gamma_c/20", avisos[0])
        self.assertIn("recorrência", avisos[1])


class TestEspectro(unittest.TestCase):
    """Densidade espectral e critério de regime estacionário."""

    def test_densidade_independe_da_grade(self):
        """Lorentziana amostrada em duas resoluções dá a mesma densidade."""
        for pontos in (401, 801):
            with self.subTest(pontos=pontos):
                grade = build_grid(2416.0, 40.0, pontos)
                lorentziana = (1.0 / math.pi) / (grade.detunings ** 2 + 1.0)
                amplitudes = SpectralAmplitudes(np.sqrt(lorentziana * grade.d_omega))
                espectro = spectral_density(amplitudes, grade)
                np.testing.assert_allclose(espectro.density, lorentziana)
                self.assertAlmostEqual(espectro.integral, amplitudes.norma)
                self.assertAlmostEqual(integral_espectral(espectro), espectro.integral, delta=1e-3)

    def test_amplitudes_desalinhadas(self):
        grade = build_grid(2416.0, 40.0, 11)
        with self.assertRaises(ErroDominio):
            spectral_density(SpectralAmplitudes(np.zeros(12)), grade)

    def test_espectro_vazio(self):
        vazio = espectro_vazio()
        self.assertTrue(vazio.vazio)
        self.assertEqual(vazio.integral, 0.0)
        self.assertEqual(integral_espectral(vazio), 0.0)
        self.assertEqual(list(vazio.para_dataframe().columns), ["omega", "density", "grid_native_prob"])

    def test_estado_estacionario(self):
        tempos = np.linspace(0.0, 20.0, 2001)
        atingido, _ = estado_estacionario(tempos, 1.0 - np.exp(-2.0 * tempos))
        self.assertTrue(atingido)
        atingido, taxa = estado_estacionario(tempos, 1.0 - np.exp(-0.1 * tempos))
        self.assertFalse(atingido)
        self.assertGreater(taxa, 1e-6)

    def test_estado_estacionario_sem_pontos(self):
        atingido, taxa = estado_estacionario([0.0], [0.0])
        self.assertFalse(atingido)
        self.assertEqual(taxa, math.inf)


if __name__ == "__main__":
    unittest.main()
