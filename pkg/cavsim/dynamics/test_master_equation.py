#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""Testes da equação mestra de 4 níveis."""

import sys
import unittest
from pathlib import Path

import numpy as np
from scipy.integrate import cumulative_trapezoid

sys.path.insert(0, str(Path(__file__).parent.parent))

from core.units_and_setup import preset
from dynamics.master_equation import (
    DensityMatrix4,
    ParametrosMestra,
    block_evolution,
    integrar_mestra,
    lindblad_rhs,
    positivity_floor,
    purity,
)
from dynamics.representations import integrate
from utils.excecoes import ErroDominio


class TestMatrizDensidade(unittest.TestCase):
    """Invariantes de ρ."""

    def test_estado_puro(self):
        rho = DensityMatrix4.pura([0.6, 0.8j, 0.0])
        self.assertAlmostEqual(rho.traco, 1.0)
        self.assertAlmostEqual(purity(rho), 1.0)
        self.assertEqual(rho.violacoes(), [])

    def test_mistura(self):
        rho = np.diag([0.5, 0.5, 0.0, 0.0]).astype(complex)
        self.assertAlmostEqual(purity(rho), 0.5)
        self.assertAlmostEqual(positivity_floor(rho), 0.0)

    def test_violacoes(self):
        rho = np.zeros((4, 4), dtype=complex)
        rho[0, 0] = 1.2
        rho[0, 1] = 0.3
        problemas = DensityMatrix4(rho).violacoes()
        self.assertEqual(len(problemas), 3)

    def test_forma_invalida(self):
        with self.assertRaises(ErroDominio):
            DensityMatrix4(np.eye(3))

    def test_lado_direito_preserva_traco(self):
        params = ParametrosMestra.do_cenario(preset("fig4_G10"))
        rho = DensityMatrix4.pura([0.0, 0.0, 1.0]).rho
        derivada = lindblad_rhs(rho, 0.5, params)
        self.assertAlmostEqual(abs(np.trace(derivada)), 0.0, places=12)
        np.testing.assert_allclose(derivada, derivada.conj().T, atol=1e-12)
        self.assertAlmostEqual(derivada[3, 3].real, 10.0)


class TestEvolucao(unittest.TestCase):
    """Integração completa contra o pseudo-modo."""

    @classmethod
    def setUpClass(cls):
        cls.cenario = preset("fig4_G10")
        cls.mestra = integrar_mestra(cls.cenario)
        cls.pseudo = integrate("pseudo", cls.cenario)

    def test_traco_hermiticidade_positividade(self):
        for rho in self.mestra.rhos[:: max(1, len(self.mestra.rhos) // 20)]:
            matriz = DensityMatrix4(rho)
            self.assertLess(abs(matriz.traco - 1.0), 1e-8)
            self.assertLess(matriz.erro_hermiticidade, 1e-10)
            self.assertGreater(positivity_floor(matriz), -1e-8)

    def test_coincide_com_pseudo_modo(self):
        np.testing.assert_allclose(self.mestra.tempos, self.pseudo.tempos)
        populacoes = self.mestra.populacoes
        np.testing.assert_allclose(populacoes[:, 1], self.pseudo.P_e, atol=1e-6)
        np.testing.assert_allclose(populacoes[:, 2], self.pseudo.P_photon, atol=1e-6)
        np.testing.assert_allclose(populacoes[:, 3], self.pseudo.n_leaked, atol=1e-6)

    def test_bloco_A_e_produto_externo(self):
        """ρ_AA permanece |ψ⟩⟨ψ| do pseudo-modo."""
        psi = self.pseudo.estados[:, :3]
        externo = np.einsum("ti,tj->tij", psi, psi.conj())
        np.testing.assert_allclose(self.mestra.rhos[:, :3, :3], externo, atol=1e-6)

    def test_taxa_de_vazamento(self):
        """ρ₄₄(t) = Γ_c ∫ ρ₃₃."""
        populacoes = self.mestra.populacoes
        acumulado = self.cenario.cavity.Gamma_c * cumulative_trapezoid(populacoes[:, 2], self.mestra.tempos, initial=0.0)
        np.testing.assert_allclose(populacoes[:, 3], acumulado, atol=1e-4)

    def test_pureza_limitada(self):
        pureza = self.mestra.pureza
        self.assertAlmostEqual(pureza[0], 1.0)
        self.assertLess(pureza.min(), 1.0)
        self.assertTrue(np.all(pureza <= 1.0 + 1e-9))

    def test_colunas(self):
        self.assertEqual(
            list(self.mestra.para_dataframe().columns), ["t", "rho11", "rho22", "rho33", "rho44", "purity"]
        )


class TestBloco(unittest.TestCase):
    """Evolução reduzida do bloco A."""

    def test_coincide_com_a_mestra(self):
        cenario = preset("fig4_G10")
        bloco = block_evolution([1.0, 0.0, 0.0], cenario)
        mestra = integrar_mestra(cenario)
        np.testing.assert_allclose(bloco.rho_AA, mestra.rhos[:, :3, :3], atol=1e-8)
        np.testing.assert_allclose(bloco.P_f0, mestra.populacoes[:, 3], atol=1e-8)
        np.testing.assert_allclose(bloco.traco_total, 1.0, atol=1e-8)

    def test_sem_vazamento_nao_ha_foton_emitido(self):
        bloco = block_evolution([1.0, 0.0, 0.0], preset("fig4_G10").com_ajustes(**{"cavity.Gamma_c": 0.0}))
        np.testing.assert_allclose(bloco.P_f0, 0.0, atol=1e-14)
        np.testing.assert_allclose(bloco.traco_total, 1.0, atol=1e-8)

    def test_fig6a_emite_o_foton(self):
        bloco = block_evolution([1.0, 0.0, 0.0], preset("fig6a"))
        self.assertAlmostEqual(bloco.P_f0[-1], 0.99, delta=0.01)

    def test_estado_inicial_invalido(self):
        with self.assertRaises(ErroDominio):
            block_evolution([1.0, 0.0], preset("fig4_G10"))

    def test_janela_vazia(self):
        bloco = block_evolution([1.0, 0.0, 0.0], preset("fig4_G10").com_ajustes(tf=0.0))
        self.assertEqual(bloco.tempos.size, 0)


if __name__ == "__main__":
    unittest.main()
