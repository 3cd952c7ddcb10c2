# -*- coding: utf-8 -*-
"""
Testes do Núcleo Livre
======================

Tabela exata, Chapman–Kolmogorov, equação do calor discreta, TLC local
com gradientes e cota Gaussiana uniforme.
"""

import numpy as np
import pytest
from scipy.integrate import trapezoid
from scipy.stats import binom

from sinai_lab.errors import ConfigurationError, DomainError, RangeError, TruncationError
from sinai_lab.exportacao import ler_binario
from sinai_lab.fitting import fit_rate
from sinai_lab.kernel import (build_kernel_table, compose_rows, gaussian_bound_scan, gaussian_kernel, gradiente,
                              lclt_error, rescaled_kernel)

NS_LCLT = [2 ** k for k in range(6, 13)]


@pytest.fixture(scope='module')
def tabela_grande():
    return build_kernel_table(0.5, 4096, 4098, guardar=NS_LCLT)


def test_primeira_linha_e_simetria():
    tabela = build_kernel_table(0.3, 20, 20)
    assert tabela.p(1, 0) == 0.3
    assert tabela.p(1, 1) == pytest.approx(0.35, abs=1e-16)
    assert tabela.p(1, 2) == 0.0
    for n in range(21):
        linha = tabela.linha(n)
        np.testing.assert_array_equal(linha, linha[::-1])
        assert abs(tabela.soma_linha(n) - 1.0) < 1e-12


def test_linhas_compensadas_contra_binomial(tabela_grande):
    # com ε = 1/2 o passo é binomial(2, 1/2) centrado: p_n(k) = C(2n, n + k)/4ⁿ
    n = 2048
    k = np.arange(-150, 151)
    exato = binom.pmf(n + k, 2 * n, 0.5)
    np.testing.assert_allclose(tabela_grande.p(n, k), exato, rtol=1e-12, atol=0)


def test_profundidade_e_largura():
    with pytest.raises(TruncationError):
        build_kernel_table(0.5, 10, 9)
    with pytest.raises(ConfigurationError):
        build_kernel_table(0.5, 0, 5)
    with pytest.raises(ConfigurationError):
        build_kernel_table(1.0, 5, 5)
    with pytest.raises(RangeError):
        build_kernel_table(0.5, 5, 5).linha(6)


def test_fora_da_tabela_vale_zero():
    tabela = build_kernel_table(0.5, 4, 4)
    assert tabela.p(4, 10) == 0.0


def test_linhas_nao_guardadas_sao_recalculadas():
    completa = build_kernel_table(0.5, 30, 30)
    parcial = build_kernel_table(0.5, 30, 30, guardar=(10, 20))
    assert not parcial.completa
    np.testing.assert_array_equal(parcial.linha(17), completa.linha(17))


def test_chapman_kolmogorov():
    tabela = build_kernel_table(0.5, 64, 64)
    assert compose_rows(tabela, 20, 30) < 1e-15
    assert compose_rows(tabela, 1, 63) < 1e-15


def test_nucleo_gaussiano():
    with pytest.raises(DomainError):
        gaussian_kernel(0.0, 0.0, 0.5)
    xs = np.linspace(-20.0, 20.0, 40001)
    massa = trapezoid(gaussian_kernel(1.0, xs, 0.5), xs)
    assert massa == pytest.approx(1.0, abs=1e-8)


def test_nucleo_reescalado_resolve_o_calor_discreto():
    tabela = build_kernel_table(0.5, 65, 65)
    nucleo = rescaled_kernel(tabela, 0.125)
    assert nucleo(0.125 ** 2, 0.125) == pytest.approx(0.25 / 0.125)
    assert nucleo.residuo_calor(10) < 1e-10
    assert nucleo.residuo_calor(64) < 1e-10


def test_gradientes_discretos():
    xs = np.arange(10) * 0.5
    np.testing.assert_allclose(gradiente(3.0 * xs, 1, 0.5)[:-2], 3.0)
    np.testing.assert_allclose(gradiente(xs ** 2, 2, 0.5)[2:-2], 2.0)
    assert np.isnan(gradiente(xs, 1, 0.5)[-1])
    with pytest.raises(DomainError):
        gradiente(xs, 5)


def test_ordem_do_tlc_local_invalida(tabela_grande):
    with pytest.raises(DomainError):
        lclt_error(tabela_grande, 64, 3)
    with pytest.raises(DomainError):
        lclt_error(tabela_grande, 0, 2)


def test_inclinacoes_do_tlc_local(tabela_grande):
    erros2 = [lclt_error(tabela_grande, n, 2) for n in NS_LCLT]
    erros4 = [lclt_error(tabela_grande, n, 4) for n in NS_LCLT]
    assert -2.8 <= fit_rate(NS_LCLT, erros2, reamostragens=0).slope <= -2.2
    assert -3.9 <= fit_rate(NS_LCLT, erros4, reamostragens=0).slope <= -3.1


def test_cota_gaussiana_uniforme(tabela_grande):
    varredura = gaussian_bound_scan(tabela_grande, 2, 1.0 / (8.0 * tabela_grande.sigma2))
    assert not varredura.explodiu
    assert np.isfinite(varredura.valor)
    assert len(varredura.por_n) == 4096
    assert varredura.crescimento_ultima_oitava < 0.05


def test_varredura_exige_b_positivo(tabela_grande):
    with pytest.raises(DomainError):
        gaussian_bound_scan(tabela_grande, 2, 0.0)


def test_exportacao_da_tabela(tmp_path):
    tabela = build_kernel_table(0.5, 8, 10)
    caminho, auxiliar = tabela.export(str(tmp_path / 'kernel_table.bin'))
    dados, metadados = ler_binario(caminho)
    assert dados.shape == (9, 21)
    assert metadados['N'] == 8 and metadados['K'] == 10
    np.testing.assert_array_equal(dados[5], tabela.linha(5))
