# -*- coding: utf-8 -*-
"""
Testes da Equação Parabólica Discreta
=====================================

Recursão direta contra forma branda, identidades de soma por partes,
equação de v^δ e funções de teste.
"""

import numpy as np
import pytest

from sinai_lab.env import rescale_environment, rescaled_from_xi, sample_environment
from sinai_lab.errors import ConfigurationError, RangeError, TruncationError
from sinai_lab.exportacao import ler_binario
from sinai_lab.kernel import build_kernel_table
from sinai_lab.pde import (build_v_delta, crl_norm, funcao_polinomial, funcao_teste, ibp_identity_check,
                           mild_decomposition, solve_direct, solve_mild)

DELTA = 2.0 ** -4
N = 64
RAIO = 96


def _g(t, x):
    return 0.5 * np.sin(x) * np.exp(-t)


@pytest.fixture(scope='module')
def tabela():
    return build_kernel_table(0.5, N, N)


@pytest.fixture(params=[0, 1, 2])
def renv_pde(request, spec):
    return rescale_environment(sample_environment(spec, RAIO, request.param), DELTA)


def test_forma_branda_coincide_com_recursao_direta(renv_pde, tabela):
    f0 = funcao_teste('cos')
    direta = solve_direct(renv_pde, f0, _g, N)
    branda = solve_mild(renv_pde, f0, _g, N, table=tabela)

    T = N * DELTA ** 2
    escala = 1.0 + 1.0 + T * 0.5
    assert direta.valores.shape == branda.valores.shape == (N + 1, 2 * (RAIO - N) + 1)
    assert np.max(np.abs(direta.valores - branda.valores)) <= 1e-9 * escala


def test_identidades_de_soma_por_partes(renv_pde, tabela):
    direta = solve_direct(renv_pde, funcao_teste('cos'), _g, N, guardar_cone=True)
    relatorio = ibp_identity_check(renv_pde, direta, [0.0, 0.5], g=_g, table=tabela)
    assert len(relatorio.residuo_J) == 2
    assert relatorio.passos == [1, N // 2, N]
    assert relatorio.maximo <= 1e-9 * max(1.0, relatorio.escala)


def test_equacao_de_v(renv_pde, tabela):
    solucao = build_v_delta(renv_pde, funcao_teste('cos'), _g, N, table=tabela)
    assert solucao.residuo <= 1e-8 * max(1.0, solucao.escala)
    assert solucao.termo_j0 > 0.0

    R = RAIO - N
    assert solucao.v.primeiro_sitio == -(R - 1)
    np.testing.assert_allclose(solucao.v.linha(5), np.diff(solucao.f.linha(5))[1:] / DELTA, rtol=0, atol=1e-12)


def test_ibp_exige_cone_e_ancora_na_regiao_exata(spec, tabela):
    renv = rescale_environment(sample_environment(spec, RAIO, 0), DELTA)
    sem_cone = solve_direct(renv, funcao_teste('cos'), None, N)
    with pytest.raises(ConfigurationError):
        ibp_identity_check(renv, sem_cone, [0.0], table=tabela)

    com_cone = solve_direct(renv, funcao_teste('cos'), None, N, guardar_cone=True)
    with pytest.raises(RangeError):
        ibp_identity_check(renv, com_cone, [2.0], table=tabela)


def test_massa_pontual_sem_ruido_reproduz_o_nucleo(spec):
    delta = 0.25
    renv = rescaled_from_xi(spec, np.zeros(81), delta)
    f0 = np.zeros(81)
    f0[40] = 1.0 / delta

    direta = solve_direct(renv, f0, None, 32)
    nucleo = build_kernel_table(spec.epsilon, 32, 32).linha(32)
    np.testing.assert_allclose(direta.linha(32), nucleo[24:41] / delta, rtol=0, atol=1e-13)

    decomposicao = mild_decomposition(renv, f0, None, 32)
    assert np.all(decomposicao.J.valores == 0.0)
    np.testing.assert_allclose(decomposicao.f.linha(32), direta.linha(32), rtol=0, atol=1e-13)


def test_constante_e_preservada(renv):
    solucao = solve_direct(renv, lambda x: np.ones_like(x), None, 50)
    assert np.max(np.abs(solucao.valores - 1.0)) < 1e-12


def test_principio_de_comparacao(renv):
    g = lambda t, x: 0.5 * (1.0 + np.sin(x)) * np.exp(-t)
    solucao = solve_direct(renv, funcao_teste('bump'), g, 64)
    assert np.min(solucao.valores) >= 0.0

    sem_forcamento = solve_direct(renv, funcao_teste('gaussian'), None, 64)
    assert np.min(sem_forcamento.valores) >= 0.0


def test_solucao_em_banda_respeita_a_cota(spec):
    renv = rescale_environment(sample_environment(spec, RAIO, 3), DELTA)
    f0 = funcao_teste('gaussian')
    exata = solve_direct(renv, f0, None, N)
    banda = solve_direct(renv, f0, None, N, banda=30)

    assert exata.limite_cauda == 0.0
    assert banda.primeiro_sitio == -(RAIO - 30)
    recorte = banda.restringir(exata.primeiro_sitio, -exata.primeiro_sitio)
    assert np.max(np.abs(recorte.valores - exata.valores)) <= banda.limite_cauda + 1e-12

    with pytest.raises(ConfigurationError):
        solve_direct(renv, f0, _g, N, banda=30)


def test_janela_e_tabela_insuficientes(renv):
    f0 = funcao_teste('cos')
    with pytest.raises(ConfigurationError):
        solve_direct(renv, f0, None, renv.radius + 1)
    with pytest.raises(ConfigurationError):
        solve_mild(renv, f0, None, renv.radius + 1)
    with pytest.raises(TruncationError):
        solve_mild(renv, f0, None, 20, table=build_kernel_table(0.5, 10, 10))
    with pytest.raises(ConfigurationError):
        solve_mild(renv, f0, None, 10, table=build_kernel_table(0.3, 10, 10))


def test_funcao_da_grade(renv, tmp_path):
    solucao = solve_direct(renv, funcao_teste('cos'), None, 16, guardar=(0, 8, 16))
    assert solucao.valor(0.0, 0.0) == pytest.approx(1.0)
    assert list(solucao.tempos) == [0.0, 8 * renv.delta ** 2, 16 * renv.delta ** 2]
    with pytest.raises(RangeError):
        solucao.linha(5)
    with pytest.raises(RangeError):
        solucao.coluna(1000.0)

    caminho, _ = solucao.export(str(tmp_path / 'pde_direct.bin'))
    dados, metadados = ler_binario(caminho)
    np.testing.assert_array_equal(dados, solucao.valores)
    assert metadados['passos'] == [0, 8, 16]


def test_interpolacao_e_processo_controlado(renv):
    solucao = build_v_delta(renv, funcao_teste('cos'), None, 32, verificar=False)
    d2 = renv.delta ** 2
    interpolado = solucao.interpolado

    assert interpolado(2 * d2, 0.25) == pytest.approx(solucao.v.valor(2 * d2, 0.25))
    meio = interpolado(1.5 * d2, 0.25)
    assert meio == pytest.approx(0.5 * (solucao.v.valor(d2, 0.25) + solucao.v.valor(2 * d2, 0.25)))
    assert interpolado(0.0, 0.25) == interpolado(d2, 0.25)
    with pytest.raises(RangeError):
        interpolado(33 * d2, 0.0)

    processo = solucao.processo_controlado([0.0, 16 * d2, 32 * d2], raio=1.0)
    assert processo.caminho.n == 17
    np.testing.assert_array_equal(processo.dv, solucao.coef_derivada * processo.v)
    assert solucao.coef_derivada == pytest.approx(-2.0 / renv.sigma2)


def test_funcoes_de_teste():
    with pytest.raises(ConfigurationError):
        funcao_teste('seno')
    with pytest.raises(ConfigurationError):
        funcao_polinomial([1.0, 2.0, 3.0, 4.0, 5.0])

    bump = funcao_teste('bump')
    assert bump(2.0) == 0.0
    assert bump(0.0) == pytest.approx(np.exp(-1.0))
    assert abs(bump.derivada(1, np.array([0.0]))[0]) < 1e-6


def test_norma_crl():
    assert crl_norm(funcao_polinomial([0.0, 0.0, 1.0]), 2.0, raios=(1.0, 2.0, 4.0)) == pytest.approx(2.0)
    assert crl_norm(funcao_teste('cos'), 0.0) == pytest.approx(1.0)
