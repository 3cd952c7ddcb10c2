# -*- coding: utf-8 -*-
"""
Testes dos Caminhos Rugosos
===========================

Normas de Hölder, relação de Chen, integral rugosa discreta, lema de
costura e normas ponderadas dos processos controlados.
"""

import math

import numpy as np
import pytest

from sinai_lab.errors import ConfigurationError, DomainError, GridAlignmentError
from sinai_lab.fitting import fit_rate
from sinai_lab.rng import gerador
from sinai_lab.rough import (ControlledProcess, GridControlledPath, WeightParams, controlled_distance,
                             controlled_germ, germ, germ_bound, holder_norm, holder_scan, kappa_weighted, lift,
                             norm_report, rho_distance, rough_integral, sewing_check, sewing_constant, theta_norm,
                             trapezoid_minus_rough, trapezoidal_sum)


def _browniano(semente, pontos, passo):
    incrementos = gerador(semente, 99).standard_normal(pontos - 1) * math.sqrt(passo)
    return np.concatenate([[0.0], np.cumsum(incrementos)])


def _controlado_seno(X):
    """Y = sin(X) com derivada de Gubinelli cos(X)."""
    return GridControlledPath(caminho=X, v=np.sin(X.ancoras), dv=np.cos(X.ancoras))


def test_norma_de_holder_de_caminho_linear():
    xs = np.linspace(0.0, 1.0, 65)
    assert holder_norm(3.0 * xs, 1.0, xs[1]) == pytest.approx(3.0)
    varredura = holder_scan(xs, 0.5, xs[1])
    assert varredura.exato
    assert varredura.valor == pytest.approx(1.0)
    with pytest.raises(DomainError):
        holder_norm(xs, 0.0, xs[1])
    with pytest.raises(DomainError):
        holder_norm(xs, 1.5, xs[1])


def test_varredura_em_banda_acima_do_limite():
    xs = np.linspace(0.0, 1.0, 65)
    assert not holder_scan(xs, 0.5, xs[1], max_pontos=32).exato


def test_relacao_de_chen():
    X = lift(_browniano(1, 64, 1.0 / 64), 1.0 / 64, origem=0.0)
    assert X.chen_residual() <= 1e-12
    np.testing.assert_array_equal(X.incremento2(3), 0.5 * X.incremento1(3) ** 2)


def test_integral_de_x_dx():
    X = lift(_browniano(2, 257, 1.0 / 256), 1.0 / 256, origem=0.0)
    Y = GridControlledPath(caminho=X, v=np.array(X.ancoras), dv=np.ones(X.n))
    fim = X.xs[-1]
    assert rough_integral(Y, X, 0.0, fim) == pytest.approx(0.5 * X.ancoras[-1] ** 2, abs=1e-13)
    assert trapezoidal_sum(Y, X, 0.0, fim) == pytest.approx(rough_integral(Y, X, 0.0, fim), abs=1e-13)
    assert rough_integral(Y, X, 0.5, 0.5) == 0.0


def test_homogeneidade_da_norma_com_fator_negativo():
    caminho = _browniano(8, 129, 1.0 / 128)
    norma = holder_norm(caminho, 0.4, 1.0 / 128)
    assert holder_norm(-2.5 * caminho, 0.4, 1.0 / 128) == pytest.approx(2.5 * norma, rel=1e-12)
    assert holder_norm(np.zeros(129), 0.4, 1.0 / 128) == 0.0


def test_integral_rugosa_e_aditiva():
    X = lift(_browniano(4, 257, 1.0 / 256), 1.0 / 256, origem=0.0)
    Y = _controlado_seno(X)
    for meio in (0.25, 0.5, 0.75):
        soma = rough_integral(Y, X, 0.0, meio) + rough_integral(Y, X, meio, 1.0)
        assert soma == pytest.approx(rough_integral(Y, X, 0.0, 1.0), abs=1e-13)


def test_trapezio_menos_rugosa():
    X = lift(_browniano(3, 257, 1.0 / 256), 1.0 / 256, origem=0.0)
    Y = _controlado_seno(X)
    diferenca = trapezoidal_sum(Y, X, 0.0, 1.0) - rough_integral(Y, X, 0.0, 1.0)
    assert diferenca == pytest.approx(math.fsum(trapezoid_minus_rough(Y, X, 0.0, 1.0)), abs=1e-13)


def test_intervalo_invertido_e_fora_da_grade():
    X = lift(np.arange(9.0), 0.25, origem=0.0)
    Y = GridControlledPath(caminho=X, v=np.zeros(9), dv=np.zeros(9))
    with pytest.raises(DomainError):
        rough_integral(Y, X, 1.0, 0.5)
    with pytest.raises(GridAlignmentError):
        germ(Y, X, 0.1, 0.5)


def test_caminho_controlado_exige_mesmo_tamanho():
    X = lift(np.arange(9.0), 0.25)
    with pytest.raises(ConfigurationError):
        GridControlledPath(caminho=X, v=np.zeros(8), dv=np.zeros(9))


def test_inclinacao_trapezio_contra_germe():
    passo = 2.0 ** -12
    comprimentos = [2.0 ** -k for k in range(1, 7)]
    diferencas = np.zeros((32, len(comprimentos)))
    for s in range(32):
        X = lift(_browniano(100 + s, 4097, passo), passo, origem=0.0)
        Y = _controlado_seno(X)
        for j, L in enumerate(comprimentos):
            diferencas[s, j] = abs(trapezoidal_sum(Y, X, 0.0, L) - germ(Y, X, 0.0, L))
    ajuste = fit_rate(comprimentos, diferencas, reamostragens=0)
    assert ajuste.slope >= 0.45 + 2 * 0.34 - 0.1


def test_cota_explicita_do_germe():
    passo = 2.0 ** -10
    X = lift(_browniano(7, 1025, passo), passo, origem=0.0)
    cota = germ_bound(_controlado_seno(X), X, 0.45, 0.34, 0.0, 0.5)
    assert cota.passou
    assert cota.cota > 0.0


def test_constante_de_costura():
    assert sewing_constant(2.0) == pytest.approx(4.0 * math.pi ** 2 / 6.0)
    with pytest.raises(DomainError):
        sewing_constant(1.0)


def test_lema_de_costura_discreto():
    xs = np.linspace(0.0, 1.0, 33)
    verificacao = sewing_check(lambda s, t: np.sin(s) * (t - s), xs, 2.0)
    assert verificacao.passou
    assert verificacao.norma_delta > 0.0

    X = lift(_browniano(5, 33, 1.0 / 32), 1.0 / 32, origem=0.0)
    germe = controlled_germ(_controlado_seno(X), X)
    assert sewing_check(germe, X.xs, 0.45 + 2 * 0.34).passou


def test_germe_aditivo_tem_resto_nulo():
    xs = np.linspace(0.0, 1.0, 17)
    verificacao = sewing_check(lambda s, t: t ** 3 - s ** 3, xs, 1.5)
    assert verificacao.passou
    assert verificacao.norma_resto < 1e-12


def test_distancia_rho():
    passo = 1.0 / 16
    A = lift(_browniano(1, 257, passo), passo)
    B = lift(_browniano(2, 257, passo), passo)
    raios = (1.0, 2.0, 4.0, 8.0)
    assert rho_distance(A, A, 0.45, 0.07, raios) == 0.0
    assert rho_distance(A, B, 0.45, 0.07, raios) == pytest.approx(rho_distance(B, A, 0.45, 0.07, raios))
    assert kappa_weighted(A, 0.45, 0.07, raios) > 0.0
    with pytest.raises(GridAlignmentError):
        rho_distance(A, lift(_browniano(2, 129, passo), passo), 0.45, 0.07, raios)


def test_parametros_dos_pesos():
    params = WeightParams()
    assert params.gamma == pytest.approx((0.45 - 0.34) / 4.0)
    assert params.linha().beta == params.beta_linha
    with pytest.raises(ConfigurationError):
        WeightParams(beta=0.3)
    with pytest.raises(ConfigurationError):
        WeightParams(chi=0.2)
    with pytest.raises(ConfigurationError):
        WeightParams(theta_linha=3.0)


def _processo(X, params, deslocamento=0.0):
    t = params.tempos[:, None]
    v = np.cos(X.ancoras)[None, :] * np.exp(-t) + deslocamento
    return ControlledProcess(tempos=params.tempos, caminho=X, v=v, dv=-2.0 * v)


def test_normas_ponderadas_e_distancia_controlada():
    params = WeightParams()
    passo = 1.0 / 16
    X = lift(_browniano(4, 257, passo), passo)
    A = _processo(X, params)

    relatorio = norm_report(A, params)
    assert relatorio.agregado == theta_norm(A, params)
    assert relatorio.agregado > 0.0
    assert len(relatorio.por_raio) == len(params.raios)
    assert controlled_distance(A, A, params) == 0.0

    B = ControlledProcess(tempos=A.tempos, caminho=X, v=A.v + 0.5, dv=A.dv)
    assert controlled_distance(A, B, params) == pytest.approx(0.5 * math.exp(-params.theta), rel=1e-12)


def test_distancia_exige_mesma_grade():
    params = WeightParams()
    passo = 1.0 / 16
    A = _processo(lift(_browniano(4, 257, passo), passo), params)
    B = _processo(lift(_browniano(4, 257, passo), passo, origem=-7.0), params)
    with pytest.raises(GridAlignmentError):
        controlled_distance(A, B, params)
