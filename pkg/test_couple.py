# -*- coding: utf-8 -*-
"""
Testes do Acoplamento
=====================

Browniano bilateral, acopladores por quantis, campo acoplado, distância
rugosa e crescimento do desvio máximo.
"""

import math

import numpy as np
import pytest

from sinai_lab.couple import (MODOS_ACOPLAMENTO, acoplar_incrementos, controle_gaussiano, couple,
                              coupled_lift_distance, coupling_study, deviation_growth, marginal_ks,
                              sample_brownian)
from sinai_lab.env import tau_squared
from sinai_lab.errors import ConfigurationError, GridAlignmentError, RangeError
from sinai_lab.rng import gerador
from sinai_lab.rough import WeightParams


def test_browniano_bilateral(spec):
    tau2 = tau_squared(spec)
    curto = sample_brownian(tau2, 2.0 ** -6, 1.0, 5)
    longo = sample_brownian(tau2, 2.0 ** -6, 2.0, 5)

    assert curto.valores[curto.pontos] == 0.0
    assert curto.pontos == 64 and longo.pontos == 128
    np.testing.assert_array_equal(longo.restringir(1.0), curto.valores)
    with pytest.raises(ConfigurationError):
        sample_brownian(0.0, 2.0 ** -6, 1.0, 5)
    with pytest.raises(GridAlignmentError):
        curto.razao(0.3)
    with pytest.raises(RangeError):
        curto.na_grade(0.25, -10, 0)


def test_variancia_dos_incrementos(spec):
    tau2 = tau_squared(spec)
    W = sample_brownian(tau2, 2.0 ** -4, 2000.0, 1)
    variancia = W.incrementos.var() / W.passo
    assert abs(variancia / tau2 - 1.0) < 0.05


@pytest.mark.parametrize('modo', MODOS_ACOPLAMENTO)
def test_controle_gaussiano_e_exato(spec, modo):
    lei = controle_gaussiano(spec)
    z = gerador(3, 99).standard_normal(1000)
    X, desvio = acoplar_incrementos(z, lei, spec.sigma2, modo)
    tau = spec.sigma2 * math.sqrt(lei.variancia())
    assert desvio <= 1e-10
    np.testing.assert_allclose(X, tau * z, rtol=0, atol=1e-10)


def test_modo_desconhecido(spec):
    with pytest.raises(ConfigurationError):
        acoplar_incrementos(np.zeros(4), spec.lei_xi, spec.sigma2, 'quantil')


@pytest.mark.parametrize('modo', MODOS_ACOPLAMENTO)
def test_marginal_dois_pontos(spec, modo):
    z = gerador(4, 99).standard_normal(10_000)
    X, _ = acoplar_incrementos(z, spec.lei_xi, spec.sigma2, modo)
    ell = spec.lei_xi.ell
    np.testing.assert_allclose(np.abs(X), spec.sigma2 * ell, rtol=1e-12)
    assert marginal_ks(X, spec.lei_xi, escala=spec.sigma2) < 0.03


def test_marginal_beta_discretizada(spec_beta):
    z = gerador(5, 99).standard_normal(4096)
    X, _ = acoplar_incrementos(z, spec_beta.lei_xi, spec_beta.sigma2, 'dyadic-quantile')
    assert marginal_ks(X, spec_beta.lei_xi, escala=spec_beta.sigma2) < 0.05


def test_diadico_supera_passo_a_passo(spec):
    crescimento = deviation_growth(spec, (2 ** 10, 2 ** 14), range(8))
    diadico = np.asarray(crescimento.desvios['dyadic-quantile'])[:, -1]
    passo_a_passo = np.asarray(crescimento.desvios['per-step-quantile'])[:, -1]
    assert np.median(diadico - passo_a_passo) < 0
    assert set(crescimento.ajustes) == set(MODOS_ACOPLAMENTO)


def test_campo_acoplado(spec):
    delta = 2.0 ** -3
    W = sample_brownian(tau_squared(spec), delta / 4, 4.0, 2)
    campo = couple(W, delta, spec, 'dyadic-quantile')

    assert campo.raio == W.pontos // 4 - 1
    assert campo.X.size == 2 * campo.raio + 1
    assert np.all((campo.renv.omega_plus > 0) & (campo.renv.omega_plus < spec.sigma2))
    np.testing.assert_allclose(campo.u_bar11 + campo.u_bar12, campo.u_bar1, atol=1e-15)
    np.testing.assert_allclose(np.abs(campo.xi), spec.lei_xi.ell, rtol=1e-12)

    with pytest.raises(ConfigurationError):
        couple(sample_brownian(1.0, delta / 4, 4.0, 2), delta, spec)


def test_distancia_rugosa_do_acoplamento(spec):
    params = WeightParams()
    delta = 2.0 ** -3
    W = sample_brownian(tau_squared(spec), delta / 4, max(params.raios) + 2 * delta, 0)
    rho, componentes = coupled_lift_distance(W, delta, spec, params)

    assert np.isfinite(rho) and rho > 0.0
    assert rho == componentes['rho']
    assert componentes['mode'] == 'dyadic-quantile'
    assert len(componentes['por_raio']) == len(params.raios)


def test_estudo_exige_deltas_e_sementes(spec):
    with pytest.raises(ConfigurationError):
        coupling_study(spec, WeightParams(), [0.25, 0.125, 0.0625], range(8))
    with pytest.raises(ConfigurationError):
        coupling_study(spec, WeightParams(), [0.25, 0.125, 0.0625, 0.03125], range(4))
