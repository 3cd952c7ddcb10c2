# -*- coding: utf-8 -*-
"""
Testes do Ambiente Aleatório
============================

Amostragem por sítio, reescala, campos de ruído e escala de variância.
"""

import math

import numpy as np
import pytest

from sinai_lab.env import (EnvironmentSpec, interpolate_noise, mirror_environment, noise_fields,
                           rescale_environment, rescaled_from_noise, rescaled_from_xi, sample_environment,
                           sigma1_squared, symmetrize_environment, tau_squared, u_bar2_constant, u_bar2_exact,
                           variance_ratio, xi, xi_law)
from sinai_lab.errors import ConfigurationError, GridAlignmentError, RangeError
from sinai_lab.fitting import fit_rate


def test_especificacao_rejeita_parametros_fora_do_intervalo():
    with pytest.raises(ConfigurationError):
        EnvironmentSpec(epsilon=1.0, kappa_ell=0.05)
    with pytest.raises(ConfigurationError):
        EnvironmentSpec(epsilon=0.5, kappa_ell=0.3)
    with pytest.raises(ConfigurationError):
        EnvironmentSpec(epsilon=0.5, kappa_ell=0.05, half_gap=0.3)
    with pytest.raises(ConfigurationError):
        EnvironmentSpec(epsilon=0.5, kappa_ell=0.05, kind='uniforme')


def test_amostragem_deterministica_por_sitio(spec):
    pequeno = sample_environment(spec, 50, 3)
    grande = sample_environment(spec, 200, 3)
    outro = sample_environment(spec, 50, 4)

    np.testing.assert_array_equal(pequeno.omega_plus, grande.omega_plus[150:251])
    np.testing.assert_array_equal(pequeno.omega_plus, sample_environment(spec, 50, 3).omega_plus)
    assert not np.array_equal(pequeno.omega_plus, outro.omega_plus)


def test_lei_de_dois_pontos_e_elipticidade(spec, ambiente):
    valores = set(np.round(ambiente.omega_plus, 12).tolist())
    assert valores <= {0.15, 0.35}
    assert np.all(ambiente.omega_plus >= spec.kappa_ell)
    assert np.all(ambiente.omega_minus >= spec.kappa_ell)

    ell = math.log(0.35 / 0.15)
    assert abs(abs(xi(ambiente, 0)) - ell) < 1e-12
    assert abs(sigma1_squared(spec) - ell ** 2) < 1e-12
    assert abs(tau_squared(spec) - 0.25 * ell ** 2) < 1e-12


def test_raio_negativo_e_sitio_fora_da_janela(spec, ambiente):
    with pytest.raises(ConfigurationError):
        sample_environment(spec, -1, 0)
    with pytest.raises(RangeError):
        xi(ambiente, 201)


def test_reescala_com_delta_um_devolve_o_proprio_ambiente(ambiente):
    renv = rescale_environment(ambiente, 1.0)
    np.testing.assert_array_equal(renv.omega_plus, ambiente.omega_plus)


def test_reescala_de_xi_nulo_e_exatamente_a_metade(spec):
    renv = rescaled_from_xi(spec, np.zeros(9), 0.25)
    assert np.all(renv.omega_plus == spec.sigma2 / 2.0)
    assert np.all(renv.u_dot == 0.0)


def test_delta_fora_de_zero_um(ambiente):
    with pytest.raises(ConfigurationError):
        rescale_environment(ambiente, 1.5)
    with pytest.raises(ConfigurationError):
        rescale_environment(ambiente, 0.0)


def test_campos_de_ruido(spec, renv):
    campos = noise_fields(renv)
    np.testing.assert_array_equal(campos.u_bar, -2.0 * campos.u_dot)
    np.testing.assert_array_equal(campos.u_bar1, campos.u_bar - campos.u_bar2)
    assert campos.u_bar2 == 0.0
    assert np.all((renv.omega_plus > 0) & (renv.omega_plus < spec.sigma2))


def test_sitio_exige_alinhamento_com_a_grade(renv):
    assert renv.sitio(0.25) == 2
    with pytest.raises(GridAlignmentError):
        renv.sitio(0.3)
    with pytest.raises(RangeError):
        renv.sitio(1000.0)


def test_escala_da_variancia_dois_pontos(spec):
    renv = rescale_environment(sample_environment(spec, 500_000, 11), 2.0 ** -10)
    assert abs(variance_ratio(renv) - 1.0) < 0.05


def test_escala_da_variancia_beta(spec_beta):
    renv = rescale_environment(sample_environment(spec_beta, 500_000, 11), 2.0 ** -10)
    assert abs(variance_ratio(renv) - 1.0) < 0.05


def test_lei_beta_tem_media_nula_e_assimetria(spec_beta):
    lei = spec_beta.lei_xi
    assert abs(lei.esperanca(lambda x: x)) < 1e-9
    assert abs(lei.momento(3)) > 1e-3


def test_u_bar2_nulo_para_lei_simetrica(spec):
    assert u_bar2_exact(spec, 0.01) == 0.0
    assert u_bar2_constant(spec) == 0.0


def test_u_bar2_de_ordem_tres_meios(spec_beta):
    deltas = [2.0 ** -k for k in range(4, 11)]
    valores = [abs(u_bar2_exact(spec_beta, d)) for d in deltas]
    ajuste = fit_rate(deltas, valores, reamostragens=0)
    assert 1.4 <= ajuste.slope <= 1.6

    d = 2.0 ** -10
    razao = u_bar2_exact(spec_beta, d) / (u_bar2_constant(spec_beta) * d ** 1.5)
    assert abs(razao - 1.0) < 0.05


def test_espelho_e_simetrizacao(spec, ambiente):
    espelhado = mirror_environment(ambiente)
    np.testing.assert_allclose(espelhado.omega_plus[::-1], ambiente.omega_minus, atol=1e-15)

    simetrico = symmetrize_environment(ambiente)
    np.testing.assert_allclose(mirror_environment(simetrico).omega_plus, simetrico.omega_plus, atol=1e-15)
    assert simetrico.omega_plus[simetrico.radius] == spec.sigma2 / 2.0


def test_caminho_do_ruido_interpolado():
    campo = np.array([1.0, 2.0, 3.0, 4.0, 5.0])
    caminho = interpolate_noise(campo, 0.5)

    np.testing.assert_allclose(caminho.anchors, [-5.0, -3.0, 0.0, 4.0, 9.0])
    assert caminho(0.0) == 0.0
    assert caminho(0.25) == pytest.approx(2.0)
    with pytest.raises(RangeError):
        caminho(2.0)


def test_ambiente_dirigido_pelo_ruido(spec):
    u_bar = np.array([0.01, -0.02, 0.0, 0.03, -0.01])
    renv = rescaled_from_noise(spec, u_bar, 0.25)
    np.testing.assert_allclose(renv.u_bar, u_bar, atol=1e-15)
    assert renv.u_bar2 == 0.0


@pytest.mark.parametrize("nome_fixture", ["spec", "spec_beta"])
def test_lei_de_xi_coerente_com_a_amostragem(nome_fixture, request):
    especificacao = request.getfixturevalue(nome_fixture)
    lei = xi_law(especificacao)
    assert lei.variancia() == pytest.approx(sigma1_squared(especificacao), rel=1e-12)
    assert lei.esperanca(lambda x: x) == pytest.approx(0.0, abs=1e-8)
    for u in (0.1, 0.5, 0.9):
        assert float(lei.cdf(lei.ppf(u))) >= u - 1e-9
    ambiente = sample_environment(especificacao, 2000, seed=3)
    amostras = np.array([xi(ambiente, int(x)) for x in ambiente.sitios])
    assert abs(amostras.mean()) < 5.0 * math.sqrt(lei.variancia() / amostras.size)
