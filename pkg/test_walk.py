# -*- coding: utf-8 -*-
"""
Testes do Passeio Reescalado
============================

Operador de transição, esperança quenched exata, simulação, problema
de martingale e representação de Itô discreta.
"""

import csv

import numpy as np
import pytest

from sinai_lab.env import EnvironmentSpec, mirror_environment, rescale_environment, sample_environment
from sinai_lab.errors import ConfigurationError, GridAlignmentError, RangeError
from sinai_lab.exportacao import dump_sweep_csv, dump_trajectory_csv
from sinai_lab.walk import (TransitionOperatorView, generator_apply, ito_representation_check, martingale_residual,
                            numero_passos, quenched_expectation, quenched_expectation_detalhada, quenched_sweep,
                            simulate_walk, simulate_walks, step_distribution, transition_operator)


def _f(t, x):
    return np.cos(x) * np.exp(-t)


def test_numero_de_passos():
    assert numero_passos(1.0, 0.125) == 64
    assert numero_passos(0.0, 0.125) == 0
    with pytest.raises(GridAlignmentError):
        numero_passos(0.3, 0.125)


def test_lei_de_um_passo(renv):
    esquerda, parado, direita = step_distribution(renv, 0.5)
    assert parado == renv.epsilon
    assert abs(esquerda + parado + direita - 1.0) < 1e-15
    with pytest.raises(RangeError):
        step_distribution(renv, renv.radius * renv.delta)


def test_linhas_do_operador_somam_um(renv):
    op = transition_operator(renv)
    assert isinstance(op, TransitionOperatorView)
    somas = op.somas_linhas()
    assert np.max(np.abs(somas - 1.0)) < 1e-15


def test_esperanca_de_constante(renv):
    assert abs(quenched_expectation(renv, lambda x: np.ones_like(x), 1.0) - 1.0) < 1e-12


def test_horizonte_zero_devolve_h_no_ponto_inicial(renv):
    assert quenched_expectation(renv, np.cos, 0.0, x0=0.5) == pytest.approx(np.cos(0.5), abs=1e-15)


def test_esperanca_exata_contra_monte_carlo(renv):
    exato = quenched_expectation(renv, np.cos, 1.0)
    lote = simulate_walks(renv, 64, 0.0, 5, 20000, guardar_caminhos=False)
    amostras = np.cos(lote.posicoes[-1])
    erro_padrao = amostras.std() / np.sqrt(amostras.size)
    assert abs(amostras.mean() - exato) < 4.0 * erro_padrao


def test_esperanca_em_banda_respeita_a_cota(renv):
    exato = quenched_expectation_detalhada(renv, np.cos, 1.0, 0.0)
    banda = quenched_expectation_detalhada(renv, np.cos, 1.0, 0.0, banda=30)
    assert exato.limite_cauda == 0.0
    assert banda.banda == 30
    assert abs(banda.valor - exato.valor) <= banda.limite_cauda + 1e-12


def test_janela_insuficiente(spec):
    pequeno = rescale_environment(sample_environment(spec, 10, 0), 0.125)
    with pytest.raises(ConfigurationError):
        quenched_expectation(pequeno, np.cos, 1.0)
    with pytest.raises(ConfigurationError):
        simulate_walk(pequeno, 64, 0.0, 0)


def test_simetria_por_reflexao(ambiente):
    delta = 0.125
    h = lambda x: np.cos(x) + 0.3 * np.sin(x)
    original = quenched_expectation(rescale_environment(ambiente, delta), h, 1.0)
    refletido = quenched_expectation(rescale_environment(mirror_environment(ambiente), delta), lambda x: h(-x), 1.0)
    assert abs(original - refletido) < 1e-12


def test_trajetoria_reprodutivel_e_preguicosa(spec):
    renv = rescale_environment(sample_environment(spec, 600, 7), 0.125)
    a = simulate_walk(renv, 500, 0.0, 9)
    b = simulate_walk(renv, 500, 0.0, 9)
    np.testing.assert_array_equal(a.sitios, b.sitios)
    saltos = np.diff(a.sitios)
    assert set(np.unique(saltos).tolist()) <= {-1, 0, 1}
    np.testing.assert_array_equal(saltos == 0, a.U <= renv.epsilon)


def test_quase_sempre_parado_quando_epsilon_tende_a_um():
    spec = EnvironmentSpec(epsilon=1.0 - 1e-9, kappa_ell=1e-10, half_gap=1e-10)
    renv = rescale_environment(sample_environment(spec, 100_000, 1), 0.125)
    traj = simulate_walk(renv, 100_000, 0.0, 1)
    assert np.count_nonzero(np.diff(traj.sitios)) / traj.passos < 1e-3


def test_fracao_parada_proxima_de_epsilon(spec):
    passos = 20_000
    renv = rescale_environment(sample_environment(spec, passos, 2), 0.125)
    traj = simulate_walk(renv, passos, 0.0, 6)
    fracao = np.mean(np.diff(traj.sitios) == 0)
    erro_padrao = np.sqrt(spec.epsilon * (1.0 - spec.epsilon) / passos)
    assert abs(fracao - spec.epsilon) < 4.0 * erro_padrao


def test_esperanca_linear_e_monotona_em_h(renv):
    h1 = np.cos
    h2 = lambda x: np.exp(-x ** 2)
    a = quenched_expectation(renv, h1, 1.0)
    b = quenched_expectation(renv, h2, 1.0)
    combinada = quenched_expectation(renv, lambda x: 2.0 * h1(x) - 3.0 * h2(x), 1.0)
    assert combinada == pytest.approx(2.0 * a - 3.0 * b, abs=1e-13)

    deslocada = quenched_expectation(renv, lambda x: np.cos(x) + 1.0, 1.0)
    assert deslocada >= a
    assert deslocada - a == pytest.approx(1.0, abs=1e-13)


def test_gerador_coincide_com_operador(renv):
    interior = generator_apply(renv, np.cos)
    assert interior.size == 2 * renv.radius - 1
    assert np.max(np.abs(generator_apply(renv, lambda x: np.ones_like(x)))) < 1e-9


def test_incrementos_do_martingale_sao_exatos(renv):
    traj = simulate_walk(renv, 50, 0.0, 1)
    M = martingale_residual(renv, _f, traj)
    assert M[0] == 0.0

    d = renv.delta
    for j in range(traj.passos):
        t = (j + 1) * d ** 2
        k = traj.sitios[j]
        esquerda, parado, direita = step_distribution(renv, k * d)
        media = direita * _f(t, (k + 1) * d) + esquerda * _f(t, (k - 1) * d) + parado * _f(t, k * d)
        esperado = _f(t, traj.sitios[j + 1] * d) - media
        assert abs((M[j + 1] - M[j]) - esperado) < 1e-12


def test_martingale_tem_media_nula(renv):
    lote = simulate_walks(renv, 64, 0.0, 2, 20000)
    M = martingale_residual(renv, _f, lote)[-1]
    assert abs(M.mean()) < 4.0 * M.std() / np.sqrt(M.size)


def test_representacao_de_ito_discreta(spec):
    renv = rescale_environment(sample_environment(spec, 10_050, 4), 0.125)
    verificacao = ito_representation_check(renv, _f, 3, 10_000)
    assert verificacao.passou
    assert float(verificacao) <= 1e-12
    assert verificacao.passos == 10_000

    curta = ito_representation_check(renv, _f, 3, 20, tol=-1.0)
    assert not curta.passou


def test_varredura_quenched_usa_o_mesmo_ambiente(spec, tmp_path):
    linhas = quenched_sweep(spec, 7, np.cos, [0.125, 0.25], [1.0, 0.25])
    assert [(d, T) for d, T, _ in linhas] == [(0.25, 0.25), (0.25, 1.0), (0.125, 0.25), (0.125, 1.0)]

    renv = rescale_environment(sample_environment(spec, 200, 7), 0.125)
    assert linhas[-1][2] == pytest.approx(quenched_expectation(renv, np.cos, 1.0), abs=1e-14)

    with pytest.raises(GridAlignmentError):
        quenched_sweep(spec, 7, np.cos, [0.125], [0.3])

    caminho = dump_sweep_csv(linhas, str(tmp_path / 'sweep.csv'))
    with open(caminho, encoding='utf-8') as arquivo:
        conteudo = list(csv.reader(arquivo))
    assert conteudo[0] == ['delta', 'T', 'value']
    assert len(conteudo) == 5


def test_trajetoria_em_csv(renv, tmp_path):
    traj = simulate_walk(renv, 40, 0.0, 2)
    caminho = dump_trajectory_csv(traj, str(tmp_path / 'traj' / 'trajectory.csv'))
    with open(caminho, encoding='utf-8') as arquivo:
        conteudo = list(csv.reader(arquivo))
    assert conteudo[0] == ['t', 'x']
    assert len(conteudo) == traj.passos + 2
    assert float(conteudo[1][0]) == 0.0 and float(conteudo[1][1]) == 0.0
