# -*- coding: utf-8 -*-
"""
Testes do Experimento Ponta a Ponta
===================================

Configuração do experimento, taxas por semente, otimização dos
expoentes e uma execução pequena completa.
"""

import json
import math
import os

import numpy as np
import pytest

from sinai_lab.errors import ConfigurationError, GridAlignmentError
from sinai_lab.harness import (ALPHA_ESTRELA, ZETA, ExperimentConfig, escrever_relatorio, expoente_q,
                               optimal_exponent, run_end_to_end, seed_rates, violacoes_monotonia)


def test_constantes_em_forma_fechada():
    assert ZETA == pytest.approx(0.0604, abs=1e-4)
    assert ZETA == pytest.approx(0.5 - ALPHA_ESTRELA, abs=1e-15)
    assert expoente_q(1.0 / 3.0, ALPHA_ESTRELA) == pytest.approx(ZETA, abs=1e-14)


def test_expoente_forma_fechada():
    relatorio = optimal_exponent('closed-form')
    assert relatorio.alpha == ALPHA_ESTRELA
    assert relatorio.zeta == ZETA
    assert relatorio.beta == pytest.approx(1.0 / 3.0)
    assert relatorio.detalhes['brentq_gap'] < 1e-12
    assert '0.42' in relatorio.nota


def test_expoente_um_quarto():
    relatorio = optimal_exponent('remark-quarter')
    assert relatorio.zeta == 0.25
    assert relatorio.alpha == 0.25


def test_expoente_por_busca_em_grade():
    relatorio = optimal_exponent('grid-search')
    assert abs(relatorio.alpha - ALPHA_ESTRELA) <= 1e-3
    assert abs(relatorio.zeta - ZETA) <= 1e-3
    assert set(relatorio.to_dict()) == {'mode', 'alpha', 'zeta', 'beta', 'beta_prime', 'tau', 'note', 'details'}


def test_expoente_modo_desconhecido():
    with pytest.raises(ConfigurationError):
        optimal_exponent('analitico')


def test_validacao_da_configuracao(spec):
    with pytest.raises(ConfigurationError):
        ExperimentConfig(spec=spec, deltas=(0.125,), delta_ref=2.0 ** -8)
    with pytest.raises(ConfigurationError):
        ExperimentConfig(spec=spec, deltas=(0.25, 0.125), delta_ref=0.125)
    with pytest.raises(ConfigurationError):
        ExperimentConfig(spec=spec, deltas=(0.25, 0.125), delta_ref=0.0625, sementes=())
    with pytest.raises(ConfigurationError):
        ExperimentConfig(spec=spec, deltas=(0.25, 0.125), delta_ref=0.0625, funcoes=('seno',))
    with pytest.raises(GridAlignmentError):
        ExperimentConfig(spec=spec, deltas=(0.25, 0.125), delta_ref=0.0625, horizonte=0.3)
    with pytest.raises(ConfigurationError):
        ExperimentConfig(spec=spec, deltas=(0.25, 0.125), delta_ref=0.0625, horizonte=2.0)


def test_todos_os_deltas_em_ordem_decrescente(spec):
    cfg = ExperimentConfig(spec=spec, deltas=(0.125, 0.25), delta_ref=0.0625)
    assert cfg.todos_deltas == (0.25, 0.125, 0.0625)
    assert cfg.passo_fino == pytest.approx(0.03125)


def test_taxas_por_semente():
    taxas = seed_rates([0.5, 0.6, 0.7, 0.55, math.nan])
    assert taxas.mediana == pytest.approx(0.575)
    assert len(taxas.taxas) == 4
    assert taxas.exclui_zero

    vazias = seed_rates([math.nan])
    assert math.isnan(vazias.mediana)
    assert not vazias.exclui_zero


def test_violacoes_de_monotonia():
    assert violacoes_monotonia([4.0, 2.0, 3.0, 1.0]) == 1
    assert violacoes_monotonia([3.0, 3.0]) == 1
    assert violacoes_monotonia([3.0, 2.0, 1.0]) == 0


def test_execucao_pequena_ponta_a_ponta(spec, tmp_path):
    cfg = ExperimentConfig(
        spec=spec, funcoes=('cos',), deltas=(0.25, 0.125), delta_ref=0.0625,
        sementes=(0, 1), saida=str(tmp_path), estudar_distancia=False,
    )
    relatorio = run_end_to_end(cfg)

    assert relatorio.deltas == [0.25, 0.125, 0.0625]
    erros = np.asarray(relatorio.erros['cos'])
    assert erros.shape == (2, 3)
    assert np.all(erros[:, -1] == 0.0)
    assert np.all(np.abs(np.asarray(relatorio.valores['cos'])) <= 1.0 + 1e-12)
    assert np.isfinite(relatorio.ajustes['cos'].slope)
    assert relatorio.distancia is None
    assert relatorio.zeta == ZETA

    arquivos = escrever_relatorio(relatorio, str(tmp_path))
    assert os.path.basename(arquivos[0]) == 'end2end.json'
    with open(arquivos[0], encoding='utf-8') as arquivo:
        documento = json.load(arquivo)
    assert documento['deltas'] == [0.25, 0.125, 0.0625]
    assert 'monotonicity' in documento
    assert os.path.exists(tmp_path / 'values_cos.csv')
