# -*- coding: utf-8 -*-
"""
Teste Simples de Inicialização
==============================

Verifica se os módulos do laboratório podem ser importados e se a
configuração padrão e o parser da CLI são montados sem erros.
"""

import importlib

import pytest

MODULOS = [
    'sinai_lab',
    'sinai_lab.config',
    'sinai_lab.errors',
    'sinai_lab.rng',
    'sinai_lab.env',
    'sinai_lab.walk',
    'sinai_lab.kernel',
    'sinai_lab.rough',
    'sinai_lab.pde',
    'sinai_lab.couple',
    'sinai_lab.fitting',
    'sinai_lab.harness',
    'sinai_lab.exportacao',
    'sinai_lab.schemas',
    'sinai_lab.cli',
]


@pytest.mark.parametrize('nome', MODULOS)
def test_modulo_importa(nome):
    assert importlib.import_module(nome) is not None


def test_configuracao_padrao_e_consistente():
    from sinai_lab.config import Config
    from sinai_lab.rough import WeightParams

    assert Config.DELTA_REF < min(Config.DELTAS)
    assert 0.0 < Config.EPSILON < 1.0
    WeightParams()


def test_parser_tem_todos_os_subcomandos():
    from sinai_lab.cli import COMANDOS, construir_parser

    parser = construir_parser()
    for subcomando in COMANDOS:
        args = parser.parse_args([subcomando, '--n', '8'] if subcomando == 'kernel' else [subcomando])
        assert args.subcommand == subcomando
