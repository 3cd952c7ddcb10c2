# -*- coding: utf-8 -*-
"""
Fixtures Compartilhadas dos Testes
==================================

Especificações de ambiente e diretórios temporários usados pelos testes
do laboratório.

Autor: Sistema Sinai Lab
Data: 2024
"""

import pytest

from sinai_lab.env import EnvironmentSpec, rescale_environment, sample_environment


@pytest.fixture
def spec():
    """Lei de dois pontos com ε = 0.5 e κ_ell = 0.05."""
    return EnvironmentSpec(epsilon=0.5, kappa_ell=0.05)


@pytest.fixture
def spec_beta():
    """Lei Beta escalada assimétrica (terceiro momento não nulo)."""
    return EnvironmentSpec(epsilon=0.5, kappa_ell=0.05, kind='scaled-beta', beta_a=2.0, beta_b=3.0)


@pytest.fixture
def ambiente(spec):
    return sample_environment(spec, 200, 7)


@pytest.fixture
def renv(ambiente):
    """Ambiente reescalado com δ = 1/8."""
    return rescale_environment(ambiente, 0.125)


@pytest.fixture
def saida(tmp_path, monkeypatch):
    """Diretório de trabalho temporário (logs e resultados vão para ele)."""
    monkeypatch.chdir(tmp_path)
    return tmp_path
