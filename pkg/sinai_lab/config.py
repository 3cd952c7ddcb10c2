# -*- coding: utf-8 -*-
"""
Configuração do Laboratório
===========================

Este módulo contém as configurações padrão de todos os experimentos:
parâmetros do ambiente, expoentes dos espaços de caminhos controlados,
listas de δ, tolerâncias das verificações e configurações de log.

Valores dependentes do ambiente de execução podem ser sobrescritos por
variáveis de ambiente ou por um arquivo .env no diretório corrente.

Autor: Sistema Sinai Lab
Data: 2024
"""

import os

from dotenv import load_dotenv

# Carrega variáveis do arquivo .env (se existir)
load_dotenv()


class Config:
    """
    Classe de configuração principal do laboratório.

    Contém os valores padrão usados pela CLI e pelos testes. Arquivos
    de configuração JSON e flags da linha de comando sobrescrevem estes
    valores (flags > arquivo > Config).
    """

    # Parâmetros do ambiente
    EPSILON = 0.5
    KAPPA_ELL = 0.05
    TIPO_AMBIENTE = 'two-point'
    MEIA_DISTANCIA = 0.1  # c da lei de dois pontos σ²/2 ± c
    BETA_A = 2.0
    BETA_B = None

    # Expoentes (1/3 < β < β′ < α < 1/2 e 1/2 − α < χ < β/2)
    ALPHA = 0.45
    BETA = 0.34
    BETA_LINHA = 0.42
    CHI = 0.07
    THETA = 2.5
    THETA_LINHA = 2.0
    LAMBDA = 4.0
    RAIOS = (1.0, 2.0, 4.0, 8.0)
    MOMENTOS_Q = (2.0,)

    # Grade do experimento ponta a ponta
    DELTAS = tuple(2.0 ** -k for k in range(3, 8))
    DELTA_REF = 2.0 ** -8
    HORIZONTE = 1.0
    SEMENTES = tuple(range(8))
    MODO_ACOPLAMENTO = 'dyadic-quantile'
    FUNCAO_TESTE = 'cos'

    # Tolerâncias das verificações
    TOL_MILD = 1e-9
    TOL_IBP = 1e-9
    TOL_V = 1e-8
    TOL_ITO = 1e-12
    TOL_QUADRATURA = 1e-12

    # Ajustes log-log
    REAMOSTRAGENS_BOOTSTRAP = 200
    R2_MINIMO = 0.5
    NIVEL_CONFIANCA = 0.95

    # Varredura de normas de Hölder
    MAX_PONTOS_EXATO = 4096

    # Banda da esperança quenched (largura = C·√N sítios)
    BANDA_SIGMAS = 12.0

    # Semente global e paralelismo
    SEMENTE = int(os.environ.get('SINAI_SEED') or 0)
    JOBS = int(os.environ.get('SINAI_JOBS') or (os.cpu_count() or 1))

    # Diretórios de saída
    OUTPUT_DIR = os.environ.get('SINAI_OUTPUT_DIR') or 'resultados'
    LOG_DIR = os.environ.get('SINAI_LOG_DIR') or 'logs'

    # Configurações de logs
    LOG_LEVEL = os.environ.get('SINAI_LOG_LEVEL') or 'INFO'
    LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'
