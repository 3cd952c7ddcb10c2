# -*- coding: utf-8 -*-
"""
Exportação de Resultados
========================

Escrita de tabelas CSV com os cabeçalhos documentados, de documentos
JSON e de matrizes binárias (f64 little-endian, ordem por linhas) com
um arquivo JSON auxiliar descrevendo as dimensões.

Autor: Sistema Sinai Lab
Data: 2024
"""

import csv
import json
import logging
import os

import numpy as np

logger = logging.getLogger(__name__)


def _garantir_diretorio(caminho):
    diretorio = os.path.dirname(os.path.abspath(caminho))
    if not os.path.exists(diretorio):
        os.makedirs(diretorio)


def escrever_csv(caminho, cabecalho, linhas):
    """
    Escreve um CSV com o cabeçalho dado.

    Args:
        caminho (str): Arquivo de saída
        cabecalho (list[str]): Nomes das colunas
        linhas (iterable): Sequências com os valores de cada linha

    Returns:
        str: Caminho escrito
    """
    _garantir_diretorio(caminho)
    total = 0
    with open(caminho, 'w', newline='', encoding='utf-8') as arquivo:
        escritor = csv.writer(arquivo)
        escritor.writerow(cabecalho)
        for linha in linhas:
            escritor.writerow([repr(float(v)) if isinstance(v, (float, np.floating)) else v for v in linha])
            total += 1
    logger.info(f"CSV escrito: {caminho} ({total} linhas)")
    return caminho


def escrever_json(caminho, documento):
    """Escreve um documento JSON indentado."""
    _garantir_diretorio(caminho)
    with open(caminho, 'w', encoding='utf-8') as arquivo:
        json.dump(documento, arquivo, indent=2, ensure_ascii=False)
    logger.info(f"JSON escrito: {caminho}")
    return caminho


def escrever_binario(caminho, matriz, metadados):
    """
    Escreve matriz f64 little-endian em ordem por linhas e o JSON
    auxiliar em caminho + '.json'.

    Returns:
        tuple: (caminho binário, caminho do JSON auxiliar)
    """
    _garantir_diretorio(caminho)
    np.ascontiguousarray(matriz, dtype='<f8').tofile(caminho)
    auxiliar = caminho + '.json'
    escrever_json(auxiliar, dict(metadados, shape=list(np.shape(matriz))))
    return caminho, auxiliar


def ler_binario(caminho):
    """Lê uma matriz escrita por escrever_binario."""
    with open(caminho + '.json', encoding='utf-8') as arquivo:
        metadados = json.load(arquivo)
    dados = np.fromfile(caminho, dtype='<f8').reshape(metadados['shape'])
    return dados, metadados


def dump_fields_csv(renv, caminho):
    """
    Campos do ambiente reescalado em CSV "x,omega_plus,u_dot,u_bar,u_bar1".
    """
    linhas = zip(renv.posicoes, renv.omega_plus, renv.u_dot, renv.u_bar, renv.u_bar1)
    return escrever_csv(caminho, ['x', 'omega_plus', 'u_dot', 'u_bar', 'u_bar1'], linhas)


def dump_trajectory_csv(traj, caminho):
    """Trajetória em CSV "t,x"."""
    return escrever_csv(caminho, ['t', 'x'], zip(traj.tempos, traj.posicoes))


def dump_sweep_csv(linhas, caminho):
    """Varredura quenched em CSV "delta,T,value"."""
    return escrever_csv(caminho, ['delta', 'T', 'value'], linhas)
