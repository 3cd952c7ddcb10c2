# -*- coding: utf-8 -*-
"""
Fluxos Aleatórios Determinísticos
=================================

Geradores baseados em contador (Philox) identificados por
(semente, fluxo). Valores por sítio dependem apenas de (semente, fluxo,
índice do sítio): o mesmo sítio recebe o mesmo número uniforme qualquer
que seja o tamanho da janela amostrada.

Autor: Sistema Sinai Lab
Data: 2024
"""

import numpy as np

# Tamanho do bloco de sítios por valor de contador
TAMANHO_BLOCO = 4096

# Deslocamento que leva blocos de índice negativo a contadores positivos;
# o bloco ocupa a segunda palavra de 64 bits do contador
_DESLOCAMENTO_CONTADOR = 2 ** 62

# Identificadores de fluxo usados pelos módulos
FLUXO_AMBIENTE = 1
FLUXO_PASSEIO = 2
FLUXO_BROWNIANO = 3
FLUXO_BOOTSTRAP = 4


def chave(semente, *fluxos):
    """
    Deriva a chave Philox de 128 bits para (semente, fluxos).

    Args:
        semente (int): Semente não negativa
        *fluxos (int): Identificadores não negativos do fluxo

    Returns:
        numpy.ndarray: Dois uint64 usados como chave
    """
    sequencia = np.random.SeedSequence(entropy=int(semente), spawn_key=tuple(int(f) for f in fluxos))
    return sequencia.generate_state(2, dtype=np.uint64)


def gerador(semente, *fluxos):
    """
    Cria um numpy.random.Generator independente para (semente, fluxos).

    Returns:
        numpy.random.Generator: Gerador sobre Philox
    """
    return np.random.Generator(np.random.Philox(key=chave(semente, *fluxos)))


def uniformes_por_sitio(semente, fluxo, inicio, fim):
    """
    Retorna um uniforme em [0, 1) por sítio inteiro de inicio a fim.

    Cada bloco de TAMANHO_BLOCO sítios consome um valor próprio de
    contador, de modo que o valor de um sítio não depende dos demais
    sítios pedidos.

    Args:
        semente (int): Semente global
        fluxo (int): Identificador do fluxo
        inicio (int): Primeiro sítio (pode ser negativo)
        fim (int): Último sítio, inclusive

    Returns:
        numpy.ndarray: Vetor de comprimento fim − inicio + 1
    """
    if fim < inicio:
        return np.empty(0)

    k = chave(semente, fluxo)
    bloco_inicial = inicio // TAMANHO_BLOCO
    bloco_final = fim // TAMANHO_BLOCO

    partes = []
    for bloco in range(bloco_inicial, bloco_final + 1):
        bit_generator = np.random.Philox(key=k, counter=(bloco + _DESLOCAMENTO_CONTADOR) << 64)
        partes.append(np.random.Generator(bit_generator).random(TAMANHO_BLOCO))

    valores = np.concatenate(partes)
    deslocamento = inicio - bloco_inicial * TAMANHO_BLOCO
    return valores[deslocamento:deslocamento + (fim - inicio + 1)]
