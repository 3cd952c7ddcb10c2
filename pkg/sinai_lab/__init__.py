# -*- coding: utf-8 -*-
"""
Sinai Lab
=========

Laboratório numérico do passeio de Sinai preguiçoso em ambiente
aleatório reescalado e de sua convergência para a difusão de Brox:
ambientes e campos de ruído, o núcleo do passeio livre, caminhos
rugosos discretos, a EDP discreta e sua forma branda, o acoplamento
com um Browniano e o experimento ponta a ponta.

Autor: Sistema Sinai Lab
Data: 2024
"""

__version__ = '1.0.0'
