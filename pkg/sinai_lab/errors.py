# -*- coding: utf-8 -*-
"""
Hierarquia de Erros do Laboratório
==================================

Exceções usadas por todos os módulos do laboratório. Cada classe herda
também da exceção padrão equivalente (ValueError, IndexError,
ArithmeticError) para que código cliente que já trata essas exceções
continue funcionando.

A CLI converte estas exceções em códigos de saída:
- 2 para erros de configuração/uso
- 3 para erros numéricos

Autor: Sistema Sinai Lab
Data: 2024
"""


class SinaiLabError(Exception):
    """Erro base de todas as falhas do laboratório."""


class ConfigurationError(SinaiLabError, ValueError):
    """Parâmetros inválidos ou janela insuficiente para o experimento."""


class TruncationError(ConfigurationError):
    """Tabela ou janela pequena demais para somas sem truncamento."""


class GridAlignmentError(SinaiLabError, ValueError):
    """Ponto (t, x) fora da grade δ²ℕ × δℤ ou grades incompatíveis."""


class DomainError(SinaiLabError, ValueError):
    """Argumento fora do domínio matemático da operação."""


class RangeError(SinaiLabError, IndexError):
    """Acesso fora da janela de sítios do ambiente ou da grade."""


class NumericalError(SinaiLabError, ArithmeticError):
    """
    Falha numérica (quadratura sem convergência, inversão de CDF, etc).

    Args:
        mensagem (str): Descrição do problema
        diagnostico (dict, optional): Dados para depuração
    """

    def __init__(self, mensagem, diagnostico=None):
        super().__init__(mensagem)
        self.diagnostico = dict(diagnostico or {})

    def __str__(self):
        base = super().__str__()
        if not self.diagnostico:
            return base
        detalhes = ', '.join(f'{chave}={valor}' for chave, valor in self.diagnostico.items())
        return f'{base} ({detalhes})'


class StageError(SinaiLabError):
    """
    Falha de uma etapa do experimento ponta a ponta.

    Guarda o nome da etapa e os parâmetros em uso para que o relatório
    de erro seja reproduzível.
    """

    def __init__(self, etapa, parametros, causa):
        self.etapa = etapa
        self.parametros = dict(parametros)
        self.causa = causa
        super().__init__(f"Falha na etapa '{etapa}' com parâmetros {self.parametros}: {causa}")

    @property
    def numerico(self):
        """True quando a causa original é um erro numérico."""
        return isinstance(self.causa, (NumericalError, ArithmeticError))
