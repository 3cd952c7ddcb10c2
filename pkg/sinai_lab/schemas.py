# -*- coding: utf-8 -*-
"""
Schemas de Serialização
=======================

Schemas marshmallow dos objetos do laboratório. `dump` produz os
documentos JSON gravados pelos experimentos e `load` valida a entrada
e reconstrói as dataclasses congeladas; erros de validação das
dataclasses são convertidos em ValidationError.

Autor: Sistema Sinai Lab
Data: 2024
"""

import logging

import numpy as np
from marshmallow import EXCLUDE, RAISE, Schema, ValidationError, fields, post_load, validate, validates_schema

from .couple import MODOS_ACOPLAMENTO
from .env import TIPOS_AMBIENTE, Environment, EnvironmentSpec
from .errors import SinaiLabError
from .fitting import RateFit
from .harness import MODOS_EXPOENTE
from .pde import FUNCOES_TESTE
from .rough import WeightParams

logger = logging.getLogger(__name__)

_POSITIVO = validate.Range(min=0.0, min_inclusive=False)


def _construir(classe, dados):
    """Instancia a dataclass convertendo erros de domínio em ValidationError."""
    try:
        return classe(**dados)
    except SinaiLabError as erro:
        raise ValidationError(str(erro)) from erro


class EnvironmentSpecSchema(Schema):
    """Schema para a especificação do ambiente."""

    class Meta:
        unknown = RAISE

    epsilon = fields.Float(required=True, validate=validate.Range(min=0.0, max=1.0, min_inclusive=False, max_inclusive=False))
    kappa_ell = fields.Float(required=True, validate=_POSITIVO)
    kind = fields.String(load_default='two-point', validate=validate.OneOf(TIPOS_AMBIENTE))
    half_gap = fields.Float(load_default=0.1, validate=_POSITIVO)
    beta_a = fields.Float(load_default=2.0, validate=_POSITIVO)
    beta_b = fields.Float(load_default=None, allow_none=True, validate=_POSITIVO)

    @post_load
    def criar(self, dados, **kwargs):
        return _construir(EnvironmentSpec, dados)


class EnvironmentSchema(Schema):
    """Schema do ambiente: {spec, radius, seed, omega_plus}."""

    spec = fields.Nested(EnvironmentSpecSchema, required=True)
    radius = fields.Integer(required=True, validate=validate.Range(min=0))
    seed = fields.Integer(required=True)
    omega_plus = fields.List(fields.Float(), required=True)

    @validates_schema
    def validar_janela(self, dados, **kwargs):
        if len(dados['omega_plus']) != 2 * dados['radius'] + 1:
            raise ValidationError(
                f"omega_plus com {len(dados['omega_plus'])} valores para raio {dados['radius']}", 'omega_plus'
            )

    @post_load
    def criar(self, dados, **kwargs):
        dados['omega_plus'] = np.asarray(dados['omega_plus'], dtype=float)
        return _construir(Environment, dados)


class WeightParamsSchema(Schema):
    """Schema dos expoentes e pesos; gamma é apenas de saída."""

    class Meta:
        unknown = EXCLUDE

    alpha = fields.Float(required=True)
    beta = fields.Float(required=True)
    beta_linha = fields.Float(required=True)
    chi = fields.Float(required=True)
    theta = fields.Float(required=True)
    theta_linha = fields.Float(required=True)
    lam = fields.Float(required=True)
    gamma = fields.Float(dump_only=True)
    raios = fields.List(fields.Float(), required=True)
    horizonte = fields.Float(load_default=1.0)
    pontos_tempo = fields.Integer(load_default=17)

    @post_load
    def criar(self, dados, **kwargs):
        dados['raios'] = tuple(dados['raios'])
        return _construir(WeightParams, dados)


class NormReportSchema(Schema):
    """Schema de saída do relatório de normas ponderadas."""

    tempos = fields.List(fields.Float())
    raios = fields.List(fields.Float())
    sup_norma = fields.List(fields.List(fields.Float()))
    holder = fields.List(fields.List(fields.Float()))
    norma_derivada = fields.List(fields.List(fields.Float()))
    norma_resto = fields.List(fields.List(fields.Float()))
    pesos = fields.List(fields.List(fields.Float()))
    ponderado = fields.List(fields.List(fields.Float()))
    agregado = fields.Float()
    por_raio = fields.List(fields.Float())
    rho = fields.Float(allow_none=True)
    distancia = fields.Float(allow_none=True)


class RateFitSchema(Schema):
    """Schema do ajuste log-log: {slope, ci_lo, ci_hi, r2, points, ...}."""

    slope = fields.Float(required=True)
    ci_lo = fields.Float(required=True)
    ci_hi = fields.Float(required=True)
    r2 = fields.Float(required=True)
    points = fields.List(fields.List(fields.Float()), attribute='pontos', required=True)
    intercept = fields.Float(load_default=float('nan'))
    lower_bound = fields.Float(attribute='limite_inferior', load_default=float('nan'))
    level = fields.Float(attribute='nivel', load_default=0.95)
    conclusive = fields.Boolean(attribute='conclusivo', dump_only=True)
    resamples = fields.Integer(attribute='reamostragens', load_default=0)
    discarded = fields.Integer(attribute='descartados', load_default=0)

    @post_load
    def criar(self, dados, **kwargs):
        dados['pontos'] = [tuple(ponto) for ponto in dados['pontos']]
        return RateFit(**dados)


class IBPReportSchema(Schema):
    """Schema de saída dos resíduos de soma por partes."""

    ancoras = fields.List(fields.Float())
    passos = fields.List(fields.Integer())
    residuo_J = fields.List(fields.Float())
    residuo_gradiente = fields.List(fields.Float())
    residuo_hat = fields.List(fields.Float())
    independencia = fields.Float()
    escala = fields.Float()
    maximo = fields.Float()


class ExponentReportSchema(Schema):
    """Schema de saída da otimização dos expoentes."""

    mode = fields.String(attribute='modo')
    alpha = fields.Float()
    zeta = fields.Float()
    beta = fields.Float(allow_none=True)
    beta_prime = fields.Float(attribute='beta_linha', allow_none=True)
    tau = fields.Float(allow_none=True)
    note = fields.String(attribute='nota')
    details = fields.Dict(attribute='detalhes')


class ConvergenceReportSchema(Schema):
    """Schema de saída do relatório ponta a ponta."""

    config = fields.Dict()
    deltas = fields.List(fields.Float())
    seeds = fields.List(fields.Integer(), attribute='sementes')
    values = fields.Dict(attribute='valores')
    errors = fields.Dict(attribute='erros')
    tail_bounds = fields.Dict(attribute='limites_cauda')
    reference_half = fields.Dict(attribute='referencia_meia')
    reference_reliable = fields.Boolean(attribute='confiavel')
    fits = fields.Dict(keys=fields.String(), values=fields.Nested(RateFitSchema), attribute='ajustes')
    seed_rates = fields.Method('_taxas_por_semente')
    controlled_distance = fields.Dict(attribute='distancia', allow_none=True)
    zeta = fields.Float()
    note = fields.String(attribute='nota')
    passed = fields.Method('_passou')

    def _taxas_por_semente(self, relatorio):
        return {nome: taxas.to_dict() for nome, taxas in relatorio.taxas_por_semente.items()}

    def _passou(self, relatorio):
        return relatorio.passou()


class CliConfigSchema(Schema):
    """
    Configuração efetiva da CLI.

    Chaves planas espelhando os nomes das flags (com '_' no lugar de
    '-'); chaves desconhecidas num arquivo de configuração são erro.
    """

    class Meta:
        unknown = RAISE
        ordered = True

    subcommand = fields.String(required=True)
    config = fields.String(allow_none=True)
    out = fields.String(required=True)
    seed = fields.Integer(required=True, validate=validate.Range(min=0))
    jobs = fields.Integer(required=True, validate=validate.Range(min=1))
    verbosity = fields.String(load_default='INFO', validate=validate.OneOf(('DEBUG', 'INFO', 'WARNING', 'ERROR')))

    # ambiente
    epsilon = fields.Float(required=True)
    kappa_ell = fields.Float(required=True)
    kind = fields.String(required=True, validate=validate.OneOf(TIPOS_AMBIENTE))
    half_gap = fields.Float(required=True)
    beta_a = fields.Float(required=True)
    beta_b = fields.Float(allow_none=True)

    # expoentes e pesos
    alpha = fields.Float(required=True)
    beta = fields.Float(required=True)
    beta2 = fields.Float(required=True)
    chi = fields.Float(required=True)
    theta = fields.Float(required=True)
    theta2 = fields.Float(required=True)
    lam = fields.Float(required=True, data_key='lambda')
    radii = fields.List(fields.Float(validate=_POSITIVO), required=True)

    # grades
    delta = fields.List(fields.Float(validate=_POSITIVO), required=True)
    delta_ref = fields.Float(required=True, validate=_POSITIVO)
    T = fields.Float(required=True, validate=_POSITIVO)
    seeds = fields.List(fields.Integer(validate=validate.Range(min=0)), required=True)
    h = fields.List(fields.String(validate=validate.OneOf(sorted(FUNCOES_TESTE))), required=True)
    mode = fields.String(required=True, validate=validate.OneOf(MODOS_ACOPLAMENTO))
    gaussian_control = fields.Boolean(load_default=False)
    band_sigmas = fields.Float(required=True, validate=_POSITIVO)
    distance = fields.Boolean(load_default=True)

    # núcleo
    n = fields.Integer(allow_none=True, validate=validate.Range(min=1))
    m = fields.List(fields.Integer(validate=validate.Range(min=0, max=4)), load_default=[2, 4])
    b = fields.Float(allow_none=True, validate=_POSITIVO)

    # verificações da EDP
    steps = fields.Integer(allow_none=True, validate=validate.Range(min=1))
    anchors = fields.List(fields.Float(), load_default=[0.0, 0.25])
    tolerance = fields.Float(required=True, validate=validate.Range(min=0.0))

    # expoente ótimo
    exponent_mode = fields.String(load_default='closed-form', validate=validate.OneOf(MODOS_EXPOENTE))

    # env-dump
    radius = fields.Integer(allow_none=True, validate=validate.Range(min=0))

    @validates_schema
    def validar_referencia(self, dados, **kwargs):
        if dados.get('delta') and dados['delta_ref'] >= min(dados['delta']):
            raise ValidationError(
                f"delta_ref={dados['delta_ref']} deve ser menor que min(delta)={min(dados['delta'])}", 'delta_ref'
            )
