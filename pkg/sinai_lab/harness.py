# -*- coding: utf-8 -*-
"""
Experimento de Convergência Ponta a Ponta
=========================================

Para cada semente um único Browniano W dirige todos os δ: o ambiente
acoplado de cada δ fornece E^ω[h(X^δ_T)] exato (recursão em banda) e a
referência é a mesma recursão em δ_ref com Ū substituído pelos
incrementos de W. Os erros |valor − referência| são ajustados em
log-log e comparados com o piso teórico ζ = (9 − √57)/24.

Também mede a distância controlada d(ṽ^δ, ṽ^ref) ao lado de
ρ + δ^{β′(β′−β)/(β′+β)} e resolve a otimização dos expoentes.

Autor: Sistema Sinai Lab
Data: 2024
"""

import logging
import math
import os
from concurrent.futures import ProcessPoolExecutor, as_completed
from dataclasses import dataclass, field

import numpy as np
from scipy import optimize

from .config import Config
from .couple import SUBDIVISOES, couple, coupled_lift_distance, sample_brownian
from .env import EnvironmentSpec, rescaled_from_noise, tau_squared
from .errors import ConfigurationError, SinaiLabError, StageError
from .exportacao import escrever_csv, escrever_json
from .fitting import fit_rate
from .pde import build_v_delta, funcao_teste
from .rng import FLUXO_BOOTSTRAP, gerador
from .rough import ControlledProcess, WeightParams, controlled_distance_report, lift
from .walk import banda_recomendada, numero_passos, quenched_expectation_detalhada

logger = logging.getLogger(__name__)

# Piso teórico da taxa e expoente ótimo em forma fechada
ZETA = (9.0 - math.sqrt(57.0)) / 24.0
ALPHA_ESTRELA = (3.0 + math.sqrt(57.0)) / 24.0
ALPHA_IMPRESSO = 0.42

MODOS_EXPOENTE = ('closed-form', 'grid-search', 'remark-quarter')


def expoente_q(beta, beta_linha):
    """Q(β, β′) = β′(β′ − β)/(β′ + β)."""
    return beta_linha * (beta_linha - beta) / (beta_linha + beta)


def nota_alpha():
    return (
        f"α* = (3 + √57)/24 = {ALPHA_ESTRELA:.10f}; o valor aproximado impresso "
        f"{ALPHA_IMPRESSO} difere de {ALPHA_ESTRELA - ALPHA_IMPRESSO:.4f}"
    )


# ----------------------------------------------------------------------
# Configuração
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class ExperimentConfig:
    """
    Configuração do experimento ponta a ponta.

    Attributes:
        spec (EnvironmentSpec): Lei do ambiente
        funcoes (tuple): Nomes das funções de teste h
        horizonte (float): Horizonte T
        deltas (tuple): Lista de δ
        delta_ref (float): δ da referência (< min δ)
        params (WeightParams): Expoentes e raios
        sementes (tuple): Sementes dos Brownianos
        modo (str): Acoplador
        saida (str): Diretório de saída
        jobs (int): Processos paralelos
        banda_sigmas (float): Largura das bandas em unidades de √N
        estudar_distancia (bool): Calcula a distância controlada
        subdivisoes (int): Pontos de comparação por δ no cálculo de ρ
    """

    spec: EnvironmentSpec
    funcoes: tuple = (Config.FUNCAO_TESTE,)
    horizonte: float = Config.HORIZONTE
    deltas: tuple = Config.DELTAS
    delta_ref: float = Config.DELTA_REF
    params: WeightParams = field(default_factory=WeightParams)
    sementes: tuple = Config.SEMENTES
    modo: str = Config.MODO_ACOPLAMENTO
    saida: str = Config.OUTPUT_DIR
    jobs: int = 1
    banda_sigmas: float = Config.BANDA_SIGMAS
    estudar_distancia: bool = True
    subdivisoes: int = SUBDIVISOES

    def __post_init__(self):
        self._validar_dados()

    def _validar_dados(self):
        """
        Raises:
            ConfigurationError: δ_ref ≥ min δ, menos de dois δ ou sem sementes
            GridAlignmentError: T ou os tempos dos pesos fora da grade
        """
        if len(self.deltas) < 2:
            raise ConfigurationError(f"O experimento exige pelo menos dois valores de δ: {self.deltas}")
        if not self.sementes:
            raise ConfigurationError("O experimento exige pelo menos uma semente")
        if not self.delta_ref < min(self.deltas):
            raise ConfigurationError(f"δ_ref={self.delta_ref} deve ser menor que min δ={min(self.deltas)}")
        for nome in self.funcoes:
            funcao_teste(nome)
        for delta in self.todos_deltas + (self.delta_ref / 2.0,):
            numero_passos(self.horizonte, delta)
            if self.estudar_distancia:
                for t in self.params.tempos:
                    numero_passos(t, delta)
        if abs(self.params.horizonte - self.horizonte) > 1e-12:
            raise ConfigurationError(
                f"Horizonte dos pesos ({self.params.horizonte}) diferente de T={self.horizonte}"
            )

    @property
    def todos_deltas(self):
        """Lista de δ decrescente seguida de δ_ref."""
        return tuple(sorted((float(d) for d in self.deltas), reverse=True)) + (float(self.delta_ref),)

    @property
    def passo_fino(self):
        return min(self.delta_ref / 2.0, min(self.deltas) / self.subdivisoes)

    def banda(self, delta):
        N = numero_passos(self.horizonte, delta)
        return min(banda_recomendada(N, self.banda_sigmas), N)

    def raio_distancia(self, delta):
        """Sítios da janela do estudo de distância: banda + raio máximo + folga."""
        return self.banda(delta) + int(math.ceil(max(self.params.raios) / delta)) + 2

    def janela_browniano(self):
        janela = max(self.params.raios) + 2.0 * max(self.deltas)
        for delta in self.todos_deltas + (self.delta_ref / 2.0,):
            janela = max(janela, (self.raio_distancia(delta) + 2) * delta)
        return janela

    def to_dict(self):
        return {
            'spec': self.spec.to_dict(),
            'funcoes': list(self.funcoes),
            'horizonte': self.horizonte,
            'deltas': list(self.deltas),
            'delta_ref': self.delta_ref,
            'params': self.params.to_dict(),
            'sementes': list(self.sementes),
            'modo': self.modo,
            'saida': self.saida,
            'jobs': self.jobs,
            'banda_sigmas': self.banda_sigmas,
            'estudar_distancia': self.estudar_distancia,
        }


# ----------------------------------------------------------------------
# Etapas por semente
# ----------------------------------------------------------------------

def _etapa(nome, parametros, funcao, *args, **kwargs):
    """Executa uma etapa convertendo falhas em StageError."""
    try:
        return funcao(*args, **kwargs)
    except StageError:
        raise
    except (SinaiLabError, ArithmeticError, ValueError) as erro:
        logger.error(f"Falha na etapa {nome} com {parametros}: {erro}")
        raise StageError(nome, parametros, erro) from erro


def _browniano(cfg, semente):
    return _etapa(
        'browniano', {'semente': semente}, sample_brownian,
        tau_squared(cfg.spec), cfg.passo_fino, cfg.janela_browniano(), semente,
    )


def _ambiente_ruido(cfg, W, delta, raio):
    return rescaled_from_noise(cfg.spec, W.incrementos_por_sitio(delta, raio), delta)


def _valores_quenched(cfg, renv, delta):
    banda = cfg.banda(delta)
    resultado = {}
    for nome in cfg.funcoes:
        valor = quenched_expectation_detalhada(renv, funcao_teste(nome), cfg.horizonte, 0.0, banda=banda)
        resultado[nome] = (valor.valor, valor.limite_cauda)
    return resultado


def _job_valores(cfg, semente):
    """Valores quenched por δ, referência e referência com δ_ref/2."""
    W = _browniano(cfg, semente)
    linhas = {}
    for delta in cfg.todos_deltas[:-1]:
        parametros = {'semente': semente, 'delta': delta, 'modo': cfg.modo}
        campo = _etapa('acoplamento', parametros, couple, W, delta, cfg.spec, cfg.modo, raio=cfg.banda(delta))
        linhas[delta] = _etapa('esperanca', parametros, _valores_quenched, cfg, campo.renv, delta)

    referencias = []
    for delta in (cfg.delta_ref, cfg.delta_ref / 2.0):
        parametros = {'semente': semente, 'delta': delta}
        renv = _etapa('ambiente_referencia', parametros, _ambiente_ruido, cfg, W, delta, cfg.banda(delta))
        referencias.append(_etapa('referencia', parametros, _valores_quenched, cfg, renv, delta))
    return semente, linhas, referencias[0], referencias[1]


def _executar(funcao, cfg, sementes):
    """Roda funcao(cfg, semente) por semente, em paralelo quando cfg.jobs > 1."""
    resultados = {}
    if cfg.jobs and cfg.jobs > 1:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as executor:
            futuros = {executor.submit(funcao, cfg, s): s for s in sementes}
            for futuro in as_completed(futuros):
                resultado = futuro.result()
                resultados[resultado[0]] = resultado[1:]
                logger.info(f"Job concluído: semente {resultado[0]}")
    else:
        for s in sementes:
            resultado = funcao(cfg, s)
            resultados[resultado[0]] = resultado[1:]
            logger.info(f"Job concluído: semente {resultado[0]}")
    return resultados


# ----------------------------------------------------------------------
# Relatório
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class SeedRates:
    """Mediana das taxas ajustadas por semente com IC bootstrap."""

    taxas: list
    mediana: float
    ci_lo: float
    ci_hi: float

    @property
    def exclui_zero(self):
        return self.ci_lo > 0.0 or self.ci_hi < 0.0

    def to_dict(self):
        return {
            'rates': self.taxas,
            'median': self.mediana,
            'ci_lo': self.ci_lo,
            'ci_hi': self.ci_hi,
            'excludes_zero': self.exclui_zero,
        }


def seed_rates(taxas, reamostragens=None, nivel=None, semente=0):
    """Bootstrap da mediana das taxas por semente."""
    reamostragens = Config.REAMOSTRAGENS_BOOTSTRAP if reamostragens is None else reamostragens
    nivel = Config.NIVEL_CONFIANCA if nivel is None else nivel
    taxas = np.asarray([t for t in taxas if np.isfinite(t)], dtype=float)
    if taxas.size == 0:
        return SeedRates(taxas=[], mediana=math.nan, ci_lo=math.nan, ci_hi=math.nan)
    rng = gerador(semente, FLUXO_BOOTSTRAP)
    medianas = np.median(taxas[rng.integers(0, taxas.size, (reamostragens, taxas.size))], axis=1)
    cauda = 100.0 * (1.0 - nivel) / 2.0
    ci_lo, ci_hi = np.percentile(medianas, [cauda, 100.0 - cauda])
    return SeedRates(taxas=taxas.tolist(), mediana=float(np.median(taxas)), ci_lo=float(ci_lo), ci_hi=float(ci_hi))


def violacoes_monotonia(serie):
    """Número de oitavas em que a série (δ decrescente) não diminui."""
    serie = np.asarray(serie, dtype=float)
    return int(np.sum(np.diff(serie) >= 0))


@dataclass(frozen=True)
class ConvergenceReport:
    """
    Resultado do experimento ponta a ponta.

    Attributes:
        config (dict): Configuração efetiva
        deltas (list): δ decrescentes seguidos de δ_ref
        sementes (list): Sementes
        valores (dict): {h: matriz sementes × deltas} de E^ω[h(X^δ_T)]
        erros (dict): {h: matriz sementes × deltas}; coluna de δ_ref nula
        limites_cauda (dict): {h: matriz} das cotas das bandas
        referencia_meia (dict): {h: lista por semente} com δ_ref/2
        confiavel (bool): Autoconsistência da referência
        ajustes (dict): {h: RateFit} da mediana dos erros contra δ
        taxas_por_semente (dict): {h: SeedRates} das taxas por semente
        distancia (dict, optional): Estudo de distância controlada
        zeta (float): Piso teórico (9 − √57)/24
        nota (str): Observação sobre α*
    """

    config: dict
    deltas: list
    sementes: list
    valores: dict
    erros: dict
    limites_cauda: dict
    referencia_meia: dict
    confiavel: bool
    ajustes: dict
    taxas_por_semente: dict
    distancia: dict = None
    zeta: float = ZETA
    nota: str = field(default_factory=nota_alpha)

    def passou(self, funcao=None):
        """Cota inferior unilateral da taxa acima de ζ e referência confiável."""
        nome = funcao or next(iter(self.ajustes))
        return self.confiavel and self.ajustes[nome].excede(self.zeta)

    def linhas_valores(self, funcao):
        """Linhas "seed,delta,value,error"."""
        for i, semente in enumerate(self.sementes):
            for j, delta in enumerate(self.deltas):
                yield semente, delta, self.valores[funcao][i][j], self.erros[funcao][i][j]

    def linhas_distancia(self):
        """Linhas "delta,rho,d,bound" com medianas sobre as sementes."""
        if not self.distancia:
            return
        for linha in self.distancia['linhas']:
            yield linha['delta'], linha['rho'], linha['d'], linha['bound']

    def to_dict(self):
        return {
            'config': self.config,
            'deltas': self.deltas,
            'seeds': self.sementes,
            'values': self.valores,
            'errors': self.erros,
            'tail_bounds': self.limites_cauda,
            'reference_half': self.referencia_meia,
            'reference_reliable': self.confiavel,
            'fits': {nome: ajuste.to_dict() for nome, ajuste in self.ajustes.items()},
            'seed_rates': {nome: ajuste.to_dict() for nome, ajuste in self.taxas_por_semente.items()},
            'monotonicity': {
                nome: {
                    'median_violations': violacoes_monotonia(np.median(np.array(erros)[:, :-1], axis=0)),
                    'per_seed_violations': [violacoes_monotonia(linha[:-1]) for linha in erros],
                }
                for nome, erros in self.erros.items()
            },
            'controlled_distance': self.distancia,
            'zeta': self.zeta,
            'note': self.nota,
            'reference_disclosure': (
                'referência = recursão discreta em δ_ref dirigida pelos incrementos de W '
                '(autoconvergência, não a difusão contínua)'
            ),
        }


def run_end_to_end(cfg):
    """
    Executa o experimento ponta a ponta.

    Args:
        cfg (ExperimentConfig): Configuração validada

    Returns:
        ConvergenceReport: Valores, erros, ajustes e distâncias

    Raises:
        StageError: Se alguma etapa falhar (nome e parâmetros anexados)
    """
    logger.info(f"Experimento ponta a ponta: δ={list(cfg.todos_deltas)}, sementes={list(cfg.sementes)}")
    resultados = _executar(_job_valores, cfg, cfg.sementes)
    sementes = list(cfg.sementes)
    deltas = list(cfg.todos_deltas)

    valores, erros, caudas, meia, taxas_semente, ajustes = {}, {}, {}, {}, {}, {}
    confiavel = True
    for nome in cfg.funcoes:
        v = np.zeros((len(sementes), len(deltas)))
        c = np.zeros_like(v)
        meias = []
        for i, s in enumerate(sementes):
            linhas, referencia, referencia_meia = resultados[s]
            for j, delta in enumerate(deltas[:-1]):
                v[i, j], c[i, j] = linhas[delta][nome]
            v[i, -1], c[i, -1] = referencia[nome]
            meias.append(referencia_meia[nome][0])
        e = np.abs(v - v[:, -1:])
        e[:, -1] = 0.0

        # autoconsistência: a referência muda menos que o menor erro medido
        variacao = np.abs(np.array(meias) - v[:, -1])
        consistente = bool(np.all(variacao < e[:, :-1].min(axis=1)))
        if not consistente:
            logger.warning(f"Referência não confiável para h={nome}: variação {variacao.max():.3e} com δ_ref/2")
        confiavel = confiavel and consistente

        ajustes[nome] = fit_rate(deltas[:-1], e[:, :-1], agregador='median')
        por_semente = [fit_rate(deltas[:-1], e[i, :-1], reamostragens=0).slope for i in range(len(sementes))]
        taxas_semente[nome] = seed_rates(por_semente)
        valores[nome], erros[nome], caudas[nome], meia[nome] = v.tolist(), e.tolist(), c.tolist(), meias
        logger.info(f"h={nome}: taxa {ajustes[nome].slope:.4f}, cota inferior {ajustes[nome].limite_inferior:.4f}, ζ={ZETA:.4f}")

    distancia = controlled_distance_study(cfg) if cfg.estudar_distancia else None
    return ConvergenceReport(
        config=cfg.to_dict(), deltas=deltas, sementes=sementes, valores=valores, erros=erros,
        limites_cauda=caudas, referencia_meia=meia, confiavel=confiavel, ajustes=ajustes,
        taxas_por_semente=taxas_semente, distancia=distancia,
    )


# ----------------------------------------------------------------------
# Distância controlada
# ----------------------------------------------------------------------

def _processo_na_grade(solucao, tempos, delta, raio):
    """
    ControlledProcess de ṽ amostrado nos pontos kδ, |kδ| ≤ raio, com o
    caminho de referência da solução lido nesses mesmos pontos.
    """
    K = int(round(raio / delta))
    xs = np.arange(-K, K + 1) * delta
    interpolado = solucao.interpolado
    valores = np.vstack([interpolado(t, xs) for t in tempos])
    ancoras = np.interp(xs, solucao.caminho.xs, solucao.caminho.ancoras)
    return ControlledProcess(
        tempos=np.asarray(tempos, dtype=float), caminho=lift(ancoras, delta, origem=-K * delta),
        v=valores, dv=solucao.coef_derivada * valores,
    )


def _solucao_v(cfg, renv, delta):
    h = funcao_teste(cfg.funcoes[0])
    N = numero_passos(cfg.horizonte, delta)
    guardar = {numero_passos(t, delta) for t in cfg.params.tempos}
    return build_v_delta(renv, h, None, N, guardar=guardar, verificar=False, banda=cfg.banda(delta))


def _job_distancia(cfg, semente):
    """(semente, {δ: (d, ρ)}) para um Browniano."""
    W = _browniano(cfg, semente)
    tempos = cfg.params.tempos
    raio = max(cfg.params.raios)

    parametros = {'semente': semente, 'delta': cfg.delta_ref}
    renv_ref = _etapa('ambiente_referencia', parametros, _ambiente_ruido,
                      cfg, W, cfg.delta_ref, cfg.raio_distancia(cfg.delta_ref))
    referencia = _etapa('v_referencia', parametros, _solucao_v, cfg, renv_ref, cfg.delta_ref)

    linhas = {}
    for delta in cfg.todos_deltas[:-1]:
        parametros = {'semente': semente, 'delta': delta, 'modo': cfg.modo}
        campo = _etapa('acoplamento', parametros, couple, W, delta, cfg.spec, cfg.modo,
                       raio=cfg.raio_distancia(delta))
        solucao = _etapa('v_delta', parametros, _solucao_v, cfg, campo.renv, delta)
        A = _processo_na_grade(solucao, tempos, delta, raio)
        B = _processo_na_grade(referencia, tempos, delta, raio)
        d = _etapa('distancia', parametros, controlled_distance_report, A, B, cfg.params).agregado
        rho, _ = _etapa('rho', parametros, coupled_lift_distance, W, delta, cfg.spec, cfg.params,
                        cfg.modo, subdivisoes=cfg.subdivisoes)
        linhas[delta] = (float(d), float(rho))
        logger.debug(f"Semente {semente}, δ={delta}: d={d:.4e}, ρ={rho:.4e}")
    return semente, linhas


def controlled_distance_study(cfg):
    """
    Mede d(ṽ^δ, ṽ^ref) e a compara com ρ + δ^{Q(β, β′)} em cada δ.

    A constante C_δ é a mediana sobre as sementes de d/(ρ + δ^Q); o
    estudo é estável quando o C agregado (máximo em δ) não passa do
    dobro do C da última oitava.

    Args:
        cfg (ExperimentConfig): Configuração validada

    Returns:
        dict: 'linhas' {delta, rho, d, bound} (medianas), matrizes por
        semente, constantes e o indicador de estabilidade
    """
    params = cfg.params
    expoente = expoente_q(params.beta, params.beta_linha)
    resultados = _executar(_job_distancia, cfg, cfg.sementes)
    deltas = list(cfg.todos_deltas[:-1])
    sementes = list(cfg.sementes)

    d = np.array([[resultados[s][0][delta][0] for delta in deltas] for s in sementes])
    rho = np.array([[resultados[s][0][delta][1] for delta in deltas] for s in sementes])
    bound = rho + np.asarray(deltas)[None, :] ** expoente
    constantes = np.median(d / bound, axis=0)
    C = float(np.max(constantes))
    C_ultima = float(constantes[-1])
    estavel = bool(C <= 2.0 * C_ultima)
    if not estavel:
        logger.warning(f"Constante da distância instável: C={C:.3e}, última oitava {C_ultima:.3e}")

    linhas = [
        {
            'delta': delta, 'rho': float(np.median(rho[:, j])), 'd': float(np.median(d[:, j])),
            'bound': float(np.median(bound[:, j])), 'C': float(constantes[j]),
        }
        for j, delta in enumerate(deltas)
    ]
    linhas.append({'delta': float(cfg.delta_ref), 'rho': None, 'd': 0.0, 'bound': None, 'C': None})
    logger.info(f"Distância controlada: C={C:.3e}, estável={estavel}")
    return {
        'linhas': linhas,
        'expoente': expoente,
        'd': d.tolist(),
        'rho': rho.tolist(),
        'C': C,
        'C_ultima_oitava': C_ultima,
        'estavel': estavel,
    }


# ----------------------------------------------------------------------
# Otimização dos expoentes
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class ExponentReport:
    """
    Resultado da otimização dos expoentes.

    Attributes:
        modo (str): 'closed-form', 'grid-search' ou 'remark-quarter'
        alpha (float): Maximizador
        zeta (float): Valor ótimo
        beta, beta_linha (float): Expoentes no ótimo (quando aplicável)
        tau (float): ½ − α
        nota (str): Observação sobre o valor impresso de α*
        detalhes (dict): Verificações auxiliares
    """

    modo: str
    alpha: float
    zeta: float
    beta: float = None
    beta_linha: float = None
    tau: float = None
    nota: str = field(default_factory=nota_alpha)
    detalhes: dict = field(default_factory=dict)

    def to_dict(self):
        return {
            'mode': self.modo,
            'alpha': self.alpha,
            'zeta': self.zeta,
            'beta': self.beta,
            'beta_prime': self.beta_linha,
            'tau': self.tau,
            'note': self.nota,
            'details': self.detalhes,
        }


def _objetivo(alpha):
    """min(½ − α, Q(⅓, α)): melhor valor com β = ⅓ e β′ = α."""
    return min(0.5 - alpha, expoente_q(1.0 / 3.0, alpha))


def _melhor_em_grade(alphas, pontos_beta):
    """Máximo de min(½ − α, max_{⅓ ≤ β ≤ β′ ≤ α} Q(β, β′)) em grades fechadas."""
    melhor = (-np.inf, None, None, None)
    for alpha in alphas:
        if alpha < 1.0 / 3.0:
            continue
        beta_linha = np.linspace(1.0 / 3.0, alpha, pontos_beta)
        # β percorre [⅓, β′] em cada coluna
        fracao = np.linspace(0.0, 1.0, pontos_beta)[:, None]
        beta = 1.0 / 3.0 + fracao * (beta_linha[None, :] - 1.0 / 3.0)
        q = expoente_q(beta, beta_linha[None, :])
        i, j = np.unravel_index(np.argmax(q), q.shape)
        valor = min(0.5 - alpha, float(q[i, j]))
        if valor > melhor[0]:
            melhor = (valor, float(alpha), float(beta[i, j]), float(beta_linha[j]))
    return melhor


def optimal_exponent(modo='closed-form', pontos=401, pontos_beta=201):
    """
    Resolve max_α min(½ − α, max Q(β, β′)) sobre ⅓ ≤ β ≤ β′ ≤ α < ½.

    Args:
        modo (str): 'closed-form' (α* = (3 + √57)/24 com verificação por
            brentq), 'grid-search' (grades aninhadas) ou 'remark-quarter'
            (max_α min(½ − α, α) = ¼ exatamente)
        pontos (int): Pontos da grade em α por nível
        pontos_beta (int): Pontos das grades em β e β′

    Returns:
        ExponentReport: Maximizador, valor ótimo e verificações

    Raises:
        ConfigurationError: Modo desconhecido
        SinaiLabError: Se a busca em grade divergir da forma fechada
    """
    if modo not in MODOS_EXPOENTE:
        raise ConfigurationError(f"Modo de expoente desconhecido: {modo}")

    if modo == 'closed-form':
        raiz = optimize.brentq(lambda a: (0.5 - a) - expoente_q(1.0 / 3.0, a), 1.0 / 3.0, 0.5, xtol=1e-15)
        detalhes = {'brentq_alpha': raiz, 'brentq_gap': abs(raiz - ALPHA_ESTRELA)}
        logger.info(f"α* = {ALPHA_ESTRELA:.10f} (brentq {raiz:.10f}), ζ = {ZETA:.10f}")
        return ExponentReport(modo=modo, alpha=ALPHA_ESTRELA, zeta=ZETA, beta=1.0 / 3.0,
                              beta_linha=ALPHA_ESTRELA, tau=0.5 - ALPHA_ESTRELA, detalhes=detalhes)

    if modo == 'remark-quarter':
        alphas = np.arange(2001) / 4000.0
        valores = np.minimum(0.5 - alphas, alphas)
        i = int(np.argmax(valores))
        return ExponentReport(modo=modo, alpha=float(alphas[i]), zeta=float(valores[i]),
                              tau=float(0.5 - alphas[i]), detalhes={'pontos': int(alphas.size)})

    lo, hi = 1.0 / 3.0, 0.5
    melhor = None
    for nivel in range(4):
        alphas = np.linspace(lo, hi, pontos)
        melhor = _melhor_em_grade(alphas, pontos_beta)
        passo = (hi - lo) / (pontos - 1)
        lo, hi = max(1.0 / 3.0, melhor[1] - 2 * passo), min(0.5, melhor[1] + 2 * passo)
        logger.debug(f"Busca em grade nível {nivel}: α={melhor[1]:.8f}, valor={melhor[0]:.8f}")
    valor, alpha, beta, beta_linha = melhor
    desvio = abs(alpha - ALPHA_ESTRELA)
    if desvio > 1e-3 or abs(valor - ZETA) > 1e-3:
        raise SinaiLabError(f"Busca em grade divergiu da forma fechada: α={alpha}, valor={valor}")
    return ExponentReport(modo=modo, alpha=alpha, zeta=valor, beta=beta, beta_linha=beta_linha,
                          tau=0.5 - alpha, detalhes={'desvio_alpha': desvio, 'desvio_zeta': abs(valor - ZETA)})


# ----------------------------------------------------------------------
# Saída
# ----------------------------------------------------------------------

def escrever_relatorio(relatorio, diretorio):
    """
    Grava o relatório JSON e as tabelas CSV do experimento.

    Returns:
        list: Caminhos dos arquivos gravados
    """
    os.makedirs(diretorio, exist_ok=True)
    arquivos = [escrever_json(os.path.join(diretorio, 'end2end.json'), relatorio.to_dict())]
    for nome in relatorio.valores:
        arquivos.append(escrever_csv(
            os.path.join(diretorio, f'values_{nome}.csv'),
            ('seed', 'delta', 'value', 'error'), relatorio.linhas_valores(nome),
        ))
    if relatorio.distancia:
        arquivos.append(escrever_csv(
            os.path.join(diretorio, 'controlled_distance.csv'),
            ('delta', 'rho', 'd', 'bound'), relatorio.linhas_distancia(),
        ))
    logger.info(f"Relatório gravado em {diretorio}")
    return arquivos
