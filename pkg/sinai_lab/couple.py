# -*- coding: utf-8 -*-
"""
Acoplamento do Ambiente com o Browniano
=======================================

Gera caminhos Brownianos bilaterais W com variância τ² e constrói,
para cada δ, uma sequência X^δ_m com lei σ²ξ acoplada aos incrementos
de W^δ_m = δ^{−1/2} W(mδ). O campo acoplado Ū₁^δ vem do ambiente
reescalado com ξ = X/σ²; a distância rugosa ρ_{α,χ}(Û₁^δ, W) mede a
qualidade do acoplamento.

Acopladores:
- per-step-quantile: X_m = σ² F_ξ^{−1}(Φ(Z_m)) passo a passo
- dyadic-quantile: somas de blocos acopladas no topo de uma árvore
  diádica pela transformação de quantis e refinadas para baixo por
  quantis condicionais (binomial/hipergeométrica exatas para a lei de
  dois pontos, Gaussiana exata, tabelada por FFT nos demais casos)

Autor: Sistema Sinai Lab
Data: 2024
"""

import logging
import math
from concurrent.futures import ProcessPoolExecutor, as_completed
from dataclasses import dataclass, field, replace

import numpy as np
from scipy import signal, special, stats

from .config import Config
from .env import LeiDoisPontos, LeiGaussiana, interpolate_noise, rescaled_from_xi, sigma1_squared, xi_law
from .errors import ConfigurationError, GridAlignmentError, NumericalError, RangeError
from .fitting import fit_rate
from .rng import FLUXO_BROWNIANO, gerador
from .rough import lift, rho_report

logger = logging.getLogger(__name__)

MODOS_ACOPLAMENTO = ('per-step-quantile', 'dyadic-quantile')

# Subdivisões do passo δ na grade de comparação com W
SUBDIVISOES = 4

# Resolução da tabela discretizada (fração do desvio padrão de X)
RESOLUCAO_DISCRETA = 256

_TOL_GRADE = 1e-9


# ----------------------------------------------------------------------
# Browniano
# ----------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class BrownianGrid:
    """
    Browniano bilateral W nos pontos i·passo, |i| ≤ pontos.

    Attributes:
        tau2 (float): Variância por unidade de comprimento
        passo (float): Passo fino da grade
        pontos (int): Número de pontos de cada lado
        valores (numpy.ndarray): W(i·passo) para i ∈ [−pontos, pontos]
        semente (int): Semente de origem
    """

    tau2: float
    passo: float
    pontos: int
    valores: np.ndarray = field(repr=False)
    semente: int = 0

    def __post_init__(self):
        self._validar_dados()

    def _validar_dados(self):
        if self.valores.shape != (2 * self.pontos + 1,):
            raise ConfigurationError(f"Browniano com {self.valores.size} valores para {self.pontos} pontos por lado")
        if self.valores[self.pontos] != 0.0:
            raise ConfigurationError("Browniano deve valer 0 na origem")
        self.valores.setflags(write=False)

    @property
    def janela(self):
        return self.pontos * self.passo

    @property
    def xs(self):
        return np.arange(-self.pontos, self.pontos + 1) * self.passo

    @property
    def incrementos(self):
        return np.diff(self.valores)

    def razao(self, delta):
        """
        Número de passos finos por δ.

        Raises:
            GridAlignmentError: Se δ não for múltiplo do passo fino
        """
        bruto = delta / self.passo
        q = int(round(bruto))
        if q < 1 or abs(q - bruto) > _TOL_GRADE * bruto:
            raise GridAlignmentError(f"δ={delta} não é múltiplo do passo fino {self.passo}")
        return q

    def na_grade(self, delta, primeiro, ultimo):
        """
        W(kδ) para k ∈ [primeiro, ultimo].

        Raises:
            RangeError: Se algum ponto sair da janela
        """
        q = self.razao(delta)
        indices = self.pontos + q * np.arange(primeiro, ultimo + 1)
        if indices[0] < 0 or indices[-1] > 2 * self.pontos:
            raise RangeError(f"Pontos [{primeiro * delta}, {ultimo * delta}] fora da janela ±{self.janela}")
        return self.valores[indices]

    def incrementos_por_sitio(self, delta, raio):
        """W(kδ) − W((k − 1)δ) para k ∈ [−raio, raio]."""
        return np.diff(self.na_grade(delta, -raio - 1, raio))

    def restringir(self, raio):
        """Valores em [−raio, raio] na grade fina."""
        m = int(round(raio / self.passo))
        if m > self.pontos:
            raise RangeError(f"Raio {raio} excede a janela ±{self.janela}")
        return self.valores[self.pontos - m:self.pontos + m + 1]

    def to_dict(self):
        return {'tau2': self.tau2, 'passo': self.passo, 'janela': self.janela, 'semente': self.semente}

    def __repr__(self):
        return f'<BrownianGrid τ²={self.tau2:.6g} passo={self.passo} janela=±{self.janela} semente={self.semente}>'


def sample_brownian(tau2, passo, janela, semente):
    """
    Amostra W bilateral: metades independentes coladas em W(0) = 0.

    Cada metade usa seu próprio fluxo, e os primeiros valores não dependem
    do tamanho da janela pedida.

    Args:
        tau2 (float): Variância τ²
        passo (float): Passo fino (> 0)
        janela (float): Meia largura da janela
        semente (int): Semente

    Returns:
        BrownianGrid: Caminho amostrado

    Raises:
        ConfigurationError: Se passo ou τ² não forem positivos
    """
    if passo <= 0 or tau2 <= 0:
        raise ConfigurationError(f"Passo e τ² devem ser positivos: passo={passo}, τ²={tau2}")
    pontos = int(math.ceil(janela / passo - _TOL_GRADE))
    escala = math.sqrt(tau2 * passo)
    direita = gerador(semente, FLUXO_BROWNIANO, 1).standard_normal(pontos) * escala
    esquerda = gerador(semente, FLUXO_BROWNIANO, 2).standard_normal(pontos) * escala
    valores = np.concatenate([-np.cumsum(esquerda)[::-1], [0.0], np.cumsum(direita)])
    return BrownianGrid(tau2=float(tau2), passo=float(passo), pontos=pontos, valores=valores, semente=int(semente))


# ----------------------------------------------------------------------
# Refinamento por quantis
# ----------------------------------------------------------------------

def _quantil_de_normal(lei, z):
    """F^{−1}(Φ(z)) avaliado pela cauda mais próxima de z."""
    z = np.asarray(z, dtype=float)
    baixo = lei.ppf(special.ndtr(np.minimum(z, 0.0)))
    alto = lei.isf(special.ndtr(-np.maximum(z, 0.0)))
    return np.where(z <= 0.0, baixo, alto)


def _uniforme(z):
    return np.clip(special.ndtr(z), np.finfo(float).tiny, 1.0)


class _RefinoBinomial:
    """Lei de dois pontos: estado = número de passos positivos no bloco."""

    def __init__(self, lei, s2):
        self.valor_passo = s2 * lei.ell

    def topo(self, z, L):
        return stats.binom.ppf(_uniforme(z), L, 0.5)

    def dividir(self, estado, c, z):
        """
        Quantil da hipergeométrica: a positivos à esquerda dados B no
        nó de tamanho 2c, vetorizado sobre os nós do nível.
        """
        B = np.asarray(estado, dtype=float)[:, None]
        a = np.arange(c + 1, dtype=float)[None, :]
        valido = (B - a >= 0) & (B - a <= c)
        log_pesos = np.where(valido, _log_binomial(c, a) + _log_binomial(c, np.clip(B - a, 0, c)), -np.inf)
        pesos = np.exp(log_pesos - log_pesos.max(axis=1, keepdims=True))
        acumulada = np.cumsum(pesos, axis=1)
        u = _uniforme(np.asarray(z))[:, None]
        indice = (acumulada < u * acumulada[:, -1:]).sum(axis=1)
        return np.minimum(indice, c).astype(float)

    def valores(self, estado):
        return self.valor_passo * (2.0 * estado - 1.0)


def _log_binomial(n, k):
    return special.gammaln(n + 1) - special.gammaln(k + 1) - special.gammaln(n - k + 1)


class _RefinoGaussiano:
    """Lei Gaussiana: estado = soma do bloco em unidades de X."""

    def __init__(self, lei, s2):
        self.desvio = s2 * math.sqrt(lei.variancia())

    def topo(self, z, L):
        return self.desvio * math.sqrt(L) * z

    def dividir(self, estado, c, z):
        return 0.5 * estado + self.desvio * math.sqrt(c / 2.0) * z

    def valores(self, estado):
        return estado


class _RefinoDiscretizado:
    """
    Leis contínuas gerais: X discretizado no reticulado h·ℤ e leis das
    somas tabeladas por convolução FFT.
    """

    def __init__(self, lei, s2, resolucao=RESOLUCAO_DISCRETA):
        desvio = s2 * math.sqrt(lei.variancia())
        self.h = desvio / resolucao
        x_min = s2 * float(lei.ppf(1e-12))
        x_max = s2 * float(lei.isf(1e-12))
        self.j_min = int(math.floor(x_min / self.h))
        j_max = int(math.ceil(x_max / self.h))
        bordas = (np.arange(self.j_min, j_max + 2) - 0.5) * self.h
        massas = np.diff(lei.cdf(bordas / s2))
        massas = np.clip(massas, 0.0, None)
        self.leis = {1: massas / massas.sum()}

    def lei_soma(self, L):
        if L not in self.leis:
            metade = self.lei_soma(L // 2)
            soma = np.clip(signal.fftconvolve(metade, metade), 0.0, None)
            self.leis[L] = soma / soma.sum()
        return self.leis[L]

    def topo(self, z, L):
        acumulada = np.cumsum(self.lei_soma(L))
        indice = np.searchsorted(acumulada, _uniforme(z) * acumulada[-1])
        return L * self.j_min + np.minimum(indice, acumulada.size - 1)

    def dividir(self, estado, c, z):
        p = self.lei_soma(c)
        inicio = c * self.j_min
        esquerdo = np.empty(np.size(estado))
        for i, (s, u) in enumerate(zip(np.atleast_1d(estado), np.atleast_1d(_uniforme(z)))):
            # esquerda a e direita s − a, ambas no suporte [inicio, inicio + len(p) − 1]
            a = np.arange(max(inicio, s - inicio - p.size + 1), min(inicio + p.size - 1, s - inicio) + 1)
            pesos = p[a - inicio] * p[s - a - inicio]
            total = pesos.sum()
            if a.size == 0 or total <= 0.0:
                raise NumericalError("Lei condicional sem massa", {'estado': s, 'c': c, 'quantil': u})
            acumulada = np.cumsum(pesos)
            k = np.searchsorted(acumulada, u * total)
            esquerdo[i] = a[min(k, a.size - 1)]
        return esquerdo.astype(np.int64)

    def valores(self, estado):
        return self.h * np.asarray(estado, dtype=float)


def _refinador(lei, s2):
    if isinstance(lei, LeiDoisPontos):
        return _RefinoBinomial(lei, s2)
    if isinstance(lei, LeiGaussiana):
        return _RefinoGaussiano(lei, s2)
    return _RefinoDiscretizado(lei, s2)


def _blocos_binarios(n):
    """Blocos diádicos decrescentes cobrindo [0, n) a partir da origem."""
    blocos = []
    inicio = 0
    for bit in reversed(range(max(n, 1).bit_length())):
        L = 1 << bit
        if n & L:
            blocos.append((inicio, L))
            inicio += L
    return blocos


def _arvore_diadica(z, refinador):
    """
    Estados por passo de um bloco de tamanho 2^J a partir dos normais z.

    A soma do bloco é acoplada no topo; cada nó de tamanho 2c é dividido
    pelo quantil condicional da metade esquerda dado o total, com o
    normal condicional (T_esq − T/2)/√(c/2) dos incrementos de W.
    """
    L = z.size
    somas_z = np.array([z.sum()])
    estados = np.atleast_1d(refinador.topo(somas_z[0] / math.sqrt(L), L))
    while L > 1:
        c = L // 2
        blocos = z.reshape(-1, c).sum(axis=1)
        esquerdos_z = blocos[0::2]
        condicional = (esquerdos_z - somas_z / 2.0) / math.sqrt(c / 2.0)
        esquerdos = refinador.dividir(estados, c, condicional)
        novos = np.empty(2 * estados.size, dtype=np.result_type(esquerdos, estados))
        novos[0::2] = esquerdos
        novos[1::2] = estados - esquerdos
        estados, somas_z, L = novos, blocos, c
    return estados


def acoplar_incrementos(z, lei, s2, modo):
    """
    Acopla X_m (lei σ²ξ) a uma sequência de normais padrão z_m.

    Args:
        z (numpy.ndarray): Incrementos padronizados ΔW^δ/τ
        lei: Lei de ξ
        s2 (float): σ²
        modo (str): 'per-step-quantile' ou 'dyadic-quantile'

    Returns:
        tuple: (X, max_k |S_k − T_k|)

    Raises:
        ConfigurationError: Se o modo for desconhecido
        NumericalError: Se a inversão de quantis falhar
    """
    if modo not in MODOS_ACOPLAMENTO:
        raise ConfigurationError(f"Modo de acoplamento desconhecido: {modo} (opções: {MODOS_ACOPLAMENTO})")
    z = np.asarray(z, dtype=float)
    tau = s2 * math.sqrt(lei.variancia())
    if modo == 'per-step-quantile':
        X = s2 * _quantil_de_normal(lei, z)
    else:
        refinador = _refinador(lei, s2)
        X = np.empty(z.size)
        for inicio, L in _blocos_binarios(z.size):
            X[inicio:inicio + L] = refinador.valores(_arvore_diadica(z[inicio:inicio + L], refinador))
    if not np.all(np.isfinite(X)):
        ruim = int(np.flatnonzero(~np.isfinite(X))[0])
        raise NumericalError("Falha na inversão da CDF", {'indice': ruim, 'quantil': float(special.ndtr(z[ruim]))})
    desvio = float(np.max(np.abs(np.cumsum(X) - tau * np.cumsum(z)))) if z.size else 0.0
    return X, desvio


# ----------------------------------------------------------------------
# Campo acoplado
# ----------------------------------------------------------------------

def controle_gaussiano(spec):
    """Lei Gaussiana de ξ com a mesma variância σ₁² da especificação."""
    return LeiGaussiana(sigma1_squared(spec))


@dataclass(frozen=True, eq=False)
class CoupledField:
    """
    Sequência acoplada X^δ e o ambiente reescalado correspondente.

    Attributes:
        delta (float): Passo δ
        modo (str): Acoplador usado
        raio (int): Raio em sítios
        X (numpy.ndarray): X^δ_k para k ∈ [−raio, raio]
        renv (RescaledEnvironment): Ambiente com ξ = X/σ²
        max_dev (float): max_k |S_k − T_k| nas duas metades
        semente (int): Semente do Browniano
        lei (str): Representação da lei de ξ
    """

    delta: float
    modo: str
    raio: int
    X: np.ndarray = field(repr=False)
    renv: object = field(repr=False)
    max_dev: float
    semente: int
    lei: str

    @property
    def xi(self):
        return self.X / self.renv.sigma2

    @property
    def u_bar1(self):
        return self.renv.u_bar1

    @property
    def u_bar11(self):
        """Parte principal √δ·X^δ."""
        return math.sqrt(self.delta) * self.X

    @property
    def u_bar12(self):
        """Correção de ordem superior Ū₁ − √δ·X^δ."""
        return self.u_bar1 - self.u_bar11

    def caminho(self):
        """Û₁^δ linear por partes."""
        return interpolate_noise(self.u_bar1, self.delta)

    def to_dict(self):
        return {
            'delta': self.delta,
            'mode': self.modo,
            'radius': self.raio,
            'max_dev': self.max_dev,
            'seed': self.semente,
            'law': self.lei,
        }


def couple(W, delta, spec, modo=None, raio=None, lei=None):
    """
    Constrói o campo acoplado Ū₁^δ a partir de W.

    As metades k ≥ 1 e k ≤ 0 são acopladas separadamente, em ordem a
    partir da origem.

    Args:
        W (BrownianGrid): Browniano com variância τ²
        delta (float): Passo δ (múltiplo do passo de W)
        spec (EnvironmentSpec): Especificação (fornece σ² e a lei de ξ)
        modo (str, optional): Acoplador (padrão Config.MODO_ACOPLAMENTO)
        raio (int, optional): Raio em sítios (padrão: maior possível)
        lei (optional): Lei de ξ alternativa (controle Gaussiano)

    Returns:
        CoupledField: Campo acoplado

    Raises:
        ConfigurationError: Se τ² de W não corresponder à lei
        GridAlignmentError: Se δ não for múltiplo do passo de W
    """
    modo = modo or Config.MODO_ACOPLAMENTO
    lei = xi_law(spec) if lei is None else lei
    s2 = spec.sigma2
    tau2 = s2 ** 2 * lei.variancia()
    if abs(W.tau2 - tau2) > 1e-12 * tau2:
        raise ConfigurationError(f"Browniano com τ²={W.tau2} diferente de σ⁴σ₁²={tau2}")
    q = W.razao(delta)
    raio = (W.pontos // q) - 1 if raio is None else int(raio)
    if raio < 0:
        raise RangeError(f"Janela do Browniano ±{W.janela} menor que δ={delta}")

    z = W.incrementos_por_sitio(delta, raio) / math.sqrt(delta * tau2)
    # z[raio] é o sítio 0; a metade negativa vai de 0 para −raio
    negativos, dev_neg = acoplar_incrementos(z[raio::-1], lei, s2, modo)
    positivos, dev_pos = acoplar_incrementos(z[raio + 1:], lei, s2, modo)
    X = np.concatenate([negativos[::-1], positivos])

    renv = rescaled_from_xi(spec, X / s2, delta, seed=W.semente, origem='acoplado')
    if isinstance(lei, LeiGaussiana):
        renv = replace(renv, u_bar2=0.0)
    campo = CoupledField(
        delta=float(delta), modo=modo, raio=raio, X=X, renv=renv,
        max_dev=max(dev_neg, dev_pos), semente=W.semente, lei=repr(lei),
    )
    logger.debug(f"Acoplamento δ={delta} modo={modo}: max_dev={campo.max_dev:.4g}")
    return campo


def marginal_ks(amostras, lei, escala=1.0):
    """
    Distância de Kolmogorov entre a empírica de amostras/escala e a lei.

    Avalia os dois lados de cada salto, o que vale também para leis
    discretas.
    """
    x = np.sort(np.asarray(amostras, dtype=float) / escala)
    unicos, contagens = np.unique(x, return_counts=True)
    empirica = np.cumsum(contagens) / x.size
    empirica_antes = empirica - contagens / x.size
    teorica = np.asarray(lei.cdf(unicos), dtype=float)
    teorica_antes = np.asarray(lei.cdf(np.nextafter(unicos, -np.inf)), dtype=float)
    return float(max(np.max(np.abs(empirica - teorica)), np.max(np.abs(empirica_antes - teorica_antes))))


# ----------------------------------------------------------------------
# Distância rugosa e taxas
# ----------------------------------------------------------------------

def coupled_lift_distance(W, delta, spec, params, modo=None, lei=None, subdivisoes=SUBDIVISOES, max_pontos=None):
    """
    ρ_{α,χ}(Û₁^δ, W) nos raios de params.

    Û₁^δ é interpolado e comparado com W numa grade de passo δ/subdivisoes
    em [−R, R], R o maior raio; os dois caminhos recebem o levantamento
    canônico.

    Args:
        W (BrownianGrid): Browniano
        delta (float): Passo δ
        spec (EnvironmentSpec): Especificação
        params (WeightParams): Expoentes α, χ e raios
        modo (str, optional): Acoplador
        lei (optional): Lei alternativa de ξ
        subdivisoes (int): Pontos de comparação por intervalo de δ

    Returns:
        tuple: (ρ, componentes)
    """
    R = max(params.raios)
    passo = delta / subdivisoes
    q = W.razao(passo)
    raio_sitios = int(math.ceil(R / delta - _TOL_GRADE))
    campo = couple(W, delta, spec, modo, raio=raio_sitios, lei=lei)

    pontos = int(round(R / passo))
    xs = np.arange(-pontos, pontos + 1) * passo
    acoplado = campo.caminho()(xs)
    browniano = W.valores[W.pontos - q * pontos:W.pontos + q * pontos + 1:q]
    rpA = lift(acoplado, passo, origem=-R)
    rpB = lift(browniano, passo, origem=-R)
    componentes = rho_report(rpA, rpB, params.alpha, params.chi, params.raios, max_pontos)
    componentes.update(max_dev=campo.max_dev, delta=delta, mode=campo.modo, seed=W.semente)
    return componentes['rho'], componentes


@dataclass(frozen=True)
class CouplingStudy:
    """
    Estudo de taxa do acoplamento.

    Attributes:
        modo (str): Acoplador
        deltas (list): Valores de δ
        sementes (list): Sementes
        rho (list): Matriz ρ (sementes × δ)
        max_dev (list): Matriz max_k |S_k − T_k| (sementes × δ)
        ajuste (RateFit): Ajuste de E[ρ] contra δ
        momentos (dict): {q: RateFit de E[ρ^q]}
    """

    modo: str
    deltas: list
    sementes: list
    rho: list
    max_dev: list
    ajuste: object
    momentos: dict

    def linhas_csv(self):
        """Linhas "delta,mode,max_dev,rho,seed"."""
        for i, semente in enumerate(self.sementes):
            for j, delta in enumerate(self.deltas):
                yield delta, self.modo, self.max_dev[i][j], self.rho[i][j], semente

    def to_dict(self):
        return {
            'mode': self.modo,
            'deltas': self.deltas,
            'seeds': self.sementes,
            'fit': self.ajuste.to_dict(),
            'moments': {
                str(q): dict(ajuste.to_dict(), slope_per_unit=ajuste.slope / q)
                for q, ajuste in self.momentos.items()
            },
        }


def _job_acoplamento(spec, params, deltas, semente, modo, lei, subdivisoes, max_pontos):
    passo = min(deltas) / subdivisoes
    tau2 = spec.sigma2 ** 2 * (xi_law(spec) if lei is None else lei).variancia()
    W = sample_brownian(tau2, passo, max(params.raios) + 2 * max(deltas), semente)
    linha_rho, linha_dev = [], []
    for delta in deltas:
        rho, componentes = coupled_lift_distance(W, delta, spec, params, modo, lei, subdivisoes, max_pontos)
        linha_rho.append(rho)
        linha_dev.append(componentes['max_dev'])
    return semente, linha_rho, linha_dev


def coupling_study(spec, params, deltas, sementes, modo=None, lei=None, jobs=1,
                   subdivisoes=SUBDIVISOES, max_pontos=None, momentos=None):
    """
    ρ por (semente, δ), com um Browniano por semente compartilhado por
    todos os δ, e ajustes de E[ρ] e E[ρ^q] contra δ.

    Raises:
        ConfigurationError: Com menos de 4 valores de δ ou 8 sementes
    """
    deltas = sorted((float(d) for d in deltas), reverse=True)
    sementes = [int(s) for s in sementes]
    if len(deltas) < 4 or len(sementes) < 8:
        raise ConfigurationError(f"Estudo de taxa exige ≥ 4 valores de δ e ≥ 8 sementes: {len(deltas)}, {len(sementes)}")
    modo = modo or Config.MODO_ACOPLAMENTO
    momentos = Config.MOMENTOS_Q if momentos is None else momentos

    resultados = {}
    argumentos = (spec, params, deltas)
    if jobs and jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as executor:
            futuros = [
                executor.submit(_job_acoplamento, *argumentos, s, modo, lei, subdivisoes, max_pontos)
                for s in sementes
            ]
            for futuro in as_completed(futuros):
                semente, linha_rho, linha_dev = futuro.result()
                resultados[semente] = (linha_rho, linha_dev)
                logger.info(f"Acoplamento concluído: semente {semente}")
    else:
        for s in sementes:
            semente, linha_rho, linha_dev = _job_acoplamento(*argumentos, s, modo, lei, subdivisoes, max_pontos)
            resultados[semente] = (linha_rho, linha_dev)
            logger.info(f"Acoplamento concluído: semente {semente}")

    rho = np.array([resultados[s][0] for s in sementes])
    max_dev = np.array([resultados[s][1] for s in sementes])
    ajuste = fit_rate(deltas, rho, agregador='mean')
    ajustes_q = {float(q): fit_rate(deltas, rho ** q, agregador='mean') for q in momentos}
    logger.info(f"Taxa do acoplamento ({modo}): τ̂={ajuste.slope:.4f}")
    return CouplingStudy(
        modo=modo, deltas=deltas, sementes=sementes, rho=rho.tolist(),
        max_dev=max_dev.tolist(), ajuste=ajuste, momentos=ajustes_q,
    )


def coupling_rate_study(spec, params, deltas, sementes, modo=None, lei=None, jobs=1, **opcoes):
    """Inclinação τ̂ de E[ρ] contra δ (RateFit); ver coupling_study."""
    return coupling_study(spec, params, deltas, sementes, modo, lei, jobs, **opcoes).ajuste


@dataclass(frozen=True)
class DeviationGrowth:
    """
    Crescimento de max_k |S_k − T_k| com n por acoplador.

    Attributes:
        ns (list): Comprimentos n
        sementes (list): Sementes
        desvios (dict): {modo: matriz (sementes × n)}
        ajustes (dict): {modo: RateFit contra n}
    """

    ns: list
    sementes: list
    desvios: dict
    ajustes: dict

    def to_dict(self):
        return {
            'ns': self.ns,
            'seeds': self.sementes,
            'fits': {modo: ajuste.to_dict() for modo, ajuste in self.ajustes.items()},
        }


def deviation_growth(spec, ns, sementes, modos=MODOS_ACOPLAMENTO, lei=None):
    """
    Compara os acopladores no mesmo W: desvio máximo nos primeiros n
    passos de cada sequência, ajustado em log-log contra n.
    """
    lei = xi_law(spec) if lei is None else lei
    s2 = spec.sigma2
    ns = sorted(int(n) for n in ns)
    desvios = {modo: np.zeros((len(sementes), len(ns))) for modo in modos}
    for i, semente in enumerate(sementes):
        z = gerador(semente, FLUXO_BROWNIANO, 1).standard_normal(ns[-1])
        for modo in modos:
            for j, n in enumerate(ns):
                _, desvio = acoplar_incrementos(z[:n], lei, s2, modo)
                desvios[modo][i, j] = desvio
    ajustes = {modo: fit_rate(ns, desvios[modo], agregador='median') for modo in modos}
    for modo, ajuste in ajustes.items():
        logger.info(f"Crescimento do desvio ({modo}): inclinação {ajuste.slope:.3f} contra n")
    return DeviationGrowth(
        ns=ns, sementes=list(sementes),
        desvios={modo: matriz.tolist() for modo, matriz in desvios.items()}, ajustes=ajustes,
    )
