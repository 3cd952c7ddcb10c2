# -*- coding: utf-8 -*-
"""
Passeio de Sinai Preguiçoso
===========================

Simulação do passeio reescalado X^δ no ambiente reescalado, cálculo
exato de esperanças quenched por iteração do operador de transição
T^δ, aplicação do gerador L^δ e verificação dos problemas de
martingale discretos e da representação de Itô discreta.

Convenções:
- tempos t_j = jδ², posições em δℤ, sítios inteiros k = x/δ
- T^δ f(x) = ω^{+,δ}(x) f(x+δ) + ω^{−,δ}(x) f(x−δ) + ε f(x)
- L^δ f = (T^δ f − f)/δ² = L̄^δ f + (1/δ) U̇^δ ∇̂^δ f
- passo: com (U, V) uniformes, fica parado se U ≤ ε; senão sobe se
  V ≤ ω^{+,δ}(x)/σ² e desce caso contrário

Autor: Sistema Sinai Lab
Data: 2024
"""

import logging
import math
from dataclasses import dataclass, field

import numpy as np

from .config import Config
from .env import rescale_environment, sample_environment
from .errors import ConfigurationError, GridAlignmentError, NumericalError, RangeError
from .rng import FLUXO_PASSEIO, gerador

logger = logging.getLogger(__name__)


def numero_passos(T, delta):
    """
    N = T/δ² inteiro.

    Raises:
        GridAlignmentError: Se T não estiver na grade δ²ℕ
    """
    bruto = T / delta ** 2
    N = int(round(bruto))
    if N < 0 or abs(N - bruto) > 1e-9 * max(1.0, bruto):
        raise GridAlignmentError(f"Horizonte T={T} não é múltiplo de δ²={delta ** 2}")
    return N


def amostrar_na_janela(renv, h):
    """
    Amostra uma função da grade em toda a janela do ambiente.

    Args:
        renv (RescaledEnvironment): Ambiente reescalado
        h (callable or numpy.ndarray): Função vetorizada de x ou vetor
            com um valor por sítio da janela

    Returns:
        numpy.ndarray: Valores nos sítios [−radius, radius]
    """
    if callable(h):
        return np.asarray(h(renv.posicoes), dtype=float) * np.ones(2 * renv.radius + 1)
    valores = np.asarray(h, dtype=float)
    if valores.shape != (2 * renv.radius + 1,):
        raise ConfigurationError(f"Função da grade com tamanho {valores.shape} diferente da janela")
    return valores


@dataclass(frozen=True, eq=False)
class TransitionOperatorView:
    """
    Visão somente leitura de T^δ sobre um ambiente reescalado.
    """

    renv: object

    def somas_linhas(self):
        """ω^{+,δ} + ω^{−,δ} + ε por sítio."""
        return self.renv.omega_plus + self.renv.omega_minus + self.renv.epsilon

    def aplicar(self, valores, primeiro_sitio=None):
        """
        Aplica T^δ a um vetor definido nos sítios consecutivos a partir
        de primeiro_sitio (padrão: a janela inteira).

        Returns:
            numpy.ndarray: Valores no interior (dois pontos a menos)
        """
        r = self.renv.radius
        primeiro = -r if primeiro_sitio is None else int(primeiro_sitio)
        n = np.shape(valores)[-1]
        inicio = primeiro + 1 + r
        fim = primeiro + n - 1 + r
        if inicio < 0 or fim > 2 * r + 1:
            raise RangeError(f"Vetor em [{primeiro}, {primeiro + n - 1}] sai da janela de raio {r}")
        wp = self.renv.omega_plus[inicio:fim]
        wm = self.renv.omega_minus[inicio:fim]
        return wp * valores[..., 2:] + wm * valores[..., :-2] + self.renv.epsilon * valores[..., 1:-1]


def transition_operator(renv):
    return TransitionOperatorView(renv)


def step_distribution(renv, x):
    """
    Lei de um passo a partir de x: (p_esquerda, p_parado, p_direita).

    Raises:
        RangeError: Se x ou x ± δ estiver fora da janela
    """
    k = renv.sitio(x)
    if abs(k) + 1 > renv.radius:
        raise RangeError(f"Sítio {k} na borda da janela: vizinhos fora do ambiente")
    i = k + renv.radius
    return float(renv.omega_minus[i]), renv.epsilon, float(renv.omega_plus[i])


@dataclass(frozen=True, eq=False)
class Trajectory:
    """
    Trajetória (ou lote de trajetórias) do passeio reescalado.

    Attributes:
        delta (float): Passo espacial
        x0 (int): Sítio inicial
        sitios (numpy.ndarray): Sítios visitados, forma (passos+1,) ou
            (passos+1, n_caminhos)
        seed (int): Semente
        U (numpy.ndarray, optional): Uniformes de "ficar parado"
        V (numpy.ndarray, optional): Uniformes de direção
    """

    delta: float
    x0: int
    sitios: np.ndarray = field(repr=False)
    seed: int
    U: np.ndarray = field(default=None, repr=False)
    V: np.ndarray = field(default=None, repr=False)

    @property
    def passos(self):
        return self.sitios.shape[0] - 1

    @property
    def posicoes(self):
        return self.sitios * self.delta

    @property
    def tempos(self):
        return np.arange(self.passos + 1) * self.delta ** 2

    def __repr__(self):
        return f'<Trajectory δ={self.delta} passos={self.passos} semente={self.seed}>'


def _verificar_janela(renv, k0, passos):
    if abs(k0) + passos > renv.radius:
        raise ConfigurationError(
            f"Janela de raio {renv.radius} insuficiente para {passos} passos a partir do sítio {k0}"
        )


def simulate_walk(renv, steps, x0, seed):
    """
    Simula uma trajetória de X^δ com os pares uniformes (U_j, V_j).

    Args:
        renv (RescaledEnvironment): Ambiente reescalado
        steps (int): Número de passos
        x0 (float): Posição inicial em δℤ
        seed (int): Semente

    Returns:
        Trajectory: Trajetória com os uniformes usados

    Raises:
        ConfigurationError: Se a janela não comportar todos os passos
    """
    k0 = renv.sitio(x0)
    _verificar_janela(renv, k0, steps)

    uniformes = gerador(seed, FLUXO_PASSEIO).random((2, steps))
    U, V = uniformes[0], uniformes[1]
    eps = renv.epsilon
    r = renv.radius
    p_direita = (renv.omega_plus / renv.sigma2).tolist()

    sitios = np.empty(steps + 1, dtype=np.int64)
    sitios[0] = k0
    k = k0
    for j, (u, v) in enumerate(zip(U.tolist(), V.tolist())):
        if u > eps:
            k += 1 if v <= p_direita[k + r] else -1
        sitios[j + 1] = k

    return Trajectory(delta=renv.delta, x0=k0, sitios=sitios, seed=int(seed), U=U, V=V)


def simulate_walks(renv, steps, x0, seed, n_caminhos, guardar_caminhos=True):
    """
    Simula n_caminhos trajetórias independentes, vetorizado nos caminhos.

    Returns:
        Trajectory: Lote com sitios de forma (steps+1, n_caminhos), ou
        apenas (2, n_caminhos) com início e fim se guardar_caminhos=False
    """
    k0 = renv.sitio(x0)
    _verificar_janela(renv, k0, steps)

    gen = gerador(seed, FLUXO_PASSEIO, n_caminhos)
    eps = renv.epsilon
    r = renv.radius
    p_direita = renv.omega_plus / renv.sigma2

    k = np.full(n_caminhos, k0, dtype=np.int32)
    caminhos = [k.copy()]
    for _ in range(steps):
        U, V = gen.random((2, n_caminhos))
        movimento = np.where(V <= p_direita[k + r], 1, -1)
        k = k + np.where(U > eps, movimento, 0).astype(np.int32)
        if guardar_caminhos:
            caminhos.append(k.copy())
    if not guardar_caminhos:
        caminhos.append(k)

    return Trajectory(delta=renv.delta, x0=k0, sitios=np.vstack(caminhos), seed=int(seed))


def _iterar_cone(renv, valores, primeiro, passos):
    """Itera T^δ encolhendo o vetor um sítio de cada lado por passo."""
    op = transition_operator(renv)
    v = np.array(valores, dtype=float)
    for _ in range(passos):
        v = op.aplicar(v, primeiro)
        primeiro += 1
    return v


@dataclass(frozen=True)
class QuenchedValue:
    """
    Valor de E^ω[h(X_T)] com o limite de erro da banda.

    Attributes:
        valor (float): Esperança calculada
        limite_cauda (float): 2‖h‖_∞ P(saída da banda); zero quando exato
        N (int): Número de passos
        banda (int): Meia largura da banda em sítios (N quando exato)
    """

    valor: float
    limite_cauda: float
    N: int
    banda: int

    def __float__(self):
        return self.valor


def quenched_expectation_detalhada(renv, h, T, x0, banda=None):
    """
    E^ω[h(X^δ_T)] por N = T/δ² aplicações exatas de T^δ.

    Com banda=None a iteração usa todo o cone de dependência (exato).
    Com banda = M < N a iteração fica em [x0 − Mδ, x0 + Mδ] com bordas
    absorventes; o erro é limitado por 2‖h‖_∞ P(τ_banda ≤ N), e essa
    probabilidade é calculada exatamente pela mesma iteração aplicada ao
    indicador das bordas.

    Raises:
        GridAlignmentError: Se T não estiver na grade
        ConfigurationError: Se a janela não comportar a banda
    """
    N = numero_passos(T, renv.delta)
    k0 = renv.sitio(x0)
    M = N if banda is None else min(int(banda), N)
    _verificar_janela(renv, k0, M)

    sitios = np.arange(k0 - M, k0 + M + 1)
    valores_h = amostrar_na_janela(renv, h)[sitios + renv.radius]
    if N == 0:
        return QuenchedValue(valor=float(valores_h[M]), limite_cauda=0.0, N=0, banda=0)

    if M == N:
        valor = _iterar_cone(renv, valores_h, k0 - M, N)
        return QuenchedValue(valor=float(valor[0]), limite_cauda=0.0, N=N, banda=M)

    # Linha 0: h com bordas absorventes; linha 1: indicador das bordas
    op = transition_operator(renv)
    bordas = np.zeros_like(valores_h)
    bordas[0] = bordas[-1] = 1.0
    pilha = np.vstack([valores_h, bordas])
    primeiro = k0 - M
    for _ in range(N):
        pilha[:, 1:-1] = op.aplicar(pilha, primeiro)

    prob_saida = float(pilha[1, M])
    limite = 2.0 * float(np.max(np.abs(valores_h))) * prob_saida
    logger.debug(f"Esperança em banda: N={N}, M={M}, P(saída)={prob_saida:.3e}")
    return QuenchedValue(valor=float(pilha[0, M]), limite_cauda=limite, N=N, banda=M)


def quenched_expectation(renv, h, T, x0=0.0):
    """
    E^ω[h(X^δ_T)] exato, sem Monte Carlo.

    Args:
        renv (RescaledEnvironment): Ambiente reescalado
        h (callable or numpy.ndarray): Função da grade
        T (float): Horizonte, múltiplo de δ²
        x0 (float): Posição inicial

    Returns:
        float: Esperança quenched
    """
    return quenched_expectation_detalhada(renv, h, T, x0).valor


def quenched_sweep(spec, seed, h, deltas, horizontes, x0=0.0):
    """
    Varredura de E^ω[h(X^δ_T)] sobre pares (δ, T) num mesmo ambiente ω.

    O ambiente é amostrado uma única vez com raio suficiente para o
    maior número de passos; como ω é determinístico por (semente, sítio),
    todos os δ enxergam os mesmos valores de ξ.

    Args:
        spec (EnvironmentSpec): Lei do ambiente
        seed (int): Semente do ambiente
        h (callable): Função vetorizada de x
        deltas (iterable): Passos espaciais
        horizontes (iterable): Horizontes T, múltiplos de todo δ²
        x0 (float): Posição inicial

    Returns:
        list: Tuplas (delta, T, valor) em ordem de δ decrescente e T crescente
    """
    deltas = sorted({float(d) for d in deltas}, reverse=True)
    horizontes = sorted({float(T) for T in horizontes})
    if not deltas or not horizontes:
        raise ConfigurationError("Varredura quenched sem δ ou sem horizontes")

    raio = max(numero_passos(T, d) + int(math.ceil(abs(x0) / d)) for d in deltas for T in horizontes) + 1
    ambiente = sample_environment(spec, raio, seed)

    linhas = []
    for delta in deltas:
        renv = rescale_environment(ambiente, delta)
        for T in horizontes:
            linhas.append((delta, T, quenched_expectation(renv, h, T, x0)))
    logger.info(f"Varredura quenched: {len(deltas)} valores de δ, {len(horizontes)} horizontes, raio {raio}")
    return linhas


def banda_recomendada(N, sigmas):
    """Meia largura ⌈sigmas·√N⌉ + 2 usada nas esperanças em banda."""
    return int(math.ceil(sigmas * math.sqrt(N))) + 2


def generator_apply(renv, f):
    """
    L^δ f no interior da janela.

    Calcula as duas expressões (T^δ f − f)/δ² e L̄^δ f + (1/δ)U̇^δ∇̂^δ f e
    confere a identidade entre elas.

    Returns:
        numpy.ndarray: L^δ f nos sítios [−radius + 1, radius − 1]

    Raises:
        NumericalError: Se as duas expressões divergirem além de
            1e−10·‖f‖_∞/δ²
    """
    v = amostrar_na_janela(renv, f)
    d = renv.delta
    direita, esquerda, centro = v[2:], v[:-2], v[1:-1]

    via_operador = (transition_operator(renv).aplicar(v) - centro) / d ** 2
    laplaciano = renv.sigma2 / (2.0 * d ** 2) * (direita + esquerda - 2.0 * centro)
    deriva = renv.u_dot[1:-1] * (direita - esquerda) / (2.0 * d) / d
    via_gerador = laplaciano + deriva

    discrepancia = float(np.max(np.abs(via_operador - via_gerador))) if v.size > 2 else 0.0
    limite = 1e-10 * float(np.max(np.abs(v))) / d ** 2
    if discrepancia > limite:
        raise NumericalError("Identidade do gerador violada", {'discrepancia': discrepancia, 'limite': limite})
    return via_gerador


def _gerador_nos_pontos(renv, f_t, sitios):
    """L^δ f avaliado nos sítios dados (vetorizado)."""
    d = renv.delta
    i = sitios + renv.radius
    x = sitios * d
    centro, direita, esquerda = f_t(x), f_t(x + d), f_t(x - d)
    laplaciano = renv.sigma2 / (2.0 * d ** 2) * (direita + esquerda - 2.0 * centro)
    return laplaciano + renv.u_dot[i] * (direita - esquerda) / (2.0 * d) / d


def martingale_residual(renv, f, traj):
    """
    Série M_{t_k} do problema de martingale espaço-tempo ao longo da trajetória.

    M_{t_k} = f_{t_k}(X_{t_k}) − f_0(X_0)
              − Σ_{j<k} δ²[L^δ f_{t_{j+1}}(X_{t_j}) + ∇_t f_{t_j}(X_{t_j})],

    cujos incrementos são Z_{t_{j+1}} = f_{t_{j+1}}(X_{t_{j+1}}) − T^δ f_{t_{j+1}}(X_{t_j}).
    Para f independente de t recai no problema de martingale homogêneo.

    Args:
        renv (RescaledEnvironment): Ambiente reescalado
        f (callable): f(t, x) vetorizado em x
        traj (Trajectory): Trajetória ou lote

    Returns:
        numpy.ndarray: M com forma traj.sitios.shape (M_0 = 0)
    """
    d2 = renv.delta ** 2
    sitios = traj.sitios
    x = sitios * renv.delta
    compensador = np.zeros(sitios.shape)
    valores = np.empty(sitios.shape)

    for j in range(traj.passos + 1):
        t_j = j * d2
        valores[j] = f(t_j, x[j])
        if j == traj.passos:
            break
        f_prox = lambda y, t=t_j + d2: f(t, y)
        gerador_prox = _gerador_nos_pontos(renv, f_prox, sitios[j])
        derivada_tempo = (f_prox(x[j]) - valores[j]) / d2
        compensador[j + 1] = compensador[j] + d2 * (gerador_prox + derivada_tempo)

    return valores - valores[0] - compensador


def ito_representation_terms(renv, f, seed, steps, x0=0.0):
    """
    Lados da representação de Itô discreta sob a construção com uniformes comuns.

    Z_{j+1} = ½(f(x+δ) − f(x−δ)) ζ̄
              + ½(f(x+δ) − f(x−δ)) ((ζ^x − ζ̄) − E[ζ^x − ζ̄])
              + ½(f(x+δ) − 2f(x) + f(x−δ)) (ζ̄² − E[ζ̄²]),
    com f = f_{t_{j+1}}, x = X_{t_j}, E[ζ^x − ζ̄] = U̇^δ(x) e E[ζ̄²] = σ².

    Returns:
        dict: Vetores 'lhs', 'termo1', 'termo2', 'termo3', 'zeta_bar',
        'zeta', 'U' e a trajetória em 'traj'
    """
    traj = simulate_walk(renv, steps, x0, seed)
    d = renv.delta
    d2 = d ** 2
    sitios = traj.sitios
    i = sitios[:-1] + renv.radius
    x = sitios[:-1] * d
    tempos = (np.arange(steps) + 1) * d2

    avaliar = lambda pontos: np.broadcast_to(np.asarray(f(tempos, pontos), dtype=float), pontos.shape)
    fx, fd, fe = avaliar(x), avaliar(x + d), avaliar(x - d)
    f_chegada = avaliar(sitios[1:] * d)

    wp, wm, eps = renv.omega_plus[i], renv.omega_minus[i], renv.epsilon
    lhs = f_chegada - (wp * fd + wm * fe + eps * fx)

    U, V = traj.U, traj.V
    move = U > eps
    zeta_bar = np.where(move, np.where(V <= 0.5, 1.0, -1.0), 0.0)
    zeta = np.where(move, np.where(V <= wp / renv.sigma2, 1.0, -1.0), 0.0)

    d1 = 0.5 * (fd - fe)
    dd = 0.5 * (fd - 2.0 * fx + fe)
    termo1 = d1 * zeta_bar
    termo2 = d1 * ((zeta - zeta_bar) - renv.u_dot[i])
    termo3 = dd * (zeta_bar ** 2 - renv.sigma2)

    return {'lhs': lhs, 'termo1': termo1, 'termo2': termo2, 'termo3': termo3,
            'zeta_bar': zeta_bar, 'zeta': zeta, 'U': U, 'traj': traj}


@dataclass(frozen=True)
class ItoCheck:
    """
    Resultado da verificação da representação de Itô discreta.

    Attributes:
        discrepancia (float): max_j |Z_{t_{j+1}} − (soma dos três termos)|
        tolerancia (float): Limite usado
        passos (int): Comprimento da trajetória
    """

    discrepancia: float
    tolerancia: float
    passos: int

    @property
    def passou(self):
        return self.discrepancia <= self.tolerancia

    def __float__(self):
        return self.discrepancia


def ito_representation_check(renv, f, seed, steps, x0=0.0, tol=None):
    """
    max_j |Z_{t_{j+1}} − (soma dos três termos)| ao longo de uma trajetória.

    Args:
        tol (float, optional): Limite de aprovação (padrão Config.TOL_ITO)

    Returns:
        ItoCheck: Discrepância máxima e o indicador passou
    """
    tol = Config.TOL_ITO if tol is None else float(tol)
    termos = ito_representation_terms(renv, f, seed, steps, x0)
    rhs = termos['termo1'] + termos['termo2'] + termos['termo3']
    discrepancia = float(np.max(np.abs(termos['lhs'] - rhs))) if steps else 0.0
    logger.info(f"Representação de Itô: {steps} passos, discrepância máxima {discrepancia:.3e}")
    resultado = ItoCheck(discrepancia=discrepancia, tolerancia=tol, passos=int(steps))
    if not resultado.passou:
        logger.warning(f"Discrepância da representação de Itô acima de {tol:.0e}")
    return resultado
