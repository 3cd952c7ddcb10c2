# -*- coding: utf-8 -*-
"""
Núcleos de Calor Discretos
==========================

Tabelas exatas das probabilidades de transição p^d_n(k) do passeio
simétrico preguiçoso (passo 0 com probabilidade ε, ±1 com (1 − ε)/2),
núcleo Gaussiano contínuo de variância σ², gradientes discretos e as
verificações numéricas do teorema local do limite central e da cota
Gaussiana uniforme.

Gradientes discretos (passo δ):
- ordem 1:   ∇f(x)  = (f(x+δ) − f(x))/δ
- 'hat':     ∇̂f(x)  = (f(x+δ) − f(x−δ))/(2δ)
- ordem 2:   ∇²f(x) = (f(x+δ) + f(x−δ) − 2f(x))/δ²
- ordem 3:   ∇̃³f    = ∇∇²f
- ordem 4:   ∇⁴f(x) = (f(x+2δ) − 4f(x+δ) + 6f(x) − 4f(x−δ) + f(x−2δ))/δ⁴

Autor: Sistema Sinai Lab
Data: 2024
"""

import logging
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigurationError, DomainError, GridAlignmentError, NumericalError, RangeError, TruncationError
from .exportacao import escrever_binario

logger = logging.getLogger(__name__)

# (deslocamentos, coeficientes, potência de δ) de cada estêncil
ESTENCEIS = {
    1: ((0, 1), (-1.0, 1.0), 1),
    'hat': ((-1, 1), (-0.5, 0.5), 1),
    2: ((-1, 0, 1), (1.0, -2.0, 1.0), 2),
    3: ((-1, 0, 1, 2), (-1.0, 3.0, -3.0, 1.0), 3),
    4: ((-2, -1, 0, 1, 2), (1.0, -4.0, 6.0, -4.0, 1.0), 4),
}

# Maior expoente de exp representável em float64
_LOG_MAX_FLOAT = math.log(np.finfo(float).max)


def gradiente(valores, ordem, delta=1.0, borda='nan'):
    """
    Aplica o estêncil de ordem dada a um vetor numa grade uniforme.

    Args:
        valores (numpy.ndarray): Valores f(x_i) nos pontos da grade
        ordem (int or str): 0, 1, 'hat', 2, 3 ou 4
        delta (float): Passo da grade
        borda (str): 'nan' marca pontos onde o estêncil sai da grade;
            'zero' trata valores fora da grade como zero

    Returns:
        numpy.ndarray: Vetor do mesmo tamanho
    """
    valores = np.asarray(valores, dtype=float)
    if ordem == 0:
        return valores.copy()
    if ordem not in ESTENCEIS:
        raise DomainError(f"Ordem de gradiente desconhecida: {ordem}")

    deslocamentos, coeficientes, potencia = ESTENCEIS[ordem]
    preenchimento = np.nan if borda == 'nan' else 0.0
    estendido = np.concatenate([np.full(2, preenchimento), valores, np.full(2, preenchimento)])
    n = valores.size
    saida = np.zeros(n)
    for desloc, coef in zip(deslocamentos, coeficientes):
        saida += coef * estendido[2 + desloc:2 + desloc + n]
    return saida / delta ** potencia


@dataclass(frozen=True)
class GradientView:
    """
    Visão de gradiente de ordem m com passo δ sobre uma tabela ou vetor.

    Attributes:
        ordem (int or str): 1, 'hat', 2, 3 ou 4
        delta (float): Passo da grade (1 para o núcleo não reescalado)
        fonte (KernelTable, optional): Tabela de origem
    """

    ordem: object
    delta: float = 1.0
    fonte: object = None

    def __post_init__(self):
        if self.ordem not in ESTENCEIS:
            raise DomainError(f"Ordem de gradiente desconhecida: {self.ordem}")

    @property
    def estencil(self):
        """(deslocamentos, coeficientes) sem a divisão por δ."""
        deslocamentos, coeficientes, _ = ESTENCEIS[self.ordem]
        return deslocamentos, coeficientes

    def __call__(self, valores, borda='nan'):
        return gradiente(valores, self.ordem, self.delta, borda)

    def linha(self, n):
        """Gradiente da linha n da tabela de origem (zero fora do suporte)."""
        if self.fonte is None:
            raise ConfigurationError("GradientView sem tabela de origem")
        return gradiente(self.fonte.linha(n), self.ordem, self.delta, borda='zero')


def _soma_exata(a, b):
    """Soma a + b com o erro de arredondamento exato (TwoSum de Knuth)."""
    s = a + b
    bb = s - a
    return s, (a - (s - bb)) + (b - bb)


def _proxima_linha(linha, epsilon):
    """
    Convolução com {ε em 0, (1 − ε)/2 em ±1}, simétrica bit a bit.

    As duas somas de cada entrada são compensadas: os erros exatos do
    TwoSum são reinjetados no resultado.
    """
    meio = (1.0 - epsilon) / 2.0
    vizinhos = np.empty_like(linha)
    erro_vizinhos = np.zeros_like(linha)
    vizinhos[1:-1], erro_vizinhos[1:-1] = _soma_exata(linha[:-2], linha[2:])
    vizinhos[0] = linha[1]
    vizinhos[-1] = linha[-2]
    total, erro = _soma_exata(epsilon * linha, meio * vizinhos)
    return total + (erro + meio * erro_vizinhos)


def iter_rows(epsilon, N, K):
    """
    Gera (n, p^d_n) para n = 0..N sem guardar a tabela.

    Yields:
        tuple: (n, vetor de tamanho 2K + 1 indexado por k + K)
    """
    linha = np.zeros(2 * K + 1)
    linha[K] = 1.0
    yield 0, linha
    for n in range(1, N + 1):
        linha = _proxima_linha(linha, epsilon)
        yield n, linha


@dataclass(frozen=True, eq=False)
class KernelTable:
    """
    Tabela de p^d_n(k) para 0 ≤ n ≤ N e |k| ≤ K.

    Linhas não guardadas são recalculadas a partir da linha guardada
    mais próxima abaixo.

    Attributes:
        epsilon (float): Probabilidade de ficar parado
        N (int): Maior índice de tempo
        K (int): Meia largura espacial
        linhas (dict): Linhas guardadas {n: vetor}
    """

    epsilon: float
    N: int
    K: int
    linhas: dict = field(repr=False)

    @property
    def sigma2(self):
        return 1.0 - self.epsilon

    @property
    def sitios(self):
        return np.arange(-self.K, self.K + 1)

    @property
    def completa(self):
        return len(self.linhas) == self.N + 1

    def linha(self, n):
        """
        Linha p^d_n indexada por k + K.

        Raises:
            RangeError: Se n estiver fora de [0, N]
        """
        if not (0 <= n <= self.N):
            raise RangeError(f"Linha {n} fora da tabela (N={self.N})")
        if n in self.linhas:
            return self.linhas[n]
        base = max(m for m in self.linhas if m <= n)
        linha = self.linhas[base]
        for _ in range(n - base):
            linha = _proxima_linha(linha, self.epsilon)
        return linha

    def suporte(self, n):
        """Valores de p^d_n(k) para k ∈ [−n, n]."""
        return self.linha(n)[self.K - n:self.K + n + 1]

    def p(self, n, k):
        """p^d_n(k), zero fora de |k| ≤ K."""
        k = np.asarray(k)
        linha = self.linha(n)
        dentro = np.abs(k) <= self.K
        valores = np.where(dentro, linha[np.clip(k + self.K, 0, 2 * self.K)], 0.0)
        return float(valores) if valores.ndim == 0 else valores

    def soma_linha(self, n):
        """Soma compensada (math.fsum) da linha n."""
        return math.fsum(self.linha(n))

    def iter_rows(self):
        return iter_rows(self.epsilon, self.N, self.K)

    def denso(self):
        """Matriz (N + 1) × (2K + 1) com todas as linhas."""
        return np.vstack([linha for _, linha in self.iter_rows()])

    def to_dict(self):
        return {'epsilon': self.epsilon, 'N': self.N, 'K': self.K}

    def export(self, caminho):
        """Grava a tabela densa (f64 little-endian) com o JSON auxiliar {epsilon, N, K}."""
        return escrever_binario(caminho, self.denso(), self.to_dict())

    def __repr__(self):
        return f'<KernelTable ε={self.epsilon} N={self.N} K={self.K} guardadas={len(self.linhas)}>'


def build_kernel_table(epsilon, N, K, guardar=None):
    """
    Constrói a tabela exata do passeio simétrico preguiçoso.

    Args:
        epsilon (float): ε ∈ (0, 1)
        N (int): Maior índice de tempo (N ≥ 1)
        K (int): Meia largura (K ≥ N, sem truncamento)
        guardar (iterable, optional): Índices de linhas a manter em
            memória; None guarda todas

    Returns:
        KernelTable: Tabela construída

    Raises:
        ConfigurationError: Se N < 1 ou ε fora de (0, 1)
        TruncationError: Se K < N
        NumericalError: Se alguma linha não somar 1 em 1e−12
    """
    if not (0.0 < epsilon < 1.0):
        raise ConfigurationError(f"ε deve estar em (0, 1): {epsilon}")
    if N < 1:
        raise ConfigurationError(f"N deve ser pelo menos 1: {N}")
    if K < N:
        raise TruncationError(f"K={K} menor que N={N}: a tabela seria truncada")

    manter = None if guardar is None else set(int(n) for n in guardar) | {0}
    linhas = {}
    for n, linha in iter_rows(epsilon, N, K):
        if manter is None or n in manter:
            soma = math.fsum(linha)
            if abs(soma - 1.0) > 1e-12:
                raise NumericalError("Linha do núcleo não soma 1", {'n': n, 'soma': soma})
            guardada = linha.copy()
            guardada.setflags(write=False)
            linhas[n] = guardada

    logger.info(f"Tabela de núcleo construída: ε={epsilon}, N={N}, K={K}, linhas guardadas={len(linhas)}")
    return KernelTable(epsilon=float(epsilon), N=int(N), K=int(K), linhas=linhas)


def compose_rows(table, n, m):
    """
    Verificação de Chapman–Kolmogorov: max |p_n ∗ p_m − p_{n+m}|.
    """
    convolucao = np.convolve(table.suporte(n), table.suporte(m))
    return float(np.max(np.abs(convolucao - table.suporte(n + m))))


def gaussian_kernel(t, x, sigma2):
    """
    Núcleo de calor contínuo (2πσ²t)^{−1/2} exp(−x²/(2σ²t)).

    Raises:
        DomainError: Se t ≤ 0
    """
    t_arr = np.asarray(t, dtype=float)
    if np.any(t_arr <= 0):
        raise DomainError(f"Tempo do núcleo Gaussiano deve ser positivo: {t}")
    x = np.asarray(x, dtype=float)
    valores = np.exp(-x * x / (2.0 * sigma2 * t_arr)) / np.sqrt(2.0 * np.pi * sigma2 * t_arr)
    return float(valores) if valores.ndim == 0 else valores


class RescaledKernel:
    """
    Núcleo reescalado p̂^δ_t(x) = (1/δ) p^d_{t/δ²}(x/δ) na grade δ²ℕ × δℤ.
    """

    def __init__(self, table, delta):
        if not (0.0 < delta <= 1.0):
            raise ConfigurationError(f"δ deve estar em (0, 1]: {delta}")
        self.table = table
        self.delta = float(delta)

    def indice_tempo(self, t):
        """
        n = t/δ² inteiro.

        Raises:
            GridAlignmentError: Se t não estiver na grade δ²ℕ
            RangeError: Se n > N
        """
        bruto = t / self.delta ** 2
        n = int(round(bruto))
        if n < 0 or abs(n - bruto) > 1e-9 * max(1.0, bruto):
            raise GridAlignmentError(f"Tempo {t} fora da grade δ²ℕ com δ={self.delta}")
        if n > self.table.N:
            raise RangeError(f"Tempo {t} exige n={n} > N={self.table.N}")
        return n

    def indice_espaco(self, x):
        x = np.asarray(x, dtype=float)
        bruto = x / self.delta
        k = np.rint(bruto).astype(int)
        if np.any(np.abs(k - bruto) > 1e-9 * np.maximum(1.0, np.abs(bruto))):
            raise GridAlignmentError(f"Posição fora da grade δℤ com δ={self.delta}")
        return k

    def __call__(self, t, x):
        n = self.indice_tempo(t)
        valores = np.asarray(self.table.p(n, self.indice_espaco(x))) / self.delta
        return float(valores) if valores.ndim == 0 else valores

    def linha(self, n):
        """p̂^δ_{nδ²} em toda a largura da tabela."""
        return self.table.linha(n) / self.delta

    def residuo_calor(self, n):
        """
        max |∇_t p̂ − L̄ p̂| no tempo nδ², com L̄f = σ²/(2δ²)(f(x+δ) + f(x−δ) − 2f(x)).
        """
        d2 = self.delta ** 2
        atual = self.linha(n)
        proxima = self.linha(n + 1)
        laplaciano = gradiente(atual, 2, self.delta, borda='zero')
        residuo = (proxima - atual) / d2 - self.table.sigma2 / 2.0 * laplaciano
        return float(np.max(np.abs(residuo)))


def rescaled_kernel(table, delta):
    """Retorna o núcleo reescalado p̂^δ associado à tabela."""
    return RescaledKernel(table, delta)


def lclt_error(table, n, m):
    """
    sup_{|k|≤n} |∇^m p^d_n(k) − ∇^m p_n(k)| contra a Gaussiana de variância σ²n.

    Args:
        table (KernelTable): Tabela com N ≥ n
        n (int): Índice de tempo (n ≥ 1)
        m (int): Ordem 0, 2 ou 4

    Raises:
        DomainError: Se m não estiver em {0, 2, 4} ou n < 1
    """
    if m not in (0, 2, 4):
        raise DomainError(f"Ordem do TLC local deve ser 0, 2 ou 4: {m}")
    if n < 1:
        raise DomainError(f"n deve ser positivo: {n}")

    ks = np.arange(-n - 2, n + 3)
    diferenca = table.p(n, ks) - gaussian_kernel(float(n), ks, table.sigma2)
    erro = gradiente(diferenca, m, 1.0, borda='nan')[2:-2]
    return float(np.max(np.abs(erro)))


@dataclass(frozen=True)
class GaussianBoundScan:
    """
    Resultado da varredura sup_{n,k} n^{(m+1)/2} e^{bk²/n} |∇^m p^d_n(k)|.

    Attributes:
        valor (float): Supremo (inf quando explode)
        n (int): n onde o supremo é atingido (ou a primeira violação)
        k (int): k correspondente
        por_n (tuple): Supremo em k para cada n = 1..N
        explodiu (bool): True quando o valor excede o maior float
    """

    valor: float
    n: int
    k: int
    por_n: tuple
    explodiu: bool

    def __float__(self):
        return self.valor

    @property
    def crescimento_ultima_oitava(self):
        """sup sobre n ≤ N dividido pelo sup sobre n ≤ N/2, menos 1."""
        por_n = np.asarray(self.por_n)
        metade = por_n.size // 2
        anterior = float(np.max(por_n[:metade]))
        return float(np.max(por_n)) / anterior - 1.0


def gaussian_bound_scan(table, m, b):
    """
    Varre n ≤ N e k do suporte calculando n^{(m+1)/2} e^{bk²/n}|∇^m p^d_n(k)|
    em escala logarítmica.

    Args:
        table (KernelTable): Tabela (linhas geradas em fluxo)
        m (int): Ordem do gradiente (0 a 4)
        b (float): Expoente Gaussiano b > 0

    Returns:
        GaussianBoundScan: Supremo, argumento e supremos por n

    Raises:
        DomainError: Se b ≤ 0 ou m inválido
    """
    if b <= 0:
        raise DomainError(f"Expoente b deve ser positivo: {b}")
    if m != 0 and m not in ESTENCEIS:
        raise DomainError(f"Ordem de gradiente desconhecida: {m}")

    K = table.K
    melhor, melhor_n, melhor_k = -np.inf, 0, 0
    por_n = []
    for n, linha in table.iter_rows():
        if n == 0:
            continue
        largura = min(n + 2, K)
        trecho = linha[K - largura:K + largura + 1]
        ks = np.arange(-largura, largura + 1)
        grad = np.abs(gradiente(trecho, m, 1.0, borda='zero'))
        with np.errstate(divide='ignore'):
            logs = 0.5 * (m + 1) * math.log(n) + b * ks * ks / n + np.log(grad)
        i = int(np.argmax(logs))
        por_n.append(logs[i])
        if logs[i] > melhor:
            melhor, melhor_n, melhor_k = float(logs[i]), n, int(ks[i])
        if melhor > _LOG_MAX_FLOAT:
            logger.warning(f"Varredura Gaussiana explodiu: m={m}, b={b}, n={melhor_n}, k={melhor_k}")
            return GaussianBoundScan(valor=math.inf, n=melhor_n, k=melhor_k,
                                     por_n=tuple(np.exp(np.minimum(por_n, _LOG_MAX_FLOAT))), explodiu=True)

    logger.info(f"Varredura Gaussiana: m={m}, b={b:.4g}, sup={math.exp(melhor):.6g} em n={melhor_n}, k={melhor_k}")
    return GaussianBoundScan(valor=math.exp(melhor), n=melhor_n, k=melhor_k,
                             por_n=tuple(np.exp(por_n)), explodiu=False)
