# -*- coding: utf-8 -*-
"""
Equação Parabólica Discreta no Ambiente Aleatório
=================================================

Resolve ∇_t f = L^δ f + g na grade δ²ℕ × δℤ pela recursão direta
f_{t_{k+1}} = T^δ f_{t_k} + δ² g_{t_k} e pela forma branda (Duhamel)
f = G + J com os núcleos exatos do passeio preguiçoso livre, verifica
as identidades de soma por partes, constrói o gradiente v^δ = ∇^δ f e
sua interpolação espaço-temporal ṽ^δ.

Convenções:
- P_m é a linha m do núcleo livre (probabilidades, soma 1)
- G_k = P_k ∗ f₀ + δ² Σ_{ℓ<k} P_{k−1−ℓ} ∗ g_ℓ
- J_k = δ Σ_{ℓ<k} P_{k−1−ℓ} ∗ (U̇ ∇̂f_ℓ)
- I_ℓ(a, y) = S(y) − S(a + δ), S soma acumulada de U̇∇̂f_ℓ
- numa janela de raio r e N passos a região exata tem raio r − N

Autor: Sistema Sinai Lab
Data: 2024
"""

import logging
import math
from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial import Polynomial
from scipy import signal

from .config import Config
from .env import RescaledEnvironment, interpolate_noise, rescaled_from_noise
from .errors import ConfigurationError, RangeError, TruncationError
from .exportacao import escrever_binario
from .kernel import build_kernel_table
from .rough import ControlledProcess, GridRoughPath
from .walk import amostrar_na_janela, transition_operator

logger = logging.getLogger(__name__)


# ----------------------------------------------------------------------
# Funções da grade
# ----------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class GridFunction:
    """
    Valores f_{t_k}(x) nas linhas guardadas de uma grade δ²ℕ × δℤ.

    Attributes:
        delta (float): Passo espacial δ
        N (int): Número total de passos de tempo
        passos (tuple): Índices k das linhas guardadas (crescentes)
        primeiro_sitio (int): Sítio inteiro da primeira coluna
        valores (numpy.ndarray): Matriz (linhas × sítios)
        limite_cauda (float): Cota do erro da solução em banda (0 se exata)
        cone (tuple, optional): Linhas completas do cone de dependência,
            linha ℓ nos sítios [−(r − ℓ), r − ℓ]
    """

    delta: float
    N: int
    passos: tuple
    primeiro_sitio: int
    valores: np.ndarray = field(repr=False)
    limite_cauda: float = 0.0
    cone: tuple = field(default=None, repr=False)

    def __post_init__(self):
        self._validar_dados()

    def _validar_dados(self):
        if self.valores.ndim != 2 or self.valores.shape[0] != len(self.passos):
            raise ConfigurationError(
                f"Matriz {self.valores.shape} incompatível com {len(self.passos)} linhas guardadas"
            )
        if not np.all(np.isfinite(self.valores)):
            raise ConfigurationError("Função da grade com valores não finitos")
        self.valores.setflags(write=False)

    @property
    def sitios(self):
        return self.primeiro_sitio + np.arange(self.valores.shape[1])

    @property
    def xs(self):
        return self.sitios * self.delta

    @property
    def tempos(self):
        return np.asarray(self.passos, dtype=float) * self.delta ** 2

    @property
    def horizonte(self):
        return self.N * self.delta ** 2

    def posicao_linha(self, k):
        """
        Posição da linha do passo k na matriz.

        Raises:
            RangeError: Se a linha não estiver guardada
        """
        i = int(np.searchsorted(self.passos, k))
        if i >= len(self.passos) or self.passos[i] != k:
            raise RangeError(f"Linha do passo {k} não guardada")
        return i

    def linha(self, k):
        return self.valores[self.posicao_linha(k)]

    def coluna(self, x):
        """
        Índice da coluna da posição x.

        Raises:
            RangeError: Se x estiver fora da janela
        """
        s = int(round(x / self.delta))
        i = s - self.primeiro_sitio
        if not (0 <= i < self.valores.shape[1]):
            raise RangeError(f"Posição {x} fora da janela [{self.xs[0]}, {self.xs[-1]}]")
        return i

    def valor(self, t, x):
        """f_t(x) num ponto da grade guardado."""
        k = int(round(t / self.delta ** 2))
        return float(self.linha(k)[self.coluna(x)])

    def restringir(self, primeiro, ultimo):
        """Recorte para os sítios [primeiro, ultimo]."""
        i = primeiro - self.primeiro_sitio
        j = ultimo - self.primeiro_sitio
        if i < 0 or j >= self.valores.shape[1] or j < i:
            raise RangeError(f"Recorte [{primeiro}, {ultimo}] fora da janela da função")
        return GridFunction(
            delta=self.delta, N=self.N, passos=self.passos, primeiro_sitio=primeiro,
            valores=np.array(self.valores[:, i:j + 1]), limite_cauda=self.limite_cauda,
        )

    def combinar(self, outra, fator=1.0):
        """self + fator·outra na mesma grade."""
        if (self.passos != outra.passos or self.primeiro_sitio != outra.primeiro_sitio
                or self.valores.shape != outra.valores.shape):
            raise ConfigurationError("Funções da grade com suportes diferentes")
        return GridFunction(
            delta=self.delta, N=self.N, passos=self.passos, primeiro_sitio=self.primeiro_sitio,
            valores=self.valores + fator * outra.valores,
            limite_cauda=self.limite_cauda + abs(fator) * outra.limite_cauda,
        )

    def escalar(self, fator):
        return GridFunction(
            delta=self.delta, N=self.N, passos=self.passos, primeiro_sitio=self.primeiro_sitio,
            valores=fator * self.valores, limite_cauda=abs(fator) * self.limite_cauda,
        )

    def to_dict(self):
        return {
            'delta': self.delta,
            'N': self.N,
            'window': [float(self.xs[0]), float(self.xs[-1])],
            'passos': list(self.passos),
            'limite_cauda': self.limite_cauda,
        }

    def export(self, caminho):
        """Exporta a matriz em f64 little-endian com JSON auxiliar."""
        return escrever_binario(caminho, self.valores, self.to_dict())

    def __repr__(self):
        return (f'<GridFunction δ={self.delta} N={self.N} linhas={len(self.passos)} '
                f'sítios=[{self.sitios[0]}, {self.sitios[-1]}]>')


def _passos_guardados(N, guardar):
    if guardar is None:
        return tuple(range(N + 1))
    passos = sorted(set(int(k) for k in guardar))
    if passos and (passos[0] < 0 or passos[-1] > N):
        raise RangeError(f"Passos a guardar fora de [0, {N}]: {passos}")
    return tuple(passos)


def _forcamento(renv, g, N):
    """Retorna k ↦ g_{t_k} na janela inteira, ou None."""
    if g is None:
        return None
    n = 2 * renv.radius + 1
    d2 = renv.delta ** 2
    if callable(g):
        return lambda k: np.asarray(g(k * d2, renv.posicoes), dtype=float) * np.ones(n)
    matriz = np.asarray(g, dtype=float)
    if matriz.shape[0] < N or matriz.shape[1] != n:
        raise ConfigurationError(f"Forçamento com forma {matriz.shape}; esperado ({N}, {n})")
    return lambda k: matriz[k]


def _recortar(vetor, primeiro, lo, hi):
    """Valores de um vetor que começa no sítio primeiro, nos sítios [lo, hi]."""
    i = lo - primeiro
    j = hi - primeiro
    if i < 0 or j >= np.shape(vetor)[-1]:
        raise RangeError(f"Sítios [{lo}, {hi}] fora do vetor em [{primeiro}, {primeiro + np.shape(vetor)[-1] - 1}]")
    return vetor[..., i:j + 1]


# ----------------------------------------------------------------------
# Recursão direta
# ----------------------------------------------------------------------

def solve_direct(renv, f0, g=None, N=0, guardar=None, banda=None, guardar_cone=False):
    """
    Resolve f_{t_{k+1}} = f_{t_k} + δ²(L^δ f_{t_k} + g_{t_k}).

    Sem banda a solução é exata na região de raio r − N. Com banda M a
    recursão roda na janela inteira com bordas absorventes e devolve a
    região de raio r − M, com a cota 2‖f₀‖_∞·P(alcançar a borda).

    Args:
        renv (RescaledEnvironment): Ambiente reescalado (raio r)
        f0 (callable or numpy.ndarray): Dado inicial
        g (callable or numpy.ndarray, optional): Forçamento g(t, x)
        N (int): Número de passos
        guardar (iterable, optional): Passos guardados (padrão: todos)
        banda (int, optional): Distância em sítios até a borda absorvente
        guardar_cone (bool): Guarda as linhas completas do cone

    Returns:
        GridFunction: Solução na região exata (ou em banda)

    Raises:
        ConfigurationError: Se a janela for pequena demais
    """
    r = renv.radius
    margem = N if banda is None else int(banda)
    R = r - margem
    if R < 0 or N < 0:
        raise ConfigurationError(f"Janela de raio {r} insuficiente para {N} passos (margem {margem})")
    if banda is not None and g is not None:
        raise ConfigurationError("Solução em banda disponível apenas com g = 0")

    passos = _passos_guardados(N, guardar)
    forcamento = _forcamento(renv, g, N)
    op = transition_operator(renv)
    d2 = renv.delta ** 2
    inicial = amostrar_na_janela(renv, f0)
    linhas = []
    cone = [] if guardar_cone else None

    if banda is None:
        atual, primeiro = inicial, -r
        for k in range(N + 1):
            if cone is not None:
                cone.append(atual)
            if k in passos:
                linhas.append(_recortar(atual, primeiro, -R, R))
            if k == N:
                break
            proximo = op.aplicar(atual, primeiro)
            if forcamento is not None:
                proximo = proximo + d2 * forcamento(k)[primeiro + 1 + r:primeiro + 1 + r + proximo.size]
            atual, primeiro = proximo, primeiro + 1
        limite = 0.0
    else:
        pilha = np.zeros((2, 2 * r + 1))
        pilha[0] = inicial
        pilha[1, [0, -1]] = 1.0
        for k in range(N + 1):
            if k in passos:
                linhas.append(np.array(pilha[0, margem:margem + 2 * R + 1]))
            if k == N:
                break
            pilha[:, 1:-1] = op.aplicar(pilha, -r)
        saida = float(pilha[1, margem:margem + 2 * R + 1].max())
        limite = 2.0 * float(np.max(np.abs(inicial))) * saida
        logger.debug(f"Solução em banda: M={margem}, P(saída)={saida:.3e}, cota={limite:.3e}")

    return GridFunction(
        delta=renv.delta, N=N, passos=passos, primeiro_sitio=-R,
        valores=np.vstack(linhas) if linhas else np.empty((0, 2 * R + 1)),
        limite_cauda=limite, cone=tuple(cone) if cone is not None else None,
    )


# ----------------------------------------------------------------------
# Forma branda
# ----------------------------------------------------------------------

def _tabela_para(renv, N, table):
    if table is None:
        return build_kernel_table(renv.epsilon, max(N, 1), max(N, 1))
    if table.N < N or table.K < N:
        raise TruncationError(f"Tabela de núcleo com N={table.N}, K={table.K} insuficiente para {N} passos")
    if abs(table.epsilon - renv.epsilon) > 1e-15:
        raise ConfigurationError(f"Tabela com ε={table.epsilon} diferente do ambiente ε={renv.epsilon}")
    return table


def _convolver(valores, primeiro, nucleo, u_min):
    """
    Σ_u nucleo(u)·valores(s − u) em modo válido.

    Returns:
        tuple: (resultado, primeiro sítio s do resultado)
    """
    resultado = signal.convolve(valores, nucleo, mode='valid')
    return resultado, primeiro + len(nucleo) - 1 + u_min


def _nucleo_gradiente(P, delta):
    """∇P(u) = (P(u + δ) − P(u))/δ para u ∈ [−m − 1, m]."""
    estendido = np.concatenate([[0.0], P, [0.0]])
    return (estendido[1:] - estendido[:-1]) / delta


def _nucleo_laplaciano(P, delta):
    """∇²P(u) para u ∈ [−m − 1, m + 1]."""
    estendido = np.concatenate([[0.0, 0.0], P, [0.0, 0.0]])
    return (estendido[2:] + estendido[:-2] - 2.0 * estendido[1:-1]) / delta ** 2


def _nucleo_hat_gradiente(P, delta):
    """∇̂∇P(u) para u ∈ [−m − 2, m + 1]."""
    D = np.concatenate([[0.0, 0.0], _nucleo_gradiente(P, delta), [0.0, 0.0]])
    return (D[2:] - D[:-2]) / (2.0 * delta)


def _ruido_gradiente(renv, f, primeiro):
    """
    q(z) = U̇^δ(z) ∇̂f(z) nos sítios do vetor f, com zeros nas bordas.
    """
    r = renv.radius
    n = f.size
    q = np.zeros(n)
    u_dot = renv.u_dot[primeiro + 1 + r:primeiro + n - 1 + r]
    q[1:-1] = u_dot * (f[2:] - f[:-2]) / (2.0 * renv.delta)
    return q


def _cone_direto(renv, f0, g, N):
    solucao = solve_direct(renv, f0, g, N, guardar=(), guardar_cone=True)
    return solucao.cone


@dataclass(frozen=True, eq=False)
class MildDecomposition:
    """Partes G (Duhamel) e J (ruído) da forma branda."""

    G: GridFunction
    J: GridFunction

    @property
    def f(self):
        return self.G.combinar(self.J)


def mild_decomposition(renv, f0, g=None, N=0, table=None, guardar=None):
    """
    Calcula G e J da forma branda com somas sem truncamento.

    A solução é construída em ordem de tempo: f_k = G_k + J_k com J_k
    dependendo de ∇̂f_ℓ para ℓ < k.

    Args:
        renv (RescaledEnvironment): Ambiente reescalado
        f0 (callable or numpy.ndarray): Dado inicial
        g (callable or numpy.ndarray, optional): Forçamento
        N (int): Número de passos
        table (KernelTable, optional): Núcleo livre com profundidade ≥ N
        guardar (iterable, optional): Passos guardados

    Returns:
        MildDecomposition: G e J na região de raio r − N

    Raises:
        TruncationError: Se a tabela não tiver profundidade suficiente
        ConfigurationError: Se a janela for pequena demais
    """
    r = renv.radius
    R = r - N
    if R < 0:
        raise ConfigurationError(f"Janela de raio {r} insuficiente para {N} passos")
    tabela = _tabela_para(renv, N, table)
    passos = _passos_guardados(N, guardar)
    forcamento = _forcamento(renv, g, N)
    delta = renv.delta
    d2 = delta ** 2
    nucleos = [tabela.suporte(m) for m in range(N + 1)]

    inicial = amostrar_na_janela(renv, f0)
    fontes_ruido = []
    fontes_g = []
    atual = inicial
    linhas_G, linhas_J = [], []

    for k in range(N + 1):
        primeiro = -(r - k)
        if k == 0:
            G_k = inicial
            J_k = np.zeros_like(inicial)
        else:
            G_k, _ = _convolver(inicial, -r, nucleos[k], -k)
            J_k = np.zeros_like(G_k)
            for ell in range(k):
                m = k - 1 - ell
                parcela, _ = _convolver(fontes_ruido[ell], -(r - ell - 1), nucleos[m], -m)
                J_k = J_k + parcela
                if forcamento is not None:
                    parcela, _ = _convolver(fontes_g[ell], -(r - ell - 1), nucleos[m], -m)
                    G_k = G_k + d2 * parcela
        atual = G_k + J_k
        if k in passos:
            linhas_G.append(_recortar(G_k, primeiro, -R, R))
            linhas_J.append(_recortar(J_k, primeiro, -R, R))
        if k < N:
            q = _ruido_gradiente(renv, atual, primeiro)
            fontes_ruido.append(delta * q[1:-1])
            if forcamento is not None:
                fontes_g.append(forcamento(k)[k + 1:2 * r + 1 - (k + 1)])

    def montar(linhas):
        return GridFunction(delta=delta, N=N, passos=passos, primeiro_sitio=-R, valores=np.vstack(linhas))

    logger.debug(f"Forma branda calculada: δ={delta}, N={N}, raio de saída {R}")
    return MildDecomposition(G=montar(linhas_G), J=montar(linhas_J))


def solve_mild(renv, f0, g=None, N=0, table=None, guardar=None):
    """Solução f = G + J pela forma branda (ver mild_decomposition)."""
    return mild_decomposition(renv, f0, g, N, table, guardar).f


# ----------------------------------------------------------------------
# Soma por partes
# ----------------------------------------------------------------------

def _soma_I(q, primeiro, ancora):
    """I(a, y) = S(y) − S(a + δ) para todos os sítios y do vetor q."""
    S = np.cumsum(q)
    return S - S[ancora + 1 - primeiro]


@dataclass(frozen=True)
class IBPReport:
    """
    Resíduos das identidades de soma por partes.

    Attributes:
        ancoras (list): Valores de a testados
        passos (list): Passos k avaliados
        residuo_J (list): max |J_ibp − J| para cada a
        residuo_gradiente (list): Resíduo da equação de ∇f para cada a
        residuo_hat (list): Resíduo da equação de ∇̂f para cada a
        independencia (float): max |J_ibp(a₁) − J_ibp(a₂)|
        escala (float): max |J| usado como referência
    """

    ancoras: list
    passos: list
    residuo_J: list
    residuo_gradiente: list
    residuo_hat: list
    independencia: float
    escala: float

    @property
    def maximo(self):
        return max(self.residuo_J + self.residuo_gradiente + self.residuo_hat + [self.independencia])

    def to_dict(self):
        return {
            'ancoras': self.ancoras,
            'passos': self.passos,
            'residuo_J': self.residuo_J,
            'residuo_gradiente': self.residuo_gradiente,
            'residuo_hat': self.residuo_hat,
            'independencia': self.independencia,
            'escala': self.escala,
            'maximo': self.maximo,
        }


def ibp_identity_check(renv, solution, a_values, g=None, table=None, passos=None):
    """
    Compara J da forma branda com a forma após soma por partes e
    verifica as equações de ∇f e ∇̂f.

    Args:
        renv (RescaledEnvironment): Ambiente usado na solução
        solution (GridFunction): Saída de solve_direct com guardar_cone=True
        a_values (iterable): Âncoras a ∈ δℤ
        g (callable or numpy.ndarray, optional): Forçamento da solução
        table (KernelTable, optional): Núcleo livre
        passos (iterable, optional): Passos k avaliados (padrão 1, N/2, N)

    Returns:
        IBPReport: Resíduos por âncora

    Raises:
        ConfigurationError: Se a solução não tiver o cone guardado
    """
    if solution.cone is None:
        raise ConfigurationError("ibp_identity_check exige solução com guardar_cone=True")
    N = solution.N
    r = renv.radius
    R = r - N
    delta = renv.delta
    d2 = delta ** 2
    tabela = _tabela_para(renv, N, table)
    forcamento = _forcamento(renv, g, N)
    passos = sorted(set(passos or (1, max(1, N // 2), N)))
    cone = solution.cone
    nucleos = [tabela.suporte(m) for m in range(N + 1)]
    ancoras = [renv.sitio(a) for a in a_values]
    for s in ancoras:
        if abs(s) + 2 > r - N:
            raise RangeError(f"Âncora {s * delta} fora da região exata de raio {(r - N) * delta}")

    q_cone = [_ruido_gradiente(renv, cone[ell], -(r - ell)) for ell in range(N)]
    res_J = [0.0] * len(ancoras)
    res_grad = [0.0] * len(ancoras)
    res_hat = [0.0] * len(ancoras)
    independencia = 0.0
    escala = 0.0

    for k in passos:
        if k < 1:
            continue
        f_k = cone[k]
        primeiro_k = -(r - k)
        inicial = cone[0]

        # J original e ∇G pelos núcleos
        J_orig = np.zeros(2 * (r - k) + 1)
        grad_G, p_grad = _convolver(inicial, -r, _nucleo_gradiente(nucleos[k], delta), -k - 1)
        for ell in range(k):
            m = k - 1 - ell
            interno = q_cone[ell][1:-1]
            parcela, _ = _convolver(interno, -(r - ell - 1), nucleos[m], -m)
            J_orig += delta * parcela
            if forcamento is not None:
                g_ell = forcamento(ell)[ell + 1:2 * r + 1 - (ell + 1)]
                parcela, _ = _convolver(g_ell, -(r - ell - 1), _nucleo_gradiente(nucleos[m], delta), -m - 1)
                grad_G = grad_G + d2 * parcela

        # ∇̂G(x) = ½(∇G(x) + ∇G(x − δ))
        hat_G = 0.5 * (grad_G[1:] + grad_G[:-1])
        p_hat = p_grad + 1

        J_alvo = _recortar(J_orig, primeiro_k, -R, R)
        escala = max(escala, float(np.max(np.abs(J_alvo))))
        grad_f = (f_k[1:] - f_k[:-1]) / delta
        hat_f = (f_k[2:] - f_k[:-2]) / (2.0 * delta)
        J_anteriores = []

        for w, a in enumerate(ancoras):
            J_ibp = np.zeros(2 * (r - k) + 2)
            soma_grad = np.zeros(2 * (r - k) + 1)
            soma_hat = np.zeros(2 * (r - k))
            for ell in range(k):
                m = k - 1 - ell
                I = _soma_I(q_cone[ell], -(r - ell), a)
                P = nucleos[m]
                parcela, _ = _convolver(I, -(r - ell), _nucleo_gradiente(P, delta), -m - 1)
                J_ibp += d2 * parcela
                parcela, _ = _convolver(I, -(r - ell), _nucleo_laplaciano(P, delta), -m - 1)
                soma_grad += d2 * parcela
                parcela, _ = _convolver(I, -(r - ell), _nucleo_hat_gradiente(P, delta), -m - 2)
                soma_hat += d2 * parcela

            # J_ibp e ∇J começam no sítio −(r − k); ∇̂J em −(r − k) + 1
            J_ibp_saida = _recortar(J_ibp, primeiro_k, -R, R)
            res_J[w] = max(res_J[w], float(np.max(np.abs(J_ibp_saida - J_alvo))))
            lado_grad = _recortar(grad_G + soma_grad[:grad_G.size], p_grad, -R, R - 1)
            res_grad[w] = max(res_grad[w], float(np.max(np.abs(_recortar(grad_f, primeiro_k, -R, R - 1) - lado_grad))))
            lado_hat = _recortar(hat_G + soma_hat[:hat_G.size], p_hat, -R + 1, R - 1)
            res_hat[w] = max(res_hat[w], float(np.max(np.abs(_recortar(hat_f, primeiro_k + 1, -R + 1, R - 1) - lado_hat))))
            for anterior in J_anteriores:
                independencia = max(independencia, float(np.max(np.abs(anterior - J_ibp_saida))))
            J_anteriores.append(J_ibp_saida)

    relatorio = IBPReport(
        ancoras=[s * delta for s in ancoras], passos=list(passos), residuo_J=res_J,
        residuo_gradiente=res_grad, residuo_hat=res_hat, independencia=independencia, escala=escala,
    )
    logger.info(f"Soma por partes: resíduo máximo {relatorio.maximo:.3e} (escala de J {escala:.3e})")
    return relatorio


# ----------------------------------------------------------------------
# Gradiente v^δ e interpolação
# ----------------------------------------------------------------------

class InterpolatedSolution:
    """
    Avaliador ṽ^δ(t, x): linear em x entre pontos adjacentes de δℤ e
    linear em t entre tempos adjacentes de δ²ℕ; para t < δ² vale ṽ_{δ²}.
    """

    def __init__(self, funcao):
        self.funcao = funcao
        self.delta = funcao.delta

    def _linha_espacial(self, k, x):
        xs = self.funcao.xs
        if np.any(x < xs[0] - 1e-12) or np.any(x > xs[-1] + 1e-12):
            raise RangeError(f"Avaliação fora da janela [{xs[0]}, {xs[-1]}]")
        return np.interp(x, xs, self.funcao.linha(k))

    def __call__(self, t, x):
        """
        Raises:
            RangeError: Se x sair da janela ou as linhas vizinhas de t
                não estiverem guardadas
        """
        x = np.asarray(x, dtype=float)
        d2 = self.delta ** 2
        t = max(float(t), d2)
        bruto = t / d2
        k2 = int(math.ceil(bruto - 1e-9))
        if k2 > self.funcao.N:
            raise RangeError(f"Tempo {t} além do horizonte {self.funcao.horizonte}")
        if abs(bruto - k2) <= 1e-9 * max(1.0, bruto):
            valores = self._linha_espacial(k2, x)
        else:
            k1 = k2 - 1
            peso = bruto - k1
            valores = (1.0 - peso) * self._linha_espacial(k1, x) + peso * self._linha_espacial(k2, x)
        return float(valores) if valores.ndim == 0 else valores

    def na_grade(self, tempos, primeiro, ultimo):
        """Matriz ṽ nos tempos dados e sítios [primeiro, ultimo]."""
        xs = np.arange(primeiro, ultimo + 1) * self.delta
        return np.vstack([self(t, xs) for t in tempos])


def interpolate_solution(v):
    """Interpolação espaço-temporal ṽ^δ de uma GridFunction."""
    return InterpolatedSolution(v)


@dataclass(frozen=True, eq=False)
class VDeltaSolution:
    """
    Gradiente v^δ = ∇^δ f, sua interpolação e a derivada declarada
    ∂ṽ = c·ṽ sobre Û₁^δ (c = −2/σ² por padrão).

    Attributes:
        v (GridFunction): v^δ nos sítios [−(R − 1), R − 1]
        f (GridFunction): Solução direta
        caminho (GridRoughPath): Û₁^δ nos mesmos sítios de v
        coef_derivada (float): c
        residuo (float): max |v − lado direito da equação de v| (nan se
            não verificado)
        termo_j0 (float): max |termo j = 0| da equação de v
        escala (float): max |v| nos passos verificados
    """

    v: GridFunction
    f: GridFunction
    caminho: GridRoughPath
    coef_derivada: float
    residuo: float = math.nan
    termo_j0: float = math.nan
    escala: float = math.nan

    @property
    def interpolado(self):
        return interpolate_solution(self.v)

    @property
    def derivada(self):
        return self.v.escalar(self.coef_derivada)

    def processo_controlado(self, tempos, raio=None):
        """
        ControlledProcess de ṽ nos tempos dados (t < δ² usa δ²).

        Args:
            tempos (iterable): Tempos na grade δ²ℕ (ou menores que δ²)
            raio (float, optional): Recorta a janela em [−raio, raio]
        """
        primeiro, ultimo = int(self.v.sitios[0]), int(self.v.sitios[-1])
        caminho = self.caminho
        if raio is not None:
            limite = int(round(raio / self.v.delta))
            if limite > ultimo:
                raise RangeError(f"Raio {raio} excede a janela de v ({ultimo * self.v.delta})")
            i = -limite - primeiro
            caminho = GridRoughPath(
                passo=caminho.passo, ancoras=np.array(caminho.ancoras[i:i + 2 * limite + 1]),
                origem=-limite * self.v.delta,
            )
            primeiro, ultimo = -limite, limite
        valores = self.interpolado.na_grade(tempos, primeiro, ultimo)
        return ControlledProcess(
            tempos=np.asarray(tempos, dtype=float), caminho=caminho,
            v=valores, dv=self.coef_derivada * valores,
        )

    def to_dict(self):
        return {
            'v': self.v.to_dict(),
            'coef_derivada': self.coef_derivada,
            'residuo': self.residuo,
            'termo_j0': self.termo_j0,
            'escala': self.escala,
        }


def _residuo_v(renv, cone, N, tabela, forcamento, passos_verificar):
    """
    Avalia v_k = η_k − ½δ² Σ_j ∇²P_j ∗ I_{k−1−j}(x, ·) e devolve
    (resíduo máximo, maior termo j = 0, escala de v).
    """
    r = renv.radius
    R = r - N
    delta = renv.delta
    d2 = delta ** 2
    nucleos = [tabela.suporte(m) for m in range(N + 1)]
    u_bar = renv.u_bar

    # Termos trapezoidais ½(v(z) + v(z − δ))·Ū(z) no cone
    somas = []
    for ell in range(N):
        f = cone[ell]
        primeiro = -(r - ell)
        v = (f[1:] - f[:-1]) / delta
        termos = np.zeros(f.size)
        termos[1:-1] = 0.5 * (v[1:] + v[:-1]) * u_bar[primeiro + 1 + r:primeiro + f.size - 1 + r]
        somas.append(np.cumsum(termos))

    residuo, termo_j0, escala = 0.0, 0.0, 0.0
    for k in passos_verificar:
        if k < 1:
            continue
        f_k = cone[k]
        primeiro_k = -(r - k)
        v_k = _recortar((f_k[1:] - f_k[:-1]) / delta, primeiro_k, -(R - 1), R - 1)
        eta, p_eta = _convolver(cone[0], -r, _nucleo_gradiente(nucleos[k], delta), -k - 1)
        total = _recortar(eta, p_eta, -(R - 1), R - 1).copy()
        for j in range(k):
            ell = k - 1 - j
            primeiro = -(r - ell)
            if forcamento is not None:
                g_ell = forcamento(ell)[ell + 1:2 * r + 1 - (ell + 1)]
                parcela, p = _convolver(g_ell, primeiro + 1, _nucleo_gradiente(nucleos[j], delta), -j - 1)
                total += d2 * _recortar(parcela, p, -(R - 1), R - 1)
            E = _nucleo_laplaciano(nucleos[j], delta)
            S = somas[ell]
            conv, p = _convolver(S, primeiro, E, -j - 1)
            ancorado = _recortar(conv, p, -(R - 1), R - 1) - _recortar(S, primeiro, -R, R - 2) * math.fsum(E)
            parcela = -0.5 * d2 * ancorado
            if j == 0:
                termo_j0 = max(termo_j0, float(np.max(np.abs(parcela))))
            total += parcela
        residuo = max(residuo, float(np.max(np.abs(v_k - total))))
        escala = max(escala, float(np.max(np.abs(v_k))))
    return residuo, termo_j0, escala


def build_v_delta(fonte, f0, g=None, N=0, spec=None, delta=None, coef_derivada=None,
                  guardar=None, verificar=True, table=None, banda=None, passos_verificar=None):
    """
    Constrói v^δ = ∇^δ f com f da recursão direta e avalia o resíduo da
    equação branda de v.

    Args:
        fonte (RescaledEnvironment or numpy.ndarray): Ambiente ou campo
            por sítio usado no lugar de Ū^δ (modo ruído)
        f0, g: Dados da equação
        N (int): Número de passos
        spec (EnvironmentSpec, optional): Obrigatório no modo ruído
        delta (float, optional): Obrigatório no modo ruído
        coef_derivada (float, optional): c de ∂ṽ = c·ṽ (padrão −2/σ²)
        guardar (iterable, optional): Passos guardados de v
        verificar (bool): Avalia a equação branda de v (exige o cone)
        table (KernelTable, optional): Núcleo livre
        banda (int, optional): Solução em banda (sem verificação)
        passos_verificar (iterable, optional): Passos do resíduo

    Returns:
        VDeltaSolution: v^δ, f, Û₁^δ e os resíduos
    """
    if isinstance(fonte, RescaledEnvironment):
        renv = fonte
    else:
        if spec is None or delta is None:
            raise ConfigurationError("Modo ruído exige spec e delta")
        renv = rescaled_from_noise(spec, fonte, delta)

    verificar = verificar and banda is None
    coef = -2.0 / renv.sigma2 if coef_derivada is None else float(coef_derivada)
    # a linha 1 sustenta ṽ para t < δ²
    passos = _passos_guardados(N, None if guardar is None else set(guardar) | {min(1, N)})
    f = solve_direct(renv, f0, g, N, guardar=passos, banda=banda, guardar_cone=verificar)
    R = int(-f.primeiro_sitio)
    if R < 1:
        raise ConfigurationError(f"Região exata de raio {R} pequena demais para ∇^δ f")

    gradiente = (f.valores[:, 1:] - f.valores[:, :-1]) / renv.delta
    v = GridFunction(
        delta=renv.delta, N=N, passos=passos, primeiro_sitio=-(R - 1),
        valores=np.array(gradiente[:, 1:]), limite_cauda=2.0 * f.limite_cauda / renv.delta,
    )
    ancoras = interpolate_noise(renv.u_bar1, renv.delta).anchors
    r = renv.radius
    caminho = GridRoughPath(
        passo=renv.delta, ancoras=np.array(ancoras[r - (R - 1):r + R]), origem=-(R - 1) * renv.delta,
    )

    residuo = termo_j0 = escala = math.nan
    if verificar:
        tabela = _tabela_para(renv, N, table)
        verificados = sorted(set(passos_verificar or (1, max(1, N // 2), N)))
        residuo, termo_j0, escala = _residuo_v(renv, f.cone, N, tabela, _forcamento(renv, g, N), verificados)
        logger.info(f"Equação de v^δ: resíduo {residuo:.3e}, termo j=0 {termo_j0:.3e}, escala {escala:.3e}")
        f = GridFunction(delta=f.delta, N=f.N, passos=f.passos, primeiro_sitio=f.primeiro_sitio,
                         valores=np.array(f.valores), limite_cauda=f.limite_cauda)

    return VDeltaSolution(
        v=v, f=f, caminho=caminho, coef_derivada=coef,
        residuo=residuo, termo_j0=termo_j0, escala=escala,
    )


# ----------------------------------------------------------------------
# Dados iniciais e norma C^r_L
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class FuncaoTeste:
    """
    Função de teste com derivadas até a ordem 3.

    Attributes:
        nome (str): Identificador
        derivadas (tuple): Funções vetorizadas D⁰f, ..., D³f (None usa
            diferenças finitas)
    """

    nome: str
    derivadas: tuple

    def __call__(self, x):
        return self.derivadas[0](np.asarray(x, dtype=float))

    def derivada(self, ordem, x):
        x = np.asarray(x, dtype=float)
        if ordem < len(self.derivadas) and self.derivadas[ordem] is not None:
            return self.derivadas[ordem](x)
        # diferença central de ordem k com espaçamento 2h
        h = 1e-3
        pontos = x[..., None] + h * np.arange(-ordem, ordem + 1, 2)
        coefs = np.array([math.comb(ordem, i) * (-1) ** (ordem - i) for i in range(ordem + 1)])
        return (self.derivadas[0](pontos) * coefs).sum(axis=-1) / (2.0 * h) ** ordem


def _gaussiana(x):
    return np.exp(-x * x)


def _bump(x):
    dentro = np.abs(x) < 1.0
    seguro = np.where(dentro, x, 0.0)
    return np.where(dentro, np.exp(-1.0 / (1.0 - seguro * seguro)), 0.0)


def funcao_polinomial(coeficientes):
    """Polinômio de grau ≤ 3 com derivadas exatas."""
    if len(coeficientes) > 4:
        raise ConfigurationError(f"Polinômios de grau até 3: {coeficientes}")
    p = Polynomial(coeficientes)
    return FuncaoTeste(nome='poly', derivadas=tuple(p.deriv(k) for k in range(4)))


FUNCOES_TESTE = {
    'cos': FuncaoTeste('cos', (np.cos, lambda x: -np.sin(x), lambda x: -np.cos(x), np.sin)),
    'gaussian': FuncaoTeste('gaussian', (
        _gaussiana,
        lambda x: -2.0 * x * _gaussiana(x),
        lambda x: (4.0 * x * x - 2.0) * _gaussiana(x),
        lambda x: (-8.0 * x ** 3 + 12.0 * x) * _gaussiana(x),
    )),
    'xexp': FuncaoTeste('xexp', (
        lambda x: x * _gaussiana(x),
        lambda x: (1.0 - 2.0 * x * x) * _gaussiana(x),
        lambda x: (4.0 * x ** 3 - 6.0 * x) * _gaussiana(x),
        lambda x: (-8.0 * x ** 4 + 24.0 * x * x - 6.0) * _gaussiana(x),
    )),
    'bump': FuncaoTeste('bump', (_bump,)),
}


def funcao_teste(nome):
    """
    Função de teste embutida pelo nome.

    Raises:
        ConfigurationError: Se o nome for desconhecido
    """
    if nome not in FUNCOES_TESTE:
        raise ConfigurationError(f"Função de teste desconhecida: {nome} (opções: {sorted(FUNCOES_TESTE)})")
    return FUNCOES_TESTE[nome]


def crl_norm(funcao, L, r=3, raios=None, pontos_por_unidade=200):
    """
    ‖f‖_{C^r_L} = sup_a a^{−L} sup_{k≤r, |x|≤a} |D^k f(x)| nos raios dados.

    Args:
        funcao (FuncaoTeste): Função com derivadas
        L (float): Expoente de crescimento
        r (int): Maior ordem de derivada
        raios (iterable, optional): Raios a ≥ 1 (padrão Config.RAIOS)
        pontos_por_unidade (int): Densidade da grade de avaliação
    """
    raios = Config.RAIOS if raios is None else raios
    melhor = 0.0
    for a in raios:
        xs = np.linspace(-a, a, int(2 * a * pontos_por_unidade) + 1)
        sup = max(float(np.max(np.abs(funcao.derivada(k, xs)))) for k in range(r + 1))
        melhor = max(melhor, a ** (-L) * sup)
    return melhor
