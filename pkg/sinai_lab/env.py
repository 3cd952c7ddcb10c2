# -*- coding: utf-8 -*-
"""
Ambiente Aleatório de Sinai
===========================

Este módulo gera, reescala e decompõe o ambiente aleatório do passeio
de Sinai preguiçoso, incluindo os campos de ruído branco aproximado
derivados do ambiente reescalado.

Convenções:
- sítios inteiros x ∈ [−radius, radius], índice no vetor = x + radius
- σ² = 1 − ε e ω⁻ = σ² − ω⁺
- ξ_x = log(ω⁻(x)/ω⁺(x))
- ω^{+,δ} = σ²/(1 + exp(√δ ξ)), U̇^δ = 2ω^{+,δ} − σ², Ū^δ = −2U̇^δ
- Ū^δ = Ū₁^δ + Ū₂^δ com Ū₂^δ = E[Ū^δ] (um escalar por lei e δ)

Leis disponíveis para ξ:
- two-point: ω⁺ ∈ {σ²/2 − c, σ²/2 + c} com probabilidade 1/2
- scaled-beta: ω⁺ = σ²·B com B ~ Beta(a, b) restrita a [κ/σ², 1 − κ/σ²]
- Gaussiana (apenas como controle do acoplamento)

Autor: Sistema Sinai Lab
Data: 2024
"""

import logging
import math
from dataclasses import dataclass, field
from functools import cached_property, lru_cache

import numpy as np
from scipy import integrate, optimize, special, stats

from .config import Config
from .errors import ConfigurationError, GridAlignmentError, NumericalError, RangeError
from .rng import FLUXO_AMBIENTE, uniformes_por_sitio

logger = logging.getLogger(__name__)

TIPOS_AMBIENTE = ('two-point', 'scaled-beta')

# Tolerância padrão das quadraturas
TOL_QUADRATURA = Config.TOL_QUADRATURA


def _integrar(funcao, inicio, fim, contexto, tol=TOL_QUADRATURA):
    """
    Integra funcao em [inicio, fim] com scipy.integrate.quad.

    Raises:
        NumericalError: Se a quadratura não convergir na tolerância
    """
    resultado = integrate.quad(funcao, inicio, fim, epsabs=tol, epsrel=tol, limit=400, full_output=True)
    valor, erro = resultado[0], resultado[1]
    if len(resultado) > 3 or not np.isfinite(valor) or erro > 10 * tol * max(1.0, abs(valor)):
        raise NumericalError(
            "Quadratura não convergiu",
            {'contexto': contexto, 'valor': valor, 'erro_estimado': erro,
             'mensagem': resultado[3] if len(resultado) > 3 else ''}
        )
    return valor


class LeiDoisPontos:
    """
    Lei simétrica de dois pontos para ξ: ±ℓ com probabilidade 1/2.

    Os valores de ξ formam o reticulado ℓ·(2ℤ + paridade), o que torna
    as leis das somas parciais exatamente binomiais.
    """

    def __init__(self, ell):
        self.ell = float(ell)

    @property
    def passo_reticulado(self):
        return 2.0 * self.ell

    def cdf(self, x):
        x = np.asarray(x, dtype=float)
        return np.where(x < -self.ell, 0.0, np.where(x < self.ell, 0.5, 1.0))

    def ppf(self, u):
        u = np.asarray(u, dtype=float)
        return np.where(u <= 0.5, -self.ell, self.ell)

    def isf(self, p):
        """Quantil superior: isf(p) = ppf(1 − p)."""
        p = np.asarray(p, dtype=float)
        return np.where(p >= 0.5, -self.ell, self.ell)

    def esperanca(self, funcao):
        return 0.5 * (float(funcao(self.ell)) + float(funcao(-self.ell)))

    def variancia(self):
        return self.ell ** 2

    def momento(self, ordem):
        return self.esperanca(lambda x: x ** ordem)

    def __repr__(self):
        return f'<LeiDoisPontos ±{self.ell:.6g}>'


class LeiBetaEscalada:
    """
    Lei de ξ = log((1 − B)/B) com B ~ Beta(a, b) restrita a [lo, hi].

    ξ é decrescente em B, então quantis de ξ correspondem a quantis
    complementares de B.
    """

    passo_reticulado = None

    def __init__(self, a, b, lo, hi):
        self.a = float(a)
        self.b = float(b)
        self.lo = float(lo)
        self.hi = float(hi)
        self._beta = stats.beta(self.a, self.b)
        self._f_lo = float(self._beta.cdf(self.lo))
        self._f_hi = float(self._beta.cdf(self.hi))
        self._massa = self._f_hi - self._f_lo
        if self._massa <= 0:
            raise NumericalError("Restrição da lei Beta sem massa", {'lo': lo, 'hi': hi, 'a': a, 'b': b})

    def quantil_b(self, u):
        """Quantil de B na lei restrita."""
        u = np.asarray(u, dtype=float)
        valores = self._beta.ppf(self._f_lo + u * self._massa)
        return np.clip(valores, self.lo, self.hi)

    def cdf(self, x):
        limiar = np.clip(special.expit(-np.asarray(x, dtype=float)), self.lo, self.hi)
        return np.clip((self._f_hi - self._beta.cdf(limiar)) / self._massa, 0.0, 1.0)

    def ppf(self, u):
        return -special.logit(self.quantil_b(1.0 - np.asarray(u, dtype=float)))

    def isf(self, p):
        return -special.logit(self.quantil_b(np.asarray(p, dtype=float)))

    def esperanca(self, funcao, tol=TOL_QUADRATURA):
        integrando = lambda b: funcao(-special.logit(b)) * self._beta.pdf(b)
        return _integrar(integrando, self.lo, self.hi, f'Beta({self.a},{self.b})', tol) / self._massa

    def variancia(self):
        media = self.esperanca(lambda x: x)
        return self.esperanca(lambda x: x * x) - media ** 2

    def momento(self, ordem):
        return self.esperanca(lambda x: x ** ordem)

    def __repr__(self):
        return f'<LeiBetaEscalada a={self.a} b={self.b} [{self.lo:.6g}, {self.hi:.6g}]>'


class LeiGaussiana:
    """Lei normal centrada para ξ, usada como controle do acoplamento."""

    passo_reticulado = None

    def __init__(self, variancia):
        if variancia <= 0:
            raise ConfigurationError(f"Variância da lei Gaussiana deve ser positiva: {variancia}")
        self._variancia = float(variancia)
        self._normal = stats.norm(scale=math.sqrt(variancia))

    def cdf(self, x):
        return self._normal.cdf(x)

    def ppf(self, u):
        return self._normal.ppf(u)

    def isf(self, p):
        return self._normal.isf(p)

    def esperanca(self, funcao, tol=TOL_QUADRATURA):
        integrando = lambda x: funcao(x) * self._normal.pdf(x)
        return _integrar(integrando, -np.inf, np.inf, 'Gaussiana', tol)

    def variancia(self):
        return self._variancia

    def momento(self, ordem):
        if ordem % 2:
            return 0.0
        return self._variancia ** (ordem / 2) * float(special.factorial2(ordem - 1))

    def __repr__(self):
        return f'<LeiGaussiana var={self._variancia:.6g}>'


@lru_cache(maxsize=64)
def _clamp_balanceado(a, b, lo, hi):
    """
    Ajusta um dos limites da restrição para que E[ξ] = 0.

    Quando a = b a lei é simétrica e os limites nominais já servem.
    Caso contrário o limite do lado com excesso de massa é movido para
    dentro até anular a média (raiz por brentq).
    """
    if a == b:
        return lo, hi

    def media(lo_, hi_):
        return LeiBetaEscalada(a, b, lo_, hi_).esperanca(lambda x: x)

    media_nominal = media(lo, hi)
    if media_nominal == 0.0:
        return lo, hi

    folga = 1e-9
    if media_nominal > 0:
        # ξ grande quando B é pequeno: sobe o limite inferior
        novo_lo = optimize.brentq(lambda t: media(t, hi), lo, hi - folga, xtol=1e-15, rtol=4 * np.finfo(float).eps)
        return novo_lo, hi
    novo_hi = optimize.brentq(lambda t: media(lo, t), lo + folga, hi, xtol=1e-15, rtol=4 * np.finfo(float).eps)
    return lo, novo_hi


@dataclass(frozen=True)
class EnvironmentSpec:
    """
    Especificação da lei do ambiente.

    Attributes:
        epsilon (float): Probabilidade de ficar parado ε ∈ (0, 1)
        kappa_ell (float): Margem de elipticidade κ_ell ∈ (0, (1 − ε)/2)
        kind (str): 'two-point' ou 'scaled-beta'
        half_gap (float): c da lei de dois pontos (ω⁺ = σ²/2 ± c)
        beta_a (float): Primeiro parâmetro de forma da lei Beta
        beta_b (float, optional): Segundo parâmetro (None = simétrica)
    """

    epsilon: float
    kappa_ell: float
    kind: str = 'two-point'
    half_gap: float = 0.1
    beta_a: float = 2.0
    beta_b: float = None

    def __post_init__(self):
        self._validar_dados()

    def _validar_dados(self):
        """
        Valida os parâmetros da especificação.

        Raises:
            ConfigurationError: Se algum parâmetro estiver fora do intervalo
        """
        if not (0.0 < self.epsilon < 1.0):
            raise ConfigurationError(f"ε deve estar em (0, 1): {self.epsilon}")
        if not (0.0 < self.kappa_ell < (1.0 - self.epsilon) / 2.0):
            raise ConfigurationError(f"κ_ell deve estar em (0, (1 − ε)/2): {self.kappa_ell}")
        if self.kind not in TIPOS_AMBIENTE:
            raise ConfigurationError(f"Tipo de ambiente desconhecido: {self.kind}")
        if self.kind == 'two-point':
            limite = self.sigma2 / 2.0 - self.kappa_ell
            if not (0.0 < self.half_gap <= limite):
                raise ConfigurationError(
                    f"c da lei de dois pontos deve estar em (0, σ²/2 − κ_ell] = (0, {limite:.6g}]: {self.half_gap}"
                )
        else:
            if self.beta_a <= 0 or (self.beta_b is not None and self.beta_b <= 0):
                raise ConfigurationError(f"Parâmetros da Beta devem ser positivos: a={self.beta_a}, b={self.beta_b}")

    @property
    def sigma2(self):
        """σ² = 1 − ε."""
        return 1.0 - self.epsilon

    @property
    def simetrica(self):
        return self.kind == 'two-point' or self.beta_b is None or self.beta_b == self.beta_a

    @cached_property
    def lei_xi(self):
        """Lei de ξ correspondente à especificação."""
        if self.kind == 'two-point':
            s2 = self.sigma2
            ell = math.log((s2 / 2.0 + self.half_gap) / (s2 / 2.0 - self.half_gap))
            return LeiDoisPontos(ell)
        b = self.beta_a if self.beta_b is None else self.beta_b
        lo = self.kappa_ell / self.sigma2
        lo, hi = _clamp_balanceado(float(self.beta_a), float(b), lo, 1.0 - lo)
        return LeiBetaEscalada(self.beta_a, b, lo, hi)

    def omega_de_uniforme(self, u):
        """
        Converte uniformes em valores de ω⁺ (um uniforme por sítio).

        Args:
            u (numpy.ndarray): Uniformes em [0, 1)

        Returns:
            numpy.ndarray: ω⁺ por sítio
        """
        u = np.asarray(u, dtype=float)
        s2 = self.sigma2
        if self.kind == 'two-point':
            return np.where(u < 0.5, s2 / 2.0 - self.half_gap, s2 / 2.0 + self.half_gap)
        return s2 * self.lei_xi.quantil_b(u)

    def to_dict(self):
        return {
            'epsilon': self.epsilon,
            'kappa_ell': self.kappa_ell,
            'kind': self.kind,
            'half_gap': self.half_gap,
            'beta_a': self.beta_a,
            'beta_b': self.beta_b,
        }


def xi_law(spec):
    """Retorna a lei de ξ da especificação (CDF, quantil, momentos)."""
    return spec.lei_xi


def sigma1_squared(spec):
    """σ₁² = Var(ξ)."""
    return spec.lei_xi.variancia()


def tau_squared(spec):
    """τ² = σ⁴σ₁², variância por unidade de comprimento do Browniano limite."""
    return spec.sigma2 ** 2 * sigma1_squared(spec)


def u_bar2_constant(spec):
    """
    Coeficiente c_σ de Ū₂^δ = c_σ δ^{3/2} + o(δ^{3/2}).

    Vem da expansão tanh(y) = y − y³/3 + … com E[ξ] = 0:
    c_σ = −σ² E[ξ³] / 12.
    """
    return -spec.sigma2 * spec.lei_xi.momento(3) / 12.0


def u_bar2_exact(spec, delta):
    """
    Ū₂^δ = E[Ū^δ] = 2σ² E[tanh(√δ ξ/2)].

    Analítico (zero) para leis simétricas de dois pontos, quadratura
    de alta ordem para a lei Beta.

    Raises:
        NumericalError: Se a quadratura não convergir
    """
    if spec.kind == 'two-point':
        return 0.0
    raiz = math.sqrt(delta)
    return 2.0 * spec.sigma2 * spec.lei_xi.esperanca(lambda x: math.tanh(raiz * x / 2.0))


@dataclass(frozen=True, eq=False)
class Environment:
    """
    Realização do ambiente ω⁺ numa janela de sítios.

    Attributes:
        spec (EnvironmentSpec): Lei do ambiente
        radius (int): Raio da janela em sítios
        seed (int): Semente usada na amostragem
        omega_plus (numpy.ndarray): ω⁺(x) para x ∈ [−radius, radius]
    """

    spec: EnvironmentSpec
    radius: int
    seed: int
    omega_plus: np.ndarray = field(repr=False)

    def __post_init__(self):
        self._validar_dados()

    def _validar_dados(self):
        if self.radius < 0:
            raise ConfigurationError(f"Raio da janela deve ser não negativo: {self.radius}")
        if self.omega_plus.shape != (2 * self.radius + 1,):
            raise ConfigurationError(
                f"Vetor ω⁺ com tamanho {self.omega_plus.shape} incompatível com raio {self.radius}"
            )
        self.omega_plus.setflags(write=False)

    @property
    def sigma2(self):
        return self.spec.sigma2

    @property
    def omega_minus(self):
        return self.spec.sigma2 - self.omega_plus

    @property
    def sitios(self):
        return np.arange(-self.radius, self.radius + 1)

    def indice(self, x):
        """
        Índice do sítio x no vetor.

        Raises:
            RangeError: Se x estiver fora da janela
        """
        x = int(x)
        if abs(x) > self.radius:
            raise RangeError(f"Sítio {x} fora da janela [−{self.radius}, {self.radius}]")
        return x + self.radius

    def xi_valores(self):
        """ξ em todos os sítios da janela."""
        return np.log(self.omega_minus / self.omega_plus)

    def to_dict(self):
        return {
            'spec': self.spec.to_dict(),
            'radius': self.radius,
            'seed': self.seed,
            'omega_plus': self.omega_plus.tolist(),
        }

    def __repr__(self):
        return f'<Environment {self.spec.kind} raio={self.radius} semente={self.seed}>'


def sample_environment(spec, radius, seed):
    """
    Amostra ω⁺ i.i.d. por sítio, determinístico em (semente, sítio).

    Args:
        spec (EnvironmentSpec): Lei do ambiente
        radius (int): Raio da janela (sítios)
        seed (int): Semente

    Returns:
        Environment: Ambiente amostrado

    Raises:
        ConfigurationError: Se o raio for negativo
    """
    if radius < 0:
        raise ConfigurationError(f"Raio da janela deve ser não negativo: {radius}")

    uniformes = uniformes_por_sitio(seed, FLUXO_AMBIENTE, -radius, radius)
    omega = np.array(spec.omega_de_uniforme(uniformes), dtype=float)
    logger.debug(f"Ambiente {spec.kind} amostrado: raio={radius}, semente={seed}")
    return Environment(spec=spec, radius=int(radius), seed=int(seed), omega_plus=omega)


def xi(env, x):
    """ξ_x = log(ω⁻(x)/ω⁺(x)) no sítio x."""
    i = env.indice(x)
    w = float(env.omega_plus[i])
    return math.log((env.sigma2 - w) / w)


def mirror_environment(env):
    """
    Reflexão x ↦ −x do ambiente.

    O passeio no ambiente refletido tem a lei de −X: ω⁺'(x) = ω⁻(−x).
    """
    refletido = np.array(env.sigma2 - env.omega_plus[::-1])
    return Environment(spec=env.spec, radius=env.radius, seed=env.seed, omega_plus=refletido)


def symmetrize_environment(env):
    """
    Ambiente invariante por reflexão: mantém x > 0, reflete em x < 0 e
    usa ω⁺(0) = σ²/2.
    """
    r = env.radius
    omega = np.array(env.omega_plus)
    omega[:r] = env.sigma2 - env.omega_plus[:r:-1]
    omega[r] = env.sigma2 / 2.0
    return Environment(spec=env.spec, radius=r, seed=env.seed, omega_plus=omega)


@dataclass(frozen=True)
class NoiseFields:
    """Campos U̇^δ, Ū^δ, Ū₁^δ por sítio e o escalar Ū₂^δ."""

    u_dot: np.ndarray
    u_bar: np.ndarray
    u_bar1: np.ndarray
    u_bar2: float


@dataclass(frozen=True, eq=False)
class RescaledEnvironment:
    """
    Ambiente reescalado na grade δℤ.

    Attributes:
        spec (EnvironmentSpec): Lei de origem (fornece ε e σ²)
        delta (float): Passo da grade
        radius (int): Raio da janela em unidades de δ
        omega_plus (numpy.ndarray): ω^{+,δ}(kδ) para k ∈ [−radius, radius]
        u_bar2 (float): Ū₂^δ = E[Ū^δ]
        seed (int, optional): Semente de origem
        origem (str): 'ambiente', 'acoplado' ou 'ruido'
    """

    spec: EnvironmentSpec
    delta: float
    radius: int
    omega_plus: np.ndarray = field(repr=False)
    u_bar2: float = 0.0
    seed: int = None
    origem: str = 'ambiente'

    def __post_init__(self):
        self._validar_dados()

    def _validar_dados(self):
        if not (0.0 < self.delta <= 1.0):
            raise ConfigurationError(f"δ deve estar em (0, 1]: {self.delta}")
        if self.omega_plus.shape != (2 * self.radius + 1,):
            raise ConfigurationError(
                f"Vetor ω^(+,δ) com tamanho {self.omega_plus.shape} incompatível com raio {self.radius}"
            )
        if not (np.all(self.omega_plus > 0.0) and np.all(self.omega_plus < self.spec.sigma2)):
            raise NumericalError("ω^(+,δ) fora de (0, σ²)", {'delta': self.delta, 'origem': self.origem})
        self.omega_plus.setflags(write=False)

    @property
    def epsilon(self):
        return self.spec.epsilon

    @property
    def sigma2(self):
        return self.spec.sigma2

    @property
    def omega_minus(self):
        return self.spec.sigma2 - self.omega_plus

    @property
    def sitios(self):
        return np.arange(-self.radius, self.radius + 1)

    @property
    def posicoes(self):
        return self.sitios * self.delta

    @cached_property
    def campos(self):
        return noise_fields(self)

    @property
    def u_dot(self):
        return self.campos.u_dot

    @property
    def u_bar(self):
        return self.campos.u_bar

    @property
    def u_bar1(self):
        return self.campos.u_bar1

    def sitio(self, x):
        """
        Converte a posição x ∈ δℤ no sítio inteiro x/δ.

        Raises:
            GridAlignmentError: Se x não estiver na grade
            RangeError: Se x estiver fora da janela
        """
        k = round(x / self.delta)
        if abs(k * self.delta - x) > 1e-9 * max(1.0, abs(x)):
            raise GridAlignmentError(f"Posição {x} fora da grade δℤ com δ={self.delta}")
        if abs(k) > self.radius:
            raise RangeError(f"Posição {x} fora da janela de raio {self.radius * self.delta}")
        return int(k)

    def indice(self, x):
        return self.sitio(x) + self.radius

    def __repr__(self):
        return f'<RescaledEnvironment δ={self.delta} raio={self.radius} origem={self.origem}>'


def rescaled_from_xi(spec, xi_valores, delta, seed=None, origem='ambiente'):
    """
    Constrói o ambiente reescalado a partir de valores de ξ por sítio.

    ω^{+,δ} = σ²/(1 + exp(√δ ξ)) é avaliado como σ²/2·(1 − tanh(√δ ξ/2)),
    que é exatamente σ²/2 quando ξ = 0.
    """
    xi_valores = np.asarray(xi_valores, dtype=float)
    if xi_valores.size % 2 == 0:
        raise ConfigurationError(f"Campo ξ precisa de tamanho ímpar (janela simétrica): {xi_valores.size}")
    s2 = spec.sigma2
    omega = s2 / 2.0 * (1.0 - np.tanh(math.sqrt(delta) * xi_valores / 2.0))
    return RescaledEnvironment(
        spec=spec, delta=float(delta), radius=(xi_valores.size - 1) // 2,
        omega_plus=omega, u_bar2=u_bar2_exact(spec, delta), seed=seed, origem=origem,
    )


def rescaled_from_noise(spec, u_bar, delta):
    """
    Ambiente reescalado cujo campo Ū^δ é dado diretamente.

    Usado para a referência dirigida pelos incrementos do Browniano:
    ω^{+,δ} = (σ² − Ū/2)/2 e Ū₂ = 0.

    Raises:
        NumericalError: Se algum ω^{+,δ} sair de (0, σ²)
    """
    u_bar = np.asarray(u_bar, dtype=float)
    omega = (spec.sigma2 - u_bar / 2.0) / 2.0
    return RescaledEnvironment(
        spec=spec, delta=float(delta), radius=(u_bar.size - 1) // 2,
        omega_plus=omega, u_bar2=0.0, origem='ruido',
    )


def rescale_environment(env, delta):
    """
    Reescala o ambiente: ω^{+,δ}(kδ) = σ²/(1 + exp(√δ ξ_k)).

    Args:
        env (Environment): Ambiente original
        delta (float): Passo δ ∈ (0, 1]

    Returns:
        RescaledEnvironment: Ambiente na grade δℤ

    Raises:
        ConfigurationError: Se δ estiver fora de (0, 1]
    """
    if not (0.0 < delta <= 1.0):
        raise ConfigurationError(f"δ deve estar em (0, 1]: {delta}")
    if math.log2(delta) % 1:
        logger.debug(f"δ={delta} não é potência de 2")

    if delta == 1.0:
        # δ = 1 devolve o próprio ambiente
        return RescaledEnvironment(
            spec=env.spec, delta=1.0, radius=env.radius, omega_plus=np.array(env.omega_plus),
            u_bar2=u_bar2_exact(env.spec, 1.0), seed=env.seed,
        )
    return rescaled_from_xi(env.spec, env.xi_valores(), delta, seed=env.seed)


def noise_fields(renv):
    """
    Calcula (U̇^δ, Ū^δ, Ū₁^δ, Ū₂^δ).

    Ū^δ = −2U̇^δ é exato (multiplicação por 2); Ū₁^δ = Ū^δ − Ū₂^δ.
    """
    u_dot = 2.0 * renv.omega_plus - renv.sigma2
    u_bar = -2.0 * u_dot
    u_bar1 = u_bar - renv.u_bar2
    for vetor in (u_dot, u_bar, u_bar1):
        vetor.setflags(write=False)
    return NoiseFields(u_dot=u_dot, u_bar=u_bar, u_bar1=u_bar1, u_bar2=float(renv.u_bar2))


def variance_ratio(renv):
    """
    Razão empírica Var(Ū^δ)/(δ τ²), que tende a 1 quando δ → 0.
    """
    tau2 = tau_squared(renv.spec)
    return float(np.var(renv.u_bar)) / (renv.delta * tau2)


@dataclass(frozen=True, eq=False)
class PiecewiseLinearPath:
    """
    Caminho linear por partes ancorado nos pontos kδ.

    Attributes:
        delta (float): Passo da grade
        radius (int): Raio em unidades de δ
        anchors (numpy.ndarray): Valores nos pontos kδ, k ∈ [−radius, radius]
    """

    delta: float
    radius: int
    anchors: np.ndarray = field(repr=False)

    @property
    def xs(self):
        return np.arange(-self.radius, self.radius + 1) * self.delta

    def __call__(self, x):
        """
        Avalia o caminho por interpolação linear.

        Raises:
            RangeError: Se algum ponto estiver fora da janela
        """
        x = np.asarray(x, dtype=float)
        limite = self.radius * self.delta * (1.0 + 1e-12)
        if np.any(np.abs(x) > limite):
            raise RangeError(f"Avaliação fora da janela [−{self.radius * self.delta}, {self.radius * self.delta}]")
        valores = np.interp(x, self.xs, self.anchors)
        return float(valores) if valores.ndim == 0 else valores


def interpolate_noise(campo, delta):
    """
    Soma acumulada do campo, interpolada linearmente.

    Û(0) = 0 e Û(kδ) − Û((k−1)δ) = campo(kδ); para k < 0 vale a soma
    espelhada Û(kδ) = −Σ_{k<j≤0} campo(jδ).

    Args:
        campo (numpy.ndarray): Valores por sítio em [−r, r] (tamanho ímpar)
        delta (float): Passo da grade

    Returns:
        PiecewiseLinearPath: Caminho Û
    """
    campo = np.asarray(campo, dtype=float)
    if campo.size % 2 == 0:
        raise ConfigurationError(f"Campo precisa de tamanho ímpar com origem no centro: {campo.size}")
    r = (campo.size - 1) // 2
    positivos = np.cumsum(campo[r + 1:])
    negativos = -np.cumsum(campo[r:0:-1])
    ancoras = np.concatenate([negativos[::-1], [0.0], positivos])
    return PiecewiseLinearPath(delta=float(delta), radius=r, anchors=ancoras)
