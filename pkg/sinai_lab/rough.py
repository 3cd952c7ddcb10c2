# -*- coding: utf-8 -*-
"""
Caminhos Rugosos em Grades
==========================

Estruturas discretas de caminhos rugosos escalares e caminhos
controlados: levantamento canônico, normas de Hölder exatas (ou em
banda, sinalizadas), normas ponderadas κ_{α,χ}, distância ρ_{α,χ},
integral rugosa discreta, somas trapezoidais, verificação do lema de
costura discreto e as normas Θ e distância controlada com pesos
E^{θ,λ}(a,t) = exp(λt + θa + θat) e Q(a,t) = a^χ (a^{β/2} + t^{−β/2}).

Convenções:
- X¹(x, y) = X(y) − X(x) e X²(x, y) = ½ X¹(x, y)²
- resto R(x, y) = v(y) − v(x) − ∂v(x) X¹(x, y)
- normas parabólicas: ⟦f⟧ = ‖f‖_∞ + a^{−β/2} ‖f‖_{β/2,β}, com o sup
  de pares mistos igual ao máximo dos sups puramente temporal e
  puramente espacial
- constante de costura c_μ = 2^μ ζ(μ)

Autor: Sistema Sinai Lab
Data: 2024
"""

import logging
import math
from dataclasses import dataclass, field

import numpy as np
from scipy import special

from .config import Config
from .errors import ConfigurationError, DomainError, GridAlignmentError, RangeError

logger = logging.getLogger(__name__)

# Folga relativa ao comparar posições de grade
_TOL_GRADE = 1e-9


# ----------------------------------------------------------------------
# Varredura de Hölder
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class HolderScan:
    """Resultado de uma varredura de Hölder (exata ou em banda)."""

    valor: float
    expoente: float
    pontos: int
    exato: bool

    def __float__(self):
        return float(self.valor)


def _lag_maximo(pontos, max_pontos):
    if pontos <= max_pontos:
        return pontos - 1
    return max(1, pontos // 4)


def _varrer(incremento, passo, expoente, janelas, max_pontos):
    """
    Sups de |incremento(g)|/(g·passo)^expoente sobre pares dentro de
    cada janela de índices.

    Args:
        incremento (callable): g ↦ incrementos dos pares (i, i+g) no
            último eixo (tamanho n − g)
        passo (float): Passo da grade
        expoente (float): Expoente de Hölder
        janelas (list[tuple]): Pares (lo, hi) de índices inclusivos
        max_pontos (int): Acima disto a janela usa banda |j − i| ≤ n/4

    Returns:
        tuple: (sups com forma eixos_iniciais + (n_janelas,), lista de
        flags de exatidão)
    """
    pontos = [hi - lo + 1 for lo, hi in janelas]
    lags = [_lag_maximo(p, max_pontos) for p in pontos]
    sups = None

    for g in range(1, max(lags, default=0) + 1):
        razao = np.abs(incremento(g)) / (g * passo) ** expoente
        if sups is None:
            sups = np.zeros(razao.shape[:-1] + (len(janelas),))
        for w, (lo, hi) in enumerate(janelas):
            if g > lags[w] or hi - g < lo:
                continue
            trecho = razao[..., lo:hi - g + 1].max(axis=-1)
            sups[..., w] = np.maximum(sups[..., w], trecho)

    if sups is None:
        sups = np.zeros(np.shape(incremento(1))[:-1] + (len(janelas),))
    return sups, [p <= max_pontos for p in pontos]


def _incremento_de(fonte):
    if callable(fonte):
        return fonte
    valores = np.asarray(fonte, dtype=float)
    return lambda g: valores[..., g:] - valores[..., :-g]


def holder_scan(fonte, expoente, passo, n=None, max_pontos=None):
    """
    Varredura da norma de Hölder sup |incr(x, y)|/|y − x|^expoente.

    Args:
        fonte (numpy.ndarray or callable): Valores do caminho (o
            incremento é a diferença) ou função g ↦ incrementos dos
            pares (i, i+g)
        expoente (float): Expoente em (0, 1]
        passo (float): Passo da grade
        n (int, optional): Número de pontos (obrigatório se fonte for
            função)
        max_pontos (int, optional): Limite da varredura exata

    Returns:
        HolderScan: Valor e flag de exatidão

    Raises:
        DomainError: Se o expoente estiver fora de (0, 1]
    """
    if not (0.0 < expoente <= 1.0):
        raise DomainError(f"Expoente de Hölder fora de (0, 1]: {expoente}")
    max_pontos = Config.MAX_PONTOS_EXATO if max_pontos is None else max_pontos
    if n is None:
        if callable(fonte):
            raise ConfigurationError("Número de pontos obrigatório para incrementos dados por função")
        n = np.shape(fonte)[-1]

    sups, exatos = _varrer(_incremento_de(fonte), passo, expoente, [(0, n - 1)], max_pontos)
    if not exatos[0]:
        logger.warning(f"Norma de Hölder em banda: {n} pontos excede {max_pontos}")
    return HolderScan(valor=float(np.max(sups)), expoente=expoente, pontos=n, exato=exatos[0])


def holder_norm(fonte, expoente, passo, n=None, max_pontos=None):
    """Norma de Hölder discreta (ver holder_scan)."""
    return holder_scan(fonte, expoente, passo, n, max_pontos).valor


# ----------------------------------------------------------------------
# Caminhos rugosos e controlados
# ----------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class GridRoughPath:
    """
    Caminho rugoso escalar numa grade uniforme com levantamento canônico.

    Attributes:
        passo (float): Passo da grade
        ancoras (numpy.ndarray): Valores X(x_i)
        origem (float): Posição do primeiro ponto
    """

    passo: float
    ancoras: np.ndarray = field(repr=False)
    origem: float = 0.0

    def __post_init__(self):
        self._validar_dados()

    def _validar_dados(self):
        if self.passo <= 0:
            raise ConfigurationError(f"Passo da grade deve ser positivo: {self.passo}")
        if self.ancoras.ndim != 1 or self.ancoras.size < 2:
            raise ConfigurationError("Caminho rugoso precisa de pelo menos 2 âncoras")
        self.ancoras.setflags(write=False)

    @property
    def n(self):
        return self.ancoras.size

    @property
    def xs(self):
        return self.origem + self.passo * np.arange(self.n)

    def indice(self, x):
        """
        Índice do ponto de grade x.

        Raises:
            GridAlignmentError: Se x não estiver na grade
            RangeError: Se x estiver fora da janela
        """
        bruto = (x - self.origem) / self.passo
        i = int(round(bruto))
        if abs(i - bruto) > _TOL_GRADE * max(1.0, abs(bruto)):
            raise GridAlignmentError(f"Posição {x} fora da grade de passo {self.passo}")
        if not (0 <= i < self.n):
            raise RangeError(f"Posição {x} fora da janela [{self.xs[0]}, {self.xs[-1]}]")
        return i

    def janela(self, a):
        """
        Índices (lo, hi) dos pontos em [−a, a].

        Raises:
            RangeError: Se [−a, a] não estiver contido na grade
        """
        folga = _TOL_GRADE * max(1.0, a)
        if self.xs[0] > -a + folga or self.xs[-1] < a - folga:
            raise RangeError(f"Raio {a} excede a janela [{self.xs[0]}, {self.xs[-1]}]")
        lo = int(math.ceil((-a - self.origem) / self.passo - _TOL_GRADE))
        hi = int(math.floor((a - self.origem) / self.passo + _TOL_GRADE))
        return lo, hi

    def nivel1(self, i, j):
        return self.ancoras[j] - self.ancoras[i]

    def nivel2(self, i, j):
        return 0.5 * (self.ancoras[j] - self.ancoras[i]) ** 2

    def incremento1(self, g):
        return self.ancoras[g:] - self.ancoras[:-g]

    def incremento2(self, g):
        return 0.5 * self.incremento1(g) ** 2

    def mesma_grade(self, outro):
        return (
            self.n == outro.n
            and abs(self.passo - outro.passo) <= _TOL_GRADE * self.passo
            and abs(self.origem - outro.origem) <= _TOL_GRADE * max(1.0, abs(self.origem))
        )

    def chen_residual(self):
        """
        max |X²(s,t) − X²(s,u) − X²(u,t) − X¹(s,u)X¹(u,t)| sobre todas
        as triplas s < u < t da grade.
        """
        X = self.ancoras
        pior = 0.0
        for u in range(1, self.n - 1):
            a = X[u] - X[:u]
            b = X[u + 1:] - X[u]
            total = 0.5 * (X[u + 1:][None, :] - X[:u][:, None]) ** 2
            residuo = total - 0.5 * a[:, None] ** 2 - 0.5 * b[None, :] ** 2 - a[:, None] * b[None, :]
            pior = max(pior, float(np.abs(residuo).max()))
        return pior


def lift(valores, passo, origem=None):
    """
    Levantamento canônico X² = ½(X¹)² de um caminho escalar.

    Args:
        valores (array-like): Âncoras do caminho
        passo (float): Passo da grade
        origem (float, optional): Posição do primeiro ponto; padrão
            centraliza a grade em 0

    Returns:
        GridRoughPath: Caminho levantado
    """
    valores = np.array(valores, dtype=float)
    if origem is None:
        origem = -0.5 * (valores.size - 1) * passo
    return GridRoughPath(passo=float(passo), ancoras=valores, origem=float(origem))


def kappa_weighted(rp, alpha, chi, radii, max_pontos=None):
    """
    κ_{α,χ} = sup_a (‖X¹‖_α/a^χ + ‖X²‖_{2α}/a^{2χ}) sobre os raios dados.

    Raises:
        RangeError: Se algum raio exceder a janela
    """
    max_pontos = Config.MAX_PONTOS_EXATO if max_pontos is None else max_pontos
    janelas = [rp.janela(a) for a in radii]
    h1, exatos = _varrer(rp.incremento1, rp.passo, alpha, janelas, max_pontos)
    h2, _ = _varrer(rp.incremento2, rp.passo, 2 * alpha, janelas, max_pontos)
    if not all(exatos):
        logger.warning("κ_{α,χ} calculado com varredura em banda")
    a = np.asarray(radii, dtype=float)
    return float(np.max(h1 / a ** chi + h2 / a ** (2 * chi)))


def rho_report(rpA, rpB, alpha, chi, radii, max_pontos=None):
    """
    Componentes de ρ_{α,χ}(A, B) por raio.

    Returns:
        dict: {'rho', 'raios', 'nivel1', 'nivel2', 'por_raio', 'exato'}

    Raises:
        GridAlignmentError: Se as grades forem diferentes
    """
    if not rpA.mesma_grade(rpB):
        raise GridAlignmentError(
            f"Caminhos em grades diferentes: (n={rpA.n}, passo={rpA.passo}) vs (n={rpB.n}, passo={rpB.passo})"
        )
    max_pontos = Config.MAX_PONTOS_EXATO if max_pontos is None else max_pontos
    janelas = [rpA.janela(a) for a in radii]
    d1 = lambda g: rpA.incremento1(g) - rpB.incremento1(g)
    d2 = lambda g: rpA.incremento2(g) - rpB.incremento2(g)
    h1, exatos = _varrer(d1, rpA.passo, alpha, janelas, max_pontos)
    h2, _ = _varrer(d2, rpA.passo, 2 * alpha, janelas, max_pontos)

    a = np.asarray(radii, dtype=float)
    nivel1 = h1 / a ** chi
    nivel2 = h2 / a ** (2 * chi)
    por_raio = nivel1 + nivel2
    return {
        'rho': float(por_raio.max()),
        'raios': [float(r) for r in radii],
        'nivel1': nivel1.tolist(),
        'nivel2': nivel2.tolist(),
        'por_raio': por_raio.tolist(),
        'exato': all(exatos),
    }


def rho_distance(rpA, rpB, alpha, chi, radii, max_pontos=None):
    """Distância ρ_{α,χ} entre dois caminhos rugosos na mesma grade."""
    return rho_report(rpA, rpB, alpha, chi, radii, max_pontos)['rho']


@dataclass(frozen=True, eq=False)
class GridControlledPath:
    """
    Caminho v controlado por X com derivada de Gubinelli declarada ∂v.

    Attributes:
        caminho (GridRoughPath): Caminho de referência X
        v (numpy.ndarray): Valores v(x_i)
        dv (numpy.ndarray): Derivada declarada ∂v(x_i)
    """

    caminho: GridRoughPath
    v: np.ndarray = field(repr=False)
    dv: np.ndarray = field(repr=False)

    def __post_init__(self):
        self._validar_dados()

    def _validar_dados(self):
        n = self.caminho.n
        if np.shape(self.v) != (n,) or np.shape(self.dv) != (n,):
            raise ConfigurationError(
                f"v e ∂v devem ter {n} valores: {np.shape(self.v)}, {np.shape(self.dv)}"
            )

    @property
    def passo(self):
        return self.caminho.passo

    def resto(self, g):
        """R(x_i, x_{i+g}) para todos os i."""
        return self.v[g:] - self.v[:-g] - self.dv[:-g] * self.caminho.incremento1(g)

    def resto_em(self, i, j):
        return self.v[j] - self.v[i] - self.dv[i] * self.caminho.nivel1(i, j)


def _intervalo(X, x, y):
    i, j = X.indice(x), X.indice(y)
    if i > j:
        raise DomainError(f"Intervalo com x > y: [{x}, {y}]")
    return i, j


def rough_integral(Y, X, x, y):
    """
    Integral rugosa discreta Σ Y(u)X¹(u,v) + ∂Y(u)X²(u,v) sobre pares
    adjacentes de [x, y].

    Args:
        Y (GridControlledPath): Integrando controlado
        X (GridRoughPath): Integrador
        x (float): Início (ponto de grade)
        y (float): Fim (ponto de grade), x ≤ y

    Returns:
        float: Valor da soma
    """
    i, j = _intervalo(X, x, y)
    if j == i:
        return 0.0
    d1 = np.diff(X.ancoras[i:j + 1])
    termos = Y.v[i:j] * d1 + Y.dv[i:j] * 0.5 * d1 ** 2
    return math.fsum(termos)


def _valores(Y):
    return Y.v if isinstance(Y, GridControlledPath) else np.asarray(Y, dtype=float)


def trapezoidal_sum(Y, X, x, y):
    """Soma trapezoidal Σ ½(Y(u) + Y(v)) X¹(u,v) sobre [x, y]."""
    i, j = _intervalo(X, x, y)
    if j == i:
        return 0.0
    v = _valores(Y)[i:j + 1]
    return math.fsum(0.5 * (v[:-1] + v[1:]) * np.diff(X.ancoras[i:j + 1]))


def germ(Y, X, x, y):
    """Germe de Gubinelli Y(x)X¹(x,y) + ∂Y(x)X²(x,y)."""
    i, j = _intervalo(X, x, y)
    return float(Y.v[i] * X.nivel1(i, j) + Y.dv[i] * X.nivel2(i, j))


def trapezoid_minus_rough(Y, X, x, y):
    """
    Termos ½R(u,v)X¹(u,v) cuja soma é trapezoidal_sum − rough_integral.

    Returns:
        numpy.ndarray: Um termo por par adjacente de [x, y]
    """
    i, j = _intervalo(X, x, y)
    return 0.5 * Y.resto(1)[i:j] * X.incremento1(1)[i:j]


def sewing_constant(mu):
    """
    c_μ = 2^μ ζ(μ).

    Raises:
        DomainError: Se μ ≤ 1
    """
    if mu <= 1.0:
        raise DomainError(f"Lema de costura exige μ > 1: {mu}")
    return 2.0 ** mu * float(special.zeta(mu, 1))


@dataclass(frozen=True)
class GermBound:
    """Cota explícita de |trapezoidal_sum − germe| em [x, y]."""

    diferenca: float
    cota: float
    coef_resto: float
    coef_derivada: float
    constante: float

    @property
    def passou(self):
        return self.diferenca <= self.cota * (1.0 + 1e-9) + 1e-14


def germ_bound(Y, X, alpha, beta, x, y):
    """
    Compara |trapezoidal_sum − germe| com a cota obtida das normas.

    A cota é (c_{α+2β} + ½)‖R‖_{2β}‖X¹‖_α L^{α+2β}
    + c_{2α+β}‖∂Y‖_β‖X²‖_{2α} L^{2α+β}, com L = y − x e todas as normas
    medidas em [x, y].

    Args:
        Y (GridControlledPath): Integrando controlado por X
        X (GridRoughPath): Integrador
        alpha (float): Regularidade de X
        beta (float): Regularidade de Y

    Returns:
        GermBound: Diferença, cota e coeficientes
    """
    i, j = _intervalo(X, x, y)
    if j - i < 1:
        return GermBound(0.0, 0.0, 0.0, 0.0, 0.0)
    passo = X.passo
    sub = slice(i, j + 1)
    X_sub = GridRoughPath(passo=passo, ancoras=np.array(X.ancoras[sub]), origem=float(X.xs[i]))
    Y_sub = GridControlledPath(caminho=X_sub, v=Y.v[sub], dv=Y.dv[sub])
    n = j - i + 1
    norma_x1 = holder_norm(X_sub.ancoras, alpha, passo)
    norma_x2 = holder_norm(X_sub.incremento2, 2 * alpha, passo, n=n)
    norma_resto = holder_norm(Y_sub.resto, 2 * beta, passo, n=n)
    norma_dy = holder_norm(Y_sub.dv, beta, passo)

    L = y - x
    coef_resto = (sewing_constant(alpha + 2 * beta) + 0.5) * norma_resto * norma_x1
    coef_derivada = sewing_constant(2 * alpha + beta) * norma_dy * norma_x2
    cota = coef_resto * L ** (alpha + 2 * beta) + coef_derivada * L ** (2 * alpha + beta)
    diferenca = abs(trapezoidal_sum(Y, X, x, y) - germ(Y, X, x, y))
    return GermBound(
        diferenca=diferenca, cota=cota, coef_resto=coef_resto,
        coef_derivada=coef_derivada, constante=max(coef_resto, coef_derivada),
    )


@dataclass(frozen=True)
class SewingCheck:
    """Os dois lados de ‖R‖_μ ≤ c_μ‖δR‖_μ."""

    norma_resto: float
    lado_direito: float
    c_mu: float
    norma_delta: float

    @property
    def razao(self):
        if self.norma_delta == 0.0:
            return 0.0 if self.norma_resto == 0.0 else math.inf
        return self.norma_resto / self.norma_delta

    @property
    def passou(self):
        escala = max(1.0, self.lado_direito)
        return self.norma_resto <= self.lado_direito + 1e-12 * escala

    def to_dict(self):
        return {
            'norma_resto': self.norma_resto,
            'lado_direito': self.lado_direito,
            'c_mu': self.c_mu,
            'razao': self.razao,
            'passou': self.passou,
        }


def controlled_germ(Y, X):
    """Matriz Ξ[i, j] = Y(x_i)X¹(x_i,x_j) + ∂Y(x_i)X²(x_i,x_j)."""
    d = X.ancoras[None, :] - X.ancoras[:, None]
    return Y.v[:, None] * d + Y.dv[:, None] * 0.5 * d ** 2


def sewing_check(germe, xs, mu):
    """
    Verifica o lema de costura discreto para um germe na grade xs.

    R(x_i, x_j) = Ξ(x_i, x_j) − Σ_{i≤k<j} Ξ(x_k, x_{k+1}) anula-se em
    pares adjacentes e δR = δΞ.

    Args:
        germe (callable or numpy.ndarray): Ξ(s, t) vetorizado em
            posições, ou matriz n × n
        xs (array-like): Grade crescente
        mu (float): Expoente μ > 1

    Returns:
        SewingCheck: ‖R‖_μ, c_μ‖δR‖_μ e a constante

    Raises:
        DomainError: Se μ ≤ 1
    """
    c_mu = sewing_constant(mu)
    xs = np.asarray(xs, dtype=float)
    n = xs.size
    if callable(germe):
        matriz = np.asarray(germe(xs[:, None], xs[None, :]), dtype=float) * np.ones((n, n))
    else:
        matriz = np.asarray(germe, dtype=float)
    if matriz.shape != (n, n):
        raise ConfigurationError(f"Germe com forma {matriz.shape} incompatível com {n} pontos")

    adjacentes = np.concatenate([[0.0], np.cumsum(np.diag(matriz, 1))])
    distancias = xs[None, :] - xs[:, None]
    superior = np.triu(np.ones((n, n), dtype=bool), 1)
    resto = matriz - (adjacentes[None, :] - adjacentes[:, None])
    norma_resto = float(np.max(np.abs(resto[superior]) / distancias[superior] ** mu, initial=0.0))

    norma_delta = 0.0
    for u in range(1, n - 1):
        delta = matriz[:u, u + 1:] - matriz[:u, u][:, None] - matriz[u, u + 1:][None, :]
        escala = distancias[:u, u + 1:] ** mu
        norma_delta = max(norma_delta, float(np.max(np.abs(delta) / escala)))

    return SewingCheck(
        norma_resto=norma_resto, lado_direito=c_mu * norma_delta, c_mu=c_mu, norma_delta=norma_delta,
    )


# ----------------------------------------------------------------------
# Pesos, normas Θ e distância controlada
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class WeightParams:
    """
    Expoentes e pesos dos espaços de caminhos controlados.

    Attributes:
        alpha, beta, beta_linha, chi (float): 1/3 < β < β′ < α < 1/2 e
            1/2 − α < χ < β/2
        theta, theta_linha, lam (float): θ > θ′ > 1 e λ > 1
        raios (tuple): Raios a avaliados
        horizonte (float): Horizonte T
        pontos_tempo (int): Número de tempos igualmente espaçados em
            [0, T] usados nos sups em t
    """

    alpha: float = Config.ALPHA
    beta: float = Config.BETA
    beta_linha: float = Config.BETA_LINHA
    chi: float = Config.CHI
    theta: float = Config.THETA
    theta_linha: float = Config.THETA_LINHA
    lam: float = Config.LAMBDA
    raios: tuple = Config.RAIOS
    horizonte: float = Config.HORIZONTE
    pontos_tempo: int = 17

    def __post_init__(self):
        self._validar_dados()

    def _validar_dados(self):
        if not (1.0 / 3.0 < self.beta < self.beta_linha < self.alpha < 0.5):
            raise ConfigurationError(
                f"Expoentes devem satisfazer 1/3 < β < β′ < α < 1/2: "
                f"β={self.beta}, β′={self.beta_linha}, α={self.alpha}"
            )
        if not (0.5 - self.alpha < self.chi < self.beta / 2.0):
            raise ConfigurationError(
                f"χ deve estar em (1/2 − α, β/2) = ({0.5 - self.alpha}, {self.beta / 2.0}): {self.chi}"
            )
        if not (self.lam > 1.0 and self.theta > 1.0):
            raise ConfigurationError(f"λ e θ devem ser maiores que 1: λ={self.lam}, θ={self.theta}")
        if not (1.0 < self.theta_linha < self.theta):
            raise ConfigurationError(f"θ′ deve estar em (1, θ): θ′={self.theta_linha}, θ={self.theta}")
        if not self.raios or min(self.raios) < 1.0:
            raise ConfigurationError(f"Raios devem ser ≥ 1: {self.raios}")
        if self.horizonte <= 0 or self.pontos_tempo < 2:
            raise ConfigurationError(f"Grade de tempo inválida: T={self.horizonte}, pontos={self.pontos_tempo}")

    @property
    def gamma(self):
        return (self.alpha - self.beta) / 4.0

    @property
    def tempos(self):
        return np.linspace(0.0, self.horizonte, self.pontos_tempo)

    def linha(self):
        """Parâmetros com (θ′, β′) no lugar de (θ, β)."""
        return WeightParamsLinha(self)

    def to_dict(self):
        return {
            'alpha': self.alpha, 'beta': self.beta, 'beta_linha': self.beta_linha,
            'chi': self.chi, 'theta': self.theta, 'theta_linha': self.theta_linha,
            'lam': self.lam, 'gamma': self.gamma, 'raios': list(self.raios),
            'horizonte': self.horizonte, 'pontos_tempo': self.pontos_tempo,
        }


@dataclass(frozen=True)
class WeightParamsLinha:
    """Visão de WeightParams com (θ′, β′), usada pela norma Θ^{θ′,β′}."""

    base: WeightParams

    def __getattr__(self, nome):
        if nome == 'base':
            raise AttributeError(nome)
        return getattr(self.base, nome)

    @property
    def theta(self):
        return self.base.theta_linha

    @property
    def beta(self):
        return self.base.beta_linha

    @property
    def gamma(self):
        return (self.base.alpha - self.base.beta_linha) / 4.0


def weight_e(params, a, t):
    """E^{θ,λ}(a, t) = exp(λt + θa + θat)."""
    a = np.asarray(a, dtype=float)
    t = np.asarray(t, dtype=float)
    return np.exp(params.lam * t + params.theta * a + params.theta * a * t)


def weight_q_inv(params, a, t):
    """Q(a, t)^{−1} com a convenção Q^{−1} = 0 em t = 0."""
    a = np.asarray(a, dtype=float)
    t = np.asarray(t, dtype=float)
    with np.errstate(divide='ignore'):
        q = a ** params.chi * (a ** (params.beta / 2.0) + np.where(t > 0, t, 1.0) ** (-params.beta / 2.0))
    return np.where(t > 0, 1.0 / q, 0.0)


@dataclass(frozen=True, eq=False)
class ControlledProcess:
    """
    Processo controlado no espaço-tempo: v_t e ∂v_t sobre um caminho X.

    Attributes:
        tempos (numpy.ndarray): Tempos t_0 < ... das linhas
        caminho (GridRoughPath): Caminho de referência no espaço
        v (numpy.ndarray): Matriz (tempos × pontos)
        dv (numpy.ndarray): Derivada declarada, mesma forma
    """

    tempos: np.ndarray
    caminho: GridRoughPath
    v: np.ndarray = field(repr=False)
    dv: np.ndarray = field(repr=False)

    def __post_init__(self):
        self._validar_dados()

    def _validar_dados(self):
        forma = (np.size(self.tempos), self.caminho.n)
        if np.shape(self.v) != forma or np.shape(self.dv) != forma:
            raise ConfigurationError(
                f"v e ∂v devem ter forma {forma}: {np.shape(self.v)}, {np.shape(self.dv)}"
            )

    def resto(self, g):
        """R^{v_t}(x_i, x_{i+g}) por linha de tempo."""
        return self.v[:, g:] - self.v[:, :-g] - self.dv[:, :-g] * self.caminho.incremento1(g)[None, :]

    def no_tempo(self, k):
        return GridControlledPath(caminho=self.caminho, v=self.v[k], dv=self.dv[k])


def _sup_acumulado(valores):
    return np.maximum.accumulate(valores, axis=0)


def parabolic_norms(f, tempos, passo, janelas, beta, max_pontos=None):
    """
    ‖f‖_∞ e ‖f‖_{β/2,β} sobre [0, t_k] × janela para todo k e janela.

    O sup de pares mistos coincide com o maior entre o sup temporal a x
    fixo e o sup espacial a t fixo, porque o denominador é a soma das
    duas distâncias.

    Returns:
        tuple: (sup, holder), cada um com forma (n_tempos, n_janelas)
    """
    max_pontos = Config.MAX_PONTOS_EXATO if max_pontos is None else max_pontos
    f = np.asarray(f, dtype=float)
    tempos = np.asarray(tempos, dtype=float)
    n_t = tempos.size

    sup = np.empty((n_t, len(janelas)))
    for w, (lo, hi) in enumerate(janelas):
        sup[:, w] = np.abs(f[:, lo:hi + 1]).max(axis=1)
    sup = _sup_acumulado(sup)

    espacial, _ = _varrer(_incremento_de(f), passo, beta, janelas, max_pontos)
    espacial = _sup_acumulado(espacial)

    # Pares (s, s') com s' ≤ t_k: melhor razão por tempo final
    temporal = np.zeros((n_t, len(janelas)))
    for g in range(1, n_t):
        dt = (tempos[g:] - tempos[:-g]) ** (beta / 2.0)
        dif = np.abs(f[g:] - f[:-g]) / dt[:, None]
        for w, (lo, hi) in enumerate(janelas):
            temporal[g:, w] = np.maximum(temporal[g:, w], dif[:, lo:hi + 1].max(axis=1))
    temporal = _sup_acumulado(temporal)

    return sup, np.maximum(espacial, temporal)


def remainder_norms(resto, passo, janelas, beta, max_pontos=None):
    """‖R^{v_t}‖_{2β} por tempo (sem sup em t) e janela."""
    max_pontos = Config.MAX_PONTOS_EXATO if max_pontos is None else max_pontos
    normas, _ = _varrer(resto, passo, 2 * beta, janelas, max_pontos)
    return normas


@dataclass(frozen=True)
class NormReport:
    """
    Componentes das normas ponderadas por (t, a).

    Attributes:
        tempos, raios (list): Grade de avaliação
        sup_norma, holder, norma_derivada, norma_resto (list): Matrizes
            (tempos × raios) de ‖v‖_∞, ⟦v⟧, ⟦∂v⟧ e ‖R‖_{2β}
        pesos (list): E^{θ,λ}(a, t)
        ponderado (list): Termo dentro do sup de Θ
        agregado (float): Θ (sup conjunto em (a, t))
        por_raio (list): sup em t para cada raio
        rho (float, optional): Distância ρ associada
        distancia (float, optional): Distância d associada
    """

    tempos: list
    raios: list
    sup_norma: list
    holder: list
    norma_derivada: list
    norma_resto: list
    pesos: list
    ponderado: list
    agregado: float
    por_raio: list
    rho: float = None
    distancia: float = None

    def to_dict(self):
        return {
            'tempos': self.tempos,
            'raios': self.raios,
            'sup_norma': self.sup_norma,
            'holder': self.holder,
            'norma_derivada': self.norma_derivada,
            'norma_resto': self.norma_resto,
            'pesos': self.pesos,
            'ponderado': self.ponderado,
            'agregado': self.agregado,
            'por_raio': self.por_raio,
            'rho': self.rho,
            'distancia': self.distancia,
        }


def _relatorio(v, dv, resto, tempos, caminho, params, max_pontos):
    raios = [float(a) for a in params.raios]
    janelas = [caminho.janela(a) for a in raios]
    beta = params.beta
    a = np.asarray(raios)[None, :]
    t = np.asarray(tempos, dtype=float)[:, None]
    peso_a = a ** (-beta / 2.0)

    sup_v, hold_v = parabolic_norms(v, tempos, caminho.passo, janelas, beta, max_pontos)
    sup_d, hold_d = parabolic_norms(dv, tempos, caminho.passo, janelas, beta, max_pontos)
    norma_v = sup_v + peso_a * hold_v
    norma_d = sup_d + peso_a * hold_d
    norma_r = remainder_norms(resto, caminho.passo, janelas, beta, max_pontos)

    fator = params.lam ** (-params.gamma)
    pesos = weight_e(params, a, t)
    ponderado = (norma_v + fator * norma_d + fator * weight_q_inv(params, a, t) * norma_r) / pesos
    return NormReport(
        tempos=[float(x) for x in tempos],
        raios=raios,
        sup_norma=sup_v.tolist(),
        holder=norma_v.tolist(),
        norma_derivada=norma_d.tolist(),
        norma_resto=norma_r.tolist(),
        pesos=pesos.tolist(),
        ponderado=ponderado.tolist(),
        agregado=float(ponderado.max()),
        por_raio=ponderado.max(axis=0).tolist(),
    )


def norm_report(V, params, linha=False, max_pontos=None):
    """
    Relatório das normas de um processo controlado e o agregado Θ^{θ,λ}.

    Args:
        V (ControlledProcess): Processo controlado
        params (WeightParams): Expoentes e pesos
        linha (bool): Usa (θ′, β′) em vez de (θ, β)

    Returns:
        NormReport: Componentes por (t, a) e Θ
    """
    p = params.linha() if linha else params
    return _relatorio(V.v, V.dv, V.resto, V.tempos, V.caminho, p, max_pontos)


def theta_norm(V, params, linha=False, max_pontos=None):
    """Norma Θ^{θ,λ}(V) (sup conjunto em t e nos raios)."""
    return norm_report(V, params, linha, max_pontos).agregado


def _verificar_grades(A, B):
    if not A.caminho.mesma_grade(B.caminho):
        raise GridAlignmentError("Processos controlados em grades espaciais diferentes")
    if np.shape(A.tempos) != np.shape(B.tempos) or not np.allclose(A.tempos, B.tempos, rtol=0, atol=1e-12):
        raise GridAlignmentError("Processos controlados em grades de tempo diferentes")


def controlled_distance_report(A, B, params, max_pontos=None):
    """
    Distância controlada d(A, B) com todos os componentes.

    Cada termo usa o resto de cada processo sobre o próprio caminho de
    referência: R_A − R_B.

    Returns:
        NormReport: agregado = sup conjunto em (a, t); por_raio = sups
        em t para cada raio
    """
    _verificar_grades(A, B)
    resto = lambda g: A.resto(g) - B.resto(g)
    relatorio = _relatorio(A.v - B.v, A.dv - B.dv, resto, A.tempos, A.caminho, params, max_pontos)
    logger.debug(f"Distância controlada: {relatorio.agregado:.6g} (por raio {relatorio.por_raio})")
    return relatorio


def controlled_distance(A, B, params, max_pontos=None):
    """Distância controlada d(A, B) (sup conjunto em (a, t))."""
    return controlled_distance_report(A, B, params, max_pontos).agregado
