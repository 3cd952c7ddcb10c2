# -*- coding: utf-8 -*-
"""
Ajustes de Taxa em Escala Log-Log
=================================

Mínimos quadrados sobre pares (log₂ x, log₂ y) com intervalo de
confiança por bootstrap. Com uma matriz (sementes × pontos) a
reamostragem é feita por sementes e a curva ajustada é o agregado
(média ou mediana) por ponto; com um vetor, por pares.

A inclinação segue a convenção métrica ≈ C·x^inclinação: uma métrica
que diminui com δ tem inclinação positiva.

Autor: Sistema Sinai Lab
Data: 2024
"""

import logging
from dataclasses import dataclass, field

import numpy as np
from scipy import stats

from .config import Config
from .errors import ConfigurationError
from .rng import FLUXO_BOOTSTRAP, gerador

logger = logging.getLogger(__name__)

AGREGADORES = {
    'mean': lambda m: np.mean(m, axis=0),
    'median': lambda m: np.median(m, axis=0),
}


@dataclass(frozen=True)
class RateFit:
    """
    Resultado de um ajuste log-log.

    Attributes:
        pontos (list): Pares (x, métrica) usados no ajuste
        slope (float): Inclinação em log₂–log₂
        intercept (float): Intercepto em log₂
        r2 (float): Coeficiente de determinação
        ci_lo (float): Limite inferior do intervalo bilateral
        ci_hi (float): Limite superior do intervalo bilateral
        limite_inferior (float): Cota inferior unilateral no nível dado
        nivel (float): Nível de confiança
        reamostragens (int): Reamostragens bootstrap válidas
        descartados (int): Pontos não positivos descartados
    """

    pontos: list
    slope: float
    intercept: float
    r2: float
    ci_lo: float
    ci_hi: float
    limite_inferior: float
    nivel: float = Config.NIVEL_CONFIANCA
    reamostragens: int = 0
    descartados: int = 0
    extras: dict = field(default_factory=dict)

    @property
    def conclusivo(self):
        return bool(np.isfinite(self.r2) and self.r2 >= Config.R2_MINIMO)

    def excede(self, piso):
        """True se a cota inferior unilateral estiver acima do piso."""
        return self.conclusivo and self.limite_inferior > piso

    def to_dict(self):
        return {
            'slope': self.slope,
            'ci_lo': self.ci_lo,
            'ci_hi': self.ci_hi,
            'r2': self.r2,
            'points': [[float(x), float(y)] for x, y in self.pontos],
            'intercept': self.intercept,
            'lower_bound': self.limite_inferior,
            'level': self.nivel,
            'conclusive': self.conclusivo,
            'resamples': self.reamostragens,
            'discarded': self.descartados,
        }


def _reta(lx, ly):
    """(inclinação, intercepto, r²) por mínimos quadrados; nan se degenerado."""
    if lx.size < 2 or np.ptp(lx) == 0:
        return np.nan, np.nan, np.nan
    ajuste = stats.linregress(lx, ly)
    r2 = ajuste.rvalue ** 2 if np.isfinite(ajuste.rvalue) else 1.0
    return float(ajuste.slope), float(ajuste.intercept), float(r2)


def fit_rate(xs, metricas, reamostragens=None, semente=0, nivel=None, agregador='mean'):
    """
    Ajusta log₂(métrica) = inclinação·log₂(x) + intercepto.

    Args:
        xs (array-like): Valores positivos de x (δ ou n)
        metricas (array-like): Vetor (um valor por x) ou matriz
            (sementes × x)
        reamostragens (int, optional): Reamostragens bootstrap (≥ 200)
        semente (int): Semente do fluxo de bootstrap
        nivel (float, optional): Nível de confiança
        agregador (str): 'mean' ou 'median' para matrizes

    Returns:
        RateFit: Ajuste com intervalo de confiança

    Raises:
        ConfigurationError: Se as formas forem incompatíveis
    """
    reamostragens = Config.REAMOSTRAGENS_BOOTSTRAP if reamostragens is None else int(reamostragens)
    nivel = Config.NIVEL_CONFIANCA if nivel is None else float(nivel)
    xs = np.asarray(xs, dtype=float)
    matriz = np.asarray(metricas, dtype=float)
    if matriz.ndim == 1:
        matriz = matriz[None, :]
        por_pares = True
    else:
        por_pares = matriz.shape[0] == 1
    if matriz.shape[1] != xs.size:
        raise ConfigurationError(f"Métricas com forma {matriz.shape} para {xs.size} valores de x")
    if agregador not in AGREGADORES:
        raise ConfigurationError(f"Agregador desconhecido: {agregador}")
    agregar = AGREGADORES[agregador]

    # métricas não positivas não têm logaritmo
    validas = np.isfinite(matriz) & (matriz > 0)
    descartados = int(matriz.size - validas.sum())
    if descartados:
        logger.warning(f"{descartados} métricas não positivas descartadas do ajuste log-log")
    colunas = validas.all(axis=0) & (xs > 0)
    xs_validos = xs[colunas]
    log_matriz = np.log2(np.where(validas, matriz, 1.0))[:, colunas]
    lx = np.log2(xs_validos)

    ly = agregar(log_matriz) if agregador == 'median' else np.log2(agregar(2.0 ** log_matriz))
    slope, intercept, r2 = _reta(lx, ly)

    rng = gerador(semente, FLUXO_BOOTSTRAP)
    amostras = []
    for _ in range(reamostragens):
        if por_pares:
            i = rng.integers(0, lx.size, lx.size)
            b, _, _ = _reta(lx[i], ly[i])
        else:
            i = rng.integers(0, log_matriz.shape[0], log_matriz.shape[0])
            reamostrada = log_matriz[i]
            ly_b = agregar(reamostrada) if agregador == 'median' else np.log2(agregar(2.0 ** reamostrada))
            b, _, _ = _reta(lx, ly_b)
        if np.isfinite(b):
            amostras.append(b)

    if amostras:
        cauda = 100.0 * (1.0 - nivel) / 2.0
        ci_lo, ci_hi = np.percentile(amostras, [cauda, 100.0 - cauda])
        limite = np.percentile(amostras, 100.0 * (1.0 - nivel))
    else:
        ci_lo = ci_hi = limite = np.nan

    ajuste = RateFit(
        pontos=list(zip(xs_validos.tolist(), (2.0 ** ly).tolist())),
        slope=slope, intercept=intercept, r2=r2,
        ci_lo=float(ci_lo), ci_hi=float(ci_hi), limite_inferior=float(limite),
        nivel=nivel, reamostragens=len(amostras), descartados=descartados,
    )
    if not ajuste.conclusivo:
        logger.warning(f"Ajuste inconclusivo: r²={r2:.3f} < {Config.R2_MINIMO}")
    else:
        logger.info(f"Inclinação ajustada {slope:.4f} (IC {nivel:.0%}: [{ci_lo:.4f}, {ci_hi:.4f}], r²={r2:.3f})")
    return ajuste
