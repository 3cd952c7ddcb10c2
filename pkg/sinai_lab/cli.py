# -*- coding: utf-8 -*-
"""
Interface de Linha de Comando
=============================

Cada experimento do laboratório é um subcomando: kernel, pde-check,
couple, rate, end2end, exponent e env-dump. A configuração efetiva é
montada com precedência flags > arquivo JSON > Config, validada pelo
CliConfigSchema e impressa como JSON antes da execução. Os resultados
são gravados em CSV e JSON no diretório de saída.

Códigos de saída: 0 sucesso, 1 falha de aceitação, 2 erro de uso ou
configuração, 3 erro numérico.

Autor: Sistema Sinai Lab
Data: 2024
"""

import argparse
import json
import logging
import math
import os
import sys
from dataclasses import dataclass, field

import numpy as np
from marshmallow import ValidationError

from .config import Config
from .couple import coupling_rate_study, coupling_study, controle_gaussiano, deviation_growth
from .env import EnvironmentSpec, rescale_environment, sample_environment
from .errors import ConfigurationError, DomainError, GridAlignmentError, NumericalError, RangeError, StageError
from .exportacao import dump_fields_csv, dump_sweep_csv, dump_trajectory_csv, escrever_csv, escrever_json
from .fitting import fit_rate
from .harness import ExperimentConfig, escrever_relatorio, optimal_exponent, run_end_to_end
from .kernel import build_kernel_table, gaussian_bound_scan, lclt_error
from .pde import build_v_delta, funcao_teste, ibp_identity_check, solve_direct, solve_mild
from .rough import WeightParams
from .schemas import (CliConfigSchema, ConvergenceReportSchema, EnvironmentSchema, ExponentReportSchema,
                      IBPReportSchema, RateFitSchema)
from .walk import numero_passos, quenched_sweep, simulate_walk

logger = logging.getLogger(__name__)

SAIDA_OK = 0
SAIDA_ACEITACAO = 1
SAIDA_USO = 2
SAIDA_NUMERICA = 3


# Tamanhos n do estudo de crescimento do desvio máximo
NS_CRESCIMENTO = tuple(2 ** k for k in range(8, 15))


@dataclass(frozen=True)
class CliConfig:
    """
    Configuração de uma execução da CLI.

    Attributes:
        subcomando (str): Subcomando executado
        arquivo (str, optional): Arquivo JSON de configuração
        valores (dict): Configuração efetiva validada
        saida (str): Diretório de saída
        verbosidade (str): Nível de log
        semente (int): Semente global
    """

    subcomando: str
    arquivo: str
    valores: dict = field(repr=False)
    saida: str = Config.OUTPUT_DIR
    verbosidade: str = Config.LOG_LEVEL
    semente: int = Config.SEMENTE

    def __getitem__(self, chave):
        return self.valores[chave]

    def to_dict(self):
        return CliConfigSchema().dump(self.valores)


def configurar_logging(nivel=None, diretorio=None):
    """
    Configura o logger do pacote com handlers de console e arquivo.

    Args:
        nivel (str, optional): Nível de log (padrão Config.LOG_LEVEL)
        diretorio (str, optional): Diretório do arquivo sinai_lab.log
    """
    nivel = getattr(logging, (nivel or Config.LOG_LEVEL).upper(), logging.INFO)
    diretorio = diretorio or Config.LOG_DIR
    formatter = logging.Formatter(Config.LOG_FORMAT)

    raiz = logging.getLogger('sinai_lab')
    for handler in list(raiz.handlers):
        raiz.removeHandler(handler)
        handler.close()

    console_handler = logging.StreamHandler(sys.stderr)
    console_handler.setLevel(nivel)
    console_handler.setFormatter(formatter)

    if not os.path.exists(diretorio):
        os.makedirs(diretorio)
    file_handler = logging.FileHandler(os.path.join(diretorio, 'sinai_lab.log'), encoding='utf-8')
    file_handler.setLevel(nivel)
    file_handler.setFormatter(formatter)

    raiz.setLevel(nivel)
    raiz.addHandler(console_handler)
    raiz.addHandler(file_handler)


# ----------------------------------------------------------------------
# Argumentos e configuração efetiva
# ----------------------------------------------------------------------

def construir_parser():
    """Parser com as flags comuns herdadas por todos os subcomandos."""
    comum = argparse.ArgumentParser(add_help=False)
    comum.add_argument('--config', help='Arquivo JSON com chaves planas iguais às flags')
    comum.add_argument('--out', help='Diretório de saída')
    comum.add_argument('--seed', type=int, help='Semente global')
    comum.add_argument('--jobs', type=int, help='Processos paralelos')
    comum.add_argument('--delta', type=float, action='append', help='Valor de δ (repetível)')
    comum.add_argument('--delta-ref', type=float, help='δ da referência')
    comum.add_argument('--T', type=float, help='Horizonte')
    comum.add_argument('--seeds', type=int, nargs='+', help='Sementes dos experimentos')
    comum.add_argument('--h', action='append', help='Função de teste (repetível)')
    comum.add_argument('--mode', help='Acoplador: per-step-quantile ou dyadic-quantile')
    comum.add_argument('--gaussian-control', action='store_const', const=True, help='ξ Gaussiano de controle')
    comum.add_argument('--band-sigmas', type=float, help='Largura das bandas em unidades de √N')
    comum.add_argument('--no-distance', dest='distance', action='store_const', const=False,
                       help='Pula o estudo de distância controlada')

    comum.add_argument('--epsilon', type=float)
    comum.add_argument('--kappa-ell', type=float)
    comum.add_argument('--kind', help='two-point ou scaled-beta')
    comum.add_argument('--half-gap', type=float)
    comum.add_argument('--beta-a', type=float)
    comum.add_argument('--beta-b', type=float)

    comum.add_argument('--alpha', type=float)
    comum.add_argument('--beta', type=float)
    comum.add_argument('--beta2', type=float)
    comum.add_argument('--chi', type=float)
    comum.add_argument('--theta', type=float)
    comum.add_argument('--theta2', type=float)
    comum.add_argument('--lambda', dest='lambda', type=float)
    comum.add_argument('--radii', type=float, nargs='+')

    verbosidade = comum.add_mutually_exclusive_group()
    verbosidade.add_argument('-v', '--verbose', dest='verbosity', action='store_const', const='DEBUG')
    verbosidade.add_argument('-q', '--quiet', dest='verbosity', action='store_const', const='WARNING')

    parser = argparse.ArgumentParser(prog='sinai_lab', description='Laboratório do passeio de Sinai')
    subparsers = parser.add_subparsers(dest='subcommand', required=True)

    kernel = subparsers.add_parser('kernel', parents=[comum], help='TLC local e cotas Gaussianas do núcleo')
    kernel.add_argument('--n', type=int, required=True, help='Maior índice de tempo')
    kernel.add_argument('--m', type=int, action='append', help='Ordem do gradiente de 0 a 4 (repetível; o TLC local usa 0, 2 e 4)')
    kernel.add_argument('--b', type=float, help='Expoente Gaussiano (padrão 1/(8σ²))')
    kernel.add_argument('--export-table', action='store_true', help='Grava a tabela em binário')

    pde = subparsers.add_parser('pde-check', parents=[comum], help='Forma branda e soma por partes')
    pde.add_argument('--steps', type=int, help='Número de passos N (padrão T/δ²)')
    pde.add_argument('--anchor', dest='anchors', type=float, action='append', help='Âncora a (repetível)')
    pde.add_argument('--tolerance', type=float)

    subparsers.add_parser('couple', parents=[comum], help='Diagnósticos do acoplamento')
    subparsers.add_parser('rate', parents=[comum], help='Taxa de ρ(Û₁^δ, W) contra δ')
    subparsers.add_parser('end2end', parents=[comum], help='Experimento ponta a ponta')

    expoente = subparsers.add_parser('exponent', parents=[comum], help='Otimização dos expoentes')
    expoente.add_argument('--exponent-mode', choices=('closed-form', 'grid-search', 'remark-quarter'))

    ambiente = subparsers.add_parser('env-dump', parents=[comum], help='Amostra e grava um ambiente')
    ambiente.add_argument('--radius', type=int, help='Raio da janela em sítios')
    return parser


def valores_padrao():
    """Valores padrão da configuração, com as chaves das flags."""
    return {
        'out': Config.OUTPUT_DIR,
        'seed': Config.SEMENTE,
        'jobs': max(1, Config.JOBS),
        'verbosity': Config.LOG_LEVEL.upper(),
        'epsilon': Config.EPSILON,
        'kappa_ell': Config.KAPPA_ELL,
        'kind': Config.TIPO_AMBIENTE,
        'half_gap': Config.MEIA_DISTANCIA,
        'beta_a': Config.BETA_A,
        'beta_b': Config.BETA_B,
        'alpha': Config.ALPHA,
        'beta': Config.BETA,
        'beta2': Config.BETA_LINHA,
        'chi': Config.CHI,
        'theta': Config.THETA,
        'theta2': Config.THETA_LINHA,
        'lambda': Config.LAMBDA,
        'radii': list(Config.RAIOS),
        'delta': list(Config.DELTAS),
        'delta_ref': Config.DELTA_REF,
        'T': Config.HORIZONTE,
        'seeds': list(Config.SEMENTES),
        'h': [Config.FUNCAO_TESTE],
        'mode': Config.MODO_ACOPLAMENTO,
        'band_sigmas': Config.BANDA_SIGMAS,
        'tolerance': Config.TOL_MILD,
    }


def ler_arquivo_config(caminho):
    """
    Lê um arquivo JSON de chaves planas ('-' e '_' são equivalentes).

    Raises:
        ConfigurationError: Se o arquivo não existir ou não for um objeto JSON
    """
    try:
        with open(caminho, encoding='utf-8') as arquivo:
            dados = json.load(arquivo)
    except (OSError, json.JSONDecodeError) as erro:
        raise ConfigurationError(f"Arquivo de configuração inválido {caminho}: {erro}") from erro
    if not isinstance(dados, dict):
        raise ConfigurationError(f"Arquivo de configuração deve conter um objeto JSON: {caminho}")
    return {chave.replace('-', '_'): valor for chave, valor in dados.items()}


def configuracao_efetiva(args):
    """
    Monta e valida a configuração efetiva (flags > arquivo > Config).

    Returns:
        CliConfig: Configuração validada

    Raises:
        ValidationError: Se algum valor for inválido
        ConfigurationError: Se o arquivo de configuração for inválido
    """
    valores = valores_padrao()
    if args.config:
        valores.update(ler_arquivo_config(args.config))
    flags = {chave: valor for chave, valor in vars(args).items() if valor is not None and chave != 'config'}
    valores.update(flags)
    valores['config'] = args.config
    # flag booleana exclusiva do subcomando kernel
    exportar = bool(valores.pop('export_table', False))

    carregados = CliConfigSchema().load(valores)
    carregados['export_table'] = exportar
    return CliConfig(
        subcomando=carregados['subcommand'], arquivo=args.config, valores=carregados,
        saida=carregados['out'], verbosidade=carregados['verbosity'], semente=carregados['seed'],
    )


def _avisar_deltas(deltas):
    for delta in deltas:
        if delta > 0 and math.log2(delta) % 1:
            logger.warning(f"δ={delta} não é potência de 2; grades de tempo e espaço podem não se alinhar")


def _spec(cfg):
    return EnvironmentSpec(
        epsilon=cfg['epsilon'], kappa_ell=cfg['kappa_ell'], kind=cfg['kind'],
        half_gap=cfg['half_gap'], beta_a=cfg['beta_a'], beta_b=cfg.valores.get('beta_b'),
    )


def _params(cfg):
    return WeightParams(
        alpha=cfg['alpha'], beta=cfg['beta'], beta_linha=cfg['beta2'], chi=cfg['chi'],
        theta=cfg['theta'], theta_linha=cfg['theta2'], lam=cfg['lam'], raios=tuple(cfg['radii']),
        horizonte=cfg['T'],
    )


def _caminho(cfg, nome):
    return os.path.join(cfg.saida, nome)


# ----------------------------------------------------------------------
# Subcomandos
# ----------------------------------------------------------------------

def cmd_kernel(cfg):
    """
    TLC local (ordens pares de --m) e varreduras Gaussianas até n = --n.

    Grava lclt.csv "n,m,error", gaussian_scan_m{m}.csv "n,sup_k_value"
    e kernel.json. Falha de aceitação quando alguma varredura explode.
    """
    n = cfg['n']
    if n is None:
        raise ConfigurationError("O subcomando kernel exige --n")
    ordens = cfg['m']
    ordens_lclt = [m for m in ordens if m in (0, 2, 4)]
    ns = sorted({2 ** k for k in range(3, int(math.log2(n)) + 1)} | {n})
    sigma2 = 1.0 - cfg['epsilon']
    b = cfg['b'] if cfg.valores.get('b') is not None else 1.0 / (8.0 * sigma2)

    tabela = build_kernel_table(cfg['epsilon'], n, n + 2, guardar=ns)
    linhas, ajustes = [], {}
    for m in ordens_lclt:
        erros = [lclt_error(tabela, k, m) for k in ns]
        linhas.extend((k, m, e) for k, e in zip(ns, erros))
        if len(ns) >= 2:
            ajustes[m] = fit_rate(ns, erros, semente=cfg.semente)
    escrever_csv(_caminho(cfg, 'lclt.csv'), ('n', 'm', 'error'), linhas)

    varreduras = {}
    for m in ordens:
        varredura = gaussian_bound_scan(tabela, m, b)
        varreduras[m] = varredura
        escrever_csv(_caminho(cfg, f'gaussian_scan_m{m}.csv'), ('n', 'sup_k_value'),
                     enumerate(varredura.por_n, start=1))

    if cfg['export_table']:
        tabela.export(_caminho(cfg, 'kernel_table.bin'))

    escrever_json(_caminho(cfg, 'kernel.json'), {
        'table': tabela.to_dict(),
        'b': b,
        'lclt_fits': {str(m): RateFitSchema().dump(ajuste) for m, ajuste in ajustes.items()},
        'gaussian_scans': {
            str(m): {
                'value': v.valor, 'n': v.n, 'k': v.k, 'blew_up': v.explodiu,
                'last_octave_growth': None if v.explodiu or len(v.por_n) < 2 else v.crescimento_ultima_oitava,
            }
            for m, v in varreduras.items()
        },
    })
    explodiu = [m for m, v in varreduras.items() if v.explodiu]
    if explodiu:
        logger.error(f"Varredura Gaussiana explodiu para m={explodiu} com b={b}")
        return SAIDA_ACEITACAO
    return SAIDA_OK


def _forcamento_padrao(t, x):
    return 0.5 * np.sin(x) * np.exp(-t)


def cmd_pde_check(cfg):
    """
    Compara forma branda e recursão direta, verifica as identidades de
    soma por partes e a equação de v^δ em até três sementes.

    Falha de aceitação quando algum resíduo relativo excede --tolerance.
    """
    _avisar_deltas(cfg['delta'])
    delta = cfg['delta'][0]
    N = cfg.valores.get('steps') or numero_passos(cfg['T'], delta)
    T = N * delta ** 2
    spec = _spec(cfg)
    f0 = funcao_teste(cfg['h'][0])
    tolerancia = cfg['tolerance']
    margem = int(math.ceil(max(abs(a) for a in cfg['anchors']) / delta)) + 8
    tabela = build_kernel_table(spec.epsilon, N, N)

    resultados = []
    falhou = False
    for semente in cfg['seeds'][:3]:
        renv = rescale_environment(sample_environment(spec, int(round(N + margem)), semente), delta)
        direta = solve_direct(renv, f0, _forcamento_padrao, N, guardar_cone=True)
        branda = solve_mild(renv, f0, _forcamento_padrao, N, table=tabela)
        escala = 1.0 + float(np.max(np.abs(direta.cone[0]))) + T * 0.5
        residuo_mild = float(np.max(np.abs(direta.valores - branda.valores))) / escala

        ibp = ibp_identity_check(renv, direta, cfg['anchors'], g=_forcamento_padrao, table=tabela)
        residuo_ibp = ibp.maximo / max(1.0, ibp.escala)

        v = build_v_delta(renv, f0, _forcamento_padrao, N, table=tabela)
        residuo_v = v.residuo / max(1.0, v.escala)
        limite_ibp = tolerancia * Config.TOL_IBP / Config.TOL_MILD
        limite_v = tolerancia * Config.TOL_V / Config.TOL_MILD

        if semente == cfg['seeds'][0]:
            direta.export(_caminho(cfg, f'pde_direct_seed{semente}.bin'))

        excedidos = {
            nome: valor for nome, valor, limite in
            (('mild', residuo_mild, tolerancia), ('ibp', residuo_ibp, limite_ibp), ('v_equation', residuo_v, limite_v))
            if not valor <= limite
        }
        falhou = falhou or bool(excedidos)
        resultados.append({
            'seed': semente,
            'mild_residual': residuo_mild,
            'ibp': IBPReportSchema().dump(ibp),
            'v_residual': residuo_v,
            'exceeded': excedidos,
        })
        logger.info(f"Semente {semente}: branda {residuo_mild:.3e}, soma por partes {residuo_ibp:.3e}, v {residuo_v:.3e}")

    escrever_json(_caminho(cfg, 'pde_check.json'), {
        'delta': delta, 'N': N, 'tolerance': tolerancia, 'seeds': resultados, 'passed': not falhou,
    })
    if falhou:
        logger.error(f"Resíduos acima da tolerância {tolerancia}: {[r['exceeded'] for r in resultados]}")
        return SAIDA_ACEITACAO
    return SAIDA_OK


def _lei_controle(cfg, spec):
    return controle_gaussiano(spec) if cfg['gaussian_control'] else None


def cmd_couple(cfg):
    """
    Diagnósticos do acoplamento: ρ e desvio máximo por (δ, semente) e o
    crescimento do desvio com n para os dois acopladores.

    Falha de aceitação quando o acoplador diádico não supera o
    acoplador passo a passo no maior n (mediana pareada).
    """
    _avisar_deltas(cfg['delta'])
    spec = _spec(cfg)
    lei = _lei_controle(cfg, spec)
    estudo = coupling_study(spec, _params(cfg), cfg['delta'], cfg['seeds'], cfg['mode'], lei, cfg['jobs'])
    escrever_csv(_caminho(cfg, 'coupling.csv'), ('delta', 'mode', 'max_dev', 'rho', 'seed'), estudo.linhas_csv())

    crescimento = deviation_growth(spec, NS_CRESCIMENTO, cfg['seeds'], lei=lei)
    diadico = np.asarray(crescimento.desvios['dyadic-quantile'])[:, -1]
    passo_a_passo = np.asarray(crescimento.desvios['per-step-quantile'])[:, -1]
    melhor = bool(np.median(diadico - passo_a_passo) < 0)

    escrever_json(_caminho(cfg, 'coupling.json'), {
        'study': estudo.to_dict(),
        'deviation_growth': crescimento.to_dict(),
        'dyadic_outperforms': melhor,
    })
    if not melhor:
        logger.error("Acoplador diádico não superou o acoplador passo a passo")
        return SAIDA_ACEITACAO
    return SAIDA_OK


def cmd_rate(cfg):
    """Inclinação de E[ρ] contra δ; falha quando o IC não exclui zero."""
    _avisar_deltas(cfg['delta'])
    spec = _spec(cfg)
    ajuste = coupling_rate_study(spec, _params(cfg), cfg['delta'], cfg['seeds'], cfg['mode'],
                                 _lei_controle(cfg, spec), cfg['jobs'])
    escrever_json(_caminho(cfg, 'rate.json'), RateFitSchema().dump(ajuste))
    print(f"slope={ajuste.slope:.6f} ci=[{ajuste.ci_lo:.6f}, {ajuste.ci_hi:.6f}]")
    if not ajuste.ci_lo > 0.0:
        logger.error(f"IC da taxa não exclui zero: [{ajuste.ci_lo:.4f}, {ajuste.ci_hi:.4f}]")
        return SAIDA_ACEITACAO
    return SAIDA_OK


def cmd_end2end(cfg):
    """Experimento ponta a ponta; falha quando a cota inferior da taxa fica abaixo de ζ."""
    if len(cfg['delta']) < 2:
        raise ConfigurationError(f"end2end exige pelo menos dois valores de δ: {cfg['delta']}")
    _avisar_deltas(cfg['delta'])
    experimento = ExperimentConfig(
        spec=_spec(cfg), funcoes=tuple(cfg['h']), horizonte=cfg['T'], deltas=tuple(cfg['delta']),
        delta_ref=cfg['delta_ref'], params=_params(cfg), sementes=tuple(cfg['seeds']), modo=cfg['mode'],
        saida=cfg.saida, jobs=cfg['jobs'], banda_sigmas=cfg['band_sigmas'], estudar_distancia=cfg['distance'],
    )
    relatorio = run_end_to_end(experimento)
    escrever_relatorio(relatorio, cfg.saida)
    escrever_json(_caminho(cfg, 'end2end_summary.json'), ConvergenceReportSchema(only=(
        'deltas', 'seeds', 'fits', 'seed_rates', 'reference_reliable', 'zeta', 'note', 'passed',
    )).dump(relatorio))
    for nome, ajuste in relatorio.ajustes.items():
        print(f"h={nome}: rate={ajuste.slope:.6f} lower={ajuste.limite_inferior:.6f} zeta={relatorio.zeta:.6f}")
    if not relatorio.passou():
        logger.error("Taxa ponta a ponta não supera ζ com a confiança pedida")
        return SAIDA_ACEITACAO
    return SAIDA_OK


def cmd_exponent(cfg):
    """Imprime o valor ótimo com 10 dígitos e grava exponent.json."""
    relatorio = optimal_exponent(cfg['exponent_mode'])
    escrever_json(_caminho(cfg, 'exponent.json'), ExponentReportSchema().dump(relatorio))
    print(f"{relatorio.zeta:.10f}")
    return SAIDA_OK


def cmd_env_dump(cfg):
    """
    Grava env.json, fields.csv "x,omega_plus,u_dot,u_bar,u_bar1" e
    trajectory.csv "t,x" do primeiro δ, e sweep.csv "delta,T,value" com
    a esperança quenched da primeira função de --h em T/4, T/2 e T.
    """
    _avisar_deltas(cfg['delta'])
    raio = cfg['radius'] if cfg.valores.get('radius') is not None else 64
    spec = _spec(cfg)
    ambiente = sample_environment(spec, raio, cfg.semente)
    escrever_json(_caminho(cfg, 'env.json'), EnvironmentSchema().dump(ambiente))

    renv = rescale_environment(ambiente, cfg['delta'][0])
    dump_fields_csv(renv, _caminho(cfg, 'fields.csv'))
    dump_trajectory_csv(simulate_walk(renv, raio // 2, 0.0, cfg.semente), _caminho(cfg, 'trajectory.csv'))

    T = cfg['T']
    linhas = quenched_sweep(spec, cfg.semente, funcao_teste(cfg['h'][0]), cfg['delta'], (T / 4, T / 2, T))
    dump_sweep_csv(linhas, _caminho(cfg, 'sweep.csv'))
    return SAIDA_OK


COMANDOS = {
    'kernel': cmd_kernel,
    'pde-check': cmd_pde_check,
    'couple': cmd_couple,
    'rate': cmd_rate,
    'end2end': cmd_end2end,
    'exponent': cmd_exponent,
    'env-dump': cmd_env_dump,
}


def codigo_de_saida(erro):
    """Código de saída para uma exceção do laboratório."""
    if isinstance(erro, StageError):
        return SAIDA_NUMERICA if erro.numerico else SAIDA_USO
    if isinstance(erro, (ValidationError, ConfigurationError, GridAlignmentError, DomainError, RangeError)):
        return SAIDA_USO
    if isinstance(erro, (NumericalError, ArithmeticError)):
        return SAIDA_NUMERICA
    return SAIDA_NUMERICA


def main(argv=None):
    """
    Ponto de entrada da CLI.

    Args:
        argv (list, optional): Argumentos (padrão sys.argv[1:])

    Returns:
        int: Código de saída
    """
    parser = construir_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as saida:
        return SAIDA_USO if saida.code else SAIDA_OK

    try:
        cfg = configuracao_efetiva(args)
    except (ValidationError, ConfigurationError) as erro:
        configurar_logging(getattr(args, 'verbosity', None))
        logger.error(f"Configuração inválida: {erro}")
        return SAIDA_USO

    configurar_logging(cfg.verbosidade)
    print(json.dumps(cfg.to_dict(), indent=2, ensure_ascii=False))
    logger.info(f"Executando {cfg.subcomando} com saída em {cfg.saida}")

    try:
        codigo = COMANDOS[cfg.subcomando](cfg)
    except Exception as erro:
        codigo = codigo_de_saida(erro)
        logger.error(f"{cfg.subcomando} falhou ({type(erro).__name__}): {erro}")
    logger.info(f"{cfg.subcomando} terminou com código {codigo}")
    return codigo
