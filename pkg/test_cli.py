# -*- coding: utf-8 -*-
"""
Testes da Interface de Linha de Comando
=======================================

Códigos de saída, configuração efetiva impressa e arquivos gravados
pelos subcomandos rápidos.
"""

import csv
import json

from sinai_lab import cli
from sinai_lab.cli import SAIDA_ACEITACAO, SAIDA_NUMERICA, SAIDA_OK, SAIDA_USO, main
from sinai_lab.errors import NumericalError
from sinai_lab.harness import ZETA


def _linhas(capsys):
    return capsys.readouterr().out.strip().splitlines()


def test_exponent_imprime_zeta(saida, capsys):
    assert main(['exponent', '--out', 'res']) == SAIDA_OK
    linhas = _linhas(capsys)
    assert linhas[-1] == f"{ZETA:.10f}"
    assert linhas[-1].startswith('0.0604')

    configuracao = json.loads('\n'.join(linhas[:-1]))
    assert configuracao['subcommand'] == 'exponent'
    assert configuracao['exponent_mode'] == 'closed-form'
    with open(saida / 'res' / 'exponent.json', encoding='utf-8') as arquivo:
        assert json.load(arquivo)['zeta'] == ZETA
    assert (saida / 'logs' / 'sinai_lab.log').exists()


def test_exponent_um_quarto(saida, capsys):
    assert main(['exponent', '--out', 'res', '--exponent-mode', 'remark-quarter']) == SAIDA_OK
    assert _linhas(capsys)[-1] == '0.2500000000'


def test_end2end_com_um_delta_e_erro_de_uso(saida):
    assert main(['end2end', '--out', 'res', '--delta', '0.125']) == SAIDA_USO


def test_kernel_sem_n_e_erro_de_uso(saida):
    assert main(['kernel', '--out', 'res']) == SAIDA_USO


def test_subcomando_desconhecido(saida):
    assert main(['fourier']) == SAIDA_USO


def test_env_dump_grava_campos(saida):
    assert main(['env-dump', '--out', 'res', '--radius', '16', '--delta', '0.125', '--seed', '3']) == SAIDA_OK

    with open(saida / 'res' / 'env.json', encoding='utf-8') as arquivo:
        documento = json.load(arquivo)
    assert documento['radius'] == 16
    assert documento['seed'] == 3
    assert len(documento['omega_plus']) == 33

    with open(saida / 'res' / 'fields.csv', encoding='utf-8') as arquivo:
        linhas = list(csv.reader(arquivo))
    assert linhas[0] == ['x', 'omega_plus', 'u_dot', 'u_bar', 'u_bar1']
    assert len(linhas) == 34

    with open(saida / 'res' / 'trajectory.csv', encoding='utf-8') as arquivo:
        assert len(list(csv.reader(arquivo))) == 8 + 2
    with open(saida / 'res' / 'sweep.csv', encoding='utf-8') as arquivo:
        varredura = list(csv.reader(arquivo))
    assert varredura[0] == ['delta', 'T', 'value']
    assert [linha[1] for linha in varredura[1:]] == ['0.25', '0.5', '1.0']


def test_pde_check_passa_e_falha_com_tolerancia_zero(saida):
    argumentos = ['pde-check', '--out', 'res', '--delta', '0.125', '--steps', '8', '--seeds', '0']
    assert main(argumentos) == SAIDA_OK
    with open(saida / 'res' / 'pde_check.json', encoding='utf-8') as arquivo:
        documento = json.load(arquivo)
    assert documento['passed'] is True
    assert documento['N'] == 8

    assert main(argumentos + ['--tolerance', '0']) == SAIDA_ACEITACAO


def test_arquivo_de_configuracao(saida):
    (saida / 'ok.json').write_text(json.dumps({'radius': 4, 'delta': [0.25]}), encoding='utf-8')
    assert main(['env-dump', '--out', 'res', '--config', 'ok.json']) == SAIDA_OK

    (saida / 'ruim.json').write_text(json.dumps({'raio': 4}), encoding='utf-8')
    assert main(['env-dump', '--out', 'res', '--config', 'ruim.json']) == SAIDA_USO
    assert main(['env-dump', '--out', 'res', '--config', 'inexistente.json']) == SAIDA_USO


def test_valores_invalidos(saida):
    assert main(['env-dump', '--out', 'res', '--epsilon', '1.5']) == SAIDA_USO
    assert main(['env-dump', '--out', 'res', '--delta-ref', '0.5']) == SAIDA_USO
    assert main(['env-dump', '--out', 'res', '--kind', 'uniforme']) == SAIDA_USO


def test_kernel_aceita_ordem_impar_so_na_varredura(saida):
    assert main(['kernel', '--out', 'res', '--n', '64', '--m', '0', '--m', '1', '--m', '2']) == SAIDA_OK
    with open(saida / 'res' / 'lclt.csv', encoding='utf-8') as arquivo:
        ordens = {linha[1] for linha in list(csv.reader(arquivo))[1:]}
    assert ordens == {'0', '2'}
    assert (saida / 'res' / 'gaussian_scan_m1.csv').exists()
    with open(saida / 'res' / 'kernel.json', encoding='utf-8') as arquivo:
        assert set(json.load(arquivo)['gaussian_scans']) == {'0', '1', '2'}

    assert main(['kernel', '--out', 'res', '--n', '64', '--m', '5']) == SAIDA_USO


def test_falha_numerica_tem_codigo_tres(saida, monkeypatch):
    def explode(cfg):
        raise NumericalError("matriz singular")

    def quebra(cfg):
        raise ValueError("formas incompatíveis")

    monkeypatch.setitem(cli.COMANDOS, 'exponent', explode)
    assert main(['exponent', '--out', 'res']) == SAIDA_NUMERICA

    monkeypatch.setitem(cli.COMANDOS, 'exponent', quebra)
    assert main(['exponent', '--out', 'res']) == SAIDA_NUMERICA
