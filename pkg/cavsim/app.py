# file: cavsim/app.py
"""
Linha de comando do cavsim.

Comandos: simulate, compare, shape, verify, mirror, couplings. Cada execução
grava tabelas CSV e termina com manifest.json no diretório de saída.
"""

import functools
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from typing import Optional

import click
import numpy as np
import pandas as pd
from dotenv import load_dotenv
from pydantic import ValidationError

# Carregar variáveis de ambiente antes de configurar o logging
load_dotenv()

from analysis.observables import (  # noqa: E402
    flux_from_population,
    metricas_descasamento,
    outgoing_spectrum,
    perfil_temporal,
)
from analysis.verify import run_oracle_suite, tabela_nucleo, tabela_oraculos  # noqa: E402
from core.gerenciador_execucao import GerenciadorExecucao  # noqa: E402
from core.units_and_setup import (  # noqa: E402
    PRESETS,
    ScenarioConfig,
    carregar_cenario,
    erro_de_validacao,
    preset,
    salvar_cenario,
)
from dynamics.master_equation import integrar_mestra  # noqa: E402
from dynamics.pulse_shaping import (  # noqa: E402
    ShapingParams,
    design_rabi,
    flux_forward,
    gaussian_target,
    regime_report,
    tabela_desenho,
    theta_zeta,
    validar_desenho,
    validar_previsao_direta,
)
from dynamics.representations import integrate  # noqa: E402
from optics.couplings import CouplingSet, coupling_mismatch, markov_condition, tabela_acoplamentos  # noqa: E402
from optics.mirror_response import (  # noqa: E402
    finesse_and_Q,
    lorentzian_error,
    lorentzian_modes,
    reflectivity_identity,
    tabela_resposta,
)
from utils.cavsim_logger import ContextoLog, inicializar_logging, log_error, log_info, log_warning  # noqa: E402
from utils.excecoes import ErroCavsim, ErroConfiguracao, ErroVerificacao  # noqa: E402

MAX_THREADS = int(os.getenv("CAVSIM_THREADS", 3))

MODELOS_CLI = ("true", "inout", "pseudo", "master")


def _tratar_erros(comando):
    """Converte exceções do simulador em mensagem e código de saída."""
    @functools.wraps(comando)
    def wrapper(*args, **kwargs):
        try:
            return comando(*args, **kwargs)
        except ValidationError as e:
            erro = erro_de_validacao(e)
            click.echo(f"Erro de configuração: {erro}", err=True)
            sys.exit(erro.codigo_saida)
        except ErroCavsim as e:
            log_error(f"[CLI] {type(e).__name__}: {e}")
            click.echo(f"Erro: {e}", err=True)
            sys.exit(e.codigo_saida)
    return wrapper


def _resolver_cenario(
    config: Optional[str],
    nome_preset: Optional[str],
    grid_count: Optional[int] = None,
    dt: Optional[float] = None,
) -> ScenarioConfig:
    if bool(config) == bool(nome_preset):
        raise ErroConfiguracao("Informe exatamente um entre --config e --preset", campo="config")
    cenario = carregar_cenario(config) if config else preset(nome_preset)
    ajustes = {}
    if grid_count is not None:
        ajustes["grid.count"] = grid_count
    if dt is not None:
        ajustes["integrator.dt"] = dt
    return cenario.com_ajustes(**ajustes) if ajustes else cenario


def _banda(texto: str):
    try:
        inicio, fim = (float(parte) for parte in texto.split(","))
    except ValueError as e:
        raise ErroConfiguracao(f"Banda inválida '{texto}': use 'min,max'", campo="scan") from e
    return inicio, fim


opcao_config = click.option("--config", "config", type=click.Path(dir_okay=False), help="Cenário em JSON.")
opcao_preset = click.option("--preset", "nome_preset", help="Cenário de referência (ex.: fig3a).")
opcao_saida = click.option("--out", "saida", type=click.Path(file_okay=False), default=None, help="Diretório de saída.")
opcao_semente = click.option("--seed", type=int, default=None, help="Reservado; a dinâmica é determinística.")


@click.group()
@click.option("--log-level", default=None, help="Nível de log (padrão: LOG_LEVEL ou INFO).")
def cli(log_level):
    """Simulador de emissão de fóton único em cavidade."""
    inicializar_logging(nivel=log_level)


@cli.command()
@click.option("--model", "modelo", type=click.Choice(MODELOS_CLI), required=True)
@opcao_config
@opcao_preset
@opcao_saida
@click.option("--grid-count", type=int, default=None)
@click.option("--dt", type=float, default=None)
@click.option("--coupling", "acoplamento", type=click.Choice(["exact", "lorentzian"]), default="exact")
@opcao_semente
@_tratar_erros
def simulate(modelo, config, nome_preset, saida, grid_count, dt, acoplamento, seed):
    """Integra uma representação e grava trajetória e observáveis."""
    cenario = _resolver_cenario(config, nome_preset, grid_count, dt)
    execucao = GerenciadorExecucao(f"simulate --model {modelo}", saida, cenario.hash_configuracao())
    salvar_cenario(cenario, execucao.diretorio / "scenario.json")

    with ContextoLog(cenario=cenario.name):
        if modelo == "master":
            trajetoria = integrar_mestra(cenario)
            execucao.salvar_tabela("trajectory", trajetoria.para_dataframe())
            execucao.registrar_avisos(trajetoria.avisos, "master")
        else:
            trajetoria = integrate(modelo, cenario, acoplamento=acoplamento)
            execucao.salvar_tabela("trajectory", trajetoria.para_dataframe())
            execucao.registrar_avisos(trajetoria.avisos, modelo)
            if trajetoria.P_photon is not None:
                execucao.salvar_tabela("flux", flux_from_population(trajetoria).para_dataframe())
            if modelo in ("true", "inout"):
                espectro = outgoing_spectrum(trajetoria)
                execucao.salvar_tabela("spectrum", espectro.para_dataframe())
                execucao.registrar_avisos(espectro.avisos, modelo)
        if trajetoria.tempos.size == 0:
            log_warning(f"[CLI] {cenario.name}: trajetória vazia (tf = t0)")
            execucao.registrar_avisos(["trajetória vazia (tf = t0)"])

    manifesto = execucao.finalizar()
    click.echo(f"{len(manifesto.outputs)} arquivos em {execucao.diretorio}")


_EXECUCOES_COMPARACAO = {
    "true_exact": ("true", "exact"),
    "true_lorentzian": ("true", "lorentzian"),
    "inout": ("inout", "exact"),
    "pseudo": ("pseudo", "exact"),
}


def _execucoes_comparacao(cenario: ScenarioConfig) -> dict:
    """Modelos comparados; sem espelho não há η exato e os modos verdadeiros usam só η̂."""
    if cenario.cavity.mirror is not None:
        return dict(_EXECUCOES_COMPARACAO)
    log_info(f"[CLI] {cenario.name} sem cavity.mirror: true_exact fora da comparação")
    return {nome: par for nome, par in _EXECUCOES_COMPARACAO.items() if nome != "true_exact"}


@cli.command()
@click.option("--scenario", "nome_preset", required=True, help="Preset a comparar (ex.: fig3a).")
@opcao_saida
@click.option("--grid-count", type=int, default=None)
@click.option("--dt", type=float, default=None)
@opcao_semente
@_tratar_erros
def compare(nome_preset, saida, grid_count, dt, seed):
    """Roda as três representações na mesma grade e grava espectros e métricas."""
    if nome_preset not in PRESETS:
        raise ErroConfiguracao.com_opcoes(f"Preset desconhecido: '{nome_preset}'", PRESETS, campo="scenario")
    cenario = _resolver_cenario(None, nome_preset, grid_count, dt)
    execucao = GerenciadorExecucao(f"compare --scenario {nome_preset}", saida, cenario.hash_configuracao())

    def rodar(item):
        nome, (modelo, acoplamento) = item
        return nome, integrate(modelo, cenario, acoplamento=acoplamento)

    execucoes = _execucoes_comparacao(cenario)
    trabalhadores = max(1, min(MAX_THREADS, len(execucoes)))
    log_info(f"[CLI] Comparação '{cenario.name}' com {trabalhadores} threads")
    with ContextoLog(cenario=cenario.name), ThreadPoolExecutor(max_workers=trabalhadores) as executor:
        trajetorias = dict(executor.map(rodar, execucoes.items()))

    espectros = {}
    for nome, trajetoria in trajetorias.items():
        execucao.salvar_tabela(f"trajectory_{nome}", trajetoria.para_dataframe())
        execucao.registrar_avisos(trajetoria.avisos, nome)
        if trajetoria.modelo != "pseudo":
            espectros[nome] = outgoing_spectrum(trajetoria)
            execucao.registrar_avisos(espectros[nome].avisos, nome)

    referencia = next(iter(espectros.values()))
    alinhados = pd.DataFrame({"omega": referencia.omega})
    for nome, espectro in espectros.items():
        alinhados[f"density_{nome}"] = espectro.density
    execucao.salvar_tabela("spectra", alinhados)

    dentro_fora, pseudo = trajetorias["inout"], trajetorias["pseudo"]
    perfis = pd.DataFrame({
        "t": dentro_fora.tempos,
        "P_photon_inout": dentro_fora.P_photon,
        "P_photon_pseudo": np.interp(dentro_fora.tempos, pseudo.tempos, pseudo.P_photon)
        if not pseudo.vazia else np.zeros(dentro_fora.tempos.size),
    })
    execucao.salvar_tabela("profiles", perfis)

    metricas = metricas_descasamento(espectros, cenario.cavity.omega_c)
    metricas.loc[len(metricas)] = ["profile_l2", "inout", "pseudo", perfil_temporal(dentro_fora, pseudo)]
    sem_estacionario = {nome for nome, espectro in espectros.items() if espectro.avisos}
    metricas["warning"] = metricas["a"].isin(sem_estacionario) | metricas["b"].isin(sem_estacionario)
    execucao.salvar_tabela("metrics", metricas)

    execucao.finalizar()
    click.echo(metricas.to_string(index=False))


@cli.command()
@click.option("--mode", "modo", type=click.Choice(["design", "forward"]), default="design")
@click.option("--target", type=click.Choice(["gaussian"]), default="gaussian", help="Forma do fluxo alvo.")
@click.option("--target-file", type=click.Path(dir_okay=False), default=None, help="CSV com colunas t, flux.")
@click.option("--width", "largura", type=float, default=1.0, help="Largura T do alvo gaussiano.")
@click.option("--eta", type=float, default=0.99)
@opcao_config
@opcao_preset
@opcao_saida
@click.option("--validate", is_flag=True, help="Compara com o fluxo realizado pelo modelo completo.")
@opcao_semente
@_tratar_erros
def shape(modo, target, target_file, largura, eta, config, nome_preset, saida, validate, seed):
    """Desenha Ω(t) para um fluxo alvo (design) ou prevê o fluxo de um bombeio dado (forward)."""
    if not config and not nome_preset:
        nome_preset = "fig6a" if modo == "design" else "fig6b"
    cenario = _resolver_cenario(config, nome_preset)
    execucao = GerenciadorExecucao(f"shape --mode {modo}", saida, cenario.hash_configuracao())

    with ContextoLog(cenario=cenario.name):
        if modo == "design":
            if target_file:
                tabela = pd.read_csv(target_file)
                alvo_t, alvo_fluxo = tabela["t"].to_numpy(), tabela["flux"].to_numpy()
            else:
                alvo_t, alvo_fluxo = gaussian_target(largura, eta)
            params = ShapingParams.do_cenario(
                cenario, eta_eff=eta, target_t=list(alvo_t), target_flux=list(alvo_fluxo)
            )
            drive = design_rabi(params)
            execucao.salvar_tabela("drive", tabela_desenho(params, drive))
            tempos = np.asarray(params.target_t)
        else:
            params = ShapingParams.do_cenario(cenario)
            drive = cenario.atom.drive
            tempos = np.linspace(cenario.t0, cenario.tf, 4000)
            theta, _ = theta_zeta(tempos, params, drive)
            execucao.salvar_tabela("drive", pd.DataFrame({
                "t": tempos,
                "omega_drive": drive.avaliar(tempos),
                "theta": theta,
                "flux_predicted": flux_forward(tempos, params, drive),
            }))

        regime = regime_report(params, drive, tempos)
        execucao.salvar_tabela("regime", pd.DataFrame(
            [{"ratio": nome, "value": valor, "flagged": valor < 1.0} for nome, valor in regime.razoes.items()]
        ))
        execucao.registrar_avisos(regime.alertas, "regime")
        for alerta in regime.alertas:
            click.secho(f"AVISO: {alerta}", fg="yellow", err=True)

        if validate:
            if modo == "design":
                validado = cenario.model_copy(update={
                    "atom": cenario.atom.model_copy(update={"drive": drive}),
                    "t0": float(tempos[0]),
                    "tf": float(tempos[-1]),
                })
                comparacao = validar_desenho(validado, *params.alvo())
            else:
                comparacao = validar_previsao_direta(cenario)
            execucao.salvar_tabela("flux_comparison", comparacao.para_dataframe())
            execucao.salvar_tabela("flux_metrics", pd.DataFrame([{
                "l1": comparacao.l1,
                "l1_retarded": comparacao.l1_retardado,
                "delay": comparacao.atraso,
                "n_final": comparacao.n_final,
                "max_G": regime.max_G,
            }]))
            linhas = {
                "L1 direto": comparacao.l1,
                f"L1 com alvo atrasado 2/Γ_c={comparacao.atraso:.4g}": comparacao.l1_retardado,
                "n(∞)": comparacao.n_final,
            }
            for rotulo, valor in linhas.items():
                click.echo(f"{rotulo:<34} {valor:.4f}")

    execucao.finalizar()


@cli.command()
@opcao_saida
@opcao_semente
@_tratar_erros
def verify(saida, seed):
    """Roda a suíte de oráculos numéricos e imprime a tabela de resultados."""
    execucao = GerenciadorExecucao("verify", saida)
    linhas = run_oracle_suite(semente=seed or 0)
    tabela = tabela_oraculos(linhas)
    execucao.salvar_tabela("oracles", tabela)
    nucleo, erro_nucleo = tabela_nucleo(preset("fig3a").cavity)
    execucao.salvar_tabela("kernel", nucleo)
    log_info(f"[VERIFICACAO] Tabela do núcleo: maior erro relativo ao ápice {erro_nucleo:.2e}")
    for linha in linhas:
        estado = click.style("OK", fg="green") if linha.passed else click.style("FALHOU", fg="red")
        click.echo(f"{linha.name:<45} {linha.measured:>12.3e} {linha.tolerance:>10.1e}  {estado}")
    falhas = [linha.name for linha in linhas if not linha.passed]
    execucao.registrar_avisos([f"oráculo fora da tolerância: {nome}" for nome in falhas])
    execucao.finalizar()
    if falhas:
        raise ErroVerificacao(f"{len(falhas)} oráculo(s) falharam: {', '.join(falhas)}")


@cli.command()
@opcao_config
@opcao_preset
@opcao_saida
@click.option("--scan", "banda", default=None, help="Banda 'min,max' da varredura (padrão ω_c ± 10Γ_c).")
@click.option("--count", type=int, default=2001)
@click.option("--neighbours", type=click.IntRange(min=0), default=5, help="Modos vizinhos de cada lado na soma Lorentziana.")
@_tratar_erros
def mirror(config, nome_preset, saida, banda, count, neighbours):
    """Resposta do espelho: T(ω), modos Lorentzianos, finesse e refletividade."""
    cenario = _resolver_cenario(config, nome_preset)
    cavidade = cenario.cavity
    if cavidade.mirror is None:
        raise ErroConfiguracao("o cenário não define cavity.mirror", campo="cavity.mirror")
    intervalo = _banda(banda) if banda else (
        cavidade.omega_c - 10 * cavidade.Gamma_c, cavidade.omega_c + 10 * cavidade.Gamma_c
    )
    execucao = GerenciadorExecucao("mirror", saida, cenario.hash_configuracao())
    execucao.salvar_tabela("mirror_scan", tabela_resposta(cavidade, intervalo, count, neighbours))
    modos = lorentzian_modes(cavidade, intervalo)
    execucao.salvar_tabela("modes", pd.DataFrame(
        [{"m": modo.m, "omega_m": modo.omega_m, "Gamma_m": modo.Gamma_m} for modo in modos],
        columns=["m", "omega_m", "Gamma_m"],
    ))
    finesse, q = finesse_and_Q(cavidade)
    resumo = {"finesse": finesse, "Q": q, "lorentzian_error": lorentzian_error(cavidade), **reflectivity_identity(cavidade)}
    execucao.salvar_tabela("mirror_summary", pd.DataFrame([resumo]))
    execucao.finalizar()
    for chave, valor in resumo.items():
        click.echo(f"{chave:<18} {valor:.6g}")


@cli.command()
@opcao_config
@opcao_preset
@opcao_saida
@click.option("--scan", "banda", default=None, help="Banda 'min,max' da varredura (padrão ω_c ± 10Γ_c).")
@click.option("--count", type=int, default=2001)
@_tratar_erros
def couplings(config, nome_preset, saida, banda, count):
    """Varredura de |η|, |η̂| e |κ_c| e métricas de descasamento."""
    cenario = _resolver_cenario(config, nome_preset)
    cavidade = cenario.cavity
    intervalo = _banda(banda) if banda else (
        cavidade.omega_c - 10 * cavidade.Gamma_c, cavidade.omega_c + 10 * cavidade.Gamma_c
    )
    modo = "exact" if cavidade.mirror is not None else "lorentzian"
    conjunto = CouplingSet.do_cenario(cenario, mode=modo)
    execucao = GerenciadorExecucao("couplings", saida, cenario.hash_configuracao())
    execucao.salvar_tabela("couplings_scan", tabela_acoplamentos(conjunto, intervalo, count))
    resumo = {"markov_condition": markov_condition(conjunto)}
    if cavidade.mirror is not None:
        resumo["coupling_mismatch"] = coupling_mismatch(conjunto)
    execucao.salvar_tabela("couplings_summary", pd.DataFrame([resumo]))
    execucao.finalizar()
    for chave, valor in resumo.items():
        click.echo(f"{chave:<18} {valor:.6g}")


if __name__ == "__main__":
    cli()
