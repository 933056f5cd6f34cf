"""Configuration-driven command-line surface.

Subcommands: coeffs | rho | spectrum | oracle | criterion | asymptotics |
gram | report. JSON output is canonical (sorted keys, 17-significant-digit
floats); CSV is a projection of the same tables. Exit codes: 0 success,
2 config error, 3 numerical failure, 4 indeterminate verdict under --strict.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import __version__
from .asymptotics import asymptotic_report, harmonic_sum, i_decomposition
from .config import RunConfig
from .errors import (
    ConfigError,
    DiscAnomalyError,
    GramSizeError,
    HillRieszError,
    NearResonanceError,
    PairingAmbiguityError,
    SolverFailureError,
    StiffnessError,
)
from .estimators import FloquetOracle, GalerkinSpectrum, RieszBasisDiagnostic, as_potential
from .galerkin import bc_theta
from .potential import rho_table
from .serialize import plain, rows_to_csv, to_canonical_json

_NUMERICAL = (SolverFailureError, PairingAmbiguityError, StiffnessError,
              DiscAnomalyError, NearResonanceError, GramSizeError)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3
EXIT_STRICT = 4


def _build_config(args) -> RunConfig:
    cfg = RunConfig.from_file(args.config) if args.config else RunConfig()
    data = cfg.resolved()
    data.pop("thresholds", None)
    if args.potential is not None:
        try:
            data["potential"] = json.loads(args.potential)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"--potential is not valid JSON: {exc}") from exc
    if args.bc is not None:
        data["bc"] = args.bc
    if args.mmax is not None:
        data["m_max"] = args.mmax
        if args.masym is None and data["m_asym"] >= args.mmax:
            data["m_asym"] = max(1, args.mmax - 1)   # keep defaults coherent
    if args.masym is not None:
        data["m_asym"] = args.masym
    if args.config is None:
        usable = 2 * (data["m_max"] - data["m_asym"] + 1)
        data["N_list"] = [n for n in data["N_list"] if n <= usable] or [usable]
    if args.K is not None:
        data["K"] = args.K
    if args.out is not None:
        data["out"] = args.out
    if args.format is not None:
        data["fmt"] = args.format
    if args.strict:
        data["strict"] = True
    out = RunConfig.from_dict(data)
    as_potential(out.potential)   # fail fast on malformed potential specs
    return out


def _emit(cfg: RunConfig, command: str, result, csv_sections) -> None:
    if cfg.fmt == "json":
        document = {
            "tool": {"name": "hillriesz", "version": __version__},
            "command": command,
            "config": cfg.resolved(),
            "result": plain(result),
        }
        text = to_canonical_json(document)
    else:
        parts = []
        comment = f"hillriesz {__version__} command={command} config={json.dumps(cfg.resolved(), sort_keys=True)}"
        for name, fieldnames, rows in csv_sections:
            parts.append(rows_to_csv(fieldnames, rows, header_comment=f"{comment} section={name}"))
        text = "\n".join(parts)
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _flatten(prefix, value, rows):
    value = plain(value)
    if isinstance(value, dict):
        if set(value) == {"__complex__"}:
            rows.append({"key": prefix, "value": complex(*value["__complex__"])})
            return
        for k in sorted(value):
            _flatten(f"{prefix}.{k}" if prefix else str(k), value[k], rows)
    elif isinstance(value, list):
        for i, v in enumerate(value):
            _flatten(f"{prefix}[{i}]", v, rows)
    else:
        rows.append({"key": prefix, "value": value})


def _kv_rows(doc):
    rows = []
    _flatten("", doc, rows)
    return rows


def cmd_coeffs(cfg: RunConfig):
    q = as_potential(cfg.potential)
    theta = bc_theta(cfg.bc)
    rows = []
    for m in range(1, cfg.m_max + 1):
        nres = 2 * m + theta
        qp = q.coefficient(nres)
        qm = q.coefficient(-nres)
        ratio = qp / qm if qm != 0 else complex(float("inf"), 0.0)
        rows.append({"m": m, "q_plus": qp, "q_minus": qm, "ratio": ratio})
    return {"rows": rows}, [("coeffs", ["m", "q_plus", "q_minus", "ratio"], rows)]


def cmd_rho(cfg: RunConfig):
    q = as_potential(cfg.potential)
    table = rho_table(q, range(1, cfg.m_max + 1), cfg.bc, cfg.rho_grid)
    rows = [{"m": m, "rho": e.rho, "branch": e.branch, "witness_x": e.witness_x}
            for m, e in sorted(table.entries.items())]
    return {"bc_parity": table.bc_parity, "rows": rows}, \
        [("rho", ["m", "rho", "branch", "witness_x"], rows)]


def _spectrum_rows(pairs):
    rows = []
    for p in pairs:
        rows.append({
            "m": p.m, "class": p.kind.value,
            "lambda_1": p.lam[0], "lambda_2": p.lam[1],
            "u_1": p.u[0], "v_1": p.v[0], "u_2": p.u[1], "v_2": p.v[1],
            "tail_1": p.tail_norm[0], "tail_2": p.tail_norm[1],
            "chain_residual": p.chain_residual,
        })
    return rows


_SPECTRUM_FIELDS = ["m", "class", "lambda_1", "lambda_2", "u_1", "v_1", "u_2", "v_2",
                    "tail_1", "tail_2", "chain_residual"]


def _fit_galerkin(cfg: RunConfig) -> GalerkinSpectrum:
    return GalerkinSpectrum(bc=cfg.bc, m_max=cfg.m_max, K=cfg.K, tol_eig=cfg.tol_eig,
                            tol_cluster=cfg.tol_cluster, tol_rank=cfg.tol_rank
                            ).fit(as_potential(cfg.potential))


def cmd_spectrum(cfg: RunConfig):
    est = _fit_galerkin(cfg)
    rows = _spectrum_rows(est.pairs_)
    result = {"rows": rows, "anomalies": est.anomalies_, "warnings": est.warnings_}
    return result, [("spectrum", _SPECTRUM_FIELDS, rows)]


def cmd_oracle(cfg: RunConfig):
    est = _fit_galerkin(cfg)
    seeds = {p.m: p.lam for p in est.pairs_}
    oracle = FloquetOracle(bc=cfg.bc, m_max=cfg.m_max, tol_ode=cfg.tol_ode,
                           tol_root=cfg.tol_root).fit(est.potential_, seeds=seeds)
    comparison = oracle.compare(est.pairs_)
    rows = []
    for d in oracle.roots_.discs:
        rows.append({
            "m": d.m, "root_1": d.roots[0], "root_2": d.roots[1],
            "contour_count": d.contour_count, "multiplicity": d.multiplicity,
            "deviation": comparison.per_m.get(d.m),
        })
    result = {"rows": rows, "overall_deviation": comparison.overall,
              "flagged": comparison.flagged}
    return result, [("oracle", ["m", "root_1", "root_2", "contour_count",
                                "multiplicity", "deviation"], rows)]


def _fit_diagnostic(cfg: RunConfig, with_asymptotics=False) -> RieszBasisDiagnostic:
    return RieszBasisDiagnostic(
        bc=cfg.bc, m_max=cfg.m_max, m_asym=cfg.m_asym, K=cfg.K, N_list=cfg.N_list,
        trunc=cfg.trunc, tol_eig=cfg.tol_eig, tol_cluster=cfg.tol_cluster,
        tol_rank=cfg.tol_rank, rho_grid=cfg.rho_grid, thresholds=cfg.thresholds,
        with_asymptotics=with_asymptotics,
    ).fit(as_potential(cfg.potential))


def cmd_criterion(cfg: RunConfig):
    est = _fit_diagnostic(cfg)
    result = {"verdict": est.verdict_, "simplicity": est.simplicity_}
    return result, [("criterion", ["key", "value"], _kv_rows(result))]


_ASYM_FIELDS = ["m", "a1", "a2", "a1_primed", "a2_primed", "b1", "b2", "b1_primed",
                "b2_primed", "a1_integral", "R1_est", "R2_est", "deviation_ratio",
                "uv_balance", "kappa"]


def cmd_asymptotics(cfg: RunConfig):
    from .asymptotics import deviation_ratios, uv_balance

    est = _fit_diagnostic(cfg, with_asymptotics=True)
    report = est.asymptotics_
    rows = [{f: getattr(r, f) for f in _ASYM_FIELDS} for r in report.rows]
    harmonic = [{"m": m, "value": harmonic_sum(m, 10**4 * m)}
                for m in sorted({cfg.m_asym, cfg.m_max})]
    idec = [{"m": r.m, **plain(i_decomposition(est.potential_, r.m, cfg.trunc,
                                               bc_theta(cfg.bc)))}
            for r in report.rows[: min(5, len(report.rows))]]
    result = {
        "rows": rows,
        "deviation_trend": deviation_ratios(est.pairs_, est.rho_table_),
        "balance_trend": uv_balance(est.pairs_, est.potential_, est.rho_table_),
        "harmonic_sums": harmonic,
        "i_decomposition": idec,
    }
    return result, [("asymptotics", _ASYM_FIELDS, rows)]


def cmd_gram(cfg: RunConfig):
    est = _fit_diagnostic(cfg)
    g = est.gram_
    rows = [{"N": n, "s_min": lo, "s_max": hi, "cond": c}
            for n, lo, hi, c in zip(g.N_list, g.s_min, g.s_max, g.cond)]
    result = {"rows": rows, "growth_slope": g.growth_slope}
    return result, [("gram", ["N", "s_min", "s_max", "cond"], rows)]


def cmd_report(cfg: RunConfig):
    coeffs_res, coeffs_csv = cmd_coeffs(cfg)
    rho_res, rho_csv = cmd_rho(cfg)
    est = _fit_diagnostic(cfg, with_asymptotics=True)
    spectrum_rows = _spectrum_rows(est.pairs_)
    seeds = {p.m: p.lam for p in est.pairs_}
    oracle = FloquetOracle(bc=cfg.bc, m_max=min(cfg.m_max, 10), tol_ode=cfg.tol_ode,
                           tol_root=cfg.tol_root).fit(est.potential_, seeds=seeds)
    comparison = oracle.compare([p for p in est.pairs_ if p.m <= 10])
    g = est.gram_
    gram_rows = [{"N": n, "s_min": lo, "s_max": hi, "cond": c}
                 for n, lo, hi, c in zip(g.N_list, g.s_min, g.s_max, g.cond)]
    asym_rows = [{f: getattr(r, f) for f in _ASYM_FIELDS} for r in est.asymptotics_.rows]
    result = {
        "coeffs": coeffs_res,
        "rho": rho_res,
        "spectrum": {"rows": spectrum_rows, "anomalies": est.galerkin_.anomalies_},
        "oracle": {"overall_deviation": comparison.overall, "per_m": comparison.per_m},
        "criterion": {"verdict": est.verdict_, "simplicity": est.simplicity_},
        "asymptotics": {"rows": asym_rows},
        "gram": {"rows": gram_rows, "growth_slope": g.growth_slope},
    }
    sections = coeffs_csv + rho_csv + [
        ("spectrum", _SPECTRUM_FIELDS, spectrum_rows),
        ("gram", ["N", "s_min", "s_max", "cond"], gram_rows),
        ("asymptotics", _ASYM_FIELDS, asym_rows),
        ("criterion", ["key", "value"], _kv_rows({"verdict": est.verdict_})),
    ]
    return result, sections


_COMMANDS = {
    "coeffs": cmd_coeffs,
    "rho": cmd_rho,
    "spectrum": cmd_spectrum,
    "oracle": cmd_oracle,
    "criterion": cmd_criterion,
    "asymptotics": cmd_asymptotics,
    "gram": cmd_gram,
    "report": cmd_report,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hillriesz",
        description="Spectral diagnostics for periodic/anti-periodic Hill operators",
    )
    parser.add_argument("--version", action="version", version=f"hillriesz {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in _COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", help="JSON config file")
        p.add_argument("--potential", help="inline potential spec (JSON)")
        p.add_argument("--bc", choices=["periodic", "antiperiodic"])
        p.add_argument("--mmax", type=int)
        p.add_argument("--masym", type=int)
        p.add_argument("--K", type=int)
        p.add_argument("--out", help="output path (default stdout)")
        p.add_argument("--format", choices=["json", "csv"])
        p.add_argument("--strict", action="store_true",
                       help="exit 4 when the verdict is indeterminate")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = _build_config(args)
        result, csv_sections = _COMMANDS[args.command](cfg)
        _emit(cfg, args.command, result, csv_sections)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except _NUMERICAL as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except HillRieszError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    if cfg.strict and args.command in ("criterion", "report"):
        verdict = result["criterion"]["verdict"] if args.command == "report" else result["verdict"]
        if verdict.verdict == "indeterminate":
            print("strict mode: verdict indeterminate", file=sys.stderr)
            return EXIT_STRICT
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
