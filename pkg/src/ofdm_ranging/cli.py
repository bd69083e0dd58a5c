"""Batch command-line front end.

Subcommands
-----------
acf <config>       write per-lag profile CSVs (analytic + Monte Carlo)
sweep <config>     write a long-format EISL CSV over a swept axis
validate <config>  compare Monte Carlo against the closed forms; exit 0 iff
                   every scenario passes its z-score band

``--trials``, ``--seed``, ``--workers`` and ``--out`` override config values.
All dB outputs are 10*log10 of energy quantities; ``alpha_db`` is an
amplitude ratio in dB (the interferer enters as 10**(alpha_db/20)).
Outputs are byte-identical across runs and worker counts for a fixed seed.
"""

from __future__ import annotations

import argparse
import math
import os
import sys

from . import montecarlo
from .analytic import avg_sq_acf, eisl, make_scenario
from .config import ConfigError, make_sweep_spec, parse_config, typed_sweep_values

_SCHEME_TAGS = {
    "ofdm-identity": "identity",
    "ofdm-guardband": "guardband",
    "pdpss": "pdpss",
    # bare tags accepted as written by the spreading module
    "identity": "identity",
    "guardband": "guardband",
}


def _fmt(x) -> str:
    """Full-precision, round-trip-exact CSV field."""
    if isinstance(x, str):
        return x
    if isinstance(x, bool):
        return str(x)
    if isinstance(x, int):
        return str(x)
    return repr(float(x))


def _fmt_tag(x) -> str:
    """Short deterministic form for file names (10.0 -> '10')."""
    if isinstance(x, str):
        return x
    if x == -math.inf:
        return "-inf"
    return f"{x:g}"


def _db(value: float, context: str) -> float:
    if not value > 0:
        raise ConfigError(context, f"dB undefined for non-positive value {value!r}")
    return 10 * math.log10(value)


def _scenario_from_params(params: dict):
    for key in ("scheme1", "scheme2"):
        if params[key] not in _SCHEME_TAGS:
            raise ConfigError(key, f"unknown scheme '{params[key]}'")
    if not 0 < params["L"] < params["N"]:
        raise ConfigError("L", f"need 0 < L < N, got L={params['L']}, N={params['N']}")
    if params["M"] < 1:
        raise ConfigError("M", f"need M >= 1, got {params['M']}")
    if not 0 < params["eta"] <= 1:
        raise ConfigError("eta", f"need 0 < eta <= 1, got {params['eta']}")
    try:
        return make_scenario(
            N=params["N"],
            L=params["L"],
            M=params["M"],
            alpha_db=params["alpha_db"],
            modulation=params["modulation"],
            scheme1=_SCHEME_TAGS[params["scheme1"]],
            scheme2=_SCHEME_TAGS[params["scheme2"]],
            eta=params["eta"],
            seed=params["seed"],
        )
    except ValueError as exc:
        raise ConfigError("modulation", str(exc)) from None


def _apply_axis(params: dict, axis: str, value) -> dict:
    out = dict(params)
    out[axis] = value
    return out


def _write_csv(path: str, header: str, rows: list[str]) -> None:
    parent = os.path.dirname(path)
    if parent:
        os.makedirs(parent, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(header + "\n")
        for row in rows:
            fh.write(row + "\n")


def run_acf(params: dict) -> list[str]:
    """One profile CSV per operating point (the swept axis, if any)."""
    if params.get("sweep_axis"):
        values = typed_sweep_values(params["sweep_axis"], params.get("sweep_values") or [])
        if not values:
            raise ConfigError("sweep_values", "required when sweep_axis is set")
        points = [(v, _apply_axis(params, params["sweep_axis"], v)) for v in values]
        names = [f"{params['out_prefix']}_{params['sweep_axis']}_{_fmt_tag(v)}.csv" for v, _ in points]
    else:
        points = [(None, params)]
        names = [f"{params['out_prefix']}.csv"]
    written = []
    for (_, point), path in zip(points, names):
        scn = _scenario_from_params(point)
        ana = avg_sq_acf(scn)
        est = montecarlo.estimate_acf(scn, point["trials"], workers=point["workers"])
        rows = []
        for i, lag in enumerate(ana.lags):
            a = float(ana.values[i])
            m = float(est.profile.values[i])
            rows.append(
                ",".join(
                    [
                        str(int(lag)),
                        _fmt(a),
                        _fmt(_db(a, "analytic")),
                        _fmt(m),
                        _fmt(_db(m, "mc")),
                        _fmt(float(est.profile.stderr[i])),
                    ]
                )
            )
        _write_csv(path, "lag,analytic,analytic_db,mc,mc_db,mc_stderr", rows)
        written.append(path)
    return written


def run_sweep(params: dict) -> str:
    """Long-format EISL CSV: one row per (scheme, axis value)."""
    spec = make_sweep_spec(params)
    rows = []
    for scheme in spec.schemes:
        for value in spec.values:
            point = _apply_axis(spec.base, spec.axis, value)
            point["scheme1"] = scheme
            point["scheme2"] = scheme
            scn = _scenario_from_params(point)
            report = eisl(scn)
            mc_eisl, mc_stderr = montecarlo.estimate_eisl(
                scn, spec.trials, workers=spec.workers
            )
            # delta method: stderr of 10*log10(x) is (10/ln10) * stderr/x
            stderr_db = 10 / math.log(10) * mc_stderr / mc_eisl
            rows.append(
                ",".join(
                    [
                        scheme,
                        spec.axis,
                        _fmt_tag(value),
                        _fmt(point["alpha_db"]),
                        str(point["M"]),
                        str(point["L"]),
                        _fmt(scn.spread1.eta),
                        point["modulation"],
                        _fmt(report.eisl_db),
                        _fmt(_db(mc_eisl, "mc_eisl")),
                        _fmt(stderr_db),
                    ]
                )
            )
    path = f"{spec.out_prefix}_sweep.csv"
    _write_csv(
        path,
        "scheme,axis,axis_value,alpha_db,M,L,eta,modulation,"
        "eisl_db_analytic,eisl_db_mc,eisl_stderr_db",
        rows,
    )
    return path


def run_validate(params: dict, out=None) -> int:
    """Validate every grid point; print one verdict line each."""
    out = out if out is not None else sys.stdout
    if params.get("sweep_axis"):
        values = typed_sweep_values(params["sweep_axis"], params.get("sweep_values") or [])
        points = [_apply_axis(params, params["sweep_axis"], v) for v in values]
        labels = [f"{params['sweep_axis']}={_fmt_tag(v)}" for v in values]
    else:
        points = [params]
        labels = ["scenario"]
    all_passed = True
    for label, point in zip(labels, points):
        scn = _scenario_from_params(point)
        report = montecarlo.validate(
            scn, point["trials"], point["sigma_band"], workers=point["workers"]
        )
        out.write(f"{label}: {report.summary()}\n")
        if not report.passed:
            all_passed = False
            for lag, z in report.failures():
                out.write(f"  FAIL lag={lag} z={z:.2f}\n")
    return 0 if all_passed else 1


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="ofdm-ranging",
        description=(
            "Two-user OFDM ranging sidelobe experiments. alpha_db is an "
            "amplitude ratio in dB (interferer enters as 10**(alpha_db/20)); "
            "all emitted dB values are 10*log10 of energies."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
        ("acf", "write per-lag analytic + Monte Carlo profile CSVs"),
        ("sweep", "write a long-format EISL CSV over the configured axis"),
        ("validate", "check Monte Carlo against the closed forms"),
    ):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("config", help="key = value configuration file")
        p.add_argument("--trials", type=int, help="override trial count")
        p.add_argument("--seed", type=int, help="override master seed")
        p.add_argument("--workers", type=int, help="override worker count")
        p.add_argument("--out", help="override output path prefix")
    args = parser.parse_args(argv)

    try:
        params = parse_config(args.config)
        for key in ("trials", "seed", "workers"):
            value = getattr(args, key)
            if value is not None:
                params[key] = value
        if args.out is not None:
            params["out_prefix"] = args.out

        if args.command == "acf":
            for path in run_acf(params):
                print(path)
            return 0
        if args.command == "sweep":
            print(run_sweep(params))
            return 0
        return run_validate(params)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
