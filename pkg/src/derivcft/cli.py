"""Command-line front end.

Every command prints one report to stdout.  JSON reports embed the run
configuration and the library version; output is deterministic for a fixed
configuration.  Exit status: 0 success, 1 a check failed, 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import asdict, dataclass
from typing import List, Sequence

import mpmath
import numpy as np

from . import __version__
from .algebra import format_scalar, structure_pi, structure_pi_prime
from .bounds import annihilator_bound_check, creator_bound_check
from .certify import Certificate, CertificateMismatch, certify, check_certificate
from .characters import nuclearity_probe, partition_series, reduced_character
from .fock import effective_multiplicity, format_state, gram_matrix, null_report
from .kernels import kernel_identity_check

COMMANDS = ("pi", "gram", "nulls", "character", "bounds", "kernel-check", "nuclearity", "certify", "verify")


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    degree: int = 1
    level: int = 6
    mode: int = 2
    precision: int = 30
    q: str = "0"
    format: str = "json"
    tolerance: float = 1e-9
    beta0: float = 1.70
    n_exp: int = 1
    beta_grid: str = "0.5:0.02:25"
    cert: str | None = None

    def validate(self):
        if self.degree < 0:
            raise UsageError("--degree must be non-negative")
        if self.level < 0:
            raise UsageError("--level must be non-negative")
        if self.precision < 15:
            raise UsageError("--precision must be at least 15 digits")
        if self.tolerance < 0:
            raise UsageError("--tolerance must be non-negative")
        if self.n_exp < 1:
            raise UsageError("--n-exp must be a positive integer")
        try:
            format_scalar(self.q)
        except (ValueError, ZeroDivisionError):
            raise UsageError(f"--q must be an exact rational, got {self.q!r}")
        if self.command in ("pi",) and self.mode is None:
            raise UsageError("--mode is required")
        if self.command == "bounds" and self.mode < 1:
            raise UsageError("--mode must be at least 1 for bounds")
        if self.command == "kernel-check" and self.degree < 1:
            raise UsageError("kernel-check needs --degree >= 1")
        if self.command == "nuclearity":
            self.grid()

    def grid(self) -> List[float]:
        try:
            start, stop, count = self.beta_grid.split(":")
            start, stop, count = float(start), float(stop), int(count)
        except ValueError:
            raise UsageError("--beta-grid must look like START:STOP:COUNT")
        if not (start > stop > 0 and count >= 3):
            raise UsageError("--beta-grid needs START > STOP > 0 and COUNT >= 3")
        return [float(x) for x in np.geomspace(start, stop, count)]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="derivcft", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, formats=("json", "table")):
        p.add_argument("--degree", "-n", type=int, default=1, help="derivative degree n")
        p.add_argument("--format", choices=formats, default="json")
        return p

    p = common(sub.add_parser("pi", help="structure polynomial Pi(m)"))
    p.add_argument("--mode", "-m", type=int, required=True)

    for name, helptext in (("gram", "exact level Gram matrix"), ("nulls", "null report at a level")):
        p = common(sub.add_parser(name, help=helptext))
        p.add_argument("--level", "-N", type=int, default=2)
        p.add_argument("--q", default="0", help="central value of a_0 (exact rational)")

    p = common(sub.add_parser("character", help="reduced character vs Gram ranks"))
    p.add_argument("--level", "-N", type=int, default=10, help="series cutoff")

    p = common(sub.add_parser("bounds", help="energy-bound ladder grid"))
    p.add_argument("--mode", "-m", type=int, default=8, help="largest mode index")
    p.add_argument("--level", "-N", type=int, default=8, help="largest level")
    p.add_argument("--tolerance", type=float, default=1e-9)
    p.add_argument("--precision", type=int, default=30)

    p = common(sub.add_parser("kernel-check", help="kernel identities for 1..degree"))

    p = common(sub.add_parser("nuclearity", help="nuclearity probe table"), formats=("json", "table", "csv"))
    p.add_argument("--beta0", type=float, default=1.70)
    p.add_argument("--n-exp", type=int, default=1)
    p.add_argument("--beta-grid", default="0.5:0.02:25", help="START:STOP:COUNT, geometric")
    p.add_argument("--precision", type=int, default=30)

    p = common(sub.add_parser("certify", help="no-stress-tensor certificate"))

    p = sub.add_parser("verify", help="replay a certificate file ('-' for stdin)")
    p.add_argument("cert", help="certificate JSON (bare or as emitted by 'certify')")
    p.add_argument("--format", choices=("json", "table"), default="json")
    return parser


def _config_from_args(args: argparse.Namespace) -> RunConfig:
    fields = {k: v for k, v in vars(args).items() if k in RunConfig.__dataclass_fields__}
    return RunConfig(**fields)


def _envelope(config: RunConfig, result) -> str:
    payload = {"command": config.command, "version": __version__, "config": asdict(config), "result": result}
    return json.dumps(payload, indent=2, sort_keys=True, ensure_ascii=False)


def _cmd_pi(cfg: RunConfig):
    pi = structure_pi(cfg.degree, cfg.mode)
    result = {"n": cfg.degree, "m": cfg.mode, "pi": pi,
              "pi_prime": None if cfg.mode == 0 else format_scalar(structure_pi_prime(cfg.degree, cfg.mode))}
    return result, f"Pi^({cfg.degree})({cfg.mode}) = {pi}", True


def _cmd_gram(cfg: RunConfig):
    g = gram_matrix(cfg.degree, cfg.level, cfg.q)
    d = g.to_dict()
    d["rank"] = g.rank()
    width = max([len(format_state(s)) for s in g.basis] + [1])
    lines = [f"Gram matrix n={cfg.degree} level={cfg.level} rank={d['rank']}"]
    for s, row in zip(g.basis, d["entries"]):
        lines.append(f"{format_state(s):>{width}}  " + " ".join(f"{x:>8}" for x in row))
    return d, "\n".join(lines), True


def _cmd_nulls(cfg: RunConfig):
    r = null_report(cfg.degree, cfg.level, cfg.q)
    d = r.to_dict()
    lines = [f"level {r.level}: dimension {r.dimension}, rank {r.rank}, null {len(r.null_basis)}"]
    for v in r.null_basis:
        lines.append("  " + " + ".join(f"{format_scalar(c)}*{format_state(s)}" for s, c in v.items()))
    return d, "\n".join(lines), True


def _cmd_character(cfg: RunConfig):
    series = reduced_character(cfg.degree, cfg.level)
    ranks = [effective_multiplicity(cfg.degree, N) for N in range(min(cfg.level, 10) + 1)]
    ok = list(series.coefficients[: len(ranks)]) == ranks
    d = series.to_dict()
    d.update(partitions=partition_series(cfg.level), gram_ranks=ranks, agrees=ok)
    lines = [f"{'N':>3} {'p(N)':>8} {'d_N':>8} {'rank':>6}"]
    for N, (p, dn) in enumerate(zip(d["partitions"], series.coefficients)):
        lines.append(f"{N:>3} {p:>8} {dn:>8} {ranks[N] if N < len(ranks) else '':>6}")
    return d, "\n".join(lines), ok


def _cmd_bounds(cfg: RunConfig):
    reports = []
    for m in range(1, cfg.mode + 1):
        for N in range(cfg.level + 1):
            for check in (annihilator_bound_check, creator_bound_check):
                reports.append(check(cfg.degree, m, N, cfg.tolerance, cfg.precision))
    ok = all(r.passed for r in reports)
    lines = [f"bounds n={cfg.degree}: rows m, columns N; A = annihilator, C = creator"]
    lines.append("m\\N " + " ".join(f"{N:>4}" for N in range(cfg.level + 1)))
    for m in range(1, cfg.mode + 1):
        cells = []
        for N in range(cfg.level + 1):
            a, c = [r for r in reports if r.m == m and r.level == N]
            cells.append(("A" if a.passed else "a") + ("C" if c.passed else "c"))
        lines.append(f"{m:>3} " + " ".join(f"{x:>4}" for x in cells))
    lines.append("all passed" if ok else "FAILED")
    return {"passed": ok, "reports": [r.to_dict() for r in reports]}, "\n".join(lines), ok


def _cmd_kernel(cfg: RunConfig):
    checks = [kernel_identity_check(n) for n in range(1, cfg.degree + 1)]
    ok = all(c.holds for c in checks)
    lines = [f"n={c.n}: {'ok' if c.holds else 'FAILED'}  base -> {c.base_form}" for c in checks]
    return {"passed": ok, "checks": [c.to_dict() for c in checks]}, "\n".join(lines), ok


def _cmd_nuclearity(cfg: RunConfig):
    rep = nuclearity_probe(cfg.beta0, cfg.n_exp, cfg.grid(), cfg.precision)
    d = rep.to_dict()
    if cfg.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["beta", "p", "f", "log_f"])
        for row in d["table"]:
            w.writerow([repr(row["beta"]), row["p"], row["f"], row["log_f"]])
        text = buf.getvalue().rstrip("\n")
    else:
        lines = [f"beta0={cfg.beta0} n_exp={cfg.n_exp} verdict={rep.verdict}"]
        for row in d["table"]:
            lines.append(f"{row['beta']:>12.6g}  {row['log_f']:>24}")
        lines.extend(rep.notes)
        text = "\n".join(lines)
    # the probe reports divergence as data, not as a failed check
    return d, text, True


def _cmd_certify(cfg: RunConfig):
    cert = certify(cfg.degree)
    d = cert.to_dict()
    lines = [f"n={cert.n}: {cert.variant} (d2={cert.d2})"]
    if "gap" in cert.witness:
        lines.append(f"  {cert.witness['relation']}; gap {cert.witness['gap']} for every gamma")
    for node in cert.inferences:
        lines.append(f"  [{node['id']}] {node['claim']}  <- {node['by']}")
    return d, "\n".join(lines), True


def _load_certificate(path: str) -> dict:
    text = sys.stdin.read() if path == "-" else open(path, encoding="utf-8").read()
    data = json.loads(text)
    if "result" in data and isinstance(data["result"], dict) and "schema" in data["result"]:
        data = data["result"]
    return data


def _cmd_verify(cfg: RunConfig):
    try:
        data = _load_certificate(cfg.cert)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read certificate: {exc}")
    try:
        check_certificate(Certificate.from_dict(data))
    except CertificateMismatch as exc:
        return {"verified": False, "field": exc.field_name, "detail": str(exc)}, f"FAILED: {exc}", False
    except (KeyError, TypeError, ValueError) as exc:
        return {"verified": False, "field": None, "detail": repr(exc)}, f"FAILED: malformed certificate ({exc!r})", False
    return {"verified": True, "variant": data["variant"], "n": data["n"]}, f"verified {data['variant']} for n={data['n']}", True


HANDLERS = {
    "pi": _cmd_pi,
    "gram": _cmd_gram,
    "nulls": _cmd_nulls,
    "character": _cmd_character,
    "bounds": _cmd_bounds,
    "kernel-check": _cmd_kernel,
    "nuclearity": _cmd_nuclearity,
    "certify": _cmd_certify,
    "verify": _cmd_verify,
}


def run(argv: Sequence[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    cfg = _config_from_args(args)
    try:
        cfg.validate()
        with mpmath.workdps(cfg.precision):
            result, text, ok = HANDLERS[cfg.command](cfg)
    except UsageError as exc:
        print(f"derivcft {cfg.command}: error: {exc}", file=err)
        return 2
    if cfg.format == "json":
        print(_envelope(cfg, result), file=out)
    else:
        print(text, file=out)
    return 0 if ok else 1


def main() -> None:
    sys.exit(run())
