"""Command-line surface: spectra, bands, certificates, and the third-order runs.

Every command loads its potential or coefficient input from a JSON file path
or an inline JSON literal, runs the corresponding library pipeline, and
emits a versioned JSON document (or CSV table) on stdout or to --output.
Outputs are deterministic: records are sorted by (Re, Im) and floats are
printed in shortest round-trip form, so identical runs produce identical
bytes. The emitted JSON echoes the resolved run configuration with the
input inlined; replay_argv() turns that echo back into an argument vector
that reproduces the run bit for bit.

Exit codes: 0 success, 1 configuration error (bad arguments, unreadable or
malformed input), 2 numerical failure (integration or search breakdown).
Violated invariants (open gaps, defects, uncertified regions) are data, not
failures.
"""

import argparse
import csv
import io
import json
import math
import os
import subprocess
import sys
from dataclasses import dataclass

import numpy as np

from . import boussinesq, lyapunov
from .errors import (ConfigError, DomainError, HillbandsError,
                     UnsupportedRegionError)
from .fundsol import DEFAULT_CONFIG, IntegratorConfig
from .potentials import load_potential
from .reality import (certify_derivative_strip, certify_halfplane,
                      certify_strip)
from .resolvent import green_dirichlet, green_quasi, resolvent_residual
from .rootfind import Rect
from .spectra import (Problem, assemble_bands, band_functions,
                      dirichlet_spectrum, mixed_spectra, neumann_spectrum,
                      quasi_spectrum, two_periodic_spectrum)

SCHEMA_VERSION = 1

_PROBLEMS = ("quasi", "periodic", "antiperiodic", "two-periodic",
             "dirichlet", "neumann", "mixed-dn", "mixed-nd")


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 on usage errors; the contract reserves 2
    # for numerical failures, so route usage problems through ConfigError
    def error(self, message):
        raise ConfigError(message)


@dataclass(frozen=True)
class RunConfig:
    """Resolved settings of one command invocation.

    input_path keeps the raw --potential/--coeffs argument; the JSON echo
    inlines the parsed input instead, so a saved run replays identically
    even after the file it came from moves.
    """

    command: str
    input_path: str = None
    region: tuple = None
    rect: tuple = None
    k: float = None
    rel_tol: float = DEFAULT_CONFIG.rel_tol
    abs_tol: float = DEFAULT_CONFIG.abs_tol
    output_format: str = "json"
    output_path: str = None
    parallelism: int = 1


def _parse_interval(text):
    parts = str(text).split(":")
    if len(parts) != 2:
        raise ConfigError(f"expected an interval a:b, got {text!r}")
    try:
        a, b = float(parts[0]), float(parts[1])
    except ValueError:
        raise ConfigError(f"interval endpoints must be numbers: {text!r}") \
            from None
    if not b > a:
        raise ConfigError(f"interval needs a < b, got {text!r}")
    return a, b


def _parse_rect(text):
    parts = str(text).split(":")
    if len(parts) != 4:
        raise ConfigError(f"expected a rectangle x0:x1:y0:y1, got {text!r}")
    try:
        x0, x1, y0, y1 = (float(p) for p in parts)
    except ValueError:
        raise ConfigError(f"rectangle corners must be numbers: {text!r}") \
            from None
    if not (x1 > x0 and y1 > y0):
        raise ConfigError(f"rectangle needs x0 < x1 and y0 < y1: {text!r}")
    return Rect(complex(0.5 * (x0 + x1), 0.5 * (y0 + y1)),
                0.5 * (x1 - x0), 0.5 * (y1 - y0))


def _load_coeffs(source):
    """Third-order coefficients from a JSON file path or inline literal."""
    text = str(source)
    if "{" not in text:
        with open(text, "r", encoding="utf-8") as fh:
            text = fh.read()
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON: {exc}") from exc
    return boussinesq.ThirdOrderCoeffs.from_json(obj)


def _integrator(args):
    return IntegratorConfig(rel_tol=args.rel_tol, abs_tol=args.abs_tol)


def _threads(args):
    env = os.environ.get("HILLBANDS_THREADS")
    if env is not None:
        try:
            return max(1, int(env))
        except ValueError:
            raise ConfigError(
                f"HILLBANDS_THREADS must be an integer, got {env!r}") from None
    return max(1, args.threads)


def _pmap(fn, items, workers):
    """Map preserving order; sharded over a thread pool when workers > 1."""
    items = list(items)
    if workers > 1 and len(items) > 1:
        from concurrent.futures import ThreadPoolExecutor
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(fn, items))
    return [fn(x) for x in items]


# ---------------------------------------------------------------------------
# Output

def _cell(v):
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(v)
    return str(v)


def _render_csv(command, header, rows):
    buf = io.StringIO()
    buf.write(f"# schema_version={SCHEMA_VERSION} command={command}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_cell(v) for v in row])
    return buf.getvalue()


def _emit(args, payload, header, rows):
    if args.format == "csv":
        text = _render_csv(payload["command"], header, rows)
    else:
        text = json.dumps(payload, indent=2, allow_nan=False) + "\n"
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def _payload(command, config, **body):
    out = {"schema_version": SCHEMA_VERSION, "command": command,
           "config": config}
    out.update(body)
    return out


def _core_config(args, input_obj=None, **extra):
    cfg = {"rel_tol": args.rel_tol, "abs_tol": args.abs_tol,
           "format": args.format, "threads": _threads(args)}
    if input_obj is not None:
        cfg["input"] = input_obj
    cfg.update({k: v for k, v in extra.items() if v is not None})
    return cfg


def _eig_record(e):
    return {"problem": e.problem.value, "k": e.k, "re": e.lam.real,
            "im": e.lam.imag, "multiplicity": e.multiplicity,
            "index": e.index, "residual": e.residual}


def _sort_records(records):
    return sorted(records, key=lambda r: (r["re"], r["im"]))


# ---------------------------------------------------------------------------
# Commands

def cmd_eigs(args):
    spec = load_potential(args.potential)
    cfg = _integrator(args)
    if args.rect is not None:
        region = _parse_rect(args.rect)
        region_echo, rect_echo = None, args.rect
    else:
        region = _parse_interval(args.region)
        region_echo, rect_echo = list(region), None
    problem = args.problem
    if problem == "quasi":
        if args.k is None:
            raise ConfigError("--problem quasi needs --k")
        eigs = quasi_spectrum(spec, args.k, region, cfg)
    elif problem in ("periodic", "antiperiodic", "two-periodic"):
        eigs = two_periodic_spectrum(spec, region, cfg)
        if problem != "two-periodic":
            want = Problem.PERIODIC if problem == "periodic" \
                else Problem.ANTIPERIODIC
            eigs = [e for e in eigs if e.problem is want]
    elif problem == "dirichlet":
        eigs = dirichlet_spectrum(spec, region, cfg)
    elif problem == "neumann":
        eigs = neumann_spectrum(spec, region, cfg)
    else:
        dn, nd = mixed_spectra(spec, region, cfg)
        eigs = dn if problem == "mixed-dn" else nd
    records = _sort_records([_eig_record(e) for e in eigs])
    config = _core_config(args, spec.to_json(), problem=problem, k=args.k,
                          region=region_echo, rect=rect_echo)
    payload = _payload("eigs", config, records=records)
    header = ("problem", "k", "re", "im", "multiplicity", "index", "residual")
    rows = [tuple(r[h] for h in header) for r in records]
    return _emit(args, payload, header, rows)


def cmd_bands(args):
    spec = load_potential(args.potential)
    cfg = _integrator(args)
    region = _parse_interval(args.region)
    workers = _threads(args)
    if args.format == "csv" and args.k_samples < 2:
        raise ConfigError("csv band output tabulates lambda_n(k); "
                          "pass --k-samples >= 2")
    bs = assemble_bands(spec, region, cfg)
    config = _core_config(args, spec.to_json(), region=list(region),
                          k_samples=args.k_samples or None)
    body = {"certified": bs.certified,
            "start_index": bs.start_index,
            "bands": [list(b) for b in bs.bands],
            "gaps": [list(g) for g in bs.gaps]}
    rows = []
    if not bs.certified:
        body["warning"] = ("no reality certificate covers the region; "
                           "raw zeros reported instead of bands")
        body["raw"] = _sort_records([_eig_record(e) for e in bs.raw])
        print("hillbands: bands refused (region not certified real); "
              "emitting raw zeros", file=sys.stderr)
    elif args.k_samples >= 2:
        ks = [j * math.pi / (args.k_samples - 1)
              for j in range(args.k_samples)]
        saved = os.environ.get("HILLBANDS_THREADS")
        os.environ["HILLBANDS_THREADS"] = str(workers)
        try:
            table = band_functions(spec, ks, region, cfg)
        finally:
            if saved is None:
                del os.environ["HILLBANDS_THREADS"]
            else:
                os.environ["HILLBANDS_THREADS"] = saved
        body["curves"] = {"k_grid": list(table.k_grid),
                          "curves": [list(c) for c in table.curves],
                          "trends": list(table.trends),
                          "flags": list(table.flags)}
        for i, curve in enumerate(table.curves):
            rows.extend((k, i + 1, lam) for k, lam in zip(table.k_grid, curve))
    payload = _payload("bands", config, **body)
    return _emit(args, payload, ("k", "band_index", "lambda"), rows)


def cmd_discriminant(args):
    spec = load_potential(args.potential)
    cfg = _integrator(args)
    a, b = _parse_interval(args.region)
    if args.samples < 2:
        raise ConfigError("--samples must be at least 2")
    lams = [float(x) for x in np.linspace(a, b, args.samples)]
    samples = _pmap(lambda lam: lyapunov.discriminant(spec, lam, cfg),
                    lams, _threads(args))
    records = [{"lambda": lam, "re_delta": s.delta.real,
                "im_delta": s.delta.imag, "re_ddelta": s.ddelta.real,
                "im_ddelta": s.ddelta.imag}
               for lam, s in zip(lams, samples)]
    config = _core_config(args, spec.to_json(), region=[a, b],
                          samples=args.samples)
    payload = _payload("discriminant", config, records=records)
    header = ("lambda", "re_delta", "im_delta", "re_ddelta", "im_ddelta")
    rows = [tuple(r[h] for h in header) for r in records]
    return _emit(args, payload, header, rows)


def cmd_certify(args):
    spec = load_potential(args.potential)
    if args.halfplane is not None:
        cert = certify_halfplane(spec, args.halfplane)
        mode = {"halfplane": args.halfplane}
    elif args.strip is not None:
        parts = args.strip.split(":")
        if len(parts) not in (3, 4):
            raise ConfigError("--strip takes a:b:r or a:b:r:phi")
        try:
            nums = [float(p) for p in parts]
        except ValueError:
            raise ConfigError(f"--strip parts must be numbers: "
                              f"{args.strip!r}") from None
        phi = nums[3] if len(nums) == 4 else 2.0 - math.sqrt(3.0)
        cert = certify_strip(spec, nums[0], nums[1], nums[2], phi)
        mode = {"strip": args.strip}
    else:
        cert = certify_derivative_strip(spec, _parse_interval(args.interval))
        mode = {"interval": args.interval}
    config = _core_config(args, spec.to_json(), **mode)
    payload = _payload("certify", config, certificate=cert.to_json())
    header = ("kind", "certified", "xi", "threshold", "margin", "reason")
    rows = [(cert.kind, cert.certified, cert.xi_value, cert.threshold,
             cert.margin, cert.reason)]
    return _emit(args, payload, header, rows)


def _default_forcing(x):
    return math.cos(2.0 * math.pi * x)


def cmd_resolvent_check(args):
    spec = load_potential(args.potential)
    cfg = _integrator(args)
    try:
        lams = [float(p) for p in args.lam.split(",") if p.strip()]
    except ValueError:
        raise ConfigError(f"--lam takes comma-separated reals: {args.lam!r}") \
            from None
    if not lams:
        raise ConfigError("--lam must list at least one energy")

    def residual_pair(lam):
        kq = green_quasi(spec, args.k, lam, mesh=args.mesh, cfg=cfg)
        kd = green_dirichlet(spec, lam, mesh=args.mesh, cfg=cfg)
        return (resolvent_residual(kq, _default_forcing),
                resolvent_residual(kd, _default_forcing))

    pairs = _pmap(residual_pair, lams, _threads(args))
    records = []
    for lam, (rq, rd) in zip(lams, pairs):
        records.append({"kernel": "quasi", "k": args.k, "lambda": lam,
                        "residual": rq})
        records.append({"kernel": "dirichlet", "k": None, "lambda": lam,
                        "residual": rd})
    records.sort(key=lambda r: (r["lambda"], r["kernel"]))
    config = _core_config(args, spec.to_json(), k=args.k, lam=args.lam,
                          mesh=args.mesh)
    payload = _payload("resolvent-check", config, records=records)
    header = ("kernel", "k", "lambda", "residual")
    rows = [tuple(r[h] for h in header) for r in records]
    return _emit(args, payload, header, rows)


def cmd_boussinesq(args):
    coeffs = _load_coeffs(args.coeffs)
    cfg = _integrator(args)
    if args.subcommand == "reduce":
        spec, lam = boussinesq.reduce_to_hill(coeffs, args.zeta, cfg,
                                              nodes=args.nodes)
        config = _core_config(args, coeffs.to_json(), zeta=args.zeta,
                              nodes=args.nodes)
        payload = _payload("boussinesq-reduce", config,
                           lam={"re": lam.real, "im": lam.imag},
                           potential=spec.to_json())
        header = ("x", "re_v", "im_v", "re_dv", "im_dv")
        rows = [(float(x), v.real, v.imag, d.real, d.imag)
                for x, v, d in zip(spec.x_nodes, spec.v_vals, spec.dv_vals)]
        return _emit(args, payload, header, rows)
    if args.region is not None:
        region = _parse_interval(args.region)
        region_echo, nmax_echo = list(region), None
    else:
        region = (boussinesq.window_edges(1)[0],
                  boussinesq.window_edges(args.n_max)[1])
        region_echo, nmax_echo = None, args.n_max
    finder = boussinesq.ramifications if args.subcommand == "ramifications" \
        else boussinesq.three_point_eigenvalues
    zeros = finder(coeffs, region, cfg)
    records = _sort_records(
        [{"re": z.lam.real, "im": z.lam.imag, "multiplicity": z.multiplicity,
          "window": boussinesq.window_index(z.lam), "residual": z.residual}
         for z in zeros])
    config = _core_config(args, coeffs.to_json(), region=region_echo,
                          n_max=nmax_echo)
    payload = _payload(f"boussinesq-{args.subcommand}", config,
                       records=records)
    header = ("re", "im", "multiplicity", "window", "residual")
    rows = [tuple(r[h] for h in header) for r in records]
    return _emit(args, payload, header, rows)


def cmd_verify(args):
    suite = args.suite
    if not os.path.exists(suite):
        raise ConfigError(f"verification suite not found: {suite!r}")
    proc = subprocess.run([sys.executable, "-m", "pytest", suite, "-v"])
    if proc.returncode == 0:
        return 0
    if proc.returncode == 4:  # pytest usage error
        raise ConfigError(f"pytest could not run the suite {suite!r}")
    return 2


# ---------------------------------------------------------------------------
# Replay

def replay_argv(payload):
    """Argument vector reproducing an emitted JSON run bit for bit.

    Values are joined to their flags with '=' so entries that begin with a
    minus sign (negative interval endpoints, energies) survive argparse.
    """
    cfg = payload["config"]
    command = payload["command"]
    sub = None
    if command.startswith("boussinesq-"):
        command, sub = "boussinesq", command.split("-", 1)[1]
    argv = [command] + ([sub] if sub else [])
    inline = json.dumps(cfg["input"], sort_keys=True, separators=(",", ":"))
    argv.append(("--coeffs=" if command == "boussinesq" else "--potential=")
                + inline)
    if cfg.get("problem") is not None:
        argv.append("--problem=" + cfg["problem"])
    if cfg.get("k") is not None:
        argv.append(f"--k={cfg['k']!r}")
    if cfg.get("region") is not None:
        a, b = cfg["region"]
        argv.append(f"--region={a!r}:{b!r}")
    for key, flag in (("rect", "--rect"), ("strip", "--strip"),
                      ("interval", "--interval"), ("lam", "--lam")):
        if cfg.get(key) is not None:
            argv.append(f"{flag}={cfg[key]}")
    for key, flag in (("halfplane", "--halfplane"), ("zeta", "--zeta")):
        if cfg.get(key) is not None:
            argv.append(f"{flag}={cfg[key]!r}")
    for key, flag in (("k_samples", "--k-samples"), ("samples", "--samples"),
                      ("mesh", "--mesh"), ("nodes", "--nodes"),
                      ("n_max", "--n-max")):
        if cfg.get(key) is not None:
            argv.append(f"{flag}={cfg[key]}")
    argv += [f"--rel-tol={cfg['rel_tol']!r}", f"--abs-tol={cfg['abs_tol']!r}",
             "--format=" + cfg["format"], f"--threads={cfg['threads']}"]
    return argv


# ---------------------------------------------------------------------------
# Parser

def _add_common(sp, potential=True):
    if potential:
        sp.add_argument("--potential", default='{"family": "zero"}',
                        help="potential JSON file or inline literal "
                             "(default: zero)")
    sp.add_argument("--rel-tol", type=float, default=DEFAULT_CONFIG.rel_tol)
    sp.add_argument("--abs-tol", type=float, default=DEFAULT_CONFIG.abs_tol)
    sp.add_argument("--format", "-f", choices=("json", "csv"),
                    default="json")
    sp.add_argument("--output", "-o", default=None,
                    help="write to this path instead of stdout")
    sp.add_argument("--threads", type=int, default=1,
                    help="worker pool size (HILLBANDS_THREADS overrides)")


def build_parser():
    p = _Parser(prog="hillbands",
                description="Certified Hill-operator spectra and the "
                            "third-order pipeline")
    sub = p.add_subparsers(dest="command", required=True,
                           parser_class=_Parser)

    eigs = sub.add_parser("eigs", help="eigenvalues of one spectral problem")
    eigs.add_argument("--problem", required=True, choices=_PROBLEMS)
    eigs.add_argument("--region", default="-0.5:120",
                      help="real search interval a:b (write --region=a:b "
                           "when a is negative)")
    eigs.add_argument("--rect", default=None,
                      help="complex search rectangle x0:x1:y0:y1")
    eigs.add_argument("--k", type=float, default=None,
                      help="quasi-momentum for --problem quasi")
    _add_common(eigs)
    eigs.set_defaults(fn=cmd_eigs)

    bands = sub.add_parser("bands",
                           help="band/gap decomposition and lambda_n(k)")
    bands.add_argument("--region", required=True)
    bands.add_argument("--k-samples", type=int, default=0,
                       help="tabulate lambda_n(k) on this many k in [0, pi]")
    _add_common(bands)
    bands.set_defaults(fn=cmd_bands)

    disc = sub.add_parser("discriminant",
                          help="Delta trace over a lambda grid")
    disc.add_argument("--region", required=True)
    disc.add_argument("--samples", type=int, default=129)
    _add_common(disc)
    disc.set_defaults(fn=cmd_discriminant)

    cert = sub.add_parser("certify", help="reality certificates")
    grp = cert.add_mutually_exclusive_group(required=True)
    grp.add_argument("--halfplane", type=float, default=None,
                     help="certify Re lambda > a + rho from the line Re = a")
    grp.add_argument("--strip", default=None,
                     help="strip certificate a:b:r[:phi]; b may be inf")
    grp.add_argument("--interval", default=None,
                     help="real-interval derivative certificate a:b")
    _add_common(cert)
    cert.set_defaults(fn=cmd_certify)

    res = sub.add_parser("resolvent-check",
                         help="Green kernel residuals at sample energies")
    res.add_argument("--lam", required=True,
                     help="comma-separated real energies")
    res.add_argument("--k", type=float, default=1.0,
                     help="quasi-momentum of the quasi-periodic kernel")
    res.add_argument("--mesh", type=int, default=2000)
    _add_common(res)
    res.set_defaults(fn=cmd_resolvent_check)

    bsq = sub.add_parser("boussinesq", help="third-order pipeline")
    bsub = bsq.add_subparsers(dest="subcommand", required=True,
                              parser_class=_Parser)
    for name, blurb in (("ramifications", "discriminant zeros by window"),
                        ("threepoint", "three-point eigenvalues by window")):
        s = bsub.add_parser(name, help=blurb)
        s.add_argument("--coeffs", required=True,
                       help="coefficient JSON file or inline literal")
        s.add_argument("--n-max", type=int, default=6,
                       help="scan windows 1..N (ignored with --region)")
        s.add_argument("--region", default=None,
                       help="explicit energy interval a:b")
        _add_common(s, potential=False)
        s.set_defaults(fn=cmd_boussinesq)
    red = bsub.add_parser("reduce",
                          help="Hill potential of the dominant Floquet "
                               "solution at one energy")
    red.add_argument("--coeffs", required=True)
    red.add_argument("--zeta", type=float, required=True)
    red.add_argument("--nodes", type=int, default=64)
    _add_common(red, potential=False)
    red.set_defaults(fn=cmd_boussinesq)

    ver = sub.add_parser("verify", help="run the acceptance suite")
    ver.add_argument("--suite", default="tests/test_acceptance.py")
    ver.set_defaults(fn=cmd_verify)
    return p


def main(argv=None):
    try:
        args = build_parser().parse_args(argv)
        return args.fn(args)
    except (ConfigError, DomainError, UnsupportedRegionError, OSError) as exc:
        print(f"hillbands: {exc}", file=sys.stderr)
        return 1
    except HillbandsError as exc:
        print(f"hillbands: numerical failure: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
