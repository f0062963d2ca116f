"""Command line front end: ``lct {gamma,kernel,wick,transfer,filter,verify}``.

Every flag has a config-file key (the flag name without dashes, '-' or '_'
both accepted) in a line-based ``key = value`` file given by --config;
flags given on the command line win over the file.

Exit codes: 0 success, 1 verification failure, 2 configuration error,
3 quadrature non-convergence, 4 signal input/output failure.
"""
from __future__ import annotations

import argparse
import os
import sys
import time

import numpy as np

from .csvio import format_csv, write_csv
from .quadrature import ConvergenceError

EXIT_VERIFY, EXIT_CONFIG, EXIT_QUADRATURE, EXIT_SIGNAL = 1, 2, 3, 4


class ConfigError(ValueError):
    pass


class SignalIOError(OSError):
    pass


# ---------------------------------------------------------------------------
# option tables: name -> (type, default, help) per subcommand
# ---------------------------------------------------------------------------

COMMON = {
    "tol": (float, None, "quadrature tolerance (default: LCT_TOL or 1e-12)"),
}
OPTIONS = {
    "gamma": {
        "symbol": (str, "constant:1", "vertical symbol, kind[:param[,param]]"),
        "k": (int, 0, "level k >= 0"),
        "grid": (str, "log:0.01:50:200", "xi grid, lin|log:min:max:count"),
        "method": (str, "quadrature", "auto, quadrature, series or closed_form"),
        "output": (str, "-", "output CSV path, '-' for stdout"),
        "plot_stub": (str, None, "also write a matplotlib script plotting the output"),
    },
    "kernel": {
        "symbol": (str, None, "vertical symbol a for C_{a,k}; omitted gives B_k"),
        "k": (int, 0, "level k >= 0"),
        "grid": (str, "log:0.1:10:20", "xi grid"),
        "t_grid": (str, None, "t grid (default: same as --grid)"),
        "output": (str, "-", "output CSV path"),
        "plot_stub": (str, None, "also write a plotting script"),
    },
    "wick": {
        "symbol": (str, "constant:1", "vertical symbol a"),
        "symbol2": (str, None, "second symbol b: write the star product of a and b"),
        "k": (int, 0, "level k >= 0"),
        "grid": (str, "log:0.1:10:50", "v grid"),
        "output": (str, "-", "output CSV path"),
        "plot_stub": (str, None, "also write a plotting script"),
    },
    "transfer": {
        "map": (str, "delta:1", "delta:lam, delta_inverse:lam, transfer:lam1,lam2 or nabla:lam"),
        "symbol": (str, "constant:1", "symbol for nabla"),
        "k": (int, 0, "level for nabla"),
        "grid": (str, "lin:0:1:101", "x grid in [0, 1]"),
        "output": (str, "-", "output CSV path"),
        "plot_stub": (str, None, "also write a plotting script"),
    },
    "filter": {
        "input": (str, None, "input signal CSV with columns t,re[,im]"),
        "output": (str, "-", "output signal CSV path"),
        "symbol": (str, "constant:1", "vertical symbol a"),
        "k": (int, 0, "level k >= 0"),
        "per_decade": (int, 64, "scales per decade"),
        "scale_tol": (float, 1e-4, "admissibility mass allowed to fall off the scale grid"),
    },
    "verify": {
        "only": (str, None, "comma list of groups or criterion numbers"),
        "tolerance_override": (str, None, "tolerance for every check, or N=tol,N=tol"),
    },
}


def build_parser():
    p = argparse.ArgumentParser(prog="lct", description="Calderon-Toeplitz operators on Laguerre wavelet subspaces")
    sub = p.add_subparsers(dest="command", required=True)
    for name, opts in OPTIONS.items():
        sp = sub.add_parser(name)
        sp.add_argument("--config", default=None, help="key = value configuration file")
        for key, (typ, default, help_) in {**opts, **COMMON}.items():
            d = f" (default {default})" if default is not None else ""
            sp.add_argument("--" + key.replace("_", "-"), dest=key, default=None, help=help_ + d)
    return p


def read_config(path):
    out = {}
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    for i, line in enumerate(lines, 1):
        s = line.strip()
        if not s or s.startswith("#"):
            continue
        key, eq, val = s.partition("=")
        if not eq:
            raise ConfigError(f"{path}:{i}: expected 'key = value'")
        out[key.strip().replace("-", "_")] = val.strip()
    return out


def resolve(args):
    """Merge flags, config file and defaults into a dict of typed values."""
    opts = {**OPTIONS[args.command], **COMMON}
    cfg = read_config(args.config) if args.config else {}
    unknown = set(cfg) - set(opts)
    if unknown:
        raise ConfigError(f"unknown config keys for {args.command}: {', '.join(sorted(unknown))}")
    conf = {}
    for key, (typ, default, _) in opts.items():
        raw = getattr(args, key)
        if raw is None:
            raw = cfg.get(key)
        if raw is None:
            conf[key] = default
            continue
        try:
            conf[key] = typ(raw)
        except ValueError:
            raise ConfigError(f"bad value for {key}: {raw!r}") from None
    if "k" in conf and conf["k"] < 0:
        raise ConfigError("k must be >= 0")
    if conf.get("tol") is not None and not conf["tol"] > 0:
        raise ConfigError("tol must be positive")
    return conf


def parse_grid(text):
    """``lin:min:max:count`` or ``log:min:max:count``; count 1 needs min == max."""
    parts = text.split(":")
    if len(parts) != 4 or parts[0] not in ("lin", "log"):
        raise ConfigError(f"bad grid {text!r}; expected lin|log:min:max:count")
    try:
        lo, hi, n = float(parts[1]), float(parts[2]), int(parts[3])
    except ValueError:
        raise ConfigError(f"bad grid {text!r}") from None
    if parts[0] == "log" and lo <= 0:
        raise ConfigError("log grid needs min > 0")
    if n == 1 and lo == hi:
        return np.array([lo])
    if not lo < hi:
        raise ConfigError("grid min must be below max")
    if n < 2:
        raise ConfigError("grid count must be >= 2")
    if parts[0] == "log":
        return np.geomspace(lo, hi, n)
    return np.linspace(lo, hi, n)


def parse_symbol(text):
    from .symbols import VerticalSymbol
    try:
        return VerticalSymbol.parse(text)
    except (ValueError, OSError) as exc:
        raise ConfigError(str(exc)) from None


def emit(path, header, columns, plot_stub=None):
    if path in (None, "-"):
        sys.stdout.write(format_csv(header, columns))
    else:
        write_csv(path, header, columns)
        if plot_stub:
            write_plot_stub(plot_stub, path, header)


def write_plot_stub(script, csv_path, header):
    x, ys = header[0], [h for h in header[1:] if h in ("re", "im", "value", "abs_dev")]
    lines = ["import csv", "import matplotlib.pyplot as plt", "",
             f"rows = list(csv.DictReader(open({os.path.abspath(csv_path)!r})))",
             f"x = [float(r[{x!r}]) for r in rows]"]
    for y in ys:
        lines.append(f"plt.plot(x, [float(r[{y!r}]) for r in rows], label={y!r})")
    lines += [f"plt.xlabel({x!r})", "plt.legend()", "plt.show()", ""]
    with open(script, "w", encoding="utf-8", newline="") as fh:
        fh.write("\n".join(lines))


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def run_gamma(conf):
    from .spectral import SpectralFunction, gamma_closed_form, has_closed_form
    sym = parse_symbol(conf["symbol"])
    xi = parse_grid(conf["grid"])
    if xi[0] <= 0:
        raise ConfigError("xi grid must be positive")
    method = None if conf["method"] == "auto" else conf["method"]
    try:
        s = SpectralFunction(sym, conf["k"], method)
    except (ValueError, LookupError) as exc:
        raise ConfigError(str(exc)) from None
    res = [s.result(x) for x in xi]
    bad = [r for r in res if not r.converged]
    if bad:
        raise ConvergenceError(bad[0])
    val = np.array([r.value for r in res])
    header = ["xi", "re", "im", "err_estimate"]
    cols = [xi, val.real, val.imag, [r.error_estimate for r in res]]
    if has_closed_form(sym.kind, conf["k"]):
        cf = np.asarray(gamma_closed_form(sym, conf["k"], xi), dtype=complex)
        header += ["cf_re", "cf_im", "abs_dev"]
        cols += [cf.real, cf.imag, np.abs(cf - val)]
    emit(conf["output"], header, cols, conf["plot_stub"])


def run_kernel(conf):
    from .operators import b_kernel, c_kernel
    xi = parse_grid(conf["grid"])
    t = parse_grid(conf["t_grid"]) if conf["t_grid"] else xi
    if xi[0] <= 0 or t[0] <= 0:
        raise ConfigError("kernel grids must be positive")
    X, T = np.meshgrid(xi, t, indexing="ij")
    X, T = X.ravel(), T.ravel()
    if conf["symbol"] is None:
        val = np.asarray(b_kernel(conf["k"], X, T), dtype=complex)
    else:
        a = parse_symbol(conf["symbol"])
        val = np.array([c_kernel(a, conf["k"], x, y) for x, y in zip(X, T)])
    emit(conf["output"], ["xi", "t", "re", "im"], [X, T, val.real, val.imag], conf["plot_stub"])


def run_wick(conf):
    from .operators import WickData, star_product, wick_symbol
    from .spectral import SpectralFunction
    a = parse_symbol(conf["symbol"])
    v = parse_grid(conf["grid"])
    if v[0] <= 0:
        raise ConfigError("v grid must be positive")
    k = conf["k"]
    if conf["symbol2"]:
        ga = SpectralFunction(a, k)
        gb = SpectralFunction(parse_symbol(conf["symbol2"]), k)
        val = np.array([star_product(ga, gb, k, x) for x in v])
    else:
        w = WickData(k, a)
        val = np.array([wick_symbol(w, x) for x in v])
    emit(conf["output"], ["v", "re", "im"], [v, val.real, val.imag], conf["plot_stub"])


def _transfer_map(conf):
    from .calculus import TransferMap
    kind, _, arg = conf["map"].partition(":")
    try:
        lams = [float(a) for a in arg.split(",")] if arg else []
        if kind in ("delta", "delta_inverse", "nabla") and len(lams) == 1:
            if kind == "nabla":
                return TransferMap("nabla", lams[0], parse_symbol(conf["symbol"]), conf["k"])
            return TransferMap(kind, lams[0])
        if kind == "transfer" and len(lams) == 2:
            return TransferMap.transfer(*lams)
    except ValueError as exc:
        raise ConfigError(f"bad map {conf['map']!r}: {exc}") from None
    raise ConfigError(f"bad map {conf['map']!r}")


def run_transfer(conf):
    m = _transfer_map(conf)
    x = parse_grid(conf["grid"])
    if x[0] < 0 or x[-1] > 1:
        raise ConfigError("x grid must lie in [0, 1]")
    try:
        y = np.asarray(m(x), dtype=complex)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    if np.any(y.imag):
        emit(conf["output"], ["x", "value", "im"], [x, y.real, y.imag], conf["plot_stub"])
    else:
        emit(conf["output"], ["x", "value"], [x, y.real], conf["plot_stub"])


def run_filter(conf):
    from .filtering import filter_signal
    from .wavelet import SampledSignal
    if not conf["input"]:
        raise ConfigError("filter needs --input")
    sym = parse_symbol(conf["symbol"])
    if conf["per_decade"] < 2 or not conf["scale_tol"] > 0:
        raise ConfigError("per-decade must be >= 2 and scale-tol positive")
    try:
        sig = SampledSignal.from_csv(conf["input"])
    except (OSError, ValueError) as exc:
        raise SignalIOError(f"cannot read signal: {exc}") from None
    out, _ = filter_signal(sig, sym, conf["k"], conf["per_decade"], conf["scale_tol"])
    header = ["t", "re", "im"]
    cols = [out.times, out.samples.real, out.samples.imag]
    try:
        emit(conf["output"], header, cols)
    except OSError as exc:
        raise SignalIOError(f"cannot write signal: {exc}") from None


def _parse_override(text):
    if text is None:
        return None
    try:
        if "=" not in text:
            return float(text)
        out = {}
        for item in text.split(","):
            n, _, tol = item.partition("=")
            out[int(n)] = float(tol)
        return out
    except ValueError:
        raise ConfigError(f"bad tolerance override {text!r}") from None


def run_verify(conf):
    from .verify import format_check, run_checks, select
    only = conf["only"].split(",") if conf["only"] else None
    try:
        select(only)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    override = _parse_override(conf["tolerance_override"])
    t0 = time.perf_counter()
    checks = run_checks(only, override, report=lambda c: print(format_check(c), flush=True))
    failed = [c for c in checks if not c.passed]
    dt = time.perf_counter() - t0
    print(f"{len(checks) - len(failed)}/{len(checks)} checks passed in {dt:.1f} s")
    for c in failed:
        crit = f"criterion {c.criterion}" if c.criterion is not None else "invariant"
        print(f"failed: {crit}: {c.name}")
    return EXIT_VERIFY if failed else 0


COMMANDS = {"gamma": run_gamma, "kernel": run_kernel, "wick": run_wick, "transfer": run_transfer,
            "filter": run_filter, "verify": run_verify}


def main(argv=None):
    args = build_parser().parse_args(argv)
    saved = os.environ.get("LCT_TOL")
    try:
        conf = resolve(args)
        if conf["tol"] is not None:
            # the default tolerance is read from LCT_TOL; scope it to this run
            os.environ["LCT_TOL"] = repr(conf["tol"])
        return COMMANDS[args.command](conf) or 0
    except ConfigError as exc:
        print(f"lct: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ConvergenceError as exc:
        print(f"lct: quadrature did not converge: {exc}", file=sys.stderr)
        return EXIT_QUADRATURE
    except SignalIOError as exc:
        print(f"lct: {exc}", file=sys.stderr)
        return EXIT_SIGNAL
    finally:
        if saved is None:
            os.environ.pop("LCT_TOL", None)
        else:
            os.environ["LCT_TOL"] = saved


if __name__ == "__main__":
    sys.exit(main())
