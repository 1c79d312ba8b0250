"""Command-line front end.

Every subcommand writes CSV (or JSON for sweep profiles) to stdout or
``--out``. Exit status: 0 on success, 2 on usage errors, 1 on runtime errors.
"""

from __future__ import annotations

import argparse
import contextlib
import csv
import io
import json
import sys

import numpy as np

from . import analysis, channel, core, modem, pulsone, zak
from .core import ChannelMode, FrameParams

FIG7_NAME = "fig7"


def _num(v: float) -> str:
    return f"{v:.16e}"


def _flag(b: bool) -> str:
    return "true" if b else "false"


def _frame_args(p: argparse.ArgumentParser, tau_p: bool = True) -> None:
    p.add_argument("--M", type=int, required=True, help="delay bins per period")
    p.add_argument("--N", type=int, required=True, help="Doppler bins per period")
    if tau_p:
        p.add_argument("--tau-p", type=float, default=1e-3, help="delay period in seconds (default 1e-3)")


def _out_arg(p: argparse.ArgumentParser) -> None:
    p.add_argument("--out", help="output path (default: stdout)")


def _channel_args(p: argparse.ArgumentParser, required: bool = True) -> None:
    p.add_argument("--channel", required=required, help=f"ChannelSpec JSON file, or '{FIG7_NAME}'")
    p.add_argument("--mode", choices=[m.value for m in ChannelMode], help="override the channel's mode")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="zakdd", description="Zak-OTFS delay-Doppler toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("transform", help="apply a Zak/Fourier transform to a signal")
    _frame_args(p)
    p.add_argument("--op", required=True, choices=["dzt", "idzt", "freq-realize", "freq-invert", "dft"])
    p.add_argument("--input", help="input CSV; TD/FD: index,re,im; DD: k,l,re,im (default: random)")
    p.add_argument("--seed", type=int, default=0)
    _out_arg(p)

    p = sub.add_parser("pulsone", help="TD/FD realization of a single DD pulse")
    _frame_args(p)
    p.add_argument("--k0", type=int, required=True)
    p.add_argument("--l0", type=int, required=True)
    p.add_argument("--domain", choices=["td", "fd", "dd"], default="td")
    _out_arg(p)

    p = sub.add_parser("channel", help="apply a channel to a TD signal")
    _frame_args(p)
    _channel_args(p)
    p.add_argument("--input", help="TD signal CSV index,re,im (default: random)")
    p.add_argument("--noise-power", type=float, default=0.0)
    p.add_argument("--seed", type=int, default=0)
    _out_arg(p)

    p = sub.add_parser("simulate", help="run one frame through a TDM/FDM/OTFS link")
    _frame_args(p)
    _channel_args(p)
    p.add_argument("--modem", choices=[k.value for k in modem.ModemKind], default="otfs")
    p.add_argument("--filter", default="delta", help="'delta' or 'rc:<a>,<b>'")
    p.add_argument("--noise-power", type=float, default=0.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--probe-index", type=int, default=0, help="linear symbol index to probe")
    _out_arg(p)

    p = sub.add_parser("sweep", help="crystallization sweep over the delay period")
    _frame_args(p, tau_p=False)
    _channel_args(p)
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--tau-p-list", help="comma-separated delay periods in seconds")
    group.add_argument("--tau-p-range", help="lo,hi,count: log-spaced delay periods")
    p.add_argument("--filter", default="delta", help="'delta' or 'rc:<a>,<b>'")
    p.add_argument("--profiles-json", help="also write every row's power profile to this JSON file")
    _out_arg(p)

    p = sub.add_parser("selftest", help="run the embedded oracle suite")
    _out_arg(p)
    return parser


# --- I/O helpers ------------------------------------------------------------


def _read_rows(path: str, columns: list[str]) -> list[dict]:
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        missing = [c for c in columns if c not in (reader.fieldnames or [])]
        if missing:
            raise ValueError(f"{path}: missing column(s) {', '.join(missing)}")
        rows = list(reader)
    for i, row in enumerate(rows):
        for c in columns:
            try:
                float(row[c])
            except (TypeError, ValueError):
                raise ValueError(f"{path}: row {i + 1}, column {c}: not a number: {row[c]!r}") from None
    return rows


def _read_vector(path: str, size: int) -> np.ndarray:
    rows = _read_rows(path, ["index", "re", "im"])
    out = np.zeros(size, dtype=complex)
    seen = set()
    for row in rows:
        n = int(float(row["index"]))
        if not 0 <= n < size or n in seen:
            raise ValueError(f"{path}: index {n} out of range or repeated (expected 0..{size - 1})")
        seen.add(n)
        out[n] = complex(float(row["re"]), float(row["im"]))
    if len(seen) != size:
        raise ValueError(f"{path}: expected {size} rows, got {len(seen)}")
    return out


def _read_grid(path: str, fp: FrameParams) -> np.ndarray:
    rows = _read_rows(path, ["k", "l", "re", "im"])
    out = np.zeros((fp.M, fp.N), dtype=complex)
    if len(rows) != fp.size:
        raise ValueError(f"{path}: expected {fp.size} rows, got {len(rows)}")
    for row in rows:
        k, l = int(float(row["k"])), int(float(row["l"]))
        if not (0 <= k < fp.M and 0 <= l < fp.N):
            raise ValueError(f"{path}: cell ({k}, {l}) outside the {fp.M}x{fp.N} grid")
        out[k, l] = complex(float(row["re"]), float(row["im"]))
    return out


def _random(seed: int, shape) -> np.ndarray:
    rng = np.random.default_rng(seed)
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2)


def _write_vector(w, values) -> None:
    w.writerow(["index", "re", "im"])
    for n, v in enumerate(values):
        w.writerow([n, _num(v.real), _num(v.imag)])


def _write_grid(w, grid) -> None:
    w.writerow(["k", "l", "re", "im"])
    M, N = grid.shape
    for k in range(M):
        for l in range(N):
            v = grid[k, l]
            w.writerow([k, l, _num(v.real), _num(v.imag)])


def _load_channel(args) -> core.ChannelSpec:
    if args.channel == FIG7_NAME:
        chan = channel.fig7_channel()
    else:
        chan = core.load_channel(args.channel)
    if args.mode:
        chan = chan.with_mode(args.mode)
    return chan


@contextlib.contextmanager
def _output(path):
    if path:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            yield fh
    else:
        yield sys.stdout


# --- subcommands ------------------------------------------------------------


def _cmd_transform(args, out) -> int:
    fp = FrameParams(args.M, args.N, args.tau_p)
    w = csv.writer(out, lineterminator="\n")
    if args.op in ("idzt", "freq-realize"):
        grid = _read_grid(args.input, fp) if args.input else _random(args.seed, (fp.M, fp.N))
        X = core.DDSignal(fp, grid)
        result = zak.idzt(X).samples if args.op == "idzt" else zak.freq_realize(X).bins
        _write_vector(w, result)
        return 0
    vec = _read_vector(args.input, fp.size) if args.input else _random(args.seed, fp.size)
    if args.op == "dzt":
        _write_grid(w, zak.dzt(core.TimeSignal(fp, vec)).grid)
    elif args.op == "freq-invert":
        _write_grid(w, zak.freq_invert(core.FreqSignal(fp, vec)).grid)
    else:
        _write_vector(w, zak.unitary_dft(core.TimeSignal(fp, vec)).bins)
    return 0


def _cmd_pulsone(args, out) -> int:
    fp = FrameParams(args.M, args.N, args.tau_p)
    w = csv.writer(out, lineterminator="\n")
    if args.domain == "td":
        _write_vector(w, pulsone.pulsone_td(fp, args.k0, args.l0).samples)
    elif args.domain == "fd":
        _write_vector(w, pulsone.pulsone_fd(fp, args.k0, args.l0).bins)
    else:
        _write_grid(w, pulsone.dd_pulse(fp, args.k0, args.l0).grid)
    return 0


def _cmd_channel(args, out) -> int:
    fp = FrameParams(args.M, args.N, args.tau_p)
    chan = _load_channel(args)
    vec = _read_vector(args.input, fp.size) if args.input else _random(args.seed, fp.size)
    y = channel.apply_channel(chan, core.TimeSignal(fp, vec))
    y = channel.add_awgn(y, args.noise_power, args.seed)
    _write_vector(csv.writer(out, lineterminator="\n"), y.samples)
    return 0


def _cmd_simulate(args, out) -> int:
    fp = FrameParams(args.M, args.N, args.tau_p)
    chan = _load_channel(args)
    filters = modem.FilterSpec.parse(args.filter)
    kind = modem.ModemKind(args.modem)
    if not 0 <= args.probe_index < fp.size:
        raise ValueError(f"--probe-index must lie in [0, {fp.size}), got {args.probe_index}")
    rng = np.random.default_rng(args.seed)
    # unit-power QPSK-like symbols; the mapping itself is not part of the model
    tx = (rng.choice([-1.0, 1.0], fp.size) + 1j * rng.choice([-1.0, 1.0], fp.size)) / np.sqrt(2)
    rx = modem.transceive(kind, tx, chan, fp, filters, args.noise_power, args.seed + 1)
    if kind is modem.ModemKind.OTFS:
        probe_at = divmod(args.probe_index, fp.N)
    else:
        probe_at = args.probe_index
    probe = modem.effective_filter_probe(kind, chan, fp, filters, probe_at).reshape(fp.size)
    power = analysis.power_profile(kind, chan, fp, filters)
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["index", "k", "l", "tx_re", "tx_im", "rx_re", "rx_im", "probe_re", "probe_im", "power"])
    for i in range(fp.size):
        k, l = divmod(i, fp.N) if kind is modem.ModemKind.OTFS else (i, 0)
        w.writerow(
            [i, k, l]
            + [_num(v) for v in (tx[i].real, tx[i].imag, rx[i].real, rx[i].imag, probe[i].real, probe[i].imag, power[i])]
        )
    return 0


def _parse_taus(args) -> list[float]:
    if args.tau_p_list:
        try:
            return [float(t) for t in args.tau_p_list.split(",") if t.strip()]
        except ValueError:
            raise ValueError(f"--tau-p-list: not a list of numbers: {args.tau_p_list!r}") from None
    parts = args.tau_p_range.split(",")
    try:
        lo, hi, count = float(parts[0]), float(parts[1]), int(parts[2])
    except (ValueError, IndexError):
        raise ValueError(f"--tau-p-range: expected lo,hi,count, got {args.tau_p_range!r}") from None
    return list(np.logspace(np.log10(lo), np.log10(hi), count))


def _cmd_sweep(args, out) -> int:
    chan = _load_channel(args)
    filters = modem.FilterSpec.parse(args.filter)
    fps = [FrameParams(args.M, args.N, t) for t in _parse_taus(args)]
    rows = analysis.crystallization_sweep(chan, fps, filters)
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["tau_p_s", "nu_p_hz", "delay_ok", "doppler_ok", "max_over_min", "normalized_std"])
    for r in rows:
        w.writerow([_num(r.tau_p), _num(r.nu_p), _flag(r.delay_ok), _flag(r.doppler_ok), _num(r.max_over_min), _num(r.normalized_std)])
    if args.profiles_json:
        doc = {
            "M": args.M,
            "N": args.N,
            "filter": str(filters),
            "rows": [
                {
                    "tau_p_s": _num(r.tau_p),
                    "nu_p_hz": _num(r.nu_p),
                    "delay_ok": r.delay_ok,
                    "doppler_ok": r.doppler_ok,
                    "max_over_min": _num(r.max_over_min),
                    "normalized_std": _num(r.normalized_std),
                    "profile": [_num(v) for v in r.profile],
                }
                for r in rows
            ],
        }
        with open(args.profiles_json, "w", encoding="utf-8") as fh:
            json.dump(doc, fh, indent=1)
            fh.write("\n")
    return 0


def _cmd_selftest(args, out) -> int:
    from .selftest import run_selftest

    return 0 if run_selftest(out) else 1


COMMANDS = {
    "transform": _cmd_transform,
    "pulsone": _cmd_pulsone,
    "channel": _cmd_channel,
    "simulate": _cmd_simulate,
    "sweep": _cmd_sweep,
    "selftest": _cmd_selftest,
}


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        buf = io.StringIO()
        status = COMMANDS[args.command](args, buf)
        with _output(args.out) as fh:
            fh.write(buf.getvalue())
        return status
    except (ValueError, OSError) as exc:
        print(f"zakdd {args.command}: error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
