"""Command-line surface: generate, analyze, pattern, lll, codec.

Exit codes: 0 success, 2 resampling budget exhausted, 3 a synthesized word
failed its own verification (bug sentinel), 1 usage / input errors.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction

from . import analysis, codec, synth
from .lll import (
    Event,
    EventSystem,
    ResampleFailure,
    check_asymmetric_condition,
    threshold_N,
)
from .patterns import build_class_map, enumerate_exponents, layout_intervals
from .synth import SCHEMA_LINE, SynthesisConfig, VerificationError
from .words import Word, read_words, write_words


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a rational: {text!r}") from exc


def _frac(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def _read_word_file(path: str) -> list[Word]:
    with open(path, "r", encoding="ascii") as fp:
        return read_words(fp)


def _cmd_generate(args) -> int:
    cfg = SynthesisConfig(
        alpha=args.alpha,
        beta=args.beta,
        n=args.n,
        k=args.k,
        gap_factor=args.gap_factor,
        layer_m=args.layer_m,
        brackets=args.brackets,
        p_min=args.p_min,
        seed=args.seed,
        max_rounds=args.max_rounds,
        sweep_min=args.sweep_min,
    )
    try:
        word, report = synth.synthesize(cfg)
    except ResampleFailure as fail:
        sys.stdout.write(SCHEMA_LINE + "\n")
        sys.stdout.write("status resample_failure\n")
        sys.stdout.write(f"resample_rounds {fail.trace.rounds}\n")
        sys.stdout.write(f"resample_seed {fail.trace.seed}\n")
        for s, p in fail.trace.resampled_events:
            sys.stdout.write(f"resampled {s} {p}\n")
        return 2
    except VerificationError as err:
        sys.stdout.write(SCHEMA_LINE + "\n")
        sys.stdout.write(f"status verification_failure {err}\n")
        return 3
    sys.stdout.write(synth.render_report(report))
    if args.trace:
        for s, p in report.trace.resampled_events:
            sys.stdout.write(f"resampled {s} {p}\n")
    if args.out:
        with open(args.out, "w", encoding="ascii") as fp:
            write_words([word], fp)
    return 0


def _cmd_analyze(args) -> int:
    words = _read_word_file(args.infile)
    if not words:
        print("no words in input", file=sys.stderr)
        return 1
    w = words[0]
    out = [SCHEMA_LINE, "kind analyze"]
    out.append(f"n {len(w.symbols)}")
    out.append(f"alphabet {w.alphabet_size}")
    out.append(f"critical_exponent {_frac(analysis.critical_exponent(w))}")
    runs = analysis.maximal_repetitions(w)
    out.append(f"runs_total {len(runs)}")
    for r in runs:
        out.append(f"run {r.start} {r.length} {r.period} {_frac(r.exponent)}")
    if len(w.symbols) >= 1:
        out.append(f"lz_phrases {codec.lz_phrase_count(w)}")
    if args.beta is not None:
        min_len = args.sweep_min or -(
            (-args.beta.numerator) // args.beta.denominator
        )
        lengths = analysis.sweep_lengths(min_len, len(w.symbols))
        rows = analysis.power_defect_sweep(w, args.beta, lengths)
        for row in rows:
            out.append(
                f"sweep {row.length} min_defect {row.min_defect} "
                f"period {row.period} start {row.start} ratio {_frac(row.ratio)}"
            )
        eps = min((row.ratio for row in rows), default=None)
        out.append("epsilon_hat none" if eps is None else f"epsilon_hat {_frac(eps)}")
    sys.stdout.write("\n".join(out) + "\n")
    return 0


def _cmd_pattern(args) -> int:
    rs = enumerate_exponents(args.alpha, args.k)
    pattern = layout_intervals(rs, args.gap_factor)
    out = [SCHEMA_LINE, "kind pattern", f"alpha {_frac(args.alpha)}", f"k {args.k}"]
    out.append(f"gap_factor {args.gap_factor}")
    for iv in pattern.intervals:
        out.append(
            f"interval {iv.start} {iv.length} {iv.period} "
            f"{iv.exponent.numerator} {iv.exponent.denominator}"
        )
    out.append(f"layout_len {pattern.layout_len}")
    if args.classes:
        cmap = build_class_map(pattern, args.classes)
        for cid, members in enumerate(cmap.members):
            out.append("class " + str(cid) + " " + ",".join(map(str, members)))
    sys.stdout.write("\n".join(out) + "\n")
    return 0


def _parse_event_line(line: str, lineno: int) -> Event:
    # format: support indices (comma separated), probability, epsilon [, tag]
    parts = line.split()
    if len(parts) < 3:
        raise ValueError(f"line {lineno}: need 'support prob eps [tag]'")
    support = tuple(int(x) for x in parts[0].split(","))
    prob = Fraction(parts[1])
    eps = Fraction(parts[2])
    tag = parts[3] if len(parts) > 3 else f"event{lineno}"
    return Event(support, prob, eps, tag)


def _cmd_lll(args) -> int:
    if args.lll_cmd == "threshold":
        print(threshold_N(args.gamma, args.beta))
        return 0
    events = []
    with open(args.events, "r", encoding="ascii") as fp:
        for lineno, raw in enumerate(fp):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            events.append(_parse_event_line(line, lineno))
    var_count = 1 + max((max(ev.support) for ev in events), default=0)
    system = EventSystem(var_count, tuple(events))
    report = check_asymmetric_condition(system)
    print(SCHEMA_LINE)
    print(f"satisfied {int(report.satisfied)}")
    for row in report.rows:
        print(
            f"event {row.tag} prob {_frac(row.probability)} eps {_frac(row.epsilon)} "
            f"neighbors {row.neighbor_count} ok {int(row.satisfied)} "
            f"margin_log2 [{row.margin_lo:.6f},{row.margin_hi:.6f}]"
        )
    return 0


def _cmd_codec(args) -> int:
    if args.codec_cmd == "encode":
        words = _read_word_file(args.infile)
        lines = []
        print(SCHEMA_LINE)
        for idx, w in enumerate(words):
            if args.approx:
                code = codec.encode_approx_power(w, args.period)
                d = analysis.defect_to_periodic(w, args.period)
            else:
                code = codec.encode_power(w, args.period)
                d = 0
            l = len(w.symbols)
            h = codec.binary_entropy(Fraction(d, l)) if l else 0.0
            print(
                f"code {idx} len {len(code)} defect {d} entropy {h:.6f} "
                f"bits {code.to01()}"
            )
            lines.append(code.to01())
        if args.out:
            with open(args.out, "w", encoding="ascii") as fp:
                fp.write("\n".join(lines) + "\n")
        return 0
    # decode
    out_words = []
    with open(args.infile, "r", encoding="ascii") as fp:
        for raw in fp:
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            code = codec.BitCode.from01(line)
            if args.approx:
                out_words.append(codec.decode_approx_power(code, args.alphabet))
            else:
                out_words.append(codec.decode_power(code, args.alphabet))
    write_words(out_words, sys.stdout)
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="powerword")
    sub = ap.add_subparsers(dest="cmd", required=True)

    g = sub.add_parser("generate", help="synthesize a word and report on it")
    g.add_argument("--alpha", type=_fraction, required=True)
    g.add_argument("--beta", type=_fraction, required=True)
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--k", type=int, default=0)
    g.add_argument("--gap-factor", dest="gap_factor", type=int, default=10)
    g.add_argument("--layer-M", dest="layer_m", type=int, default=0)
    g.add_argument("--brackets", action="store_true")
    g.add_argument("--p-min", dest="p_min", type=int, default=1)
    g.add_argument("--seed", type=int, default=1)
    g.add_argument("--max-rounds", dest="max_rounds", type=int, default=0)
    g.add_argument("--sweep-min", dest="sweep_min", type=int, default=0)
    g.add_argument("--trace", action="store_true", help="dump resampled events")
    g.add_argument("--out", help="also write the word to this file")
    g.set_defaults(func=_cmd_generate)

    a = sub.add_parser("analyze", help="report runs/exponent/defects of a word")
    a.add_argument("--in", dest="infile", required=True)
    a.add_argument("--beta", type=_fraction, default=None)
    a.add_argument("--sweep-min", dest="sweep_min", type=int, default=0)
    a.set_defaults(func=_cmd_analyze)

    p = sub.add_parser("pattern", help="print the interval layout for alpha, k")
    p.add_argument("--alpha", type=_fraction, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--gap-factor", dest="gap_factor", type=int, default=10)
    p.add_argument("--classes", type=int, default=0,
                   help="also list classes for this prefix length")
    p.set_defaults(func=_cmd_pattern)

    l = sub.add_parser("lll", help="threshold computation / condition check")
    lsub = l.add_subparsers(dest="lll_cmd", required=True)
    lt = lsub.add_parser("threshold")
    lt.add_argument("--gamma", type=_fraction, required=True)
    lt.add_argument("--beta", type=_fraction, required=True)
    lc = lsub.add_parser("check")
    lc.add_argument("--events", required=True)
    l.set_defaults(func=_cmd_lll)

    c = sub.add_parser("codec", help="encode/decode word files")
    csub = c.add_subparsers(dest="codec_cmd", required=True)
    ce = csub.add_parser("encode")
    ce.add_argument("--in", dest="infile", required=True)
    ce.add_argument("--period", type=int, required=True)
    ce.add_argument("--approx", action="store_true")
    ce.add_argument("--out")
    cd = csub.add_parser("decode")
    cd.add_argument("--in", dest="infile", required=True)
    cd.add_argument("--alphabet", type=int, required=True)
    cd.add_argument("--approx", action="store_true")
    c.set_defaults(func=_cmd_codec)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


def entry() -> None:  # console script
    sys.exit(main())


if __name__ == "__main__":
    entry()
