"""End-to-end synthesis: implant prescribed powers, fill free bits, verify.

The pipeline enumerates implant exponents below alpha, lays out active
intervals, fills free classes by resampling so no window reaches exponent
beta, then optionally multiplies in a periodic layer (period M) and a
bracket layer. Every figure in the report is recomputed from the word by
the analyzers, never copied from the engine's bookkeeping.

Report format (schema ``powerword-report v1``): line-oriented
``key value...`` pairs, rationals always printed as ``num/den``. The
resample_* lines describe the construction run and are the only lines
``verify`` cannot reproduce from the word; ``core_report_text`` omits them.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction

from . import analysis
from .analysis import DefectRow, Run
from .lll import ResampleTrace, resample_fill
from .patterns import (
    RepetitionPattern,
    bracket_layer,
    enumerate_exponents,
    layout_intervals,
    materialize,
    min_free_density,
    periodic_layer,
)
from .words import Word, cartesian_product, is_periodic, smallest_period


class VerificationError(Exception):
    """A synthesized word failed its own independent analysis (bug sentinel)."""


@dataclass(frozen=True)
class SynthesisConfig:
    alpha: Fraction
    beta: Fraction
    n: int
    k: int = 0
    gap_factor: int = 10
    layer_m: int = 0          # 0 disables the periodic layer
    brackets: bool = False
    p_min: int = 1
    seed: int = 1
    max_rounds: int = 0       # 0 means the default budget 64 + 16 * n
    sweep_min: int = 0        # 0 means ceil(beta * p_min)
    sweep_enabled: bool = True

    def __post_init__(self) -> None:
        if not (1 < self.alpha < self.beta):
            raise ValueError("need 1 < alpha < beta")
        if self.n < 1:
            raise ValueError("n must be >= 1")
        if self.k < 0:
            raise ValueError("k must be >= 0")
        if self.layer_m and self.layer_m < 2:
            raise ValueError("layer period must be 0 (off) or >= 2")
        if self.p_min < 1:
            raise ValueError("p_min must be >= 1")

    @property
    def effective_max_rounds(self) -> int:
        return self.max_rounds if self.max_rounds > 0 else 64 + 16 * self.n

    @property
    def effective_sweep_min(self) -> int:
        if self.sweep_min > 0:
            return self.sweep_min
        b = self.beta
        return -((-b.numerator * self.p_min) // b.denominator)


@dataclass(frozen=True)
class ImplantRow:
    index: int
    start: int
    length: int
    period: int
    exponent: Fraction
    achieved_period: int
    achieved_exponent: Fraction
    exact: bool


@dataclass(frozen=True)
class SynthesisReport:
    config: SynthesisConfig
    word: Word
    layers: tuple[tuple[str, Word], ...]
    implants: tuple[ImplantRow, ...]
    dropped_exponents: tuple[Fraction, ...]
    runs_total: int
    critical_exponent: Fraction
    max_exponent_outside: Fraction | None
    forbidden_runs: int
    free_density: Fraction
    free_density_window: int
    sweep: tuple[DefectRow, ...]
    epsilon_hat: Fraction | None
    resample_rounds: int | None = None
    resample_seed: int | None = None
    trace: ResampleTrace | None = field(default=None, compare=False)


def _frac(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def plan_exponents(cfg: SynthesisConfig) -> tuple[list[Fraction], list[Fraction]]:
    """(kept, dropped) implant exponents; layer period M drops q not divisible by M."""
    if cfg.k == 0:
        return [], []
    rs = enumerate_exponents(cfg.alpha, cfg.k)
    if cfg.layer_m:
        kept = [r for r in rs if r.denominator % cfg.layer_m == 0]
        dropped = [r for r in rs if r.denominator % cfg.layer_m != 0]
    else:
        kept, dropped = rs, []
    return kept, dropped


def build_pattern(cfg: SynthesisConfig) -> tuple[RepetitionPattern, list[Fraction]]:
    kept, dropped = plan_exponents(cfg)
    return layout_intervals(kept, cfg.gap_factor), dropped


def _compose(binary: Word, cfg: SynthesisConfig, pattern: RepetitionPattern):
    layers: list[tuple[str, Word]] = [("binary", binary)]
    word = binary
    if cfg.layer_m:
        loop = periodic_layer(cfg.layer_m, cfg.n)
        layers.append(("periodic", loop))
        word = cartesian_product(word, loop)
    if cfg.brackets:
        br = bracket_layer(pattern, cfg.n)
        layers.append(("bracket", br))
        word = cartesian_product(word, br)
    return word, tuple(layers)


def split_layers(word: Word, cfg: SynthesisConfig, pattern: RepetitionPattern):
    """Invert _compose: recover each layer of a product word."""
    expected = 2 * (cfg.layer_m or 1) * (3 if cfg.brackets else 1)
    if word.alphabet_size != expected:
        raise ValueError(
            f"word alphabet {word.alphabet_size} does not match config "
            f"(expected {expected})"
        )
    syms = list(word.symbols)
    layers: list[tuple[str, Word]] = []
    if cfg.brackets:
        br = [s % 3 for s in syms]
        syms = [s // 3 for s in syms]
        layers.append(("bracket", Word(tuple(br), 3)))
    if cfg.layer_m:
        per = [s % cfg.layer_m for s in syms]
        syms = [s // cfg.layer_m for s in syms]
        layers.append(("periodic", Word(tuple(per), cfg.layer_m)))
    layers.append(("binary", Word(tuple(syms), 2)))
    layers.reverse()
    return layers


def _spans_interval(run: Run, pattern: RepetitionPattern) -> bool:
    a, b = run.start, run.start + run.length
    for iv in pattern.intervals:
        if min(b, iv.end) - max(a, iv.start) > 0:
            return True
    return False


def _analyze(
    word: Word,
    cfg: SynthesisConfig,
    pattern: RepetitionPattern,
    dropped: list[Fraction],
) -> SynthesisReport:
    n = cfg.n
    layers = split_layers(word, cfg, pattern)
    binary = layers[0][1]
    runs = analysis.maximal_repetitions(word)
    if runs:
        crit = max(r.exponent for r in runs)
    else:
        crit = analysis.critical_exponent(word)
    outside = [r for r in runs if not _spans_interval(r, pattern)]
    max_outside = max((r.exponent for r in outside), default=None)
    b = cfg.beta
    forbidden_len = -((-b.numerator * cfg.p_min) // b.denominator)  # ceil(beta*p_min)
    forbidden = sum(
        1 for r in outside if r.exponent >= b and r.length >= forbidden_len
    )
    implants = []
    for idx, iv in enumerate(pattern.intervals):
        if iv.start >= n:
            continue
        if iv.end > n:
            implants.append(
                ImplantRow(idx, iv.start, iv.length, iv.period, iv.exponent,
                           0, Fraction(0), False)
            )
            continue
        sub = Word(binary.symbols[iv.start : iv.end], 2)
        ap = smallest_period(sub)
        implants.append(
            ImplantRow(
                idx,
                iv.start,
                iv.length,
                iv.period,
                iv.exponent,
                ap,
                Fraction(iv.length, ap),
                is_periodic(sub, iv.period),
            )
        )
    density_window = max((iv.length for iv in pattern.intervals), default=1)
    density = min_free_density(pattern, n, density_window)
    if cfg.sweep_enabled:
        lengths = analysis.sweep_lengths(cfg.effective_sweep_min, len(word.symbols))
        sweep = tuple(analysis.power_defect_sweep(word, cfg.beta, lengths))
    else:
        sweep = ()
    eps_hat = min((row.ratio for row in sweep), default=None)
    return SynthesisReport(
        config=cfg,
        word=word,
        layers=tuple(layers),
        implants=tuple(implants),
        dropped_exponents=tuple(dropped),
        runs_total=len(runs),
        critical_exponent=crit,
        max_exponent_outside=max_outside,
        forbidden_runs=forbidden,
        free_density=density,
        free_density_window=density_window,
        sweep=sweep,
        epsilon_hat=eps_hat,
    )


def synthesize(cfg: SynthesisConfig) -> tuple[Word, SynthesisReport]:
    """Run the full pipeline; raises ResampleFailure (with trace) on budget
    exhaustion and VerificationError if the independent analysis finds a
    forbidden power (which indicates a bug, not bad luck)."""
    pattern, dropped = build_pattern(cfg)
    tau, trace = resample_fill(
        pattern, cfg.n, cfg.beta, cfg.p_min, cfg.seed, cfg.effective_max_rounds
    )
    binary = materialize(pattern, tau, cfg.n)
    word, _ = _compose(binary, cfg, pattern)
    report = _analyze(word, cfg, pattern, dropped)
    report = replace(
        report, resample_rounds=trace.rounds, resample_seed=trace.seed, trace=trace
    )
    if report.forbidden_runs:
        raise VerificationError(
            f"{report.forbidden_runs} forbidden runs survived resampling"
        )
    return word, report


def verify(word: Word, cfg: SynthesisConfig) -> SynthesisReport:
    """Recompute every word-derived report field from the word alone."""
    pattern, dropped = build_pattern(cfg)
    return _analyze(word, cfg, pattern, dropped)


# ---------------------------------------------------------------------------
# rendering

SCHEMA_LINE = "powerword-report v1"


def render_report(report: SynthesisReport, include_trace: bool = True) -> str:
    cfg = report.config
    out = [SCHEMA_LINE]
    out.append(f"alpha {_frac(cfg.alpha)}")
    out.append(f"beta {_frac(cfg.beta)}")
    out.append(f"n {cfg.n}")
    out.append(f"k {cfg.k}")
    out.append(f"gap_factor {cfg.gap_factor}")
    out.append(f"layer_m {cfg.layer_m}")
    out.append(f"brackets {int(cfg.brackets)}")
    out.append(f"p_min {cfg.p_min}")
    out.append(f"seed {cfg.seed}")
    out.append(f"max_rounds {cfg.effective_max_rounds}")
    out.append(f"sweep_min {cfg.effective_sweep_min}")
    out.append(f"alphabet {report.word.alphabet_size}")
    out.append(f"word {report.word.to_text()}")
    for name, layer in report.layers:
        out.append(f"layer {name} {layer.to_text()}")
    for r in report.dropped_exponents:
        out.append(f"dropped_exponent {_frac(r)}")
    for im in report.implants:
        out.append(
            f"implant {im.index} start {im.start} len {im.length} "
            f"period {im.period} exponent {_frac(im.exponent)} "
            f"achieved_period {im.achieved_period} "
            f"achieved_exponent {_frac(im.achieved_exponent)} exact {int(im.exact)}"
        )
    out.append(f"runs_total {report.runs_total}")
    out.append(f"critical_exponent {_frac(report.critical_exponent)}")
    if report.max_exponent_outside is None:
        out.append("max_exponent_outside none")
    else:
        out.append(f"max_exponent_outside {_frac(report.max_exponent_outside)}")
    out.append(f"forbidden_runs {report.forbidden_runs}")
    out.append(f"free_density {_frac(report.free_density)}")
    out.append(f"free_density_window {report.free_density_window}")
    for row in report.sweep:
        out.append(
            f"sweep {row.length} min_defect {row.min_defect} "
            f"period {row.period} start {row.start} ratio {_frac(row.ratio)}"
        )
    if report.epsilon_hat is None:
        out.append("epsilon_hat none")
    else:
        out.append(f"epsilon_hat {_frac(report.epsilon_hat)}")
    if include_trace and report.resample_rounds is not None:
        out.append(f"resample_rounds {report.resample_rounds}")
        out.append(f"resample_seed {report.resample_seed}")
    return "\n".join(out) + "\n"


def core_report_text(report: SynthesisReport) -> str:
    """The word-derived part of the report (what verify reproduces)."""
    return render_report(report, include_trace=False)
