"""Command-line entry point: JSON-configured scenarios emitting CSV tables.

Subcommands: spectrum, ground-state, figure1, transition, evolve.  Each takes
a single JSON config document plus optional --set overrides and writes CSV
files whose first line is a `#` metadata comment carrying the tool version
and the full effective parameter set, so identical configs reproduce byte
identical outputs.

Exit codes: 0 success, 2 validation error (bad config, unsupported state
pair, off resonance, dimension limit), 3 numerical-contract violation
(quadrature non-convergence, cutoff too small, step-size or norm-drift
violation).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import __version__
from .errors import NumericalContractError, ValidationError
from .fock_oracle import dyson1_probability, transition_series
from .model import CavityConfig, DriveSpec, MultiBagConfig, mode_frequency
from .perturbation import (
    boson_reduced_purity,
    ground_state_correction,
    ground_state_correction_multi,
    vacuum_energy_shift,
    vacuum_energy_shift_multi,
)
from .specfun import CoherentParams, SqueezeParams
from .transitions import (
    BosonState,
    TransitionSpec,
    compact_probability,
    probability_fock,
    probability_fock_nodrive,
    probability_general,
    probability_resonant,
    probability_sc_nodrive,
    probability_vacuum_drive,
    sweep_figure1,
)

__all__ = ["main"]


# ---------------------------------------------------------------------------
# config plumbing


def _load_config(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise ValidationError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ValidationError(f"config {path} is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ValidationError("config document must be a JSON object")
    return doc


def _apply_overrides(doc: dict, overrides: list[str]) -> dict:
    for item in overrides:
        if "=" not in item:
            raise ValidationError(f"--set expects key=value, got {item!r}")
        key, raw = item.split("=", 1)
        try:
            value = json.loads(raw)
        except json.JSONDecodeError:
            value = raw
        node = doc
        parts = key.split(".")
        for part in parts[:-1]:
            nxt = node.setdefault(part, {})
            if not isinstance(nxt, dict):
                raise ValidationError(f"--set path {key!r} descends into a non-object")
            node = nxt
        node[parts[-1]] = value
    return doc


def _check_keys(doc: dict, where: str, allowed, required=()):
    if not isinstance(doc, dict):
        raise ValidationError(f"{where} must be a JSON object")
    unknown = sorted(set(doc) - set(allowed))
    if unknown:
        raise ValidationError(f"unknown key(s) {unknown} in {where}")
    missing = sorted(set(required) - set(doc))
    if missing:
        raise ValidationError(f"missing key(s) {missing} in {where}")


def _number(doc, key, where):
    v = doc[key]
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ValidationError(f"{where}.{key} must be a number")
    return float(v)


def _integer(doc, key, where):
    v = doc[key]
    if isinstance(v, bool) or not isinstance(v, int):
        raise ValidationError(f"{where}.{key} must be an integer")
    return v


def _build_cavity(doc) -> CavityConfig:
    _check_keys(
        doc,
        "cavity",
        ("length", "epsilon", "omega_mech", "n_fermion_modes"),
        ("length", "epsilon", "omega_mech", "n_fermion_modes"),
    )
    return CavityConfig(
        length=_number(doc, "length", "cavity"),
        epsilon=_number(doc, "epsilon", "cavity"),
        omega_mech=_number(doc, "omega_mech", "cavity"),
        n_fermion_modes=_integer(doc, "n_fermion_modes", "cavity"),
    )


def _complex_value(item, where):
    if isinstance(item, bool):
        raise ValidationError(f"{where} entries must be numbers or [re, im] pairs")
    if isinstance(item, (int, float)):
        return complex(item)
    if isinstance(item, list) and len(item) == 2 and all(
        isinstance(x, (int, float)) and not isinstance(x, bool) for x in item
    ):
        return complex(item[0], item[1])
    raise ValidationError(f"{where} entries must be numbers or [re, im] pairs")


def _build_drive(doc) -> DriveSpec:
    if doc is None:
        return DriveSpec.off()
    _check_keys(doc, "drive", ("variant", "g", "nu", "times", "values"), ("variant",))
    variant = doc["variant"]
    if variant == "off":
        _check_keys(doc, "drive", ("variant",))
        return DriveSpec.off()
    if variant == "impulsive":
        _check_keys(doc, "drive", ("variant", "g", "nu"), ("variant", "g", "nu"))
        return DriveSpec.impulsive(g=_number(doc, "g", "drive"), nu=_number(doc, "nu", "drive"))
    if variant == "sampled":
        _check_keys(doc, "drive", ("variant", "times", "values"), ("variant", "times", "values"))
        times = doc["times"]
        values = doc["values"]
        if not isinstance(times, list) or not isinstance(values, list):
            raise ValidationError("drive.times and drive.values must be arrays")
        ts = np.array([_number({"t": t}, "t", "drive.times") for t in times])
        vs = np.array([_complex_value(v, "drive.values") for v in values])
        return DriveSpec.sampled(times=ts, values=vs)
    raise ValidationError(f"unknown drive variant {variant!r}")


_STATE_FIELDS = {
    "vacuum": (),
    "fock": ("j",),
    "coherent": ("beta_abs", "theta"),
    "squeezed": ("r", "phi"),
    "squeezed_coherent": ("beta_abs", "theta", "r", "phi"),
}


def _build_state(doc, where) -> BosonState:
    _check_keys(doc, where, ("variant",) + tuple(k for f in _STATE_FIELDS.values() for k in f), ("variant",))
    variant = doc["variant"]
    if variant not in _STATE_FIELDS:
        raise ValidationError(f"{where}.variant must be one of {sorted(_STATE_FIELDS)}")
    _check_keys(doc, where, ("variant",) + _STATE_FIELDS[variant], ("variant",))
    if variant == "vacuum":
        return BosonState.vacuum()
    if variant == "fock":
        return BosonState.fock(_integer(doc, "j", where))
    if variant == "coherent":
        return BosonState.coherent(
            CoherentParams(_number(doc, "beta_abs", where), _number(doc, "theta", where) if "theta" in doc else 0.0)
        )
    if variant == "squeezed":
        return BosonState.squeezed(
            SqueezeParams(_number(doc, "r", where), _number(doc, "phi", where) if "phi" in doc else 0.0)
        )
    return BosonState.squeezed_coherent(
        CoherentParams(_number(doc, "beta_abs", where), _number(doc, "theta", where) if "theta" in doc else 0.0),
        SqueezeParams(_number(doc, "r", where), _number(doc, "phi", where) if "phi" in doc else 0.0),
    )


def _build_times(doc) -> np.ndarray:
    if isinstance(doc, list):
        return np.array([_number({"t": t}, "t", "transition.times") for t in doc])
    _check_keys(doc, "transition.times", ("start", "stop", "num"), ("start", "stop", "num"))
    start = _number(doc, "start", "transition.times")
    stop = _number(doc, "stop", "transition.times")
    num = _integer(doc, "num", "transition.times")
    if num < 1:
        raise ValidationError("transition.times.num must be >= 1")
    if stop < start:
        raise ValidationError("transition.times.stop must be >= start")
    return np.linspace(start, stop, num)


def _build_transition(doc, cfg: CavityConfig, drive: DriveSpec):
    _check_keys(
        doc,
        "transition",
        ("k", "k_prime", "initial", "final", "formula", "times"),
        ("k", "k_prime", "initial", "final", "formula"),
    )
    spec = TransitionSpec(
        k=_integer(doc, "k", "transition"),
        k_prime=_integer(doc, "k_prime", "transition"),
        initial=_build_state(doc["initial"], "transition.initial"),
        final=_build_state(doc["final"], "transition.final"),
        cfg=cfg,
        drive=drive,
    )
    return spec, doc["formula"]


def _build_output(doc, out_flag) -> tuple[str, bool]:
    if doc is None:
        doc = {}
    _check_keys(doc, "output", ("directory", "plots"))
    directory = doc.get("directory", ".")
    if not isinstance(directory, str):
        raise ValidationError("output.directory must be a string")
    plots = doc.get("plots", False)
    if not isinstance(plots, bool):
        raise ValidationError("output.plots must be a boolean")
    if out_flag is not None:
        directory = out_flag
    return directory, plots


# ---------------------------------------------------------------------------
# formula dispatch


_FORMULA_FNS = {
    "general": probability_general,
    "resonant": probability_resonant,
    "fock": probability_fock,
    "fock_nodrive": probability_fock_nodrive,
    "vacuum_drive": probability_vacuum_drive,
    "sc_nodrive": probability_sc_nodrive,
}

_COMPACT_KINDS = {"compact_F": "F", "compact_C": "C", "compact_S": "S", "compact_SC": "SC"}


def _compact_args(spec: TransitionSpec, kind: str):
    if spec.drive.is_off:
        g = 0.0
    elif spec.drive.variant == "impulsive":
        g = spec.drive.g
    else:
        raise ValidationError("compact formulas are defined for impulsive (or no) drive")
    canon = spec.initial.canonical()
    j = coh = sq = None
    if kind == "F":
        if canon.variant != "fock":
            raise ValidationError("compact_F requires a Fock initial state")
        j = canon.j
    elif kind == "C":
        if canon.variant not in ("vacuum", "coherent"):
            raise ValidationError("compact_C requires a coherent initial state")
        coh, _ = canon.as_sc()
    elif kind == "S":
        if canon.variant not in ("vacuum", "squeezed"):
            raise ValidationError("compact_S requires a squeezed-vacuum initial state")
        _, sq = canon.as_sc()
    else:
        if canon.variant == "fock":
            raise ValidationError("compact_SC requires a squeezed-coherent initial state")
        coh, sq = canon.as_sc()
    return g, j, coh, sq


def _probability_fn(spec: TransitionSpec, formula: str):
    if formula in _FORMULA_FNS:
        fn = _FORMULA_FNS[formula]
        return lambda t: fn(spec, float(t)).probability
    if formula == "dyson1":
        return lambda t: dyson1_probability(spec, float(t)).probability
    if formula in _COMPACT_KINDS:
        kind = _COMPACT_KINDS[formula]
        g, j, coh, sq = _compact_args(spec, kind)
        return lambda t: compact_probability(
            kind, float(t), cfg=spec.cfg, k=spec.k, k_prime=spec.k_prime, g=g, j=j, coh=coh, sq=sq
        ).probability
    raise ValidationError(
        f"unknown formula {formula!r}; expected one of "
        f"{sorted(list(_FORMULA_FNS) + list(_COMPACT_KINDS) + ['dyson1'])}"
    )


# ---------------------------------------------------------------------------
# worker pool and CSV emission


def _worker_count() -> int:
    raw = os.environ.get("FERMIBAG_THREADS")
    if raw is None:
        return os.cpu_count() or 1
    try:
        n = int(raw)
    except ValueError as exc:
        raise ValidationError("FERMIBAG_THREADS must be an integer") from exc
    if n < 1:
        raise ValidationError("FERMIBAG_THREADS must be >= 1")
    return n


def _parallel_map(fn, items):
    """Order-preserving map over a worker pool sized by FERMIBAG_THREADS."""
    items = list(items)
    workers = min(_worker_count(), max(1, len(items)))
    if workers == 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def _fmt(x: float) -> str:
    return f"{x:.16e}"


def _cell(x) -> str:
    if x is None:
        return ""
    if isinstance(x, str):
        return x
    if isinstance(x, (int, np.integer)) and not isinstance(x, bool):
        return str(int(x))
    return _fmt(float(x))


def _write_csv(path, command, params, header, rows, footer_comments=()):
    meta = (
        f"# fermibag {__version__} command={command} "
        f"params={json.dumps(params, sort_keys=True, separators=(',', ':'))}"
    )
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(meta + "\n")
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(_cell(c) for c in row) + "\n")
        for line in footer_comments:
            fh.write(f"# {line}\n")
    return path


# ---------------------------------------------------------------------------
# commands


def _cmd_spectrum(config, out_dir):
    _check_keys(config, "config", ("cavity", "output"), ("cavity",))
    cfg = _build_cavity(config["cavity"])
    rows = [(n, mode_frequency(n, cfg.length)) for n in range(cfg.n_fermion_modes)]
    path = os.path.join(out_dir, "spectrum.csv")
    return [_write_csv(path, "spectrum", config, ("n", "omega"), rows)]


def _amplitude_rows(gsc):
    n_modes = gsc.amplitudes.shape[0]
    rows = []
    for n in range(n_modes):
        for m in range(n_modes):
            a = gsc.amplitudes[n, m]
            if a != 0.0:
                rows.append((n, m, a))
    return rows


def _cmd_ground_state(config, out_dir):
    _check_keys(config, "config", ("cavity", "multibag", "output"), ("cavity",))
    cfg = _build_cavity(config["cavity"])
    path = os.path.join(out_dir, "ground_state.csv")
    if "multibag" not in config:
        gsc = ground_state_correction(cfg)
        shift = vacuum_energy_shift(cfg)
        footer = [
            "summary norm_z=" + _fmt(gsc.norm_z)
            + " delta_e=" + _fmt(shift.delta_e)
            + " purity=" + _fmt(boson_reduced_purity(gsc))
        ]
        return [
            _write_csv(path, "ground-state", config, ("n", "m", "coefficient"),
                       _amplitude_rows(gsc), footer)
        ]
    mdoc = config["multibag"]
    _check_keys(mdoc, "multibag", ("n_spikes", "fluctuating", "omegas"), ("n_spikes", "fluctuating", "omegas"))
    fluct = mdoc["fluctuating"]
    omegas = mdoc["omegas"]
    if not isinstance(fluct, list) or not isinstance(omegas, list):
        raise ValidationError("multibag.fluctuating and multibag.omegas must be arrays")
    multi = MultiBagConfig(
        n_spikes=_integer(mdoc, "n_spikes", "multibag"),
        fluctuating=tuple(int(q) for q in fluct),
        omegas=tuple(float(w) for w in omegas),
        drives=tuple(DriveSpec.off() for _ in fluct),
        base=cfg,
    )
    corrections = ground_state_correction_multi(multi)
    shift = vacuum_energy_shift_multi(multi)
    rows = []
    footer = []
    for wall, gsc in zip(multi.fluctuating, corrections):
        for n, m, a in _amplitude_rows(gsc):
            rows.append((wall, n, m, a))
        footer.append(
            f"wall {wall} norm_z=" + _fmt(gsc.norm_z)
            + " delta_e=" + _fmt(shift.per_oscillator[multi.fluctuating.index(wall)])
            + " purity=" + _fmt(boson_reduced_purity(gsc))
        )
    footer.append("summary delta_e_total=" + _fmt(shift.delta_e))
    return [
        _write_csv(path, "ground-state", config, ("wall", "n", "m", "coefficient"), rows, footer)
    ]


_SWEEP_DEFAULTS = {"g_values": (0.0, 0.5, 1.0), "n_start": 0.0, "n_stop": 6.0, "n_step": 0.05}


def _figure1_grid(sweep_doc):
    _check_keys(sweep_doc, "sweep", ("g_values", "n_start", "n_stop", "n_step"))
    g_values = sweep_doc.get("g_values", list(_SWEEP_DEFAULTS["g_values"]))
    if not isinstance(g_values, list) or not g_values:
        raise ValidationError("sweep.g_values must be a non-empty array")
    gs = [float(g) for g in g_values]
    start = float(sweep_doc.get("n_start", _SWEEP_DEFAULTS["n_start"]))
    stop = float(sweep_doc.get("n_stop", _SWEEP_DEFAULTS["n_stop"]))
    step = float(sweep_doc.get("n_step", _SWEEP_DEFAULTS["n_step"]))
    if step <= 0 or stop < start:
        raise ValidationError("sweep grid requires n_step > 0 and n_stop >= n_start")
    count = int(round((stop - start) / step)) + 1
    grid = start + step * np.arange(count)
    grid = grid[grid <= stop + 1e-12]
    return gs, grid


def _render_figure1(png_path, grid, rows, g):
    try:
        import matplotlib
    except ImportError as exc:
        raise ValidationError(
            "output.plots requires matplotlib (install the 'plot' extra)"
        ) from exc
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(5, 3.4))
    ax.plot(grid, [r.gamma_c for r in rows], label="coherent", color="tab:blue")
    ax.plot(grid, [r.gamma_s for r in rows], label="squeezed", color="tab:green")
    ax.plot(grid, [r.gamma_sc for r in rows], label="squeezed-coherent", color="tab:red")
    fock = [(r.n_phon, r.gamma_f) for r in rows if r.gamma_f is not None]
    if fock:
        ax.plot([x for x, _ in fock], [y for _, y in fock], "ko", ms=4, label="Fock")
    ax.set_xlabel("mean phonon number")
    ax.set_ylabel("envelope")
    ax.set_title(f"g = {g:g}")
    ax.legend(frameon=False, fontsize=8)
    fig.tight_layout()
    fig.savefig(png_path, dpi=150)
    plt.close(fig)
    return png_path


def _cmd_figure1(config, out_dir, plots):
    _check_keys(config, "config", ("sweep", "output"))
    gs, grid = _figure1_grid(config.get("sweep", {}))
    written = []
    workers = _worker_count()
    for g in gs:
        chunks = np.array_split(grid, min(workers, max(1, grid.size)))
        chunk_rows = _parallel_map(lambda c, g=g: sweep_figure1(g, c) if c.size else [], chunks)
        rows = [r for chunk in chunk_rows for r in chunk]
        table = [(r.n_phon, r.gamma_f, r.gamma_c, r.gamma_s, r.gamma_sc) for r in rows]
        path = os.path.join(out_dir, f"figure1_g{g:g}.csv")
        written.append(
            _write_csv(path, "figure1", config,
                       ("N_phon", "gamma_F", "gamma_C", "gamma_S", "gamma_SC"), table)
        )
        if plots:
            written.append(
                _render_figure1(os.path.join(out_dir, f"figure1_g{g:g}.png"), grid, rows, g)
            )
    return written


def _cmd_transition(config, out_dir):
    _check_keys(config, "config", ("cavity", "drive", "transition", "output"), ("cavity", "transition"))
    cfg = _build_cavity(config["cavity"])
    drive = _build_drive(config.get("drive"))
    spec, formula = _build_transition(config["transition"], cfg, drive)
    if "times" not in config["transition"]:
        raise ValidationError("transition.times is required for the transition command")
    times = _build_times(config["transition"]["times"])
    prob = _probability_fn(spec, formula)
    values = _parallel_map(prob, times)
    rows = list(zip((float(t) for t in times), values))
    path = os.path.join(out_dir, "transition.csv")
    return [_write_csv(path, "transition", config, ("t", "probability"), rows)]


def _cmd_evolve(config, out_dir):
    _check_keys(
        config, "config", ("cavity", "drive", "transition", "oracle", "output"),
        ("cavity", "transition", "oracle"),
    )
    cfg = _build_cavity(config["cavity"])
    drive = _build_drive(config.get("drive"))
    spec, formula = _build_transition(config["transition"], cfg, drive)
    odoc = config["oracle"]
    _check_keys(
        odoc, "oracle", ("n_boson_levels", "n_steps", "t_final", "record_every"),
        ("n_boson_levels", "n_steps", "t_final"),
    )
    n_b = _integer(odoc, "n_boson_levels", "oracle")
    n_steps = _integer(odoc, "n_steps", "oracle")
    t_final = _number(odoc, "t_final", "oracle")
    record_every = _integer(odoc, "record_every", "oracle") if "record_every" in odoc else 1
    times, p_exact, norms = transition_series(spec, n_b, t_final, n_steps, record_every)
    prob = _probability_fn(spec, formula)
    p_formula = np.array(_parallel_map(prob, times))
    rows = [
        (float(t), float(pe), float(pf), float(abs(pe - pf)), float(nm))
        for t, pe, pf, nm in zip(times, p_exact, p_formula, norms)
    ]
    path = os.path.join(out_dir, "evolve.csv")
    return [
        _write_csv(path, "evolve", config, ("t", "p_exact", "p_formula", "abs_diff", "norm"), rows)
    ]


# ---------------------------------------------------------------------------
# entry point


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fermibag",
        description="Fermion-pair creation in a vibrating-wall bag: spectra, "
        "ground-state dressing, transition probabilities, and exact-oracle runs.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("spectrum", "ground-state", "figure1", "transition", "evolve"):
        p = sub.add_parser(name)
        p.add_argument("--config", required=True, help="path to the JSON config document")
        p.add_argument(
            "--set", dest="overrides", action="append", default=[], metavar="KEY=VALUE",
            help="override a config entry (dotted path, JSON value); repeatable",
        )
        p.add_argument("--out", default=None, help="output directory (overrides output.directory)")
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        config = _apply_overrides(_load_config(args.config), args.overrides)
        out_dir, plots = _build_output(config.get("output"), args.out)
        os.makedirs(out_dir, exist_ok=True)
        if args.command == "spectrum":
            written = _cmd_spectrum(config, out_dir)
        elif args.command == "ground-state":
            written = _cmd_ground_state(config, out_dir)
        elif args.command == "figure1":
            written = _cmd_figure1(config, out_dir, plots)
        elif args.command == "transition":
            written = _cmd_transition(config, out_dir)
        else:
            written = _cmd_evolve(config, out_dir)
    except ValidationError as exc:
        print(f"fermibag: validation error: {exc}", file=sys.stderr)
        return 2
    except NumericalContractError as exc:
        print(f"fermibag: numerical contract violated: {exc}", file=sys.stderr)
        return 3
    for path in written:
        print(path)
    return 0
