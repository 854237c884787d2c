"""Command-line front end: config loading, model construction, CSV emission.

Configs are flat JSON documents validated against a schema before any
computation runs; unknown keys are rejected and violations are reported with
their JSON pointer.  All numeric output is CSV with 9 significant digits so
identical configs produce byte-identical files.

Exit codes: 0 success, 2 validation error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from fractions import Fraction

import jsonschema
import numpy as np

from .dirac import (
    EnsembleSpec,
    cubic_ensemble,
    expand_dirac_power,
    fermionic_quartic_ensemble,
    gaussian_ensemble,
    quartic_ensemble,
    two_matrix_quartic_ensemble,
)
from .loop_eqs import (
    ClosureError,
    build_closure,
    format_relation,
    generate_sde,
)
from .mc import ChainConfig, MCError, combine_estimates, estimate_moments, sample_chains
from .positivity import hankel_from_sequence, leading_minors, psd_check
from .equilibrium import (
    EquilibriumError,
    EnergySpec,
    fermionic_spec,
    minimize_density,
    moments_from_density,
    phase_sweep,
    residual_profile,
    spectral_estimators,
    validation_spec,
)
from .scan import (
    FeasibilityProblem,
    ScanConfig,
    ScanGrid,
    feasible_interval,
    interval_rows,
    region_rows,
    region_scan,
)
from .words import Word, symmetry_group

THREADS_ENV = "DIRACBOOT_THREADS"

_GRID_SCHEMA = {
    "type": "object",
    "properties": {
        "name": {"type": "string"},
        "lo": {"type": "number"},
        "hi": {"type": "number"},
        "steps": {"type": "integer", "minimum": 1},
        "kind": {"enum": ["coupling", "variable"]},
    },
    "required": ["name", "lo", "hi", "steps", "kind"],
    "additionalProperties": False,
}

CONFIG_SCHEMA = {
    "type": "object",
    "properties": {
        "model": {
            "type": "object",
            "properties": {
                "family": {
                    "enum": ["gaussian", "cubic", "quartic", "two_matrix", "fermionic"]
                },
                "couplings": {
                    "type": "object",
                    "additionalProperties": {"type": "number"},
                },
                "signature": {
                    "type": "array",
                    "items": {"type": "integer", "minimum": 0},
                    "minItems": 2,
                    "maxItems": 2,
                },
                "symmetric": {"type": "boolean"},
            },
            "required": ["family"],
            "additionalProperties": False,
        },
        "scan": {
            "type": "object",
            "properties": {
                "lambda": {"type": "integer", "minimum": 1},
                "tol": {"type": "number", "exclusiveMinimum": 0},
                "depth": {"type": "integer", "minimum": 1},
                "steps": {"type": "integer", "minimum": 2},
                "variable": {"type": "string"},
                "bracket": {
                    "type": "array",
                    "items": {"type": "number"},
                    "minItems": 2,
                    "maxItems": 2,
                },
                "grids": {
                    "type": "array",
                    "items": _GRID_SCHEMA,
                    "minItems": 2,
                    "maxItems": 2,
                },
                "defaults": {
                    "type": "object",
                    "additionalProperties": {"type": "number"},
                },
            },
            "additionalProperties": False,
        },
        "mc": {
            "type": "object",
            "properties": {
                "n": {"type": "integer", "minimum": 1},
                "steps": {"type": "integer", "minimum": 2},
                "burn_in": {"type": "integer", "minimum": 0},
                "step_size": {"type": "number", "exclusiveMinimum": 0},
                "thinning": {"type": "integer", "minimum": 1},
                "chains": {"type": "integer", "minimum": 1},
                "words": {
                    "type": "array",
                    "items": {"type": "string"},
                    "minItems": 1,
                },
                "max_power": {"type": "integer", "minimum": 2},
                "target_acceptance": {
                    "type": "number",
                    "exclusiveMinimum": 0,
                    "exclusiveMaximum": 1,
                },
            },
            "required": ["n"],
            "additionalProperties": False,
        },
        "equilibrium": {
            "type": "object",
            "properties": {
                "kind": {"enum": ["validation", "fermionic"]},
                "g2": {"type": "number"},
                "g4": {"type": "number"},
                "mass": {"type": "number", "minimum": 0},
                "a": {"type": "number"},
                "half_width": {"type": "number", "exclusiveMinimum": 0},
                "n": {"type": "integer", "minimum": 64},
                "threshold": {
                    "type": "number",
                    "exclusiveMinimum": 0,
                    "exclusiveMaximum": 1,
                },
                "t_grid": {
                    "type": "object",
                    "properties": {
                        "lo": {"type": "number", "exclusiveMinimum": 0},
                        "hi": {"type": "number", "exclusiveMinimum": 0},
                        "points": {"type": "integer", "minimum": 2},
                    },
                    "required": ["lo", "hi", "points"],
                    "additionalProperties": False,
                },
                "sweep": {
                    "type": "array",
                    "items": {
                        "type": "array",
                        "items": {"type": "number"},
                        "minItems": 3,
                        "maxItems": 3,
                    },
                    "minItems": 1,
                },
            },
            "required": ["kind"],
            "additionalProperties": False,
        },
        "seed": {"type": "integer", "minimum": 0},
        "out": {"type": "string"},
        "threads": {"type": "integer", "minimum": 1},
    },
    "additionalProperties": False,
}


class ConfigError(ValueError):
    """Configuration rejected before any computation ran."""


def _pointer(path_parts) -> str:
    return "/" + "/".join(str(p) for p in path_parts)


def load_config(path: str) -> dict:
    """Read and schema-validate a run config; raises ConfigError."""
    try:
        with open(path) as fh:
            raw = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"{path}: {exc.strerror or exc}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON: {exc}") from None
    validator = jsonschema.Draft202012Validator(CONFIG_SCHEMA)
    errors = sorted(validator.iter_errors(raw), key=lambda e: list(e.absolute_path))
    if errors:
        err = jsonschema.exceptions.best_match(errors)
        raise ConfigError(f"{path}: at {_pointer(err.absolute_path)}: {err.message}")
    return raw


_MISSING = object()


def build_model(config: dict, path: str) -> EnsembleSpec:
    """Construct the ensemble named by the config's model block."""
    block = config.get("model")
    if block is None:
        raise ConfigError(f"{path}: at /model: this command needs a model block")
    family = block["family"]
    couplings = dict(block.get("couplings", {}))

    def take(name, default=_MISSING):
        if name in couplings:
            return couplings.pop(name)
        if default is not _MISSING:
            return default
        raise ConfigError(
            f"{path}: at /model/couplings: family {family!r} needs {name!r}"
        )

    signature = block.get("signature")
    if signature is not None and family != "quartic":
        raise ConfigError(
            f"{path}: at /model/signature: only the quartic family takes a signature"
        )
    if family == "gaussian":
        spec = gaussian_ensemble()
    elif family == "cubic":
        spec = cubic_ensemble(Fraction(take("g")))
    elif family == "quartic":
        sig = tuple(signature) if signature is not None else (1, 0)
        if sig not in {(1, 0), (0, 1)}:
            raise ConfigError(
                f"{path}: at /model/signature: quartic supports [1,0] or [0,1]"
            )
        spec = quartic_ensemble(Fraction(take("t2")), sig)
    elif family == "two_matrix":
        spec = two_matrix_quartic_ensemble(
            Fraction(take("t2")), Fraction(take("t4", 1.0))
        )
    else:
        spec = fermionic_quartic_ensemble(
            g2=take("g2"),
            g4=take("g4"),
            mass=take("mass", 0.0),
            a=take("a", 1.0),
            beta2=take("beta2", 2.0),
        )
    if couplings:
        name = sorted(couplings)[0]
        raise ConfigError(
            f"{path}: at /model/couplings/{name}: unknown coupling for {family!r}"
        )
    return spec


def _want_symbolic(spec: EnsembleSpec, path: str, command: str) -> None:
    if spec.fermionic is not None:
        raise ConfigError(
            f"{path}: at /model/family: the fermionic action is not polynomial, "
            f"so `{command}` does not apply; use `mc`, `eqm` or `spectral`"
        )


# Config coupling names vs the symbol the action actually carries: the
# quadratic Dirac coupling is the symbol "g" in every polynomial family.
_SYMBOL_FOR = {
    "gaussian": {},
    "cubic": {"g": "g"},
    "quartic": {"t2": "g"},
    "two_matrix": {"t2": "g"},
    "fermionic": {"g2": "g2", "g4": "g4"},
}


def _symbol_overrides(config: dict) -> dict[str, float]:
    block = config.get("model", {})
    table = _SYMBOL_FOR[block["family"]]
    return {
        table[k]: float(v)
        for k, v in block.get("couplings", {}).items()
        if k in table
    }


def _symbol_name(config: dict, name: str) -> str:
    table = _SYMBOL_FOR[config.get("model", {})["family"]]
    return table.get(name, name)


def _resolve_threads(args, config: dict) -> int:
    if getattr(args, "threads", None):
        return args.threads
    env = os.environ.get(THREADS_ENV)
    if env:
        try:
            value = int(env)
        except ValueError:
            raise ConfigError(f"{THREADS_ENV} must be an integer, got {env!r}")
        if value < 1:
            raise ConfigError(f"{THREADS_ENV} must be >= 1, got {value}")
        return value
    return config.get("threads", 1)


def _fmt(x: float) -> str:
    return f"{x:.9g}"


def _emit(lines: list[str], out_dir: str | None, filename: str) -> None:
    text = "\n".join(lines) + "\n"
    if out_dir is None:
        sys.stdout.write(text)
        return
    os.makedirs(out_dir, exist_ok=True)
    with open(os.path.join(out_dir, filename), "w") as fh:
        fh.write(text)


def _signature_names(signature: tuple[int, int]) -> tuple[str, ...]:
    return ("H",) if sum(signature) == 1 else ("A", "B")


# ---------------------------------------------------------------------------
# subcommands


def cmd_expand(args) -> int:
    try:
        p, q = (int(s) for s in args.sig.split(","))
    except ValueError:
        raise ConfigError(f"--sig expects 'p,q' integers, got {args.sig!r}")
    if args.k < 1:
        raise ConfigError("--k must be >= 1")
    poly = expand_dirac_power((p, q), args.k)
    print(poly.format(_signature_names((p, q))))
    return 0


def _sde_words(spec: EnsembleSpec, args, path: str) -> list[Word]:
    if args.word is not None:
        return [Word.from_str(args.word, spec.letter_names)]
    ls = [args.l] if args.l is not None else list(range(7))
    letter = args.letter
    if not 0 <= letter < spec.alphabet:
        raise ConfigError(f"{path}: --letter {letter} outside the model alphabet")
    return [Word((letter,) * l) for l in ls]


def cmd_sde(args) -> int:
    config = load_config(args.model)
    spec = build_model(config, args.model)
    _want_symbolic(spec, args.model, "sde")
    group = (
        symmetry_group(spec.symmetries, spec.alphabet) if args.symmetric else None
    )
    for w in _sde_words(spec, args, args.model):
        rel = generate_sde(spec, w, letter=args.letter, symmetry=group)
        print(format_relation(rel, spec.letter_names))
    return 0


def cmd_closure(args) -> int:
    config = load_config(args.model)
    spec = build_model(config, args.model)
    _want_symbolic(spec, args.model, "closure")
    scan_block = config.get("scan", {})
    lam = args.lam if args.lam is not None else scan_block.get("lambda", 3)
    symmetric = (
        args.symmetric
        if args.symmetric
        else bool(config.get("model", {}).get("symmetric", False))
    )
    closure = build_closure(spec, 2 * lam, impose_symmetry=symmetric)
    names = closure.variable_names()
    index = {i: name for i, name in enumerate(names)}

    def label(w) -> str:
        if len(spec.letter_names) == 1:
            return f"m_{len(w)}"
        return "m_" + w.rep.to_str(spec.letter_names)

    print(f"max degree: {closure.max_degree}")
    print("search variables: " + (", ".join(names) if names else "(none)"))
    zeros = sorted(closure.zeros, key=lambda w: (len(w), w.rep.letters))
    if zeros:
        print("forced zero: " + ", ".join(label(w) for w in zeros))
    print("solved:")
    for w in sorted(closure.solved, key=lambda w: (len(w), w.rep.letters)):
        print(f"  {label(w)} = {closure.solved[w].format(index)}")
    for poly in closure.constraints:
        print(f"constraint: {poly.format(index)} = 0")
    return 0


def _scan_settings(args, config: dict):
    block = config.get("scan", {})
    lam = args.lam if args.lam is not None else block.get("lambda", 3)
    tol = args.tol if args.tol is not None else block.get("tol", 1e-10)
    return block, lam, tol


def cmd_interval(args) -> int:
    config = load_config(args.model)
    spec = build_model(config, args.model)
    _want_symbolic(spec, args.model, "interval")
    block, lam, tol = _scan_settings(args, config)
    variable = args.var or block.get("variable")
    if not variable:
        raise ConfigError(
            f"{args.model}: at /scan/variable: interval needs a search variable "
            "(or pass --var)"
        )
    bracket = tuple(block.get("bracket", (0.0, 1.0)))
    symmetric = bool(config.get("model", {}).get("symmetric", False))
    couplings = _symbol_overrides(config)
    try:
        iv = feasible_interval(
            spec,
            couplings,
            variable,
            bracket,
            lam,
            depth=block.get("depth", 20),
            steps=block.get("steps", 65),
            tol=tol,
            impose_symmetry=symmetric,
            defaults=block.get("defaults"),
        )
    except KeyError as exc:
        raise ConfigError(f"{args.model}: {exc.args[0]}") from None
    _emit(interval_rows([iv]), args.out, "interval.csv")
    return 0


def cmd_region(args) -> int:
    config = load_config(args.model)
    spec = build_model(config, args.model)
    _want_symbolic(spec, args.model, "region")
    block, lam, tol = _scan_settings(args, config)
    grids = block.get("grids")
    if not grids:
        raise ConfigError(
            f"{args.model}: at /scan/grids: region needs two grid axes"
        )
    coupling_grids = tuple(
        ScanGrid(_symbol_name(config, g["name"]), g["lo"], g["hi"], g["steps"])
        for g in grids
        if g["kind"] == "coupling"
    )
    variable_grids = tuple(
        ScanGrid(g["name"], g["lo"], g["hi"], g["steps"])
        for g in grids
        if g["kind"] == "variable"
    )
    scan_config = ScanConfig(
        lam=lam,
        coupling_grids=coupling_grids,
        variable_grids=variable_grids,
        impose_symmetry=bool(config.get("model", {}).get("symmetric", False)),
        tol=tol,
        depth=block.get("depth", 20),
        defaults=dict(block.get("defaults", {})),
        threads=_resolve_threads(args, config),
    )
    mask = region_scan(spec, scan_config)
    _emit(region_rows(mask), args.out, "region.csv")
    return 0


def cmd_mc(args) -> int:
    config = load_config(args.model)
    spec = build_model(config, args.model)
    block = config.get("mc")
    if block is None:
        raise ConfigError(f"{args.model}: at /mc: the mc command needs an mc block")
    seed = args.seed if args.seed is not None else config.get("seed", 0)
    try:
        chain_config = ChainConfig(
            n=block["n"],
            steps=block.get("steps", 4000),
            burn_in=block.get("burn_in", 500),
            step_size=block.get("step_size", 0.5),
            seed=seed,
            thinning=block.get("thinning", 1),
            target_acceptance=block.get("target_acceptance", 0.5),
            max_power=block.get("max_power", 8),
        )
    except MCError as exc:
        raise ConfigError(f"{args.model}: at /mc: {exc}") from None
    word_texts = block.get(
        "words", [spec.letter_names[0] * k for k in range(1, 5)]
    )
    words = [Word.from_str(t, spec.letter_names) for t in word_texts]
    chains = sample_chains(
        spec, chain_config, block.get("chains", 2), threads=_resolve_threads(args, config)
    )
    lines = ["word,mean,stderr,N,steps,seed"]
    per_chain = [estimate_moments(chain, words) for chain in chains]
    for i, w in enumerate(words):
        est = combine_estimates([ests[i] for ests in per_chain])
        lines.append(
            f"{est.word.rep.to_str(spec.letter_names)},{_fmt(est.mean)},"
            f"{_fmt(est.stderr)},{chain_config.n},{chain_config.steps},{seed}"
        )
    _emit(lines, args.out, "mc.csv")
    return 0


def _energy_spec(config: dict, path: str) -> tuple[EnergySpec, dict]:
    block = config.get("equilibrium")
    if block is None:
        raise ConfigError(
            f"{path}: at /equilibrium: this command needs an equilibrium block"
        )
    if block["kind"] == "validation":
        spec = validation_spec(
            half_width=block.get("half_width", 2.5), n=block.get("n", 512)
        )
    else:
        for field_name in ("g2", "g4"):
            if field_name not in block:
                raise ConfigError(
                    f"{path}: at /equilibrium/{field_name}: "
                    "fermionic kernels need g2 and g4"
                )
        spec = fermionic_spec(
            g2=block["g2"],
            g4=block["g4"],
            mass=block.get("mass", 0.0),
            a=block.get("a", 1.0),
            half_width=block.get("half_width", 4.0),
            n=block.get("n", 512),
        )
    return spec, block


def cmd_eqm(args) -> int:
    config = load_config(args.model)
    spec, block = _energy_spec(config, args.model)
    density = minimize_density(spec)
    lines = ["x,rho"]
    for x, r in zip(density.nodes, density.weights):
        lines.append(f"{_fmt(x)},{_fmt(r)}")
    _emit(lines, args.out, "density.csv")
    sweep = block.get("sweep")
    if sweep:
        specs = [
            fermionic_spec(
                g2=g2,
                g4=g4,
                mass=m,
                a=block.get("a", 1.0),
                half_width=block.get("half_width", 4.0),
                n=block.get("n", 512),
            )
            for g2, g4, m in sweep
        ]
        rows = phase_sweep(
            specs,
            threshold=block.get("threshold", 0.01),
            threads=_resolve_threads(args, config),
        )
        sweep_lines = ["g2,g4,m,cuts,m2,energy"]
        for g2, g4, m, cuts, m2, energy in rows:
            sweep_lines.append(
                f"{_fmt(g2)},{_fmt(g4)},{_fmt(m)},{cuts},{_fmt(m2)},{_fmt(energy)}"
            )
        _emit(sweep_lines, args.out, "sweep.csv")
    return 0


def cmd_spectral(args) -> int:
    config = load_config(args.model)
    spec, block = _energy_spec(config, args.model)
    grid = block.get("t_grid", {"lo": 0.01, "hi": 1000.0, "points": 40})
    if not grid["lo"] < grid["hi"]:
        raise ConfigError(
            f"{args.model}: at /equilibrium/t_grid: needs lo < hi"
        )
    density = minimize_density(spec)
    t = np.geomspace(grid["lo"], grid["hi"], grid["points"])
    curves = spectral_estimators(density, spec.mass, t)
    lines = ["t,K,ds,vs"]
    for ti, ki, di, vi in zip(curves.t, curves.heat, curves.ds, curves.vs):
        lines.append(f"{_fmt(ti)},{_fmt(ki)},{_fmt(di)},{_fmt(vi)}")
    _emit(lines, args.out, "curves.csv")
    return 0


# ---------------------------------------------------------------------------
# invariant suite


def _check_printed_relations() -> None:
    cubic = cubic_ensemble(Fraction(1))
    text = format_relation(generate_sde(cubic, Word()), cubic.letter_names)
    assert text == "0 = 2*m_1 + g*(2*m_2 + 2*m_1^2)", text
    quartic = quartic_ensemble(Fraction(1), (1, 0))
    text = format_relation(generate_sde(quartic, Word()), quartic.letter_names)
    assert text == "0 = 16*m_3 + 40*m_1*m_2 + g*(8*m_1)", text
    flipped = quartic_ensemble(Fraction(1), (0, 1))
    text = format_relation(generate_sde(flipped, Word()), flipped.letter_names)
    assert text == "0 = -8*m_1*m_2", text


def _check_hankel_anchor() -> None:
    h = hankel_from_sequence([1, 0, 1, 0, 3, 0, 15])
    minors = leading_minors(h)
    assert minors == [1, 1, 2, 12], minors


def _check_catalan_closure() -> None:
    spec = cubic_ensemble(Fraction(0))
    closure = build_closure(spec, 12)
    table = closure.evaluate({}, exact=True)
    catalan = {2: 1, 4: 2, 6: 5, 8: 14, 10: 42, 12: 132}
    for k, want in catalan.items():
        got = table[next(w for w in table if len(w) == k)]
        assert got == want, (k, got)
    problem = FeasibilityProblem(spec, 6, False, 1e-10)
    report = problem.report({})
    assert report.feasible, report


def _check_quartic_endpoint() -> None:
    spec = quartic_ensemble(Fraction(1), (1, 0))
    iv = feasible_interval(
        spec, {"g": 1.0}, "m_2", (0.0, 1.0), lam=2, impose_symmetry=True
    )
    root = (7**0.5 - 1) / 12
    assert abs(iv.hi - root) < 1e-5, (iv.hi, root)


def _check_mc_determinism() -> None:
    spec = gaussian_ensemble()
    cfg = ChainConfig(n=4, steps=400, burn_in=100, seed=7)
    a = sample_chains(spec, cfg, 2)
    b = sample_chains(spec, cfg, 2)
    for ca, cb in zip(a, b):
        assert np.array_equal(ca.power_sums, cb.power_sums)


def _check_semicircle() -> None:
    spec = validation_spec()
    density = minimize_density(spec)
    m2 = moments_from_density(density, 2)
    assert abs(m2 - 1.0) < 1e-2, m2
    _, res, scale = residual_profile(spec, density)
    worst = float(np.abs(res).max())
    assert worst < 1e-3 * scale, (worst, scale)


def _check_spectral_anchor() -> None:
    nodes = np.linspace(-1, 1, 64)
    weights = np.zeros(64)
    cell = nodes[1] - nodes[0]
    weights[32] = 1.0 / cell
    from .equilibrium import GridDensity

    delta = GridDensity(nodes=nodes, weights=weights, cell=cell)
    t = np.geomspace(0.1, 10.0, 9)
    curves = spectral_estimators(delta, 1.0, t)
    assert np.max(np.abs(curves.ds - 2 * t)) < 1e-6
    assert np.min(curves.vs) >= -1e-8


CHECKS = [
    ("printed loop equations", _check_printed_relations),
    ("hankel leading minors", _check_hankel_anchor),
    ("catalan closure and positivity", _check_catalan_closure),
    ("level-2 quartic endpoint", _check_quartic_endpoint),
    ("mc determinism", _check_mc_determinism),
    ("semicircle validation", _check_semicircle),
    ("spectral anchors", _check_spectral_anchor),
]


def cmd_check(args) -> int:
    failures = 0
    for name, fn in CHECKS:
        try:
            fn()
        except Exception as exc:  # noqa: BLE001 - report and keep going
            failures += 1
            print(f"FAIL {name}: {exc}")
        else:
            print(f"ok   {name}")
    if failures:
        print(f"{failures} of {len(CHECKS)} checks failed")
        return 3
    print(f"all {len(CHECKS)} checks passed")
    return 0


# ---------------------------------------------------------------------------
# argument parsing


def _add_common(parser, model=True, out=True, threads=True):
    if model:
        parser.add_argument("--model", required=True, help="path to the JSON config")
    if out:
        parser.add_argument(
            "--out", default=None, help="output directory (default: stdout)"
        )
    if threads:
        parser.add_argument(
            "--threads",
            type=int,
            default=None,
            help=f"worker threads (overrides ${THREADS_ENV} and the config)",
        )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="diracboot",
        description="Bootstrap and sample random-matrix models built from "
        "finite spectral triples.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("expand", help="print the multitrace expansion of Tr D^k")
    p.add_argument("--sig", required=True, help="signature 'p,q'")
    p.add_argument("--k", type=int, required=True, help="power of D")
    p.set_defaults(fn=cmd_expand)

    p = sub.add_parser("sde", help="print loop equations")
    _add_common(p, out=False, threads=False)
    p.add_argument("--l", type=int, default=None, help="insert H^l (default 0..6)")
    p.add_argument("--word", default=None, help="insert an explicit word")
    p.add_argument("--letter", type=int, default=0, help="differentiation letter")
    p.add_argument(
        "--symmetric", action="store_true", help="identify moments along symmetries"
    )
    p.set_defaults(fn=cmd_sde)

    p = sub.add_parser("closure", help="print search variables and solved recipes")
    _add_common(p, out=False, threads=False)
    p.add_argument("--lambda", dest="lam", type=int, default=None)
    p.add_argument("--symmetric", action="store_true")
    p.set_defaults(fn=cmd_closure)

    p = sub.add_parser("interval", help="two-sided bound on one moment")
    _add_common(p, threads=False)
    p.add_argument("--lambda", dest="lam", type=int, default=None)
    p.add_argument("--tol", type=float, default=None)
    p.add_argument("--var", default=None, help="search variable, e.g. m_2")
    p.set_defaults(fn=cmd_interval)

    p = sub.add_parser("region", help="feasibility mask over a 2-D grid")
    _add_common(p)
    p.add_argument("--lambda", dest="lam", type=int, default=None)
    p.add_argument("--tol", type=float, default=None)
    p.set_defaults(fn=cmd_region)

    p = sub.add_parser("mc", help="Metropolis moment estimates")
    _add_common(p)
    p.add_argument("--seed", type=int, default=None)
    p.set_defaults(fn=cmd_mc)

    p = sub.add_parser("eqm", help="equilibrium density (and phase sweep)")
    _add_common(p)
    p.set_defaults(fn=cmd_eqm)

    p = sub.add_parser("spectral", help="heat-kernel spectral estimators")
    _add_common(p)
    p.set_defaults(fn=cmd_spectral)

    p = sub.add_parser("check", help="run the built-in invariant suite")
    p.set_defaults(fn=cmd_check)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (MCError, EquilibriumError, ClosureError, np.linalg.LinAlgError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
