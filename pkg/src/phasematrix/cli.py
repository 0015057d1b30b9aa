"""
Command-line front end.

Usage:
    phasematrix spectrum --model harmonic --m 1 --omega 1 --n-max 3
    phasematrix spectrum --model morse --de 1 --delta 5 --format csv
    phasematrix wavefunction --model hydrogen --n 2 --l 0 --points 201
    phasematrix verify --model rotor --l-max 3
    phasematrix portrait --model harmonic --epsilon 2 --x-max 6

Exit codes: 0 all checks pass, 1 invalid input, 2 a check failed.
"""
from __future__ import annotations

import argparse
import csv
import dataclasses
import io
import json
import math
import sys
from dataclasses import dataclass, field
from typing import Any, Optional

import numpy as np

from . import models as M
from .errors import PhaseMatrixError
from .matching import verify_match
from .oracle import count_nodes, gram_matrix, tise_residual_max
from .phase_space import Grid, PhaseVector, integrate_phase_space

MODELS = ("harmonic", "rotor", "hydrogen", "morse")
DEFAULT_TOLERANCES = {"eig": 1e-4, "eq14": 1e-9, "gram": 1e-6, "tise": 1e-5}
DIVERGENCE_FACTOR = 1e2


@dataclass
class RunConfig:
    model: str
    params: Any
    n_max: int
    fmt: str = "json"
    output: Optional[str] = None
    tolerances: dict = field(default_factory=lambda: dict(DEFAULT_TOLERANCES))

    @classmethod
    def from_args(cls, args) -> "RunConfig":
        tolerances = {
            "eig": args.tol_eig,
            "eq14": args.tol_eq14,
            "gram": args.tol_gram,
            "tise": args.tol_tise,
        }
        return cls(args.model, build_params(args), _level_count(args), args.format, args.output, tolerances)


def build_params(args):
    si = args.units == "si"
    hbar = args.hbar if args.hbar is not None else (M.HBAR_EV_AMU_ANGSTROM if si else 1.0)
    if args.model == "harmonic":
        return M.HarmonicOscillatorParams(args.m, args.omega, hbar)
    if args.model == "rotor":
        return M.RigidRotorParams(args.mu, args.bond_length, hbar)
    if args.model == "hydrogen":
        base = M.HydrogenParams.electron_volts() if si else M.HydrogenParams()
        return M.HydrogenParams(args.a0 if args.a0 is not None else base.a0, args.eg if args.eg is not None else base.E_g)
    if args.model == "morse":
        if args.delta is not None:
            return M.MorseParams.from_delta(args.delta, args.de, args.m, hbar)
        return M.MorseParams(args.m, args.de, args.alpha, hbar)
    raise PhaseMatrixError(f"unknown model {args.model!r}")


def _level_count(args) -> int:
    if args.model == "rotor":
        return args.l_max if args.l_max is not None else 2
    if args.n_max is not None:
        return args.n_max
    return 3 if args.model == "hydrogen" else 2


# state assembly -----------------------------------------------------------------


def _states(config: RunConfig):
    p = config.params
    if config.model == "harmonic":
        return M.ho_spectrum(p, config.n_max)
    if config.model == "rotor":
        return M.rotor_spectrum(p, config.n_max)
    if config.model == "hydrogen":
        return M.hydrogen_spectrum(p, config.n_max)
    return M.morse_spectrum(p)


def _energy_scale(config: RunConfig) -> float:
    p = config.params
    if config.model == "harmonic":
        return 0.5 * p.hbar * p.omega
    if config.model == "rotor":
        return p.energy_scale
    if config.model == "hydrogen":
        return -p.E_g
    return p.D_e


def _oracle_energies(config: RunConfig, states) -> list[float]:
    p, model = config.params, config.model
    if model == "harmonic":
        ref = M.ho_reference(p, len(states)).eigenvalues
        return [float(ref[s.quantum_numbers["n"]]) for s in states]
    if model == "rotor":
        l_max = config.n_max
        out = []
        for s in states:
            l, m = s.quantum_numbers["l"], abs(s.quantum_numbers["m"])
            out.append(float(M.rotor_reference(p, m, l_max - m + 1).eigenvalues[l - m]))
        return out
    if model == "hydrogen":
        n_max = config.n_max
        r_max = max(160.0, 40.0 * n_max)
        points = 2 * int(12.5 * r_max) + 1
        out = []
        for s in states:
            n, l = s.quantum_numbers["n"], s.quantum_numbers["l"]
            ref = M.hydrogen_reference(p, l, n_max - l, r_max, points)
            out.append(float(ref.eigenvalues[n - l - 1]))
        return out
    ref = M.morse_reference(p, len(states)).eigenvalues
    return [float(ref[s.quantum_numbers["n"]]) for s in states]


def _qn_label(qn) -> str:
    return ";".join(f"{k}={v}" for k, v in qn.items())


def _check(name: str, value: float, tol: float) -> dict:
    return {"name": name, "value": float(value), "tol": float(tol), "pass": bool(value <= tol)}


def _params_dict(params) -> dict:
    out = dataclasses.asdict(params)
    if isinstance(params, M.MorseParams):
        out["delta"] = params.delta
    if isinstance(params, M.HarmonicOscillatorParams):
        out["x_c"] = params.x_c
    if isinstance(params, M.RigidRotorParams):
        out["inertia"] = params.inertia
    return out


def spectrum_report(config: RunConfig) -> dict:
    states = _states(config)
    oracle = _oracle_energies(config, states)
    scale = _energy_scale(config)
    rows, checks = [], []
    for s, e_ref in zip(states, oracle):
        delta = abs(s.energy - e_ref) / max(abs(s.energy), scale)
        rows.append(
            {
                "qn": dict(s.quantum_numbers),
                "epsilon": s.epsilon,
                "energy": s.energy,
                "oracle_energy": e_ref,
                "delta": delta,
            }
        )
        checks.append(_check(f"eigenvalue[{_qn_label(s.quantum_numbers)}]", delta, config.tolerances["eig"]))
    return {"model": config.model, "params": _params_dict(config.params), "states": rows, "checks": checks}


# verification -------------------------------------------------------------------


def _residual_grid(model: str, state) -> Grid:
    qn = state.quantum_numbers
    if model == "harmonic":
        half = math.sqrt(2 * qn["n"] + 1) + 6.0
        return Grid(-half, half, 1601)
    if model == "rotor":
        return Grid(0.01, math.pi - 0.01, 2001)
    if model == "hydrogen":
        return Grid(0.05, 4.0 * qn["n"] + 60.0, 4001)
    return Grid(0.5, 60.0 + 4.0 * qn["n"], 6001)


def _node_grid(model: str, state) -> Grid:
    if model in ("harmonic", "rotor"):
        return _residual_grid(model, state)
    n = state.quantum_numbers["n"]
    return Grid(1e-3, 4.0 * n + 80.0, 8001)


def expected_nodes(model: str, qn) -> int:
    if model == "harmonic" or model == "morse":
        return qn["n"]
    if model == "hydrogen":
        return qn["n"] - qn["l"] - 1
    return qn["l"] - abs(qn["m"])


def _gram_groups(config: RunConfig, states):
    """Yield (label, states, grid, weight) sets that must be mutually orthogonal."""
    model, p = config.model, config.params
    if model == "harmonic":
        half = p.x_c * (math.sqrt(2 * config.n_max + 1) + 12.0)
        yield "all", states, Grid(-half, half, 4001), None
    elif model == "rotor":
        for m in sorted({s.quantum_numbers["m"] for s in states}):
            group = [s for s in states if s.quantum_numbers["m"] == m]
            yield f"m={m}", group, Grid(0.0, math.pi, 2001), np.sin
    elif model == "hydrogen":
        n_max = config.n_max
        r_max = p.a0 * n_max / 2.0 * (4.0 * n_max + 80.0)
        for l in sorted({s.quantum_numbers["l"] for s in states}):
            group = [s for s in states if s.quantum_numbers["l"] == l]
            yield f"l={l}", group, Grid(0.0, r_max, 8001), lambda r: r * r
    else:
        top = max(s.quantum_numbers["n"] for s in states)
        yield "all", states, M.morse_q_grid(p, top), None


def _shifted(tise, shift: float):
    return dataclasses.replace(tise, epsilon=tise.epsilon + shift) if shift else tise


def parse_injection(text: Optional[str]) -> float:
    if not text:
        return 0.0
    if not text.startswith("epsilon") or len(text) <= len("epsilon"):
        raise PhaseMatrixError(f"--inject-error expects 'epsilon+X' or 'epsilon-X', got {text!r}")
    try:
        return float(text[len("epsilon"):])
    except ValueError:
        raise PhaseMatrixError(f"--inject-error expects 'epsilon+X' or 'epsilon-X', got {text!r}") from None


def verify_report(config: RunConfig, inject: float = 0.0) -> dict:
    report = spectrum_report(config)
    states = _states(config)
    tol = config.tolerances
    checks = report["checks"]
    for s in states:
        label = _qn_label(s.quantum_numbers)
        match = s.match
        tise = _shifted(match.tise, inject)
        checks.append(_check(f"matching_residual[{label}]", verify_match(tise, match.template, match.spec, match.verify_grid), tol["eq14"]))
        psi = lambda x, g=match.g, spec=match.spec: g(x) * _poly(spec, x)
        checks.append(_check(f"tise_residual[{label}]", tise_residual_max(psi, tise, _residual_grid(config.model, s)), tol["tise"]))
        nodes = count_nodes(psi(_node_grid(config.model, s).points))
        want = expected_nodes(config.model, s.quantum_numbers)
        checks.append({"name": f"nodes[{label}]", "value": nodes, "tol": want, "pass": nodes == want})
    for name, group, grid, weight in _gram_groups(config, states):
        gram = gram_matrix([st.normalized for st in group], grid, weight)
        off = float(np.max(np.abs(gram - np.eye(len(group))))) if len(group) > 1 else 0.0
        checks.append(_check(f"gram_offdiag[{name}]", off, tol["gram"]))
    report["checks"] = checks
    report["pass"] = all(c["pass"] for c in checks)
    return report


def _poly(spec, x):
    from .templates import eval_polynomial

    return eval_polynomial(spec, x)


# wavefunction and portrait --------------------------------------------------------


def _find_state(config: RunConfig, args):
    model = config.model
    if model == "harmonic":
        wanted = {"n": args.n if args.n is not None else 0}
    elif model == "rotor":
        wanted = {"l": args.l if args.l is not None else 0, "m": args.ml}
    elif model == "hydrogen":
        wanted = {"n": args.n if args.n is not None else 1, "l": args.l if args.l is not None else 0}
    else:
        wanted = {"n": args.n if args.n is not None else 0}
    if model == "harmonic":
        M.ho_match(config.params, wanted["n"])
        config.n_max = wanted["n"]
    elif model == "rotor":
        M.rotor_match(config.params, wanted["l"], wanted["m"])
        config.n_max = wanted["l"]
    elif model == "hydrogen":
        M.hydrogen_match(config.params, wanted["n"], wanted["l"])
        config.n_max = wanted["n"]
    else:
        M.morse_match(config.params, wanted["n"])
    return next(s for s in _states(config) if s.quantum_numbers == wanted)


def _default_sample_range(config: RunConfig, state) -> tuple[float, float]:
    p, qn = config.params, state.quantum_numbers
    if config.model == "harmonic":
        half = 4.0 * p.x_c * max(1.0, math.sqrt(2 * qn["n"] + 1) / 2.0)
        return -half, half
    if config.model == "rotor":
        return 0.0, math.pi
    if config.model == "hydrogen":
        return 0.0, state.match.scale.x_c * (4.0 * qn["n"] + 30.0)
    grid = M.morse_q_grid(p, qn["n"])
    return grid.x_min, min(grid.x_max, grid.x_min + 40.0 / p.alpha)


def wavefunction_report(config: RunConfig, args) -> dict:
    state = _find_state(config, args)
    lo, hi = _default_sample_range(config, state)
    lo = args.q_min if args.q_min is not None else lo
    hi = args.q_max if args.q_max is not None else hi
    grid = Grid(lo, hi, args.points)
    q = grid.points
    psi = state.normalized(q)
    return {
        "model": config.model,
        "params": _params_dict(config.params),
        "quantum_numbers": dict(state.quantum_numbers),
        "energy": state.energy,
        "norm": state.norm,
        "measure": state.measure,
        "coordinate": state.coordinate,
        "samples": [{"q": float(a), "psi": float(b)} for a, b in zip(q, psi)],
    }


_PORTRAIT_DEFAULTS = {
    "harmonic": (0.0, 6.0, 4801),
    "rotor": (0.01, math.pi - 0.01, 2001),
    "hydrogen": (0.05, 40.0, 4001),
    "morse": (0.05, 40.0, 4001),
}


def portrait_report(config: RunConfig, args) -> dict:
    lo, hi, pts = _PORTRAIT_DEFAULTS[config.model]
    lo = args.x_min if args.x_min is not None else lo
    hi = args.x_max if args.x_max is not None else hi
    pts = args.points if args.points is not None else pts
    grid = Grid(lo, hi, pts)
    qn = {}
    if config.model == "rotor":
        qn["m"] = args.ml
    if config.model == "hydrogen":
        qn = {"n": args.n if args.n is not None else 1, "l": args.l if args.l is not None else 0}
    tise = M.dimensionless_form(config.params, **qn)
    if not math.isfinite(args.epsilon):
        raise PhaseMatrixError("epsilon must be finite")
    start = PhaseVector(*_parse_pair(args.initial))
    traj = integrate_phase_space(tise.b, tise.k_squared_of(args.epsilon), start, grid)
    limit = DIVERGENCE_FACTOR * max(abs(start.value), abs(start.slope))
    return {
        "model": config.model,
        "epsilon": args.epsilon,
        "initial": list(start),
        "divergent": bool(abs(traj.values[-1]) > limit),
        "samples": [{"x": float(x), "value": float(u), "slope": float(w)} for x, u, w in zip(grid.points, traj.values, traj.slopes)],
    }


def _parse_pair(text: str) -> tuple[float, float]:
    try:
        a, b = (float(t) for t in text.split(","))
    except ValueError:
        raise PhaseMatrixError(f"--initial expects 'value,slope', got {text!r}") from None
    return a, b


# output -----------------------------------------------------------------------------


def _write(text: str, output: Optional[str]) -> None:
    if output:
        with open(output, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _csv(columns, rows, meta=None) -> str:
    buf = io.StringIO()
    for key, value in (meta or {}).items():
        buf.write(f"# {key}={value}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([repr(v) if isinstance(v, float) else v for v in row])
    return buf.getvalue()


def _emit(report: dict, config: RunConfig, columns, rows, meta=None) -> None:
    if config.fmt == "json":
        _write(json.dumps(report, indent=2) + "\n", config.output)
    else:
        _write(_csv(columns, rows, meta), config.output)


# commands ---------------------------------------------------------------------------


def cmd_spectrum(args) -> int:
    config = RunConfig.from_args(args)
    report = spectrum_report(config)
    rows = [(_qn_label(s["qn"]), s["epsilon"], s["energy"], s["oracle_energy"], s["delta"]) for s in report["states"]]
    _emit(report, config, ("qn", "epsilon", "energy", "oracle_energy", "delta"), rows)
    return 0 if all(c["pass"] for c in report["checks"]) else 2


def cmd_verify(args) -> int:
    config = RunConfig.from_args(args)
    report = verify_report(config, parse_injection(args.inject_error))
    rows = [(c["name"], c["value"], c["tol"], c["pass"]) for c in report["checks"]]
    _emit(report, config, ("name", "value", "tol", "pass"), rows)
    return 0 if report["pass"] else 2


def cmd_wavefunction(args) -> int:
    config = RunConfig.from_args(args)
    report = wavefunction_report(config, args)
    rows = [(s["q"], s["psi"]) for s in report["samples"]]
    meta = {
        "quantum_numbers": _qn_label(report["quantum_numbers"]),
        "norm": repr(report["norm"]),
        "measure": report["measure"],
    }
    _emit(report, config, (report["coordinate"], "psi"), rows, meta)
    return 0


def cmd_portrait(args) -> int:
    config = RunConfig.from_args(args)
    report = portrait_report(config, args)
    rows = [(s["x"], s["value"], s["slope"]) for s in report["samples"]]
    meta = {"epsilon": repr(report["epsilon"]), "divergent": str(report["divergent"]).lower()}
    _emit(report, config, ("x", "value", "slope"), rows, meta)
    return 0


def _model_options() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--model", choices=MODELS, required=True)
    p.add_argument("--units", choices=("natural", "si"), default="natural",
                   help="natural: hbar = m = 1; si: eV, angstrom, amu")
    p.add_argument("--m", type=float, default=1.0, help="particle mass (harmonic, morse)")
    p.add_argument("--omega", type=float, default=1.0)
    p.add_argument("--hbar", type=float, default=None)
    p.add_argument("--mu", type=float, default=1.0, help="rotor reduced mass")
    p.add_argument("--bond-length", type=float, default=1.0)
    p.add_argument("--a0", type=float, default=None, help="Bohr radius")
    p.add_argument("--eg", type=float, default=None, help="hydrogen ground-state energy (negative)")
    p.add_argument("--de", type=float, default=1.0, help="Morse well depth")
    p.add_argument("--alpha", type=float, default=1.0, help="Morse range parameter")
    p.add_argument("--delta", type=float, default=None, help="Morse well parameter; overrides --alpha")
    p.add_argument("--n-max", type=int, default=None)
    p.add_argument("--l-max", type=int, default=None)
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--output", default=None)
    p.add_argument("--tol-eig", type=float, default=DEFAULT_TOLERANCES["eig"])
    p.add_argument("--tol-eq14", type=float, default=DEFAULT_TOLERANCES["eq14"])
    p.add_argument("--tol-gram", type=float, default=DEFAULT_TOLERANCES["gram"])
    p.add_argument("--tol-tise", type=float, default=DEFAULT_TOLERANCES["tise"])
    return p


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="phasematrix", description=__doc__.split("\n\n")[0].strip())
    sub = parser.add_subparsers(dest="command", required=True)
    common = _model_options()

    sp = sub.add_parser("spectrum", parents=[common], help="closed-form spectrum against the numerical reference")
    sp.set_defaults(func=cmd_spectrum)

    vp = sub.add_parser("verify", parents=[common], help="run every consistency check")
    vp.add_argument("--inject-error", default=None, help="test hook, e.g. epsilon+0.1")
    vp.set_defaults(func=cmd_verify)

    wp = sub.add_parser("wavefunction", parents=[common], help="sample a normalized eigenfunction")
    wp.add_argument("--n", type=int, default=None)
    wp.add_argument("--l", type=int, default=None)
    wp.add_argument("--ml", type=int, default=0, help="rotor magnetic quantum number")
    wp.add_argument("--points", type=int, default=201)
    wp.add_argument("--q-min", type=float, default=None)
    wp.add_argument("--q-max", type=float, default=None)
    wp.set_defaults(func=cmd_wavefunction)

    pp = sub.add_parser("portrait", parents=[common], help="phase-space trajectory (x, phi, phi')")
    pp.add_argument("--epsilon", type=float, required=True)
    pp.add_argument("--initial", default="1,0", help="value,slope at x-min")
    pp.add_argument("--x-min", type=float, default=None)
    pp.add_argument("--x-max", type=float, default=None)
    pp.add_argument("--points", type=int, default=None)
    pp.add_argument("--n", type=int, default=None)
    pp.add_argument("--l", type=int, default=None)
    pp.add_argument("--ml", type=int, default=0)
    pp.set_defaults(func=cmd_portrait)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except PhaseMatrixError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except BrokenPipeError:
        sys.stderr.close()
        return 0


if __name__ == "__main__":
    sys.exit(main())
