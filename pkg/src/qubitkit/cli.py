"""Command-line entry point: ``qubitkit {shor,grover,evolve,qecc,qft} ...``.

Exit status is 0 on success, 1 when an algorithm gives up (e.g. the Shor
attempt budget runs out) and 2 on usage or capacity errors.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import re
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__, grover, hamsim, qecc5, shor
from .qft import QftSpec, apply_qft
from .statevec import StateVector, dump, load_dump

DEFAULT_SEED = 1234
SEED_ENV = "QUBITKIT_SEED"


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    subcommand: str
    seed: int
    output: str  # "json" or "human"
    params: dict = field(default_factory=dict)


def _bool(text: str) -> bool:
    v = text.strip().lower()
    if v in ("true", "1", "yes", "on"):
        return True
    if v in ("false", "0", "no", "off"):
        return False
    raise argparse.ArgumentTypeError(f"expected true or false, got {text!r}")


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None,
                        help=f"RNG seed (default: ${SEED_ENV} or {DEFAULT_SEED})")
    common.add_argument("--json", action="store_true", help="emit a JSON report")

    p = argparse.ArgumentParser(prog="qubitkit", description="State-vector quantum algorithm simulator")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="subcommand", required=True)

    s = sub.add_parser("shor", parents=[common], help="factor N by period finding")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--a", type=int, default=None, help="fix the base instead of drawing one")
    s.add_argument("--premeasure", type=_bool, default=True)
    s.add_argument("--attempts", type=int, default=20)

    g = sub.add_parser("grover", parents=[common], help="search for one marked index")
    g.add_argument("--qubits", type=int, required=True)
    g.add_argument("--marked", type=int, required=True)
    g.add_argument("--iterations", type=int, default=None)

    e = sub.add_parser("evolve", parents=[common], help="split-operator time evolution")
    e.add_argument("--qubits", type=int, required=True)
    e.add_argument("--length", type=float, required=True)
    e.add_argument("--dt", type=float, required=True)
    e.add_argument("--steps", type=int, required=True)
    e.add_argument("--potential", required=True, help="harmonic, free, or a file of samples")
    e.add_argument("--psi0", required=True, help="gaussian(x0,sigma,p0) or a file of samples")
    e.add_argument("--order", choices=("lie", "strang"), default="lie")
    e.add_argument("--out", default=None, help="CSV trace path")
    e.add_argument("--dump-final", default=None, help="write final amplitudes here")

    q = sub.add_parser("qecc", parents=[common], help="five-qubit code round trips and Monte Carlo")
    q.add_argument("--mode", choices=("roundtrip", "montecarlo"), default="roundtrip")
    q.add_argument("--error", default=None, help="I, or X/Z/Y followed by a qubit index")
    q.add_argument("--p", type=float, default=0.01)
    q.add_argument("--trials", type=int, default=100000)
    q.add_argument("--samples", type=int, default=5, help="random logical states per error")
    q.add_argument("--print-code", action="store_true", help="dump the two logical codewords")

    f = sub.add_parser("qft", parents=[common], help="QFT of an amplitude dump")
    f.add_argument("--qubits", type=int, required=True)
    f.add_argument("--input", required=True)
    f.add_argument("--inverse", action="store_true")
    f.add_argument("--out", default=None, help="write the dump here instead of stdout")
    return p


def _validate(ns: argparse.Namespace) -> None:
    cmd = ns.subcommand
    if cmd == "shor":
        if ns.n < 3:
            raise UsageError("--n must be an odd composite >= 9")
        if ns.attempts < 1:
            raise UsageError("--attempts must be >= 1")
    elif cmd == "grover":
        if ns.qubits < 2:
            raise UsageError("--qubits must be >= 2")
        if not 0 <= ns.marked < (1 << ns.qubits):
            raise UsageError(f"--marked must lie in [0, {1 << ns.qubits})")
        if ns.iterations is not None and ns.iterations < 0:
            raise UsageError("--iterations must be >= 0")
    elif cmd == "evolve":
        if ns.qubits < 3:
            raise UsageError("--qubits must be >= 3")
        if ns.length <= 0 or ns.dt <= 0:
            raise UsageError("--length and --dt must be positive")
        if ns.steps < 1:
            raise UsageError("--steps must be >= 1")
    elif cmd == "qecc":
        if not 0 <= ns.p <= 1:
            raise UsageError("--p must lie in [0, 1]")
        if ns.trials < 1 or ns.samples < 1:
            raise UsageError("--trials and --samples must be >= 1")
        if ns.error is not None:
            try:
                qecc5.PauliError.parse(ns.error)
            except ValueError as exc:
                raise UsageError(str(exc)) from None
    elif cmd == "qft":
        if ns.qubits < 1:
            raise UsageError("--qubits must be >= 1")


def parse_args(argv: list[str] | None = None) -> RunConfig:
    """Parse and validate; usage problems exit with status 2."""
    parser = _parser()
    ns = parser.parse_args(argv)
    try:
        _validate(ns)
    except UsageError as exc:
        parser.error(str(exc))
    seed = ns.seed
    if seed is None:
        env = os.environ.get(SEED_ENV)
        try:
            seed = int(env) if env else DEFAULT_SEED
        except ValueError:
            parser.error(f"${SEED_ENV} is not an integer: {env!r}")
    params = {k: v for k, v in vars(ns).items() if k not in ("subcommand", "seed", "json")}
    return RunConfig(ns.subcommand, seed, "json" if ns.json else "human", params)


# --- subcommands -----------------------------------------------------------

def _run_shor(cfg: RunConfig, rng) -> tuple[int, dict]:
    p = cfg.params
    log: list = []
    try:
        factors = shor.factor(p["n"], rng, p["attempts"], p["premeasure"], log, p["a"])
        status = 0
    except shor.AttemptsExhausted:
        factors, status = None, 1
    except shor.CapacityError as exc:
        raise UsageError(f"{exc} (required qubits: {exc.required})") from None
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    return status, {"n": p["n"], "factors": list(factors) if factors else None, "attempts": log}


def _run_grover(cfg: RunConfig, rng) -> tuple[int, dict]:
    p = cfg.params
    oracle = grover.SearchOracle(p["qubits"], p["marked"])
    k = grover.optimal_iterations(p["qubits"]) if p["iterations"] is None else p["iterations"]
    found = grover.grover_search(oracle, rng, k)
    correct = bool(oracle.query(found))
    return 0, {
        "qubits": p["qubits"],
        "iterations": k,
        "found": found,
        "correct": correct,
        "queries": oracle.queries,
        "success_prob_analytic": grover.success_probability(p["qubits"], k),
    }


_GAUSS = re.compile(r"^gaussian\(([^)]*)\)$")


def _read_samples(path: str, points: int) -> np.ndarray:
    rows = []
    for line in Path(path).read_text().splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.replace(",", " ").split()
        rows.append(complex(float(parts[0]), float(parts[1]) if len(parts) > 1 else 0.0))
    if len(rows) != points:
        raise UsageError(f"{path}: expected {points} samples, found {len(rows)}")
    return np.array(rows)


def _potential(text: str, grid: hamsim.Grid1D) -> np.ndarray:
    if text == "harmonic":
        return hamsim.harmonic_potential(grid)
    if text == "free":
        return np.zeros(grid.points)
    if not os.path.isfile(text):
        raise UsageError(f"unknown potential {text!r}")
    v = _read_samples(text, grid.points)
    if np.any(v.imag != 0):
        raise UsageError("potential samples must be real")
    return v.real


def _psi0(text: str, grid: hamsim.Grid1D) -> np.ndarray:
    m = _GAUSS.match(text.replace(" ", ""))
    if m:
        try:
            args = [float(a) for a in m.group(1).split(",")]
        except ValueError:
            raise UsageError(f"bad gaussian parameters in {text!r}") from None
        if len(args) not in (2, 3) or args[1] <= 0:
            raise UsageError("gaussian takes (x0, sigma[, p0]) with sigma > 0")
        return hamsim.gaussian_packet(grid, *args)
    if not os.path.isfile(text):
        raise UsageError(f"unknown initial state {text!r}")
    return _read_samples(text, grid.points)


def _run_evolve(cfg: RunConfig, rng) -> tuple[int, dict]:
    p = cfg.params
    grid = hamsim.Grid1D(p["qubits"], p["length"], p["dt"])
    h = hamsim.SplitHamiltonian(_potential(p["potential"], grid))
    s = hamsim.init_wavefunction(grid, _psi0(p["psi0"], grid))
    trace = []

    def record(step, state):
        obs = hamsim.observables(state, grid, h)
        trace.append((step, step * grid.dt, obs["norm"], obs["mean_x"], obs["mean_p"], obs["energy"]))

    record(0, s)
    s = hamsim.evolve(s, h, grid, p["steps"], p["order"], callback=record)
    if p["out"]:
        with open(p["out"], "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["step", "time", "norm", "mean_x", "mean_p", "energy"])
            w.writerows((r[0], *(repr(float(v)) for v in r[1:])) for r in trace)
    if p["dump_final"]:
        Path(p["dump_final"]).write_text(dump(s))
    last = trace[-1]
    return 0, {
        "qubits": p["qubits"], "length": p["length"], "dt": p["dt"], "steps": p["steps"],
        "order": p["order"], "final_time": last[1], "norm": last[2], "mean_x": last[3],
        "mean_p": last[4], "energy": last[5], "initial_energy": trace[0][5],
    }


def _run_qecc(cfg: RunConfig, rng) -> tuple[int, dict]:
    p = cfg.params
    table = {str(k): str(v) for k, v in sorted(qecc5.syndrome_table().items())}
    if p["mode"] == "montecarlo":
        rate, err = qecc5.logical_error_rate(p["p"], p["trials"], rng)
        return 0, {"mode": "montecarlo", "p": p["p"], "trials": p["trials"],
                   "logical_rate": rate, "stderr": err}
    errors = [qecc5.PauliError.parse(p["error"])] if p["error"] else list(qecc5.ERRORS)
    results = []
    for e in errors:
        fids, syns = [], set()
        for _ in range(p["samples"]):
            q = qecc5.LogicalQubit.random(rng)
            noisy = qecc5.apply_error(qecc5.encode(q), e)
            syn, collapsed = qecc5.syndrome_extract(noisy, rng)
            syns.add(syn.value)
            fids.append(qecc5.logical_fidelity(q, qecc5.decode(qecc5.recover(collapsed, syn))))
        results.append({"error": e.label, "syndrome": sorted(syns), "fidelity": min(fids)})
    report = {"mode": "roundtrip", "syndrome_table": table, "results": results}
    if len(results) == 1:
        report["fidelity"] = results[0]["fidelity"]
    return 0, report


def _run_qft(cfg: RunConfig, rng) -> tuple[int, dict]:
    p = cfg.params
    try:
        s = load_dump(Path(p["input"]).read_text(), p["qubits"])
    except (OSError, ValueError) as exc:
        raise UsageError(f"cannot read {p['input']}: {exc}") from None
    out = apply_qft(s, QftSpec(0, p["qubits"], p["inverse"]))
    text = dump(out, tol=1e-15)
    if p["out"]:
        Path(p["out"]).write_text(text)
    return 0, {"qubits": p["qubits"], "inverse": p["inverse"], "dump": text}


_HANDLERS = {
    "shor": _run_shor,
    "grover": _run_grover,
    "evolve": _run_evolve,
    "qecc": _run_qecc,
    "qft": _run_qft,
}


def _human(report: dict) -> str:
    lines = []
    for k, v in report.items():
        if isinstance(v, float):
            v = format(v, ".12g")
        elif isinstance(v, (list, dict)):
            v = json.dumps(v)
        lines.append(f"{k}: {v}")
    return "\n".join(lines) + "\n"


def run(cfg: RunConfig, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    if cfg.params.get("print_code"):
        basis = qecc5.logical_basis()
        for b in (0, 1):
            stdout.write(f"# logical {b}\n")
            stdout.write(dump(StateVector(5, basis[:, b]), tol=1e-15))
        return 0
    rng = np.random.default_rng(cfg.seed)
    start = time.perf_counter()
    try:
        status, payload = _HANDLERS[cfg.subcommand](cfg, rng)
    except UsageError as exc:
        stderr.write(f"qubitkit {cfg.subcommand}: error: {exc}\n")
        return 2
    report = {
        "version": __version__,
        "subcommand": cfg.subcommand,
        "seed": cfg.seed,
        **payload,
        "wall_time_ms": round((time.perf_counter() - start) * 1000, 3),
    }
    if cfg.subcommand == "qft" and cfg.output != "json":
        if not cfg.params["out"]:
            stdout.write(payload["dump"])
        return status
    stdout.write(json.dumps(report) + "\n" if cfg.output == "json" else _human(report))
    return status


def main(argv: list[str] | None = None) -> int:
    return run(parse_args(argv))


if __name__ == "__main__":
    sys.exit(main())
