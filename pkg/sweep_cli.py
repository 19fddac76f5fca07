#!/usr/bin/env python3
"""
lambda-reciprocation — sweep / validate / roundtrip CLI
━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━

Usage:
  python sweep_cli.py transfer-sweep --alpha 0.25:5:0.25 --lambda0-t 0:pi:pi/64 --delta-ratio 0.1 --out entropy_map.csv
  python sweep_cli.py delta-sweep    --alpha 1,3,5 --lambda0-t pi/2 --delta-ratio 0:1:0.05 --out splitting.csv
  python sweep_cli.py validate       --preset paper-regime
  python sweep_cli.py roundtrip      --alpha 2 --lambda0-t pi/2 --outcome g1g1

Common flags: --config FILE, --preset NAME, --path {full,effective,closed}, --Delta-over-g1 X,
--fock-dim N, --workers N, --cross-check, --log-level LEVEL.

Exit codes: 0 ok, 1 validation failure, 2 invalid arguments, 3 numeric-contract violation.
"""

from __future__ import annotations
import argparse, csv, logging, math, re, sys, time
from concurrent.futures import ProcessPoolExecutor, as_completed
from contextlib import contextmanager
from typing import Dict, Iterator, List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, model_validator
from tqdm import tqdm

import settings
from closed_form import c21_entanglement, evolve_closed_form
from errors import (DegenerateStateError, InvalidArgumentError,
                    ReciprocationError, ValidationFailure)
from hamiltonians import (SystemParams, check_conservation, degenerate_raman_hamiltonian,
                          effective_hamiltonian, full_hamiltonian, reduction_scaling,
                          verify_dispersive_reduction)
from hilbert import FockSpace
from numerics import fidelity
from protocol import (OUTCOME_LABELS, ComputePath, RoundTripPoint, RoundTripReport,
                      excited_population, ground_projection, initial_transfer_state,
                      measure_atoms, roundtrip, sample_outcome, select_outcome,
                      transfer_evolve, transfer_outcomes)

logger = logging.getLogger(__name__)

CSV_COLUMNS = ["alpha", "lambda0_t", "delta_over_lambda0", "entropy_bits", "outcome_probability",
               "path_residual", "entropy_oracle", "warning"]

# cross-check partner of each path
ORACLE_PATH = {
    ComputePath.CLOSED:    ComputePath.EFFECTIVE,
    ComputePath.EFFECTIVE: ComputePath.CLOSED,
    ComputePath.FULL:      ComputePath.EFFECTIVE,
}


# ─── ARGUMENT VALUES ───────────────────────────────────────────────────────────
_PI_TERM = re.compile(r"^([+-]?(?:\d+\.?\d*|\.\d+)?(?:e[+-]?\d+)?)\*?pi$")


def _parse_term(text: str) -> float:
    m = _PI_TERM.match(text)
    if m:
        coef = m.group(1)
        return math.pi * (float(coef) if coef not in ("", "+", "-") else (-1.0 if coef == "-" else 1.0))
    return float(text)


def parse_scalar(text) -> float:
    """Number or pi expression: 1.5, pi, pi/2, 0.5pi, 3pi/4, 2*pi."""
    s = str(text).strip().lower().replace(" ", "")
    try:
        if "/" in s:
            num, den = s.split("/", 1)
            value = _parse_term(num) / _parse_term(den)
        else:
            value = _parse_term(s)
    except (ValueError, ZeroDivisionError):
        raise InvalidArgumentError(f"Cannot parse number '{text}'")
    if not math.isfinite(value):
        raise InvalidArgumentError(f"Not a finite number: '{text}'")
    return value


def parse_values(text) -> List[float]:
    """Comma list of scalars and start:stop:step ranges (stop included within half a step)."""
    values: List[float] = []
    for item in str(text).split(","):
        item = item.strip()
        if not item:
            continue
        if ":" in item:
            parts = item.split(":")
            if len(parts) != 3:
                raise InvalidArgumentError(f"Range must be start:stop:step, got '{item}'")
            start, stop, step = (parse_scalar(x) for x in parts)
            if step <= 0 or stop < start:
                raise InvalidArgumentError(f"Invalid range '{item}'")
            count = int(math.floor((stop - start) / step + 0.5)) + 1
            values.extend(start + k * step for k in range(count))
        else:
            values.append(parse_scalar(item))
    if not values:
        raise InvalidArgumentError(f"Empty value list '{text}'")
    return values


def parse_single(text, name: str) -> float:
    values = parse_values(text)
    if len(values) != 1:
        raise InvalidArgumentError(f"{name} takes a single value, got {len(values)}")
    return values[0]


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, (bool, int, np.integer)):
        return str(int(x))
    return format(float(x), ".12g")


# ─── GRID / RECORDS ────────────────────────────────────────────────────────────
class SweepGrid(BaseModel):
    alpha_values: List[float]
    lambda0_t_values: List[float]
    delta_over_lambda0_values: List[float]
    Delta_over_g1: float = 100.0
    outcome: str = "g2g1"
    path: str = "closed"
    omega_over_lambda0: float = 0.0
    g1: float = 1.0
    e_g1: float = 0.0
    fock_dim: Optional[int] = None
    cross_check: bool = False

    @model_validator(mode="after")
    def _check(self):
        for name in ("alpha_values", "lambda0_t_values", "delta_over_lambda0_values"):
            values = getattr(self, name)
            if not values:
                raise InvalidArgumentError(f"{name} must not be empty")
            if any(v < 0 for v in values):
                raise InvalidArgumentError(f"{name} must be >= 0")
        if self.outcome not in OUTCOME_LABELS:
            raise InvalidArgumentError(f"Unknown outcome '{self.outcome}'. Allowed values: {list(OUTCOME_LABELS)}")
        if not self.Delta_over_g1 > 0:
            raise InvalidArgumentError("Delta_over_g1 must be > 0")
        ComputePath.parse(self.path)
        return self

    def points(self) -> List[Tuple[float, float, float]]:
        """Canonical order: alpha-major, then λ0t, then δ/λ0."""
        return [(a, lt, r) for a in self.alpha_values
                for lt in self.lambda0_t_values
                for r in self.delta_over_lambda0_values]


class SweepRecord(BaseModel):
    alpha: float
    lambda0_t: float
    delta_over_lambda0: float
    entropy_bits: float
    outcome_probability: float
    path_residual: Optional[float] = None
    entropy_oracle: Optional[float] = None
    warning: int = 0

    def csv_row(self) -> List[str]:
        return [_fmt(getattr(self, c)) for c in CSV_COLUMNS]


def warning_flag(p: SystemParams, delta_over_lambda0: float, path: ComputePath) -> int:
    closed_out_of_range = path is ComputePath.CLOSED and delta_over_lambda0 > settings.MAX_CLOSED_FORM_RATIO
    return int(not p.dispersive_valid or closed_out_of_range)


def _transfer(grid: SweepGrid, p: SystemParams, space: FockSpace, alpha: float, t: float, path: ComputePath):
    state = transfer_evolve(initial_transfer_state(alpha, space), t, p, path)
    return state, select_outcome(measure_atoms(state), grid.outcome)


def evaluate_point(grid: SweepGrid, alpha: float, lambda0_t: float, ratio: float) -> SweepRecord:
    path = ComputePath.parse(grid.path)
    p = SystemParams.from_ratios(grid.Delta_over_g1, ratio, grid.omega_over_lambda0, g1=grid.g1, e_g1=grid.e_g1)
    space = FockSpace.for_amplitude(alpha, dim=grid.fock_dim)
    t = p.time(lambda0_t)
    state, chosen = _transfer(grid, p, space, alpha, t, path)

    if chosen.annihilated:
        logger.info("outcome %s annihilated at alpha=%s lambda0_t=%.6g", grid.outcome, alpha, lambda0_t)
        entropy = 0.0
    elif path is ComputePath.CLOSED and grid.outcome in ("g2g1", "g1g2"):
        entropy = c21_entanglement(alpha, t, p, space, grid.outcome).entropy
    else:
        entropy = chosen.entropy()

    residual = oracle = None
    if grid.cross_check:
        oracle = 0.0 if chosen.annihilated else chosen.entropy()
        other, _ = _transfer(grid, p, space, alpha, t, ORACLE_PATH[path])
        residual = 1.0 - fidelity(ground_projection(state).vector, ground_projection(other).vector)

    return SweepRecord(alpha=alpha, lambda0_t=lambda0_t, delta_over_lambda0=ratio,
                       entropy_bits=max(entropy, 0.0),
                       outcome_probability=chosen.probability, path_residual=residual,
                       entropy_oracle=oracle, warning=warning_flag(p, ratio, path))


def _evaluate(args) -> SweepRecord:
    return evaluate_point(*args)


def compute_records(grid: SweepGrid, workers: int = 1) -> List[SweepRecord]:
    points = grid.points()
    if workers <= 1:
        return [evaluate_point(grid, *pt) for pt in tqdm(points, desc="points", disable=None, file=sys.stderr)]
    results: Dict[int, SweepRecord] = {}
    with ProcessPoolExecutor(max_workers=workers) as executor:
        futures = {executor.submit(_evaluate, (grid, *pt)): i for i, pt in enumerate(points)}
        for future in tqdm(as_completed(futures), total=len(futures), desc="points", disable=None, file=sys.stderr):
            results[futures[future]] = future.result()
    return [results[i] for i in range(len(points))]


@contextmanager
def _output(out: Optional[str]) -> Iterator:
    if not out or out == "-":
        yield sys.stdout
        return
    try:
        f = open(out, "w", encoding="utf-8", newline="")
    except OSError as e:
        raise InvalidArgumentError(f"Cannot write {out}: {e}")
    with f:
        yield f


def write_csv(records: List[SweepRecord], out: Optional[str]) -> None:
    with _output(out) as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        for r in records:
            w.writerow(r.csv_row())


def _summary(records: List[SweepRecord]) -> Dict[str, float]:
    entropies = [r.entropy_bits for r in records]
    return {"rows": len(records), "min_entropy": min(entropies), "max_entropy": max(entropies),
            "warnings": sum(r.warning for r in records)}


# ─── OPERATIONS ────────────────────────────────────────────────────────────────
def run_transfer_sweep(grid: SweepGrid, out: Optional[str], workers: int = 1) -> Dict[str, float]:
    started = time.monotonic()
    records = compute_records(grid, workers)
    write_csv(records, out)
    summary = _summary(records)
    if summary["warnings"]:
        settings.status("⚠️ ", f"{summary['warnings']} row(s) outside the dispersive / closed-form validity window")
    settings.write_run_log(out if out != "-" else None, "sweep", "transfer-sweep",
                           extra={"grid": grid.model_dump(), "summary": summary, "workers": workers},
                           duration_ms=int((time.monotonic() - started) * 1000))
    return summary


def run_delta_sweep(alpha_list: List[float], lambda0_t: float, ratio_list: List[float], out: Optional[str],
                    workers: int = 1, **grid_fields) -> Dict[str, float]:
    grid = SweepGrid(alpha_values=alpha_list, lambda0_t_values=[lambda0_t],
                     delta_over_lambda0_values=ratio_list, **grid_fields)
    return run_transfer_sweep(grid, out, workers)


# ─── VALIDATION SUITE ──────────────────────────────────────────────────────────
class CheckResult(BaseModel):
    name: str
    status: str   # PASS | FAIL | SKIP
    value: Optional[float] = None
    threshold: str = ""

    def line(self) -> str:
        return f"check={self.name} status={self.status} value={_fmt(self.value) or '-'} threshold={self.threshold or '-'}"


def _check(name: str, value: float, ok: bool, threshold) -> CheckResult:
    th = threshold if isinstance(threshold, str) else _fmt(threshold)
    return CheckResult(name=name, status="PASS" if ok else "FAIL", value=value, threshold=th)


def _skip(name: str) -> CheckResult:
    return CheckResult(name=name, status="SKIP")


VALIDATION_SAMPLES = [(1.0, 0.7), (2.0, 1.1), (2.0, math.pi / 2)]
UNITARITY_SAMPLES = [(a, lt) for a in (0.5, 1.0, 2.0, 3.0, 4.0) for lt in (0.3, 1.1, math.pi / 2, 2.5, 4.0)]


def validation_checks(p: SystemParams, alpha: float, fock_dim: Optional[int] = None) -> List[CheckResult]:
    space = FockSpace.for_amplitude(alpha, dim=fock_dim)
    results: List[CheckResult] = []

    worst = min(p.Delta / p.g1, p.Delta / p.g2)
    results.append(_check("dispersive-validity", worst, p.dispersive_valid, settings.MIN_DELTA_OVER_G))

    h, he = full_hamiltonian(p, space), effective_hamiltonian(p, space)
    herm = max(np.max(np.abs(m - m.conj().T)) / np.max(np.abs(m)) for m in (h, he))
    results.append(_check("hermiticity", herm, herm <= 1e-13, 1e-13))

    full_c, eff_c = check_conservation(p, space)
    cons = max(full_c / np.max(np.abs(h)), eff_c / np.max(np.abs(he)))
    results.append(_check("excitation-conservation", cons, cons <= 1e-12, 1e-12))

    if p.delta == 0 and p.g1 == p.g2:
        ref = degenerate_raman_hamiltonian(p.g1, p.Delta, space, omega=p.omega, e_g1=p.e_g1)
        dev = float(np.max(np.abs(he - ref)))
        results.append(_check("degenerate-raman", dev, bool(np.array_equal(he, ref)), 0))
    else:
        results.append(_skip("degenerate-raman"))

    report = verify_dispersive_reduction(p, space)
    results.append(_check("dispersive-residual", report.relative_residual, report.relative_residual <= 0.05, 0.05))

    leak_ratio, _ = reduction_scaling(p, space)
    results.append(_check("leakage-scaling", leak_ratio, 2.8 <= leak_ratio <= 5.2, "2.8:5.2"))

    if p.g2_condition_holds():
        bound = (p.delta / (2 * p.lambda0)) ** 2 + 1e-9
        dev = 0.0
        for a, lt in UNITARITY_SAMPLES:
            sp = FockSpace.for_amplitude(a)
            for label in ("g1", "g2"):
                dev = max(dev, abs(evolve_closed_form(label, a, p.time(lt), p, sp).norm2() - 1))
        results.append(_check("eq2-unitarity", dev, dev <= bound, bound))

        worst_f = 1.0
        for a, lt in VALIDATION_SAMPLES:
            sp = FockSpace.for_amplitude(a)
            s0 = initial_transfer_state(a, sp)
            closed = transfer_evolve(s0, p.time(lt), p, ComputePath.CLOSED)
            eff = transfer_evolve(s0, p.time(lt), p, ComputePath.EFFECTIVE)
            worst_f = min(worst_f, fidelity(closed.vector, eff.vector))
        results.append(_check("path-closed-vs-effective", worst_f, worst_f >= 1 - 1e-4, 1 - 1e-4))
    else:
        results.extend([_skip("eq2-unitarity"), _skip("path-closed-vs-effective")])

    sp = FockSpace.for_amplitude(1.0)
    s0 = initial_transfer_state(1.0, sp)
    t = p.time(math.pi / 2)
    full = transfer_evolve(s0, t, p, ComputePath.FULL)
    eff = transfer_evolve(s0, t, p, ComputePath.EFFECTIVE)
    f_full = fidelity(ground_projection(full).vector, eff.vector)
    e_bound = 4 * (p.g1 / p.Delta) ** 2 * (1.0 + 1)
    ok = f_full >= 0.99 and max(excited_population(full)) <= e_bound
    results.append(_check("path-effective-vs-full", f_full, ok, 0.99))
    return results


def run_validate(preset: Optional[str], out: Optional[str], cfg: Dict[str, str]) -> List[CheckResult]:
    started = time.monotonic()
    p = params_from_config(cfg)
    alpha = parse_single(cfg["alpha"], "alpha")
    fock_dim = _fock_dim(cfg)
    results = validation_checks(p, alpha, fock_dim)
    with _output(out) as f:
        for r in results:
            f.write(r.line() + "\n")
    failed = [r.name for r in results if r.status == "FAIL"]
    settings.write_run_log(out if out != "-" else None, "validate", preset or "custom",
                           severity="WARNING" if failed else "INFO",
                           extra={"failed": failed, "params": p.model_dump()},
                           duration_ms=int((time.monotonic() - started) * 1000))
    if failed:
        raise ValidationFailure(f"{len(failed)} check(s) failed: {', '.join(failed)}")
    return results


# ─── ROUND TRIP ────────────────────────────────────────────────────────────────
def render_report(report: RoundTripReport) -> str:
    lines = [f"outcome={report.outcome}", f"path={report.path}", f"e_initial={_fmt(report.e_initial)}"]
    lines += [f"p_{label}={_fmt(report.outcome_probs[label])}" for label in OUTCOME_LABELS
              if label in report.outcome_probs]
    for key in ("e_stored", "projection_weight", "retrieval_fidelity", "e_retrieved", "excited_population"):
        value = getattr(report, key)
        lines.append(f"{key}={_fmt(value) if value is not None else '-'}")
    return "\n".join(lines) + "\n"


def run_roundtrip(point: RoundTripPoint, out: Optional[str], sample: bool = False,
                  seed: Optional[int] = None) -> RoundTripReport:
    started = time.monotonic()
    if sample:
        rng = np.random.default_rng(seed)
        drawn = sample_outcome(transfer_outcomes(point), rng)
        settings.status("ℹ️ ", f"Sampled outcome {drawn.label} (p={drawn.probability:.6g}, seed={seed})")
        point = point.model_copy(update={"outcome": drawn.label})
    try:
        report = roundtrip(point)
    except DegenerateStateError as e:
        if e.partial is not None:
            with _output(out) as f:
                f.write(render_report(e.partial))
        raise
    with _output(out) as f:
        f.write(render_report(report))
    settings.write_run_log(out if out != "-" else None, "roundtrip", point.outcome,
                           extra={"point": point.model_dump(), "report": report.model_dump()},
                           duration_ms=int((time.monotonic() - started) * 1000))
    return report


# ─── CONFIG → PARAMETERS ───────────────────────────────────────────────────────
def params_from_config(cfg: Dict[str, str]) -> SystemParams:
    return SystemParams.from_ratios(
        parse_single(cfg["Delta_over_g1"], "Delta_over_g1"),
        parse_single(cfg["delta_ratio"], "delta_ratio"),
        parse_single(cfg["omega_over_lambda0"], "omega_over_lambda0"),
        g1=parse_single(cfg["g1"], "g1"),
        e_g1=parse_single(cfg["e_g1"], "e_g1"),
    )


def grid_from_config(cfg: Dict[str, str]) -> SweepGrid:
    return SweepGrid(
        alpha_values=parse_values(cfg["alpha"]),
        lambda0_t_values=parse_values(cfg["lambda0_t"]),
        delta_over_lambda0_values=parse_values(cfg["delta_ratio"]),
        Delta_over_g1=parse_single(cfg["Delta_over_g1"], "Delta_over_g1"),
        outcome=cfg["outcome"],
        path=ComputePath.parse(cfg["path"]).value,
        omega_over_lambda0=parse_single(cfg["omega_over_lambda0"], "omega_over_lambda0"),
        g1=parse_single(cfg["g1"], "g1"),
        e_g1=parse_single(cfg["e_g1"], "e_g1"),
        fock_dim=_fock_dim(cfg),
        cross_check=settings.parse_bool(cfg["cross_check"]),
    )


def point_from_config(cfg: Dict[str, str]) -> RoundTripPoint:
    retrieval = cfg.get("retrieval_lambda0_t") or "pi/2"
    return RoundTripPoint(
        alpha=parse_single(cfg["alpha"], "alpha"),
        lambda0_t=parse_single(cfg["lambda0_t"], "lambda0_t"),
        retrieval_lambda0_t=parse_single(retrieval, "retrieval_lambda0_t"),
        delta_over_lambda0=parse_single(cfg["delta_ratio"], "delta_ratio"),
        Delta_over_g1=parse_single(cfg["Delta_over_g1"], "Delta_over_g1"),
        omega_over_lambda0=parse_single(cfg["omega_over_lambda0"], "omega_over_lambda0"),
        g1=parse_single(cfg["g1"], "g1"),
        e_g1=parse_single(cfg["e_g1"], "e_g1"),
        outcome=cfg["outcome"],
        path=ComputePath.parse(cfg["path"]).value,
        fock_dim=_fock_dim(cfg),
    )


def _fock_dim(cfg: Dict[str, str]) -> Optional[int]:
    if not cfg.get("fock_dim"):
        return None
    try:
        return int(cfg["fock_dim"])
    except ValueError:
        raise InvalidArgumentError(f"fock_dim must be an integer, got '{cfg['fock_dim']}'")


def _workers(cfg: Dict[str, str]) -> int:
    try:
        n = int(cfg["workers"])
    except ValueError:
        raise InvalidArgumentError(f"workers must be an integer, got '{cfg['workers']}'")
    if n < 1:
        raise InvalidArgumentError("workers must be >= 1")
    return n


# ─── COMMANDS ──────────────────────────────────────────────────────────────────
def cmd_transfer_sweep(cfg: Dict[str, str], args) -> int:
    summary = run_transfer_sweep(grid_from_config(cfg), args.out, _workers(cfg))
    settings.status("✅", f"{summary['rows']} row(s), entropy {summary['min_entropy']:.6g}..{summary['max_entropy']:.6g}")
    return 0


def cmd_delta_sweep(cfg: Dict[str, str], args) -> int:
    grid = grid_from_config(cfg)
    if len(grid.lambda0_t_values) != 1:
        raise InvalidArgumentError("delta-sweep takes a single --lambda0-t")
    fields = grid.model_dump(exclude={"alpha_values", "lambda0_t_values", "delta_over_lambda0_values"})
    summary = run_delta_sweep(grid.alpha_values, grid.lambda0_t_values[0], grid.delta_over_lambda0_values,
                              args.out, _workers(cfg), **fields)
    settings.status("✅", f"{summary['rows']} row(s), entropy {summary['min_entropy']:.6g}..{summary['max_entropy']:.6g}")
    return 0


def cmd_validate(cfg: Dict[str, str], args) -> int:
    run_validate(args.preset, args.out, cfg)
    settings.status("✅", "All checks passed")
    return 0


def cmd_roundtrip(cfg: Dict[str, str], args) -> int:
    report = run_roundtrip(point_from_config(cfg), args.out, sample=args.sample, seed=args.seed)
    settings.status("✅", f"Retrieval fidelity {report.retrieval_fidelity:.9f}")
    return 0


COMMANDS = {
    "transfer-sweep": cmd_transfer_sweep,
    "delta-sweep":    cmd_delta_sweep,
    "validate":       cmd_validate,
    "roundtrip":      cmd_roundtrip,
}

# flag dest → config key (identical names; listed for the overlay)
OVERRIDE_KEYS = ["alpha", "lambda0_t", "delta_ratio", "Delta_over_g1", "outcome", "path", "fock_dim",
                 "workers", "omega_over_lambda0", "retrieval_lambda0_t", "log_level"]


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="key = value config file (default: reciprocation.config)")
    common.add_argument("--preset", help=f"named parameter set: {', '.join(settings.PRESETS)}")
    common.add_argument("--alpha", help="coherent amplitude(s): value, list or start:stop:step")
    common.add_argument("--lambda0-t", dest="lambda0_t", help="interaction time(s) in units of 1/lambda0")
    common.add_argument("--delta-ratio", dest="delta_ratio", help="delta/lambda0 value(s)")
    common.add_argument("--Delta-over-g1", dest="Delta_over_g1")
    common.add_argument("--omega-over-lambda0", dest="omega_over_lambda0")
    common.add_argument("--outcome", choices=list(OUTCOME_LABELS))
    common.add_argument("--path", choices=[m.value for m in ComputePath])
    common.add_argument("--fock-dim", dest="fock_dim", help="override the automatic Fock dimension")
    common.add_argument("--workers", help="process pool size (output order is fixed)")
    common.add_argument("--cross-check", dest="cross_check", action="store_true", default=None)
    common.add_argument("--retrieval-lambda0-t", dest="retrieval_lambda0_t")
    common.add_argument("--log-level", dest="log_level")
    common.add_argument("--out", help="output file (default: stdout)")

    parser = argparse.ArgumentParser(prog="sweep_cli.py", description="Entanglement reciprocation simulator")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("transfer-sweep", "delta-sweep", "validate"):
        sub.add_parser(name, parents=[common])
    rt = sub.add_parser("roundtrip", parents=[common])
    rt.add_argument("--sample", action="store_true", help="draw the outcome from the Born probabilities")
    rt.add_argument("--seed", type=int, default=None)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = settings.load_config(args.config, args.preset)
        for key in OVERRIDE_KEYS:
            value = getattr(args, key, None)
            if value is not None:
                cfg[key] = str(value)
        if args.cross_check:
            cfg["cross_check"] = "true"
        settings.setup_logging(cfg["log_level"])
        return COMMANDS[args.command](cfg, args)
    except ReciprocationError as e:
        settings.status("❌", e.detail)
        return e.exit_code


if __name__ == "__main__":
    sys.exit(main())
