"""Experiment runners behind the command-line interface.

Each runner takes an :class:`ExperimentConfig` and returns an
:class:`ExperimentResult` with the primary output (CSV table or JSON
document), optional sidecar documents and a status code.
"""
from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field, fields
from typing import Any

import numpy as np

from .battery import BATTERY_VERSION, battery, nonnegative_battery
from .lemma import lemma1_construct
from .operators import OperatorFamily
from .orlicz import PhiFunction
from .radix import RadixError, RadixSequence, parse_radices
from .system import character_matrix, dirichlet_kernel
from .tables import CsvTable, config_hash
from .transform import forward_array, inverse_array
from .weak_type import fit_hm, generalized_weak_check, search_restricted

EXPERIMENTS = ("transform-check", "weaktype", "extrapolation", "lemma1", "convergence")

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_CONFIG = 2

TRANSFORM_TOL = 1e-10


class ConfigError(ValueError):
    def __init__(self, field_name: str, message: str, line: int | None = None):
        self.field = field_name
        self.line = line
        where = f"line {line}, " if line is not None else ""
        super().__init__(f"{where}field '{field_name}': {message}")


@dataclass
class ExperimentConfig:
    experiment: str = "transform-check"
    radices: str = "2,2,2,2"
    level_repeat: int = 1
    p_grid: list[float] = field(default_factory=lambda: [1.1, 1.3, 1.5, 1.8])
    eps_grid: list[float] = field(default_factory=lambda: [0.0, 0.01, 0.05, 0.1, 0.25, 0.5, 1.0])
    lambda_grid: list[float] = field(default_factory=lambda: [0.05, 0.1, 0.25, 0.5, 1.0, 2.0, 4.0])
    j_grid: list[int] | None = None
    phi_m: float = 1.0
    phi: str = "orlicz"
    family: str = "partial-sums"
    epsilon: float = 0.1
    kernels: list[int] | None = None
    seed: int = 0
    trials: int = 1000
    out: str | None = None

    def __post_init__(self):
        if isinstance(self.radices, (list, tuple)):
            self.radices = ",".join(str(m) for m in self.radices)
        for name in ("p_grid", "eps_grid", "lambda_grid"):
            setattr(self, name, _number_list(name, getattr(self, name), float))
        for name in ("j_grid", "kernels"):
            if getattr(self, name) is not None:
                setattr(self, name, _number_list(name, getattr(self, name), int))
        for name, kind in (("level_repeat", int), ("seed", int), ("trials", int),
                           ("phi_m", float), ("epsilon", float)):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                raise ConfigError(name, f"expected a number, got {value!r}")
            if kind is int and value != int(value):
                raise ConfigError(name, f"expected an integer, got {value!r}")
            setattr(self, name, kind(value))

    def radix(self) -> RadixSequence:
        try:
            return parse_radices(self.radices, self.level_repeat)
        except RadixError as exc:
            raise ConfigError("radices", str(exc)) from exc

    def hashable(self) -> dict:
        d = asdict(self)
        d.pop("out")
        return d

    def hash(self) -> str:
        return config_hash(self.hashable())

    def validate(self) -> None:
        if self.experiment not in EXPERIMENTS:
            raise ConfigError("experiment", f"must be one of {', '.join(EXPERIMENTS)}")
        R = self.radix()
        if self.level_repeat < 1:
            raise ConfigError("level_repeat", "must be at least 1")
        if self.trials < 1:
            raise ConfigError("trials", "must be at least 1")
        if not 0 <= self.seed < 2 ** 64:
            raise ConfigError("seed", "must be a 64-bit unsigned integer")
        if self.family not in ("partial-sums", "identity"):
            raise ConfigError("family", "must be 'partial-sums' or 'identity'")
        if self.phi not in ("orlicz", "linear"):
            raise ConfigError("phi", "must be 'orlicz' or 'linear'")
        if self.phi_m < 0:
            raise ConfigError("phi_m", "must be non-negative")
        if self.experiment == "weaktype":
            if not self.p_grid:
                raise ConfigError("p_grid", "must be non-empty")
            if any(not 1 < p < 2 for p in self.p_grid):
                raise ConfigError("p_grid", "exponents must lie in (1, 2)")
        if self.experiment == "extrapolation":
            if not self.eps_grid:
                raise ConfigError("eps_grid", "must be non-empty")
            if any(e < 0 for e in self.eps_grid):
                raise ConfigError("eps_grid", "values must be non-negative")
        if self.experiment in ("extrapolation", "convergence"):
            if not self.lambda_grid:
                raise ConfigError("lambda_grid", "must be non-empty")
            if any(lam <= 0 for lam in self.lambda_grid):
                raise ConfigError("lambda_grid", "values must be positive")
        if self.j_grid is not None:
            if not self.j_grid or any(not 1 <= j <= R.size for j in self.j_grid):
                raise ConfigError("j_grid", f"values must lie in [1, {R.size}]")
        if self.kernels is not None:
            if not self.kernels or any(not 1 <= j <= R.size for j in self.kernels):
                raise ConfigError("kernels", f"Dirichlet indices must lie in [1, {R.size}]")
        if self.epsilon <= 0:
            raise ConfigError("epsilon", "must be positive")

    def phi_function(self) -> PhiFunction:
        return PhiFunction.linear() if self.phi == "linear" else PhiFunction(self.phi_m)

    def operator_family(self, R: RadixSequence) -> OperatorFamily:
        if self.family == "identity":
            return OperatorFamily.identity(R)
        return OperatorFamily.partial_sums(R)


def _number_list(name, value, kind):
    if isinstance(value, str):
        value = [tok for tok in value.split(",") if tok.strip()]
    try:
        return [kind(v) for v in value]
    except (TypeError, ValueError) as exc:
        raise ConfigError(name, f"expected a list of numbers, got {value!r}") from exc


CONFIG_FIELDS = {f.name for f in fields(ExperimentConfig)}


def load_config_file(path: str) -> dict[str, Any]:
    """Read a JSON config; keys mirror the long flags with '_' for '-'."""
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError("<file>", exc.msg, exc.lineno) from exc
    if not isinstance(data, dict):
        raise ConfigError("<file>", "top level must be a JSON object", 1)
    out = {}
    for key, value in data.items():
        name = key.replace("-", "_")
        if name not in CONFIG_FIELDS:
            raise ConfigError(key, "unknown field", key_line(text, key))
        out[name] = value
    out["_lines"] = {k.replace("-", "_"): key_line(text, k) for k in data}
    return out


def key_line(text: str, key: str) -> int | None:
    needle = f'"{key}"'
    for i, line in enumerate(text.splitlines(), start=1):
        if needle in line:
            return i
    return None


@dataclass
class ExperimentResult:
    table: CsvTable | None = None
    document: dict | None = None
    sidecars: dict[str, dict] = field(default_factory=dict)
    status: int = EXIT_OK
    message: str = ""


def _stamp(table: CsvTable, config: ExperimentConfig) -> CsvTable:
    table.comments.insert(0, f"config-hash={config.hash()}")
    return table


def run_transform_check(config: ExperimentConfig) -> ExperimentResult:
    """Fast transform against the quadratic oracle on random functions."""
    R = config.radix()
    rng = np.random.default_rng(config.seed)
    n = config.trials
    f = rng.normal(size=(n, R.size)) + 1j * rng.normal(size=(n, R.size))
    chi = character_matrix(R)
    naive = f @ chi.conj().T / R.size
    fast = forward_array(R, f)
    back = inverse_array(R, fast)
    scale = np.abs(f).max(axis=1)
    fwd_err = np.abs(fast - naive).max(axis=1) / scale
    rt_err = np.abs(back - f).max(axis=1) / scale
    energy = np.mean(np.abs(f) ** 2, axis=1)
    parseval = np.abs(np.sum(np.abs(fast) ** 2, axis=1) - energy) / energy
    table = CsvTable(["trial", "forward_err", "roundtrip_err", "parseval_err"])
    for i in range(n):
        table.append(i, fwd_err[i], rt_err[i], parseval[i])
    worst = float(max(fwd_err.max(), rt_err.max(), parseval.max()))
    status = EXIT_OK if worst < TRANSFORM_TOL else EXIT_VIOLATION
    return ExperimentResult(_stamp(table, config), status=status,
                            message=f"worst relative error {worst:.3e}")


def run_weaktype(config: ExperimentConfig) -> ExperimentResult:
    R = config.radix()
    family = config.operator_family(R)
    grid = list(config.p_grid)
    found = search_restricted(family, grid, config.trials, config.seed)
    table = CsvTable(["p", "C_p", "witness_set_size"])
    for p, (const, mask, _) in zip(grid, found):
        table.append(p, const, int(mask.sum()))
    sidecar = {"config_hash": config.hash(), "trials": config.trials}
    if len(grid) >= 3:
        fit = fit_hm(grid, [c for c, _, _ in found])
        sidecar.update(fit.as_dict())
    else:
        sidecar["fit"] = "skipped: fewer than 3 exponents"
    return ExperimentResult(_stamp(table, config), sidecars={"fit": sidecar})


def run_extrapolation(config: ExperimentConfig) -> ExperimentResult:
    R = config.radix()
    family = config.operator_family(R)
    tests = battery(R, config.seed)
    result = generalized_weak_check(family, config.phi_function(), tests,
                                    config.eps_grid, config.lambda_grid)
    table = CsvTable(["epsilon", "C", "worst_f_id", "margin"])
    for row in result.rows:
        table.append(row.epsilon, row.C, row.worst_f_id, row.margin)
    status = EXIT_OK
    message = "all margins non-negative"
    constants = result.constants
    if any(not np.isfinite(c) for c in constants) or result.min_margin() < 0:
        status, message = EXIT_VIOLATION, "negative margin found"
    elif any(b > a for a, b in zip(constants, constants[1:])):
        status, message = EXIT_VIOLATION, "C(eps) increases with eps"
    return ExperimentResult(_stamp(table, config), status=status, message=message)


def lemma1_kernels(config: ExperimentConfig, R: RadixSequence):
    idx = config.kernels
    if idx is None:
        idx = [b for b in R.block_sizes[:4]]
    return [dirichlet_kernel(R, j) for j in idx], list(idx)


def run_lemma1(config: ExperimentConfig) -> ExperimentResult:
    R = config.radix()
    kernels, idx = lemma1_kernels(config, R)
    reports = []
    for f_id, values in nonnegative_battery(R, config.seed):
        dec = lemma1_construct(values.real, kernels, config.epsilon, R=R)
        rep = dec.report()
        rep["f_id"] = f_id
        reports.append(rep)
    passed = all(r["pass"] for r in reports)
    doc = {
        "config_hash": config.hash(),
        "battery": BATTERY_VERSION,
        "kernels": idx,
        "epsilon": config.epsilon,
        "pass": passed,
        "reports": reports,
    }
    failed = [r["f_id"] for r in reports if not r["pass"]]
    return ExperimentResult(document=doc, status=EXIT_OK if passed else EXIT_VIOLATION,
                            message="pass" if passed else f"failed: {', '.join(failed)}")


def martingale_l1(R: RadixSequence, values: np.ndarray) -> list[float]:
    """||S_{M_k} f - f||_1 for k = 0..N."""
    fhat = forward_array(R, values)[0]
    out = []
    for b in R.block_sizes:
        c = fhat.copy()
        c[b:] = 0
        s = values if b == R.size else inverse_array(R, c)[0]
        out.append(float(np.mean(np.abs(s - values))))
    return out


def tail_deviation(R: RadixSequence, values: np.ndarray, J: int) -> np.ndarray:
    """max_{J <= j <= M_N} |S_j f - f|, the finite stand-in for limsup_j |S_j f - f|."""
    if J >= R.size:
        return np.zeros(R.size)
    fam = OperatorFamily.partial_sums(R, range(J, R.size + 1))
    return fam.maximal_array(values, subtract_input=True)[0]


def run_convergence(config: ExperimentConfig) -> ExperimentResult:
    """Exceptional-set measures mu({tail_deviation > lambda}) swept over J."""
    R = config.radix()
    js = sorted(set(config.j_grid)) if config.j_grid else list(R.block_sizes)
    table = CsvTable(["J", "lambda", "measure", "f_id"])
    l1 = {}
    status = EXIT_OK
    for f_id, values in battery(R, config.seed):
        for J in js:
            dev = tail_deviation(R, values, J)
            for lam in config.lambda_grid:
                count = int(np.count_nonzero(dev > lam))
                if J == R.size and count:
                    status = EXIT_VIOLATION
                table.append(J, lam, count / R.size, f_id)
        l1[f_id] = martingale_l1(R, values)
    side = {"config_hash": config.hash(), "block_sizes": list(R.block_sizes), "l1": l1}
    return ExperimentResult(_stamp(table, config), sidecars={"l1": side}, status=status)


RUNNERS = {
    "transform-check": run_transform_check,
    "weaktype": run_weaktype,
    "extrapolation": run_extrapolation,
    "lemma1": run_lemma1,
    "convergence": run_convergence,
}


def run(config: ExperimentConfig) -> ExperimentResult:
    config.validate()
    return RUNNERS[config.experiment](config)
