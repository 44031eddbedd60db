"""Configuration-driven command line producing machine-readable reports.

Four commands share one JSON model description: ``classify`` names the
symbol case, ``density`` reports the asymptotic entropy density, ``sweep``
tabulates window entropies against the density, and ``oracle`` runs the
brute-force Fock validation at a small window.  Output is deterministic:
fixed field order and floats printed with 17 significant digits, so
identical inputs produce byte-identical CSV/JSON.

Exit codes: 0 success, 2 configuration or usage error, 3 wrong symbol
case, 4 numerical failure, 5 oracle validation failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .density import partition_momentum, s_infinity
from .entropy import entropy_from_lambdas, functional_equation_residual
from .errors import (
    AxiomViolation,
    EntroscaleError,
    MissingLags,
    NoConvergence,
    NotSymmetric,
    OutOfRange,
    PairingFailure,
    QuadratureFailure,
    WrongCase,
    WrongFermi,
)
from .fock_oracle import (
    b_operator,
    correlation_data,
    field_norm,
    fock_rep,
    grand_equivalence,
    matrix_units,
    pfaffian,
    pfaffian_pairing_sum,
    reduced_density_matrix,
)
from .rlmover import (
    FERMI_BY_NAME,
    ChainModel,
    FermiFamilyPhase,
    HalfConstant,
    HamiltonianCoeffs,
    StepSet,
    Temperatures,
    classify,
)
from .toeplitz import build_a_tilde, build_section, fourier_coeffs, paired_spectrum

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_WRONG_CASE = 3
EXIT_NUMERICAL = 4
EXIT_ORACLE = 5

_ORACLE_NU_RANGE = (2, 5)
_SWEEP_MIN_NU = 2

_NUMERICAL_ERRORS = (
    NoConvergence,
    QuadratureFailure,
    PairingFailure,
    OutOfRange,
    MissingLags,
    NotSymmetric,
    WrongFermi,
    AxiomViolation,
)


class ConfigError(Exception):
    """A configuration file or command usage problem (exit code 2)."""


# ----------------------------------------------------------------------
# deterministic rendering
# ----------------------------------------------------------------------
def format_float(x: float) -> str:
    """Fixed 17-significant-digit decimal rendering used by every report."""
    return "%.17g" % float(x)


def render_json(obj, indent: int = 0) -> str:
    """Minimal JSON emitter with deterministic field order and floats."""
    pad = "  " * indent
    inner = "  " * (indent + 1)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        parts = [
            f"{inner}{json.dumps(str(key))}: {render_json(val, indent + 1)}"
            for key, val in obj.items()
        ]
        return "{\n" + ",\n".join(parts) + "\n" + pad + "}"
    if isinstance(obj, (list, tuple)):
        seq = list(obj)
        if not seq:
            return "[]"
        parts = [f"{inner}{render_json(val, indent + 1)}" for val in seq]
        return "[\n" + ",\n".join(parts) + "\n" + pad + "]"
    if isinstance(obj, bool) or obj is None:
        return json.dumps(obj)
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return format_float(float(obj))
    if isinstance(obj, str):
        return json.dumps(obj)
    raise TypeError(f"cannot render {type(obj).__name__}")


# ----------------------------------------------------------------------
# configuration
# ----------------------------------------------------------------------
def load_config(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            raw = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    try:
        cfg = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise ConfigError(
            f"{path}: invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}"
        ) from exc
    if not isinstance(cfg, dict):
        raise ConfigError(f"{path}: top level must be a JSON object")
    return cfg


def _require(cfg: dict, field: str, kind, where: str):
    if field not in cfg:
        raise ConfigError(f"{where}: missing required field '{field}'")
    value = cfg[field]
    if kind is float and isinstance(value, (int, float)) and not isinstance(value, bool):
        return float(value)
    if not isinstance(value, kind) or isinstance(value, bool):
        raise ConfigError(
            f"{where}.{field}: expected {kind.__name__}, got {type(value).__name__}"
        )
    return value


def parse_hamiltonian(cfg: dict) -> HamiltonianCoeffs:
    ham = _require(cfg, "hamiltonian", dict, "config")
    mu = _require(ham, "mu", int, "hamiltonian")
    cmap = _require(ham, "c", dict, "hamiltonian")
    coeffs = {}
    for key, value in cmap.items():
        parts = key.split(",")
        if len(parts) != 2:
            raise ConfigError(
                f"hamiltonian.c['{key}']: key must be 'alpha,n' with integers"
            )
        try:
            alpha, n = int(parts[0]), int(parts[1])
        except ValueError as exc:
            raise ConfigError(
                f"hamiltonian.c['{key}']: key must be 'alpha,n' with integers"
            ) from exc
        if not isinstance(value, (int, float)) or isinstance(value, bool):
            raise ConfigError(f"hamiltonian.c['{key}']: value must be a number")
        coeffs[(alpha, n)] = float(value)
    try:
        return HamiltonianCoeffs(mu, coeffs)
    except (ValueError, IndexError) as exc:
        raise ConfigError(f"hamiltonian: {exc}") from exc


def parse_fermi(cfg: dict):
    spec = _require(cfg, "fermi", dict, "config")
    tag = _require(spec, "type", str, "fermi")
    if tag not in FERMI_BY_NAME:
        known = ", ".join(sorted(FERMI_BY_NAME))
        raise ConfigError(f"fermi.type: unknown type '{tag}' (known: {known})")
    if tag == "step_set":
        intervals = _require(spec, "intervals", list, "fermi")
        pairs = []
        for i, item in enumerate(intervals):
            if (
                not isinstance(item, list)
                or len(item) != 2
                or not all(
                    isinstance(v, (int, float)) and not isinstance(v, bool)
                    for v in item
                )
            ):
                raise ConfigError(
                    f"fermi.intervals[{i}]: expected a two-number pair [a, b]"
                )
            pairs.append((float(item[0]), float(item[1])))
        try:
            return StepSet(tuple(pairs))
        except ValueError as exc:
            raise ConfigError(f"fermi.intervals: {exc}") from exc
    return FERMI_BY_NAME[tag]()


def parse_phase(cfg: dict) -> FermiFamilyPhase:
    if "phase" not in cfg:
        return FermiFamilyPhase()
    spec = _require(cfg, "phase", dict, "config")
    lam_pair = _require(spec, "lambda", list, "phase")
    if len(lam_pair) != 2 or not all(
        isinstance(v, (int, float)) and not isinstance(v, bool) for v in lam_pair
    ):
        raise ConfigError("phase.lambda: expected [re, im]")
    gamma = _require(spec, "gamma", int, "phase")
    try:
        return FermiFamilyPhase(lam=complex(lam_pair[0], lam_pair[1]), gamma=gamma)
    except ValueError as exc:
        raise ConfigError(f"phase: {exc}") from exc


def build_model(cfg: dict) -> ChainModel:
    h = parse_hamiltonian(cfg)
    beta_L = _require(cfg, "beta_L", float, "config")
    beta_R = _require(cfg, "beta_R", float, "config")
    try:
        temps = Temperatures(beta_L, beta_R)
    except ValueError as exc:
        raise ConfigError(f"temperatures: {exc}") from exc
    fermi = parse_fermi(cfg)
    phase = parse_phase(cfg)
    try:
        return ChainModel(h, temps, fermi, phase=phase)
    except EntroscaleError as exc:
        raise ConfigError(f"model: {exc}") from exc


# ----------------------------------------------------------------------
# report assembly
# ----------------------------------------------------------------------
def _partition_payload(part) -> dict:
    return {
        "pi_L": [[lo, hi] for lo, hi in part.pi_L],
        "pi_R": [[lo, hi] for lo, hi in part.pi_R],
        "pi_0": list(part.pi_0),
        "excluded": list(part.excluded),
    }


def _density_payload(model: ChainModel) -> dict:
    report = s_infinity(model)
    return {
        "case": model.case.name,
        "s_infinity": report.s_infinity,
        "split": {"pi_L": report.split[0], "pi_R": report.split[1]},
        "partition": _partition_payload(report.partition),
        "sigma": [[lo, hi] for lo, hi in report.sigma],
        "vanishing": {
            "vanishing": report.vanishing.vanishing,
            "samples": report.vanishing.samples,
            "witnesses": [[x, r] for x, r in report.vanishing.witnesses],
        },
    }


def cmd_classify(cfg: dict) -> tuple[str, int]:
    h = parse_hamiltonian(cfg)
    case = classify(h)
    payload = {
        "case": case.name,
        "mu": h.mu,
        "coefficients": {
            f"{alpha},{n}": float(h.c[alpha, n])
            for alpha in range(4)
            for n in range(h.mu + 1)
            if h.c[alpha, n] != 0.0
        },
        "zero_set": list(h.zero_set_angles()) if not h.u_sq.is_zero() else [],
        "has_symbol": case.has_symbol,
    }
    if case.has_symbol:
        model = build_model(cfg)
        payload["partition"] = _partition_payload(partition_momentum(model))
    else:
        payload["partition"] = None
        payload["note"] = (
            f"{case.name}: no R/L mover symbol; density, sweep, and oracle "
            "commands are unavailable for this model"
        )
    return render_json(payload) + "\n", EXIT_OK


def cmd_density(cfg: dict) -> tuple[str, int]:
    model = build_model(cfg)
    model.require_symbol_case()
    return render_json(_density_payload(model)) + "\n", EXIT_OK


def _sweep_rows(model: ChainModel, nus: list[int], fft_size: int | None) -> list[dict]:
    density = s_infinity(model).s_infinity
    symbol = build_a_tilde(model).scaled(2j)
    fourier_coeffs(symbol, max(nus) - 1, fft_size)  # one shared Fourier pass

    def one(nu: int) -> dict:
        section = build_section(symbol, nu)
        spectrum = paired_spectrum(section)
        value = entropy_from_lambdas(spectrum.lambdas, nu)
        return {
            "nu": nu,
            "S_nu": value.S,
            "S_nu_per_nu": value.per_site,
            "s_infinity": density,
            "gap": abs(value.per_site - density),
            "S_nu_bits": value.bits,
        }

    workers = _thread_cap(len(nus))
    if workers == 1:
        rows = [one(nu) for nu in nus]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(one, nus))
    return sorted(rows, key=lambda row: row["nu"])


def _thread_cap(n_jobs: int) -> int:
    raw = os.environ.get("ENTROSCALE_THREADS")
    if raw is None:
        return max(1, min(n_jobs, os.cpu_count() or 1))
    try:
        cap = int(raw)
    except ValueError as exc:
        raise ConfigError(f"ENTROSCALE_THREADS: expected an integer, got {raw!r}") from exc
    if cap < 1:
        raise ConfigError(f"ENTROSCALE_THREADS: must be >= 1, got {cap}")
    return min(cap, n_jobs)


_SWEEP_COLUMNS = ("nu", "S_nu", "S_nu_per_nu", "s_infinity", "gap", "S_nu_bits")


def _sweep_csv(rows: list[dict]) -> str:
    lines = [",".join(_SWEEP_COLUMNS)]
    for row in rows:
        lines.append(
            ",".join(
                str(row[col]) if col == "nu" else format_float(row[col])
                for col in _SWEEP_COLUMNS
            )
        )
    return "\n".join(lines) + "\n"


def cmd_sweep(cfg: dict, nus: list[int], fft_size: int | None, fmt: str) -> tuple[str, int]:
    model = build_model(cfg)
    model.require_symbol_case()
    if not nus:
        raise ConfigError("sweep: provide window lengths via --nu or --nu-list")
    if min(nus) < _SWEEP_MIN_NU:
        raise ConfigError(f"sweep: every window length must be >= {_SWEEP_MIN_NU}")
    rows = _sweep_rows(model, sorted(set(nus)), fft_size)
    if fmt == "csv":
        return _sweep_csv(rows), EXIT_OK
    return render_json({"rows": rows}) + "\n", EXIT_OK


def _oracle_suites(model: ChainModel, nu: int, fft_size: int | None) -> tuple[dict, list[str]]:
    failures: list[str] = []
    rep = fock_rep(nu, model.phase)

    car = 0.0
    eye = np.eye(rep.dim)
    for a in range(2 * nu):
        ga = rep.gammas[a]
        car = max(car, float(np.abs(ga - ga.conj().T).max()))
        for b in range(a, 2 * nu):
            want = 2.0 * eye if a == b else 0.0
            resid = np.abs(ga @ rep.gammas[b] + rep.gammas[b] @ ga - want).max()
            car = max(car, float(resid))
    if car > 1e-12:
        failures.append(f"anticommutation residual {car:.3e} > 1e-12")

    rng = np.random.default_rng(20240817)
    norm_gap = 0.0
    for _ in range(50):
        f1 = rng.normal(size=nu) + 1j * rng.normal(size=nu)
        f2 = rng.normal(size=nu) + 1j * rng.normal(size=nu)
        op = np.linalg.norm(b_operator(rep, f1, f2), 2)
        norm_gap = max(norm_gap, abs(op - field_norm(f1, f2)))
    if norm_gap > 1e-10:
        failures.append(f"field norm residual {norm_gap:.3e} > 1e-10")

    units = matrix_units(fock_rep(min(nu, 4), model.phase))
    if units.max_residual > 1e-12:
        failures.append(f"matrix-unit residual {units.max_residual:.3e} > 1e-12")

    pair_gap = 0.0
    det_gap = 0.0
    for half in (1, 2, 3, 4):
        m = rng.normal(size=(2 * half, 2 * half)) + 1j * rng.normal(
            size=(2 * half, 2 * half)
        )
        anti = m - m.T
        pf = pfaffian(anti)
        det = np.linalg.det(anti)
        det_gap = max(det_gap, abs(pf * pf - det) / max(abs(det), 1e-300))
        if half <= 3:
            pair_gap = max(pair_gap, abs(pf - pfaffian_pairing_sum(anti)))
    if pair_gap > 1e-10:
        failures.append(f"pairing-sum residual {pair_gap:.3e} > 1e-10")
    if det_gap > 1e-8:
        failures.append(f"pfaffian-determinant residual {det_gap:.3e} > 1e-8")

    func_gap = 0.0
    for _ in range(20):
        lams = rng.uniform(0.0, 0.999, size=rng.integers(1, 6))
        func_gap = max(func_gap, functional_equation_residual(lams))
    if func_gap > 1e-11:
        failures.append(f"functional-equation residual {func_gap:.3e} > 1e-11")

    eq = grand_equivalence(model, nu, fft_size)
    if eq.lambda_gap > 1e-8:
        failures.append(f"pairing spectrum gap {eq.lambda_gap:.3e} > 1e-8")
    if eq.spectrum_gap > 1e-8:
        failures.append(f"density spectrum gap {eq.spectrum_gap:.3e} > 1e-8")
    if eq.entropy_spread > 1e-8:
        failures.append(f"entropy route spread {eq.entropy_spread:.3e} > 1e-8")
    if abs(eq.entropy_eta - eq.entropy_toeplitz) > 1e-8:
        failures.append("oracle and Toeplitz entropies disagree beyond 1e-8")

    payload = {
        "nu": nu,
        "case": model.case.name,
        "entropy_routes": {
            "direct": eq.entropy_direct,
            "shannon_product": eq.entropy_shannon,
            "eta_sum": eq.entropy_eta,
            "toeplitz": eq.entropy_toeplitz,
        },
        "spectrum_deviation": eq.spectrum_gap,
        "lambda_deviation": eq.lambda_gap,
        "suites": {
            "anticommutation_residual": car,
            "field_norm_residual": norm_gap,
            "matrix_unit_checks": units.checks,
            "matrix_unit_residual": units.max_residual,
            "pfaffian_pairing_residual": pair_gap,
            "pfaffian_determinant_residual": det_gap,
            "functional_equation_residual": func_gap,
        },
    }
    if isinstance(model.fermi, HalfConstant):
        dens = reduced_density_matrix(rep, correlation_data(model, nu, fft_size))
        payload["identity_deviation"] = float(
            np.abs(dens.matrix - np.eye(rep.dim) / rep.dim).max()
        )
    payload["verdict"] = "PASS" if not failures else "FAIL"
    if failures:
        payload["failures"] = failures
    return payload, failures


def cmd_oracle(cfg: dict, nu: int, fft_size: int | None) -> tuple[str, int]:
    lo, hi = _ORACLE_NU_RANGE
    if not lo <= nu <= hi:
        raise ConfigError(f"oracle: --nu must be in [{lo}, {hi}], got {nu}")
    model = build_model(cfg)
    model.require_symbol_case()
    payload, failures = _oracle_suites(model, nu, fft_size)
    text = render_json(payload) + "\n"
    if failures:
        sys.stderr.write(f"oracle failure: {failures[0]}\n")
        return text, EXIT_ORACLE
    return text, EXIT_OK


# ----------------------------------------------------------------------
# entry point
# ----------------------------------------------------------------------
def _parse_nu_list(raw: str) -> list[int]:
    try:
        return [int(part) for part in raw.split(",") if part.strip()]
    except ValueError as exc:
        raise ConfigError(f"--nu-list: expected comma-separated integers, got {raw!r}") from exc


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="entroscale",
        description="Entropy scaling of R/L mover states of quasifree chains.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("classify", "density", "sweep", "oracle"):
        cmd = sub.add_parser(name)
        cmd.add_argument("--config", required=True, help="model config (JSON)")
        cmd.add_argument("--out", default=None, help="write the report here")
        cmd.add_argument(
            "--format",
            choices=("csv", "json"),
            default=None,
            help="output format (sweep: csv default; others: json only)",
        )
        cmd.add_argument("--fft-size", type=int, default=None)
        if name == "sweep":
            cmd.add_argument("--nu", type=int, nargs="+", default=None)
            cmd.add_argument("--nu-list", default=None)
        if name == "oracle":
            cmd.add_argument("--nu", type=int, required=True)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = load_config(args.config)
        fmt = args.format
        if args.command != "sweep":
            if fmt not in (None, "json"):
                raise ConfigError(f"{args.command}: only json output is supported")
            fmt = "json"
        else:
            fmt = fmt or "csv"
        if args.command == "classify":
            text, code = cmd_classify(cfg)
        elif args.command == "density":
            text, code = cmd_density(cfg)
        elif args.command == "sweep":
            nus = list(args.nu or [])
            if args.nu_list:
                nus += _parse_nu_list(args.nu_list)
            text, code = cmd_sweep(cfg, nus, args.fft_size, fmt)
        else:
            text, code = cmd_oracle(cfg, args.nu, args.fft_size)
    except ConfigError as exc:
        sys.stderr.write(f"config error: {exc}\n")
        return EXIT_CONFIG
    except WrongCase as exc:
        sys.stderr.write(f"wrong case: {exc}\n")
        return EXIT_WRONG_CASE
    except _NUMERICAL_ERRORS as exc:
        sys.stderr.write(f"numerical failure: {type(exc).__name__}: {exc}\n")
        return EXIT_NUMERICAL
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
