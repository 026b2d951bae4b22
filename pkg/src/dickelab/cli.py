"""Command-line front end: parameter sweeps, figure grids and oracle checks.

Subcommands emit deterministic CSV (17-significant-digit fields, no
timestamps, row-major order over the declared axes, a ``#`` provenance
preamble whose hash is derived from the resolved configuration only) so that
identical invocations produce byte-identical files.  Configuration follows
flag > config file > built-in default; config files are ``key = value`` lines
with ``#`` comments, keyed by the long flag names.

Exit codes: 0 success, 1 validation error, 2 oracle-check failure.
"""

from __future__ import annotations

import argparse
import hashlib
import math
import sys

import numpy as np

from . import cavity, fisher, fock, gaussian, numerics

OPERATIONS = {
    "qfi": "fisher.qfi_from_generator",
    "qfi_heuristic": "fisher.qfi_heuristic_superradiant",
    "cfi": "fisher.cfi_quadrature",
    "ridge": "fisher.scan_optimal_angle",
    "asymptote": "fisher.cfi_asymptotic",
    "angle": "fisher.optimal_angle",
    "cavity": "cavity.qfi_growth_exponent",
}


class CliError(Exception):
    """Invalid invocation or configuration; maps to exit code 1."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise CliError(message)


# ---------------------------------------------------------------------------
# value parsing

def _parse_float(text: str) -> float:
    try:
        value = float(text)
    except ValueError as exc:
        raise CliError(f"expected a number, got {text!r}") from exc
    if not math.isfinite(value):
        raise CliError(f"expected a finite number, got {text!r}")
    return value


def _parse_int(text: str) -> int:
    try:
        return int(text)
    except ValueError as exc:
        raise CliError(f"expected an integer, got {text!r}") from exc


def _parse_bool(text: str) -> bool:
    lowered = text.strip().lower()
    if lowered in ("1", "true", "yes", "on"):
        return True
    if lowered in ("0", "false", "no", "off"):
        return False
    raise CliError(f"expected a boolean, got {text!r}")


def _parse_values(text: str) -> list[float]:
    """A sweep axis: ``min:max:steps`` (inclusive), ``a,b,c`` or one number."""
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise CliError(f"range must be min:max:steps, got {text!r}")
        lo, hi = _parse_float(parts[0]), _parse_float(parts[1])
        steps = _parse_int(parts[2])
        if steps < 2:
            raise CliError("swept axis needs steps >= 2")
        if hi <= lo:
            raise CliError("range must have max > min")
        return list(np.linspace(lo, hi, steps))
    if "," in text:
        return [_parse_float(part) for part in text.split(",") if part.strip()]
    return [_parse_float(text)]


def _parse_int_list(text: str) -> list[int]:
    return [_parse_int(part) for part in text.split(",") if part.strip()]


_PARSERS = {
    "float": _parse_float,
    "int": _parse_int,
    "bool": _parse_bool,
    "values": _parse_values,
    "intlist": _parse_int_list,
    "choice": lambda text: text,
}

_PI = math.pi

SCHEMAS = {
    "qfi-map": {
        "omega": ("float", "1"),
        "big-omega": ("float", "1000"),
        # default couplings are the reference slice set; pass a range for
        # a dense map
        "g-over-gc": ("values", "0.5,0.68,0.87,1,1.25,1.62,2"),
        "t": ("values", "0.25:10:40"),
        "lambda": ("choice", "omega"),
        "n-spins": ("int", "1"),
        "heuristic": ("bool", "false"),
    },
    "cfi-map": {
        "omega": ("float", "1"),
        "big-omega": ("float", "1000"),
        "g-over-gc": ("values", "1.4142135623730951"),
        "t": ("values", "0.25:6:24"),
        "phi": ("values", f"0:{_PI:.17g}:180"),
        "lambda": ("choice", "omega"),
        "n-spins": ("int", "1"),
    },
    "asymptote": {
        "omega": ("float", "1"),
        "phi": ("values", f"{_PI / 4 - 0.5:.17g}:{_PI / 4 + 0.5:.17g}:100"),
    },
    "optimal-angle": {
        "omega": ("float", "1"),
        "big-omega": ("float", "1000"),
        "g-over-gc": ("values", "1.1:2.5:8"),
        "t": ("values", "1:4:4"),
        "lambda": ("choice", "omega"),
        "n-spins": ("int", "1"),
    },
    "oracle-check": {
        "omega": ("float", "1"),
        "big-omega": ("float", "1000"),
        "g-over-gc": ("values", "0.5,1,1.4142135623730951"),
        "t": ("values", "0.5,1,1.5"),
        "n-spins": ("int", "1"),
        "cutoff": ("int", "400"),
    },
    "cavity-scaling": {
        "eta": ("float", "0.75"),
        "delta-c": ("float", "-1"),
        "omega-r": ("float", "1"),
        "n-list": ("intlist", "25,100,400"),
    },
}

_FLAG_HELP = {
    "omega": "field frequency",
    "big-omega": "spin splitting",
    "g-over-gc": "coupling over critical coupling: value, list or min:max:steps",
    "t": "time axis: value, list or min:max:steps (units of 1/omega)",
    "phi": "quadrature angle axis: value, list or min:max:steps",
    "lambda": "estimated parameter",
    "n-spins": "number of spins",
    "cutoff": "Fock-space photon cutoff",
    "heuristic": "additionally emit the exp/2 surrogate QFI columns",
    "eta": "pump coupling",
    "delta-c": "effective cavity detuning (negative)",
    "omega-r": "recoil frequency",
    "n-list": "comma-separated atom numbers (>= 3 entries)",
}


def _build_parser() -> _Parser:
    parser = _Parser(prog="dickelab", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for command, schema in SCHEMAS.items():
        sp = sub.add_parser(command)
        for key in schema:
            kwargs = {"default": None, "help": _FLAG_HELP.get(key, "")}
            if key == "lambda":
                kwargs["choices"] = list(fisher.PARAMETER_CHOICES)
                kwargs["dest"] = "lam"
            if key == "heuristic":
                sp.add_argument("--heuristic", action="store_const", const="true",
                                default=None, help=_FLAG_HELP["heuristic"])
                continue
            sp.add_argument(f"--{key}", **kwargs)
        sp.add_argument("--out", default=None, help="output path (default stdout)")
        sp.add_argument("--config", default=None, help="key = value config file")
    return parser


def _read_config(path: str) -> dict[str, str]:
    entries: dict[str, str] = {}
    try:
        with open(path, "r", encoding="utf-8") as handle:
            for lineno, raw in enumerate(handle, 1):
                line = raw.split("#", 1)[0].strip()
                if not line:
                    continue
                if "=" not in line:
                    raise CliError(f"{path}:{lineno}: expected key = value")
                key, value = (part.strip() for part in line.split("=", 1))
                entries[key] = value
    except OSError as exc:
        raise CliError(f"cannot read config {path}: {exc}") from exc
    return entries


def _resolve(command: str, args) -> dict:
    """Apply flag > config > default precedence; return parsed values plus
    the raw strings that feed the provenance hash."""
    schema = SCHEMAS[command]
    config = _read_config(args.config) if args.config else {}
    unknown = set(config) - set(schema)
    if unknown:
        raise CliError(f"unknown config keys: {', '.join(sorted(unknown))}")
    resolved: dict = {}
    raw: dict[str, str] = {}
    for key, (kind, default) in schema.items():
        attr = "lam" if key == "lambda" else key.replace("-", "_")
        cli_value = getattr(args, attr, None)
        text = cli_value if cli_value is not None else config.get(key, default)
        raw[key] = text
        resolved[key] = _PARSERS[kind](text)
    resolved["_raw"] = raw
    return resolved


def _config_hash(command: str, raw: dict[str, str]) -> str:
    payload = "\n".join(f"{command}.{key}={raw[key]}" for key in sorted(raw))
    return hashlib.sha256(payload.encode("utf-8")).hexdigest()


# ---------------------------------------------------------------------------
# CSV emission

def _fmt(value) -> str:
    if isinstance(value, str):
        return value
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return f"{float(value):.17g}"


def _safe_ln(value: float) -> float:
    if value <= 0.0:
        return -math.inf
    return math.log(value)


def _emit(out_path, command, raw, column_ops, header, rows, extra=()):
    lines = [f"# dickelab {command}"]
    lines.append(f"# config-sha256: {_config_hash(command, raw)}")
    for key in sorted(raw):
        lines.append(f"# config {key} = {raw[key]}")
    for column, op in column_ops:
        lines.append(f"# column {column}: {op}")
    lines.extend(extra)
    lines.append(",".join(header))
    for row in rows:
        lines.append(",".join(_fmt(cell) for cell in row))
    text = "\n".join(lines) + "\n"
    if out_path:
        with open(out_path, "w", encoding="utf-8", newline="\n") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# subcommands

def _params(cfg, g_over_gc: float) -> gaussian.DickeParams:
    omega, big = cfg["omega"], cfg["big-omega"]
    return gaussian.DickeParams(
        omega=omega,
        Omega=big,
        g=g_over_gc * math.sqrt(omega * big),
        n_spins=cfg["n-spins"],
    )


def cmd_qfi_map(cfg) -> list[list]:
    lam = cfg["lambda"]
    if lam not in ("omega", "Omega"):
        raise CliError("qfi-map supports --lambda omega or Omega")
    with_heuristic = cfg["heuristic"]
    rows = []

    def _series(tag, g_values):
        for g_over in g_values:
            p = _params(cfg, g_over)
            lam_sq = (p.omega if lam == "omega" else p.Omega) ** 2
            for t in cfg["t"]:
                qfi = fisher.qfi_quench(p, lam, t) * lam_sq
                row = [tag, lam, g_over, t, qfi, _safe_ln(qfi)]
                if with_heuristic:
                    if p.coupling_ratio > 1.0:
                        heur = fisher.qfi_heuristic_superradiant(p, lam, t) * lam_sq
                    else:
                        heur = math.nan
                    row.extend([heur, _safe_ln(heur) if heur == heur else math.nan])
                row.append(OPERATIONS["qfi"])
                rows.append(row)

    _series("grid", cfg["g-over-gc"])
    _series("critical", [1.0])
    header = ["series", "lambda", "g_over_gc", "omega_t", "qfi_lambda2",
              "ln_qfi_lambda2"]
    if with_heuristic:
        header += ["heuristic_qfi_lambda2", "ln_heuristic_qfi_lambda2"]
    header.append("operation")
    ops = [("qfi_lambda2", OPERATIONS["qfi"])]
    if with_heuristic:
        ops.append(("heuristic_qfi_lambda2", OPERATIONS["qfi_heuristic"]))
    return header, rows, ops, ()


def cmd_cfi_map(cfg):
    lam = cfg["lambda"]
    g_values = cfg["g-over-gc"]
    if len(g_values) != 1:
        raise CliError("cfi-map expects a single --g-over-gc value")
    p = _params(cfg, g_values[0])
    rows = []
    for t in cfg["t"]:
        qfi = fisher.qfi_quench(p, lam, t)
        ridge_phi, _ = fisher.scan_optimal_angle(p, lam, t, grid=1e-6)
        for phi in cfg["phi"]:
            cfi = fisher.cfi_quadrature(p, lam, t, phi)
            ratio = cfi / qfi if qfi > 0.0 else math.nan
            rows.append([lam, g_values[0], t, phi, cfi, qfi, ratio, ridge_phi,
                         OPERATIONS["cfi"]])
    header = ["lambda", "g_over_gc", "omega_t", "phi", "cfi", "qfi",
              "cfi_over_qfi", "ridge_phi", "operation"]
    ops = [("cfi", OPERATIONS["cfi"]), ("qfi", OPERATIONS["qfi"]),
           ("ridge_phi", OPERATIONS["ridge"])]
    return header, rows, ops, ()


def cmd_asymptote(cfg):
    omega = cfg["omega"]
    phis = cfg["phi"]
    quarter_pi = 0.25 * math.pi
    if any(abs(phi - quarter_pi) < 1e-4 for phi in phis):
        raise CliError("phi axis must stay at least 1e-4 rad away from pi/4")
    rows = []
    for phi in phis:
        value = fisher.cfi_asymptotic(omega, phi)
        rows.append([phi, value, math.log(omega**2 * value), OPERATIONS["asymptote"]])
    header = ["phi", "cfi_asymptotic", "ln_omega2_cfi", "operation"]
    return header, rows, [("cfi_asymptotic", OPERATIONS["asymptote"])], ()


def cmd_optimal_angle(cfg):
    lam = cfg["lambda"]
    rows = []
    for g_over in cfg["g-over-gc"]:
        r = g_over * g_over
        if r <= 1.0:
            raise CliError("optimal-angle needs g-over-gc > 1 (superradiant branch)")
        p = _params(cfg, g_over)
        limit_phi = fisher.optimal_angle(r, math.inf)
        for t in cfg["t"]:
            analytic = fisher.optimal_angle(r, p.omega * t)
            scan_phi, scan_cfi = fisher.scan_optimal_angle(p, lam, t, grid=1e-6)
            rows.append([g_over, r, t, analytic, limit_phi, scan_phi, scan_cfi,
                         OPERATIONS["angle"]])
    header = ["g_over_gc", "r", "omega_t", "analytic_phi", "limit_phi",
              "scan_phi", "scan_cfi", "operation"]
    ops = [("analytic_phi", OPERATIONS["angle"]), ("scan_phi", OPERATIONS["ridge"])]
    return header, rows, ops, ()


def cmd_cavity_scaling(cfg):
    n_list = cfg["n-list"]
    if len(n_list) < 3:
        raise CliError("cavity-scaling needs at least 3 atom numbers")
    if cfg["delta-c"] >= 0.0:
        raise CliError("cavity-scaling needs delta-c < 0")
    rows = []
    slopes = []
    for n_atoms in n_list:
        c = cavity.CavityParams(
            delta_c=cfg["delta-c"], omega_R=cfg["omega-r"], u=0.0,
            eta=cfg["eta"], n_atoms=n_atoms,
        )
        gap_sq = cavity.gap_squared(c)
        if gap_sq >= 0.0:
            raise CliError(
                f"no superradiant growth at N={n_atoms}: growth window is "
                "shorter than 3 e-foldings"
            )
        rate = math.sqrt(-gap_sq)
        p = cavity.equivalent_dicke_params(c)
        ts = np.linspace(8.0 / rate, 16.0 / rate, 17)
        lnq = [math.log(fisher.qfi_quench(p, "omega", t)) for t in ts]
        slope, _, _ = numerics.linear_fit(list(ts), lnq)
        closed = cavity.qfi_growth_exponent(c)
        ratio_sq = (c.y / c.y_c) ** 2
        rows.append([n_atoms, math.sqrt(n_atoms), ratio_sq, slope, closed,
                     OPERATIONS["cavity"]])
        slopes.append((math.sqrt(n_atoms), slope))
    reg_slope, reg_icept, r_sq = numerics.linear_fit(
        [s[0] for s in slopes], [s[1] for s in slopes]
    )
    extra = [
        "# regression slope_vs_sqrt_n = " + _fmt(reg_slope),
        "# regression intercept = " + _fmt(reg_icept),
        "# regression r_squared = " + _fmt(r_sq),
    ]
    header = ["n_atoms", "sqrt_n", "pump_ratio_sq", "fitted_slope",
              "closed_form_exponent", "operation"]
    ops = [("fitted_slope", "numerics.linear_fit(ln fisher.qfi_quench vs t)"),
           ("closed_form_exponent", OPERATIONS["cavity"])]
    return header, rows, ops, extra


# ---------------------------------------------------------------------------
# oracle-check

def _check_symplectic(rng):
    worst = 0.0
    j = gaussian.SYMPLECTIC_FORM
    for _ in range(40):
        h = gaussian.QuadraticHamiltonian(*rng.uniform(-1.5, 1.5, size=3))
        s = gaussian.propagator(h, rng.uniform(0.0, 1.5))
        scale = max(1.0, float(np.max(np.abs(s))) ** 2)
        worst = max(worst, float(np.max(np.abs(s @ j @ s.T - j))) / scale)
    return worst, 1e-10


def _check_purity(rng):
    worst = 0.0
    for _ in range(20):
        state = gaussian.vacuum_state()
        for _ in range(3):
            h = gaussian.QuadraticHamiltonian(*rng.uniform(-1.0, 1.0, size=3))
            state = gaussian.evolve(state, h, rng.uniform(0.0, 0.4))
        worst = max(worst, abs(np.linalg.det(state.cov) - 0.25))
    return worst, 1e-10


def _check_variance_fock(cfg):
    cutoff = cfg["cutoff"]
    basis = fock.FockBasisSpec(cutoff=cutoff)
    worst = 0.0
    for g_over in cfg["g-over-gc"]:
        p = _params(cfg, g_over)
        h = fock.build_effective(p, basis)
        states = fock.evolve_series(h, fock.vacuum_spin_down(basis), sorted(cfg["t"]))
        for t, state in zip(sorted(cfg["t"]), states):
            tail = fock.tail_population(state, basis)
            if tail >= fock.TAIL_TOL:
                raise RuntimeError(
                    f"convergence gate: tail population {tail:.3e} at cutoff "
                    f"{cutoff} (g/g_c={g_over:g}, omega t={t:g})"
                )
            for phi in (0.0, 0.25 * math.pi, 2.0):
                q_op = fock.quadrature_op(phi, cutoff)
                v_fock = fock.expectation((q_op @ q_op).tocsr(), state)
                v_gauss = gaussian.quadrature_variance(p, t, phi)
                worst = max(worst, abs(v_fock - v_gauss) / abs(v_fock))
    return worst, 1e-8


def _check_continuity(cfg):
    worst = 0.0
    saved = numerics.SERIES_CUTOFF
    for r in (1.0 - 1e-5, 1.0, 1.0 + 1e-5):
        p = _params(cfg, math.sqrt(r))
        for phi in (0.0, 0.7):
            branch = gaussian.quadrature_variance(p, 1.0, phi)
            try:
                numerics.SERIES_CUTOFF = 1.0
                series = gaussian.quadrature_variance(p, 1.0, phi)
            finally:
                numerics.SERIES_CUTOFF = saved
            worst = max(worst, abs(branch - series))
    return worst, 1e-9


def _check_bogoliubov(cfg):
    from scipy.linalg import expm

    worst = 0.0
    for g_over in cfg["g-over-gc"]:
        p = _params(cfg, g_over)
        a_c, b_c = gaussian._mixing_coeffs(p)
        gen = np.array([[-1j * a_c, 1j * b_c], [-1j * b_c, 1j * a_c]])
        for t in cfg["t"]:
            coeffs = gaussian.bogoliubov_coeffs(p, t)
            u_ref, v_conj_ref = expm(gen * t) @ np.array([1.0, 0.0])
            worst = max(worst, abs(coeffs.u - u_ref),
                        abs(coeffs.v - np.conj(v_conj_ref)),
                        coeffs.commutator_defect())
    return worst, 1e-10


def _check_generator_vs_fidelity(cfg):
    cutoff = cfg["cutoff"]
    worst = 0.0
    tested = 0
    for g_over in cfg["g-over-gc"]:
        p = _params(cfg, g_over)
        for t in cfg["t"]:
            expected_n = abs(gaussian.bogoliubov_coeffs(p, t).v) ** 2
            if 60.0 * (expected_n + 1.0) > cutoff:
                continue  # state would not fit the truncated basis
            tested += 1
            qfi = fisher.qfi_quench(p, "omega", t)

            def family(w, _t=t):
                q = gaussian.DickeParams(w, p.Omega, p.g, p.n_spins)
                basis = fock.FockBasisSpec(cutoff=cutoff)
                h = fock.build_effective(q, basis)
                return fock.evolve_exact(h, fock.vacuum_spin_down(basis), _t)

            oracle, _ = fock.qfi_fidelity(family, p.omega, 1e-5 * p.omega)
            if oracle > 1e-12:
                worst = max(worst, abs(qfi - oracle) / oracle)
    if tested == 0:
        raise RuntimeError("no grid point fits the requested cutoff")
    return worst, 1e-4


def _check_spectral_vs_fidelity(cfg):
    p = _params(cfg, 0.5)
    cutoff = min(cfg["cutoff"], 120)
    basis = fock.FockBasisSpec(cutoff=cutoff, spin_levels=p.n_spins + 1)

    def h_family(w):
        return fock.build_dicke(
            gaussian.DickeParams(w, p.Omega, p.g, p.n_spins), basis
        )

    def family(w):
        return fock.ground_state(h_family(w))[1]

    spectral = fock.qfi_spectral(h_family, p.omega)
    fidelity, _ = fock.qfi_fidelity(family, p.omega, 1e-5 * p.omega)
    return abs(spectral - fidelity) / abs(fidelity), 1e-4


def _check_wick(rng):
    worst = 0.0
    basis = fock.FockBasisSpec(cutoff=12)
    x_op = fock.quadrature_op(0.0, 12).toarray()
    p_op = fock.quadrature_op(-0.5 * math.pi, 12).toarray()
    vac = fock.vacuum_spin_down(basis)
    for _ in range(25):
        a_xx, a_pp, a_xp = rng.uniform(-2.0, 2.0, size=3)
        gen_mat = (a_xx * x_op @ x_op + a_pp * p_op @ p_op
                   + a_xp * (x_op @ p_op + p_op @ x_op))
        mean = np.vdot(vac, gen_mat @ vac)
        second = np.vdot(vac, gen_mat @ (gen_mat @ vac))
        var_fock = float(np.real(second - mean**2))
        qfi = fisher.qfi_from_generator(
            fisher.LocalGenerator(a_xx=a_xx, a_pp=a_pp, a_xp=a_xp)
        )
        worst = max(worst, abs(qfi - 4.0 * var_fock))
    return worst, 1e-10


def cmd_oracle_check(cfg, out_path, raw, command) -> int:
    rng = np.random.default_rng(20240801)
    checks = [
        ("propagator_symplectic", lambda: _check_symplectic(rng)),
        ("evolution_purity", lambda: _check_purity(rng)),
        ("variance_vs_fock", lambda: _check_variance_fock(cfg)),
        ("variance_continuity_at_gc", lambda: _check_continuity(cfg)),
        ("bogoliubov_vs_expm", lambda: _check_bogoliubov(cfg)),
        ("generator_qfi_vs_fidelity", lambda: _check_generator_vs_fidelity(cfg)),
        ("spectral_vs_fidelity", lambda: _check_spectral_vs_fidelity(cfg)),
        ("wick_vs_fock_variance", lambda: _check_wick(rng)),
    ]
    lines = [f"# dickelab {command}",
             f"# config-sha256: {_config_hash(command, raw)}"]
    all_pass = True
    for name, runner in checks:
        try:
            residual, tol = runner()
            passed = residual < tol
            detail = f"residual={residual:.6e} tol={tol:.1e}"
        except (RuntimeError, ValueError) as exc:
            passed = False
            detail = f"error={exc}"
        all_pass &= passed
        lines.append(f"check={name} status={'PASS' if passed else 'FAIL'} {detail}")
    lines.append(f"overall={'PASS' if all_pass else 'FAIL'}")
    text = "\n".join(lines) + "\n"
    if out_path:
        with open(out_path, "w", encoding="utf-8", newline="\n") as handle:
            handle.write(text)
    sys.stdout.write(text)
    return 0 if all_pass else 2


# ---------------------------------------------------------------------------

_COMMANDS = {
    "qfi-map": cmd_qfi_map,
    "cfi-map": cmd_cfi_map,
    "asymptote": cmd_asymptote,
    "optimal-angle": cmd_optimal_angle,
    "cavity-scaling": cmd_cavity_scaling,
}


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        cfg = _resolve(args.command, args)
        raw = cfg.pop("_raw")
        if args.command == "oracle-check":
            return cmd_oracle_check(cfg, args.out, raw, args.command)
        header, rows, ops, extra = _COMMANDS[args.command](cfg)
        _emit(args.out, args.command, raw, ops, header, rows, extra)
        return 0
    except CliError as exc:
        print(f"dickelab: error: {exc}", file=sys.stderr)
        return 1


def console_main() -> None:
    sys.exit(main())
