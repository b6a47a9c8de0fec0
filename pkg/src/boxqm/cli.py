"""Command-line surface: every capability as a subcommand emitting
deterministic CSV/JSON under --out-dir.

    boxqm spectrum    --family symmetric --gamma -3 ...      -> spectrum.csv [levels/, sweep.csv]
    boxqm measure     --state dirichlet:4 ...                -> histogram.csv, density.csv, summary.json
    boxqm evolve      --bc dirichlet --packet 0.05,128.8 ... -> series.csv, snapshots/NNN.csv
    boxqm ehrenfest   --bc symmetric --gamma 1 --state random:6,7 -> ehrenfest.csv
    boxqm uncertainty --state linear-zero [--sweep N]        -> uncertainty.json [uncertainty_sweep.csv]

Exit codes: 0 success, 2 usage/config error, 3 numeric failure.
CSV: header row, '.' decimal, 17 significant digits, LF endings,
written atomically; identical configuration and seed give byte-identical
files.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import tempfile

import numpy as np

from . import dynamics as dyn
from . import momentum as mom
from . import states as st
from . import uncertainty as unc
from .core import (
    BoxConfig,
    ConfigurationError,
    DomainError,
    NumericError,
    ParameterError,
    PreconditionError,
    Quadrature,
)
from .spectrum import RobinBC, doubled_spectrum

USAGE_EXIT = 2
NUMERIC_EXIT = 3

FAMILIES = ("dirichlet", "neumann", "mixed", "symmetric", "antisymmetric", "general")
WRAP_FAMILIES = ("dirichlet", "neumann", "mixed")


def _fmt(value) -> str:
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    v = float(value)
    if math.isinf(v):
        return "inf" if v > 0 else "-inf"
    return f"{v:.17g}"


def _write_text(path: str, text: str):
    os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=os.path.dirname(path) or ".", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_csv(path: str, header, rows):
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_fmt(v) if not isinstance(v, str) else v for v in row))
    _write_text(path, "\n".join(lines) + "\n")


def _jsonable(value):
    if isinstance(value, float) and math.isinf(value):
        return "inf" if value > 0 else "-inf"
    if isinstance(value, (np.floating, np.integer)):
        return _jsonable(value.item())
    if isinstance(value, complex):
        return {"re": _jsonable(value.real), "im": _jsonable(value.imag)}
    if isinstance(value, dict):
        return {k: _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    return value


def write_json(path: str, obj):
    _write_text(path, json.dumps(_jsonable(obj), indent=2, sort_keys=True) + "\n")


# ---------------------------------------------------------------------------
# argument plumbing
# ---------------------------------------------------------------------------


def _common_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--m", type=float, default=None, help="particle mass (default 1)")
    p.add_argument("--L", type=float, default=None, help="box length (default 1)")
    p.add_argument("--bc", choices=FAMILIES, default=None, help="boundary family")
    p.add_argument("--gamma", type=float, default=None,
                   help="gamma for the symmetric/antisymmetric families")
    p.add_argument("--gamma-plus", type=float, default=None,
                   help="right-wall gamma (inf = Dirichlet)")
    p.add_argument("--gamma-minus", type=float, default=None,
                   help="left-wall gamma (inf = Dirichlet)")
    p.add_argument("--theta", type=float, default=None,
                   help="momentum quantization phase in [0, pi)")
    p.add_argument("--seed", type=int, default=None, help="seed for random sweeps")
    p.add_argument("--out-dir", default=None, help="output directory (default 'out')")
    p.add_argument("--config", default=None, help="JSON file with flag defaults")
    return p


_CONFIG_KEYS = ("m", "L", "bc", "gamma", "gamma_plus", "gamma_minus", "theta",
                "seed", "out_dir", "state", "packet", "levels", "samples",
                "times", "n_min", "n_max", "grid_points", "density_points",
                "snapshot_every", "sweep", "sweep_gammas", "modes",
                "gamma_sweep", "gamma_min", "gamma_max")


def _apply_config(args: argparse.Namespace):
    """Fill flags the user did not pass from the --config JSON document."""
    if not args.config:
        return
    try:
        with open(args.config) as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ParameterError(f"cannot read config {args.config!r}: {exc}") from exc
    if not isinstance(doc, dict):
        raise ParameterError("config file must hold a JSON object")
    for key, value in doc.items():
        attr = key.replace("-", "_")
        if attr not in _CONFIG_KEYS:
            raise ParameterError(f"unknown config key {key!r}")
        if getattr(args, attr, None) is None:
            setattr(args, attr, value)


def _setup(args):
    cfg = BoxConfig(m=args.m if args.m is not None else 1.0,
                    L=args.L if args.L is not None else 1.0)
    q = Quadrature(cfg)
    out = args.out_dir if args.out_dir is not None else "out"
    os.makedirs(out, exist_ok=True)
    return cfg, q, out


def _family_basis(args, cfg, l_max):
    family = args.bc
    if family is None:
        raise ParameterError("--bc is required here")
    gp = args.gamma_plus
    gm = args.gamma_minus
    return st.basis_for_family(cfg, family, l_max, gamma=args.gamma,
                               gamma_plus=gp, gamma_minus=gm)


def _robin_bc(args) -> RobinBC:
    family = args.bc
    if family == "dirichlet":
        return RobinBC.dirichlet()
    if family == "neumann":
        return RobinBC.neumann()
    if family == "mixed":
        return RobinBC.mixed()
    if family == "symmetric":
        if args.gamma is None:
            raise ParameterError("symmetric family needs --gamma")
        return RobinBC.symmetric(args.gamma)
    if family == "antisymmetric":
        if args.gamma is None:
            raise ParameterError("antisymmetric family needs --gamma")
        return RobinBC.antisymmetric(args.gamma)
    if family == "general":
        if args.gamma_plus is None or args.gamma_minus is None:
            raise ParameterError("general family needs --gamma-plus/--gamma-minus")
        return RobinBC(args.gamma_plus, args.gamma_minus)
    raise ParameterError("--bc is required here")


def _parse_times(text: str, cfg: BoxConfig) -> np.ndarray:
    """'start:stop:count', endpoints inclusive; 'T' means the revival period."""
    T = dyn.revival_period(cfg)

    def term(s: str) -> float:
        s = s.strip()
        try:
            return float(eval(s.replace("T", repr(T)), {"__builtins__": {}}, {}))
        except Exception as exc:
            raise ParameterError(f"cannot parse time expression {s!r}") from exc

    parts = text.split(":")
    if len(parts) != 3:
        raise ParameterError("--times must be start:stop:count")
    start, stop = term(parts[0]), term(parts[1])
    try:
        count = int(parts[2])
    except ValueError as exc:
        raise ParameterError("--times count must be an integer") from exc
    if count < 1:
        raise ParameterError("--times count must be >= 1")
    return np.linspace(start, stop, count)


def _parse_packet(text: str) -> dyn.GaussianPacketSpec:
    parts = text.split(",")
    if len(parts) != 2:
        raise ParameterError("--packet must be a,k_c")
    return dyn.GaussianPacketSpec(a=float(parts[0]), k_c=float(parts[1]))


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def cmd_spectrum(args) -> int:
    cfg, q, out = _setup(args)
    if args.bc is None:
        raise ParameterError("--bc is required for spectrum")
    if args.levels is None:
        args.levels = 8
    sweep_only = (args.gamma_sweep and args.gamma is None
                  and args.bc in ("symmetric", "antisymmetric"))
    if not sweep_only:
        basis = _family_basis(args, cfg, args.levels - 1)
        rows = [(lv.index, lv.kind, lv.energy, lv.wavenumber) for lv in basis.levels]
        write_csv(os.path.join(out, "spectrum.csv"),
                  ["l", "kind", "energy", "wavenumber"], rows)

        if args.mu is not None:
            pairs = doubled_spectrum(basis, args.mu)
            write_csv(os.path.join(out, "doubled.csv"), ["energy", "sector"],
                      [(e, s) for e, s in pairs])

        if args.samples:
            xs = np.linspace(-cfg.half, cfg.half, args.samples)
            for lv in basis.levels:
                v = lv.eigenfunction(xs)
                write_csv(os.path.join(out, "levels", f"level_{lv.index:03d}.csv"),
                          ["x", "re", "im"],
                          [(x, float(c.real), float(c.imag)) for x, c in zip(xs, v)])

    if args.gamma_sweep:
        if args.bc not in ("symmetric", "antisymmetric"):
            raise ParameterError("--gamma-sweep needs --bc symmetric or antisymmetric")
        lo = args.gamma_min if args.gamma_min is not None else -8.0 / cfg.L
        hi = args.gamma_max if args.gamma_max is not None else 8.0 / cfg.L
        rows = []
        for g in np.linspace(lo, hi, args.gamma_sweep):
            b = st.basis_for_family(cfg, args.bc, args.levels - 1, gamma=float(g))
            for lv in b.levels:
                rows.append((float(g), math.atan(float(g) * cfg.L), lv.index,
                             lv.kind, lv.energy))
        write_csv(os.path.join(out, "sweep.csv"),
                  ["gamma", "atan_gamma_L", "l", "kind", "energy"], rows)
    return 0


def _measure_state(args, cfg, q):
    token = args.state
    basis = None
    if token.startswith("random:"):
        basis = _family_basis(args, cfg, (args.modes or 10) - 1)
    return st.parse_state(token, cfg, q, basis=basis)


def cmd_measure(args) -> int:
    cfg, q, out = _setup(args)
    psi = _measure_state(args, cfg, q)
    nrm = psi.norm(q)
    if not (abs(nrm - 1.0) < 1e-8):
        raise NumericError(f"state is not normalizable/normalized (norm {nrm})")
    ext = mom.MomentumExtension.from_theta(args.theta if args.theta is not None else 0.0)
    n_range = (args.n_min if args.n_min is not None else mom.DEFAULT_N_RANGE[0],
               args.n_max if args.n_max is not None else mom.DEFAULT_N_RANGE[1])
    dist = mom.momentum_distribution(psi, ext, n_range, q)
    write_csv(os.path.join(out, "histogram.csv"), ["n", "k", "probability"],
              zip(dist.n, dist.k, dist.p))

    # dense |FT|^2/(2 pi) overlay; the discrete bars sample it at spacing pi/L
    points = args.density_points if args.density_points is not None else 2048
    kd = np.linspace(dist.k[0], dist.k[-1], points)
    if psi.primitives is not None:
        ft = np.zeros(len(kd), dtype=complex)
        for p in psi.primitives:
            ft += p.plane_wave_overlap(kd, cfg.L)
    else:
        ft = np.exp(-1j * np.outer(kd, q.x)) @ (q.w * psi(q.x))
    write_csv(os.path.join(out, "density.csv"), ["k", "density"],
              zip(kd, np.abs(ft) ** 2 / (2.0 * math.pi)))

    pr2 = mom.expval_pR_squared(psi, q)
    pr2_series = mom.pR_squared_from_distribution(dist)
    summary = {
        "state": args.state,
        "theta": ext.theta,
        "pR": mom.expval_pR(psi, q),
        "pI": mom.expval_pI(psi),
        "pR2": pr2,
        "pR2_series": pr2_series,
        "tail_exponent": dist.tail_exponent,
        "mass_in_range": dist.total_mass(with_tail=False),
        "mass_with_tail": dist.total_mass(with_tail=True),
        "most_probable_n": dist.most_probable(),
        "identity_residual": mom.momentum_identity_residual(psi, q),
    }
    write_json(os.path.join(out, "summary.json"), summary)
    return 0


def _evolving_state(args, cfg, basis):
    token = args.state
    if token.startswith("gaussian:"):
        spec = _parse_packet(token.split(":", 1)[1])
        return dyn.gaussian_coefficients(spec, args.bc, basis)
    if token.startswith("random:"):
        parts = token.split(":", 1)[1].split(",")
        if len(parts) != 2:
            raise ParameterError("random:<modes>,<seed>")
        return st.random_state(basis, int(parts[0]), int(parts[1]))
    if token.startswith("level:"):
        l = int(token.split(":", 1)[1])
        if not (0 <= l < len(basis)):
            raise ParameterError(f"level {l} outside the basis (size {len(basis)})")
        c = np.zeros(len(basis), dtype=complex)
        c[l] = 1.0
        return dyn.EvolvingState.from_coefficients(basis, c)
    raise ParameterError(f"unsupported evolving state {token!r} "
                         "(use gaussian:a,kc | random:m,s | level:l)")


def cmd_evolve(args) -> int:
    cfg, q, out = _setup(args)
    if args.bc not in WRAP_FAMILIES:
        raise ParameterError(f"evolve needs --bc in {WRAP_FAMILIES}")
    spec = _parse_packet(args.packet) if args.packet else dyn.GaussianPacketSpec(
        a=cfg.L / 20.0, k_c=41.0 * math.pi / cfg.L)
    basis = _family_basis(args, cfg, spec.mode_cutoff(cfg) + 2)
    state = dyn.gaussian_coefficients(spec, args.bc, basis)
    times = _parse_times(args.times, cfg) if args.times else np.linspace(
        0.0, dyn.revival_period(cfg), 9)

    ext = mom.MomentumExtension.from_theta(args.theta if args.theta is not None else 0.0)
    n_range = (args.n_min if args.n_min is not None else -128,
               args.n_max if args.n_max is not None else 128)
    grid = np.linspace(-cfg.half, cfg.half, args.grid_points or 513)
    every = args.snapshot_every if args.snapshot_every is not None else 1

    rows = []
    for idx, t in enumerate(times):
        t = float(t)
        at = dyn.evolve(state, t)
        psi = at.wavefunction()
        overlap, distance = dyn.revival_fidelity(state, t, q)
        obs_mean = float(np.real(np.dot(q.w, q.x * np.abs(psi(q.x)) ** 2)))
        rows.append((t, obs_mean, mom.expval_pR(psi, q), mom.expval_pI(psi),
                     overlap, distance))
        if every and idx % every == 0:
            v = psi(grid)
            write_csv(os.path.join(out, "snapshots", f"{idx:03d}.csv"),
                      ["x", "re", "im", "density"],
                      zip(grid, v.real, v.imag, np.abs(v) ** 2))
            dist = mom.momentum_distribution(psi, ext, n_range, q)
            write_csv(os.path.join(out, "snapshots", f"{idx:03d}_momentum.csv"),
                      ["n", "k", "probability"], zip(dist.n, dist.k, dist.p))
    write_csv(os.path.join(out, "series.csv"),
              ["t", "mean_x", "pR", "pI", "overlap", "density_distance"], rows)
    return 0


def cmd_ehrenfest(args) -> int:
    cfg, q, out = _setup(args)
    if args.bc is None:
        raise ParameterError("--bc is required for ehrenfest")
    token = args.state or "gaussian:" + f"{cfg.L / 20.0},{41.0 * math.pi / cfg.L}"
    if token.startswith("gaussian:"):
        if args.bc not in WRAP_FAMILIES:
            raise ParameterError("gaussian packets need --bc dirichlet|neumann|mixed")
        spec = _parse_packet(token.split(":", 1)[1])
        l_max = spec.mode_cutoff(cfg) + 2
    else:
        l_max = (args.modes or 10) + 2
    basis = _family_basis(args, cfg, l_max)
    ns = argparse.Namespace(**vars(args))
    ns.state = token
    state = _evolving_state(ns, cfg, basis)
    times = _parse_times(args.times, cfg) if args.times else np.linspace(
        0.0, dyn.revival_period(cfg), 20)
    rows = []
    for t in times:
        rep = dyn.ehrenfest_report(state, float(t), q=q)
        rows.append((rep.t, rep.dx_dt, rep.pR, rep.residual1, rep.dpR_dt,
                     rep.force_boundary, rep.minus_dV, rep.residual2,
                     rep.dpI_dt, rep.continuity_residual))
    write_csv(os.path.join(out, "ehrenfest.csv"),
              ["t", "dx_dt", "pR", "residual1", "dpR_dt", "force_boundary",
               "minus_dV", "residual2", "dpI_dt", "continuity_residual"], rows)
    return 0


_STATE_DEFAULT_BC = {
    "linear-zero": ("symmetric", -2.0),
    "constant": ("neumann", None),
}


def _uncertainty_bc(args, cfg) -> RobinBC:
    if args.bc is not None:
        return _robin_bc(args)
    token = args.state
    head = token.split(":", 1)[0]
    if head == "exp":
        return RobinBC.antisymmetric(float(token.split(":", 1)[1]))
    if head in _STATE_DEFAULT_BC:
        fam, g = _STATE_DEFAULT_BC[head]
        return RobinBC.symmetric(g / cfg.L * 1.0) if fam == "symmetric" else RobinBC.neumann()
    if head == "dirichlet" or head == "gaussian":
        return RobinBC.dirichlet()
    if head == "neumann":
        return RobinBC.neumann()
    if head == "mixed":
        return RobinBC.mixed()
    raise ParameterError("cannot infer boundary conditions; pass --bc (and gammas)")


def cmd_uncertainty(args) -> int:
    cfg, q, out = _setup(args)
    psi = _measure_state(args, cfg, q)
    bc = _uncertainty_bc(args, cfg)
    rep = unc.kinetic_inequality_report(psi, bc, q)
    lhs, rhs = unc.generalized_uncertainty(psi, q)
    comm = unc.commutator_expectation_x_pR(psi, q)
    doc = {
        "state": args.state,
        "gamma_plus": bc.gamma_plus,
        "gamma_minus": bc.gamma_minus,
        "pI": mom.expval_pI(psi),
        "generalized_lhs": lhs,
        "generalized_rhs": rhs,
        "commutator": comm,
        **{k: getattr(rep, k) for k in (
            "delta_x", "two_m_T", "pR", "pR2_term", "anticomm", "cross_term",
            "boundary_block", "gamma_terms", "pI_sq_term", "lhs", "rhs",
            "holds", "slack")},
    }
    write_json(os.path.join(out, "uncertainty.json"), doc)

    if args.sweep:
        gammas = ([float(s) for s in args.sweep_gammas.split(",")]
                  if args.sweep_gammas else [-3.0, -1.0, 0.0, 1.0, 3.0])
        modes = args.modes or 8
        seed0 = args.seed if args.seed is not None else 1
        rows = []
        for g in gammas:
            basis = st.basis_for_family(cfg, "symmetric", modes - 1, gamma=g / cfg.L)
            for i in range(args.sweep):
                s = st.random_state(basis, modes, seed0 + i)
                p = s.wavefunction()
                r = unc.kinetic_inequality_report(p, RobinBC.symmetric(g / cfg.L), q)
                cerr = abs(unc.commutator_expectation_x_pR(p, q) - 1j)
                rows.append((g, seed0 + i, r.delta_x, r.two_m_T, r.rhs, r.slack,
                             int(r.holds), cerr))
        write_csv(os.path.join(out, "uncertainty_sweep.csv"),
                  ["gamma_L", "seed", "delta_x", "two_m_T", "rhs", "slack",
                   "holds", "commutator_err"], rows)
    return 0


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = _common_parser()
    parser = argparse.ArgumentParser(prog="boxqm", description=__doc__,
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("spectrum", parents=[common], help="eigenvalues and eigenfunctions")
    p.add_argument("--levels", type=int, default=None, help="level count (default 8)")
    p.add_argument("--samples", type=int, default=None,
                   help="per-level eigenfunction sample count")
    p.add_argument("--mu", type=float, default=None,
                   help="also emit the doubled spectrum for this mu")
    p.add_argument("--gamma-sweep", type=int, default=None,
                   help="emit sweep.csv over this many gamma values")
    p.add_argument("--gamma-min", type=float, default=None)
    p.add_argument("--gamma-max", type=float, default=None)
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("measure", parents=[common], help="momentum measurement histogram")
    p.add_argument("--state", required=True, help=st.parse_state.__doc__)
    p.add_argument("--n-min", type=int, default=None)
    p.add_argument("--n-max", type=int, default=None)
    p.add_argument("--modes", type=int, default=None, help="modes for random: states")
    p.add_argument("--density-points", type=int, default=None,
                   help="points of the continuous-density overlay")
    p.set_defaults(func=cmd_measure)

    p = sub.add_parser("evolve", parents=[common], help="bouncing-packet time series")
    p.add_argument("--packet", default=None, help="a,k_c (default L/20, 41 pi/L)")
    p.add_argument("--times", default=None,
                   help="start:stop:count; 'T' is the revival period (default 0:T:9)")
    p.add_argument("--n-min", type=int, default=None)
    p.add_argument("--n-max", type=int, default=None)
    p.add_argument("--grid-points", type=int, default=None)
    p.add_argument("--snapshot-every", type=int, default=None,
                   help="write snapshots every k-th time (0 = none)")
    p.set_defaults(func=cmd_evolve)

    p = sub.add_parser("ehrenfest", parents=[common], help="Ehrenfest residual table")
    p.add_argument("--state", default=None,
                   help="gaussian:a,kc | random:modes,seed | level:l")
    p.add_argument("--times", default=None)
    p.add_argument("--modes", type=int, default=None)
    p.set_defaults(func=cmd_ehrenfest)

    p = sub.add_parser("uncertainty", parents=[common], help="uncertainty reports")
    p.add_argument("--state", required=True)
    p.add_argument("--modes", type=int, default=None)
    p.add_argument("--sweep", type=int, default=None,
                   help="random states per gamma in the sweep")
    p.add_argument("--sweep-gammas", default=None, help="comma list of gamma*L values")
    p.set_defaults(func=cmd_uncertainty)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        _apply_config(args)
        return args.func(args)
    except (ParameterError, ConfigurationError, DomainError) as exc:
        print(f"boxqm: {exc}", file=sys.stderr)
        return USAGE_EXIT
    except (NumericError, PreconditionError) as exc:
        print(f"boxqm: numeric failure: {exc}", file=sys.stderr)
        return NUMERIC_EXIT


if __name__ == "__main__":
    sys.exit(main())
