"""Command-line front end.

Subcommands: spectrum, profiles, symmetry, gbz, zak, sweep-theta,
boundary.  Every command reads the model from a JSON config file
(keys t, gamma, delta, V, theta, L, boundary) with individual flags
taking precedence over file values, writes CSV/JSON into --out, and
optionally emits a static SVG next to the CSV.  Output is deterministic:
identical configuration produces byte-identical primary files.

Exit codes: 0 success, 1 configuration error, 2 numerical error, 3 I/O.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys

import numpy as np

from . import svgplot
from .boundary import DEFAULT_VARIANT, VARIANTS, boundary_determinant, continuum_ratio
from .errors import (
    ConfigError,
    NhskinError,
    NumericalError,
    SelectionOutOfRange,
    UnsupportedPotential,
    WrongCase,
)
from .model import ModelSpec, OBC, PBC, build_bdg, validate_spec
from .nonbloch import band_energies, gbz_modulus_report, solve_beta, zak_phase
from .spectra import (
    DEFAULT_EDGE_SITES,
    DEFAULT_EDGE_WEIGHT,
    DEFAULT_TAU_SKIN,
    classify_states,
    density_profile,
    eigendecompose,
    skin_metrics,
)
from .symmetry import (
    DEFAULT_TOL,
    commutator_residual,
    default_candidates,
    ring_candidates,
    theorem_verdict,
)

FMT = "%.17g"


def _fmt(x) -> str:
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, float) and math.isnan(x):
        return "nan"
    return FMT % x


def write_csv(path: str, header: list[str], rows: list[tuple]) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(x) if not isinstance(x, str) else x for x in row) + "\n")


def write_json(path: str, payload: dict) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def load_model(args) -> ModelSpec:
    raw = {}
    if args.config:
        with open(args.config, "r", encoding="utf-8") as fh:
            try:
                raw = json.load(fh)
            except json.JSONDecodeError as exc:
                raise ConfigError(f"malformed config {args.config}: {exc}") from exc
    try:
        spec = ModelSpec.from_dict(raw)
        overrides = {}
        for flag, key in (("t", "t"), ("gamma", "gamma"), ("delta", "delta"),
                          ("V", "V"), ("theta", "theta"), ("L", "L"),
                          ("boundary", "boundary")):
            v = getattr(args, flag, None)
            if v is not None:
                overrides[key] = v
        if overrides:
            spec = ModelSpec.from_dict({**spec.to_dict(), **overrides})
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad model value: {exc}") from exc
    return validate_spec(spec)


def _outdir(args) -> str:
    os.makedirs(args.out, exist_ok=True)
    return args.out


def resolve_ell(args, num_sites: int) -> int:
    """Default edge window adapts to short chains; explicit flags do not."""
    if args.edge_sites is None:
        return max(1, min(DEFAULT_EDGE_SITES, num_sites // 2))
    return args.edge_sites


# ---------------------------------------------------------------- spectrum

def cmd_spectrum(args) -> int:
    spec = load_model(args)
    out = _outdir(args)
    es = eigendecompose(build_bdg(spec), num_sites=spec.num_sites)
    records = classify_states(es, spec.num_sites,
                              resolve_ell(args, spec.num_sites), args.w_edge)
    order = np.lexsort((es.values.imag, es.values.real))
    rows = []
    for rank, i in enumerate(order):
        rec = records[i]
        rows.append((rank, rec.energy.real, rec.energy.imag, rec.label,
                     rec.center_of_mass, rec.edge_weight, rec.participation_ratio))
    path = os.path.join(out, "spectrum.csv")
    write_csv(path, ["index", "re_E", "im_E", "class", "com", "edge_weight", "pr"], rows)
    if args.svg:
        panels = svgplot.panel_grid(
            2, ["Re E per state", "Im E per state"],
            ["state index", "state index"], ["Re E", "Im E"])
        idx = [r[0] for r in rows]
        panels[0].scatter(idx, [r[1] for r in rows])
        panels[1].scatter(idx, [r[2] for r in rows])
        svgplot.write_svg(os.path.join(out, "spectrum.svg"), panels)
    print(path)
    return 0


# ---------------------------------------------------------------- profiles

def parse_selection(selection: str, records) -> list[int]:
    bulk = [r.index for r in records if r.label == "bulk"]
    if selection.startswith("bulk:"):
        k = int(selection.split(":", 1)[1])
        if k < 1 or not bulk:
            raise SelectionOutOfRange(f"cannot take {k} bulk states")
        # quantiles of Re E among bulk-classified states
        ordered = sorted(bulk, key=lambda i: (records[i].energy.real,
                                              records[i].energy.imag))
        if k >= len(ordered):
            return ordered
        picks = [ordered[int(round(q * (len(ordered) - 1)))]
                 for q in np.linspace(0.1, 0.9, k)]
        seen = []
        for p in picks:
            if p not in seen:
                seen.append(p)
        return seen
    if selection == "edge:all":
        return [r.index for r in records if r.label == "edge"]
    try:
        idx = [int(s) for s in selection.split(",") if s.strip() != ""]
    except ValueError as exc:
        raise SelectionOutOfRange(f"bad selection {selection!r}") from exc
    for i in idx:
        if not (0 <= i < len(records)):
            raise SelectionOutOfRange(f"state index {i} out of range")
    return idx


def cmd_profiles(args) -> int:
    spec = load_model(args)
    out = _outdir(args)
    es = eigendecompose(build_bdg(spec), num_sites=spec.num_sites)
    records = classify_states(es, spec.num_sites,
                              resolve_ell(args, spec.num_sites), args.w_edge)
    chosen = parse_selection(args.selection, records)
    rows = []
    profs = []
    for i in chosen:
        prof = density_profile(es.right[:, i], spec.num_sites)
        profs.append((i, prof))
        for n in range(spec.num_sites):
            rows.append((i, n + 1, prof.site_density[n]))
    path = os.path.join(out, "profiles.csv")
    write_csv(path, ["state_index", "site", "density"], rows)
    if args.svg:
        panels = svgplot.panel_grid(1, ["state densities"], ["site"], ["density"])
        for i, prof in profs:
            panels[0].line(range(1, spec.num_sites + 1), prof.site_density)
        svgplot.write_svg(os.path.join(out, "profiles.svg"), panels)
    print(path)
    return 0


# ---------------------------------------------------------------- symmetry

def cmd_symmetry(args) -> int:
    spec = load_model(args)
    out = _outdir(args)
    H = build_bdg(spec)
    verdict = theorem_verdict(H, default_candidates(spec.num_sites), args.tol)
    path = os.path.join(out, "verdict.json")
    write_json(path, verdict.to_dict())
    print(path)
    return 0


# ---------------------------------------------------------------- gbz

def cmd_gbz(args) -> int:
    spec = load_model(args)
    if spec.big_v != 0.0:
        raise UnsupportedPotential("gbz requires V = 0")
    out = _outdir(args)
    # bulk band energies, deterministically sampled by Re-E quantiles
    num_k = max(args.num_energies, 8)
    cand = band_energies(spec, num_k)
    order = np.lexsort((cand.imag, cand.real))
    cand = cand[order]
    picks = np.unique(np.round(np.linspace(0, len(cand) - 1, args.num_energies)).astype(int))
    energies = cand[picks]
    rows = []
    for rep in gbz_modulus_report(spec, energies):
        m = rep["moduli"]
        rows.append((rep["energy"].real, rep["energy"].imag,
                     m[0], m[1], m[2], m[3], rep["case"], rep["mid_gap"]))
    path = os.path.join(out, "gbz.csv")
    write_csv(path, ["re_E", "im_E", "m1", "m2", "m3", "m4", "case", "mid_gap"], rows)
    if args.svg:
        panels = svgplot.panel_grid(1, ["decay-factor moduli"], ["Re E"], ["|beta|"])
        res = [r[0] for r in rows]
        for col in (2, 3, 4, 5):
            panels[0].scatter(res, [r[col] for r in rows])
        svgplot.write_svg(os.path.join(out, "gbz.svg"), panels)
    print(path)
    return 0


# ---------------------------------------------------------------- zak

def cmd_zak(args) -> int:
    spec = load_model(args)
    out = _outdir(args)
    res = zak_phase(spec, band=args.band, grid=args.grid)
    path = os.path.join(out, "zak.json")
    write_json(path, {"band": res.band, "phase": res.phase,
                      "grid": res.grid_points, "residual": res.residual})
    print(path)
    return 0


# ---------------------------------------------------------------- sweep

def ring_length(L: int) -> int:
    """Nearest ring length supporting all six reflection centers."""
    return max(6, 6 * int(round(L / 6)))


def cmd_sweep_theta(args) -> int:
    spec = load_model(args)
    if args.steps < 6:
        raise ConfigError(f"steps must be >= 6, got {args.steps}")
    out = _outdir(args)
    L_ring = ring_length(spec.num_sites)
    candidates = ring_candidates(L_ring)
    rows = []
    for s in range(args.steps):
        theta = 2.0 * np.pi * s / args.steps
        obc_spec = spec.replace(theta=theta, boundary=OBC)
        es = eigendecompose(build_bdg(obc_spec), num_sites=obc_spec.num_sites)
        report = skin_metrics(es, obc_spec.num_sites, args.tau_skin,
                              resolve_ell(args, obc_spec.num_sites), args.w_edge)
        # the symmetry test runs on the periodic ring, where shifted
        # reflection centers are legitimate lattice maps
        ring_spec = spec.replace(theta=theta, boundary=PBC, L=L_ring)
        H_ring = build_bdg(ring_spec)
        verdict = theorem_verdict(H_ring, candidates, args.tol)
        residual = verdict.commutator_residual
        if residual is None:
            residual = min(commutator_residual(H_ring, c) for c in candidates)
        rows.append((s, theta, residual, verdict.kind, report.skew,
                     report.accumulation, report.skin_detected))
    path = os.path.join(out, "sweep.csv")
    write_csv(path, ["step", "theta", "residual", "verdict", "skew",
                     "accumulation", "skin_detected"], rows)
    if args.svg:
        panels = svgplot.panel_grid(
            2, ["commutator residual", "bulk accumulation"],
            ["theta", "theta"], ["residual", "accumulation"])
        th = [r[1] for r in rows]
        panels[0].scatter(th, [max(r[2], 1e-18) for r in rows])
        panels[1].scatter(th, [r[5] for r in rows])
        svgplot.write_svg(os.path.join(out, "sweep.svg"), panels)
    print(path)
    return 0


# ---------------------------------------------------------------- boundary

def cmd_boundary(args) -> int:
    spec = load_model(args)
    if spec.big_v != 0.0:
        raise UnsupportedPotential("boundary requires V = 0")
    out = _outdir(args)
    L = args.L_check
    chain = spec.replace(L=L, boundary=OBC)
    evals = np.linalg.eigvals(build_bdg(chain))
    order = np.lexsort((evals.imag, evals.real))
    rows = []
    for E in evals[order]:
        E = complex(E)
        det = boundary_determinant(chain, E, L, args.variant)
        try:
            lhs, rhs = continuum_ratio(chain, E, L, args.variant)
            lhs_abs, rhs_abs = abs(lhs), abs(rhs)
        except (WrongCase, NumericalError):
            lhs_abs, rhs_abs = float("nan"), float("nan")
        rows.append((E.real, E.imag, L, abs(det), lhs_abs, rhs_abs))
    path = os.path.join(out, "boundary.csv")
    write_csv(path, ["re_E", "im_E", "L", "norm_det", "lhs_abs", "rhs_abs"], rows)
    if args.svg:
        panels = svgplot.panel_grid(1, ["determinant at eigenvalues"],
                                    ["Re E"], ["normalized |det|"])
        panels[0].scatter([r[0] for r in rows], [r[3] for r in rows])
        svgplot.write_svg(os.path.join(out, "boundary.svg"), panels)
    print(path)
    return 0


# ---------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="nhskin",
        description="skin-effect symmetry diagnostics for 1D chains",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="JSON model config")
        p.add_argument("--out", default=".", help="output directory")
        p.add_argument("--svg", action="store_true", help="also write an SVG figure")
        p.add_argument("--t", type=float, default=None)
        p.add_argument("--gamma", type=float, default=None)
        p.add_argument("--delta", type=float, default=None)
        p.add_argument("--V", type=float, default=None)
        p.add_argument("--theta", type=float, default=None)
        p.add_argument("--L", type=int, default=None)
        p.add_argument("--boundary", choices=[OBC, PBC], default=None)

    def thresholds(p):
        p.add_argument("--edge-sites", dest="edge_sites", type=int,
                       default=None,
                       help="edge window (default min(10, L//2))")
        p.add_argument("--w-edge", dest="w_edge", type=float,
                       default=DEFAULT_EDGE_WEIGHT)
        p.add_argument("--tau-skin", dest="tau_skin", type=float,
                       default=DEFAULT_TAU_SKIN)

    p = sub.add_parser("spectrum", help="full spectrum with state classification")
    common(p); thresholds(p)
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("profiles", help="site densities of selected states")
    common(p); thresholds(p)
    p.add_argument("--selection", default="bulk:4",
                   help="bulk:k | edge:all | comma-separated indices")
    p.set_defaults(func=cmd_profiles)

    p = sub.add_parser("symmetry", help="combined-reflection verdict")
    common(p)
    p.add_argument("--tol", type=float, default=DEFAULT_TOL)
    p.set_defaults(func=cmd_symmetry)

    p = sub.add_parser("gbz", help="decay-factor moduli on the bulk bands")
    common(p)
    p.add_argument("--num-energies", dest="num_energies", type=int, default=50)
    p.set_defaults(func=cmd_gbz)

    p = sub.add_parser("zak", help="band geometric phase around the unit circle")
    common(p)
    p.add_argument("--band", choices=["plus", "minus"], default="plus")
    p.add_argument("--grid", type=int, default=4096)
    p.set_defaults(func=cmd_zak)

    p = sub.add_parser("sweep-theta", help="potential-phase sweep: symmetry vs skin")
    common(p); thresholds(p)
    p.add_argument("--steps", type=int, default=24)
    p.add_argument("--tol", type=float, default=DEFAULT_TOL)
    p.set_defaults(func=cmd_sweep_theta)

    p = sub.add_parser("boundary", help="finite-chain determinant oracle")
    common(p)
    p.add_argument("--L-check", dest="L_check", type=int, default=6)
    p.add_argument("--variant", choices=list(VARIANTS), default=DEFAULT_VARIANT)
    p.set_defaults(func=cmd_boundary)

    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    except NumericalError as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return 2
    except NhskinError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
