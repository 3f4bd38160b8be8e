"""Command-line front door: verification suites and scenario runners.

Subcommands
-----------
verify      algebra-level identity suites (anticommutation relations,
            dimension counts, associativity sampling, isomorphism table)
spinor-rep  idempotent search, minimal ideal, gamma/sigma extraction
transport   evolution-transport scenario from a JSON file
dirac       flat-grid field scenarios (dispersion | hermiticity |
            dalembert | kg-roundtrip | wrap-check)

Exit codes: 0 all checks passed, 1 a tolerance failed, 2 usage/config error.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from fractions import Fraction
from math import comb
from pathlib import Path as FsPath

import numpy as np

from . import fields as fl
from . import spinor as sp
from . import transport as tr
from .config import max_dimension
from .ga import Multivector, Signature, basis_blades, clifford
from .report import Report

EQ1_RELATION = "e_i e_j + e_j e_i = 2 g_ij"
USAGE_ERROR = 2


class UsageError(ValueError):
    pass


def _parse_signature(text: str) -> Signature:
    try:
        p_str, q_str = text.split(",")
        sig = Signature(int(p_str), int(q_str))
    except (ValueError, TypeError) as exc:
        raise UsageError(f"bad signature {text!r}: expected 'p,q' with p+q >= 1") from exc
    if sig.n > max_dimension():
        raise UsageError(f"signature {text} exceeds the dimension ceiling {max_dimension()}")
    return sig


def _parse_tols(pairs) -> dict:
    out = {}
    for item in pairs or []:
        if "=" not in item:
            raise UsageError(f"bad --tol {item!r}: expected name=value")
        name, value = item.split("=", 1)
        try:
            out[name] = float(value)
        except ValueError as exc:
            raise UsageError(f"bad --tol value in {item!r}") from exc
    return out


def _write_report(report: Report, out_dir: str | None, filename: str) -> None:
    text = report.to_json()
    if out_dir:
        path = FsPath(out_dir)
        path.mkdir(parents=True, exist_ok=True)
        (path / filename).write_text(text + "\n")
    for line in report.summary_lines():
        print(line)


# ---------------------------------------------------------------------------
# verify


def _random_exact_multivector(rng, n: int, terms: int = 4) -> Multivector:
    masks = rng.choice(1 << n, size=min(terms, 1 << n), replace=False)
    return Multivector(
        n, {int(m): Fraction(int(rng.integers(-3, 4))) for m in masks}
    )


def _verify_signature(report: Report, sig: Signature, rng) -> None:
    metric = sig.metric()
    n = sig.n
    tag = f"cl{sig.p}{sig.q}"
    # defining anticommutation relations, exhaustive over basis vector pairs
    worst = 0
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            ei = Multivector.basis_vector(i, n, Fraction(1))
            ej = Multivector.basis_vector(j, n, Fraction(1))
            lhs = clifford(ei, ej, metric) + clifford(ej, ei, metric)
            rhs = Multivector.scalar(2 * Fraction(metric.entry(i - 1, j - 1)), n)
            if lhs != rhs:
                worst += 1
    report.add(
        f"{tag}-defining-relations", residual=worst, tolerance=0.0,
        relation=EQ1_RELATION, details=f"exhaustive over {n * n} basis pairs, exact",
    )
    # dimension counts
    dims_ok = len(basis_blades(n)) == 2**n and all(
        len(basis_blades(n, q)) == comb(n, q) for q in range(n + 1)
    )
    report.add_bool(
        f"{tag}-dimension-counts", dims_ok,
        relation="dim Lambda = 2^n and dim Lambda^q = C(n, q)",
    )
    # associativity sampling (exact)
    assoc_fail = 0
    for _ in range(3):
        a = _random_exact_multivector(rng, n)
        b = _random_exact_multivector(rng, n)
        c = _random_exact_multivector(rng, n)
        if clifford(clifford(a, b, metric), c, metric) != clifford(
            a, clifford(b, c, metric), metric
        ):
            assoc_fail += 1
    report.add(
        f"{tag}-associativity", residual=assoc_fail, tolerance=0.0,
        relation="(a b) c = a (b c) for the Clifford product",
        details="3 random exact triples",
    )


def cmd_verify(args) -> int:
    sigs = [_parse_signature(s) for s in args.signature] if args.signature else [
        Signature(1, 1), Signature(2, 0), Signature(0, 2), Signature(3, 1), Signature(1, 3)
    ]
    rng = np.random.default_rng(args.seed)
    report = Report(
        command="verify",
        config={"signatures": [f"{s.p},{s.q}" for s in sigs], "seed": args.seed},
    )
    for sig in sigs:
        _verify_signature(report, sig, rng)
    for row in sp.verify_iso_table(signatures=[(s.p, s.q) for s in sigs]):
        report.add(
            row.name, residual=row.residual, tolerance=0.0,
            relation=row.relation, details=row.details, passed=row.passed,
        )
    _write_report(report, args.out, "verify_report.json")
    return report.exit_code


# ---------------------------------------------------------------------------
# spinor-rep


def cmd_spinor_rep(args) -> int:
    if not args.signature:
        raise UsageError("spinor-rep requires --signature p,q")
    if len(args.signature) > 1:
        raise UsageError("spinor-rep inspects one signature per run")
    sig = _parse_signature(args.signature[0])
    report = Report(
        command="spinor-rep",
        config={"signature": f"{sig.p},{sig.q}", "seed": args.seed},
    )
    idem = sp.find_primitive_idempotent(sig)
    report.add_bool(
        "idempotent-search",
        idem.whole_algebra or clifford(idem.idempotent, idem.idempotent, sig.metric()) == idem.idempotent,
        relation="f f = f for the primitive idempotent",
        details=idem.note,
    )
    matrices: dict = {}
    if idem.whole_algebra:
        report.add_bool(
            "minimal-ideal", True,
            relation="division algebra: the whole algebra is the minimal ideal",
            details=f"ideal dimension {idem.ideal_dimension}",
        )
    gamma_set = sp.gamma_set_for_signature(sig)
    if not idem.whole_algebra:
        basis = sp.minimal_left_ideal(idem.idempotent, sig.metric())
        invariance = sp.ideal_invariance_residual(basis, sig.metric())
        report.add(
            "minimal-ideal", residual=invariance, tolerance=0.0,
            relation="v (ideal) lies inside the ideal for every basis vector v",
            details=f"ideal dimension {len(basis)}",
        )
    residual = gamma_set.anticommutator_residuals()
    report.add(
        "gamma-relations", residual=float(residual), tolerance=0.0,
        relation="g^mu g^nu + g^nu g^mu = 2 g^{mu nu} I (exact)",
        details=f"representation dimension {gamma_set.dim}",
    )
    sigmas = sp.sigma_generators(gamma_set)
    worst = 0
    for mu in range(sig.n):
        for nu in range(sig.n):
            g1, g2 = gamma_set.gammas[mu], gamma_set.gammas[nu]
            brute = (g1 @ g2 - g2 @ g1) * Fraction(1, 4)
            delta = sigmas.mat(mu, nu) - brute
            anti = sigmas.mat(mu, nu) + sigmas.mat(nu, mu)
            worst = max(
                worst,
                max(abs(x) for x in np.ravel(delta)),
                max(abs(x) for x in np.ravel(anti)),
            )
    report.add(
        "sigma-generators", residual=float(worst), tolerance=0.0,
        relation="4 sigma^{mu nu} = [g^mu, g^nu], antisymmetric in (mu, nu)",
    )
    for mu, g in enumerate(gamma_set.gammas):
        matrices[f"gamma_{mu + 1}"] = np.array(g, dtype=float).reshape(-1).tolist()
    data = report.to_dict()
    data["matrices"] = matrices
    if args.out:
        path = FsPath(args.out)
        path.mkdir(parents=True, exist_ok=True)
        (path / "spinor_rep_report.json").write_text(
            json.dumps(data, sort_keys=True, indent=2) + "\n"
        )
    for line in report.summary_lines():
        print(line)
    return report.exit_code


# ---------------------------------------------------------------------------
# transport


def cmd_transport(args) -> int:
    if not args.scenario:
        raise UsageError("transport requires --scenario <file.json>")
    scenario = tr.load_scenario(args.scenario)
    tols = dict(
        cocycle=scenario.tolerances.cocycle,
        correspondence=scenario.tolerances.correspondence,
        unitarity=scenario.tolerances.unitarity,
    )
    tols.update(_parse_tols(args.tol))
    transport = tr.Transport.build(
        scenario.path, scenario.hamiltonian, scenario.trivialization, scenario.dt
    )
    report = Report(
        command="transport",
        config={
            "scenario": args.scenario,
            "dt": scenario.dt,
            "fibre_dim": scenario.fibre_dim,
            "seed": args.seed,
            "tolerances": tols,
        },
    )
    t0, t1 = scenario.path.t_start, scenario.path.t_end
    span = t1 - t0
    times = [t0, t0 + 0.25 * span, t0 + 0.5 * span, t0 + 0.75 * span, t1]
    worst_cocycle = max(
        transport.cocycle_residual(times[4], times[2], times[0]),
        transport.cocycle_residual(times[3], times[2], times[1]),
        transport.cocycle_residual(times[1], times[3], times[4]),
    )
    report.add(
        "cocycle", worst_cocycle, tols["cocycle"],
        relation="U(t,s) U(s,r) = U(t,r)",
    )
    report.add(
        "identity", transport.identity_residual(times[2]), tols["cocycle"],
        relation="U(t,t) = I",
    )
    report.add(
        "unitarity", transport.unitarity_residual(t1, t0), tols["unitarity"],
        relation="U preserves the trivialization-conjugated inner product",
    )
    h = 1e-4
    # evaluate inside the first path segment: tabulated trivializations are
    # only piecewise linear, so derivative stencils must avoid sample kinks
    mid = 0.5 * (scenario.path.times[0] + scenario.path.times[1])
    gamma = tr.connection_coeffs(transport, mid, h)
    target = 1j * transport.trivialization.inverse(mid) @ scenario.hamiltonian.matrix(
        mid
    ) @ transport.trivialization.matrix(mid)
    # pure-gauge contribution of a time-varying trivialization
    lp = transport.trivialization.matrix(mid + h)
    lm = transport.trivialization.matrix(mid - h)
    target = target + transport.trivialization.inverse(mid) @ ((lp - lm) / (2 * h))
    report.add(
        "connection-vs-hamiltonian",
        float(np.max(np.abs(gamma - target))),
        tols["correspondence"],
        relation="Gamma(t) = (i/hbar) H_bundle(t)",
    )
    hmat = tr.matrix_bundle_hamiltonian(transport, mid, h)
    report.add(
        "matrix-bundle-hamiltonian",
        float(np.max(np.abs(hmat - (-1j) * gamma))),
        tols["correspondence"],
        relation="H_bundle = i dU/dt U^{-1} = -i Gamma",
    )
    # time series of the bundle solution
    psi0 = np.zeros(scenario.fibre_dim, dtype=complex)
    psi0[0] = 1.0
    series_times = np.linspace(t0, t1, 21)
    rows = []
    for t in series_times:
        psi = tr.solve_bundle_schrodinger(transport, psi0, t)
        rows.append([t] + [v for comp in psi for v in (comp.real, comp.imag)])
    if args.out:
        path = FsPath(args.out)
        path.mkdir(parents=True, exist_ok=True)
        with open(path / "psi_series.csv", "w", newline="") as fh:
            writer = csv.writer(fh)
            header = ["t"]
            for kdx in range(scenario.fibre_dim):
                header += [f"re_psi{kdx}", f"im_psi{kdx}"]
            writer.writerow(header)
            writer.writerows(rows)
    _write_report(report, args.out, "transport_report.json")
    return report.exit_code


# ---------------------------------------------------------------------------
# dirac


def _potential_preset(name: str, grid: fl.Grid, n_components: int) -> fl.EMPotential:
    a = np.zeros((n_components,) + grid.extents)
    # spatial axis carrying the preset profile: axis 0 on spatial grids,
    # axis 1 on spacetime grids (where axis 0 is time)
    axis = 0 if n_components > grid.dims else min(1, grid.dims - 1)
    if name == "zero":
        pass
    elif name == "constant-E":
        # temporal-gauge sawtooth A_0 = -E0 (x - L/2); the periodic wrap
        # discontinuity is documented in the README
        x = grid.axis_coords(axis)
        shape = [1] * grid.dims
        shape[axis] = -1
        a[0] = -0.5 * (x - grid.length(axis) / 2).reshape(shape)
    elif name == "plane-wave-gauge":
        mesh = grid.mesh()
        k = grid.wavenumber(axis, 1)
        for mu in range(n_components):
            a[mu] = 0.1 * np.sin(k * mesh[axis])
    else:
        raise UsageError(f"unknown potential preset {name!r}")
    return fl.EMPotential(grid, a)


# largest grid the dirac scenarios accept; a 4-spinor complex field on
# 2^22 sites is ~0.5 GiB including operator scratch
MAX_GRID_SITES = 1 << 22


def _grid_from_args(args, default_extents, default_length=2 * np.pi) -> fl.Grid:
    extents = tuple(int(x) for x in args.grid.split(",")) if args.grid else default_extents
    if args.spacing:
        spacing = tuple(float(x) for x in args.spacing.split(","))
        if len(spacing) == 1:
            spacing = spacing * len(extents)
    else:
        spacing = tuple(default_length / n for n in extents)
    if len(spacing) != len(extents):
        raise UsageError("--spacing must have one entry or one per axis")
    sites = int(np.prod(extents))
    if sites > MAX_GRID_SITES:
        raise UsageError(
            f"grid has {sites} sites, above the memory budget of {MAX_GRID_SITES}"
        )
    return fl.Grid(extents, spacing)


def _dirac_dispersion(args, report: Report, tols: dict) -> None:
    grid = _grid_from_args(args, (64,))
    gset = fl.minkowski_gamma_set(grid.dims + 1)
    mass = args.mass
    pot = _potential_preset(args.potential, grid, gset.spacetime_dim)
    k = grid.wavenumber(0, 1)
    klat = np.sin(k * grid.spacing[0]) / grid.spacing[0]
    hmat = gset.gamma0 @ gset.gamma(1) * klat + mass * gset.gamma0
    evals, evecs = np.linalg.eigh(hmat)
    u = evecs[:, int(np.argmax(evals))]
    elat = float(np.max(evals))
    psi0 = fl.SpinorField.plane_wave(grid, (k,), u)
    dt = min(1e-3, min(grid.spacing) / 8)
    psit = fl.dirac_hamiltonian_evolve(psi0, pot, mass, args.charge, 1.0, dt, gset)
    report.add(
        "norm-drift",
        abs(psit.norm_sq() - psi0.norm_sq()),
        tols.get("drift", 1e-8),
        relation="the evolution is unitary (norm conserved)",
    )
    if args.potential == "zero":
        exact = fl.SpinorField.plane_wave(grid, (k,), u * np.exp(-1j * elat))
        report.add(
            "dispersion-fidelity",
            float(np.max(np.abs(psit.components - exact.components))),
            tols.get("fidelity", 1e-6),
            relation="on-shell phase advances as exp(-i E_lat t)",
        )
        report.add(
            "momentum-drift",
            abs(fl.momentum_expectation(psit, 0) - fl.momentum_expectation(psi0, 0)),
            tols.get("drift", 1e-6),
            relation="free evolution conserves the momentum expectation",
        )
    _write_field_snapshot(args, grid, psit, "dirac_field")


def _dirac_hermiticity(args, report: Report, tols: dict, rng) -> None:
    grid = _grid_from_args(args, (32, 32))
    gset = fl.minkowski_gamma_set(grid.dims)
    shape = (gset.spinor_dim,) + grid.extents
    phi = fl.SpinorField(grid, rng.normal(size=shape) + 1j * rng.normal(size=shape))
    psi = fl.SpinorField(grid, rng.normal(size=shape) + 1j * rng.normal(size=shape))
    lhs = fl.dirac_pairing(phi, fl.momentum_op(psi, gset), gset)
    rhs = fl.dirac_pairing(fl.momentum_op(phi, gset), psi, gset)
    report.add(
        "momentum-hermiticity", abs(lhs - rhs), tols.get("hermiticity", 1e-10),
        relation="<phi, p psi> = <p phi, psi> in the Dirac pairing",
    )
    # spatial Hamiltonian Hermiticity with the chosen potential preset
    sgrid = fl.Grid((grid.extents[-1],), (grid.spacing[-1],))
    sset = fl.minkowski_gamma_set(sgrid.dims + 1)
    pot = _potential_preset(args.potential, sgrid, sset.spacetime_dim)
    sshape = (sset.spinor_dim,) + sgrid.extents
    a = rng.normal(size=sshape) + 1j * rng.normal(size=sshape)
    b = rng.normal(size=sshape) + 1j * rng.normal(size=sshape)
    ha = fl.dirac_hamiltonian(a, sgrid, pot, args.mass, args.charge, sset)
    hb = fl.dirac_hamiltonian(b, sgrid, pot, args.mass, args.charge, sset)
    lhs2 = np.sum(np.conj(a) * hb)
    rhs2 = np.sum(np.conj(ha) * b)
    report.add(
        "hamiltonian-hermiticity", abs(lhs2 - rhs2) * sgrid.cell_volume,
        tols.get("hermiticity", 1e-10),
        relation="H_D is Hermitian in the plain L2 product",
    )


def _dirac_dalembert(args, report: Report, tols: dict) -> None:
    base = args.grid or "64,64"
    extents = tuple(int(x) for x in base.split(","))
    refinements = max(1, args.refine)
    errors = []
    for level in range(refinements + 1):
        ext = tuple(n * 2**level for n in extents)
        grid = fl.Grid(ext, (2 * np.pi / ext[0], np.pi / ext[1]))
        gset = fl.minkowski_gamma_set(grid.dims)
        kt, kx = grid.wavenumber(0, 1), grid.wavenumber(1, 1)
        phi = fl.ScalarField.plane_wave(grid, (kt, kx))
        res = fl.dalembert_identity(phi, fl.AffineConnection.flat(2), gset)
        analytic = -(kt**2 - kx**2) * phi.values
        scale = float(np.max(np.abs(analytic)))
        errors.append(float(np.max(np.abs(res.lhs_scalar - analytic))) / scale)
        if level == 0:
            report.add(
                "scalar-parts-agree", res.scalar_residual, 1e-12,
                relation="scalar part of the gamma-squared operator equals D_mu D^mu",
            )
            report.add(
                "grade2-vanishes", res.grade2_max, tols.get("grade2", 1e-10),
                relation="mixed partials commute: no grade-2 content for flat data",
            )
    for level in range(len(errors) - 1):
        factor = errors[level] / errors[level + 1]
        report.add(
            f"convergence-factor-level{level}",
            abs(factor - 4.0), tols.get("convergence", 0.8),
            relation="second-order stencils: error shrinks 4x per grid doubling",
            details=f"factor {factor:.3f} from error {errors[level]:.3e} to {errors[level + 1]:.3e}",
        )


def _dirac_kg(args, report: Report, tols: dict) -> None:
    grid = _grid_from_args(args, (128,))
    mass = args.mass if args.mass > 0 else 1.0
    k = grid.wavenumber(0, 1)
    energy = np.sqrt(k**2 + mass**2)
    x = grid.axis_coords(0)
    phi0 = fl.ScalarField(grid, np.exp(1j * k * x))
    phidot0 = fl.ScalarField(grid, -1j * energy * np.exp(1j * k * x))
    psi = fl.klein_gordon_reduce(phi0, phidot0, mass)
    phi_back, _ = fl.klein_gordon_reconstruct(psi)
    report.add(
        "roundtrip-at-t0",
        float(np.max(np.abs(phi_back.values - phi0.values))),
        1e-14,
        relation="reduce then reconstruct is the identity",
    )
    psit = fl.klein_gordon_evolve(psi, mass, 1.0, 1e-3)
    phit, _ = fl.klein_gordon_reconstruct(psit)
    exact = np.exp(-1j * energy) * phi0.values
    rel = float(np.max(np.abs(phit.values - exact)) / np.max(np.abs(exact)))
    report.add(
        "plane-wave-roundtrip", rel, tols.get("roundtrip", 1e-4),
        relation="the first-order doublet evolution reproduces the scalar wave",
    )


def _dirac_wrap(args, report: Report, tols: dict, rng) -> None:
    grid = _grid_from_args(args, (16, 16))
    gset = fl.minkowski_gamma_set(grid.dims)
    l_field = fl.random_smooth_trivialization_field(
        grid, gset.spinor_dim, seed=args.seed if args.seed is not None else 0
    )
    wrapped = fl.bundle_wrap(gset, grid, l_field)
    report.add(
        "wrapped-anticommutator", wrapped.anticommutator_residual(),
        tols.get("wrap", 1e-10),
        relation="G^mu G^nu + G^nu G^mu = 2 eta^{mu nu} I at every grid point",
    )
    dets_orig = np.prod([np.linalg.det(np.asarray(g, dtype=complex)) for g in gset.gammas])
    dets_wrapped = np.prod(
        [np.linalg.det(wrapped.matrices[mu][(0,) * grid.dims]) for mu in range(len(gset.gammas))]
    )
    report.add(
        "determinant-invariance", abs(dets_orig - dets_wrapped),
        1e-10,
        relation="similarity transforms preserve determinants",
    )


def _write_field_snapshot(args, grid: fl.Grid, field_obj, name: str) -> None:
    if not args.out:
        return
    path = FsPath(args.out)
    path.mkdir(parents=True, exist_ok=True)
    header = {
        "grid": {
            "extents": list(grid.extents),
            "spacing": list(grid.spacing),
            "periodic": list(grid.periodic),
        },
        "metric": "diag(+1, -1, ...) with time first",
        "gamma_convention": "algebra-derived set, -i carried by the complex scalars",
    }
    (path / f"{name}_header.json").write_text(json.dumps(header, sort_keys=True, indent=2) + "\n")
    comps = field_obj.components if hasattr(field_obj, "components") else field_obj.values[None]
    ncomp = comps.shape[0]
    with open(path / f"{name}.csv", "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(
            [f"x{a}" for a in range(grid.dims)]
            + [f"{part}_c{k}" for k in range(ncomp) for part in ("re", "im")]
        )
        for idx in np.ndindex(grid.extents):
            coords = [grid.spacing[a] * idx[a] for a in range(grid.dims)]
            vals = []
            for k in range(ncomp):
                vals += [comps[(k,) + idx].real, comps[(k,) + idx].imag]
            writer.writerow(coords + vals)


def cmd_dirac(args) -> int:
    scenario = args.scenario or "hermiticity"
    tols = _parse_tols(args.tol)
    rng = np.random.default_rng(args.seed)
    report = Report(
        command="dirac",
        config={
            "scenario": scenario,
            "grid": args.grid,
            "spacing": args.spacing,
            "mass": args.mass,
            "charge": args.charge,
            "potential": args.potential,
            "seed": args.seed,
            "refine": args.refine,
            "tolerances": tols,
        },
    )
    if scenario == "dispersion":
        _dirac_dispersion(args, report, tols)
    elif scenario == "hermiticity":
        _dirac_hermiticity(args, report, tols, rng)
    elif scenario == "dalembert":
        _dirac_dalembert(args, report, tols)
    elif scenario == "kg-roundtrip":
        _dirac_kg(args, report, tols)
    elif scenario == "wrap-check":
        _dirac_wrap(args, report, tols, rng)
    else:
        raise UsageError(
            f"unknown dirac scenario {scenario!r}; choose from dispersion, "
            "hermiticity, dalembert, kg-roundtrip, wrap-check"
        )
    _write_report(report, args.out, "dirac_report.json")
    return report.exit_code


# ---------------------------------------------------------------------------
# entry point


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="clifbundle",
        description="verification CLI for the Clifford-algebra / bundle-evolution library",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--out", help="directory for JSON reports and CSV series")
        p.add_argument("--seed", type=int, default=0, help="seed for randomized checks")
        p.add_argument(
            "--tol", action="append", metavar="NAME=VALUE",
            help="override a named tolerance (repeatable)",
        )

    p_verify = sub.add_parser("verify", help="run the algebra identity suites")
    p_verify.add_argument(
        "--signature", action="append", metavar="P,Q",
        help="signature to check (repeatable; default: the five reference ones)",
    )
    common(p_verify)

    p_rep = sub.add_parser("spinor-rep", help="inspect the spinor representation")
    p_rep.add_argument("--signature", action="append", metavar="P,Q", required=True)
    common(p_rep)

    p_tr = sub.add_parser("transport", help="run a transport scenario file")
    p_tr.add_argument("--scenario", required=True, help="scenario JSON path")
    common(p_tr)

    p_di = sub.add_parser("dirac", help="run a flat-grid field scenario")
    p_di.add_argument(
        "--scenario",
        default="hermiticity",
        help="dispersion | hermiticity | dalembert | kg-roundtrip | wrap-check",
    )
    p_di.add_argument("--grid", help="comma-separated extents, e.g. 64,64")
    p_di.add_argument("--spacing", help="comma-separated spacings (or one for all axes)")
    p_di.add_argument("--mass", type=float, default=1.0)
    p_di.add_argument("--charge", type=float, default=0.0)
    p_di.add_argument(
        "--potential", default="zero", help="zero | constant-E | plane-wave-gauge"
    )
    p_di.add_argument("--refine", type=int, default=1, help="grid doublings for convergence studies")
    common(p_di)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "verify": cmd_verify,
        "spinor-rep": cmd_spinor_rep,
        "transport": cmd_transport,
        "dirac": cmd_dirac,
    }
    try:
        return handlers[args.command](args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR


if __name__ == "__main__":
    sys.exit(main())
