"""Command line front end: JSON/CSV emission over the library.

Every subcommand reads a JSON config describing the coin sequence (and
optionally an initial state), computes with the library, and writes one
deterministic text blob: JSON for structured results, CSV for series.
Identical inputs give byte-identical outputs; grids may be evaluated in
parallel (capped by QWRES_THREADS) but emission order is always sorted.

Config schema:

    {"n0": 1,
     "coins": [{"rotation": 0.75}, {"a": [re, im], "b": ..., "c": ..., "d": ...}],
     "psi0": [{"n": 0, "L": [1.0, 0.0], "R": [0.0, 0.0]}]}   # optional

Commands that need an initial state fall back to the L basis state at the
origin when "psi0" is absent.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from .coins import (
    CoinSequence,
    coin_to_pqtheta,
    hadamard_coin,
    pqtheta_to_S,
    rotation_coin,
    s_product,
    sequence_from_json,
    sequence_to_json,
    validate_coin,
)
from .errors import ConfigParse, InvariantViolation, QWResError
from .expansion import decay_fit_full, expand, nilpotency_index, reconstruct
from .genericity import PerturbationFamily, splitting_experiment, splitting_slope
from .resolvent import identity_residual, neumann_resolvent, apply_resolvent
from .resonances import find_resonances, resonant_chain, validate_multiplicity
from .scattering import scattering_matrix
from .states import basis_state, incoming_length, state_from_json, state_to_json
from .transfer import transfer_polynomial
from .walk import build_K, evolve, norm_defect, survival_norm

__all__ = ["main"]


def _f(x: float) -> str:
    return format(float(x), ".17g")


def _pair(z: complex) -> str:
    return f"[{_f(z.real)}, {_f(z.imag)}]"


def _parallel_map(fn, items):
    items = list(items)
    cap = os.environ.get("QWRES_THREADS")
    if cap is None:
        workers = min(8, os.cpu_count() or 1, max(1, len(items)))
    else:
        try:
            workers = int(cap)
        except ValueError:
            raise ConfigParse(f"QWRES_THREADS must be an integer, got {cap!r}") from None
        workers = max(1, min(workers, len(items) or 1))
    if workers <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


# ---------------------------------------------------------------- config


def _load_config(path):
    try:
        raw = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigParse(f"cannot read config {path}: {exc}") from exc
    try:
        obj = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise ConfigParse(
            f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}"
        ) from exc
    if not isinstance(obj, dict):
        raise ConfigParse(f"{path}: top level must be a JSON object")
    extra = set(obj) - {"n0", "coins", "psi0"}
    if extra:
        raise ConfigParse(f'{path}: unexpected keys {sorted(extra)}')
    cs = sequence_from_json({"n0": obj.get("n0"), "coins": obj.get("coins")})
    psi0 = state_from_json(obj["psi0"]) if "psi0" in obj else None
    return cs, psi0


def _default_psi0(psi0):
    return psi0 if psi0 is not None else basis_state(0, "L")


def _parse_xi_grid(text: str):
    """re0:re1:n,im -> n evenly spaced xi values on that horizontal line."""
    try:
        left, im_part = text.split(",")
        re0_s, re1_s, n_s = left.split(":")
        re0, re1, im = float(re0_s), float(re1_s), float(im_part)
        n = int(n_s)
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"expected re0:re1:n,im (e.g. -3.14:3.14:25,0.0), got {text!r}"
        ) from None
    if n < 1:
        raise argparse.ArgumentTypeError("grid needs at least one point")
    res = np.linspace(re0, re1, n) if n > 1 else np.array([re0])
    return [complex(r, im) for r in res]


def _parse_eps_list(text: str):
    try:
        values = [float(tok) for tok in text.split(",") if tok.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad epsilon list {text!r}") from None
    if not values:
        raise argparse.ArgumentTypeError("epsilon list is empty")
    return values


# -------------------------------------------------------------- commands


def _cmd_validate(args):
    cs, psi0 = _load_config(args.config)
    obj = sequence_to_json(cs)
    lines = ["{", f'  "n0": {obj["n0"]},', '  "coins": [']
    coin_rows = []
    for c in obj["coins"]:
        keys = ", ".join(f'"{k}": [{_f(v[0])}, {_f(v[1])}]' for k, v in c.items())
        coin_rows.append("    {" + keys + "}")
    lines.append(",\n".join(coin_rows))
    if psi0 is None:
        lines.append("  ]")
    else:
        lines.append("  ],")
        lines.append('  "psi0": [')
        rows = []
        for entry in state_to_json(psi0):
            parts = [f'"n": {entry["n"]}']
            for key in ("L", "R"):
                if key in entry:
                    parts.append(f'"{key}": [{_f(entry[key][0])}, {_f(entry[key][1])}]')
            rows.append("    {" + ", ".join(parts) + "}")
        lines.append(",\n".join(rows))
        lines.append("  ]")
    lines.append("}")
    return "\n".join(lines) + "\n"


def _cmd_resonances(args):
    cs, _ = _load_config(args.config)
    rows = []
    for r in find_resonances(cs):
        rows.append(
            f'  {{"xi": {_pair(r.xi)}, "lambda": {_pair(r.lam)}, '
            f'"multiplicity": {r.alg_multiplicity}}}'
        )
    if not rows:
        return "[]\n"
    return "[\n" + ",\n".join(rows) + "\n]\n"


def _cmd_polynomial(args):
    cs, _ = _load_config(args.config)
    tp = transfer_polynomial(cs)
    coeffs = [tp.leading * c for c in tp.coeffs]
    return "[" + ", ".join(_pair(c) for c in coeffs) + "]\n"


def _cmd_scattering(args):
    cs, _ = _load_config(args.config)
    mats = _parallel_map(lambda xi: scattering_matrix(cs, xi), args.xi_grid)
    lines = ["xi_re,xi_im,t_minus_abs2,r_minus_abs2,unitarity_residual"]
    for xi, sm in zip(args.xi_grid, mats):
        lines.append(
            f"{_f(xi.real)},{_f(xi.imag)},{_f(abs(sm.t_minus) ** 2)},"
            f"{_f(abs(sm.r_minus) ** 2)},{_f(sm.unitarity_residual())}"
        )
    return "\n".join(lines) + "\n"


def _cmd_evolve(args):
    cs, psi0 = _load_config(args.config)
    psi0 = _default_psi0(psi0)
    traj = evolve(psi0, cs, args.T)
    lines = ["t,n,chirality,re,im"]
    for t, psi in enumerate(traj):
        if psi.is_zero():
            continue
        for row, n in enumerate(range(psi.support_lo, psi.support_hi + 1)):
            for slot, tag in ((0, "L"), (1, "R")):
                z = psi.amplitudes[row, slot]
                if z != 0:
                    lines.append(f"{t},{n},{tag},{_f(z.real)},{_f(z.imag)}")
    norms = survival_norm(traj, cs.n0)
    summary = ["t,survival_norm"]
    summary.extend(f"{t},{_f(v)}" for t, v in enumerate(norms))
    return "\n".join(lines) + "\n", "\n".join(summary) + "\n"


def _cmd_expand(args):
    cs, psi0 = _load_config(args.config)
    psi0 = _default_psi0(psi0)
    ed = expand(cs, psi0)
    zero_norm = float(np.linalg.norm(ed.zero_coefficients)) if ed.zero_coefficients else 0.0
    lines = ["{", f'  "nu": {ed.nu},', f'  "zero_part_index": {ed.zero_part_index},']
    block_rows = []
    for b in ed.blocks:
        coeffs = ", ".join(_pair(c) for c in b.coefficients)
        block_rows.append(
            f'    {{"xi": {_pair(b.resonance.xi)}, "lambda": {_pair(b.resonance.lam)}, '
            f'"multiplicity": {b.resonance.alg_multiplicity}, "coefficients": [{coeffs}]}}'
        )
    if block_rows:
        lines.append('  "blocks": [')
        lines.append(",\n".join(block_rows))
        lines.append("  ],")
    else:
        lines.append('  "blocks": [],')
    lines.append(f'  "zero_coefficient_norm": {_f(zero_norm)}')
    lines.append("}")
    return "\n".join(lines) + "\n"


def _cmd_survival(args):
    cs, psi0 = _load_config(args.config)
    psi0 = _default_psi0(psi0)
    traj = evolve(psi0, cs, args.T)
    norms = survival_norm(traj, cs.n0)
    csv_lines = ["t,survival_norm"]
    csv_lines.extend(f"{t},{_f(v)}" for t, v in enumerate(norms))
    csv_text = "\n".join(csv_lines) + "\n"
    if not args.fit:
        return csv_text
    nu = incoming_length(psi0, cs.n0)
    iota = nilpotency_index(build_K(cs).entries)
    m_rate, m_order, c_pref = decay_fit_full(norms, nu + iota + 5)
    fit_text = f"M_est,m_est,C_est\n{_f(m_rate)},{_f(m_order)},{_f(c_pref)}\n"
    return fit_text + "\n" + csv_text


def _cmd_resolvent_check(args):
    cs, psi0 = _load_config(args.config)
    f = _default_psi0(psi0)
    window = (-args.window, cs.n0 + args.window)
    rows = _parallel_map(lambda xi: identity_residual(cs, xi, f, window), args.xi_grid)
    lines = ["xi_re,xi_im,residual,condition"]
    for xi, (resid, cond) in zip(args.xi_grid, rows):
        lines.append(f"{_f(xi.real)},{_f(xi.imag)},{_f(resid)},{_f(cond)}")
    return "\n".join(lines) + "\n"


def _cmd_split(args):
    cs, _ = _load_config(args.config)
    pf = PerturbationFamily(cs, args.phi, tuple(sorted(args.eps)))
    rows = splitting_experiment(pf)
    slope = splitting_slope(rows)
    lines = ["eps,gap,slope_estimate"]
    for eps, gap, _mults in rows:
        lines.append(f"{_f(eps)},{_f(gap)},{_f(slope)}")
    return "\n".join(lines) + "\n"


# -------------------------------------------------------------- selftest


def _random_coin(rng):
    while True:
        m = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
        q, _ = np.linalg.qr(m)
        if abs(q[0, 0]) >= 0.1:
            return validate_coin(q)


def _random_sequence(rng, n0: int) -> CoinSequence:
    return CoinSequence(n0, tuple(_random_coin(rng) for _ in range(n0 + 1)))


def _hadamard_pair() -> CoinSequence:
    return CoinSequence(1, (hadamard_coin(), hadamard_coin()))


def _triple_barrier() -> CoinSequence:
    return CoinSequence(
        2, (rotation_coin(3 / 4), rotation_coin(12 / 13), rotation_coin(1 / 3))
    )


def _check(ok: bool, what: str):
    if not ok:
        raise InvariantViolation(f"selftest: {what}")


def _cmd_selftest(args):
    rng = np.random.default_rng(args.seed)
    lines = []

    for _ in range(25):
        c = _random_coin(rng)
        back = pqtheta_to_S(coin_to_pqtheta(c))
        _check(
            max(
                abs(back.a - c.a), abs(back.b - c.b), abs(back.c - c.c), abs(back.d - c.d)
            )
            < 1e-10,
            "(p, q, theta) round trip drifted",
        )
    lines.append("ok: coin parameterization round trip")

    r1, r2 = 0.3, 0.5
    prod = s_product(rotation_coin(r1), rotation_coin(r2))
    want = (r1 + r2) / (1 + r1 * r2)
    _check(abs(prod.b - want) < 1e-12, "rotation product is not velocity addition")
    lines.append("ok: hyperbolic product of rotations")

    for _ in range(50):
        cs = _random_sequence(rng, int(rng.integers(1, 5)))
        v = rng.normal(size=2 * (cs.n0 + 1)) + 1j * rng.normal(size=2 * (cs.n0 + 1))
        _check(norm_defect(cs, v) <= 1e-12 * np.linalg.norm(v) ** 2, "norm identity broke")
    lines.append("ok: window norm identity")

    for _ in range(10):
        cs = _random_sequence(rng, int(rng.integers(1, 5)))
        for _ in range(4):
            xi = rng.uniform(-np.pi, np.pi)
            _check(
                scattering_matrix(cs, xi).unitarity_residual() < 1e-10,
                "scattering matrix not unitary on the real line",
            )
    lines.append("ok: scattering unitarity at real xi")

    res = find_resonances(_hadamard_pair())
    _check(len(res) == 2, "Hadamard pair should have two resonances")
    _check(
        all(abs(abs(r.lam) - 2 ** -0.5) < 1e-12 for r in res),
        "Hadamard resonances off the closed form",
    )
    tp = transfer_polynomial(_triple_barrier())
    _check(
        np.max(np.abs(np.array(tp.coeffs) - np.array([0.25, 1.0, 1.0]))) < 1e-10,
        "triple barrier polynomial is not (mu + 1/2)^2",
    )
    lines.append("ok: worked examples (double and triple barrier)")

    for _ in range(5):
        cs = _random_sequence(rng, int(rng.integers(1, 4)))
        found = find_resonances(cs)
        for r in found:
            _check(
                validate_multiplicity(cs, r, others=found) == r.alg_multiplicity,
                "winding count disagrees with clustering",
            )
    lines.append("ok: winding counts match root multiplicities")

    for _ in range(5):
        cs = _random_sequence(rng, int(rng.integers(1, 4)))
        psi0 = basis_state(0, "L")
        ed = expand(cs, psi0)
        chains = [resonant_chain(cs, b.resonance, 30) for b in ed.blocks]
        t = ed.nu + ed.zero_part_index + 6
        window = (-(t - ed.nu), t + cs.n0 - ed.nu)
        got = reconstruct(ed, chains, t, window)
        true = evolve(psi0, cs, t)[-1].restrict(*window)
        _check(
            (got - true).norm() <= 1e-9 * max(true.norm(), 1e-30),
            "reconstruction drifted from the evolved state",
        )
    lines.append("ok: resonance expansion reconstructs the walk")

    for _ in range(5):
        cs = _random_sequence(rng, int(rng.integers(1, 4)))
        f = basis_state(0, "L") + 0.5 * basis_state(-1, "R")
        xi = complex(rng.uniform(-np.pi, np.pi), rng.uniform(0.5, 1.0))
        resid, _cond = identity_residual(cs, xi, f, (-8, cs.n0 + 8))
        _check(resid < 1e-10, "resolvent identity residual too large")
        direct = apply_resolvent(cs, xi, f, (-8, cs.n0 + 8))
        series = neumann_resolvent(cs, xi, f, (-8, cs.n0 + 8))
        _check((direct - series).norm() < 1e-8, "Neumann series disagrees")
    lines.append("ok: resolvent identity and Neumann series")

    rows = splitting_experiment(
        PerturbationFamily(_triple_barrier(), 0.0, (1e-4, 1e-3))
    )
    slope = splitting_slope(rows)
    _check(abs(slope - 0.5) < 0.1, f"splitting slope {slope} too far from 1/2")
    lines.append("ok: double resonance splits with exponent 1/2")

    lines.append("selftest passed")
    return "\n".join(lines) + "\n"


# ------------------------------------------------------------------ main


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qwres",
        description="Resonances and decay rates of finitely perturbed quantum walks.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, helptext, needs_config=True):
        p = sub.add_parser(name, help=helptext)
        if needs_config:
            p.add_argument("--config", required=True, help="JSON config path")
        p.add_argument("--out", help="write output here instead of stdout")
        return p

    add("validate", "parse and echo the config in canonical form")
    add("resonances", "all resonances as JSON")
    add("polynomial", "transfer polynomial coefficients as JSON")

    p = add("scattering", "scattering entries on a xi grid as CSV")
    p.add_argument(
        "--xi-grid",
        type=_parse_xi_grid,
        default=_parse_xi_grid("-3.141592653589793:3.141592653589793:25,0.0"),
        help="grid format re0:re1:n,im",
    )

    p = add("evolve", "trajectory CSV plus survival-norm summary CSV")
    p.add_argument("--T", type=int, default=60, help="number of steps")

    add("expand", "resonance expansion coefficients as JSON")

    p = add("survival", "survival-norm CSV, optionally with a decay fit")
    p.add_argument("--T", type=int, default=60, help="number of steps")
    p.add_argument("--fit", action="store_true", help="prepend (M_est, m_est, C_est)")

    p = add("resolvent-check", "resolvent identity residuals on a xi grid as CSV")
    p.add_argument(
        "--xi-grid",
        type=_parse_xi_grid,
        default=_parse_xi_grid("-3.141592653589793:3.141592653589793:25,1.0"),
        help="grid format re0:re1:n,im",
    )
    p.add_argument("--window", type=int, default=10, help="window half-width")

    p = add("split", "resonance splitting under perturbation as CSV")
    p.add_argument(
        "--eps", type=_parse_eps_list, default=[1e-3, 1e-4, 1e-5], help="comma list"
    )
    p.add_argument("--phi", type=float, default=0.0, help="perturbation direction")

    p = add("selftest", "run the invariant battery", needs_config=False)
    p.add_argument("--seed", type=int, default=20240901, help="sweep seed")

    return parser


_COMMANDS = {
    "validate": _cmd_validate,
    "resonances": _cmd_resonances,
    "polynomial": _cmd_polynomial,
    "scattering": _cmd_scattering,
    "evolve": _cmd_evolve,
    "expand": _cmd_expand,
    "survival": _cmd_survival,
    "resolvent-check": _cmd_resolvent_check,
    "split": _cmd_split,
    "selftest": _cmd_selftest,
}


def _summary_path(out: str) -> Path:
    path = Path(out)
    if path.suffix == ".csv":
        return path.with_suffix(".summary.csv")
    return Path(str(path) + ".summary")


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        result = _COMMANDS[args.command](args)
    except QWResError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return exc.exit_code
    if isinstance(result, tuple):
        body, summary = result
        if args.out:
            Path(args.out).write_text(body, encoding="utf-8")
            _summary_path(args.out).write_text(summary, encoding="utf-8")
        else:
            sys.stdout.write(body + "\n" + summary)
    elif args.out:
        Path(args.out).write_text(result, encoding="utf-8")
    else:
        sys.stdout.write(result)
    return 0


if __name__ == "__main__":
    sys.exit(main())
