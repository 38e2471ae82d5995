"""
``phaseless`` command line.

Subcommands
-----------
build        construct a counterexample pair and dump it
verify       check spectrogram equality and the non-equivalence certificate
grid         export a Q_x grid as CSV (and optionally a contour PNG)
repro        run a built-in reproduction (example-i, example-ii, pauli, real-sign, rational)
lattice-info describe a lattice

Exit codes: 0 pass, 1 verification failure, 2 config or hypothesis error.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import math
import sys
import time
from pathlib import Path

import numpy as np
from scipy.stats import qmc

from . import atoms, config, factory
from .config import ConfigError, RunConfig
from .factory import HypothesisError
from .lattice import (
    Lattice,
    classify_all,
    density,
    enumerate_points,
    reciprocal,
    shortest_nonzero,
    sl2_normalize,
)
from .metaplectic import word_for_sl2
from .sampled import numeric_pair, stft_numeric
from .sequences import CoeffSeq, is_on_line, synthesize
from .verify import (
    GridSpec,
    check_equality_on_set,
    is_real_on_grid,
    modulus_equal_on_grid,
    phase_distance,
    probe_grid,
    qx_grid,
    qx_points,
)

EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2


# -- output helpers ------------------------------------------------------------------


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        if not math.isfinite(v):
            return repr(v)
        return v
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    return obj


def dumps(report: dict) -> str:
    """Deterministic JSON; floats use the shortest round-trip representation."""
    return json.dumps(_jsonable(report), indent=2, sort_keys=True) + "\n"


def _write(out: Path, name: str, text: str) -> Path:
    out.mkdir(parents=True, exist_ok=True)
    path = out / name
    path.write_text(text)
    return path


# -- pair construction -----------------------------------------------------------------


def _apply_shifts(sc, f):
    if isinstance(sc, factory.Shifted):
        f = _apply_shifts(sc.base, f)
        d = f.dim
        p = np.asarray(sc.p, float).reshape(2 * d)
        return atoms.modulate(atoms.translate(f, p[:d]), p[d:])
    return f


def build_pair(cfg: RunConfig) -> factory.CounterexamplePair:
    """Factory build honoring the config's sequence and partner overrides."""
    cfg.require("window", "scenario")
    pair = factory.build(cfg.scenario, cfg.window, cfg.sequence)
    if cfg.partner_mode == "identical":
        pair = dataclasses.replace(pair, f2=pair.f1)
    if cfg.perturbation:
        extra = synthesize(CoeffSeq(pair.sequence.lattice, cfg.perturbation), pair.word, atoms.reflect(pair.window))
        pair = dataclasses.replace(pair, f2=pair.f2 + _apply_shifts(cfg.scenario, extra))
    if cfg.partner_mode == "identical" or cfg.perturbation:
        cert = dataclasses.replace(pair.certificate, phase_distance=phase_distance(pair.f1, pair.f2))
        pair = dataclasses.replace(pair, certificate=cert)
    return pair


def _pair_summary(cfg: RunConfig, pair) -> dict:
    return {
        "name": cfg.raw.get("name"),
        "note": cfg.raw.get("note"),
        "scenario": cfg.raw["scenario"],
        "window": cfg.raw["window"],
        "partner": cfg.partner_mode,
        "certificate": pair.certificate.to_dict(),
        "equality_set": pair.equality_set.to_dict(),
        "word": pair.word.to_list(),
        "sequence": {
            "shift_lattice": pair.sequence.lattice.gen,
            "entries": [{"index": list(k), "value": c} for k, c in pair.sequence.entries.items()],
        },
    }


# -- commands ----------------------------------------------------------------------------


def cmd_build(cfg: RunConfig, out: Path) -> tuple[int, dict]:
    if cfg.sampled:
        raise ConfigError("build dumps atom sums; sampled windows are supported by 'verify' only")
    pair = build_pair(cfg)
    report = {"command": "build", **_pair_summary(cfg, pair)}
    report["f1"] = config.atom_sum_to_dict(pair.f1)
    report["f2"] = config.atom_sum_to_dict(pair.f2)
    _write(out, cfg.outputs["report"], dumps(report))
    return EXIT_OK, report


def _verify_atoms(cfg: RunConfig) -> dict:
    v = cfg.verification
    pair = build_pair(cfg)
    if "explicit_points" in v:
        pts = np.asarray(v["explicit_points"], dtype=float)
        if pts.shape[1] != 2 * pair.window.dim:
            raise ConfigError(f"explicit points need {2 * pair.window.dim} coordinates")
    else:
        pts = factory.equality_points(pair, v["points"], v["radius"], seed=v["seed"])
    eq = check_equality_on_set(pair, pts, v["tol"])
    cert = pair.certificate
    phase_ok = cert.phase_distance >= v["phase_min_rel"] * cert.norm_sq_sum
    checks = {
        "spectrogram_equality": eq.passed,
        "non_equivalence": bool(phase_ok),
    }
    extras = {}
    if v["off_set_probes"]:
        rels = [check_equality_on_set(pair, [p]).max_rel_diff for p in v["off_set_probes"]]
        extras["off_set_rel_diffs"] = rels
        checks["off_set_difference"] = bool(max(rels) > v["off_set_min_rel"])
    base = cfg.scenario.base if isinstance(cfg.scenario, factory.Shifted) else cfg.scenario
    if isinstance(base, factory.PauliSeparable):
        grid = probe_grid(pair.f1, num=41)
        checks["modulus_equality"] = modulus_equal_on_grid(pair.f1, pair.f2, grid, v["modulus_tol"])
    if isinstance(base, factory.RealSign):
        grid = probe_grid(pair.f1)
        checks["real_valued"] = is_real_on_grid(pair.f1, grid, v["real_tol"]) and is_real_on_grid(
            pair.f2, grid, v["real_tol"]
        )
    return {
        **_pair_summary(cfg, pair),
        "path": "closed-form",
        "equality": eq.to_dict(),
        "extras": extras,
        "checks": checks,
    }


def _verify_sampled(cfg: RunConfig) -> dict:
    """Numeric-grid path: identity word, semi-discrete sets, grid-aligned shifts."""
    sc, g, v = cfg.scenario, cfg.window, cfg.verification
    if not isinstance(sc, factory.SemiDiscrete) or len(sc.word):
        raise ConfigError("sampled windows support only semi-discrete scenarios with the identity word")
    shift_lat = reciprocal(sc.lattice)
    seq = factory.default_sequence(shift_lat) if cfg.sequence is None else CoeffSeq(shift_lat, cfg.sequence)
    if is_on_line(seq):
        raise HypothesisError("coefficients off every line through the origin (ell^2_O)")
    try:
        f1, f2 = numeric_pair(seq, g)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    d, h = g.dim, g.step
    nodes = enumerate_points(sc.lattice, v["radius"])
    order = np.argsort(np.round(np.linalg.norm(nodes, axis=1), 12), kind="stable")
    nodes = nodes[order][: v["points"]]
    free = (2 * qmc.Halton(d, scramble=True, seed=v["seed"]).random(v["points"]) - 1) * v["radius"]
    free = np.round(free / h) * h
    s1, s2 = [], []
    for x, w in zip(free, nodes[np.arange(v["points"]) % len(nodes)]):
        s1.append(abs(stft_numeric(f1, g, x, [w])[0]))
        s2.append(abs(stft_numeric(f2, g, x, [w])[0]))
    s1, s2 = np.array(s1), np.array(s2)
    diff = np.abs(s1 - s2)
    scale = float(max(s1.max(), s2.max()))
    rel = float(diff.max() / scale) if scale > 0 else float(diff.max())
    hd = h**d
    n1 = hd * np.sum(np.abs(f1.values) ** 2)
    n2 = hd * np.sum(np.abs(f2.values) ** 2)
    cross = abs(hd * np.sum(f1.values * np.conj(f2.values)))
    pd = float(max(n1 + n2 - 2 * cross, 0.0))
    return {
        "name": cfg.raw.get("name"),
        "scenario": cfg.raw["scenario"],
        "window": cfg.raw["window"],
        "path": "sampled",
        "equality": {
            "n_points": int(len(s1)),
            "max_abs_diff": float(diff.max()),
            "max_rel_diff": rel,
            "reference_scale": scale,
            "tol": v["tol"],
            "passed": rel <= v["tol"],
        },
        "certificate": {"phase_distance": pd, "norm_sq_sum": float(n1 + n2), "seq_in_l2O": True},
        "checks": {"spectrogram_equality": rel <= v["tol"], "non_equivalence": pd >= v["phase_min_rel"] * (n1 + n2)},
    }


def cmd_verify(cfg: RunConfig, out: Path) -> tuple[int, dict]:
    cfg.require("window", "scenario")
    body = _verify_sampled(cfg) if cfg.sampled else _verify_atoms(cfg)
    passed = all(body["checks"].values())
    report = {"command": "verify", "passed": passed, **body}
    _write(out, cfg.outputs["report"], dumps(report))
    return (EXIT_OK if passed else EXIT_FAIL), report


def _grid_nodes(pair, spec: GridSpec) -> np.ndarray | None:
    """Frequency nodes of the equality set at every time slice, if that is a lattice."""
    eq = pair.equality_set
    if eq.kind != "semi-discrete" or not np.allclose(eq.transform, np.eye(len(eq.transform))):
        return None
    d = eq.lattice.dim
    lo, hi = np.array(spec.start, float), np.array(spec.stop, float)
    p = eq.shift[d:]
    radius = float(np.linalg.norm(np.maximum(np.abs(lo - p), np.abs(hi - p)))) + 1e-9
    nodes = enumerate_points(eq.lattice, radius) + p
    inside = np.all((nodes >= lo - 1e-12) & (nodes <= hi + 1e-12), axis=1)
    return nodes[inside]


def grid_csv(spec: GridSpec, Q: np.ndarray) -> str:
    pts = spec.points()
    cols = [f"omega{j + 1}" for j in range(spec.dim)] + ["Q"]
    lines = [",".join(cols)]
    for w, q in zip(pts, Q.ravel()):
        lines.append(",".join(repr(float(v)) for v in (*w, q)))
    return "\n".join(lines) + "\n"


def _render_png(path: Path, spec: GridSpec, Q: np.ndarray, nodes, title: str):
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    w1, w2 = spec.axes()
    fig, ax = plt.subplots(figsize=(5, 4.4))
    cs = ax.contourf(w1, w2, Q.T, levels=30)
    fig.colorbar(cs, ax=ax)
    if nodes is not None and len(nodes):
        ax.plot(nodes[:, 0], nodes[:, 1], "o", color="white", ms=3)
    ax.set_xlabel(r"$\omega_1$")
    ax.set_ylabel(r"$\omega_2$")
    ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=120, metadata={"Software": None})
    plt.close(fig)


def cmd_grid(cfg: RunConfig, out: Path, png: bool = False) -> tuple[int, dict]:
    cfg.require("window", "scenario", "grid")
    if cfg.sampled:
        raise ConfigError("grid export needs a closed-form window")
    pair = build_pair(cfg)
    gs = cfg.grid
    spec = GridSpec(tuple(gs["omega_start"]), tuple(gs["omega_stop"]), tuple(gs["num"]))
    t0 = time.perf_counter()
    Q = qx_grid(pair, gs["x"], spec)
    elapsed = time.perf_counter() - t0
    nodes = _grid_nodes(pair, spec)
    qmax = float(Q.max())
    node_tol = gs.get("node_tol", 1e-10)
    report = {
        "command": "grid",
        "name": cfg.raw.get("name"),
        "x": gs["x"],
        "shape": list(Q.shape),
        "q_max": qmax,
        "csv": cfg.outputs["grid_csv"],
    }
    passed = True
    if nodes is not None:
        qn = qx_points(pair, gs["x"], nodes) if len(nodes) else np.zeros(0)
        ratio = float(qn.max() / qmax) if len(qn) and qmax > 0 else 0.0
        passed = ratio <= node_tol
        report["nodes"] = {"count": int(len(nodes)), "max_ratio": ratio, "tol": node_tol, "passed": passed}
    else:
        report["nodes"] = None
    report["passed"] = passed
    _write(out, cfg.outputs["grid_csv"], grid_csv(spec, Q))
    if png:
        if spec.dim != 2:
            print("warning: contour PNG needs d = 2; skipped", file=sys.stderr)
        else:
            try:
                _render_png(out / cfg.outputs["png"], spec, Q, nodes, f"$Q_x$ at x = {gs['x']}")
                report["png"] = cfg.outputs["png"]
            except ImportError:
                print("warning: matplotlib not installed; PNG skipped", file=sys.stderr)
    _write(out, cfg.outputs["report"], dumps(report))
    report["elapsed_s"] = elapsed
    return (EXIT_OK if passed else EXIT_FAIL), report


def cmd_lattice_info(cfg: RunConfig, out: Path) -> tuple[int, dict]:
    if cfg.lattice is not None:
        lat = cfg.lattice
    elif cfg.scenario is not None:
        lat = factory.build(cfg.scenario, cfg.window, cfg.sequence).equality_set.lattice
    else:
        raise ConfigError("lattice-info needs a 'lattice' matrix or a scenario")
    point, index = shortest_nonzero(lat)
    report = {
        "command": "lattice-info",
        "generator": lat.gen,
        "dim": lat.dim,
        "determinant": float(np.linalg.det(lat.gen)),
        "density": density(lat),
        "reciprocal": reciprocal(lat).gen,
        "classes": [c.name for c in classify_all(lat)],
        "shortest_nonzero": {"point": point, "index": index},
    }
    if lat.dim == 2:
        alpha, S = sl2_normalize(lat.gen)
        report["sl2"] = {"alpha": alpha, "S": S, "word": word_for_sl2(S).to_list()}
    _write(out, cfg.outputs["report"], dumps(report))
    return EXIT_OK, report


# -- built-in reproductions ----------------------------------------------------------------


def _entry(index, value) -> dict:
    return {"index": list(index), "value": [float(np.real(value)), float(np.imag(value))]}


def builtin_configs(name: str) -> list[dict]:
    """Configs run by ``repro``; each may carry a ``grid`` section."""
    gauss2 = {"gaussian": {"dim": 2, "exponent": 1.0}}
    if name == "example-i":
        return [
            {
                "name": "example-i",
                "note": "shift lattice 8Z^2 with shifts (0,0), (8,0), (0,8); the unit shifts "
                "(1,0), (0,1) are not points of 8Z^2",
                "window": gauss2,
                "scenario": {"type": "semi-discrete", "lattice": [[0.125, 0.0], [0.0, 0.125]]},
                "sequence": [_entry((0, 0), 1), _entry((1, 0), 1j), _entry((0, 1), 1 + 1j)],
                "verification": {
                    "points": 50,
                    "radius": 10.0,
                    "off_set_probes": [[4.0, 0.0, 0.0625, 0.0], [4.0, 4.0, 0.0625, 0.0625]],
                },
                "grid": {"x": [4.0, 0.0], "omega_start": [-1, -1], "omega_stop": [1, 1], "num": [201, 201]},
            }
        ]
    if name == "example-ii":
        B = 5 * np.array([[1.0, 0.0], [-1 / math.sqrt(3), 2 / math.sqrt(3)]])
        a, b = B[:, 0], B[:, 1]
        x = ((a + b) / 2).tolist()
        seq = [_entry((0, 0), 1), _entry((1, 0), 1j), _entry((0, 1), 1 + 1j)]
        out = []
        for label, s in (("f2", seq), ("f3", seq + [_entry((1, 1), 0.5 + 0.5j)])):
            out.append(
                {
                    "name": f"example-ii-{label}",
                    "window": gauss2,
                    "scenario": {"type": "semi-discrete", "shift_lattice": B.tolist()},
                    "sequence": s,
                    "verification": {"points": 50, "radius": 10.0},
                    "grid": {"x": x, "omega_start": [-1, -1], "omega_stop": [1, 1], "num": [201, 201]},
                    "outputs": {"report": f"verify-{label}.json", "grid_csv": f"qx-{label}.csv", "png": f"qx-{label}.png"},
                }
            )
        return out
    if name == "pauli":
        return [
            {
                "name": "pauli",
                "window": gauss2,
                "scenario": {"type": "pauli", "A": [[1, 0], [0, 1]], "B": [[0.25, 0], [0, 0.25]]},
                "verification": {"points": 50, "radius": 3.0},
            }
        ]
    if name == "real-sign":
        return [
            {
                "name": "real-sign",
                "window": gauss2,
                "scenario": {"type": "real-sign", "lattice": [[0.25, 0], [0, 0.25]]},
                "verification": {"points": 50, "radius": 3.0},
            }
        ]
    if name == "rational":
        return [
            {
                "name": "rational",
                "window": {"gaussian": {"dim": 1, "exponent": 1.0}},
                "scenario": {"type": "rational", "L": [["1/2", "1/3"], [0, "1/5"]]},
                "verification": {"points": 50, "radius": 3.0},
            }
        ]
    raise ConfigError(f"unknown reproduction {name!r}")


REPRO_NAMES = ("example-i", "example-ii", "pauli", "real-sign", "rational")


def cmd_repro(name: str, out: Path, png: bool = False, tol: float | None = None) -> tuple[int, dict]:
    results = []
    ok = True
    for raw in builtin_configs(name):
        cfg = config.parse(raw, tol)
        sub = out / name
        code, rep = cmd_verify(cfg, sub)
        entry = {"name": raw["name"], "verify": rep}
        ok &= code == EXIT_OK
        if cfg.grid is not None:
            grid_cfg = dataclasses.replace(cfg, outputs={**cfg.outputs, "report": "grid-" + cfg.outputs["report"]})
            gcode, grep = cmd_grid(grid_cfg, sub, png)
            grep.pop("elapsed_s", None)
            entry["grid"] = grep
            ok &= gcode == EXIT_OK
        results.append(entry)
    report = {"command": "repro", "name": name, "passed": bool(ok), "runs": results}
    _write(out / name, "repro.json", dumps(report))
    return (EXIT_OK if ok else EXIT_FAIL), report


# -- entry point ------------------------------------------------------------------------------


def make_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", type=Path, default=Path("phaseless-out"), help="output directory")
    common.add_argument("--tol", type=float, default=None, help="override the relative equality tolerance")
    common.add_argument("--png", action="store_true", help="also render contour plots (needs matplotlib)")

    parser = argparse.ArgumentParser(prog="phaseless", description=__doc__.split("\n\n")[0].strip())
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_ in (
        ("build", "construct a counterexample pair"),
        ("verify", "verify spectrogram equality and non-equivalence"),
        ("grid", "export a Q_x grid"),
        ("lattice-info", "describe a lattice"),
    ):
        p = sub.add_parser(name, parents=[common], help=help_)
        p.add_argument("--config", type=Path, required=True, help="JSON run config")
    p = sub.add_parser("repro", parents=[common], help="run a built-in reproduction")
    p.add_argument("name", choices=REPRO_NAMES)
    return parser


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    try:
        if args.command == "repro":
            code, report = cmd_repro(args.name, args.out, args.png, args.tol)
        else:
            cfg = config.load(args.config, args.tol)
            if args.command == "build":
                code, report = cmd_build(cfg, args.out)
            elif args.command == "verify":
                code, report = cmd_verify(cfg, args.out)
            elif args.command == "grid":
                code, report = cmd_grid(cfg, args.out, args.png)
            else:
                code, report = cmd_lattice_info(cfg, args.out)
    except HypothesisError as exc:
        print(f"hypothesis violated: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    status = "PASS" if code == EXIT_OK else "FAIL"
    print(f"{args.command}: {status} (reports under {args.out})")
    return code


if __name__ == "__main__":
    sys.exit(main())
