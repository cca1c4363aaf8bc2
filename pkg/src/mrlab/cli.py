"""Command-line front end: ``mrlab <command> [options]``.

Every command writes a JSON report (schema ``mrlab/1``) to ``--out DIR``
or prints it to stdout. Options can also come from ``--config FILE``, a
flat ``key = value`` file whose keys are the long option names; explicit
flags win over the file.
"""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

import numpy as np

from . import besov as bv
from . import interpnorms as ip
from . import mrtest as mr
from . import weightlab as wl
from .calculus import DiagonalOperator, GridField, HeatModel, RadialProfile, radial_lp_norm
from .quadrature import InvalidSpecError, QuadratureSpec
from .reporting import dumps, write_csv, write_json

# fallback values for options that may come from the config file
_DEFAULTS = {
    "t_min": None, "t_max": None, "nodes": None, "rel_tol": 1e-3,
    "out": None, "model": "heat1d", "theta": 0.5, "q": "1", "mu": 0.5,
    "weight": "power", "certificate": None, "seed": 0, "family": "power",
    "eps": 1.0, "p": "1", "compare": None, "source": "thermic", "tau": 1.0,
    "steps": 200, "forcing": "const", "points": None, "box": 40.0,
}


class ConfigError(ValueError):
    pass


def read_config(path) -> dict:
    out = {}
    for ln, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{ln}: expected key = value")
        key, val = (s.strip() for s in line.split("=", 1))
        key = key.lstrip("-").replace("-", "_")
        if key not in _DEFAULTS:
            raise ConfigError(f"{path}:{ln}: unknown key {key!r}")
        out[key] = val
    return out


def _num(text, name) -> float:
    if isinstance(text, (int, float)):
        return float(text)
    t = str(text).strip().lower()
    if t in ("inf", "infinity"):
        return math.inf
    try:
        return float(t)
    except ValueError:
        raise ConfigError(f"{name}: not a number: {text!r}") from None


def resolve(args: argparse.Namespace) -> argparse.Namespace:
    """Merge config-file values and defaults into the parsed flags."""
    cfg = read_config(args.config) if getattr(args, "config", None) else {}
    args.theta_given = getattr(args, "theta", None) is not None or "theta" in cfg
    for key, default in _DEFAULTS.items():
        if getattr(args, key, None) is None:
            setattr(args, key, cfg.get(key, default))
    return args


def quadrature_from(args, base: QuadratureSpec) -> QuadratureSpec:
    try:
        return QuadratureSpec(
            _num(args.t_min, "t-min") if args.t_min is not None else base.t_min,
            _num(args.t_max, "t-max") if args.t_max is not None else base.t_max,
            int(_num(args.nodes, "nodes")) if args.nodes is not None else base.n_nodes,
            rel_tol=_num(args.rel_tol, "rel-tol"),
        )
    except InvalidSpecError as exc:
        raise ConfigError(str(exc)) from None


def parse_model(text: str, ambient: str = "l1"):
    if text.startswith("diag:"):
        try:
            spec = [float(v) for v in text[5:].split(",") if v.strip()]
            return DiagonalOperator(np.array(spec), ambient)
        except ValueError as exc:
            raise ConfigError(f"bad diagonal model {text!r}: {exc}") from None
    if text in ("heat1d", "heat2d"):
        return HeatModel(1 if text == "heat1d" else 2)
    raise ConfigError(f"unknown model {text!r}")


def parse_weight(text: str, theta: float) -> wl.FunctionOnHalfLine:
    if text == "power":
        return wl.FunctionOnHalfLine.power(-theta)
    if text == "exp":
        return wl.FunctionOnHalfLine.exponential()
    if text == "const":
        return wl.FunctionOnHalfLine.constant()
    if text.startswith("sampled:"):
        return wl.FunctionOnHalfLine.from_csv(text.split(":", 1)[1])
    raise ConfigError(f"unknown weight {text!r}")


def _certificates(model, spec, seed):
    if spec in (None, "all"):
        if isinstance(model, DiagonalOperator) or spec == "all":
            return mr.certificate_family(model, seed)
        spec = "gaussian"
    return [(spec, mr.certificate(model, spec, seed))]


def _emit(args, name: str, payload: dict) -> None:
    if args.out:
        path = write_json(Path(args.out) / f"{name}.json", payload)
        print(path)
    else:
        sys.stdout.write(dumps(payload))


# ---------------------------------------------------------------------------
# commands

_FAMILIES = ("power", "const", "exp", "capped_power", "sampled")


def cmd_certify_weight(args) -> int:
    q = quadrature_from(args, QuadratureSpec())
    fam = args.family
    mu = _num(args.mu, "mu")
    if fam == "power":
        w = wl.FunctionOnHalfLine.power(-mu)
    elif fam == "const":
        w = wl.FunctionOnHalfLine.constant()
    elif fam == "exp":
        w = wl.FunctionOnHalfLine.exponential()
    elif fam == "capped_power":
        w = wl.FunctionOnHalfLine.capped_power(mu)
    elif fam == "sampled":
        if not str(args.weight).startswith("sampled:"):
            raise ConfigError("--family sampled needs --weight sampled:<path>")
        w = parse_weight(args.weight, 0.0)
    else:
        raise ConfigError(f"unknown family {fam!r}")
    checks = {
        "P_L1": wl.bound_P_L1, "Q_L1": wl.bound_Q_L1,
        "P_Linf": wl.bound_P_Linf, "Q_Linf": wl.bound_Q_Linf,
        "calderon_L1": wl.calderon_bound_L1, "calderon_Linf": wl.calderon_bound_Linf,
    }
    reports = {k: fn(w, q).to_dict() for k, fn in checks.items()}
    main = reports["calderon_L1"]
    _emit(args, "certify-weight", {
        "command": "certify-weight", "weight": w.describe(), "reports": reports,
        "constant": main["constant"], "verdict": main["verdict"], "quadrature": q.to_dict()})
    return 0


def cmd_mr_test(args) -> int:
    ambient = "linf" if args.test == "linf" else "l1"
    model = parse_model(args.model, ambient)
    q = quadrature_from(args, mr._default_quadrature(model))
    certs = _certificates(model, args.certificate, int(args.seed))
    theta = _num(args.theta, "theta")
    rows, reports = [], []
    for label, x in certs:
        if args.test == "kp":
            rep = mr.kp_l1_test(model, x, q)
        elif args.test == "weighted":
            rep = mr.weighted_l1_test(model, x, parse_weight(args.weight, theta), q=q)
        elif args.test == "linf":
            rep = mr.linf_test(model, x, q)
        elif args.test == "resolvent":
            rep = mr.resolvent_l1_test(model, x, q)
        else:
            rep = mr.gamma_l1_test(model, x, _num(args.eps, "eps"), q)
        reports.append((label, rep))
        rows.append((label, rep.constant))
    worst = max(reports, key=lambda lr: lr[1].constant if not math.isnan(lr[1].constant) else -1)
    body = worst[1].to_dict()
    body.update({"command": "mr-test", "certificates": [
        {"certificate": lab, "value": r.constant, "verdict": r.verdict,
         "growth": r.growth.to_dict() if r.growth else None} for lab, r in reports],
        "argmax_certificate": worst[0]})
    if args.test == "weighted":
        body["weight"] = parse_weight(args.weight, theta).describe()
    _emit(args, f"mr-test-{args.test}", body)
    if args.out:
        path = Path(args.out) / f"mr-test-{args.test}-sweep.csv"
        path.write_text("certificate,value\n" + "".join(f"{lab},{v:.12g}\n" for lab, v in rows))
    return 0


def _field_for(args, n: int = 1):
    points = int(_num(args.points, "points")) if args.points is not None else None
    box = _num(args.box, "box")
    spec = args.certificate or "gaussian"
    if spec == "family":
        return bv.test_family(n, box, points or 4096)
    model = HeatModel(n, box, points)
    return [(spec, mr.certificate(model, spec, int(args.seed)))]


def cmd_besov(args) -> int:
    theta = _num(args.theta, "theta")
    p, qa = _num(args.p, "p"), _num(args.q, "q")
    spec = bv.BesovSpec(2 * theta, p, qa, True)
    quad = quadrature_from(args, QuadratureSpec(1e-5, 1e6, 512))
    items = []
    for label, f in _field_for(args):
        res = bv.besov_norm(f, spec, rel_tol=quad.rel_tol)
        entry = {"certificate": label, "besov": res.to_dict(spec)}
        if args.compare == "thermic":
            th = bv.thermic_norm(f, theta, p, qa, quad)
            entry["thermic"] = th.to_dict()
            entry["ratio"] = th.value / res.value if res.value else math.nan
        items.append(entry)
    body = {"command": "besov", "spec": {"s": spec.s, "p": p, "q": qa}, "items": items}
    if args.compare == "thermic":
        ratios = [e["ratio"] for e in items]
        body["ratio_bracket"] = [min(ratios), max(ratios)]
    _emit(args, "besov", body)
    return 0


def cmd_kfunctional(args) -> int:
    model = parse_model(args.model)
    spec = args.certificate or ("gaussian" if isinstance(model, HeatModel) else "ones")
    x = mr.certificate(model, spec, int(args.seed))
    q = quadrature_from(args, QuadratureSpec(1e-4, 1e4, 256))
    nodes = q.nodes
    if args.source == "thermic":
        curve = ip.k_thermic_curve(model, x, nodes, q)
    elif args.source == "modulus":
        curve = ip.k_modulus_curve(model, x, nodes)
    elif args.source == "smoothness2":
        if not isinstance(model, HeatModel):
            raise ConfigError("smoothness2 needs a heat model")
        curve = ip.smoothness2_curve(x, nodes)
    else:
        raise ConfigError(f"unknown source {args.source!r}")
    phi = ip.power_L(_num(args.theta, "theta"), _num(args.q, "q"))
    body = {"command": "kfunctional", "source": curve.source, "certificate": spec,
            "kphi_norm": ip.kphi_norm(curve, phi), **phi.describe(), "quadrature": q.to_dict()}
    _emit(args, "kfunctional", body)
    if args.out:
        curve.to_csv(Path(args.out) / "kfunctional-curve.csv")
    return 0


def cmd_solve(args) -> int:
    model = parse_model(args.model)
    tau = _num(args.tau, "tau")
    steps = int(_num(args.steps, "steps"))
    nodes = np.linspace(0.0, tau, steps + 1)
    spec = args.certificate or ("gaussian" if isinstance(model, HeatModel) else "ones")
    x = mr.certificate(model, spec, int(args.seed))
    base = x.values if isinstance(x, GridField) else np.asarray(x, dtype=float)
    shape = {"const": lambda t: 1.0, "exp": lambda t: math.exp(-t), "zero": lambda t: 0.0}
    if args.forcing not in shape:
        raise ConfigError(f"unknown forcing {args.forcing!r}")
    fn = shape[args.forcing]
    vals = np.array([fn(t) * base for t in nodes])
    like = x if isinstance(x, GridField) else None
    f = mr.TimeSampledPath(nodes, vals, "linear", like)
    u = mr.solution_operator(model, f)
    resid = mr.residual_check(model, u, f) if steps >= 2 else math.nan
    rep = mr.mre_ratio(model, f)
    body = {"command": "solve", "forcing": args.forcing, "certificate": spec, "tau": tau,
            "steps": steps, "residual": resid, "mre": rep.to_dict()}
    _emit(args, "solve", body)
    if args.out:
        norms = mr._path_norms(model, u.values, like, None)
        write_csv(Path(args.out) / "solve-u-norm.csv", "t,u_norm", [nodes, norms])
    return 0


# ---------------------------------------------------------------------------
# reproduce presets

def _claim(name, expected, computed, tol, extra=None) -> dict:
    if isinstance(expected, str):
        ok = computed == expected
        rel = 0.0 if ok else math.inf
    else:
        rel = abs(computed - expected) / abs(expected) if math.isfinite(computed) else math.inf
        ok = rel <= tol
    out = {"claim": name, "expected": expected, "computed": computed, "rel_error": rel,
           "tolerance": tol, "pass": bool(ok)}
    if extra:
        out.update(extra)
    return out


def preset_powers(args) -> list[dict]:
    q = quadrature_from(args, QuadratureSpec())
    claims = []
    for mu in (0.1, 0.2, 0.25, 0.3, 0.5, 0.7, 0.75, 0.8, 0.9):
        rep = wl.calderon_bound_L1(wl.FunctionOnHalfLine.power(-mu), q)
        claims.append(_claim(f"calderon-power-mu{mu:g}", math.pi / math.sin(math.pi * mu),
                             rep.constant_estimate, 0.01, {"verdict": rep.verdict}))
    return claims


def preset_laplacian(args) -> list[dict]:
    claims = []
    for n in (1, 2):
        model = HeatModel(n)
        q = quadrature_from(args, QuadratureSpec(1e-5, 1e6, 512))
        rep = mr.kp_l1_test(model, model.gaussian(), q)
        oracle = radial_lp_norm(1, RadialProfile.gaussian_heat(n, 0.0), "laplacian")
        claims.append(_claim(f"laplacian-l1-log-slope-n{n}", oracle, rep.growth.slope, 0.02,
                             {"growth": rep.growth.to_dict()}))
        claims.append(_claim(f"laplacian-l1-growth-n{n}", "log", rep.growth.tag, 0.0))
    return claims


def preset_remark(args) -> list[dict]:
    thetas = [_num(args.theta, "theta")] if args.theta_given else [0.25, 0.5, 0.75]
    claims = []
    single = None
    for th in thetas:
        out = mr.remark_example_integrals(th)
        exp = 4 * math.exp(-0.5) * math.pi / (math.sin(math.pi * th) * 2 * th)
        claims.append(_claim(f"remark-double-theta{th:g}", exp, out["double"], 0.02))
        single = out["single_growth"]
    claims.append(_claim("remark-single-log-slope", math.sqrt(2 * math.pi), single.slope, 0.02,
                         {"growth": single.to_dict()}))
    return claims


def preset_exp_weight(args) -> list[dict]:
    claims = []
    for spec in ((1.0, 2.0, 4.0), (0.5, 3.0), (10.0,)):
        model = DiagonalOperator(np.array(spec))
        best = max(mr.weighted_l1_test(model, x, wl.FunctionOnHalfLine.exponential()).constant
                   for _, x in mr.certificate_family(model))
        exp = max(a / (a + 1) for a in spec)
        claims.append(_claim("exp-weight-" + "-".join(f"{a:g}" for a in spec), exp, best, 1e-4))
    return claims


def preset_resolvent(args) -> list[dict]:
    claims = []
    for spec in ((1.0,), (2.0,), (0.5, 4.0)):
        model = DiagonalOperator(np.array(spec))
        for label, x in mr.certificate_family(model):
            g = mr.resolvent_l1_test(model, x).growth
            claims.append(_claim(f"resolvent-slope-{args_label(spec)}-{label}", 1.0, g.slope, 0.02,
                                 {"growth": g.to_dict()}))
    return claims


def args_label(spec) -> str:
    return "diag" + "-".join(f"{a:g}" for a in spec)


def preset_besov(args) -> list[dict]:
    brackets = []
    for N in (4096, 8192):
        fam = [f for _, f in bv.test_family(1, 40.0, N)]
        lo, hi, _ = bv.ratio_bracket(fam)
        brackets.append((lo, hi))
    (l0, h0), (l1, h1) = brackets
    drift = max(abs(l1 - l0) / l0, abs(h1 - h0) / h0)
    claims = [_claim("besov-thermic-bracket-drift", 0.0, drift, 0.0,
                     {"bracket_4096": [l0, h0], "bracket_8192": [l1, h1]})]
    claims[0]["pass"] = drift < 0.10
    claims[0]["rel_error"] = drift
    return claims


PRESETS = {
    "powers": preset_powers,
    "laplacian-b11": preset_laplacian,
    "remark-l1c": preset_remark,
    "exp-weight": preset_exp_weight,
    "resolvent": preset_resolvent,
    "besov-equivalence": preset_besov,
}


def cmd_reproduce(args) -> int:
    names = list(PRESETS) if args.preset == "all" else [args.preset]
    out_dir = Path(args.out or "reproduce_out")
    all_ok = True
    for name in names:
        claims = PRESETS[name](args)
        for c in claims:
            write_json(out_dir / name / f"{c['claim']}.json", {"command": "reproduce", "preset": name, **c})
            status = "PASS" if c["pass"] else "FAIL"
            print(f"{status} {name}/{c['claim']} computed={c['computed']} expected={c['expected']}")
            all_ok &= c["pass"]
    return 0 if all_ok else 1


# ---------------------------------------------------------------------------
# parser

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--t-min", dest="t_min")
    common.add_argument("--t-max", dest="t_max")
    common.add_argument("--nodes")
    common.add_argument("--rel-tol", dest="rel_tol")
    common.add_argument("--out")
    common.add_argument("--config")
    common.add_argument("--seed")
    common.add_argument("--model", help="diag:<a1,a2,...> | heat1d | heat2d")
    common.add_argument("--theta")
    common.add_argument("--q")
    common.add_argument("--mu")
    common.add_argument("--weight", help="power | exp | const | sampled:<path>")
    common.add_argument("--certificate", help="gaussian | basis:k | meanzero | packet | file:<path> | all")

    parser = argparse.ArgumentParser(prog="mrlab", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("certify-weight", parents=[common])
    p.add_argument("--family", choices=_FAMILIES)
    p.set_defaults(func=cmd_certify_weight)

    p = sub.add_parser("mr-test", parents=[common])
    p.add_argument("test", choices=("kp", "weighted", "linf", "resolvent", "gamma"))
    p.add_argument("--eps")
    p.set_defaults(func=cmd_mr_test)

    p = sub.add_parser("besov", parents=[common])
    p.add_argument("--p")
    p.add_argument("--compare", choices=("thermic",))
    p.add_argument("--points")
    p.add_argument("--box")
    p.set_defaults(func=cmd_besov)

    p = sub.add_parser("kfunctional", parents=[common])
    p.add_argument("--source", choices=("thermic", "modulus", "smoothness2"))
    p.set_defaults(func=cmd_kfunctional)

    p = sub.add_parser("solve", parents=[common])
    p.add_argument("--tau")
    p.add_argument("--steps")
    p.add_argument("--forcing", choices=("const", "exp", "zero"))
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("reproduce", parents=[common])
    p.add_argument("preset", choices=tuple(PRESETS) + ("all",))
    p.set_defaults(func=cmd_reproduce)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        resolve(args)
        return args.func(args)
    except (ConfigError, wl.DomainError, ValueError) as exc:
        print(f"mrlab: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
