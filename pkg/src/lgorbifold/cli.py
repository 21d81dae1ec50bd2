"""Command-line interface: model configs, computation commands, plain/json/latex output.

Exit codes: 0 success, 1 validation error, 2 computation error, 3 check failure.
"""

from __future__ import annotations

import argparse
import configparser
import json
import os
import sys
import time
from dataclasses import dataclass, field

from .btw_jacobian import NotInvertibleError, compare, det_identity_report, jac_prime
from .groebner import NonIsolatedError, StabilizationError
from .koszul_oracle import chain_cup_oracle, sector_dimension_oracle, verify_conjugation
from .milnor import quasi_homogeneous_weights
from .models import PRESETS, surface, surface_report
from .orbifold import ALL_CHECKS, TwistedAlgebra, t_exponent
from .poly import PolyParseError, format_poly, parse_poly
from .symmetry import GroupElement, SymmetryError, generate_group

EXIT_OK, EXIT_VALIDATION, EXIT_COMPUTATION, EXIT_CHECK = 0, 1, 2, 3


class ConfigError(ValueError):
    """Invalid model configuration."""


@dataclass
class ModelConfig:
    nvars: int
    W_text: str
    order: int
    generators: list
    local: str = "auto"
    double_field: bool = False
    sigma_overrides: dict = field(default_factory=dict)
    name: str = "model"

    @property
    def field_order(self):
        return 2 * self.order if self.double_field else self.order

    def build(self):
        """(W, G) over Q(zeta_F), F the (possibly doubled) field order."""
        try:
            W = parse_poly(self.W_text, self.nvars, self.field_order)
        except PolyParseError as exc:
            raise ConfigError(f"[model] W: {exc}") from exc
        try:
            G = generate_group(self.generators, self.order, W, self.field_order)
        except SymmetryError as exc:
            raise ConfigError(f"[group] generators: {exc}") from exc
        return W, G

    def element(self, text, G):
        """Parse 'e' or a comma-separated exponent vector in units of 1/order."""
        text = text.strip().strip("()")
        if text in ("e", ""):
            return G.identity
        try:
            v = [int(a) for a in text.split(",")]
        except ValueError as exc:
            raise ConfigError(f"cannot parse group element {text!r}") from exc
        if len(v) != self.nvars:
            raise ConfigError(f"group element {text!r} needs {self.nvars} entries")
        s = self.field_order // self.order
        g = GroupElement([a * s for a in v], self.field_order)
        if g not in G:
            raise ConfigError(f"{text!r} is not in the group")
        return g


def _line_of(path, key):
    try:
        with open(path) as fh:
            for i, line in enumerate(fh, 1):
                if line.split("=")[0].strip() == key:
                    return i
    except OSError:
        pass
    return None


def load_config(path):
    cp = configparser.ConfigParser()
    cp.optionxform = str
    try:
        with open(path) as fh:
            cp.read_file(fh)
    except (OSError, configparser.Error) as exc:
        raise ConfigError(f"{path}: {exc}") from exc
    try:
        nvars = cp.getint("model", "nvars")
        W_text = cp.get("model", "W")
        order = cp.getint("group", "order")
        gens_text = cp.get("group", "generators")
    except (configparser.Error, ValueError) as exc:
        raise ConfigError(f"{path}: {exc}") from exc
    gens = []
    for part in gens_text.split(";"):
        if part.strip():
            try:
                gens.append([int(a) for a in part.replace("(", "").replace(")", "").split(",")])
            except ValueError as exc:
                line = _line_of(path, "generators")
                raise ConfigError(f"{path}:{line}: bad generator {part.strip()!r}") from exc
    local = cp.get("options", "local", fallback="auto")
    if local not in ("auto", "on", "off"):
        raise ConfigError(f"{path}:{_line_of(path, 'local')}: local must be auto, on or off")
    double = cp.getboolean("options", "double_field", fallback=False)
    overrides = dict(cp.items("sigma")) if cp.has_section("sigma") else {}
    cfg = ModelConfig(nvars, W_text, order, gens, local, double, overrides,
                      os.path.splitext(os.path.basename(path))[0])
    try:
        parse_poly(W_text, nvars, cfg.field_order)
    except PolyParseError as exc:
        line = _line_of(path, "W")
        col = exc.column + len(W_text) - len(W_text.lstrip())
        raise ConfigError(f"{path}:{line}:{col}: {exc}") from exc
    return cfg


def preset_config(name, double_field=False):
    mdl = PRESETS[name]()
    W = mdl.W
    G = mdl.group
    return ModelConfig(W.nvars, format_poly(W), G.order, mdl.generators,
                       double_field=double_field, name=name)


# ---------------------------------------------------------------------------
# JSON encoding
# ---------------------------------------------------------------------------

def class_json(c):
    alg = c.alg
    return {"basis": [list(m) for m in alg.basis],
            "coeffs": [a.to_json()["coeffs"] for a in c.coeffs],
            "order": alg.order}


def mono_text(m):
    parts = [f"x{i + 1}" + (f"^{e}" if e > 1 else "") for i, e in enumerate(m) if e]
    return "*".join(parts) or "1"


def render_class(c, fmt):
    if fmt == "latex":
        return format_poly(c.to_poly(), latex=True)
    return str(c)


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def _algebra(cfg, local=None, jobs=1, overrides=True):
    W, G = cfg.build()
    A = TwistedAlgebra(W, G, local or cfg.local)
    if overrides:
        for key, val in cfg.sigma_overrides.items():
            gs, hs = key.split(";")
            g, h = cfg.element(gs, G), cfg.element(hs, G)
            A.set_sigma(g, h, A.algebras[g * h].class_of(parse_poly(val, W.nvars, W.order)))
    return A


def cmd_sectors(cfg, local=None, **_):
    A = _algebra(cfg, local)
    rows = []
    for g in A.group:
        alg = A.algebras[g]
        rows.append({"sector": g.label(), "dim": alg.dim, "d": g.d,
                     "parity": "odd" if g.d % 2 else "even", "local": alg.local,
                     "basis": [mono_text(m) for m in alg.basis]})
    return {"command": "sectors", "model": cfg.name, "order": A.W.order, "sectors": rows}


def cmd_sigma(cfg, g_text, h_text, local=None, **_):
    A = _algebra(cfg, local)
    g, h = cfg.element(g_text, A.group), cfg.element(h_text, A.group)
    s = A.sigma(g, h)
    return {"command": "sigma", "model": cfg.name, "g": g.label(), "h": h.label(),
            "t": t_exponent(g, h), "value": str(s), "class": class_json(s)}


def _table_entries(A, pairs, fmt):
    out = []
    for g, h in pairs:
        s = A.sigma(g, h)
        if s.is_zero():
            continue
        out.append({"g": g.label(), "h": h.label(), "gh": (g * h).label(),
                    "t": t_exponent(g, h), "value": render_class(s, fmt), "class": class_json(s)})
    return out


def cmd_table(cfg, local=None, jobs=1, invariants_only=False, fmt="plain", **_):
    A = _algebra(cfg, local)
    A.sigma_table(jobs)
    doc = {"command": "table", "model": cfg.name, "order": A.W.order}
    if not invariants_only:
        pairs = [(g, h) for g in A.group for h in A.group]
        doc["sigma"] = _table_entries(A, pairs, fmt)
    doc["invariants"] = invariant_table(A, fmt)
    return doc


def invariant_table(A, fmt="plain"):
    basis = A.invariant_basis()
    if fmt == "latex":
        names = [f"{_latex_mono(m)}\\xi_{{{g.label()}}}" for g, m, _ in basis]
    else:
        names = [f"{mono_text(m)}*xi_{g.label()}" for g, m, _ in basis]
    prods = []
    for i, (_, _, u) in enumerate(basis):
        for j, (_, _, v) in enumerate(basis):
            p = A.cup(u, v)
            if not p.is_zero():
                prods.append({"left": names[i], "right": names[j],
                              "value": str(p) if fmt != "latex" else _latex_element(p)})
    return {"basis": names, "dims": A.invariant_dims(), "products": prods}


def _latex_mono(m):
    parts = [f"x_{{{i + 1}}}" + (f"^{{{e}}}" if e > 1 else "") for i, e in enumerate(m) if e]
    return "".join(parts)


def _latex_element(u):
    parts = []
    for (g, t), c in sorted(u.terms.items(), key=lambda kv: (kv[0][0].exponents, kv[0][1])):
        tt = f"t^{{{t}}}" if t else ""
        parts.append(f"{tt}({format_poly(c.to_poly(), latex=True)})\\xi_{{{g.label()}}}")
    return " + ".join(parts)


def cmd_invariants(cfg, local=None, jobs=1, fmt="plain", **_):
    A = _algebra(cfg, local)
    A.sigma_table(jobs)
    return {"command": "invariants", "model": cfg.name, **invariant_table(A, fmt)}


SUITES = {"braided": ["braided"], "assoc": ["assoc"], "unit": ["unit"],
          "equivariance": ["equivariance"], "oracle": [],
          "all": list(ALL_CHECKS)}


def cmd_check(cfg, local=None, jobs=1, suite="all", **_):
    A = _algebra(cfg, local)
    A.sigma_table(jobs)
    results = []
    for name in SUITES[suite]:
        r = ALL_CHECKS[name](A)
        results.append({"name": r.name, "passed": r.passed, "checked": r.checked,
                        "witness": r.witness})
    if suite in ("oracle", "all"):
        results.extend(oracle_results(A))
    return {"command": "check", "model": cfg.name, "suite": suite, "results": results,
            "passed": all(r["passed"] for r in results)}


def oracle_results(A):
    W = A.W
    out = []
    bad = []
    for g in A.group:
        r = verify_conjugation(W, g)
        if not (r.ok and r.squares_to_zero and r.annihilates_generator):
            bad.append(f"{g.label()}: {r.witness or 'differential check failed'}")
    out.append({"name": "conjugation", "passed": not bad, "checked": len(A.group),
                "witness": "; ".join(bad[:1])})
    bad = []
    n = 0
    for g in A.group:
        for h in A.group:
            n += 1
            if chain_cup_oracle(W, g, h, A.algebras[g * h]) != A.sigma(g, h):
                bad.append(f"({g.label()},{h.label()})")
    out.append({"name": "chain_cup_oracle", "passed": not bad, "checked": n,
                "witness": ", ".join(bad[:3])})
    if quasi_homogeneous_weights(W) is not None and None not in quasi_homogeneous_weights(W):
        bad = []
        for g in A.group:
            rep = sector_dimension_oracle(W, g, mode="exact")
            want = A.algebras[g].dim
            got = rep.odd if g.d % 2 else rep.even
            other = rep.even if g.d % 2 else rep.odd
            if got != want or other:
                bad.append(f"{g.label()}: oracle ({rep.even},{rep.odd}) vs mu {want}")
        out.append({"name": "sector_dimension_oracle", "passed": not bad,
                    "checked": len(A.group), "witness": "; ".join(bad[:1])})
    return out


def cmd_oracle(cfg, local=None, jobs=1, **_):
    A = _algebra(cfg, local)
    results = oracle_results(A)
    return {"command": "oracle", "model": cfg.name, "results": results,
            "passed": all(r["passed"] for r in results)}


def cmd_compare_jac(cfg, local=None, **_):
    if not cfg.double_field:
        cfg = ModelConfig(cfg.nvars, cfg.W_text, cfg.order, cfg.generators, cfg.local, True,
                          cfg.sigma_overrides, cfg.name)
    M = _algebra(cfg, local)
    J = jac_prime(M.W, M.group, M.local, algebras=M.algebras)
    v = compare(M, J)
    det = det_identity_report(M)
    return {"command": "compare-jac", "model": cfg.name, "order": M.W.order,
            "factors": [str(f) for f in J.factors], "verdict": v.kind,
            "witness": v.witness, "reason": v.reason,
            "alpha": {g.label(): a.to_json()["coeffs"] for g, a in v.alpha.items()},
            "alpha_text": {g.label(): str(a) for g, a in v.alpha.items()},
            "det_identity": {g.label(): r for g, r in det.items()}}


def cmd_surface(genus, jobs=1, **_):
    mdl = surface(genus)
    A = TwistedAlgebra(mdl.W, mdl.group)
    rep = surface_report(genus, A, jobs)
    ratio = {k: str(rep.c[k] / rep.closed_form[k]) for k in rep.c}
    return {"command": "surface", "genus": genus, "milnor_dim": rep.milnor_dim,
            "sector_dims": [A.algebras[g].dim for g in A.group],
            "invariant_dims": rep.invariant_dims,
            "c": {k: str(v) for k, v in rep.c.items()},
            "c_over_closed_form": ratio,
            "relations": rep.relations, "isomorphic": rep.isomorphic,
            "witness": rep.witness,
            "invariants": invariant_table(A)}


# ---------------------------------------------------------------------------
# output
# ---------------------------------------------------------------------------

def render(doc, fmt):
    if fmt == "json":
        return json.dumps(doc, indent=2, sort_keys=False, default=str)
    lines = []
    _plain(doc, lines, 0)
    text = "\n".join(lines)
    if fmt == "latex":
        text = "\\begin{verbatim}\n" + text + "\n\\end{verbatim}" if doc.get("command") != "table" \
            else _latex_table(doc)
    return text


def _plain(obj, lines, indent):
    pad = "  " * indent
    if isinstance(obj, dict):
        for k, v in obj.items():
            if k in ("class",):
                continue
            if isinstance(v, (dict, list)) and v:
                lines.append(f"{pad}{k}:")
                _plain(v, lines, indent + 1)
            else:
                lines.append(f"{pad}{k}: {v}")
    elif isinstance(obj, list):
        for v in obj:
            if isinstance(v, dict):
                flat = ", ".join(f"{k}={x}" for k, x in v.items() if k != "class")
                lines.append(f"{pad}- {flat}")
            else:
                lines.append(f"{pad}- {v}")


def _latex_table(doc):
    out = []
    if "sigma" in doc:
        out.append("\\begin{tabular}{lll}")
        out.append("$g$ & $h$ & $\\sigma_{g,h}$ \\\\ \\hline")
        for e in doc["sigma"]:
            out.append(f"${e['g']}$ & ${e['h']}$ & $t^{{{e['t']}}}\\,{e['value']}$ \\\\")
        out.append("\\end{tabular}")
        out.append("")
    inv = doc["invariants"]
    out.append("\\begin{tabular}{lll}")
    for p in inv["products"]:
        out.append(f"${p['left']}$ & ${p['right']}$ & ${p['value']}$ \\\\")
    out.append("\\end{tabular}")
    return "\n".join(out)


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------

def build_parser():
    p = argparse.ArgumentParser(prog="lgorbifold", description=__doc__.splitlines()[0])
    p.add_argument("--config", help="model config file ([model], [group], [options])")
    p.add_argument("--preset", choices=sorted(PRESETS), help="built-in model instead of --config")
    p.add_argument("--format", choices=["plain", "json", "latex"], default="plain")
    p.add_argument("--jobs", type=int, default=os.cpu_count() or 1)
    p.add_argument("--local", choices=["auto", "on", "off"], default=None)
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("sectors", help="sector dimensions, parities and bases")
    s = sub.add_parser("sigma", help="one structure constant")
    s.add_argument("g")
    s.add_argument("h")
    t = sub.add_parser("table", help="sigma table and invariant multiplication table")
    t.add_argument("--invariants-only", action="store_true")
    sub.add_parser("invariants", help="invariant subalgebra and its products")
    c = sub.add_parser("check", help="property suites")
    c.add_argument("--suite", choices=sorted(SUITES), default="all")
    sub.add_parser("compare-jac", help="compare with the twisted Jacobian algebra")
    sub.add_parser("oracle", help="Koszul-complex oracles")
    sf = sub.add_parser("surface", help="genus-g surface model")
    sf.add_argument("--genus", type=int, required=True)
    return p


def run(argv=None):
    """Returns (exit code, rendered output)."""
    args = build_parser().parse_args(argv)
    t0 = time.perf_counter()
    try:
        if args.command == "surface":
            if args.genus < 2:
                raise ConfigError("genus must be at least 2")
            doc = cmd_surface(args.genus, jobs=args.jobs)
        else:
            if args.config:
                cfg = load_config(args.config)
            elif args.preset:
                cfg = preset_config(args.preset)
            else:
                raise ConfigError("one of --config or --preset is required")
            kw = dict(local=args.local, jobs=args.jobs, fmt=args.format)
            if args.command == "sectors":
                doc = cmd_sectors(cfg, **kw)
            elif args.command == "sigma":
                doc = cmd_sigma(cfg, args.g, args.h, **kw)
            elif args.command == "table":
                doc = cmd_table(cfg, invariants_only=args.invariants_only, **kw)
            elif args.command == "invariants":
                doc = cmd_invariants(cfg, **kw)
            elif args.command == "check":
                doc = cmd_check(cfg, suite=args.suite, **kw)
            elif args.command == "compare-jac":
                doc = cmd_compare_jac(cfg, **kw)
            else:
                doc = cmd_oracle(cfg, **kw)
    except (ConfigError, NotInvertibleError) as exc:
        return EXIT_VALIDATION, f"error: {exc}"
    except (NonIsolatedError, StabilizationError) as exc:
        return EXIT_COMPUTATION, f"error: {exc}"
    doc["timing"] = round(time.perf_counter() - t0, 3)
    code = EXIT_OK
    if doc.get("passed") is False or doc.get("isomorphic") is False:
        code = EXIT_CHECK
    return code, render(doc, args.format)


def main(argv=None):
    code, text = run(argv)
    stream = sys.stderr if code in (EXIT_VALIDATION, EXIT_COMPUTATION) else sys.stdout
    print(text, file=stream)
    return code


if __name__ == "__main__":
    sys.exit(main())
