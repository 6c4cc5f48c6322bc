"""Command-line front end.

Every command builds a :class:`RunReport` and prints it as text or JSON.
Exit codes: 0 all checks pass, 1 some check failed, 2 bad input,
3 internal consistency failure.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction

from . import __version__
from .combinat import SetupConfig, hook_ssyt, perm_sign, restricted_exponents
from .complexes import (UNIT, ComplexData, InternalConsistencyError, UnitLabel, build_L_complex,
                        build_X, restricted_power_ideal)
from .corealg import BasisLabel, Element, FieldCfg, Poly, label_key
from .report import CheckReport, Report

EXIT_PASS, EXIT_FAIL, EXIT_INPUT, EXIT_INTERNAL = 0, 1, 2, 3


class InputError(ValueError):
    pass


# ---------------------------------------------------------------------------
# parameter grids
# ---------------------------------------------------------------------------

def _cfg(n, d, w, e=None):
    return SetupConfig(n, d, tuple(w), tuple(e) if e else None)


def _resolution_grid():
    out = []
    mixed = {3: [(3, 1, 1), (2, 1, 1), (2, 2, 1)], 2: [(2, 1)], 4: [(2, 1, 1, 1), (2, 2, 1, 1)]}
    for n in range(1, 5):
        for d in range(1, 5):
            ws = [(d,) * n, (1,) * n] + mixed.get(n, [])
            seen = set()
            for w in ws:
                if w in seen or sum(min(x, d) for x in w) < d:
                    continue
                seen.add(w)
                out.append(_cfg(n, d, w))
    out.append(_cfg(2, 2, (2, 3), (1, 2)))
    return out


def _small_grid():
    return [_cfg(2, 2, (2, 2)), _cfg(3, 2, (1, 1, 1)), _cfg(3, 2, (2, 1, 1)),
            _cfg(3, 3, (3, 1, 1)), _cfg(2, 1, (1, 1)), _cfg(2, 2, (2, 3), (1, 2))]


def _dga_grid():
    out = []
    for n in range(1, 4):
        for d in range(1, 4):
            for w in {(d,) * n, (1,) * n}:
                if sum(min(x, d) for x in w) >= d:
                    out.append(_cfg(n, d, w))
    out += [_cfg(3, 2, (2, 1, 1)), _cfg(3, 3, (3, 1, 1)), _cfg(3, 2, (2, 2, 1)),
            _cfg(2, 2, (2, 3), (1, 2))]
    return sorted(set(out), key=lambda c: (c.n, c.d, c.w, c.e))


def _golod_grid():
    # T up to degree 6 for n = 4, d >= 3 has ~10^4 strands in its label box
    return [c for c in _resolution_grid() if c.d >= 2 and (c.n <= 3 or c.d == 2)]


GRIDS = {
    "small": _small_grid,
    "resolution": _resolution_grid,
    "dga": _dga_grid,
    "golod": _golod_grid,
}


# ---------------------------------------------------------------------------
# element text grammar
# ---------------------------------------------------------------------------

_TERM = re.compile(r"""^\s*
    (?:(?P<coef>[+-]?\s*\d+(?:/\d+)?)\s*\*\s*)?
    (?P<mono>(?:x\d+(?:\^\d+)?\s*\*\s*)*)
    (?:f\[(?P<sigma>[\d,\s]*)\]\s*\*\s*m\[(?P<alpha>[\d,\s]*)\]|(?P<unit>1))
    \s*$""", re.X)


def _split_terms(text: str) -> list[str]:
    text = text.strip()
    if not text:
        raise InputError("empty element")
    parts, depth, cur = [], 0, ""
    for i, ch in enumerate(text):
        if ch == "[":
            depth += 1
        elif ch == "]":
            depth -= 1
        if depth == 0 and ch in "+-" and i > 0 and cur.strip() and not cur.rstrip().endswith("*"):
            parts.append(cur)
            cur = ch
        else:
            cur += ch
    parts.append(cur)
    return [p.replace(" ", "") for p in parts if p.strip()]


def parse_element(text: str, cfg: SetupConfig) -> Element:
    """Parse ``c*x1^2*f[1,2]*m[1,0,0] + ... `` (``1`` for the unit of ``R``)."""
    n = cfg.n
    out = Element()
    for term in _split_terms(text):
        sign = 1
        if term.startswith("+"):
            term = term[1:]
        elif term.startswith("-"):
            sign, term = -1, term[1:]
        m = _TERM.match(term)
        if not m:
            raise InputError(f"cannot parse term {term!r}")
        try:
            c = Fraction(m["coef"].replace(" ", "")) if m["coef"] else Fraction(1)
        except ZeroDivisionError:
            raise InputError(f"zero denominator in {term!r}") from None
        mono = [0] * n
        for var, _, exp in re.findall(r"x(\d+)(\^(\d+))?", m["mono"] or ""):
            i = int(var)
            if not 1 <= i <= n:
                raise InputError(f"variable x{i} out of range 1..{n}")
            mono[i - 1] += int(exp) if exp else 1
        if m["unit"]:
            lab = UNIT
        else:
            sigma = tuple(int(s) for s in m["sigma"].split(",") if s.strip())
            alpha = tuple(int(s) for s in m["alpha"].split(",") if s.strip())
            if len(alpha) != n:
                raise InputError(f"m[...] needs {n} entries in {term!r}")
            if any(not 1 <= s <= n for s in sigma) or len(set(sigma)) != len(sigma):
                raise InputError(f"bad wedge index set in {term!r}")
            srt = tuple(sorted(sigma))
            sign *= perm_sign(sigma)
            lab = BasisLabel(srt, alpha)
        out.iadd(Element({lab: Poly.monomial(tuple(mono), cfg.field(c * sign))}))
    return out


def format_poly(p: Poly) -> list:
    """``[[monomial exponents, "p/q"], ...]`` sorted by monomial."""
    return [[list(m), str(c)] for m, c in sorted(p.terms.items())]


def format_element(x: Element) -> list:
    return [[str(lab), format_poly(p)] for lab, p in x.sorted_items()]


def element_text(x: Element) -> str:
    if x.is_zero():
        return "0"
    parts = []
    for lab, p in x.sorted_items():
        for m, c in sorted(p.terms.items(), reverse=True):
            mono = "*".join(f"x{i + 1}" + (f"^{k}" if k > 1 else "") for i, k in enumerate(m) if k)
            body = "1" if isinstance(lab, UnitLabel) else str(lab)
            if mono:
                body = mono if body == "1" else f"{mono}*{body}"
            if c == 1:
                parts.append(body)
            elif c == -1:
                parts.append("-" + body)
            else:
                parts.append(f"{c}*{body}")
    return " + ".join(parts).replace("+ -", "- ")


# ---------------------------------------------------------------------------
# run reports
# ---------------------------------------------------------------------------

@dataclass
class RunReport:
    command: list[str]
    reports: list[Report] = field(default_factory=list)
    configs: list[dict] = field(default_factory=list)
    timings: dict = field(default_factory=dict)
    payload: dict = field(default_factory=dict)
    version: str = __version__

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.reports)

    def to_dict(self) -> dict:
        return {"command": self.command, "version": self.version, "passed": self.passed,
                "configs": self.configs, "reports": [r.to_dict() for r in self.reports],
                "timings": self.timings, "payload": self.payload}

    @classmethod
    def from_dict(cls, d: dict) -> "RunReport":
        return cls(d["command"], [Report.from_dict(r) for r in d["reports"]], d["configs"],
                   d["timings"], d["payload"], d["version"])

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    def text(self) -> str:
        lines = [" ".join(self.command), f"version {self.version}"]
        for r in self.reports:
            lines.append(r.text())
        for k in sorted(self.payload):
            v = self.payload[k]
            lines.append(f"{k}: {v if isinstance(v, str) else json.dumps(v, sort_keys=True)}")
        lines.append("RESULT: " + ("PASS" if self.passed else "FAIL"))
        return "\n".join(lines)


def _emit(run: RunReport, args) -> int:
    text = run.to_json() if args.format == "json" else run.text()
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(run.to_json() + "\n")
    print(text)
    return EXIT_PASS if run.passed else EXIT_FAIL


# ---------------------------------------------------------------------------
# suites
# ---------------------------------------------------------------------------

def _box(args, n):
    if not getattr(args, "box", None):
        return None
    from .oracle import StrandBox
    b = _vec(args.box)
    if len(b) != n:
        raise InputError(f"--box needs {n} entries")
    return StrandBox(b)


def suite_resolution(cfg: SetupConfig, negative: bool = False, box=None) -> Report:
    from .oracle import delete_label, verify_resolution
    L = build_L_complex(cfg)
    c: ComplexData = L
    if negative:
        top = max(L.degrees())
        c = delete_label(L, top, L.modules[top].labels[-1])
    rep = verify_resolution(c, cfg, box)
    rep.title = f"resolution {cfg}" + (" [corrupted: deleted kernel vector]" if negative else "")
    return rep


def suite_retract(cfg: SetupConfig, negative: bool = False) -> Report:
    from .transfer import (check_against_L, check_closed_form, check_homotopy, corrupt_flip,
                           perturb, kos_perturbation, unperturbed_retract, verify_retract)
    rep = Report(f"retract {cfg}" + (" [corrupted: sign-flipped perturbation]" if negative else ""))
    rep.extend(check_homotopy(cfg))
    L = build_L_complex(cfg)
    r = unperturbed_retract(cfg, L)
    rep.extend(verify_retract(r), "unperturbed: ")
    pr = perturb(r, kos_perturbation(r))
    if negative:
        pr = corrupt_flip(pr)
    rep.extend(verify_retract(pr), "perturbed: ")
    rep.add(check_against_L(pr, L))
    rep.add(check_closed_form(pr))
    rep.payload["iterations"] = pr.iterations
    return rep


def suite_dga(cfg: SetupConfig, negative: bool = False) -> Report:
    from .dga import (check_algebra_laws, check_equivariance, check_generalized_leibniz,
                      check_leibniz, check_transfer_identity, corrupt_sign, transferred_table,
                      x_product_table)
    from .transfer import transfer
    rep = Report(f"dga {cfg}" + (" [corrupted: sign-flipped product]" if negative else ""))
    X = build_X(cfg)
    xt = x_product_table(cfg, X)
    if negative:
        xt = corrupt_sign(xt)
    rep.add(check_leibniz(X, xt)).name = "X: Leibniz"
    rep.extend(check_algebra_laws(X, xt), "X: ")
    e = check_equivariance(xt)
    e.name = "X: " + e.name
    rep.add(e)
    rep.extend(check_generalized_leibniz(cfg, X), "X: ")

    L = build_L_complex(cfg)
    pr = transfer(cfg, L)
    lt = transferred_table(pr)
    if negative:
        lt = corrupt_sign(lt)
    rep.add(check_leibniz(L, lt)).name = "L: Leibniz"
    rep.extend(check_algebra_laws(L, lt), "L: ")
    e = check_equivariance(lt, L)
    e.name = "L: " + e.name
    rep.add(e)
    t = check_transfer_identity(pr)
    t.name = "L: " + t.name
    rep.add(t)
    return rep


def suite_golod(cfg: SetupConfig, negative: bool = False, max_deg: int = 5,
                acyclic_through: int | None = None) -> Report:
    from .golod import (check_golod, check_golod_resolution, check_koszul, corrupt_lift,
                        koszul_homology)
    if cfg.d < 2:
        raise InputError("the Golod suite needs d >= 2")
    kh = koszul_homology(cfg)
    rep = Report(f"golod {cfg}" + (" [corrupted: sign-flipped lift]" if negative else ""))
    rep.extend(check_koszul(cfg, kh, lift=corrupt_lift if negative else None))
    rep.extend(check_golod(cfg, kh).report)
    g = check_golod_resolution(cfg, max_deg, acyclic_through, kh)
    rep.extend(g, "T: ")
    rep.payload.update({"homology_dims": [kh.dims.get(i, 0) for i in range(cfg.n + 1)],
                        "T_ranks": g.payload["ranks"], "series": g.payload["series"],
                        "rep_strategy": kh.strategy})
    return rep


SUITES = {
    "resolution": suite_resolution,
    "retract": suite_retract,
    "dga": suite_dga,
    "golod": suite_golod,
}


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def _vec(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(t) for t in text.split(",") if t.strip())
    except ValueError:
        raise InputError(f"not a comma vector of integers: {text!r}") from None


def cfg_from_args(args) -> SetupConfig:
    if args.n is None or args.d is None or args.w is None:
        raise InputError("--n, --d and --w are required")
    try:
        field_cfg = FieldCfg.parse(args.field)
        return SetupConfig(args.n, args.d, _vec(args.w), _vec(args.e) if args.e else None, field_cfg)
    except ValueError as exc:
        raise InputError(str(exc)) from None


def cmd_simplex(args, argv) -> RunReport:
    cfg = cfg_from_args(args)
    vecs = restricted_exponents(cfg)
    gens = restricted_power_ideal(cfg).gens
    run = RunReport(argv, configs=[cfg.describe()])
    run.payload = {"exponents": [list(v) for v in vecs],
                   "generators": [repr(Poly.monomial(g, 1)) for g in
                                  sorted(gens, key=lambda g: tuple(-x for x in g))],
                   "count": len(vecs)}
    return run


def cmd_resolve(args, argv) -> RunReport:
    from .oracle import betti_table
    cfg = cfg_from_args(args)
    L = build_L_complex(cfg)
    run = RunReport(argv, configs=[cfg.describe()])
    bt = betti_table(L)
    diffs = {}
    for k in sorted(L.diffs):
        D = L.diffs[k]
        diffs[str(k)] = [[str(lab), format_element(D.column(lab))]
                         for lab in sorted(D.source or [], key=label_key)]
    bases = {}
    for k in L.degrees():
        if k == 0:
            continue
        bases[str(k)] = [[str(lab), format_element(L.embedding[lab])] for lab in L.modules[k].labels]
    tableaux = {str(a + 1): [str(t) for t in hook_ssyt(a, cfg.d, cfg)] for a in range(cfg.n)}
    tableaux = {k: v for k, v in tableaux.items() if v}
    run.payload = {"betti": bt.to_dict(), "ranks": bt.rank_list(), "kernel_bases": bases,
                   "tableaux": tableaux, "differentials": diffs}
    rep = Report(f"resolve {cfg}")
    rep.add(CheckReport("tableau count = rank", all(
        len(hook_ssyt(k - 1, cfg.d, cfg)) == r for k, r in enumerate(bt.rank_list()) if k >= 1),
        len(bt.rank_list()) - 1))
    run.reports.append(rep)
    return run


def _configs_for(args) -> list[SetupConfig]:
    if args.grid:
        if args.grid not in GRIDS:
            raise InputError(f"unknown grid {args.grid!r}; known: {', '.join(sorted(GRIDS))}")
        return GRIDS[args.grid]()
    return [cfg_from_args(args)]


def cmd_verify(args, argv) -> RunReport:
    names = list(SUITES) if args.suite == "all" else [args.suite]
    cfgs = _configs_for(args)
    run = RunReport(argv, configs=[c.describe() for c in cfgs])
    for cfg in cfgs:
        box = _box(args, cfg.n)
        for name in names:
            if name == "golod" and cfg.d < 2:
                if args.suite == "golod" and not args.grid:
                    raise InputError("the Golod suite needs d >= 2")
                continue
            t = time.perf_counter()
            if name == "resolution":
                rep = suite_resolution(cfg, args.negative_control, box)
            elif name == "golod":
                rep = suite_golod(cfg, args.negative_control, args.max_deg)
            else:
                rep = SUITES[name](cfg, args.negative_control)
            run.timings[rep.title] = round(time.perf_counter() - t, 3)
            run.reports.append(rep)
    return run


def cmd_product(args, argv) -> RunReport:
    from .dga import transferred_product, x_mul
    from .transfer import transfer
    cfg = cfg_from_args(args)
    x, y = parse_element(args.x, cfg), parse_element(args.y, cfg)
    run = RunReport(argv, configs=[cfg.describe()])
    if args.space == "X":
        X = build_X(cfg)
        allowed = set(X.all_labels())
        for el in (x, y):
            bad = [lab for lab in el.labels() if (BasisLabel((), (0,) * cfg.n) if lab == UNIT else lab)
                   not in allowed]
            if bad:
                raise InputError(f"{bad[0]} is not a basis label of X (need b <= d-1 and alpha <= w)")
        unit = BasisLabel((), (0,) * cfg.n)
        x = Element({unit if k == UNIT else k: p for k, p in x.items()})
        y = Element({unit if k == UNIT else k: p for k, p in y.items()})
        z = x_mul(x, y, cfg)
    else:
        L = build_L_complex(cfg)
        try:
            xs, ys = _to_L(x, L), _to_L(y, L)
        except InternalConsistencyError as exc:
            raise InputError(f"input is not in L: {exc}") from None
        pr = transfer(cfg, L)
        z = L.embed(transferred_product(xs, ys, cfg, pr))
    run.payload = {"x": element_text(x), "y": element_text(y), "product": element_text(z),
                   "coefficients": format_element(z), "space": args.space}
    return run


def _to_L(x: Element, L) -> Element:
    """Re-express an element of ``R (+) wedge (x) S_d`` in L coordinates."""
    cfg = L.cfg
    out = Element()
    by_a: dict[int, Element] = {}
    for lab, p in x.items():
        if isinstance(lab, UnitLabel):
            out.iadd(Element({UNIT: p}))
        else:
            if lab.b != cfg.d:
                raise InputError(f"{lab}: L elements live in wedge (x) S_{cfg.d}")
            by_a.setdefault(lab.a, Element()).iadd(Element({lab: p}))
    for a, part in by_a.items():
        out.iadd(L.coords(a, part))
    return out


def cmd_golod(args, argv) -> RunReport:
    cfg = cfg_from_args(args)
    if cfg.d < 2:
        raise InputError("golod needs d >= 2")
    from .golod import poincare_coeffs
    rep = suite_golod(cfg, False, args.max_deg)
    run = RunReport(argv, [rep], [cfg.describe()])
    run.payload = dict(rep.payload)
    run.payload["poincare"] = poincare_coeffs(cfg, args.max_deg)
    run.payload["golod"] = "pass" if rep.passed else "fail"
    return run


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------

def _common(p: argparse.ArgumentParser):
    p.add_argument("--n", type=int)
    p.add_argument("--d", type=int)
    p.add_argument("--w", help="comma vector, e.g. 2,1,1")
    p.add_argument("--e", help="comma vector of exponents, default all 1")
    p.add_argument("--field", default="q", help="q or fp:<p>")
    p.add_argument("--out", help="also write the JSON report to this path")
    p.add_argument("--format", choices=["text", "json"], default="text")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="restricted-powers",
                                 description="Resolutions of restricted powers and their DG structure.")
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simplex", help="restricted exponent vectors and generators")
    _common(p)
    p.set_defaults(func=cmd_simplex)

    p = sub.add_parser("resolve", help="build L and export Betti table, bases and differentials")
    _common(p)
    p.set_defaults(func=cmd_resolve)

    p = sub.add_parser("verify", help="run a property suite")
    p.add_argument("suite", choices=["resolution", "retract", "dga", "golod", "all"])
    _common(p)
    p.add_argument("--grid", help="named grid: " + ", ".join(sorted(GRIDS)))
    p.add_argument("--box", help="comma vector overriding the strand box")
    p.add_argument("--max-deg", type=int, default=5)
    p.add_argument("--negative-control", action="store_true",
                   help="run each suite on its corrupted fixture")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("product", help="multiply two elements")
    _common(p)
    p.add_argument("--x", required=True)
    p.add_argument("--y", required=True)
    p.add_argument("--space", choices=["X", "L"], default="X",
                   help="X: product on the big complex; L: transferred product")
    p.set_defaults(func=cmd_product)

    p = sub.add_parser("golod", help="Koszul homology, products, Golod resolution and series")
    _common(p)
    p.add_argument("--max-deg", type=int, default=5)
    p.set_defaults(func=cmd_golod)
    return ap


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_PASS
    try:
        run = args.func(args, ["restricted-powers"] + argv)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except InternalConsistencyError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    return _emit(run, args)


if __name__ == "__main__":
    sys.exit(main())
