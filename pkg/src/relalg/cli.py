"""Command-line interface: ``relalg <command> ...``.

Exit status: 0 when every verdict passes, 1 when a check fails, 2 on usage
or input errors.  ``--json`` prints a single RunReport object on stdout;
everything meant for people goes to stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
import warnings
from contextlib import contextmanager
from dataclasses import dataclass, field
from pathlib import Path

from . import __version__
from .algebra import FiniteRelationAlgebra, make_algebra
from .axioms import DEFAULT_SEED, check_ra_axioms, derived_laws
from .constructions import (
    bruck_ryser_excluded, fused_subalgebra, lyndon, mackenzie, non_representable_indices,
    slope_representation,
)
from .equations import DEFAULT_CAP, holds
from .errors import (
    FormatError, InvalidStructure, NotSimple, ParseError, RelAlgError, SearchSpaceTooLarge,
)
from .ideals import ideal_generate, quotient
from .pipeline import block_ideal, represent_quotient
from .proper import abstract, check_points_lemma, decompose, full_re, full_sb, points
from .raformat import format_ra, read_ra, write_ra
from .relations import ConcreteRelation, format_relation, parse_classes
from .representation import read_rep, verify_representation, write_rep
from .search import SearchConfig, search
from .terms import parse_equation


@dataclass
class RunReport:
    command: list
    seed: int
    verdicts: list = field(default_factory=list)
    results: dict = field(default_factory=dict)
    outputs: list = field(default_factory=list)
    timings: dict = field(default_factory=dict)
    error: str | None = None
    exit_code: int = 0

    def verdict(self, name: str, passed: bool, detail: str = "", witness=None) -> bool:
        self.verdicts.append({"name": name, "passed": bool(passed), "detail": detail,
                              "witness": witness})
        return passed

    @property
    def passed(self) -> bool:
        return all(v["passed"] for v in self.verdicts)

    def to_dict(self, timings: bool = False) -> dict:
        d = {
            "command": self.command,
            "seed": self.seed,
            "verdicts": self.verdicts,
            "results": self.results,
            "outputs": self.outputs,
            "error": self.error,
            "exit_code": self.exit_code,
        }
        if timings:
            d["timings"] = self.timings
        return d

    def to_json(self, timings: bool = False) -> str:
        return json.dumps(self.to_dict(timings), sort_keys=True)

    @classmethod
    def from_dict(cls, d: dict) -> "RunReport":
        return cls(
            command=list(d["command"]), seed=d["seed"], verdicts=list(d["verdicts"]),
            results=dict(d["results"]), outputs=list(d["outputs"]),
            timings=dict(d.get("timings", {})), error=d.get("error"), exit_code=d["exit_code"],
        )

    @classmethod
    def from_json(cls, text: str) -> "RunReport":
        return cls.from_dict(json.loads(text))


class UsageError(Exception):
    pass


def _say(msg: str = "") -> None:
    print(msg, file=sys.stderr)


@contextmanager
def _phase(report: RunReport, name: str):
    t0 = time.perf_counter()
    try:
        yield
    finally:
        report.timings[name] = round(time.perf_counter() - t0, 4)


def _load_structure(path):
    try:
        return read_ra(path)
    except OSError as exc:
        raise UsageError(f"{path}: {exc.strerror or exc}") from None
    except FormatError as exc:
        raise UsageError(f"{path}: {exc}") from None


def _load_algebra(path, report) -> FiniteRelationAlgebra | None:
    s = _load_structure(path)
    try:
        return make_algebra(s)
    except InvalidStructure as exc:
        report.verdict("valid relation algebra", False, str(exc),
                       [exc.invariant] + [str(w) for w in exc.witness])
        return None


def _classes(text) -> ConcreteRelation:
    try:
        return ConcreteRelation.from_classes(parse_classes(text))
    except (FormatError, ValueError) as exc:
        raise UsageError(f"bad --classes: {exc}") from None


def _report_checks(report: RunReport, name: str, check_report) -> None:
    report.results[name] = check_report.to_dict()
    for c in check_report.checks:
        report.verdict(f"{name}: {c.name}", c.passed, c.detail, list(c.witness) or None)


# ---- commands -----------------------------------------------------------------


def cmd_check(args, report):
    s = _load_structure(args.file)
    with _phase(report, "axioms"):
        ax = check_ra_axioms(s, seed=args.seed)
    report.results["axioms"] = ax.to_dict()
    for r in ax.results:
        report.verdict(f"axiom {r.name}", r.passed, r.statement, list(r.witness) or None)
    if ax.ok:
        A = make_algebra(s)
        with _phase(report, "derived"):
            dl = derived_laws(A, seed=args.seed)
        report.results["derived"] = dl.to_dict()
        for r in dl.results:
            report.verdict(f"law {r.name}", r.passed, r.statement, list(r.witness) or None)
        report.results["classification"] = {
            "atoms": A.m, "integral": A.is_integral(), "simple": A.is_simple(),
            "symmetric": A.is_symmetric(),
        }


def cmd_gen(args, report):
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        if args.kind == "mackenzie":
            s, label = mackenzie(), "MacKenzie algebra"
        elif args.kind == "lyndon":
            if args.n is None:
                raise UsageError("gen lyndon needs n")
            gamma = [int(g) for g in args.gamma.split(",") if g]
            s, label = lyndon(args.n, gamma), f"Lyndon algebra n={args.n} gamma={args.gamma}"
        elif args.kind == "sb":
            if not args.classes:
                raise UsageError("gen sb needs --classes")
            E = _classes(args.classes)
            s, label = abstract(full_sb(E)), f"Sb(E) classes={args.classes}"
        else:
            if args.n is None:
                raise UsageError("gen re needs n")
            s, label = abstract(full_re(args.n)), f"Re({args.n})"
    report.results["warnings"] = [str(w.message) for w in caught]
    for w in caught:
        _say(f"warning: {w.message}")
    report.results["atoms"] = list(s.atom_names)
    text = format_ra(s, comment=label)
    if args.output:
        try:
            Path(args.output).write_text(text, encoding="utf-8")
        except OSError as exc:
            raise UsageError(f"{args.output}: {exc.strerror or exc}") from None
        report.outputs.append(args.output)
    elif args.json:
        report.results["ra"] = text
    else:
        sys.stdout.write(text)
    report.verdict("generated", True, label)


def cmd_represent(args, report):
    A = _load_algebra(args.file, report)
    if A is None:
        return
    cfg = SearchConfig(max_base=args.max_base, budget=args.budget, jobs=args.jobs)
    try:
        with _phase(report, "search"):
            result = search(A, cfg)
    except NotSimple as exc:
        report.verdict("algebra is simple", False, f"{exc}")
        return
    report.results["sizes"] = [o.to_dict(timings=args.timings) for o in result.sizes]
    if result.found:
        rep = result.representation
        report.results["base"] = rep.n
        report.results["labels"] = rep.rows_as_names()
        report.verdict("representation found", True, f"base {rep.n}")
        if args.output:
            write_rep(rep, args.output, _relative(args.file, args.output))
            report.outputs.append(args.output)
    else:
        exhausted = all(o.exhausted for o in result.sizes)
        report.results["exhausted"] = exhausted
        report.verdict("representation found", False,
                       f"NotFoundWithinBounds up to base {args.max_base}; "
                       + ("every size exhausted" if exhausted else "some sizes timed out"))


def _relative(target, start_file) -> str:
    target, base = Path(target).resolve(), Path(start_file).resolve().parent
    try:
        return str(target.relative_to(base))
    except ValueError:
        return str(target)


def cmd_verify(args, report):
    A = _load_algebra(args.file, report)
    if A is None:
        return
    try:
        _, rep = read_rep(args.rep, A)
    except OSError as exc:
        raise UsageError(f"{args.rep}: {exc.strerror or exc}") from None
    except FormatError as exc:
        raise UsageError(f"{args.rep}: {exc}") from None
    with _phase(report, "verify"):
        vr = verify_representation(A, rep)
    report.results["verification"] = vr.to_dict()
    first = vr.first_violation()
    witness = None
    if first is not None:
        kind, detail = first
        witness = [kind] + [str(x) for x in (detail if isinstance(detail, tuple) else (detail,))]
    report.verdict("certificate verifies", vr.ok, "", witness)


def _equations(spec: str) -> list:
    p = Path(spec)
    if spec.endswith(".eqs"):
        try:
            lines = p.read_text(encoding="utf-8").splitlines()
        except OSError as exc:
            raise UsageError(f"{spec}: {exc.strerror or exc}") from None
        return [ln.split("#", 1)[0].strip() for ln in lines if ln.split("#", 1)[0].strip()]
    return [spec]


def cmd_eval(args, report):
    A = _load_algebra(args.file, report)
    if A is None:
        return
    out = []
    for text in _equations(args.equation):
        try:
            eq = parse_equation(text)
        except ParseError as exc:
            raise UsageError(f"cannot parse {text!r}: {exc}") from None
        try:
            with _phase(report, f"holds {text}"):
                v = holds(eq, A, args.cap, sample_if_too_large=args.samples, seed=args.seed)
        except SearchSpaceTooLarge as exc:
            raise UsageError(str(exc)) from None
        out.append({"equation": str(eq), **v.to_dict()})
        report.verdict(f"holds: {eq}", v.valid, v.mode, v.counterexample)
    report.results["equations"] = out


def cmd_decompose(args, report):
    E = _classes(args.classes)
    with _phase(report, "decompose"):
        d = decompose(E, samples=args.samples, seed=args.seed)
    report.results["classes"] = d.classes
    _report_checks(report, "decompose", d.report)


def cmd_points(args, report):
    E = _classes(args.classes)
    pts = points(E)
    report.results["points"] = [format_relation(p) for p in pts]
    report.results["count"] = len(pts)
    if E.n <= 8:
        with _phase(report, "points lemma"):
            r = check_points_lemma(E, trials=args.trials, seed=args.seed)
        _report_checks(report, "points", r)


def cmd_quotient(args, report):
    A = _load_algebra(args.file, report)
    if A is None:
        return
    try:
        seed_mask = A.structure.parse_element(args.ideal_seed)
    except KeyError as exc:
        raise UsageError(f"bad --ideal-seed: {exc}") from None
    ideal = ideal_generate(A, [seed_mask])
    report.results["ideal_top"] = A.format(ideal.top, top=True)
    if not report.verdict("ideal is proper", ideal.proper, str(ideal)):
        return
    Q = quotient(A, ideal, seed=args.seed)
    _report_checks(report, "quotient", Q.report)
    ax = check_ra_axioms(Q.algebra, seed=args.seed)
    report.verdict("quotient satisfies the axioms", ax.ok)
    report.results["quotient_atoms"] = list(Q.algebra.names)
    report.results["quotient_simple"] = Q.algebra.is_simple()
    if args.output:
        write_ra(Q.algebra.structure, args.output, comment=f"quotient of {args.file} by {ideal}")
        report.outputs.append(args.output)


def cmd_pipeline(args, report):
    E = _classes(args.classes)
    ideal = None
    if len(E.classes()) > 1:
        ideal = block_ideal(E, args.block)
    with _phase(report, "pipeline"):
        r = represent_quotient(E, ideal, seed=args.seed)
    report.results.update(point_classes=r.point_classes, base=r.representation.n,
                          ideal_top=r.report.info["ideal_top"],
                          quotient_atoms=list(r.quotient.algebra.names))
    _report_checks(report, "sigma", r.sigma_report)
    _report_checks(report, "representation", r.report)
    if args.output:
        ra_path = str(Path(args.output).with_suffix(".ra"))
        write_ra(r.quotient.algebra.structure, ra_path, comment=f"Sb(E)/J for classes {args.classes}")
        write_rep(r.representation, args.output, _relative(ra_path, args.output))
        report.outputs += [ra_path, args.output]


def cmd_bruck_ryser(args, report):
    if args.order < 2:
        raise UsageError("order must be at least 2")
    excluded = bruck_ryser_excluded(args.order)
    report.results["order"] = args.order
    report.results["excluded"] = excluded
    _say(f"order {args.order}: " + ("no projective plane (Bruck-Ryser)" if excluded
                                    else "not excluded by Bruck-Ryser"))


def cmd_orders(args, report):
    if args.limit < 2:
        raise UsageError("limit must be at least 2")
    excl = [o for o in range(2, args.limit + 1) if bruck_ryser_excluded(o)]
    report.results["excluded_orders"] = excl
    report.results["non_representable_indices"] = non_representable_indices(args.limit)
    _say(f"excluded orders <= {args.limit}: {excl}")
    _say(f"non-representable indices <= {args.limit}: {report.results['non_representable_indices']}")


def cmd_slope_rep(args, report):
    try:
        rep = slope_representation(args.q)
    except RelAlgError as exc:
        raise UsageError(str(exc)) from None
    with _phase(report, "verify"):
        vr = verify_representation(rep.algebra, rep)
    report.results["base"] = rep.n
    report.results["verification"] = vr.to_dict()
    report.verdict("slope representation verifies", vr.ok)
    if args.output:
        ra_path = str(Path(args.output).with_suffix(".ra"))
        write_ra(rep.algebra.structure, ra_path, comment=f"lyndon({args.q + 1}, [1, 3])")
        write_rep(rep, args.output, _relative(ra_path, args.output))
        report.outputs += [ra_path, args.output]


def cmd_fuse(args, report):
    pair = tuple(int(x) for x in args.pair.split(","))
    if len(pair) != 2:
        raise UsageError("--pair needs two atom indices")
    try:
        f = fused_subalgebra(args.n, args.k, pair)
    except RelAlgError as exc:
        raise UsageError(str(exc)) from None
    _report_checks(report, "fusion", f.report)


# ---- parser -------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    def global_options(suppress):
        # Subcommands must not reset values given before the command name,
        # so their copies of these options default to SUPPRESS.
        opts = argparse.ArgumentParser(add_help=False)
        opts.add_argument("--json", action="store_true",
                          default=argparse.SUPPRESS if suppress else False,
                          help="print the run report as JSON on stdout")
        opts.add_argument("--seed", type=int,
                          default=argparse.SUPPRESS if suppress else DEFAULT_SEED,
                          help=f"seed for randomized checks (default {DEFAULT_SEED})")
        opts.add_argument("--timings", action="store_true",
                          default=argparse.SUPPRESS if suppress else False,
                          help="include per-phase timings in the JSON report")
        return opts

    common = global_options(suppress=True)
    parser = argparse.ArgumentParser(
        prog="relalg", description="Finite relation algebra workbench.",
        parents=[global_options(suppress=False)])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", metavar="command")
    sub.required = True

    def add(name, func, help_):
        p = sub.add_parser(name, help=help_, parents=[common])
        p.set_defaults(func=func)
        return p

    p = add("check", cmd_check, "check the axioms and derived laws of a .ra file")
    p.add_argument("file")

    p = add("gen", cmd_gen, "generate a named algebra")
    p.add_argument("kind", choices=["mackenzie", "lyndon", "sb", "re"])
    p.add_argument("n", type=int, nargs="?")
    p.add_argument("--gamma", default="1,3")
    p.add_argument("--classes")
    p.add_argument("-o", "--output")

    p = add("represent", cmd_represent, "search for a square representation")
    p.add_argument("file")
    p.add_argument("--max-base", type=int, default=6)
    p.add_argument("--budget", type=float, default=60.0, help="seconds per base size")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("-o", "--output")

    p = add("verify", cmd_verify, "verify a .rep certificate")
    p.add_argument("file")
    p.add_argument("rep")

    p = add("eval", cmd_eval, "decide equations over an algebra")
    p.add_argument("equation", help="an equation or a .eqs file")
    p.add_argument("file")
    p.add_argument("--cap", type=int, default=DEFAULT_CAP)
    p.add_argument("--samples", type=int, default=0,
                   help="sample this many assignments when the space exceeds the cap")

    p = add("decompose", cmd_decompose, "split Sb(E) into squares")
    p.add_argument("--classes", required=True)
    p.add_argument("--samples", type=int, default=500)

    p = add("points", cmd_points, "list the points of E and check their properties")
    p.add_argument("--classes", required=True)
    p.add_argument("--trials", type=int, default=200)

    p = add("quotient", cmd_quotient, "quotient by the ideal generated by an element")
    p.add_argument("file")
    p.add_argument("--ideal-seed", required=True)
    p.add_argument("-o", "--output")

    p = add("pipeline", cmd_pipeline, "represent Sb(E)/J through the points of E")
    p.add_argument("--classes", required=True)
    p.add_argument("--block", type=int, default=0, help="class whose square seeds the ideal")
    p.add_argument("-o", "--output")

    p = add("bruck-ryser", cmd_bruck_ryser, "Bruck-Ryser exclusion for one order")
    p.add_argument("order", type=int)

    p = add("orders", cmd_orders, "excluded orders and non-representable indices")
    p.add_argument("--limit", type=int, required=True)

    p = add("slope-rep", cmd_slope_rep, "slope representation over GF(q)^2")
    p.add_argument("q", type=int)
    p.add_argument("-o", "--output")

    p = add("fuse", cmd_fuse, "fusion embedding of E_{n+1} into E_{k+1}")
    p.add_argument("n", type=int)
    p.add_argument("k", type=int)
    p.add_argument("--pair", default="1,2")
    return parser


def run(argv=None):
    """Run one command; returns ``(exit_code, RunReport)``."""
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        code = 0 if exc.code == 0 else 2
        return code, RunReport(argv, DEFAULT_SEED, error="usage", exit_code=code)
    report = RunReport(argv, args.seed)
    if not args.json:
        _say(f"seed {args.seed}")
    try:
        args.func(args, report)
        report.exit_code = 0 if report.passed else 1
    except UsageError as exc:
        report.error = str(exc)
        report.exit_code = 2
    except (OSError, RelAlgError) as exc:
        report.error = str(exc)
        report.exit_code = 2
    if args.json:
        print(report.to_json(timings=args.timings))
    else:
        for v in report.verdicts:
            line = f"{'PASS' if v['passed'] else 'FAIL'}  {v['name']}"
            if not v["passed"] and v["witness"]:
                line += f"  witness: {v['witness']}"
            _say(line)
        if report.error:
            _say(f"error: {report.error}")
        for path in report.outputs:
            _say(f"wrote {path}")
    return report.exit_code, report


def main(argv=None) -> int:
    code, _ = run(argv)
    return code


if __name__ == "__main__":
    sys.exit(main())
