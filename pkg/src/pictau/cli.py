"""Command-line interface: ``pictau <command> [<action>] [flags]``."""
from __future__ import annotations

import argparse
import sys
import time
from importlib.metadata import PackageNotFoundError, version

from . import grassmann as gm
from . import groupscheme as gs
from . import homology as hom
from .errors import DEFAULT_CAP_MINOR_COUNT, DEFAULT_CAP_PLUCKER_DIM, BudgetExceeded, ContractViolation
from .exactfield import QQ, FieldError, PrimeField, parse_field
from .groebner import Ideal
from .hilbscheme import EmbeddedScheme, ik_equations, projective_space_ring, restrict_to_X
from .numpoly import NotAHilbertPolynomial, NumericalPolynomial, ParameterError, gotzmann_number, gotzmann_rep
from .textio import format_ideal, format_manifest, format_matrix, parse_ideals, sha256_text

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_BUDGET = 3
EXIT_CONTRACT = 4
EXIT_FIELD = 5

TOYS = ("p1", "twisted-cubic", "plane-cubic")


def _version() -> str:
    try:
        return version("pictau")
    except PackageNotFoundError:
        return "0+local"


class Run:
    """Output sink plus the manifest of one invocation."""

    def __init__(self, args):
        self.args = args
        self.blocks: list[str] = []
        self.manifest = {"tool": f"pictau {_version()}", "command": args.command, "seed": args.seed,
                         "field": args.field,
                         "cap_plucker_dim": args.cap_plucker_dim, "cap_minor_count": args.cap_minor_count}
        if getattr(args, "action", None):
            self.manifest["action"] = args.action
        self.timings: list[tuple[str, float]] = []

    def emit(self, text: str):
        self.blocks.append(text)

    def stage(self, name: str, fn, *a, **kw):
        t0 = time.perf_counter()
        out = fn(*a, **kw)
        self.timings.append((name, time.perf_counter() - t0))
        return out

    def write(self, out=sys.stdout, err=sys.stderr):
        for b in self.blocks:
            out.write(b.rstrip("\n") + "\n")
        out.write(format_manifest(self.manifest) + "\n")
        # worker count and wall times do not change results, so they stay off stdout
        err.write(f"workers {self.args.workers}\n")
        for name, secs in self.timings:
            err.write(f"timing {name} {secs:.3f}\n")


# -- inputs -------------------------------------------------------------------------------------


def _field(args):
    return parse_field(args.field)


def toy_scheme(name: str, K) -> EmbeddedScheme:
    if name == "p1":
        R = projective_space_ring(1, K)
        return EmbeddedScheme(Ideal([], R), name="P1")
    if name == "twisted-cubic":
        R = projective_space_ring(3, K)
        x0, x1, x2, x3 = R.gens()
        return EmbeddedScheme(Ideal([x0 * x2 - x1 ** 2, x1 * x3 - x2 ** 2, x0 * x3 - x1 * x2], R),
                              name="twisted-cubic")
    if name == "plane-cubic":
        R = projective_space_ring(2, K)
        x0, x1, x2 = R.gens()
        return EmbeddedScheme(Ideal([x0 ** 3 + x1 ** 3 + x2 ** 3], R), name="plane-cubic")
    raise ContractViolation(f"unknown toy {name!r}")


def _read_input(run: Run, path: str) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ContractViolation(f"cannot read {path}: {exc.strerror}") from exc
    run.manifest["input"] = path
    run.manifest["input_sha256"] = sha256_text(text)
    return text


def _scheme(run: Run) -> EmbeddedScheme:
    args = run.args
    if args.toy:
        run.manifest["toy"] = args.toy
        return toy_scheme(args.toy, _field(args))
    if args.input:
        blocks = parse_ideals(_read_input(run, args.input))
        if not blocks:
            raise ContractViolation("input has no ideal block")
        return EmbeddedScheme(blocks[0][1])
    raise ContractViolation("need --toy or --input")


def _group(run: Run) -> gs.GroupSchemePresentation:
    spec = run.args.fixture
    if not spec:
        raise ContractViolation("need --fixture mu:<n> or elliptic:<a>,<b>")
    run.manifest["fixture"] = spec
    K = _field(run.args)
    kind, _, rest = spec.partition(":")
    if kind == "mu":
        return gs.mu_n(int(rest), K)
    if kind == "elliptic":
        a, b = (K.parse(x) for x in rest.split(","))
        return gs.elliptic_curve(a, b, K)
    if kind == "pic-p1":
        return hom.trivial_group(K)
    raise ContractViolation(f"unknown fixture {spec!r}")


def _params(run: Run, X: EmbeddedScheme):
    # explicit --m/--t act like overrides: they may only raise the bounds
    args = run.args
    m = args.m if args.m is not None else args.override_m
    t = args.t if args.t is not None else args.override_t
    p = X.params(m, t)
    return p.m, p.t


def _record_params(run: Run, **kw):
    for k, v in kw.items():
        if v is not None:
            run.manifest[k] = v


# -- commands -----------------------------------------------------------------------------------


def cmd_grass(run: Run):
    args = run.args
    K = _field(args)
    _record_params(run, d=args.d, n=args.n)
    ctx = gm.GrassmannContext((args.d, args.n), K)
    if args.action == "relations":
        run.emit(ctx.header())
        run.emit(format_ideal(run.stage("relations", lambda: ctx.relations), "plucker"))
    elif args.action == "matrix":
        if args.chart:
            alpha = tuple(int(x) for x in args.chart.split(","))
            M = ctx.chart_matrix(alpha)
            run.emit("chart_matrix " + ",".join(map(str, alpha)))
        else:
            M = ctx.plucker_matrix()
            run.emit("plucker_matrix")
        run.emit(format_matrix(M, lambda x: x.format()))
    elif args.action == "convert":
        if not args.input:
            raise ContractViolation("convert needs --input")
        blocks = parse_ideals(_read_input(run, args.input))
        if not blocks:
            raise ContractViolation("input has no ideal block")
        tag, I = blocks[0]
        names = I.ring.names
        if names and all(nm.startswith("s[") for nm in names):
            J = run.stage("stiefel_to_plucker", gm.convert_stiefel_to_plucker, I, ctx, args.workers)
            run.emit(format_ideal(J, "plucker"))
        else:
            J = run.stage("plucker_to_stiefel", gm.convert_plucker_to_stiefel, I, ctx)
            run.emit(format_ideal(J, "stiefel"))


def cmd_gotzmann(run: Run):
    args = run.args
    r = args.r
    if args.points is not None:
        P = NumericalPolynomial([args.points])
    elif args.hypersurface is not None:
        P = NumericalPolynomial.projective_space(r) - NumericalPolynomial.projective_space(r).shift(-args.hypersurface)
    elif args.poly:
        P = NumericalPolynomial([int(c) for c in args.poly.split(",")])
    else:
        raise ContractViolation("need --points, --hypersurface or --poly")
    _record_params(run, r=r)
    Q = NumericalPolynomial.projective_space(r) - P
    phi = gotzmann_number(Q, r)
    if phi == float("inf"):
        raise NotAHilbertPolynomial("not the Hilbert polynomial of a subscheme")
    run.emit(str(phi))
    run.emit(f"P {P.format_power()}")
    run.emit(f"gotzmann {gotzmann_rep(P).format()}")


def _emit_hilb(run: Run, model):
    run.emit(model.format())
    if run.args.emit in ("stiefel", "both"):
        run.emit(format_ideal(run.stage("stiefel", model.stiefel_ideal), "stiefel"))
    if run.args.emit in ("plucker", "both"):
        run.emit(format_ideal(run.stage("plucker", model.plucker_ideal, run.args.workers), "plucker"))
    if model.linear_section is not None and run.args.emit:
        run.emit(format_ideal(model.linear_section, "linear-section"))


def cmd_hilb(run: Run):
    args = run.args
    K = _field(args)
    if args.action == "ik":
        if args.points is None:
            raise ContractViolation("hilb ik needs --points")
        P = NumericalPolynomial([args.points])
        Q = NumericalPolynomial.projective_space(args.r) - P
        t = args.t if args.t is not None else gotzmann_number(Q, args.r)
        _record_params(run, r=args.r, t=t)
        model = ik_equations(Q, t, args.r, K, cap_minor_count=args.cap_minor_count)
        _emit_hilb(run, model)
    else:
        X = _scheme(run)
        m, t = _params(run, X)
        _record_params(run, m=m, t=t)
        Q = NumericalPolynomial.projective_space(X.r) - X.divisor_poly(m)
        model = ik_equations(Q, t, X.r, K, ring=X.ring, cap_minor_count=args.cap_minor_count)
        _emit_hilb(run, restrict_to_X(model, X, m))


def _div(run: Run, X, m, t, symbolic):
    from .picard import identify_div_component
    args = run.args
    return run.stage(f"div_m{m}", identify_div_component, X, m, t, N=args.N, seed=args.seed,
                     cap_plucker_dim=args.cap_plucker_dim, cap_minor_count=args.cap_minor_count,
                     symbolic=symbolic)


def cmd_div(run: Run):
    X = _scheme(run)
    m, t = _params(run, X)
    _record_params(run, m=m, t=t, N=run.args.N)
    div = _div(run, X, m, t, symbolic=not run.args.points_only)
    run.emit(div.format())
    run.emit(f"rational_points {len(div.points())}")


def cmd_pic(run: Run):
    from .picard import group_law, linear_equivalence_relation, picard_quotient
    args = run.args
    X = _scheme(run)
    m, t = _params(run, X)
    symbolic = bool(args.symbolic)
    div = _div(run, X, m, t, symbolic)
    L = None
    if symbolic:
        L = run.stage("relation", linear_equivalence_relation, div, args.cap_minor_count)
    pic = run.stage("quotient", picard_quotient, div, L, args.u, symbolic_graph=symbolic)
    _record_params(run, m=m, t=t, u=pic.u, N=args.N)
    run.emit(pic.format())
    if args.action == "grouplaw":
        div2 = _div(run, X, 2 * m, 2 * t, False)
        law = run.stage("group_law", group_law, pic, div2)
        run.emit(law.format())


def cmd_gs(run: Run):
    args = run.args
    G = _group(run)
    if args.n is not None:
        _record_params(run, n=args.n)
        G = run.stage("torsion", gs.torsion_kernel, G, args.n)
    if args.action == "torsion":
        run.emit(G.format())
        return
    H = run.stage("hopf", gs.hopf_structure, G, args.seed)
    if args.action == "dual":
        H = gs.cartier_dual(H)
    if args.action == "points":
        P = run.stage("points", gs.points_with_galois, H, args.seed)
        run.emit(P.format())
        run.emit(hom.GaloisModule.from_points(P).format())
        return
    run.emit(H.format())
    checks = H.check_axioms()
    for k in sorted(checks):
        run.emit(f"{k} {str(checks[k]).lower()}")


def cmd_homology(run: Run):
    args = run.args
    G = _group(run)
    n = args.n if args.n is not None else 2
    if args.action != "ns-tor":
        _record_params(run, n=n)
    if args.action == "pi1":
        M = run.stage("pi1", hom.pi1_ab_mod_n, G, n, args.seed)
        run.emit(M.format())
        curve = getattr(G, "curve", None)
        if curve is not None:
            p = G.field.characteristic
            pts = None
            if p:
                pts = run.stage("p_torsion", hom.h1_fppf_mu_n, G, p, args.seed).order
            run.emit("pi1ab " + hom.pi1_ab_structure(1, None, p, pts).format())
    elif args.action == "h1-etale":
        run.emit(run.stage("h1_etale", hom.h1_etale, G, n, args.seed).format())
    elif args.action == "h1-fppf":
        run.emit(run.stage("h1_fppf", hom.h1_fppf_mu_n, G, n, args.seed).format())
    else:
        run.emit(run.stage("ns_torsion", hom.ns_torsion, G, args.seed).format())


def cmd_params(run: Run):
    args = run.args
    X = _scheme(run)
    p = X.params(args.override_m, args.override_t)
    run.emit(X.format())
    run.emit(p.format())


COMMANDS = {
    "grass": (cmd_grass, ["relations", "convert", "matrix"]),
    "gotzmann": (cmd_gotzmann, None),
    "hilb": (cmd_hilb, ["ik", "restrict"]),
    "div": (cmd_div, ["identify"]),
    "pic": (cmd_pic, ["quotient", "grouplaw"]),
    "gs": (cmd_gs, ["hopf", "dual", "torsion", "points"]),
    "homology": (cmd_homology, ["pi1", "h1-etale", "h1-fppf", "ns-tor"]),
    "params": (cmd_params, None),
}


def _common(p: argparse.ArgumentParser):
    p.add_argument("--field", default="Q", help="Q, 'Fp 7' or 'ext(Q; y^2-2)'")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--cap-plucker-dim", type=int, default=DEFAULT_CAP_PLUCKER_DIM)
    p.add_argument("--cap-minor-count", type=int, default=DEFAULT_CAP_MINOR_COUNT)
    p.add_argument("--input", help="file with an ideal block")
    p.add_argument("--toy", choices=TOYS)
    p.add_argument("--fixture", help="mu:<n>, elliptic:<a>,<b> or pic-p1")
    p.add_argument("--d", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--N", type=int, default=1)
    p.add_argument("--r", type=int, default=2)
    p.add_argument("--m", type=int)
    p.add_argument("--t", type=int)
    p.add_argument("--u", type=int)
    p.add_argument("--override-m", type=int)
    p.add_argument("--override-t", type=int)
    p.add_argument("--emit", choices=["stiefel", "plucker", "both"])
    p.add_argument("--chart", help="comma-separated Pluecker index, e.g. 0,1,3")
    p.add_argument("--points", type=int)
    p.add_argument("--hypersurface", type=int)
    p.add_argument("--poly", help="quotient Hilbert polynomial coefficients, low degree first")
    p.add_argument("--symbolic", action="store_true", help="also build the symbolic relation and image")
    p.add_argument("--points-only", action="store_true", help="skip the symbolic Div ideal")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pictau", description="Picard scheme pipeline over exact fields")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, actions) in COMMANDS.items():
        p = sub.add_parser(name)
        if actions:
            p.add_argument("action", choices=actions)
        _common(p)
    return parser


def main(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.field.startswith("Fp") and args.field[2:].strip().isdigit():
        args.field = f"Fp {int(args.field[2:])}"
    run = Run(args)
    try:
        COMMANDS[args.command][0](run)
    except BudgetExceeded as exc:
        err.write(exc.report() + "\n")
        return EXIT_BUDGET
    except FieldError as exc:
        err.write(f"unsupported field: {exc}\n")
        return EXIT_FIELD
    except (ContractViolation, ParameterError, NotAHilbertPolynomial, gm.GrassmannError) as exc:
        err.write(f"contract violation: {exc}\n")
        return EXIT_CONTRACT
    run.write(out, err)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
