"""Command-line front end: ``rmquot <command> [options]``.

Exit status: 0 on success, 2 when a checked mathematical claim fails (the
counterexample is part of the output), 1 on bad usage.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from collections.abc import Callable, Sequence
from dataclasses import dataclass

from . import __version__
from .duality import (
    DEFAULT_ORBIT_BUDGET,
    gl_equivalent,
    orbit,
    reproduce_example24,
    verify_duality,
)
from .factors import composition_chain, counting_series, dim_formula, total_length
from .gf import FieldSizeError, make_field
from .glaction import (
    action_matrix_combinatorial,
    action_matrix_direct,
    check_lemma21,
    iter_elements,
)
from .lattice import (
    enumerate_signatures,
    ideals_enumerate,
    module_of_ideal,
    verify_theorem38,
)
from .polyfun import HElement, enumerate_omega, parse_polynomial

EXIT_OK, EXIT_USAGE, EXIT_FALSIFIED = 0, 1, 2
DEFAULT_SEED = 0
DEFAULT_TRIALS = 100
BUDGET_ENV = "RMQUOT_BUDGET"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


@dataclass
class RunConfig:
    command: str
    p: int
    m: int
    n: int
    r: int | None
    seed: int
    trials: int
    budget: int
    json: bool
    out: str | None

    @property
    def q(self) -> int:
        return self.p**self.m

    def field(self):
        return make_field(self.p, self.m)

    def degree(self) -> int:
        if self.r is None:
            raise UsageError(f"'{self.command}' needs --r")
        top = self.n * (self.q - 1)
        if not 0 <= self.r <= top:
            raise UsageError(f"--r must lie in [0, {top}] for q={self.q}, n={self.n}")
        return self.r

    def degrees(self) -> list[int]:
        return [self.degree()] if self.r is not None else list(range(self.n * (self.q - 1) + 1))


@dataclass
class Result:
    payload: object
    text: list[str]
    status: int = EXIT_OK


def _default_budget() -> int:
    raw = os.environ.get(BUDGET_ENV)
    if raw is None:
        return DEFAULT_ORBIT_BUDGET
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"{BUDGET_ENV}={raw!r} is not an integer") from None


def _tup(t) -> str:
    return "(" + ",".join(str(x) for x in t) + ")"


# -- enumeration commands ----------------------------------------------------------------

def cmd_omega(cfg: RunConfig, args) -> Result:
    omega = enumerate_omega(cfg.q, cfg.n, cfg.degree())
    return Result([list(i) for i in omega], [_tup(i) for i in omega] + [f"# {len(omega)} tuples"])


def cmd_tsig(cfg: RunConfig, args) -> Result:
    poset = enumerate_signatures(cfg.q, cfg.n, cfg.degree())
    text = [f"{_tup(t)}  fibre size {len(poset.fibers[t])}" for t in poset]
    return Result([list(t) for t in poset], text + [f"# {len(poset)} signatures"])


def cmd_ideals(cfg: RunConfig, args) -> Result:
    poset = enumerate_signatures(cfg.q, cfg.n, cfg.degree())
    ideals = ideals_enumerate(poset)
    payload, text = [], []
    for k, I in enumerate(ideals):
        dim = len(poset.preimage(I.members))
        payload.append({**I.to_json(), "dim": dim})
        bnd = "{" + ", ".join(_tup(t) for t in I.boundary) + "}"
        text.append(f"{k:3d}  boundary {bnd:<40} size {len(I)}  dim {dim}")
    return Result(payload, text + [f"# {len(ideals)} ideals"])


def _parse_boundary(raw: str, m: int) -> list[tuple[int, ...]]:
    out = []
    for chunk in raw.split(";"):
        chunk = chunk.strip().strip("()")
        if not chunk:
            continue
        try:
            t = tuple(int(x) for x in chunk.split(","))
        except ValueError:
            raise UsageError(f"cannot parse boundary element {chunk!r}") from None
        if len(t) != m:
            raise UsageError(f"boundary element {t} needs {m} entries")
        out.append(t)
    return out


def cmd_submodule(cfg: RunConfig, args) -> Result:
    poset = enumerate_signatures(cfg.q, cfg.n, cfg.degree())
    boundary = _parse_boundary(args.boundary, cfg.m)
    try:
        ideal = poset.down_set(boundary)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    mod = module_of_ideal(poset, ideal, check=False)
    invariant = mod.is_invariant()
    payload = {"ideal": ideal.to_json(), "dim": mod.dim, "invariant": invariant,
               "monomials": [list(i) for i in mod.monomials]}
    text = [f"ideal generated by {', '.join(_tup(t) for t in ideal.boundary) or 'nothing'}",
            f"members: {', '.join(_tup(t) for t in sorted(ideal.members))}",
            f"dim {mod.dim}, generator-invariant: {invariant}"]
    text += ["  " + _tup(i) for i in mod.monomials]
    return Result(payload, text, EXIT_OK if invariant else EXIT_FALSIFIED)


def cmd_chain(cfg: RunConfig, args) -> Result:
    chain = composition_chain(cfg.q, cfg.n, cfg.degree())
    text = [f"length {len(chain)}"]
    for k, step in enumerate(chain.steps):
        text.append(f"step {k + 1}: remove {_tup(step.removed)}  factor dim {step.factor_dim}")
    return Result(chain.to_json(), text)


def cmd_dims(cfg: RunConfig, args) -> Result:
    r = cfg.degree()
    poset = enumerate_signatures(cfg.q, cfg.n, r)
    chain = composition_chain(cfg.q, cfg.n, r)
    payload, text, bad = [], [], []
    for step in chain.steps:
        d = dim_formula(step.removed, cfg.q, cfg.n)
        payload.append({"t": list(step.removed), "dim": d})
        count = len(poset.fibers[step.removed])
        text.append(f"{_tup(step.removed)}  dim {d}")
        if d != count:
            bad.append({"t": list(step.removed), "formula": d, "count": count})
    if bad:
        return Result({"dims": payload, "mismatches": bad},
                      text + [f"MISMATCH {b}" for b in bad], EXIT_FALSIFIED)
    return Result(payload, text)


def cmd_series(cfg: RunConfig, args) -> Result:
    coeffs = counting_series(cfg.q, cfg.n)
    total = total_length(cfg.q, cfg.n)
    counts = [len(enumerate_signatures(cfg.q, cfg.n, r)) for r in range(len(coeffs))]
    ok = sum(coeffs) == total and counts == coeffs
    payload = {"coefficients": coeffs, "signature_counts": counts, "sum": sum(coeffs),
               "total_length": total, "ok": ok}
    text = [f"r={r}: {c}" for r, c in enumerate(coeffs)]
    text.append(f"sum {sum(coeffs)}, total length {total}, matches signature counts: {ok}")
    return Result(payload, text, EXIT_OK if ok else EXIT_FALSIFIED)


# -- orbits ----------------------------------------------------------------------------

def _h_element(cfg: RunConfig, raw: str, flag: str) -> HElement:
    F = cfg.field()
    try:
        poly = parse_polynomial(F, cfg.n, raw)
    except ValueError as exc:
        raise UsageError(f"{flag}: {exc}") from None
    if not poly:
        raise UsageError(f"{flag} must be nonzero")
    r = cfg.r if cfg.r is not None else poly.degree
    if not poly.is_homogeneous(r):
        raise UsageError(f"{flag} must be a nonzero homogeneous polynomial of degree {r}")
    return HElement.from_poly(poly, r)


def cmd_orbit(cfg: RunConfig, args) -> Result:
    h = _h_element(cfg, args.f, "--f")
    orb = orbit(h, cfg.budget)
    elems = sorted(str(x) for x in orb.elements)
    payload = {"f": str(h), "r": h.r, "size": len(orb), "closed": orb.closed, "elements": elems}
    text = [f"orbit of {h} in H_{cfg.q}({h.r},{cfg.n}): size {len(orb)}"
            + ("" if orb.closed else f" (budget {cfg.budget} exhausted)")]
    text += ["  " + e for e in elems]
    return Result(payload, text)


def cmd_equivalent(cfg: RunConfig, args) -> Result:
    f = _h_element(cfg, args.f, "--f")
    g = _h_element(cfg, args.g, "--g")
    if f.r != g.r:
        raise UsageError("--f and --g have different degrees")
    verdict = gl_equivalent(f, g, cfg.budget)
    payload = {"f": str(f), "g": str(g), "r": f.r, "verdict": verdict.value}
    return Result(payload, [f"{f}  ~  {g}: {verdict.value}"])


# -- verification ------------------------------------------------------------------------

def _check_duality(cfg: RunConfig) -> dict:
    F = cfg.field()
    out = {}
    for r in cfg.degrees():
        rep = verify_duality(iter_elements(cfg.n, F, cfg.seed, cfg.trials), r)
        out[str(r)] = rep.to_json()
    return {"ok": all(v["ok"] for v in out.values()), "degrees": out}


def _check_lemma21(cfg: RunConfig) -> dict:
    F = cfg.field()
    out = {}
    for r in cfg.degrees():
        fails, trials = [], 0
        for A in iter_elements(cfg.n, F, cfg.seed, cfg.trials):
            trials += 1
            if not check_lemma21(A, r):
                fails.append(A.to_json())
        out[str(r)] = {"trials": trials, "ok": not fails, "failures": fails}
    return {"ok": all(v["ok"] for v in out.values()), "degrees": out}


def _check_sigma(cfg: RunConfig) -> dict:
    F = cfg.field()
    out = {}
    for r in cfg.degrees():
        fails, trials = [], 0
        for A in iter_elements(cfg.n, F, cfg.seed, cfg.trials):
            trials += 1
            direct = action_matrix_direct(A, r)
            comb = action_matrix_combinatorial(A, r)
            if not (direct == comb).all():
                fails.append({**A.to_json(), "direct": direct.tolist(), "combinatorial": comb.tolist()})
        out[str(r)] = {"trials": trials, "ok": not fails, "failures": fails}
    return {"ok": all(v["ok"] for v in out.values()), "degrees": out}


def _check_theorem38(cfg: RunConfig) -> dict:
    out = {str(r): verify_theorem38(cfg.q, cfg.n, r, seed=cfg.seed).to_json() for r in cfg.degrees()}
    return {"ok": all(v["ok"] for v in out.values()), "degrees": out}


CHECKS: dict[str, Callable[[RunConfig], dict]] = {
    "duality": _check_duality,
    "lemma21": _check_lemma21,
    "sigma": _check_sigma,
    "theorem38": _check_theorem38,
}


def cmd_verify(cfg: RunConfig, args) -> Result:
    names = list(CHECKS) if args.check == "all" else [args.check]
    payload = {name: CHECKS[name](cfg) for name in names}
    ok = all(v["ok"] for v in payload.values())
    text = []
    for name, res in payload.items():
        text.append(f"{name}: {'pass' if res['ok'] else 'FAIL'}")
        for r, rep in res["degrees"].items():
            if not rep["ok"]:
                text.append(f"  r={r}: " + json.dumps(rep, sort_keys=True))
    return Result(payload, text, EXIT_OK if ok else EXIT_FALSIFIED)


# -- reproduction of the worked examples ------------------------------------------------------

# (t0, t1) pairs stand for (t0, t1, 8); representatives are written digit by
# digit and stand for all their coordinate permutations.
GOLDEN_IDEALS_848 = [
    ("I0", [], []),
    ("I1", [(0, 0)], [(0, 0)]),
    ("I2", [(0, 4)], [(0, 0), (0, 4)]),
    ("I3", [(2, 4)], [(0, 0), (0, 4), (2, 4)]),
    ("I4", [(0, 8)], [(0, 0), (0, 4), (0, 8)]),
    ("I5", [(4, 4)], [(0, 0), (0, 4), (2, 4), (4, 4)]),
    ("I6", [(0, 8), (2, 4)], [(0, 0), (0, 4), (0, 8), (2, 4)]),
    ("I7", [(2, 8)], [(0, 0), (0, 4), (0, 8), (2, 4), (2, 8)]),
    ("I8", [(0, 8), (4, 4)], [(0, 0), (0, 4), (0, 8), (2, 4), (4, 4)]),
    ("I9", [(2, 8), (4, 4)], [(0, 0), (0, 4), (0, 8), (2, 4), (2, 8), (4, 4)]),
    ("I10", [(4, 8)], [(0, 0), (0, 4), (0, 8), (2, 4), (2, 8), (4, 4), (4, 8)]),
]
_R1 = ["4400"]
_R2 = _R1 + ["6200", "4220"]
_R3 = _R2 + ["7100", "6110", "5300", "5210", "4310", "4211"]
_R4 = _R2 + ["2222"]
_R6 = _R4 + _R3[3:]
_R7 = _R6 + ["3320", "3221"]
GOLDEN_PREIMAGES_848 = {
    "I0": [], "I1": _R1, "I2": _R2, "I3": _R3, "I4": _R4, "I5": _R3 + ["5111"],
    "I6": _R6, "I7": _R7, "I8": _R6 + ["5111"], "I9": _R7 + ["5111"],
    "I10": None,  # all of Omega_{8,4,8}
}
OMEGA_848_SIZE = 161


def _rep(i) -> str:
    return "".join(str(x) for x in sorted(i, reverse=True))


def reproduce_example39() -> dict:
    q, n, r = 8, 4, 8
    poset = enumerate_signatures(q, n, r)
    omega = enumerate_omega(q, n, r)
    ideals = {I.members: I for I in ideals_enumerate(poset)}
    rows, mismatches = [], []
    if len(ideals) != len(GOLDEN_IDEALS_848):
        mismatches.append({"what": "ideal count", "expected": len(GOLDEN_IDEALS_848),
                           "got": len(ideals)})
    for label, boundary, members in GOLDEN_IDEALS_848:
        members3 = frozenset((a, b, r) for a, b in members)
        expected_boundary = sorted((a, b, r) for a, b in boundary)
        I = ideals.get(members3)
        if I is None:
            mismatches.append({"what": "ideal", "label": label, "expected": sorted(members3)})
            continue
        if sorted(I.boundary) != expected_boundary:
            mismatches.append({"what": "boundary", "label": label, "expected": expected_boundary,
                               "got": sorted(I.boundary)})
        pre = poset.preimage(I.members)
        reps = sorted({_rep(i) for i in pre}, reverse=True)
        golden = GOLDEN_PREIMAGES_848[label]
        expected_reps = (sorted({_rep(i) for i in omega}, reverse=True) if golden is None
                         else sorted(golden, reverse=True))
        if reps != expected_reps:
            mismatches.append({"what": "preimage", "label": label, "expected": expected_reps,
                               "got": reps})
        if golden is None and len(pre) != OMEGA_848_SIZE:
            mismatches.append({"what": "omega size", "expected": OMEGA_848_SIZE, "got": len(pre)})
        rows.append({"label": label, "boundary": [list(t) for t in I.boundary],
                     "members": [list(t) for t in sorted(I.members)], "representatives": reps,
                     "size": len(pre)})
    return {"q": q, "n": n, "r": r, "ideals": rows, "mismatches": mismatches, "ok": not mismatches}


def cmd_reproduce(cfg: RunConfig, args) -> Result:
    if args.example == "example-2.4":
        res = reproduce_example24(cfg.budget)
        text = [f"{claim}: {'pass' if ok else 'FAIL'}" for claim, ok in res["claims"].items()]
        text.append(f"orbit sizes: {res['orbit_sizes']}")
    else:
        res = reproduce_example39()
        text = []
        for row in res["ideals"]:
            bnd = "{" + ", ".join(_tup(t) for t in row["boundary"]) + "}"
            text.append(f"{row['label']:>4}  {bnd:<34} |T^-1| = {row['size']:3d}  "
                        + ", ".join(row["representatives"]))
        text += [f"MISMATCH {json.dumps(mm, sort_keys=True)}" for mm in res["mismatches"]]
        text.append("all rows match" if res["ok"] else "golden comparison failed")
    return Result(res, text, EXIT_OK if res["ok"] else EXIT_FALSIFIED)


# -- plumbing ------------------------------------------------------------------------

COMMANDS = {
    "omega": (cmd_omega, "list Omega_{q,n,r} in lexicographic order"),
    "tsig": (cmd_tsig, "list the signatures T(Omega_{q,n,r})"),
    "ideals": (cmd_ideals, "list the ideals of the signature poset"),
    "submodule": (cmd_submodule, "monomial basis of the submodule for an ideal"),
    "chain": (cmd_chain, "composition chain by peeling maximal signatures"),
    "dims": (cmd_dims, "dimensions of the composition factors"),
    "series": (cmd_series, "number of signatures per degree, and their total"),
    "orbit": (cmd_orbit, "GL-orbit of a homogeneous polynomial"),
    "equivalent": (cmd_equivalent, "decide GL-equivalence of two polynomials"),
    "verify": (cmd_verify, "run the verifiers"),
    "reproduce": (cmd_reproduce, "recompute a worked example and compare"),
}


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    g = common.add_argument_group("parameters")
    g.add_argument("--p", type=int, default=2, help="field characteristic (default: 2)")
    g.add_argument("--m", type=int, default=1, help="q = p^m (default: 1)")
    g.add_argument("--n", type=int, default=2, help="number of variables (default: 2)")
    g.add_argument("--r", type=int, default=None, help="degree (required where it matters)")
    g.add_argument("--seed", type=int, default=DEFAULT_SEED,
                   help=f"seed for sampled group elements (default: {DEFAULT_SEED})")
    g.add_argument("--trials", type=int, default=DEFAULT_TRIALS,
                   help="sampled elements when GL(n, F_q) has more than 10^4 elements "
                        f"(default: {DEFAULT_TRIALS})")
    g.add_argument("--budget", type=int, default=None,
                   help=f"orbit size limit (default: ${BUDGET_ENV} or {DEFAULT_ORBIT_BUDGET})")
    g.add_argument("--json", action="store_true", help="emit canonical JSON")
    g.add_argument("--out", default=None, help="write output to this file instead of stdout")

    parser = _Parser(prog="rmquot", description="Submodules of Reed-Muller quotient modules.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name, (_, help_text) in COMMANDS.items():
        sp = sub.add_parser(name, parents=[common], help=help_text, description=help_text)
        if name == "submodule":
            sp.add_argument("--boundary", required=True,
                            help="maximal signatures, e.g. '0,4,8;2,4,8' (empty for the zero module)")
        elif name == "orbit":
            sp.add_argument("--f", required=True, help="polynomial, e.g. 'X1^3*X2'")
        elif name == "equivalent":
            sp.add_argument("--f", required=True)
            sp.add_argument("--g", required=True)
        elif name == "verify":
            sp.add_argument("check", choices=[*CHECKS, "all"])
        elif name == "reproduce":
            sp.add_argument("example", choices=["example-2.4", "example-3.9"])
    return parser


def emit(result: Result, as_json: bool) -> str:
    if as_json:
        return json.dumps(result.payload, sort_keys=True, indent=2) + "\n"
    return "\n".join(result.text) + "\n"


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        budget = args.budget if args.budget is not None else _default_budget()
        if budget < 1 or args.trials < 1:
            raise UsageError("--budget and --trials must be positive")
        cfg = RunConfig(args.command, args.p, args.m, args.n, args.r, args.seed, args.trials,
                        budget, args.json, args.out)
        if cfg.n < 1:
            raise UsageError("--n must be positive")
        cfg.field()
        result = COMMANDS[args.command][0](cfg, args)
    except (UsageError, ValueError, FieldSizeError) as exc:
        print(f"rmquot: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    text = emit(result, cfg.json)
    if cfg.out:
        try:
            with open(cfg.out, "w", encoding="utf-8") as fh:
                fh.write(text)
        except OSError as exc:
            print(f"rmquot: error: cannot write {cfg.out}: {exc}", file=sys.stderr)
            return EXIT_USAGE
    else:
        sys.stdout.write(text)
    return result.status


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
