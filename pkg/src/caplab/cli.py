"""Command-line surface for the capacity library.

Subcommands: ``capacity`` (global capacity reports, threshold queries,
witnesses), ``snf`` (exact Smith normal form), ``localize`` (module at
a prime), ``classgroup`` (class-group tables), ``glq`` (determinant-one
congruence matrices), ``oracle`` (brute-force finite-module capacities),
and ``verify-bounds`` (seeded random harness for the bound package).

Exit codes: 0 success; 1 a verified property failed (a bug, not bad
input); 2 malformed input; 3 work budget exceeded.  JSON output is
byte-identical for identical inputs and seeds.  The environment
variable ``CAPLAB_BUDGET`` overrides the factorization work budget.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from typing import Optional

from . import globalcap as G
from . import glq as Q
from . import modules as M
from . import numtheory
from . import oracle as O
from . import rings as R
from . import snf as S
from .modules import INFINITY

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_BAD_INPUT = 2
EXIT_BUDGET = 3


@dataclass(frozen=True)
class RunConfig:
    """Execution knobs shared by the subcommands."""

    fmt: str = "human"
    seed: int = 0
    trials: int = 100
    factor_budget: Optional[int] = None  # None = library default
    oracle_cap: int = O.DEFAULT_SIZE_CAP

    def __post_init__(self) -> None:
        if self.fmt not in ("human", "json"):
            raise ValueError(f"unknown output format {self.fmt!r}")
        if self.trials <= 0:
            raise ValueError("trials must be positive")
        if self.factor_budget is not None and self.factor_budget <= 0:
            raise ValueError("budget must be positive")
        if self.oracle_cap <= 0:
            raise ValueError("oracle size cap must be positive")


def _config_from(args: argparse.Namespace) -> RunConfig:
    budget = getattr(args, "budget", None)
    if budget is None:
        env = os.environ.get("CAPLAB_BUDGET")
        if env is not None:
            try:
                budget = int(env)
            except ValueError:
                raise ValueError(f"CAPLAB_BUDGET must be an integer, got {env!r}") from None
    return RunConfig(
        fmt=getattr(args, "format", "human"),
        seed=getattr(args, "seed", 0),
        trials=getattr(args, "trials", 100),
        factor_budget=budget,
        oracle_cap=getattr(args, "cap", O.DEFAULT_SIZE_CAP),
    )


# ---------------------------------------------------------------------------
# input parsing
# ---------------------------------------------------------------------------


def _load_json(text: str, what: str):
    """Parse inline JSON or read a JSON file; errors carry positions."""
    stripped = text.strip()
    if stripped.startswith(("{", "[")):
        try:
            return json.loads(stripped)
        except json.JSONDecodeError as exc:
            raise ValueError(f"{what}: malformed JSON: {exc}") from None
    try:
        with open(stripped, encoding="utf-8") as fh:
            body = fh.read()
    except OSError as exc:
        raise ValueError(f"{what}: cannot read file {stripped!r}: {exc}") from None
    try:
        return json.loads(body)
    except json.JSONDecodeError as exc:
        raise ValueError(f"{what} ({stripped}): malformed JSON: {exc}") from None


def parse_module(text: str) -> M.FGModule:
    """A module descriptor: inline ``Z:rank+[d1,d2,...]``, JSON, or a path.

    >>> parse_module("Z:1+[4,2]").rank
    1
    >>> parse_module("Z:2").torsion
    ()
    """
    stripped = text.strip()
    if stripped.startswith("Z:"):
        body = stripped[2:]
        rank_part, sep, tors_part = body.partition("+")
        try:
            rank = int(rank_part)
        except ValueError:
            raise ValueError(f"module {stripped!r}: bad rank {rank_part!r}") from None
        divisors = []
        if sep:
            try:
                divisors = json.loads(tors_part)
            except json.JSONDecodeError as exc:
                raise ValueError(f"module {stripped!r}: bad divisor list: {exc}") from None
            if not isinstance(divisors, list) or not all(
                isinstance(d, int) for d in divisors
            ):
                raise ValueError(f"module {stripped!r}: divisors must be integers")
        return M.z_module(rank, divisors)
    return M.module_from_json(_load_json(stripped, "module"))


def parse_ring(text: str) -> R.Ring:
    """A ring descriptor: ``Z``, ``zmod:N``, ``quad:D``, JSON, or a path."""
    stripped = text.strip()
    if stripped == "Z":
        return R.ZRing()
    for prefix, build in (("zmod:", R.ZModRing), ("quad:", R.QuadraticRing)):
        if stripped.startswith(prefix):
            try:
                value = int(stripped[len(prefix):])
            except ValueError:
                raise ValueError(f"ring {stripped!r}: expected an integer parameter") from None
            return build(value)
    return R.ring_from_json(_load_json(stripped, "ring"))


def parse_matrix(text: str) -> S.Mat:
    data = _load_json(text, "matrix")
    if not isinstance(data, list) or not all(isinstance(row, list) for row in data):
        raise ValueError("matrix: expected a list of rows")
    for i, row in enumerate(data):
        if not all(isinstance(x, int) for x in row):
            raise ValueError(f"matrix: row {i} has a non-integer entry")
    return S.mat(data)


def _parse_orders(text: str, p: int) -> tuple[int, ...]:
    """Comma-separated cyclic orders, all powers of p; empty = zero module."""
    stripped = text.strip()
    if not stripped:
        return ()
    try:
        orders = tuple(int(x) for x in stripped.split(","))
    except ValueError:
        raise ValueError(f"orders {text!r}: expected comma-separated integers") from None
    for q in orders:
        v = numtheory.valuation(q, p) if q > 1 else 0
        if q < 2 or p**v != q:
            raise ValueError(f"orders {text!r}: {q} is not a power of {p}")
    return orders


# ---------------------------------------------------------------------------
# output
# ---------------------------------------------------------------------------


def _emit(cfg: RunConfig, payload: dict, human: list[str]) -> None:
    if cfg.fmt == "json":
        print(json.dumps(payload, sort_keys=True, separators=(",", ":")))
    else:
        for line in human:
            print(line)


def _fmt_value(v) -> str:
    return "infinity" if v == INFINITY else str(int(v))


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def cmd_capacity(args: argparse.Namespace, cfg: RunConfig) -> int:
    m = parse_module(args.M)
    n = parse_module(args.N)
    rep = G.capacity(args.kind, m, n)
    payload = {"report": rep.to_json()}
    human = [
        f"{args.kind}(M, N) = {_fmt_value(rep.value)}",
        f"decided by: {rep.condition_used}",
    ]
    if rep.local_values:
        pretty = ", ".join(
            f"{k} -> {_fmt_value(v)}" for k, v in sorted(rep.local_values.items())
        )
        human.append(f"local values: {pretty}")
    rd = rep.rank_data
    human.append(f"ranks: r={rd.r} s={rd.s} r/s={_fmt_value(rd.t_rank)}")
    if rep.class_check is not None:
        word = "equal" if rep.class_check.equal else "different"
        human.append(f"class check at t={rep.class_check.t}: {word}")

    witness_t: Optional[int] = None
    if args.geq is not None:
        if args.geq < 0:
            raise ValueError("--geq takes a nonnegative threshold")
        holds = G.clause_holds(args.kind, m, n, args.geq)
        payload["geq"] = {"t": args.geq, "holds": holds}
        human.append(f"capacity >= {args.geq}: {'yes' if holds else 'no'}")
        if args.witness and holds:
            witness_t = args.geq
    elif args.witness:
        witness_t = int(rep.value) if rep.value != INFINITY else 1
    if witness_t is not None:
        w = G.witness(args.kind, m, n, witness_t)
        payload["witness"] = w.to_json()
        human.append(f"witness verified at t={witness_t}:")
        human.extend(f"  {row}" for row in w.matrix.tolists())
    _emit(cfg, payload, human)
    return EXIT_OK


def cmd_snf(args: argparse.Namespace, cfg: RunConfig) -> int:
    a = parse_matrix(args.A)
    res = S.snf(a)
    if S.mat_mul(S.mat_mul(res.U, a), res.V) != res.D:
        raise RuntimeError("transform product does not reproduce the diagonal")
    payload = {
        "D": res.D.tolists(),
        "U": res.U.tolists(),
        "V": res.V.tolists(),
        "diagonal": list(res.D.diagonal()),
    }
    human = [
        f"diagonal: {list(res.D.diagonal())}",
        f"U = {res.U.tolists()}",
        f"V = {res.V.tolists()}",
    ]
    _emit(cfg, payload, human)
    return EXIT_OK


def cmd_localize(args: argparse.Namespace, cfg: RunConfig) -> int:
    m = parse_module(args.M)
    prime = R.parse_prime_key(m.ring, args.prime)
    loc = M.localize(m, prime)
    payload = {
        "prime": R.prime_key(prime),
        "local": M.local_module_to_json(loc),
    }
    human = [
        f"M at {R.prime_key(prime)}: free rank {loc.free_rank}, "
        f"exponents {list(loc.exps)}"
    ]
    _emit(cfg, payload, human)
    return EXIT_OK


def cmd_classgroup(args: argparse.Namespace, cfg: RunConfig) -> int:
    ring = parse_ring(args.ring)
    table = R.class_group_table(ring)
    payload = {
        "order": table.order,
        "invariantFactors": list(table.invariant_factors),
        "generators": [
            {"element": M._steinitz_to_json(g), "order": k}
            for g, k in table.generators
        ],
        "elements": [M._steinitz_to_json(c) for c in table.elements],
    }
    human = [
        f"class group order {table.order}",
        f"invariant factors: {list(table.invariant_factors)}",
    ]
    for g, k in table.generators:
        human.append(f"generator of order {k}: {M._steinitz_to_json(g)}")
    _emit(cfg, payload, human)
    return EXIT_OK


def cmd_glq(args: argparse.Namespace, cfg: RunConfig) -> int:
    lambdas = Q.parse_lambda_spec(args.n, args.lambdas)
    inst = Q.GLQInstance(args.n, lambdas, a=args.a)
    res = Q.build_glq(inst)
    verification = Q.verify_glq(inst, res)
    payload = {
        "n": args.n,
        "lambdas": [list(t) for t in lambdas],
        "a": args.a,
        "result": res.to_json(),
        "verification": verification.to_json(),
    }
    human = ["Q ="]
    human.extend(f"  {row}" for row in res.q.tolists())
    human.append(f"s = {list(res.s)}")
    human.append(f"b = {res.b}")
    human.append(f"verification: {'all checks pass' if verification.ok else 'FAILED'}")
    _emit(cfg, payload, human)
    return EXIT_OK if verification.ok else EXIT_VIOLATION


def cmd_oracle(args: argparse.Namespace, cfg: RunConfig) -> int:
    orders_a = _parse_orders(args.A, args.p)
    orders_b = _parse_orders(args.B, args.p)
    a = O.finite_module(orders_a)
    b = O.finite_module(orders_b)
    value = O.oracle_capacity(args.kind, a, b, cap=cfg.oracle_cap)
    payload = {
        "kind": args.kind,
        "p": args.p,
        "A": list(orders_a),
        "B": list(orders_b),
        "value": M.capacity_to_json(value),
    }
    human = [f"oracle {args.kind}(A, B) = {_fmt_value(value)}"]
    _emit(cfg, payload, human)
    return EXIT_OK


def cmd_verify_bounds(args: argparse.Namespace, cfg: RunConfig) -> int:
    ring = parse_ring(args.ring)
    if not isinstance(ring, (R.ZRing, R.ZModRing)):
        raise ValueError("verify-bounds runs over the Z or Z/n backends only")
    profile = O.InstanceProfile(ring=R.ring_to_json(ring))
    violations = 0
    first_violation = None
    tightest = (INFINITY, None)
    for i in range(cfg.trials):
        trial_seed = cfg.seed + i
        m, n = O.random_instance(trial_seed, profile)
        items = G.bound_report(m, n)
        broken = G.bound_violations(items)
        if broken and first_violation is None:
            first_violation = (trial_seed, m, n, broken)
        violations += len(broken)
        slack = G.tightest_slack(items)
        if slack < tightest[0]:
            tightest = (slack, (trial_seed, m, n))
    payload = {
        "seed": cfg.seed,
        "trials": cfg.trials,
        "violations": violations,
    }
    human = [f"seed {cfg.seed}, {cfg.trials} trials, {violations} violations"]
    if tightest[1] is not None:
        trial_seed, m, n = tightest[1]
        payload["tightest"] = {
            "slack": M.capacity_to_json(tightest[0]),
            "seed": trial_seed,
            "m": M.module_to_json(m),
            "n": M.module_to_json(n),
        }
        human.append(f"tightest slack {_fmt_value(tightest[0])} at seed {trial_seed}")
    if first_violation is not None:
        trial_seed, m, n, broken = first_violation
        payload["firstViolation"] = {
            "seed": trial_seed,
            "m": M.module_to_json(m),
            "n": M.module_to_json(n),
            "items": [item.to_json() for item in broken],
        }
        human.append(f"FIRST VIOLATION at seed {trial_seed}: {broken[0].name}")
    _emit(cfg, payload, human)
    return EXIT_VIOLATION if violations else EXIT_OK


# ---------------------------------------------------------------------------
# parser assembly
# ---------------------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="caplab",
        description="Exact capacities of finitely generated modules.",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--format", choices=("human", "json"), default="human",
        help="output format (default: human)",
    )
    common.add_argument(
        "--budget", type=int, default=None,
        help="factorization work budget (overrides CAPLAB_BUDGET)",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("capacity", parents=[common], help="global capacity report")
    p.add_argument("--kind", choices=G.KINDS, required=True)
    p.add_argument("-M", required=True, help="source module (inline, JSON, or path)")
    p.add_argument("-N", required=True, help="target module (inline, JSON, or path)")
    p.add_argument("--geq", type=int, default=None, help="test capacity >= t")
    p.add_argument("--witness", action="store_true", help="attach a verified witness")
    p.set_defaults(handler=cmd_capacity)

    p = sub.add_parser("snf", parents=[common], help="Smith normal form")
    p.add_argument("-A", required=True, help="integer matrix (JSON or path)")
    p.set_defaults(handler=cmd_snf)

    p = sub.add_parser("localize", parents=[common], help="module at a prime")
    p.add_argument("-M", required=True)
    p.add_argument("-p", "--prime", required=True, help='prime key, e.g. 2 or "(0)"')
    p.set_defaults(handler=cmd_localize)

    p = sub.add_parser("classgroup", parents=[common], help="class-group table")
    p.add_argument("--ring", required=True, help='ring, e.g. "quad:-23"')
    p.set_defaults(handler=cmd_classgroup)

    p = sub.add_parser("glq", parents=[common], help="determinant-one congruence matrix")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--lambda", dest="lambdas", default="", help='prime sets, e.g. "1:2,5;2:3"')
    p.add_argument("--a", type=int, default=1, help="first-row seed (default 1)")
    p.set_defaults(handler=cmd_glq)

    p = sub.add_parser("oracle", parents=[common], help="brute-force finite-module engine")
    p.add_argument("operation", choices=("capacity",))
    p.add_argument("--kind", choices=G.KINDS, required=True)
    p.add_argument("-A", required=True, help='cyclic orders, e.g. "4,2"')
    p.add_argument("-B", required=True, help='cyclic orders, e.g. "2"')
    p.add_argument("-p", type=int, required=True, help="the prime")
    p.add_argument("--cap", type=int, default=O.DEFAULT_SIZE_CAP, help="size cap")
    p.set_defaults(handler=cmd_oracle)

    p = sub.add_parser("verify-bounds", parents=[common], help="seeded bound harness")
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--ring", default="Z", help='instance backend: "Z" or "zmod:N"')
    p.set_defaults(handler=cmd_verify_bounds)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = _config_from(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT
    saved_budget = numtheory.DEFAULT_BUDGET
    if cfg.factor_budget is not None:
        numtheory.DEFAULT_BUDGET = cfg.factor_budget
    try:
        return args.handler(args, cfg)
    except (numtheory.FactorizationBudgetError, O.SizeCapExceeded) as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except RuntimeError as exc:
        print(f"verification failure: {exc}", file=sys.stderr)
        return EXIT_VIOLATION
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT
    finally:
        numtheory.DEFAULT_BUDGET = saved_budget


if __name__ == "__main__":
    sys.exit(main())
