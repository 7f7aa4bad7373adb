"""``mpsh`` command line: verify-paper, sweep, search, radial, perturb.

Exit codes: 0 success, 1 usage error, 2 a claim failed, 3 internal error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from . import __version__
from .errors import PreconditionError
from .report import fmt_rational, to_csv, to_text

EXIT_OK, EXIT_USAGE, EXIT_CLAIM, EXIT_INTERNAL = 0, 1, 2, 3
CONFIG_ENV = "MPSH_CONFIG"

# global flags and their defaults; None in the parsed namespace means "unset"
GLOBAL_DEFAULTS = {"seed": 0, "tolerance": 1e-9, "format": "json", "out": None, "budget": 10**6}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _u64(text: str) -> int:
    v = int(text)
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError("seed must fit in an unsigned 64-bit integer")
    return v


def _positive_int(text: str) -> int:
    v = int(text)
    if v <= 0:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return v


def _positive_fraction(text: str) -> Fraction:
    try:
        v = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")
    if v <= 0:
        raise argparse.ArgumentTypeError("alpha must be positive")
    return v


def _float_list(text: str) -> list:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated list of numbers: {text!r}")


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    g = common.add_argument_group("global options")
    g.add_argument("--seed", type=_u64, default=None, help="root RNG seed (default 0)")
    g.add_argument("--tolerance", type=float, default=None, help="relative tolerance for float claims (default 1e-9)")
    g.add_argument("--format", choices=("json", "csv", "text"), default=None, help="output format (default json)")
    g.add_argument("--out", default=None, help="write output to this path instead of stdout")
    g.add_argument("--budget", type=_positive_int, default=None, help="search evaluation budget (default 1e6)")
    g.add_argument("--config", default=None, help=f"JSON file of flag values; also via ${CONFIG_ENV}")

    parser = _Parser(prog="mpsh", description="Experiments on m-subharmonic and m-psh spectra.")
    parser.add_argument("--version", action="version", version=f"mpsh {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("verify-paper", parents=[common], help="check every shipped claim")
    p.add_argument("--samples", type=_positive_int, default=None, help="Monte Carlo samples (default 1e7)")
    p.add_argument("--timing", action="store_true", default=None, help="record per-claim runtimes")

    p = sub.add_parser("sweep", parents=[common], help="ratio table over admissible (p, k, n)")
    p.add_argument("--n-max", type=_positive_int, default=None)

    p = sub.add_parser("search", parents=[common], help="look for an A-k but not B-k spectrum")
    p.add_argument("--n", type=_positive_int, default=None)
    p.add_argument("--k", type=_positive_int, default=None)

    p = sub.add_parser("radial", parents=[common], help="radial integrals and the comparison inequality")
    p.add_argument("--n", type=_positive_int, default=None)
    p.add_argument("--m", type=_positive_int, default=None)
    p.add_argument("--alpha", type=_positive_fraction, default=None)
    p.add_argument("--A-list", dest="A_list", type=_float_list, default=None, help="e.g. 1,10,100,1e4")

    p = sub.add_parser("perturb", parents=[common], help="eigenvalue perturbation as a_n grows")
    p.add_argument("--a", type=_float_list, default=None, help="leading coefficients a_1..a_{n-1}")
    p.add_argument("--z", type=_float_list, default=None, help="real evaluation point")
    p.add_argument("--a-n", dest="a_n", type=_float_list, default=None)
    p.add_argument("--chi", choices=("bump", "zero"), default=None)
    return parser


COMMAND_DEFAULTS = {
    "verify-paper": {"samples": 10**7, "timing": False},
    "sweep": {"n_max": 7},
    "search": {"n": 11, "k": 3},
    "radial": {"n": 3, "m": 2, "alpha": Fraction(1), "A_list": [1.0, 10.0, 100.0, 1e3, 1e4]},
    "perturb": {"a": [1.0, 2.0], "z": [0.3, 0.2, 0.1], "a_n": [10.0, 100.0, 1e3, 1e4], "chi": "bump"},
}

_CONVERTERS = {"alpha": _positive_fraction, "seed": _u64}


def resolve(ns: argparse.Namespace, environ=os.environ) -> argparse.Namespace:
    """Merge flags over the config file over built-in defaults."""
    path = ns.config or environ.get(CONFIG_ENV)
    cfg = {}
    if path:
        try:
            with open(path, encoding="utf-8") as fh:
                cfg = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read config {path!r}: {exc}")
        if not isinstance(cfg, dict):
            raise UsageError("config must be a JSON object")
        cfg = {k.replace("-", "_"): v for k, v in cfg.items()}
    defaults = {**GLOBAL_DEFAULTS, **COMMAND_DEFAULTS[ns.command]}
    for key, default in defaults.items():
        if getattr(ns, key, None) is None:
            value = cfg.get(key, default)
            if key in _CONVERTERS and key in cfg:
                try:
                    value = _CONVERTERS[key](str(value))
                except argparse.ArgumentTypeError as exc:
                    raise UsageError(f"config {key}: {exc}")
            setattr(ns, key, value)
    return ns


# ---------------------------------------------------------------------------
# commands: each returns (text, exit code)
# ---------------------------------------------------------------------------


def _table(ns, header, rows, doc) -> str:
    if ns.format == "csv":
        return to_csv(header, rows)
    if ns.format == "text":
        return to_text(header, rows)
    return json.dumps(doc, indent=2) + "\n"


def cmd_verify_paper(ns):
    from .report import verify_paper

    rep = verify_paper(seed=ns.seed, tolerance=ns.tolerance, samples=ns.samples, timing=bool(ns.timing))
    header = ["id", "anchor", "expected", "computed", "verdict", "runtime_ms", "detail"]
    rows = [[c.id, c.anchor, c.expected, c.computed, c.verdict, "" if c.runtime_ms is None else c.runtime_ms, c.detail] for c in rep.claims]
    if ns.format == "json":
        text = rep.to_json()
    else:
        rows.append(["overall", "", "", "", rep.overall, "", ""])
        text = _table(ns, header, rows, None)
    if any(c.verdict == "error" for c in rep.claims):
        return text, EXIT_INTERNAL
    return text, EXIT_OK if rep.overall == "pass" else EXIT_CLAIM


def cmd_sweep(ns):
    from .cones import theorem1_sweep

    rows = theorem1_sweep(ns.n_max)
    header = ["p", "k", "n", "ratio", "passes"]
    table = [[r.p, r.k, r.n, fmt_rational(r.ratio), "true" if r.passes else "false"] for r in rows]
    doc = {
        "n_max": ns.n_max,
        "rows": [{"p": r.p, "k": r.k, "n": r.n, "ratio": fmt_rational(r.ratio), "passes": r.passes} for r in rows],
    }
    return _table(ns, header, table, doc), EXIT_OK


def cmd_search(ns):
    from .witness import SearchConfig, general_search

    if not 1 <= ns.k <= ns.n:
        raise UsageError(f"need 1 <= k <= n, got n={ns.n}, k={ns.k}")
    res = general_search(SearchConfig(ns.n, ns.k, budget=ns.budget, seed=ns.seed))
    if res.certificate is not None:
        doc = {"status": "witness", "seed": ns.seed, "evaluations": res.evaluations, "certificate": res.certificate.to_dict()}
    else:
        doc = {
            "status": "no-witness",
            "n": ns.n,
            "k": ns.k,
            "seed": ns.seed,
            "budget": ns.budget,
            "evaluations": res.evaluations,
            "restarts": res.restarts,
            "best_margin": res.best_objective,
            "best_spectrum": list(res.best_spectrum),
        }
    if ns.format == "json":
        return json.dumps(doc, indent=2) + "\n", EXIT_OK
    rows = [[k, json.dumps(v) if isinstance(v, (list, dict)) else v] for k, v in doc.items()]
    return _table(ns, ["field", "value"], rows, doc), EXIT_OK


def _num(x) -> str:
    import mpmath

    return mpmath.nstr(x, 17)


def cmd_radial(ns):
    from .radial import ball_integral, chi_A, chi_a_limit, outcome_inequality

    if not 1 <= ns.m <= ns.n:
        raise UsageError(f"need 1 <= m <= n, got n={ns.n}, m={ns.m}")
    out = outcome_inequality(ns.n, ns.m, ns.alpha)
    alpha = float(ns.alpha)
    traj = [(A, ball_integral(chi_A(A), ns.n, ns.m, alpha).value) for A in ns.A_list]
    limit = chi_a_limit(ns.n, ns.m, alpha)
    doc = {
        "n": ns.n,
        "m": ns.m,
        "alpha": fmt_rational(ns.alpha),
        "lhs": _num(out.lhs),
        "rhs": _num(out.rhs),
        "reduced_lhs": _num(out.reduced_lhs),
        "reduced_rhs": _num(out.reduced_rhs),
        "holds": out.holds,
        "equality": out.equality,
        "limit": limit,
        "trajectory": [{"A": A, "integral": v} for A, v in traj],
    }
    rows = [
        ["lhs", "", doc["lhs"]],
        ["rhs", "", doc["rhs"]],
        ["reduced_lhs", "", doc["reduced_lhs"]],
        ["reduced_rhs", "", doc["reduced_rhs"]],
        ["holds", "", str(out.holds).lower()],
        ["equality", "", str(out.equality).lower()],
        ["limit", "", repr(limit)],
    ] + [["chi_A", repr(A), repr(v)] for A, v in traj]
    return _table(ns, ["quantity", "A", "value"], rows, doc), EXIT_OK


def cmd_perturb(ns):
    from .hermitian import BUMP_FIELD, ZERO_FIELD, PerturbedQuadratic, perturbation_experiment

    if len(ns.z) != len(ns.a) + 1:
        raise UsageError("--z needs one more coordinate than --a")
    chi = BUMP_FIELD if ns.chi == "bump" else ZERO_FIELD
    f = PerturbedQuadratic(tuple(ns.a) + (ns.a_n[0],), chi)
    try:
        t = perturbation_experiment(f, ns.z, ns.a_n)
    except PreconditionError as exc:
        raise UsageError(str(exc))
    header = ["a_n"] + [f"err_{j + 1}" for j in range(len(ns.a))] + ["lambda_n_err", "max_err"]
    rows = [[r.a_n, *r.eigen_errors, r.lambda_n_error, r.max_error] for r in t.rows]
    doc = {
        "chi": ns.chi,
        "rows": [{"a_n": r.a_n, "eigen_errors": list(r.eigen_errors), "lambda_n_error": r.lambda_n_error} for r in t.rows],
        "decay_ratio": t.decay_ratio(),
        "empirical_rate": t.empirical_rate(),
        "monotone": t.is_monotone(),
    }
    return _table(ns, header, rows, doc), EXIT_OK


COMMANDS = {
    "verify-paper": cmd_verify_paper,
    "sweep": cmd_sweep,
    "search": cmd_search,
    "radial": cmd_radial,
    "perturb": cmd_perturb,
}


def main(argv=None) -> int:
    try:
        ns = resolve(build_parser().parse_args(argv))
        text, code = COMMANDS[ns.command](ns)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except Exception as exc:  # anything else is a bug or numerical breakdown
        print(f"mpsh: internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    if ns.out:
        with open(ns.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
