"""Command-line interface.

Exit codes: 0 success (and verdict true for checks), 1 verdict false,
2 usage or input error.
"""

from __future__ import annotations

import argparse
import json
import sys as _sys
from fractions import Fraction
from typing import Callable, Sequence

from . import analysis, cryptosystem as cs, oracle, secrecy, specfile
from .errors import SecrecyLabError
from .probability import Dist, format_prob, parse_prob

EXIT_OK, EXIT_FALSE, EXIT_USAGE = 0, 1, 2

DEFAULT_TRIALS = 10**6
DEFAULT_TOL = "0.005"


class UsageError(Exception):
    pass


# --- rendering ----------------------------------------------------------------

def fmt(p: Fraction) -> str:
    """Exact value plus a 6-decimal approximation (display only)."""
    return f"{format_prob(p)} ({float(p):.6f})"


def table(header: Sequence[str], rows: Sequence[Sequence[str]]) -> str:
    widths = [max(len(str(r[i])) for r in [header, *rows]) for i in range(len(header))]
    lines = []
    for r in [header, *rows]:
        cells = [str(c).ljust(w) for c, w in zip(r, widths)]
        lines.append("  ".join(cells).rstrip())
    return "\n".join(lines)


def dist_table(dists: Sequence[tuple[str, Dist]], key_title: str = "label") -> str:
    labels = dists[0][1].labels
    header = [key_title]
    for name, _ in dists:
        header += [name, ""]
    rows = []
    for lab in labels:
        row = [lab]
        for _, d in dists:
            row += [format_prob(d[lab]), f"{float(d[lab]):.6f}"]
        rows.append(row)
    return table(header, rows)


def dumps_json(obj) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=False) + "\n"


def render_system(sys: cs.FiniteCryptosystem) -> str:
    header = ["key \\ message", *sys.messages]
    rows = [[k, *(sys.table.get((k, m), "-") for m in sys.messages)] for k in sys.keys]
    return "\n".join(
        [
            "encryption table:",
            table(header, rows),
            "",
            "prior:",
            dist_table([("P(M)", sys.prior)], "message"),
            "",
            "key distribution:",
            dist_table([("P(K)", sys.key_dist)], "key"),
        ]
    )


def _witness_line(w) -> str:
    if isinstance(w, secrecy.ProbabilityWitness):
        return (
            f"  message={w.message} cipher={w.cipher}: "
            f"{w.observed_name}={fmt(w.observed)} != {w.expected_name}={fmt(w.expected)}"
        )
    if isinstance(w, secrecy.KeyCountWitness):
        return f"  positive-probability keys={w.positive_keys} < messages={w.messages}"
    if isinstance(w, secrecy.ShapeMismatchWitness):
        return f"  shape mismatch: messages={w.messages} keys={w.keys} ciphertexts={w.ciphertexts}"
    if isinstance(w, secrecy.DuplicateCellWitness):
        return f"  cipher {w.cipher} appears {len(w.at)} times for {w.axis} {w.fixed} (at {', '.join(w.at)})"
    if isinstance(w, secrecy.MissingCellWitness):
        return f"  cipher {w.cipher} never appears for {w.axis} {w.fixed}"
    raise TypeError(type(w))


def render_report(rep: secrecy.SecrecyReport) -> str:
    lines = [f"{rep.criterion.value}: {'PASS' if rep.verdict else 'FAIL'}"]
    lines += [_witness_line(w) for w in rep.witnesses]
    for s in rep.skipped:
        lines.append(f"  skipped {s['reason']}: {s['label']}")
    return "\n".join(lines)


def render_summary(s: secrecy.PerfectSystemSummary) -> str:
    b = lambda v: "true" if v else "false"  # noqa: E731
    return (
        f"summary: latin_square={b(s.latin_square)} keys_uniform={b(s.keys_uniform)} "
        f"theorem1_holds={b(s.theorem1_holds)}"
    )


def render_discrepancy(rep: analysis.DiscrepancyReport) -> str:
    return "\n".join(
        [
            f"ciphertext {rep.cipher}, compromise weight {format_prob(rep.weight)}",
            dist_table(
                [
                    ("prior", rep.prior),
                    ("bayes", rep.bayes),
                    ("conditional_only", rep.conditional_only),
                    ("compromised", rep.compromised),
                ],
                "message",
            ),
            f"tv(bayes, prior)       = {fmt(rep.tv_bayes_vs_prior)}",
            f"tv(compromised, prior) = {fmt(rep.tv_compromised_vs_prior)}",
        ]
    )


def render_simulation(title: str, exact: Dist, emp: oracle.EmpiricalDist, agr: oracle.Agreement) -> str:
    rows = []
    for lab in exact.labels:
        freq = Fraction(emp.counts[lab], emp.trials_kept)
        rows.append([lab, str(emp.counts[lab]), f"{float(freq):.6f}", format_prob(exact[lab]),
                     f"{float(exact[lab]):.6f}", f"{float(abs(freq - exact[lab])):.6f}"])
    return "\n".join(
        [
            title,
            f"trials={emp.trials_total} kept={emp.trials_kept} seed={emp.seed} generator={emp.generator}",
            table(["label", "count", "frequency", "exact", "", "deviation"], rows),
            f"max deviation {float(agr.deviation):.6f} at label {agr.label}, "
            f"tolerance {float(agr.tolerance):g}: {'AGREE' if agr.ok else 'DISAGREE'}",
        ]
    )


# --- command helpers ----------------------------------------------------------

def _load_valid(path: str) -> cs.FiniteCryptosystem:
    system = specfile.load(path)
    errs = cs.errors_only(cs.validate(system))
    if errs:
        raise UsageError("invalid cryptosystem:\n" + "\n".join(f"  {v}" for v in errs))
    return system


def _weight(text: str) -> Fraction:
    try:
        w = parse_prob(text)
    except ValueError as exc:
        raise UsageError(f"--weight: {exc}") from None
    if w > 1:
        raise UsageError(f"--weight must lie in [0, 1], got {text}")
    return w


def _tolerance(text: str) -> Fraction:
    try:
        return oracle.parse_tolerance(text)
    except ArithmeticError:
        raise UsageError(f"--tol: not a decimal number: {text!r}") from None


def _simulate(system, cipher, trials, seed, tol):
    """Returns (title, exact, empirical, agreement); raises UsageError if nothing was kept."""
    if trials < 1:
        raise UsageError("--trials must be >= 1")
    if cipher is None:
        exact = cs.cipher_distribution(system)
        emp = oracle.simulate_cipher_dist(system, trials, seed)
        title = "empirical vs exact ciphertext distribution P(E)"
    else:
        if cipher not in system.ciphertexts:
            raise UsageError(f"unknown ciphertext {cipher!r}")
        emp = oracle.simulate_posterior(system, cipher, trials, seed)
        if emp.trials_kept == 0:
            raise UsageError(f"no trials produced ciphertext {cipher!r} (kept 0 of {trials})")
        if cs.cipher_distribution(system)[cipher] == 0:
            raise UsageError(f"ciphertext {cipher!r} has exact probability zero")
        exact = cs.bayes_posterior(system, cipher)
        title = f"empirical (rejection) vs exact Bayes posterior given ciphertext {cipher}"
    return title, exact, emp, oracle.agreement(exact, emp, tol)


# --- commands -----------------------------------------------------------------

def cmd_validate(args) -> tuple[int, object, str]:
    system = specfile.load(args.spec)
    violations = cs.validate(system)
    errs = cs.errors_only(violations)
    code = EXIT_FALSE if errs else EXIT_OK
    payload = {"valid": not errs, "violations": [v.to_json() for v in violations]}
    text = "\n".join(
        [f"{'valid' if not errs else 'INVALID'}: {len(errs)} error(s), "
         f"{len(violations) - len(errs)} warning(s)"]
        + [f"  {v}" for v in violations]
    )
    return code, payload, text


def cmd_check(args) -> tuple[int, object, str]:
    system = _load_valid(args.spec)
    names = list(secrecy.CHECKS) if args.criterion == "all" else [args.criterion]
    reports = [secrecy.CHECKS[n](system) for n in names]
    ok = all(r.verdict for r in reports)
    payload: dict = {"reports": [r.to_json() for r in reports]}
    text = [render_report(r) for r in reports]
    if args.criterion == "all":
        summary = secrecy.classify_perfect_system(system)
        payload["summary"] = summary.to_json()
        text.append(render_summary(summary))
    payload["verdict"] = ok
    return (EXIT_OK if ok else EXIT_FALSE), payload, "\n".join(text)


def cmd_posterior(args) -> tuple[int, object, str]:
    system = _load_valid(args.spec)
    weight = _weight(args.weight)
    if args.cipher not in system.ciphertexts:
        raise UsageError(f"unknown ciphertext {args.cipher!r}")
    if cs.cipher_distribution(system)[args.cipher] == 0:
        raise UsageError(f"ciphertext {args.cipher!r} has probability zero; no posterior exists")
    rep = analysis.discrepancy_report(system, args.cipher, weight)
    return EXIT_OK, rep.to_json(), render_discrepancy(rep)


def cmd_simulate(args) -> tuple[int, object, str]:
    system = _load_valid(args.spec)
    tol = _tolerance(args.tol)
    title, exact, emp, agr = _simulate(system, args.cipher, args.trials, args.seed, tol)
    payload = {
        "cipher": args.cipher,
        "exact": exact.to_json(),
        "empirical": emp.to_json(),
        "agreement": agr.to_json(),
    }
    return (EXIT_OK if agr.ok else EXIT_FALSE), payload, render_simulation(title, exact, emp, agr)


def _section(title: str) -> str:
    return f"== {title} =="


def demo_example1(args) -> tuple[int, dict, list[str]]:
    system = cs.example1_system()
    weight = _weight(args.weight)
    tol = _tolerance(args.tol)
    out = [
        "Example 1: one-bit one-time pad, prior P(0)=9/10, P(1)=1/10, keys equally likely.",
        "",
        _section("system"),
        render_system(system),
        "",
        _section("secrecy checks"),
        *(render_report(f(system)) for f in secrecy.CHECKS.values()),
        render_summary(secrecy.classify_perfect_system(system)),
        "",
        _section("ciphertext distribution"),
        dist_table([("P(E)", cs.cipher_distribution(system))], "cipher"),
        "",
        _section("observed ciphertext 0"),
    ]
    rep = analysis.discrepancy_report(system, "0", weight)
    out.append(render_discrepancy(rep))
    sims = []
    for cipher in ("0", None):
        title, exact, emp, agr = _simulate(system, cipher, args.trials, args.seed, tol)
        sims.append({"cipher": cipher, "empirical": emp.to_json(), "agreement": agr.to_json()})
        out += ["", _section("monte carlo"), render_simulation(title, exact, emp, agr)]
    b, c = rep.bayes, rep.conditional_only
    out += [
        "",
        _section("result"),
        f"Bayes posterior given ciphertext 0: ({format_prob(b['0'])}, {format_prob(b['1'])})",
        f"conditional-only posterior given ciphertext 0: ({format_prob(c['0'])}, {format_prob(c['1'])})",
    ]
    ok = all(s["agreement"]["ok"] for s in sims)
    payload = {"demo": "example1", "system": cs.system_to_json(system), "report": rep.to_json(),
               "simulations": sims}
    return (EXIT_OK if ok else EXIT_FALSE), payload, out


def demo_fig1(args) -> tuple[int, dict, list[str]]:
    system = cs.figure1_system()
    tol = _tolerance(args.tol)
    p_e = cs.cipher_distribution(system)
    cond = {m: cs.cipher_given_message(system, m) for m in system.messages}
    t1 = secrecy.check_theorem1(system)
    out = [
        "Figure 1: five-symbol shift system, E_s with s = i + j - 1 (mod 5), keys equally likely.",
        "",
        _section("system"),
        render_system(system),
        "",
        _section("secrecy checks (uniform prior)"),
        *(render_report(f(system)) for f in secrecy.CHECKS.values()),
        render_summary(secrecy.classify_perfect_system(system)),
        "",
        _section("P_M(E) for every message, and P(E)"),
        dist_table([*((f"P_{m}(E)", cond[m]) for m in system.messages), ("P(E)", p_e)], "cipher"),
        "",
        _section("posterior table (uniform prior)"),
    ]
    post = cs.posterior_table(system)
    out.append(dist_table(list(post.rows.items()), "message"))

    skewed = system.with_prior(
        Dist(zip(system.messages, [Fraction(1, 2)] + [Fraction(1, 8)] * 4))
    )
    skew_post = cs.posterior_table(skewed)
    out += [
        "",
        _section("posterior table (prior 1/2, 1/8, 1/8, 1/8, 1/8)"),
        dist_table([("prior", skewed.prior), *skew_post.rows.items()], "message"),
        render_report(secrecy.check_posterior_definition(skewed)),
        render_report(secrecy.check_theorem1(skewed)),
    ]
    title, exact, emp, agr = _simulate(system, None, args.trials, args.seed, tol)
    out += ["", _section("monte carlo"), render_simulation(title, exact, emp, agr)]
    out += [
        "",
        _section("result"),
        f"Theorem 1 verdict: {'true' if t1.verdict else 'false'}",
        "P(E): " + ", ".join(f"{e}={format_prob(p)}" for e, p in p_e.items()),
        "P_M(E) = 1/5 for every (M, E): "
        + ("yes" if all(p == Fraction(1, 5) for d in cond.values() for p in d.probs) else "no"),
        "skewed prior: posterior equals prior at every ciphertext: "
        + ("yes" if all(r.same_masses(skewed.prior) for r in skew_post.rows.values()) else "no")
        + f"; P_E(M1) = {format_prob(skew_post.rows['E1']['M1'])}",
    ]
    payload = {
        "demo": "fig1",
        "system": cs.system_to_json(system),
        "theorem1": t1.to_json(),
        "cipher_distribution": p_e.to_json(),
        "cipher_given_message": {m: d.to_json() for m, d in cond.items()},
        "posterior_uniform_prior": post.to_json(),
        "posterior_skewed_prior": skew_post.to_json(),
        "simulation": {"empirical": emp.to_json(), "agreement": agr.to_json()},
    }
    ok = t1.verdict and agr.ok
    return (EXIT_OK if ok else EXIT_FALSE), payload, out


def demo_length_leak(args) -> tuple[int, dict, list[str]]:
    prior = analysis.DEMO_LENGTH_PRIOR
    length = 2
    post = analysis.length_leakage_posterior(prior, length)
    out = [
        "Length leakage: a length-preserving pad reveals the plaintext length.",
        "",
        _section(f"prior and posterior after observing ciphertext length {length}"),
        dist_table([("prior", prior), ("posterior", post)], "plaintext"),
        "",
        _section("result"),
        "posterior: " + ", ".join(f"{lab}={format_prob(p)}" for lab, p in post.items()),
        "plaintexts of other lengths: " + ", ".join(
            f"{lab} prior {format_prob(prior[lab])} -> posterior {format_prob(post[lab])}"
            for lab in prior.labels if len(lab) != length
        ),
    ]
    payload = {"demo": "length-leak", "observed_length": length, "prior": prior.to_json(),
               "posterior": post.to_json()}
    return EXIT_OK, payload, out


DEMOS: dict[str, Callable] = {
    "example1": demo_example1,
    "fig1": demo_fig1,
    "length-leak": demo_length_leak,
}


def cmd_demo(args) -> tuple[int, object, str]:
    if args.which not in DEMOS:
        raise UsageError(f"unknown demo {args.which!r}; choose from {', '.join(DEMOS)}")
    code, payload, lines = DEMOS[args.which](args)
    return code, payload, "\n".join(lines)


# --- parser -------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="secrecylab", description="Exact secrecy analysis of finite cryptosystems."
    )
    parser.add_argument("--json", action="store_true", help="emit JSON instead of text")
    # repeated on each subcommand; SUPPRESS keeps a top-level --json from being reset
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS)

    sim_opts = argparse.ArgumentParser(add_help=False)
    sim_opts.add_argument("--trials", type=int, default=DEFAULT_TRIALS)
    sim_opts.add_argument("--seed", type=int, default=0)
    sim_opts.add_argument("--tol", default=DEFAULT_TOL, help="max allowed |exact - frequency|")

    weight_opt = argparse.ArgumentParser(add_help=False)
    weight_opt.add_argument("--weight", default="1/2", help="compromise weight on the prior, 'p/q'")

    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", parents=[common], help="check model invariants")
    p.add_argument("spec")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("check", parents=[common], help="run secrecy checkers")
    p.add_argument("spec")
    p.add_argument("criterion", nargs="?", default="all",
                   choices=["definition", "theorem1", "keycount", "latin", "all"])
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("posterior", parents=[common, weight_opt], help="discrepancy report")
    p.add_argument("spec")
    p.add_argument("cipher")
    p.set_defaults(func=cmd_posterior)

    p = sub.add_parser("simulate", parents=[common, sim_opts], help="Monte Carlo cross-check")
    p.add_argument("spec")
    p.add_argument("--cipher", default=None)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("demo", parents=[common, sim_opts, weight_opt], help="worked examples")
    p.add_argument("which", help="example1, fig1 or length-leak")
    p.set_defaults(func=cmd_demo)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        code, payload, text = args.func(args)
    except (UsageError, SecrecyLabError, OSError) as exc:
        print(f"error: {exc}", file=_sys.stderr)
        return EXIT_USAGE
    if args.json:
        _sys.stdout.write(dumps_json(payload))
    else:
        _sys.stdout.write(text + "\n")
    return code


if __name__ == "__main__":
    raise SystemExit(main())
