"""Command line front end: sclforge {verify,build-rep,mu,report,certify,gamma3}."""

from __future__ import annotations

import argparse
import csv
import json
import os
import random
import sys
from dataclasses import dataclass, field

from .circle import qstr, set_breakpoint_cap
from .nilpotent import RelatorLattice, gamma3_membership
from .words import (A, B, ONE_RELATOR_ALPHABET, Word, WordParseError, comm, one_relator_words,
                    parse_word, surface_alphabet, surface_x, verify_free_identity)

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_INCONCLUSIVE = 0, 1, 2, 3


class UsageError(Exception):
    pass


def parse_range(text):
    """'5' or '2..20' -> list of ints."""
    try:
        if ".." in text:
            lo, hi = text.split("..", 1)
            lo, hi = int(lo), int(hi)
        else:
            lo = hi = int(text)
    except ValueError:
        raise UsageError(f"bad range {text!r}") from None
    if hi < lo:
        raise UsageError(f"empty range {text!r}")
    return list(range(lo, hi + 1))


@dataclass
class RunConfig:
    command: str
    ells: list = field(default_factory=lambda: list(range(2, 11)))
    ns: list = field(default_factory=lambda: [1])
    n_max: int = 50
    iters: int = 1024
    group: str = "onerelator"
    rep: str | None = None
    out: str | None = None
    budget_breakpoints: int = 100_000
    ratio: int = 5
    word: str | None = None
    seed: int = 0

    def __post_init__(self):
        if not self.ells or min(self.ells) < 2:
            raise UsageError("ell must be >= 2")
        if not self.ns or min(self.ns) < 1:
            raise UsageError("n must be >= 1")
        if self.iters < 1:
            raise UsageError("iters must be >= 1")
        if self.n_max < 1:
            raise UsageError("n-max must be >= 1")

    @property
    def ell(self):
        return self.ells[0]


def _fmt(x):
    if isinstance(x, float):
        return f"{x:.12g}"
    if isinstance(x, int) or isinstance(x, str):
        return str(x)
    return qstr(x)


def _write(out, text):
    if out is None:
        sys.stdout.write(text)
        return
    try:
        with open(out, "w") as fh:
            fh.write(text)
    except OSError as exc:
        raise UsageError(f"cannot write {out}: {exc}") from None


def _load_rep(path):
    from .ehn import Representation

    try:
        with open(path) as fh:
            return Representation.from_json(fh.read())
    except (OSError, ValueError, KeyError) as exc:
        raise UsageError(f"cannot read representation {path}: {exc}") from None


def _rep_for(cfg, ell):
    from .ehn import build_rep_onerelator

    if cfg.rep:
        rep = _load_rep(cfg.rep)
        if rep.meta.get("ell") not in (None, ell):
            raise UsageError(f"representation is for ell={rep.meta['ell']}, not {ell}")
        return rep
    return build_rep_onerelator(ell)


def _random_word(rng, gens, length):
    return Word([(rng.choice(gens), rng.choice((-1, 1))) for _ in range(length)])


def cmd_verify(cfg):
    from gmpy2 import mpq

    from .circle import BreakpointBudgetExceeded, commutator, translation
    from .ehn import ConjugatorError, InfeasibleParameters, build_rep_onerelator, translation_as_commutator

    rng = random.Random(cfg.seed)
    checks = []

    def record(name, ok):
        checks.append({"check": name, "ok": bool(ok)})

    for ell in cfg.ells:
        ok, _ = verify_free_identity("lemma-relation", ell=ell)
        record(f"relation-identity ell={ell}", ok)
        pw = one_relator_words(ell)
        record(f"gamma3 [y,z] ell={ell}",
               gamma3_membership(comm(pw.y, pw.z), RelatorLattice.onerelator(ell)).member)
        record(f"gamma3 x_2 ell={ell}", gamma3_membership(surface_x(ell, 2), RelatorLattice.surface(ell)).member)
        c = mpq(ell - 1, ell)
        try:
            f, g = translation_as_commutator(c)
            record(f"ehn commutator ell={ell}", commutator(f, g) == translation(c))
        except (ConjugatorError, InfeasibleParameters, BreakpointBudgetExceeded):
            record(f"ehn commutator ell={ell}", False)
        try:
            build_rep_onerelator(ell)
            record(f"ehn relator ell={ell}", True)
        except (ConjugatorError, InfeasibleParameters, BreakpointBudgetExceeded):
            record(f"ehn relator ell={ell}", False)
    gens = [A, B]
    for i in range(20):
        g, h = _random_word(rng, gens, rng.randint(1, 6)), _random_word(rng, gens, rng.randint(1, 6))
        n = rng.randint(1, 10)
        side = rng.choice(("left", "right"))
        ok, _ = verify_free_identity("power-expansion", g=g, h=h, n=n, side=side)
        record(f"power-expansion sample {i} ({side}, n={n})", ok)
    failed = [c["check"] for c in checks if not c["ok"]]
    payload = json.dumps({"checks": checks, "passed": not failed}, indent=1) + "\n"
    if cfg.out:
        _write(cfg.out, payload)
    else:
        print(f"{len(checks) - len(failed)}/{len(checks)} checks passed")
    if failed:
        print(f"first failing check: {failed[0]}", file=sys.stderr)
        return EXIT_FAIL
    return EXIT_OK


def cmd_build_rep(cfg):
    from .ehn import build_rep_onerelator, build_rep_surface
    from .fuchsian import fuchsian_rep

    ell = cfg.ell
    if cfg.group == "onerelator":
        rep = build_rep_onerelator(ell)
    elif cfg.group == "surface":
        rep = build_rep_surface(ell)
    else:
        rep = fuchsian_rep(ell)
    _write(cfg.out, rep.to_json(indent=1) + "\n")
    return EXIT_OK


def cmd_mu(cfg):
    from .qm import expand_source_power, mu_eval, onerelator_expression

    rows = []
    for ell in cfg.ells:
        rep = _rep_for(cfg, ell)
        base = onerelator_expression(ell)
        for n in cfg.ns:
            m = mu_eval(rep, expand_source_power(base, "left", n), cfg.iters, record_lifts=False)
            rows.append({"ell": ell, "n": n, "center": qstr(m.center), "radius": qstr(m.radius),
                         "exact": m.exact})
    _write(cfg.out, json.dumps(rows, indent=1) + "\n")
    return EXIT_OK


HEADER = ["n", "mu_center", "mu_radius", "paper_bound", "bavard_lower", "cl_upper", "ratio"]


def _csv(rows):
    import io

    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(HEADER)
    for r in rows:
        w.writerow([_fmt(x) for x in r.csv_fields()])
    return buf.getvalue()


def cmd_report(cfg):
    from .qm import BoundViolation, PathDisagreement, sequence_report, surface_pullback_report
    from .fuchsian import mu_numeric_report

    ell = cfg.ell
    if cfg.group == "fuchsian":
        rows, fit = mu_numeric_report(ell, cfg.ns, min(cfg.iters, 256))
        _write(cfg.out, _csv(rows))
        summary = json.dumps(fit.to_dict())
        if cfg.out:
            _write(cfg.out + ".fit.json", summary + "\n")
        print(summary, file=sys.stderr)
        return EXIT_OK if abs(fit.slope) > 0 else EXIT_FAIL
    rep = _rep_for(cfg, ell)
    try:
        if cfg.group == "onerelator":
            rows = sequence_report(rep, ell, cfg.ns, cfg.iters)
        else:
            rows = surface_pullback_report(rep, ell, cfg.ns, cfg.iters)
    except (BoundViolation, PathDisagreement) as exc:
        print(f"assertion failed: {exc}", file=sys.stderr)
        return EXIT_FAIL
    _write(cfg.out, _csv(rows))
    return EXIT_OK


def cmd_certify(cfg):
    from .qm import growth_certify, onerelator_expression, overflow_certify

    ell = cfg.ell
    rep = _rep_for(cfg, ell)
    cert = overflow_certify(rep, onerelator_expression(ell), cfg.iters)
    if cert.verdict != "certified":
        growth = growth_certify(rep, ell, cfg.n_max, cfg.iters, cfg.ratio)
        growth.derivation = f"overflow inconclusive ({cert.derivation}); {growth.derivation}"
        cert = growth
    _write(cfg.out, cert.to_json(indent=1) + "\n")
    if cfg.out:
        print(f"verdict: {cert.verdict} ({cert.path})")
    return EXIT_OK if cert.verdict == "certified" else EXIT_INCONCLUSIVE


def cmd_gamma3(cfg):
    if cfg.word is None:
        raise UsageError("gamma3 needs a word")
    if cfg.group == "surface":
        alph, lattice = surface_alphabet(cfg.ell), RelatorLattice.surface(cfg.ell)
    elif cfg.group == "free":
        alph, lattice = ONE_RELATOR_ALPHABET, RelatorLattice.free(2)
    else:
        alph, lattice = ONE_RELATOR_ALPHABET, RelatorLattice.onerelator(cfg.ell)
    try:
        w = parse_word(cfg.word, alph)
    except WordParseError as exc:
        raise UsageError(str(exc)) from None
    res = gamma3_membership(w, lattice, alph)
    _write(cfg.out, json.dumps({"word": str(w), "member": res.member, "v": list(res.v),
                                "E": [list(r) for r in res.E], "reason": res.reason}) + "\n")
    return EXIT_OK


COMMANDS = {
    "verify": cmd_verify,
    "build-rep": cmd_build_rep,
    "mu": cmd_mu,
    "report": cmd_report,
    "certify": cmd_certify,
    "gamma3": cmd_gamma3,
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser():
    p = _Parser(prog="sclforge")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name in COMMANDS:
        s = sub.add_parser(name)
        s.add_argument("--ell", default="2..10" if name == "verify" else "2")
        s.add_argument("--out")
        s.add_argument("--iters", type=int, default=1024)
        s.add_argument("--budget-breakpoints", type=int, default=100_000)
        if name in ("mu", "report"):
            s.add_argument("--n", default="1")
        if name in ("mu", "report", "certify"):
            s.add_argument("--rep")
        if name == "certify":
            s.add_argument("--n-max", type=int, default=50)
            s.add_argument("--ratio", type=int, default=5)
        if name in ("report", "build-rep"):
            s.add_argument("--group", choices=("onerelator", "surface", "fuchsian"), default="onerelator")
        if name == "gamma3":
            s.add_argument("--group", choices=("free", "onerelator", "surface"), default="onerelator")
            s.add_argument("word")
    return p


def make_config(argv):
    args = build_parser().parse_args(argv)
    kw = dict(command=args.command, ells=parse_range(args.ell), iters=args.iters,
              out=args.out, budget_breakpoints=args.budget_breakpoints,
              seed=int(os.environ.get("SCLFORGE_SEED", "0")))
    for k in ("group", "rep", "n_max", "ratio", "word"):
        if hasattr(args, k):
            kw[k] = getattr(args, k)
    if hasattr(args, "n"):
        kw["ns"] = parse_range(args.n)
    return RunConfig(**kw)


def main(argv=None):
    try:
        cfg = make_config(sys.argv[1:] if argv is None else argv)
        set_breakpoint_cap(cfg.budget_breakpoints)
        return COMMANDS[cfg.command](cfg)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (AssertionError, RuntimeError) as exc:
        print(f"assertion failed: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
