"""Command-line surface binding all modules, with versioned CSV output.

Conventions:
  - logs go to stderr; data goes to stdout or to files,
  - file writes are atomic (temp file in the same directory + rename),
  - relative output paths resolve against $COLLATZ_ABC_DATA when set,
  - exit codes: 0 success, 1 input error, 2 mathematical invariant
    violation, 3 resource guard.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
from dataclasses import dataclass
from typing import Optional

from . import dichotomy, ingest, lbh, wieferich
from .collatz import enumerate_nj, nj_residues, trace
from .errors import InvariantViolation, ResourceGuardError
from .mu import classify_triple

SCHEMAS = {
    "enumerate": "# schema=collatz-abc/enumerate/1",
    "misses": "# schema=collatz-abc/lbh-misses/1",
    "scatter": "# schema=collatz-abc/lbh-scatter/1",
    "fig1": "# schema=collatz-abc/fig1/1",
    "fig2": "# schema=collatz-abc/fig2/1",
    "scan": "# schema=collatz-abc/scan/1",
    "summary": "# schema=collatz-abc/fig2/1",
}

_EXIT_INPUT = 1
_EXIT_INVARIANT = 2
_EXIT_RESOURCE = 3


class _InputError(ValueError):
    """CLI-level bad input (maps to exit 1)."""


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # argparse would exit(2); keep 2 reserved
        raise _InputError(message)


@dataclass
class RunConfig:
    """Validated run parameters shared by the subcommands."""

    jobs: int = 1
    seed: int = 0
    bound: int = 10**6

    def __post_init__(self) -> None:
        if self.jobs < 1:
            raise _InputError("--jobs must be >= 1")
        if self.bound < 2:
            raise _InputError("--bound must be >= 2")


def _data_path(path: str) -> str:
    base = os.environ.get("COLLATZ_ABC_DATA")
    if base and not os.path.isabs(path):
        return os.path.join(base, path)
    return path


def _atomic_write(path: str, text: str) -> None:
    path = _data_path(path)
    d = os.path.dirname(os.path.abspath(path))
    os.makedirs(d, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=d, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _fmt(x: float) -> str:
    return f"{x:.12g}"


def _log(msg: str) -> None:
    print(msg, file=sys.stderr)


# ----------------------------------------------------------------- commands


def _cmd_enumerate(args) -> int:
    elems = enumerate_nj(args.j, verify=not args.no_verify)
    lines = [SCHEMAS["enumerate"], "n,k,A,B"]
    for e in elems:
        lines.append(f"{e.n},{e.k},{e.A},{e.B}")
    text = "\n".join(lines) + "\n"
    if args.out:
        _atomic_write(args.out, text)
        _log(f"wrote {args.out}")
    else:
        sys.stdout.write(text)
    return 0


def _cmd_trace(args) -> int:
    tr = trace(args.n, args.j, keep_terms=args.terms)
    print(f"n={tr.start} j={tr.length} q={tr.q}")
    print("parities=" + "".join(str(b) for b in tr.parities))
    print("even_indices=" + ",".join(str(i) for i in tr.even_indices))
    if tr.terms is not None:
        print("terms=" + ",".join(str(t) for t in tr.terms))
    return 0


def _parse_grid(text: str) -> tuple[float, ...]:
    try:
        grid = tuple(float(x) for x in text.split(","))
    except ValueError as exc:
        raise _InputError(f"bad C grid: {exc}") from exc
    if not grid:
        raise _InputError("empty C grid")
    return grid


def _cmd_lbh_misses(args, cfg: RunConfig) -> int:
    grid = _parse_grid(args.c_grid) if args.c_grid else (args.C,)
    counts = lbh.miss_count_grid(args.jmax, grid, jobs=cfg.jobs)
    lines = [SCHEMAS["misses"], "j,C,miss_count"]
    for j in range(2, args.jmax + 1):
        for i, c in enumerate(grid):
            lines.append(f"{j},{_fmt(c)},{counts.per_j[j][i]}")
    if args.out:
        _atomic_write(args.out, "\n".join(lines) + "\n")
        _log(f"wrote {args.out}")
    totals = counts.totals()
    for i, c in enumerate(grid):
        print(f"C={_fmt(c)} total_misses={totals[i]}")
    if args.scatter_out:
        rows = [SCHEMAS["scatter"], "j,k,n_digits,c_equal"]
        for j in range(2, args.jmax + 1):
            for k, n in nj_residues(j):
                rows.append(f"{j},{k},{len(str(n))},{_fmt(lbh.c_equal(n, j, j - 1))}")
        _atomic_write(args.scatter_out, "\n".join(rows) + "\n")
        _log(f"wrote {args.scatter_out}")
    return 0


def _cmd_bounds(args) -> int:
    b = lbh.comparison_bounds(args.j, C=args.C, eps=args.eps)
    print(f"j={b.j} C={_fmt(b.C)} eps={_fmt(b.eps)}")
    print(f"power_law    log2={_fmt(b.log2_power_law)} linear={_fmt(b.power_law)}")
    print(f"conditional  log2={_fmt(b.log2_conditional)} linear={_fmt(b.conditional)}")
    print(f"dichotomy    log2={_fmt(b.log2_dichotomy)} linear={_fmt(b.dichotomy)}")
    print(f"entropy_bound log2={_fmt(b.log2_entropy_bound)}")
    return 0


def _scan_csv(result) -> str:
    lines = [SCHEMAS["scan"], "j,k,digits,pow_A,pow_B,q,g,C"]
    for row in dichotomy.report_rows(result.records):
        lines.append(
            f"{row['j']},{row['k']},{row['digits']},{row['pow_A']},{row['pow_B']},"
            f"{_fmt(row['q'])},{_fmt(row['g'])},{_fmt(row['C'])}"
        )
    return "\n".join(lines) + "\n"


def _cmd_scan(args, cfg: RunConfig) -> int:
    mode = (
        dichotomy.MODE_NEAR_MISS if args.mode == "near-miss" else dichotomy.MODE_FULL
    )
    result = dichotomy.scan(
        args.jlo,
        args.jhi,
        bound=cfg.bound,
        mode=mode,
        jobs=cfg.jobs,
        checkpoint_path=_data_path(args.checkpoint) if args.checkpoint else None,
    )
    hits = result.mu_hits()
    _log(
        f"scanned j in [{args.jlo}, {args.jhi}]: {len(result.records)} records, "
        f"{len(hits)} certified mu-hits, {len(result.violations)} violations"
    )
    if args.out:
        _atomic_write(args.out, _scan_csv(result))
        _log(f"wrote {args.out}")
    if args.text_out:
        _atomic_write(args.text_out, dichotomy.report_text(result.records))
        _log(f"wrote {args.text_out}")
    for row in dichotomy.report_rows(result.records):
        print(
            f"j={row['j']} k={row['k']} digits={row['digits']} "
            f"pow_A={row['pow_A']} pow_B={row['pow_B']} "
            f"q={row['q']:.3f} g={row['g']:.3f} C={row['C']:.3f}"
        )
    if result.violations:
        raise InvariantViolation(
            f"dichotomy violated for {len(result.violations)} elements "
            f"(first at j={result.violations[0].j}, k={result.violations[0].k})"
        )
    return 0


def _cmd_mu_check(args, cfg: RunConfig) -> int:
    rec = classify_triple(args.a, args.b, args.c, cfg.bound)
    out = {
        "a": rec.a,
        "b": rec.b,
        "c": rec.c,
        "is_abc_hit": rec.is_abc_hit,
        "is_mu_hit": rec.is_mu_hit,
        "is_good": rec.is_good,
        "quality_lo": rec.quality.lo,
        "quality_hi": rec.quality.hi,
        "gain_lo": rec.gain.lo,
        "gain_hi": rec.gain.hi,
        "m_lo": str(rec.m_interval.m_lo),
        "m_hi": str(rec.m_interval.m_hi),
        "rad_lo": str(rec.radical_interval[0]),
        "rad_hi": str(rec.radical_interval[1]),
    }
    print(json.dumps(out, sort_keys=True))
    return 0


def _cmd_brute_oracle(args) -> int:
    for a, b, c in ingest.brute_force_mu_hits(args.cmax):
        print(f"{a} {b} {c}")
    return 0


def _cmd_ingest(args, cfg: RunConfig) -> int:
    thresholds = (
        [int(float(x)) for x in args.thresholds.split(",")] if args.thresholds else []
    )
    rejects: list[ingest.RejectedLine] = []
    with open(_data_path(args.infile), encoding="utf-8") as fh:
        triples = list(
            ingest.parse_triples(
                fh, two_column=args.two_column, on_reject=rejects.append
            )
        )
    for r in rejects:
        _log(f"rejected line {r.lineno}: {r.reason}: {r.line}")
    result = ingest.scan_dataset(triples, bound=cfg.bound, thresholds=thresholds)
    s = result.summary
    print(
        f"total={s.total} abc_hits={s.abc_hits} mu_hits={s.mu_hits_certain} "
        f"mu_uncertain={s.mu_hits_uncertain} good={s.good_triples} "
        f"good_and_mu={s.good_and_mu} positive_gains={s.positive_gains} "
        f"max_gain={_fmt(s.max_gain) if s.total else 'nan'}"
    )
    if args.records_out:
        lines = []
        for r in result.records:
            lines.append(
                json.dumps(
                    {
                        "a": r.a,
                        "b": r.b,
                        "c": r.c,
                        "quality_lo": r.quality.lo,
                        "quality_hi": r.quality.hi,
                        "gain_lo": r.gain.lo,
                        "gain_hi": r.gain.hi,
                        "is_abc_hit": r.is_abc_hit,
                        "is_mu_hit": r.is_mu_hit,
                        "is_good": r.is_good,
                    },
                    sort_keys=True,
                )
            )
        _atomic_write(args.records_out, "\n".join(lines) + ("\n" if lines else ""))
        _log(f"wrote {args.records_out}")
    if args.summary_out:
        lines = [SCHEMAS["summary"], "x,N_mu,N_abc,N_good"]
        for t in s.thresholds:
            lines.append(f"{t.x},{t.mu},{t.abc},{t.good}")
        _atomic_write(args.summary_out, "\n".join(lines) + "\n")
        _log(f"wrote {args.summary_out}")
    return 0


def _cmd_wieferich(args) -> int:
    found = wieferich.wieferich_search(args.limit)
    for p in found:
        print(p)
    if args.refine and len(found) >= 2:
        L, lemma = wieferich.lemma_gain_bound(found)
        _log(f"L={L} lemma_bound={_fmt(lemma)}")
        divisor = _small_power_divisor(L, found)
        refined = wieferich.refine_gain_bound(L, divisor)
        pretty = "*".join(f"{p}^{e}" for p, e in divisor.factors)
        _log(f"divisor={pretty} refined_bound={_fmt(refined)}")
    return 0


def _small_power_divisor(L: int, wief: list[int], q_limit: int = 10**4):
    """Certified divisor of 2^L - 1: squared small primes plus p^2 for
    each Wieferich prime p."""
    from .factorize import Factorization, sieve_smallest_prime_factor

    spf = sieve_smallest_prime_factor(q_limit)
    factors = {p: 2 for p in wief}
    for q in wieferich.primes_up_to(q_limit):
        if q == 2 or q in factors:
            continue
        o = wieferich._order_of_two(q, spf)
        if L % o:
            continue
        v = 1
        while pow(2, L, q ** (v + 1)) == 1:
            v += 1
        if v >= 2:
            factors[q] = v
    return Factorization.from_factors(sorted(factors.items()))


def _cmd_family(args, cfg: RunConfig) -> int:
    m_hi = args.m_max if args.m_max else args.m
    if m_hi < args.m:
        raise _InputError("--m-max must be >= --m")
    rows = []
    for m in range(args.m, m_hi + 1):
        gen = wieferich.family_generate(args.p, m, bound=cfg.bound)
        item = gen.item
        divisor = "*".join(f"{p}^{e}" for p, e in item.known_divisor.factors if e >= 2)
        print(f"p={args.p} m={m} E={item.E} k={gen.k} j={gen.j}")
        print(f"divisor={divisor}")
        print(f"gain_lower_bound={_fmt(item.gain_lower_bound)}")
        mu_verdict = "-"
        gain_lo = item.gain_lower_bound
        if gen.triple is not None:
            t = gen.triple
            mu_verdict = t.is_mu_hit
            gain_lo = t.gain.lo
            print(
                f"mu_hit={t.is_mu_hit} gain=[{_fmt(t.gain.lo)},{_fmt(t.gain.hi)}] "
                f"quality=[{_fmt(t.quality.lo)},{_fmt(t.quality.hi)}]"
            )
        rows.append(
            f"{args.p},{m},{item.E},{gen.k},{gen.j},{divisor},"
            f"{_fmt(item.gain_lower_bound)},{_fmt(gain_lo)},{mu_verdict}"
        )
        if args.qk:
            try:
                q, k = (int(x) for x in args.qk.split(","))
            except ValueError as exc:
                raise _InputError(f"bad --qk: {exc}") from exc
            scaled = wieferich.qk_family(q, k, item.E, item.known_divisor)
            print(f"qk E={scaled.E} bound={_fmt(scaled.gain_lower_bound)}")
    if args.out:
        header = "p,m,E,k,j,divisor,gain_lower_bound,gain_lo,mu_hit"
        _atomic_write(
            args.out,
            "\n".join(["# schema=collatz-abc/family/1", header] + rows) + "\n",
        )
        _log(f"wrote {args.out}")
    return 0


def _read_fit_points(path: str) -> list[tuple[float, float]]:
    pts = []
    with open(_data_path(path), encoding="utf-8") as fh:
        for raw in fh:
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.replace(",", " ").split()
            if parts[0].lower() in ("x", "j"):  # header row
                continue
            pts.append((float(parts[0]), float(parts[1])))
    return pts


def _cmd_fit(args) -> int:
    alpha, x0 = ingest.fit_power_law(_read_fit_points(args.infile))
    print(f"alpha={_fmt(alpha)} x0={_fmt(x0)}")
    return 0


def _cmd_emit_fig(args) -> int:
    if args.which == "fig1":
        if not args.from_misses:
            raise _InputError("emit-fig fig1 requires --from-misses")
        per: dict[tuple[float, int], int] = {}
        js = set()
        with open(_data_path(args.from_misses), encoding="utf-8") as fh:
            header = fh.readline().strip()
            if header != SCHEMAS["misses"]:
                raise _InputError(
                    f"schema mismatch: expected '{SCHEMAS['misses']}', got '{header}'"
                )
            fh.readline()  # column names
            for line in fh:
                if not line.strip():
                    continue
                j_s, c_s, m_s = line.split(",")
                j, c, miss = int(j_s), float(c_s), int(m_s)
                js.add(j)
                per[(c, j)] = miss
        jmax = max(js)
        milestones = [m for m in (1000, 3000, 10000, 30000) if m <= jmax]
        if jmax not in milestones:
            milestones.append(jmax)
        cs = sorted({c for c, _ in per})
        lines = [SCHEMAS["fig1"], "C,jmax,count"]
        for c in cs:
            for m in milestones:
                total = sum(per.get((c, j), 0) for j in range(2, m + 1))
                lines.append(f"{_fmt(c)},{m},{total}")
        _atomic_write(args.out, "\n".join(lines) + "\n")
    else:
        if not args.from_summary:
            raise _InputError("emit-fig fig2 requires --from-summary")
        with open(_data_path(args.from_summary), encoding="utf-8") as fh:
            header = fh.readline().strip()
            if header != SCHEMAS["fig2"]:
                raise _InputError(
                    f"schema mismatch: expected '{SCHEMAS['fig2']}', got '{header}'"
                )
            body = fh.read().strip("\n")
        lines = [SCHEMAS["fig2"]]
        if args.alpha is not None and args.x0 is not None:
            lines.append(f"# overlay alpha={_fmt(args.alpha)} x0={_fmt(args.x0)}")
        lines.append(body)
        _atomic_write(args.out, "\n".join(lines) + "\n")
    _log(f"wrote {args.out}")
    return 0


# ------------------------------------------------------------------ parser


def build_parser() -> _Parser:
    p = _Parser(prog="collatz-abc", description=__doc__)
    p.add_argument("--config", help="JSON file of flag defaults; flags override")
    p.add_argument("--jobs", type=int, default=1, help="parallel worker count")
    p.add_argument("--seed", type=int, default=0, help="seed for randomized self-checks")
    p.add_argument("--bound", type=int, default=10**6, help="trial-division prime bound")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("enumerate", help="list N(j) with the A/B split")
    s.add_argument("--j", type=int, required=True)
    s.add_argument("--no-verify", action="store_true")
    s.add_argument("--out")

    s = sub.add_parser("trace", help="parity trace of n over j steps")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--j", type=int, required=True)
    s.add_argument("--terms", action="store_true")

    s = sub.add_parser("lbh-misses", help="entropy bound miss counts over N(j)")
    s.add_argument("--jmax", type=int, required=True)
    s.add_argument("--C", type=float, default=1.0)
    s.add_argument("--c-grid", dest="c_grid")
    s.add_argument("--out")
    s.add_argument("--scatter-out")

    s = sub.add_parser("bounds", help="comparison lower bounds at j")
    s.add_argument("--j", type=int, required=True)
    s.add_argument("--C", type=float, default=1.0)
    s.add_argument("--eps", type=float, default=0.1)

    s = sub.add_parser("scan", help="dichotomy scan over a j range")
    s.add_argument("--jlo", type=int, required=True)
    s.add_argument("--jhi", type=int, required=True)
    s.add_argument("--mode", choices=["full", "near-miss"], default="full")
    s.add_argument("--checkpoint")
    s.add_argument("--out")
    s.add_argument("--text-out")

    s = sub.add_parser("mu-check", help="classify one triple")
    s.add_argument("--a", type=int, required=True)
    s.add_argument("--b", type=int, required=True)
    s.add_argument("--c", type=int, required=True)

    s = sub.add_parser("brute-oracle", help="exhaustive mu-hits below a cap")
    s.add_argument("--cmax", type=int, required=True)

    s = sub.add_parser("ingest", help="classify a triple list file")
    s.add_argument("--in", dest="infile", required=True)
    s.add_argument("--two-column", action="store_true")
    s.add_argument("--thresholds")
    s.add_argument("--records-out")
    s.add_argument("--summary-out")

    s = sub.add_parser("wieferich", help="search Wieferich primes")
    s.add_argument("--limit", type=int, required=True)
    s.add_argument("--refine", action="store_true")

    s = sub.add_parser("family", help="Wieferich power-of-two triple family")
    s.add_argument("--p", type=int, required=True)
    s.add_argument("--m", type=int, required=True)
    s.add_argument("--m-max", dest="m_max", type=int)
    s.add_argument("--qk")
    s.add_argument("--out")

    s = sub.add_parser("fit", help="power-law fit of cumulative counts")
    s.add_argument("--in", dest="infile", required=True)

    s = sub.add_parser("emit-fig", help="figure-ready CSV from prior outputs")
    s.add_argument("--which", choices=["fig1", "fig2"], required=True)
    s.add_argument("--from-misses")
    s.add_argument("--from-summary")
    s.add_argument("--alpha", type=float)
    s.add_argument("--x0", type=float)
    s.add_argument("--out", required=True)

    return p


def _apply_config_file(parser: _Parser, argv: list[str]) -> None:
    """Load --config JSON as parser defaults (explicit flags still win)."""
    if "--config" not in argv:
        return
    idx = argv.index("--config")
    if idx + 1 >= len(argv):
        raise _InputError("--config requires a path")
    path = argv[idx + 1]
    try:
        with open(_data_path(path), encoding="utf-8") as fh:
            config = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise _InputError(f"bad config file {path}: {exc}") from exc
    if not isinstance(config, dict):
        raise _InputError(f"config file {path} must hold a JSON object")
    defaults = {k.replace("-", "_"): v for k, v in config.items()}
    # subcommand parsers re-apply their own defaults over the parent
    # namespace, so each parser needs the config values and any satisfied
    # required flags relaxed
    stack: list[argparse.ArgumentParser] = [parser]
    while stack:
        pr = stack.pop()
        pr.set_defaults(**defaults)
        for action in pr._actions:
            if isinstance(action, argparse._SubParsersAction):
                stack.extend(action.choices.values())
            elif action.dest in defaults:
                action.required = False


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    try:
        args_list = list(sys.argv[1:] if argv is None else argv)
        _apply_config_file(parser, args_list)
        args = parser.parse_args(args_list)
        cfg = RunConfig(jobs=args.jobs, seed=args.seed, bound=args.bound)
        if args.command == "enumerate":
            return _cmd_enumerate(args)
        if args.command == "trace":
            return _cmd_trace(args)
        if args.command == "lbh-misses":
            return _cmd_lbh_misses(args, cfg)
        if args.command == "bounds":
            return _cmd_bounds(args)
        if args.command == "scan":
            return _cmd_scan(args, cfg)
        if args.command == "mu-check":
            return _cmd_mu_check(args, cfg)
        if args.command == "brute-oracle":
            return _cmd_brute_oracle(args)
        if args.command == "ingest":
            return _cmd_ingest(args, cfg)
        if args.command == "wieferich":
            return _cmd_wieferich(args)
        if args.command == "family":
            return _cmd_family(args, cfg)
        if args.command == "fit":
            return _cmd_fit(args)
        if args.command == "emit-fig":
            return _cmd_emit_fig(args)
        raise _InputError(f"unknown command {args.command}")
    except (ValueError, OSError) as exc:
        _log(f"error: {exc}")
        return _EXIT_INPUT
    except InvariantViolation as exc:
        _log(f"invariant violation: {exc}")
        return _EXIT_INVARIANT
    except ResourceGuardError as exc:
        _log(f"resource guard: {exc}")
        return _EXIT_RESOURCE


if __name__ == "__main__":
    sys.exit(main())
