"""Command-line front end: prcldpc <subcommand> ...

Data goes to stdout (or --out); diagnostics go to stderr. The factor table
used for primitivity tests can be overridden with $PRCLDPC_FACTOR_TABLE.
"""
from __future__ import annotations

import argparse
import os
import sys

import numpy as np

from . import code as codemod
from . import codec, design, pnseq, ruler, simulator, spectrum
from .errors import PrcLdpcError
from .gf2poly import FACTOR_TABLE_ENV, format_polynomial, parse_polynomial


def _add_code_args(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("code")
    g.add_argument("--code", metavar="FILE", help="code descriptor file (h=, n=, puncture=, z=, shorten=)")
    g.add_argument("--h", metavar="POLY", help='parity-check polynomial, e.g. "0,1,5,11,13" or 0x2823')
    g.add_argument("--n", type=int, help="mother block length (default 2k)")
    g.add_argument("--puncture", type=int, default=0, help="trailing symbols to puncture")
    g.add_argument("--z", type=int, default=0, help="information symbols to shorten")
    g.add_argument("--shorten", default="head", help="head, tail or split:a,b")


def _code_from_args(args) -> codemod.PrcLdpcCode:
    if args.code:
        return codemod.read_descriptor(args.code)
    if not args.h:
        raise SystemExit("error: give --code FILE or --h POLY")
    h = parse_polynomial(args.h)
    c = codemod.build(h, args.n or 2 * h.degree)
    c = codemod.puncture(c, args.puncture)
    if args.z:
        c = codemod.shorten(c, args.z, args.shorten)
    return c


def _emit(args, text: str) -> None:
    if getattr(args, "out", None):
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _gnuplot(args, script: str) -> None:
    if not getattr(args, "gnuplot", False):
        return
    if not args.out:
        raise SystemExit("error: --gnuplot needs --out to reference the CSV")
    path = os.path.splitext(args.out)[0] + ".gp"
    with open(path, "w") as fh:
        fh.write(script.replace("@CSV@", args.out))
    print(f"wrote {path}", file=sys.stderr)


def _bits(text: str) -> np.ndarray:
    text = text.strip()
    if not set(text) <= {"0", "1"}:
        raise ValueError(f"expected a 0/1 string, got {text!r}")
    return np.frombuffer(text.encode(), dtype=np.uint8) - ord("0")


def cmd_design(args) -> int:
    rulers = ruler.read_rulers(args.rulers) if args.rulers else ruler.builtin_rulers()
    spec = design.SearchSpec(
        args.k, args.wh, args.wf, tuple(rulers),
        quality_required=not args.no_quality, max_results=args.max_results, first=args.first,
    )
    res = design.run_search(spec)
    lines = []
    for h in res.hits:
        lines.append(format_polynomial(h))
        lines.append("  " + design.validate_candidate(h, spec).summary())
    _emit(args, "\n".join(lines) + ("\n" if lines else ""))
    print(f"{len(res.hits)} hit(s), {res.tested} primitivity test(s), bound {res.bound}", file=sys.stderr)
    return 0


def cmd_validate(args) -> int:
    h = parse_polynomial(args.h)
    rep = design.validate_candidate(h)
    prof = ruler.profile(h)
    out = [f"h={format_polynomial(h)}", f"e={list(prof.e)}", f"s={list(prof.s)}"]
    out += [f"{k}={'yes' if v else 'no'}" for k, v in rep.as_dict().items()]
    _emit(args, "\n".join(out) + "\n")
    return 0 if rep.all_pass else 3


def cmd_analyze(args) -> int:
    c = _code_from_args(args)
    method = args.method
    if method == "auto":
        method = "exact" if c.k_parent <= pnseq.FULL_MAX_K else "estimate"
    kw = {}
    if method == "estimate":
        kw = dict(scan_radius=args.radius, probe_iterations=args.probe_iters, seed=args.seed)
    spec = spectrum.spectrum(c, method, **kw)
    q = ruler.design_quality(ruler.profile(c.h))
    out = [f"code=({c.n},{c.k}) h={format_polynomial(c.h)} z={c.z}"]
    if method == "exact":
        out.append(f"d={spec.d} A({spec.d})={spec.a_d}")
    else:
        out.append(f"d_est={spec.d} (estimate) A_est({spec.d})={spec.a_d} coverage={spec.coverage:.3e}")
    out.append("A(w): " + " ".join(f"{w}:{a}" for w, a in sorted(spec.counts.items()) if w))
    try:
        lm = pnseq.locate_h_star(c.h)
        out.append(f"Z0={lm.z0} Z1={lm.z1} comb_left={lm.left_comb_spacing} comb_right={lm.right_comb_spacing}"
                   f" t2_position={lm.t2_position}")
    except PrcLdpcError as exc:
        out.append(f"landmarks unavailable: {exc}")
    out.append("quality: " + " ".join(f"{k}={'yes' if v else 'no'}" for k, v in q.as_dict().items()))
    out += spectrum.lemma_bounds(c).lines()
    text = "\n".join(out) + "\n"
    if args.csv:
        with open(args.csv, "w") as fh:
            fh.write(spectrum.spectrum_csv([(c.n, spec.d, spec.a_d, method)]))
    if args.families:
        text += spectrum.families_csv(spectrum.family_census(c))
    _emit(args, text)
    return 0


def cmd_profile(args) -> int:
    h = parse_polynomial(args.h) if args.h else codemod.read_descriptor(args.code).h
    kw = {}
    if args.method == "estimate":
        kw = dict(scan_radius=args.radius, probe_iterations=args.probe_iters, seed=args.seed)
    prof = spectrum.distance_profile(h, args.d_max, args.method, n_max=args.n_max, **kw)
    rows = ["d,n,method"] + [f"{d},{n},{prof.method}" for d, n in sorted(prof.n_of_d.items())]
    _emit(args, "\n".join(rows) + "\n")
    _gnuplot(args, "set datafile separator ','\nset key off\nset xlabel 'n(d)'\nset ylabel 'd'\n"
                   "plot '@CSV@' using 2:1 every ::1 with steps\n")
    return 0


def cmd_encode(args) -> int:
    c = _code_from_args(args)
    enc = codec.LfsrEncoder(max(128, c.k_parent)).configure(c)
    infos = [args.info] if args.info else [ln for ln in open(args.info_file).read().split() if ln]
    out = ["".join(map(str, enc.encode(_bits(s)))) for s in infos]
    _emit(args, "\n".join(out) + "\n")
    return 0


def _read_llr(path: str, fmt: str, n: int) -> np.ndarray:
    if fmt == "f32":
        data = np.fromfile(path, dtype=np.float32)
        return data.reshape(-1, n)
    return np.atleast_2d(np.loadtxt(path, delimiter=",", dtype=np.float64, ndmin=2))


def cmd_decode(args) -> int:
    c = _code_from_args(args)
    g = codec.DecoderGraph.from_code(c, algorithm=args.algorithm, max_iter=args.max_iter, nms_factor=args.nms_factor)
    llr = _read_llr(args.llr, args.llr_format, c.n)
    hard, iters, conv = g.decode_batch(llr)
    out = [f"{''.join(map(str, h))} iters={i} converged={'yes' if ok else 'no'}" for h, i, ok in zip(hard, iters, conv)]
    _emit(args, "\n".join(out) + "\n")
    return 0


def _grid(text: str) -> tuple[float, ...]:
    if ":" in text:
        a, b, s = (float(t) for t in text.split(":"))
        count = int(round((b - a) / s)) + 1
        return tuple(round(a + i * s, 10) for i in range(count))
    return tuple(float(t) for t in text.split(","))


def cmd_simulate(args) -> int:
    c = _code_from_args(args)
    plan = simulator.SimPlan(
        c, _grid(args.ebn0), max_trials=args.max_trials, min_errors=args.min_errors, seed=args.seed,
        algorithm=args.algorithm, max_iter=args.max_iter, nms_factor=args.nms_factor,
        block_size=args.block_size, all_zero=args.all_zero,
    )
    res = simulator.run(plan, workers=args.workers)
    _emit(args, res.to_csv())
    if args.meta:
        with open(args.meta, "w") as fh:
            fh.write(res.metadata() + "\n")
    else:
        print(res.metadata(), file=sys.stderr)
    _gnuplot(args, "set datafile separator ','\nset logscale y\nset xlabel 'Eb/N0 [dB]'\nset ylabel 'CER'\n"
                   "plot '@CSV@' using 1:5:6 every ::1 with yerrorlines title 'CER'\n")
    return 0


def cmd_pn_dump(args) -> int:
    h = parse_polynomial(args.h)
    ruler.profile(h)  # rejects h_0 = 0 and oversized degrees
    _emit(args, pnseq.dump_window(h, args.start, args.length) + "\n")
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="prcldpc",
        description="Primitive rate-compatible LDPC codes: design, analysis, coding and simulation.",
        epilog=f"Set ${FACTOR_TABLE_ENV} to use another 2^k-1 factor table.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("design", help="search primitive Golomb-ruler polynomials")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--wh", type=int, required=True, help="target weight (odd)")
    p.add_argument("--wf", type=int, default=2, help="size of the fixed subset (includes marks 0 and k)")
    p.add_argument("--rulers", metavar="FILE", help="ruler file; default: built-in optimal rulers")
    p.add_argument("--first", action="store_true", help="stop at the first hit")
    p.add_argument("--max-results", type=int)
    p.add_argument("--no-quality", action="store_true", help="skip the separation-quality screen")
    p.add_argument("--out")
    p.set_defaults(func=cmd_design)

    p = sub.add_parser("validate", help="report every design gate for one polynomial")
    p.add_argument("--h", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_validate)

    def est_args(p):
        p.add_argument("--radius", type=int, help="estimator scan radius (default 4k)")
        p.add_argument("--probe-iters", type=int, default=spectrum.PROBE_ITERATIONS)
        p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("analyze", help="distance, landmarks, quality flags and bounds")
    _add_code_args(p)
    p.add_argument("--method", choices=("auto", "exact", "estimate"), default="auto")
    est_args(p)
    p.add_argument("--families", action="store_true", help="append the family census CSV")
    p.add_argument("--csv", metavar="FILE", help="also write n,d,A(d),method")
    p.add_argument("--out")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("profile", help="minimum-distance profile n(d)")
    p.add_argument("--h")
    p.add_argument("--code")
    p.add_argument("--d-max", type=int, required=True)
    p.add_argument("--n-max", type=int)
    p.add_argument("--method", choices=("exact", "estimate"), default="exact")
    est_args(p)
    p.add_argument("--out")
    p.add_argument("--gnuplot", action="store_true")
    p.set_defaults(func=cmd_profile)

    p = sub.add_parser("encode", help="systematic LFSR encoding")
    _add_code_args(p)
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--info", help="information bits as a 0/1 string")
    src.add_argument("--info-file", help="one 0/1 string per line")
    p.add_argument("--out")
    p.set_defaults(func=cmd_encode)

    def dec_args(p):
        p.add_argument("--algorithm", choices=codec.ALGORITHMS, default="spa")
        p.add_argument("--max-iter", type=int, default=codec.DEFAULT_MAX_ITER)
        p.add_argument("--nms-factor", type=float, default=codec.DEFAULT_NMS_FACTOR)

    p = sub.add_parser("decode", help="belief-propagation decoding of LLR vectors")
    _add_code_args(p)
    p.add_argument("--llr", required=True, help="LLR file, one word per row")
    p.add_argument("--llr-format", choices=("csv", "f32"), default="csv", help="CSV text or native float32 binary")
    dec_args(p)
    p.add_argument("--out")
    p.set_defaults(func=cmd_decode)

    p = sub.add_parser("simulate", help="Monte Carlo CER over BPSK/AWGN")
    _add_code_args(p)
    p.add_argument("--ebn0", required=True, help='"1,2,3" or "start:stop:step" in dB')
    p.add_argument("--max-trials", type=int, default=simulator.DEFAULT_MAX_TRIALS)
    p.add_argument("--min-errors", type=int, default=simulator.DEFAULT_MIN_ERRORS)
    p.add_argument("--block-size", type=int, default=simulator.DEFAULT_BLOCK)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--all-zero", action="store_true", help="transmit the all-zero codeword only")
    dec_args(p)
    p.add_argument("--out")
    p.add_argument("--meta", metavar="FILE", help="write the run metadata here instead of stderr")
    p.add_argument("--gnuplot", action="store_true")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("pn-dump", help="print a window of the pseudo-noise sequence")
    p.add_argument("--h", required=True)
    p.add_argument("--start", type=int, default=0)
    p.add_argument("--length", type=int, required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_pn_dump)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (PrcLdpcError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
