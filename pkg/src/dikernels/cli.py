"""Command-line entry point.

Results go to standard output (certificates as canonical JSON), diagnostics
to standard error.  Exit status: 0 success, 1 invalid input, 2 verification
failure, 3 size guard exceeded, 4 counterexample found, 5 internal invariant
violation.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from .acyclic import k_kernel_arborescence, k_kernel_single_source_acyclic, tight_instance
from .breaks import BreakPlan, certify_special, find_break, weight_of
from .graph import (
    Digraph,
    DigraphError,
    InvariantViolation,
    KernelCertificate,
    PreconditionError,
    VerificationFailure,
    bits,
    reduce_digons,
    to_mask,
    topological_order,
    verify_kernel,
)
from .guards import SizeGuardExceeded
from .io import (
    Instance,
    certificate_dict,
    dump_certificate,
    emit_dot,
    emit_instance,
    parse_instance,
    verify_certificate,
)
from .oracle.enumeration import FAMILIES, CeilingExceeded
from .oracle.generators import KINDS, GeneratorSpec, generate
from .oracle.search import CHECKS, run_search
from .split import small_quasi_kernel, small_quasi_kernel_general

OK, INVALID, UNVERIFIED, TOO_LARGE, COUNTEREXAMPLE, INTERNAL = range(6)


class InputError(Exception):
    pass


def _load(path: str, check_partition: bool = True) -> Instance:
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from None
    try:
        return parse_instance(text, check_partition)
    except DigraphError as exc:
        raise InputError(f"{path}: {exc}") from None


def _emit_cert(inst: Instance, cert: KernelCertificate | VerificationFailure, kernel, k, bound, name, **kw) -> int:
    valid = not isinstance(cert, VerificationFailure)
    witness = cert.witness if valid else {}
    sys.stdout.write(dump_certificate(certificate_dict(name, inst, kernel, k, bound, witness, valid, **kw)))
    if not valid:
        print(f"verification failed: {cert.reason}", file=sys.stderr)
        return UNVERIFIED
    return OK


# ------------------------------------------------------------------ commands

def cmd_split_qk(args) -> int:
    inst = _load(args.file, check_partition=not args.allow_digons)
    G = inst.graph
    S = set(inst.S or ())
    if G.is_oriented():
        kernel = _split_kernel(G, S)
    elif not args.allow_digons:
        raise InputError("digraph has digons; pass --allow-digons to reduce them first")
    else:
        red = reduce_digons(G)
        print(f"reduced {len(red.log)} digon steps, {G.n - red.graph.n} vertices forced out", file=sys.stderr)
        sub_S = {i for i, v in enumerate(red.kept) if v in S}
        inner = _split_kernel(red.graph, sub_S) if red.graph.n else []
        kernel = red.lift(inner)
    bound = Fraction(G.n, 2)
    cert = verify_kernel(G, kernel, 2, claimed_bound=bound, algorithm="split-qk")
    return _emit_cert(inst, cert, kernel, 2, bound, "split-qk")


def _split_kernel(G: Digraph, S: set[int]) -> list[int]:
    T = [v for v in range(G.n) if v not in S]
    if S:
        return list(small_quasi_kernel(G, sorted(S), T).kernel)
    return list(small_quasi_kernel_general(G, (), T).kernel)


def cmd_large2k(args) -> int:
    inst = _load(args.file)
    G = inst.graph
    if inst.weights is not None and args.uniform_weight is not None:
        raise InputError("instance has weights; drop --uniform-weight")
    if inst.weights is not None:
        f = list(inst.weights)
    elif args.uniform_weight is not None:
        if args.uniform_weight < 0:
            raise InputError("--uniform-weight must be nonnegative")
        f = [args.uniform_weight] * G.n
    else:
        raise InputError("no weights: add 'w' lines or pass --uniform-weight W")
    if inst.S is None:
        found = find_break(G)
        if found is None:
            raise InputError("no S line and the digraph admits no break")
        S, T = found
        print(f"using the break with S = {list(bits(S))}", file=sys.stderr)
    else:
        S = to_mask(inst.S)
        T = G.all_mask & ~S
    plan = BreakPlan(G, S, T)
    special = certify_special(G, S, T, f, plan.solve(f))
    K = to_mask(special.kernel)
    hood = G.out_union(K) if args.nplus_mode == "open" else K | G.out_union(K)
    mixed = 2 * len(special.kernel) + sum(f) <= G.n + 2 * weight_of(f, hood)
    extra = {
        "anchor": special.anchor,
        "break_S": list(bits(S)),
        "mixed_inequality": {"holds": mixed, "mode": args.nplus_mode},
        "shape": special.shape,
    }
    if inst.weights is None:
        extra["uniform_weight"] = args.uniform_weight
    cert = verify_kernel(G, special.kernel, 2, algorithm="large2k")
    return _emit_cert(
        inst, cert, special.kernel, 2, special.bound, "large2k",
        bound_kind="coverage-at-least", coverage=special.coverage, extra=extra,
    )


def cmd_kkernel(args) -> int:
    inst = _load(args.file)
    G = inst.graph
    order = topological_order(G)
    if order is not None and len(G.sources()) == 1:
        cert = k_kernel_single_source_acyclic(G, args.k)
    else:
        cert = k_kernel_arborescence(G, args.k)
    return _emit_cert(inst, cert, cert.kernel, args.k, cert.claimed_bound, cert.algorithm)


def cmd_verify(args) -> int:
    inst = _load(args.instance)
    try:
        with open(args.certificate) as fh:
            doc = json.load(fh)
    except (OSError, ValueError) as exc:
        raise InputError(f"{args.certificate}: {exc}") from None
    reason = verify_certificate(inst, doc)
    sys.stdout.write(json.dumps({"reason": reason, "valid": reason is None}, sort_keys=True, separators=(",", ":")) + "\n")
    if reason is not None:
        print(f"certificate rejected: {reason}", file=sys.stderr)
        return UNVERIFIED
    return OK


def cmd_search(args) -> int:
    checkpoint = args.resume or args.checkpoint
    res = run_search(
        args.family,
        args.n,
        args.check,
        checkpoint=checkpoint,
        resume=args.resume is not None,
        workers=args.workers,
        artifact_dir=args.artifacts,
    )
    report = {
        "check": res.check,
        "counterexamples": res.counterexamples,
        "family": res.family,
        "instances": res.processed,
        "max_ratio": None if res.max_ratio is None else f"{res.max_ratio.numerator}/{res.max_ratio.denominator}",
        "n": res.n,
        "tallies": dict(res.tallies),
    }
    sys.stdout.write(json.dumps(report, sort_keys=True, separators=(",", ":")) + "\n")
    print(res.report(), file=sys.stderr)
    if res.counterexamples:
        print(f"COUNTEREXAMPLE: {len(res.counterexamples)} instance(s), first {res.counterexamples[0]}", file=sys.stderr)
        return COUNTEREXAMPLE
    return OK


def cmd_gen(args) -> int:
    spec = GeneratorSpec(args.kind, n=args.n, n_s=args.n_s, n_t=args.n_t, density=args.density,
                         extra=args.extra, seed=args.seed)
    out = generate(spec)
    S = None if out.S is None else bits(out.S)
    sys.stdout.write(emit_instance(out.graph, S))
    return OK


def cmd_tight(args) -> int:
    sys.stdout.write(emit_instance(tight_instance(args.k, args.m)))
    return OK


def cmd_dot(args) -> int:
    inst = _load(args.file, check_partition=False)
    highlight: list[int] = []
    if args.certificate:
        with open(args.certificate) as fh:
            highlight = json.load(fh)["kernel"]
    sys.stdout.write(emit_dot(inst.graph, highlight))
    return OK


# -------------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dikernels", description="Small and large kernels in digraphs.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("split-qk", help="2-kernel of size <= |G|/2 for a split digraph")
    p.add_argument("file")
    p.add_argument("--allow-digons", action="store_true", help="reduce digons before solving")
    p.set_defaults(func=cmd_split_qk)

    p = sub.add_parser("large2k", help="weighted large 2-kernel for a digraph with a break")
    p.add_argument("file")
    p.add_argument("--uniform-weight", type=int, metavar="W")
    p.add_argument("--nplus-mode", choices=("open", "closed"), default="open",
                   help="neighbourhood used when reporting the mixed inequality")
    p.set_defaults(func=cmd_large2k)

    p = sub.add_parser("kkernel", help="small k-kernel (acyclic single source, or spanning arborescence)")
    p.add_argument("file")
    p.add_argument("-k", type=int, required=True)
    p.set_defaults(func=cmd_kkernel)

    p = sub.add_parser("verify", help="re-check a certificate against its instance")
    p.add_argument("instance")
    p.add_argument("certificate")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("search", help="exhaustive check over an enumerated family")
    p.add_argument("--family", choices=FAMILIES, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--check", choices=sorted(CHECKS), help="default depends on the family")
    p.add_argument("--checkpoint", metavar="FILE", help="write progress here")
    p.add_argument("--resume", metavar="FILE", help="continue from this checkpoint")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--artifacts", metavar="DIR", default="counterexamples",
                   help="where counterexample files go")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("gen", help="seeded random instance")
    p.add_argument("--kind", choices=KINDS, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--n", type=int, default=0)
    p.add_argument("--n-s", type=int, default=0)
    p.add_argument("--n-t", type=int, default=0)
    p.add_argument("--density", type=float, default=0.5)
    p.add_argument("--extra", type=int, default=0)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("tight", help="instance with no k-kernel below 1+(|G|-2)/k")
    p.add_argument("-k", type=int, required=True)
    p.add_argument("-m", type=int, required=True)
    p.set_defaults(func=cmd_tight)

    p = sub.add_parser("dot", help="DOT export, optionally marking a certificate's kernel")
    p.add_argument("file")
    p.add_argument("--certificate")
    p.set_defaults(func=cmd_dot)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (SizeGuardExceeded, CeilingExceeded) as exc:
        print(f"size guard: {exc}", file=sys.stderr)
        return TOO_LARGE
    except InvariantViolation as exc:
        print(f"internal invariant violated: {exc}", file=sys.stderr)
        return INTERNAL
    except (InputError, PreconditionError, DigraphError, ValueError, FileNotFoundError) as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return INVALID
    except Exception as exc:  # anything else is a bug, not bad input
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return INTERNAL


if __name__ == "__main__":
    sys.exit(main())
