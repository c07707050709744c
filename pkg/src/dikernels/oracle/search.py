"""Exhaustive search harness: run one check over an enumerated family.

Progress is written to a plain-text checkpoint so that a long run can be
resumed.  A failed conjecture check is kept as a counterexample (instance
file plus JSON record) rather than raised; a failed check of a proven bound is a
bug and surfaces as :class:`InvariantViolation`.
"""

from __future__ import annotations

import json
import multiprocessing
import os
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from ..acyclic import k_kernel_single_source_acyclic
from ..breaks import large_two_kernel
from ..graph import InvariantViolation, bits
from ..split import small_quasi_kernel
from .bruteforce import min_k_kernel_bruteforce
from .checks import (
    COUNTEREXAMPLE,
    HOLDS,
    VACUOUS,
    Verdict,
    check_absorb_reduction,
    check_goodvert_lemma,
    check_large_kernel_shadow,
    check_small_qk_conjecture,
    check_two_kernel_exists,
)
from .enumeration import EnumerationSpec, Instance, enumerate_instances

# -------------------------------------------------------------------- checks
#
# A check maps an enumerated instance to (verdict, ratio).  ``ratio`` is an
# optional statistic (kernel size over |G|) whose maximum is tallied.

Check = Callable[[Instance], "tuple[Verdict, Fraction | None]"]


def _small_qk(inst):
    v = check_small_qk_conjecture(inst.graph)
    ratio = Fraction(len(v.kernel), inst.graph.n) if v.kernel else None
    return v, ratio


def _large_shadow(inst):
    return check_large_kernel_shadow(inst.graph), None


def _two_kernel(inst):
    return check_two_kernel_exists(inst.graph), None


def _split_qk(inst):
    cert = small_quasi_kernel(inst.graph, inst.S, inst.T, check=False)
    return Verdict(HOLDS, cert.kernel), Fraction(cert.size, inst.graph.n)


def _goodvert(inst):
    r = check_goodvert_lemma(inst.graph, inst.S, inst.T)
    if not r.holds:
        raise InvariantViolation(f"lemma fails for T-vertices {list(r.failures)}")
    return Verdict(HOLDS), None


def _absorb(inst):
    r = check_absorb_reduction(inst.graph, inst.S, inst.T)
    if not r.holds:
        raise InvariantViolation(f"absorb reduction unsound: {r.reason}")
    return Verdict(HOLDS), None


def _large2k(inst):
    G = inst.graph
    sk = large_two_kernel(G, inst.S, inst.T, [1] * G.n)
    return Verdict(HOLDS, sk.kernel), None


def _kkernel_agreement(inst):
    G = inst.graph
    if G.n < 2:
        return Verdict(VACUOUS), None
    worst = None
    for k in range(1, 5):
        cert = k_kernel_single_source_acyclic(G, k)
        best = min_k_kernel_bruteforce(G, k)
        if best is None or cert.size < best[0]:
            raise InvariantViolation(f"k={k}: size {cert.size} below the brute-force minimum")
        r = Fraction(cert.size, G.n)
        worst = r if worst is None else max(worst, r)
    return Verdict(HOLDS), worst


CHECKS: dict[str, tuple[tuple[str, ...], Check]] = {
    "small-qk": (("no-source-oriented", "all-oriented"), _small_qk),
    "large-shadow": (("all-oriented", "no-source-oriented"), _large_shadow),
    "two-kernel": (("all-oriented", "no-source-oriented"), _two_kernel),
    "split-qk": (("split",), _split_qk),
    "goodvert": (("split",), _goodvert),
    "large2k": (("break", "split"), _large2k),
    "absorb": (("break", "split"), _absorb),
    "kkernel": (("single-source-acyclic",), _kkernel_agreement),
}

DEFAULT_CHECK = {
    "no-source-oriented": "small-qk",
    "all-oriented": "large-shadow",
    "split": "split-qk",
    "break": "large2k",
    "single-source-acyclic": "kkernel",
}


# ---------------------------------------------------------------- checkpoint

@dataclass
class SearchResult:
    family: str
    n: int
    check: str
    last_index: int = -1
    tallies: Counter = field(default_factory=Counter)
    max_ratio: Fraction | None = None
    counterexamples: list[str] = field(default_factory=list)  # instance codes

    @property
    def processed(self) -> int:
        return sum(self.tallies.values())

    def merge(self, other: SearchResult) -> None:
        self.tallies.update(other.tallies)
        self.last_index = max(self.last_index, other.last_index)
        if other.max_ratio is not None and (self.max_ratio is None or other.max_ratio > self.max_ratio):
            self.max_ratio = other.max_ratio
        self.counterexamples = sorted(set(self.counterexamples) | set(other.counterexamples))

    def report(self) -> str:
        parts = [f"family={self.family}", f"n={self.n}", f"check={self.check}", f"instances={self.processed}"]
        parts += [f"{k}={v}" for k, v in sorted(self.tallies.items())]
        if self.max_ratio is not None:
            parts.append(f"max_ratio={self.max_ratio.numerator}/{self.max_ratio.denominator}")
        return " ".join(parts)


def write_checkpoint(path: str, res: SearchResult) -> None:
    lines = [f"family {res.family}", f"n {res.n}", f"check {res.check}", f"last {res.last_index}"]
    lines += [f"tally {k} {v}" for k, v in sorted(res.tallies.items())]
    if res.max_ratio is not None:
        lines.append(f"max_ratio {res.max_ratio.numerator}/{res.max_ratio.denominator}")
    lines += [f"counterexample {code}" for code in res.counterexamples]
    tmp = path + ".tmp"
    with open(tmp, "w") as fh:
        fh.write("\n".join(lines) + "\n")
    os.replace(tmp, path)


def read_checkpoint(path: str) -> SearchResult:
    fields: dict[str, str] = {}
    tallies: Counter = Counter()
    found = []
    with open(path) as fh:
        for line in fh:
            key, _, rest = line.strip().partition(" ")
            if key == "tally":
                name, count = rest.split()
                tallies[name] = int(count)
            elif key == "counterexample":
                found.append(rest)
            elif key:
                fields[key] = rest
    ratio = None
    if "max_ratio" in fields:
        p, q = fields["max_ratio"].split("/")
        ratio = Fraction(int(p), int(q))
    return SearchResult(fields["family"], int(fields["n"]), fields["check"], int(fields["last"]), tallies, ratio, found)


# --------------------------------------------------------------------- runner

def _save_counterexample(directory: str, res: SearchResult, inst: Instance, verdict: Verdict) -> str:
    from ..io import emit_instance

    os.makedirs(directory, exist_ok=True)
    stem = os.path.join(directory, f"counterexample-{res.family}-n{res.n}-{inst.index}")
    G = inst.graph
    with open(stem + ".txt", "w") as fh:
        fh.write(emit_instance(G, None if inst.S is None else bits(inst.S)))
    best = min_k_kernel_bruteforce(G, 2)
    record = {
        "check": res.check,
        "code": inst.code,
        "detail": verdict.detail,
        "min_two_kernel_size": None if best is None else best[0],
        "min_two_kernel": None if best is None else sorted(best[1]),
        "status": verdict.status,
    }
    with open(stem + ".json", "w") as fh:
        fh.write(json.dumps(record, sort_keys=True, separators=(",", ":")) + "\n")
    return stem


def _run_shard(res, shard, workers, artifact_dir, checkpoint, every, stop_on_counterexample):
    family, n, check = res.family, res.n, res.check
    fn = CHECKS[check][1]
    start = res.last_index + 1
    for inst in enumerate_instances(EnumerationSpec(n, family)):
        if inst.index < start or inst.index % workers != shard:
            continue
        verdict, ratio = fn(inst)
        res.tallies[verdict.status] += 1
        if ratio is not None and (res.max_ratio is None or ratio > res.max_ratio):
            res.max_ratio = ratio
        res.last_index = inst.index
        if verdict.status == COUNTEREXAMPLE:
            res.counterexamples.append(inst.code)
            if artifact_dir:
                _save_counterexample(artifact_dir, res, inst, verdict)
            if stop_on_counterexample:
                break
        if checkpoint and workers == 1 and (inst.index + 1) % every == 0:
            write_checkpoint(checkpoint, res)
    return res


def _shard_entry(args):
    return _run_shard(*args)


def run_search(
    family: str,
    n: int,
    check: str | None = None,
    *,
    checkpoint: str | None = None,
    resume: bool = False,
    workers: int = 1,
    artifact_dir: str | None = None,
    every: int = 10000,
    stop_on_counterexample: bool = False,
) -> SearchResult:
    """Run ``check`` over every instance of ``family`` on ``n`` vertices.

    With ``workers > 1`` the index range is split by residue modulo
    ``workers``; each worker enumerates the stream itself and the tallies are
    merged afterwards, so the result does not depend on scheduling.
    """
    check = check or DEFAULT_CHECK[family]
    if check not in CHECKS:
        raise ValueError(f"unknown check {check!r}; choose from {', '.join(CHECKS)}")
    if family not in CHECKS[check][0]:
        raise ValueError(f"check {check!r} does not apply to family {family!r}")
    EnumerationSpec(n, family)  # validates family and ceiling before any work
    base = SearchResult(family, n, check)
    if resume:
        if not checkpoint or not os.path.exists(checkpoint):
            raise FileNotFoundError(f"no checkpoint to resume from: {checkpoint}")
        if workers != 1:
            raise ValueError("resume needs a single worker")
        base = read_checkpoint(checkpoint)
        if (base.family, base.n, base.check) != (family, n, check):
            raise ValueError(f"checkpoint is for {base.family} n={base.n} {base.check}")
    if workers == 1:
        _run_shard(base, 0, 1, artifact_dir, checkpoint, every, stop_on_counterexample)
    else:
        args = [(SearchResult(family, n, check), i, workers, artifact_dir, None, every, stop_on_counterexample)
                for i in range(workers)]
        with multiprocessing.Pool(workers) as pool:
            for part in pool.map(_shard_entry, args):
                base.merge(part)
    if checkpoint:
        write_checkpoint(checkpoint, base)
    return base
