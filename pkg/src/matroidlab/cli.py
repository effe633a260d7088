"""Command-line front end.

Every verb reads a matroid (or polymatroid) definition file and writes one
JSON document.  Exit codes: 0 completed, 2 invalid input, 3 resource cap
hit, 4 falsification event.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import time
from dataclasses import dataclass, field
from itertools import combinations
from typing import Optional, Sequence

from .bits import elements
from .certificate import Certificate, verify_certificate
from .config import Limits
from .conjectures import (
    DiscretePolymatroid,
    PolymatroidMatroid,
    cyclic_ordering,
    polymatroid_swap_correspondence,
    polymatroid_to_matroid,
    rotation_certificate,
    te_check,
)
from .core import Matroid, fingerprint_of, verify_axioms
from .errors import FalsificationError, InternalConsistency, InvalidParameter, NotStronglyBaseOrderable, ResourceLimit
from .exchange import swap_sets
from .fiber import canonical, connected_components, jm_member
from .io import emit_report, parse_definition, parse_set, parse_sets
from .saturation import balance, min_saturation_exponent, saturation_exponent, saturation_witness
from .sbo import is_strongly_base_orderable, rewrite_certificate

log = logging.getLogger("matroidlab")

EXIT_OK, EXIT_INVALID, EXIT_CAP, EXIT_FALSIFIED = 0, 2, 3, 4

VERBS = ("bases", "axioms", "sbo", "rewrite", "fiber", "jm", "te", "balance",
         "saturate", "cyclic", "verify", "polymatroid")


@dataclass
class RunConfig:
    command: str
    definition: str
    options: dict = field(default_factory=dict)
    limits: Limits = field(default_factory=Limits)
    deterministic: bool = False
    output: Optional[str] = None
    verbosity: int = 0
    jobs: Optional[int] = None

    def __post_init__(self):
        if self.command not in VERBS:
            raise InvalidParameter(f"unknown command {self.command!r}")
        if self.jobs is not None and self.jobs < 1:
            raise InvalidParameter("--jobs must be positive")

    @property
    def workers(self) -> int:
        if self.deterministic:
            return 1
        return self.jobs or os.cpu_count() or 1


def _sets_json(masks) -> list:
    return [list(elements(x)) for x in masks]


def _arg(text: str):
    """Inline JSON, or ``@path`` to read it from a file."""
    if text.startswith("@"):
        with open(text[1:]) as fh:
            text = fh.read()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidParameter(f"argument is not valid JSON: {exc.msg}") from exc


def _need(opts: dict, key: str):
    if opts.get(key) is None:
        raise InvalidParameter(f"--{key.replace('_', '-')} is required")
    return opts[key]


def _cmd_bases(m, cfg):
    bases = m.bases(cfg.limits)
    return {"count": len(bases), "rank": m.rank, "size": m.size, "bases": _sets_json(bases)}


def _cmd_axioms(m, cfg, raw):
    if raw is not None:
        listed = parse_sets(raw.get("bases", []), "bases")
    else:
        listed = list(m.bases(cfg.limits))
    ok, bad = verify_axioms(listed)
    witness = None
    if bad is not None:
        b1, b2, e = bad
        witness = {"B1": list(elements(b1)), "B2": list(elements(b2)), "e": e}
    return {"holds": ok, "bases_checked": len(listed), "witness": witness}


def _cmd_sbo(m, cfg):
    ok, pair = is_strongly_base_orderable(m, cfg.limits)
    return {"strongly_base_orderable": ok, "witness_pair": None if pair is None else _sets_json(pair)}


def _cmd_rewrite(m, cfg):
    bs = parse_sets(_arg(_need(cfg.options, "from")))
    ds = parse_sets(_arg(_need(cfg.options, "to")))
    trace: list[int] = []
    cert = rewrite_certificate(m, bs, ds, trace)
    doc = cert.to_json()
    doc["overlap_trace"] = trace
    return doc


def _cmd_fiber(m, cfg):
    d = _arg(_need(cfg.options, "multidegree"))
    if not isinstance(d, list):
        raise InvalidParameter("multidegree must be a list of integers")
    rep = connected_components(m, d, cfg.options.get("degree"), cfg.limits,
                               diameter=bool(cfg.options.get("diameter")), timed=not cfg.deterministic)
    return rep.to_json()


def _cmd_jm(m, cfg):
    m1 = parse_sets(_arg(_need(cfg.options, "m1")))
    m2 = parse_sets(_arg(_need(cfg.options, "m2")))
    cert = jm_member(m1, m2, m, cfg.limits)
    if cert is None:
        return {"connected": False, "start": _sets_json(canonical(m1)), "end": _sets_json(canonical(m2))}
    doc = cert.to_json()
    doc["connected"] = True
    return doc


def _cmd_te(m, cfg):
    variant = int(_need(cfg.options, "variant"))
    n = int(_need(cfg.options, "n"))
    return te_check(m, n, variant, cfg.limits, jobs=cfg.workers, multi_cap=cfg.options.get("multi_cap")).to_json()


def _cmd_balance(m, cfg):
    b = parse_set(_arg(_need(cfg.options, "reference")))
    b2 = parse_set(_arg(_need(cfg.options, "basis")))
    balanced, cert = balance(m, b, b2)
    doc = cert.to_json()
    doc["balanced"] = _sets_json(balanced)
    doc["reference_basis"] = list(elements(b))
    return doc


def _cmd_saturate(m, cfg):
    m1 = parse_sets(_arg(_need(cfg.options, "m1")))
    m2 = parse_sets(_arg(_need(cfg.options, "m2")))
    b = parse_set(_arg(_need(cfg.options, "reference")))
    doc = saturation_witness(m, m1, m2, b, cfg.limits).to_json()
    if cfg.options.get("minimum"):
        k_min = min_saturation_exponent(m, m1, m2, b, cfg.limits)
        if k_min > saturation_exponent(b, m1):
            raise FalsificationError(f"minimal exponent {k_min} exceeds the bound")
        doc["min_exponent"] = k_min
    return doc


def _cmd_cyclic(m, cfg):
    order = cyclic_ordering(m, cfg.limits)
    if order is None:
        return {"order": None, "found": False}
    doc = {"order": list(order), "found": True}
    if m.rank and len(order) == 2 * m.rank:
        doc["certificate"] = rotation_certificate(m, order).to_json()
    return doc


def _cmd_verify(m, cfg):
    path = _need(cfg.options, "certificate")
    with open(path) as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise InvalidParameter(f"certificate file is not valid JSON: {exc.msg}") from exc
    if "moves" not in doc and isinstance(doc.get("certificate"), dict):
        doc = doc["certificate"]
    try:
        cert = Certificate.from_json(doc)
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidParameter(f"malformed certificate: {exc}") from exc
    res = verify_certificate(m, cert)
    return {"valid": res.ok, "failed_at": res.failed_at, "reason": res.reason, "moves": len(cert.moves)}


def _cmd_polymatroid(p: DiscretePolymatroid, cfg):
    mp = polymatroid_to_matroid(p)
    bases = mp.bases(cfg.limits)
    ok, _ = verify_axioms(bases)
    longest = 0
    checked = 0
    clock = cfg.limits.clock()
    for x1, x2 in combinations(bases, 2):
        for e in elements(x1 & ~x2):
            for f in elements(x2 & ~x1):
                clock.tick()
                y1, y2 = swap_sets(x1, x2, e, f)
                if mp.is_basis(y1) and mp.is_basis(y2):
                    longest = max(longest, len(polymatroid_swap_correspondence(p, (x1, x2), e, f, mp)))
                    checked += 1
    return {
        "polymatroid": p.to_json(),
        "rank": p.rank,
        "matroid": {"size": mp.size, "rank": mp.rank, "basis_count": len(bases), "bases": _sets_json(bases)},
        "axioms_hold": ok,
        "double_swaps_checked": checked,
        "max_p_swaps": longest,
    }


_HANDLERS = {
    "bases": _cmd_bases, "sbo": _cmd_sbo, "rewrite": _cmd_rewrite, "fiber": _cmd_fiber,
    "jm": _cmd_jm, "te": _cmd_te, "balance": _cmd_balance, "saturate": _cmd_saturate,
    "cyclic": _cmd_cyclic, "verify": _cmd_verify,
}


def _execute(cfg: RunConfig) -> tuple[dict, str]:
    with open(cfg.definition) as fh:
        text = fh.read()
    if cfg.command == "axioms":
        try:
            raw = json.loads(text)
        except json.JSONDecodeError:
            raw = None  # parse_definition reports it
        if isinstance(raw, dict) and raw.get("type") == "explicit":
            # the point is to report the failure, so do not build the oracle
            doc = {k: v for k, v in raw.items() if k != "labels"}
            return _cmd_axioms(None, cfg, raw), fingerprint_of(doc)
    obj = parse_definition(text)
    if isinstance(obj, DiscretePolymatroid):
        if cfg.command == "polymatroid":
            return _cmd_polymatroid(obj, cfg), PolymatroidMatroid(obj).fingerprint
        m: Matroid = polymatroid_to_matroid(obj)
    else:
        if cfg.command == "polymatroid":
            raise InvalidParameter("the polymatroid verb needs a polymatroid definition")
        m = obj
    if cfg.command == "axioms":
        return _cmd_axioms(m, cfg, None), m.fingerprint
    return _HANDLERS[cfg.command](m, cfg), m.fingerprint


def run(cfg: RunConfig) -> int:
    t0 = time.perf_counter()
    status = EXIT_OK
    try:
        result, sha = _execute(cfg)
        if cfg.command == "verify" and not result["valid"]:
            # a certificate that does not replay is bad input, not a verdict
            status = EXIT_INVALID
    except NotStronglyBaseOrderable as exc:
        result, sha, status = {"error": str(exc), "kind": "not_strongly_base_orderable"}, None, EXIT_INVALID
    except InvalidParameter as exc:
        result, sha, status = {"error": str(exc), "kind": type(exc).__name__}, None, EXIT_INVALID
        if getattr(exc, "path", None):
            result["path"] = exc.path
        if getattr(exc, "witness", None) is not None:
            result["witness"] = exc.witness
    except OSError as exc:
        result, sha, status = {"error": str(exc), "kind": "io"}, None, EXIT_INVALID
    except ResourceLimit as exc:
        result, sha, status = {"error": str(exc), "kind": "resource_limit", "cap": exc.cap}, None, EXIT_CAP
    except (FalsificationError, InternalConsistency) as exc:
        result, sha, status = {"error": str(exc), "kind": type(exc).__name__}, None, EXIT_FALSIFIED
    if sha is None:
        result = {"command": cfg.command, "status": status, "result": result}
    else:
        result = dict(result, command=cfg.command, status=status)
    if not cfg.deterministic:
        result["elapsed"] = round(time.perf_counter() - t0, 6)
    text = emit_report(result, sha)
    if cfg.output:
        with open(cfg.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    log.info("%s finished with exit code %d", cfg.command, status)
    return status


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("definition", help="matroid or polymatroid definition (JSON file)")
    common.add_argument("-o", "--output", help="write the report here instead of stdout")
    common.add_argument("--deterministic", action="store_true",
                        help="byte-stable output: no timings, single worker")
    common.add_argument("--max-bases", type=int)
    common.add_argument("--max-fiber-nodes", type=int)
    common.add_argument("--time-limit", type=float, help="seconds")
    common.add_argument("--jobs", type=int, help="worker processes for te (default: all CPUs)")
    common.add_argument("-v", "--verbose", action="count", default=0)

    parser = argparse.ArgumentParser(prog="matroidlab", description="Basis-exchange experiments on small matroids.")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("bases", parents=[common], help="enumerate bases")
    sub.add_parser("axioms", parents=[common], help="check the basis exchange axiom")
    sub.add_parser("sbo", parents=[common], help="strong base orderability")
    p = sub.add_parser("rewrite", parents=[common], help="swap certificate between compatible sequences")
    p.add_argument("--from", dest="from_", required=True, help='e.g. "[[0,1],[2,3]]" or @file')
    p.add_argument("--to", required=True)
    p = sub.add_parser("fiber", parents=[common], help="components of one fiber")
    p.add_argument("--multidegree", required=True)
    p.add_argument("--degree", type=int)
    p.add_argument("--diameter", action="store_true")
    p = sub.add_parser("jm", parents=[common], help="shortest swap path between two monomials")
    p.add_argument("--m1", required=True)
    p.add_argument("--m2", required=True)
    p = sub.add_parser("te", parents=[common], help="toric exchange connectivity check")
    p.add_argument("--variant", type=int, choices=(1, 2, 3), required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--multi-cap", type=int)
    p = sub.add_parser("balance", parents=[common], help="split a basis into balanced bases")
    p.add_argument("--reference", required=True)
    p.add_argument("--basis", required=True)
    p = sub.add_parser("saturate", parents=[common], help="saturation witness for a binomial")
    p.add_argument("--m1", required=True)
    p.add_argument("--m2", required=True)
    p.add_argument("--reference", required=True)
    p.add_argument("--minimum", action="store_true", help="also search for the smallest exponent")
    sub.add_parser("cyclic", parents=[common], help="cyclic ordering of a two-basis ground set")
    p = sub.add_parser("verify", parents=[common], help="replay a certificate file")
    p.add_argument("--certificate", required=True)
    sub.add_parser("polymatroid", parents=[common], help="reduce a discrete polymatroid to a matroid")
    return parser


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    overrides = {k: v for k, v in (("max_bases", ns.max_bases), ("max_fiber_nodes", ns.max_fiber_nodes),
                                   ("time_limit", ns.time_limit)) if v is not None}
    skip = {"command", "definition", "output", "deterministic", "max_bases", "max_fiber_nodes",
            "time_limit", "jobs", "verbose"}
    options = {k: v for k, v in vars(ns).items() if k not in skip}
    if "from_" in options:
        options["from"] = options.pop("from_")
    return RunConfig(
        command=ns.command,
        definition=ns.definition,
        options=options,
        limits=Limits.from_env(**overrides),
        deterministic=ns.deterministic,
        output=ns.output,
        verbosity=ns.verbose,
        jobs=ns.jobs,
    )


def main(argv: Optional[Sequence[str]] = None) -> int:
    ns = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.WARNING - 10 * min(ns.verbose, 2), stream=sys.stderr,
                        format="%(levelname)s %(message)s")
    try:
        cfg = config_from_args(ns)
    except InvalidParameter as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INVALID
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
