"""Command-line front end.

``l2a <command> [--in FILE]... [--out FILE] [--seed N] [--mutate TARGET]
[--max-degree N] [--json|--text]``

Check commands print a report and exit 0 on pass, 1 on an axiom failure.
Construction commands write the constructed instance.  Any structural or
usage problem exits 2 with a one-line diagnostic on standard error.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from . import catalog as cat
from .courant import (CourantData, PairingError, adjoint_lie2, check_courant, drinfeld_double,
                      fat_courant, standard_courant)
from .bundles import BundleMismatch, Chart
from .exactpoly import DegreeLimitExceeded, degree_limit
from .generate import GEN_KINDS, GenerationError, gen_instance, random_phi
from .lie2core import (check_morphism, check_split_lie2, compose_morphisms, qfield_square_check,
                       shift_splitting)
from .matched import (ExtractionError, InvalidInput, bicrossproduct, check_lie_algebroid,
                      check_matched_pair, check_two_rep, extract_matched_pair, rep_lie2,
                      semidirect_lie2)
from .report import Report
from .rng import XorShift64Star
from .serialize import Instance, LoadError, dumps_instance, instance_schema, load_spec, report_schema

__all__ = ["main", "run", "UsageError", "COMMANDS"]

DEFAULT_MAX_DEGREE = 24


class UsageError(Exception):
    """Wrong number or kind of inputs, or a missing option."""


def _inputs(args, kinds: Sequence[Tuple[str, ...]]) -> List[Instance]:
    """Load ``--in`` files and check them against the expected kinds."""
    paths = args.inputs or []
    if len(paths) != len(kinds):
        raise UsageError(f"{args.command} expects {len(kinds)} --in file(s), got {len(paths)}")
    out = []
    for p, want in zip(paths, kinds):
        inst = load_spec(p)
        if inst.kind not in want:
            raise UsageError(f"{args.command}: {p} holds a {inst.kind} instance, "
                             f"expected {' or '.join(want)}")
        out.append(inst)
    return out


def _one(args, *kinds: str) -> Instance:
    return _inputs(args, [kinds])[0]


def _courant_of(inst: Instance) -> CourantData:
    return inst.payload[0] if isinstance(inst.payload, tuple) else inst.payload


def _algebroid_of(inst: Instance):
    return inst.payload[0] if isinstance(inst.payload, tuple) else inst.payload


def _derived(kind: str, name: str, payload, parent: Instance, command: str, **extra) -> Instance:
    meta = {"source": command, "input": parent.name}
    meta.update(extra)
    return Instance(kind, name, payload, meta)


def _guard(report: Report, args) -> Optional[Report]:
    """Input validation for constructions; ``--no-validate`` skips it."""
    if args.no_validate or report.passed:
        return None
    return report


# check commands ---------------------------------------------------------------

def _check_lie2(args):
    return check_split_lie2(_one(args, "split_lie2").payload)


def _qsquare(args):
    return qfield_square_check(_one(args, "split_lie2").payload)


def _check_two_rep(args):
    return check_two_rep(_one(args, "two_rep").payload)


def _check_matched(args):
    return check_matched_pair(_one(args, "matched_pair").payload)


def _check_courant(args):
    c = _courant_of(_one(args, "courant"))
    return check_courant(c, samples=args.samples, seed=args.seed if args.seed is not None else 1,
                         max_deg=args.degree if args.degree is not None else 2)


def _check_morphism(args):
    src, dst, mo = _one(args, "morphism").payload
    return check_morphism(src, dst, mo)


def _check_algebroid(args):
    return check_lie_algebroid(_algebroid_of(_one(args, "lie_algebroid")))


# construction commands --------------------------------------------------------

def _bicross(args):
    inst = _one(args, "matched_pair")
    m = inst.payload
    bad = _guard(check_matched_pair(m), args)
    if bad:
        return bad
    return _derived("split_lie2", f"bicross({inst.name})", bicrossproduct(m), inst, "bicross",
                    split=m.A.bundle.rank, labels=[m.A.bundle.label, m.B.bundle.label],
                    c_label=m.C.label, duals=[m.A.bundle.dual, m.B.bundle.dual, m.C.dual])


def _extract(args):
    inst = _one(args, "split_lie2")
    meta = inst.metadata or {}
    split = args.split if args.split is not None else meta.get("split")
    if split is None:
        raise UsageError("extract needs --split or a 'split' entry in the instance metadata")
    labels = tuple(meta.get("labels", ("A", "B")))
    duals = tuple(bool(x) for x in meta.get("duals", (False, False, False)))
    m = extract_matched_pair(inst.payload, int(split), labels=labels, c_label=meta.get("c_label"),
                             duals=duals)
    return _derived("matched_pair", f"extract({inst.name})", m, inst, "extract", split=int(split))


def _semidirect(args):
    inst = _one(args, "two_rep")
    bad = _guard(check_two_rep(inst.payload), args)
    if bad:
        return bad
    return _derived("split_lie2", f"semidirect({inst.name})",
                    semidirect_lie2(inst.payload, validate=False), inst, "semidirect")


def _rep_lie2(args):
    inst = _one(args, "lie_algebroid")
    if not isinstance(inst.payload, tuple):
        raise UsageError("rep-lie2 needs a lie_algebroid instance with a representation")
    alg, rep = inst.payload
    return _derived("split_lie2", f"rep_lie2({inst.name})", rep_lie2(alg, rep), inst, "rep-lie2")


def _adjoint(args):
    inst = _one(args, "courant")
    if not isinstance(inst.payload, tuple):
        raise UsageError("adjoint needs a courant instance with a metric_connection")
    c, cn = inst.payload
    return _derived("split_lie2", f"adjoint({inst.name})", adjoint_lie2(c, cn), inst, "adjoint")


def _fat(args):
    inst = _one(args, "split_lie2")
    bad = _guard(check_split_lie2(inst.payload), args)
    if bad:
        return bad
    return _derived("courant", f"fat({inst.name})", fat_courant(inst.payload, validate=False),
                    inst, "fat")


def _drinfeld(args):
    a, astar = _inputs(args, [("lie_algebroid",), ("lie_algebroid",)])
    c = drinfeld_double(_algebroid_of(a), _algebroid_of(astar))
    return Instance("courant", f"drinfeld({a.name},{astar.name})", c,
                    {"source": "drinfeld", "input": [a.name, astar.name]})


def _standard(args):
    if args.inputs:
        raise UsageError("standard-courant takes no --in file")
    n = 1 if args.dim is None else args.dim
    if not 0 <= n <= 3:
        raise UsageError("--dim must be in [0, 3]")
    return Instance("courant", f"standard_courant_r{n}", standard_courant(Chart(n)),
                    {"source": "standard-courant", "dim": n})


def _shift(args):
    inst = _one(args, "shift", "split_lie2")
    if inst.kind == "shift":
        d, phi = inst.payload
        extra = {}
    else:
        if args.seed is None:
            raise UsageError("shift of a split_lie2 instance needs --seed to draw φ")
        d = inst.payload
        deg = 1 if args.degree is None else args.degree
        phi = random_phi(XorShift64Star(args.seed), d, deg)
        extra = {"seed": args.seed, "degree": deg}
    return _derived("split_lie2", f"shift({inst.name})", shift_splitting(d, phi), inst, "shift",
                    **extra)


def _compose(args):
    outer, inner = _inputs(args, [("morphism",), ("morphism",)])
    src_o, dst_o, mo = outer.payload
    src_i, dst_i, mi = inner.payload
    if src_o != dst_i:
        raise UsageError("compose: the inner morphism's target is not the outer morphism's source")
    return Instance("morphism", f"compose({outer.name},{inner.name})",
                    (src_i, dst_o, compose_morphisms(mo, mi)),
                    {"source": "compose", "input": [outer.name, inner.name]})


# generators and reference data ------------------------------------------------

def _gen(args):
    if args.inputs:
        raise UsageError("gen takes no --in file")
    if args.kind is None:
        raise UsageError(f"gen needs --kind, one of {list(GEN_KINDS)}")
    return gen_instance(args.kind, 0 if args.seed is None else args.seed, dim=args.dim,
                        rank=args.rank, degree=args.degree, mutate=args.mutate)


def _catalog(args):
    if args.name is None:
        return "\n".join(cat.catalog_names()) + "\n"
    try:
        return cat.get(args.name)
    except KeyError as e:
        raise UsageError(str(e.args[0])) from None


def _schema(args):
    doc = report_schema() if args.kind == "report" else instance_schema(args.kind)
    return json.dumps(doc, indent=1, sort_keys=True) + "\n"


COMMANDS: Dict[str, Callable] = {
    "check-lie2": _check_lie2,
    "qsquare": _qsquare,
    "check-two-rep": _check_two_rep,
    "check-matched-pair": _check_matched,
    "check-courant": _check_courant,
    "check-morphism": _check_morphism,
    "check-lie-algebroid": _check_algebroid,
    "bicross": _bicross,
    "extract": _extract,
    "semidirect": _semidirect,
    "rep-lie2": _rep_lie2,
    "adjoint": _adjoint,
    "fat": _fat,
    "drinfeld": _drinfeld,
    "standard-courant": _standard,
    "shift": _shift,
    "compose": _compose,
    "gen": _gen,
    "catalog": _catalog,
    "schema": _schema,
}


class _ArgError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _ArgError(message)


def _parser() -> argparse.ArgumentParser:
    p = _Parser(prog="l2a", description="Split Lie 2-algebroid toolkit.")
    p.add_argument("command", choices=sorted(COMMANDS))
    p.add_argument("--in", dest="inputs", action="append", metavar="FILE",
                   help="input instance file (repeatable)")
    p.add_argument("--out", metavar="FILE", help="write output here instead of standard output")
    p.add_argument("--seed", type=int, help="64-bit seed for generation and sampling")
    p.add_argument("--mutate", metavar="TARGET", help="table to perturb (gen)")
    p.add_argument("--max-degree", type=int, default=DEFAULT_MAX_DEGREE,
                   help="abort when an intermediate polynomial degree exceeds this bound")
    fmt = p.add_mutually_exclusive_group()
    fmt.add_argument("--json", dest="fmt", action="store_const", const="json",
                     help="JSON report (default)")
    fmt.add_argument("--text", dest="fmt", action="store_const", const="text",
                     help="human-readable report")
    p.add_argument("--kind", help="generator kind (gen) or schema kind (schema)")
    p.add_argument("--name", help="catalog instance name (catalog)")
    p.add_argument("--dim", type=int, help="chart dimension (gen, standard-courant)")
    p.add_argument("--rank", type=int, help="fibre rank (gen)")
    p.add_argument("--degree", type=int, help="coefficient degree (gen, shift, check-courant)")
    p.add_argument("--split", type=int, help="rank of A for extract")
    p.add_argument("--samples", type=int, default=0, help="random section triples (check-courant)")
    p.add_argument("--no-validate", action="store_true",
                   help="construct even when the input fails its checker")
    return p


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def run(argv: Sequence[str]) -> int:
    try:
        args = _parser().parse_args(list(argv))
    except _ArgError as e:
        sys.stderr.write(f"l2a: usage error: {e}\n")
        return 2
    if args.max_degree is not None and args.max_degree < 0:
        sys.stderr.write("l2a: usage error: --max-degree must be non-negative\n")
        return 2
    if args.seed is not None and not 0 <= args.seed < 1 << 64:
        sys.stderr.write("l2a: usage error: --seed must be a 64-bit unsigned value\n")
        return 2
    try:
        with degree_limit(args.max_degree):
            result = COMMANDS[args.command](args)
    except DegreeLimitExceeded as e:
        sys.stderr.write(f"l2a: aborted: {e} (raise --max-degree to allow it)\n")
        return 2
    except (UsageError, LoadError, GenerationError, InvalidInput, ExtractionError,
            BundleMismatch, PairingError, OSError) as e:
        sys.stderr.write(f"l2a: error: {e}\n")
        return 2

    if isinstance(result, Report):
        if args.fmt == "text":
            text = result.to_text() + "\n"
        else:
            text = json.dumps(result.to_json(), indent=1, sort_keys=True, ensure_ascii=False) + "\n"
        _emit(text, args.out)
        return 0 if result.passed else 1
    if isinstance(result, Instance):
        _emit(dumps_instance(result), args.out)
        return 0
    _emit(result, args.out)
    return 0


def main(argv: Optional[Sequence[str]] = None) -> None:
    sys.exit(run(sys.argv[1:] if argv is None else argv))


if __name__ == "__main__":
    main()
