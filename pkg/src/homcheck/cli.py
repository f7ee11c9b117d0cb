"""Command-line front end.

Parses workspace documents, dispatches to the checkers, and emits
deterministic reports.  Exit codes: 0 = a verdict was computed (whatever
the verdict), 1 = input error, 2 = resource cap exceeded, 3 = an internal
cross-check disagreed (bug trap).
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from importlib import resources

from . import __version__
from .checks import (
    be_acyclicity_check,
    depth_and_cm_check,
    regular_sequence_check,
    split_check,
    syzygy_bound_check,
    trace_splitting,
)
from .dsl import parse_workspace, serialize_workspace, workspace_to_json
from .errors import (
    CrossCheckError,
    InputError,
    ParseError,
    ResourceCapError,
)
from .frobenius import (
    FrobeniusContext,
    fedder_f_pure,
    frobenius_power,
    kunz_check,
    twisted_split_check,
)
from .groebner import Ideal, membership
from .modification import modification_run, replay_trivializations
from .resolutions import minimal_resolution
from .sympow import containment_check, symbolic_power
from .vecgb import GBCaps


def _mono_label(exp, names):
    parts = []
    for name, k in zip(names, exp):
        if k == 1:
            parts.append(name)
        elif k:
            parts.append("%s^%d" % (name, k))
    return "*".join(parts) if parts else "1"


def _ideal_dict(ideal, caps=None):
    return {
        "generators": [str(g) for g in ideal.gens],
        "groebner": [str(g) for g in ideal.groebner(caps)],
        "order": ideal.ring.order.tag,
    }


def _report(ws, command, args, body, started, timing):
    rep = {
        "schema": "homcheck-report/1",
        "engine": {"name": "homcheck", "version": __version__},
        "command": command,
        "inputs": {"arguments": args, "workspace": workspace_to_json(ws)},
    }
    rep.update(body)
    if timing:
        rep["timing_ms"] = round((time.time() - started) * 1000.0, 3)
    return rep


# ---------------------------------------------------------------------------
# command handlers: each maps (workspace, options, caps) -> body dict
# ---------------------------------------------------------------------------

def _cmd_gb(ws, opts, caps):
    ring_name, ideal = ws.ideals[_need(ws.ideals, opts.ideal, "ideal")]
    gb = ideal.groebner(caps)
    return {"ideal": opts.ideal, "ring": ring_name,
            "order": gb.order_tag,
            "basis": [str(g) for g in gb]}


def _cmd_resolve(ws, opts, caps):
    ring_name, module = ws.modules[_need(ws.modules, opts.module, "module")]
    res = minimal_resolution(module, length_cap=opts.cap_length, caps=caps)
    return {"module": opts.module, "ring": ring_name,
            "betti": list(res.betti), "length": res.length,
            "status": res.status, "minimal": res.minimal,
            "maps": [[[str(p) for p in row] for row in mm.entries]
                     for mm in res.maps]}


def _cmd_betti(ws, opts, caps):
    body = _cmd_resolve(ws, opts, caps)
    del body["maps"]
    return body


def _cmd_be_check(ws, opts, caps):
    ring_name, cx = ws.complexes[_need(ws.complexes, opts.complex, "complex")]
    rep = be_acyclicity_check(cx, domain_certified=opts.domain_certified,
                              caps=caps)
    return {"complex": opts.complex, "ring": ring_name,
            "applicable": rep.applicable,
            "spots": rep.spots,
            "rank_condition": rep.rank_condition,
            "fitting_verdict": rep.fitting_verdict,
            "homology_zero": rep.homology_zero,
            "oracle_verdict": rep.oracle_verdict,
            "verdict": "acyclic" if rep.oracle_verdict else "not-acyclic"}


def _cmd_syzygy_bounds(ws, opts, caps):
    ring_name, module = ws.modules[_need(ws.modules, opts.module, "module")]
    rep = syzygy_bound_check(module, caps)
    return {"module": opts.module, "ring": ring_name,
            "length": rep.length, "betti": list(rep.betti),
            "syzygy_ranks": list(rep.syzygy_ranks),
            "checks": rep.checks, "verdict": "holds" if rep.holds else "violated"}


def _split_body(rep, name, ring_name, ext):
    body = {"extension": name, "ring": ring_name,
            "verdict": rep.verdict, "method": rep.method,
            "generators": [_mono_label(b, ext.ext_vars) for b in rep.basis]}
    if rep.witness is not None:
        body["witness"] = {
            _mono_label(b, ext.ext_vars): str(w)
            for b, w in zip(rep.basis, rep.witness)}
    if rep.evaluation_ideal is not None:
        body["evaluation_ideal"] = _ideal_dict(rep.evaluation_ideal)
    return body


def _cmd_split(ws, opts, caps):
    name = _need(ws.extensions, opts.extension, "extension")
    ring_name, ext = ws.extensions[name]
    rep = split_check(ext, caps)
    return _split_body(rep, name, ring_name, ext)


def _cmd_trace_split(ws, opts, caps):
    name = _need(ws.extensions, opts.extension, "extension")
    ring_name, ext = ws.extensions[name]
    rep = trace_splitting(ext, caps)
    return _split_body(rep, name, ring_name, ext)


def _cmd_cm_check(ws, opts, caps):
    ring_name, module = ws.modules[_need(ws.modules, opts.module, "module")]
    rep = depth_and_cm_check(module, caps)
    return {"module": opts.module, "ring": ring_name,
            "pd": rep.pd, "depth": rep.depth,
            "ambient_dim": rep.ambient_dim, "module_dim": rep.module_dim,
            "codim": rep.codim,
            "verdict": "Cohen-Macaulay" if rep.is_cm else "not-Cohen-Macaulay"}


def _cmd_regseq(ws, opts, caps):
    ring_name, module = ws.modules[_need(ws.modules, opts.module, "module")]
    _, seq = ws.sequences[_need(ws.sequences, opts.sequence, "sequence")]
    rep = regular_sequence_check(module, list(seq), caps)
    body = {"module": opts.module, "sequence": opts.sequence,
            "ring": ring_name, "verdict": rep.status}
    if rep.status == "fail":
        body["failure_index"] = rep.failure_index
        body["witness"] = [str(p) for p in rep.witness]
    else:
        body["nakayama"] = rep.nakayama_ok
    return body


def _separating(ws, opts):
    if opts.separating is None:
        return None
    _, f = ws.elements[_need(ws.elements, opts.separating, "element")]
    return f


def _cmd_sympow(ws, opts, caps):
    ring_name, prime = ws.ideals[_need(ws.ideals, opts.prime, "ideal")]
    res = symbolic_power(prime, opts.n, _separating(ws, opts), caps)
    return {"prime": opts.prime, "ring": ring_name, "n": opts.n,
            "separating": str(res.separating),
            "symbolic_power": _ideal_dict(res.ideal, caps),
            "certificates": res.certificates}


def _cmd_containment(ws, opts, caps):
    ring_name, prime = ws.ideals[_need(ws.ideals, opts.prime, "ideal")]
    rep = containment_check(prime, opts.n, _separating(ws, opts), caps)
    return {"prime": opts.prime, "ring": ring_name, "n": opts.n,
            "d": rep.d, "exponent_checked": rep.d * opts.n,
            "verdict": "holds" if rep.holds else "violated",
            "per_generator": [{"generator": g, "member": ok}
                              for g, ok in rep.per_generator]}


def _cmd_fedder(ws, opts, caps):
    ring_name, ideal = ws.ideals[_need(ws.ideals, opts.ideal, "ideal")]
    rep = fedder_f_pure(ideal, caps)
    body = {"ideal": opts.ideal, "ring": ring_name, "p": rep.p,
            "verdict": "F-pure" if rep.f_pure else "not-F-pure"}
    if rep.witness is not None:
        body["witness_monomial"] = _mono_label(rep.witness, ideal.ring.vars)
    return body


def _cmd_twisted_split(ws, opts, caps):
    ring_name, ideal = ws.ideals[_need(ws.ideals, opts.ideal, "ideal")]
    _, s = ws.elements[_need(ws.elements, opts.element, "element")]
    rep = twisted_split_check(ideal, s, opts.e, opts.e_max, caps)
    body = {"ideal": opts.ideal, "element": opts.element, "ring": ring_name,
            "p": rep.p, "searched": rep.searched}
    if rep.searched:
        body["first_splitting_e"] = rep.e
        body["verdict"] = ("splits-at-e-%d" % rep.e if rep.splits
                           else "none <= %d" % opts.e_max)
    else:
        body["e"] = rep.e
        body["verdict"] = "splits" if rep.splits else "does-not-split"
    if rep.witness is not None:
        body["witness_monomial"] = _mono_label(rep.witness, ideal.ring.vars)
    return body


def _cmd_kunz(ws, opts, caps):
    decl = ws.ring_decl(_need(ws.rings, opts.ring, "ring"))
    ctx = FrobeniusContext(decl.ring, decl.quotient)
    rep = kunz_check(ctx, caps)
    body = {"ring": opts.ring, "p": ctx.p,
            "verdict": "regular" if rep.regular else "not-regular",
            "minimal_generators": rep.generators,
            "generic_rank": rep.rank}
    if rep.regular:
        body["free_basis"] = [
            "(%s)^(1/%d)" % (_mono_label(b, decl.ring.vars), ctx.p)
            if any(b) else "1" for b in rep.basis]
    else:
        body["obstruction"] = [str(p) for p in rep.obstruction]
    return body


def _cmd_modify(ws, opts, caps):
    ring_name, module = ws.modules[_need(ws.modules, opts.module, "module")]
    _, seq = ws.sequences[_need(ws.sequences, opts.sequence, "sequence")]
    state = modification_run(module, list(seq), opts.degree, opts.cap_steps,
                             caps)
    replay = True
    if state.history:
        replay = replay_trivializations(state, list(seq), caps)
    return {"module": opts.module, "sequence": opts.sequence,
            "ring": ring_name, "degree_bound": state.degree_bound,
            "steps": state.steps, "status": state.status,
            "final_generators": state.module.ngens,
            "history": [{"index": h["index"],
                         "witness": [str(p) for p in h["witness"]]}
                        for h in state.history],
            "trivialization_replay": replay}


def _need(table, name, what):
    if name is None:
        raise InputError("missing --%s" % what)
    if name not in table:
        raise InputError("unknown %s %r" % (what, name))
    return name


HANDLERS = {
    "gb": _cmd_gb,
    "resolve": _cmd_resolve,
    "betti": _cmd_betti,
    "be-check": _cmd_be_check,
    "syzygy-bounds": _cmd_syzygy_bounds,
    "split": _cmd_split,
    "trace-split": _cmd_trace_split,
    "cm-check": _cmd_cm_check,
    "regseq": _cmd_regseq,
    "sympow": _cmd_sympow,
    "containment": _cmd_containment,
    "fedder": _cmd_fedder,
    "twisted-split": _cmd_twisted_split,
    "kunz": _cmd_kunz,
    "modify": _cmd_modify,
}


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

def _build_parser():
    ap = argparse.ArgumentParser(
        prog="homcheck",
        description="exact commutative-algebra checkers for homological "
                    "statements")
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="verb", required=True)

    def common(p, document=True):
        if document:
            p.add_argument("document", help="workspace file (text DSL or JSON)")
        p.add_argument("--format", choices=("text", "json"), default="text")
        p.add_argument("--timing", action="store_true",
                       help="include wall-clock timing in the report")
        p.add_argument("--cap-degree", type=int, default=3000)
        p.add_argument("--cap-basis", type=int, default=4000)
        p.add_argument("--order", default="grevlex",
                       help="default order for rings that do not declare one")
        p.add_argument("--seed", type=int, default=None,
                       help="recorded in the report; core math is seed-free")

    p = sub.add_parser("gb", help="reduced Groebner basis of an ideal")
    common(p)
    p.add_argument("--ideal", required=True)

    for verb, helptext in (("resolve", "minimal free resolution"),
                           ("betti", "Betti numbers only")):
        p = sub.add_parser(verb, help=helptext)
        common(p)
        p.add_argument("--module", required=True)
        p.add_argument("--cap-length", type=int, default=12)

    p = sub.add_parser("be-check", help="acyclicity: determinantal conditions "
                                        "vs homology oracle")
    common(p)
    p.add_argument("--complex", required=True)
    p.add_argument("--domain-certified", action="store_true")

    p = sub.add_parser("syzygy-bounds", help="syzygy rank and Betti bounds")
    common(p)
    p.add_argument("--module", required=True)

    for verb in ("split", "trace-split"):
        p = sub.add_parser(verb, help="direct-summand splitting of a finite "
                                      "extension")
        common(p)
        p.add_argument("--extension", required=True)

    p = sub.add_parser("cm-check", help="depth and Cohen-Macaulayness")
    common(p)
    p.add_argument("--module", required=True)

    p = sub.add_parser("regseq", help="regular-sequence test")
    common(p)
    p.add_argument("--module", required=True)
    p.add_argument("--sequence", required=True)

    p = sub.add_parser("sympow", help="symbolic power of a prime")
    common(p)
    p.add_argument("--prime", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--separating", default=None,
                   help="name of a declared element; default: Jacobian minors")

    p = sub.add_parser("containment", help="symbolic-power containment "
                                           "p^(dn) in p^n")
    common(p)
    p.add_argument("--prime", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--separating", default=None)

    p = sub.add_parser("fedder", help="F-purity at the origin")
    common(p)
    p.add_argument("--ideal", required=True)

    p = sub.add_parser("twisted-split", help="twisted Frobenius splitting")
    common(p)
    p.add_argument("--ideal", required=True)
    p.add_argument("--element", required=True)
    p.add_argument("--e", type=int, default=None)
    p.add_argument("--e-max", type=int, default=3)

    p = sub.add_parser("kunz", help="regularity via Frobenius pushforward")
    common(p)
    p.add_argument("--ring", required=True)

    p = sub.add_parser("modify", help="truncated algebra-modification run")
    common(p)
    p.add_argument("--module", required=True)
    p.add_argument("--sequence", required=True)
    p.add_argument("--degree", type=int, default=2)
    p.add_argument("--cap-steps", type=int, default=4)

    p = sub.add_parser("corpus-run", help="run the named example corpus")
    common(p, document=False)
    p.add_argument("--dir", default=None,
                   help="corpus directory (default: built-in corpus)")
    p.add_argument("--jobs", type=int, default=1,
                   help="accepted for compatibility; reports are always "
                        "concatenated in manifest order")

    p = sub.add_parser("echo", help="parse a workspace and print it back")
    common(p)
    return ap


# ---------------------------------------------------------------------------
# rendering
# ---------------------------------------------------------------------------

def _render_text(rep, out):
    def walk(value, indent):
        pad = "  " * indent
        if isinstance(value, dict):
            for k in value:
                v = value[k]
                if isinstance(v, (dict, list)):
                    out.write("%s%s:\n" % (pad, k))
                    walk(v, indent + 1)
                else:
                    out.write("%s%s: %s\n" % (pad, k, v))
        elif isinstance(value, list):
            for v in value:
                if isinstance(v, (dict, list)):
                    walk(v, indent)
                    out.write("\n" if False else "")
                else:
                    out.write("%s- %s\n" % (pad, v))
        else:
            out.write("%s%s\n" % (pad, value))

    shown = {k: v for k, v in rep.items() if k != "inputs"}
    if "verdict" in shown:
        out.write("verdict: %s\n" % shown.pop("verdict"))
    walk(shown, 0)


def _emit(rep, fmt, out):
    if fmt == "json":
        out.write(json.dumps(rep, sort_keys=True, indent=2) + "\n")
    else:
        _render_text(rep, out)


# ---------------------------------------------------------------------------
# corpus
# ---------------------------------------------------------------------------

def _corpus_root(dirname):
    if dirname is not None:
        import pathlib
        return pathlib.Path(dirname)
    return resources.files("homcheck") / "corpus"


def run_corpus(opts, caps):
    root = _corpus_root(opts.dir)
    manifest = json.loads((root / "manifest.json").read_text())
    runs = []
    parser = _build_parser()
    for entry in manifest["entries"]:
        doc_text = (root / entry["file"]).read_text()
        argv = list(entry["argv"]) + ["--format", "json", entry["file"]]
        sub_opts = parser.parse_args(argv)
        ws = parse_workspace(doc_text, default_order=sub_opts.order)
        body = HANDLERS[sub_opts.verb](ws, sub_opts, caps)
        rep = _report(ws, sub_opts.verb, _public_args(sub_opts), body,
                      time.time(), False)
        runs.append({"name": entry["name"], "file": entry["file"],
                     "report": rep})
    return {"schema": "homcheck-corpus-run/1",
            "engine": {"name": "homcheck", "version": __version__},
            "runs": runs}


def _public_args(opts):
    skip = {"document", "format", "timing", "verb", "dir", "jobs"}
    out = {}
    for k, v in sorted(vars(opts).items()):
        if k not in skip and v is not None:
            out[k] = v
    return out


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------

def main(argv=None):
    parser = _build_parser()
    opts = parser.parse_args(argv)
    caps = GBCaps(max_basis=opts.cap_basis, max_degree=opts.cap_degree)
    started = time.time()
    try:
        if opts.verb == "corpus-run":
            rep = run_corpus(opts, caps)
            if opts.timing:
                rep["timing_ms"] = round((time.time() - started) * 1000.0, 3)
            _emit(rep, opts.format, sys.stdout)
            return 0
        text = open(opts.document, "r", encoding="utf-8").read()
        ws = parse_workspace(text, default_order=opts.order)
        if opts.verb == "echo":
            sys.stdout.write(serialize_workspace(ws))
            return 0
        body = HANDLERS[opts.verb](ws, opts, caps)
        rep = _report(ws, opts.verb, _public_args(opts), body, started,
                      opts.timing)
        _emit(rep, opts.format, sys.stdout)
        return 0
    except (ParseError, InputError, FileNotFoundError) as exc:
        sys.stderr.write("input error: %s\n" % exc)
        return 1
    except ResourceCapError as exc:
        sys.stderr.write("resource cap exceeded: %s\n" % exc)
        return 2
    except CrossCheckError as exc:
        sys.stderr.write("cross-check disagreement (engine bug): %s\n" % exc)
        return 3


if __name__ == "__main__":
    sys.exit(main())
