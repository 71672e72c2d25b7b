"""Command-line front end.

Exit codes: 0 success, 1 malformed input or failed validation, 2 a
mathematical precondition failed (D^2 != 0, Stokes, boundary identity).
"""
from __future__ import annotations

import argparse
import json
import re
import sys
from fractions import Fraction
from importlib import resources
from pathlib import Path

import jsonschema

from . import __version__
from .cache import ResultCache, canonical_json, content_hash, default_cache_dir
from .errors import ChernflowError, PreconditionError, ValidationError

EXIT_OK, EXIT_INVALID, EXIT_PRECONDITION = 0, 1, 2


class InputError(Exception):
    pass


# -- input handling -------------------------------------------------------------------

def load_schema(name: str) -> dict:
    text = resources.files("chernflow").joinpath("schemas", f"{name}.v1.json").read_text()
    return json.loads(text)


def _pointer(path) -> str:
    out = "$"
    for p in path:
        out += f"[{p}]" if isinstance(p, int) else f".{p}"
    return out


def read_input(path: str | None, schema: str) -> dict:
    if path is None:
        raise InputError("an input document is required")
    try:
        text = sys.stdin.read() if path == "-" else Path(path).read_text()
    except OSError as e:
        raise InputError(f"cannot read {path}: {e.strerror}") from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise InputError(f"malformed JSON at line {e.lineno} column {e.colno}: {e.msg}") from None
    validate_doc(doc, schema)
    return doc


def validate_doc(doc, schema: str) -> None:
    validator = jsonschema.Draft202012Validator(load_schema(schema))
    errs = sorted(validator.iter_errors(doc), key=lambda e: list(e.absolute_path))
    if errs:
        e = errs[0]
        raise InputError(f"schema {schema}/v1: {e.message} at {_pointer(e.absolute_path)}")


def parse_window(text: str | None):
    if text is None:
        return None
    m = re.fullmatch(r"\s*(-?\d+)\s*\.\.\s*(-?\d+)\s*", text)
    if not m:
        raise InputError(f"window must look like a..b, got {text!r}")
    a, b = int(m.group(1)), int(m.group(2))
    if a > b:
        raise InputError("window start exceeds its end")
    return (a, b)


def parse_monomial(text: str) -> tuple[Fraction, dict]:
    """'3*H^2*w' -> (3, {'H': 2, 'w': 1}); '1' is the unit."""
    coeff = Fraction(1)
    spec: dict = {}
    for part in text.replace(" ", "").split("*"):
        if not part:
            raise InputError(f"bad monomial {text!r}")
        if re.fullmatch(r"-?\d+(/\d+)?", part):
            coeff *= Fraction(part)
            continue
        m = re.fullmatch(r"([A-Za-z]\w*)(?:\^(\d+))?", part)
        if not m:
            raise InputError(f"bad monomial factor {part!r}")
        spec[m.group(1)] = spec.get(m.group(1), 0) + int(m.group(2) or 1)
    return coeff, spec


# -- subcommands ----------------------------------------------------------------------

def _homology_rows(mod, window):
    from .dgmodule import module_homology
    return [{"degree": r.degree, "dim": r.dim} for r in module_homology(mod, window)]


def _bulk_objects(doc):
    from .morse import CountTables, FloerSkeleton, MorseModel
    return (FloerSkeleton.from_json(doc["skeleton"]), MorseModel.from_json(doc["morse"]),
            CountTables.from_json(doc["tables"]))


def cmd_homology(args):
    from .dgmodule import FreeDgModule
    window = parse_window(args.window)
    if args.bulk:
        from .morse import build_bulk_complex
        doc = read_input(args.input, "bulk")
        fs, m, ct = _bulk_objects(doc)
        window = window or (tuple(doc["window"]) if "window" in doc else None)
        mod = build_bulk_complex(fs, m, ct, window)
    else:
        doc = read_input(args.input, "module")
        mod = FreeDgModule.from_json(doc)
        window = window or mod.window
    if window is None:
        raise InputError("a window is required (--window a..b or a window field)")
    return {"ring": mod.ring.algebra.to_json(), "window": list(window),
            "generators": len(mod.generators), "homology": _homology_rows(mod, window)}, EXIT_OK


def cmd_ss(args):
    from .dgmodule import FreeDgModule
    from .spectral import check_page_consistency, compute_pages, first_bulk_differential, \
        truncation_filtration
    doc = read_input(args.input, "module")
    mod = FreeDgModule.from_json(doc)
    window = parse_window(args.window) or mod.window
    if window is None:
        raise InputError("a window is required (--window a..b or a window field)")
    ladder = compute_pages(truncation_filtration(mod, window), args.rmax)
    out = {"window": list(window), "rmax": args.rmax, **ladder.to_json(),
           "converges": ladder.converges(), "consistency": check_page_consistency(ladder)}
    code = EXIT_OK
    if args.compare_bracket:
        b = read_input(args.compare_bracket, "bracket_matrix")
        rep = first_bulk_differential(mod.with_window(window), b["matrix"], b["ell"], window)
        out["bracket"] = rep.to_json()
        code = EXIT_OK if rep.passed else EXIT_PRECONDITION
    return out, code


def cmd_flowposet(args):
    from .flowcomb import ObjectTuple, all_posets, check_model, enumerate_poset
    doc = read_input(args.input, "flowposet")
    t = ObjectTuple.make(doc["levels"])
    x, y = args.x or doc.get("x"), args.y or doc.get("y")
    if (x is None) != (y is None):
        raise InputError("give both x and y, or neither")
    kw = {"max_trees": doc["max_trees"]} if "max_trees" in doc else {}
    posets = [enumerate_poset(t, x, y, **kw)] if x is not None else list(all_posets(t))
    out = []
    for p in posets:
        rep = check_model(p)
        d = p.to_json()
        d["model"] = {"passed": rep.passed, "witness": rep.witness, "reason": rep.reason}
        if args.dot:
            d["dot"] = p.to_dot()
        out.append(d)
    ok = all(d["model"]["passed"] for d in out)
    return {"posets": out, "all_passed": ok}, EXIT_OK if ok else EXIT_PRECONDITION


def cmd_koszul(args):
    import random
    from .flowcomb import SignContext, koszul_sign_face, koszul_sign_product, oracle_face, oracle_product
    from .flowcomb.signs import random_context
    if args.input:
        doc = read_input(args.input, "koszul")
        ctxs = []
        for c in doc["contexts"]:
            try:
                ctxs.append(SignContext(**c))
            except ValueError as e:
                raise InputError(str(e)) from None
    else:
        rng = random.Random(args.seed)
        ctxs = [random_context(rng) for _ in range(args.random)]
    rows = []
    agree = True
    for c in ctxs:
        row = {"context": c.to_json(),
               "product": {"formula": koszul_sign_product(c), "oracle": oracle_product(c)}}
        if c.j < c.k < c.jp:
            row["face"] = {"formula": koszul_sign_face(c), "oracle": oracle_face(c)}
        agree &= all(v["formula"] == v["oracle"] for k, v in row.items() if k != "context")
        rows.append(row)
    return {"contexts": rows, "agree": agree}, EXIT_OK if agree else EXIT_PRECONDITION


def cmd_validate_tables(args):
    from .morse import assemblers_agree, validate_boundary_identity
    doc = read_input(args.input, "bulk")
    fs, m, ct = _bulk_objects(doc)
    m.check_d_squared()
    rep = validate_boundary_identity(ct, m, fs)
    out = rep.to_json()
    if rep.passed and all(r in m.cocycles for r in fs.rhos):
        out["assemblers_agree"] = assemblers_agree(fs, m, ct)
    return out, EXIT_OK if rep.passed else EXIT_PRECONDITION


def _psi_from_json(rows):
    psi: dict = {}
    for e in rows:
        key = (e["from"], e["to"])
        q = tuple(e["q"])
        psi.setdefault(key, {})
        psi[key][q] = psi[key].get(q, 0) + Fraction(str(e["value"]))
    return psi


def _mixed_from_json(rows):
    mixed: dict = {}
    for e in rows:
        key = (e["from"], e["to"])
        pat = (tuple(e["qb"]), tuple(e["qL"]), tuple(e["qh"]))
        mixed.setdefault(key, {})
        mixed[key][pat] = mixed[key].get(pat, 0) + Fraction(str(e["value"]))
    return mixed


def cmd_interpolate(args):
    from .morse import build_interpolating_complex
    doc = read_input(args.input, "interpolate")
    fs, m, ct = _bulk_objects(doc)
    window = parse_window(args.window) or (tuple(doc["window"]) if "window" in doc else None)
    if window is None:
        raise InputError("a window is required (--window a..b or a window field)")
    res = build_interpolating_complex(fs, m, ct, _psi_from_json(doc["psi"]),
                                      _mixed_from_json(doc.get("mixed", [])), window)
    eq_b, eq_h = res.reductions_equal
    dims = res.homology_dims(window)
    same = dims["interpolating"] == dims["twisted"] == dims["bulk"]
    out = {"window": list(window), "reduction_b_equals_twisted": eq_b,
           "reduction_h_equals_bulk": eq_h, "homology_agrees": same,
           "homology": {k: [{"degree": d, "dim": v} for d, v in sorted(row.items())]
                        for k, row in dims.items()}}
    return out, EXIT_OK if (eq_b and eq_h and same) else EXIT_PRECONDITION


def cmd_chern(args):
    from .chern import bundle_from_json, chern_character, stable_cotangent_tangent
    if args.cotangent_cp is not None:
        b = stable_cotangent_tangent(args.cotangent_cp)
        rho_max = args.rho_max if args.rho_max is not None else 2
    else:
        doc = read_input(args.input, "chern")
        b = bundle_from_json(doc)
        rho_max = args.rho_max if args.rho_max is not None else doc.get("rho_max", b.space.complex_dim)
    ch = chern_character(b, rho_max)
    return {"space": str(b.space), "rank": b.rank,
            "chern_classes": [{"i": i, "value": b.c(i).to_json(), "text": str(b.c(i))}
                              for i in range(0, b.space.complex_dim + 1)],
            "chern_character": [{"k": k, "value": c.to_json(), "text": str(c)}
                                for k, c in enumerate(ch)]}, EXIT_OK


def cmd_bordchar(args):
    from .chern import Space, bordism_character, space_from_json
    if args.cp:
        sp = Space([(f"H{i}", d) for i, d in enumerate(args.cp)])
        top = args.top
    else:
        doc = read_input(args.input, "bordchar")
        sp = space_from_json(doc["space"])
        top = args.top or doc.get("top")
    phi = bordism_character(sp, top=top)
    return {"space": str(sp), "value": phi.to_json(), "text": str(phi)}, EXIT_OK


def _loop_element(alg, text):
    coeff, spec = parse_monomial(text)
    for name in spec:
        if name not in ("w", "H", "v"):
            raise InputError(f"unknown loop generator {name!r} (use w, H, v)")
    return alg.element(spec, coeff)


def cmd_bracket(args):
    from .stringtop import LoopAlgebra
    alg = LoopAlgebra(args.n)
    a, b = _loop_element(alg, args.a), _loop_element(alg, args.b)
    val = alg.bracket(a, b)
    return {"n": args.n, "a": str(a), "b": str(b), "value": val.to_json(), "text": str(val)}, EXIT_OK


def cmd_criterion(args):
    from .stringtop import LoopAlgebra, ch2_class, criterion_check
    alg = LoopAlgebra(args.n)
    c = _loop_element(alg, args.cls) if args.cls else ch2_class(alg)
    window = parse_window(args.window)
    res = criterion_check(alg, c, window)
    out = {"n": args.n, "class": str(c), **res.to_json(alg)}
    if res.bracket_value is not None:
        out["bracket_text"] = str(res.bracket_value)
    return out, EXIT_OK


def cmd_verify(args):
    from .acceptance import CRITERIA, run_suite
    if args.suite == "all":
        nums = [c[0] for c in CRITERIA]
    else:
        try:
            nums = [int(x) for x in args.suite.split(",")]
        except ValueError:
            raise InputError("--suite takes 'all' or a comma-separated list of numbers") from None
        known = {c[0] for c in CRITERIA}
        for n in nums:
            if n not in known:
                raise InputError(f"no acceptance criterion {n}")
    results = run_suite(nums)
    ok = all(r.passed for r in results)
    return {"criteria": [r.to_json() for r in results], "all_passed": ok}, EXIT_OK if ok else EXIT_INVALID


# -- rendering -------------------------------------------------------------------------

def _table(rows: list[dict]) -> list[str]:
    if not rows:
        return ["  (none)"]
    cols = [k for k in rows[0] if not isinstance(rows[0][k], (dict, list))]
    if not cols:
        return ["  " + canonical_json(r) for r in rows]
    width = {c: max(len(c), *(len(str(r.get(c, ""))) for r in rows)) for c in cols}
    out = ["  " + "  ".join(c.ljust(width[c]) for c in cols)]
    for r in rows:
        out.append("  " + "  ".join(str(r.get(c, "")).ljust(width[c]) for c in cols))
    return out


def render_text(command: str, result: dict) -> str:
    if command == "verify":
        from .acceptance import CRITERIA, CriterionResult
        lines = []
        for d in result["criteria"]:
            r = CriterionResult(d["number"], d["name"], d["correct"], d["seconds"], d["limit"], d["detail"])
            lines.append(r.line())
        lines.append("all passed" if result["all_passed"] else "some criteria FAILED")
        return "\n".join(lines) + "\n"
    if command == "flowposet" and any("dot" in p for p in result["posets"]):
        return "".join(p["dot"] for p in result["posets"])
    if command == "ss":
        result = dict(result)
        result["pages"] = [{"r": pg["r"], "nonzero_entries": len(pg["dims"]),
                            "nonzero_differentials": len(pg["d"])} for pg in result["pages"]]
    lines = [command]
    for k, v in result.items():
        if k in ("value", "bracket_value") and any(t in result for t in ("text", "bracket_text")):
            continue
        if isinstance(v, list) and v and all(isinstance(x, dict) for x in v):
            lines.append(f"{k}:")
            lines.extend(_table(v))
        elif isinstance(v, (dict, list)):
            lines.append(f"{k}: {canonical_json(v)}")
        else:
            lines.append(f"{k}: {v}")
    return "\n".join(lines) + "\n"


def render(command: str, result: dict, fmt: str) -> str:
    if fmt == "text":
        return render_text(command, result)
    doc = {"command": command, "version": __version__, "result": result}
    return json.dumps(doc, indent=2, sort_keys=True, default=str) + "\n"


# -- parser ---------------------------------------------------------------------------

COMMANDS = {
    "homology": cmd_homology, "ss": cmd_ss, "flowposet": cmd_flowposet, "koszul": cmd_koszul,
    "validate-tables": cmd_validate_tables, "interpolate": cmd_interpolate, "chern": cmd_chern,
    "bordchar": cmd_bordchar, "bracket": cmd_bracket, "criterion": cmd_criterion, "verify": cmd_verify,
}
UNCACHED = {"verify"}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "text"), default="json")
    common.add_argument("--cache-dir", default=None,
                        help="result cache directory (default: $CHERNFLOW_CACHE_DIR, unset = no cache)")
    p = argparse.ArgumentParser(prog="chernflow", description="Exact computations with graded modules, "
                                "spectral sequences, flow posets and characteristic classes.")
    p.add_argument("--version", action="version", version=f"chernflow {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("homology", parents=[common], help="homology of a free DG-module")
    s.add_argument("input")
    s.add_argument("--bulk", action="store_true", help="input is skeleton + Morse model + count tables")
    s.add_argument("--window")

    s = sub.add_parser("ss", parents=[common], help="spectral sequence of the truncation filtration")
    s.add_argument("input")
    s.add_argument("--rmax", type=int, default=4)
    s.add_argument("--window")
    s.add_argument("--compare-bracket", metavar="FILE")

    s = sub.add_parser("flowposet", parents=[common], help="tree posets of a flow simplex")
    s.add_argument("input")
    s.add_argument("--x")
    s.add_argument("--y")
    s.add_argument("--dot", action="store_true", help="include Graphviz output")

    s = sub.add_parser("koszul", parents=[common], help="compare sign formulas with the oracle")
    s.add_argument("input", nargs="?")
    s.add_argument("--random", type=int, default=100)
    s.add_argument("--seed", type=int, default=0)

    s = sub.add_parser("validate-tables", parents=[common], help="check the boundary identity of count tables")
    s.add_argument("input")

    s = sub.add_parser("interpolate", parents=[common], help="interpolating complex and its reductions")
    s.add_argument("input")
    s.add_argument("--window")

    s = sub.add_parser("chern", parents=[common], help="Chern classes and Chern character")
    s.add_argument("input", nargs="?")
    s.add_argument("--cotangent-cp", type=int, metavar="N", help="use TCP^N + its dual")
    s.add_argument("--rho-max", type=int)

    s = sub.add_parser("bordchar", parents=[common], help="bordism character of a product of CP's")
    s.add_argument("input", nargs="?")
    s.add_argument("--cp", type=int, nargs="+", metavar="N")
    s.add_argument("--top", type=int)

    s = sub.add_parser("bracket", parents=[common], help="loop bracket on CP^n")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--a", required=True)
    s.add_argument("--b", required=True)

    s = sub.add_parser("criterion", parents=[common], help="search for a class with nonzero bracket")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--class", dest="cls", help="monomial such as 2*H^2 (default: ch_2 of T*CP^n)")
    s.add_argument("--window")

    s = sub.add_parser("verify", parents=[common], help="run the acceptance suite")
    s.add_argument("--suite", default="all")
    return p


def _cache_key(args) -> str | None:
    opts = {k: v for k, v in sorted(vars(args).items()) if k not in ("cache_dir", "input", "compare_bracket")}
    docs = {}
    for name in ("input", "compare_bracket"):
        path = getattr(args, name, None)
        if path:
            if path == "-":
                return None
            try:
                docs[name] = json.loads(Path(path).read_text())
            except (OSError, json.JSONDecodeError):
                return None
    return content_hash({"version": __version__, "options": opts, "documents": docs})


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    args = build_parser().parse_args(argv)
    cache_dir = args.cache_dir or default_cache_dir()
    cache = key = None
    if cache_dir and args.command not in UNCACHED:
        key = _cache_key(args)
        if key is not None:
            cache = ResultCache(cache_dir)
            hit = cache.lookup(key)
            if hit is not None:
                stderr.write(f"chernflow: served from cache ({key[:12]})\n")
                stdout.write(hit)
                return EXIT_OK
    try:
        result, code = COMMANDS[args.command](args)
    except InputError as e:
        stderr.write(f"chernflow: invalid input: {e}\n")
        return EXIT_INVALID
    except PreconditionError as e:
        stderr.write(f"chernflow: precondition failed: {e}\n")
        if e.witness is not None:
            stderr.write(f"chernflow: witness {canonical_json(e.witness)}\n")
        return EXIT_PRECONDITION
    except (ValidationError, ChernflowError, ValueError) as e:
        stderr.write(f"chernflow: invalid input: {e}\n")
        return EXIT_INVALID
    text = render(args.command, result, args.format)
    stdout.write(text)
    if cache is not None and code == EXIT_OK:
        cache.store(key, text)
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
