"""Command line interface: ``ardecomp decompose | support | plant | verify``.

Exit status: 0 success, 2 malformed input, 3 dimension or consistency
failure, 4 non-split characteristic polynomial under ``--require-split``.
Set ``DECOMP_LOG`` to ``debug``, ``info``, ``warning`` or ``error`` for
diagnostics on stderr.
"""

from __future__ import annotations

import argparse
import logging
import os
import random
import re
import sys
import time
from dataclasses import dataclass

from . import __version__
from . import jordan as jd
from . import kronecker as kr
from . import oracles
from . import persistence as pers
from .ar import ARMesh, decompose_with_ar
from .errors import DecompError, NonSplitError, ParseError
from .fields import Field, parse_field
from .io import (Document, dump_json, parse_dims, parse_matrix, parse_quiver, parse_rep, read_document,
                 render_matrix, split_label)

log = logging.getLogger("ardecomp")

SOLVERS = ("kronecker", "an", "jordan", "generic-ar")


@dataclass
class JobConfig:
    command: str
    input_path: str | None = None
    output_path: str | None = None
    solver: str | None = None
    field: str | None = None
    mode: str = "split"
    jobs: int = 1
    verify: bool = False
    emit_plot: str | None = None
    emit_witnesses: bool = False
    require_split: bool = False
    seed: int = 0
    spec: str | None = None
    n: int | None = None
    result_path: str | None = None


# ---------------------------------------------------------------------------
# reading inputs


def _infer_solver(doc: Document, requested: str | None) -> str:
    if requested:
        return requested
    data = doc.data
    if not isinstance(data, dict):
        raise doc.error("the input document must be a JSON object", ())
    if "solver" in data:
        if data["solver"] not in SOLVERS:
            raise doc.error(f"unknown solver {data['solver']!r}", ("solver",))
        return data["solver"]
    for key, solver in (("alpha", "kronecker"), ("maps", "an"), ("matrix", "jordan"), ("quiver", "generic-ar")):
        if key in data:
            return solver
    raise doc.error("cannot tell the solver: expected one of alpha/beta, maps, matrix or quiver", ())


def _resolve_field(doc: Document, requested: str | None) -> Field:
    text = requested or (doc.data.get("field") if isinstance(doc.data, dict) else None) or "q"
    if not isinstance(text, str):
        raise doc.error("'field' must be a string such as \"q\" or \"fp:7\"", ("field",))
    return parse_field(text)


def read_kronecker(doc: Document, field: Field) -> kr.KroneckerModule:
    for key in ("alpha", "beta"):
        if key not in doc.data:
            raise doc.error(f"Kronecker input needs '{key}'", ())
    dims = parse_dims(doc, ("dims",), 2)
    if dims is None:
        raw = doc.get(("alpha",))
        if not isinstance(raw, list):
            raise doc.error("a matrix must be an array of rows", ("alpha",))
        if not raw:
            raise doc.error("alpha has no rows; give 'dims' [d1, d2] to fix the shape", ("alpha",))
        first = raw[0] if isinstance(raw[0], list) else []
        dims = (len(first), len(raw))
    d1, d2 = dims
    alpha = parse_matrix(doc, field, ("alpha",), ncols=d1, nrows=d2)
    beta = parse_matrix(doc, field, ("beta",), ncols=d1, nrows=d2)
    return kr.KroneckerModule(field, alpha, beta)


def read_an(doc: Document, field: Field) -> pers.AnModule:
    raw = doc.get(("maps",))
    if not isinstance(raw, list):
        raise doc.error("'maps' must be a list of matrices", ("maps",))
    given = parse_dims(doc, ("dims",), len(raw) + 1)
    dims = list(given) if given is not None else [None] * (len(raw) + 1)
    if not raw and given is None:
        raise doc.error("a single-vertex module needs 'dims'", ())
    maps = []
    for i, m in enumerate(raw):
        if not isinstance(m, list):
            raise doc.error("a matrix must be an array of rows", ("maps", i))
        if dims[i] is None:
            if not m or not isinstance(m[0], list):
                raise doc.error(f"map {i + 1} has no rows; give 'dims' to fix the shape", ("maps", i))
            dims[i] = len(m[0])
        if dims[i + 1] is None:
            dims[i + 1] = len(m)
        maps.append(parse_matrix(doc, field, ("maps", i), ncols=dims[i], nrows=dims[i + 1]))
    return pers.AnModule(field, tuple(dims), tuple(maps))


def read_jordan(doc: Document, field: Field) -> jd.EndoModule:
    raw = doc.get(("matrix",))
    if not isinstance(raw, list):
        raise doc.error("'matrix' must be an array of rows", ("matrix",))
    m = parse_matrix(doc, field, ("matrix",), ncols=len(raw), nrows=len(raw))
    return jd.EndoModule(m)


def read_generic(doc: Document, field: Field):
    quiver = parse_quiver(doc, ("quiver",))
    module = parse_rep(doc, quiver, field, ("module",))
    raw = doc.get(("meshes",))
    if not isinstance(raw, list):
        raise doc.error("generic-ar input needs a 'meshes' list", ("meshes",))
    meshes = []
    for k, mesh in enumerate(raw):
        p = ("meshes", k)
        if not isinstance(mesh, dict) or "source" not in mesh:
            raise doc.error("a mesh needs a 'source' representation", p)
        source = parse_rep(doc, quiver, field, p + ("source",))
        middle = []
        for j, item in enumerate(mesh.get("middle", [])):
            q = p + ("middle", j)
            if not isinstance(item, dict) or "rep" not in item:
                raise doc.error("a middle term needs 'rep' and 'mult'", q)
            mult = item.get("mult", 1)
            if not isinstance(mult, int) or isinstance(mult, bool):
                raise doc.error("'mult' must be an integer", q + ("mult",))
            middle.append((parse_rep(doc, quiver, field, q + ("rep",)), mult))
        target = parse_rep(doc, quiver, field, p + ("target",)) if mesh.get("target") is not None else None
        label = str(mesh.get("label") or f"L{k + 1}")
        try:
            meshes.append(ARMesh(source, tuple(middle), target, label))
        except DecompError as exc:
            line, col = doc.where(p)
            exc.args = (f"{exc} (line {line}, column {col})",)
            raise
    return module, meshes


# ---------------------------------------------------------------------------
# solvers producing result documents


def _entry_json(e) -> dict:
    out = {"label": e.label}
    for k, v in e.info:
        out[k] = v
    out["multiplicity"] = e.multiplicity
    out["dims"] = list(e.dims)
    return out


def _sum_dims(entries, n: int, unresolved=None) -> list[int]:
    total = list(unresolved) if unresolved else [0] * n
    for e in entries:
        for i, d in enumerate(e["dims"]):
            total[i] += e["multiplicity"] * d
    return total


def _solve_kronecker(cfg: JobConfig, doc: Document, field: Field) -> tuple[dict, list]:
    m = read_kronecker(doc, field)
    dec = kr.decompose(m, mode=cfg.mode, jobs=cfg.jobs, require_split=cfg.require_split)
    sup = kr.support_set(m)
    entries = [_entry_json(e) for e in dec.entries]
    out = {"solver": "kronecker", "field": field.name, "dims": list(m.dims),
           "decomposition": entries, "support_set": sup.names}
    unresolved = None
    if sup.nonsplit is not None and sup.nonsplit.degree:
        unresolved = [sup.nonsplit.degree, sup.nonsplit.degree]
        out["nonsplit_factor"] = sup.nonsplit.render()
        out["unresolved_dims"] = unresolved
    out["rank_tables"] = _rank_tables(m, sup)
    if cfg.emit_witnesses and m.d1 + m.d2:
        split = kr.split_parts(m)
        out["parts"] = {"preprojective": list(split.p_part.dims), "regular_finite": list(split.r_prime_part.dims),
                        "regular_infinite": list(split.r_inf_part.dims), "preinjective": list(split.i_part.dims)}
        out["witnesses"] = {stage: [render_matrix(b) for b in basis] for stage, basis in split.witnesses.items()}
    out["warnings"] = list(dec.warnings)
    out["checks"] = {"dimension_conservation": _sum_dims(entries, 2, unresolved) == list(m.dims)}
    return out, list(m.dims)


def _rank_tables(m: kr.KroneckerModule, sup: kr.SupportSet) -> dict:
    top = max(m.d1, m.d2) + 2
    tables = {"p": {str(n): kr.block_rank_p(m, n) for n in range(1, top + 1)},
              "i": {str(n): kr.block_rank_i(m, n) for n in range(0, top + 1)}}
    if sup.params:
        d = kr.split_parts(m).regular_size
        tables["r"] = {kr.param_text(lam): {str(n): kr.block_rank_r(m, lam, n) for n in range(1, d + 2)}
                       for lam in sup.params}
    return tables


def _solve_an(cfg: JobConfig, doc: Document, field: Field) -> tuple[dict, list]:
    m = read_an(doc, field)
    diagram = pers.an_diagram(m)
    entries = [{"label": f"I({b},{d})", "b": b, "d": d, "multiplicity": mult,
                "dims": [1 if b <= i <= d else 0 for i in range(1, m.n + 1)]} for b, d, mult in diagram.points]
    out = {"solver": "an", "field": field.name, "dims": list(m.dims), "decomposition": entries, "warnings": [],
           "checks": {"dimension_conservation": _sum_dims(entries, m.n) == list(m.dims)}}
    if cfg.emit_plot:
        write_plot(cfg.emit_plot, diagram)
    return out, list(m.dims)


def write_plot(path: str, diagram: pers.PersistenceDiagram):
    lines = ["birth\tdeath\tmultiplicity"]
    lines += [f"{b}\t{d}\t{mult}" for b, d, mult in diagram.points]
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def _solve_jordan(cfg: JobConfig, doc: Document, field: Field) -> tuple[dict, list]:
    e = read_jordan(doc, field)
    spec = jd.jordan_decompose(e)
    warnings = []
    if not spec.splits():
        msg = (f"NonSplit: characteristic polynomial factor {spec.nonsplit.render()} "
               f"has no roots over {field.name}")
        if cfg.require_split:
            raise NonSplitError(msg, spec.nonsplit)
        warnings.append(msg)
    entries = [{"label": f"J{size}({field.render(lam)})", "lambda": field.render(lam), "size": size,
                "multiplicity": mult, "dims": [size]} for lam, size, mult in spec.entries]
    out = {"solver": "jordan", "field": field.name, "dims": [e.d], "decomposition": entries}
    unresolved = None
    if not spec.splits():
        unresolved = [spec.nonsplit.degree]
        out["nonsplit_factor"] = spec.nonsplit.render()
        out["unresolved_dims"] = unresolved
    out["warnings"] = warnings
    out["checks"] = {"dimension_conservation": _sum_dims(entries, 1, unresolved) == [e.d]}
    return out, [e.d]


def _solve_generic(cfg: JobConfig, doc: Document, field: Field) -> tuple[dict, list]:
    module, meshes = read_generic(doc, field)
    dec = decompose_with_ar(module, meshes, jobs=cfg.jobs)
    entries = [_entry_json(e) for e in dec.entries]
    n = module.quiver.vertex_count
    out = {"solver": "generic-ar", "field": field.name, "dims": list(module.dims), "decomposition": entries,
           "warnings": [], "checks": {"dimension_conservation": _sum_dims(entries, n) == list(module.dims)}}
    return out, list(module.dims)


_DISPATCH = {"kronecker": _solve_kronecker, "an": _solve_an, "jordan": _solve_jordan, "generic-ar": _solve_generic}


def _load(cfg: JobConfig):
    doc = read_document(cfg.input_path)
    solver = _infer_solver(doc, cfg.solver)
    field = _resolve_field(doc, cfg.field)
    return doc, solver, field


def cmd_decompose(cfg: JobConfig) -> tuple[int, str]:
    doc, solver, field = _load(cfg)
    if cfg.emit_plot and solver != "an":
        raise ParseError("--emit-plot applies to the an solver only")
    t0 = time.perf_counter()
    out, dims = _DISPATCH[solver](cfg, doc, field)
    log.info("%s solver finished in %.3f s", solver, time.perf_counter() - t0)
    status = 0 if out["checks"]["dimension_conservation"] else 3
    if cfg.verify:
        ok = verify_result(out, dims)
        out["checks"]["verify"] = ok
        status = status or (0 if ok else 3)
    return status, dump_json(out)


def cmd_support(cfg: JobConfig) -> tuple[int, str]:
    doc, solver, field = _load(cfg)
    if solver != "kronecker":
        raise ParseError(f"support sets are computed for Kronecker modules only, not {solver}")
    m = read_kronecker(doc, field)
    sup = kr.support_set(m)
    if cfg.require_split and sup.warnings:
        raise NonSplitError(sup.warnings[0], sup.nonsplit)
    out = {"solver": "kronecker", "field": field.name, "dims": list(m.dims), "support_set": sup.names,
           "parameters": [kr.param_text(lam) for lam in sup.params]}
    if m.d1 + m.d2:
        split = kr.split_parts(m)
        out["parts"] = {"preprojective": list(split.p_part.dims), "regular_finite": list(split.r_prime_part.dims),
                        "regular_infinite": list(split.r_inf_part.dims), "preinjective": list(split.i_part.dims)}
    if sup.nonsplit is not None and sup.nonsplit.degree:
        out["nonsplit_factor"] = sup.nonsplit.render()
    out["warnings"] = list(sup.warnings)
    return 0, dump_json(out)


def verify_result(result: dict, dims: list) -> bool:
    entries = result.get("decomposition", [])
    unresolved = result.get("unresolved_dims")
    return _sum_dims(entries, len(dims), unresolved) == list(dims)


def cmd_verify(cfg: JobConfig) -> tuple[int, str]:
    doc, solver, field = _load(cfg)
    readers = {"kronecker": lambda: list(read_kronecker(doc, field).dims),
               "an": lambda: list(read_an(doc, field).dims),
               "jordan": lambda: [read_jordan(doc, field).d],
               "generic-ar": lambda: list(read_generic(doc, field)[0].dims)}
    dims = readers[solver]()
    result = read_document(cfg.result_path).data
    if not isinstance(result, dict):
        raise ParseError("result document must be a JSON object")
    ok = verify_result(result, dims)
    summed = _sum_dims(result.get("decomposition", []), len(dims), result.get("unresolved_dims"))
    out = {"verify": ok, "input_dims": dims, "summed_dims": summed}
    return (0 if ok else 3), dump_json(out)


# ---------------------------------------------------------------------------
# planting fixtures


def _spec_items(text: str):
    # commas inside parentheses belong to interval labels such as I(1,3)
    return [s.strip() for s in re.split(r",(?![^()]*\))", text) if s.strip()]


def _spec_mult(text: str, item: str) -> int:
    if not text:
        return 1
    if not text.strip().isdigit() or int(text) < 1:
        raise ParseError(f"multiplicity in {item!r} must be a positive integer")
    return int(text)


def _parse_kronecker_spec(text: str, field: Field):
    spec = []
    for item in _spec_items(text):
        name, _, mult = item.partition(":")
        kind, n, lam = split_label(name)
        if kind == "R" and lam is None:
            raise ParseError(f"{name!r} needs a parameter, as in R1(0)")
        if kind == "R":
            lam_value = kr.INF if lam.strip().lower() in ("inf", "oo", "infinity") else field(lam)
            spec.append((kr.IndecLabel.R(n, lam_value), _spec_mult(mult, item)))
        elif kind in ("P", "I"):
            spec.append((kr.IndecLabel(kind, n), _spec_mult(mult, item)))
        else:
            raise ParseError(f"{name!r} is not a Kronecker label")
    return spec


def _plant_doc(cfg: JobConfig) -> dict:
    field = parse_field(cfg.field or "q")
    solver = cfg.solver or "kronecker"
    rng = random.Random(cfg.seed)
    if solver == "kronecker":
        spec = _parse_kronecker_spec(cfg.spec, field) if cfg.spec else oracles.random_kronecker_spec(rng)
        inst = oracles.plant_kronecker(spec, cfg.seed, field)
        m = inst.module
        return {"solver": "kronecker", "field": field.name, "dims": list(m.dims),
                "alpha": render_matrix(m.alpha), "beta": render_matrix(m.beta),
                "truth": [{"label": e.label, "multiplicity": e.multiplicity} for e in inst.truth.entries]}
    if solver == "jordan":
        if cfg.spec:
            cells = []
            for item in _spec_items(cfg.spec):
                name, _, mult = item.partition(":")
                kind, size, lam = split_label(name)
                if kind != "J" or lam is None:
                    raise ParseError(f"{name!r} is not a Jordan cell label such as J2(1)")
                cells.append((field(lam), size, _spec_mult(mult, item)))
        else:
            cells = [(field(rng.randint(-2, 2)), rng.randint(1, 3), 1) for _ in range(rng.randint(1, 3))]
        inst = oracles.plant_jordan(cells, cfg.seed, field)
        return {"solver": "jordan", "field": field.name, "matrix": render_matrix(inst.module.matrix),
                "truth": [{"label": f"J{s}({field.render(lam)})", "multiplicity": k}
                          for lam, s, k in inst.truth.entries]}
    if solver == "an":
        n = cfg.n or 4
        if cfg.spec:
            intervals = []
            for item in _spec_items(cfg.spec):
                name, _, mult = item.partition(":")
                kind, b, d = split_label(name)
                if kind != "interval":
                    raise ParseError(f"{name!r} is not an interval label")
                intervals.append((b, d, _spec_mult(mult, item)))
        else:
            intervals = []
            for _ in range(rng.randint(1, 4)):
                b = rng.randint(1, n)
                intervals.append((b, rng.randint(b, n), 1))
        inst = oracles.plant_an(n, intervals, cfg.seed, field)
        m = inst.module
        return {"solver": "an", "field": field.name, "dims": list(m.dims),
                "maps": [render_matrix(x) for x in m.maps],
                "truth": [{"label": f"I({b},{d})", "multiplicity": k} for b, d, k in inst.truth.points]}
    raise ParseError(f"plant supports kronecker, jordan and an, not {solver}")


def cmd_plant(cfg: JobConfig) -> tuple[int, str]:
    return 0, dump_json(_plant_doc(cfg))


# ---------------------------------------------------------------------------
# entry point


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--field", help="q (rationals, default) or fp:<p>")
    common.add_argument("--solver", choices=SOLVERS, help="override the solver inferred from the input")
    common.add_argument("-o", "--output", help="write the result here instead of stdout")
    common.add_argument("--require-split", action="store_true",
                        help="fail with status 4 if the characteristic polynomial does not split")

    p = argparse.ArgumentParser(prog="ardecomp", description="Exact indecomposable decompositions.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    d = sub.add_parser("decompose", parents=[common], help="decompose a module")
    d.add_argument("input")
    d.add_argument("--mode", choices=("split", "direct"), default="split")
    d.add_argument("--jobs", type=int, default=1)
    d.add_argument("--verify", action="store_true", help="re-sum the decomposition against the input dims")
    d.add_argument("--emit-plot", metavar="PATH", help="write persistence diagram TSV (an solver)")
    d.add_argument("--emit-witnesses", action="store_true", help="include split parts and their bases")

    s = sub.add_parser("support", parents=[common], help="support set of a Kronecker module")
    s.add_argument("input")

    pl = sub.add_parser("plant", parents=[common], help="write a planted test module")
    pl.add_argument("--seed", type=int, default=0)
    pl.add_argument("--spec", help='e.g. "P3:1,R1(0):2", "J2(1):1" or "I(1,3):1"')
    pl.add_argument("--n", type=int, help="number of vertices for the an solver")

    v = sub.add_parser("verify", parents=[common], help="check a result document against its input")
    v.add_argument("input")
    v.add_argument("result")
    return p


def _configure_logging():
    level = os.environ.get("DECOMP_LOG", "warning").upper()
    logging.basicConfig(stream=sys.stderr, level=getattr(logging, level, logging.WARNING),
                        format="%(levelname)s %(name)s: %(message)s")


def main(argv=None) -> int:
    _configure_logging()
    args = build_parser().parse_args(argv)
    cfg = JobConfig(command=args.command, input_path=getattr(args, "input", None), output_path=args.output,
                    solver=args.solver, field=args.field, mode=getattr(args, "mode", "split"),
                    jobs=getattr(args, "jobs", 1), verify=getattr(args, "verify", False),
                    emit_plot=getattr(args, "emit_plot", None),
                    emit_witnesses=getattr(args, "emit_witnesses", False), require_split=args.require_split,
                    seed=getattr(args, "seed", 0), spec=getattr(args, "spec", None), n=getattr(args, "n", None),
                    result_path=getattr(args, "result", None))
    return run(cfg)


def run(cfg: JobConfig) -> int:
    handlers = {"decompose": cmd_decompose, "support": cmd_support, "plant": cmd_plant, "verify": cmd_verify}
    try:
        status, text = handlers[cfg.command](cfg)
    except DecompError as exc:
        log.debug("failure", exc_info=True)
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    if cfg.output_path:
        with open(cfg.output_path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
