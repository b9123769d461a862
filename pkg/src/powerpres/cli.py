"""Command line front end: ``build``, ``verify``, ``count`` and ``reduce``.

Exit codes: 0 success, 1 bad input, 2 hypothesis violated (H1 != 0),
3 construction failed, 4 verification failed, 5 enumeration inconclusive.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from importlib import resources

from . import constructions as C
from .enumeration import DEFAULT_MAX_COSETS, Completed, todd_coxeter
from .errors import (
    FactorizationError,
    HypothesisViolation,
    MalformedInputError,
    PowerPresError,
    TietzeError,
)
from .homology import abelianization_invariants
from .permgrp import GroupHom, Permutation, verify_presentation_hom
from .presentations import (
    CommutatorWitnesses,
    Presentation,
    from_json,
    parse_presentation,
    parse_word,
    tietze_add_generator,
    tietze_add_relator,
    tietze_remove_generator,
    kill_generators,
    to_json,
    to_text,
)

EXIT_OK, EXIT_INPUT, EXIT_H1, EXIT_FACTOR, EXIT_VERIFY, EXIT_OVERFLOW = 0, 1, 2, 3, 4, 5


def load_schema() -> dict:
    text = resources.files("powerpres").joinpath("schemas/output.schema.json").read_text()
    return json.loads(text)


def validate_output(obj: dict):
    import jsonschema

    jsonschema.validate(obj, load_schema())


def _emit(obj: dict, args, text: str | None = None):
    if args.format == "json" or text is None:
        validate_output(obj)
        out = json.dumps(obj, indent=2, sort_keys=True) + "\n"
    else:
        out = text
    if getattr(args, "output", None):
        with open(args.output, "w") as fh:
            fh.write(out)
    else:
        sys.stdout.write(out)


def _read_source(path: str):
    """Presentation plus optional witnesses and images from a text or JSON file.

    Text files may carry ``wit:`` lines (one witness per generator, in order);
    JSON files may carry ``witnesses`` and ``images``/``base_images`` keys.
    """
    with open(path) as fh:
        raw = fh.read()
    if raw.lstrip().startswith("{"):
        d = json.loads(raw)
        P = from_json(d)
        wit = d.get("witnesses")
        return P, wit, d
    lines, wit = [], []
    for ln in raw.splitlines():
        if ln.strip().startswith("wit:"):
            wit.append(ln.split(":", 1)[1].strip())
            lines.append("")
        else:
            lines.append(ln)
    return parse_presentation("\n".join(lines)), wit or None, {}


def _witnesses(P: Presentation, texts) -> CommutatorWitnesses:
    if texts is None:
        raise MalformedInputError("no commutator witnesses supplied (use wit: lines)")
    return CommutatorWitnesses(tuple(parse_word(t, P.names) for t in texts))


def _source(args):
    """(presentation, witnesses, hom, schedule, reducer, label) for ``build``."""
    if args.fixture == "bp":
        P, w = C.bp_reduced(args.p)
        # the expressions of old generators are not constructive for B_p
        return P, w, None, C.bp_schedule(), C.PlaceholderReducer(), f"bp{args.p}"
    if args.fixture:
        F = C.builtin_examples()[args.fixture]
        return F.presentation, F.witnesses, F.hom, None, None, F.name
    if not args.input:
        raise MalformedInputError("give --fixture or --input")
    P, wit, _ = _read_source(args.input)
    return P, _witnesses(P, wit), None, None, None, args.input


def _reducer(name, seed, hom, w):
    if name is None:
        return None
    if name == "pattern":
        return C.PatternReducer.from_hom(hom, w) if hom is not None else C.PatternReducer.from_witnesses(w)
    if name == "permutation":
        return C.PermutationReducer(seed=seed)
    if name == "placeholder":
        return C.PlaceholderReducer()
    raise MalformedInputError(f"unknown reducer {name!r}")


def cmd_build(args) -> int:
    P, w, hom, schedule, reducer, label = _source(args)
    if args.reducer:
        reducer = _reducer(args.reducer, args.seed, hom, w)
    if args.schedule:
        schedule = C.GeneratorBoundSchedule.from_spec(args.schedule, P.rank)
    if args.power == 1:
        obj = {
            "kind": "build",
            "fixture": label,
            **to_json(P),
            "stage_log": [list(P.counts())],
            "predicted_relator_count": P.num_relators,
            "factors": 1,
            "schedule": "",
            "checked": True,
            "witnesses": w.to_json(P.names),
            "dictionary": [list(P.names)],
            "notes": [],
        }
        if hom is not None:
            obj["images"] = obj["base_images"] = [p.to_list() for p in hom.images]
        _emit(obj, args, to_text(P))
        return EXIT_OK
    R = C.power_presentation(P, w, args.power, schedule, reducer, hom, kill=args.kill, check_h1=not args.no_h1_check)
    obj = {"kind": "build", "fixture": label, **R.to_json()}
    if R.images is not None:
        obj["images"] = [[int(v) for v in a] for a in R.images]
        obj["base_images"] = [p.to_list() for p in R.base_hom.images]
    text = to_text(R.presentation)
    text += "".join(f"# stage {i}: {g} generators, {r} relators\n" for i, (g, r) in enumerate(R.stage_log))
    text += "".join(f"# {note}\n" for note in R.notes)
    _emit(obj, args, text)
    return EXIT_OK


def _read_images(path: str) -> list[Permutation]:
    """JSON list of image lists, or one permutation per line in cycle notation."""
    with open(path) as fh:
        raw = fh.read()
    if raw.lstrip().startswith("["):
        return [Permutation(a) for a in json.loads(raw)]
    perms = [ln.strip() for ln in raw.splitlines() if ln.strip() and not ln.startswith("#")]
    degree = None
    if perms and perms[0].startswith("degree"):
        degree = int(perms.pop(0).split()[1])
    return [Permutation.parse(t, degree) for t in perms]


def cmd_verify(args) -> int:
    extra = {}
    expected = None
    if args.input:
        P, _, extra = _read_source(args.input)
    elif args.fixture and args.fixture != "bp":
        F = C.builtin_examples()[args.fixture]
        P = F.presentation
    else:
        raise MalformedInputError("give a presentation file or a finite --fixture")
    images = None
    if args.images:
        images = _read_images(args.images)
    elif "images" in extra:
        images = [Permutation(a) for a in extra["images"]]
    elif args.fixture and args.fixture != "bp" and not args.input:
        images = list(C.builtin_examples()[args.fixture].hom.images)
    if args.fixture and args.fixture != "bp":
        base = C.builtin_examples()[args.fixture]
        expected = base.order ** int(extra.get("factors", 1))
    if args.expected_order is not None:
        expected = args.expected_order
    checks = {}
    ok = True
    code = EXIT_OK
    run_all = not (args.h1 or args.ss or args.tc)
    if args.h1 or run_all:
        ab = abelianization_invariants(P)
        checks["h1"] = {"free_rank": ab.free_rank, "torsion": list(ab.torsion), "trivial": ab.trivial}
    if args.ss or (run_all and images is not None):
        if images is None:
            raise MalformedInputError("--ss needs permutation images (--images or a build JSON)")
        if len(images) != P.rank:
            raise MalformedInputError(f"{len(images)} images for {P.rank} generators")
        rep = verify_presentation_hom(P, GroupHom(tuple(images)), expected)
        checks["ss"] = {
            "relators_trivial": rep["relators_trivial"],
            "failed_relators": rep["failed_relators"],
            "order": str(rep["order"]),
            "expected_order": None if expected is None else str(expected),
            "ok": rep["ok"],
        }
        ok = ok and rep["ok"]
    if args.tc:
        res = todd_coxeter(P, max_cosets=args.max_cosets, strategy=args.strategy)
        if isinstance(res, Completed):
            good = expected is None or res.index == expected
            checks["tc"] = {
                "status": "completed",
                "index": res.index,
                "expected_order": None if expected is None else str(expected),
                "strategy": res.strategy,
                "defined": res.defined,
                "ok": good,
            }
            ok = ok and good
        else:
            checks["tc"] = {
                "status": "overflow",
                "strategy": res.strategy,
                "live": res.live,
                "defined": res.defined,
                "ok": False,
            }
            code = EXIT_OVERFLOW
    if not ok:
        code = EXIT_VERIFY
    obj = {"kind": "verify", "ok": ok and code == EXIT_OK, "generators": P.rank, "relators": P.num_relators, "checks": checks}
    lines = [f"generators {P.rank}, relators {P.num_relators}"]
    if "h1" in checks:
        h = checks["h1"]
        lines.append(f"H1: free rank {h['free_rank']}, torsion {h['torsion']}")
    if "ss" in checks:
        s = checks["ss"]
        lines.append(f"relators trivial: {s['relators_trivial']}; order {s['order']}")
    if "tc" in checks:
        t = checks["tc"]
        lines.append(f"coset enumeration ({t['strategy']}): " + (str(t["index"]) if t["status"] == "completed" else "overflow"))
    lines.append("PASS" if obj["ok"] else ("INCONCLUSIVE" if code == EXIT_OVERFLOW else "FAIL"))
    _emit(obj, args, "\n".join(lines) + "\n")
    return code


def count_rows(k: int, l: int, n_max: int) -> list[dict]:
    rows = []
    for n in range(0, n_max + 1):
        m = 2**n
        ng, nr = C.naive_counts(k, l, m)
        lg, lr = C.predicted_counts(k, l, n, "lemma")
        row = {"n": n, "m": m, "naive_gens": ng, "naive_rels": nr, "lemma_gens": lg, "lemma_rels": lr}
        if n >= 2:
            tg, tr = C.predicted_counts(k, l, n, "theorem")
        elif n == 1:
            tg, tr = lg, lr
        else:
            tg, tr = k, l
        row.update(theorem_gens=tg, theorem_rels=tr)
        pg, pr = C.predicted_counts(k, l, n, "patterns")
        row.update(patterns_gens=pg, patterns_rels=pr)
        row["bp_rels"] = C.bp_counts(n)[1]
        rows.append(row)
    return rows


def cmd_count(args) -> int:
    rows = count_rows(args.k, args.l, args.n_max)
    obj = {"kind": "count", "k": args.k, "l": args.l, "rows": rows}
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    _emit(obj, args, buf.getvalue())
    return EXIT_OK


def run_script(P: Presentation, script: str) -> Presentation:
    """Apply a Tietze script.

    One move per line::

        add NAME = WORD       new generator with defining relator
        remove NAME = WORD    delete generator using a relator NAME^-1 WORD
        relator WORD          append a consequence of the relators
        kill WORD             append a new relator (changes the group)
    """
    for lineno, raw in enumerate(script.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        op, _, rest = line.partition(" ")
        try:
            if op in ("add", "remove"):
                name, eq, body = rest.partition("=")
                if not eq:
                    raise MalformedInputError("expected NAME = WORD")
                name = name.strip()
                if op == "add":
                    P = tietze_add_generator(P, name, P.word(body))
                else:
                    P = tietze_remove_generator(P, name, P.word(body))
            elif op == "relator":
                P = tietze_add_relator(P, P.word(rest))
            elif op == "kill":
                P = kill_generators(P, [P.word(rest)])
            else:
                raise MalformedInputError(f"unknown move {op!r}")
        except PowerPresError as exc:
            raise type(exc)(f"script line {lineno}: {exc}") from None
    return P


def cmd_reduce(args) -> int:
    P, _, _ = _read_source(args.input)
    with open(args.script) as fh:
        P = run_script(P, fh.read())
    _emit({"kind": "presentation", **to_json(P)}, args, to_text(P))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="powerpres", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--format", choices=("text", "json"), default="text")
        p.add_argument("--output", "-o", help="write here instead of stdout")
        p.add_argument("--seed", type=int, default=0, help="seed for randomized searches")

    b = sub.add_parser("build", help="presentation of G^m")
    b.add_argument("--fixture", choices=("a5", "sl25", "bp"))
    b.add_argument("--input", help="presentation file with wit: lines")
    b.add_argument("--p", type=int, default=2, help="parameter of B_p")
    b.add_argument("--power", type=int, required=True)
    b.add_argument("--schedule", help="default, constant, logarithmic, patterns, or a table like 19:2,1668:3")
    b.add_argument("--reducer", choices=("pattern", "permutation", "placeholder"))
    b.add_argument("--kill", choices=("diagonal", "binary"), default="diagonal")
    b.add_argument("--no-h1-check", action="store_true", help="skip the abelianization guard")
    common(b)
    b.set_defaults(func=cmd_build)

    v = sub.add_parser("verify", help="check a presentation")
    v.add_argument("input", nargs="?", help="presentation file (text or build JSON)")
    v.add_argument("--fixture", choices=("a5", "sl25", "bp"))
    v.add_argument("--images", help="permutation images: JSON lists or cycle notation")
    v.add_argument("--expected-order", type=int)
    v.add_argument("--h1", action="store_true", help="abelianization")
    v.add_argument("--ss", action="store_true", help="relators and order in the permutation image")
    v.add_argument("--tc", action="store_true", help="Todd-Coxeter order")
    v.add_argument("--strategy", choices=("hlt", "felsch"), default="hlt")
    v.add_argument("--max-cosets", type=int, default=DEFAULT_MAX_COSETS)
    common(v)
    v.set_defaults(func=cmd_verify)

    c = sub.add_parser("count", help="relator counts by regime")
    c.add_argument("--k", type=int, required=True)
    c.add_argument("--l", type=int, required=True)
    c.add_argument("--n-max", type=int, default=6)
    common(c)
    c.set_defaults(func=cmd_count)

    r = sub.add_parser("reduce", help="run a Tietze script")
    r.add_argument("input")
    r.add_argument("--script", required=True)
    common(r)
    r.set_defaults(func=cmd_reduce)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "power", 1) is not None and getattr(args, "power", 1) < 1:
        print("error: --power must be at least 1", file=sys.stderr)
        return EXIT_INPUT
    try:
        return args.func(args)
    except HypothesisViolation as exc:
        print(f"error: hypothesis violated: {exc}", file=sys.stderr)
        return EXIT_H1
    except FactorizationError as exc:
        print(f"error: construction failed: {exc}", file=sys.stderr)
        return EXIT_FACTOR
    except (MalformedInputError, TietzeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
