"""Command line entry point: JSON in, JSON report out.

Exit codes: 0 on success, 1 on a library error (the report is replaced by an
error object), 2 on malformed input.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import random
import sys
from datetime import datetime, timezone

from . import __version__
from .classify import (
    build_type,
    case_table_dimension,
    real_translation_algebra,
    stabilizer_dimension,
    stabilizer_intersection,
)
from .errors import QuatHoloError
from .jsonio import (
    MalformedInput,
    decode_element,
    decode_group_element,
    decode_span,
    decode_type_spec,
    decode_vector,
    encode_element,
    encode_group_element,
    encode_quaternion,
    encode_real_vector,
    encode_sim_group,
    encode_sim_span,
    encode_span,
    encode_type_spec,
    encode_vector,
)
from .parabolic import (
    bracket,
    bracket_via_matrices,
    contains_B,
    group_A1,
    group_P,
    group_Spn,
    is_subalgebra,
    random_element,
    realified_generators,
)
from .qcore import random_rational
from .qlinalg import random_qvector, random_Sp
from .simalg import F_group, dF_span
from .subspaces import (
    Verdict,
    canonical_decompose,
    is_nondegenerate,
    search_invariant_nondegenerate,
    structural_weak_irreducibility,
    subspace_from_qvectors,
)


def _read_json(path: str):
    try:
        if path == "-":
            return json.load(sys.stdin)
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise MalformedInput(f"{path}: invalid JSON ({exc})") from exc
    except OSError as exc:
        raise MalformedInput(f"{path}: {exc.strerror}") from exc


def _digest(payload) -> str:
    blob = json.dumps(payload, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()


def _need(value, flag: str):
    if value is None:
        raise MalformedInput(f"{flag} is required")
    return value


# -- commands -----------------------------------------------------------------------


def cmd_construct(args, inputs: dict) -> tuple[dict, dict]:
    if args.example is not None:
        n = _need(args.n, "--n")
        S = real_translation_algebra(n, with_B=args.example == 1)
        return {"example": args.example, "algebra": encode_span(S)}, {}
    kind = _need(args.type, "--type")
    params = _read_json(_need(args.params, "--params"))
    inputs["params"] = params
    spec = decode_type_spec(params, kind=kind, n=args.n)
    S = build_type(spec)
    return {"type": spec.kind, "spec": encode_type_spec(spec), "dim": S.dim, "algebra": encode_span(S)}, {}


def cmd_check(args, inputs: dict) -> tuple[dict, dict]:
    raw = _read_json(_need(args.algebra, "--algebra"))
    inputs["algebra"] = raw
    if isinstance(raw, dict) and isinstance(raw.get("results"), dict):
        raw = raw["results"]  # a construct report
    if isinstance(raw, dict) and "algebra" in raw:
        raw = raw["algebra"]
    S = decode_span(raw)
    violations = []
    for i, g in enumerate(S.generators):
        violations += [f"generator {i}: {v}" for v in g.violations()]
    verdict = structural_weak_irreducibility(S)
    results = {
        "n": S.n,
        "dim": S.dim,
        "is_subalgebra": is_subalgebra(S),
        "contains_B": contains_B(S),
        "weak_irreducibility_verdict": verdict.value,
        "dF_image": encode_sim_span(dF_span(S)),
        "violations": violations,
        "witness": None,
    }
    if verdict is Verdict.INCONCLUSIVE:
        gens = realified_generators(S)
        W = search_invariant_nondegenerate(gens, attempts=args.attempts, rng_seed=args.seed, ambient_dim=4 * (S.n + 2))
        if W is not None:
            results["witness"] = {
                "dim": W.dim,
                "basis": [encode_real_vector(v) for v in W.basis],
                "nondegenerate": is_nondegenerate(W),
            }
    return results, {}


def cmd_decompose(args, inputs: dict) -> tuple[dict, dict]:
    raw = _read_json(_need(args.basis, "--basis"))
    inputs["basis"] = raw
    if isinstance(raw, dict):
        n = raw.get("n", args.n)
        vectors = raw.get("vectors")
    else:
        n, vectors = args.n, raw
    if not isinstance(vectors, list) or not isinstance(n, int):
        raise MalformedInput("basis file needs n and a list of quaternionic vectors")
    vecs = [decode_vector(v) for v in vectors]
    if any(len(v) != n for v in vecs):
        raise MalformedInput(f"every vector must have {n} entries")
    L = subspace_from_qvectors(vecs, n)
    sig, form = canonical_decompose(L)
    results = {
        "signature": {"m": sig.m, "m1": sig.m1, "m2": sig.m2, "m3": sig.m3, "n": sig.n, "real_dim": sig.real_dim},
        "canonical": {"m": form.m, "k": form.k, "real_dim": form.real_dim},
        "adapted_basis": [{"block": b, "vector": encode_vector(f)} for b, f in form.adapted_basis],
        "rotation": [{"source": src, "u": encode_quaternion(u)} for src, u in form.rotation],
    }
    return results, {}


def _random_elements(n: int, count: int, seed: int):
    rng = random.Random(seed)
    return [random_element(rng, n, bound=10) for _ in range(count)]


def cmd_bracket(args, inputs: dict) -> tuple[dict, dict]:
    if args.params:
        raw = _read_json(args.params)
        inputs["params"] = raw
        if not isinstance(raw, dict) or not isinstance(raw.get("elements"), list):
            raise MalformedInput("bracket input needs a list of elements")
        n = raw.get("n", args.n)
        elems = [decode_element(e, n) for e in raw["elements"]]
    else:
        elems = _random_elements(_need(args.n, "--n"), args.count, args.seed)
    table = []
    mismatches = 0
    for i, x in enumerate(elems):
        for j, y in enumerate(elems):
            if j <= i:
                continue
            closed = bracket(x, y)
            agree = closed == bracket_via_matrices(x, y)
            mismatches += not agree
            table.append({"i": i, "j": j, "bracket": encode_element(closed), "oracle_agrees": agree})
    return {"elements": [encode_element(e) for e in elems], "table": table, "oracle_mismatches": mismatches}, {}


def _random_group_elements(n: int, count: int, seed: int):
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        a1 = abs(random_rational(rng, 10)) or 1
        f = group_A1(n, a1) * group_Spn(random_Sp(rng, n)) * group_P(random_qvector(rng, n, bound=10))
        out.append(f)
    return out


def cmd_verify_f(args, inputs: dict) -> tuple[dict, dict]:
    if args.params:
        raw = _read_json(args.params)
        inputs["params"] = raw
        if not isinstance(raw, dict) or not isinstance(raw.get("elements"), list):
            raise MalformedInput("verify-f input needs a list of group elements")
        elems = [decode_group_element(g) for g in raw["elements"]]
    else:
        elems = _random_group_elements(_need(args.n, "--n"), args.count, args.seed)
    exact = all(g.is_exact() for g in elems)
    tol = None if exact else args.float_tol
    fitted = [F_group(g, tol=tol) for g in elems]
    pairs = []
    worst = 0.0
    for i, f1 in enumerate(elems):
        for j, f2 in enumerate(elems):
            lhs = F_group(f1 * f2, tol=tol)
            rhs = fitted[i] * fitted[j]
            if exact:
                pairs.append({"i": i, "j": j, "homomorphic": lhs == rhs})
            else:
                r = lhs.residual(rhs)
                worst = max(worst, r)
                pairs.append({"i": i, "j": j, "residual": r, "homomorphic": r < args.float_tol})
    results = {
        "mode": "exact" if exact else "float",
        "elements": [encode_group_element(g) for g in elems],
        "fitted": [encode_sim_group(s) for s in fitted],
        "pairs": pairs,
        "all_homomorphic": all(p["homomorphic"] for p in pairs),
    }
    residuals = {} if exact else {"max_homomorphism_residual": worst}
    return results, residuals


def cmd_table(args, inputs: dict) -> tuple[dict, dict]:
    rows = []
    for n in range(1, args.max_n + 1):
        for m in range(n + 1):
            for k in range(n - m + 1):
                solved = stabilizer_intersection(m, k, n).dim
                table = case_table_dimension(m, k, n)
                rows.append(
                    {
                        "m": m,
                        "k": k,
                        "n": n,
                        "solver_dim": solved,
                        "case_table_dim": table,
                        "corrected_dim": stabilizer_dimension(m, k, n),
                        "matches_case_table": solved == table,
                    }
                )
    return {"rows": rows, "all_match_case_table": all(r["matches_case_table"] for r in rows)}, {}


COMMANDS = {
    "construct": cmd_construct,
    "check": cmd_check,
    "decompose": cmd_decompose,
    "bracket": cmd_bracket,
    "verify-f": cmd_verify_f,
    "table": cmd_table,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="quatholo", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n", type=int, help="quaternionic dimension of H^n")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--attempts", type=int, default=500, help="random seeds tried by the invariant-subspace search")
    common.add_argument("--float-tol", type=float, default=1e-9)
    common.add_argument("--no-timestamp", action="store_true", help="omit the timestamp so reports are byte-identical")
    common.add_argument("--out", help="write the report to this file instead of stdout")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("construct", parents=[common], help="build the algebra of a Type")
    p.add_argument("--type", choices=("I", "II", "III", "IV", "V", "VI", "VII", "VIII", "IX", "X", "XI"))
    p.add_argument("--params", help="JSON file with the Type parameters")
    p.add_argument("--example", type=int, choices=(1, 2), help="emit the real translation algebra with (1) or without (2) B")

    p = sub.add_parser("check", parents=[common], help="subalgebra, B, weak irreducibility and dF image")
    p.add_argument("--algebra", required=True, help="JSON span file (or a construct report)")

    p = sub.add_parser("decompose", parents=[common], help="canonical form of a real subspace of H^n")
    p.add_argument("--basis", required=True, help="JSON file {n, vectors}")

    p = sub.add_parser("bracket", parents=[common], help="bracket table with the matrix-commutator cross-check")
    p.add_argument("--params", help="JSON file {n, elements}; random elements when omitted")
    p.add_argument("--count", type=int, default=4)

    p = sub.add_parser("verify-f", parents=[common], help="fit F on group elements and test multiplicativity")
    p.add_argument("--params", help="JSON file {elements}; random exact elements when omitted")
    p.add_argument("--count", type=int, default=3)

    p = sub.add_parser("table", parents=[common], help="stabilizer dimensions over the (m, k, n) grid")
    p.add_argument("--max-n", type=int, default=3)
    return parser


def _emit(text: str, out: str | None):
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        sys.stdout.write(text + "\n")


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    inputs = {k: v for k, v in sorted(vars(args).items()) if k not in ("out", "no_timestamp")}
    try:
        results, residuals = COMMANDS[args.command](args, inputs)
    except MalformedInput as exc:
        sys.stderr.write(json.dumps({"error": "MalformedInput", "message": str(exc)}) + "\n")
        return 2
    except QuatHoloError as exc:
        _emit(json.dumps(exc.to_json(), sort_keys=True), args.out)
        return 1
    report = {
        "command": args.command,
        "inputs_digest": _digest(inputs),
        "results": results,
        "residuals": residuals,
        "seed": args.seed,
        "version": __version__,
    }
    if not args.no_timestamp:
        report["timestamp"] = datetime.now(timezone.utc).isoformat()
    _emit(json.dumps(report, indent=2, sort_keys=True), args.out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
