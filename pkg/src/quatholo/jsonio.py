"""JSON encoding of scalars, quaternions, vectors, matrices and algebra elements.

Exact scalars are objects {"r": "p/q", "s": "p/q"} meaning r + s*sqrt(2).
Decoders also accept an integer or a "p/q" string for a rational scalar and a
JSON float for float-mode values.  Malformed data raises ``MalformedInput``.
"""

from __future__ import annotations

from fractions import Fraction

from .classify import SimilarityType, TypeSpec
from .parabolic import AlgebraSpan, ParabolicElement, ParabolicGroupElement
from .qcore import Quaternion, Scalar
from .simalg import SimAlgebraElement, SimGroupElement, SimSpan


class MalformedInput(ValueError):
    """Input that does not follow the JSON layout."""


def _rat_str(q) -> str:
    return f"{q.numerator}/{q.denominator}"


def _parse_rat(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise MalformedInput(f"bad rational {text!r}") from exc


# -- scalars and quaternions ----------------------------------------------------


def encode_scalar(c):
    if isinstance(c, float):
        return c
    c = Scalar.coerce(c)
    return {"r": _rat_str(c.r), "s": _rat_str(c.s)}


def decode_scalar(obj):
    if isinstance(obj, bool):
        raise MalformedInput("booleans are not scalars")
    if isinstance(obj, dict):
        if set(obj) - {"r", "s"} or "r" not in obj:
            raise MalformedInput(f"bad scalar object {obj!r}")
        r = obj["r"]
        s = obj.get("s", "0/1")
        if not isinstance(r, str) or not isinstance(s, str):
            raise MalformedInput("scalar parts must be strings")
        return Scalar(_parse_rat(r), _parse_rat(s))
    if isinstance(obj, int):
        return Scalar(obj)
    if isinstance(obj, float):
        return obj
    if isinstance(obj, str):
        return Scalar(_parse_rat(obj))
    raise MalformedInput(f"bad scalar {obj!r}")


def encode_quaternion(q) -> list:
    return [encode_scalar(c) for c in Quaternion.coerce(q).parts()]


def decode_quaternion(obj) -> Quaternion:
    if not isinstance(obj, list) or len(obj) != 4:
        raise MalformedInput(f"quaternion must be a list of 4 scalars, got {obj!r}")
    parts = [decode_scalar(c) for c in obj]
    if any(isinstance(c, float) for c in parts):
        return Quaternion._new(*(float(c) for c in parts))
    return Quaternion(*parts)


def encode_vector(X) -> list:
    return [encode_quaternion(x) for x in X]


def decode_vector(obj) -> tuple:
    if not isinstance(obj, list):
        raise MalformedInput("vector must be a list")
    return tuple(decode_quaternion(x) for x in obj)


def encode_matrix(A) -> list:
    return [encode_vector(row) for row in A]


def decode_matrix(obj, size: int | None = None) -> tuple:
    if not isinstance(obj, list):
        raise MalformedInput("matrix must be a list of rows")
    rows = tuple(decode_vector(r) for r in obj)
    m = len(rows) if size is None else size
    if len(rows) != m or any(len(r) != m for r in rows):
        raise MalformedInput(f"matrix must be square of size {m}")
    return rows


def encode_real_vector(v) -> list:
    return [encode_scalar(c) for c in v]


def decode_real_vector(obj) -> tuple:
    if not isinstance(obj, list):
        raise MalformedInput("real vector must be a list")
    return tuple(decode_scalar(c) for c in obj)


# -- algebra and group elements ----------------------------------------------------


def _require(obj, keys, what):
    if not isinstance(obj, dict):
        raise MalformedInput(f"{what} must be an object")
    missing = [k for k in keys if k not in obj]
    if missing:
        raise MalformedInput(f"{what} is missing {missing}")


def encode_element(e: ParabolicElement) -> dict:
    return {"a": encode_quaternion(e.a), "A": encode_matrix(e.A), "X": encode_vector(e.X), "b": encode_quaternion(e.b)}


def decode_element(obj, n: int | None = None) -> ParabolicElement:
    _require(obj, ("a", "A", "X", "b"), "element")
    X = decode_vector(obj["X"])
    size = len(X) if n is None else n
    if len(X) != size:
        raise MalformedInput(f"X must have {size} entries")
    return ParabolicElement(decode_quaternion(obj["a"]), decode_matrix(obj["A"], size), X, decode_quaternion(obj["b"]))


def encode_span(S: AlgebraSpan, basis: bool = False) -> dict:
    gens = S.basis() if basis else S.generators
    return {"n": S.n, "generators": [encode_element(g) for g in gens]}


def decode_span(obj) -> AlgebraSpan:
    _require(obj, ("n", "generators"), "span")
    n = obj["n"]
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise MalformedInput("n must be a positive integer")
    if not isinstance(obj["generators"], list):
        raise MalformedInput("generators must be a list")
    return AlgebraSpan(n, [decode_element(g, n) for g in obj["generators"]])


def encode_sim_element(x: SimAlgebraElement) -> dict:
    return {"lam": encode_scalar(x.lam), "s": encode_quaternion(x.s), "h": encode_matrix(x.h), "v": encode_vector(x.v)}


def decode_sim_element(obj) -> SimAlgebraElement:
    _require(obj, ("lam", "s", "h", "v"), "similarity element")
    v = decode_vector(obj["v"])
    return SimAlgebraElement(decode_scalar(obj["lam"]), decode_quaternion(obj["s"]), decode_matrix(obj["h"], len(v)), v)


def encode_sim_span(S: SimSpan) -> dict:
    return {"n": S.n, "generators": [encode_sim_element(x) for x in S.basis()]}


def encode_group_element(g: ParabolicGroupElement) -> dict:
    return {"mat": encode_matrix(g.mat)}


def decode_group_element(obj) -> ParabolicGroupElement:
    _require(obj, ("mat",), "group element")
    M = decode_matrix(obj["mat"])
    if len(M) < 3:
        raise MalformedInput("group matrix must have size n + 2 with n ≥ 1")
    return ParabolicGroupElement(M)


def encode_sim_group(g: SimGroupElement) -> dict:
    return {"a1": encode_scalar(g.a1), "u": encode_quaternion(g.u), "f": encode_matrix(g.f), "v": encode_vector(g.v)}


def decode_sim_group(obj) -> SimGroupElement:
    _require(obj, ("a1", "u", "f", "v"), "similarity group element")
    v = decode_vector(obj["v"])
    return SimGroupElement(decode_scalar(obj["a1"]), decode_quaternion(obj["u"]), decode_matrix(obj["f"], len(v)), v)


# -- type specifications ------------------------------------------------------------


def _decode_value(obj):
    """A table value: quaternion (list of 4), vector (list of lists) or scalar."""
    if isinstance(obj, list) and obj and isinstance(obj[0], list):
        return decode_vector(obj)
    if isinstance(obj, list):
        return decode_quaternion(obj)
    return decode_scalar(obj)


def _encode_value(v):
    if isinstance(v, Quaternion):
        return encode_quaternion(v)
    if isinstance(v, tuple):
        return encode_vector(v)
    return encode_scalar(v)


_SPEC_INT = ("m", "k")
_SPEC_TABLES = ("phi", "varphi", "varphi_h0", "psi")


def decode_type_spec(obj, kind: str | None = None, n: int | None = None) -> TypeSpec:
    if not isinstance(obj, dict):
        raise MalformedInput("type parameters must be an object")
    kind = obj.get("kind", kind)
    n = obj.get("n", n)
    if not isinstance(kind, str) or not isinstance(n, int) or isinstance(n, bool):
        raise MalformedInput("type parameters need a kind and an integer n")
    known = {"kind", "n", "shape", "h_generators", "h_sp1", "h0_generators", "a2", "varphi_t"}
    known |= {"W_basis", "U_basis", "translations_in"} | set(_SPEC_INT) | set(_SPEC_TABLES)
    extra = set(obj) - known
    if extra:
        raise MalformedInput(f"unknown type parameters {sorted(extra)}")
    kw = {}
    for key in _SPEC_INT:
        if key in obj:
            if not isinstance(obj[key], int):
                raise MalformedInput(f"{key} must be an integer")
            kw[key] = obj[key]
    if "shape" in obj:
        shape = obj["shape"]
        if not (isinstance(shape, list) and len(shape) == 4 and all(isinstance(x, int) for x in shape)):
            raise MalformedInput("shape must be four integers")
        kw["shape"] = tuple(shape)
    if "h_generators" in obj:
        kw["h_generators"] = [decode_matrix(A, n) for A in obj["h_generators"]]
    if "h_sp1" in obj:
        kw["h_sp1"] = [decode_quaternion(q) for q in obj["h_sp1"]]
    if "h0_generators" in obj:
        kw["h0_generators"] = [decode_quaternion(q) for q in obj["h0_generators"]]
    if "a2" in obj:
        kw["a2"] = decode_quaternion(obj["a2"])
    if "varphi_t" in obj:
        kw["varphi_t"] = decode_scalar(obj["varphi_t"])
    for key in _SPEC_TABLES:
        if key in obj:
            if not isinstance(obj[key], list):
                raise MalformedInput(f"{key} must be a list of values")
            kw[key] = [_decode_value(v) for v in obj[key]]
    for key in ("W_basis", "U_basis"):
        if key in obj:
            kw[key] = [decode_vector(v) for v in obj[key]]
    if "translations_in" in obj:
        if obj["translations_in"] not in ("U", "W"):
            raise MalformedInput("translations_in must be 'U' or 'W'")
        kw["translations_in"] = obj["translations_in"]
    return TypeSpec(kind, n, **kw)


def encode_type_spec(spec: TypeSpec) -> dict:
    out = {"kind": spec.kind, "n": spec.n, "m": spec.m, "k": spec.k}
    if spec.shape is not None:
        out["shape"] = list(spec.shape)
    if spec.h_generators:
        out["h_generators"] = [encode_matrix(A) for A in spec.h_generators]
    if spec.h_sp1 is not None:
        out["h_sp1"] = [encode_quaternion(q) for q in spec.h_sp1]
    if spec.h0_generators:
        out["h0_generators"] = [encode_quaternion(q) for q in spec.h0_generators]
    if not spec.a2.is_zero():
        out["a2"] = encode_quaternion(spec.a2)
    if spec.varphi_t is not None:
        out["varphi_t"] = encode_scalar(spec.varphi_t)
    for key in _SPEC_TABLES:
        vals = getattr(spec, key)
        if vals is not None:
            out[key] = [_encode_value(v) for v in vals]
    if spec.W_basis:
        out["W_basis"] = [encode_vector(v) for v in spec.W_basis]
    if spec.U_basis:
        out["U_basis"] = [encode_vector(v) for v in spec.U_basis]
    if spec.translations_in != "U":
        out["translations_in"] = spec.translations_in
    return out


def encode_similarity_type(t: SimilarityType) -> dict:
    out = {"kind": t.kind, "n": t.n, "m": t.m, "k": t.k}
    if t.shape is not None:
        out["shape"] = list(t.shape)
    out["pairs"] = [{"s": encode_quaternion(s), "A": encode_matrix(A)} for s, A in t.pairs]
    if t.varphi is not None:
        out["varphi"] = [encode_scalar(v) for v in t.varphi]
    if t.psi is not None:
        out["psi"] = [encode_vector(v) for v in t.psi]
    return out
