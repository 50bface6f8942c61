"""Bundle file format and report rendering.

A bundle file is a JSON object::

    {"format": 1, "p": 5, "n": 1, "s": 2, "t": 3,
     "phi": [[[1, 0], [0, 0]], [[0, 1], [1, 0]], [[0, 0], [0, 1]]]}

``phi`` lists the t matrices phi(e_k*) as s rows of n+1 integers in [0, p).
Reports are rendered either as ``key value`` text lines or as JSON, always
with a fixed field order so runs can be diffed byte for byte.
"""

from __future__ import annotations

import json

from .bundle import SteinerPresentation
from .errors import ValidationError
from .exactalg import FieldCtx

FORMAT_VERSION = 1


def dumps_bundle(pres: SteinerPresentation) -> str:
    head = {"format": FORMAT_VERSION, "p": pres.p, "n": pres.n, "s": pres.s, "t": pres.t}
    lines = ["{"]
    lines += [f'  "{k}": {v},' for k, v in head.items()]
    lines.append('  "phi": [')
    mats = [json.dumps(m.tolist(), separators=(",", ":")) for m in pres.phi]
    lines += [f"    {m}" + ("," if i + 1 < len(mats) else "") for i, m in enumerate(mats)]
    lines.append("  ]")
    lines.append("}")
    return "\n".join(lines) + "\n"


def _get_int(doc, key):
    if key not in doc:
        raise ValidationError(f"bundle: missing field {key!r}")
    v = doc[key]
    if not isinstance(v, int) or isinstance(v, bool):
        raise ValidationError(f"bundle: field {key!r} must be an integer, got {v!r}")
    return v


def loads_bundle(text: str, budget: int | None = None) -> SteinerPresentation:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"bundle: malformed JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
    if not isinstance(doc, dict):
        raise ValidationError("bundle: top level must be an object")
    if "format" in doc and doc["format"] != FORMAT_VERSION:
        raise ValidationError(f"bundle: unsupported format {doc['format']!r}")
    p, n, s, t = (_get_int(doc, k) for k in ("p", "n", "s", "t"))
    ctx = FieldCtx(p) if budget is None else FieldCtx(p, budget)
    phi = doc.get("phi")
    if not isinstance(phi, list) or len(phi) != t:
        raise ValidationError(f"bundle: field 'phi' must be a list of t={t} matrices")
    for k, mat in enumerate(phi):
        if not isinstance(mat, list) or len(mat) != s:
            raise ValidationError(f"bundle: phi[{k}] must have s={s} rows")
        for i, row in enumerate(mat):
            if not isinstance(row, list) or len(row) != n + 1:
                raise ValidationError(f"bundle: phi[{k}][{i}] must have n+1={n + 1} entries")
            for j, x in enumerate(row):
                if not isinstance(x, int) or isinstance(x, bool):
                    raise ValidationError(f"bundle: phi[{k}][{i}][{j}] = {x!r} is not an integer")
                if not 0 <= x < p:
                    raise ValidationError(f"bundle: phi[{k}][{i}][{j}] = {x} out of range [0, {p})")
    return SteinerPresentation(ctx, n, s, t, phi)


# -- reports -------------------------------------------------------------------


def jumping_dict(rep, spans=None) -> dict:
    d = {
        "p": rep.p,
        "n": rep.n,
        "s": rep.s,
        "t0": rep.t0,
        "bound": rep.bound,
        "pair_count": len(rep.pairs),
        "pairs": [
            {"v": list(pr.v), "h": list(pr.h), "coords": list(pr.coords), "tangent_dim": td}
            for pr, td in zip(rep.pairs, rep.tangent_dims or [None] * len(rep.pairs))
        ],
        "sigma": [list(v) for v in rep.sigma],
        "j": [list(h) for h in rep.j_set],
        "profile": {str(k): v for k, v in rep.histogram().items()},
        "certificate": rep.certificate(),
    }
    if spans is not None:
        d["spans"] = spans
    return d


def pairs_dict(pairs) -> dict:
    return {
        "pair_count": len(pairs),
        "pairs": [{"v": list(pr.v), "h": list(pr.h), "coords": list(pr.coords)} for pr in pairs],
    }


def classification_dict(rep) -> dict:
    return {
        "case": rep.case,
        "invariants": rep.invariants_observed,
        "recovered": rep.recovered_params,
        "trace": rep.iteration_trace,
        "notes": rep.notes,
    }


def law_dict(law, step=None) -> dict:
    d = {
        "inclusion": law.inclusion,
        "projection": law.projection,
        "dims": law.dims,
        "maximal": law.maximal,
        "model": law.model,
        "j_equal": law.j_equal,
        "sigma_equal": law.sigma_equal,
        "max_dim_drop": law.max_dim_drop,
        "ok": law.ok,
        "notes": law.notes,
    }
    if step is not None:
        d = {"step": step.summary(), **d}
    return d


def _text_value(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if v is None:
        return "-"
    if isinstance(v, (list, tuple)):
        return "[" + ",".join(_text_value(x) for x in v) + "]"
    if isinstance(v, dict):
        if not v:
            return "{}"
        return " ".join(f"{k}={_text_value(x)}" for k, x in v.items())
    return str(v)


def render(d: dict, fmt: str = "text") -> str:
    """Render a report dict; lists of dicts become one indexed line per element."""
    if fmt == "json":
        return json.dumps(d, indent=2) + "\n"
    lines = []
    for key, value in d.items():
        if isinstance(value, list) and value and isinstance(value[0], dict):
            lines.append(f"{key} {len(value)}")
            lines += [f"  {i} {_text_value(x)}" for i, x in enumerate(value)]
        elif isinstance(value, list) and value and isinstance(value[0], (list, str)):
            lines.append(f"{key} {len(value)}")
            lines += [f"  {_text_value(x)}" for x in value]
        else:
            lines.append(f"{key} {_text_value(value)}")
    return "\n".join(lines) + "\n"
