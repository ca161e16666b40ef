"""Approach strings: one flat, parseable name per evaluated method.

Grammar (whitespace is ignored):

    oracle
    sbs
    <selector atom>                     peralgo(trees=50), sunny(k=16), ...
    voting[<agg>]{<atom>,<atom>,...;search=all|exhaustive}
    bagging[<agg>]{<atom>;k=10;seed=S}
    boosting{<atom>;iters=20;seed=S}
    stacking{meta=<atom>;bases=<atom>,...;fs=none|vt(0.16);split=shared|disjoint(0.7)}
    ass{meta=<atom>;bases=<atom>,...;inner=3}

`<agg>` is one of the aggregation registry keys and defaults to `maj`.
`canonical_approach_spec` normalizes parameter order and atom spelling
while preserving member order; model randomness is derived from the
canonical string, so two spellings of the same approach train
identically.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .aggregation import AGGREGATIONS
from .ensembles import (
    BaggingEnsemble,
    BoostingEnsemble,
    StackingEnsemble,
    VotingEnsemble,
)
from .errors import InvalidConfig
from .meta import AlgorithmSelectorSelector, DEFAULT_INNER_FOLDS
from .selectors import Selector, canonical_selector_spec, make_selector

ORACLE = "oracle"

_KIND_RE = re.compile(r"^(voting|bagging|boosting|stacking|ass)(?:\[([^\]]*)\])?\{(.*)\}$")

_OPENERS = {"(": ")", "[": "]", "{": "}"}
_CLOSERS = {")": "(", "]": "[", "}": "{"}


def _split_top(text: str, sep: str) -> list[str]:
    """Split on `sep` only where no bracket of any shape is open."""
    parts, depth, start = [], [], 0
    for pos, ch in enumerate(text):
        if ch in _OPENERS:
            depth.append(ch)
        elif ch in _CLOSERS:
            if not depth or depth[-1] != _CLOSERS[ch]:
                raise InvalidConfig(f"unbalanced {ch!r} in {text!r}")
            depth.pop()
        elif ch == sep and not depth:
            parts.append(text[start:pos])
            start = pos + 1
    if depth:
        raise InvalidConfig(f"unclosed {depth[-1]!r} in {text!r}")
    parts.append(text[start:])
    return parts


def _key_value_segments(segments, allowed):
    params = {}
    for segment in segments:
        if "=" not in segment:
            raise InvalidConfig(f"expected key=value, got {segment!r}")
        key, value = segment.split("=", 1)
        if key not in allowed:
            raise InvalidConfig(f"unknown parameter {key!r}")
        if key in params:
            raise InvalidConfig(f"duplicate parameter {key!r}")
        if not value:
            raise InvalidConfig(f"empty value for {key!r}")
        params[key] = value
    return params


def _int_param(params, key, default, minimum):
    raw = params.get(key)
    if raw is None:
        return default
    try:
        value = int(raw)
    except ValueError:
        raise InvalidConfig(f"{key} must be an integer, got {raw!r}") from None
    if value < minimum:
        raise InvalidConfig(f"{key} must be >= {minimum}, got {value}")
    return value


def _parse_mode(value: str, bare: str, wrapped: str, default: float,
                low: float = 0.0, high: float = float("inf")):
    """Parse `bare` or `wrapped(<float>)`, returning (mode, number)."""
    if value == bare:
        return bare, None
    match = re.fullmatch(re.escape(wrapped) + r"\(([^()]*)\)", value)
    if match is None:
        raise InvalidConfig(f"expected {bare} or {wrapped}(<value>), got {value!r}")
    raw = match.group(1)
    if raw == "":
        return wrapped, default
    try:
        number = float(raw)
    except ValueError:
        raise InvalidConfig(f"{wrapped} takes a number, got {raw!r}") from None
    if not low <= number < high:
        raise InvalidConfig(f"{wrapped} value out of range: {number}")
    return wrapped, number


def _fmt(value: float) -> str:
    return f"{value:g}"


@dataclass(frozen=True)
class ParsedApproach:
    kind: str                      # oracle | selector | voting | bagging | boosting | stacking | ass
    members: tuple[str, ...] = ()  # canonical selector atoms, order preserved
    meta: str | None = None
    aggregation: str | None = None
    params: dict = field(default_factory=dict)


def _parse_aggregation(raw, kind):
    if raw is None:
        return "maj"
    if raw not in AGGREGATIONS:
        raise InvalidConfig(f"{kind}: unknown aggregation {raw!r}")
    return raw


def parse_approach(spec: str) -> ParsedApproach:
    text = re.sub(r"\s+", "", spec)
    if not text:
        raise InvalidConfig("empty approach string")
    if text.lower() == ORACLE:
        return ParsedApproach(kind=ORACLE)

    match = _KIND_RE.match(text)
    if match is None:
        return ParsedApproach(kind="selector", members=(canonical_selector_spec(text),))

    kind, agg, body = match.groups()
    segments = _split_top(body, ";")

    if kind == "voting":
        members = [m for m in _split_top(segments[0], ",") if m]
        if not members:
            raise InvalidConfig("voting needs at least one member")
        params = _key_value_segments(segments[1:], {"search"})
        search = params.get("search", "all")
        if search not in ("all", "exhaustive"):
            raise InvalidConfig(f"voting: search must be all or exhaustive, got {search!r}")
        return ParsedApproach(
            kind=kind,
            members=tuple(canonical_selector_spec(m) for m in members),
            aggregation=_parse_aggregation(agg, kind),
            params={"search": search},
        )

    if kind in ("bagging", "boosting"):
        if kind == "boosting" and agg is not None:
            raise InvalidConfig("boosting does not take an aggregation")
        if not segments[0]:
            raise InvalidConfig(f"{kind} needs a member spec")
        member = canonical_selector_spec(segments[0])
        if kind == "bagging":
            params = _key_value_segments(segments[1:], {"k", "seed"})
            parsed = {"k": _int_param(params, "k", 10, 1)}
        else:
            params = _key_value_segments(segments[1:], {"iters", "seed"})
            parsed = {"iters": _int_param(params, "iters", 20, 1)}
        if "seed" in params:
            parsed["seed"] = _int_param(params, "seed", None, -(2**63))
        return ParsedApproach(
            kind=kind,
            members=(member,),
            aggregation=_parse_aggregation(agg, kind) if kind == "bagging" else None,
            params=parsed,
        )

    allowed = {"meta", "bases", "fs", "split"} if kind == "stacking" else {"meta", "bases", "inner"}
    params = _key_value_segments(segments, allowed)
    if "meta" not in params:
        raise InvalidConfig(f"{kind} needs meta=<spec>")
    if "bases" not in params:
        raise InvalidConfig(f"{kind} needs bases=<spec>,...")
    meta = canonical_selector_spec(params["meta"])
    bases = [b for b in _split_top(params["bases"], ",") if b]
    if not bases:
        raise InvalidConfig(f"{kind} needs at least one base spec")
    bases = tuple(canonical_selector_spec(b) for b in bases)

    if kind == "stacking":
        fs_mode, fs_value = _parse_mode(params.get("fs", "none"), "none", "vt", 0.16, low=0.0)
        split_mode, split_value = _parse_mode(
            params.get("split", "shared"), "shared", "disjoint", 0.7, low=0.0, high=1.0
        )
        if split_mode == "disjoint" and split_value == 0.0:
            raise InvalidConfig("disjoint split ratio must be positive")
        return ParsedApproach(
            kind=kind,
            members=bases,
            meta=meta,
            params={
                "fs": fs_mode,
                "fs_value": fs_value,
                "split": split_mode,
                "split_value": split_value,
            },
        )

    inner = _int_param(params, "inner", DEFAULT_INNER_FOLDS, 2)
    return ParsedApproach(kind="ass", members=bases, meta=meta, params={"inner": inner})


def canonical_approach_spec(spec: str) -> str:
    parsed = parse_approach(spec)
    return _canonical(parsed)


def _canonical(parsed: ParsedApproach) -> str:
    kind = parsed.kind
    if kind == ORACLE:
        return ORACLE
    if kind == "selector":
        return parsed.members[0]
    if kind == "voting":
        members = ",".join(parsed.members)
        return f"voting[{parsed.aggregation}]{{{members};search={parsed.params['search']}}}"
    if kind == "bagging":
        tail = f";seed={parsed.params['seed']}" if "seed" in parsed.params else ""
        return (
            f"bagging[{parsed.aggregation}]"
            f"{{{parsed.members[0]};k={parsed.params['k']}{tail}}}"
        )
    if kind == "boosting":
        tail = f";seed={parsed.params['seed']}" if "seed" in parsed.params else ""
        return f"boosting{{{parsed.members[0]};iters={parsed.params['iters']}{tail}}}"
    if kind == "stacking":
        fs = "none" if parsed.params["fs"] == "none" else f"vt({_fmt(parsed.params['fs_value'])})"
        split = (
            "shared"
            if parsed.params["split"] == "shared"
            else f"disjoint({_fmt(parsed.params['split_value'])})"
        )
        bases = ",".join(parsed.members)
        return f"stacking{{meta={parsed.meta};bases={bases};fs={fs};split={split}}}"
    bases = ",".join(parsed.members)
    return f"ass{{meta={parsed.meta};bases={bases};inner={parsed.params['inner']}}}"


def build_approach(spec: str, global_seed: int = 0) -> Selector:
    """Construct the untrained model an approach string names.

    `oracle` has no model form (the evaluation loop computes it from the
    truth directly), so asking for it here is a config error.
    """
    parsed = parse_approach(spec)
    canon = _canonical(parsed)
    if parsed.kind == ORACLE:
        raise InvalidConfig("oracle is computed by the evaluation loop, not trained")
    if parsed.kind == "selector":
        return make_selector(canon, global_seed)
    if parsed.kind == "voting":
        return VotingEnsemble(
            canon,
            global_seed,
            parsed.members,
            aggregation=parsed.aggregation,
            search=parsed.params["search"],
        )
    if parsed.kind == "bagging":
        return BaggingEnsemble(
            canon,
            global_seed,
            parsed.members[0],
            k=parsed.params["k"],
            aggregation=parsed.aggregation,
        )
    if parsed.kind == "boosting":
        return BoostingEnsemble(
            canon,
            global_seed,
            parsed.members[0],
            iterations=parsed.params["iters"],
        )
    if parsed.kind == "stacking":
        return StackingEnsemble(
            canon,
            global_seed,
            parsed.members,
            parsed.meta,
            feature_selection=parsed.params["fs"],
            vt_threshold=parsed.params["fs_value"] if parsed.params["fs"] == "vt" else 0.16,
            split=parsed.params["split"],
            split_ratio=(
                parsed.params["split_value"] if parsed.params["split"] == "disjoint" else 0.7
            ),
        )
    return AlgorithmSelectorSelector(
        canon,
        global_seed,
        parsed.members,
        parsed.meta,
        inner_folds=parsed.params["inner"],
    )
