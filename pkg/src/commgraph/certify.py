"""Witnesses and certificates for the commutativity-graph criterion.

A certificate lists a generating set by canonical keys together with every
hypothesis of the criterion and a witness for each: infinite order for each
generator, connectivity of K(G, S) via a spanning forest, and an edge whose
powers generate a free abelian group of rank 2.  Conclusions are emitted only
when every hypothesis holds.  :func:`verify_certificate` rebuilds all elements
from their keys and re-derives every line.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from commgraph import __version__
from commgraph.autfree import FreeAutomorphism, abelianization, nielsen, parse_nielsen_label
from commgraph.engine import (
    GroupElement,
    KeyDecodeError,
    canonical_key,
    commutes,
    element_from_key,
    power,
    relation_search,
)
from commgraph.graph import CommGraph, GeneratorSet, build, components, graph_summary, remove_vertices
from commgraph.matrix import (
    IntMatrix,
    NotUnipotent,
    RatMatrix,
    elementary,
    format_matrix,
    heisenberg_generators,
    is_unipotent,
    logs_independent,
    unipotent_log,
)
from commgraph.thompson import X0X1INV_LABEL, PLMap, generator_x, slope_hom, x0_x1inv

SCHEMA_VERSION = "1"
NOT_SRH = "NOT_STRONGLY_RELATIVELY_HYPERBOLIC"
ONE_END = "ONE_END"
CONCLUSIONS = [NOT_SRH, ONE_END]
MAIN = "main-theorem"
THOMPSON = "thompson-variant"
SANITY_BOUND = 5

RELIED_UPON = [
    {
        "id": "commutativity-graph-criterion",
        "statement": (
            "If S has at least two elements, all of infinite order, K(G,S) is connected and some edge "
            "carries non-zero powers generating a rank-2 abelian group, then G is not strongly hyperbolic "
            "relative to any finite collection of proper finitely generated subgroups, and G has one end "
            "unless G is virtually Z."
        ),
    },
    {
        "id": "peripheral-almost-malnormality",
        "statement": (
            "If G is strongly hyperbolic relative to L_1..L_p then g L_j g^-1 and h L_k h^-1 meet in a finite "
            "set for j != k, and L_j meets g L_j g^-1 finitely for g not in L_j (Farb, Bowditch, Osin)."
        ),
    },
    {
        "id": "rank2-abelian-is-peripheral",
        "statement": (
            "An abelian subgroup of rank at least 2 of a strongly relatively hyperbolic group lies in a "
            "conjugate of a peripheral subgroup (Osin)."
        ),
    },
    {
        "id": "finite-splitting-malnormality",
        "statement": (
            "For a non-trivial splitting A *_C B or A *_C with C finite, a factor A meets g A g^-1 trivially "
            "for g not in A, and conjugates of distinct factors meet finitely (normal forms)."
        ),
    },
    {
        "id": "rank2-abelian-is-elliptic",
        "statement": (
            "In such a splitting every abelian subgroup of rank at least 2 is conjugate into a factor "
            "(Kurosh subgroup theorem for amalgams, Britton's lemma for HNN extensions)."
        ),
    },
    {
        "id": "stallings-ends",
        "statement": (
            "A finitely generated infinite group has one, two or infinitely many ends; two iff it is virtually "
            "Z, infinitely many iff it splits non-trivially over a finite subgroup."
        ),
    },
]

NOT_VIRTUALLY_Z = (
    "a free abelian subgroup of rank 2 cannot lie in a virtually cyclic group, so the rank-2 edge "
    "discharges the not-virtually-Z hypothesis"
)
RANK2_FROM_IMAGE = (
    "a 2-generated abelian group with a free abelian quotient of rank 2 is itself free abelian of rank 2"
)
MAIN_CAVEATS = [
    {"code": "GENERATED_GROUP", "text": "conclusions concern the group generated by the listed elements"},
    {
        "code": "POWER_BOUND",
        "text": "absent edges mean no commuting powers were found up to power_bound, not a proof of non-adjacency",
    },
]
ORIENTATION_CAVEAT = {
    "code": "PRODUCT_ORIENTATION",
    "text": (
        "products of generators apply the left factor first, the orientation in which "
        "x_{j+1} = x_i x_j x_i^-1 holds; the vertex x0x1^-1 is the map x0 o x1^-1 (apply x1^-1 first), "
        "which is the identity on [3/4,1]"
    ),
}


class WitnessError(ValueError):
    """No witness strategy applies, or a claimed witness does not hold."""


# -- witnesses ---------------------------------------------------------------


@dataclass(frozen=True)
class InfiniteOrderWitness:
    strategy: str
    payload: dict

    def to_json(self, label: str) -> dict:
        return {"label": label, "strategy": self.strategy, "payload": self.payload}


@dataclass(frozen=True)
class Rank2Witness:
    strategy: str
    powers: tuple[int, int]
    payload: dict
    sanity: dict = field(default_factory=dict)

    def to_json(self, edge) -> dict:
        return {
            "edge": list(edge),
            "powers": list(self.powers),
            "strategy": self.strategy,
            "payload": self.payload,
            "sanity": self.sanity,
        }


def _abelian_image(g: FreeAutomorphism) -> IntMatrix:
    return abelianization(g)[0]


def infinite_order_witness(g: GroupElement) -> InfiniteOrderWitness:
    if g.is_identity():
        raise WitnessError("the identity has finite order")
    if isinstance(g, IntMatrix):
        if is_unipotent(g):
            return InfiniteOrderWitness("nontrivial-unipotent", {"matrix": format_matrix(g)})
        raise WitnessError("matrix is not unipotent; no infinite-order strategy applies")
    if isinstance(g, FreeAutomorphism):
        image = _abelian_image(g)
        if is_unipotent(image) and not image.is_identity():
            return InfiniteOrderWitness(
                "unipotent-homomorphic-image", {"homomorphism": "abelianization", "image": format_matrix(image)}
            )
        raise WitnessError("abelianized image is not a non-trivial unipotent")
    if isinstance(g, PLMap):
        return InfiniteOrderWitness("thompson-nonidentity", g.to_strings())
    raise WitnessError(f"no infinite-order strategy for engine {g.engine!r}")


def check_infinite_order(g: GroupElement, w: dict) -> list[str]:
    """Problems with a serialized infinite-order witness (empty if sound)."""
    strategy, payload = w.get("strategy"), w.get("payload")
    try:
        if strategy == "nontrivial-unipotent":
            m = IntMatrix(_int_rows(payload["matrix"]))
            if m != g:
                return ["witness matrix differs from the generator"]
            if m.is_identity() or not is_unipotent(m):
                return ["witness matrix is not a non-trivial unipotent"]
        elif strategy == "unipotent-homomorphic-image":
            if payload.get("homomorphism") != "abelianization" or not isinstance(g, FreeAutomorphism):
                return ["unknown homomorphism for this engine"]
            m = IntMatrix(_int_rows(payload["image"]))
            if m != _abelian_image(g):
                return ["image matrix differs from the abelianization"]
            if m.is_identity() or not is_unipotent(m):
                return ["image is not a non-trivial unipotent"]
        elif strategy == "thompson-nonidentity":
            if not isinstance(g, PLMap):
                return ["strategy needs a Thompson element"]
            f = PLMap(payload["breakpoints"], payload["values"])
            if f != g or f.to_strings() != payload:
                return ["PL data differs from the generator"]
            if f.is_identity():
                return ["element is the identity"]
        else:
            return [f"unknown strategy {strategy!r}"]
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
        return [f"malformed payload: {exc}"]
    return []


def rank2_witness(s: GroupElement, t: GroupElement, powers=(1, 1), sanity_bound: int = SANITY_BOUND) -> Rank2Witness:
    """Certify that <s^p, t^q> is free abelian of rank 2."""
    p, q = powers
    if p == 0 or q == 0:
        raise WitnessError("powers must be non-zero")
    sp, tp = power(s, p), power(t, q)
    if not commutes(sp, tp):
        raise WitnessError("the powers do not commute")
    if isinstance(sp, IntMatrix):
        try:
            logs = [unipotent_log(sp), unipotent_log(tp)]
        except NotUnipotent as exc:
            raise WitnessError(str(exc)) from exc
        if not logs_independent(*logs):
            raise WitnessError("logarithms are linearly dependent")
        strategy = "commuting-unipotent-logs"
        payload = {"logs": [l.to_strings() for l in logs]}
    elif isinstance(sp, FreeAutomorphism):
        images = [_abelian_image(sp), _abelian_image(tp)]
        try:
            logs = [unipotent_log(m) for m in images]
        except NotUnipotent as exc:
            raise WitnessError(f"abelianized image: {exc}") from exc
        if not logs_independent(*logs):
            raise WitnessError("abelianized images have dependent logarithms")
        strategy = "homomorphic-image"
        payload = {
            "homomorphism": "abelianization",
            "images": [format_matrix(m) for m in images],
            "logs": [l.to_strings() for l in logs],
            "justification": RANK2_FROM_IMAGE,
        }
    elif isinstance(sp, PLMap):
        (a, b), (c, d) = slope_hom(sp), slope_hom(tp)
        det = a * d - b * c
        if det == 0:
            raise WitnessError("endpoint-slope vectors are dependent")
        strategy = "homomorphic-image"
        payload = {
            "homomorphism": "endpoint-slopes",
            "images": [[str(a), str(b)], [str(c), str(d)]],
            "determinant": str(det),
            "justification": RANK2_FROM_IMAGE,
        }
    else:
        raise WitnessError(f"no rank-2 strategy for engine {sp.engine!r}")
    found = relation_search(sp, tp, sanity_bound)
    if found:
        raise WitnessError(f"certified independent but relation_search found {found}")
    sanity = {"relation_search_bound": sanity_bound, "relations_found": []}
    return Rank2Witness(strategy, (p, q), payload, sanity)


def check_rank2(s: GroupElement, t: GroupElement, w: dict) -> list[str]:
    """Problems with a serialized rank-2 witness, checked on its own terms."""
    try:
        p, q = (int(x) for x in w["powers"])
        if p == 0 or q == 0 or isinstance(w["powers"][0], bool):
            return ["powers must be non-zero integers"]
        sp, tp = power(s, p), power(t, q)
        if not commutes(sp, tp):
            return ["the powers do not commute"]
        payload = w["payload"]
        strategy = w["strategy"]
        if strategy == "commuting-unipotent-logs":
            if not isinstance(sp, IntMatrix):
                return ["logs strategy needs matrices"]
            logs = [RatMatrix.from_strings(x) for x in payload["logs"]]
            if logs != [unipotent_log(sp), unipotent_log(tp)]:
                return ["stored logarithms are wrong"]
            if not logs_independent(*logs):
                return ["logarithms are dependent"]
        elif strategy == "homomorphic-image" and payload.get("homomorphism") == "abelianization":
            if not isinstance(sp, FreeAutomorphism):
                return ["abelianization needs automorphisms"]
            images = [IntMatrix(_int_rows(x)) for x in payload["images"]]
            if images != [_abelian_image(sp), _abelian_image(tp)]:
                return ["stored images are wrong"]
            if not commutes(*images):
                return ["images do not commute"]
            logs = [RatMatrix.from_strings(x) for x in payload["logs"]]
            if logs != [unipotent_log(m) for m in images]:
                return ["stored logarithms are wrong"]
            if not logs_independent(*logs):
                return ["image logarithms are dependent"]
        elif strategy == "homomorphic-image" and payload.get("homomorphism") == "endpoint-slopes":
            if not isinstance(sp, PLMap):
                return ["endpoint slopes need Thompson elements"]
            (a, b), (c, d) = slope_hom(sp), slope_hom(tp)
            if payload["images"] != [[str(a), str(b)], [str(c), str(d)]]:
                return ["stored slope vectors are wrong"]
            if payload["determinant"] != str(a * d - b * c) or a * d - b * c == 0:
                return ["slope vectors are dependent or determinant is wrong"]
        else:
            return [f"unknown strategy {strategy!r}"]
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
        return [f"malformed rank-2 witness: {exc}"]
    return []


def _int_rows(rows):
    out = []
    for row in rows:
        out.append([_strict_int(x) for x in row])
    return out


def _strict_int(x) -> int:
    if not isinstance(x, str) or not re.fullmatch(r"-?(0|[1-9][0-9]*)", x) or x == "-0":
        raise ValueError(f"bad integer string {x!r}")
    return int(x)


# -- certificate assembly ----------------------------------------------------


def _hyp(name: str, holds: bool, detail: str, kind: str = "checked") -> dict:
    return {"name": name, "kind": kind, "holds": bool(holds), "detail": detail}


def _generators_json(gens: GeneratorSet) -> list[dict]:
    return [{"label": l, "key": canonical_key(g).hex()} for l, g in gens.items]


def _infinite_order_section(gens: GeneratorSet):
    entries, failures = [], []
    for label, g in gens.items:
        try:
            entries.append(infinite_order_witness(g).to_json(label))
        except WitnessError as exc:
            failures.append(f"{label}: {exc}")
    return entries, failures


def _find_rank2(gens: GeneratorSet, graph: CommGraph, candidates=None):
    """First edge (in edge order) whose witness powers admit a rank-2 certificate."""
    attempts = []
    for u, v, w in graph.edge_list():
        if candidates is not None and (u, v) not in candidates:
            continue
        try:
            r2 = rank2_witness(gens.element(u), gens.element(v), (w.n_s, w.n_t))
        except WitnessError as exc:
            attempts.append(f"{u}-{v}: {exc}")
            continue
        return (u, v), r2, attempts
    return None, None, attempts


def check_main_theorem(gens: GeneratorSet) -> dict:
    """Check every hypothesis of the criterion and assemble a certificate.

    A failed hypothesis produces a partial report with no conclusions.
    """
    hyps = []
    hyps.append(_hyp("cardinality_at_least_two", len(gens) >= 2, f"|S| = {len(gens)}"))

    inf_entries, inf_failures = _infinite_order_section(gens)
    hyps.append(
        _hyp(
            "infinite_order",
            not inf_failures,
            f"all {len(gens)} generators witnessed" if not inf_failures else "; ".join(inf_failures),
        )
    )

    graph = build(gens)
    parts, _ = components(graph)
    connected = len(parts) == 1
    hyps.append(_hyp("connected", connected, f"{len(parts)} component(s), {len(graph.edges)} edge(s)"))

    edge, r2, attempts = _find_rank2(gens, graph)
    if r2 is not None:
        detail = f"edge {edge[0]}--{edge[1]} powers {r2.powers[0]},{r2.powers[1]} via {r2.strategy}"
    else:
        detail = "no edge admits a rank-2 certificate" + (f" ({len(attempts)} tried)" if attempts else "")
    hyps.append(_hyp("rank2_edge", r2 is not None, detail))
    hyps.append(_hyp("not_virtually_Z", r2 is not None, NOT_VIRTUALLY_Z, kind="derived"))

    summary = graph_summary(graph)
    summary["removed"] = []
    summary["components"] = parts
    return {
        "schema_version": SCHEMA_VERSION,
        "tool_version": __version__,
        "engine": gens.engine,
        "generators": _generators_json(gens),
        "power_bound": gens.power_bound,
        "truncation": None,
        "graph": summary,
        "infinite_order": inf_entries,
        "rank2": r2.to_json(edge) if r2 is not None else None,
        "hypotheses": hyps,
        "proof_pattern": MAIN,
        "conclusions": list(CONCLUSIONS) if all(h["holds"] for h in hyps) else [],
        "relied_upon": RELIED_UPON,
        "caveats": list(MAIN_CAVEATS),
    }


def thompson_generators(m: int, power_bound: int = 1) -> GeneratorSet:
    """S'_m = {x_0, ..., x_m, x0x1^-1}."""
    items = [(f"x{j}", generator_x(j)) for j in range(m + 1)]
    items.append((X0X1INV_LABEL, x0_x1inv()))
    return GeneratorSet("thompson", tuple(items), power_bound)


def truncation_caveat(m: int) -> dict:
    return {
        "code": "TRUNCATION",
        "m": m,
        "text": (
            f"facts about x_j are checked for j <= {m} only; the argument that yields the conclusions "
            "uses them for every j >= 2"
        ),
    }


def check_thompson_variant(m: int) -> dict:
    """Certificate for Thompson's group F from the truncated set S'_m."""
    if m < 4:
        raise ValueError("truncation m must be at least 4")
    gens = thompson_generators(m)
    x = [generator_x(j) for j in range(m + 1)]
    t = gens.element(X0X1INV_LABEL)
    hyps = []

    inf_entries, inf_failures = _infinite_order_section(gens)
    hyps.append(
        _hyp(
            "infinite_order",
            not inf_failures,
            f"all {len(gens)} generators witnessed" if not inf_failures else "; ".join(inf_failures),
        )
    )

    bad = [j for j in range(2, m + 1) if not commutes(t, x[j])]
    hyps.append(
        _hyp(
            "x0x1^-1_commutes_with_xj",
            not bad,
            f"checked 2 <= j <= {m}" + (f"; fails for j in {bad}" if bad else ""),
        )
    )

    graph = build(gens)
    isolated = [v for v in ("x0", "x1") if graph.degree(v) == 0]
    hyps.append(_hyp("x0_x1_isolated", len(isolated) == 2, f"isolated: {isolated}", kind="observation"))

    reduced = remove_vertices(graph, ["x0", "x1"])
    reduced_parts, _ = components(reduced)
    hyps.append(
        _hyp(
            "connected_without_x0_x1",
            len(reduced_parts) == 1,
            f"{len(reduced_parts)} component(s) after removing x0, x1",
        )
    )

    edge, r2, _ = _find_rank2(gens, graph, candidates={(X0X1INV_LABEL, "x2"), ("x2", X0X1INV_LABEL)})
    hyps.append(
        _hyp(
            "rank2_edge",
            r2 is not None,
            f"edge {edge[0]}--{edge[1]} via {r2.strategy}" if r2 else "x0x1^-1 and x2 admit no rank-2 certificate",
        )
    )

    rel_bad = [
        (i, j) for i in range(m) for j in range(i + 1, m) if x[i] * x[j] * x[i].inverse() != x[j + 1]
    ]
    hyps.append(
        _hyp(
            "conjugation_relations",
            not rel_bad,
            f"x_(j+1) = x_i x_j x_i^-1 for 0 <= i < j < {m}" + (f"; fails for {rel_bad}" if rel_bad else ""),
        )
    )
    hyps.append(_hyp("not_virtually_Z", r2 is not None, NOT_VIRTUALLY_Z, kind="derived"))

    summary = graph_summary(reduced)
    full = graph_summary(graph)
    summary["edges"] = full["edges"]
    summary["removed"] = ["x0", "x1"]
    summary["components"] = components(graph)[0]
    gating = [h for h in hyps if h["kind"] != "observation"]
    return {
        "schema_version": SCHEMA_VERSION,
        "tool_version": __version__,
        "engine": "thompson",
        "generators": _generators_json(gens),
        "power_bound": gens.power_bound,
        "truncation": m,
        "graph": summary,
        "infinite_order": inf_entries,
        "rank2": r2.to_json(edge) if r2 is not None else None,
        "hypotheses": hyps,
        "proof_pattern": THOMPSON,
        "conclusions": list(CONCLUSIONS) if all(h["holds"] for h in gating) else [],
        "relied_upon": RELIED_UPON,
        "caveats": [truncation_caveat(m), ORIENTATION_CAVEAT],
    }


# -- verification ------------------------------------------------------------


@dataclass
class VerificationReport:
    ok: bool
    discrepancies: list[str]

    def __bool__(self):
        return self.ok


_ELEMENTARY_RE = re.compile(r"I([+-])e\[(\d+),(\d+)\]")
_THOMPSON_RE = re.compile(r"x(0|[1-9]\d*)")


def standard_element(engine: str, label: str, like: GroupElement):
    """Element a catalog label names, or None for free-form labels."""
    try:
        if engine == "automorphism" and label.startswith("E["):
            a, b = parse_nielsen_label(label)
            return nielsen(a, b, like.n)
        if engine == "matrix":
            m = _ELEMENTARY_RE.fullmatch(label)
            if m:
                return elementary(like.n, int(m.group(2)), int(m.group(3)), 1 if m.group(1) == "+" else -1)
            if like.n == 3 and label in ("a", "b", "c"):
                return dict(zip("abc", heisenberg_generators()))[label]
        if engine == "thompson":
            if label == X0X1INV_LABEL:
                return x0_x1inv()
            m = _THOMPSON_RE.fullmatch(label)
            if m and int(m.group(1)) <= 64:
                return generator_x(int(m.group(1)))
    except ValueError:
        return False
    return None


def verify_certificate(cert: dict) -> VerificationReport:
    """Re-derive every fact in a certificate from its element keys."""
    problems: list[str] = []
    try:
        _verify(cert, problems)
    except (KeyError, TypeError, ValueError, AttributeError, IndexError) as exc:
        problems.append(f"malformed certificate: {type(exc).__name__}: {exc}")
    return VerificationReport(not problems, problems)


def _verify(cert: dict, problems: list[str]) -> None:
    if not isinstance(cert, dict):
        raise TypeError("certificate must be a JSON object")
    if cert.get("schema_version") != SCHEMA_VERSION:
        problems.append(f"unsupported schema_version {cert.get('schema_version')!r}")
        return
    pattern = cert["proof_pattern"]
    if pattern not in (MAIN, THOMPSON):
        problems.append(f"unknown proof_pattern {pattern!r}")
        return
    engine = cert["engine"]

    # Rebuild the generating set from keys.
    items = []
    for entry in cert["generators"]:
        label = entry["label"]
        try:
            g = element_from_key(bytes.fromhex(entry["key"]))
        except (KeyDecodeError, ValueError) as exc:
            problems.append(f"generator {label}: bad key ({exc})")
            return
        if g.engine != engine:
            problems.append(f"generator {label}: engine {g.engine} != {engine}")
            return
        std = standard_element(engine, label, g)
        if std is False or (std is not None and std != g):
            problems.append(f"generator {label}: key does not match the element its label names")
        items.append((label, g))
    power_bound = cert["power_bound"]
    if not isinstance(power_bound, int) or isinstance(power_bound, bool) or power_bound < 1:
        problems.append("power_bound must be a positive integer")
        return
    try:
        gens = GeneratorSet(engine, tuple(items), power_bound)
    except ValueError as exc:
        problems.append(f"generating set invalid: {exc}")
        return

    if pattern == THOMPSON:
        m = cert["truncation"]
        if not isinstance(m, int) or isinstance(m, bool) or m < 4:
            problems.append("thompson-variant needs an integer truncation >= 4")
            return
        expected_gens = thompson_generators(m)
        if gens.items != expected_gens.items or power_bound != 1:
            problems.append(f"generators are not S'_{m} at power bound 1")
            return
        expected = check_thompson_variant(m)
    else:
        if cert["truncation"] is not None:
            problems.append("main-theorem certificates carry no truncation")
        expected = check_main_theorem(gens)

    _independent_checks(cert, gens, problems)

    for key in (
        "engine",
        "generators",
        "power_bound",
        "truncation",
        "graph",
        "infinite_order",
        "rank2",
        "hypotheses",
        "proof_pattern",
        "conclusions",
        "relied_upon",
        "caveats",
    ):
        if cert.get(key) != expected[key]:
            problems.append(f"field {key!r} does not match the re-derived value{_first_diff(cert.get(key), expected[key])}")
    extra = set(cert) - set(expected)
    if extra:
        problems.append(f"unexpected fields: {sorted(extra)}")

    # Conclusion logic, stated directly.
    gating = [h for h in cert["hypotheses"] if h.get("kind") != "observation"]
    all_hold = bool(gating) and all(h.get("holds") is True for h in gating)
    if cert["conclusions"] and (not all_hold or cert["rank2"] is None):
        problems.append("conclusions present without every hypothesis witnessed")
    if cert["conclusions"] not in ([], CONCLUSIONS):
        problems.append("conclusions must be empty or exactly both theorems")


def _first_diff(got, want, path="") -> str:
    if isinstance(got, dict) and isinstance(want, dict):
        for k in sorted(set(got) | set(want), key=str):
            if got.get(k) != want.get(k):
                return _first_diff(got.get(k), want.get(k), f"{path}.{k}")
    if isinstance(got, list) and isinstance(want, list):
        if len(got) != len(want):
            return f" at {path or '.'} (length {len(got)} != {len(want)})"
        for i, (a, b) in enumerate(zip(got, want)):
            if a != b:
                return _first_diff(a, b, f"{path}[{i}]")
    return f" at {path or '.'}"


def _independent_checks(cert: dict, gens: GeneratorSet, problems: list[str]) -> None:
    """Soundness of every stored witness, without the assembly code."""
    labels = gens.labels
    edges = cert["graph"]["edges"]
    for e in edges:
        u, v, (p, q) = e["u"], e["v"], e["powers"]
        if u not in labels or v not in labels or u == v:
            problems.append(f"edge {u}--{v}: unknown endpoints")
            continue
        if not all(isinstance(x, int) and not isinstance(x, bool) and 1 <= abs(x) <= gens.power_bound for x in (p, q)):
            problems.append(f"edge {u}--{v}: powers outside the bound")
            continue
        if not commutes(power(gens.element(u), p), power(gens.element(v), q)):
            problems.append(f"edge {u}--{v}: powers {p},{q} do not commute")

    witnessed = {}
    for w in cert["infinite_order"]:
        label = w["label"]
        if label not in labels:
            problems.append(f"infinite-order witness for unknown generator {label}")
            continue
        for msg in check_infinite_order(gens.element(label), w):
            problems.append(f"infinite order of {label}: {msg}")
        witnessed[label] = True

    r2 = cert["rank2"]
    if r2 is not None:
        u, v = r2["edge"]
        if u not in labels or v not in labels:
            problems.append("rank-2 edge has unknown endpoints")
        else:
            if not any({e["u"], e["v"]} == {u, v} for e in edges):
                problems.append(f"rank-2 pair {u}--{v} is not an edge")
            for msg in check_rank2(gens.element(u), gens.element(v), r2):
                problems.append(f"rank-2 edge {u}--{v}: {msg}")

    # Connectivity from the stored forest alone.
    removed = set(cert["graph"]["removed"])
    live = [l for l in labels if l not in removed]
    edge_set = {frozenset((e["u"], e["v"])) for e in edges}
    parent = {l: l for l in live}

    def find(a):
        while parent[a] != a:
            a = parent[a]
        return a

    for a, b in cert["graph"]["forest"]:
        if a not in parent or b not in parent or frozenset((a, b)) not in edge_set:
            problems.append(f"forest edge {a}--{b} is not an edge among the remaining vertices")
            continue
        ra, rb = find(a), find(b)
        if ra == rb:
            problems.append(f"forest edge {a}--{b} closes a cycle")
        parent[rb] = ra
    connected = len({find(l) for l in live}) == 1
    claim = next((h for h in cert["hypotheses"] if h["name"] in ("connected", "connected_without_x0_x1")), None)
    if claim is not None and claim["holds"] and not connected:
        problems.append("connectivity claimed but the stored forest does not span")
    inf_claim = next((h for h in cert["hypotheses"] if h["name"] == "infinite_order"), None)
    if inf_claim is not None and inf_claim["holds"] and set(witnessed) != set(labels):
        problems.append("infinite order claimed without a witness for every generator")
