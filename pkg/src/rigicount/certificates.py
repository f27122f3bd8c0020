"""Machine-checkable certificates for divisibility laws and count bounds.

Each checker computes realisation counts with recorded seeds and emits a
:class:`Certificate` whose evidence suffices to recompute the verdict
bit-for-bit.  Because the underlying laws are proven, a refutation is first
treated as an engine-reliability event: the checker re-runs with fresh
seeds before reporting ``refuted``.
"""

from __future__ import annotations

import hashlib
from dataclasses import asdict, dataclass
from typing import Mapping, Sequence

from .config import RunConfig
from .engine import CountDisagreement, CountResult, count_complex
from .graphs import Graph, Triangulation, graph_from_json, graph_to_json, serialize_graph, triangulation_graph
from .operations import ConstructionStep, apply_step, steinitz_contract
from .rigidity import is_d_rigid, is_minimally_d_rigid, spanning_minimally_rigid_subgraph

SCHEMA = "rigicount.certificate/1"


class HypothesisNotEstablished(RuntimeError):
    """The checker could not establish the hypotheses its law requires."""


@dataclass(frozen=True)
class Certificate:
    kind: str
    d: int
    inputs: Mapping
    config: Mapping
    evidence: Mapping
    verdict: str  # verified | refuted | unreliable

    def to_json(self) -> dict:
        return {
            "schema": SCHEMA,
            "kind": self.kind,
            "d": self.d,
            "inputs": dict(self.inputs),
            "config": dict(self.config),
            "evidence": dict(self.evidence),
            "verdict": self.verdict,
        }

    @classmethod
    def from_json(cls, doc: Mapping) -> "Certificate":
        if doc.get("schema") != SCHEMA:
            raise ValueError(f"unknown certificate schema {doc.get('schema')!r}")
        return cls(
            kind=doc["kind"],
            d=int(doc["d"]),
            inputs=doc["inputs"],
            config=doc["config"],
            evidence=doc["evidence"],
            verdict=doc["verdict"],
        )


def graph_hash(g: Graph) -> str:
    return hashlib.sha256(serialize_graph(g).encode()).hexdigest()


def _config_json(cfg: RunConfig) -> dict:
    doc = asdict(cfg)
    doc.pop("out", None)
    return doc


def config_from_json(doc: Mapping) -> RunConfig:
    known = {f for f in RunConfig.__dataclass_fields__}
    return RunConfig(**{k: v for k, v in doc.items() if k in known})


def _graph_input(g: Graph) -> dict:
    doc = graph_to_json(g)
    doc["hash"] = graph_hash(g)
    return doc


def prime_factors(n: int) -> list[int]:
    """Prime factorization with multiplicity by trial division."""
    if n < 1:
        raise ValueError("factorization needs a positive integer")
    out = []
    p = 2
    while p * p <= n:
        while n % p == 0:
            out.append(p)
            n //= p
        p += 1 if p == 2 else 2
    if n > 1:
        out.append(n)
    return out


@dataclass(frozen=True)
class PrimeFactorBudget:
    """A count with its prime factorization; the factor count bounds how many
    edges a greedy augmentation may add before reaching global rigidity."""

    c: int
    factorization: tuple[int, ...]

    def __post_init__(self) -> None:
        prod = 1
        for p in self.factorization:
            prod *= p
        if prod != self.c:
            raise ValueError(f"factorization {self.factorization} does not multiply to {self.c}")

    @property
    def k(self) -> int:
        return len(self.factorization)

    @classmethod
    def of(cls, c: int) -> "PrimeFactorBudget":
        return cls(c, tuple(prime_factors(c)) if c > 1 else ())


def _count_with_retry(g: Graph, d: int, cfg: RunConfig, bump: int = 0) -> CountResult:
    return count_complex(g, d, cfg if bump == 0 else cfg.with_(seed=cfg.seed + bump))


def _relabel_to_standalone(vertices: Sequence[int], edges) -> Graph:
    index = {v: i for i, v in enumerate(sorted(set(vertices)))}
    return Graph.from_edges(len(index), [(index[u], index[v]) for u, v in edges])


# ---------------------------------------------------------------------------
# checkers
# ---------------------------------------------------------------------------


def check_spanning_divisibility(
    g: Graph, h: Graph, d: int, config: RunConfig | None = None
) -> Certificate:
    """The count of a rigid graph divides the count of any rigid spanning
    subgraph; verify on an engine-computed pair."""
    cfg = config or RunConfig()
    if h.n != g.n or not set(h.edges) <= set(g.edges):
        raise ValueError("second graph must be a spanning subgraph of the first")
    for name, graph in (("graph", g), ("spanning subgraph", h)):
        rigid, _ = is_d_rigid(graph, d, cfg.seed)
        if not rigid:
            raise HypothesisNotEstablished(f"{name} is not {d}-rigid")

    inputs = {"graph": _graph_input(g), "subgraph": _graph_input(h)}
    for bump in (0, 0x5EED):
        try:
            cg = _count_with_retry(g, d, cfg, bump)
            ch = _count_with_retry(h, d, cfg, bump)
        except CountDisagreement as exc:
            return Certificate(
                "spanning-divisibility", d, inputs, _config_json(cfg),
                {"error": str(exc)}, "unreliable",
            )
        evidence = {"count_graph": cg.to_json(), "count_subgraph": ch.to_json(), "seed_bump": bump}
        if ch.c % cg.c == 0:
            return Certificate(
                "spanning-divisibility", d, inputs, _config_json(cfg), evidence, "verified"
            )
    return Certificate(
        "spanning-divisibility", d, inputs, _config_json(cfg), evidence, "refuted"
    )


def _establish_exchange(
    g: Graph, h_vertices: Sequence[int], h_edges, d: int, cfg: RunConfig, restarts: int = 8
) -> tuple[Graph, list]:
    """Greedy search for the subgraph-exchange hypothesis.

    Looks for a minimally rigid spanning subgraph of the small graph whose
    edges can replace the subgraph's edges inside the host while keeping the
    host minimally rigid; greedy with restarts, not exhaustive.  Returns the
    standalone subgraph and the exchanged edge set (in host labels).
    """
    h_vertices = sorted(set(int(v) for v in h_vertices))
    h_edge_set = {tuple(sorted((int(a), int(b)))) for a, b in h_edges}
    if not h_edge_set <= set(g.edges):
        raise ValueError("subgraph edges must be edges of the host")
    h_standalone = _relabel_to_standalone(h_vertices, h_edge_set)
    back = dict(enumerate(h_vertices))

    rigid_h, _ = is_d_rigid(h_standalone, d, cfg.seed)
    rigid_g, _ = is_d_rigid(g, d, cfg.seed)
    if not (rigid_g and rigid_h and g.n >= d + 1 and h_standalone.n >= d + 1):
        raise HypothesisNotEstablished("both graphs must be d-rigid on at least d+1 vertices")

    for r in range(restarts):
        tilde = spanning_minimally_rigid_subgraph(h_standalone, d, cfg.seed + 31 * r)
        tilde_edges = {tuple(sorted((back[u], back[v]))) for u, v in tilde.edges}
        candidate = Graph.from_edges(
            g.n, sorted((set(g.edges) - h_edge_set) | tilde_edges)
        )
        if is_minimally_d_rigid(candidate, d, cfg.seed):
            return h_standalone, sorted(tilde_edges)
    raise HypothesisNotEstablished(
        f"no exchange subgraph found after {restarts} greedy restarts"
    )


def check_subgraph_divisibility(
    g: Graph,
    h_vertices: Sequence[int],
    h_edges: Sequence[Sequence[int]],
    d: int,
    config: RunConfig | None = None,
    restarts: int = 8,
) -> Certificate:
    """Divisibility of the host count by a (not necessarily spanning) rigid
    subgraph's count, under the exchange hypothesis."""
    cfg = config or RunConfig()
    h_vertices = sorted(set(int(v) for v in h_vertices))
    h_edge_set = {tuple(sorted((int(a), int(b)))) for a, b in h_edges}
    h_standalone, exchange = _establish_exchange(g, h_vertices, h_edge_set, d, cfg, restarts)

    inputs = {
        "graph": _graph_input(g),
        "subgraph_vertices": h_vertices,
        "subgraph_edges": sorted(h_edge_set),
    }
    for bump in (0, 0x5EED):
        try:
            cg = _count_with_retry(g, d, cfg, bump)
            ch = _count_with_retry(h_standalone, d, cfg, bump)
        except CountDisagreement as exc:
            return Certificate(
                "subgraph-divisibility", d, inputs, _config_json(cfg),
                {"error": str(exc), "exchange_edges": exchange}, "unreliable",
            )
        evidence = {
            "count_graph": cg.to_json(),
            "count_subgraph": ch.to_json(),
            "exchange_edges": exchange,
            "seed_bump": bump,
        }
        if cg.c % ch.c == 0:
            return Certificate(
                "subgraph-divisibility", d, inputs, _config_json(cfg), evidence, "verified"
            )
    return Certificate(
        "subgraph-divisibility", d, inputs, _config_json(cfg), evidence, "refuted"
    )


def check_edge_addition_drop(
    g: Graph, edge: Sequence[int], d: int, config: RunConfig | None = None
) -> Certificate:
    """Adding an edge either keeps the count or at least halves it."""
    cfg = config or RunConfig()
    u, v = int(edge[0]), int(edge[1])
    if g.has_edge(u, v):
        raise ValueError(f"({u}, {v}) is already an edge")
    rigid, _ = is_d_rigid(g, d, cfg.seed)
    if not rigid:
        raise HypothesisNotEstablished(f"graph is not {d}-rigid")
    augmented = g.with_edge(u, v)
    inputs = {"graph": _graph_input(g), "edge": [min(u, v), max(u, v)]}
    for bump in (0, 0x5EED):
        try:
            before = _count_with_retry(g, d, cfg, bump)
            after = _count_with_retry(augmented, d, cfg, bump)
        except CountDisagreement as exc:
            return Certificate(
                "edge-addition-halving", d, inputs, _config_json(cfg),
                {"error": str(exc)}, "unreliable",
            )
        dropped = after.c < before.c
        evidence = {
            "count_before": before.to_json(),
            "count_after": after.to_json(),
            "dropped": dropped,
            "seed_bump": bump,
        }
        if not dropped and after.c == before.c:
            return Certificate(
                "edge-addition-halving", d, inputs, _config_json(cfg), evidence, "verified"
            )
        if dropped and 2 * after.c <= before.c:
            return Certificate(
                "edge-addition-halving", d, inputs, _config_json(cfg), evidence, "verified"
            )
    return Certificate(
        "edge-addition-halving", d, inputs, _config_json(cfg), evidence, "refuted"
    )


def greedy_augment(
    g: Graph, d: int, budget: int | None = None, config: RunConfig | None = None
) -> Certificate:
    """Augment to a globally rigid graph with at most as many edges as the
    count has prime factors.

    Scans non-edges in sorted order and adds the first whose addition
    strictly drops the count; each drop divides the count, so the prime
    factor count k bounds the number of additions needed.
    """
    cfg = config or RunConfig()
    rigid, _ = is_d_rigid(g, d, cfg.seed)
    if not rigid:
        raise HypothesisNotEstablished(f"graph is not {d}-rigid")
    start = count_complex(g, d, cfg)
    bound = PrimeFactorBudget.of(start.c)
    k = bound.k
    limit = k if budget is None else int(budget)

    current = g
    count_now = start
    added: list[list[int]] = []
    trace = [start.to_json()]
    while count_now.c > 1 and len(added) < limit:
        found = None
        for e in current.non_edges():
            trial = count_complex(current.with_edge(*e), d, cfg)
            if trial.c < count_now.c:
                found = (e, trial)
                break
        if found is None:
            break
        e, count_now = found
        current = current.with_edge(*e)
        added.append([e[0], e[1]])
        trace.append(count_now.to_json())

    inputs = {"graph": _graph_input(g), "budget": limit}
    evidence = {
        "initial_count": start.c,
        "prime_factors": list(bound.factorization),
        "added_edges": added,
        "counts": trace,
        "final_count": count_now.c,
    }
    if count_now.c == 1 and len(added) <= k:
        verdict = "verified"
    elif count_now.c > 1 and len(added) >= limit:
        verdict = "unreliable"  # budget exhausted before reaching count 1
    else:
        verdict = "refuted"
    return Certificate("global-rigidity-augmentation", d, inputs, _config_json(cfg), evidence, verdict)


def certify_sphere_bound(
    t: Triangulation, config: RunConfig | None = None, count_max_equations: int = 12
) -> Certificate:
    """Contraction sequence and the 2^(n-4) lower bound for a triangulated
    sphere; the skeleton count is computed when the system is small enough."""
    cfg = config or RunConfig()
    seq = steinitz_contract(t)
    skeleton = triangulation_graph(t)
    bound = 2 ** (t.n - 4)
    inputs = {"triangulation": {"n": t.n, "faces": [list(f) for f in t.faces]}}
    evidence: dict = {
        "sequence": seq.to_json(),
        "sequence_length": len(seq.steps),
        "bound": bound,
    }
    verdict = "verified" if len(seq.steps) == t.n - 4 else "refuted"
    if verdict == "verified" and 3 * t.n - 6 <= count_max_equations:
        try:
            cnt = count_complex(skeleton, 3, cfg)
        except CountDisagreement as exc:
            evidence["count_error"] = str(exc)
            return Certificate("sphere-lower-bound", 3, inputs, _config_json(cfg), evidence, "unreliable")
        evidence["count"] = cnt.to_json()
        if cnt.c < bound:
            verdict = "refuted"
    return Certificate("sphere-lower-bound", 3, inputs, _config_json(cfg), evidence, verdict)


def _establish_operation_hypotheses(
    step: ConstructionStep, g_before: Graph, g_after: Graph, d: int, cfg: RunConfig
) -> None:
    kind = step.kind
    effect = tuple(step.predicted_effect)
    if effect[0] == "none":
        raise HypothesisNotEstablished(f"no predicted effect for step kind {kind!r}")
    if kind == "zero_extension":
        rigid, _ = is_d_rigid(g_before, d, cfg.seed)
        if not (rigid and g_before.n >= d + 1):
            raise HypothesisNotEstablished("0-extension law needs a d-rigid base on >= d+1 vertices")
    elif kind in ("one_extension", "vertex_split", "spider_split"):
        if not is_minimally_d_rigid(g_before, d, cfg.seed):
            raise HypothesisNotEstablished(f"{kind} law needs a minimally d-rigid base")
    elif kind in ("x_replacement", "v_replacement"):
        if d != 3:
            raise HypothesisNotEstablished("X/V replacement law is three-dimensional")
        if not is_minimally_d_rigid(g_before, d, cfg.seed):
            raise HypothesisNotEstablished("X/V replacement law needs a minimally 3-rigid base")
        if not is_minimally_d_rigid(g_after, d, cfg.seed):
            raise HypothesisNotEstablished("X/V replacement law needs a minimally 3-rigid output")
    elif kind == "subgraph_substitution":
        _establish_exchange(g_before, step.params["h_vertices"], step.params["h_edges"], d, cfg)
        replacement = step.predicted_effect[2]
        if not isinstance(replacement, Graph):
            replacement = graph_from_json(replacement)
        rigid, _ = is_d_rigid(replacement, d, cfg.seed)
        if not rigid:
            raise HypothesisNotEstablished("replacement subgraph must be d-rigid")
    else:
        raise HypothesisNotEstablished(f"unknown step kind {kind!r}")


def verify_operation_effect(
    step: ConstructionStep,
    g_before: Graph,
    g_after: Graph,
    d: int,
    config: RunConfig | None = None,
) -> Certificate:
    """Confirm a recorded operation's predicted effect with engine counts."""
    cfg = config or RunConfig()
    replayed = apply_step(g_before, step)
    if replayed != g_after:
        raise ValueError("step does not transform the first graph into the second")
    _establish_operation_hypotheses(step, g_before, g_after, d, cfg)

    effect = tuple(step.predicted_effect)
    inputs = {
        "before": _graph_input(g_before),
        "after": _graph_input(g_after),
        "step": step.to_json(),
    }
    for bump in (0, 0x5EED):
        try:
            before = _count_with_retry(g_before, d, cfg, bump)
            after = _count_with_retry(g_after, d, cfg, bump)
            evidence = {
                "count_before": before.to_json(),
                "count_after": after.to_json(),
                "seed_bump": bump,
            }
            if effect[0] == "exact_factor":
                ok = after.c == int(effect[1]) * before.c
            elif effect[0] == "lower_bound_factor":
                ok = after.c >= int(effect[1]) * before.c
            elif effect[0] == "exact_ratio":
                h_doc, hp_doc = effect[1], effect[2]
                h_graph = h_doc if isinstance(h_doc, Graph) else graph_from_json(h_doc)
                hp_graph = hp_doc if isinstance(hp_doc, Graph) else graph_from_json(hp_doc)
                ch = _count_with_retry(h_graph, d, cfg, bump)
                chp = _count_with_retry(hp_graph, d, cfg, bump)
                evidence["count_subgraph"] = ch.to_json()
                evidence["count_replacement"] = chp.to_json()
                ok = after.c * ch.c == before.c * chp.c
            else:
                raise HypothesisNotEstablished(f"unknown effect {effect!r}")
        except CountDisagreement as exc:
            return Certificate(
                "operation-effect", d, inputs, _config_json(cfg), {"error": str(exc)}, "unreliable"
            )
        if ok:
            return Certificate("operation-effect", d, inputs, _config_json(cfg), evidence, "verified")
    return Certificate("operation-effect", d, inputs, _config_json(cfg), evidence, "refuted")


# ---------------------------------------------------------------------------
# end-to-end recheck
# ---------------------------------------------------------------------------


def verify_certificate(doc: Mapping) -> Certificate:
    """Recompute a certificate from its recorded inputs and configuration.

    Returns the freshly computed certificate; the caller compares verdicts.
    """
    cert = Certificate.from_json(doc) if not isinstance(doc, Certificate) else doc
    cfg = config_from_json(cert.config)
    kind = cert.kind
    if kind == "spanning-divisibility":
        return check_spanning_divisibility(
            graph_from_json(cert.inputs["graph"]),
            graph_from_json(cert.inputs["subgraph"]),
            cert.d,
            cfg,
        )
    if kind == "subgraph-divisibility":
        return check_subgraph_divisibility(
            graph_from_json(cert.inputs["graph"]),
            cert.inputs["subgraph_vertices"],
            cert.inputs["subgraph_edges"],
            cert.d,
            cfg,
        )
    if kind == "edge-addition-halving":
        return check_edge_addition_drop(
            graph_from_json(cert.inputs["graph"]), cert.inputs["edge"], cert.d, cfg
        )
    if kind == "global-rigidity-augmentation":
        return greedy_augment(
            graph_from_json(cert.inputs["graph"]), cert.d, cert.inputs.get("budget"), cfg
        )
    if kind == "sphere-lower-bound":
        tri = cert.inputs["triangulation"]
        t = Triangulation(int(tri["n"]), tuple(tuple(int(v) for v in f) for f in tri["faces"]))
        return certify_sphere_bound(t, cfg)
    if kind == "operation-effect":
        sdoc = cert.inputs["step"]
        step = ConstructionStep(sdoc["kind"], sdoc["params"], tuple(sdoc["predicted_effect"]))
        return verify_operation_effect(
            step,
            graph_from_json(cert.inputs["before"]),
            graph_from_json(cert.inputs["after"]),
            cert.d,
            cfg,
        )
    raise ValueError(f"unknown certificate kind {kind!r}")
