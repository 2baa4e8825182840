"""In-memory reconciliation harness.

``simulate`` runs a full session between two stores with a zero-latency
channel while accounting for every byte exactly as the stream transport
would send it (handshakes, frame headers, payloads, the DONE exchange), so
its numbers can be compared one-to-one against a TCP run.  ``gen_scenario``
produces the named workload shapes used by the benchmark sweeps, and
``bench`` aggregates repeated runs and checks the round and volume bounds.
"""

from __future__ import annotations

import random
import statistics
import time
from dataclasses import dataclass, replace

from .errors import ConfigError
from .protocol import Session, SessionConfig
from .stats import TranscriptStats
from .stores import make_store
from .treap import adversarial_sequence
from .wire import DONE_FRAME, HANDSHAKE_LEN, encode_message

SCENARIO_KINDS = ("random", "worst_rounds", "worst_bytes",
                  "adversarial_treap", "equal", "disjoint")


@dataclass(frozen=True)
class ScenarioSpec:
    kind: str
    n: int
    overlap: float = 0.0
    seed: int = 0
    item_width: int = 32

    def __post_init__(self):
        if self.kind not in SCENARIO_KINDS:
            raise ConfigError(f"unknown scenario kind {self.kind!r}")
        if self.n < 0:
            raise ConfigError("n must be nonnegative")
        if not 0.0 <= self.overlap <= 1.0:
            raise ConfigError("overlap must lie in [0, 1]")
        if self.item_width < 1:
            raise ConfigError("item_width must be positive")


def simulate(items0, items1, config: SessionConfig):
    """Reconcile two item collections in memory.

    Returns (store0, store1, stats) where store0 belonged to the initiator.
    Deterministic for fixed inputs and config.
    """
    start = time.perf_counter()
    store0 = make_store(config.scheme, config.item_width)
    store1 = make_store(config.scheme, config.item_width)
    for item in items0:
        store0.insert(item)
    for item in items1:
        store1.insert(item)
    initiator = Session(store0, config, "initiator")
    responder = Session(store1, config, "responder")
    store0.reset_edge_count()
    store1.reset_edge_count()

    stats = TranscriptStats()
    stats.bytes_from_initiator = HANDSHAKE_LEN
    stats.bytes_from_responder = HANDSHAKE_LEN
    msg = initiator.initiate()
    from_initiator = True
    while True:
        stats.record_message(msg, len(encode_message(msg)), from_initiator)
        receiver = responder if from_initiator else initiator
        reply = receiver.handle_message(msg)
        if reply is None:
            # receiver announces completion; the other side echoes and closes
            done = len(DONE_FRAME)
            if from_initiator:
                stats.bytes_from_responder += done
                stats.messages_from_responder += 1
                stats.bytes_from_initiator += done
                initiator.mark_completed()
            else:
                stats.bytes_from_initiator += done
                stats.messages_from_initiator += 1
                stats.bytes_from_responder += done
                responder.mark_completed()
            break
        msg = reply
        from_initiator = not from_initiator

    stats.edges_traversed = store0.edges_traversed + store1.edges_traversed
    stats.duration = time.perf_counter() - start
    return store0, store1, stats.finalize()


def _draw_items(rng: random.Random, count: int, width: int, taken: set) -> list[bytes]:
    limit = 1 << (8 * width)
    if count > limit - len(taken):
        raise ConfigError(f"cannot draw {count} distinct items of width {width}")
    out = []
    while len(out) < count:
        item = rng.randrange(limit).to_bytes(width, "big")
        if item not in taken:
            taken.add(item)
            out.append(item)
    return out


def gen_scenario(spec: ScenarioSpec) -> tuple[list[bytes], list[bytes]]:
    """Two sorted item lists (initiator side first) for the named workload.

    random: both sides size n sharing overlap*n items.
    worst_rounds: side 1 has n random items, side 0 all but a middle one.
    worst_bytes: side 1 has n random items, side 0 every second of them.
    adversarial_treap: side 0 is the degenerate-treap sequence, side 1
    lacks its middle item.  equal / disjoint: the obvious shapes.
    """
    rng = random.Random(spec.seed)
    n, width = spec.n, spec.item_width
    if spec.kind == "equal":
        items = sorted(_draw_items(rng, n, width, set()))
        return list(items), list(items)
    if spec.kind == "disjoint":
        taken: set = set()
        side0 = sorted(_draw_items(rng, n, width, taken))
        side1 = sorted(_draw_items(rng, n, width, taken))
        return side0, side1
    if spec.kind == "random":
        shared_count = round(spec.overlap * n)
        taken = set()
        shared = _draw_items(rng, shared_count, width, taken)
        only0 = _draw_items(rng, n - shared_count, width, taken)
        only1 = _draw_items(rng, n - shared_count, width, taken)
        return sorted(shared + only0), sorted(shared + only1)
    if spec.kind == "worst_rounds":
        if n < 2:
            raise ConfigError("worst_rounds needs n >= 2")
        side1 = sorted(_draw_items(rng, n, width, set()))
        side0 = side1[:n // 2] + side1[n // 2 + 1:]
        return side0, side1
    if spec.kind == "worst_bytes":
        if n < 2:
            raise ConfigError("worst_bytes needs n >= 2")
        side1 = sorted(_draw_items(rng, n, width, set()))
        return side1[::2], side1
    if spec.kind == "adversarial_treap":
        if n < 2:
            raise ConfigError("adversarial_treap needs n >= 2")
        side0 = adversarial_sequence(n, spec.seed, width)
        side1 = side0[:n // 2] + side0[n // 2 + 1:]
        return side0, side1
    raise ConfigError(f"unknown scenario kind {spec.kind!r}")


def round_bound(n_min: int, branching: int, threshold: int) -> int:
    """Maximum messages_total for a session where the smaller side holds
    n_min items: 3 + 2*ceil(log_b(n_min)) - floor(log_b(t))."""
    if n_min < 1:
        raise ValueError("n_min must be at least 1")
    height = 0
    cap = 1
    while cap < n_min:
        cap *= branching
        height += 1
    settled = 0
    cap = branching
    while cap <= threshold:
        cap *= branching
        settled += 1
    return 3 + 2 * height - settled


def volume_bound(n_delta: int, union_size: int, factor: int = 8) -> int:
    """Transmitted-item allowance: factor * min(n_delta * log2(union), union)."""
    if union_size < 2:
        return factor
    log = max((union_size - 1).bit_length(), 1)
    return factor * min(max(n_delta, 1) * log, union_size)


def bench(spec: ScenarioSpec, config: SessionConfig, repetitions: int = 5,
          volume_factor: int = 8) -> dict:
    """Run the scenario ``repetitions`` times on shifted seeds; report median
    stats plus pass/fail verdicts for correctness and the two bounds."""
    if repetitions < 1:
        raise ValueError("repetitions must be at least 1")
    numeric = ("messages_total", "parts_fingerprint", "parts_itemset",
               "items_transmitted", "bytes_from_initiator", "bytes_from_responder",
               "max_parts_in_message", "edges_traversed", "duration")
    samples: dict[str, list] = {name: [] for name in numeric}
    all_correct = True
    round_ok = True
    volume_ok = True
    for i in range(repetitions):
        shifted_spec = replace(spec, seed=spec.seed + i)
        shifted_config = replace(config, seed=config.seed + i)
        side0, side1 = gen_scenario(shifted_spec)
        union = sorted(set(side0) | set(side1))
        n_delta = len(set(side0) ^ set(side1))
        store0, store1, stats = simulate(side0, side1, shifted_config)
        if store0.items() != union or store1.items() != union:
            all_correct = False
        n_min = min(len(side0), len(side1))
        if n_min >= 1 and stats.messages_total > round_bound(
                n_min, config.branching, config.threshold):
            round_ok = False
        if stats.items_transmitted > volume_bound(n_delta, len(union), volume_factor):
            volume_ok = False
        for name in numeric:
            samples[name].append(getattr(stats, name))
    report = {
        "stats_version": 1,
        "kind": spec.kind,
        "n": spec.n,
        "overlap": spec.overlap,
        "scheme": config.scheme,
        "branching": config.branching,
        "threshold": config.threshold,
        "split_strategy": config.split_strategy,
        "repetitions": repetitions,
        "all_correct": all_correct,
        "round_bound_ok": round_ok,
        "volume_bound_ok": volume_ok,
    }
    for name in numeric:
        report[f"median_{name}"] = statistics.median(samples[name])
    return report
