"""Fabric topologies, hop metrics, and fault-domain analysis.

Two forms are supported: the classic 3-tier design (core / distribution /
access, at most two interconnected cores) and the 2-layer spine-leaf fabric
(complete bipartite, no spine-spine or leaf-leaf links).  Hosts attach to
access or leaf devices.  Failures remove whole devices; ``affected_fraction``
measures the share of host pairs that lose connectivity, and
``failure_harm_mc`` feeds that fraction into the harm transform.

Topologies serialize to a line-oriented text format (version header
``topology/1``)::

    topology/1
    <id> <role> [<tag>]      one line per device
    <id> -- <id>             one line per link
    host <id> @ <device>     one line per attached host
    host <id> detached       one line per detached host

Device roles are core, distribution, access, spine, leaf; only leaves may
carry a function tag (data-center, border, dmz, sdn, campus).  Ids match
``[A-Za-z0-9_.-]+`` and may not be the reserved word ``host``.  Parsing the
emitted form reproduces the topology exactly.
"""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .harm import HarmParams, harm

ROLES = ("core", "distribution", "access", "spine", "leaf")
LEAF_TAGS = ("data-center", "border", "dmz", "sdn", "campus")
TIER_ROLES = frozenset({"core", "distribution", "access"})
FABRIC_ROLES = frozenset({"spine", "leaf"})
HOST_ROLES = frozenset({"access", "leaf"})

#: hop_histogram bucket for host pairs with no path between their devices
UNREACHABLE = -1

FORMAT_HEADER = "topology/1"

_ID_RE = re.compile(r"^[A-Za-z0-9_.-]+$")

_TIER_LINK_ROLES = frozenset(
    {
        frozenset({"core"}),  # core -- core
        frozenset({"core", "distribution"}),
        frozenset({"distribution", "access"}),
    }
)


@dataclass(frozen=True)
class Device:
    """A switch with a role; leaves may carry a descriptive function tag."""

    id: str
    role: str
    tag: str | None = None

    def __post_init__(self):
        if not _ID_RE.match(self.id) or self.id == "host":
            raise ValueError(f"invalid device id {self.id!r}")
        if self.role not in ROLES:
            raise ValueError(f"unknown role {self.role!r}; expected one of {ROLES}")
        if self.tag is not None:
            if self.role != "leaf":
                raise ValueError(f"only leaf devices may carry a tag, got {self.role!r}")
            if self.tag not in LEAF_TAGS:
                raise ValueError(f"unknown leaf tag {self.tag!r}; expected one of {LEAF_TAGS}")


@dataclass(frozen=True)
class Topology:
    """Immutable device/link graph with attached hosts.

    Construction canonicalizes ordering (devices by id, links as sorted
    pairs) and validates the form invariants, so equal topologies compare
    equal regardless of input order.
    """

    devices: tuple[Device, ...]
    links: tuple[tuple[str, str], ...]
    hosts: tuple[tuple[str, str], ...]
    detached_hosts: tuple[str, ...] = ()

    def __post_init__(self):
        devices = tuple(sorted(self.devices, key=lambda d: d.id))
        links = tuple(sorted(tuple(sorted(pair)) for pair in self.links))
        hosts = tuple(sorted((str(h), str(d)) for h, d in self.hosts))
        detached = tuple(sorted(str(h) for h in self.detached_hosts))
        object.__setattr__(self, "devices", devices)
        object.__setattr__(self, "links", links)
        object.__setattr__(self, "hosts", hosts)
        object.__setattr__(self, "detached_hosts", detached)
        self._validate()

    def _validate(self) -> None:
        ids = [d.id for d in self.devices]
        by_id = dict(zip(ids, self.devices))
        if len(by_id) != len(ids):
            raise ValueError("duplicate device ids")

        roles = {d.role for d in self.devices}
        if roles & TIER_ROLES and roles & FABRIC_ROLES:
            raise ValueError("cannot mix 3-tier roles with spine/leaf roles in one topology")

        seen = set()
        for a, b in self.links:
            if a == b:
                raise ValueError(f"self-link on {a!r}")
            if (a, b) in seen:
                raise ValueError(f"duplicate link {a!r} -- {b!r}")
            seen.add((a, b))
            for end in (a, b):
                if end not in by_id:
                    raise ValueError(f"link references unknown device {end!r}")
            pair = frozenset({by_id[a].role, by_id[b].role})
            if roles & FABRIC_ROLES:
                if pair != frozenset({"spine", "leaf"}):
                    raise ValueError(f"spine-leaf form allows only spine--leaf links, got {a!r} -- {b!r}")
            elif pair not in _TIER_LINK_ROLES:
                raise ValueError(f"3-tier form forbids link {a!r} -- {b!r} ({sorted(pair)})")

        cores = [d for d in self.devices if d.role == "core"]
        if len(cores) > 2:
            raise ValueError("a 3-tier design cannot have more than 2 core switches")
        if len(cores) == 2:
            pair = tuple(sorted(c.id for c in cores))
            if pair not in seen:
                raise ValueError("two cores must be linked to each other")

        host_ids = set()
        for h, dev in self.hosts:
            if not _ID_RE.match(h) or h == "host":
                raise ValueError(f"invalid host id {h!r}")
            if h in host_ids:
                raise ValueError(f"duplicate host id {h!r}")
            host_ids.add(h)
            if dev not in by_id:
                raise ValueError(f"host {h!r} attached to unknown device {dev!r}")
            if by_id[dev].role not in HOST_ROLES:
                raise ValueError(f"host {h!r} must attach to an access or leaf device, not {by_id[dev].role!r}")
        for h in self.detached_hosts:
            if not _ID_RE.match(h) or h == "host":
                raise ValueError(f"invalid host id {h!r}")
            if h in host_ids:
                raise ValueError(f"host {h!r} is both attached and detached")
            host_ids.add(h)

    @cached_property
    def device_ids(self) -> frozenset[str]:
        return frozenset(d.id for d in self.devices)

    @cached_property
    def host_attachment(self) -> dict[str, str]:
        return dict(self.hosts)

    @cached_property
    def all_host_ids(self) -> tuple[str, ...]:
        return tuple(sorted([h for h, _ in self.hosts] + list(self.detached_hosts)))

    def adjacency(self) -> dict[str, set[str]]:
        adj: dict[str, set[str]] = {d.id: set() for d in self.devices}
        for a, b in self.links:
            adj[a].add(b)
            adj[b].add(a)
        return adj


def build_three_tier(
    cores: int,
    distributions: int,
    access_per_distribution: int,
    hosts_per_access: int,
    dual_homed: bool = False,
) -> Topology:
    """Classic 3-tier fabric: cores on top, then distribution, then access.

    Every distribution links to every core; with two cores the mandatory
    core-core link is added.  Each access device homes to one distribution
    (or to two adjacent ones with ``dual_homed``), and carries
    ``hosts_per_access`` hosts.  At most two cores are allowed.
    """
    if cores not in (1, 2):
        raise ValueError(
            f"a 3-tier design cannot have more than 2 core switches (and needs at least 1), got {cores}"
        )
    if distributions < 1 or access_per_distribution < 1 or hosts_per_access < 1:
        raise ValueError("distributions, access_per_distribution, hosts_per_access must all be >= 1")

    devices = [Device(f"core{i}", "core") for i in range(cores)]
    devices += [Device(f"dist{j}", "distribution") for j in range(distributions)]
    links = []
    if cores == 2:
        links.append(("core0", "core1"))
    for j in range(distributions):
        for i in range(cores):
            links.append((f"core{i}", f"dist{j}"))

    hosts = []
    host_n = 0
    acc_n = 0
    for j in range(distributions):
        for _ in range(access_per_distribution):
            acc = f"acc{acc_n}"
            devices.append(Device(acc, "access"))
            links.append((f"dist{j}", acc))
            if dual_homed and distributions >= 2:
                links.append((f"dist{(j + 1) % distributions}", acc))
            for _ in range(hosts_per_access):
                hosts.append((f"h{host_n}", acc))
                host_n += 1
            acc_n += 1
    return Topology(tuple(devices), tuple(links), tuple(hosts))


def build_spine_leaf(
    spines: int,
    leaves: int,
    hosts_per_leaf: int,
    leaf_tags: tuple[str | None, ...] | None = None,
) -> Topology:
    """2-layer fabric: every spine links to every leaf and to nothing else.

    Hosts attach ``hosts_per_leaf`` per leaf.  ``leaf_tags`` optionally labels
    leaves by function (data-center, border, dmz, sdn, campus).
    """
    if spines < 1 or leaves < 1 or hosts_per_leaf < 1:
        raise ValueError("spines, leaves, hosts_per_leaf must all be >= 1")
    if leaf_tags is not None and len(leaf_tags) > leaves:
        raise ValueError("more leaf tags than leaves")

    devices = [Device(f"spine{i}", "spine") for i in range(spines)]
    for j in range(leaves):
        tag = leaf_tags[j] if leaf_tags is not None and j < len(leaf_tags) else None
        devices.append(Device(f"leaf{j}", "leaf", tag))
    links = [(f"spine{i}", f"leaf{j}") for i in range(spines) for j in range(leaves)]
    hosts = []
    host_n = 0
    for j in range(leaves):
        for _ in range(hosts_per_leaf):
            hosts.append((f"h{host_n}", f"leaf{j}"))
            host_n += 1
    return Topology(tuple(devices), tuple(links), tuple(hosts))


def _bfs_distances(adj: dict[str, set[str]], source: str) -> dict[str, int]:
    dist = {source: 0}
    queue = deque([source])
    while queue:
        node = queue.popleft()
        for nbr in adj[node]:
            if nbr not in dist:
                dist[nbr] = dist[node] + 1
                queue.append(nbr)
    return dist


def hop_histogram(t: Topology) -> dict[int, int]:
    """Histogram of shortest device-hop counts over all unordered host pairs.

    Hosts on the same device count as 0 hops.  Pairs with no path (including
    pairs involving detached hosts) land in the ``UNREACHABLE`` (-1) bucket.
    """
    adj = t.adjacency()
    attach = t.host_attachment
    sources = sorted(set(attach.values()))
    dist_from = {s: _bfs_distances(adj, s) for s in sources}

    histogram: dict[int, int] = {}
    host_ids = t.all_host_ids
    for i in range(len(host_ids)):
        for j in range(i + 1, len(host_ids)):
            a, b = host_ids[i], host_ids[j]
            if a not in attach or b not in attach:
                hops = UNREACHABLE
            else:
                hops = dist_from[attach[a]].get(attach[b], UNREACHABLE)
            histogram[hops] = histogram.get(hops, 0) + 1
    return histogram


def inject_failures(t: Topology, failed: set[str]) -> Topology:
    """Topology after the given devices melt down.

    Failed devices and their incident links are removed; hosts attached to
    them are marked detached.  Raises on ids not present in the topology.
    """
    failed = set(failed)
    unknown = failed - t.device_ids
    if unknown:
        raise ValueError(f"unknown device ids: {sorted(unknown)}")
    devices = tuple(d for d in t.devices if d.id not in failed)
    links = tuple((a, b) for a, b in t.links if a not in failed and b not in failed)
    hosts = tuple((h, d) for h, d in t.hosts if d not in failed)
    detached = tuple(t.detached_hosts) + tuple(h for h, d in t.hosts if d in failed)
    return Topology(devices, links, hosts, detached)


def _connected_pairs(t: Topology, failed: set[str]) -> int:
    """Number of host pairs that can still communicate after the failures."""
    surviving = t.device_ids - failed
    adj = {d: set() for d in surviving}
    for a, b in t.links:
        if a in surviving and b in surviving:
            adj[a].add(b)
            adj[b].add(a)

    component: dict[str, int] = {}
    label = 0
    for node in adj:
        if node in component:
            continue
        component[node] = label
        queue = deque([node])
        while queue:
            cur = queue.popleft()
            for nbr in adj[cur]:
                if nbr not in component:
                    component[nbr] = label
                    queue.append(nbr)
        label += 1

    per_component: dict[int, int] = {}
    for _, dev in t.hosts:
        if dev in surviving:
            c = component[dev]
            per_component[c] = per_component.get(c, 0) + 1
    return sum(n * (n - 1) // 2 for n in per_component.values())


def affected_fraction(t: Topology, failed: set[str]) -> float:
    """Fraction of host pairs of ``t`` that cannot communicate after failures.

    Counted over all pairs of the intact topology; pairs involving a host
    whose device failed (or was already detached) count as disconnected.
    Topologies with fewer than two hosts have no pairs and yield 0.
    """
    failed = set(failed)
    unknown = failed - t.device_ids
    if unknown:
        raise ValueError(f"unknown device ids: {sorted(unknown)}")
    n_hosts = len(t.all_host_ids)
    total = n_hosts * (n_hosts - 1) // 2
    if total == 0:
        return 0.0
    return (total - _connected_pairs(t, failed)) / total


@dataclass(frozen=True)
class FailureModel:
    """Per-trial, per-device failure probability by role; missing roles fail with 0."""

    probabilities: dict[str, float] = field(default_factory=dict)

    def __post_init__(self):
        for role, prob in self.probabilities.items():
            if role not in ROLES:
                raise ValueError(f"unknown role {role!r} in failure model")
            if not 0.0 <= prob <= 1.0:
                raise ValueError(f"failure probability for {role!r} must be in [0, 1], got {prob}")

    @classmethod
    def uniform(cls, probability: float) -> "FailureModel":
        return cls({role: probability for role in ROLES})

    def probability(self, role: str) -> float:
        return self.probabilities.get(role, 0.0)


@dataclass(frozen=True)
class FailureHarmStats:
    """Sample mean and severity quantiles of harm over Monte Carlo trials.

    Quantiles are by severity: p99 is the harm value whose magnitude is
    exceeded in only 1% of trials (harm is nonpositive, worse = more
    negative).
    """

    expected_harm: float
    quantiles: dict[str, float]


def failure_harm_mc(
    t: Topology, fm: FailureModel, h: HarmParams, trials: int, seed: int
) -> FailureHarmStats:
    """Monte Carlo expected harm of random device failures.

    Each trial fails every device independently with its role's probability,
    measures the affected fraction of host pairs, and applies the harm
    transform to it.  Returns the sample mean and the p50/p90/p99 severity
    quantiles.  Deterministic per seed.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    ids = [d.id for d in t.devices]
    probs = np.array([fm.probability(d.role) for d in t.devices])
    rng = np.random.default_rng(seed)

    chunk = max(1, int(2e7) // max(1, len(ids)))
    harm_cache: dict[bytes, float] = {}
    samples = np.empty(trials)
    done = 0
    while done < trials:
        n = min(chunk, trials - done)
        fails = rng.random((n, len(ids))) < probs
        patterns, inverse = np.unique(fails, axis=0, return_inverse=True)
        values = np.empty(len(patterns))
        for idx, row in enumerate(patterns):
            key = row.tobytes()
            if key not in harm_cache:
                failed = {ids[i] for i in np.flatnonzero(row)}
                harm_cache[key] = harm(h, affected_fraction(t, failed))
            values[idx] = harm_cache[key]
        samples[done : done + n] = values[inverse]
        done += n

    # severity quantiles: the q-th worst harm sits at the (1-q) quantile of
    # the signed (nonpositive) values
    q50, q90, q99 = np.quantile(samples, [0.5, 0.1, 0.01])
    return FailureHarmStats(
        expected_harm=float(samples.mean()),
        quantiles={"p50": float(q50), "p90": float(q90), "p99": float(q99)},
    )


def serialize_topology(t: Topology) -> str:
    """Canonical text form (see module docstring); byte-deterministic."""
    lines = [FORMAT_HEADER]
    for d in t.devices:
        lines.append(f"{d.id} {d.role}" + (f" {d.tag}" if d.tag else ""))
    for a, b in t.links:
        lines.append(f"{a} -- {b}")
    for host, dev in t.hosts:
        lines.append(f"host {host} @ {dev}")
    for host in t.detached_hosts:
        lines.append(f"host {host} detached")
    return "\n".join(lines) + "\n"


def parse_topology(text: str) -> Topology:
    """Parse the text form; inverse of ``serialize_topology``.

    Blank lines and ``#`` comments are ignored.  The first significant line
    must be the version header.
    """
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines or lines[0] != FORMAT_HEADER:
        raise ValueError(f"missing or unsupported topology header (expected {FORMAT_HEADER!r})")

    devices: list[Device] = []
    links: list[tuple[str, str]] = []
    hosts: list[tuple[str, str]] = []
    detached: list[str] = []
    for lineno, line in enumerate(lines[1:], start=2):
        tokens = line.split()
        if tokens[0] == "host":
            if len(tokens) == 3 and tokens[2] == "detached":
                detached.append(tokens[1])
            elif len(tokens) == 4 and tokens[2] == "@":
                hosts.append((tokens[1], tokens[3]))
            else:
                raise ValueError(f"line {lineno}: malformed host line {line!r}")
        elif len(tokens) == 3 and tokens[1] == "--":
            links.append((tokens[0], tokens[2]))
        elif len(tokens) in (2, 3):
            tag = tokens[2] if len(tokens) == 3 else None
            devices.append(Device(tokens[0], tokens[1], tag))
        else:
            raise ValueError(f"line {lineno}: malformed line {line!r}")
    return Topology(tuple(devices), tuple(links), tuple(hosts), tuple(detached))
