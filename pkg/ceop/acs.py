"""
Ant Colony System over Steiner-zone vertices (set orienteering).

Node layout of a SopGraph: 0 is the start depot, 1..K are candidate
waypoints, K + 1 is the end depot. Each candidate belongs to one zone and
visiting any candidate of a zone collects the zone prize once. The same
engine solves the plain orienteering problem of the truck-and-drone variant:
one candidate per zone, travel measured in hours and a per-node visit cost
for the drone sorties.
"""

import logging
import math
import time
from dataclasses import dataclass, field

import numpy as np
from django.conf import settings

from .instances import Solution, Waypoint

logger = logging.getLogger(__name__)

# floor for zero-length legs in the heuristic information
TINY = 1e-12
PRIZE_TIE = 1e-9


@dataclass(frozen=True)
class AcsParams:
    n_ants: int = 40
    n_iter: int = 250
    beta: float = 2.0
    alpha: float = 0.1
    rho: float = 0.1
    q0: float = 0.9
    eps_impr: float = 1e-4
    max_no_impr: int = 25

    def __post_init__(self):
        if self.n_ants < 1 or self.n_iter < 1 or self.max_no_impr < 1:
            raise ValueError("ant count, iterations and stagnation limit must be >= 1")
        if not (0 < self.alpha < 1 and 0 < self.rho < 1 and 0 <= self.q0 <= 1):
            raise ValueError("alpha and rho must lie in (0, 1), q0 in [0, 1]")
        if self.beta < 0:
            raise ValueError("beta must be non-negative")

    @classmethod
    def from_settings(cls, **overrides):
        config = settings.CRASZE["ACS"]
        values = {
            "n_ants": config["ANTS"],
            "n_iter": config["ITERATIONS"],
            "beta": config["BETA"],
            "alpha": config["ALPHA"],
            "rho": config["RHO"],
            "q0": config["Q0"],
            "eps_impr": config["EPS_IMPR"],
            "max_no_impr": config["MAX_NO_IMPR"],
        }
        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**values)


class SopGraph:
    def __init__(
        self,
        name,
        depot_start,
        depot_end,
        vertices,
        zone_prizes,
        budget,
        zone_circles=None,
        speed=1.0,
        visit_costs=None,
    ):
        self.name = name
        self.budget = budget
        self.zone_prizes = dict(zone_prizes)
        self.zone_circles = dict(zone_circles or {})
        self.points = [depot_start] + [p for p, _ in vertices] + [depot_end]
        self.size = len(self.points)
        self.start = 0
        self.end = self.size - 1

        coords = np.array([[p.x, p.y] for p in self.points], dtype=float)
        diff = coords[:, None, :] - coords[None, :, :]
        self.dist = np.hypot(diff[..., 0], diff[..., 1]) / speed
        self.dist_rows = self.dist.tolist()

        self.zone_of = np.array([-1] + [z for _, z in vertices] + [-1])
        self.node_prize = np.array(
            [0.0] + [self.zone_prizes[z] for _, z in vertices] + [0.0], dtype=float
        )
        if visit_costs is None:
            visit_costs = [0.0] * len(vertices)
        costs = [0.0] + list(visit_costs) + [0.0]
        self.visit_cost = np.array(costs, dtype=float)

        self.zone_nodes = {}
        for node in range(1, self.end):
            self.zone_nodes.setdefault(int(self.zone_of[node]), []).append(node)
        self.zone_nodes = {z: np.array(n) for z, n in self.zone_nodes.items()}

    @classmethod
    def from_layout(cls, layout, instance):
        """Candidate waypoints are zone vertices, or the circle center for singleton zones"""
        vertices = []
        for zone in layout.zones:
            candidates = zone.vertices if zone.degree > 1 else (zone.center,)
            vertices.extend((p, zone.id) for p in candidates)
        return cls(
            name=instance.name,
            depot_start=instance.depot_start,
            depot_end=instance.depot_end,
            vertices=vertices,
            zone_prizes={z.id: z.prize for z in layout.zones},
            zone_circles={z.id: z.member_ids for z in layout.zones},
            budget=instance.budget,
        )

    @property
    def vertex_count(self):
        return self.size - 2

    @property
    def zone_count(self):
        return len(self.zone_nodes)

    def evaluate(self, nodes):
        """(prize, cost) of a node sequence computed from scratch"""
        seq = [self.start] + list(nodes) + [self.end]
        cost = sum(self.dist_rows[a][b] for a, b in zip(seq, seq[1:]))
        cost += sum(self.visit_cost[n] for n in nodes)
        zones = {int(self.zone_of[n]) for n in nodes}
        prize = sum(self.zone_prizes[z] for z in zones)
        return prize, float(cost)

    def available_after(self, path):
        available = np.ones(self.size, dtype=bool)
        available[[self.start, self.end]] = False
        for zone in path.zones:
            available[self.zone_nodes[zone]] = False
        return available

    def to_solution(self, path, algorithm, seed, runtime_s=0.0, truncated=False):
        prize, cost = self.evaluate(path.nodes)
        sequence = tuple(
            Waypoint(
                zone_id=int(self.zone_of[n]),
                circle_ids=tuple(self.zone_circles.get(int(self.zone_of[n]), ())),
                point=self.points[n],
            )
            for n in path.nodes
        )
        return Solution(
            instance_name=self.name,
            algorithm=algorithm,
            seed=seed,
            prize=prize,
            cost=cost,
            budget=self.budget,
            runtime_s=runtime_s,
            sequence=sequence,
            truncated=truncated,
        )


@dataclass
class Path:
    nodes: list[int] = field(default_factory=list)
    prize: float = 0.0
    cost: float = 0.0
    zones: set[int] = field(default_factory=set)

    @classmethod
    def from_nodes(cls, graph, nodes):
        prize, cost = graph.evaluate(nodes)
        return cls(
            nodes=list(nodes),
            prize=prize,
            cost=cost,
            zones={int(graph.zone_of[n]) for n in nodes},
        )

    def sequence(self, graph):
        return [graph.start] + self.nodes + [graph.end]

    def is_feasible(self, graph):
        return self.cost <= graph.budget

    def copy(self):
        return Path(list(self.nodes), self.prize, self.cost, set(self.zones))


@dataclass(frozen=True)
class IterationTrace:
    iteration: int
    local_prize: float
    local_cost: float
    best_prize: float
    best_cost: float


@dataclass
class AcsRun:
    best: Path
    tau0: float
    iterations: int
    history: list[IterationTrace]


# ---------------------------------
# Pheromone
# ---------------------------------


def local_update(tau, rho, tau0):
    return (1 - rho) * tau + rho * tau0


def _edge_index(seq):
    rows = np.asarray(seq[:-1])
    cols = np.asarray(seq[1:])
    return rows, cols


class PheromoneMatrix:
    def __init__(self, size, tau0):
        if not tau0 > 0:
            raise ValueError("initial pheromone must be positive")
        self.tau0 = tau0
        self.tau = np.full((size, size), tau0, dtype=float)

    def apply_local(self, seq, rho):
        rows, cols = _edge_index(seq)
        updated = local_update(self.tau[rows, cols], rho, self.tau0)
        self.tau[rows, cols] = updated
        self.tau[cols, rows] = updated


def global_update(pheromone, alpha, seq, prize, cost):
    """Deposit prize/cost along the best path's edges; other edges are untouched"""
    deposit = prize / cost if cost > 0 else 0.0
    rows, cols = _edge_index(seq)
    updated = (1 - alpha) * pheromone.tau[rows, cols] + alpha * deposit
    pheromone.tau[rows, cols] = updated
    pheromone.tau[cols, rows] = updated
    return pheromone


def nearest_neighbor_path(graph):
    """Greedy route to the nearest budget-feasible vertex of an unvisited zone"""
    available = graph.available_after(Path())
    d = graph.dist
    nodes = []
    current = graph.start
    partial = 0.0
    while True:
        idx = np.flatnonzero(available)
        if idx.size == 0:
            break
        fits = partial + d[current, idx] + graph.visit_cost[idx] + d[idx, graph.end] <= graph.budget
        idx = idx[fits]
        if idx.size == 0:
            break
        nxt = int(idx[np.argmin(d[current, idx])])
        partial += d[current, nxt] + graph.visit_cost[nxt]
        nodes.append(nxt)
        available[graph.zone_nodes[int(graph.zone_of[nxt])]] = False
        current = nxt
    return Path.from_nodes(graph, nodes)


def initial_pheromone(seed_path, n_wp=None):
    """tau0 = P / (n_wp * C); n_wp counts both depots unless given"""
    if n_wp is None:
        n_wp = len(seed_path.nodes) + 2
    if seed_path.cost <= 0:
        return 1.0
    if seed_path.prize <= 0:
        return 1.0 / (n_wp * seed_path.cost)
    return seed_path.prize / (n_wp * seed_path.cost)


# ---------------------------------
# State transition
# ---------------------------------


def transition_scores(graph, current, feasible, tau, beta):
    feasible = np.asarray(feasible)
    leg = graph.dist[current, feasible] + graph.visit_cost[feasible]
    eta = graph.node_prize[feasible] / np.maximum(leg, TINY)
    return tau[current, feasible] * eta**beta


def transition_probabilities(scores):
    total = scores.sum()
    if not total > 0 or not math.isfinite(total):
        return np.full(scores.shape, 1.0 / scores.size)
    return scores / total


def select_next(graph, current, feasible, tau, beta, q0, rng):
    feasible = np.sort(np.asarray(feasible))
    if feasible.size == 1:
        return int(feasible[0])
    scores = transition_scores(graph, current, feasible, tau, beta)
    if rng.random() <= q0:
        return int(feasible[np.argmax(scores)])
    probabilities = transition_probabilities(scores)
    return int(feasible[rng.choice(feasible.size, p=probabilities)])


def construct(graph, pheromone, params, rng):
    d = graph.dist
    vc = graph.visit_cost
    available = graph.available_after(Path())
    idx = np.flatnonzero(available)
    reachable = idx[d[graph.start, idx] + vc[idx] + d[idx, graph.end] <= graph.budget]
    if reachable.size == 0:
        return Path.from_nodes(graph, [])

    current = int(reachable[rng.integers(reachable.size)])
    nodes = [current]
    partial = d[graph.start, current] + vc[current]
    available[graph.zone_nodes[int(graph.zone_of[current])]] = False

    while True:
        idx = np.flatnonzero(available)
        if idx.size == 0:
            break
        feasible = idx[partial + d[current, idx] + vc[idx] + d[idx, graph.end] <= graph.budget]
        if feasible.size == 0:
            break
        nxt = select_next(graph, current, feasible, pheromone.tau, params.beta, params.q0, rng)
        partial += d[current, nxt] + vc[nxt]
        nodes.append(nxt)
        available[graph.zone_nodes[int(graph.zone_of[nxt])]] = False
        current = nxt
    return Path.from_nodes(graph, nodes)


# ---------------------------------
# Local search and repair
# ---------------------------------


def two_opt(graph, path, eps_impr=1e-4):
    d = graph.dist_rows
    seq = path.sequence(graph)
    last = len(seq) - 2
    improved = True
    while improved:
        improved = False
        for i in range(1, last):
            for j in range(i + 1, last + 1):
                a, b, c, e = seq[i - 1], seq[i], seq[j], seq[j + 1]
                delta = d[a][c] + d[b][e] - d[a][b] - d[c][e]
                if delta < -eps_impr:
                    seq[i : j + 1] = seq[i : j + 1][::-1]
                    improved = True
    return Path.from_nodes(graph, seq[1:-1])


def drop_value(graph, prev, node, nxt):
    """Prize per unit of detour saved by removing node; zero detour maps to +inf"""
    d = graph.dist_rows
    saved = d[prev][node] + graph.visit_cost[node] + d[node][nxt] - d[prev][nxt]
    if saved <= TINY:
        return math.inf
    return graph.node_prize[node] / saved


def add_value(prize, detour):
    if detour <= TINY:
        return math.inf
    return prize / detour


def drop_operator(graph, path, available):
    path = path.copy()
    available = available.copy()
    while path.cost > graph.budget and path.nodes:
        seq = path.sequence(graph)
        values = [
            (drop_value(graph, seq[k - 1], seq[k], seq[k + 1]), seq[k], k)
            for k in range(1, len(seq) - 1)
        ]
        _, node, position = min(values)
        prev, nxt = seq[position - 1], seq[position + 1]
        d = graph.dist_rows
        path.cost -= d[prev][node] + graph.visit_cost[node] + d[node][nxt] - d[prev][nxt]
        zone = int(graph.zone_of[node])
        path.prize -= graph.zone_prizes[zone]
        path.zones.discard(zone)
        path.nodes.pop(position - 1)
        available[graph.zone_nodes[zone]] = True
    return path, available


def _insertion_pairs(positions, length):
    positions = sorted(positions)
    chosen = set(positions)
    pairs = [(p, p + 1) for p in positions if p + 1 in chosen]
    if pairs:
        return pairs
    pairs = set()
    for p in positions:
        if p > 0:
            pairs.add((p - 1, p))
        if p < length - 1:
            pairs.add((p, p + 1))
    return sorted(pairs)


def best_insertion(graph, path, available):
    """(value, node, position, detour) of the best budget-respecting insertion, or None"""
    candidates = np.flatnonzero(available)
    if candidates.size == 0:
        return None
    d = graph.dist_rows
    seq = path.sequence(graph)
    slack = graph.budget - path.cost
    nearest_count = min(3, len(seq))
    to_path = graph.dist[np.ix_(candidates, seq)]
    nearest = np.argsort(to_path, axis=1, kind="stable")[:, :nearest_count]

    best = None
    for row, node in enumerate(candidates.tolist()):
        pairs = _insertion_pairs(nearest[row].tolist(), len(seq))
        detour, position = min(
            (d[seq[a]][node] + graph.visit_cost[node] + d[node][seq[b]] - d[seq[a]][seq[b]], b)
            for a, b in pairs
        )
        if detour > slack:
            continue
        value = add_value(graph.node_prize[node], detour)
        if best is None or value > best[0]:
            best = (value, node, position, detour)
    return best


def add_operator(graph, path, available):
    path = path.copy()
    available = available.copy()
    while True:
        choice = best_insertion(graph, path, available)
        if choice is None:
            break
        _, node, position, detour = choice
        zone = int(graph.zone_of[node])
        path.nodes.insert(position - 1, node)
        path.cost += detour
        path.prize += graph.zone_prizes[zone]
        path.zones.add(zone)
        available[graph.zone_nodes[zone]] = False
    return path, available


# ---------------------------------
# Colony
# ---------------------------------


def better_local(candidate, incumbent):
    if candidate.prize > incumbent.prize + PRIZE_TIE:
        return True
    return abs(candidate.prize - incumbent.prize) <= PRIZE_TIE and candidate.cost < incumbent.cost


def improves(candidate, best, eps_impr):
    if candidate.prize >= best.prize + eps_impr:
        return True
    return abs(candidate.prize - best.prize) <= PRIZE_TIE and candidate.cost <= best.cost - eps_impr


def run_ant(graph, pheromone, params, rng):
    path = construct(graph, pheromone, params, rng)
    path = two_opt(graph, path, params.eps_impr)
    available = graph.available_after(path)
    if not path.is_feasible(graph):
        path, available = drop_operator(graph, path, available)
    path, available = add_operator(graph, path, available)
    pheromone.apply_local(path.sequence(graph), params.rho)
    return path


def warm_start_pheromone(graph, params, tau0=None, inherited=None):
    """
    Pheromone before the first iteration.

    Without ``tau0`` the nearest-neighbour route sets the level. An
    ``inherited`` path is reinforced with n_wp * prize / cost, so it stands
    above tau0 by the same factor a classic best path stands above the
    nearest-neighbour tau0.
    """
    if tau0 is None:
        tau0 = initial_pheromone(nearest_neighbor_path(graph))
    pheromone = PheromoneMatrix(graph.size, tau0)
    if inherited is not None:
        seq = inherited.sequence(graph)
        global_update(pheromone, params.alpha, seq, len(seq) * inherited.prize, inherited.cost)
    return pheromone


def run_acs(graph, params, rng, tau0=None, inherited=None):
    """Colony loop; ``inherited`` is a Path on this graph reinforced before the first iteration"""
    pheromone = warm_start_pheromone(graph, params, tau0, inherited)
    tau0 = pheromone.tau0

    best = None
    stagnant = 0
    history = []
    for iteration in range(1, params.n_iter + 1):
        if stagnant >= params.max_no_impr:
            break
        local = None
        for _ in range(params.n_ants):
            path = run_ant(graph, pheromone, params, rng)
            if local is None or better_local(path, local):
                local = path

        if best is None or improves(local, best, params.eps_impr):
            best = local
            global_update(pheromone, params.alpha, best.sequence(graph), best.prize, best.cost)
            stagnant = 0
        else:
            stagnant += 1
        history.append(IterationTrace(iteration, local.prize, local.cost, best.prize, best.cost))
        logger.debug(
            "acs %s iteration %d: local %.4f/%.4f best %.4f/%.4f",
            graph.name,
            iteration,
            local.prize,
            local.cost,
            best.prize,
            best.cost,
        )
    return AcsRun(best=best, tau0=tau0, iterations=len(history), history=history)


def solve_sop(graph, params, seed, algorithm="rszd-acs"):
    started = time.perf_counter()
    run = run_acs(graph, params, np.random.default_rng(seed))
    runtime = time.perf_counter() - started
    logger.info(
        "acs %s: prize %.4f cost %.4f after %d iterations (%.2fs)",
        graph.name,
        run.best.prize,
        run.best.cost,
        run.iterations,
        runtime,
    )
    return graph.to_solution(run.best, algorithm, seed, runtime_s=runtime)


def waypoint_graph(graph, waypoints, extra):
    """Graph whose interior nodes are the given (Point, zone) waypoints followed by extra candidates"""
    return SopGraph(
        name=graph.name,
        depot_start=graph.points[graph.start],
        depot_end=graph.points[graph.end],
        vertices=list(waypoints) + list(extra),
        zone_prizes=graph.zone_prizes,
        zone_circles=graph.zone_circles,
        budget=graph.budget,
    )


def candidate_vertices(graph, excluded_zones):
    return [
        (graph.points[n], int(graph.zone_of[n]))
        for n in range(1, graph.end)
        if int(graph.zone_of[n]) not in excluded_zones
    ]
