"""
Truck-and-drone delivery: particle swarm over truck stops, one stop per zone.

Each particle places one truck stop inside every Steiner zone. The drone
sorties from a stop serve the zone's customers in parallel, so the truck idles
for the slowest sortie. A particle is scored by an inherited ant colony that
solves the orienteering problem over its stops, reusing the previous global
best route to seed pheromone.
"""

import logging
import math
import time
from dataclasses import dataclass, field, replace

import numpy as np
from django.conf import settings

from .acs import Path, SopGraph, run_acs
from .exceptions import ProjectionFailure
from .geometry import EPS, Point, distance, line_circle_parameters, point_along, segment_distance
from .signals import particle_moved

logger = logging.getLogger(__name__)

PRIZE_TIE = 1e-9


@dataclass(frozen=True)
class PsoParams:
    n_particles: int = 40
    n_iter: int = 100
    c1: float = 1.33
    c2: float = 1.33
    omega_min: float = 0.4
    omega_max: float = 0.9
    eps_impr: float = 1e-4
    max_no_impr: int = 5
    time_cap_s: float = 600.0
    iacs_max_no_impr: int = 13

    def __post_init__(self):
        if self.omega_min > self.omega_max:
            raise ValueError("omega_min must not exceed omega_max")
        if self.c1 <= 0 or self.c2 <= 0:
            raise ValueError("acceleration coefficients must be positive")
        if self.n_particles < 1 or self.n_iter < 1:
            raise ValueError("particle and iteration counts must be >= 1")

    @classmethod
    def from_settings(cls, **overrides):
        config = settings.CRASZE["PSO"]
        values = {
            "n_particles": config["PARTICLES"],
            "n_iter": config["ITERATIONS"],
            "c1": config["C1"],
            "c2": config["C2"],
            "omega_min": config["OMEGA_MIN"],
            "omega_max": config["OMEGA_MAX"],
            "eps_impr": config["EPS_IMPR"],
            "max_no_impr": config["MAX_NO_IMPR"],
            "time_cap_s": config["TIME_CAP_S"],
            "iacs_max_no_impr": config["IACS_MAX_NO_IMPR"],
        }
        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**values)


@dataclass
class Particle:
    positions: list[Point]
    velocities: np.ndarray
    ib_prize: float = -math.inf
    ib_cost: float = math.inf
    ib_sequence: tuple[int, ...] = ()
    ib_positions: list[Point] = field(default_factory=list)
    ib_solution: object = None


@dataclass(frozen=True)
class SwarmTrace:
    iteration: int
    omega: float
    best_prize: float
    best_cost: float


@dataclass
class TddpRun:
    solution: object
    particles: list[Particle]
    trace: list[SwarmTrace]
    truncated: bool


# ---------------------------------
# Cost model
# ---------------------------------


def collection_cost(waypoint, zone, params):
    """Truck idle time at waypoint: the slowest loaded-out, empty-back drone sortie"""
    return max(
        distance(waypoint, m.center) / (m.efficiency * params.v_drone)
        + params.t_serv
        + distance(m.center, waypoint) / params.v_drone
        for m in zone.members
    )


def travel_cost(p, q, params):
    return distance(p, q) / params.v_truck


def route_cost(instance, layout, solution):
    """Independent replay of a route's hours: truck legs plus idle time at every stop"""
    params = instance.tddp
    zones = layout.zone_map()
    points = [instance.depot_start] + solution.waypoints + [instance.depot_end]
    legs = sum(travel_cost(a, b, params) for a, b in zip(points, points[1:]))
    idle = sum(collection_cost(w.point, zones[w.zone_id], params) for w in solution.sequence)
    return legs + idle


# ---------------------------------
# Swarm dynamics
# ---------------------------------


def ldiw(n_it, params):
    return params.omega_max - (params.omega_max - params.omega_min) / params.n_iter * n_it


def zone_vmax(zone):
    if zone.degree == 1:
        return zone.members[0].radius
    vertices = zone.vertices
    if len(vertices) < 2:
        return 0.0
    if len(vertices) == 2:
        # lens: the vertex chord passes through the center, so use the distance to the rim
        return max(0.0, min(c.radius - distance(zone.center, c.center) for c in zone.circles))
    edges = zip(vertices, vertices[1:] + vertices[:1])
    return min(segment_distance(zone.center, a, b) for a, b in edges)


def init_particle(layout, rng):
    positions = []
    for zone in layout.zones:
        radius = zone_vmax(zone) * math.sqrt(rng.random())
        angle = 2 * math.pi * rng.random()
        positions.append(
            Point(zone.center.x + radius * math.cos(angle), zone.center.y + radius * math.sin(angle))
        )
    return Particle(positions=positions, velocities=np.zeros((len(layout.zones), 2)))


def update_velocity(particle, index, omega, gb_positions, r1, r2, params, vmax):
    x = particle.positions[index]
    ib = particle.ib_positions[index]
    gb = gb_positions[index]
    velocity = (
        omega * particle.velocities[index]
        + params.c1 * r1 * np.array([ib.x - x.x, ib.y - x.y])
        + params.c2 * r2 * np.array([gb.x - x.x, gb.y - x.y])
    )
    return np.clip(velocity, -vmax, vmax)


def update_position(position, zone, velocity, eps=EPS):
    candidate = Point(position.x + float(velocity[0]), position.y + float(velocity[1]))
    if zone.contains(candidate, eps):
        return candidate

    exit_t = 1.0
    for circle in zone.circles:
        roots = line_circle_parameters(position, candidate, circle)
        if roots is None:
            raise ProjectionFailure(f"move from {position} misses circle at {circle.center}")
        exit_t = min(exit_t, roots[1])
    boundary = point_along(position, candidate, max(exit_t, 0.0))
    if not zone.contains(boundary, 10 * eps):
        raise ProjectionFailure(f"boundary point {boundary} left zone {zone.id}")
    return boundary


# ---------------------------------
# Inherited ant colony
# ---------------------------------


def op_graph(instance, layout, positions):
    params = instance.tddp
    return SopGraph(
        name=instance.name,
        depot_start=instance.depot_start,
        depot_end=instance.depot_end,
        vertices=[(p, zone.id) for p, zone in zip(positions, layout.zones)],
        zone_prizes={z.id: z.prize for z in layout.zones},
        zone_circles={z.id: z.member_ids for z in layout.zones},
        budget=instance.budget,
        speed=params.v_truck,
        visit_costs=[collection_cost(p, z, params) for p, z in zip(positions, layout.zones)],
    )


def inherited_pheromone(inherited):
    if inherited is None or inherited.prize <= 0 or inherited.cost <= 0:
        return None
    return inherited.prize / inherited.cost


def inherited_path(graph, inherited):
    """The previous global best as a Path over this graph's one node per zone"""
    return Path(
        nodes=[int(graph.zone_nodes[w.zone_id][0]) for w in inherited.sequence],
        prize=inherited.prize,
        cost=inherited.cost,
        zones={w.zone_id for w in inherited.sequence},
    )


def iacs_solve_op(graph, inherited, params, seed, algorithm="iacs"):
    """Orienteering over one stop per zone; tau0 and a first deposit come from ``inherited``"""
    tau0 = inherited_pheromone(inherited)
    seeded = inherited_path(graph, inherited) if tau0 is not None else None
    run = run_acs(graph, params, np.random.default_rng(seed), tau0=tau0, inherited=seeded)
    return graph.to_solution(run.best, algorithm, seed), run


def _particle_seed(seed, iteration, index):
    child = np.random.SeedSequence(entropy=seed, spawn_key=(iteration, index))
    return int(child.generate_state(1, dtype=np.uint64)[0])


def _better_individual(solution, particle):
    if solution.prize > particle.ib_prize + PRIZE_TIE:
        return True
    return abs(solution.prize - particle.ib_prize) <= PRIZE_TIE and solution.cost < particle.ib_cost


def _record_individual(particle, solution):
    particle.ib_prize = solution.prize
    particle.ib_cost = solution.cost
    particle.ib_sequence = tuple(w.zone_id for w in solution.sequence)
    particle.ib_positions = list(particle.positions)
    particle.ib_solution = solution


def _local_best(particles):
    best = particles[0]
    for particle in particles[1:]:
        if particle.ib_prize > best.ib_prize + PRIZE_TIE or (
            abs(particle.ib_prize - best.ib_prize) <= PRIZE_TIE and particle.ib_cost < best.ib_cost
        ):
            best = particle
    return best


def _improves_global(particle, gb_solution, eps_impr):
    if particle.ib_prize > gb_solution.prize + eps_impr:
        return True
    return (
        abs(particle.ib_prize - gb_solution.prize) <= PRIZE_TIE
        and particle.ib_cost < gb_solution.cost - eps_impr
    )


def run_pso(instance, layout, pso_params, acs_params, seed):
    started = time.perf_counter()
    rng = np.random.default_rng(seed)
    iacs_params = replace(acs_params, max_no_impr=pso_params.iacs_max_no_impr)
    zones = layout.zones
    vmax = [zone_vmax(z) for z in zones]

    def evaluate(particle, inherited, iteration, index):
        graph = op_graph(instance, layout, particle.positions)
        solution, _ = iacs_solve_op(
            graph, inherited, iacs_params, _particle_seed(seed, iteration, index), "rszd-pso-iacs"
        )
        return solution

    def moved(particle, iteration, index):
        particle_moved.send(
            sender=Particle,
            particle=particle,
            iteration=iteration,
            index=index,
            layout=layout,
            vmax=vmax,
        )

    particles = [init_particle(layout, rng) for _ in range(pso_params.n_particles)]
    for index, particle in enumerate(particles):
        moved(particle, 0, index)
        _record_individual(particle, evaluate(particle, None, 0, index))

    leader = _local_best(particles)
    gb_solution = leader.ib_solution
    gb_positions = list(leader.ib_positions)
    stagnant = 0
    truncated = False
    trace = [SwarmTrace(0, ldiw(0, pso_params), gb_solution.prize, gb_solution.cost)]

    for iteration in range(1, pso_params.n_iter + 1):
        if stagnant >= pso_params.max_no_impr:
            break
        omega = ldiw(iteration, pso_params)
        for index, particle in enumerate(particles):
            if time.perf_counter() - started >= pso_params.time_cap_s:
                truncated = True
                break
            r1, r2 = rng.random(2)
            for k, zone in enumerate(zones):
                velocity = update_velocity(
                    particle, k, omega, gb_positions, r1, r2, pso_params, vmax[k]
                )
                particle.velocities[k] = velocity
                particle.positions[k] = update_position(particle.positions[k], zone, velocity)
            moved(particle, iteration, index)
            solution = evaluate(particle, gb_solution, iteration, index)
            if _better_individual(solution, particle):
                _record_individual(particle, solution)

        # particles evaluated before the cap still count toward the global best
        leader = _local_best(particles)
        if _improves_global(leader, gb_solution, pso_params.eps_impr):
            gb_solution = leader.ib_solution
            gb_positions = list(leader.ib_positions)
            stagnant = 0
        else:
            stagnant += 1
        trace.append(SwarmTrace(iteration, omega, gb_solution.prize, gb_solution.cost))
        logger.debug(
            "pso %s iteration %d: omega %.3f best %.4f/%.4f",
            instance.name,
            iteration,
            omega,
            gb_solution.prize,
            gb_solution.cost,
        )
        if truncated:
            logger.warning(
                "pso %s hit the %.0fs time cap in iteration %d",
                instance.name,
                pso_params.time_cap_s,
                iteration,
            )
            break

    runtime = time.perf_counter() - started
    solution = replace(gb_solution, seed=seed, runtime_s=runtime, truncated=truncated)
    logger.info(
        "pso %s: prize %.4f cost %.4f h after %d iterations (%.2fs)",
        instance.name,
        solution.prize,
        solution.cost,
        len(trace) - 1,
        runtime,
    )
    return TddpRun(solution=solution, particles=particles, trace=trace, truncated=truncated)


def solve_tddp(instance, layout, pso_params, acs_params, seed):
    return run_pso(instance, layout, pso_params, acs_params, seed).solution
