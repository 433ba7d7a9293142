"""Elitist multi-objective genetic algorithm (NSGA-II).

Individuals carry a vector of bounded real genes plus optional categorical
genes (indices into finite sets).  All objectives are minimized.  A master
seed spawns one child random stream per purpose (initialization, tournament
selection, crossover, mutation, tie-breaking), so results are reproducible
bit for bit regardless of how objective evaluation is parallelized.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ValidationError


@dataclass(frozen=True)
class GenomeSpec:
    """Bounds for the real genes and cardinalities of the categorical ones."""

    lower: np.ndarray
    upper: np.ndarray
    categorical_sizes: tuple[int, ...] = ()

    def __post_init__(self):
        lower = np.asarray(self.lower, dtype=float)
        upper = np.asarray(self.upper, dtype=float)
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)
        if lower.shape != upper.shape or lower.ndim != 1:
            raise ValidationError("lower/upper bounds must be 1-d and congruent")
        if np.any(lower > upper):
            raise ValidationError("lower bound exceeds upper bound")
        if any(s < 1 for s in self.categorical_sizes):
            raise ValidationError("categorical genes need at least one value")

    @property
    def n_genes(self) -> int:
        return self.lower.size + len(self.categorical_sizes)


@dataclass
class Individual:
    reals: np.ndarray
    cats: np.ndarray
    objectives: np.ndarray | None = None
    rank: int | None = None
    crowding: float = 0.0


class Problem:
    """Optimization problem: a genome spec plus an objective function.

    Subclasses may override `repair` (fix genes after variation; the default
    clamps reals to bounds) and `feasible` (reject individuals the repair
    could not fix).
    """

    genome_spec: GenomeSpec

    def evaluate(self, reals: np.ndarray, cats: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def repair(self, reals, cats, rng):
        spec = self.genome_spec
        return np.clip(reals, spec.lower, spec.upper), cats

    def feasible(self, reals, cats) -> bool:
        return True


def dominates(a, b) -> bool:
    """Minimization dominance: a no worse everywhere, better somewhere."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape:
        raise ValidationError("objective vectors differ in length")
    return bool(np.all(a <= b) and np.any(a < b))


def fast_nondominated_sort(population) -> list[list[Individual]]:
    """Layer the population into successive nondominated fronts.

    Sets each individual's rank (1-based layer index) and returns the layers
    via the domination-count bookkeeping scheme.
    """
    population = list(population)
    n = len(population)
    objs = np.stack([ind.objectives for ind in population])
    le = np.all(objs[:, None, :] <= objs[None, :, :], axis=2)
    lt = np.any(objs[:, None, :] < objs[None, :, :], axis=2)
    dom = le & lt  # dom[i, j]: i dominates j
    counts = dom.sum(axis=0)
    layers: list[list[Individual]] = []
    current = [i for i in range(n) if counts[i] == 0]
    rank = 1
    while current:
        for i in current:
            population[i].rank = rank
        layers.append([population[i] for i in current])
        nxt = []
        for i in current:
            for j in np.nonzero(dom[i])[0]:
                counts[j] -= 1
                if counts[j] == 0:
                    nxt.append(int(j))
        current = sorted(nxt)
        rank += 1
    return layers


def crowding_distance(front) -> np.ndarray:
    """Crowding of each front member; boundary solutions get +infinity."""
    front = list(front)
    n = len(front)
    if n == 0:
        raise ValidationError("empty front")
    dist = np.zeros(n)
    if n <= 2:
        dist[:] = np.inf
    else:
        objs = np.stack([ind.objectives for ind in front])
        for m in range(objs.shape[1]):
            order = np.argsort(objs[:, m], kind="stable")
            span = objs[order[-1], m] - objs[order[0], m]
            dist[order[0]] = np.inf
            dist[order[-1]] = np.inf
            if span > 0.0:
                gaps = (objs[order[2:], m] - objs[order[:-2], m]) / span
                dist[order[1:-1]] += gaps
    for ind, d in zip(front, dist):
        ind.crowding = float(d)
    return dist


def crowded_compare(a: Individual, b: Individual, rng) -> bool:
    """True when a beats b: lower rank, then larger crowding, then a coin."""
    if a.rank != b.rank:
        return a.rank < b.rank
    if a.crowding != b.crowding:
        return a.crowding > b.crowding
    return bool(rng.random() < 0.5)


def sbx_crossover(parent1, parent2, spec: GenomeSpec, eta_c: float,
                  rate: float, rng):
    """Simulated binary crossover on (reals, cats) gene tuples.

    With probability ``rate`` the pair recombines: each real gene takes part
    with probability 1/2 and spreads around the parent values with index
    ``eta_c``; categorical genes swap with probability 1/2.  Otherwise the
    children are plain copies.
    """
    r1, c1 = np.array(parent1[0], dtype=float), np.array(parent1[1], dtype=int)
    r2, c2 = np.array(parent2[0], dtype=float), np.array(parent2[1], dtype=int)
    if rng.random() >= rate:
        return (r1, c1), (r2, c2)
    for g in range(r1.size):
        if rng.random() >= 0.5:
            continue
        u = rng.random()
        if u <= 0.5:
            beta = (2.0 * u) ** (1.0 / (eta_c + 1.0))
        else:
            beta = (1.0 / (2.0 * (1.0 - u))) ** (1.0 / (eta_c + 1.0))
        x1, x2 = r1[g], r2[g]
        r1[g] = 0.5 * ((1.0 + beta) * x1 + (1.0 - beta) * x2)
        r2[g] = 0.5 * ((1.0 - beta) * x1 + (1.0 + beta) * x2)
    np.clip(r1, spec.lower, spec.upper, out=r1)
    np.clip(r2, spec.lower, spec.upper, out=r2)
    for g in range(c1.size):
        if rng.random() < 0.5:
            c1[g], c2[g] = c2[g], c1[g]
    return (r1, c1), (r2, c2)


def polynomial_mutation(genes, spec: GenomeSpec, eta_m: float, rate: float, rng):
    """Polynomial mutation of the reals; uniform resampling of the cats."""
    reals, cats = np.array(genes[0], dtype=float), np.array(genes[1], dtype=int)
    for g in range(reals.size):
        if rng.random() >= rate:
            continue
        u = rng.random()
        if u < 0.5:
            delta = (2.0 * u) ** (1.0 / (eta_m + 1.0)) - 1.0
        else:
            delta = 1.0 - (2.0 * (1.0 - u)) ** (1.0 / (eta_m + 1.0))
        reals[g] += delta * (spec.upper[g] - spec.lower[g])
    np.clip(reals, spec.lower, spec.upper, out=reals)
    for g in range(cats.size):
        if rng.random() < rate:
            cats[g] = int(rng.integers(spec.categorical_sizes[g]))
    return reals, cats


@dataclass(frozen=True)
class EvolveParams:
    pop_size: int
    generations: int
    crossover_rate: float = 0.8
    mutation_rate: float | None = None  # None -> 1/genome length
    eta_c: float = 20.0
    eta_m: float = 20.0
    seed: int = 0

    def __post_init__(self):
        if self.pop_size < 2:
            raise ValidationError("population needs at least two individuals")
        if self.generations < 0:
            raise ValidationError("generations must be non-negative")
        for r in (self.crossover_rate, self.mutation_rate):
            if r is not None and not 0.0 <= r <= 1.0:
                raise ValidationError(f"rate {r} outside [0, 1]")


@dataclass(frozen=True)
class GenerationStats:
    generation: int
    best: np.ndarray  # per-objective minimum over the surviving population
    mean: np.ndarray


@dataclass
class EvolveResult:
    front: list[Individual]
    history: list[GenerationStats]
    population: list[Individual]


@dataclass(frozen=True)
class _Streams:
    init: np.random.Generator
    tournament: np.random.Generator
    crossover: np.random.Generator
    mutation: np.random.Generator
    tie: np.random.Generator


def _spawn_streams(seed: int) -> _Streams:
    return _Streams(*np.random.default_rng(seed).spawn(5))


def _sample_genome(spec: GenomeSpec, rng):
    reals = rng.uniform(spec.lower, spec.upper)
    cats = np.array([rng.integers(s) for s in spec.categorical_sizes], dtype=int)
    return reals, cats


def _initial_population(problem: Problem, pop_size: int, rng) -> list[Individual]:
    out = []
    for _ in range(pop_size):
        reals, cats = _sample_genome(problem.genome_spec, rng)
        attempts = 0
        while not problem.feasible(reals, cats) and attempts < 100:
            reals, cats = _sample_genome(problem.genome_spec, rng)
            attempts += 1
        out.append(Individual(reals, cats))
    return out


def _evaluate(problem, individuals, generation, map_fn):
    pending = [ind for ind in individuals if ind.objectives is None]
    results = list(map_fn(lambda ind: problem.evaluate(ind.reals, ind.cats), pending))
    for i, (ind, objs) in enumerate(zip(pending, results)):
        objs = np.asarray(objs, dtype=float)
        if not np.all(np.isfinite(objs)):
            raise RuntimeError(
                f"non-finite objectives {objs} at generation {generation}, "
                f"offspring {i}")
        ind.objectives = objs


def _stats(generation: int, population) -> GenerationStats:
    objs = np.stack([ind.objectives for ind in population])
    return GenerationStats(generation, objs.min(axis=0), objs.mean(axis=0))


def _tournament(population, streams) -> Individual:
    i = int(streams.tournament.integers(len(population)))
    j = int(streams.tournament.integers(len(population)))
    a, b = population[i], population[j]
    return a if crowded_compare(a, b, streams.tie) else b


def _make_child(problem, params, mutation_rate, streams, genes) -> Individual:
    reals, cats = polynomial_mutation(genes, problem.genome_spec, params.eta_m,
                                      mutation_rate, streams.mutation)
    reals, cats = problem.repair(reals, cats, streams.mutation)
    attempts = 0
    while not problem.feasible(reals, cats) and attempts < 100:
        reals, cats = _sample_genome(problem.genome_spec, streams.mutation)
        attempts += 1
    return Individual(np.asarray(reals, dtype=float), np.asarray(cats, dtype=int))


def _offspring(problem, population, params, mutation_rate, streams) -> list[Individual]:
    children: list[Individual] = []
    while len(children) < len(population):
        pa = _tournament(population, streams)
        pb = _tournament(population, streams)
        g1, g2 = sbx_crossover((pa.reals, pa.cats), (pb.reals, pb.cats),
                               problem.genome_spec, params.eta_c,
                               params.crossover_rate, streams.crossover)
        children.append(_make_child(problem, params, mutation_rate, streams, g1))
        if len(children) < len(population):
            children.append(_make_child(problem, params, mutation_rate, streams, g2))
    return children


def _select(layers, pop_size, streams) -> list[Individual]:
    chosen: list[Individual] = []
    for layer in layers:
        crowding_distance(layer)
        if len(chosen) + len(layer) <= pop_size:
            chosen.extend(layer)
            continue
        # order the split front by the crowded comparison and truncate
        remaining = list(layer)
        order = []
        while remaining:
            best = 0
            for k in range(1, len(remaining)):
                if crowded_compare(remaining[k], remaining[best], streams.tie):
                    best = k
            order.append(remaining.pop(best))
        chosen.extend(order[: pop_size - len(chosen)])
        break
    return chosen


def evolve(problem: Problem, params: EvolveParams, map_fn=map) -> EvolveResult:
    """Run the elitist generational loop and return the final first front.

    Each generation merges parents and offspring, sorts the union into
    fronts, and carries whole fronts (splitting the last by crowding) into
    the next parent population.  ``map_fn`` applies the objective function
    across a batch of individuals and may be parallel as long as it
    preserves order.  The returned front is the first layer of the last
    merged sort; the history holds per-generation best/mean objectives of
    the surviving population.
    """
    mutation_rate = params.mutation_rate
    if mutation_rate is None:
        mutation_rate = 1.0 / problem.genome_spec.n_genes

    streams = _spawn_streams(params.seed)
    population = _initial_population(problem, params.pop_size, streams.init)
    _evaluate(problem, population, 0, map_fn)
    layers = fast_nondominated_sort(population)
    for layer in layers:
        crowding_distance(layer)
    history = [_stats(0, population)]
    front = layers[0]

    for gen in range(1, params.generations + 1):
        offspring = _offspring(problem, population, params, mutation_rate, streams)
        _evaluate(problem, offspring, gen, map_fn)
        merged = population + offspring
        layers = fast_nondominated_sort(merged)
        front = layers[0]
        population = _select(layers, params.pop_size, streams)
        history.append(_stats(gen, population))
    return EvolveResult(front, history, population)
