"""Seed initialization and the sequential growth loop.

A run starts from a seed network, then walks a year schedule: for every
scheduled out-degree k it inserts one node, draws its attributes from the
model's samplers, scores every existing node with the model's weight rule
and cites k distinct nodes sampled without replacement. Nodes inserted
earlier in the same year are valid targets, so within-year order matters.

When fewer than k existing nodes have positive weight, the gap is filled
uniformly from the remaining nodes; every such fill is counted on the
returned graph (`fallback_fills`), never silently absorbed.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import SimulationError, ValidationError
from .graph import GrowthGraph, YearSchedule
from .models import (
    ModelKind,
    ModelSpec,
    attachment_weights,
    gamma_value,
    initial_subspace,
    sample_fitness,
    sample_location_active,
    sample_location_uniform,
    shift_due,
    shift_subspace,
)
from .sampling import sample_without_replacement

__all__ = ["SelectionEvent", "init_from_seed", "run_simulation"]


@dataclass(frozen=True)
class SelectionEvent:
    """One insertion: the new node's id and the targets it cited."""

    incoming_node: int
    chosen_targets: frozenset


def init_from_seed(seed_nodes, seed_edges, model: ModelSpec,
                   rng_seed: int) -> GrowthGraph:
    """Turn a bare seed network into a GrowthGraph under `model`.

    `seed_nodes` is a sequence of (id, year) pairs whose ids must be the
    dense range 0..n-1 in order; `seed_edges` are (citing, cited) pairs
    pointing to earlier insertion positions. Fitness and location values
    are drawn here, from a generator seeded with `rng_seed`, so the same
    seed network yields different attribute draws under different seeds.
    """
    nodes = [(int(i), int(y)) for i, y in seed_nodes]
    if not nodes:
        raise ValidationError("seed must contain at least one node")
    seen: set[int] = set()
    for nid, _ in nodes:
        if nid in seen:
            raise ValidationError(f"duplicate node id {nid} in seed")
        seen.add(nid)
    ids = [nid for nid, _ in nodes]
    n = len(nodes)
    if ids != list(range(n)):
        raise ValidationError("seed node ids must be the dense range 0..n-1 in insertion order")
    years = np.array([y for _, y in nodes], dtype=np.int64)

    edges = [(int(u), int(v)) for u, v in seed_edges]
    seen_edges: set[tuple[int, int]] = set()
    for u, v in edges:
        if not (0 <= u < n and 0 <= v < n):
            raise ValidationError(f"seed edge ({u}, {v}) references a missing node")
        if u == v:
            raise ValidationError(f"seed edge ({u}, {v}) is a self-citation")
        if v > u:
            raise ValidationError(
                f"seed edge ({u}, {v}) cites a later insertion position")
        if years[u] < years[v]:
            raise ValidationError(
                f"seed edge ({u}, {v}) cites a later year ({years[v]} > {years[u]})")
        if (u, v) in seen_edges:
            raise ValidationError(f"duplicate seed edge ({u}, {v})")
        seen_edges.add((u, v))

    edges_arr = np.array(edges, dtype=np.int64).reshape(-1, 2)
    out_deg = (np.bincount(edges_arr[:, 0], minlength=n)
               if edges else np.zeros(n, dtype=np.int64))

    rng = np.random.default_rng(rng_seed)
    fitness = (sample_fitness(rng, model.alpha, model.xm, size=n)
               if model.uses_fitness else np.ones(n, dtype=np.float64))
    if model.kind is ModelKind.LBM:
        locations = sample_location_uniform(rng, model.dim, size=n)
    elif model.kind is ModelKind.LBMG:
        locations = sample_location_active(rng, initial_subspace(model), size=n)
    else:
        locations = np.zeros((n, 0), dtype=np.float64)

    return GrowthGraph(
        years=years,
        sub_years=np.zeros(n, dtype=np.float64),
        fitness=fitness,
        locations=locations,
        out_degrees=out_deg,
        edges=edges_arr,
        n_seed=n,
    )


def run_simulation(seed: GrowthGraph, schedule: YearSchedule, model: ModelSpec,
                   rng_seed: int, events: list | None = None) -> GrowthGraph:
    """Grow `seed` through `schedule` under `model`.

    Within a year of m insertions the j-th new node gets sub-year position
    j/m. For lbm-g the subspace-mean clock starts at the first scheduled
    year and is checked after every insertion, applying as many shifts as
    the elapsed time (or node count) owes.

    Pass a list as `events` to collect one SelectionEvent per insertion.
    Returns a new GrowthGraph; the seed graph is left untouched. An empty
    schedule returns the seed unchanged.
    """
    if model.uses_location and seed.dim != model.dim:
        raise ValidationError(
            f"seed graph carries dim-{seed.dim} locations but model needs dim {model.dim}; "
            "build the seed with init_from_seed under the same model")
    if not model.uses_location and seed.dim != 0:
        raise ValidationError("seed graph has locations but the model uses none")

    years_plan = schedule.years
    if not years_plan:
        return seed
    if seed.n_nodes and min(years_plan) <= int(seed.years.max()):
        raise ValidationError(
            f"schedule year {min(years_plan)} does not lie strictly after the "
            f"last seed year {int(seed.years.max())}")

    n_seed = seed.n_nodes
    n_total = n_seed + schedule.total_nodes
    m_total = seed.n_edges + schedule.total_edges

    years = np.empty(n_total, dtype=np.int64)
    sub_years = np.empty(n_total, dtype=np.float64)
    fitness = np.empty(n_total, dtype=np.float64)
    dim = seed.dim
    locations = np.empty((n_total, dim), dtype=np.float64)
    out_deg = np.empty(n_total, dtype=np.int64)
    edges = np.empty((m_total, 2), dtype=np.int64)

    years[:n_seed] = seed.years
    sub_years[:n_seed] = seed.sub_years
    fitness[:n_seed] = seed.fitness
    locations[:n_seed] = seed.locations
    out_deg[:n_seed] = seed.out_degrees
    edges[:seed.n_edges] = seed.edges

    in_deg = np.zeros(n_total, dtype=np.float64)
    if seed.n_edges:
        in_deg[:n_seed] = np.bincount(seed.edges[:, 1], minlength=n_seed)
    out_deg_f = np.zeros(n_total, dtype=np.float64)
    out_deg_f[:n_seed] = seed.out_degrees

    rng = np.random.default_rng(rng_seed)
    kind = model.kind
    in_plus_one = model.degree_mode == "in-plus-one"
    lbmg = kind is ModelKind.LBMG
    subspace = initial_subspace(model) if lbmg else None
    last_shift_time = float(years_plan[0])
    nodes_since_shift = 0
    shifts = 0
    fallback_fills = 0

    n = n_seed
    e = seed.n_edges
    for year in years_plan:
        degs = schedule.entries[year]
        m = len(degs)
        for j, k in enumerate(degs):
            if k > n:
                raise SimulationError(
                    f"year {year}: scheduled out-degree {k} exceeds the {n} existing nodes")

            new_fitness = (sample_fitness(rng, model.alpha, model.xm)
                           if model.uses_fitness else 1.0)
            if kind is ModelKind.LBM:
                new_loc = sample_location_uniform(rng, model.dim)
            elif lbmg:
                new_loc = sample_location_active(rng, subspace)
            else:
                new_loc = None

            eff = in_deg[:n] + 1.0 if in_plus_one else in_deg[:n] + out_deg_f[:n]
            if model.uses_location:
                gamma = gamma_value(model.gamma, n)
                w = attachment_weights(kind, eff, fitness=fitness[:n],
                                       locations=locations[:n], new_location=new_loc,
                                       gamma=gamma)
            elif kind is ModelKind.BA:
                w = eff
            else:
                w = attachment_weights(kind, eff, fitness=fitness[:n])

            n_pos = int(np.count_nonzero(w > 0.0))
            k_main = min(k, n_pos)
            targets = (sample_without_replacement(w, k_main, rng)
                       if k_main else np.empty(0, dtype=np.int64))
            if k_main < k:
                pool = np.setdiff1d(np.arange(n, dtype=np.int64), targets,
                                    assume_unique=True)
                extra = rng.choice(pool, size=k - k_main, replace=False)
                fallback_fills += k - k_main
                targets = np.sort(np.concatenate([targets, extra]))

            years[n] = year
            sub_years[n] = j / m
            fitness[n] = new_fitness
            if dim:
                locations[n] = new_loc
            out_deg[n] = k
            out_deg_f[n] = k
            edges[e:e + k, 0] = n
            edges[e:e + k, 1] = targets
            in_deg[targets] += 1.0
            if events is not None:
                events.append(SelectionEvent(n, frozenset(int(t) for t in targets)))
            e += k
            n += 1

            if lbmg:
                nodes_since_shift += 1
                t_now = year + (j + 1) / m
                while shift_due(model.shift, t_now - last_shift_time, nodes_since_shift):
                    subspace = shift_subspace(subspace, model.rho, rng)
                    shifts += 1
                    if model.shift.unit == "months":
                        last_shift_time += model.shift.every / 12.0
                    else:
                        nodes_since_shift = 0

    return GrowthGraph(
        years=years, sub_years=sub_years, fitness=fitness, locations=locations,
        out_degrees=out_deg, edges=edges, n_seed=n_seed,
        fallback_fills=fallback_fills, subspace_shifts=shifts,
    )
