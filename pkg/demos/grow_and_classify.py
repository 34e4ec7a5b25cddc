"""Grow a small synthetic corpus under three attachment rules and compare
the resulting trajectory-category mixes against the MAS reference.

Runs in well under a minute; scale n_nodes up for sharper numbers.
"""

from citegrow import (
    CATEGORY_ORDER,
    category_distribution,
    corpus_like_schedule,
    derive_seed,
    init_from_seed,
    jsd2,
    make_model,
    mas_reference,
    run_simulation,
    synthetic_seed,
)

SEED = 7
CUTOFF, HORIZON = 1991, 2000


def main() -> None:
    seed_net = synthetic_seed()
    schedule = corpus_like_schedule(n_nodes=5000)
    print(f"seed network: {seed_net.n_nodes} nodes / {seed_net.n_edges} edges")
    print(f"schedule: {schedule.total_nodes} nodes, {schedule.total_edges} "
          f"citations over {schedule.years[0]}-{schedule.years[-1]}")
    print()

    reference = mas_reference()
    header = "  ".join(f"{cat.code:>6}" for cat in CATEGORY_ORDER)
    print(f"{'model':<12} {header}  {'jsd2':>8}")
    row = "  ".join(f"{p:6.3f}" for p in reference.proportions)
    print(f"{'reference':<12} {row}")

    for kind in ("ba", "af", "lbm"):
        model = make_model(kind)
        g = init_from_seed(seed_net.nodes, seed_net.edges, model,
                           derive_seed(SEED, 0, 0))
        g = run_simulation(g, schedule, model, derive_seed(SEED, 0, 1))
        dist = category_distribution(g, CUTOFF, HORIZON)
        score = jsd2(dist.proportions, reference.proportions)
        row = "  ".join(f"{p:6.3f}" for p in dist.proportions)
        print(f"{kind:<12} {row}  {score:8.4f}")

    print()
    print("Most mass lands in 'ot' at this scale: clearing the activity bar")
    print("(mean citations per year >= 1 over the whole history) takes more")
    print("citations than a 5k-node corpus hands out to a typical paper.")


if __name__ == "__main__":
    main()
