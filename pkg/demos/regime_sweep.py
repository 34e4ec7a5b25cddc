"""Sweep the decay regime of the location-based model and rank the fits.

Each grid point grows its own networks (two seeded runs here), classifies
them, and is scored by squared Jensen-Shannon distance to the MAS mix.
"""

from citegrow import (
    corpus_like_schedule,
    mas_reference,
    model_grid,
    sweep,
    synthetic_seed,
)


def main() -> None:
    seed_net = synthetic_seed()
    schedule = corpus_like_schedule(n_nodes=5000)
    points = model_grid(
        "lbm",
        {"gamma_regime": ["const", "linear", "sqrt", "log"]},
        {"gamma_const": 1.0},
    )
    print(f"sweeping {len(points)} locality regimes, 2 runs per point, "
          f"{schedule.total_nodes} nodes each")

    result = sweep(points, seed_net, schedule, mas_reference(),
                   cutoff_year=1991, horizon_year=2000,
                   runs_per_point=2, rng_seed=1)

    print()
    print(f"{'regime':<8} {'jsd2':>8}   er/fr/lr/sr/ot")
    for row in result.rows:  # already sorted best first
        mix = "/".join(f"{p:.3f}" for p in row.distribution.proportions)
        mark = "  <- best" if row.best else ""
        print(f"{row.params['gamma_regime']:<8} {row.jsd2:8.4f}   {mix}{mark}")

    print()
    print("Scores here are dominated by how much mass escapes 'ot', so the")
    print("most local regime tends to win at small scale by minting local")
    print("stars. Rankings tighten as the corpus grows.")


if __name__ == "__main__":
    main()
