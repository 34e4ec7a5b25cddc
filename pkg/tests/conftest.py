import numpy as np
import pytest

from citegrow import GrowthGraph, SeedNetwork, YearSchedule


def graph_from_histories(histories, base_year: int = 2000):
    """GrowthGraph whose classified nodes have exactly these citation
    histories.

    One throwaway seed node (never classified), then one target node per
    history, all published at `base_year`; each citation at offset k > 0
    becomes a citing node published at base_year + k. Offset 0 must be
    empty because citers must land strictly after the cutoff to stay out
    of the classified set. Returns (graph, cutoff, horizon); histories
    are zero-padded to a common length.
    """
    length = max(len(h) for h in histories)
    padded = [list(h) + [0] * (length - len(h)) for h in histories]
    cutoff = base_year
    horizon = base_year + length - 1

    years = [base_year - 50]
    for _ in padded:
        years.append(base_year)
    edges = []
    for ti, hist in enumerate(padded):
        if hist[0] != 0:
            raise ValueError("offset-0 citations would need same-year citers")
        target = 1 + ti
        for offset, count in enumerate(hist):
            for _ in range(int(count)):
                years.append(base_year + offset)
                edges.append((len(years) - 1, target))
    n = len(years)
    edge_arr = np.array(edges, dtype=np.int64).reshape(-1, 2)
    out_deg = (np.bincount(edge_arr[:, 0], minlength=n)
               if len(edges) else np.zeros(n, dtype=np.int64))
    graph = GrowthGraph(
        years=np.array(years, dtype=np.int64),
        sub_years=np.zeros(n),
        fitness=np.ones(n),
        locations=np.zeros((n, 0)),
        out_degrees=out_deg,
        edges=edge_arr,
        n_seed=1,
    )
    return graph, cutoff, horizon


@pytest.fixture
def tiny_seed() -> SeedNetwork:
    """Four seed papers over two years, three internal citations."""
    return SeedNetwork(
        nodes=((0, 1970), (1, 1970), (2, 1972), (3, 1974)),
        edges=((2, 0), (3, 0), (3, 1)),
    )


@pytest.fixture
def tiny_schedule() -> YearSchedule:
    return YearSchedule({1976: [2, 1], 1977: [3], 1979: [2, 2, 1]})
