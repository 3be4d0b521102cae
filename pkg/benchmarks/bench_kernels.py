"""Compare the compiled and pure-Python kernel backends.

Run with ``python3 benchmarks/bench_kernels.py [--repeat N]``.  Each workload
is timed through the public API with the backend switched underneath, and
the results of both backends are checked to agree before timings are shown.
"""
import argparse
import timeit

import numpy as np

from hypcone import gh, kernels, tube, volume


def _line_space(n, seed):
    rng = np.random.default_rng(seed)
    x = np.sort(rng.uniform(0, 4, n))
    return gh.FinitePointedMetricSpace(np.abs(x[:, None] - x[None, :]))


def workloads():
    X, Y = _line_space(4, 1), _line_space(5, 2)
    rng = np.random.default_rng(3)
    cloud = rng.uniform(-1, 1, (25, 2))
    cloud[0] = 0.0
    plane = gh.FinitePointedMetricSpace(np.linalg.norm(cloud[:, None] - cloud[None, :], axis=2))
    a = rng.normal(size=2000) + 1j * rng.normal(size=2000)
    b = rng.normal(size=2000) + 1j * rng.normal(size=2000)
    T = tube.Tube(sigma=0.7, delta=1.1, theta=1.3, tau=0.2)
    F = tube.boundary_torus(T)
    u, v = kernels.gauss_reduce(F.a, F.b)
    pts = rng.uniform(0, 1, 150) * F.a + rng.uniform(0, 1, 150) * F.b
    theta = np.linspace(-np.pi, np.pi, 20001)
    return {
        "min_eps exact (4x5 points)": lambda: gh.min_eps(X, Y, "exact").value,
        "covering number exact (25 points)": lambda: gh.covering_number(plane, 3.0, 0.6, "exact").count,
        "gauss_reduce_many (2000)": lambda: kernels.gauss_reduce_many(a, b)[0],
        "torus distance (150 points)": lambda: kernels.torus_distance_matrix(pts, u, v, 2),
        "clausen (20001 points)": lambda: volume.clausen(theta),
    }


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    backends = list(kernels.available_backends())
    if "cython" not in backends:
        print("compiled backend not built; only the Python backend is timed")
    jobs = workloads()
    print(f"{'workload':38s}" + "".join(f"{b:>12s}" for b in backends) + ("     speedup" if len(backends) > 1 else ""))
    for name, fn in jobs.items():
        times, results = [], []
        for b in backends:
            with kernels.use_backend(b):
                results.append(fn())
                n, _ = timeit.Timer(fn).autorange()
                t = min(timeit.repeat(fn, number=n, repeat=args.repeat)) / n
            times.append(t)
        if len(results) > 1:
            assert np.allclose(np.asarray(results[0]), np.asarray(results[1]), rtol=1e-12, atol=1e-12), name
        line = f"{name:38s}" + "".join(f"{t * 1e3:10.3f}ms" for t in times)
        if len(times) > 1:
            line += f"{times[0] / times[1]:11.1f}x"
        print(line)


if __name__ == "__main__":
    main()
