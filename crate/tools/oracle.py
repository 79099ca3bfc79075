"""Independent NumPy reference runs used to pin the Monte Carlo constants
frozen into the Rust acceptance tests.

Shares no code or random stream with the Rust crate: graphs are drawn with
numpy's PCG64, spectra come from LAPACK (eigh / eigvalsh).

    python3 tools/oracle.py sweep|fig1|sbm|normgap|bounds
"""
import json
import sys

import numpy as np


def sample_upper(rng, n):
    u = np.triu(rng.random((n, n)), 1)
    return u + u.T + 2.0 * np.eye(n)  # diagonal never thresholds below 1


def lap(m):
    d = m.sum(axis=1)
    s = 1.0 / np.sqrt(d)
    return np.eye(len(d)) - s[:, None] * m * s[None, :]


def reg(m, tau):
    return m + tau / len(m)


def norm(m):
    w = np.linalg.eigvalsh(m)
    return max(abs(w[0]), abs(w[-1]))


def profile(n, low=7.0, high=35.0, frac=0.1):
    n_low = int(np.floor((1 - frac) * n))
    w = np.where(np.arange(n) < n_low, low, high)
    p = np.outer(w, w) / w.sum()
    np.fill_diagonal(p, 0.0)
    return p


def homog(n, p):
    m = np.full((n, n), p)
    np.fill_diagonal(m, 0.0)
    return m


def sbm(n, a, b):
    half = np.arange(n) < n // 2
    same = half[:, None] == half[None, :]
    m = np.where(same, a / n, b / n)
    np.fill_diagonal(m, 0.0)
    return m


def sweep(seeds=50, n=500, tau=5.0):
    grid = np.exp(np.linspace(np.log(2 * np.log(n) / n), 0.0, 32))
    out = {"l2": [], "max": [], "lap": []}
    for s in range(seeds):
        rng = np.random.default_rng(1000 + s)
        u = sample_upper(rng, n)
        sup = {"l2": 0.0, "max": 0.0, "lap": 0.0}
        for p in grid:
            a = (u < p).astype(float)
            diff = a.sum(axis=1) - (n - 1) * p
            np_ = n * p
            sup["l2"] = max(sup["l2"], np.linalg.norm(diff) / (n * np.sqrt(p)))
            sup["max"] = max(sup["max"], np.abs(diff).max() / np_ ** 0.75)
            dl = norm(lap(reg(a, tau)) - lap(reg(homog(n, p), tau)))
            sup["lap"] = max(sup["lap"], dl * tau / (np_ * (np_ / tau + 1) ** 2))
        for k in out:
            out[k].append(sup[k])
    return {k: {"max": max(v), "median": float(np.median(v))} for k, v in out.items()}


def fig1(trials=10, n=1000, taus=(0.1, 7.0, 35.0, 245.0)):
    p = profile(n)
    stds = {t: [] for t in taus}
    for s in range(trials):
        rng = np.random.default_rng(2000 + s)
        a = (sample_upper(rng, n) < p).astype(float)
        for t in taus:
            stds[t].append(np.linalg.eigvalsh(lap(reg(a, t))).std())
    return {str(t): {"mean": float(np.mean(v)), "sd": float(np.std(v))} for t, v in stds.items()}


def sbm_run(seeds=100, n=600, a=40.0, b=5.0):
    pm = sbm(n, a, b)
    planted = np.where(np.arange(n) < n // 2, 1, -1)
    errs, ratios, deltas = [], [], []
    for s in range(seeds):
        rng = np.random.default_rng(3000 + s)
        adj = (sample_upper(rng, n) < pm).astype(float)
        tau = 2 * adj.sum() / n
        lo, le = lap(reg(adj, tau)), lap(reg(pm, tau))
        wo, vo = np.linalg.eigh(lo)
        we, ve = np.linalg.eigh(le)
        delta = min(we[1] - we[0], we[2] - we[1])
        labels = np.where(vo[:, 1] >= 0, 1, -1)
        err = np.mean(labels != planted)
        errs.append(min(err, 1 - err))
        x, y = vo[:, 1], ve[:, 1]
        align = min(np.linalg.norm(x - y), np.linalg.norm(x + y))
        ratios.append(align / (2 * norm(lo - le) / delta))
        deltas.append(delta)
    errs = np.array(errs)
    return {
        "within_2pct": int((errs <= 0.02).sum()),
        "max_err": float(errs.max()),
        "median_err": float(np.median(errs)),
        "max_dk_ratio": float(max(ratios)),
        "delta_median": float(np.median(deltas)),
    }


def normgap(seeds=20, p=0.5, ns=(100, 200, 400, 800, 1600)):
    med = []
    for n in ns:
        g = []
        for s in range(seeds):
            rng = np.random.default_rng(4000 + 7 * n + s)
            a = (sample_upper(rng, n) < p).astype(float)
            g.append(abs(np.linalg.eigvalsh(lap(a))[-1] - 1.0))
        med.append(float(np.median(g)))
    x = np.log(np.array(ns) * p)
    slope = np.polyfit(x, np.log(med), 1)[0]
    return {"medians": med, "slope": float(slope)}


def bounds(trials=200, n=1000, q=0.99):
    p = profile(n)
    d = n * p.max()
    taus = [d / 10, d / 3, d, 3 * d, 10 * d, 100 * d]
    dev = {t: [] for t in taus}
    for s in range(trials):
        rng = np.random.default_rng(5000 + s)
        a = (sample_upper(rng, n) < p).astype(float)
        for t in taus:
            dev[t].append(norm(lap(reg(a, t)) - lap(reg(p, t))))
    shape = lambda t: t ** -0.5 * (1 + d / t) ** 0.5
    k = int(np.ceil(q * trials))
    qs = {t: float(np.sort(v)[k - 1]) for t, v in dev.items()}
    c = qs[d] / shape(d)
    return {
        "d": d,
        "C": c,
        "rows": [
            {"tau": t, "q99": qs[t], "bound": c * shape(t), "median": float(np.median(dev[t]))}
            for t in taus
        ],
    }


if __name__ == "__main__":
    which = sys.argv[1]
    result = {"sweep": sweep, "fig1": fig1, "sbm": sbm_run, "normgap": normgap, "bounds": bounds}[which]()
    print(json.dumps(result, indent=1))
