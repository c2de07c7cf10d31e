#!/usr/bin/env python3
"""Reference values for `rna norm` on tests/data/sample_norm.cfg.

Written separately from the C++ library, in 50-digit arithmetic:
  * TL norm: integrate over the elementary intervals cut out by all cube
    endpoints (one dimension only), no containment forest.
  * Lorentz norm: sort weighted magnitudes, closed form per step.
  * approximation norm: sigma(t) from all 2^n subsets, then the integral of
    [t^xi sigma(t)]^mu dt/t interval by interval.

Usage: golden.py [config] > golden.csv
"""

import itertools
import os
import sys

import mpmath as mp

mp.mp.dps = 50


def read_config(path):
    cfg = {}
    with open(path) as fh:
        for line in fh:
            line = line.split("#", 1)[0].strip()
            if line:
                k, v = (x.strip() for x in line.split("=", 1))
                cfg[k] = v
    return cfg


def read_seq(path):
    seq = []
    with open(path) as fh:
        for line in fh:
            line = line.split("#", 1)[0].split()
            if line:
                seq.append((int(line[0]), int(line[1]), mp.mpf(line[2])))
    return seq


def parse_space(spec):
    kind, rest = spec.split(":", 1)
    fields = dict(kv.split("=") for kv in rest.split(","))
    return kind, mp.mpf(fields["s"]), mp.mpf(fields["p"]), mp.inf if fields["q"] == "inf" else mp.mpf(fields["q"])


def volume(j):
    return mp.mpf(2) ** (-j)


def interval(j, k):
    return mp.mpf(k) * volume(j), mp.mpf(k + 1) * volume(j)


def tl_norm(seq, s, p, q):
    cuts = sorted({x for j, k, _ in seq for x in interval(j, k)})
    total = mp.mpf(0)
    for a, b in zip(cuts, cuts[1:]):
        mid = (a + b) / 2
        inner = mp.mpf(0)
        for j, k, v in seq:
            lo, hi = interval(j, k)
            if lo <= mid < hi:
                inner += (volume(j) ** (-s - mp.mpf(1) / 2) * abs(v)) ** q
        total += inner ** (p / q) * (b - a)
    return total ** (1 / p)


def besov_norm(seq, s, p, q):
    levels = {}
    for j, k, v in seq:
        levels[j] = levels.get(j, 0) + (volume(j) ** (-s + 1 / p - mp.mpf(1) / 2) * abs(v)) ** p
    return sum(x ** (q / p) for x in levels.values()) ** (1 / q)


def lorentz_power(seq, alpha, eta_p, mu, u):
    # eta(t) = t^(1/eta_p): integral of [t^(1/eta_p) v]^mu dt/t over [a, b)
    # is v^mu (eta_p / mu)(b^(mu/eta_p) - a^(mu/eta_p)).
    items = sorted(((u(j) * abs(v), volume(j) ** alpha) for j, k, v in seq), reverse=True)
    e = mu / eta_p
    total, t = mp.mpf(0), mp.mpf(0)
    for value, mass in items:
        total += value ** mu * ((t + mass) ** e - t ** e) / e
        t += mass
    return total ** (1 / mu)


def approx_norm(seq, alpha, space, xi, mu):
    _, s, p, q = space
    n = len(seq)
    pairs = []
    for mask in range(1 << n):
        kept = [seq[i] for i in range(n) if mask >> i & 1]
        rest = [seq[i] for i in range(n) if not mask >> i & 1]
        mass = sum((volume(j) ** alpha for j, _, _ in kept), mp.mpf(0))
        err = besov_norm(rest, s, p, q) if rest else mp.mpf(0)
        pairs.append((mass, err))
    pairs.sort()
    # Step function: sigma(t) = min err over mass <= t.
    steps, best = [], mp.inf
    for mass, err in pairs:
        if err < best:
            best = err
            steps.append((mass, err))
    total = mp.mpf(0)
    e = xi * mu
    for (a, err), (b, _) in zip(steps, steps[1:] + [(None, None)]):
        if b is None:
            assert err == 0
            break
        total += err ** mu * (b ** e - a ** e) / e
    return total ** (1 / mu)


def main():
    here = os.path.dirname(os.path.abspath(__file__))
    cfg_path = sys.argv[1] if len(sys.argv) > 1 else os.path.join(here, "..", "data", "sample_norm.cfg")
    cfg = read_config(cfg_path)
    seq = read_seq(os.path.join(os.path.dirname(cfg_path), cfg["input"]))
    assert cfg.get("dim", "1") == "1"

    s, p, q = (mp.mpf(cfg[k]) for k in ("s", "p", "q"))
    alpha = mp.mpf(cfg["alpha"])
    eta_kind, eta_p = cfg["lorentz.eta"].split(":")
    assert eta_kind == "power"
    eta_p = mp.mpf(eta_p.split("=")[1])
    _, us, up, _ = parse_space(cfg["lorentz.u"])
    u = lambda j: volume(j) ** (-us + 1 / up - mp.mpf(1) / 2)
    space = parse_space(cfg["approx.space"])
    assert space[0] == "besov" and space[2] == space[3]

    rows = [
        ("norm.approx", approx_norm(seq, alpha, space, mp.mpf(cfg["approx.xi"]), mp.mpf(cfg["approx.mu"]))),
        ("norm.besov", besov_norm(seq, s, p, q)),
        ("norm.lorentz", lorentz_power(seq, alpha, eta_p, mp.mpf(cfg["lorentz.mu"]), u)),
        ("norm.tl", tl_norm(seq, s, p, q)),
    ]
    print("experiment,value")
    for name, value in rows:
        print(f"{name},{mp.nstr(value, 20, strip_zeros=False)}")


if __name__ == "__main__":
    main()
