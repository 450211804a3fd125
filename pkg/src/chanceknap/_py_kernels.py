"""Pure NumPy engine loops; reference implementation for the compiled core.

The compiled module ``chanceknap._speedups`` exposes the same two functions
with identical signatures, consumes the random streams in exactly the same
order (one uniform per bit, one per power-law draw, one per bounded integer
via ``int(u * k)``), and mirrors the fitness arithmetic operation for
operation.  On instances with integer expected profits the two produce
bit-identical trajectories.
"""

from __future__ import annotations

import math

import numpy as np


def _record(traj_e, traj_p, evals, best_p, stride, budget):
    if evals == 1 or evals % stride == 0 or evals == budget:
        if not traj_e or traj_e[-1] != evals:
            traj_e.append(evals)
            traj_p.append(best_p)


def _evaluate(bits, weights, mus, capacity, use_cheb, delta, d2, ratio, hoef_t):
    weight = int(weights @ bits)
    mu = float(mus @ bits)
    ones = int(bits.sum())
    over = weight - capacity
    u = float(over) if over > 0 else 0.0
    if use_cheb:
        v = ones * d2 / 3.0
        p = mu - math.sqrt(ratio * v)
    else:
        p = mu - delta * math.sqrt(hoef_t * ones)
    return u, p


def one_plus_one(weights, mus, capacity, delta, alpha, use_cheb,
                 budget, stride, heavy, power_cdf, init_gen, mut_gen):
    """(1+1) loop: mutate, evaluate, accept offspring on >=."""
    n = len(weights)
    d2 = delta * delta
    ratio = (1.0 - alpha) / alpha
    hoef_t = math.log(1.0 / alpha) * 2.0
    flip_p = 1.0 / n

    x = (init_gen.random(n) < 0.5).astype(np.uint8)
    u_x, p_x = _evaluate(x, weights, mus, capacity, use_cheb, delta,
                         d2, ratio, hoef_t)
    evals = 1
    traj_e: list = []
    traj_p: list = []
    _record(traj_e, traj_p, evals, p_x, stride, budget)

    while evals < budget:
        if heavy:
            theta = int(np.searchsorted(power_cdf, mut_gen.random(),
                                        side="right")) + 1
            p_mut = theta / n
        else:
            p_mut = flip_p
        y = x ^ (mut_gen.random(n) < p_mut).astype(np.uint8)
        u_y, p_y = _evaluate(y, weights, mus, capacity, use_cheb, delta,
                             d2, ratio, hoef_t)
        evals += 1
        if u_y < u_x or (u_y == u_x and p_y >= p_x):
            x, u_x, p_x = y, u_y, p_y
        _record(traj_e, traj_p, evals, p_x, stride, budget)

    return (x, u_x, p_x, evals,
            np.asarray(traj_e, dtype=np.int64),
            np.asarray(traj_p, dtype=np.float64))


def mu_plus_one(weights, mus, capacity, delta, alpha, use_cheb,
                budget, stride, mu_size, pc, power_cdf,
                init_gen, sel_gen, coin_gen, mut_gen):
    """Steady-state loop: crossover with probability pc, heavy-tail mutation
    always; offspring replaces the first of its parents it weakly beats."""
    n = len(weights)
    d2 = delta * delta
    ratio = (1.0 - alpha) / alpha
    hoef_t = math.log(1.0 / alpha) * 2.0

    pop = (init_gen.random((mu_size, n)) < 0.5).astype(np.uint8)
    u_arr = np.empty(mu_size)
    p_arr = np.empty(mu_size)
    evals = 0
    best_idx = 0
    traj_e: list = []
    traj_p: list = []
    for k in range(mu_size):
        u_arr[k], p_arr[k] = _evaluate(pop[k], weights, mus, capacity,
                                       use_cheb, delta, d2, ratio, hoef_t)
        evals += 1
        if k == 0 or _strictly_better(u_arr[k], p_arr[k],
                                      u_arr[best_idx], p_arr[best_idx]):
            best_idx = k
        _record(traj_e, traj_p, evals, p_arr[best_idx], stride, budget)

    while evals < budget:
        crossed = coin_gen.random() < pc
        if crossed:
            i = int(sel_gen.random() * mu_size)
            j = int(sel_gen.random() * (mu_size - 1))
            if j >= i:
                j += 1
            z = _crossover(pop[i], pop[j], weights, mus, capacity,
                           delta, hoef_t)
        else:
            i = int(sel_gen.random() * mu_size)
            j = -1
            z = pop[i].copy()
        theta = int(np.searchsorted(power_cdf, mut_gen.random(),
                                    side="right")) + 1
        z ^= (mut_gen.random(n) < theta / n).astype(np.uint8)
        u_z, p_z = _evaluate(z, weights, mus, capacity, use_cheb, delta,
                             d2, ratio, hoef_t)
        evals += 1

        slot = -1
        if u_z < u_arr[i] or (u_z == u_arr[i] and p_z >= p_arr[i]):
            slot = i
        elif crossed and (u_z < u_arr[j] or (u_z == u_arr[j] and p_z >= p_arr[j])):
            slot = j
        if slot >= 0:
            pop[slot] = z
            u_arr[slot], p_arr[slot] = u_z, p_z
            if slot == best_idx or _strictly_better(u_z, p_z, u_arr[best_idx],
                                                    p_arr[best_idx]):
                best_idx = slot
        _record(traj_e, traj_p, evals, p_arr[best_idx], stride, budget)

    return (pop[best_idx].copy(), float(u_arr[best_idx]), float(p_arr[best_idx]),
            evals, np.asarray(traj_e, dtype=np.int64),
            np.asarray(traj_p, dtype=np.float64))


def _strictly_better(u_a, p_a, u_b, p_b):
    return u_a < u_b or (u_a == u_b and p_a > p_b)


def _crossover(xb, yb, weights, mus, capacity, delta, hoef_t):
    same = xb == yb
    z = np.where(same, xb, 0).astype(np.uint8)
    differing = np.nonzero(~same)[0]
    if len(differing) == 0:
        return z
    ones_z = int(z.sum())
    disc = delta * (math.sqrt(hoef_t * (ones_z + 1))
                    - math.sqrt(hoef_t * ones_z))
    p_prime = mus[differing] - disc
    ratios = p_prime / weights[differing]
    order = np.lexsort((differing, -ratios))
    weight_z = int(weights @ z)
    for pos in order:
        item = int(differing[pos])
        w_i = int(weights[item])
        if weight_z + w_i <= capacity:
            z[item] = 1
            weight_z += w_i
    return z
