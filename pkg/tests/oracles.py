"""Independent reference computations used by the tests.

These are deliberately naive: a threshold sweep for sublevel persistence,
closed forms for lifted flows, and a hand trace of the hold/increment rule.
"""

from fractions import Fraction

import numpy as np


def cyclic_components(mask):
    """Number of runs of True in a cyclic boolean array (a full circle counts once)."""
    mask = np.asarray(mask, bool)
    if mask.all():
        return 1
    if not mask.any():
        return 0
    starts = mask & ~np.roll(mask, 1)
    return int(starts.sum())


def sweep_circle(values):
    """Sublevel sweep on a sampled circle.

    Returns (sorted finite bars, essential 0 birth, essential 1 birth) with
    bars produced by the elder rule, computed by re-labelling components from
    scratch at every threshold.
    """
    v = np.asarray(values, float)
    n = len(v)
    levels = np.unique(v)
    labels_prev = None
    births = {}
    bars = []
    for lv in levels:
        mask = v <= lv
        # label runs on the cycle
        lab = -np.ones(n, int)
        cur = 0
        start = int(np.argmin(mask)) if not mask.all() else 0
        for k in range(n):
            i = (start + k) % n
            if mask[i]:
                if lab[(i - 1) % n] >= 0 and k > 0:
                    lab[i] = lab[(i - 1) % n]
                else:
                    lab[i] = cur
                    cur += 1
        if mask.all():
            lab[:] = 0
        comps = {}
        for i in range(n):
            if lab[i] >= 0:
                comps.setdefault(lab[i], []).append(i)
        new_births = {}
        for members in comps.values():
            # components from the previous level that this one contains
            old = {labels_prev[i] for i in members if labels_prev is not None and labels_prev[i] >= 0}
            if not old:
                new_births[min(members)] = lv
                continue
            olds = sorted(((births[o], o) for o in old))
            eldest = olds[0]
            for b, o in olds[1:]:
                if lv > b:
                    bars.append((b, lv))
            new_births[min(members)] = eldest[0]
        # relabel so labels are keyed by the representative index
        relabel = -np.ones(n, int)
        births = {}
        for members in comps.values():
            key = min(members)
            relabel[members] = key
            births[key] = new_births[key]
        labels_prev = relabel
    return sorted(bars), float(v.min()), float(v.max())


def lifted_endpoint(f, q, n=1):
    """Image of (q, 0) under n iterates of a lifted f, and the action."""
    return q, -n * f.deriv(q), n * f(q)


def hold_increment_trace(n_max, lo=Fraction(1, 3), hi=Fraction(1, 2)):
    a = [1]
    holding = True
    for n in range(1, n_max):
        r = Fraction(a[-1], n)
        if holding and r < lo:
            holding = False
        elif not holding and r > hi:
            holding = True
        a.append(a[-1] if holding else a[-1] + 1)
    return a
