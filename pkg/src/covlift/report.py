"""Task execution and reporting for job files.

Each task produces a table written as tab-separated values; lifting
tasks additionally render a figure of quotient orders per round next to
the table.  Output is deterministic: no timings or environment data.
"""

import os
from dataclasses import dataclass

import numpy as np

from .cohom import build_param_rws, cocycle_oracle, h2_basis
from .covers import cover_Ve, evaluate_in, fox_derivative, wreath_p_cover
from .fields import DEFAULT_SEED
from .hybrid import schreier_kernel, structure_string
from .jobs import image_words
from .lifting import EpiState, iterate, lift_by_module, structure_layers
from .modrep import classify_simples


class VerificationError(Exception):
    """An independent cross-check contradicted a computed result."""


@dataclass
class TaskResult:
    kind: str
    header: tuple
    rows: list
    comments: list
    figure_orders: list  # orders per round, or empty if no figure applies

    def tsv(self):
        lines = ["\t".join(self.header)]
        for row in self.rows:
            lines.append("\t".join(str(x) for x in row))
        for c in self.comments:
            lines.append("# " + c)
        return "\n".join(lines) + "\n"


def _layer_text(layer):
    if not layer:
        return "-"
    return "+".join("%d^%d" % (p, dim * copies) if dim * copies > 1
                    else str(p) for (p, dim, copies) in layer)


def _verdict_text(verdicts):
    if not verdicts:
        return "-"
    return ",".join("%d:%s" % (i, v) for i, v in sorted(verdicts.items()))


# ---------------------------------------------------------------------------
# independent audits used by --verify


def _audit_confluence(H):
    if not H.rws.is_confluent():
        raise VerificationError("rewriting system for the base group is "
                                "not confluent")


def _audit_fox(H, p, rng, count=50):
    """Leibniz rule on random free words, against the defining formula."""
    ngens = len(H.images)
    for _ in range(count):
        u = tuple(int(rng.integers(1, ngens + 1)) * int(rng.choice((1, -1)))
                  for _ in range(int(rng.integers(0, 7))))
        v = tuple(int(rng.integers(1, ngens + 1)) * int(rng.choice((1, -1)))
                  for _ in range(int(rng.integers(0, 7))))
        for i in range(ngens):
            lhs = fox_derivative(u + v, i, H, p)
            rhs = (fox_derivative(u, i, H, p)
                   .right_mul(H, evaluate_in(H, v))
                   + fox_derivative(v, i, H, p))
            if lhs != rhs:
                raise VerificationError("Fox derivative fails the Leibniz "
                                        "rule on a random word pair")


def _audit_cocycles(H, p, catalog, max_order=24, max_dim=4):
    """Brute-force two-cocycle spaces for every small enough module.

    The oracle builds |H|^3 d equations in |H|^2 d unknowns, so the cap
    stays well below the defaults of cocycle_oracle itself."""
    if H.order > max_order:
        return
    from .cohom import ModuleOnBase
    for entry in catalog:
        if entry.d > max_dim:
            continue
        module = ModuleOnBase.from_representation(entry.rep)
        expected = cocycle_oracle(H.rws, module, max_order=max_order,
                                  max_dim=max_dim)
        prws = build_param_rws(H, module)
        if h2_basis(prws).dim != expected:
            raise VerificationError(
                "cohomology dimension disagrees with the brute-force "
                "cocycle count for module %d" % entry.index)


def _audit_schreier(H, p, e, cap=200):
    """Replay a kernel computation with the coset-table oracle."""
    if H.order > cap:
        return
    cov = wreath_p_cover(H, p, e, cap=cap)
    alt = schreier_kernel(cov.group, cov.images)
    if len(alt) != cov.kernel.dim:
        raise VerificationError("kernel dimension disagrees with the "
                                "coset-enumeration oracle")


# ---------------------------------------------------------------------------
# task runners


def _seed(options):
    text = options.get("seed")
    return DEFAULT_SEED if text is None else int(text, 0)


def _module_indices(options, catalog):
    sel = options.get("module", options.get("modules", "all"))
    if sel == "all":
        return list(range(len(catalog)))
    indices = [int(x) for x in sel.split(",")]
    for i in indices:
        if not 0 <= i < len(catalog):
            raise ValueError("module index %d out of range (catalog has %d)"
                             % (i, len(catalog)))
    return indices


def run_simples(job, task, verify=False):
    H = job.groups[task.options["group"]].concrete()
    p = int(task.options["p"])
    if verify:
        _audit_confluence(H)
    catalog = classify_simples(H, p, seed=_seed(task.options))
    rows = [(e.index, e.d, e.k, e.r) for e in catalog]
    return TaskResult("simples",
                      ("module", "dim", "endo_degree", "multiplicity"),
                      rows, ["group order %d, p = %d" % (H.order, p)], [])


def run_h2(job, task, verify=False):
    H = job.groups[task.options["group"]].concrete()
    p = int(task.options["p"])
    if verify:
        _audit_confluence(H)
    catalog = classify_simples(H, p, seed=_seed(task.options))
    if verify:
        _audit_cocycles(H, p, catalog)
    rows = []
    from .cohom import ModuleOnBase, coboundary_space, cocycle_space
    for i in _module_indices(task.options, catalog):
        entry = catalog[i]
        module = ModuleOnBase.from_representation(entry.rep)
        prws = build_param_rws(H, module)
        X = cocycle_space(prws)
        B = coboundary_space(prws)
        h2 = h2_basis(prws)
        rows.append((entry.index, entry.d, len(X), len(B), h2.dim))
    return TaskResult("h2",
                      ("module", "dim", "cocycles", "coboundaries", "h2"),
                      rows, ["group order %d, p = %d" % (H.order, p)], [])


def run_cover(job, task, verify=False):
    H = job.groups[task.options["group"]].concrete()
    p = int(task.options["p"])
    if verify:
        _audit_confluence(H)
        _audit_fox(H, p, np.random.default_rng(_seed(task.options)))
    catalog = classify_simples(H, p, seed=_seed(task.options))
    e = int(task.options.get("e", len(job.groups[task.options["group"]].gens)))
    rows = []
    for i in _module_indices(task.options, catalog):
        entry = catalog[i]
        cov = cover_Ve(H, entry, e, catalog)
        rows.append((entry.index, entry.d, e, H.order,
                     cov.kernel.dim, cov.order))
    return TaskResult("cover",
                      ("module", "dim", "e", "factor_order",
                       "kernel_dim", "cover_order"),
                      rows, ["p = %d" % p], [])


def _build_state(job, task):
    m = job.maps[task.options["map"]]
    gdef = job.groups[m.src]
    H = job.groups[m.dst].concrete()
    p = int(task.options["p"])
    return EpiState(gdef.presentation(), H, image_words(job, m), p,
                    seed=_seed(task.options))


def run_lift(job, task, verify=False):
    state = _build_state(job, task)
    if verify:
        _audit_confluence(state.h0)
        _audit_cocycles(state.h0, state.p, state.catalog)
        _audit_schreier(state.h0, state.p, state.e)
    rows = []
    for i in _module_indices(task.options, state.catalog):
        prep = state.preps[i]
        res = lift_by_module(state, prep)
        if res is None:
            rows.append((prep.entry.index, prep.entry.d, "unchanged",
                         state.order))
        else:
            rows.append((prep.entry.index, prep.entry.d, "lifts",
                         res.quotient.order))
    return TaskResult("lift",
                      ("module", "dim", "verdict", "quotient_order"),
                      rows, ["base order %d, p = %d"
                             % (state.h0.order, state.p)], [])


def run_iterate(job, task, verify=False):
    state = _build_state(job, task)
    if verify:
        _audit_confluence(state.h0)
        _audit_fox(state.h0, state.p,
                   np.random.default_rng(_seed(task.options)))
        _audit_cocycles(state.h0, state.p, state.catalog)
        _audit_schreier(state.h0, state.p, state.e)
    rounds = int(task.options.get("rounds", 10))
    maxdim = int(task.options.get("maxdim", 8))
    iterate(state, rounds, maxdim=maxdim)
    rows = []
    for rec in state.history:
        rows.append((rec.round, rec.order, _layer_text(rec.layer),
                     _verdict_text(rec.verdicts),
                     "yes" if rec.fixed_point else "no"))
    name = job.groups[job.maps[task.options["map"]].dst].name
    comments = ["structure %s"
                % structure_string(structure_layers(state), name)]
    orders = [rec.order for rec in state.history]
    return TaskResult("iterate",
                      ("round", "order", "kernel_layer", "verdicts",
                       "fixed_point"),
                      rows, comments, orders)


RUNNERS = {"simples": run_simples, "h2": run_h2, "cover": run_cover,
           "lift": run_lift, "iterate": run_iterate}


def render_orders_figure(orders, path):
    """Plot quotient order against lifting round and save as an image."""
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(range(len(orders)), orders, marker="o")
    ax.set_yscale("log", base=2)
    ax.set_xlabel("round")
    ax.set_ylabel("quotient order")
    ax.set_xticks(range(len(orders)))
    ax.grid(True, which="both", alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def run_job(job, outdir=None, verify=False, log=None):
    """Run every task in a job; write TSV (and figures) under outdir."""
    results = []
    for n, task in enumerate(job.tasks, start=1):
        result = RUNNERS[task.kind](job, task, verify=verify)
        results.append(result)
        if outdir is not None:
            os.makedirs(outdir, exist_ok=True)
            stem = "task%02d_%s" % (n, task.kind)
            tsv_path = os.path.join(outdir, stem + ".tsv")
            with open(tsv_path, "w") as fh:
                fh.write(result.tsv())
            if log:
                log("wrote %s" % tsv_path)
            if result.figure_orders:
                png_path = os.path.join(outdir, stem + "_orders.png")
                render_orders_figure(result.figure_orders, png_path)
                if log:
                    log("wrote %s" % png_path)
        if log and outdir is None:
            log(result.tsv().rstrip("\n"))
    return results
