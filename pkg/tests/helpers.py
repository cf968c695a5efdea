"""Random structures shared by the unit and acceptance tests."""

from __future__ import annotations

from l2a.anchored import Anchor, DorfmanConnection, DullBracket
from l2a.bundles import Bundle, Chart, basis, vzero
from l2a.exactpoly import Poly
from l2a.rng import XorShift64Star, random_poly, random_vec


def random_dull_bracket(seed: int, n: int = 1, extra: int = 2, deg: int = 1,
                        skew: bool = False) -> DullBracket:
    """Dull bracket on ``TM ⊕ K`` over ``ℝ^n`` with anchor the projection.

    Frame brackets have no TM component, so anchor compatibility holds on
    frames and therefore on all sections; skewness and Jacobi are random.
    """
    rng = XorShift64Star(seed)
    ch = Chart(n)
    r = n + extra
    Q = Bundle("Q", r, ch)
    rows = [basis(n, n, i) for i in range(n)] + [vzero(n, n)] * extra
    anc = Anchor(Q, rows)
    T = [[None] * r for _ in range(r)]
    for i in range(r):
        for j in range(r):
            if skew and j < i:
                T[i][j] = tuple(-p for p in T[j][i])
                continue
            if skew and i == j:
                T[i][j] = vzero(n, r)
                continue
            T[i][j] = vzero(n, n) + random_vec(XorShift64Star(rng.next_u64()), n, extra, deg)
    return DullBracket(anc, T, skew=skew)


def random_dorfman(seed: int, n: int = 1, r: int = 3, deg: int = 1) -> DorfmanConnection:
    """Arbitrary Dorfman symbols on a rank-``r`` bundle with zero anchor."""
    rng = XorShift64Star(seed)
    Q = Bundle("Q", r, Chart(n))
    table = tuple(tuple(random_vec(rng, n, r, deg) for _ in range(r)) for _ in range(r))
    return DorfmanConnection(Anchor.zero(Q), table)


def random_sections(seed: int, n: int, r: int, count: int, deg: int = 2):
    rng = XorShift64Star(seed)
    return [random_vec(rng, n, r, deg) for _ in range(count)]


def random_scalar(seed: int, n: int, deg: int = 2) -> Poly:
    return random_poly(XorShift64Star(seed), n, deg)


def random_metric_connection(seed: int, n: int, deg: int = 1):
    """Metric TM-connection on the standard Courant algebroid over ``ℝ^n``.

    The canonical Gram matrix G is an involution, so ``Γ_a = S_a G`` with
    ``S_a`` skew makes ``Γ_a G = S_a`` skew, which is the metric condition.
    """
    from l2a.anchored import LinearConnection
    from l2a.courant import standard_courant, tangent_algebroid

    c = standard_courant(Chart(n))
    T = tangent_algebroid(Chart(n))
    rng = XorShift64Star(seed)
    r = 2 * n
    G = [[c.gram[i][j][0] for j in range(r)] for i in range(r)]
    table = []
    for _ in range(n):
        S = [[Poly.zero(n)] * r for _ in range(r)]
        for i in range(r):
            for j in range(i + 1, r):
                p = random_poly(rng, n, deg)
                S[i][j], S[j][i] = p, -p
        gam = [[sum((S[i][m] * G[m][k] for m in range(r)), Poly.zero(n)) for k in range(r)]
               for i in range(r)]
        table.append(tuple(tuple(row) for row in gam))
    return c, LinearConnection(T.anchor, c.E, tuple(table))


def catalog_commands(inst) -> list:
    """CLI invocations exercised for a catalog instance, as lists of extra args."""
    kind, tupled = inst.kind, isinstance(inst.payload, tuple)
    plan = {
        "split_lie2": [["check-lie2"], ["qsquare"], ["fat"], ["shift", "--seed", "5"]],
        "two_rep": [["check-two-rep"], ["semidirect"]],
        "matched_pair": [["check-matched-pair"], ["bicross"]],
        "courant": [["check-courant", "--samples", "2"]] + ([["adjoint"]] if tupled else []),
        "morphism": [["check-morphism"]],
        "shift": [["shift"]],
        "lie_algebroid": [["check-lie-algebroid"]] + ([["rep-lie2"]] if tupled else []),
    }
    return plan[kind]


def catalog_transcript(workdir: str) -> str:
    """Run every applicable CLI command on every catalog instance and return
    a transcript of exit codes and emitted bytes."""
    import contextlib
    import io
    import os

    from l2a import catalog as cat
    from l2a.cli import run
    from l2a.serialize import dump_instance

    lines = []
    for name in cat.catalog_names():
        inst = cat.get(name)
        path = os.path.join(workdir, f"{name}.json")
        dump_instance(inst, path)
        for cmd in catalog_commands(inst):
            buf = io.StringIO()
            with contextlib.redirect_stdout(buf), contextlib.redirect_stderr(io.StringIO()):
                code = run(cmd + ["--in", path])
            lines.append(f"## {name} {' '.join(cmd)} -> {code}\n{buf.getvalue()}")
    return "".join(lines)
