import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402


class Plotter:
    """Draws the feasible result points of a constraint pair, one figure per series length."""

    def __init__(self, dataset, save_dir, specifier=""):
        self.dataset = dataset
        self.save_dir = save_dir
        self.specifier = specifier

    def polytope(self, n, invariants=()):
        feasible = sorted(self.dataset.feasible[n])
        infeasible = sorted(self.dataset.infeasible[n])
        hull = list(self.dataset.hull[n])
        if feasible:
            plt.scatter(*zip(*feasible), marker="s", color="tab:blue", label="feasible")
        if infeasible:
            plt.scatter(*zip(*infeasible), marker="o", color="tab:red", label="infeasible")
        if len(hull) > 1:
            closed = hull + hull[:1]
            plt.plot(*zip(*closed), color="tab:red", linewidth=1)
        xs = range(0, max(x for x, _ in hull) + 2)
        for invariant in invariants:
            # e + e0*n + a*x + b*y = 0, drawn where b is non-zero.
            a, b = invariant.coeffs
            if b:
                plt.plot(xs, [-(invariant.e + invariant.e0 * n + a * x) / b for x in xs], "k--", linewidth=0.8)
        names = self.dataset.pair or ("R1", "R2")
        plt.xlabel(names[0])
        plt.ylabel(names[1])
        plt.title(f"Length: {n} {self.specifier}".strip())
        plt.legend(loc="upper left")
        path = self.save_dir / f"polytope_{n}{'_' + self.specifier if self.specifier else ''}.png"
        plt.savefig(path)
        plt.clf()
        return path

    def all_lengths(self, invariants=()):
        return [self.polytope(n, invariants) for n in self.dataset.lengths]
