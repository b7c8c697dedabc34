"""Exception types shared across the package."""


class BudgetExceededError(Exception):
    """An exact computation was refused because its cost exceeds the budget.

    Callers should fall back to the heuristic counterpart (and record that
    they did so).
    """


class ReductionFailedError(Exception):
    """reduce_until exhausted its rounds without meeting the target distortion.

    Carries the best attempt so callers can inspect or report it.
    """

    def __init__(self, message, best_map=None, best_report=None, rounds=0):
        super().__init__(message)
        self.best_map = best_map
        self.best_report = best_report
        self.rounds = rounds
