"""Derive crisp weights from one fuzzy comparison matrix and check them on a grid."""
import math

import numpy as np

from fuzzyprio import build_matrix, oracle_lambda, solve, validate

# three items compared with the same band everywhere: A > B, B > C and A > C
# by the same amount, which cannot all hold at the modal values
m = build_matrix(["A", "B", "C"], [("A", "B", (1, 2, 3)), ("B", "C", (1, 2, 3)), ("A", "C", (1, 2, 3))])
print(validate(m).messages)

res = solve(m)
print("weights:", np.round(res.weights, 5))
print("lambda :", res.lambda_, "closed form:", (math.sqrt(17) - 3) / 2)
print("bisection probes:", res.iterations, "witness residual:", res.residual)

# brute force over the barycentric grid agrees to grid resolution
print("grid lambda:", oracle_lambda(m, grid_steps=500))

# a consistent matrix reaches lambda = 1 and returns the generating weights
w = np.array([4, 2, 1]) / 7
consistent = build_matrix(["A", "B", "C"], [("A", "B", (1, 2, 3)), ("B", "C", (1, 2, 3)), ("A", "C", (3, 4, 5))])
res = solve(consistent)
print("consistent:", res.lambda_, np.abs(res.weights - w).max())

# judgments that contradict each other give a negative index
clash = build_matrix(["A", "B", "C"], [("A", "B", (4, 5, 6)), ("A", "C", (0.5, 0.75, 1)), ("C", "B", (0.5, 0.75, 1))])
print("contradictory:", solve(clash).lambda_)
