"""Several experts, one matrix: geometric-mean aggregation and crisp import."""
import numpy as np

from fuzzyprio import LinguisticScale, SpreadPolicy, aggregate_experts, build_matrix, import_crisp, solve

scale = LinguisticScale.default()
ids = ["cost", "quality", "speed"]
panel = [
    {"cq": "low", "cs": "medium", "qs": "very low"},
    {"cq": "very low", "cs": "medium", "qs": "low"},
    {"cq": "medium", "cs": "high", "qs": "low"},
]
matrices = [
    build_matrix(ids, [("cost", "quality", scale[p["cq"]]), ("cost", "speed", scale[p["cs"]]),
                       ("quality", "speed", scale[p["qs"]])])
    for p in panel
]
group = aggregate_experts(matrices)
print("aggregated cost/quality:", tuple(round(x, 4) for x in group.get_by_id("cost", "quality")))

for k, mat in enumerate(matrices):
    print(f"expert {k}:", np.round(solve(mat).weights, 4))
res = solve(group)
print("panel   :", np.round(res.weights, 4), "lambda", round(res.lambda_, 4))

# crisp ratios are widened into bands; the lower end never drops below the floor
policy = SpreadPolicy(spread=1.0, floor=1 / 9)
crisp = import_crisp(ids, [("cost", "quality", 3), ("cost", "speed", 5), ("quality", "speed", 1.05)], policy)
print("widened quality/speed:", tuple(crisp.get_by_id("quality", "speed")))
print("crisp-import weights:", np.round(solve(crisp).weights, 4))
