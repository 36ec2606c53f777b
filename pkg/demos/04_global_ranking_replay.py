"""Compose published local weights along the criteria tree into a global ranking."""
from fuzzyprio import global_weights, load_dataset, rank

data = load_dataset("paper_localweights")
tree = data.hierarchy
labels = {n.id: n.label for n in tree.walk()}

for parent in tree.parents():
    total = sum(data.local_weights[c] for c in parent.child_ids)
    print(f"{parent.id:>3}: sibling sum {total:.6f}")  # published groups do not sum to one

g = global_weights(data.local_weights, tree)
ranking = rank(g, tree)
for leaf in ranking.order():
    e = ranking.by_id()[leaf]
    print(f"{e.rank:>2}  {leaf:<4} {e.global_:.6f}  {labels[leaf]}")

# renormalizing changes the values but, being a common scale factor, not the order
g2 = global_weights(data.local_weights, tree, renormalize=True)
print("renormalized order unchanged:", rank(g2, tree).order() == ranking.order())
