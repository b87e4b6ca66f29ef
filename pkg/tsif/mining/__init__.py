"""Mining of non-linear invariants: datasets, hulls, hypotheses, proofs and dominance."""
