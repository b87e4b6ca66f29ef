"""Linear invariant synthesis, proofs of dependent relations and facet analysis."""
