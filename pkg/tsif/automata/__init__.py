"""Finite automata, weighted digraphs, register automata and seed transducers."""
