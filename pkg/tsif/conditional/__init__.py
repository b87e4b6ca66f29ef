"""Gap and loss automata, and the automata of atomic relations."""
