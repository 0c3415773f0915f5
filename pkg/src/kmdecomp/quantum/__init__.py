"""Module-level realization of U_v(g) at rank <= 2: modules, Theta, canonical bases."""
