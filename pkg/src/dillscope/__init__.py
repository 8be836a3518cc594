"""Edit-distance pseudo-metrics and the dynamics of dill maps on infinite words."""
