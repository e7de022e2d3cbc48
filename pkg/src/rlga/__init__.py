"""Wind-farm layout optimisation with a Jensen wake model, a binary GA and a
Q-learning agent that picks the GA operators each generation."""

__version__ = "0.1.0"
