"""A kernel for finitary game-semantic logic: arenas, plays, strategies,
a term calculus with cut-elimination, a PCF evaluator, and forest Hopf
operations."""

__version__ = "0.1.0"
